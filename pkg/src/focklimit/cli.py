"""Command-line front end: ``focklimit <subcommand> [--config ...]``.

Exit status is 0 when every check passes, 1 when a suite or convergence
criterion fails and 2 on configuration or usage errors.  A ``manifest.json``
(config echo, library versions, timings, outcome) is written on every exit.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
from importlib import metadata
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy

from .assembly import QEDModel
from .config import ConfigError, ModelConfig, load_config
from .kernels import gamma_quadrature, lambda_discrete, lambda_quadrature
from .lab import (
    ConvergenceTable,
    bound_suite,
    convergence_sweep,
    evolution_sweep,
    identity_suite,
)

SUBCOMMANDS = ("kernel", "identities", "bounds", "sweep", "evolve", "spectrum")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

SWEEP_JITTER = 0.05
SWEEP_FINAL_RATIO = 0.05
EVOLVE_FINAL_RATIO = 0.1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep control so the manifest can still be written
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="focklimit", description="Scaling-limit lab for a cutoff QED model.")
    parser.add_argument("command", choices=SUBCOMMANDS, help="experiment to run")
    parser.add_argument("--config", type=Path, default=None, help="JSON config (defaults: desk model D1)")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="table format (sweep/evolve/spectrum/kernel)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (unsigned 64-bit)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (FOCKLIMIT_THREADS overrides)")
    return parser


def _versions() -> dict:
    try:
        own = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        own = "unknown"
    return {"focklimit": own, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__}


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, allow_nan=True) + "\n")


def _write_table(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    """CSV with '.' decimals and round-trip (repr) float formatting."""
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _emit(out: Path, stem: str, fmt: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    if fmt == "csv":
        path = out / f"{stem}.csv"
        _write_table(path, header, rows)
    else:
        path = out / f"{stem}.json"
        _write_json(path, [dict(zip(header, (float(v) if isinstance(v, np.floating) else v for v in row)))
                           for row in rows])
    return path


def _complex(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


# ---------------------------------------------------------------------------
# subcommands: each returns (exit status, summary dict, written files)
# ---------------------------------------------------------------------------


def run_kernel(model: QEDModel, out: Path, fmt: str) -> tuple[int, dict, list[Path]]:
    sg = model.spatial_grid
    zs = [sg.nodes[a] - sg.nodes[b] for a in range(len(sg)) for b in range(len(sg))]
    rows = []
    for z in zs:
        km = lambda_discrete(z, model.photon_grid, model.samples.chi_rad)
        for j in range(3):
            for l in range(3):
                v = km.entries[j, l]
                rows.append([*map(float, z), km.provenance, j + 1, l + 1, float(v.real), float(v.imag)])
    summary: dict = {"gamma_discrete": model.gamma.tolist()}
    profile = model.rad_profile
    if profile.integrable:
        quad = model.config.quad_spec()
        for z in zs:
            km = lambda_quadrature(z, profile, quad)
            for j in range(3):
                for l in range(3):
                    v = km.entries[j, l]
                    rows.append([*map(float, z), km.provenance, j + 1, l + 1, float(v.real), float(v.imag)])
        summary["gamma_quadrature"] = gamma_quadrature(profile, quad).tolist()
    else:
        summary["quadrature"] = f"skipped: {profile.kind!r} cutoff is not integrable"
    header = ["z1", "z2", "z3", "provenance", "j", "l", "re", "im"]
    return EXIT_OK, summary, [_emit(out, "kernel", fmt, header, rows)]


def _suite(report, out: Path, stem: str) -> tuple[int, dict, list[Path]]:
    path = out / f"{stem}.json"
    _write_json(path, report.to_dict())
    failed = [c.name for c in report.checks if not c.passed]
    return (EXIT_OK if report.passed else EXIT_FAIL), {"passed": report.passed, "failed": failed}, [path]


def run_identities(model: QEDModel, out: Path, fmt: str):
    return _suite(identity_suite(model), out, "identities")


def run_bounds(model: QEDModel, out: Path, fmt: str):
    return _suite(bound_suite(model), out, "bounds")


def _table_rows(table: ConvergenceTable) -> list[list]:
    return [[r.lam, r.vector_id, r.error, r.residual, r.seconds] for r in table.rows]


TABLE_HEADER = ["lambda", "vector_id", "error", "residual", "seconds"]


def run_sweep(model: QEDModel, out: Path, fmt: str):
    table = convergence_sweep(model)
    ok = table.decrease_ok(SWEEP_JITTER, SWEEP_FINAL_RATIO)
    summary = {"decrease_criterion": ok, "rate_diagnostic": {v: table.rate(v) for v in table.vector_ids()},
               "solver_failures": table.failures}
    status = EXIT_OK if all(ok.values()) and not table.failures else EXIT_FAIL
    return status, summary, [_emit(out, "sweep", fmt, TABLE_HEADER, _table_rows(table))]


def run_evolve(model: QEDModel, out: Path, fmt: str):
    table = evolution_sweep(model)
    final_ok, monotone = {}, {}
    for vid in table.vector_ids():
        _, err = table.series(vid)
        final_ok[vid] = bool(err[-1] <= EVOLVE_FINAL_RATIO * err[0])
        monotone[vid] = bool(all(b <= a for a, b in zip(err, err[1:])))
    summary = {"final_ratio_criterion": final_ok, "monotone": monotone,
               "rate_diagnostic": {v: table.rate(v) for v in table.vector_ids()}}
    status = EXIT_OK if all(final_ok.values()) else EXIT_FAIL
    return status, summary, [_emit(out, "evolve", fmt, TABLE_HEADER, _table_rows(table))]


def run_spectrum(model: QEDModel, out: Path, fmt: str):
    rows = []
    for lam in model.config.lambdas:
        evals = np.linalg.eigvalsh(model.H_scaled(lam).toarray())
        rows.append(["H_scaled", float(lam), float(evals[0])])
    rows.append(["H_eff", float("inf"), float(np.linalg.eigvalsh(model.H_eff().toarray())[0])])
    summary = {"lowest": {f"{r[0]}@{r[1]}": r[2] for r in rows}}
    return EXIT_OK, summary, [_emit(out, "spectrum", fmt, ["operator", "lambda", "lowest_eigenvalue"], rows)]


RUNNERS = {
    "kernel": (run_kernel, "json"),
    "identities": (run_identities, "json"),
    "bounds": (run_bounds, "json"),
    "sweep": (run_sweep, "csv"),
    "evolve": (run_evolve, "csv"),
    "spectrum": (run_spectrum, "csv"),
}


def _guess_out(argv: Sequence[str]) -> Path:
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            return Path(argv[i + 1])
        if tok.startswith("--out="):
            return Path(tok.split("=", 1)[1])
    return Path(ModelConfig.out)


def _finish(out: Path, manifest: dict, status: int) -> int:
    manifest["exit_status"] = status
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "manifest.json", manifest)
    except OSError as exc:
        print(f"focklimit: cannot write manifest: {exc}", file=sys.stderr)
    return status


def run_cli(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    t_start = time.perf_counter()
    manifest: dict = {"argv": argv, "versions": _versions(), "timings": {}}
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        manifest["error"] = str(exc)
        return _finish(_guess_out(argv), manifest, EXIT_CONFIG)

    manifest["command"] = args.command
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        if args.out is not None:
            cfg.out = str(args.out)
        cfg.validate()
    except ConfigError as exc:
        print(f"focklimit: configuration error: {exc}", file=sys.stderr)
        manifest["error"] = f"configuration error: {exc}"
        return _finish(args.out or _guess_out(argv), manifest, EXIT_CONFIG)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest["config"] = cfg.to_dict()

    t0 = time.perf_counter()
    model = QEDModel(cfg)
    manifest["timings"]["build"] = time.perf_counter() - t0
    manifest["dimension"] = {"fermion": model.basis.fermion.dim, "boson": model.basis.boson.dim,
                             "total": model.basis.dim}

    runner, default_fmt = RUNNERS[args.command]
    t0 = time.perf_counter()
    status, summary, files = runner(model, out, args.format or default_fmt)
    manifest["timings"]["run"] = time.perf_counter() - t0
    manifest["timings"]["total"] = time.perf_counter() - t_start
    manifest["summary"] = summary
    manifest["outputs"] = [p.name for p in files]
    print(f"focklimit {args.command}: {'pass' if status == EXIT_OK else 'FAIL'} -> "
          + ", ".join(str(p) for p in files))
    return _finish(out, manifest, status)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
