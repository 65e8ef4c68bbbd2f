"""Numerical experiments on a built model.

Resolvent solves, the dressing transformation, the scaling-limit sweep, time
evolution, and the identity / bound suites.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as spla

from .assembly import QEDModel
from .fock import (
    SparseOperator,
    anticommutator,
    boson_ladder,
    commutator,
    fermion_ladder,
    identity,
    occupation_subspace,
)
from .kernels import lambda_discrete

__all__ = [
    "SolverError",
    "Resolvent",
    "resolvent_apply",
    "dressing_unitary",
    "dressed_split",
    "evolve",
    "SweepRow",
    "ConvergenceTable",
    "convergence_sweep",
    "evolution_sweep",
    "dressed_remainder_sweep",
    "default_test_vectors",
    "fermion_basis_vectors",
    "Check",
    "SuiteReport",
    "identity_suite",
    "bound_suite",
    "thread_count",
]


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (achieved relative residual {residual:.3e})")
        self.residual = residual


def thread_count(requested: int | None = None) -> int:
    """Worker count: ``FOCKLIMIT_THREADS`` overrides ``requested``."""
    env = os.environ.get("FOCKLIMIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, int(requested or 1))


# ---------------------------------------------------------------------------
# resolvent
# ---------------------------------------------------------------------------


def _as_matrix(H):
    return H.matrix if isinstance(H, SparseOperator) else H


class Resolvent:
    """``(H - z)^{-1}`` for Hermitian ``H`` and non-real ``z``.

    Below ``dense_threshold`` the shifted matrix is LU-factorized once;
    above it each apply runs GMRES.
    """

    def __init__(self, H, z: complex, tol: float = 1e-10, dense_threshold: int = 4096) -> None:
        z = complex(z)
        if z.imag == 0.0:
            raise ValueError(f"resolvent needs non-real z, got {z}")
        self.z = z
        self.tol = tol
        mat = _as_matrix(H)
        self.dim = mat.shape[0]
        self.dense = self.dim <= dense_threshold
        if self.dense:
            dense = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)
            self.shifted = dense - z * np.eye(self.dim)
            self._lu = la.lu_factor(self.shifted)
        else:
            self.shifted = (mat - z * _sparse_identity(self.dim)).tocsr()

    def residual(self, r: np.ndarray, psi: np.ndarray) -> float:
        return float(np.linalg.norm(self.shifted @ r - psi) / max(np.linalg.norm(psi), 1e-300))

    def apply(self, psi: np.ndarray) -> tuple[np.ndarray, float]:
        psi = np.asarray(psi, dtype=complex)
        if self.dense:
            r = la.lu_solve(self._lu, psi)
        else:
            r, _ = spla.gmres(self.shifted, psi, rtol=0.1 * self.tol, atol=0.0, restart=200,
                              maxiter=max(50, self.dim // 10))
        res = self.residual(r, psi)
        if res > self.tol:
            if self.dense:
                r = r + la.lu_solve(self._lu, psi - self.shifted @ r)  # one refinement step
                res = self.residual(r, psi)
            if res > self.tol:
                raise SolverError("resolvent solve did not reach tolerance", res)
        return r, res


def _sparse_identity(n: int):
    import scipy.sparse as sp

    return sp.identity(n, dtype=complex, format="csr")


def resolvent_apply(H, z: complex, psi: np.ndarray, tol: float = 1e-10,
                    dense_threshold: int = 4096) -> np.ndarray:
    """Return ``r`` with ``||(H - z) r - psi|| <= tol ||psi||``."""
    r, _ = Resolvent(H, z, tol, dense_threshold).apply(psi)
    return r


# ---------------------------------------------------------------------------
# dressing and evolution
# ---------------------------------------------------------------------------


def _dense(H) -> np.ndarray:
    mat = _as_matrix(H)
    return mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat)


def dressing_unitary(T: SparseOperator, t: float) -> SparseOperator:
    """``U(t) = exp(i t T)`` by scaling-and-squaring Pade."""
    return SparseOperator(T.basis, la.expm(1j * t * _dense(T)))


def dressed_split(model: QEDModel, lam: float, e: float | None = None
                  ) -> tuple[SparseOperator, SparseOperator, np.ndarray]:
    """Dressed decomposition ``U(e/Lambda)^{-1} H(Lambda) U(e/Lambda) = H~_0(Lambda) + K(Lambda)``.

    Returns ``(H~_0, K(Lambda), transformed)`` with ``transformed`` dense.
    """
    if not lam > 0:
        raise ValueError(f"Lambda must be positive, got {lam}")
    e = model.e if e is None else e
    U = la.expm(1j * (e / lam) * _dense(model.hamiltonians.T))
    transformed = U.conj().T @ _dense(model.H_scaled(lam, e)) @ U
    H0 = model.H_free_dressed(lam, e)
    K_lam = SparseOperator(model.basis, transformed - H0.toarray())
    return H0, K_lam, transformed


def evolve(H, t: float, psi: np.ndarray, dense_threshold: int = 4096) -> np.ndarray:
    """``exp(-i t H) psi``; spectral decomposition when small, ``expm_multiply`` otherwise.

    ``psi`` may be a single vector or a matrix whose columns are evolved together.
    """
    psi = np.asarray(psi, dtype=complex)
    if t == 0:
        return psi.copy()
    mat = _as_matrix(H)
    if mat.shape[0] <= dense_threshold:
        evals, evecs = la.eigh(_dense(mat), driver="evr")
        phases = np.exp(-1j * t * evals)
        coeffs = evecs.conj().T @ psi
        return evecs @ (phases[:, None] * coeffs if psi.ndim == 2 else phases * coeffs)
    return spla.expm_multiply(-1j * t * mat.tocsc(), psi)


# ---------------------------------------------------------------------------
# scaling-limit sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    lam: float
    vector_id: str
    error: float
    residual: float
    seconds: float


@dataclass
class ConvergenceTable:
    rows: list[SweepRow] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def vector_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for row in self.rows:
            seen.setdefault(row.vector_id, None)
        return list(seen)

    def series(self, vector_id: str) -> tuple[np.ndarray, np.ndarray]:
        rows = sorted((r for r in self.rows if r.vector_id == vector_id), key=lambda r: r.lam)
        return np.array([r.lam for r in rows]), np.array([r.error for r in rows])

    def decrease_ok(self, jitter: float = 0.05, final_ratio: float = 0.05) -> dict[str, bool]:
        """Per vector: nonincreasing within ``jitter`` and ``error[-1] <= final_ratio * error[0]``."""
        out = {}
        for vid in self.vector_ids():
            _, err = self.series(vid)
            mono = all(b <= (1.0 + jitter) * a for a, b in zip(err, err[1:]))
            out[vid] = bool(mono and err[-1] <= final_ratio * err[0])
        return out

    def rate(self, vector_id: str) -> float:
        """Log-log slope of error against Lambda (diagnostic only)."""
        lam, err = self.series(vector_id)
        mask = err > 0
        if mask.sum() < 2:
            return float("nan")
        return float(np.polyfit(np.log(lam[mask]), np.log(err[mask]), 1)[0])

    def to_records(self) -> list[dict]:
        return [{"lambda": r.lam, "vector_id": r.vector_id, "error": r.error,
                 "residual": r.residual, "seconds": r.seconds} for r in self.rows]


def default_test_vectors(model: QEDModel, seed: int | None = None) -> dict[str, np.ndarray]:
    """Structured and seeded random test vectors on the product space.

    ``vacuum`` is the joint Fock vacuum, ``vac_random`` a random fermion
    vector times the photon vacuum, ``one_photon`` the fermion vacuum with
    one photon in mode 0, and ``random_full`` a random vector on the whole
    product space.
    """
    rng = np.random.default_rng([model.config.seed if seed is None else seed, 7])
    fb, bb = model.basis.fermion, model.basis.boson
    omega = np.zeros(bb.dim, dtype=complex)
    omega[0] = 1.0

    def normalized(v: np.ndarray) -> np.ndarray:
        return v / np.linalg.norm(v)

    def cgauss(n: int) -> np.ndarray:
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    fvac = np.zeros(fb.dim, dtype=complex)
    fvac[0] = 1.0
    one_photon = np.zeros(bb.dim, dtype=complex)
    one_photon[bb.index([1] + [0] * (bb.n_modes - 1))] = 1.0
    return {
        "vacuum": np.kron(fvac, omega),
        "vac_random": np.kron(normalized(cgauss(fb.dim)), omega),
        "one_photon": np.kron(fvac, one_photon),
        "random_full": normalized(cgauss(model.basis.dim)),
    }


def fermion_basis_vectors(model: QEDModel) -> dict[str, np.ndarray]:
    """Every fermion occupation basis state times the photon vacuum, keyed by its bit string."""
    fb, nb = model.basis.fermion, model.basis.boson.dim
    out = {}
    for i, occ in enumerate(fb.occupations()):
        v = np.zeros(fb.dim * nb, dtype=complex)
        v[i * nb] = 1.0
        out["occ_" + "".join(str(int(o)) for o in occ)] = v
    return out


def _vacuum_component(model: QEDModel, psi: np.ndarray) -> np.ndarray:
    """Fermion vector ``phi`` with ``(I x P_Omega) psi = phi x Omega``."""
    return psi.reshape(model.basis.fermion.dim, model.basis.boson.dim)[:, 0].copy()


def _lift_vacuum(model: QEDModel, phi: np.ndarray) -> np.ndarray:
    out = np.zeros((model.basis.fermion.dim, model.basis.boson.dim), dtype=complex)
    out[:, 0] = phi
    return out.reshape(-1)


def _map_rows(fn: Callable[[float], list], lambdas: Sequence[float], threads: int) -> list:
    if threads <= 1 or len(lambdas) <= 1:
        return [fn(lam) for lam in lambdas]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, lambdas))


def convergence_sweep(model: QEDModel, lambdas: Sequence[float] | None = None,
                      z: complex | None = None, vectors: Mapping[str, np.ndarray] | None = None,
                      e: float | None = None, threads: int | None = None) -> ConvergenceTable:
    """Resolvent error ``||(H(Lambda) - z)^{-1} psi - ((H_eff - z)^{-1} x P_Omega) psi||``."""
    cfg = model.config
    lambdas = list(cfg.lambdas if lambdas is None else lambdas)
    z = complex(cfg.z if z is None else z)
    e = model.e if e is None else e
    vectors = default_test_vectors(model) if vectors is None else dict(vectors)
    threads = thread_count(cfg.threads if threads is None else threads)

    eff = Resolvent(model.H_eff(e), z, cfg.tol, cfg.dense_threshold)
    targets = {vid: _lift_vacuum(model, eff.apply(_vacuum_component(model, v))[0])
               for vid, v in vectors.items()}

    def run(lam: float) -> tuple[list[SweepRow], list[str]]:
        rows, failures = [], []
        try:
            solver = Resolvent(model.H_scaled(lam, e), z, cfg.tol, cfg.dense_threshold)
        except Exception as exc:  # a failed factorization aborts this Lambda only
            return rows, [f"lambda={lam}: {exc}"]
        for vid, psi in vectors.items():
            start = time.perf_counter()
            try:
                r, res = solver.apply(psi)
            except SolverError as exc:
                failures.append(f"lambda={lam} vector={vid}: {exc}")
                continue
            rows.append(SweepRow(lam=float(lam), vector_id=vid,
                                 error=float(np.linalg.norm(r - targets[vid])),
                                 residual=res, seconds=time.perf_counter() - start))
        return rows, failures

    table = ConvergenceTable()
    for rows, failures in _map_rows(run, lambdas, threads):
        table.rows.extend(rows)
        table.failures.extend(failures)
    order = {vid: i for i, vid in enumerate(vectors)}
    table.rows.sort(key=lambda r: (order[r.vector_id], r.lam))
    return table


def evolution_sweep(model: QEDModel, lambdas: Sequence[float] | None = None, t: float | None = None,
                    vectors: Mapping[str, np.ndarray] | None = None, e: float | None = None,
                    threads: int | None = None) -> ConvergenceTable:
    """Discrepancy ``||e^{-itH(Lambda)} (I x P) psi - (e^{-itH_eff} x P) psi||`` per Lambda.

    The ``residual`` column holds the norm drift ``| ||out|| - ||psi|| |`` of the evolved vector.
    """
    cfg = model.config
    lambdas = list(cfg.lambdas if lambdas is None else lambdas)
    t = float(cfg.t if t is None else t)
    e = model.e if e is None else e
    vectors = default_test_vectors(model) if vectors is None else dict(vectors)
    threads = thread_count(cfg.threads if threads is None else threads)

    projected = {vid: _lift_vacuum(model, _vacuum_component(model, v)) for vid, v in vectors.items()}
    H_eff = model.H_eff(e)
    targets = {vid: _lift_vacuum(model, evolve(H_eff, t, _vacuum_component(model, v), cfg.dense_threshold))
               for vid, v in vectors.items()}

    ids = list(projected)
    stacked = np.stack([projected[vid] for vid in ids], axis=1)

    def run(lam: float) -> tuple[list[SweepRow], list[str]]:
        start = time.perf_counter()
        evolved = evolve(model.H_scaled(lam, e), t, stacked, cfg.dense_threshold)
        seconds = (time.perf_counter() - start) / len(ids)
        rows = []
        for k, vid in enumerate(ids):
            out = evolved[:, k]
            rows.append(SweepRow(lam=float(lam), vector_id=vid,
                                 error=float(np.linalg.norm(out - targets[vid])),
                                 residual=abs(float(np.linalg.norm(out)) - float(np.linalg.norm(stacked[:, k]))),
                                 seconds=seconds))
        return rows, []

    table = ConvergenceTable()
    for rows, _ in _map_rows(run, lambdas, threads):
        table.rows.extend(rows)
    order = {vid: i for i, vid in enumerate(vectors)}
    table.rows.sort(key=lambda r: (order[r.vector_id], r.lam))
    return table


def dressed_remainder_sweep(model: QEDModel, lambdas: Sequence[float] | None = None,
                            e: float | None = None) -> list[dict]:
    """Per Lambda: ``||K(Lambda) - K||_op``, the round-trip defect and the Hermiticity defect of ``K(Lambda)``."""
    lambdas = list(model.config.lambdas if lambdas is None else lambdas)
    K = model.K(e).toarray()
    out = []
    for lam in lambdas:
        H0, K_lam, transformed = dressed_split(model, lam, e)
        Kd = K_lam.toarray()
        out.append({
            "lambda": float(lam),
            "K_distance": float(np.linalg.norm(Kd - K, 2)),
            "round_trip": float(np.max(np.abs(H0.toarray() + Kd - transformed))),
            "hermiticity": float(np.max(np.abs(Kd - Kd.conj().T))),
        })
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    kind: str = "equality"
    restriction: str = "full space"
    statement: str = ""


@dataclass
class SuiteReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add_equality(self, name: str, deviation: float, tolerance: float, **kw) -> Check:
        chk = Check(name=name, deviation=float(deviation), tolerance=float(tolerance),
                    passed=bool(deviation <= tolerance), kind="equality", **kw)
        self.checks.append(chk)
        return chk

    def add_inequality(self, name: str, lhs: Iterable[float], rhs: Iterable[float], rel: float = 1e-12,
                       **kw) -> Check:
        """Record ``lhs <= rhs`` over samples; deviation is ``max(lhs - rhs)``."""
        lhs = np.asarray(list(lhs), dtype=float)
        rhs = np.asarray(list(rhs), dtype=float)
        slack = rel * np.maximum(np.abs(rhs), 1.0)
        worst = float(np.max(lhs - rhs)) if lhs.size else 0.0
        chk = Check(name=name, deviation=worst, tolerance=float(np.max(slack)) if lhs.size else rel,
                    passed=bool(np.all(lhs <= rhs + slack)), kind="inequality", **kw)
        self.checks.append(chk)
        return chk

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}


def _max_abs(m) -> float:
    if isinstance(m, SparseOperator):
        return m.max_abs()
    arr = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def _restricted(op: SparseOperator, mask: np.ndarray) -> float:
    """``max |(op P_S)_{ij}|``: the operator applied to states in the subspace ``S``."""
    if not mask.any():
        return 0.0
    return _max_abs(op.matrix[:, np.flatnonzero(mask)])


def _cgauss(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def identity_suite(model: QEDModel) -> SuiteReport:
    """Operator identities with their truncation restrictions."""
    cfg = model.config
    rep = SuiteReport("identities")
    fb, bb = model.basis.fermion, model.basis.boson
    n_max = bb.n_max
    rng = cfg.rng(101)

    # CAR
    ann = [fermion_ladder(fb, i) for i in range(fb.n_modes)]
    cre = [fermion_ladder(fb, i, "create") for i in range(fb.n_modes)]
    eye_f = identity(fb)
    dev = 0.0
    for i in range(fb.n_modes):
        for j in range(fb.n_modes):
            dev = max(dev, anticommutator(ann[i], ann[j]).max_abs(),
                      (anticommutator(ann[i], cre[j]) - (i == j) * eye_f).max_abs())
    rep.add_equality("car", dev, 1e-14, statement="{c_i, c_j} = 0, {c_i, c_j^dag} = delta_ij")
    rep.add_equality("fermion_adjoint", max((cre[i] - ann[i].dag()).max_abs() for i in range(fb.n_modes)),
                     0.0, statement="creator equals adjoint of annihilator")

    # truncated CCR
    a = [boson_ladder(bb, i) for i in range(bb.n_modes)]
    ad = [boson_ladder(bb, i, "create") for i in range(bb.n_modes)]
    eye_b = identity(bb)
    low1 = occupation_subspace(bb, n_max - 1)
    dev_low, dev_aa = 0.0, 0.0
    for i in range(bb.n_modes):
        for j in range(bb.n_modes):
            dev_low = max(dev_low, _restricted(commutator(a[i], ad[j]) - (i == j) * eye_b, low1))
            dev_aa = max(dev_aa, commutator(a[i], a[j]).max_abs(), commutator(ad[i], ad[j]).max_abs())
    rep.add_equality("ccr_truncated", dev_low, 1e-14, restriction=f"occupation <= {n_max - 1}",
                     statement="[a_i, a_j^dag] = delta_ij")
    rep.add_equality("ccr_aa", dev_aa, 1e-14, statement="[a_i, a_j] = 0")
    rep.add_equality("boson_adjoint", max((ad[i] - a[i].dag()).max_abs() for i in range(bb.n_modes)),
                     0.0, statement="creator equals adjoint of annihilator")

    # dGamma commutators, fermions
    dirac = model.dirac
    H_D = dirac.H_dirac
    E = dirac.spinors.energy
    dev_b, dev_d = 0.0, 0.0
    for s in range(2):
        f = _cgauss(rng, len(model.fermion_grid))
        dev_b = max(dev_b,
                    (commutator(H_D, dirac.b(s, f)) + dirac.b(s, E * f)).max_abs(),
                    (commutator(H_D, dirac.b(s, f, "create")) - dirac.b(s, E * f, "create")).max_abs())
        dev_d = max(dev_d,
                    (commutator(H_D, dirac.d(s, f)) + dirac.d(s, E * f)).max_abs(),
                    (commutator(H_D, dirac.d(s, f, "create")) - dirac.d(s, E * f, "create")).max_abs())
    rep.add_equality("dgamma_b", dev_b, 1e-12, statement="[H_D, b_s(f)] = -b_s(E f), [H_D, b_s^dag(f)] = b_s^dag(E f)")
    rep.add_equality("dgamma_d", dev_d, 1e-12, statement="[H_D, d_s(g)] = -d_s(E g), [H_D, d_s^dag(g)] = d_s^dag(E g)")

    # dGamma commutators, photons (exact on the whole truncated space)
    rad = model.radiation
    H_rad = rad.H_rad
    dev_a = 0.0
    for r in range(2):
        f = _cgauss(rng, len(model.photon_grid))
        wf = rad.omega * f
        dev_a = max(dev_a,
                    (commutator(H_rad, rad.a(r, f)) + rad.a(r, wf)).max_abs(),
                    (commutator(H_rad, rad.a(r, f, "create")) - rad.a(r, wf, "create")).max_abs())
    rep.add_equality("dgamma_a", dev_a, 1e-12, statement="[H_rad, a_r(f)] = -a_r(omega f), [H_rad, a_r^dag(f)] = a_r^dag(omega f)")

    # radiation field commutators
    A, Pi = rad.A_at_nodes, rad.Pi_at_nodes
    nodes = model.spatial_grid.nodes
    n_x = len(nodes)
    low2 = occupation_subspace(bb, n_max - 2) if n_max >= 2 else np.zeros(bb.dim, dtype=bool)
    dev_pi_h, dev_pi_pi, dev_a_pi, dev_pair = 0.0, 0.0, 0.0, 0.0
    for a_ in range(n_x):
        for j in range(3):
            dev_pi_h = max(dev_pi_h, _restricted(commutator(Pi[a_][j], H_rad) + 1j * A[a_][j], low1))
    for a_ in range(n_x):
        for b_ in range(n_x):
            lam = model.lam_disc(nodes[a_] - nodes[b_])
            for j in range(3):
                for l in range(3):
                    dev_pi_pi = max(dev_pi_pi, _restricted(commutator(Pi[a_][j], Pi[b_][l]), low2))
                    dev_a_pi = max(dev_a_pi, _restricted(
                        commutator(A[a_][j], Pi[b_][l]) - (1j * lam[j, l]) * eye_b, low1))
                    pairing = (Pi[a_][j] @ A[b_][l]).matrix[0, 0]
                    dev_pair = max(dev_pair, abs(pairing + 0.5j * lam[j, l]))
    rep.add_equality("pi_hrad", dev_pi_h, 1e-11, restriction=f"occupation <= {n_max - 1}",
                     statement="[Pi^j(x), H_rad] = -i A^j(x)")
    rep.add_equality("pi_pi", dev_pi_pi, 1e-11, restriction=f"occupation <= {n_max - 2}",
                     statement="[Pi^j(x), Pi^l(y)] = 0")
    rep.add_equality("a_pi", dev_a_pi, 1e-11, restriction=f"occupation <= {n_max - 1}",
                     statement="[A^j(x), Pi^l(y)] = i lambda^{jl}(x - y)")
    rep.add_equality("vacuum_pairing", dev_pair, 1e-12, restriction="photon vacuum",
                     statement="<Omega, Pi^j(x) A^l(y) Omega> = -(i/2) lambda^{jl}(x - y)")

    # assembled operators
    hs = model.hamiltonians
    mask_full = np.kron(np.ones(fb.dim, dtype=bool), low1)
    rep.add_equality("t_hrad", _restricted(commutator(hs.T, hs.H_rad) + 1j * hs.H_I, mask_full), 1e-11,
                     restriction=f"occupation <= {n_max - 1}", statement="[T, I x H_rad] = -i H'_I")

    P = model.vacuum_projector
    K = model.K()
    lhs = P @ K @ P
    rhs = -(model.e**2 / 4.0) * model.lift_fermion(model.V_eff, photon_vacuum=True)
    rep.add_equality("compression", (lhs - rhs).max_abs(), 1e-11, restriction="photon vacuum",
                     statement="(I x P) K (I x P) = -(e^2/4) V_eff x P")

    herm = {
        "H_I": hs.H_I, "T": hs.T, "H_II": hs.H_II, "H_longti": model.longitudinal[0],
        "V_eff": model.V_eff, "H_eff": model.H_eff(), "K": K, "H_scaled_1": model.H_scaled(1.0),
    }
    for key, op in herm.items():
        rep.add_equality(f"hermitian_{key}", op.hermiticity_defect(), 1e-13, statement="X = X^dag")
    return rep


def bound_suite(model: QEDModel) -> SuiteReport:
    """Every bound inequality evaluated with the model's own discrete constants."""
    cfg = model.config
    rep = SuiteReport("bounds")
    n_states, n_z = cfg.n_random_states, cfg.n_random_z
    dirac, rad = model.dirac, model.radiation
    db, rb = model.dirac_bounds, model.radiation_bounds
    bb = model.basis.boson
    w_f, w_k = model.fermion_grid.weights, model.photon_grid.weights

    def disc(values, weights):
        return float(np.sqrt(np.sum(weights * np.abs(values) ** 2)))

    # ||b_s(f)|| = ||d_s(f)|| = ||f||
    rng = cfg.rng(201)
    dev = 0.0
    for _ in range(5):
        for s in range(2):
            f = _cgauss(rng, len(model.fermion_grid))
            dev = max(dev, abs(dirac.b(s, f).op_norm() - disc(f, w_f)),
                      abs(dirac.d(s, f).op_norm() - disc(f, w_f)))
    rep.add_equality("fermion_ladder_norm", dev, 1e-10, statement="||b_s(f)|| = ||d_s(f)|| = ||f||")

    # ||psi_l(x)|| <= M_D^l
    lhs, rhs = [], []
    for psi in dirac.psi_at_nodes:
        for l in range(4):
            lhs.append(psi[l].op_norm())
            rhs.append(db.M_D[l])
    rep.add_inequality("psi_norm", lhs, rhs, statement="||psi_l(x)|| <= M_D^l")

    # boson states and ||H_rad^{1/2} Psi||
    rng = cfg.rng(202)
    states_b = _cgauss(rng, (n_states, bb.dim))
    sqrt_hrad = np.sqrt(np.real(rad.H_rad.matrix.diagonal()))
    h_half = np.linalg.norm(states_b * sqrt_hrad[None, :], axis=1)
    norms_b = np.linalg.norm(states_b, axis=1)

    lhs_a, rhs_a, lhs_ad, rhs_ad = [], [], [], []
    for r in range(2):
        f = _cgauss(rng, len(model.photon_grid))
        f_sqrt_w = disc(f / np.sqrt(rad.omega), w_k)
        f_norm = disc(f, w_k)
        ann = rad.a(r, f)
        cre = ann.dag()
        for k in range(n_states):
            lhs_a.append(np.linalg.norm(ann @ states_b[k]))
            rhs_a.append(f_sqrt_w * h_half[k])
            lhs_ad.append(np.linalg.norm(cre @ states_b[k]))
            rhs_ad.append(f_sqrt_w * h_half[k] + f_norm * norms_b[k])
    rep.add_inequality("a_relative", lhs_a, rhs_a,
                       statement="||a_r(f) Psi|| <= ||f / sqrt(omega)|| ||H_rad^(1/2) Psi||")
    rep.add_inequality("a_dag_relative", lhs_ad, rhs_ad,
                       statement="||a_r^dag(f) Psi|| <= ||f / sqrt(omega)|| ||H_rad^(1/2) Psi|| + ||f|| ||Psi||")

    lhs_A, rhs_A, lhs_P, rhs_P = [], [], [], []
    for a_ in range(len(model.spatial_grid)):
        for j in range(3):
            A = rad.A_at_nodes[a_][j]
            Pi = rad.Pi_at_nodes[a_][j]
            for k in range(n_states):
                lhs_A.append(np.linalg.norm(A @ states_b[k]))
                rhs_A.append(rb.A_bound(j, h_half[k], norms_b[k]))
                lhs_P.append(np.linalg.norm(Pi @ states_b[k]))
                rhs_P.append(rb.Pi_bound(j, h_half[k], norms_b[k]))
    rep.add_inequality("A_relative", lhs_A, rhs_A,
                       statement="||A^j(x) Psi|| <= sum_r 2 M^2 ||H_rad^(1/2) Psi|| + M^1 ||Psi||")
    rep.add_inequality("Pi_relative", lhs_P, rhs_P,
                       statement="||Pi^j(x) Psi|| <= sum_r M^4 ||H_rad^(1/2) Psi|| + M^3 ||Psi||")

    # ||H'_I Psi|| <= L_I ||(I x H_rad^{1/2}) Psi|| + R_I ||Psi||
    rng = cfg.rng(203)
    states = _cgauss(rng, (n_states, model.basis.dim))
    sqrt_full = np.sqrt(np.real(model.hamiltonians.H_rad.matrix.diagonal()))
    H_I = model.hamiltonians.H_I
    lhs = [np.linalg.norm(H_I @ psi) for psi in states]
    rhs = [db.L_I * np.linalg.norm(sqrt_full * psi) + db.R_I * np.linalg.norm(psi) for psi in states]
    rep.add_inequality("H_I_relative", lhs, rhs,
                       statement="||H'_I Psi|| <= L_I ||(I x H_rad^(1/2)) Psi|| + R_I ||Psi||")

    rep.add_inequality("longitudinal_norm", [model.longitudinal[0].op_norm()], [db.longitudinal_bound()],
                       statement="||H_longti|| <= M_II sum (M^l M^nu)^2")

    lhs, rhs = [], []
    H_D = dirac.H_dirac
    for a_ in range(len(model.spatial_grid)):
        for j in range(3):
            lhs.append(commutator(H_D, dirac.J[a_][j]).op_norm())
            rhs.append(db.c[j])
    rep.add_inequality("H_dirac_J_commutator", lhs, rhs, statement="||[H_D, J^j(x)]|| <= c^j")

    lhs, rhs = [], []
    rho = dirac.rho
    for a_ in range(len(model.spatial_grid)):
        for b_ in range(len(model.spatial_grid)):
            rr = rho[a_] @ rho[b_]
            for j in range(3):
                lhs.append(commutator(rr, dirac.J[a_][j]).op_norm())
                rhs.append(db.d[j])
    rep.add_inequality("rho_rho_J_commutator", lhs, rhs, statement="||[rho(x) rho(y), J^j(x)]|| <= d^j")

    rng = cfg.rng(204)
    scale = max(1.0, float(np.max(np.abs(model.spatial_grid.nodes))))
    zs = rng.uniform(-4.0 * scale, 4.0 * scale, size=(n_z, 3))
    gamma = model.gamma
    lhs, rhs = [], []
    for z in zs:
        lam = np.abs(lambda_discrete(z, model.photon_grid, model.samples.chi_rad).entries)
        lhs.extend(lam.ravel())
        rhs.extend(gamma.ravel())
    rep.add_inequality("kernel_uniform", lhs, rhs, statement="|lambda^{jl}(z)| <= gamma^{jl}")
    return rep
