"""Momentum and position quadrature grids, and sampled cutoff functions.

Every integral over momentum or position space in the model is replaced by a
finite weighted sum over the nodes of one of these grids.  A function ``f`` on
a grid is represented by its samples ``f(k_i)``; the coefficient it contributes
to a smeared ladder operator at mode ``i`` is ``sqrt(w_i) * f(k_i)``, so that
``sum_i w_i conj(f_i) g_i`` plays the role of the L2 inner product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

__all__ = [
    "GridError",
    "MomentumGrid",
    "SpatialGrid",
    "CutoffProfile",
    "CutoffSamples",
    "build_momentum_grid",
    "build_spatial_grid",
    "parse_profile",
    "sample_cutoffs",
    "discrete_norm",
]


class GridError(ValueError):
    """Raised for malformed grid or cutoff specifications."""


def _as_nodes(nodes: Any) -> np.ndarray:
    arr = np.asarray(nodes, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise GridError(f"nodes must be a list of 3-vectors, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise GridError("grid has no nodes")
    if not np.all(np.isfinite(arr)):
        raise GridError("grid nodes must be finite")
    return arr


def _as_weights(weights: Any, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float).reshape(-1)
    if w.shape[0] != n:
        raise GridError(f"expected {n} weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise GridError("all quadrature weights must be positive and finite")
    return w


def _box_lattice(box: Mapping[str, Any]) -> tuple[np.ndarray, np.ndarray]:
    shape = box.get("shape")
    if shape is None or len(shape) != 3 or any(int(s) < 1 for s in shape):
        raise GridError("box lattice needs a 'shape' of three positive integers")
    spacing = float(box.get("spacing", 1.0))
    if not spacing > 0:
        raise GridError("box spacing must be positive")
    # integer or half-integer offsets times h negate exactly in floating point
    axes = [(np.arange(int(s)) - (int(s) - 1) / 2.0) * spacing for s in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
    if box.get("exclude_origin", False):
        nodes = nodes[np.any(nodes != 0.0, axis=1)]
    weights = np.full(nodes.shape[0], spacing**3)
    return nodes, weights


def _nodes_and_weights(spec: Mapping[str, Any]) -> tuple[np.ndarray, np.ndarray]:
    if "box" in spec:
        nodes, weights = _box_lattice(spec["box"])
        return _as_nodes(nodes), weights
    if "nodes" not in spec:
        raise GridError("grid spec needs either 'nodes' (+ 'weights') or 'box'")
    nodes = _as_nodes(spec["nodes"])
    weights = spec.get("weights")
    if weights is None:
        weights = np.ones(nodes.shape[0])
    return nodes, _as_weights(weights, nodes.shape[0])


def _negation_map(nodes: np.ndarray) -> np.ndarray:
    index = {tuple(row): i for i, row in enumerate(nodes)}
    partner = np.empty(nodes.shape[0], dtype=int)
    for i, row in enumerate(nodes):
        j = index.get(tuple(-row + 0.0))  # + 0.0 folds -0.0 into 0.0
        if j is None:
            raise GridError(f"grid is not closed under k -> -k: no partner for node {row.tolist()}")
        partner[i] = j
    return partner


@dataclass(frozen=True)
class MomentumGrid:
    """Momentum quadrature nodes closed under ``k -> -k``.

    ``partner[i]`` is the index of the node ``-k_i``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    partner: np.ndarray
    photon: bool = False

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.nodes, axis=1)

    @property
    def volume(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SpatialGrid:
    """Position quadrature nodes shared by every ``dx`` integral."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def volume(self) -> float:
        return float(self.weights.sum())

    @property
    def spacing(self) -> float:
        """Minimum distance between distinct nodes.

        A single-node grid has no pair distance; the edge of a cube with the
        node's volume is used instead.
        """
        if len(self) == 1:
            return float(self.weights[0]) ** (1.0 / 3.0)
        diff = self.nodes[:, None, :] - self.nodes[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        return float(dist[~np.eye(len(self), dtype=bool)].min())


def build_momentum_grid(spec: Mapping[str, Any], photon: bool = False) -> MomentumGrid:
    """Build a momentum grid from an explicit node list or a box lattice.

    ``spec`` is either ``{"nodes": [...], "weights": [...]}`` or
    ``{"box": {"shape": [nx, ny, nz], "spacing": h, "exclude_origin": bool}}``.
    Photon grids must not contain ``k = 0`` since ``omega(k) = |k|`` is divided by.
    """
    nodes, weights = _nodes_and_weights(spec)
    if photon and np.any(np.all(nodes == 0.0, axis=1)):
        raise GridError("photon grid contains k = 0, where omega(k) = |k| vanishes")
    partner = _negation_map(nodes)
    for arr in (nodes, weights, partner):
        arr.setflags(write=False)
    return MomentumGrid(nodes=nodes, weights=weights, partner=partner, photon=photon)


def build_spatial_grid(spec: Mapping[str, Any]) -> SpatialGrid:
    nodes, weights = _nodes_and_weights(spec)
    if len({tuple(row) for row in nodes}) != nodes.shape[0]:
        raise GridError("spatial grid contains duplicate nodes")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SpatialGrid(nodes=nodes, weights=weights)


# ---------------------------------------------------------------------------
# cutoff profiles
# ---------------------------------------------------------------------------

_PROFILE_KINDS = ("constant", "sharp", "gaussian")


@dataclass(frozen=True)
class CutoffProfile:
    """A real, even, radial cutoff function.

    ``constant`` is 1 everywhere, ``sharp`` is the indicator of the ball
    ``|k| <= radius``, ``gaussian`` is ``exp(-|k|^2 / width^2)``.
    """

    kind: str = "constant"
    radius: float = 1.0
    width: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _PROFILE_KINDS:
            raise GridError(f"unknown cutoff profile {self.kind!r}; expected one of {_PROFILE_KINDS}")
        if self.kind == "sharp" and not self.radius > 0:
            raise GridError("sharp cutoff radius must be positive")
        if self.kind == "gaussian" and not self.width > 0:
            raise GridError("gaussian cutoff width must be positive")

    def radial(self, r: np.ndarray | float) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.kind == "constant":
            return np.ones_like(r)
        if self.kind == "sharp":
            return (r <= self.radius).astype(float)
        return np.exp(-(r**2) / self.width**2)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.radial(np.linalg.norm(np.atleast_2d(points), axis=1))

    @property
    def integrable(self) -> bool:
        return self.kind != "constant"

    def support_radius(self, eps: float = 1e-17) -> float:
        """Radius beyond which ``|chi|^2`` is below ``eps`` (infinite for constant)."""
        if self.kind == "constant":
            return math.inf
        if self.kind == "sharp":
            return self.radius
        return self.width * math.sqrt(-math.log(eps) / 2.0)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.kind == "sharp":
            out["radius"] = self.radius
        elif self.kind == "gaussian":
            out["width"] = self.width
        return out


def parse_profile(spec: Mapping[str, Any] | str | CutoffProfile) -> CutoffProfile:
    if isinstance(spec, CutoffProfile):
        return spec
    if isinstance(spec, str):
        return CutoffProfile(kind=spec)
    unknown = set(spec) - {"kind", "radius", "width"}
    if unknown:
        raise GridError(f"unknown cutoff profile keys: {sorted(unknown)}")
    return CutoffProfile(
        kind=spec.get("kind", "constant"),
        radius=float(spec.get("radius", 1.0)),
        width=float(spec.get("width", 1.0)),
    )


def discrete_norm(values: np.ndarray, weights: np.ndarray, p: int = 2) -> float:
    """Weighted discrete ``L^p`` norm ``(sum_i w_i |f_i|^p)^(1/p)``."""
    values = np.asarray(values)
    return float(np.sum(weights * np.abs(values) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class CutoffSamples:
    chi_dirac: np.ndarray
    chi_rad: np.ndarray
    chi_spa: np.ndarray
    norms: dict[str, float] = field(default_factory=dict)

    def conjugate_symmetry_defect(self, photon_grid: MomentumGrid) -> float:
        """``max_i |chi_rad(-k_i) - conj(chi_rad(k_i))|``; zero for valid samples."""
        return float(np.max(np.abs(self.chi_rad[photon_grid.partner] - np.conj(self.chi_rad))))


def sample_cutoffs(
    profiles: Mapping[str, Any],
    mg_fermion: MomentumGrid,
    mg_photon: MomentumGrid,
    sg: SpatialGrid,
) -> CutoffSamples:
    """Sample the three cutoff profiles (keys ``dirac``, ``rad``, ``spa``) on their grids.

    The stored norms are the discrete counterparts of the integrability
    conditions on the cutoffs.
    """
    dirac = parse_profile(profiles.get("dirac", "constant"))
    rad = parse_profile(profiles.get("rad", "constant"))
    spa = parse_profile(profiles.get("spa", "constant"))

    chi_dirac = dirac(mg_fermion.nodes).astype(complex)
    chi_rad = rad(mg_photon.nodes).astype(complex)
    chi_spa = spa(sg.nodes)

    omega = mg_photon.norms
    w = mg_photon.weights
    norms = {
        "dirac_l2": discrete_norm(chi_dirac, mg_fermion.weights),
        "rad_l2": discrete_norm(chi_rad, w),
        "rad_over_sqrt_omega_l2": discrete_norm(chi_rad / np.sqrt(omega), w),
        "rad_over_omega_l2": discrete_norm(chi_rad / omega, w),
        "spa_l1": discrete_norm(chi_spa, sg.weights, p=1),
        "spa_l2": discrete_norm(chi_spa, sg.weights),
    }
    samples = CutoffSamples(chi_dirac=chi_dirac, chi_rad=chi_rad, chi_spa=chi_spa, norms=norms)
    if samples.conjugate_symmetry_defect(mg_photon) != 0.0:
        raise GridError("radiation cutoff samples violate chi(-k) = conj(chi(k))")
    return samples
