"""Coulomb-gauge radiation field: polarizations, ``A^j(x)``, ``Pi^j(x)`` and ``H_rad``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fock import BosonBasis, SparseOperator, second_quantize, smeared_ladder
from .grids import CutoffSamples, MomentumGrid, SpatialGrid, discrete_norm

__all__ = [
    "polarization_pair",
    "RadiationFieldSet",
    "RadiationBounds",
    "radiation_bound_constants",
    "photon_mode",
]

TWO_PI_CUBED = (2.0 * math.pi) ** 3


def photon_mode(node: int, polarization: int) -> int:
    """Mode index of polarization ``r`` (0 or 1) at photon node ``node``."""
    return 2 * node + polarization


def polarization_pair(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two real orthonormal vectors orthogonal to ``k``.

    The first is the coordinate axis least aligned with ``k`` with its ``k``
    component removed; the second is ``k_hat x eps_1``.
    """
    k = np.asarray(k, dtype=float)
    norm = float(np.linalg.norm(k))
    if norm == 0.0:
        raise ValueError("polarization vectors are undefined at k = 0")
    khat = k / norm
    axis = np.eye(3)[int(np.argmin(np.abs(khat)))]
    eps1 = axis - (axis @ khat) * khat
    eps1 /= np.linalg.norm(eps1)
    eps2 = np.cross(khat, eps1)
    eps2 /= np.linalg.norm(eps2)
    return eps1, eps2


@dataclass(frozen=True)
class RadiationBounds:
    """``M[l - 1, j, r] = ||chi_rad eps^j_r / omega^(l/2)|| / sqrt(2 (2 pi)^3)`` for ``l = 1..4``."""

    M: np.ndarray

    def A_bound(self, j: int, sqrt_energy: float, norm: float) -> float:
        """Right-hand side of the relative bound of ``A^j(x)``."""
        return float(sum(2.0 * self.M[1, j, r] * sqrt_energy + self.M[0, j, r] * norm for r in range(2)))

    def Pi_bound(self, j: int, sqrt_energy: float, norm: float) -> float:
        """Right-hand side of the relative bound of ``Pi^j(x)``; unlike ``A_bound`` it carries no factor 2."""
        return float(sum(self.M[3, j, r] * sqrt_energy + self.M[2, j, r] * norm for r in range(2)))


class RadiationFieldSet:
    """Photon form factors and field operators on a truncated boson Fock space.

    Photon modes are ordered node-major with polarizations ``r = 1, 2``.
    """

    def __init__(self, grid: MomentumGrid, samples: CutoffSamples, spatial: SpatialGrid,
                 n_max: int) -> None:
        if np.any(grid.norms == 0.0):
            raise ValueError("photon grid must exclude k = 0")
        self.grid = grid
        self.samples = samples
        self.spatial = spatial
        self.basis = BosonBasis(2 * len(grid), n_max)
        self.omega = grid.norms
        pols = [polarization_pair(k) for k in grid.nodes]
        # eps[i, r, j]
        self.eps = np.array([[e1, e2] for e1, e2 in pols])
        # h[i, r, j] = chi eps^j_r / sqrt(2 (2 pi)^3 omega)
        self.h = (samples.chi_rad / np.sqrt(2.0 * TWO_PI_CUBED * self.omega))[:, None, None] * self.eps

    def _phase(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-1j * (self.grid.nodes @ np.asarray(x, dtype=float)))

    def a(self, r: int, f: np.ndarray, kind: str = "annihilate") -> SparseOperator:
        """Smeared ``a_r(f)`` from samples ``f`` on the photon grid."""
        modes = [photon_mode(i, r) for i in range(len(self.grid))]
        return smeared_ladder(self.basis, kind, np.sqrt(self.grid.weights) * f, modes)

    def A(self, x: np.ndarray) -> list[SparseOperator]:
        """``A^j(x) = sum_r a_r(h^j_{r,x}) + a_r^dagger(h^j_{r,x})``."""
        phase = self._phase(x)
        out = []
        for j in range(3):
            op = None
            for r in range(2):
                ann = self.a(r, self.h[:, r, j] * phase)
                term = ann + ann.dag()
                op = term if op is None else op + term
            out.append(op)
        return out

    def Pi(self, x: np.ndarray) -> list[SparseOperator]:
        """``Pi^j(x) = i sum_r (a_r^dagger(h^j_{r,x}/omega) - a_r(h^j_{r,x}/omega))``."""
        phase = self._phase(x)
        out = []
        for j in range(3):
            op = None
            for r in range(2):
                ann = self.a(r, self.h[:, r, j] * phase / self.omega)
                term = 1j * (ann.dag() - ann)
                op = term if op is None else op + term
            out.append(op)
        return out

    @cached_property
    def A_at_nodes(self) -> list[list[SparseOperator]]:
        return [self.A(x) for x in self.spatial.nodes]

    @cached_property
    def Pi_at_nodes(self) -> list[list[SparseOperator]]:
        return [self.Pi(x) for x in self.spatial.nodes]

    @cached_property
    def H_rad(self) -> SparseOperator:
        return second_quantize(self.basis, np.repeat(self.omega, 2))

    def bounds(self) -> RadiationBounds:
        return radiation_bound_constants(self)


def radiation_bound_constants(fields: RadiationFieldSet) -> RadiationBounds:
    w = fields.grid.weights
    chi = fields.samples.chi_rad
    M = np.empty((4, 3, 2))
    for l in range(1, 5):
        for j in range(3):
            for r in range(2):
                vals = chi * fields.eps[:, r, j] / fields.omega ** (l / 2.0)
                M[l - 1, j, r] = discrete_norm(vals, w) / math.sqrt(2.0 * TWO_PI_CUBED)
    return RadiationBounds(M=M)
