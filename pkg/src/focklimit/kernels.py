"""The transverse photon kernel ``lambda^{j,l}(z)``, its bound ``gamma`` and ``Delta``.

``lambda^{j,l}(z) = int |chi(k)|^2 / ((2 pi)^3 |k|^2) (delta_jl - k_j k_l / |k|^2) e^{-i k.z} dk``

is evaluated either as a mode sum over the photon grid (the kernel the
discrete Hamiltonian actually produces) or by product quadrature in spherical
coordinates, where the ``|k|^2`` Jacobian cancels the ``1/|k|^2`` singularity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import lebedev_rule

from .grids import CutoffProfile, MomentumGrid

__all__ = [
    "KernelMatrix",
    "QuadSpec",
    "lambda_discrete",
    "lambda_quadrature",
    "gamma_discrete",
    "gamma_quadrature",
    "delta_matrix",
    "transverse_projector",
]

TWO_PI_CUBED = (2.0 * math.pi) ** 3

# Lebedev point count -> algebraic order, as tabulated by scipy
_LEBEDEV_ORDERS = {6: 3, 14: 5, 26: 7, 38: 9, 50: 11, 74: 13, 86: 15, 110: 17, 146: 19,
                   170: 21, 194: 23, 230: 25, 266: 27, 302: 29, 350: 31, 434: 35, 590: 41}


@dataclass(frozen=True)
class KernelMatrix:
    z: np.ndarray
    entries: np.ndarray
    provenance: str
    resolution: str = ""


@dataclass(frozen=True)
class QuadSpec:
    radial: int = 64
    angular: int = 86

    def __post_init__(self) -> None:
        if self.radial < 1:
            raise ValueError("radial resolution must be positive")
        if self.angular not in _LEBEDEV_ORDERS:
            raise ValueError(f"no Lebedev rule with {self.angular} points; choose from {sorted(_LEBEDEV_ORDERS)}")

    def nodes(self, radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        x, wx = np.polynomial.legendre.leggauss(self.radial)
        r = 0.5 * radius * (x + 1.0)
        wr = 0.5 * radius * wx
        dirs, wa = lebedev_rule(_LEBEDEV_ORDERS[self.angular])
        return r, wr, dirs.T, wa


def transverse_projector(k: np.ndarray) -> np.ndarray:
    """``delta_jl - k_j k_l / |k|^2`` for each row of ``k``; shape ``(n, 3, 3)``."""
    k = np.atleast_2d(np.asarray(k, dtype=float))
    khat = k / np.linalg.norm(k, axis=1)[:, None]
    return np.eye(3)[None] - khat[:, :, None] * khat[:, None, :]


def _mode_weights(grid: MomentumGrid, chi_rad: np.ndarray) -> np.ndarray:
    return grid.weights * np.abs(chi_rad) ** 2 / (TWO_PI_CUBED * grid.norms**2)


def lambda_discrete(z: np.ndarray, grid: MomentumGrid, chi_rad: np.ndarray) -> KernelMatrix:
    """Mode-sum kernel ``sum_i w_i |chi_i|^2 / ((2 pi)^3 |k_i|^2) P(k_i) e^{-i k_i.z}``."""
    z = np.asarray(z, dtype=float)
    chi_rad = np.asarray(chi_rad)
    if np.any(np.abs(chi_rad[grid.partner] - np.conj(chi_rad)) > 0):
        warnings.warn("radiation cutoff is not conjugate-symmetric on this grid; kernel may be complex",
                      RuntimeWarning, stacklevel=2)
    coef = _mode_weights(grid, chi_rad) * np.exp(-1j * (grid.nodes @ z))
    entries = np.einsum("i,ijl->jl", coef, transverse_projector(grid.nodes))
    return KernelMatrix(z=z, entries=entries, provenance="discrete-mode-sum",
                        resolution=f"{len(grid)} modes")


def gamma_discrete(grid: MomentumGrid, chi_rad: np.ndarray) -> np.ndarray:
    return np.einsum("i,ijl->jl", _mode_weights(grid, chi_rad), np.abs(transverse_projector(grid.nodes)))


def _check_integrable(profile: CutoffProfile) -> None:
    if not profile.integrable:
        raise ValueError(f"cutoff profile {profile.kind!r} is not integrable over R^3; "
                         "the continuum kernel does not exist")


def lambda_quadrature(z: np.ndarray, profile: CutoffProfile, quad: QuadSpec | None = None) -> KernelMatrix:
    """Continuum kernel by Gauss-Legendre (radial) x Lebedev (angular) quadrature."""
    _check_integrable(profile)
    quad = quad or QuadSpec()
    z = np.asarray(z, dtype=float)
    radius = profile.support_radius()
    r, wr, dirs, wa = quad.nodes(radius)
    proj = transverse_projector(dirs)                         # (n_ang, 3, 3)
    radial_weight = wr * profile.radial(r) ** 2 / TWO_PI_CUBED  # (n_rad,)
    phase = np.exp(-1j * np.outer(r, dirs @ z))                # (n_rad, n_ang)
    coef = radial_weight @ phase * wa                          # (n_ang,)
    entries = np.einsum("a,ajl->jl", coef, proj)
    return KernelMatrix(z=z, entries=entries, provenance="continuum-quadrature",
                        resolution=f"{quad.radial} radial x {quad.angular} angular")


def gamma_quadrature(profile: CutoffProfile, quad: QuadSpec | None = None) -> np.ndarray:
    _check_integrable(profile)
    quad = quad or QuadSpec()
    r, wr, dirs, wa = quad.nodes(profile.support_radius())
    radial = float(np.sum(wr * profile.radial(r) ** 2)) / TWO_PI_CUBED
    return radial * np.einsum("a,ajl->jl", wa, np.abs(transverse_projector(dirs)))


def delta_matrix(z: np.ndarray, kernel: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``Delta(z) = lambda(z) + lambda(-z)`` for a kernel ``z -> 3x3 matrix``."""
    z = np.asarray(z, dtype=float)
    return kernel(z) + kernel(-z + 0.0)
