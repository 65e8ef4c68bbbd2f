"""Assembly of the interaction terms, the scaled Hamiltonian and the effective operators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .config import ModelConfig
from .dirac import DiracBounds, DiracFieldSet, solve_spinor_basis
from .fock import (
    ProductBasis,
    SparseOperator,
    identity,
    tensor_product,
    vacuum_projector,
)
from .grids import (
    CutoffSamples,
    MomentumGrid,
    SpatialGrid,
    build_momentum_grid,
    build_spatial_grid,
    parse_profile,
    sample_cutoffs,
)
from .kernels import delta_matrix, gamma_discrete, lambda_discrete
from .radiation import RadiationBounds, RadiationFieldSet

__all__ = [
    "coulomb_kernel",
    "build_H_I_prime",
    "build_H_II_prime",
    "build_T",
    "build_H_scaled",
    "build_V_eff",
    "build_H_eff",
    "build_K",
    "HamiltonianSet",
    "EffectiveSet",
    "QEDModel",
]

COULOMB_PREFACTOR = 1.0 / (8.0 * math.pi)


def coulomb_kernel(sg: SpatialGrid) -> np.ndarray:
    """``k_C(x_a - x_b) = 1 / max(|x_a - x_b|, h/2)`` with ``h`` the grid spacing."""
    diff = sg.nodes[:, None, :] - sg.nodes[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    return 1.0 / np.maximum(dist, 0.5 * sg.spacing)


def _spatial_sum(sg: SpatialGrid, chi_spa: np.ndarray, terms: Callable[[int], SparseOperator | None]):
    acc = None
    for a in range(len(sg)):
        coef = sg.weights[a] * chi_spa[a]
        if coef == 0:
            continue
        term = terms(a)
        if term is None:
            continue
        term = coef * term
        acc = term if acc is None else acc + term
    return acc


def build_H_I_prime(J: Sequence[Sequence[SparseOperator]], A: Sequence[Sequence[SparseOperator]],
                    sg: SpatialGrid, chi_spa: np.ndarray, basis: ProductBasis) -> SparseOperator:
    """``H'_I = sum_a v_a chi(x_a) sum_j J^j(x_a) x A^j(x_a)``."""
    if len(J) != len(sg) or len(A) != len(sg):
        raise ValueError("need currents and fields at every spatial node")

    def at(a: int) -> SparseOperator:
        out = tensor_product(J[a][0], A[a][0], basis)
        for j in (1, 2):
            out = out + tensor_product(J[a][j], A[a][j], basis)
        return out

    return _spatial_sum(sg, chi_spa, at) or SparseOperator(basis, (basis.dim, basis.dim))


def build_T(J: Sequence[Sequence[SparseOperator]], Pi: Sequence[Sequence[SparseOperator]],
            sg: SpatialGrid, chi_spa: np.ndarray, basis: ProductBasis) -> SparseOperator:
    """Dressing generator ``T = sum_a v_a chi(x_a) sum_j J^j(x_a) x Pi^j(x_a)``."""
    return build_H_I_prime(J, Pi, sg, chi_spa, basis)


def build_H_II_prime(rho: Sequence[SparseOperator], sg: SpatialGrid, chi_spa: np.ndarray,
                     basis: ProductBasis, coulomb: np.ndarray | None = None
                     ) -> tuple[SparseOperator, SparseOperator]:
    """``H_longti = sum_{a,b} v_a v_b chi_a chi_b k_C(x_a - x_b) rho(x_a) rho(x_b)`` and ``H_longti x I``."""
    if coulomb is None:
        coulomb = coulomb_kernel(sg)
    fb = basis.fermion
    h = SparseOperator(fb, (fb.dim, fb.dim))
    cw = sg.weights * chi_spa
    for a in range(len(sg)):
        for b in range(len(sg)):
            coef = cw[a] * cw[b] * coulomb[a, b]
            if coef != 0:
                h = h + coef * (rho[a] @ rho[b])
    return h, tensor_product(h, identity(basis.boson), basis)


def build_V_eff(J: Sequence[Sequence[SparseOperator]], delta: Callable[[np.ndarray], np.ndarray],
                sg: SpatialGrid, chi_spa: np.ndarray) -> SparseOperator:
    """``V_eff = sum_{j,l} sum_{a,b} v_a v_b chi_a chi_b J^j(x_a) Delta^{jl}(x_a - x_b) J^l(x_b)``."""
    fb = J[0][0].basis
    out = SparseOperator(fb, (fb.dim, fb.dim))
    cw = sg.weights * chi_spa
    for a in range(len(sg)):
        for b in range(len(sg)):
            if cw[a] * cw[b] == 0:
                continue
            D = delta(sg.nodes[a] - sg.nodes[b])
            for j in range(3):
                for l in range(3):
                    coef = cw[a] * cw[b] * D[j, l]
                    if coef != 0:
                        out = out + coef * (J[a][j] @ J[b][l])
    return out


def build_H_scaled(H_dirac: SparseOperator, H_rad: SparseOperator, H_I: SparseOperator,
                   H_II: SparseOperator, e: float, lam: float) -> SparseOperator:
    """``H(Lambda) = H_D x I + Lambda^2 I x H_rad + e Lambda H'_I + (e^2 / 8 pi) H'_II``.

    ``H_dirac`` and ``H_rad`` are the operators already lifted to the product space.
    """
    if not lam > 0:
        raise ValueError(f"Lambda must be positive, got {lam}")
    return H_dirac + lam**2 * H_rad + (e * lam) * H_I + (e**2 * COULOMB_PREFACTOR) * H_II


def build_H_eff(e: float, H_dirac: SparseOperator, H_longti: SparseOperator,
                V_eff: SparseOperator) -> SparseOperator:
    """``H_eff = H_Dirac + (e^2 / 8 pi) H_longti - (e^2 / 4) V_eff`` on the fermion space."""
    return H_dirac + (e**2 * COULOMB_PREFACTOR) * H_longti - (e**2 / 4.0) * V_eff


def build_K(T: SparseOperator, H_I: SparseOperator, e: float) -> SparseOperator:
    """``K = -(i e^2 / 2) [T, H'_I]``."""
    return (-0.5j * e**2) * (T @ H_I - H_I @ T)


@dataclass(frozen=True)
class HamiltonianSet:
    H_dirac: SparseOperator     # H_Dirac x I
    H_rad: SparseOperator       # I x H_rad
    H_I: SparseOperator
    H_II: SparseOperator        # H_longti x I
    T: SparseOperator
    e: float

    def scaled(self, lam: float, e: float | None = None) -> SparseOperator:
        return build_H_scaled(self.H_dirac, self.H_rad, self.H_I, self.H_II,
                              self.e if e is None else e, lam)


@dataclass(frozen=True)
class EffectiveSet:
    V_eff: SparseOperator
    H_longti: SparseOperator
    H_eff: SparseOperator
    K: SparseOperator


class QEDModel:
    """Every grid, field and Hamiltonian of one configuration, built on demand."""

    def __init__(self, config: ModelConfig) -> None:
        self.config = config
        self.fermion_grid: MomentumGrid = build_momentum_grid(config.fermion_grid)
        self.photon_grid: MomentumGrid = build_momentum_grid(config.photon_grid, photon=True)
        self.spatial_grid: SpatialGrid = build_spatial_grid(config.spatial_grid)
        self.samples: CutoffSamples = sample_cutoffs(config.cutoffs, self.fermion_grid,
                                                     self.photon_grid, self.spatial_grid)
        self.rad_profile = parse_profile(config.cutoffs.get("rad", "constant"))
        self.spinors = solve_spinor_basis(self.fermion_grid, config.mass)
        self.dirac = DiracFieldSet(self.spinors, self.fermion_grid, self.samples, self.spatial_grid)
        self.radiation = RadiationFieldSet(self.photon_grid, self.samples, self.spatial_grid, config.n_max)
        self.basis = ProductBasis(self.dirac.basis, self.radiation.basis)
        self.coulomb = coulomb_kernel(self.spatial_grid)

    @property
    def e(self) -> float:
        return float(self.config.coupling)

    @property
    def chi_spa(self) -> np.ndarray:
        return self.samples.chi_spa

    def lam_disc(self, z: np.ndarray) -> np.ndarray:
        return lambda_discrete(z, self.photon_grid, self.samples.chi_rad).entries

    def delta(self, z: np.ndarray) -> np.ndarray:
        return delta_matrix(z, self.lam_disc)

    @cached_property
    def gamma(self) -> np.ndarray:
        return gamma_discrete(self.photon_grid, self.samples.chi_rad)

    @cached_property
    def hamiltonians(self) -> HamiltonianSet:
        J = self.dirac.J
        H_I = build_H_I_prime(J, self.radiation.A_at_nodes, self.spatial_grid, self.chi_spa, self.basis)
        T = build_T(J, self.radiation.Pi_at_nodes, self.spatial_grid, self.chi_spa, self.basis)
        return HamiltonianSet(
            H_dirac=tensor_product(self.dirac.H_dirac, identity(self.basis.boson), self.basis),
            H_rad=tensor_product(identity(self.basis.fermion), self.radiation.H_rad, self.basis),
            H_I=H_I,
            H_II=self.longitudinal[1],
            T=T,
            e=self.e,
        )

    @cached_property
    def longitudinal(self) -> tuple[SparseOperator, SparseOperator]:
        return build_H_II_prime(self.dirac.rho, self.spatial_grid, self.chi_spa, self.basis, self.coulomb)

    @cached_property
    def V_eff(self) -> SparseOperator:
        return build_V_eff(self.dirac.J, self.delta, self.spatial_grid, self.chi_spa)

    def H_eff(self, e: float | None = None) -> SparseOperator:
        e = self.e if e is None else e
        return build_H_eff(e, self.dirac.H_dirac, self.longitudinal[0], self.V_eff)

    def K(self, e: float | None = None) -> SparseOperator:
        hs = self.hamiltonians
        return build_K(hs.T, hs.H_I, self.e if e is None else e)

    def effective(self, e: float | None = None) -> EffectiveSet:
        return EffectiveSet(V_eff=self.V_eff, H_longti=self.longitudinal[0],
                            H_eff=self.H_eff(e), K=self.K(e))

    def H_scaled(self, lam: float, e: float | None = None) -> SparseOperator:
        return self.hamiltonians.scaled(lam, e)

    def H_free_dressed(self, lam: float, e: float | None = None) -> SparseOperator:
        """``H~_0(Lambda) = (H_Dirac + (e^2 / 8 pi) H_longti) x I + Lambda^2 I x H_rad``."""
        e = self.e if e is None else e
        hs = self.hamiltonians
        return hs.H_dirac + (e**2 * COULOMB_PREFACTOR) * hs.H_II + lam**2 * hs.H_rad

    @cached_property
    def vacuum_projector(self) -> SparseOperator:
        """``I x P_Omega`` on the product space."""
        return tensor_product(identity(self.basis.fermion), vacuum_projector(self.basis.boson), self.basis)

    def lift_fermion(self, op: SparseOperator, photon_vacuum: bool = False) -> SparseOperator:
        """``op x I`` (or ``op x P_Omega``) on the product space."""
        other = vacuum_projector(self.basis.boson) if photon_vacuum else identity(self.basis.boson)
        return tensor_product(op, other, self.basis)

    @cached_property
    def radiation_bounds(self) -> RadiationBounds:
        return self.radiation.bounds()

    @cached_property
    def dirac_bounds(self) -> DiracBounds:
        return self.dirac.bounds(self.coulomb, self.radiation_bounds.M)
