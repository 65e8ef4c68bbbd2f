"""One-particle Dirac spinors, the cutoff Dirac field and its currents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fock import FermionBasis, SparseOperator, second_quantize, smeared_ladder
from .grids import CutoffSamples, MomentumGrid, SpatialGrid, discrete_norm

__all__ = [
    "SPECIES",
    "SPINS",
    "dirac_representation",
    "spin_matrices",
    "check_representation",
    "SpinorBasis",
    "solve_spinor_basis",
    "DiracFieldSet",
    "DiracBounds",
    "fermion_mode",
    "dirac_bound_constants",
]

TWO_PI_CUBED = (2.0 * math.pi) ** 3

# fermion species order within a momentum node
SPECIES = ("b+", "b-", "d+", "d-")
SPINS = (0.5, -0.5)

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def fermion_mode(node: int, species: str) -> int:
    return 4 * node + SPECIES.index(species)


def dirac_representation() -> tuple[np.ndarray, np.ndarray]:
    """Dirac representation: ``alpha^j = offdiag(sigma_j, sigma_j)``, ``beta = diag(1, 1, -1, -1)``."""
    zero = np.zeros((2, 2), dtype=complex)
    alpha = np.array([np.block([[zero, s], [s, zero]]) for s in _SIGMA])
    beta = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    return alpha, beta


def check_representation(alpha: np.ndarray, beta: np.ndarray, tol: float = 1e-12) -> None:
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    if alpha.shape != (3, 4, 4) or beta.shape != (4, 4):
        raise ValueError("alpha must be 3 matrices of size 4x4 and beta one 4x4 matrix")
    eye = np.eye(4)
    for j in range(3):
        if np.abs(alpha[j] - alpha[j].conj().T).max() > tol:
            raise ValueError(f"alpha^{j + 1} is not Hermitian")
        if np.abs(alpha[j] @ beta + beta @ alpha[j]).max() > tol:
            raise ValueError(f"{{alpha^{j + 1}, beta}} != 0")
        for l in range(3):
            acomm = alpha[j] @ alpha[l] + alpha[l] @ alpha[j]
            if np.abs(acomm - 2.0 * (j == l) * eye).max() > tol:
                raise ValueError(f"{{alpha^{j + 1}, alpha^{l + 1}}} != 2 delta")
    if np.abs(beta @ beta - eye).max() > tol or np.abs(beta - beta.conj().T).max() > tol:
        raise ValueError("beta must be Hermitian with beta^2 = I")


def spin_matrices(alpha: np.ndarray) -> np.ndarray:
    """Spin angular momentum ``s_j = -(i/4) eps_jkl alpha^k alpha^l``."""
    s = np.empty((3, 4, 4), dtype=complex)
    for j in range(3):
        k, l = (j + 1) % 3, (j + 2) % 3
        s[j] = -0.5j * alpha[k] @ alpha[l]
    return s


def _fixed_phase(vec: np.ndarray) -> np.ndarray:
    vec = vec / np.linalg.norm(vec)
    big = vec[np.argmax(np.abs(vec))]
    return vec * (abs(big) / big)


def _spinor(p: np.ndarray, M: float, alpha: np.ndarray, beta: np.ndarray, spin_ops: np.ndarray,
            sign: int, s: float) -> np.ndarray:
    energy = math.sqrt(M * M + float(p @ p))
    h = np.tensordot(p, alpha, axes=1) + M * beta
    pnorm = float(np.linalg.norm(p))
    axis = p / pnorm if pnorm > 0 else np.array([0.0, 0.0, 1.0])
    # projector onto h = sign*E and (2 s.axis) = 2s; both factors commute
    proj = 0.5 * (np.eye(4) + sign * h / energy)
    proj = proj @ (0.5 * (np.eye(4) + 2.0 * s * 2.0 * np.tensordot(axis, spin_ops, axes=1)))
    col = np.argmax(np.linalg.norm(proj, axis=0))
    return _fixed_phase(proj[:, col])


@dataclass(frozen=True)
class SpinorBasis:
    """Positive/negative energy spinors per fermion momentum node.

    ``u[i, a]`` and ``v[i, a]`` are the spinors at node ``i`` with spin
    ``SPINS[a]``; ``v_tilde[i, a] = v_a(-p_i)``.
    """

    momenta: np.ndarray
    mass: float
    energy: np.ndarray
    u: np.ndarray
    v: np.ndarray
    v_tilde: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    spin: np.ndarray

    def h_dirac(self, p: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(p, dtype=float), self.alpha, axes=1) + self.mass * self.beta


def solve_spinor_basis(
    grid: MomentumGrid | np.ndarray,
    M: float,
    alpha: np.ndarray | None = None,
    beta: np.ndarray | None = None,
) -> SpinorBasis:
    """Solve ``h_D(p) = alpha.p + beta M`` at every node, split by spin along ``p``.

    At ``p = 0`` the spin label is the ``s_3`` eigenvalue.  Each spinor is a
    unit vector whose largest-magnitude component is real and positive.
    """
    if not M > 0:
        raise ValueError("mass must be positive")
    if alpha is None or beta is None:
        alpha, beta = dirac_representation()
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    check_representation(alpha, beta)
    spin_ops = spin_matrices(alpha)
    momenta = grid.nodes if isinstance(grid, MomentumGrid) else np.atleast_2d(np.asarray(grid, float))
    n = momenta.shape[0]
    u = np.empty((n, 2, 4), dtype=complex)
    v = np.empty((n, 2, 4), dtype=complex)
    v_tilde = np.empty((n, 2, 4), dtype=complex)
    for i, p in enumerate(momenta):
        for a, s in enumerate(SPINS):
            u[i, a] = _spinor(p, M, alpha, beta, spin_ops, +1, s)
            v[i, a] = _spinor(p, M, alpha, beta, spin_ops, -1, s)
            v_tilde[i, a] = _spinor(-p + 0.0, M, alpha, beta, spin_ops, -1, s)
    energy = np.sqrt(M * M + np.sum(momenta**2, axis=1))
    return SpinorBasis(momenta=momenta, mass=float(M), energy=energy, u=u, v=v, v_tilde=v_tilde,
                       alpha=alpha, beta=beta, spin=spin_ops)


@dataclass(frozen=True)
class DiracBounds:
    """Discrete bound constants of the Dirac side.

    ``M_D[l]`` bounds ``||psi_l(x)||``; ``c[j]`` and ``d[j]`` bound the
    commutators of ``J^j(x)`` with ``H_Dirac`` and ``rho(x) rho(y)``;
    ``L_I``, ``R_I`` give the relative bound of ``H'_I``; ``M_II`` is the
    Coulomb double sum of ``|chi chi|``.
    """

    M_D: np.ndarray
    c: np.ndarray
    d: np.ndarray
    M_II: float
    L_I: float | None = None
    R_I: float | None = None

    def longitudinal_bound(self) -> float:
        """Right-hand side of ``||H_longti|| <= M_II sum_{l,nu} (M^l M^nu)^2``."""
        return self.M_II * float(np.sum(np.square(np.outer(self.M_D, self.M_D))))


class DiracFieldSet:
    """Form factors, ``psi_l(x)``, ``rho(x)``, ``J^j(x)`` and ``H_Dirac`` on a fermion Fock space.

    Fermion modes are ordered node-major with species ``b+, b-, d+, d-``.
    """

    def __init__(self, spinors: SpinorBasis, grid: MomentumGrid, samples: CutoffSamples,
                 spatial: SpatialGrid) -> None:
        self.spinors = spinors
        self.grid = grid
        self.spatial = spatial
        self.samples = samples
        self.basis = FermionBasis(4 * len(grid))
        scale = samples.chi_dirac[:, None, None] / np.sqrt(TWO_PI_CUBED * spinors.energy)[:, None, None]
        # f[i, a, l] = f^l_{s_a}(p_i), g likewise with v_tilde
        self.f = scale * spinors.u
        self.g = scale * spinors.v_tilde

    def _phase(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-1j * (self.grid.nodes @ np.asarray(x, dtype=float)))

    def _coeffs(self, values: np.ndarray) -> np.ndarray:
        return np.sqrt(self.grid.weights) * values

    def _modes(self, species: str) -> list[int]:
        return [fermion_mode(i, species) for i in range(len(self.grid))]

    def b(self, spin_index: int, f: np.ndarray, kind: str = "annihilate") -> SparseOperator:
        """Smeared ``b_s(f)`` from samples ``f`` on the fermion grid."""
        species = SPECIES[spin_index]
        return smeared_ladder(self.basis, kind, self._coeffs(f), self._modes(species))

    def d(self, spin_index: int, g: np.ndarray, kind: str = "annihilate") -> SparseOperator:
        species = SPECIES[2 + spin_index]
        return smeared_ladder(self.basis, kind, self._coeffs(g), self._modes(species))

    def psi(self, x: np.ndarray) -> list[SparseOperator]:
        """``psi_l(x) = sum_s b_s(f^l_{s,x}) + d_s^dagger(g^l_{s,x})`` for ``l = 1..4``."""
        phase = self._phase(x)
        out = []
        for l in range(4):
            op = None
            for a in range(2):
                term = self.b(a, self.f[:, a, l] * phase) + self.d(a, self.g[:, a, l] * phase, "create")
                op = term if op is None else op + term
            out.append(op)
        return out

    @cached_property
    def psi_at_nodes(self) -> list[list[SparseOperator]]:
        return [self.psi(x) for x in self.spatial.nodes]

    def current_density(self, node: int) -> tuple[SparseOperator, list[SparseOperator]]:
        """``rho(x) = sum_l psi_l^* psi_l`` and ``J^j(x) = sum_{l,l'} alpha^j_{l l'} psi_l^* psi_l'``."""
        psi = self.psi_at_nodes[node]
        psi_dag = [p.dag() for p in psi]
        rho = psi_dag[0] @ psi[0]
        for l in range(1, 4):
            rho = rho + psi_dag[l] @ psi[l]
        currents = []
        for j in range(3):
            acc = None
            for l in range(4):
                for lp in range(4):
                    coef = self.spinors.alpha[j, l, lp]
                    if coef != 0:
                        term = coef * (psi_dag[l] @ psi[lp])
                        acc = term if acc is None else acc + term
            currents.append(acc)
        return rho, currents

    @cached_property
    def _currents(self) -> list[tuple[SparseOperator, list[SparseOperator]]]:
        return [self.current_density(a) for a in range(len(self.spatial))]

    @property
    def rho(self) -> list[SparseOperator]:
        return [rc[0] for rc in self._currents]

    @property
    def J(self) -> list[list[SparseOperator]]:
        """``J[a][j]`` is ``J^{j+1}(x_a)``."""
        return [rc[1] for rc in self._currents]

    @cached_property
    def H_dirac(self) -> SparseOperator:
        return second_quantize(self.basis, np.repeat(self.spinors.energy, 4))

    def bounds(self, coulomb: np.ndarray, M_R: np.ndarray | None = None) -> DiracBounds:
        return dirac_bound_constants(self, coulomb, M_R)


def dirac_bound_constants(fields: DiracFieldSet, coulomb: np.ndarray,
                          M_R: np.ndarray | None = None) -> DiracBounds:
    """Bound constants from the discrete norms of the form factors.

    ``coulomb`` is the (regularized) kernel matrix ``k_C(x_a - x_b)`` on the
    spatial grid; it enters ``M_II``.  ``L_I`` and ``R_I`` also need the
    radiation constants ``M_R[l - 1, j, r]`` and are left as ``None`` without them.
    """
    w = fields.grid.weights
    E = fields.spinors.energy
    M_D = np.array([
        sum(discrete_norm(fields.f[:, a, l], w) + discrete_norm(fields.g[:, a, l], w) for a in range(2))
        for l in range(4)
    ])
    chi = fields.samples.chi_dirac
    # E_l = sum_s ||sqrt(E) chi u^l_s|| + ||sqrt(E) chi v~^l_s||
    energy_norms = np.array([
        sum(discrete_norm(np.sqrt(E) * chi * fields.spinors.u[:, a, l], w)
            + discrete_norm(np.sqrt(E) * chi * fields.spinors.v_tilde[:, a, l], w) for a in range(2))
        for l in range(4)
    ])
    abs_alpha = np.abs(fields.spinors.alpha)
    c = np.array([
        2.0 / math.sqrt(TWO_PI_CUBED) * sum(abs_alpha[j, l, lp] * energy_norms[l]
                                            for l in range(4) for lp in range(4))
        for j in range(3)
    ])
    rho_sq = float(np.sum(np.square(np.outer(M_D, M_D))))
    d = np.array([4.0 * rho_sq * float(M_D @ abs_alpha[j] @ M_D) for j in range(3)])

    chi_spa = fields.samples.chi_spa
    v = fields.spatial.weights
    abs_chi_v = v * np.abs(chi_spa)
    M_II = float(abs_chi_v @ coulomb @ abs_chi_v)
    L_I = R_I = None
    if M_R is not None:
        # ||J^j|| <= sum_{l,l'} |alpha^j_{ll'}| M^l M^l'; ||A^j Psi|| per the radiation bound
        spa_l1 = float(np.sum(abs_chi_v))
        J_norm = np.array([float(M_D @ abs_alpha[j] @ M_D) for j in range(3)])
        L_I = 2.0 * spa_l1 * float(sum(J_norm[j] * M_R[1, j, r] for j in range(3) for r in range(2)))
        R_I = spa_l1 * float(sum(J_norm[j] * M_R[0, j, r] for j in range(3) for r in range(2)))
    return DiracBounds(M_D=M_D, c=c, d=d, M_II=M_II, L_I=L_I, R_I=R_I)
