"""Fermion (CAR) and truncated boson (CCR) Fock spaces as sparse matrices.

Occupation states are ordered with mode 0 as the most significant digit, so
every single-mode operator is a Kronecker product ``I x ... x op x ... x I``
and the vacuum is basis state 0.  Fermion annihilators carry the parity
string ``(-1)^(number of occupied modes before the target mode)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Literal, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "FermionBasis",
    "BosonBasis",
    "ProductBasis",
    "SparseOperator",
    "BasisMismatch",
    "fermion_ladder",
    "boson_ladder",
    "smeared_ladder",
    "second_quantize",
    "tensor_product",
    "vacuum_projector",
    "identity",
    "occupation_subspace",
    "commutator",
    "anticommutator",
    "number_operator",
    "vacuum_state",
]

Kind = Literal["annihilate", "create"]

HERMITIAN_TOL = 1e-14


class BasisMismatch(ValueError):
    """Operators on different bases were combined."""


@dataclass(frozen=True)
class FermionBasis:
    """All ``2**n_modes`` occupation bitstrings of ``n_modes`` fermionic modes."""

    n_modes: int
    label: str = "fermion"

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("need at least one fermionic mode")

    @property
    def dim(self) -> int:
        return 2**self.n_modes

    def occupations(self) -> np.ndarray:
        """``(dim, n_modes)`` array of occupation numbers, row = basis state."""
        idx = np.arange(self.dim)[:, None]
        shifts = np.arange(self.n_modes - 1, -1, -1)[None, :]
        return (idx >> shifts) & 1

    def index(self, occupation: Sequence[int]) -> int:
        if len(occupation) != self.n_modes or any(n not in (0, 1) for n in occupation):
            raise ValueError(f"invalid fermion occupation {occupation!r}")
        return int("".join(str(int(n)) for n in occupation), 2)


@dataclass(frozen=True)
class BosonBasis:
    """Occupation tuples of ``n_modes`` bosonic modes, each capped at ``n_max``."""

    n_modes: int
    n_max: int
    label: str = "boson"

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("need at least one bosonic mode")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    def occupations(self) -> np.ndarray:
        base = self.n_max + 1
        idx = np.arange(self.dim)[:, None]
        powers = base ** np.arange(self.n_modes - 1, -1, -1)[None, :]
        return (idx // powers) % base

    def index(self, occupation: Sequence[int]) -> int:
        if len(occupation) != self.n_modes or any(not 0 <= n <= self.n_max for n in occupation):
            raise ValueError(f"invalid boson occupation {occupation!r}")
        out = 0
        for n in occupation:
            out = out * (self.n_max + 1) + int(n)
        return out


@dataclass(frozen=True)
class ProductBasis:
    """``F_Dirac x F_rad`` with the fermion index major."""

    fermion: FermionBasis
    boson: BosonBasis
    label: str = "qed"

    @property
    def dim(self) -> int:
        return self.fermion.dim * self.boson.dim


Basis = FermionBasis | BosonBasis | ProductBasis


class SparseOperator:
    """A complex sparse matrix acting on a labelled basis.

    Supports ``+``, ``-``, scalar ``*``, ``@`` with operators or vectors, and
    ``.dag()``.  The wrapped matrix is stored in CSR format.
    """

    __slots__ = ("basis", "matrix")
    __array_priority__ = 100

    def __init__(self, basis: Basis, matrix) -> None:
        m = sp.csr_matrix(matrix, dtype=complex)
        if m.shape != (basis.dim, basis.dim):
            raise BasisMismatch(f"matrix shape {m.shape} does not match basis dimension {basis.dim}")
        self.basis = basis
        self.matrix = m

    def __repr__(self) -> str:
        return f"SparseOperator({self.basis.label}, dim={self.dim}, nnz={self.matrix.nnz})"

    @property
    def dim(self) -> int:
        return self.basis.dim

    def _check(self, other: SparseOperator) -> None:
        if other.basis != self.basis:
            raise BasisMismatch(f"cannot combine operators on {self.basis.label!r} and {other.basis.label!r}")

    def __add__(self, other: SparseOperator) -> SparseOperator:
        self._check(other)
        return SparseOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        self._check(other)
        return SparseOperator(self.basis, self.matrix - other.matrix)

    def __neg__(self) -> SparseOperator:
        return SparseOperator(self.basis, -self.matrix)

    def __mul__(self, scalar: complex) -> SparseOperator:
        if isinstance(scalar, SparseOperator):
            raise TypeError("use @ for operator products")
        return SparseOperator(self.basis, self.matrix * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> SparseOperator:
        return SparseOperator(self.basis, self.matrix / scalar)

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            self._check(other)
            return SparseOperator(self.basis, self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other)

    def dag(self) -> SparseOperator:
        return SparseOperator(self.basis, self.matrix.conj().T)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def max_abs(self) -> float:
        """Largest entry modulus (0 for the zero operator)."""
        return float(np.max(np.abs(self.matrix.data))) if self.matrix.nnz else 0.0

    def hermiticity_defect(self) -> float:
        return (self - self.dag()).max_abs()

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_defect() <= tol

    def op_norm(self) -> float:
        """Spectral norm via dense SVD (desk-scale operators only)."""
        if self.matrix.nnz == 0:
            return 0.0
        return float(np.linalg.norm(self.toarray(), 2))


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def anticommutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b + b @ a


def identity(basis: Basis) -> SparseOperator:
    return SparseOperator(basis, sp.identity(basis.dim, dtype=complex, format="csr"))


def _kron_chain(factors: Iterable[sp.spmatrix]) -> sp.csr_matrix:
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)


_SIGMA_MINUS = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_PARITY = sp.csr_matrix(np.diag([1.0, -1.0]))
_ID2 = sp.identity(2, format="csr")


def _check_mode(mode: int, n_modes: int) -> None:
    if not 0 <= mode < n_modes:
        raise IndexError(f"mode {mode} out of range for {n_modes} modes")


def _check_kind(kind: str) -> None:
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")


def fermion_ladder(basis: FermionBasis, mode: int, kind: Kind = "annihilate") -> SparseOperator:
    _check_mode(mode, basis.n_modes)
    _check_kind(kind)
    factors = [_PARITY] * mode + [_SIGMA_MINUS] + [_ID2] * (basis.n_modes - mode - 1)
    op = SparseOperator(basis, _kron_chain(factors))
    return op if kind == "annihilate" else op.dag()


def _single_boson(n_max: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), offsets=1, format="csr")


def boson_ladder(basis: BosonBasis, mode: int, kind: Kind = "annihilate") -> SparseOperator:
    """Truncated ``a`` / ``a^dagger``; the creator sends occupation ``n_max`` to zero."""
    _check_mode(mode, basis.n_modes)
    _check_kind(kind)
    eye = sp.identity(basis.n_max + 1, format="csr")
    factors = [eye] * mode + [_single_boson(basis.n_max)] + [eye] * (basis.n_modes - mode - 1)
    op = SparseOperator(basis, _kron_chain(factors))
    return op if kind == "annihilate" else op.dag()


def smeared_ladder(
    basis: FermionBasis | BosonBasis,
    kind: Kind,
    coeffs: Sequence[complex],
    modes: Sequence[int] | None = None,
) -> SparseOperator:
    """Smeared ladder operator over the listed modes.

    The annihilator is ``sum_i conj(coeffs[i]) c_{modes[i]}`` (antilinear in its
    argument); the creator is ``sum_i coeffs[i] c^dagger_{modes[i]}``.  ``modes``
    defaults to all modes of the basis; species selection (``b_s``, ``d_s``,
    ``a_r``) is done by passing that species' mode indices.
    """
    _check_kind(kind)
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    if modes is None:
        modes = range(basis.n_modes)
    modes = list(modes)
    if len(modes) != coeffs.shape[0]:
        raise ValueError(f"{coeffs.shape[0]} coefficients for {len(modes)} modes")
    ladder = fermion_ladder if isinstance(basis, FermionBasis) else boson_ladder
    out = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for c, m in zip(coeffs, modes):
        if c != 0:
            out = out + np.conj(c) * ladder(basis, m, "annihilate").matrix
    op = SparseOperator(basis, out)
    return op if kind == "annihilate" else op.dag()


def second_quantize(basis: FermionBasis | BosonBasis, energies: Sequence[float]) -> SparseOperator:
    """``dGamma`` of a diagonal one-particle operator: eigenvalue ``sum_i n_i e_i``."""
    energies = np.asarray(energies, dtype=float).reshape(-1)
    if energies.shape[0] != basis.n_modes:
        raise ValueError(f"{energies.shape[0]} energies for {basis.n_modes} modes")
    if not np.all(np.isfinite(energies)):
        raise ValueError("energies must be finite")
    if np.any(energies < 0):
        raise ValueError("second quantization requires nonnegative energies")
    diag = basis.occupations() @ energies
    return SparseOperator(basis, sp.diags(diag.astype(complex), format="csr"))


def number_operator(basis: FermionBasis | BosonBasis, mode: int) -> SparseOperator:
    e = np.zeros(basis.n_modes)
    e[mode] = 1.0
    return second_quantize(basis, e)


def tensor_product(f: SparseOperator, b: SparseOperator, basis: ProductBasis | None = None) -> SparseOperator:
    """Kronecker product on ``F_Dirac x F_rad`` (fermion index major)."""
    if not isinstance(f.basis, FermionBasis) or not isinstance(b.basis, BosonBasis):
        raise BasisMismatch("tensor_product expects a fermion operator and a boson operator")
    if basis is None:
        basis = ProductBasis(f.basis, b.basis)
    elif basis.fermion != f.basis or basis.boson != b.basis:
        raise BasisMismatch("operators are not on the factors of the given product basis")
    return SparseOperator(basis, sp.kron(f.matrix, b.matrix, format="csr"))


def vacuum_projector(basis: BosonBasis | FermionBasis) -> SparseOperator:
    m = sp.csr_matrix(([1.0 + 0j], ([0], [0])), shape=(basis.dim, basis.dim))
    return SparseOperator(basis, m)


def vacuum_state(basis: Basis) -> np.ndarray:
    v = np.zeros(basis.dim, dtype=complex)
    v[0] = 1.0
    return v


def occupation_subspace(basis: BosonBasis, max_occupation: int) -> np.ndarray:
    """Boolean mask of states whose every mode occupation is ``<= max_occupation``."""
    return np.all(basis.occupations() <= max_occupation, axis=1)
