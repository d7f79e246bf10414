"""Hermitian operator space on C^n.

Operators are handled in the real coordinates of an orthonormal Hermitian
basis (generalized Gell-Mann matrices). In those coordinates the
Hilbert-Schmidt inner product is the Euclidean one and superoperators that
preserve Hermiticity are real n^2 x n^2 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

TOL = 1e-9
RANK_TOL = 1e-10


class DimensionError(ValueError):
    """Raised for invalid or mismatched dimensions."""


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


def hermitian_part(X: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Return (X + X^dagger)/2, rejecting X if it is not Hermitian within `tol`."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {X.shape}")
    dev = np.max(np.abs(X - X.conj().T)) if X.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"matrix deviates from Hermitian by {dev:.3g}")
    return (X + X.conj().T) / 2


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt inner product Tr(X^dagger Y)."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"shape mismatch: {X.shape} vs {Y.shape}")
    return complex(np.vdot(X, Y))


def hs_norm(X) -> float:
    return float(np.linalg.norm(np.asarray(X)))


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Orthonormal basis of n x n Hermitian matrices with elements[0] = I/sqrt(n)."""

    n: int
    elements: np.ndarray  # shape (n*n, n, n)

    def __post_init__(self):
        elements = np.asarray(self.elements, dtype=complex)
        n = self.n
        if elements.shape != (n * n, n, n):
            raise DimensionError(
                f"basis of dimension {n} needs shape {(n * n, n, n)}, got {elements.shape}"
            )
        herm_dev = np.max(np.abs(elements - elements.conj().transpose(0, 2, 1)))
        if herm_dev > TOL:
            raise NotHermitianError(f"basis element not Hermitian (deviation {herm_dev:.3g})")
        gram = np.einsum("aij,bij->ab", elements.conj(), elements)
        if np.max(np.abs(gram - np.eye(n * n))) > TOL:
            raise ValueError("basis elements are not Hilbert-Schmidt orthonormal")
        if np.max(np.abs(elements[0] - np.eye(n) / np.sqrt(n))) > TOL:
            raise ValueError("element 0 must be I/sqrt(n)")
        elements = elements.copy()
        elements[0] = np.eye(n) / np.sqrt(n)
        elements.setflags(write=False)
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return self.n * self.n

    def __getitem__(self, k: int) -> np.ndarray:
        return self.elements[k]

    def coords(self, X) -> np.ndarray:
        """Real coordinates <sigma_k, X> of a Hermitian matrix (or a stack of them)."""
        X = np.asarray(X, dtype=complex)
        return np.einsum("kij,...ij->...k", self.elements.conj(), X).real

    def matrix(self, theta) -> np.ndarray:
        """Inverse of :meth:`coords`: sum_k theta_k sigma_k."""
        return np.tensordot(np.asarray(theta, dtype=float), self.elements, axes=(-1, 0))


def build_basis(n: int) -> HermitianBasis:
    """Generalized Gell-Mann basis, normalized to Hilbert-Schmidt norm one.

    Order: I/sqrt(n); the n-1 traceless diagonal matrices
    diag(1, ..., 1, -k, 0, ..., 0)/sqrt(k(k+1)); then for each pair j < k in
    row-major order the symmetric (E_jk + E_kj)/sqrt(2) followed by the
    antisymmetric (-i E_jk + i E_kj)/sqrt(2).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DimensionError(f"basis dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    elems = [np.eye(n, dtype=complex) / np.sqrt(n)]
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1.0
        d[k] = -k
        elems.append(np.diag(d).astype(complex) / np.sqrt(k * (k + 1)))
    s = 1 / np.sqrt(2)
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = s
            anti = np.zeros((n, n), dtype=complex)
            anti[j, k] = -1j * s
            anti[k, j] = 1j * s
            elems.append(sym)
            elems.append(anti)
    return HermitianBasis(n, np.array(elems))


def diagonal_indices(n: int) -> tuple[int, ...]:
    """Indices of the traceless diagonal elements of :func:`build_basis`."""
    return tuple(range(1, n))


def offdiagonal_indices(n: int) -> tuple[int, ...]:
    return tuple(range(n, n * n))


@dataclass(frozen=True)
class BlochVector:
    """Coordinates theta of a Hermitian matrix in a HermitianBasis."""

    theta: np.ndarray
    basis: HermitianBasis = field(repr=False)

    def matrix(self) -> np.ndarray:
        return self.basis.matrix(self.theta)

    def purity(self) -> float:
        return float(np.dot(self.theta, self.theta))


def decompose(X, basis: HermitianBasis, tol: float = TOL) -> BlochVector:
    X = hermitian_part(X, tol)
    if X.shape != (basis.n, basis.n):
        raise DimensionError(f"matrix shape {X.shape} does not match basis dimension {basis.n}")
    return BlochVector(basis.coords(X), basis)


def reconstruct(bloch: BlochVector) -> np.ndarray:
    return bloch.matrix()


@dataclass(frozen=True)
class Scheme:
    """Split of the traceless basis indices into a known part B and unknown part C.

    Index 0 (the identity direction, part A) belongs to neither.
    """

    n: int
    known_indices: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise DimensionError(f"scheme dimension must be >= 2, got {self.n}")
        known = tuple(sorted(int(k) for k in self.known_indices))
        if len(set(known)) != len(known):
            raise ValueError("known indices contain duplicates")
        if any(k < 1 or k >= self.n * self.n for k in known):
            raise ValueError(f"known indices must lie in 1..{self.n * self.n - 1}")
        object.__setattr__(self, "known_indices", known)

    @classmethod
    def full(cls, n: int) -> "Scheme":
        """Nothing known: ordinary full tomography."""
        return cls(n, ())

    @classmethod
    def diagonal(cls, n: int) -> "Scheme":
        """Diagonal of the state known, off-diagonal entries estimated."""
        return cls(n, diagonal_indices(n))

    @classmethod
    def offdiagonal(cls, n: int) -> "Scheme":
        """Off-diagonal entries known, diagonal estimated."""
        return cls(n, offdiagonal_indices(n))

    @classmethod
    def from_unknown(cls, n: int, unknown: Iterable[int]) -> "Scheme":
        unknown = set(unknown)
        return cls(n, tuple(k for k in range(1, n * n) if k not in unknown))

    @cached_property
    def unknown_indices(self) -> tuple[int, ...]:
        known = set(self.known_indices)
        return tuple(k for k in range(1, self.n * self.n) if k not in known)

    @property
    def m(self) -> int:
        """Number of known parameters."""
        return len(self.known_indices)

    @property
    def N(self) -> int:
        """Number of POVM elements needed: n^2 - m."""
        return self.n * self.n - self.m

    def mask(self, part: str) -> np.ndarray:
        """Boolean coordinate mask of part 'A', 'B' or 'C'."""
        mask = np.zeros(self.n * self.n, dtype=bool)
        if part == "A":
            mask[0] = True
        elif part == "B":
            mask[list(self.known_indices)] = True
        elif part == "C":
            mask[list(self.unknown_indices)] = True
        else:
            raise ValueError(f"part must be 'A', 'B' or 'C', got {part!r}")
        return mask

    def projector(self, part: str) -> np.ndarray:
        """Coordinate matrix of the orthogonal projection onto a part."""
        return np.diag(self.mask(part).astype(float))


def project_part(X, scheme: Scheme, part: str, basis: HermitianBasis | None = None) -> np.ndarray:
    """HS-orthogonal projection of a Hermitian matrix onto part A, B or C."""
    X = hermitian_part(X)
    if basis is None:
        basis = build_basis(scheme.n)
    if X.shape != (scheme.n, scheme.n) or basis.n != scheme.n:
        raise DimensionError(
            f"dimension mismatch: matrix {X.shape}, scheme {scheme.n}, basis {basis.n}"
        )
    theta = basis.coords(X)
    return basis.matrix(np.where(scheme.mask(part), theta, 0.0))


@dataclass(frozen=True, eq=False)
class FrameSuperoperator:
    """Real symmetric n^2 x n^2 coordinate matrix of a superoperator."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        d = self.n * self.n
        if M.shape != (d, d):
            raise DimensionError(f"superoperator on dimension {self.n} needs shape {(d, d)}")
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    def __matmul__(self, other: "FrameSuperoperator") -> "FrameSuperoperator":
        return FrameSuperoperator(self.n, self.matrix @ other.matrix)

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @classmethod
    def identity(cls, n: int) -> "FrameSuperoperator":
        return cls(n, np.eye(n * n))


def _check_symmetric(F: FrameSuperoperator, tol: float) -> np.ndarray:
    M = F.matrix
    scale = max(1.0, float(np.max(np.abs(M))))
    dev = float(np.max(np.abs(M - M.T)))
    if dev > tol * scale:
        raise ValueError(f"superoperator is not symmetric (deviation {dev:.3g})")
    return (M + M.T) / 2


def superop_eigen(F: FrameSuperoperator, tol: float = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors (columns)."""
    M = _check_symmetric(F, tol)
    w, V = np.linalg.eigh(M)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def pseudo_inverse(
    F: FrameSuperoperator, rank_tol: float = RANK_TOL, tol: float = TOL
) -> FrameSuperoperator:
    """Moore-Penrose pseudo-inverse computed from the spectral decomposition.

    Eigenvalues below ``rank_tol * max(eigenvalue)`` count as exact zeros.
    """
    w, V = superop_eigen(F, tol)
    if w.size and w[-1] < -tol * max(1.0, abs(w[0])):
        raise NotPSDError(f"superoperator has negative eigenvalue {w[-1]:.3g}")
    top = w[0] if w.size else 0.0
    keep = w > rank_tol * top if top > 0 else np.zeros_like(w, dtype=bool)
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    return FrameSuperoperator(F.n, (V * inv) @ V.T)


def rank(F: FrameSuperoperator, rank_tol: float = RANK_TOL) -> int:
    w, _ = superop_eigen(F)
    if not w.size or w[0] <= 0:
        return 0
    return int(np.sum(w > rank_tol * w[0]))
