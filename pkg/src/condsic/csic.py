"""Conditional SIC-POVMs: construction, certification, dual frames and risk.

A POVM {F_i} with N = n^2 - m elements is optimal for estimating the unknown
part C of a state (given the m-dimensional known part B) when its frame
superoperator equals A + (n-1)/(N-1) C. Equivalently the normalized elements
P_i = F_i / Tr F_i are rank one, carry equal weights n/N, sum to (N/n) I,
are orthogonal to B and have constant pairwise overlap (N-n)/(n(N-1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diffset import DifferenceSet
from .matspace import (
    RANK_TOL,
    TOL,
    DimensionError,
    FrameSuperoperator,
    HermitianBasis,
    Scheme,
    build_basis,
    hermitian_part,
    pseudo_inverse,
    rank,
)


class UnderdeterminedSchemeError(ValueError):
    """The POVM does not span the unknown part of the scheme."""


@dataclass(frozen=True, eq=False)
class Povm:
    """Finite POVM on C^n stored as an (N, n, n) array of elements F_i."""

    elements: np.ndarray
    tol: float = field(default=TOL, repr=False)

    def __post_init__(self):
        F = np.asarray(self.elements, dtype=complex)
        if F.ndim != 3 or F.shape[1] != F.shape[2]:
            raise DimensionError(f"POVM elements must have shape (N, n, n), got {F.shape}")
        F = np.array([hermitian_part(f, self.tol) for f in F])
        n = F.shape[1]
        min_eig = min(np.linalg.eigvalsh(f)[0] for f in F)
        if min_eig < -self.tol:
            raise ValueError(f"POVM element is not positive (eigenvalue {min_eig:.3g})")
        sum_dev = np.max(np.abs(F.sum(axis=0) - np.eye(n)))
        if sum_dev > self.tol:
            raise ValueError(f"POVM elements do not sum to the identity (deviation {sum_dev:.3g})")
        if np.any(np.trace(F, axis1=1, axis2=2).real <= 0):
            raise ValueError("POVM contains a zero element")
        F.setflags(write=False)
        object.__setattr__(self, "elements", F)

    @property
    def n(self) -> int:
        return self.elements.shape[1]

    @property
    def N(self) -> int:
        return self.elements.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """lambda_i = Tr F_i."""
        return np.trace(self.elements, axis1=1, axis2=2).real

    @property
    def normalized(self) -> np.ndarray:
        """P_i = F_i / Tr F_i."""
        return self.elements / self.weights[:, None, None]

    def __len__(self) -> int:
        return self.N

    @classmethod
    def from_vectors(cls, vectors, weights=None, tol: float = TOL) -> "Povm":
        """Rank-one POVM F_i = w_i |v_i><v_i| / <v_i|v_i> (default w_i = n/N)."""
        V = np.asarray(vectors, dtype=complex)
        N, n = V.shape
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
        w = np.full(N, n / N) if weights is None else np.asarray(weights, dtype=float)
        return cls(w[:, None, None] * np.einsum("ki,kj->kij", V, V.conj()), tol=tol)


@dataclass(frozen=True, eq=False)
class DualFrame:
    """Reconstruction operators Q_i with sum_i <F_i, X> Q_i = X on A + C."""

    elements: np.ndarray
    scheme: Scheme

    @property
    def n(self) -> int:
        return self.elements.shape[1]

    @property
    def N(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.N


@dataclass(frozen=True)
class CsicCertificate:
    N: int
    n: int
    m: int
    overlap_target: float
    sum_deviation: float
    overlap_deviation: float
    orthogonality_deviation: float
    weight_deviation: float
    rank1_deviation: float
    parameter_count_ok: bool
    tol: float

    @property
    def deviations(self) -> dict[str, float]:
        return {
            "sum_deviation": self.sum_deviation,
            "overlap_deviation": self.overlap_deviation,
            "orthogonality_deviation": self.orthogonality_deviation,
            "weight_deviation": self.weight_deviation,
            "rank1_deviation": self.rank1_deviation,
        }

    @property
    def passed(self) -> bool:
        return self.parameter_count_ok and all(v < self.tol for v in self.deviations.values())

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "N": self.N,
            "m": self.m,
            "overlap_target": self.overlap_target,
            "parameter_count_ok": self.parameter_count_ok,
        }
        out.update(self.deviations)
        out["tol"] = self.tol
        out["passed"] = self.passed
        return out

    def table(self) -> str:
        rows = [(k, v, "ok" if v < self.tol else "FAIL") for k, v in self.deviations.items()]
        width = max(len(k) for k, _, _ in rows)
        lines = [f"n={self.n}  N={self.N}  m={self.m}  overlap target={self.overlap_target:.12g}"]
        count = "ok" if self.parameter_count_ok else f"FAIL (N != n^2 - m = {self.n**2 - self.m})"
        lines.append(f"{'parameter_count':<{width}}  {'':>12}  {count}")
        for k, v, flag in rows:
            lines.append(f"{k:<{width}}  {v:12.3e}  {flag}")
        lines.append(f"{'result':<{width}}  {'':>12}  {'PASS' if self.passed else 'FAIL'} (tol {self.tol:g})")
        return "\n".join(lines)


def overlap_target(n: int, N: int) -> float:
    """Optimal pairwise overlap Tr P_i P_j = (N - n) / (n (N - 1))."""
    return (N - n) / (n * (N - 1)) if N > 1 else 0.0


def shift_unitary(D: DifferenceSet) -> np.ndarray:
    """U = Diag(q^a for a in D), q = exp(2 pi i / N)."""
    return np.diag(np.exp(2j * np.pi * np.asarray(D.residues) / D.N))


def orbit_vectors(D: DifferenceSet) -> np.ndarray:
    """Rows U^k phi, k = 0..N-1, with phi the uniform superposition."""
    n, N = D.n, D.N
    k = np.arange(N)[:, None]
    return np.exp(2j * np.pi * k * np.asarray(D.residues)[None, :] / N) / np.sqrt(n)


def build_from_difference_set(D: DifferenceSet, n: int | None = None) -> Povm:
    """Conditional SIC-POVM for the known-diagonal scheme from a planar difference set.

    F_k = (n/N) |U^k phi><U^k phi| for k = 0..N-1.
    """
    if not isinstance(D, DifferenceSet):
        raise TypeError("expected a certified DifferenceSet")
    if n is None:
        n = D.n
    if D.lam != 1:
        raise ValueError(f"need a planar difference set (lambda = 1), got lambda = {D.lam}")
    if D.n != n:
        raise ValueError(f"difference set has {D.n} residues, expected {n}")
    if D.N != n * n - n + 1:
        raise ValueError(f"modulus {D.N} != n^2 - n + 1 = {n * n - n + 1}")
    return Povm.from_vectors(orbit_vectors(D))


def diagonal_povm(n: int) -> Povm:
    """Matrix units |e_i><e_i|: optimal when only the diagonal is unknown."""
    if n < 2:
        raise DimensionError(f"need n >= 2, got {n}")
    return Povm(np.array([np.diag(row) for row in np.eye(n, dtype=complex)]))


TETRAHEDRON = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)


def tetrahedral_sic() -> Povm:
    """The qubit SIC-POVM with Bloch vectors at the vertices of a tetrahedron."""
    pauli = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
    P = (np.eye(2) + np.tensordot(TETRAHEDRON, pauli, axes=(1, 0))) / 2
    return Povm(P / 2)


def sic_from_fiducial(fiducial, tol: float = TOL) -> Povm:
    """SIC-POVM from the Weyl-Heisenberg orbit of a fiducial vector in C^n."""
    psi = np.asarray(fiducial, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    n = psi.size
    omega = np.exp(2j * np.pi / n)
    X = np.roll(np.eye(n), 1, axis=0)
    Z = np.diag(omega ** np.arange(n))
    vecs = [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b) @ psi
            for a in range(n) for b in range(n)]
    return Povm.from_vectors(np.array(vecs), tol=tol)


def complete(elements) -> Povm:
    """Rescale near-POVM elements E_i to S^-1/2 E_i S^-1/2 with S = sum_i E_i, so they sum to I."""
    E = np.asarray(elements, dtype=complex)
    S = E.sum(axis=0)
    w, V = np.linalg.eigh((S + S.conj().T) / 2)
    if w[0] <= 0:
        raise ValueError("elements do not sum to a positive definite operator")
    root = (V / np.sqrt(w)) @ V.conj().T
    return Povm(np.einsum("ij,kjl,lm->kim", root, E, root))


def _check_dims(P: Povm, scheme: Scheme, basis: HermitianBasis):
    if not (P.n == scheme.n == basis.n):
        raise DimensionError(f"dimension mismatch: POVM {P.n}, scheme {scheme.n}, basis {basis.n}")


def certify_csic(
    P: Povm, scheme: Scheme, basis: HermitianBasis | None = None, tol: float = TOL
) -> CsicCertificate:
    """Check every optimality condition; all deviations are computed even after a failure."""
    basis = basis or build_basis(P.n)
    _check_dims(P, scheme, basis)
    n, N = P.n, P.N
    Pn = P.normalized
    target = overlap_target(n, N)
    sum_dev = float(np.linalg.norm(Pn.sum(axis=0) - (N / n) * np.eye(n)))
    gram = np.einsum("aij,bji->ab", Pn, Pn).real
    off = ~np.eye(N, dtype=bool)
    overlap_dev = float(np.max(np.abs(gram[off] - target))) if N > 1 else 0.0
    rank1_dev = float(np.max(np.abs(np.diag(gram) - 1)))
    if scheme.known_indices:
        c = basis.coords(Pn)[:, list(scheme.known_indices)]
        orth_dev = float(np.max(np.abs(c)))
    else:
        orth_dev = 0.0
    weight_dev = float(np.max(np.abs(P.weights - n / N)))
    return CsicCertificate(
        N=N,
        n=n,
        m=scheme.m,
        overlap_target=target,
        sum_deviation=sum_dev,
        overlap_deviation=overlap_dev,
        orthogonality_deviation=orth_dev,
        weight_deviation=weight_dev,
        rank1_deviation=rank1_dev,
        parameter_count_ok=N == scheme.N,
        tol=tol,
    )


def frame_superoperator(P: Povm, basis: HermitianBasis | None = None) -> FrameSuperoperator:
    """Coordinates of X -> sum_i lambda_i <P_i, X> P_i."""
    basis = basis or build_basis(P.n)
    if basis.n != P.n:
        raise DimensionError(f"dimension mismatch: POVM {P.n}, basis {basis.n}")
    c = basis.coords(P.normalized)
    return FrameSuperoperator(P.n, np.einsum("i,ia,ib->ab", P.weights, c, c))


def optimal_superoperator(scheme: Scheme) -> FrameSuperoperator:
    """A + (n-1)/(N-1) C in basis coordinates."""
    n, N = scheme.n, scheme.N
    coef = (n - 1) / (N - 1) if N > 1 else 0.0
    return FrameSuperoperator(n, scheme.projector("A") + coef * scheme.projector("C"))


def spectral_deviation(P: Povm, scheme: Scheme, basis: HermitianBasis | None = None) -> float:
    """max-entry deviation of the frame superoperator from A + (n-1)/(N-1) C."""
    F = frame_superoperator(P, basis)
    if P.N != scheme.N:
        return float("inf")
    return float(np.max(np.abs(F.matrix - optimal_superoperator(scheme).matrix)))


def canonical_dual(
    P: Povm, scheme: Scheme, basis: HermitianBasis | None = None, rank_tol: float = RANK_TOL
) -> DualFrame:
    """R_i = F^- P_i, the dual frame of least averaged variance."""
    basis = basis or build_basis(P.n)
    _check_dims(P, scheme, basis)
    F = frame_superoperator(P, basis)
    r = rank(F, rank_tol)
    need = 1 + len(scheme.unknown_indices)
    if r < need:
        raise UnderdeterminedSchemeError(
            f"frame superoperator has rank {r}, scheme needs {need} (A plus {need - 1} unknowns)"
        )
    Finv = pseudo_inverse(F, rank_tol)
    coords = basis.coords(P.normalized) @ Finv.matrix
    return DualFrame(basis.matrix(coords), scheme)


def dual_coords(dual: DualFrame, basis: HermitianBasis | None = None) -> np.ndarray:
    basis = basis or build_basis(dual.n)
    return basis.coords(dual.elements)


def reconstruction_deviation(P: Povm, dual: DualFrame, basis: HermitianBasis | None = None) -> float:
    """max-entry deviation of sum_i |Q_i><F_i| from the projector onto A + C."""
    basis = basis or build_basis(P.n)
    f = basis.coords(P.elements)
    q = basis.coords(dual.elements)
    PiAC = dual.scheme.projector("A") + dual.scheme.projector("C")
    return float(np.max(np.abs(q.T @ f @ PiAC - PiAC)))


def dual_cost(P: Povm, dual: DualFrame, basis: HermitianBasis | None = None) -> float:
    """sum_i lambda_i <Q_i, Q_i>; equals Tr F^- for the canonical dual."""
    q = dual_coords(dual, basis)
    return float(np.dot(P.weights, np.einsum("ia,ia->i", q, q)))


def estimated_part(rho, scheme: Scheme, basis: HermitianBasis | None = None) -> np.ndarray:
    """rho_* = A rho + C rho = rho - B rho."""
    basis = basis or build_basis(scheme.n)
    theta = basis.coords(hermitian_part(rho))
    return basis.matrix(np.where(scheme.mask("B"), 0.0, theta))


def theoretical_risk(
    P: Povm, dual: DualFrame, rho, scheme: Scheme, basis: HermitianBasis | None = None
) -> float:
    """Haar-averaged single-shot risk (1/n) sum_i lambda_i <Q_i,Q_i> - Tr(rho_*^2).

    Divide by the number of shots for the mean squared error of S-shot
    frequencies.
    """
    basis = basis or build_basis(P.n)
    _check_dims(P, scheme, basis)
    rho = np.asarray(rho)
    if rho.shape != (P.n, P.n) or dual.n != P.n or dual.N != P.N:
        raise DimensionError("state, POVM and dual frame dimensions disagree")
    rs = estimated_part(rho, scheme, basis)
    return dual_cost(P, dual, basis) / P.n - float(np.trace(rs @ rs).real)


def comparison_povm(D: DifferenceSet, mix: float, rng: np.random.Generator) -> Povm:
    """Non-symmetric POVM with the same N and known-diagonal scheme as the construction.

    The fiducial projector n|phi><phi| (all-ones matrix J) is perturbed to the
    correlation matrix G = (1 - mix) J + mix K, K a random correlation matrix,
    and the orbit F_k = U^k G U^-k / N is taken. Unit diagonal of G keeps every
    element orthogonal to the diagonal part and makes the orbit sum to I;
    the uneven moduli |G_ab| break the equal overlaps.
    """
    n, N = D.n, D.N
    if not 0 <= mix < 1:
        raise ValueError("mix must lie in [0, 1)")
    W = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    K = W @ W.conj().T
    d = np.sqrt(np.diag(K).real)
    K = K / np.outer(d, d)
    G = (1 - mix) * np.ones((n, n)) + mix * K
    U = shift_unitary(D)
    Uk = [np.linalg.matrix_power(U, k) for k in range(N)]
    return Povm(np.array([u @ G @ u.conj().T for u in Uk]) / N)
