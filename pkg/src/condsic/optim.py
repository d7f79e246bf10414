"""Numerical search for conditional SIC-POVMs.

The search space is N unit vectors v_i in C^n with fixed weights n/N, i.e. a
product of spheres. The objective is

    || F(v) - A - (n-1)/(N-1) C ||^2 + mu * sum_{i, k in B} <sigma_k, P_i>^2

with F(v) the frame superoperator of F_i = (n/N) |v_i><v_i|. It vanishes
exactly on conditional SIC-POVMs of the scheme.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .csic import CsicCertificate, Povm, certify_csic, optimal_superoperator
from .matspace import HermitianBasis, Scheme, build_basis
from .tomo import trial_rng


@dataclass(frozen=True)
class OptimConfig:
    n: int
    scheme: Scheme
    restarts: int = 8
    max_iters: int = 20000
    step_rule: str = "backtracking"
    step: float = 0.5
    objective_tol: float = 1e-14
    penalty: float = 1.0
    seed: int = 0
    certify_tol: float = 1e-4

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if self.objective_tol <= 0:
            raise ValueError("objective_tol must be positive")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if self.scheme.n != self.n:
            raise ValueError("scheme dimension does not match n")


@dataclass
class OptimReport:
    best_objective: float
    converged: bool
    iterations: int
    restart: int
    vectors: np.ndarray = field(repr=False)
    certificate: CsicCertificate | None = None
    history: list[float] = field(default_factory=list, repr=False)
    objectives: list[float] = field(default_factory=list)  # final objective per restart

    def povm(self, tol: float = 1e-4) -> Povm:
        return Povm.from_vectors(self.vectors, tol=tol)


class _Problem:
    """Objective and Riemannian gradient for a fixed scheme."""

    def __init__(self, scheme: Scheme, penalty: float = 1.0, basis: HermitianBasis | None = None):
        self.scheme = scheme
        self.n = scheme.n
        self.N = scheme.N
        self.basis = basis or build_basis(self.n)
        self.sigma = self.basis.elements
        self.target = optimal_superoperator(scheme).matrix
        self.bmask = scheme.mask("B").astype(float)
        self.penalty = penalty

    def _check(self, V):
        V = np.asarray(V, dtype=complex)
        if V.shape != (self.N, self.n):
            raise ValueError(
                f"need N = n^2 - m = {self.N} vectors in C^{self.n}, got shape {V.shape}"
            )
        return V

    def _coords(self, V):
        return np.einsum("ki,aij,kj->ka", V.conj(), self.sigma, V).real

    def value_and_grad(self, V, grad: bool = True):
        V = self._check(V)
        c = self._coords(V)
        w_ = self.n / self.N
        R = w_ * c.T @ c - self.target
        cb = c * self.bmask
        f = float(np.sum(R * R) + self.penalty * np.sum(cb * cb))
        if not grad:
            return f, None
        dc = 4 * w_ * c @ R + 2 * self.penalty * cb
        H = np.tensordot(dc, self.sigma, axes=(1, 0))
        G = 2 * np.einsum("kij,kj->ki", H, V)
        radial = np.einsum("ki,ki->k", V.conj(), G).real
        return f, G - radial[:, None] * V


def objective(vectors, scheme: Scheme, penalty: float = 1.0) -> float:
    return _Problem(scheme, penalty).value_and_grad(vectors, grad=False)[0]


def gradient(vectors, scheme: Scheme, penalty: float = 1.0) -> np.ndarray:
    """Riemannian gradient: the ambient gradient projected onto each sphere's tangent space."""
    return _Problem(scheme, penalty).value_and_grad(vectors)[1]


def _normalize(V):
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def gauge(V) -> np.ndarray:
    """Rotate each vector's phase so its first nonzero component is real and nonnegative."""
    V = np.array(V, dtype=complex)
    for row in V:
        nz = np.flatnonzero(np.abs(row) > 1e-15)
        if nz.size:
            a = row[nz[0]]
            row *= np.conj(a) / abs(a)
            row[nz[0]] = abs(a)
    return V


def random_start(N: int, n: int, rng: np.random.Generator) -> np.ndarray:
    return _normalize(rng.standard_normal((N, n)) + 1j * rng.standard_normal((N, n)))


def descend(problem: _Problem, V, config: OptimConfig):
    """Projected gradient descent with renormalization; returns (V, f, iterations, history)."""
    f, g = problem.value_and_grad(V)
    t = config.step
    history = [f]
    it = 0
    while it < config.max_iters and f >= config.objective_tol:
        it += 1
        gg = float(np.sum(np.abs(g) ** 2))
        if gg < 1e-300:
            break
        if config.step_rule == "fixed":
            V = _normalize(V - t * g)
            f, g = problem.value_and_grad(V)
        else:
            while True:
                Vn = _normalize(V - t * g)
                fn, gn = problem.value_and_grad(Vn)
                if fn <= f - 1e-4 * t * gg:
                    V, f, g = Vn, fn, gn
                    t *= 2.0
                    break
                t *= 0.5
                if t < 1e-16:
                    history.append(f)
                    return V, f, it, history
        history.append(f)
    return V, f, it, history


def _run_restart(args):
    config, r = args
    problem = _Problem(config.scheme, config.penalty)
    V0 = random_start(problem.N, problem.n, trial_rng(config.seed, r))
    V, f, it, hist = descend(problem, V0, config)
    return V, f, it, hist


def search(config: OptimConfig, workers: int = 1) -> OptimReport:
    """Best-of-restarts descent. Restart r is seeded by (seed, r) only, so the
    result does not depend on `workers`; ties go to the lowest restart index."""
    jobs = [(config, r) for r in range(config.restarts)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_restart, jobs))
    else:
        results = [_run_restart(j) for j in jobs]
    finals = [res[1] for res in results]
    best = int(np.argmin(finals))
    V, f, _, hist = results[best]
    converged = f < config.objective_tol
    V = gauge(V)
    cert = None
    if converged:
        try:
            cert = certify_csic(Povm.from_vectors(V, tol=config.certify_tol), config.scheme,
                                tol=config.certify_tol)
        except ValueError:
            cert = None
    return OptimReport(
        best_objective=f,
        converged=converged,
        iterations=sum(res[2] for res in results),
        restart=best,
        vectors=V,
        certificate=cert,
        history=hist,
        objectives=finals,
    )
