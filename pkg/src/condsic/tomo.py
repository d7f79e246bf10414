"""Monte-Carlo tomography with linear dual-frame reconstruction.

Each trial draws a state, samples S outcomes of the POVM, reconstructs the
unknown part with the dual frame and records the squared Hilbert-Schmidt
error. The mean over trials is compared with the per-state theoretical
risk divided by S.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .csic import DualFrame, Povm, canonical_dual, dual_coords, dual_cost
from .matspace import TOL, DimensionError, HermitianBasis, Scheme, build_basis

STATE_MODELS = ("haar-pure", "hs-mixed", "fixed")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial; depends only on (seed, trial)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of R removed."""
    if n < 1:
        raise DimensionError(f"need n >= 1, got {n}")
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def sample_state(model: str, n: int, rng: np.random.Generator, rho=None) -> np.ndarray:
    """Draw a density matrix.

    haar-pure : U |e_1><e_1| U^dagger with U Haar-random.
    hs-mixed  : G G^dagger / Tr(G G^dagger), G complex Gaussian n x n.
    fixed     : returns `rho` unchanged.
    """
    if model == "haar-pure":
        v = haar_unitary(n, rng)[:, 0]
        return np.outer(v, v.conj())
    if model == "hs-mixed":
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        W = G @ G.conj().T
        return W / np.trace(W).real
    if model == "fixed":
        if rho is None:
            raise ValueError("fixed state model needs a density matrix")
        return np.asarray(rho)
    raise ValueError(f"unknown state model {model!r}; expected one of {STATE_MODELS}")


def probabilities(rho, P: Povm, tol: float = TOL) -> np.ndarray:
    """Outcome probabilities Tr(rho F_i), clamped at zero and renormalized."""
    rho = np.asarray(rho)
    if rho.shape != (P.n, P.n):
        raise DimensionError(f"state shape {rho.shape} does not match POVM dimension {P.n}")
    p = np.einsum("ij,kji->k", rho, P.elements).real
    if p.min() < -tol:
        raise ValueError(f"negative probability {p.min():.3g}")
    total = p.sum()
    if abs(total - 1) > tol:
        raise ValueError(f"probabilities sum to {total!r}")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def sample_counts(p, shots: int, rng: np.random.Generator) -> np.ndarray:
    return rng.multinomial(shots, p)


def reconstruct(p_hat, dual: DualFrame, knownpart=None) -> np.ndarray:
    """sum_i p_i Q_i, plus the known part B rho if given."""
    p_hat = np.asarray(p_hat, dtype=float)
    if p_hat.shape != (dual.N,):
        raise ValueError(f"frequency vector of length {p_hat.size}, dual frame has {dual.N} elements")
    est = np.tensordot(p_hat, dual.elements, axes=(0, 0))
    return est if knownpart is None else est + knownpart


@dataclass
class SimConfig:
    n: int
    scheme: Scheme
    povm: Povm
    state_model: str = "haar-pure"
    shots: int = 1000
    trials: int = 1000
    seed: int = 0
    rho: np.ndarray | None = field(default=None, repr=False)
    exact: bool = False  # exact probabilities instead of sampled frequencies

    def __post_init__(self):
        if self.shots < 1 or self.trials < 1:
            raise ValueError("shots and trials must be >= 1")
        if self.state_model not in STATE_MODELS:
            raise ValueError(f"unknown state model {self.state_model!r}")
        if self.state_model == "fixed" and self.rho is None:
            raise ValueError("fixed state model needs rho")
        if not (self.povm.n == self.scheme.n == self.n):
            raise DimensionError("n, scheme and POVM dimensions disagree")
        if self.povm.N != self.scheme.N:
            raise ValueError(
                f"POVM has {self.povm.N} elements but the scheme needs N = n^2 - m = {self.scheme.N}"
            )


@dataclass
class SimResult:
    mean_sq_error: float
    std_error: float
    theoretical_mean: float
    sq_errors: np.ndarray = field(repr=False)
    theoretical: np.ndarray = field(repr=False)  # per-trial T / S

    def summary(self) -> dict:
        return {
            "mean": self.mean_sq_error,
            "std_error": self.std_error,
            "theoretical_mean": self.theoretical_mean,
            "trials": int(self.sq_errors.size),
        }

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "sq_error", "theoretical_T"])
        for t, (e, th) in enumerate(zip(self.sq_errors, self.theoretical)):
            w.writerow([t, repr(float(e)), repr(float(th))])
        return buf.getvalue()


def run(config: SimConfig, dual: DualFrame | None = None,
        basis: HermitianBasis | None = None, keep_estimates: bool = False):
    """Run the simulation; see module docstring.

    Returns a SimResult, or (SimResult, estimates, targets) when
    `keep_estimates` is set, with estimates/targets the per-trial basis
    coordinates of the reconstructed and true estimated parts.
    """
    basis = basis or build_basis(config.n)
    P = config.povm
    scheme = config.scheme
    if dual is None:
        dual = canonical_dual(P, scheme, basis)
    q = dual_coords(dual, basis)  # (N, n^2)
    estimated = ~scheme.mask("B")
    cost = dual_cost(P, dual, basis) / config.n
    S = config.shots

    errs = np.empty(config.trials)
    theo = np.empty(config.trials)
    if keep_estimates:
        est_all = np.empty((config.trials, config.n**2))
        tgt_all = np.empty((config.trials, config.n**2))
    for t in range(config.trials):
        rng = trial_rng(config.seed, t)
        rho = sample_state(config.state_model, config.n, rng, config.rho)
        theta = basis.coords(rho)
        target = np.where(estimated, theta, 0.0)
        p = probabilities(rho, P)
        p_hat = p if config.exact else sample_counts(p, S, rng) / S
        est = p_hat @ q
        diff = est - target
        errs[t] = diff @ diff
        theo[t] = (cost - target @ target) / S
        if keep_estimates:
            est_all[t] = est
            tgt_all[t] = target
    n_tr = errs.size
    std = float(np.std(errs, ddof=1) / np.sqrt(n_tr)) if n_tr > 1 else 0.0
    result = SimResult(float(np.mean(errs)), std, float(np.mean(theo)), errs, theo)
    if keep_estimates:
        return result, est_all, tgt_all
    return result
