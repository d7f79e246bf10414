"""Cyclic difference sets modulo N.

A set D of n residues mod N is an (N, n, lam) difference set when every
nonzero residue occurs exactly lam times among the differences a - b
(a != b in D). Planar sets (lam = 1) have N = n^2 - n + 1 and exist
whenever the order n - 1 is a prime power (Singer's construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .finite_field import GF, prime_power

SEARCH_MAX_N = 500
CERTIFY_MAX_N = 10**5


@dataclass(frozen=True)
class DifferenceSet:
    N: int
    residues: tuple[int, ...]
    lam: int = 1

    def __post_init__(self):
        res = _validate_residues(self.residues, self.N)
        object.__setattr__(self, "residues", tuple(sorted(res)))
        if self.lam < 1:
            raise ValueError("multiplicity must be positive")
        if not certify(self.residues, self.N, self.lam):
            raise ValueError(f"{list(self.residues)} is not an ({self.N}, {self.n}, {self.lam}) difference set")

    @property
    def n(self) -> int:
        return len(self.residues)

    def to_dict(self) -> dict:
        return {"N": self.N, "n": self.n, "lambda": self.lam, "residues": list(self.residues)}

    @classmethod
    def from_dict(cls, data: dict) -> "DifferenceSet":
        ds = cls(int(data["N"]), tuple(int(r) for r in data["residues"]), int(data.get("lambda", 1)))
        if "n" in data and int(data["n"]) != ds.n:
            raise ValueError(f"declared n={data['n']} but {ds.n} residues given")
        return ds


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`certify`: pass flag plus the count of every nonzero difference."""

    passed: bool
    N: int
    lam: int
    counts: tuple[int, ...]  # counts[s-1] = multiplicity of difference s
    counting_ok: bool

    def __bool__(self) -> bool:
        return self.passed

    def table(self) -> str:
        lines = [f"{'diff':>6}{'count':>7}{'':>4}"]
        for s, c in enumerate(self.counts, start=1):
            flag = "" if c == self.lam else "  <-"
            lines.append(f"{s:>6}{c:>7}{flag}")
        lines.append(f"counting identity n(n-1) = lam(N-1): {'ok' if self.counting_ok else 'FAILS'}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _validate_residues(residues: Iterable[int], N: int) -> list[int]:
    if N < 1:
        raise ValueError(f"modulus must be positive, got {N}")
    res = [int(r) for r in residues]
    if any(r < 0 or r >= N for r in res):
        raise ValueError(f"residues must lie in [0, {N - 1}]")
    if len(set(res)) != len(res):
        raise ValueError("residues contain duplicates")
    return res


def difference_counts(residues: Sequence[int], N: int) -> np.ndarray:
    """counts[s] = #{(a, b) : a != b, a - b = s mod N}; counts[0] is 0."""
    r = np.asarray(residues, dtype=np.int64)
    diffs = (r[:, None] - r[None, :]) % N
    counts = np.bincount(diffs.ravel(), minlength=N)
    counts[0] = 0
    return counts


def certify(residues: Sequence[int], N: int, lam: int = 1) -> Certificate:
    res = _validate_residues(residues, N)
    if N > CERTIFY_MAX_N:
        raise ValueError(f"certify supports N <= {CERTIFY_MAX_N}")
    n = len(res)
    counting_ok = n * (n - 1) == lam * (N - 1)
    counts = difference_counts(res, N)[1:]
    passed = counting_ok and bool(np.all(counts == lam))
    return Certificate(passed, N, lam, tuple(int(c) for c in counts), counting_ok)


def character_sums(residues: Sequence[int], N: int) -> np.ndarray:
    """|sum_a q^(m a)|^2 for m = 0..N-1 with q = exp(2 pi i / N)."""
    r = np.asarray(residues)
    m = np.arange(N)
    s = np.exp(2j * np.pi * np.outer(m, r) / N).sum(axis=1)
    return np.abs(s) ** 2


def _images(residues: Sequence[int], N: int, u: int):
    scaled = [(u * a) % N for a in residues]
    for g in range(N):
        yield tuple(sorted((a + g) % N for a in scaled))


def normalize(residues: Sequence[int], N: int) -> tuple[int, ...]:
    """Lexicographically smallest translate containing both 0 and 1.

    Every difference set with lam >= 1 has 1 as a difference, so such a
    translate exists. Sets of size < 2 are translated so that 0 is the minimum.
    """
    res = _validate_residues(residues, N)
    if len(res) < 2:
        return tuple(sorted((a - min(res)) % N for a in res)) if res else ()
    best = None
    for img in _images(res, N, 1):
        if len(img) >= 2 and img[0] == 0 and img[1] == 1 and (best is None or img < best):
            best = img
    if best is None:
        raise ValueError("no translate contains both 0 and 1")
    return best


def canonical(residues: Sequence[int], N: int) -> tuple[int, ...]:
    """Lexicographic minimum over all images u*D + g, u a unit mod N."""
    res = _validate_residues(residues, N)
    return min(img for u in range(1, N) if gcd(u, N) == 1 for img in _images(res, N, u))


def equivalent(d1, d2) -> bool:
    """True iff d2 = u*d1 + g mod N for some unit u and shift g."""
    if d1.N != d2.N or d1.n != d2.n or d1.lam != d2.lam:
        raise ValueError(
            f"parameter mismatch: ({d1.N},{d1.n},{d1.lam}) vs ({d2.N},{d2.n},{d2.lam})"
        )
    target = tuple(sorted(d2.residues))
    N = d1.N
    return any(
        img == target for u in range(1, N) if gcd(u, N) == 1 for img in _images(d1.residues, N, u)
    )


def equivalent_residues(r1: Sequence[int], r2: Sequence[int], N: int) -> bool:
    """:func:`equivalent` on raw residue lists; False unless both are certified sets."""
    if len(r1) != len(r2):
        return False
    n = len(r1)
    if n < 2 or (n * (n - 1)) % (N - 1):
        return False
    lam = n * (n - 1) // (N - 1)
    if not (certify(r1, N, lam) and certify(r2, N, lam)):
        return False
    return equivalent(DifferenceSet(N, tuple(r1), lam), DifferenceSet(N, tuple(r2), lam))


def search(N: int, n: int) -> DifferenceSet | None:
    """Lexicographically smallest planar (N, n, 1) set containing 0 and 1, or None.

    Depth-first over increasing residues with a bitmask of differences already
    used; a candidate is pruned as soon as one of its differences repeats.
    """
    if n < 2 or N < 3 or n * (n - 1) != N - 1:
        return None
    if N > SEARCH_MAX_N:
        raise ValueError(f"search supports N <= {SEARCH_MAX_N}")
    full = (1 << N) - 1

    def diff_mask(c: int, chosen: list[int]) -> int | None:
        mask = 0
        for a in chosen:
            d = c - a
            bits = (1 << d) | (1 << (N - d))
            if mask & bits:
                return None
            mask |= bits
        return mask

    chosen = [0, 1]
    used = (1 << 1) | (1 << (N - 1))

    def extend(start: int, used: int) -> bool:
        if len(chosen) == n:
            return used | 1 == full
        remaining = n - len(chosen)
        for c in range(start, N - remaining + 1):
            m = diff_mask(c, chosen)
            if m is None or m & used:
                continue
            chosen.append(c)
            if extend(c + 1, used | m):
                return True
            chosen.pop()
        return False

    if n == 2:
        return DifferenceSet(N, (0, 1)) if used | 1 == full else None
    if extend(2, used):
        return DifferenceSet(N, tuple(chosen))
    return None


def singer(s: int) -> DifferenceSet:
    """Planar difference set of order s (a prime power) from a Singer cycle.

    With g primitive in GF(s^3), the exponents i mod N = s^2 + s + 1 for which
    the trace of g^i down to GF(s) vanishes form an (N, s + 1, 1) set.
    """
    pk = prime_power(s)
    if pk is None:
        raise ValueError(f"{s} is not a prime power")
    p, k = pk
    field = GF(p, 3 * k)
    N = s * s + s + 1
    D = [i for i in range(N) if field.relative_trace(field.power(i), s) == field.zero]
    return DifferenceSet(N, normalize(D, N))


LISTED_SETS = {
    2: (3, (0, 1)),
    3: (7, (0, 1, 3)),
    4: (13, (0, 1, 3, 9)),
    5: (21, (0, 1, 4, 14, 16)),
}
"""Planar sets for n = 2..5 as commonly listed: n -> (N, residues)."""


def planar_set(n: int) -> DifferenceSet:
    """A planar difference set of size n, from Singer's construction.

    Raises ValueError when n - 1 is not a prime power.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n == 2:
        # order 1: GF(1) does not exist, but {0, 1} mod 3 is the degenerate plane
        return DifferenceSet(3, (0, 1))
    return singer(n - 1)
