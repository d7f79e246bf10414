"""Small prime-power finite fields GF(p^m) with log/antilog tables.

Elements are tuples of coefficients (c_0, ..., c_{m-1}) over GF(p) in the
polynomial basis modulo the lexicographically smallest monic primitive
polynomial of degree m. The class x of that polynomial is the primitive
element, so every nonzero element is x^i for a unique 0 <= i < p^m - 1.
Meant for fields of a few thousand elements at most.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from sympy import factorint


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p**k for a prime p, or None."""
    if q < 2:
        return None
    f = factorint(q)
    if len(f) != 1:
        return None
    ((p, k),) = f.items()
    return int(p), int(k)


def _mulx_table(p: int, poly: tuple[int, ...]):
    # x^m = -(poly_0 + poly_1 x + ... + poly_{m-1} x^{m-1})
    return tuple((-c) % p for c in poly)


def _power_sequence(p: int, poly: tuple[int, ...], limit: int) -> list[tuple[int, ...]] | None:
    """Powers x^0, x^1, ... until returning to 1; None if that takes more than `limit` steps."""
    m = len(poly)
    red = _mulx_table(p, poly)
    cur = (1,) + (0,) * (m - 1)
    one = cur
    seq = [cur]
    for _ in range(limit):
        top = cur[-1]
        shifted = (0,) + cur[:-1]
        cur = tuple((s + top * r) % p for s, r in zip(shifted, red))
        if cur == one:
            return seq
        seq.append(cur)
    return None


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, m: int) -> tuple[int, ...]:
    """Lowest-order coefficients (a_0, ..., a_{m-1}) of the lexicographically
    smallest monic primitive polynomial x^m + a_{m-1}x^{m-1} + ... + a_0.

    Lexicographic order compares (a_{m-1}, ..., a_0). Primitivity is checked
    exhaustively: x must have multiplicative order exactly p^m - 1.
    """
    order = p**m - 1
    for high_first in product(range(p), repeat=m):
        poly = tuple(reversed(high_first))
        if poly[0] == 0:
            continue
        seq = _power_sequence(p, poly, order)
        if seq is not None and len(seq) == order:
            return poly
    raise ValueError(f"no primitive polynomial of degree {m} over GF({p})")  # unreachable


class GF:
    """The field GF(p^m)."""

    def __init__(self, p: int, m: int = 1):
        if prime_power(p) != (p, 1):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.m = m
        self.order = p**m
        self.modulus = primitive_polynomial(p, m)
        self.exp = _power_sequence(p, self.modulus, self.order - 1)
        self.log = {e: i for i, e in enumerate(self.exp)}
        self.zero = (0,) * m

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def power(self, i: int) -> tuple[int, ...]:
        """x^i for the primitive element x."""
        return self.exp[i % (self.order - 1)]

    def add(self, a, b):
        return tuple((u + v) % self.p for u, v in zip(a, b))

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def pow(self, a, e: int):
        if a == self.zero:
            return self.zero if e > 0 else self.exp[0]
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def relative_trace(self, a, sub_order: int):
        """Trace from this field down to its subfield with `sub_order` elements."""
        r = 1
        degree = 0
        while r < self.order:
            r *= sub_order
            degree += 1
        if r != self.order:
            raise ValueError(f"GF({sub_order}) is not a subfield of {self!r}")
        total = self.zero
        e = 1
        for _ in range(degree):
            total = self.add(total, self.pow(a, e))
            e *= sub_order
        return total
