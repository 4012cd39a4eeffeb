"""Monomials packed into a single Python integer.

Each variable owns a fixed-width bit field whose top bit is a guard bit that
is always zero in a valid monomial. The largest variable sits in the most
significant field, so integer comparison of packed monomials is pure lex
comparison. Divisibility, lcm and gcd are computed for all fields at once
with guarded subtraction.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .symmetry import Monomial, Variable

FIELD_BITS = 16


class PackedRing:
    """Packing codec for a fixed, ordered variable list.

    ``variables`` must be given in descending order; ``weights`` (default 1)
    define the weighted degree used for pair selection.
    """

    def __init__(self, variables: Sequence[Variable], weights: Optional[Sequence[int]] = None, bits: int = FIELD_BITS):
        self.variables = tuple(variables)
        self.index = {v: k for k, v in enumerate(self.variables)}
        if len(self.index) != len(self.variables):
            raise ValueError("duplicate variables")
        V = self.nvars = len(self.variables)
        B = self.bits = bits
        self.weights = tuple(weights) if weights is not None else (1,) * V
        if len(self.weights) != V or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self.shifts = tuple((V - 1 - k) * B for k in range(V))
        self.guard = sum(1 << (s + B - 1) for s in self.shifts)
        self.field_mask = (1 << B) - 1
        self.max_exponent = (1 << (B - 1)) - 1
        # weighted degree: the top field of a * wones collects sum_k w_k e_k
        self.wones = sum(w << self.shifts[V - 1 - k] for k, w in enumerate(self.weights))
        self.top = (V - 1) * B if V else 0
        self.max_weight = max(self.weights, default=1)

    def pack(self, m: Monomial) -> int:
        a = 0
        for v, e in m:
            if e > self.max_exponent:
                raise OverflowError(f"exponent {e} exceeds packed field capacity")
            a += e << self.shifts[self.index[v]]
        self.check(a)
        return a

    def unpack(self, a: int) -> Monomial:
        fm, B = self.field_mask, self.bits
        out = []
        k = self.nvars - 1
        while a:
            e = a & fm
            if e:
                out.append((self.variables[k], e))
            a >>= B
            k -= 1
        return Monomial(out)

    def exponents(self, a: int) -> list[int]:
        return [(a >> s) & self.field_mask for s in self.shifts]

    def check(self, a: int) -> None:
        """Raise if ``a`` is too large for exact weighted-degree and guard arithmetic."""
        if a & self.guard:
            raise OverflowError("packed exponent overflow")
        if self.max_weight * sum(self.exponents(a)) > self.max_exponent:
            raise OverflowError("degree too large for packed arithmetic")

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def _diff(self, a: int, b: int) -> int:
        # fieldwise max(a - b, 0) ... expressed as the positive part of b - a, see lcm/gcd
        B = self.bits
        t = (b | self.guard) - a
        m = (t & self.guard) >> (B - 1)
        return t & ((m << (B - 1)) - m)

    def lcm(self, a: int, b: int) -> int:
        return a + self._diff(a, b)

    def gcd(self, a: int, b: int) -> int:
        return b - self._diff(a, b)

    def degree(self, a: int) -> int:
        if not self.nvars:
            return 0
        return ((a * self.wones) >> self.top) & self.field_mask

    def topvar(self, a: int) -> int:
        """Index of the largest variable dividing ``a`` (``a`` nonzero)."""
        return self.nvars - 1 - (a.bit_length() - 1) // self.bits

    def support(self, a: int) -> list[int]:
        fm, B = self.field_mask, self.bits
        out = []
        k = self.nvars - 1
        while a:
            if a & fm:
                out.append(k)
            a >>= B
            k -= 1
        return out
