"""Buchberger's algorithm specialised to binomial ideals.

Two independent reduction routes exist on purpose: ``reduce`` works on
``Monomial`` objects with optional random divisor choice, while
``buchberger_reduced`` runs on packed integers with the Gebauer-Moeller
pair criteria.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .errors import OrderError
from .packed import PackedRing
from .symmetry import LEX, Binomial, Monomial, MonomialOrder, Variable, divides_with_quotient, lcm


@dataclass(frozen=True)
class BinomialBasis:
    order: MonomialOrder
    elements: frozenset
    reduced: bool = False

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, f) -> bool:
        return f in self.elements

    def sorted(self) -> list:
        k = self.order.key
        return sorted(self.elements, key=lambda b: (b.degree, k(b.lead), k(b.tail)))


def spair(f: Binomial, g: Binomial, order: MonomialOrder = LEX) -> Optional[Binomial]:
    """S-binomial ``(l/lead f) tail f - (l/lead g) tail g`` with ``l = lcm`` of the leads."""
    l = lcm(f.lead, g.lead)
    s1 = divides_with_quotient(f.lead, l) * f.tail
    s2 = divides_with_quotient(g.lead, l) * g.tail
    return Binomial.make(s1, s2, order)


def normal_monomial(m: Monomial, G: Iterable[Binomial], rng: Optional[random.Random] = None) -> Monomial:
    """Fully reduce a single monomial; ``rng`` picks a random divisor at each step."""
    G = list(G)
    while True:
        hits = []
        for g in G:
            q = divides_with_quotient(g.lead, m)
            if q is not None:
                hits.append((g, q))
                if rng is None:
                    break
        if not hits:
            return m
        g, q = rng.choice(hits) if rng is not None else hits[0]
        m = q * g.tail


def reduce(
    f: Binomial,
    G: Iterable[Binomial],
    rng: Optional[random.Random] = None,
    order: Optional[MonomialOrder] = None,
) -> Optional[Binomial]:
    """Normal form of ``f`` modulo ``G``, or ``None`` if it reduces to zero.

    The result is oriented under ``order``, defaulting to the basis order when
    ``G`` is a ``BinomialBasis`` and to lex otherwise.
    """
    if isinstance(G, BinomialBasis):
        order = order or G.order
        G = G.elements
    order = order or LEX
    G = list(G)
    a = normal_monomial(f.lead, G, rng)
    b = normal_monomial(f.tail, G, rng)
    return Binomial.make(a, b, order)


class PackedEngine:
    """Buchberger loop on packed binomials ``(lead, tail)``.

    With ``toric=True`` common factors of the two terms are cancelled during
    reduction. This computes the saturation by the product of all variables,
    which equals the ideal itself exactly when it is prime (graph ideals of
    monomial maps are).
    """

    def __init__(
        self,
        ring: PackedRing,
        key: Optional[Callable[[int], object]] = None,
        toric: bool = False,
        max_degree: Optional[int] = None,
    ):
        self.ring = ring
        self.max_degree = max_degree
        self.key = key
        self.toric = toric
        self.G: list = []
        self.active: list = []
        self.buckets: list = [[] for _ in range(ring.nvars)]
        self.pairs: dict = {}
        self.heap: list = []
        self.pairs_reduced = 0

    def less(self, a: int, b: int) -> bool:
        if self.key is None:
            return a < b
        return self.key(a) < self.key(b)

    def find(self, m: int) -> Optional[tuple]:
        guard = self.ring.guard
        mg = m | guard
        G = self.G
        for v in self.ring.support(m):
            for k in self.buckets[v]:
                L = G[k][0]
                if (mg - L) & guard == guard:
                    return G[k]
        return None

    def nf(self, m: int) -> int:
        while True:
            r = self.find(m)
            if r is None:
                return m
            m = m - r[0] + r[1]

    def reduce(self, a: int, b: int) -> Optional[tuple]:
        ring = self.ring
        while True:
            if a == b:
                return None
            if self.less(a, b):
                a, b = b, a
            if self.toric:
                g = ring.gcd(a, b)
                if g:
                    a -= g
                    b -= g
            r = self.find(a)
            if r is not None:
                a = a - r[0] + r[1]
                if a & ring.guard:
                    raise OverflowError("packed exponent overflow")
                continue
            b = self.nf(b)
            if b & ring.guard:
                raise OverflowError("packed exponent overflow")
            if a == b:
                return None
            if self.less(a, b):
                continue
            if self.toric and ring.gcd(a, b):
                continue
            return a, b

    def add(self, f: tuple) -> None:
        ring = self.ring
        G = self.G
        h = len(G)
        G.append(f)
        Lh = f[0]
        # criterion B on existing pairs
        for key, l in list(self.pairs.items()):
            i, j = key
            if ring.divides(Lh, l) and ring.lcm(G[i][0], Lh) != l and ring.lcm(G[j][0], Lh) != l:
                del self.pairs[key]
        cands = []
        for g in self.active:
            Lg = G[g][0]
            l = ring.lcm(Lg, Lh)
            cands.append((ring.degree(l), l - Lh, l, g, ring.gcd(Lg, Lh) == 0))
        cands.sort(key=lambda c: c[0])
        # criterion M through minimal cofactors, criterion F through equal-lcm classes
        minimal: list = []
        classes: dict = {}
        guard = ring.guard
        for c in cands:
            q = c[1]
            if q in classes:
                classes[q].append(c)
                continue
            qg = q | guard
            if any((qg - m) & guard == guard for m in minimal):
                continue
            minimal.append(q)
            classes[q] = [c]
        for cs in classes.values():
            if any(c[4] for c in cs):
                continue
            d, _, l, g, _ = cs[0]
            if self.max_degree is not None and d > self.max_degree:
                continue
            self.pairs[(g, h)] = l
            heapq.heappush(self.heap, (d, l, g, h))
        for g in list(self.active):
            if ring.divides(Lh, G[g][0]):
                self.active.remove(g)
                self.buckets[ring.topvar(G[g][0])].remove(g)
        self.active.append(h)
        self.buckets[ring.topvar(Lh)].append(h)

    def run(self, gens: Iterable[tuple]) -> list:
        ring = self.ring
        for a, b in sorted(gens, key=lambda x: (ring.degree(max(x)), max(x))):
            r = self.reduce(a, b)
            if r:
                self.add(r)
        while self.heap:
            d, l, i, j = heapq.heappop(self.heap)
            if self.pairs.get((i, j)) != l:
                continue
            del self.pairs[(i, j)]
            self.pairs_reduced += 1
            (a1, b1), (a2, b2) = self.G[i], self.G[j]
            r = self.reduce(l - a1 + b1, l - a2 + b2)
            if r:
                self.add(r)
        return self.autoreduce()

    def autoreduce(self) -> list:
        return [(self.G[k][0], self.nf(self.G[k][1])) for k in self.active]


def _ring_for(F: list, weights: Optional[Mapping[Variable, int]] = None) -> PackedRing:
    vs = set()
    for f in F:
        vs.update(f.lead.variables)
        vs.update(f.tail.variables)
    vs = sorted(vs, key=lambda v: v.sort_key, reverse=True)
    w = [weights.get(v, 1) for v in vs] if weights else None
    return PackedRing(vs, w)


def buchberger_reduced(
    F: Iterable[Binomial],
    order: MonomialOrder = LEX,
    toric: bool = False,
    weights: Optional[Mapping[Variable, int]] = None,
    max_degree: Optional[int] = None,
) -> BinomialBasis:
    """Reduced Groebner basis of the ideal generated by ``F``.

    ``toric=True`` is only valid for prime binomial ideals, for which it is
    much faster. ``weights`` define the grading used for pair selection.
    With ``max_degree`` S-pairs above that weighted degree are dropped: for
    an ideal homogeneous in the grading the result is then a Groebner basis
    up to that degree, exact for membership of elements of lower degree,
    and is flagged as not reduced.
    """
    F = [f for f in F if f is not None]
    if not F:
        return BinomialBasis(order, frozenset(), True)
    ring = _ring_for(F, weights)
    key = None
    if order.scheme != "lex-elim-z":
        cache: dict = {}

        def key(a: int):
            k = cache.get(a)
            if k is None:
                k = cache[a] = order.key(ring.unpack(a))
            return k

    eng = PackedEngine(ring, key, toric, max_degree)
    gens = [(ring.pack(f.lead), ring.pack(f.tail)) for f in F]
    out = eng.run(gens)
    elems = frozenset(Binomial(ring.unpack(a), ring.unpack(b)) for a, b in out)
    return BinomialBasis(order, elems, max_degree is None)


def eliminate(G: BinomialBasis) -> BinomialBasis:
    """Elements free of Z-variables."""
    if not G.order.eliminates_z:
        raise OrderError(f"order {G.order.scheme!r} does not eliminate the Z-variables")
    return BinomialBasis(G.order, frozenset(g for g in G.elements if not g.has_z()), G.reduced)


def _indexed_normal(m: Monomial, index: dict) -> Monomial:
    """Like ``normal_monomial``, with divisors looked up by the first variable of their lead."""
    while True:
        hit = None
        for v, _ in m:
            for g in index.get(v, ()):
                q = divides_with_quotient(g.lead, m)
                if q is not None:
                    hit = (g, q)
                    break
            if hit is not None:
                break
        if hit is None:
            return m
        g, q = hit
        m = q * g.tail


def is_groebner(G: Iterable[Binomial], order: MonomialOrder = LEX) -> bool:
    """Check that every S-binomial of ``G`` reduces to zero (sparse route).

    Pairs with coprime leads are skipped; their S-binomials always reduce to zero.
    """
    G = list(G)
    index: dict = {}
    for g in G:
        index.setdefault(g.lead.items[0][0], []).append(g)
    for i, f in enumerate(G):
        fv = set(f.lead.variables)
        for g in G[i + 1:]:
            if fv.isdisjoint(g.lead.variables):
                continue
            s = spair(f, g, order)
            if s is not None and _indexed_normal(s.lead, index) != _indexed_normal(s.tail, index):
                return False
    return True


def is_reduced(G: Iterable[Binomial]) -> bool:
    G = list(G)
    for g in G:
        for h in G:
            if h is g:
                continue
            if divides_with_quotient(h.lead, g.lead) is not None or divides_with_quotient(h.lead, g.tail) is not None:
                return False
    return True
