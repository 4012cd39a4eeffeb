"""Index-shift actions on binomial sets, the truncated equivariant Buchberger
loop, its certificate, bounded kernels of the matching map and Markov
minimisation.

Conventions. The *support* of a binomial is the set of indices occurring in
it; its *compression* relabels the support order-preservingly onto
``[s]``. A binomial with support ``[s]`` has as Inc-orbit inside ``[n]`` all
``C(n, s)`` order-preserving placements of ``[s]`` into ``[n]``.
"""
from __future__ import annotations

import itertools
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .buchberger import BinomialBasis, PackedEngine, buchberger_reduced, eliminate, reduce
from .errors import WidthCapExceeded, WindowError
from .mapspec import MapSpec, build_truncated_generators, omega_monomial
from .packed import PackedRing
from .symmetry import LEX, Y, Binomial, IncMap, Monomial, MonomialOrder, Variable, enumerate_y_variables, inc_maps

# --- orbits -----------------------------------------------------------------


def index_support(b: Binomial) -> tuple:
    return tuple(sorted(b.indices))


def relabel(b: Binomial, images: Sequence[int], order: MonomialOrder = LEX) -> Optional[Binomial]:
    """Apply ``j -> images[j]``; ``None`` if the two terms collide."""
    f = images.__getitem__
    return Binomial.make(b.lead.relabel(f), b.tail.relabel(f), order)


def compress(b: Binomial, order: MonomialOrder = LEX) -> Binomial:
    pos = {j: i for i, j in enumerate(index_support(b))}
    return Binomial.make(b.lead.relabel(pos.__getitem__), b.tail.relabel(pos.__getitem__), order)


def compress_all(G: Iterable[Binomial], order: MonomialOrder = LEX) -> list:
    return sorted({compress(g, order) for g in G}, key=lambda g: basis_sort_key(g, order))


def basis_sort_key(b: Binomial, order: MonomialOrder = LEX):
    return (b.degree, order.key(b.lead), order.key(b.tail))


def placements(b: Binomial, n: int, order: MonomialOrder = LEX) -> Iterator[Binomial]:
    """All order-preserving placements of the compression of ``b`` into ``[n]``."""
    c = compress(b, order)
    s = len(c.indices)
    for img in itertools.combinations(range(n), s):
        yield relabel(c, img, order)


def inc_expand(G: Iterable[Binomial], n: int, m: Optional[int] = None, order: MonomialOrder = LEX) -> set:
    """Shift ``G`` into width ``n``.

    With ``m`` given this is literally ``Inc(m, n) G``. Without it every
    element ``g`` is moved by ``Inc(window(g), n)``, which yields exactly the
    part of its Inc-orbit that fits into ``[n]``. The two agree when ``G``
    already contains every placement into ``[m]`` of its elements.
    """
    G = list(G)
    if m is not None and any(g.window > m for g in G):
        raise WindowError("element window exceeds the source width")
    out = set()
    for g in G:
        w = m if m is not None else g.window
        out.update(relabel(g, pi.images, order) for pi in inc_maps(w, n))
    return out


def inc_images(G: Iterable[Binomial], n: int, order: MonomialOrder = LEX) -> set:
    """Union of the placements of every element; the Inc-orbits of compressed elements."""
    return {h for g in G for h in placements(g, n, order)}


def sym_images(b: Binomial, n: int, order: MonomialOrder = LEX) -> set:
    """The Sym([n])-orbit of ``b`` (whose indices must lie in ``[n]``)."""
    if b.window > n:
        raise WindowError("binomial does not fit into the requested width")
    c = compress(b, order)
    s = len(c.indices)
    out = set()
    for img in itertools.permutations(range(n), s):
        h = relabel(c, img, order)
        if h is not None:
            out.add(h)
    return out


def canonical_sym(b: Binomial, order: MonomialOrder = LEX) -> Binomial:
    """Least element of the Sym-orbit of ``b`` supported on ``[s]``."""
    c = compress(b, order)
    s = len(c.indices)
    best = None
    for img in itertools.permutations(range(s)):
        h = relabel(c, img, order)
        if h is None:
            continue
        k = (order.key(h.lead), order.key(h.tail))
        if best is None or k < best[0]:
            best = (k, h)
    return best[1]


def is_inc_closed(G: Iterable[Binomial], n: int, order: MonomialOrder = LEX) -> bool:
    """Whether ``G`` contains every placement into ``[n]`` of each compression."""
    G = set(G)
    reps = {compress(g, order) for g in G}
    return len(G) == sum(math.comb(n, len(r.indices)) for r in reps) and inc_images(reps, n, order) == G


# --- packed width-n expansion -------------------------------------------------


def _variables(bs: Iterable[Binomial]) -> set:
    vs = set()
    for b in bs:
        vs.update(b.lead.variables)
        vs.update(b.tail.variables)
    return vs


class ShiftedBasis:
    """A finite binomial set packed for fast reduction and divisor search."""

    def __init__(self, elements: Iterable[Binomial], order: MonomialOrder = LEX, extra_variables: Iterable[Variable] = ()):
        self.order = order
        self.elements = sorted(set(elements), key=lambda b: basis_sort_key(b, order))
        vs = _variables(self.elements) | set(extra_variables)
        self.ring = PackedRing(sorted(vs, key=lambda v: v.sort_key, reverse=True))
        key = None
        if order.scheme != "lex-elim-z":
            cache: dict = {}

            def key(a: int):
                k = cache.get(a)
                if k is None:
                    k = cache[a] = order.key(self.ring.unpack(a))
                return k

        self.engine = PackedEngine(self.ring, key, toric=False)
        eng = self.engine
        for b in self.elements:
            L, T = self.ring.pack(b.lead), self.ring.pack(b.tail)
            eng.buckets[self.ring.topvar(L)].append(len(eng.G))
            eng.active.append(len(eng.G))
            eng.G.append((L, T))

    def __len__(self) -> int:
        return len(self.elements)

    def pack(self, m: Monomial) -> int:
        return self.ring.pack(m)

    def has_divisor_except(self, L: int, a: int, b: int) -> bool:
        """Whether some lead ``h`` divides ``L`` with ``lcm(h, a) != L`` and ``lcm(h, b) != L``."""
        ring = self.ring
        guard = ring.guard
        Lg = L | guard
        G = self.engine.G
        for v in ring.support(L):
            for k in self.engine.buckets[v]:
                h = G[k][0]
                if (Lg - h) & guard == guard and ring.lcm(h, a) != L and ring.lcm(h, b) != L:
                    return True
        return False

    def reduce_packed(self, a: int, b: int, cancel: bool = False) -> Optional[tuple]:
        self.engine.toric = cancel
        return self.engine.reduce(a, b)

    def reduce(self, f: Binomial, cancel: bool = False) -> Optional[Binomial]:
        r = self.reduce_packed(self.pack(f.lead), self.pack(f.tail), cancel)
        if r is None:
            return None
        return Binomial(self.ring.unpack(r[0]), self.ring.unpack(r[1]))


def equivariant_reduce(f: Binomial, G: Iterable[Binomial], n: int, order: MonomialOrder = LEX) -> Optional[Binomial]:
    """Normal form of ``f`` by all shifts of ``G`` that fit into width ``n``; ``None`` for zero."""
    if f.window > n:
        raise WindowError(f"binomial window {f.window} exceeds width {n}")
    G = list(G)
    if not G:
        return f
    E = inc_expand([g for g in G if g.window <= n], n, None, order)
    sb = ShiftedBasis(E, order, _variables([f]))
    return sb.reduce(f)


# --- equivariant Buchberger criterion ----------------------------------------


@dataclass
class CriterionVerdict:
    passed: bool
    width: int
    expanded: int = 0
    candidates: int = 0
    chain_skipped: int = 0
    reduced: int = 0
    counterexample: Optional[tuple] = None
    balanced: bool = True
    seconds: float = 0.0

    def __bool__(self) -> bool:
        return self.passed


def _partial_matchings(s: int, t: int) -> Iterator[tuple]:
    for k in range(1, min(s, t) + 1):
        for I in itertools.combinations(range(s), k):
            for J in itertools.combinations(range(t), k):
                yield tuple(zip(I, J))


def _interleavings(M: tuple, s: int, t: int) -> Iterator[tuple]:
    """Images ``(A, B)`` of ``[s]`` and ``[t]`` in ``[u]`` identifying matched pairs, covering ``[u]``."""
    gaps = []
    prev = (-1, -1)
    for i, j in list(M) + [(s, t)]:
        gaps.append((i - prev[0] - 1, j - prev[1] - 1))
        prev = (i, j)
    choices = [list(itertools.combinations(range(a + b), a)) for a, b in gaps]
    for ch in itertools.product(*choices):
        A, B = [], []
        pos = 0
        for gi, ((a, b), sel) in enumerate(zip(gaps, ch)):
            sel = set(sel)
            for q in range(a + b):
                (A if q in sel else B).append(pos)
                pos += 1
            if gi < len(M):
                A.append(pos)
                B.append(pos)
                pos += 1
        yield tuple(A), tuple(B)


def _lead_vars_meet(f: Binomial, g: Binomial, M: tuple) -> bool:
    d = dict(M)
    gv = set(g.lead.variables)
    for v in f.lead.variables:
        if all(j in d for j in v.idx):
            if Variable(v.kind, v.p, tuple(d[j] for j in v.idx)) in gv:
                return True
    return False


def verify_equivariant_criterion(
    G: Iterable[Binomial], n: int, order: MonomialOrder = LEX, cancel: bool = True
) -> CriterionVerdict:
    """Check that every S-binomial of the shifts of ``G`` reduces to zero by them.

    The shifts are the parts of the Inc-orbits of the elements that fit into
    width ``n`` (see ``inc_expand``); ``m`` is the largest window in ``G``
    and ``n`` must be at least ``2m - 1``.
    Pairs with coprime leads are skipped (Buchberger's first criterion), as
    are pairs admitting a third element whose lead divides the lcm while
    both partial lcms are proper divisors (the chain criterion). With
    ``cancel`` common factors are cancelled during reduction, which only
    shortens chains that end in zero for ordinary division as well.

    When the expansion consists of all placements of its compressions, pairs
    are enumerated up to the index shift through order-preserving partial
    matchings of supports; otherwise all pairs of the expansion are checked.
    """
    t0 = time.time()
    G = list(G)
    if not G:
        return CriterionVerdict(True, n)
    m = max(g.window for g in G)
    if n < 2 * m - 1:
        raise WindowError(f"width {n} is below the threshold 2*{m}-1")
    E = inc_expand(G, n, None, order)
    sb = ShiftedBasis(E, order)
    ring = sb.ring
    pack = sb.pack
    slot = {(v.kind, v.p, v.idx): ring.shifts[k] for k, v in enumerate(ring.variables)}
    verdict = CriterionVerdict(True, n, expanded=len(E))
    verdict.balanced = all(b.lead.indices == b.tail.indices for b in E)
    reps = compress_all(E, order)
    closed = len(E) == sum(math.comb(n, len(r.indices)) for r in reps)

    def flat(m: Monomial) -> list:
        return [(v.kind, v.p, v.idx, e) for v, e in m]

    def place(terms: list, A: tuple) -> int:
        return sum(e << slot[(kind, p, tuple(A[j] for j in idx))] for kind, p, idx, e in terms)

    def check_packed(Lf: int, Tf: int, Lg: int, Tg: int) -> bool:
        L = ring.lcm(Lf, Lg)
        verdict.candidates += 1
        if sb.has_divisor_except(L, Lf, Lg):
            verdict.chain_skipped += 1
            return True
        verdict.reduced += 1
        r = sb.reduce_packed(L - Lf + Tf, L - Lg + Tg, cancel)
        if r is not None:
            verdict.passed = False
            up = ring.unpack
            verdict.counterexample = (Binomial(up(Lf), up(Tf)), Binomial(up(Lg), up(Tg)), Binomial(up(r[0]), up(r[1])))
            return False
        return True

    def check(f: Binomial, g: Binomial) -> bool:
        return check_packed(pack(f.lead), pack(f.tail), pack(g.lead), pack(g.tail))

    if closed:
        flats = [(flat(r.lead), flat(r.tail)) for r in reps]
        for x, f in enumerate(reps):
            s = len(f.indices)
            fl, ft = flats[x]
            for y in range(x, len(reps)):
                g = reps[y]
                t = len(g.indices)
                gl, gt = flats[y]
                for M in _partial_matchings(s, t):
                    if not _lead_vars_meet(f, g, M):
                        continue
                    for A, B in _interleavings(M, s, t):
                        # order-preserving placements keep the orientation
                        Lf, Tf, Lg, Tg = place(fl, A), place(ft, A), place(gl, B), place(gt, B)
                        if Lf == Lg and Tf == Tg:
                            continue
                        if not check_packed(Lf, Tf, Lg, Tg):
                            verdict.seconds = time.time() - t0
                            return verdict
    else:
        by_var = defaultdict(list)
        El = sb.elements
        for i, e in enumerate(El):
            for v in e.lead.variables:
                by_var[v].append(i)
        for i, e in enumerate(El):
            partners = sorted({j for v in e.lead.variables for j in by_var[v] if j > i})
            for j in partners:
                if not check(e, El[j]):
                    verdict.seconds = time.time() - t0
                    return verdict
    verdict.seconds = time.time() - t0
    return verdict


# --- truncated equivariant Buchberger ----------------------------------------


@dataclass
class EqGB:
    """Stabilised result: ``basis`` is ``G_m`` restricted to y-variables."""

    spec: MapSpec
    m: int
    basis: BinomialBasis
    certificate_width: int
    full_basis: BinomialBasis = field(repr=False, default=None)
    transcript: list = field(default_factory=list, repr=False)

    @property
    def order(self) -> MonomialOrder:
        return self.basis.order

    @property
    def generators(self) -> list:
        """Inc-orbit representatives: the compressed elements of ``basis``."""
        return compress_all(self.basis.elements, self.order)


def truncated_gb(spec: MapSpec, n: int, order: MonomialOrder = LEX) -> BinomialBasis:
    """Reduced Groebner basis of the graph binomials of width ``n``."""
    F = build_truncated_generators(spec, n, order)
    return buchberger_reduced(F, order, toric=True, weights=spec.weights(n))


def truncated_equivariant_gb(
    spec: MapSpec,
    max_width: int = 12,
    order: MonomialOrder = LEX,
    strategy: str = "criterion",
    log=None,
) -> EqGB:
    """Run the truncation loop until ``G_n = Inc(m, n) G_m`` with ``m = (n+1)//2``.

    ``strategy="direct"`` computes ``G_n`` and compares it to the expansion of
    ``G_m`` as sets. ``strategy="criterion"`` instead accepts when ``G_m`` is
    closed under placements and the expansion to width ``n`` passes the
    equivariant Buchberger criterion; the expansion is then a reduced
    Groebner basis of width ``n`` and therefore equals ``G_n``.
    """
    if strategy not in ("criterion", "direct"):
        raise ValueError(f"unknown strategy {strategy!r}")
    kmax = spec.max_arity
    if max_width < kmax:
        raise WindowError(f"max width {max_width} is below the largest arity {kmax}")
    cache: dict = {}
    transcript: list = []

    def gb(w: int) -> BinomialBasis:
        if w not in cache:
            t = time.time()
            cache[w] = truncated_gb(spec, w, order)
            transcript.append({"event": "gb", "width": w, "size": len(cache[w]),
                               "y_size": len(eliminate(cache[w])), "seconds": round(time.time() - t, 3)})
        return cache[w]

    verdicts: dict = {}
    for n in range(kmax, max_width + 1):
        m = (n + 1) // 2
        if m < kmax:
            transcript.append({"event": "skip", "width": n, "m": m, "reason": "m below largest arity"})
            continue
        if strategy == "direct":
            Gn, Gm = gb(n), gb(m)
            expanded = inc_expand(Gm.elements, n, m, order)
            ok = expanded == set(Gn.elements)
            transcript.append({"event": "stop-test", "width": n, "m": m, "strategy": strategy, "passed": ok})
        else:
            if m not in verdicts:
                Gm = gb(m)
                closed = is_inc_closed(Gm.elements, m, order)
                v = verify_equivariant_criterion(Gm.elements, 2 * m - 1, order) if closed else None
                verdicts[m] = (closed, v)
            closed, v = verdicts[m]
            ok = bool(closed and v)
            entry = {"event": "stop-test", "width": n, "m": m, "strategy": strategy, "closed": closed, "passed": ok}
            if v is not None:
                entry.update(candidates=v.candidates, chain_skipped=v.chain_skipped, reduced=v.reduced,
                             seconds=round(v.seconds, 3))
            transcript.append(entry)
        if log is not None:
            log(transcript[-1])
        if ok:
            Gm = cache[m]
            return EqGB(spec, m, eliminate(Gm), n, Gm, transcript)
    raise WidthCapExceeded(f"no stabilisation up to width {max_width}", transcript)


# --- bounded kernel of the matching map --------------------------------------


def monomials_up_to(variables: Sequence[Variable], degree: int) -> Iterator[Monomial]:
    for d in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(variables, d):
            yield Monomial((v, 1) for v in combo)


def phi_kernel_bounded(phi_part: MapSpec, n: int, degree: Optional[int] = None, order: MonomialOrder = LEX) -> set:
    """Fiber-difference binomials of the matching map up to ``2 max k_p - 1``.

    Monomials of each fiber are sorted by the order and joined to the least
    one, which spans every fiber with a star.
    """
    if degree is None:
        degree = 2 * phi_part.max_arity - 1
    fibers = defaultdict(list)
    for mono in monomials_up_to(enumerate_y_variables(phi_part, n), degree):
        fibers[omega_monomial(phi_part, mono)].append(mono)
    out = set()
    for monos in fibers.values():
        if len(monos) < 2:
            continue
        monos.sort(key=order.key)
        root = monos[0]
        out.update(Binomial.make(x, root, order) for x in monos[1:])
    return out


# --- Markov minimisation -----------------------------------------------------


def _group_images(r: Binomial, s: int, mode: str, order: MonomialOrder) -> Iterator[Binomial]:
    t = len(r.indices)
    it = itertools.permutations(range(s), t) if mode == "sym" else itertools.combinations(range(s), t)
    for img in it:
        h = relabel(r, img, order)
        if h is not None:
            yield h


def fiber_connected(
    f: Binomial, moves: Iterable[Binomial], mode: str = "sym", order: MonomialOrder = LEX, weights=None
) -> bool:
    """Whether both terms of ``f`` are joined by orbit images of ``moves``.

    Moves act by replacing one side by the other inside the support of ``f``
    and never leave the fiber. For kernels whose binomials have equal
    supports on both sides this decides membership of ``f`` in the ideal
    generated by the orbits of ``moves``; ``mode`` selects Sym- or
    Inc-orbits.
    """
    comp = compress(f, order)
    s = len(comp.indices)

    def wdeg(m: Monomial) -> int:
        return sum(e * (weights(v) if weights else 1) for v, e in m)

    cap = max(wdeg(comp.lead), wdeg(comp.tail))
    imgs = set()
    for r in moves:
        if len(r.indices) > s:
            continue
        r = compress(r, order)
        if max(wdeg(r.lead), wdeg(r.tail)) > cap:
            continue
        imgs.update(_group_images(r, s, mode, order))
    vs = _variables([comp]) | _variables(imgs)
    ring = PackedRing(sorted(vs, key=lambda v: v.sort_key, reverse=True))
    buckets = defaultdict(list)
    for h in imgs:
        L, T = ring.pack(h.lead), ring.pack(h.tail)
        buckets[ring.topvar(L)].append((L, T))
        buckets[ring.topvar(T)].append((T, L))
    start, goal = ring.pack(comp.lead), ring.pack(comp.tail)
    seen = {start}
    frontier = [start]
    guard = ring.guard
    while frontier:
        nxt = []
        for w in frontier:
            wg = w | guard
            for v in ring.support(w):
                for u, t in buckets[v]:
                    if (wg - u) & guard == guard:
                        x = w - u + t
                        if x == goal:
                            return True
                        if x not in seen:
                            seen.add(x)
                            nxt.append(x)
        frontier = nxt
    return False


def orbit_representatives(G: Iterable[Binomial], mode: str, order: MonomialOrder = LEX) -> list:
    canon = canonical_sym if mode == "sym" else compress
    return sorted({canon(g, order) for g in G}, key=lambda g: basis_sort_key(g, order))


def markov_minimize(G: EqGB, mode: Optional[str] = None, log=None) -> list:
    """Inclusion-minimal set of orbit representatives generating the kernel.

    Candidates are the orbit representatives of the basis in ascending
    (degree, order). A first pass keeps a candidate unless the orbits of the
    candidates kept so far already connect its two terms, so the smallest
    representatives win; a second pass drops any kept element generated by
    the other kept ones. Only moves of at most its degree and inside its
    support can connect the terms of an element, so each test is exact;
    minimality refers to the computed stabilised basis.
    """
    mode = mode or G.spec.mode
    order = G.order
    spec = G.spec

    def weight(v: Variable) -> int:
        return spec.image_degree(v.p) if v.kind == Y else 1

    kept: list = []
    for c in orbit_representatives(G.basis.elements, mode, order):
        if fiber_connected(c, kept, mode, order, weight):
            if log is not None:
                log(f"generated: {c}")
        else:
            kept.append(c)
    for c in list(kept):
        rest = [r for r in kept if r != c]
        if fiber_connected(c, rest, mode, order, weight):
            kept = rest
            if log is not None:
                log(f"pruned: {c}")
    return kept


def generated_by(targets: Iterable[Binomial], moves: Iterable[Binomial], mode: str, order: MonomialOrder = LEX, weights=None) -> list:
    """Targets that are *not* generated by the orbits of ``moves``."""
    moves = list(moves)
    return [f for f in targets if not fiber_connected(f, moves, mode, order, weights)]


def expansion_reduces(
    targets: Iterable[Binomial],
    reps: Iterable[Binomial],
    n: int,
    mode: str = "inc",
    order: MonomialOrder = LEX,
    weights=None,
) -> list:
    """Targets with nonzero normal form modulo a Groebner basis of the orbits of ``reps`` in width ``n``.

    The orbits must span an ideal homogeneous for ``weights`` (a map from
    variables to positive integers, default all 1); the basis is completed
    only up to the largest target degree.
    """
    reps = list(reps)
    targets = list(targets)
    if mode == "sym":
        E = set().union(*(sym_images(r, n, order) for r in reps)) if reps else set()
    else:
        E = inc_images(reps, n, order)
    def wdeg(m: Monomial) -> int:
        return sum(e * (weights.get(v, 1) if weights else 1) for v, e in m)

    top = max((max(wdeg(f.lead), wdeg(f.tail)) for f in targets), default=0)
    B = buchberger_reduced(E, order, weights=weights, max_degree=top)
    return [f for f in targets if reduce(f, B) is not None]
