"""Good matrix tuples, Inc-divisibility and decomposition into matchings.

A *good tuple* is a tuple of nonnegative integer matrices ``A_p`` (``k_p`` rows,
a common number of stored columns) such that every row of ``A_p`` sums to the
same number ``d_p`` and no column of ``A_p`` sums to more than ``d_p``. These
are exactly the exponent matrices reachable as sums of matchings.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import NotGoodError, ShapeError
from .symmetry import IncMap

Matrix = tuple  # tuple of row tuples


def _as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def _ncols(mat: Matrix) -> int:
    return len(mat[0]) if mat else 0


def _col_sums(mat: Matrix, n: int) -> list[int]:
    return [sum(r[j] for r in mat) for j in range(n)]


def is_good(mats: Sequence[Sequence[Sequence[int]]]) -> Optional[tuple]:
    """Return the degree vector if every matrix is good, else ``None``.

    Raises ``ValueError`` on negative entries. A matrix without rows has no
    well-defined degree and is reported as degree 0.
    """
    degs = []
    for A in mats:
        A = _as_matrix(A)
        if any(x < 0 for r in A for x in r):
            raise ValueError("matrix entries must be nonnegative")
        n = _ncols(A)
        if any(len(r) != n for r in A):
            raise ShapeError("ragged matrix")
        rs = {sum(r) for r in A}
        if len(rs) > 1:
            return None
        d = rs.pop() if rs else 0
        if any(c > d for c in _col_sums(A, n)):
            return None
        degs.append(d)
    return tuple(degs)


@dataclass(frozen=True)
class GoodTuple:
    """A validated good tuple with its multi-degree and stored length."""

    mats: tuple
    degree: tuple
    length: int

    @classmethod
    def of(cls, mats: Sequence[Sequence[Sequence[int]]], degree: Optional[Sequence[int]] = None) -> "GoodTuple":
        """Validate ``mats``; ``degree`` is needed only where rows are all zero-length."""
        ms = tuple(_as_matrix(A) for A in mats)
        lens = {_ncols(A) for A in ms if A}
        if len(lens) > 1:
            raise ShapeError("all matrices of a tuple must have the same number of columns")
        n = lens.pop() if lens else 0
        d = is_good(ms)
        if d is None:
            raise NotGoodError("matrix tuple is not good")
        if degree is not None:
            degree = tuple(int(x) for x in degree)
            if len(degree) != len(ms):
                raise ShapeError("degree vector length differs from number of matrices")
            for p, A in enumerate(ms):
                if n > 0 and A and degree[p] != d[p]:
                    raise NotGoodError(f"declared degree {degree[p]} != row sum {d[p]} in block {p}")
                if any(c > degree[p] for c in _col_sums(A, n)):
                    raise NotGoodError("column sum exceeds declared degree")
            d = degree
        return cls(ms, d, n)

    @classmethod
    def zero(cls, rows: Sequence[int], degree: Optional[Sequence[int]] = None, length: int = 0) -> "GoodTuple":
        """All-zero tuple with ``rows[p]`` rows, i.e. the degree-0 (or sentinel) element."""
        ms = tuple(tuple((0,) * length for _ in range(k)) for k in rows)
        deg = tuple(degree) if degree is not None else (0,) * len(rows)
        if length > 0 and any(d != 0 for d in deg):
            raise NotGoodError("stored zero columns force degree 0")
        return cls(ms, deg, length)

    @property
    def shape(self) -> tuple:
        return tuple(len(A) for A in self.mats)

    def column(self, p: int, j: int) -> tuple:
        if j >= self.length:
            return (0,) * len(self.mats[p])
        return tuple(r[j] for r in self.mats[p])

    def padded(self, n: int) -> "GoodTuple":
        if n < self.length:
            raise ShapeError("cannot pad to a shorter length")
        ms = tuple(tuple(r + (0,) * (n - self.length) for r in A) for A in self.mats)
        return GoodTuple(ms, self.degree, n)

    def stripped(self) -> "GoodTuple":
        """Drop trailing all-zero columns."""
        n = self.length
        while n > 0 and all(self.column(p, n - 1) == (0,) * len(A) for p, A in enumerate(self.mats)):
            n -= 1
        ms = tuple(tuple(r[:n] for r in A) for A in self.mats)
        return GoodTuple(ms, self.degree, n)


@dataclass(frozen=True)
class AugmentedTuple:
    """Good tuple with an extra slack row per block making every column sum ``d_p``."""

    mats: tuple
    degree: tuple


@dataclass(frozen=True)
class Matching:
    """Injective map from the rows of one block to columns, ``cols[l]`` for row ``l``."""

    cols: tuple

    def __post_init__(self):
        if len(set(self.cols)) != len(self.cols):
            raise ValueError("matching images must be distinct")

    def matrix(self, n: int) -> Matrix:
        return tuple(tuple(1 if j == c else 0 for j in range(n)) for c in self.cols)


def multidegree(A: GoodTuple) -> tuple:
    return A.degree


def augment(A: GoodTuple) -> AugmentedTuple:
    out = []
    for p, M in enumerate(A.mats):
        d = A.degree[p]
        slack = tuple(d - c for c in _col_sums(M, A.length))
        out.append(M + (slack,))
    return AugmentedTuple(tuple(out), A.degree)


def inc_divides(A: GoodTuple, B: GoodTuple) -> Optional[IncMap]:
    """Witness ``π`` with ``πÃ ≤ B̃`` entrywise, or ``None`` if none exists.

    The witness has domain ``A.length``. Trailing zero columns of ``A`` that
    do not fit into ``B``'s stored columns are sent to trivial columns beyond
    ``B.length``, so the codomain may exceed ``B.length``.
    """
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    if any(a > b for a, b in zip(A.degree, B.degree)):
        return None
    core = A.stripped()
    la, lb = core.length, B.length
    N = len(A.mats)
    dA, dB = A.degree, B.degree
    acols = [tuple(core.column(p, i) for p in range(N)) for i in range(la)]
    bcols = [tuple(B.column(p, j) for p in range(N)) for j in range(lb)]
    bslack = [tuple(dB[p] - sum(bcols[j][p]) for p in range(N)) for j in range(lb)]
    aslack = [tuple(dA[p] - sum(acols[i][p]) for p in range(N)) for i in range(la)]
    # an unused column of B must dominate a trivial column (0,...,0,d_A)
    skippable = [all(bslack[j][p] >= dA[p] for p in range(N)) for j in range(lb)]

    def fits(i: int, j: int) -> bool:
        for p in range(N):
            if aslack[i][p] > bslack[j][p]:
                return False
            if any(x > y for x, y in zip(acols[i][p], bcols[j][p])):
                return False
        return True

    suffix_skip = [True] * (lb + 1)
    for j in range(lb - 1, -1, -1):
        suffix_skip[j] = skippable[j] and suffix_skip[j + 1]

    @lru_cache(maxsize=None)
    def ok(i: int, j: int) -> bool:
        if i == la:
            return suffix_skip[j]
        if lb - j < la - i:
            return False
        if fits(i, j) and ok(i + 1, j + 1):
            return True
        return skippable[j] and ok(i, j + 1)

    if not ok(0, 0):
        return None
    images = []
    i = j = 0
    while i < la:
        if fits(i, j) and ok(i + 1, j + 1):
            images.append(j)
            i += 1
        j += 1
    nxt = images[-1] + 1 if images else 0
    images.extend(range(nxt, nxt + A.length - la))
    return IncMap(tuple(images), max(lb, nxt + A.length - la))


def subtract_placed(B: GoodTuple, A: GoodTuple, pi: IncMap) -> list:
    """Matrices of ``B - πA`` over ``pi.n`` columns (entries may be negative)."""
    n = max(pi.n, B.length)
    Bp = B.padded(n)
    out = []
    for p, M in enumerate(Bp.mats):
        rows = [list(r) for r in M]
        for i, src in enumerate(pi.images):
            for l in range(len(rows)):
                rows[l][src] -= A.column(p, i)[l]
        out.append(rows)
    return out


def bad_indices(A: GoodTuple) -> set:
    """Stored columns ``j`` whose slack entry is at most half the degree in some block."""
    bad = set()
    for p, M in enumerate(A.mats):
        d = A.degree[p]
        for j, c in enumerate(_col_sums(M, A.length)):
            if 2 * (d - c) <= d:
                bad.add(j)
    return bad


def _kuhn(adj: list[list[int]], left: Sequence[int]) -> Optional[dict]:
    """Maximum matching saturating ``left`` (smallest neighbour first); ``None`` if impossible."""
    match_right: dict = {}

    def augment_from(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or augment_from(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in left:
        if not augment_from(u, set()):
            return None
    return {u: v for v, u in match_right.items()}


def _one_matching(R: list[list[int]], d: int) -> tuple:
    k = len(R)
    n = len(R[0]) if R else 0
    row_adj = [[j for j in range(n) if R[l][j] > 0] for l in range(k)]
    col_adj = [[l for l in range(k) if R[l][j] > 0] for j in range(n)]
    S = [j for j, c in enumerate(_col_sums(R, n)) if c == d]
    m1 = _kuhn(row_adj, range(k))  # row -> column
    m2 = _kuhn(col_adj, S)  # column -> row
    if m1 is None or m2 is None:
        raise NotGoodError("residual matrix admits no covering matching")
    # merge along the components of M1 ∪ M2
    m1_col = {c: r for r, c in m1.items()}
    m2_row = {r: c for c, r in m2.items()}
    Sset = set(S)
    result = dict(m1)
    seen_rows: set = set()
    for r0 in range(k):
        if r0 in seen_rows:
            continue
        rows, cols = set(), set()
        stack = [("r", r0)]
        while stack:
            kind, x = stack.pop()
            if kind == "r":
                if x in rows:
                    continue
                rows.add(x)
                cols.add(m1[x])
                stack.append(("c", m1[x]))
                if x in m2_row:
                    cols.add(m2_row[x])
                    stack.append(("c", m2_row[x]))
            else:
                if x in m1_col:
                    stack.append(("r", m1_col[x]))
                if x in m2:
                    stack.append(("r", m2[x]))
        seen_rows |= rows
        if any(c in Sset and c not in m1_col for c in cols):
            for r in rows:
                result[r] = m2_row[r]
    return tuple(result[l] for l in range(k))


def decompose_matchings(A: GoodTuple) -> list:
    """Write each block ``A_p`` as a sum of ``d_p`` matchings; returns ``(p, Matching)`` pairs."""
    if is_good(A.mats) is None:
        raise NotGoodError("matrix tuple is not good")
    out = []
    for p, M in enumerate(A.mats):
        d = A.degree[p]
        R = [list(r) for r in M]
        for step in range(d):
            cols = _one_matching(R, d - step)
            for l, c in enumerate(cols):
                R[l][c] -= 1
            out.append((p, Matching(cols)))
    return out
