"""Variables, monomials and binomials over finite index windows.

Two families of variables appear throughout:

* ``y_{p,J}``: orbit ``p`` with an index tuple ``J`` (distinct entries, or
  strictly decreasing entries in inc-only mode);
* ``z_{i,j}``: row ``i`` and column ``j`` of the target ring.

Increasing index maps act on both by relabelling indices. Monomials are
immutable sparse exponent maps; binomials are oriented pairs ``lead - tail``
with implicit coefficients +1 and -1.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Iterable, Iterator, Mapping, Optional

from .errors import OrderError, SpecParseError, WindowError

if TYPE_CHECKING:  # pragma: no cover
    from .mapspec import MapSpec

Y = "y"
Z = "z"


@dataclass(frozen=True)
class Variable:
    """A single variable.

    For ``kind == "y"`` the attribute ``p`` is the orbit and ``idx`` the index
    tuple ``J``. For ``kind == "z"`` the attribute ``p`` is the row ``i`` and
    ``idx == (j,)``.
    """

    kind: str
    p: int
    idx: tuple

    def __post_init__(self):
        if self.kind not in (Y, Z):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.p < 0 or any(j < 0 for j in self.idx):
            raise ValueError("variable indices must be nonnegative")
        if self.kind == Z and len(self.idx) != 1:
            raise ValueError("z-variables carry exactly one column index")

    @property
    def sort_key(self) -> tuple:
        # Z-block above Y-block; z by (column, row), y by (orbit, J)
        if self.kind == Z:
            return (1, self.idx[0], self.p)
        return (0, self.p, self.idx)

    @property
    def indices(self) -> tuple:
        return self.idx

    def relabel(self, f: Callable[[int], int]) -> "Variable":
        return Variable(self.kind, self.p, tuple(f(j) for j in self.idx))

    def __str__(self) -> str:
        if self.kind == Z:
            if self.p == 0:
                return f"z_{{{self.idx[0]}}}"
            return f"z_{{{self.p},{self.idx[0]}}}"
        head = "y" if self.p == 0 else f"y{self.p}"
        return head + "_{" + ",".join(map(str, self.idx)) + "}"

    def __repr__(self) -> str:
        return str(self)


def y(J: Iterable[int], p: int = 0) -> Variable:
    return Variable(Y, p, tuple(J))


def z(j: int, i: int = 0) -> Variable:
    return Variable(Z, i, (j,))


class Monomial:
    """Immutable product of variables with positive exponents."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exps: Mapping[Variable, int] | Iterable[tuple[Variable, int]] = ()):
        if isinstance(exps, Mapping):
            exps = exps.items()
        acc: dict[Variable, int] = {}
        for v, e in exps:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[v] = acc.get(v, 0) + e
        # descending variable order: the lex key is then the item tuple itself
        self._items = tuple(sorted(acc.items(), key=lambda it: it[0].sort_key, reverse=True))
        self._hash = hash(self._items)

    @classmethod
    def one(cls) -> "Monomial":
        return cls()

    @classmethod
    def of(cls, *factors: Variable | tuple[Variable, int]) -> "Monomial":
        """Build from variables or ``(variable, exponent)`` pairs."""
        pairs = [(f, 1) if isinstance(f, Variable) else f for f in factors]
        return cls(pairs)

    @property
    def items(self) -> tuple:
        return self._items

    def exponent(self, v: Variable) -> int:
        for w, e in self._items:
            if w == v:
                return e
        return 0

    def as_dict(self) -> dict:
        return dict(self._items)

    @property
    def variables(self) -> tuple:
        return tuple(v for v, _ in self._items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    @property
    def indices(self) -> frozenset:
        return frozenset(j for v, _ in self._items for j in v.idx)

    @property
    def window(self) -> int:
        return max(self.indices, default=-1) + 1

    def has_z(self) -> bool:
        return any(v.kind == Z for v, _ in self._items)

    def is_one(self) -> bool:
        return not self._items

    def relabel(self, f: Callable[[int], int]) -> "Monomial":
        return Monomial((v.relabel(f), e) for v, e in self._items)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(itertools.chain(self._items, other._items))

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self) -> Iterator[tuple[Variable, int]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __str__(self) -> str:
        if not self._items:
            return "1"
        return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in self._items)

    def __repr__(self) -> str:
        return f"Monomial({self})"


def lcm(a: Monomial, b: Monomial) -> Monomial:
    acc = a.as_dict()
    for v, e in b:
        if e > acc.get(v, 0):
            acc[v] = e
    return Monomial(acc)


def divides_with_quotient(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Return ``c`` with ``a * c == b``, or ``None`` if ``a`` does not divide ``b``."""
    rest = b.as_dict()
    for v, e in a:
        have = rest.get(v, 0)
        if have < e:
            return None
        rest[v] = have - e
    return Monomial(rest)


class Cmp(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class MonomialOrder:
    """Inc-compatible monomial order; variables compare by ``Variable.sort_key``.

    ``lex-elim-z`` is pure lex, so the Z-block (all z above all y) is
    eliminated. ``grevlex-compat`` compares the Z-parts by grevlex first and
    then the Y-parts by grevlex, again eliminating Z. ``grevlex`` is plain
    grevlex over all variables and does not eliminate.
    """

    scheme: str = "lex-elim-z"

    SCHEMES = ("lex-elim-z", "grevlex-compat", "grevlex")

    def __post_init__(self):
        if self.scheme not in self.SCHEMES:
            raise OrderError(f"unknown monomial order {self.scheme!r}")

    @property
    def eliminates_z(self) -> bool:
        return self.scheme != "grevlex"

    def key(self, m: Monomial):
        if self.scheme == "lex-elim-z":
            return tuple((v.sort_key, e) for v, e in m.items)
        if self.scheme == "grevlex":
            return (m.degree, tuple((v.sort_key, -e) for v, e in reversed(m.items)))
        zs = [(v.sort_key, -e) for v, e in reversed(m.items) if v.kind == Z]
        ys = [(v.sort_key, -e) for v, e in reversed(m.items) if v.kind == Y]
        return (-sum(e for _, e in zs), tuple(zs), -sum(e for _, e in ys), tuple(ys))

    def compare(self, a: Monomial, b: Monomial) -> Cmp:
        ka, kb = self.key(a), self.key(b)
        if ka == kb:
            return Cmp.EQ
        return Cmp.GT if ka > kb else Cmp.LT


LEX = MonomialOrder("lex-elim-z")
GREVLEX = MonomialOrder("grevlex-compat")
PLAIN_GREVLEX = MonomialOrder("grevlex")


def compare(order: MonomialOrder, a: Monomial, b: Monomial) -> Cmp:
    return order.compare(a, b)


@dataclass(frozen=True)
class Binomial:
    """``lead - tail`` with ``lead`` the larger monomial under the active order."""

    lead: Monomial
    tail: Monomial

    def __post_init__(self):
        if self.lead == self.tail:
            raise ValueError("zero binomial; use None instead")

    @classmethod
    def make(cls, a: Monomial, b: Monomial, order: MonomialOrder = LEX) -> Optional["Binomial"]:
        """Normalized ``a - b`` up to sign, or ``None`` when ``a == b``."""
        c = order.compare(a, b)
        if c == Cmp.EQ:
            return None
        return cls(a, b) if c == Cmp.GT else cls(b, a)

    def oriented(self, order: MonomialOrder) -> "Binomial":
        return Binomial.make(self.lead, self.tail, order)

    @property
    def degree(self) -> int:
        return max(self.lead.degree, self.tail.degree)

    @property
    def indices(self) -> frozenset:
        return self.lead.indices | self.tail.indices

    @property
    def window(self) -> int:
        return max(self.lead.window, self.tail.window)

    def has_z(self) -> bool:
        return self.lead.has_z() or self.tail.has_z()

    def relabel(self, f: Callable[[int], int], order: MonomialOrder = LEX) -> "Binomial":
        return Binomial.make(self.lead.relabel(f), self.tail.relabel(f), order)

    def __str__(self) -> str:
        return f"{self.lead} - {self.tail}"

    def __repr__(self) -> str:
        return f"Binomial({self})"


@dataclass(frozen=True)
class IncMap:
    """Strictly increasing map ``[m] -> [n]`` stored as its image sequence."""

    images: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if any(a >= b for a, b in zip(self.images, self.images[1:])):
            raise ValueError("images of an increasing map must be strictly increasing")
        if self.images and (self.images[0] < 0 or self.images[-1] >= self.n):
            raise ValueError("image outside the codomain")

    @classmethod
    def identity(cls, m: int) -> "IncMap":
        return cls(tuple(range(m)), m)

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    def compose(self, rho: "IncMap") -> "IncMap":
        """``self ∘ rho``."""
        if rho.n > self.m:
            raise WindowError("codomain of the inner map exceeds the domain of the outer map")
        return IncMap(tuple(self.images[j] for j in rho.images), self.n)


def inc_maps(m: int, n: int) -> Iterator[IncMap]:
    """All of ``Inc(m, n)`` in lexicographic order of image sequences."""
    for c in itertools.combinations(range(n), m):
        yield IncMap(c, n)


def apply_inc(pi: IncMap, m: Monomial) -> Monomial:
    if m.window > pi.m:
        raise WindowError(f"monomial window {m.window} exceeds map domain {pi.m}")
    return m.relabel(pi.images.__getitem__)


def enumerate_y_variables(spec: "MapSpec", n: int) -> list[Variable]:
    """All y-variables with indices in ``[n]`` allowed by the spec's tuple constraint."""
    out = []
    for p, k in enumerate(spec.arities):
        if spec.constraint == "decreasing":
            tuples = (tuple(reversed(c)) for c in itertools.combinations(range(n), k))
        else:
            tuples = itertools.permutations(range(n), k)
        out.extend(Variable(Y, p, J) for J in tuples)
    out.sort(key=lambda v: v.sort_key)
    return out


# --- text format -----------------------------------------------------------

_FACTOR = re.compile(r"\s*([yz])(\d*)_\{([0-9,\s]+)\}(?:\^(\d+))?\s*")


def parse_monomial(text: str, line: Optional[int] = None, offset: int = 0) -> Monomial:
    """Parse ``y_{1,2}*y_{0,1}^2`` (``*`` optional) or ``1``."""
    s = text.strip()
    if s == "1":
        return Monomial.one()
    pos = 0
    pairs = []
    while pos < len(text):
        if text[pos] in " \t*":
            pos += 1
            continue
        m = _FACTOR.match(text, pos)
        if not m:
            raise SpecParseError(f"cannot parse factor near {text[pos:pos + 12]!r}", line, offset + pos + 1)
        kind, tag, body, e = m.groups()
        nums = tuple(int(t) for t in body.replace(" ", "").split(",") if t)
        if kind == "y":
            var = Variable(Y, int(tag) if tag else 0, nums)
        else:
            if tag:
                raise SpecParseError("z-variables take no orbit tag", line, offset + pos + 1)
            if len(nums) == 1:
                var = Variable(Z, 0, nums)
            elif len(nums) == 2:
                var = Variable(Z, nums[0], (nums[1],))
            else:
                raise SpecParseError("z-variables take one or two indices", line, offset + pos + 1)
        pairs.append((var, int(e) if e else 1))
        pos = m.end()
    if not pairs:
        raise SpecParseError("empty monomial", line, offset + 1)
    return Monomial(pairs)


def parse_binomial(text: str, line: Optional[int] = None, order: MonomialOrder = LEX) -> Optional[Binomial]:
    """Parse ``lead - tail``; the result is re-oriented under ``order``."""
    parts = text.split("-")
    if len(parts) != 2:
        raise SpecParseError("expected exactly one '-' separating two monomials", line, 1)
    a = parse_monomial(parts[0], line, 0)
    b = parse_monomial(parts[1], line, len(parts[0]) + 1)
    return Binomial.make(a, b, order)
