"""Equivariant monomial maps ``y_{p,J} -> prod_{i,l} z_{i, j_l}^{D_p[i][l]}``."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SpecError, WindowError
from .symmetry import LEX, Z, Binomial, Monomial, MonomialOrder, Variable, enumerate_y_variables

MODES = ("sym", "inc-only")


@dataclass(frozen=True)
class MapSpec:
    """Orbit arities ``k_p``, exponent blocks ``D_p`` (``rows x k_p``) and a mode.

    In ``sym`` mode index tuples have distinct entries and the map is
    Sym-equivariant; in ``inc-only`` mode tuples are strictly decreasing.
    """

    arities: tuple
    blocks: tuple
    rows: int
    mode: str = "sym"
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(int(k) for k in self.arities))
        object.__setattr__(self, "blocks", tuple(tuple(tuple(int(x) for x in r) for r in D) for D in self.blocks))
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.arities:
            raise SpecError("a map needs at least one orbit")
        if len(self.blocks) != len(self.arities):
            raise SpecError("one exponent block per orbit is required")
        if self.rows < 1:
            raise SpecError("the target needs at least one z-row")
        for p, (k, D) in enumerate(zip(self.arities, self.blocks)):
            if k <= 0:
                raise SpecError(
                    f"orbit {p}: arity must be strictly positive; a variable with empty index "
                    "tuple is invariant and contributes only the generator y_{p,()} - 1"
                )
            if len(D) != self.rows or any(len(r) != k for r in D):
                raise SpecError(f"orbit {p}: exponent block must be {self.rows} x {k}")
            if any(x < 0 for r in D for x in r):
                raise SpecError(f"orbit {p}: exponents must be nonnegative")
            for l in range(k):
                if all(D[i][l] == 0 for i in range(self.rows)):
                    raise SpecError(f"orbit {p}: index slot {l} has an empty image")

    @property
    def N(self) -> int:
        return len(self.arities)

    @property
    def constraint(self) -> str:
        return "distinct" if self.mode == "sym" else "decreasing"

    @property
    def max_arity(self) -> int:
        return max(self.arities)

    def image_degree(self, p: int) -> int:
        return sum(sum(r) for r in self.blocks[p])

    def weights(self, n: int) -> dict:
        """Grading by image degree: y-variables get ``|D_p|``, z-variables 1."""
        w = {v: self.image_degree(v.p) for v in enumerate_y_variables(self, n)}
        for i in range(self.rows):
            for j in range(n):
                w[Variable(Z, i, (j,))] = 1
        return w


def omega(spec: MapSpec, y: Variable) -> Monomial:
    D = spec.blocks[y.p]
    return Monomial((Variable(Z, i, (j,)), D[i][l]) for i in range(spec.rows) for l, j in enumerate(y.idx))


def omega_monomial(spec: MapSpec, m: Monomial) -> Monomial:
    out = Monomial.one()
    for v, e in m:
        if v.kind == Z:
            out = out * Monomial([(v, e)])
        else:
            w = omega(spec, v)
            out = out * Monomial((u, e * f) for u, f in w)
    return out


def factor_map(spec: MapSpec):
    """Split the map into the matching part and a substitution.

    The matching part sends ``y_{p,J}`` to ``prod_l x_{r_p + l, j_l}`` where
    ``r_p = k_0 + ... + k_{p-1}``; the x-variables are modelled as z-rows of
    the returned spec. The substitution maps ``(p, l)`` to the exponent column
    ``D_p[:, l]`` describing ``x_{r_p + l, j} -> prod_i z_{i,j}^{D_p[i][l]}``.
    """
    total = sum(spec.arities)
    blocks = []
    psi = {}
    off = 0
    for p, k in enumerate(spec.arities):
        blocks.append(tuple(tuple(1 if r == off + l else 0 for l in range(k)) for r in range(total)))
        for l in range(k):
            psi[(p, l)] = tuple(spec.blocks[p][i][l] for i in range(spec.rows))
        off += k
    phi = MapSpec(spec.arities, tuple(blocks), total, spec.mode, name=f"{spec.name}:phi" if spec.name else "")
    return phi, psi


def apply_psi(spec: MapSpec, psi: dict, x: Monomial) -> Monomial:
    """Substitute the matching-level monomial ``x`` through ``psi``."""
    row_owner = []
    for p, k in enumerate(spec.arities):
        row_owner.extend((p, l) for l in range(k))
    acc = []
    for v, e in x:
        col = psi[row_owner[v.p]]
        acc.extend((Variable(Z, i, v.idx), e * c) for i, c in enumerate(col))
    return Monomial(acc)


def build_truncated_generators(spec: MapSpec, n: int, order: MonomialOrder = LEX) -> set:
    """Graph binomials ``omega(y) - y`` for all y-variables of width ``n``."""
    if n < spec.max_arity:
        raise WindowError(f"width {n} is smaller than the largest arity {spec.max_arity}")
    return {Binomial.make(omega(spec, y), Monomial.of(y), order) for y in enumerate_y_variables(spec, n)}


def in_kernel(spec: MapSpec, b: Binomial) -> bool:
    return omega_monomial(spec, b.lead) == omega_monomial(spec, b.tail)
