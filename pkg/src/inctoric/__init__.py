"""Equivariant Groebner and Markov bases for kernels of symmetric monomial maps."""
from .buchberger import BinomialBasis, buchberger_reduced, eliminate, reduce, spair
from .equivariant import (
    EqGB,
    equivariant_reduce,
    markov_minimize,
    phi_kernel_bounded,
    truncated_equivariant_gb,
    verify_equivariant_criterion,
)
from .mapspec import MapSpec, build_truncated_generators, factor_map
from .matching import GoodTuple, augment, bad_indices, decompose_matchings, inc_divides, is_good, multidegree
from .symmetry import (
    GREVLEX,
    LEX,
    Binomial,
    Cmp,
    IncMap,
    Monomial,
    MonomialOrder,
    Variable,
    apply_inc,
    compare,
    divides_with_quotient,
    enumerate_y_variables,
)

__version__ = "0.1.0"
