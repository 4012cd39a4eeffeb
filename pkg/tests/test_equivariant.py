from collections import defaultdict

import pytest

from inctoric.buchberger import buchberger_reduced, reduce
from inctoric.errors import WidthCapExceeded, WindowError
from inctoric.equivariant import (
    EqGB,
    canonical_sym,
    compress,
    equivariant_reduce,
    fiber_connected,
    inc_expand,
    is_inc_closed,
    markov_minimize,
    monomials_up_to,
    phi_kernel_bounded,
    truncated_equivariant_gb,
    truncated_gb,
    verify_equivariant_criterion,
)
from inctoric.mapspec import MapSpec, factor_map, in_kernel, omega_monomial
from inctoric.symmetry import Binomial, Monomial, enumerate_y_variables, parse_binomial

SQUARE = MapSpec((2,), (((2, 1),),), 1)
SMALL_SPECS = {
    "hypersimplex": MapSpec((2,), (((1, 1),),), 1),
    "hypersimplex-inc": MapSpec((2,), (((1, 1),),), 1, mode="inc-only"),
    "two-orbits": MapSpec((1, 2), (((1,),), ((1, 1),)), 1),
}


def M(*factors):
    return Monomial.of(*factors)


def test_compress_and_canonical():
    f = parse_binomial("y_{4,2}*y_{0,2}^2 - y_{4,0}^2*y_{0,2}")
    assert compress(f) == parse_binomial("y_{2,1}*y_{0,1}^2 - y_{2,0}^2*y_{0,1}")
    g = parse_binomial("y_{0,1} - y_{1,0}")
    assert canonical_sym(g) == canonical_sym(parse_binomial("y_{3,5} - y_{5,3}"))


def test_inc_expand_counts():
    f = parse_binomial("y_{1,0} - y_{0,1}")
    assert len(inc_expand([f], 4)) == 6
    assert len(inc_expand([f], 4, m=2)) == 6
    # literal Inc(3, 4) on a window-2 element never sends index 1 to 3
    literal = inc_expand([f], 4, m=3)
    assert literal < inc_expand([f], 4)
    assert parse_binomial("y_{3,0} - y_{0,3}") not in literal


def test_equivariant_reduce_shift_of_member(golden_markov):
    g = golden_markov[0]
    shifted = next(iter(inc_expand([g], g.window + 2) - {g}))
    assert equivariant_reduce(shifted, [g], g.window + 2) is None


def test_equivariant_reduce_shifted_markov_element(golden_markov):
    f = parse_binomial("y_{2,4}*y_{0,2}^2 - y_{2,0}^2*y_{0,4}")
    assert parse_binomial("y_{1,2}*y_{0,1}^2 - y_{1,0}^2*y_{0,2}") in golden_markov
    assert equivariant_reduce(f, golden_markov, 6) is None


def test_equivariant_reduce_irreducible():
    f = parse_binomial("y_{1,3}*y_{0,2} - y_{1,2}*y_{0,3}")
    g = parse_binomial("y_{2,1}*y_{1,0}*y_{0,2} - y_{2,0}*y_{1,2}*y_{0,1}")
    assert equivariant_reduce(f, [g], 4) == f
    assert equivariant_reduce(f, [], 4) == f


def test_equivariant_reduce_window_error():
    with pytest.raises(WindowError):
        equivariant_reduce(parse_binomial("y_{5,0} - y_{0,5}"), [], 4)


def test_criterion_rejects_markov_set(golden_markov):
    m = max(h.window for h in golden_markov)
    v = verify_equivariant_criterion(golden_markov, 2 * m - 1)
    assert not v.passed and v.counterexample is not None
    f, g, s = v.counterexample
    assert equivariant_reduce(s, golden_markov, 2 * m - 1) is not None


def test_markov_set_misses_degree_two_lead(golden_markov):
    h = parse_binomial("y_{2,3}*y_{0,1} - y_{2,1}*y_{0,3}")
    assert in_kernel(SQUARE, h)
    assert equivariant_reduce(h, golden_markov, 7) is not None


def test_criterion_empty_basis():
    assert verify_equivariant_criterion([], 1).passed


def test_criterion_width_threshold(golden_markov):
    with pytest.raises(WindowError):
        verify_equivariant_criterion(golden_markov, 6)


def test_degenerate_spec_has_empty_kernel():
    e = truncated_equivariant_gb(MapSpec((1,), (((1,),),), 1))
    assert e.m == 1 and len(e.basis) == 0


@pytest.mark.parametrize("name", sorted(SMALL_SPECS))
def test_strategies_agree(name):
    spec = SMALL_SPECS[name]
    a = truncated_equivariant_gb(spec, strategy="criterion")
    b = truncated_equivariant_gb(spec, strategy="direct")
    assert (a.m, a.certificate_width) == (b.m, b.certificate_width)
    assert a.basis.elements == b.basis.elements


@pytest.mark.parametrize("name", sorted(SMALL_SPECS))
def test_stabilisation_consistency_small(name):
    # every width between m and the certificate width reproduces the expansion
    e = truncated_equivariant_gb(SMALL_SPECS[name])
    for n in range(e.m, e.certificate_width + 2):
        assert inc_expand(e.full_basis.elements, n, e.m) == set(truncated_gb(e.spec, n).elements)


@pytest.mark.slow
def test_stabilisation_consistency_one_extra_width(square_eqgb):
    assert square_eqgb.certificate_width == 11
    n = square_eqgb.m + 1
    assert inc_expand(square_eqgb.full_basis.elements, n, square_eqgb.m) == set(truncated_gb(SQUARE, n).elements)


def test_criterion_agreement(hyper_eqgb, inc_eqgb):
    for e in (hyper_eqgb, inc_eqgb):
        assert is_inc_closed(e.basis.elements, e.m)
        assert verify_equivariant_criterion(e.basis.elements, 2 * e.m - 1).passed


def test_output_in_kernel(square_eqgb, inc_eqgb, hyper_eqgb):
    for e in (square_eqgb, inc_eqgb, hyper_eqgb):
        assert all(in_kernel(e.spec, b) for b in e.basis.elements)
        assert all(not b.has_z() for b in e.basis.elements)


def test_transcript_records_stop_tests(square_eqgb):
    events = [t for t in square_eqgb.transcript if t["event"] == "stop-test"]
    assert events[-1]["passed"] and events[-1]["width"] == square_eqgb.certificate_width
    assert not any(t["passed"] for t in events[:-1])


def test_width_cap():
    with pytest.raises(WidthCapExceeded) as e:
        truncated_equivariant_gb(SQUARE, max_width=7)
    assert e.value.transcript


def test_max_width_below_arity():
    with pytest.raises(WindowError):
        truncated_equivariant_gb(SQUARE, max_width=1)


def test_phi_kernel_arity_one_is_empty():
    phi, _ = factor_map(MapSpec((1,), (((3,),),), 1))
    assert phi_kernel_bounded(phi, 5) == set()


def test_phi_kernel_width_three():
    phi, _ = factor_map(SQUARE)
    K = phi_kernel_bounded(phi, 3)
    assert K == {parse_binomial("y_{2,0}*y_{1,2}*y_{0,1} - y_{2,1}*y_{1,0}*y_{0,2}")}
    # the degree-2 relation of the full map is no relation of the matching part
    r = parse_binomial("y_{2,0}*y_{1,0} - y_{1,2}*y_{0,2}")
    assert in_kernel(SQUARE, r) and not in_kernel(phi, r)


def test_phi_kernel_generates_degree_five_fibers():
    phi, _ = factor_map(SQUARE)
    K = phi_kernel_bounded(phi, 4)
    assert all(b.degree <= 3 and in_kernel(phi, b) for b in K)
    B = buchberger_reduced(K)
    fibers = defaultdict(list)
    for mono in monomials_up_to(enumerate_y_variables(phi, 4), 5):
        fibers[omega_monomial(phi, mono)].append(mono)
    checked = 0
    for monos in fibers.values():
        for other in monos[1:]:
            assert reduce(Binomial.make(other, monos[0]), B) is None
            checked += 1
    assert checked > 1000


def test_fiber_connected():
    moves = [parse_binomial("y_{1,0} - y_{0,1}")]
    assert fiber_connected(parse_binomial("y_{3,1} - y_{1,3}"), moves, "inc")
    assert not fiber_connected(parse_binomial("y_{1,3}*y_{0,2} - y_{1,2}*y_{0,3}"), moves, "sym")


def test_markov_single_element():
    g = parse_binomial("y_{1,0} - y_{0,1}")
    basis = buchberger_reduced([g])
    e = EqGB(MapSpec((2,), (((1, 1),),), 1), 2, basis, 3)
    assert markov_minimize(e) == [g]


def test_markov_hypersimplex(hyper_eqgb):
    got = {canonical_sym(b) for b in markov_minimize(hyper_eqgb)}
    want = {canonical_sym(parse_binomial(s)) for s in ("y_{0,1} - y_{1,0}", "y_{0,1}*y_{2,3} - y_{0,3}*y_{2,1}")}
    assert got == want


def test_markov_inc_only_is_golden_basis(inc_eqgb):
    got = set(markov_minimize(inc_eqgb))
    assert got == set(inc_eqgb.generators)
    assert len(got) == 3
