import random

import pytest

from inctoric.errors import SpecError, WindowError
from inctoric.mapspec import (
    MapSpec,
    apply_psi,
    build_truncated_generators,
    factor_map,
    in_kernel,
    omega,
    omega_monomial,
)
from inctoric.symmetry import Binomial, Monomial, Variable, enumerate_y_variables, y, z

SQUARE = MapSpec((2,), (((2, 1),),), 1)
HYPER = MapSpec((2,), (((1, 1),),), 1)


def M(*factors):
    return Monomial.of(*factors)


def test_zero_arity_rejected_with_hint():
    with pytest.raises(SpecError, match=r"y_\{p,\(\)\} - 1"):
        MapSpec((0,), ((()),), 1)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(arities=(2,), blocks=(((2, -1),),), rows=1),
        dict(arities=(2,), blocks=(((2, 0),),), rows=1),
        dict(arities=(2,), blocks=(((2, 1, 1),),), rows=1),
        dict(arities=(2,), blocks=(((2, 1),),), rows=1, mode="weird"),
        dict(arities=(), blocks=(), rows=1),
    ],
)
def test_validation_errors(kwargs):
    with pytest.raises(SpecError):
        MapSpec(**kwargs)


def test_constraint_follows_mode():
    assert SQUARE.constraint == "distinct"
    assert MapSpec((2,), (((2, 1),),), 1, mode="inc-only").constraint == "decreasing"


def test_omega_example():
    assert omega(SQUARE, y((0, 3))) == M((z(0), 2), z(3))
    assert omega_monomial(SQUARE, M(y((1, 0)), z(2))) == M((z(1), 2), z(0), z(2))


def test_factor_map_square():
    phi, psi = factor_map(SQUARE)
    assert phi.rows == 2
    assert omega(phi, y((4, 1))) == M(z(4, 0), z(1, 1))
    assert psi == {(0, 0): (2,), (0, 1): (1,)}


def test_factor_map_hypersimplex():
    _, psi = factor_map(HYPER)
    assert psi == {(0, 0): (1,), (0, 1): (1,)}


def test_factor_map_renaming():
    spec = MapSpec((2,), (((1, 0), (0, 1)),), 2)
    phi, psi = factor_map(spec)
    assert psi == {(0, 0): (1, 0), (0, 1): (0, 1)}
    assert phi.blocks == spec.blocks


def test_factor_map_composes_to_omega():
    rng = random.Random(31)
    specs = [SQUARE, HYPER, MapSpec((1, 2, 3), (((1,), (2,)), ((1, 0), (1, 3)), ((1, 1, 0), (0, 2, 1))), 2)]
    for spec in specs:
        phi, psi = factor_map(spec)
        vs = enumerate_y_variables(spec, 5)
        for _ in range(100):
            m = Monomial((rng.choice(vs), rng.randint(1, 2)) for _ in range(3))
            assert apply_psi(spec, psi, omega_monomial(phi, m)) == omega_monomial(spec, m)


def test_generators_width_two():
    F = build_truncated_generators(SQUARE, 2)
    assert F == {
        Binomial(M((z(0), 2), z(1)), M(y((0, 1)))),
        Binomial(M((z(1), 2), z(0)), M(y((1, 0)))),
    }


def test_generators_width_six():
    F = build_truncated_generators(SQUARE, 6)
    assert len(F) == 30
    assert all(f.lead.has_z() and not f.tail.has_z() for f in F)


def test_generators_inc_only():
    spec = MapSpec((2,), (((2, 1),),), 1, mode="inc-only")
    assert build_truncated_generators(spec, 2) == {Binomial(M((z(1), 2), z(0)), M(y((1, 0))))}


def test_generators_width_error():
    with pytest.raises(WindowError):
        build_truncated_generators(SQUARE, 1)


def test_in_kernel():
    assert in_kernel(SQUARE, Binomial.make(M(y((1, 3)), y((0, 2))), M(y((1, 2)), y((0, 3)))))
    assert not in_kernel(SQUARE, Binomial.make(M(y((1, 0))), M(y((0, 1)))))
    assert in_kernel(HYPER, Binomial.make(M(y((1, 0))), M(y((0, 1)))))


def test_weights():
    w = SQUARE.weights(3)
    assert w[y((0, 1))] == 3 and w[z(2)] == 1
    assert Variable("z", 0, (0,)) in w
