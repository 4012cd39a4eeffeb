import itertools
import random

import pytest

from inctoric.errors import NotGoodError, ShapeError
from inctoric.matching import (
    GoodTuple,
    Matching,
    augment,
    bad_indices,
    decompose_matchings,
    inc_divides,
    is_good,
    multidegree,
    subtract_placed,
)

from oracles import brute_inc_divides, brute_is_good, random_good_tuple

A4 = [[3, 0, 0, 0], [0, 1, 1, 1]]
B4 = [[3, 1, 0, 0], [0, 2, 1, 1]]
ID2 = [[1, 0], [0, 1]]


def G(*mats, degree=None):
    return GoodTuple.of(mats, degree)


def test_is_good_examples():
    assert is_good([A4]) == (3,)
    assert is_good([B4]) == (4,)
    assert is_good([[[1, 0], [0, 0]]]) is None


def test_is_good_rejects_negative():
    with pytest.raises(ValueError):
        is_good([[[1, -1], [0, 0]]])


def test_is_good_column_bound():
    assert is_good([[[2, 0], [2, 0]]]) is None
    assert is_good([[[1, 1], [1, 1]]]) == (2,)


def test_is_good_matches_brute_force():
    for rows in itertools.product(range(3), repeat=6):
        A = [list(rows[:3]), list(rows[3:])]
        assert is_good([A]) == brute_is_good([A])


def test_multidegree_examples():
    assert multidegree(GoodTuple.zero((2,), (0,))) == (0,)
    assert multidegree(G(A4)) == (3,)
    assert multidegree(G(ID2)) == (1,)


def test_goodtuple_validation():
    with pytest.raises(NotGoodError):
        G([[1, 0], [0, 0]])
    with pytest.raises(ShapeError):
        G([[1, 0]], [[1, 0, 0]])
    with pytest.raises(NotGoodError):
        GoodTuple.zero((2,), (1,), length=2)


def test_augment_examples():
    assert augment(G(A4)).mats[0][2] == (0, 2, 2, 2)
    assert augment(G(B4)).mats[0][2] == (1, 1, 3, 3)
    assert augment(G(ID2)).mats[0][2] == (0, 0)
    aug = augment(G(B4))
    assert aug.mats[0][:2] == G(B4).mats[0]
    assert all(sum(r[j] for r in aug.mats[0]) == 4 for j in range(4))


def test_inc_divides_examples():
    # entrywise A <= B under the identity, yet no placement works
    assert inc_divides(G(A4), G(B4)) is None
    A = G(ID2)
    assert inc_divides(A, A).images == (0, 1)
    pi = inc_divides(A, G([[1, 1], [1, 1]]))
    assert pi.images == (0, 1)
    assert is_good(subtract_placed(G([[1, 1], [1, 1]]), A, pi)) == (1,)


def test_inc_divides_shape_mismatch():
    with pytest.raises(ShapeError):
        inc_divides(G(ID2), G([[1, 0, 0]]))


def test_inc_divides_uses_trivial_columns_beyond_b():
    # A has a trailing zero column that must land past the stored length of B
    A = G([[1, 0]])
    B = G([[1]])
    pi = inc_divides(A, B)
    assert pi is not None and pi.n == 2


def test_inc_divides_zero_degree():
    Z = GoodTuple.zero((2,), (0,))
    assert inc_divides(Z, G(A4)) is not None
    assert inc_divides(G(ID2), GoodTuple.zero((2,), (0,))) is None


SHAPES = [(1,), (2,), (3,), (1, 2), (2, 2)]


def random_pair(rng):
    shape = rng.choice(SHAPES)
    limit = 6 if len(shape) == 1 else 4
    na = rng.randint(1, limit)
    nb = rng.randint(1, limit)
    A = random_good_tuple(rng, shape, na, 2)
    if rng.random() < 0.5:
        # build B as a placed copy of A plus a good tuple, so divisibility does occur
        width = max(nb, na)
        cols = sorted(rng.sample(range(width), na))
        C = random_good_tuple(rng, shape, width, 2)
        mats = []
        for p in range(len(shape)):
            rows = [list(r) for r in C.mats[p]]
            for i, j in enumerate(cols):
                for l in range(shape[p]):
                    rows[l][j] += A.mats[p][l][i]
            mats.append(rows)
        B = GoodTuple.of(mats, [a + c for a, c in zip(A.degree, C.degree)])
    else:
        B = random_good_tuple(rng, shape, nb, 4)
    return A, B


def test_inc_divides_matches_brute_force():
    rng = random.Random(11)
    hits = 0
    for _ in range(400):
        A, B = random_pair(rng)
        pi = inc_divides(A, B)
        assert (pi is not None) == brute_inc_divides(A, B)
        if pi is not None:
            hits += 1
            want = tuple(b - a for a, b in zip(A.degree, B.degree))
            assert brute_is_good(subtract_placed(B, A, pi)) == want
    assert hits > 100


def test_inc_divides_reflexive_and_transitive():
    rng = random.Random(12)
    for _ in range(200):
        A = random_good_tuple(rng, (2,), rng.randint(1, 4), 2)
        assert inc_divides(A, A) is not None
        B = random_good_tuple(rng, (2,), rng.randint(1, 4), 2)
        C = random_good_tuple(rng, (2,), rng.randint(1, 4), 2)
        AB = GoodTuple.of([[list(map(sum, zip(*r))) for r in zip(A.padded(6).mats[0], B.padded(6).mats[0])]],
                          [A.degree[0] + B.degree[0]])
        ABC = GoodTuple.of([[list(map(sum, zip(*r))) for r in zip(AB.mats[0], C.padded(6).mats[0])]],
                           [AB.degree[0] + C.degree[0]])
        assert inc_divides(A, AB) is not None
        assert inc_divides(AB, ABC) is not None
        assert inc_divides(A, ABC) is not None


def test_bad_indices_examples():
    assert bad_indices(G(A4)) == {0}
    assert bad_indices(GoodTuple.zero((2,), (0,), length=3)) == {0, 1, 2}
    assert bad_indices(GoodTuple.zero((2,), (0,))) == set()
    assert bad_indices(G(ID2)) == {0, 1}


def test_bad_indices_bound_random():
    rng = random.Random(13)
    for _ in range(300):
        shape = rng.choice(SHAPES)
        A = random_good_tuple(rng, shape, rng.randint(max(shape), 8), 5, dmin=1)
        assert len(bad_indices(A)) <= 2 * sum(shape)


def sum_matchings(A, parts):
    out = [[[0] * A.length for _ in range(k)] for k in A.shape]
    for p, mt in parts:
        for l, c in enumerate(mt.cols):
            out[p][l][c] += 1
    return out


def test_decompose_example():
    parts = decompose_matchings(G([[1, 1, 0], [0, 1, 1]]))
    assert parts == [(0, Matching((0, 1))), (0, Matching((1, 2)))]


def test_decompose_identity():
    assert decompose_matchings(G(ID2)) == [(0, Matching((0, 1)))]


def test_decompose_is_deterministic():
    # the graph admits two decompositions; repeated calls return the same one
    A = G([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
    first = decompose_matchings(A)
    assert all(decompose_matchings(A) == first for _ in range(5))
    assert sum_matchings(A, first) == [list(map(list, A.mats[0]))]


def test_decompose_rejects_bad_input():
    with pytest.raises(NotGoodError):
        decompose_matchings(GoodTuple(((( 2, 0), (2, 0)),), (2,), 2))


def test_matching_validation():
    with pytest.raises(ValueError):
        Matching((1, 1))
    assert Matching((2, 0)).matrix(3) == ((0, 0, 1), (1, 0, 0))


def test_decompose_round_trip_k3():
    # exhaustive over small 3-row matrices
    count = 0
    for n in range(3, 5):
        for d in range(1, 3):
            rows = [r for r in itertools.product(range(d + 1), repeat=n) if sum(r) == d]
            for A in itertools.product(rows, repeat=3):
                if is_good([A]) is None:
                    continue
                T = G([list(r) for r in A])
                parts = decompose_matchings(T)
                assert len(parts) == d
                assert sum_matchings(T, parts) == [list(map(list, A))]
                count += 1
    assert count > 100


def test_decompose_multi_block():
    rng = random.Random(14)
    for _ in range(200):
        A = random_good_tuple(rng, (1, 2, 3), 5, 3)
        parts = decompose_matchings(A)
        assert len(parts) == sum(A.degree)
        assert sum_matchings(A, parts) == [list(map(list, M)) for M in A.mats]
