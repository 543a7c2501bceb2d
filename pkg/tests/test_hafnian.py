import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_square, random_symmetric
from pmcount.errors import CapExceeded, InputError
from pmcount.hafnian import (
    block_embedding,
    hafnian_bruteforce,
    hafnian_labelring,
    hafnian_polyspace,
    lift_to_label_ring,
    permanent_bruteforce,
    permanent_ryser,
    permanent_via_hafnian,
    squeeze,
    validate_symmetric,
)
from pmcount.labelring import LabelRing, LabelRingElement, lr_mul_naive
from pmcount.meter import SpaceMeter
from pmcount.rings import ZZ, ModRing, PolynomialRing, TruncatedPolynomial

HAFNIANS = [hafnian_bruteforce, hafnian_labelring, hafnian_polyspace]
SIX_VERTEX_EDGES = "ab ac ad af bc bd cd ce df ef".split()


def lr(m, terms):
    return LabelRingElement.from_terms(ZZ, m, {frozenset(k): v for k, v in terms.items()})


def six_vertex_matrix(order="abcdef"):
    idx = {v: i for i, v in enumerate(order)}
    B = [[0] * 6 for _ in range(6)]
    for u, v in SIX_VERTEX_EDGES:
        B[idx[u]][idx[v]] = B[idx[v]][idx[u]] = 1
    return B


@pytest.mark.parametrize("haf", HAFNIANS)
def test_small_examples(haf):
    assert haf([[0, 7], [7, 0]]) == 7
    b = dict(zip(["12", "13", "14", "23", "24", "34"], [2, 3, 5, 7, 11, 13]))
    B = [[0] * 4 for _ in range(4)]
    for key, v in b.items():
        j, k = int(key[0]) - 1, int(key[1]) - 1
        B[j][k] = B[k][j] = v
    assert haf(B) == 2 * 13 + 3 * 11 + 5 * 7
    assert haf([]) == 1


@pytest.mark.parametrize("haf", HAFNIANS)
def test_validation(haf):
    with pytest.raises(InputError):
        haf([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(InputError):
        haf([[0, 1], [2, 0]])
    with pytest.raises(InputError):
        haf([[1, 1], [1, 0]])
    # lenient mode reads the strict upper triangle only
    assert haf([[9, 4], [-3, 9]], ZZ, False) == 4


def test_validate_symmetric_mirrors_upper_triangle():
    assert validate_symmetric([[5, 1], [0, 5]], strict=False) == [[0, 1], [1, 0]]


def test_squeeze_dim_two():
    res = squeeze(lift_to_label_ring([[0, 6], [6, 0]]), 1)
    assert res.reduced == []
    assert res.factor == lr(1, {(): 1, (1,): 6})


def test_squeeze_dim_four_stage_one():
    B = [[0, 2, 3, 5], [2, 0, 7, 11], [3, 7, 0, 13], [5, 11, 13, 0]]
    res = squeeze(lift_to_label_ring(B), 1)
    assert len(res.reduced) == 2
    assert res.reduced[0][1] == lr(1, {(): 13, (1,): 3 * 11 + 5 * 7})
    assert res.reduced[1][0] == res.reduced[0][1]
    assert res.reduced[0][0] == LabelRing(1).zero
    assert res.factor == lr(1, {(): 1, (1,): 2})


def test_squeeze_with_empty_leading_rows():
    B = [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 9], [0, 0, 9, 0]]
    res = squeeze(lift_to_label_ring(B), 1)
    assert res.reduced[0][1] == lr(1, {(): 9})
    assert res.factor == LabelRing(1).one


def test_squeeze_errors():
    with pytest.raises(InputError):
        squeeze([], 1)
    with pytest.raises(ValueError):
        squeeze(lift_to_label_ring([[0, 1], [1, 0]]), 2)


def test_six_vertex_squeeze_factors():
    cur = lift_to_label_ring(six_vertex_matrix("efcdab"))
    expected = [
        lr(1, {(): 1, (1,): 1}),
        lr(2, {(): 1, (2,): 1, (1, 2): 1}),
        lr(3, {(): 1, (3,): 1, (2, 3): 2, (1, 2, 3): 1}),
    ]
    h = LabelRing(0).one
    for i, beta in enumerate(expected, 1):
        res = squeeze(cur, i)
        assert res.factor == beta
        h = lr_mul_naive(h.embed(i), res.factor)
        cur = res.reduced
    assert h.top() == 5


@pytest.mark.parametrize("d", range(0, 17, 2))
@pytest.mark.parametrize("haf", HAFNIANS)
def test_complete_graph_double_factorial(haf, d):
    if haf is hafnian_bruteforce and d > 12:
        pytest.skip("brute force too slow")
    K = [[int(j != k) for k in range(d)] for j in range(d)]
    expected = 1
    for x in range(1, d, 2):
        expected *= x
    assert haf(K) == expected


@pytest.mark.parametrize("ring", [ZZ, ModRing(1000003), ModRing(7)], ids=repr)
def test_three_routines_agree(ring):
    rnd = random.Random(11)
    for d in range(0, 11, 2):
        for _ in range(4):
            B = random_symmetric(rnd, d, -3, 6)
            ref = hafnian_bruteforce(B, ring)
            assert hafnian_labelring(B, ring) == ref
            assert hafnian_polyspace(B, ring) == ref


def test_polynomial_entries():
    # a genuinely non-integer commutative ring
    ring = PolynomialRing(3)
    x = ring.variable()
    B = [[ring.zero, x, ring.one, x], [x, ring.zero, x, ring.one],
         [ring.one, x, ring.zero, x * x], [x, ring.one, x * x, ring.zero]]
    ref = hafnian_bruteforce(B, ring)
    assert ref == TruncatedPolynomial(ZZ, 3, [1, 0, 1, 1])
    assert hafnian_labelring(B, ring) == ref
    assert hafnian_polyspace(B, ring) == ref


@pytest.mark.parametrize("replay", [0, 1, 3, 5])
def test_polyspace_replay_depth_is_irrelevant(replay):
    rnd = random.Random(12)
    B = random_symmetric(rnd, 10)
    assert hafnian_polyspace(B, replay_levels=replay) == hafnian_bruteforce(B)


def test_polyspace_rejects_bad_replay_depth():
    with pytest.raises(ValueError):
        hafnian_polyspace([[0, 1], [1, 0]], replay_levels=2)


def test_polyspace_workers_do_not_change_result():
    rnd = random.Random(13)
    B = random_symmetric(rnd, 12)
    ref = hafnian_polyspace(B)
    assert hafnian_polyspace(B, workers=2) == ref
    assert hafnian_polyspace(B, ModRing(1000003), workers=3) == ref % 1000003


@pytest.mark.parametrize("haf", [hafnian_labelring, hafnian_polyspace])
def test_meters_balance(haf):
    meter = SpaceMeter()
    haf(random_symmetric(random.Random(14), 12), meter=meter)
    assert meter.live == 0 and meter.peak > 0


def _brute_stage_hafnian(M, m):
    if not M:
        return LabelRing(m).one
    return hafnian_bruteforce(M, LabelRing(m))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 4, 6, 8]), st.randoms(use_true_random=False))
def test_stage_recursion(d, rnd):
    cur = lift_to_label_ring(random_symmetric(rnd, d, -2, 4))
    for i in range(1, d // 2 + 1):
        res = squeeze(cur, i)
        before = _brute_stage_hafnian(cur, i - 1)
        after = lr_mul_naive(res.factor, _brute_stage_hafnian(res.reduced, i))
        for x in range(1 << (i - 1)):
            assert before.coeffs[x] == after.coeffs[x | 1 << (i - 1)]
        cur = res.reduced


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.randoms(use_true_random=False),
       st.integers(-5, 5), st.integers(-5, 5))
def test_hafnian_is_linear_in_one_entry(d, rnd, s, t):
    B = random_symmetric(rnd, d, -3, 4)
    j = rnd.randrange(d - 1)
    k = rnd.randrange(j + 1, d)

    def with_entry(v):
        C = [row[:] for row in B]
        C[j][k] = C[k][j] = v
        return hafnian_polyspace(C)

    # haf is affine in the entry: increments add up
    base = with_entry(0)
    assert with_entry(s + t) - base == (with_entry(s) - base) + (with_entry(t) - base)


def test_permanent_examples():
    J2 = [[1, 1], [1, 1]]
    I = lambda n: [[int(i == j) for j in range(n)] for i in range(n)]  # noqa: E731
    J4 = [[1] * 4 for _ in range(4)]
    for per in (permanent_ryser, permanent_bruteforce, permanent_via_hafnian):
        assert per(J2) == 2
        assert per(I(3)) == 1
        assert per(J4) == 24
        assert per([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
        assert per([[0] * 3 for _ in range(3)]) == 0
        assert per([[2, 3], [5, 7]]) == 2 * 7 + 3 * 5
    assert permanent_ryser(I(6)) == 1
    assert permanent_ryser([]) == 1


def test_permanent_bruteforce_cap():
    with pytest.raises(CapExceeded):
        permanent_bruteforce([[1] * 11 for _ in range(11)])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_permanent_routines_agree(n, rnd):
    A = random_square(rnd, n, -2, 4)
    ref = permanent_bruteforce(A)
    assert permanent_ryser(A) == ref
    assert permanent_via_hafnian(A) == ref
    assert hafnian_bruteforce(block_embedding(A)) == ref


def test_permanent_via_labelring_and_modring():
    A = random_square(random.Random(15), 5, 0, 2)
    assert permanent_via_hafnian(A, algo="labelring") == permanent_ryser(A)
    p = ModRing(13)
    assert permanent_via_hafnian(A, p) == permanent_ryser(A, p)
