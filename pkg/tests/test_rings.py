import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmcount.rings import (
    ZZ,
    ModInt,
    ModRing,
    PolynomialRing,
    TruncatedPolynomial,
    coefficient_of,
    coprime_moduli,
    crt_combine,
    poly_add,
    poly_mul,
)


def tp(coeffs, cap, ring=ZZ):
    return TruncatedPolynomial(ring, cap, coeffs)


def _sample(ring, rnd):
    if isinstance(ring, PolynomialRing):
        return TruncatedPolynomial(ring.base, ring.cap, [rnd.randrange(-20, 20) for _ in range(ring.cap + 1)])
    return ring(rnd.randrange(-10**12, 10**12))


@pytest.mark.parametrize(
    "ring", [ZZ, ModRing(1000003), ModRing(12), PolynomialRing(4), PolynomialRing(3, ModRing(7))],
    ids=repr,
)
def test_ring_axioms_on_random_triples(ring):
    rnd = random.Random(7)
    zero, one = ring.zero, ring.one
    for _ in range(1000):
        a, b, c = (_sample(ring, rnd) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a
        assert a * one == a
        assert a + (-a) == zero
        assert a - b == a + (-b)


def test_modint_stays_reduced_and_rejects_mixed_moduli():
    x = ModInt(-1, 7)
    assert x.value == 6
    assert (x * x).value == 1
    with pytest.raises(ValueError):
        ModInt(1, 7) + ModInt(1, 5)
    with pytest.raises(ValueError):
        ModRing(1)


def test_poly_add_examples():
    assert poly_add(tp([1, 2], 1), tp([3, 4], 1)) == tp([4, 6], 1)
    p = tp([5, 0, 3], 2)
    assert poly_add(p, PolynomialRing(2).zero) == p
    z5 = ModRing(5)
    assert poly_add(tp([4, 4], 1, z5), tp([3, 3], 1, z5)) == tp([2, 2], 1, z5)


def test_poly_mul_examples():
    assert poly_mul(tp([1, 1], 2), tp([1, 1], 2)) == tp([1, 2, 1], 2)
    assert poly_mul(tp([1, 1], 1), tp([1, 1], 1)) == tp([1, 2], 1)
    assert poly_mul(tp([2, 3], 2), tp([5, 1], 2)) == tp([10, 17, 3], 2)


def test_poly_mismatch_errors():
    with pytest.raises(ValueError):
        poly_add(tp([1], 1), tp([1], 2))
    with pytest.raises(ValueError):
        poly_mul(tp([1], 1), tp([1], 1, ModRing(5)))


def test_truncated_polynomial_has_fixed_length():
    assert len(tp([1], 4).coeffs) == 5
    assert tp([1, 2, 3, 4], 1).coeffs == (1, 2)


def test_coefficient_of():
    assert coefficient_of(tp([1, 2, 3], 2), 2) == 3
    assert coefficient_of(PolynomialRing(3).zero, 0) == 0
    assert coefficient_of(tp([0, 7], 1), 0) == 0
    with pytest.raises(IndexError):
        coefficient_of(tp([1], 2), 3)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(-50, 50), min_size=1, max_size=6),
    st.lists(st.integers(-50, 50), min_size=1, max_size=6),
)
def test_poly_mul_matches_schoolbook_when_cap_is_large(p, q):
    cap = len(p) + len(q)
    exact = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            exact[i + j] += a * b
    assert poly_mul(tp(p, cap), tp(q, cap)) == tp(exact, cap)


def test_crt_examples():
    assert crt_combine([(2, 3), (3, 5)]) == 8
    assert crt_combine([(0, 3), (0, 5)]) == 0
    residues = [(1, 4), (2, 9), (3, 25)]
    scan = [x for x in range(900) if all(x % m == v for v, m in residues)]
    assert scan == [crt_combine(residues)]


def test_crt_rejects_non_coprime():
    with pytest.raises(ValueError):
        crt_combine([(1, 4), (1, 6)])


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_crt_roundtrip(data):
    moduli = data.draw(st.sampled_from([[3, 5, 7], [4, 9, 25, 49], [2**31 - 1, 2**31 - 19], [11]]))
    x = data.draw(st.integers(0, math.prod(moduli) - 1))
    assert crt_combine([(x % m, m) for m in moduli]) == x


def _prime_powers_oracle(n, bound):
    primes = [p for p in range(2, 200) if all(p % d for d in range(2, p))][:n]
    out = []
    for p in primes:
        out.append(next(p**e for e in itertools.count(1) if p**e > bound))
    return out


@pytest.mark.parametrize("n,bound,expected", [(3, 10, [16, 27, 25]), (1, 1, [2]), (2, 100, [128, 243])])
def test_coprime_moduli_examples(n, bound, expected):
    assert coprime_moduli(n, bound) == expected
    assert _prime_powers_oracle(n, bound) == expected


def test_coprime_moduli_pairwise_coprime():
    ms = coprime_moduli(8, 50)
    assert ms == _prime_powers_oracle(8, 50)
    assert all(math.gcd(a, b) == 1 for a, b in itertools.combinations(ms, 2))
