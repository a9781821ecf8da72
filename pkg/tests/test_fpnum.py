import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steenalg.fpnum import FpField, FpScalar, PrimeError, binom_mod_p, check_prime, is_prime

PRIMES = [2, 3, 5, 7, 11]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("bad", [0, 1, 4, 9, -3])
def test_check_prime_rejects(bad):
    with pytest.raises(PrimeError):
        check_prime(bad)


@pytest.mark.parametrize(
    "n,k,p,expected",
    [(3, 1, 3, 0), (1, 2, 2, 0), (5, 2, 2, 0), (6, 2, 2, 1), (10, 3, 5, 0), (0, 0, 7, 1)],
)
def test_binom_examples(n, k, p, expected):
    assert binom_mod_p(n, k, p) == expected


def test_binom_negative_k_is_zero_and_negative_n_raises():
    assert binom_mod_p(5, -1, 3) == 0
    with pytest.raises(ValueError):
        binom_mod_p(-1, 0, 3)


@given(st.integers(0, 400), st.integers(-3, 420), st.sampled_from(PRIMES))
def test_binom_matches_integer_binomial(n, k, p):
    expected = math.comb(n, k) % p if 0 <= k <= n else 0
    assert binom_mod_p(n, k, p) == expected


@given(st.integers(0, 10**30), st.integers(0, 10**30), st.sampled_from(PRIMES))
def test_binom_large_arguments(n, k, p):
    # Lucas: product of digit binomials
    expected, nn, kk = 1, n, k
    while nn or kk:
        expected = expected * math.comb(nn % p, kk % p) % p
        nn //= p
        kk //= p
    assert binom_mod_p(n, k, p) == (expected if k <= n else 0)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_field_axioms(p, a, b, c):
    F = FpField(p)
    x, y, z = F(a), F(b), F(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == F(0)
    if x.value:
        assert x * x.inverse() == F(1)
        assert (y / x) * x == y
    assert x**p == x  # Fermat


def test_prime_mismatch():
    with pytest.raises(ValueError):
        FpScalar(1, 3) + FpScalar(1, 5)


def test_scalar_range_and_inverse_of_zero():
    with pytest.raises(ValueError):
        FpScalar(3, 3)
    with pytest.raises(ZeroDivisionError):
        FpScalar(0, 5).inverse()
    assert FpField(5).inv(2) == 3
    assert [e.value for e in FpField(3).elements()] == [0, 1, 2]
