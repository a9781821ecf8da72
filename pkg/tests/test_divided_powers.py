import itertools
import math
import random
from fractions import Fraction

import pytest

from steenalg.divided_powers import (
    Derivation,
    DPElement,
    Heights,
    dp_mul,
    derivation_apply,
    derivation_bracket,
    parse_derivation,
    parse_dp,
    parse_heights,
    partial,
)

# (p, heights) for the exhaustive suites: p in {2, 3}, m <= 2, N <= 2
EXHAUSTIVE = [(p, N) for p in (2, 3) for m in (1, 2) for N in itertools.product((1, 2), repeat=m)]


def _rational_product(a, b):
    """x^(a) x^(b) computed as x^a/a! * x^b/b! in Q, returned as the integer
    multiple of x^(a+b)."""
    q = Fraction(1, math.factorial(a)) * Fraction(1, math.factorial(b)) * math.factorial(a + b)
    assert q.denominator == 1
    return q.numerator


def test_examples():
    ctx = Heights(2, (2,))
    u = DPElement.var(ctx, 0, 1)
    assert (u * u).is_zero()
    ctx5 = Heights(5, (None,))
    assert str(DPElement.var(ctx5, 0, 1) * DPElement.var(ctx5, 0, 2)) == "3*u1^(3)"
    d = Derivation.basic(ctx, 0)
    ud = Derivation.basic(ctx, 0, u)
    assert derivation_bracket(d, ud) == d
    assert str(derivation_bracket(ud, Derivation.basic(ctx, 0, DPElement.var(ctx, 0, 2)))) == "u1^(2) d1"


@pytest.mark.parametrize("p,N", EXHAUSTIVE)
def test_product_matches_rational_model_and_closes(p, N):
    ctx = Heights(p, N)
    monos = ctx.monomials()
    basis = set(monos)
    for a in monos:
        for b in monos:
            f = dp_mul(DPElement.monomial(ctx, a), DPElement.monomial(ctx, b))
            expected_coeff = 1
            for r, s in zip(a, b):
                expected_coeff *= _rational_product(r, s)
            target = tuple(r + s for r, s in zip(a, b))
            if target in basis:
                assert f.terms == ({target: expected_coeff % p} if expected_coeff % p else {})
            else:
                # leaving the truncation: the integer coefficient is divisible by p
                assert expected_coeff % p == 0
                assert f.is_zero()
            assert set(f.terms) <= basis


@pytest.mark.parametrize("p,N", EXHAUSTIVE)
def test_associativity_exhaustive(p, N):
    ctx = Heights(p, N)
    monos = ctx.monomials()
    # products of basis monomials are 0 or a multiple of one monomial
    table = {}
    for a, b in itertools.product(monos, repeat=2):
        f = dp_mul(DPElement.monomial(ctx, a), DPElement.monomial(ctx, b))
        assert len(f.terms) <= 1
        table[a, b] = next(iter(f.terms.items()), (None, 0))

    def triple(first, second, third, left):
        if left:
            m, c = table[first, second]
            if not c:
                return None, 0
            m2, c2 = table[m, third]
        else:
            m, c = table[second, third]
            if not c:
                return None, 0
            m2, c2 = table[first, m]
        return (m2, c * c2 % p) if c2 else (None, 0)

    for a, b, c in itertools.product(monos, repeat=3):
        assert triple(a, b, c, True) == triple(a, b, c, False)


@pytest.mark.parametrize("p,N", EXHAUSTIVE)
def test_partials_commute_exhaustive(p, N):
    ctx = Heights(p, N)
    for m in ctx.monomials():
        f = DPElement.monomial(ctx, m)
        for i, j in itertools.product(range(ctx.m), repeat=2):
            assert partial(i, partial(j, f)) == partial(j, partial(i, f))
        for i in range(ctx.m):
            # d_i u^(r) = u^(r-1)
            if m[i]:
                expected = list(m)
                expected[i] -= 1
                assert partial(i, f) == DPElement.monomial(ctx, tuple(expected))


@pytest.mark.parametrize("N,odd", [((1,), 2), ((2,), 1), ((1, 1), 2)])
def test_odd_partials_anticommute_and_leibniz(N, odd):
    ctx = Heights(3, N, odd)
    monos = ctx.monomials()
    for m in monos:
        f = DPElement.monomial(ctx, m)
        for i, j in itertools.product(range(ctx.m, ctx.nvars), repeat=2):
            lhs, rhs = partial(i, partial(j, f)), partial(j, partial(i, f))
            assert lhs == -rhs
    for a, b in itertools.product(monos, repeat=2):
        f, g = DPElement.monomial(ctx, a), DPElement.monomial(ctx, b)
        for i in range(ctx.nvars):
            sign = -1 if ctx.is_odd(i) and ctx.parity(a) else 1
            assert partial(i, f * g) == partial(i, f) * g + (f * partial(i, g)).scale(sign)


def test_odd_variables_square_to_zero_and_anticommute():
    ctx = Heights(3, (), 2)
    x, y = DPElement.var(ctx, 0), DPElement.var(ctx, 1)
    assert (x * x).is_zero()
    assert x * y == -(y * x)


def _random_derivation(rnd, ctx, parity):
    monos = ctx.monomials()
    coeffs = []
    for i in range(ctx.nvars):
        want = (parity + int(ctx.is_odd(i))) % 2
        choices = [m for m in monos if ctx.parity(m) == want]
        terms = {}
        for _ in range(rnd.randint(0, 2)):
            terms[rnd.choice(choices)] = rnd.randrange(1, ctx.p)
        coeffs.append(DPElement(ctx, terms))
    return Derivation(ctx, coeffs, parity)


def _contexts():
    return [Heights(2, (2,)), Heights(2, (1, 2)), Heights(3, (1,), 1), Heights(3, (2,), 1), Heights(3, (1, 1), 1)]


def test_super_jacobi_random(seed):
    rnd = random.Random(seed)
    ctxs = _contexts()
    for _ in range(500):
        ctx = rnd.choice(ctxs)
        par = [rnd.randrange(2) if ctx.n_odd else 0 for _ in range(3)]
        D1, D2, D3 = (_random_derivation(rnd, ctx, q) for q in par)
        sign = -1 if par[0] * par[1] % 2 else 1
        lhs = derivation_bracket(D1, derivation_bracket(D2, D3))
        rhs = derivation_bracket(derivation_bracket(D1, D2), D3) + derivation_bracket(D2, derivation_bracket(D1, D3)).scale(sign)
        assert lhs == rhs


def test_bracket_is_operator_commutator(seed):
    rnd = random.Random(seed + 1)
    for ctx in _contexts():
        monos = ctx.monomials()
        for _ in range(20):
            par = [rnd.randrange(2) if ctx.n_odd else 0 for _ in range(2)]
            D1, D2 = (_random_derivation(rnd, ctx, q) for q in par)
            B = derivation_bracket(D1, D2)
            sign = -1 if par[0] * par[1] else 1
            for m in monos:
                f = DPElement.monomial(ctx, m)
                assert B(f) == D1(D2(f)) - D2(D1(f)).scale(sign)


def test_parsing():
    ctx = parse_heights("2,1", 2, 1)
    assert ctx.N == (2, 1) and ctx.n_odd == 1
    assert parse_heights("inf", 3).N == (None,)
    f = parse_dp("u1^(3) u2^(1)", ctx)
    assert str(f) == "u1^(3) u2^(1)"
    D = parse_derivation("u1^(1) d1 + u2^(1) d2", parse_heights("2,2", 3))
    assert str(D) == "u1^(1) d1 + u2^(1) d2"
    with pytest.raises(ValueError):
        parse_dp("u4^(1)", ctx)
    with pytest.raises(ValueError):
        parse_dp("x1", ctx)
    with pytest.raises(ValueError):
        parse_derivation("u1^(1)", ctx)


def test_validation():
    with pytest.raises(ValueError):
        Heights(4, (1,))
    with pytest.raises(ValueError):
        Heights(2, (0,))
    ctx = Heights(3, (1,), 1)
    with pytest.raises(ValueError):
        # mixed parity coefficients
        Derivation(ctx, [DPElement.one(ctx), DPElement.one(ctx)])
    with pytest.raises(ValueError):
        DPElement.monomial(ctx, (3, 0))  # beyond the height
