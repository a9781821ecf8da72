"""Divided-power algebras O(m; N | n) over F_p and distinguished derivations.

Variables ``u_1 .. u_m`` are even, with heights ``N_i`` (``None`` for an
infinite height); ``u_(m+1) .. u_(m+n)`` are odd with exponents 0 or 1.
Monomials are exponent tuples. The product is

    u^(r) * u^(s) = prod_i C(r_i + s_i, r_i) u^(r + s)

and the distinguished partial derivatives lower one exponent:
``d_i u_j^(k) = delta_ij u_j^(k-1)``. For p > 2 odd variables anticommute
(Koszul sign, odd variables kept in ascending order).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .fpnum import binom_mod_p, check_prime


@dataclass(frozen=True)
class Heights:
    """Context of O(m; N | n): the prime, even heights and odd count."""

    p: int
    N: tuple = ()
    n_odd: int = 0

    def __post_init__(self):
        check_prime(self.p)
        N = tuple(None if h is None else int(h) for h in self.N)
        if any(h is not None and h < 1 for h in N):
            raise ValueError("heights must be positive or None (infinite)")
        object.__setattr__(self, "N", N)
        if self.n_odd < 0:
            raise ValueError("number of odd variables must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.N)

    @property
    def nvars(self) -> int:
        return len(self.N) + self.n_odd

    def is_odd(self, i: int) -> bool:
        return i >= self.m

    def bound(self, i: int) -> int | None:
        """Exclusive exponent bound of variable i (None if unbounded)."""
        if self.is_odd(i):
            return 2
        h = self.N[i]
        return None if h is None else self.p**h

    def is_finite(self) -> bool:
        return all(h is not None for h in self.N)

    def dimension(self) -> int:
        if not self.is_finite():
            raise ValueError("infinite-dimensional")
        out = 2**self.n_odd
        for h in self.N:
            out *= self.p**h
        return out

    def monomials(self):
        """All basis monomials of a finite-height algebra."""
        if not self.is_finite():
            raise ValueError("infinite-dimensional")
        ranges = [range(self.bound(i)) for i in range(self.nvars)]
        return [tuple(r) for r in itertools.product(*ranges)]

    def parity(self, mono) -> int:
        return sum(mono[self.m :]) % 2


class DPElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Heights, terms: Mapping | None = None):
        self.ctx = ctx
        acc: dict = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != ctx.nvars:
                raise ValueError(f"monomial {mono} has wrong length for {ctx.nvars} variables")
            for i, r in enumerate(mono):
                b = ctx.bound(i)
                if r < 0 or (b is not None and r >= b):
                    raise ValueError(f"exponent {r} of u{i + 1} out of range")
            acc[mono] = (acc.get(mono, 0) + int(c)) % ctx.p
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def monomial(cls, ctx: Heights, mono, coeff: int = 1) -> "DPElement":
        return cls(ctx, {tuple(mono): coeff})

    @classmethod
    def one(cls, ctx: Heights) -> "DPElement":
        return cls(ctx, {(0,) * ctx.nvars: 1})

    @classmethod
    def var(cls, ctx: Heights, i: int, r: int = 1) -> "DPElement":
        mono = [0] * ctx.nvars
        mono[i] = r
        return cls(ctx, {tuple(mono): 1})

    def _check(self, other):
        if not isinstance(other, DPElement):
            raise TypeError(f"expected DPElement, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ValueError("context mismatch")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return DPElement(self.ctx, acc)

    def __neg__(self):
        return DPElement(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "DPElement":
        return DPElement(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return dp_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DPElement):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def parities(self) -> set[int]:
        return {self.ctx.parity(m) for m in self.terms}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            body = render_monomial(mono)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DPElement({self})"


def render_monomial(mono) -> str:
    return " ".join(f"u{i}^({r})" for i, r in enumerate(mono, start=1) if r) or "1"


def _odd_sign(ctx: Heights, a, b) -> int:
    """Koszul sign of moving the odd letters of b past those of a; 0 if some
    odd variable repeats."""
    m = ctx.m
    sign = 1
    for i in range(m, ctx.nvars):
        if a[i] and b[i]:
            return 0
    if ctx.p == 2:
        return 1
    for j in range(m, ctx.nvars):
        if b[j]:
            for i in range(j + 1, ctx.nvars):
                if a[i]:
                    sign = -sign
    return sign


def _mono_product(ctx: Heights, a, b):
    """``(coeff, monomial)`` for ``u^(a) u^(b)``, coefficient possibly 0."""
    p = ctx.p
    sign = _odd_sign(ctx, a, b)
    if not sign:
        return 0, None
    coeff = sign
    out = []
    for i in range(ctx.nvars):
        r, s = a[i], b[i]
        if ctx.is_odd(i):
            out.append(r + s)
            continue
        c = binom_mod_p(r + s, r, p)
        bound = ctx.bound(i)
        if bound is not None and r + s >= bound:
            # Kummer: a carry past the top digit forces p | C(r+s, r)
            if c:
                raise ArithmeticError(f"overflow product u{i + 1}^({r}) u{i + 1}^({s}) has nonzero coefficient")
            return 0, None
        coeff *= c
        if not coeff:
            return 0, None
        out.append(r + s)
    return coeff % p, tuple(out)


def dp_mul(a: DPElement, b: DPElement) -> DPElement:
    a._check(b)
    ctx = a.ctx
    acc: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c, mono = _mono_product(ctx, ma, mb)
            if c:
                acc[mono] = (acc.get(mono, 0) + c * ca * cb) % ctx.p
    return DPElement(ctx, acc)


def partial(i: int, f: DPElement) -> DPElement:
    """The distinguished derivative in variable i (0-based)."""
    ctx = f.ctx
    if not 0 <= i < ctx.nvars:
        raise IndexError(f"variable index {i} out of range")
    acc: dict = {}
    for mono, c in f.terms.items():
        if not mono[i]:
            continue
        sign = 1
        if ctx.is_odd(i):
            # move the odd derivative past the odd letters before it
            if sum(mono[ctx.m : i]) % 2:
                sign = -1
        new = list(mono)
        new[i] -= 1
        key = tuple(new)
        acc[key] = acc.get(key, 0) + sign * c
    return DPElement(ctx, acc)


class Derivation:
    """``sum_i f_i d_i`` with homogeneous parity."""

    __slots__ = ("ctx", "coeffs", "parity")

    def __init__(self, ctx: Heights, coeffs: Sequence[DPElement], parity: int | None = None):
        coeffs = tuple(coeffs)
        if len(coeffs) != ctx.nvars:
            raise ValueError(f"expected {ctx.nvars} coefficients, got {len(coeffs)}")
        for f in coeffs:
            if f.ctx != ctx:
                raise ValueError("context mismatch")
        found = set()
        for i, f in enumerate(coeffs):
            for par in f.parities():
                found.add((par + int(ctx.is_odd(i))) % 2)
        if len(found) > 1:
            raise ValueError("derivation is not homogeneous")
        if parity is None:
            parity = found.pop() if found else 0
        elif found and found != {parity % 2}:
            raise ValueError(f"declared parity {parity} does not match coefficients")
        self.ctx = ctx
        self.coeffs = coeffs
        self.parity = parity % 2

    @classmethod
    def basic(cls, ctx: Heights, i: int, f: DPElement | None = None) -> "Derivation":
        """``f d_i`` (``d_i`` when f is omitted)."""
        zero = DPElement(ctx)
        coeffs = [zero] * ctx.nvars
        coeffs[i] = DPElement.one(ctx) if f is None else f
        return cls(ctx, coeffs)

    def __call__(self, f: DPElement) -> DPElement:
        return derivation_apply(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.ctx, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return Derivation(self.ctx, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: int) -> "Derivation":
        return Derivation(self.ctx, [a.scale(c) for a in self.coeffs], self.parity)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs)

    def __str__(self):
        parts = []
        for i, f in enumerate(self.coeffs, start=1):
            if f.is_zero():
                continue
            if f == DPElement.one(self.ctx):
                parts.append(f"d{i}")
            elif len(f.terms) == 1:
                parts.append(f"{f} d{i}")
            else:
                parts.append(f"({f}) d{i}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"Derivation({self})"


def derivation_apply(D: Derivation, f: DPElement) -> DPElement:
    if D.ctx != f.ctx:
        raise ValueError("context mismatch")
    out = DPElement(f.ctx)
    for i, c in enumerate(D.coeffs):
        if c:
            out = out + dp_mul(c, partial(i, f))
    return out


def derivation_bracket(D1: Derivation, D2: Derivation) -> Derivation:
    """Super-commutator, by applying each derivation to the other's coefficients."""
    if D1.ctx != D2.ctx:
        raise ValueError("context mismatch")
    sign = -1 if D1.parity and D2.parity else 1
    coeffs = [derivation_apply(D1, g) - derivation_apply(D2, f).scale(sign) for f, g in zip(D1.coeffs, D2.coeffs)]
    return Derivation(D1.ctx, coeffs, (D1.parity + D2.parity) % 2)


# -- text forms -------------------------------------------------------------

_MONO_RE = re.compile(r"u(\d+)\^\((\d+)\)")


def parse_heights(N: str, p: int, odd: int = 0) -> Heights:
    """``"2,1"`` or ``"inf,2"``."""
    hs = []
    for part in filter(None, (s.strip() for s in N.split(","))):
        hs.append(None if part.lower() in ("inf", "infinity", "oo") else int(part))
    return Heights(p, tuple(hs), odd)


def _parse_monomial(text: str, ctx: Heights):
    text = text.strip()
    mono = [0] * ctx.nvars
    if text in ("", "1"):
        return tuple(mono)
    for tok in text.split():
        m = _MONO_RE.fullmatch(tok)
        if m is None:
            raise ValueError(f"bad divided-power factor {tok!r}")
        i, r = int(m.group(1)), int(m.group(2))
        if not 1 <= i <= ctx.nvars:
            raise ValueError(f"variable u{i} out of range")
        if mono[i - 1]:
            raise ValueError(f"variable u{i} repeated")
        mono[i - 1] = r
    return tuple(mono)


def _split_coeff(term: str):
    if "*" in term:
        c, rest = term.split("*", 1)
        return int(c), rest
    return 1, term


def parse_dp(text: str, ctx: Heights) -> DPElement:
    """``"2*u1^(3) u2^(1) + u1^(1)"``; ``1`` is the unit."""
    terms: dict = {}
    for raw in text.split("+"):
        c, body = _split_coeff(raw.strip())
        mono = _parse_monomial(body, ctx)
        terms[mono] = terms.get(mono, 0) + c
    return DPElement(ctx, terms)


def parse_derivation(text: str, ctx: Heights) -> Derivation:
    """``"u1^(1) d1 + 2*u2^(2) d2"``; a bare ``d1`` means ``1 d1``."""
    coeffs = [DPElement(ctx) for _ in range(ctx.nvars)]
    for raw in text.split("+"):
        c, body = _split_coeff(raw.strip())
        toks = body.split()
        if not toks or not re.fullmatch(r"d\d+", toks[-1]):
            raise ValueError(f"derivation term {raw!r} must end with d<i>")
        i = int(toks[-1][1:])
        if not 1 <= i <= ctx.nvars:
            raise ValueError(f"d{i} out of range")
        f = DPElement.monomial(ctx, _parse_monomial(" ".join(toks[:-1]), ctx), c)
        coeffs[i - 1] = coeffs[i - 1] + f
    return Derivation(ctx, coeffs)
