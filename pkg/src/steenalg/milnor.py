"""Coproduct on F_p[b_1, ..., b_K], the affine algebra of the automorphism
group scheme of the additive formal group:

    Delta b_k = sum_{l=0}^{k} b_l (x) b_{k-l}^(p^l),    b_0 = 1.

Monomials are exponent tuples of length K (``b_1`` first). A tensor element
maps ``(left, right)`` monomial pairs to nonzero residues mod p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .fpnum import check_prime


class TruncationError(ValueError):
    pass


def unit_monomial(K: int) -> tuple[int, ...]:
    return (0,) * K


def gen_monomial(k: int, K: int, power: int = 1) -> tuple[int, ...]:
    """``b_k^power`` as an exponent tuple; ``b_0`` is the unit."""
    m = [0] * K
    if k:
        m[k - 1] = power
    return tuple(m)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def render_monomial(m) -> str:
    parts = [f"b{i}" if e == 1 else f"b{i}^{e}" for i, e in enumerate(m, start=1) if e]
    return " ".join(parts) or "1"


@dataclass
class TensorElement:
    """F_p-combination of tensors ``m_1 (x) ... (x) m_r`` of dual monomials."""

    p: int
    K: int
    terms: dict = field(default_factory=dict)
    arity: int = 2

    def __post_init__(self):
        self.terms = {k: v % self.p for k, v in self.terms.items() if v % self.p}

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        if (self.p, self.K, self.arity) != (other.p, other.K, other.arity):
            raise ValueError("incompatible tensor elements")
        acc: dict = {}
        p = self.p
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = tuple(_mono_mul(x, y) for x, y in zip(ka, kb))
                acc[key] = (acc.get(key, 0) + ca * cb) % p
        return TensorElement(p, self.K, acc, self.arity)

    def __add__(self, other):
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = (acc.get(k, 0) + v) % self.p
        return TensorElement(self.p, self.K, acc, self.arity)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.p, self.K, self.arity, self.terms) == (other.p, other.K, other.arity, other.terms)

    def frobenius(self, d: int) -> "TensorElement":
        """``x^(p^d)``: in characteristic p this raises every term separately."""
        q = self.p**d
        terms = {tuple(tuple(e * q for e in m) for m in key): pow(c, q, self.p) for key, c in self.terms.items()}
        return TensorElement(self.p, self.K, terms, self.arity)

    def power(self, n: int) -> "TensorElement":
        """``x^n`` via base-p digits and Frobenius on each digit's place."""
        result = one(self.p, self.K, self.arity)
        d = 0
        while n:
            n, digit = divmod(n, self.p)
            if digit:
                base = self.frobenius(d)
                for _ in range(digit):
                    result = result * base
            d += 1
        return result

    def power_naive(self, n: int) -> "TensorElement":
        result = one(self.p, self.K, self.arity)
        for _ in range(n):
            result = result * self
        return result

    def sorted_terms(self):
        # left factor descending, higher generators dominating
        return sorted(self.terms.items(), key=lambda kv: tuple(m[::-1] for m in kv[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            body = "⊗".join(render_monomial(m) for m in key)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [[list(m) for m in key] + [c] for key, c in self.sorted_terms()]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def one(p: int, K: int, arity: int = 2) -> TensorElement:
    return TensorElement(p, K, {(unit_monomial(K),) * arity: 1}, arity)


def _check(k, p, K):
    check_prime(p)
    if not 1 <= k <= K:
        raise TruncationError(f"generator index {k} outside 1..{K}")


@lru_cache(maxsize=None)
def _coproduct_gen(k: int, p: int, K: int) -> TensorElement:
    terms: dict = {}
    for ell in range(k + 1):
        key = (gen_monomial(ell, K), gen_monomial(k - ell, K, p**ell))
        terms[key] = (terms.get(key, 0) + 1) % p
    return TensorElement(p, K, terms)


def clear_caches():
    _coproduct_gen.cache_clear()


def coproduct_gen(k: int, p: int, K: int) -> TensorElement:
    """``Delta b_k``; the exponents ``p^l`` are exact integers."""
    _check(k, p, K)
    return _coproduct_gen(k, p, K)


def coproduct(m: tuple[int, ...], p: int, K: int) -> TensorElement:
    """Multiplicative extension of :func:`coproduct_gen` to a monomial."""
    check_prime(p)
    m = tuple(m)
    if len(m) > K and any(m[K:]):
        raise TruncationError(f"monomial {m} uses generators beyond b_{K}")
    m = (m + (0,) * K)[:K]
    if any(e < 0 for e in m):
        raise ValueError("exponents must be nonnegative")
    result = one(p, K)
    for k, e in enumerate(m, start=1):
        if e:
            result = result * _coproduct_gen(k, p, K).power(e)
    return result


def _apply_on_factor(t: TensorElement, position: int) -> TensorElement:
    """Apply Delta to tensor factor ``position``, raising the arity by one."""
    p, K = t.p, t.K
    acc: dict = {}
    for key, c in t.terms.items():
        split = coproduct(key[position], p, K)
        for (l, r), d in split.terms.items():
            new = key[:position] + (l, r) + key[position + 1 :]
            acc[new] = (acc.get(new, 0) + c * d) % p
    return TensorElement(p, K, acc, t.arity + 1)


def counit(m) -> int:
    return 1 if not any(m) else 0


@dataclass
class CoalgebraReport:
    p: int
    K: int
    failures: list[dict] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"p": self.p, "K": self.K, "checked": self.checked, "failures": self.failures, "pass": self.ok}


def check_coassociativity(p: int, K: int) -> CoalgebraReport:
    """Check ``(Delta (x) id) Delta = (id (x) Delta) Delta`` and both counit
    laws on every generator ``b_1 .. b_K``."""
    check_prime(p)
    report = CoalgebraReport(p, K)
    for k in range(1, K + 1):
        d = coproduct_gen(k, p, K)
        left = _apply_on_factor(d, 0)
        right = _apply_on_factor(d, 1)
        report.checked += 1
        if left != right:
            report.failures.append({"k": k, "axiom": "coassociativity", "left": str(left), "right": str(right)})
        target = {(gen_monomial(k, K),): 1}
        eps_left: dict = {}
        eps_right: dict = {}
        for (l, r), c in d.terms.items():
            if counit(l):
                eps_left[(r,)] = (eps_left.get((r,), 0) + c) % p
            if counit(r):
                eps_right[(l,)] = (eps_right.get((l,), 0) + c) % p
        for name, got in (("counit_left", eps_left), ("counit_right", eps_right)):
            got = {key: v for key, v in got.items() if v}
            if got != target:
                report.failures.append({"k": k, "axiom": name, "got": repr(got)})
    return report
