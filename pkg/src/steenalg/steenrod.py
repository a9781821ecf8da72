"""The mod-p Steenrod algebra with admissible-monomial normal forms.

Monomials are kept internally as *words*, plain tuples of integers:

* ``p == 2``: the exponent sequence ``(s1, ..., sn)`` of ``Sq^s1 ... Sq^sn``;
* ``p > 2``: the interleaved sequence ``(e0, s1, e1, ..., sn, en)`` of
  ``b^e0 P^s1 b^e1 ... P^sn b^en`` with ``b`` the Bockstein and ``ei`` in {0, 1}.

Products of words are brought to normal form by repeatedly applying an Adem
relation at an inadmissible position. ``lam`` is the value given to ``P^0``
(``Sq^0``) in the ``i = 0`` term of the relations; the ordinary algebra is
``lam = 1`` and ``lam = 0`` is the degenerate branch used by the obstruction
argument in :mod:`steenalg.pbw`.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .fpnum import binom_mod_p, check_prime

__all__ = [
    "ParseError",
    "ReductionError",
    "SteenrodMonomial",
    "SteenrodElement",
    "Sq",
    "P",
    "beta",
    "unit",
    "parse_expr",
    "degree",
    "is_admissible",
    "adem_reduce",
    "mul",
    "power",
    "commutator",
    "basis",
    "dim",
]

MAX_REWRITE_DEPTH = 10_000


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ReductionError(RuntimeError):
    """Internal error: Adem rewriting failed to terminate."""


# -- words ------------------------------------------------------------------


def word_degree(p: int, word: tuple) -> int:
    if p == 2:
        return sum(word)
    return 2 * (p - 1) * sum(word[1::2]) + sum(word[0::2])


def word_is_admissible(p: int, word: tuple) -> bool:
    return _first_bad_pair(p, word, "left") is None


def _first_bad_pair(p: int, word: tuple, strategy: str):
    """Index of an inadmissible adjacent pair, or None.

    For ``p == 2`` the index ``i`` refers to ``(word[i], word[i+1])``; for odd
    ``p`` it is the 1-based position ``t`` of ``(s_t, e_t, s_{t+1})``.
    """
    if p == 2:
        idx = range(len(word) - 1)
        if strategy == "right":
            idx = reversed(idx)
        for i in idx:
            if word[i] < 2 * word[i + 1]:
                return i
        return None
    n = len(word) // 2
    idx = range(1, n)
    if strategy == "right":
        idx = reversed(idx)
    for t in idx:
        if word[2 * t - 1] < p * word[2 * t + 1] + word[2 * t]:
            return t
    return None


BETA = -1


def word_tokens(p: int, word: tuple) -> list[int]:
    """Letters of a word; ``BETA`` stands for the Bockstein."""
    if p == 2:
        return list(word)
    out = []
    for i, v in enumerate(word):
        if i % 2 == 0:
            if v:
                out.append(BETA)
        else:
            out.append(v)
    return out


def tokens_to_word(p: int, tokens: Iterable[int]):
    """Inverse of :func:`word_tokens`; None when two Bocksteins are adjacent."""
    if p == 2:
        return tuple(tokens)
    out = [0]
    for tok in tokens:
        if tok == BETA:
            if out[-1]:
                return None
            out[-1] = 1
        else:
            out.append(tok)
            out.append(0)
    return tuple(out)


def concat_words(p: int, u: tuple, v: tuple):
    if p == 2:
        return u + v
    if u[-1] and v[0]:
        return None
    return u[:-1] + (u[-1] + v[0],) + v[1:]


def unit_word(p: int) -> tuple:
    return () if p == 2 else (0,)


def word_sort_key(p: int, word: tuple):
    if p == 2:
        return (sum(word), tuple(-s for s in word), ())
    return (word_degree(p, word), tuple(-s for s in word[1::2]), word[0::2])


# -- Adem rewriting ---------------------------------------------------------


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class _Reducer:
    """Memoized rewriting to admissible form for one (p, lam, strategy)."""

    def __init__(self, p: int, lam: int, strategy: str):
        self.p = p
        self.lam = lam % p
        self.strategy = strategy
        self.memo: dict[tuple, dict[tuple, int]] = {}

    def __call__(self, word: tuple) -> dict[tuple, int]:
        return self._reduce(word, 0)

    def _reduce(self, word, depth):
        hit = self.memo.get(word)
        if hit is not None:
            return hit
        if depth > MAX_REWRITE_DEPTH:
            raise ReductionError(f"rewriting depth exceeded on word {word}")
        pos = _first_bad_pair(self.p, word, self.strategy)
        if pos is None:
            result = {word: 1}
        else:
            p = self.p
            acc: dict[tuple, int] = {}
            for new_word, c in self._rewrite(word, pos):
                for w, d in self._reduce(new_word, depth + 1).items():
                    acc[w] = (acc.get(w, 0) + c * d) % p
            result = {w: c for w, c in acc.items() if c}
        self.memo[word] = result
        return result

    def _rewrite(self, word, pos):
        """Yield ``(word, coeff)`` for one application of an Adem relation."""
        p, lam = self.p, self.lam
        if p == 2:
            a, b = word[pos], word[pos + 1]
            pre, post = word[:pos], word[pos + 2 :]
            for j in range(a // 2 + 1):
                c = binom_mod_p(b - j - 1, a - 2 * j, 2)
                if j == 0:
                    c *= lam
                if c % 2:
                    mid = (a + b - j, j) if j else (a + b,)
                    yield pre + mid + post, 1
            return

        t = pos
        a, e, b = word[2 * t - 1], word[2 * t], word[2 * t + 1]
        left = word_tokens(p, word[: 2 * t - 1])
        right = word_tokens(p, word[2 * t + 2 :])

        def emit(mid, c):
            c %= p
            if c:
                w = tokens_to_word(p, left + mid + right)
                if w is not None:
                    yield w, c

        if e == 0:
            # P^a P^b, a < pb
            for j in range(a // p + 1):
                c = _sign(a + j) * binom_mod_p((p - 1) * (b - j) - 1, a - p * j, p)
                if j == 0:
                    yield from emit([a + b], c * lam)
                else:
                    yield from emit([a + b - j, j], c)
        else:
            # P^a b P^b, a <= pb; the (-1)^(a+i) sign is vacuous only at p = 2
            for j in range(a // p + 1):
                c = _sign(a + j) * binom_mod_p((p - 1) * (b - j), a - p * j, p)
                if j == 0:
                    yield from emit([BETA, a + b], c * lam)
                else:
                    yield from emit([BETA, a + b - j, j], c)
            for j in range((a - 1) // p + 1):
                c = -_sign(a + j) * binom_mod_p((p - 1) * (b - j) - 1, a - p * j - 1, p)
                if j == 0:
                    yield from emit([a + b, BETA], c * lam)
                else:
                    yield from emit([a + b - j, BETA, j], c)


_reducers: dict[tuple, _Reducer] = {}
_reducers_lock = threading.Lock()


def reducer(p: int, lam: int = 1, strategy: str = "left") -> _Reducer:
    if strategy not in ("left", "right"):
        raise ValueError(f"unknown strategy {strategy!r}")
    key = (p, lam % p, strategy)
    with _reducers_lock:
        red = _reducers.get(key)
        if red is None:
            red = _reducers[key] = _Reducer(p, lam, strategy)
    return red


def clear_caches():
    """Drop memoized reductions and bases (for timing and live recomputation)."""
    with _reducers_lock:
        _reducers.clear()
    admissible_words.cache_clear()


# -- monomials and elements -------------------------------------------------


@dataclass(frozen=True)
class SteenrodMonomial:
    """``P^s1 ... P^sn`` (``Sq`` for p = 2), for odd p interleaved with
    Bocksteins ``b^e0 P^s1 b^e1 ... P^sn b^en``."""

    p: int
    exponents: tuple[int, ...] = ()
    bocksteins: tuple[int, ...] | None = None

    def __post_init__(self):
        check_prime(self.p)
        exps = tuple(int(s) for s in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if any(s <= 0 for s in exps):
            raise ValueError(f"exponents must be positive: {exps}")
        if self.p == 2:
            if self.bocksteins:
                raise ValueError("no Bockstein data at p = 2")
            object.__setattr__(self, "bocksteins", ())
        else:
            bocks = self.bocksteins
            if bocks is None:
                bocks = (0,) * (len(exps) + 1)
            bocks = tuple(int(e) for e in bocks)
            if len(bocks) != len(exps) + 1 or any(e not in (0, 1) for e in bocks):
                raise ValueError(f"bad Bockstein bits {bocks} for exponents {exps}")
            object.__setattr__(self, "bocksteins", bocks)

    @classmethod
    def from_word(cls, p: int, word: tuple) -> "SteenrodMonomial":
        if p == 2:
            return cls(2, word)
        return cls(p, word[1::2], word[0::2])

    @property
    def word(self) -> tuple:
        if self.p == 2:
            return self.exponents
        out = [self.bocksteins[0]]
        for s, e in zip(self.exponents, self.bocksteins[1:]):
            out += [s, e]
        return tuple(out)

    @property
    def degree(self) -> int:
        return word_degree(self.p, self.word)

    def is_admissible(self) -> bool:
        return word_is_admissible(self.p, self.word)

    def is_unit(self) -> bool:
        return not self.exponents and not any(self.bocksteins)

    def __str__(self):
        return render_word(self.p, self.word)


def render_word(p: int, word: tuple) -> str:
    if p == 2:
        return " ".join(f"Sq{s}" for s in word) or "1"
    return " ".join("b" if t == BETA else f"P{t}" for t in word_tokens(p, word)) or "1"


class SteenrodElement:
    """An F_p-linear combination of monomials; immutable.

    Coefficients are least nonnegative residues and zero terms are never
    stored. Arithmetic operators ``* **`` use the algebra product.
    """

    __slots__ = ("p", "_terms", "_hash")

    def __init__(self, p: int, terms: Mapping | None = None):
        check_prime(p)
        self.p = p
        acc: dict[tuple, int] = {}
        for m, c in (terms or {}).items():
            w = m.word if isinstance(m, SteenrodMonomial) else tuple(m)
            if isinstance(m, SteenrodMonomial) and m.p != p:
                raise ValueError(f"prime mismatch: {m.p} vs {p}")
            acc[w] = (acc.get(w, 0) + int(c)) % p
        self._terms = {w: c for w, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _from_words(cls, p, terms):
        el = cls.__new__(cls)
        el.p = p
        el._terms = {w: c for w, c in terms.items() if c}
        el._hash = None
        return el

    @classmethod
    def zero(cls, p: int) -> "SteenrodElement":
        return cls(p)

    @classmethod
    def from_word(cls, p: int, word: tuple, coeff: int = 1) -> "SteenrodElement":
        return cls(p, {tuple(word): coeff})

    # -- inspection

    def words(self) -> list[tuple]:
        return sorted(self._terms, key=lambda w: word_sort_key(self.p, w))

    def terms(self) -> list[tuple[SteenrodMonomial, int]]:
        """``(monomial, coefficient)`` pairs in canonical order."""
        return [(SteenrodMonomial.from_word(self.p, w), self._terms[w]) for w in self.words()]

    def word_terms(self) -> dict[tuple, int]:
        return dict(self._terms)

    def coefficient(self, m) -> int:
        w = m.word if isinstance(m, SteenrodMonomial) else tuple(m)
        return self._terms.get(w, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degrees(self) -> set[int]:
        return {word_degree(self.p, w) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs), None)

    def is_admissible(self) -> bool:
        return all(word_is_admissible(self.p, w) for w in self._terms)

    # -- linear structure

    def _check(self, other):
        if not isinstance(other, SteenrodElement):
            raise TypeError(f"expected SteenrodElement, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        if isinstance(other, int):
            other = unit(self.p).scale(other)
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = (acc.get(w, 0) + c) % self.p
        return SteenrodElement._from_words(self.p, acc)

    __radd__ = __add__

    def __neg__(self):
        return SteenrodElement._from_words(self.p, {w: -c % self.p for w, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = unit(self.p).scale(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "SteenrodElement":
        c = int(c) % self.p
        return SteenrodElement._from_words(self.p, {w: v * c % self.p for w, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, other):
        if isinstance(other, int):
            other = unit(self.p).scale(other)
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"SteenrodElement(p={self.p}, {render(self)!r})"

    # -- serialization

    def to_json(self) -> dict:
        out = []
        for m, c in self.terms():
            out.append({"coeff": c, "exponents": list(m.exponents), "bocksteins": list(m.bocksteins)})
        return {"p": self.p, "terms": out}

    @classmethod
    def from_json(cls, data: Mapping) -> "SteenrodElement":
        p = int(data["p"])
        terms = {}
        for t in data["terms"]:
            m = SteenrodMonomial(p, tuple(t["exponents"]), tuple(t.get("bocksteins", ())) or None)
            terms[m] = terms.get(m, 0) + int(t["coeff"])
        return cls(p, terms)


def render(el: SteenrodElement) -> str:
    if el.is_zero():
        return "0"
    parts = []
    for w in el.words():
        c = el._terms[w]
        body = render_word(el.p, w)
        parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts)


def Sq(*exponents: int) -> SteenrodElement:
    """The word ``Sq^a Sq^b ...`` at p = 2 (not reduced); ``Sq()`` is 1."""
    return SteenrodElement(2, {tuple(s for s in exponents if s): 1})


def P(*exponents: int, p: int) -> SteenrodElement:
    """The word ``P^a P^b ...`` at an odd prime (not reduced)."""
    if p == 2:
        return Sq(*exponents)
    return SteenrodElement(p, {tokens_to_word(p, [s for s in exponents if s]): 1})


def beta(p: int) -> SteenrodElement:
    if p == 2:
        raise ValueError("the Bockstein is a separate generator only for odd p; at p = 2 it is Sq1")
    return SteenrodElement(p, {(1,): 1})


def unit(p: int) -> SteenrodElement:
    return SteenrodElement(p, {unit_word(p): 1})


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sq>Sq\d+)|(?P<P>P\d+)|(?P<b>b)|(?P<star>\*)|(?P<plus>\+))")


def _lex(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            for gen in ("Sq", "P"):
                if text.startswith(gen, pos):
                    at = pos + len(gen)
                    raise ParseError(f"expected an exponent after {gen!r}", at)
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_expr(text: str, p: int) -> SteenrodElement:
    """Parse ``term (+ term)*`` with ``term := [coeff *] word``.

    Coefficients are reduced mod p; no Adem reduction is applied. ``Sq0`` and
    ``P0`` denote the unit, ``1`` is the empty word and a lone ``0`` is the
    zero element. A word with two adjacent ``b`` is zero.
    """
    check_prime(p)
    toks = _lex(text)
    i = 0
    if [t[0] for t in toks] == ["num", "end"] and toks[0][1] == "0":
        return SteenrodElement(p)

    def peek():
        return toks[i]

    terms: dict[tuple, int] = {}
    while True:
        coeff = 1
        kind, val, pos = peek()
        if kind == "num" and toks[i + 1][0] == "star":
            coeff = int(val)
            i += 2
            kind, val, pos = peek()
        letters: list[int] = []
        if kind == "num":
            if val != "1":
                raise ParseError(f"expected a generator or '1', got {val!r}", pos)
            i += 1
        else:
            while peek()[0] in ("sq", "P", "b"):
                kind, val, pos = peek()
                if kind == "sq":
                    if p != 2:
                        raise ParseError("'Sq' generators require p = 2", pos)
                    letters.append(int(val[2:]))
                elif kind == "P":
                    if p == 2:
                        raise ParseError("'P' generators require an odd prime; use 'Sq'", pos)
                    letters.append(int(val[1:]))
                else:
                    if p == 2:
                        raise ParseError("'b' requires an odd prime", pos)
                    letters.append(BETA)
                i += 1
            if not letters:
                raise ParseError("expected a term", peek()[2])
        word = tokens_to_word(p, [t for t in letters if t != 0])
        if word is not None:
            terms[word] = (terms.get(word, 0) + coeff) % p
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind != "plus":
            raise ParseError(f"expected '+' or end of input, got {val!r}", pos)
        i += 1
    return SteenrodElement(p, terms)


# -- public operations ------------------------------------------------------


def degree(m) -> int:
    if isinstance(m, SteenrodMonomial):
        return m.degree
    return m.degree


def is_admissible(m) -> bool:
    return m.is_admissible()


def adem_reduce(m, lam: int = 1, strategy: str = "left") -> SteenrodElement:
    """Normal form of a monomial or element as a sum of admissible monomials."""
    if isinstance(m, SteenrodMonomial):
        return SteenrodElement._from_words(m.p, dict(reducer(m.p, lam, strategy)(m.word)))
    p = m.p
    red = reducer(p, lam, strategy)
    acc: dict[tuple, int] = {}
    for w, c in m._terms.items():
        for v, d in red(w).items():
            acc[v] = (acc.get(v, 0) + c * d) % p
    return SteenrodElement._from_words(p, acc)


def mul(a: SteenrodElement, b: SteenrodElement, lam: int = 1) -> SteenrodElement:
    if not isinstance(a, SteenrodElement) or not isinstance(b, SteenrodElement):
        raise TypeError("mul expects SteenrodElement arguments")
    if a.p != b.p:
        raise ValueError(f"prime mismatch: {a.p} vs {b.p}")
    p = a.p
    red = reducer(p, lam)
    acc: dict[tuple, int] = {}
    for u, c in a._terms.items():
        for v, d in b._terms.items():
            w = concat_words(p, u, v)
            if w is None:
                continue
            cd = c * d
            for x, e in red(w).items():
                acc[x] = (acc.get(x, 0) + cd * e) % p
    return SteenrodElement._from_words(p, acc)


def power(a: SteenrodElement, n: int, lam: int = 1) -> SteenrodElement:
    if n < 0:
        raise ValueError("negative power")
    result = unit(a.p)
    for _ in range(n):
        result = mul(result, a, lam)
    return result


def commutator(a: SteenrodElement, b: SteenrodElement, graded: bool = False, lam: int = 1) -> SteenrodElement:
    """``ab - ba``; with ``graded=True`` the super-commutator
    ``ab - (-1)^(|a||b|) ba`` of homogeneous elements."""
    sign = 1
    if graded:
        da, db = a.degree or 0, b.degree or 0
        sign = -1 if (da * db) % 2 else 1
    return mul(a, b, lam) - mul(b, a, lam).scale(sign)


@lru_cache(maxsize=None)
def admissible_words(p: int, k: int) -> tuple[tuple, ...]:
    check_prime(p)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    out: list[tuple] = []
    if p == 2:

        def grow(rem, bound, acc):
            if rem == 0:
                out.append(tuple(acc))
                return
            for s in range(min(rem, bound), 0, -1):
                grow(rem - s, s // 2, acc + [s])

        grow(k, k, [])
    else:
        q = 2 * (p - 1)

        def grow(rem, bound, acc):
            # acc always ends with a Bockstein bit
            if rem == 0:
                out.append(tuple(acc))
                return
            for s in range(1, min(bound, rem // q) + 1):
                for e in (0, 1):
                    cost = q * s + e
                    if cost <= rem:
                        grow(rem - cost, (s - e) // p, acc + [s, e])

        for e0 in (0, 1):
            if e0 <= k:
                grow(k - e0, k, [e0])
    out.sort(key=lambda w: word_sort_key(p, w))
    return tuple(out)


def basis(p: int, k: int) -> list[SteenrodMonomial]:
    """Admissible monomials of degree k in canonical order."""
    return [SteenrodMonomial.from_word(p, w) for w in admissible_words(p, k)]


def dim(p: int, k: int) -> int:
    return len(admissible_words(p, k))


def iter_words(p: int, k: int) -> Iterator[tuple]:
    """All words (admissible or not) of degree k with no repeated Bockstein."""
    if p == 2:

        def grow(rem, acc):
            if rem == 0:
                yield tuple(acc)
                return
            for s in range(1, rem + 1):
                yield from grow(rem - s, acc + [s])

        yield from grow(k, [])
        return
    q = 2 * (p - 1)

    def grow_odd(rem, acc):
        if rem == 0:
            yield tuple(acc)
            return
        if rem >= 1 and not acc[-1]:
            yield from grow_odd(rem - 1, acc[:-1] + [1])
        for s in range(1, rem // q + 1):
            yield from grow_odd(rem - q * s, acc + [s, 0])

    yield from grow_odd(k, [0])
