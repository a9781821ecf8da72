"""Brute-force construction of A(p) in bounded degree.

A(p)_k is computed as the degree-k part of the free graded algebra on the
generators modulo the two-sided ideal of Adem relations (and b^2 = 0), by
exact Gaussian elimination over F_p. Nothing here uses admissibility or the
rewriting code in :mod:`steenalg.steenrod`; the relations are written out
afresh as elements of the free algebra.

Two routes are provided:

``naive``
    columns are all free words of degree k, rows are every product
    ``u * r * v``; feasible only for small k.
``quotient``
    uses ``I_k = sum_g g * I_(k-|g|) + sum_r r * T_(k-|r|)``, so that
    ``A_k = (sum_g g (x) A_(k-|g|)) / span{r * b}`` with ``b`` running over a
    basis of the lower quotient. The matrices stay tiny.

In free words the letter ``0`` stands for the Bockstein (odd p only) and a
positive letter ``s`` for ``P^s``.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import steenrod
from .fpnum import binom_mod_p, check_prime
from .kernels import rref_mod_p

DEFAULT_MAX_DEG = {2: 20, 3: 40, 5: 60}
NAIVE_MAX_COLUMNS = 4096


class DegreeBoundError(ValueError):
    """Requested degree exceeds the configured resource bound."""


def max_degree(p: int) -> int:
    env = os.environ.get("STEENROD_MAX_DEG")
    if env:
        return int(env)
    return DEFAULT_MAX_DEG.get(p, 60)


def _guard(p: int, k: int, bound: int | None):
    bound = max_degree(p) if bound is None else bound
    if k > bound:
        raise DegreeBoundError(f"degree {k} exceeds oracle bound {bound} for p={p}")


def letter_degree(p: int, letter: int) -> int:
    if p == 2:
        return letter
    return 1 if letter == 0 else 2 * (p - 1) * letter


@dataclass(frozen=True, order=True)
class FreeWord:
    p: int
    letters: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(letter_degree(self.p, t) for t in self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        if self.p == 2:
            return " ".join(f"Sq{t}" for t in self.letters)
        return " ".join("b" if t == 0 else f"P{t}" for t in self.letters)


def generators(p: int, d: int) -> list[int]:
    """Letters of degree exactly d."""
    if d <= 0:
        return []
    if p == 2:
        return [d]
    q = 2 * (p - 1)
    out = []
    if d == 1:
        out.append(0)
    if d % q == 0:
        out.append(d // q)
    return out


@lru_cache(maxsize=None)
def _free_letter_words(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k == 0:
        return ((),)
    out = []
    for d in range(1, k + 1):
        for g in generators(p, d):
            for rest in _free_letter_words(p, k - d):
                out.append((g,) + rest)
    return tuple(sorted(out))


def free_words(p: int, k: int) -> list[FreeWord]:
    check_prime(p)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return [FreeWord(p, w) for w in _free_letter_words(p, k)]


def _add(acc: dict, word: tuple, c: int, p: int):
    acc[word] = (acc.get(word, 0) + c) % p


@lru_cache(maxsize=None)
def relations(p: int, d: int, lam: int = 1) -> tuple[tuple[str, tuple[tuple[tuple[int, ...], int], ...]], ...]:
    """Ideal generators of degree exactly d as ``(label, ((word, coeff), ...))``.

    Each generator is ``lhs - rhs`` of an Adem relation, spelled out with
    ``P^0 = lam``, or ``b b`` for odd p.
    """
    out = []
    if p == 2:
        for b in range(1, d):
            a = d - b
            if not a < 2 * b:
                continue
            acc: dict = {}
            _add(acc, (a, b), 1, 2)
            for i in range(a // 2 + 1):
                c = binom_mod_p(b - i - 1, a - 2 * i, 2) * (lam if i == 0 else 1)
                rhs = (a + b - i, i) if i else (a + b,)
                _add(acc, rhs, -c, 2)
            out.append((f"Sq{a} Sq{b}", acc))
    else:
        q = 2 * (p - 1)
        if d == 2:
            out.append(("b b", {(0, 0): 1}))
        if d % q == 0:
            n = d // q
            for b in range(1, n):
                a = n - b
                if not a < p * b:
                    continue
                acc = {}
                _add(acc, (a, b), 1, p)
                for i in range(a // p + 1):
                    c = (-1) ** (a + i) * binom_mod_p((p - 1) * (b - i) - 1, a - p * i, p)
                    c *= lam if i == 0 else 1
                    _add(acc, (a + b - i, i) if i else (a + b,), -c, p)
                out.append((f"P{a} P{b}", acc))
        if d % q == 1 and d > 1:
            n = d // q
            for b in range(1, n):
                a = n - b
                if not a <= p * b:
                    continue
                acc = {}
                _add(acc, (a, 0, b), 1, p)
                for i in range(a // p + 1):
                    c = (-1) ** (a + i) * binom_mod_p((p - 1) * (b - i), a - p * i, p)
                    c *= lam if i == 0 else 1
                    _add(acc, (0, a + b - i, i) if i else (0, a + b), -c, p)
                for i in range((a - 1) // p + 1):
                    c = (-1) ** (a + i) * binom_mod_p((p - 1) * (b - i) - 1, a - p * i - 1, p)
                    c *= lam if i == 0 else 1
                    # the relation subtracts this sum
                    _add(acc, (a + b - i, 0, i) if i else (a + b, 0), c, p)
                out.append((f"P{a} b P{b}", acc))
    return tuple((label, tuple(sorted((w, c) for w, c in acc.items() if c))) for label, acc in out)


def relation_degrees(p: int, k: int, lam: int = 1):
    for d in range(1, k + 1):
        for label, terms in relations(p, d, lam):
            yield d, label, terms


@dataclass
class RelationMatrix:
    p: int
    degree: int
    columns: list[FreeWord]
    rows: np.ndarray

    @property
    def shape(self):
        return self.rows.shape


def _relation_row_vectors(p: int, k: int, order_seed: int | None = None):
    cols = _free_letter_words(p, k)
    index = {w: i for i, w in enumerate(cols)}
    products = []
    for d, _, terms in relation_degrees(p, k):
        for j in range(k - d + 1):
            for u in _free_letter_words(p, j):
                for v in _free_letter_words(p, k - d - j):
                    products.append((u, terms, v))
    if order_seed is not None:
        random.Random(order_seed).shuffle(products)
    for u, terms, v in products:
        row = np.zeros(len(cols), dtype=np.int64)
        for w, c in terms:
            row[index[u + w + v]] = (row[index[u + w + v]] + c) % p
        yield row


def relation_rows(p: int, k: int) -> RelationMatrix:
    """Every ``u * r * v`` of degree k, as rows over the free words of degree k."""
    check_prime(p)
    cols = free_words(p, k)
    if len(cols) > NAIVE_MAX_COLUMNS:
        raise DegreeBoundError(f"{len(cols)} free words in degree {k}; use the quotient route")
    rows = list(_relation_row_vectors(p, k))
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), len(cols))
    return RelationMatrix(p, k, cols, mat)


def rank_mod_p(rows, ncols: int, p: int, chunk: int = 512) -> int:
    """Rank of a row stream, eliminating in chunks to bound memory."""
    basis = np.zeros((0, ncols), dtype=np.int64)
    buf = []

    def flush(basis):
        stacked = np.vstack([basis] + [np.asarray(buf, dtype=np.int64).reshape(-1, ncols)])
        reduced, _ = rref_mod_p(stacked, p)
        return reduced

    for r in rows:
        buf.append(r)
        if len(buf) >= chunk:
            basis = flush(basis)
            buf.clear()
    if buf:
        basis = flush(basis)
    return basis.shape[0]


def naive_dim(p: int, k: int, order_seed: int | None = None) -> int:
    ncols = len(_free_letter_words(p, k))
    if ncols > NAIVE_MAX_COLUMNS:
        raise DegreeBoundError(f"{ncols} free words in degree {k}; use the quotient route")
    if k == 0:
        return 1
    return ncols - rank_mod_p(_relation_row_vectors(p, k, order_seed), ncols, p)


class QuotientTower:
    """Degree-by-degree quotient of the free algebra by the Adem ideal.

    ``dims[k]`` is dim A(p)_k; ``reps[k]`` holds a free-word representative
    for each basis vector; :meth:`classify` maps any free word to its
    coordinates in that basis.
    """

    def __init__(self, p: int, row_seed: int | None = None, lam: int = 1):
        self.p = check_prime(p)
        self.row_seed = row_seed
        self.lam = lam % p
        self.dims = [1]
        self.reps: list[list[tuple]] = [[()]]
        self._cols: list[dict] = [{}]
        self._rref: list = [None]
        self._free: list[list[int]] = [[]]
        self._memo: dict[tuple, np.ndarray] = {(): np.ones(1, dtype=np.int64)}

    def ensure(self, k: int):
        while len(self.dims) <= k:
            self._build(len(self.dims))

    def _expand(self, k: int, word: tuple) -> np.ndarray:
        vec = np.zeros(len(self._cols[k]), dtype=np.int64)
        g = word[0]
        sub = self.classify(word[1:])
        cols = self._cols[k]
        for j, c in enumerate(sub):
            if c:
                vec[cols[(g, j)]] = c
        return vec

    def _build(self, k: int):
        p = self.p
        cols = {}
        for d in range(1, k + 1):
            for g in generators(p, d):
                for j in range(self.dims[k - d]):
                    cols[(g, j)] = len(cols)
        self._cols.append(cols)
        rows = []
        for d, _, terms in relation_degrees(p, k, self.lam):
            for b in self.reps[k - d]:
                row = np.zeros(len(cols), dtype=np.int64)
                for w, c in terms:
                    row = (row + c * self._expand(k, w + b)) % p
                rows.append(row)
        if self.row_seed is not None:
            random.Random(self.row_seed + k).shuffle(rows)
        if rows and cols:
            reduced, pivots = rref_mod_p(np.array(rows, dtype=np.int64), p)
        else:
            reduced, pivots = np.zeros((0, len(cols)), dtype=np.int64), []
        self._rref.append((reduced, pivots))
        pivset = set(pivots)
        free = [c for c in range(len(cols)) if c not in pivset]
        self._free.append(free)
        by_index = {i: key for key, i in cols.items()}
        reps = []
        for c in free:
            g, j = by_index[c]
            reps.append((g,) + self.reps[k - letter_degree(p, g)][j])
        self.reps.append(reps)
        self.dims.append(len(free))

    def classify(self, word: tuple) -> np.ndarray:
        """Coordinates of the class of a free word in the quotient basis."""
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        k = sum(letter_degree(self.p, t) for t in word)
        self.ensure(k)
        vec = self._expand(k, word)
        reduced, pivots = self._rref[k]
        for row, c in zip(reduced, pivots):
            f = vec[c]
            if f:
                vec = (vec - f * row) % self.p
        out = vec[self._free[k]].copy()
        self._memo[word] = out
        return out


_towers: dict[int, QuotientTower] = {}


def tower(p: int) -> QuotientTower:
    t = _towers.get(p)
    if t is None:
        t = _towers[p] = QuotientTower(p)
    return t


def clear_caches():
    _towers.clear()
    _free_letter_words.cache_clear()
    relations.cache_clear()


def dim_oracle(p: int, k: int, method: str = "quotient", bound: int | None = None) -> int:
    """dim A(p)_k as free-words count minus rank of the relation span."""
    check_prime(p)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    _guard(p, k, bound)
    if method == "naive":
        return naive_dim(p, k)
    if method != "quotient":
        raise ValueError(f"unknown method {method!r}")
    t = tower(p)
    t.ensure(k)
    return t.dims[k]


def steenrod_word_letters(p: int, word: tuple) -> tuple[int, ...]:
    """Letters of a :mod:`steenrod` word in this module's encoding."""
    return tuple(0 if t == steenrod.BETA else t for t in steenrod.word_tokens(p, word))


@dataclass
class VerifyReport:
    p: int
    k_max: int
    dims: list[int] = field(default_factory=list)
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"p": self.p, "k_max": self.k_max, "dims": self.dims, "mismatches": self.mismatches}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def verify_basis(p: int, k_max: int, bound: int | None = None) -> VerifyReport:
    """Compare admissible counts with the quotient and check that admissible
    monomials are independent there."""
    report = VerifyReport(p, k_max)
    t = tower(p)
    _guard(p, k_max, bound)
    for k in range(k_max + 1):
        t.ensure(k)
        core = steenrod.dim(p, k)
        oracle = t.dims[k]
        report.dims.append(oracle)
        if core != oracle:
            report.mismatches.append({"degree": k, "kind": "dimension", "core": core, "oracle": oracle})
            continue
        if oracle == 0:
            continue
        vecs = np.array([t.classify(steenrod_word_letters(p, w)) for w in steenrod.admissible_words(p, k)])
        rank = rref_mod_p(vecs, p)[0].shape[0]
        if rank != core:
            report.mismatches.append({"degree": k, "kind": "independence", "rank": rank, "count": core})
    return report
