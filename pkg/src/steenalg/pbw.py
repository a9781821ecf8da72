"""PBW dimension counting and the non-realisation certificates.

Suppose ``A(p) = U(g)`` for a graded Lie superalgebra ``g`` whose degree-k
part has the parity of k. By PBW, ``dim A(p)_k = dim g_k + d_k`` where ``d_k``
counts monomials of weight k in a basis of ``g_1 + ... + g_(k-1)``. Odd basis
elements occur at most once; even ones any number of times (``nonrestricted``)
or fewer than p times (``restricted``). This determines ``dim g_k``
recursively, and :func:`run_obstruction` then derives contradictions from
identities computed live in :mod:`steenalg.steenrod`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

from . import steenrod
from .fpnum import check_prime
from .oracle import QuotientTower, steenrod_word_letters
from .steenrod import P, SteenrodElement, Sq, beta, commutator, mul, power

MODES = ("nonrestricted", "restricted")
NO_REALISATION = "NO_REALISATION"
INCONCLUSIVE = "INCONCLUSIVE"


class ProfileGapError(ValueError):
    pass


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass
class DimProfile:
    """Dimensions ``dim g_k`` for ``k = 1 .. len(dims)``; ``dim g_0 = 0``."""

    p: int
    mode: str
    dims: tuple[int, ...] = ()
    negative_at: int | None = None

    def __post_init__(self):
        check_prime(self.p)
        _check_mode(self.mode)
        self.dims = tuple(int(d) for d in self.dims)
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")

    @property
    def k_max(self) -> int:
        return len(self.dims)

    def dim(self, k: int) -> int:
        if k <= 0:
            return 0
        if k > len(self.dims):
            raise ProfileGapError(f"profile undefined at degree {k}")
        return self.dims[k - 1]

    @staticmethod
    def parity(k: int) -> int:
        return k % 2

    def support(self) -> list[int]:
        return [k for k, d in enumerate(self.dims, start=1) if d]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "mode": self.mode,
            "dims": list(self.dims),
            "negative_at": self.negative_at,
        }


def _max_multiplicity(p: int, mode: str, j: int) -> int | None:
    """Largest exponent of a basis element of degree j; None = unbounded."""
    if j % 2:
        return 1
    return p - 1 if mode == "restricted" else None


def _factor_series(p: int, mode: str, j: int, dim: int, k: int) -> list[int]:
    """Coefficients up to t^k of the contribution of dim basis elements of degree j."""
    out = [0] * (k + 1)
    cap = _max_multiplicity(p, mode, j)
    for n in range(k // j + 1):
        if cap == 1:
            c = comb(dim, n)
        elif cap is None:
            c = comb(n + dim - 1, n) if dim else int(n == 0)
        else:
            # compositions of n into dim parts, each at most cap
            c = sum((-1) ** i * comb(dim, i) * comb(n - (cap + 1) * i + dim - 1, dim - 1) for i in range(dim + 1) if n - (cap + 1) * i >= 0) if dim else int(n == 0)
        out[n * j] = c
    return out


def _profile_dims(profile, k: int, p: int | None, mode: str | None):
    if isinstance(profile, DimProfile):
        p, mode = profile.p, profile.mode
        get = profile.dim
    else:
        if p is None or mode is None:
            raise ValueError("p and mode are required with a plain mapping profile")
        mapping = dict(profile)

        def get(j):
            if j not in mapping:
                raise ProfileGapError(f"profile undefined at degree {j}")
            return mapping[j]

    _check_mode(mode)
    return p, mode, [get(j) for j in range(1, k)]


def monomial_count(profile, k: int, p: int | None = None, mode: str | None = None) -> int:
    """d_k: the number of PBW monomials of weight k in a basis of g_1..g_(k-1).

    ``profile`` is a :class:`DimProfile` or a ``{degree: dim}`` mapping (then
    ``p`` and ``mode`` must be given). Computed as the t^k coefficient of the
    product of closed-form factor series.
    """
    if k <= 0:
        return 0
    p, mode, dims = _profile_dims(profile, k, p, mode)
    series = [1] + [0] * k
    for j, d in enumerate(dims, start=1):
        if not d:
            continue
        f = _factor_series(p, mode, j, d, k)
        new = [0] * (k + 1)
        for a, ca in enumerate(series):
            if ca:
                for b in range(0, k + 1 - a, j):
                    if f[b]:
                        new[a + b] += ca * f[b]
        series = new
    return series[k]


def monomial_count_dp(profile, k: int, p: int | None = None, mode: str | None = None) -> int:
    """Same count by a knapsack over individual basis elements."""
    if k <= 0:
        return 0
    p, mode, dims = _profile_dims(profile, k, p, mode)
    ways = [1] + [0] * k
    for j, d in enumerate(dims, start=1):
        cap = _max_multiplicity(p, mode, j)
        for _ in range(d):
            new = [0] * (k + 1)
            for w in range(k + 1):
                if not ways[w]:
                    continue
                e = 0
                while w + e * j <= k and (cap is None or e <= cap):
                    new[w + e * j] += ways[w]
                    e += 1
            ways = new
    return ways[k]


def pbw_monomials(profile: DimProfile, k: int) -> list[tuple[tuple[int, int, int], ...]]:
    """Explicit weight-k monomials as tuples of ``(degree, index, exponent)``."""
    if k <= 0:
        return []
    letters = []
    for j in range(1, k):
        for i in range(profile.dim(j)):
            letters.append((j, i, _max_multiplicity(profile.p, profile.mode, j)))
    out = []

    def grow(pos, rem, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        if pos == len(letters):
            return
        j, i, cap = letters[pos]
        e = 0
        while e * j <= rem and (cap is None or e <= cap):
            grow(pos + 1, rem - e * j, acc + [(j, i, e)] if e else acc)
            e += 1

    grow(0, k, [])
    return out


def render_pbw_monomial(monomial, profile: DimProfile) -> str:
    parts = []
    for j, i, e in sorted(monomial, key=lambda t: (-t[0], t[1])):
        name = f"L{j}" if profile.dim(j) == 1 else f"L{j}_{i + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts)


def _as_dim_lookup(steenrod_dims, p: int):
    if steenrod_dims is None:
        return lambda k: steenrod.dim(p, k)
    if isinstance(steenrod_dims, Mapping):
        return lambda k: steenrod_dims[k]
    seq = list(steenrod_dims)
    return lambda k: seq[k - 1]


def infer_profile(steenrod_dims: Sequence[int] | Mapping[int, int] | None, p: int, mode: str, k_max: int) -> DimProfile:
    """Solve ``dim A_k = dim g_k + d_k`` for ``k = 1 .. k_max``.

    ``steenrod_dims`` lists ``dim A(p)_k`` starting at k = 1 (or maps degree
    to dimension; None computes them from the admissible basis). A negative
    difference ends the induction and is recorded in ``negative_at``.
    """
    check_prime(p)
    _check_mode(mode)
    lookup = _as_dim_lookup(steenrod_dims, p)
    dims: list[int] = []
    for k in range(1, k_max + 1):
        partial = DimProfile(p, mode, tuple(dims))
        g = lookup(k) - monomial_count(partial, k)
        if g < 0:
            return DimProfile(p, mode, tuple(dims), negative_at=k)
        dims.append(g)
    return DimProfile(p, mode, tuple(dims))


def minimal_weights(p: int, mode: str, k_max: int) -> list[int]:
    return infer_profile(None, p, mode, k_max).support()


def predicted_minimal_weights(p: int, mode: str) -> list[int]:
    """The closed-form list of first weights carried by g at odd p."""
    if mode == "nonrestricted":
        return [1, 2 * (p - 1), 2 * p - 1, 2 * p**2 - 2, 2 * p**2 - 1, 2 * p**3 - 2]
    return sorted([1, 2 * (p - 1), 2 * p - 1, 2 * (p - 1) * p, 2 * p**2 - 2, 2 * p**2 - 1, 2 * (p - 1) * p**2])


# -- certificates -----------------------------------------------------------


@dataclass
class Certificate:
    """One checked claim; ``holds`` records whether the computation agrees
    with the claim and ``contradiction`` whether it refutes the assumed
    isomorphism in its branch."""

    name: str
    branch: str
    claim: str
    witnesses: dict = field(default_factory=dict)
    holds: bool = False
    contradiction: bool = False
    note: str = ""

    @property
    def verdict(self) -> str:
        if not self.holds:
            return "refuted"
        return "contradiction" if self.contradiction else "consistent"

    def to_json(self) -> dict:
        wit = {}
        for key, val in self.witnesses.items():
            wit[key] = val.to_json() if isinstance(val, SteenrodElement) else val
        return {
            "name": self.name,
            "branch": self.branch,
            "claim": self.claim,
            "witnesses": wit,
            "holds": self.holds,
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass
class ObstructionReport:
    p: int
    mode: str
    profile: DimProfile
    certificates: list[Certificate]
    verdict: str
    branches: dict[str, bool]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "mode": self.mode,
            "profile": self.profile.to_json(),
            "minimal_weights": self.profile.support(),
            "branches": self.branches,
            "certificates": [c.to_json() for c in self.certificates],
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def certificate(self, name: str) -> Certificate:
        for c in self.certificates:
            if c.name == name:
                return c
        raise KeyError(name)


def default_k_max(p: int) -> int:
    if p == 2:
        return 16
    if p == 3:
        return 52
    return 2 * (p - 1) * (p + 2)


def _oracle_vanishes(p: int, lam: int, word: tuple) -> bool:
    """Whether a word is zero in the quotient of the free algebra by the
    relations with ``P^0 = lam``; independent of the rewriting code."""
    tower = QuotientTower(p, lam=lam)
    return not tower.classify(steenrod_word_letters(p, word)).any()


def _gen(p: int, s: int) -> SteenrodElement:
    return Sq(s) if p == 2 else P(s, p=p)


def _forced_bracket_search(p: int, profile: DimProfile) -> Certificate:
    """Degrees where g_k must equal A(p)_k; their brackets (and squares of odd
    elements, p-th powers of even ones when restricted) must vanish wherever g
    has nothing. Any nonzero such element contradicts the isomorphism."""
    k_max = profile.k_max
    forced = [k for k in range(1, k_max + 1) if profile.dim(k) and profile.dim(k) == steenrod.dim(p, k)]
    cert = Certificate(
        "forced_brackets",
        "lambda!=0",
        "brackets of elements forced into g vanish in weights where g is zero",
        witnesses={"forced_degrees": forced},
    )
    found = []
    for a, b in itertools.combinations_with_replacement(forced, 2):
        if a + b > k_max or profile.dim(a + b):
            continue
        for u in steenrod.admissible_words(p, a):
            for v in steenrod.admissible_words(p, b):
                x = SteenrodElement.from_word(p, u)
                y = SteenrodElement.from_word(p, v)
                br = commutator(x, y, graded=True)
                if br:
                    found.append((a + b, x, y, br))
    for a in forced:
        for u in steenrod.admissible_words(p, a):
            x = SteenrodElement.from_word(p, u)
            if a % 2 and 2 * a <= k_max and not profile.dim(2 * a):
                sq = mul(x, x)
                if sq:
                    found.append((2 * a, x, x, sq))
            if profile.mode == "restricted" and a % 2 == 0 and p * a <= k_max and not profile.dim(p * a):
                pw = power(x, p)
                if pw:
                    found.append((p * a, x, None, pw))
    cert.holds = True
    if found:
        weight, x, y, val = found[0]
        cert.contradiction = True
        cert.witnesses.update({"weight": weight, "x": x, "value": val, "count": len(found)})
        if y is not None:
            cert.witnesses["y"] = y
        cert.note = f"nonzero element of weight {weight} forced into g, but dim g_{weight} = 0"
    else:
        cert.note = "no forced bracket escapes the profile"
    return cert


def _run_p2(mode: str, profile: DimProfile) -> list[Certificate]:
    certs = []
    forced = Certificate(
        "forced_generators",
        "all",
        "dim A_1 = dim g_1 = 1 and dim A_2 = dim g_2 = 1, so L1 = Sq1 and L2 = Sq2 lie in g",
        witnesses={"dim_A": [steenrod.dim(2, 1), steenrod.dim(2, 2)], "dim_g": [profile.dim(1), profile.dim(2)]},
    )
    forced.holds = forced.witnesses["dim_A"] == [1, 1] and forced.witnesses["dim_g"] == [1, 1]
    certs.append(forced)

    lam0 = mul(Sq(1), Sq(2), lam=0)
    c = Certificate(
        "lambda0_L1L2",
        "lambda=0",
        "with Sq0 = 0, Sq1 Sq2 = 0, yet L1 L2 is nonzero in U(g)",
        witnesses={"Sq1*Sq2": lam0, "oracle_zero": _oracle_vanishes(2, 0, (1, 2))},
    )
    c.holds = lam0.is_zero() and c.witnesses["oracle_zero"]
    c.contradiction = c.holds and forced.holds
    c.note = "L1, L2 are independent elements of g of weights 1 and 2; their PBW product cannot vanish"
    certs.append(c)

    sq22 = mul(Sq(2), Sq(2))
    sq221 = mul(sq22, Sq(1))
    c = Certificate(
        "L2_squared",
        "lambda!=0",
        "(L2)^2 = Sq3 Sq1 != 0 and (L2)^2 L1 = 0",
        witnesses={"Sq2*Sq2": sq22, "Sq2*Sq2*Sq1": sq221},
    )
    c.holds = sq22 == Sq(3, 1) and sq221.is_zero()
    if c.holds and forced.holds:
        if mode == "nonrestricted":
            c.contradiction = True
            c.note = "(L2)^2 L1 is a PBW monomial of the common enveloping algebra, hence nonzero"
        elif profile.dim(4) == 0:
            c.contradiction = True
            c.note = "restricted: (L2)^2 = L2^[2] lies in g_4 = 0, but Sq3 Sq1 != 0"
        else:
            c.contradiction = True
            c.note = (
                "restricted: (L2)^2 = L2^[2] = Sq3 Sq1 is a nonzero element of g of weight 4; "
                "it and L1 = Sq1 have different weights, so their PBW product cannot vanish"
            )
    certs.append(c)
    return certs


def _run_odd(p: int, mode: str, profile: DimProfile) -> list[Certificate]:
    q = 2 * (p - 1)
    certs = []
    p1 = P(1, p=p)
    forced = Certificate(
        "forced_generators",
        "all",
        f"dim A_1 = dim g_1 = 1 and dim A_{q} = dim g_{q} = 1, so b and L{q} = P1 lie in g",
        witnesses={"dim_A": [steenrod.dim(p, 1), steenrod.dim(p, q)], "dim_g": [profile.dim(1), profile.dim(q)]},
    )
    forced.holds = forced.witnesses["dim_A"] == [1, 1] and forced.witnesses["dim_g"] == [1, 1]
    certs.append(forced)

    sq0 = mul(p1, p1, lam=0)
    c = Certificate(
        "lambda0_P1_squared",
        "lambda=0",
        "with P0 = 0, (P1)^2 = 0, yet L^2 is a PBW monomial (2 < p)",
        witnesses={"P1*P1": sq0, "oracle_zero": _oracle_vanishes(p, 0, (0, 1, 0, 1, 0))},
    )
    c.holds = sq0.is_zero() and c.witnesses["oracle_zero"]
    c.contradiction = c.holds and forced.holds
    certs.append(c)

    pw = power(p1, p)
    c = Certificate("P1_pth_power", "lambda!=0", f"(P1)^{p} = 0", witnesses={f"P1^{p}": pw})
    c.holds = pw.is_zero()
    if c.holds and forced.holds:
        c.contradiction = mode == "nonrestricted"
        c.note = (
            "L^p is a PBW monomial of the common enveloping algebra, hence nonzero"
            if mode == "nonrestricted"
            else "restricted: allowed, the p-map may vanish on L"
        )
    certs.append(c)

    pp = P(p, p=p)
    inner = commutator(p1, pp)
    nested = commutator(p1, inner)
    claimed = mul(P(p + 1, p=p), p1).scale(2)
    weight = q * (p + 2)
    c = Certificate(
        "nested_bracket",
        "lambda!=0",
        f"[P1, [P1, P{p}]] = 2 P{p + 1} P1 != 0 in weight {weight}",
        witnesses={"[P1,P^p]": inner, "[P1,[P1,P^p]]": nested, "claimed": claimed},
    )
    c.holds = nested == claimed and not claimed.is_zero()
    if c.holds:
        c.contradiction = weight <= profile.k_max and profile.dim(weight) == 0
    else:
        c.note = f"computed value is {nested}, not {claimed}"
    certs.append(c)

    wts = profile.support()
    expected = [w for w in predicted_minimal_weights(p, mode) if w <= profile.k_max]
    c = Certificate(
        "minimal_weights",
        "all",
        f"the first {len(expected)} weights carried by g are {expected}; weight {weight} is absent",
        witnesses={"computed": wts, "expected": expected, "clash_weight": weight},
    )
    c.holds = wts[: len(expected)] == expected and weight <= profile.k_max and weight not in wts
    certs.append(c)

    certs.append(_forced_bracket_search(p, profile))
    return certs


def run_obstruction(p: int, mode: str, k_max: int | None = None) -> ObstructionReport:
    """Recompute every step of the non-realisation argument for (p, mode).

    The verdict is ``NO_REALISATION`` when each branch (``P^0 = 0`` and
    ``P^0 != 0``) carries at least one verified contradiction.
    """
    check_prime(p)
    _check_mode(mode)
    k_max = default_k_max(p) if k_max is None else k_max
    profile = infer_profile(None, p, mode, k_max)
    certs: list[Certificate] = []
    if profile.negative_at is not None:
        neg = Certificate(
            "negative_dimension",
            "all",
            f"dim A_k - d_k < 0 at k = {profile.negative_at}",
            witnesses={"degree": profile.negative_at},
            holds=True,
            contradiction=True,
        )
        certs.append(neg)
        branches = {"lambda=0": True, "lambda!=0": True}
        return ObstructionReport(p, mode, profile, certs, NO_REALISATION, branches)

    certs = _run_p2(mode, profile) if p == 2 else _run_odd(p, mode, profile)
    branches = {}
    for branch in ("lambda=0", "lambda!=0"):
        branches[branch] = any(c.contradiction and c.holds and c.branch in (branch, "all") for c in certs)
    verdict = NO_REALISATION if all(branches.values()) else INCONCLUSIVE
    return ObstructionReport(p, mode, profile, certs, verdict, branches)
