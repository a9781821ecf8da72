"""Lie superalgebras in characteristic 2 given by structure constants.

The bracket is stored for pairs that are not both odd, plus a symmetric
polar form ``B(e_i, e_j)`` on distinct odd basis vectors; the squaring of
odd vectors is the quadratic map

    (sum a_i e_i)^2 = sum a_i^2 e_i^2 + sum_{i<j} a_i a_j B(e_i, e_j),

so ``[x, y] = (x + y)^2 - x^2 - y^2`` is computed literally from it. The
ground field is F_2 or F_4 = F_2[w]/(w^2 + w + 1); elements of F_4 are the
integers 0..3 read as bit vectors ``a + b w``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .fpnum import FpField


class MalformedData(ValueError):
    pass


@dataclass(frozen=True)
class Char2Field:
    name: str

    def __post_init__(self):
        if self.name not in ("F2", "F4"):
            raise ValueError(f"field must be F2 or F4, got {self.name!r}")

    @property
    def size(self) -> int:
        return 2 if self.name == "F2" else 4

    def elements(self) -> range:
        return range(self.size)

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        # carry-less product reduced by w^2 = w + 1
        r = 0
        for i in range(2):
            if b >> i & 1:
                r ^= a << i
        if r & 4:
            r ^= 0b111
        return r

    def parse(self, v) -> int:
        if isinstance(v, int):
            if v not in self.elements():
                raise ValueError(f"{v} is not an element of {self.name}")
            return v
        key = str(v).replace(" ", "")
        table = {"0": 0, "1": 1, "w": 2, "w+1": 3, "1+w": 3, "w2": 3, "w^2": 3}
        if key not in table or table[key] >= self.size:
            raise ValueError(f"{v!r} is not an element of {self.name}")
        return table[key]

    @staticmethod
    def render(a: int) -> str:
        return ["0", "1", "w", "w+1"][a]


Vector = tuple


@dataclass
class LieSuperData:
    field: Char2Field
    names: list[str]
    parities: list[int]
    degrees: list[int]
    bracket: dict = field(default_factory=dict)
    squaring: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.names)

    def even(self) -> list[int]:
        return [i for i in range(self.n) if not self.parities[i]]

    def odd(self) -> list[int]:
        return [i for i in range(self.n) if self.parities[i]]

    def zero(self) -> Vector:
        return (0,) * self.n

    def basis_vector(self, i: int) -> Vector:
        v = [0] * self.n
        v[i] = 1
        return tuple(v)

    def add(self, x: Vector, y: Vector) -> Vector:
        return tuple(a ^ b for a, b in zip(x, y))

    def scale(self, a: int, x: Vector) -> Vector:
        return tuple(self.field.mul(a, c) for c in x)

    def structure(self, i: int, j: int) -> Vector:
        """``[e_i, e_j]``; symmetric in characteristic 2."""
        if i == j:
            return self.zero()
        return self.bracket.get((min(i, j), max(i, j)), self.zero())

    def bracket_vectors(self, x: Vector, y: Vector) -> Vector:
        """Bilinear extension of the stored table."""
        out = self.zero()
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b:
                    out = self.add(out, self.scale(self.field.mul(a, b), self.structure(i, j)))
        return out

    def is_odd_vector(self, x: Vector) -> bool:
        return all(not c or self.parities[i] for i, c in enumerate(x))

    def square(self, x: Vector) -> Vector:
        if not self.is_odd_vector(x):
            raise ValueError("squaring is defined on odd vectors only")
        out = self.zero()
        odd = [i for i in range(self.n) if x[i]]
        for i in odd:
            a2 = self.field.mul(x[i], x[i])
            out = self.add(out, self.scale(a2, self.squaring.get(i, self.zero())))
        for i, j in itertools.combinations(odd, 2):
            out = self.add(out, self.scale(self.field.mul(x[i], x[j]), self.structure(i, j)))
        return out

    def render(self, x: Vector) -> str:
        parts = []
        for i, c in enumerate(x):
            if c:
                parts.append(self.names[i] if c == 1 else f"{self.field.render(c)}*{self.names[i]}")
        return "+".join(parts) or "0"

    def odd_vectors(self):
        odd = self.odd()
        for coeffs in itertools.product(self.field.elements(), repeat=len(odd)):
            v = [0] * self.n
            for i, c in zip(odd, coeffs):
                v[i] = c
            yield tuple(v)

    # -- JSON

    @classmethod
    def from_json(cls, data) -> "LieSuperData":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        fld = Char2Field(data["field"])
        basis = data["basis"]
        names = [b["name"] for b in basis]
        if len(set(names)) != len(names):
            raise MalformedData("duplicate basis names")
        index = {nm: i for i, nm in enumerate(names)}

        def idx(v):
            if isinstance(v, int):
                if not 0 <= v < len(names):
                    raise MalformedData(f"basis index {v} out of range")
                return v
            if v not in index:
                raise MalformedData(f"unknown basis element {v!r}")
            return index[v]

        def vec(coeffs):
            if len(coeffs) != len(names):
                raise MalformedData(f"coefficient vector of length {len(coeffs)}, expected {len(names)}")
            return tuple(fld.parse(c) for c in coeffs)

        out = cls(fld, names, [int(b["parity"]) % 2 for b in basis], [int(b.get("degree", 0)) for b in basis])
        for entry in data.get("bracket", []):
            i, j = idx(entry["i"]), idx(entry["j"])
            v = vec(entry["coeffs"])
            key = (min(i, j), max(i, j))
            if key in out.bracket and out.bracket[key] != v:
                raise MalformedData(f"conflicting entries for [{names[i]}, {names[j]}]")
            if i == j and any(v):
                raise MalformedData(f"[{names[i]}, {names[i]}] must be 0")
            out.bracket[key] = v
        for entry in data.get("squaring", []):
            i = idx(entry["i"])
            out.squaring[i] = vec(entry["coeffs"])
        return out

    def to_json(self) -> dict:
        r = self.field.render
        return {
            "field": self.field.name,
            "basis": [{"name": nm, "parity": par, "degree": deg} for nm, par, deg in zip(self.names, self.parities, self.degrees)],
            "bracket": [
                {"i": self.names[i], "j": self.names[j], "coeffs": [r(c) if self.field.name == "F4" else c for c in v]}
                for (i, j), v in sorted(self.bracket.items())
                if any(v)
            ],
            "squaring": [
                {"i": self.names[i], "coeffs": [r(c) if self.field.name == "F4" else c for c in v]}
                for i, v in sorted(self.squaring.items())
            ],
        }


def gl_superalgebra(m: int, n: int, field_name: str = "F2") -> LieSuperData:
    """gl(m|n) from matrix units, with squaring ``x^2 = x x`` of odd matrices.

    Grading: ``deg E_ij = [j >= m] - [i >= m]``.
    """
    fld = Char2Field(field_name)
    size = m + n
    units = [(i, j) for i in range(size) for j in range(size)]
    names = [f"E{i + 1}{j + 1}" for i, j in units]
    degrees = [int(j >= m) - int(i >= m) for i, j in units]
    parities = [d % 2 for d in degrees]
    index = {u: k for k, u in enumerate(units)}

    def matmul(a, b):
        out = {}
        for (i, k), x in a.items():
            for (k2, j), y in b.items():
                if k == k2:
                    out[(i, j)] = fld.add(out.get((i, j), 0), fld.mul(x, y))
        return {key: v for key, v in out.items() if v}

    def to_vec(mat):
        v = [0] * len(units)
        for key, c in mat.items():
            v[index[key]] = c
        return tuple(v)

    def unit(k):
        return {units[k]: 1}

    data = LieSuperData(fld, names, parities, degrees)
    for a, b in itertools.combinations(range(len(units)), 2):
        ea, eb = unit(a), unit(b)
        ab, ba = matmul(ea, eb), matmul(eb, ea)
        # super-commutator; every sign is +1 in characteristic 2
        comm = dict(ab)
        for key, c in ba.items():
            comm[key] = fld.add(comm.get(key, 0), c)
        v = to_vec({k: c for k, c in comm.items() if c})
        if any(v):
            data.bracket[(a, b)] = v
    for k in data.odd():
        data.squaring[k] = to_vec(matmul(unit(k), unit(k)))
    return data


# -- checks -----------------------------------------------------------------


def bracket_odd(x: Vector, y: Vector, data: LieSuperData) -> Vector:
    """``(x + y)^2 - x^2 - y^2`` for odd vectors x, y."""
    if not (data.is_odd_vector(x) and data.is_odd_vector(y)):
        raise ValueError("bracket_odd expects two odd vectors")
    s = data.square(data.add(x, y))
    return data.add(data.add(s, data.square(x)), data.square(y))


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    checked: int = 0
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "passed": self.passed, "checked": self.checked, "witness": self.witness}


@dataclass
class AxiomReport:
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def get(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def to_json(self) -> dict:
        return {"pass": self.ok, "results": [r.to_json() for r in self.results]}


def _support(v: Vector) -> list[int]:
    return [i for i, c in enumerate(v) if c]


def validate_structure(data: LieSuperData) -> list[AxiomResult]:
    """Parity and grading of the stored constants."""
    grading = AxiomResult("grading", True)
    parity = AxiomResult("parity", True)

    def flag(res, witness):
        res.checked += 1
        if res.passed:
            res.passed = False
            res.witness = witness

    for (i, j), v in sorted(data.bracket.items()):
        for k in _support(v):
            parity.checked += 1
            grading.checked += 1
            if data.parities[k] != (data.parities[i] + data.parities[j]) % 2:
                flag(parity, {"bracket": [data.names[i], data.names[j]], "component": data.names[k]})
            if data.degrees[k] != data.degrees[i] + data.degrees[j]:
                flag(grading, {"bracket": [data.names[i], data.names[j]], "component": data.names[k], "expected_degree": data.degrees[i] + data.degrees[j], "degree": data.degrees[k]})
    for i, v in sorted(data.squaring.items()):
        if not data.parities[i]:
            flag(parity, {"square_of_even": data.names[i]})
        for k in _support(v):
            parity.checked += 1
            grading.checked += 1
            if data.parities[k]:
                flag(parity, {"square": data.names[i], "component": data.names[k]})
            if data.degrees[k] != 2 * data.degrees[i]:
                flag(grading, {"square": data.names[i], "component": data.names[k], "expected_degree": 2 * data.degrees[i], "degree": data.degrees[k]})
    return [parity, grading]


def check_axioms(data: LieSuperData) -> AxiomReport:
    """Exhaustive verification of the char-2 Lie superalgebra axioms.

    Structure (parity, grading) is checked first; if it fails the axioms are
    not evaluated. Then: Jacobi on the even part, the even-odd module law,
    ``(ax)^2 = a^2 x^2``, bilinearity of the polarization, ``[x, y^2] =
    [y, [y, x]]`` for all x (and separately for even x only) and
    ``[x, x^2] = 0``. Odd vectors range over the whole odd part.
    """
    report = AxiomReport(validate_structure(data))
    if not report.ok:
        return report
    F = data.field
    br = data.bracket_vectors
    e = data.basis_vector
    nm = data.names
    ev, od = data.even(), data.odd()

    def run(axiom, cases):
        res = AxiomResult(axiom, True)
        for ok, witness in cases:
            res.checked += 1
            if not ok:
                res.passed = False
                res.witness = witness
                break
        report.results.append(res)
        return res

    def jacobi():
        for x, y, z in itertools.product(ev, repeat=3):
            total = data.add(data.add(br(e(x), br(e(y), e(z))), br(e(y), br(e(z), e(x)))), br(e(z), br(e(x), e(y))))
            yield not any(total), {"x": nm[x], "y": nm[y], "z": nm[z], "value": data.render(total)}

    def module():
        for x, y, v in itertools.product(ev, ev, od):
            lhs = br(br(e(x), e(y)), e(v))
            rhs = data.add(br(e(x), br(e(y), e(v))), br(e(y), br(e(x), e(v))))
            yield lhs == rhs, {"x": nm[x], "y": nm[y], "v": nm[v], "lhs": data.render(lhs), "rhs": data.render(rhs)}

    def scalar_square():
        for a in F.elements():
            for x in data.odd_vectors():
                lhs = data.square(data.scale(a, x))
                rhs = data.scale(F.mul(a, a), data.square(x))
                yield lhs == rhs, {"a": F.render(a), "x": data.render(x)}

    def bilinear():
        for a, b in itertools.product(F.elements(), repeat=2):
            for x, x2, y in itertools.product(od, repeat=3):
                lhs = bracket_odd(data.add(data.scale(a, e(x)), data.scale(b, e(x2))), e(y), data)
                rhs = data.add(data.scale(a, bracket_odd(e(x), e(y), data)), data.scale(b, bracket_odd(e(x2), e(y), data)))
                yield lhs == rhs, {"a": F.render(a), "b": F.render(b), "x": nm[x], "x2": nm[x2], "y": nm[y]}

    def ad_square(xs):
        for x in xs:
            for y in data.odd_vectors():
                lhs = br(e(x), data.square(y))
                rhs = br(y, br(y, e(x)))
                yield lhs == rhs, {"x": nm[x], "y": data.render(y), "lhs": data.render(lhs), "rhs": data.render(rhs)}

    def self_bracket_square():
        for x in data.odd_vectors():
            val = br(x, data.square(x))
            yield not any(val), {"x": data.render(x), "value": data.render(val)}

    run("jacobi_even", jacobi())
    run("module_even_odd", module())
    run("scalar_square", scalar_square())
    run("polarization_bilinear", bilinear())
    r12 = run("ad_square", ad_square(range(data.n)))
    run("ad_square_even_only", ad_square(ev))
    r11 = run("self_bracket_square", self_bracket_square())
    report.results.append(AxiomResult("ad_square_implies_self_bracket", not (r12.passed and not r11.passed), 1))
    return report


def squaring_from_p2_envelope(self_bracket, p: int):
    """``x^2 = [x, x] / 2`` from a given self-bracket; undefined at p = 2.

    ``self_bracket`` is an F_p vector (sequence of ints) or any element with
    a ``scale`` method, e.g. a :class:`~steenalg.steenrod.SteenrodElement`.
    """
    fld = FpField(p)
    if p == 2:
        raise ValueError("x^2 = [x, x]/2 needs 2 to be invertible; at p = 2 the squaring is extra data")
    half = fld.inv(2)
    if hasattr(self_bracket, "scale"):
        return self_bracket.scale(half)
    return tuple(int(c) * half % p for c in self_bracket)


def load_fixture(name: str) -> LieSuperData:
    path = Path(__file__).with_name("data") / name
    return LieSuperData.from_json(path)


def mutate(data: LieSuperData, kind: str, key, coeffs: Sequence) -> LieSuperData:
    """Copy of ``data`` with one bracket or squaring entry replaced."""
    new = LieSuperData(data.field, list(data.names), list(data.parities), list(data.degrees), dict(data.bracket), dict(data.squaring))
    index = {nm: i for i, nm in enumerate(data.names)}
    vec = tuple(data.field.parse(c) for c in coeffs)
    if kind == "bracket":
        i, j = (index[k] if isinstance(k, str) else k for k in key)
        new.bracket[(min(i, j), max(i, j))] = vec
    elif kind == "squaring":
        i = index[key] if isinstance(key, str) else key
        new.squaring[i] = vec
    else:
        raise ValueError(f"unknown mutation kind {kind!r}")
    return new
