"""Arithmetic in the prime field F_p and binomial coefficients mod p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .kernels import binom_mod_p as _binom_kernel
from .kernels import python_backend as _py_kernels

_KERNEL_LIMIT = 1 << 62


class PrimeError(ValueError):
    """Raised when a characteristic is not a prime number."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise PrimeError(f"characteristic must be a prime, got {p!r}")
    return p


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem; zero for k < 0 or k > n.

    >>> binom_mod_p(3, 1, 3)
    0
    >>> binom_mod_p(1, 2, 2)
    0
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    if n >= _KERNEL_LIMIT or p >= _KERNEL_LIMIT:
        # beyond 64-bit machine integers: arbitrary-precision fallback
        return _py_kernels.binom_mod_p(n, k, p)
    return _binom_kernel(n, k, p)


@dataclass(frozen=True)
class FpField:
    """Field context F_p.

    The prime travels with the values rather than living in a global so that
    several characteristics can be used side by side.
    """

    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __call__(self, value: int) -> "FpScalar":
        return FpScalar(value % self.p, self.p)

    def binom(self, n: int, k: int) -> "FpScalar":
        return FpScalar(binom_mod_p(n, k, self.p), self.p)

    def inv(self, value: int) -> int:
        value %= self.p
        if value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(value, self.p - 2, self.p)

    def elements(self):
        return [FpScalar(v, self.p) for v in range(self.p)]


@dataclass(frozen=True, order=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if not 0 <= self.value < self.p:
            raise ValueError(f"residue {self.value} out of range for p={self.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((self.value + v) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((self.value - v) % self.p, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar((v - self.value) % self.p, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpScalar(self.value * v % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value % self.p, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FpScalar(v, self.p).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpScalar(pow(self.value, n, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"
