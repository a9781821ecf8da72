"""Exact computations in the mod-p Steenrod algebra and related structures."""

from .fpnum import FpField, FpScalar, PrimeError, binom_mod_p, check_prime, is_prime
from .kernels import BACKEND
from .steenrod import (
    ParseError,
    ReductionError,
    SteenrodElement,
    SteenrodMonomial,
    P,
    Sq,
    adem_reduce,
    admissible_words,
    basis,
    beta,
    commutator,
    degree,
    dim,
    is_admissible,
    mul,
    parse_expr,
    power,
    render,
    unit,
)

__version__ = "0.1.0"


def clear_caches():
    """Reset every memo table in the package."""
    from . import milnor, oracle, steenrod

    steenrod.clear_caches()
    oracle.clear_caches()
    milnor.clear_caches()


__all__ = [
    "BACKEND",
    "FpField",
    "FpScalar",
    "P",
    "ParseError",
    "PrimeError",
    "ReductionError",
    "Sq",
    "SteenrodElement",
    "SteenrodMonomial",
    "adem_reduce",
    "admissible_words",
    "basis",
    "beta",
    "binom_mod_p",
    "clear_caches",
    "check_prime",
    "commutator",
    "degree",
    "dim",
    "is_admissible",
    "is_prime",
    "mul",
    "parse_expr",
    "power",
    "render",
    "unit",
]
