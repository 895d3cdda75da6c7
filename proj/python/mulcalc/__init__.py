"""Multiplicative calculus on complex functions."""

import json

from ._core import (
    ConvergenceError,
    Curve,
    DomainError,
    Error,
    Expr,
    InputError,
    MultiValueIntegral,
    NotHolomorphicError,
    ParseError,
    check_cr,
    complex_star_integral,
    double_star,
    line_star,
    reference_suite,
    run_cli,
    star_derivative,
    star_derivative_n,
    star_limit_oracle,
    verify_closed,
    verify_ftc,
    verify_product,
    verify_reverse,
)


def curve(spec):
    """Builds a Curve from a dict or a JSON string."""
    if isinstance(spec, Curve):
        return spec
    if not isinstance(spec, str):
        spec = json.dumps(spec)
    return Curve(spec)


__all__ = [
    "ConvergenceError",
    "Curve",
    "DomainError",
    "Error",
    "Expr",
    "InputError",
    "MultiValueIntegral",
    "NotHolomorphicError",
    "ParseError",
    "check_cr",
    "complex_star_integral",
    "curve",
    "double_star",
    "line_star",
    "reference_suite",
    "run_cli",
    "star_derivative",
    "star_derivative_n",
    "star_limit_oracle",
    "verify_closed",
    "verify_ftc",
    "verify_product",
    "verify_reverse",
]
