"""Binary codes from trace functions over GF(2^phi(l^m)), with exact
weight distributions and generalized Hamming weights."""

from __future__ import annotations

from .codegen import CodeSpec, make_spec, weight_distribution
from .field import FieldCtx, field_for
from .ghw import ghw_bruteforce, ghw_closed, ghw_table
from .numtheory import ParameterError, validate_params

__all__ = [
    "CodeSpec",
    "FieldCtx",
    "ParameterError",
    "field_for",
    "ghw_bruteforce",
    "ghw_closed",
    "ghw_table",
    "make_spec",
    "validate_params",
    "weight_distribution",
]
