"""Witt vectors, Milnor K-groups and Kato symbols over finite fields and F_q(t)."""

import json

from . import _core
from ._core import KatoError, place_string, ratfunc_string, suite_names, weil_check, witt_add, witt_mul

__all__ = [
    "KatoError",
    "coker_wp",
    "invariants",
    "kh0",
    "mackey_reduce",
    "place_string",
    "ratfunc_string",
    "run_suite",
    "suite_names",
    "weil_check",
    "witt_add",
    "witt_mul",
]


def coker_wp(q: int, r: int) -> dict:
    """Order, invariant factors and a generator of W_r(F_q)/wp."""
    return json.loads(_core.coker_wp(q, r))


def invariants(symbol: str, q: int) -> dict:
    """Local invariants of a Kato symbol (or sum of symbols) over F_q(t)."""
    return json.loads(_core.invariants(symbol, q))


def kh0(q: int, r: int, D: int, symbol_bound: int = 1) -> dict:
    """KH_0 of the truncated Kato complex of P^1 over F_q."""
    return json.loads(_core.kh0(q, r, D, symbol_bound))


def mackey_reduce(symbol: str, L: int = 4, wp_quotient: bool = False) -> dict:
    """Reduce a Mackey symbol in the truncated Mackey product."""
    return json.loads(_core.mackey_reduce(symbol, L, wp_quotient))


def run_suite(name: str, seed: int = 7) -> dict:
    """Run one verification suite and return its report."""
    return json.loads(_core.run_suite(name, seed))
