"""Truncated power series in an auxiliary deformation parameter t.

Used to take exact limits t -> 0 when torus weights coincide at a special
framing: a weight value c becomes c (1+t)^k and factors 1 - c(1+t)^k that
vanish at t = 0 acquire valuation 1 instead of being 0/0.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = ["binomial_series", "mul", "inv", "one_minus", "unit"]


@lru_cache(maxsize=None)
def binomial_series(k: int, P: int) -> tuple:
    """Coefficients of (1+t)^k up to t^(P-1); k may be negative."""
    out = [Fraction(1)]
    c = Fraction(1)
    for j in range(1, P):
        c = c * (k - j + 1) / j
        out.append(c)
    return tuple(out)


def unit(P: int) -> tuple:
    return (Fraction(1),) + (Fraction(0),) * (P - 1)


def mul(a: tuple, b: tuple, P: int) -> tuple:
    out = [Fraction(0)] * P
    for i, x in enumerate(a[:P]):
        if not x:
            continue
        for j in range(min(len(b), P - i)):
            out[i + j] += x * b[j]
    return tuple(out)


def inv(a: tuple, P: int) -> tuple:
    """Inverse of a unit series (a[0] != 0)."""
    if not a[0]:
        raise ZeroDivisionError("series is not a unit")
    out = [Fraction(1) / a[0]]
    for n in range(1, P):
        s = sum(a[j] * out[n - j] for j in range(1, min(n, len(a) - 1) + 1))
        out.append(-s / a[0])
    return tuple(out)


def one_minus(c: Fraction, k: int, P: int) -> tuple[int, tuple]:
    """1 - c (1+t)^k as (valuation, unit part) to relative precision P.

    Returns valuation 1 when c == 1 and k != 0; raises if it vanishes identically.
    """
    b = binomial_series(k, P + 1)
    full = [1 - c * b[0]] + [-c * x for x in b[1:]]
    if full[0]:
        return 0, tuple(full[:P])
    if k == 0:
        raise ZeroDivisionError("factor vanishes identically")
    return 1, tuple(full[1:P + 1])
