"""Independent reference values, written directly from closed formulas.

Nothing here calls the localization engine; each function evaluates a
displayed sum or product with plain Fractions.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def poch(x, n: int, q) -> Fraction:
    """(x; q)_n for any integer n, with (x; q)_{-k} = 1 / prod_{i=1..k} (1 - x q^-i)."""
    x, q = Fraction(x), Fraction(q)
    out = Fraction(1)
    if n >= 0:
        for i in range(n):
            out *= 1 - x * q ** i
    else:
        for i in range(1, -n + 1):
            out /= 1 - x * q ** -i
    return out


def rpp_indices(N: int):
    """(d11, d21, d22, d31) with 0 <= d21 <= d11 <= d22, d21 <= d31 <= d22 and z-degree <= N."""
    for d11, d21, d22, d31 in product(range(N + 1), repeat=4):
        if 0 <= d21 <= d11 <= d22 and d21 <= d31 <= d22 and d11 + d21 + d22 + d31 <= N:
            yield d11, d21, d22, d31


def a3_rpp_sum(N: int, q, h) -> dict:
    """The reverse-plane-partition formula for the A3 (v = (1,2,1), w = (0,1,0)) vertex.

    Keys are (z1, z2, z3) exponents; kappa = q/h.
    """
    q, h = Fraction(q), Fraction(h)
    k = q / h
    out: dict = {}
    for d11, d21, d22, d31 in rpp_indices(N):
        n = -2 * d11 + d21 + d22 + 2 * d31
        t = k ** n
        t *= poch(h, d21, q) * poch(h * h, d22, q) / (poch(q, d21, q) * poch(q * h, d22, q))
        t *= poch(k, d21 - d22, q) * poch(q * h, d22 - d21, q)
        t /= poch(1, d21 - d22, q) * poch(h * h, d22 - d21, q)
        t *= (poch(h, d22 - d11, q) * poch(1, d21 - d11, q) * poch(h, d31 - d21, q)
              * poch(1, d31 - d22, q))
        t /= (poch(q, d22 - d11, q) * poch(k, d21 - d11, q) * poch(q, d31 - d21, q)
              * poch(k, d31 - d22, q))
        e = (d11, d21 + d22, d31)
        out[e] = out.get(e, 0) + t
    return {e: c for e, c in out.items() if c}


def gr22_sum(N: int, q, h, a1, a2) -> dict:
    """The two-index localization formula for T*Gr(2,2), keyed by the z exponent.

    Both products run over all ordered pairs (i, j) in {1, 2}.
    """
    q, h = Fraction(q), Fraction(h)
    a = (Fraction(a1), Fraction(a2))
    k = q / h
    out: dict = {}
    for d in product(range(N + 1), repeat=2):
        if sum(d) > N:
            continue
        t = (k * k) ** sum(d)
        for i in range(2):
            for j in range(2):
                x = a[i] / a[j]
                t *= poch(h * x, d[i], q) / poch(q * x, d[i], q)
                t *= poch(q * x, d[i] - d[j], q) / poch(h * x, d[i] - d[j], q)
        out[(sum(d),)] = out.get((sum(d),), 0) + t
    return {e: c for e, c in out.items() if c}


def phi_ratio(u, m, n_max: int, q) -> list:
    """Coefficients c_k of Phi(u x)/Phi(x) = sum_k (u)_k/(q)_k x^k, k <= n_max, at x = m x."""
    return [poch(u, k, q) / poch(q, k, q) * Fraction(m) ** k for k in range(n_max + 1)]


def phi_product(factors, variables: int, N: int, q, h) -> dict:
    """prod Phi(h c z^e)/Phi(c z^e) over (c, e) pairs, truncated at total degree N."""
    out = {(0,) * variables: Fraction(1)}
    for c, e in factors:
        deg = sum(e)
        series = phi_ratio(h, c, N // deg, q)
        new: dict = {}
        for key, v in out.items():
            for j, s in enumerate(series):
                k2 = tuple(x + j * y for x, y in zip(key, e))
                if sum(k2) <= N:
                    new[k2] = new.get(k2, 0) + v * s
        out = new
    return {e: c for e, c in out.items() if c}
