"""Multivariate power series in Kahler variables, truncated by total degree."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import Monomial, NonTruncatingError, SamplePoint, UsageError, zkey

__all__ = ["TruncatedSeries", "phi_ratio_series", "substitute_kahler", "series_product"]


class TruncatedSeries:
    """sum c_e z^e over exponent vectors e >= 0 with |e| <= order.

    ``variables`` names the Kahler variables (vertex labels) in order; the
    coefficients are exact Fractions at one sample point.  ``lossy`` records
    that a substitution pushed terms past the cutoff.
    """

    __slots__ = ("variables", "order", "terms", "lossy")

    def __init__(self, variables: Sequence[str], order: int, terms: Mapping | None = None,
                 lossy: bool = False):
        if order < 0:
            raise ValueError("order must be nonnegative")
        self.variables = tuple(str(v) for v in variables)
        self.order = int(order)
        self.lossy = lossy
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e}")
            if sum(e) <= self.order and c:
                clean[e] = Fraction(c)
        self.terms = clean

    @classmethod
    def one(cls, variables, order):
        return cls(variables, order, {(0,) * len(tuple(variables)): 1})

    @classmethod
    def zero(cls, variables, order):
        return cls(variables, order)

    def _same_vars(self, other):
        if self.variables != other.variables:
            raise UsageError(f"variable mismatch {self.variables} vs {other.variables}")

    def __add__(self, other):
        self._same_vars(other)
        n = min(self.order, other.order)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.variables, n, out, self.lossy or other.lossy)

    def __neg__(self):
        return TruncatedSeries(self.variables, self.order,
                               {e: -c for e, c in self.terms.items()}, self.lossy)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries(self.variables, self.order,
                               {e: c * v for e, v in self.terms.items()}, self.lossy)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._same_vars(other)
        n = min(self.order, other.order)
        out: dict = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            if d1 > n:
                continue
            for e2, d2, c2 in right:
                if d1 + d2 > n:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(self.variables, n, out, self.lossy or other.lossy)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.variables == other.variables and self.order == other.order
                and self.terms == other.terms)

    def __repr__(self):
        return f"TruncatedSeries({self.variables}, order={self.order}, {len(self.terms)} terms)"

    def coefficient(self, e) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def truncate(self, n: int) -> "TruncatedSeries":
        return TruncatedSeries(self.variables, min(n, self.order), self.terms, self.lossy)

    def support(self) -> set:
        return set(self.terms)

    def embed(self, variables: Sequence[str], mapping: Mapping | None = None) -> "TruncatedSeries":
        """Re-express in a larger variable list; mapping renames own variables."""
        mapping = mapping or {}
        variables = tuple(str(v) for v in variables)
        idx = []
        for v in self.variables:
            t = str(mapping.get(v, v))
            if t not in variables:
                raise UsageError(f"variable {t} missing from target")
            idx.append(variables.index(t))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, x in zip(idx, e):
                ne[i] += x
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return TruncatedSeries(variables, self.order, out, self.lossy)

    def mismatches(self, other, limit: int | None = None) -> list:
        """Exponent vectors where coefficients differ, up to the common order."""
        self._same_vars(other)
        n = min(self.order, other.order)
        keys = sorted({e for e in self.terms if sum(e) <= n} | {e for e in other.terms if sum(e) <= n},
                      key=lambda e: (sum(e), e))
        out = []
        for e in keys:
            a, b = self.coefficient(e), other.coefficient(e)
            if a != b:
                out.append((e, a, b))
                if limit and len(out) >= limit:
                    break
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def to_text(self, name: str = "z") -> str:
        """Canonical text: terms by total degree, then exponent vector."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            m = "*".join(f"{name}[{v}]" + (f"^{x}" if x != 1 else "")
                         for v, x in zip(self.variables, e) if x)
            parts.append(str(c) if not m else f"({c})*{m}")
        return " + ".join(parts) + f" + O({self.order + 1})"


def _zvector(m: Monomial, variables: Sequence[str]) -> tuple:
    d = m.as_dict()
    vec = []
    for v in variables:
        vec.append(d.pop(zkey(v), 0))
    leftover = [k for k in d if k[0] == "z"]
    if leftover:
        raise UsageError(f"monomial uses z variables {leftover} outside {tuple(variables)}")
    return tuple(vec)


def phi_ratio_series(u: Monomial, m: Monomial, order: int, s: SamplePoint,
                     variables: Sequence[str]) -> TruncatedSeries:
    """Phi(u m)/Phi(m) = sum_k m^k (u;q)_k/(q;q)_k, truncated at total z-degree ``order``."""
    if u.z_degree() or any(k[0] == "z" for k, _ in u.exps):
        raise UsageError("u must not involve z")
    zv = _zvector(m, variables)
    if min(zv, default=0) < 0:
        raise NonTruncatingError("m must have nonnegative z-exponents")
    deg = sum(zv)
    if deg <= 0:
        raise NonTruncatingError("m has zero z-degree; Phi(um)/Phi(m) does not truncate")
    c = s.value(m.scalar_part())
    terms = {}
    coeff = Fraction(1)
    k = 0
    qv = s.q
    uval = s.value(u)
    while k * deg <= order:
        e = tuple(k * x for x in zv)
        terms[e] = coeff
        # c_{k+1} = c_k * m (1 - u q^k) / (1 - q^{k+1})
        coeff = coeff * c * (1 - uval * qv ** k) / (1 - qv ** (k + 1))
        k += 1
    return TruncatedSeries(variables, order, terms)


def substitute_kahler(series: TruncatedSeries, j: str, m: Monomial,
                      s: SamplePoint | None = None) -> TruncatedSeries:
    """Replace z_j by the monomial m (z-part times a scalar evaluated at s)."""
    j = str(j)
    if j not in series.variables:
        raise UsageError(f"no Kahler variable {j}")
    zv = _zvector(m, series.variables)
    if sum(zv) < 1 or min(zv) < 0:
        raise UsageError("substitution must keep z-degree positive")
    scal = m.scalar_part()
    c = Fraction(1) if scal.is_one() else (s.value(scal) if s is not None else None)
    if c is None:
        raise UsageError("a sample point is needed to evaluate the scalar part")
    ji = series.variables.index(j)
    out: dict = {}
    lossy = series.lossy
    for e, coef in series.terms.items():
        k = e[ji]
        ne = list(e)
        ne[ji] = 0
        ne = tuple(x + k * y for x, y in zip(ne, zv))
        if sum(ne) > series.order:
            lossy = True
            continue
        out[ne] = out.get(ne, 0) + coef * c ** k
    return TruncatedSeries(series.variables, series.order, out, lossy)


def series_product(factors: Iterable[TruncatedSeries], variables, order) -> TruncatedSeries:
    out = TruncatedSeries.one(variables, order)
    for f in factors:
        out = out * f
    return out
