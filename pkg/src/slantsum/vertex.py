"""Vertex functions by localization, as truncated series in the Kahler variables.

The term attached to a degree tuple delta (one entry per Chern-root slot) is

    prod_w [ (-q hbar^(-1/2))^d(w) (hbar x_w)_d(w) / (q x_w)_d(w) ]^mult(w)

over the weights w of the canonical polarization, d(w) = covector(w) . delta
(framing slots contribute through the twist sigma).  Factors that vanish
identically are counted: more in the numerator than the denominator means
delta is not a fixed quasimap and the term is zero, more in the denominator is
a pole, and equal nonzero counts mean the fixed locus is not isolated, which
raises DegenerateLocusError.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .fixedpoints import FixedPointData
from .scalars import Monomial, PoleError, SamplePoint, Scalar, UsageError, poch_factor
from .series import TruncatedSeries
from .theory import QuiverGaugeTheory, msver_exponents

__all__ = ["WeightEntry", "Descendant", "weight_table", "term_coefficient", "vertex",
           "degree_tuples", "twisted_vs_shift_check", "shift_data", "VertexEngine",
           "DESCENDANT_SIGN", "make_engine",
           "DegenerateLocusError"]

# x_{i,k} -> x_{i,k} q^(DESCENDANT_SIGN * delta_{i,k}) when evaluating descendants
DESCENDANT_SIGN = +1


@dataclass(frozen=True)
class WeightEntry:
    value: Monomial
    slots: tuple          # ((slot index, coefficient), ...)
    framing: tuple        # (((vertex, k), coefficient), ...)
    mult: int

    def degree(self, delta: Sequence[int], sigma: Mapping | None = None) -> int:
        d = 0
        for i, c in self.slots:
            d += c * delta[i]
        if sigma:
            for key, c in self.framing:
                d += c * sigma.get(key, 0)
        return d


@dataclass(frozen=True)
class Descendant:
    """Symmetric Laurent polynomial per vertex in that vertex's Chern roots.

    ``terms`` maps vertex -> tuple of (coefficient, exponent tuple over the slots).
    The full descendant is the product over vertices.
    """

    terms: tuple = ()

    @staticmethod
    def trivial() -> "Descendant":
        return Descendant(())

    @staticmethod
    def make(spec: Mapping) -> "Descendant":
        out = []
        for u, polys in spec.items():
            out.append((str(u), tuple((Fraction(c), tuple(int(e) for e in ex)) for c, ex in polys)))
        return Descendant(tuple(sorted(out)))

    @staticmethod
    def det(vertex, n: int, power: int = 1) -> "Descendant":
        return Descendant.make({vertex: [(1, (power,) * n)]})

    @staticmethod
    def power_sum(vertex, n: int, k: int = 1) -> "Descendant":
        return Descendant.make({vertex: [(1, tuple(k if j == i else 0 for j in range(n)))
                                         for i in range(n)]})

    def is_trivial(self) -> bool:
        return not self.terms

    def is_symmetric(self) -> bool:
        for _, polys in self.terms:
            acc: dict = {}
            for c, ex in polys:
                acc[ex] = acc.get(ex, 0) + c
            for ex, c in acc.items():
                for perm in set(itertools.permutations(ex)):
                    if acc.get(perm, 0) != c:
                        return False
        return True

    def relabel(self, prefix: str) -> "Descendant":
        return Descendant(tuple((prefix + u, p) for u, p in self.terms))

    def tensor(self, other: "Descendant") -> "Descendant":
        d = dict(self.terms)
        for u, p in other.terms:
            if u in d:
                raise UsageError(f"descendant defined twice at vertex {u}")
            d[u] = p
        return Descendant(tuple(sorted(d.items())))

    def evaluate(self, chern_values: Mapping, qpow: Mapping) -> Fraction:
        """chern_values[(u,k)] is the value of x_{u,k}; qpow[(u,k)] the factor multiplying it."""
        total = Fraction(1)
        for u, polys in self.terms:
            s = Fraction(0)
            for c, ex in polys:
                t = c
                for k, e in enumerate(ex, start=1):
                    if e:
                        t *= (chern_values[(u, k)] * qpow[(u, k)]) ** e
                s += t
            total *= s
        return total

    def a_degree(self, chars: Mapping, framing_vertex: str) -> int | None:
        """Degree in the framing variables of one vertex, if the evaluated descendant is homogeneous."""
        degs = set()
        for u, polys in self.terms:
            for c, ex in polys:
                d = 0
                for k, e in enumerate(ex, start=1):
                    m = chars[(u, k)]
                    d += e * sum(x for key, x in m.exps if key[0] == "a" and key[1] == framing_vertex)
                degs.add(d)
        if not self.terms:
            return 0
        return degs.pop() if len(degs) == 1 else None


def weight_table(T: QuiverGaugeTheory, p: FixedPointData) -> list:
    """Weights of T^(1/2) at p with degree covectors and multiplicities."""
    if p.theory != T:
        raise UsageError("fixed point belongs to a different theory")
    slots = T.chern_slots()
    idx = {s: i for i, s in enumerate(slots)}
    x = {s: p.at(s[0])[s[1] - 1] for s in slots}
    vd, wd = T.vd(), T.wd()
    out = []
    for t, h in T.arrows:
        for k in range(1, vd[t] + 1):
            for l in range(1, vd[h] + 1):
                out.append(WeightEntry(x[(h, l)] / x[(t, k)],
                                       ((idx[(h, l)], 1), (idx[(t, k)], -1)), (), 1))
    for u in T.vertices:
        for k in range(1, vd[u] + 1):
            for j in range(1, wd[u] + 1):
                out.append(WeightEntry(x[(u, k)] / Monomial.a(u, j), ((idx[(u, k)], 1),),
                                       (((u, j), -1),), 1))
    for u in T.vertices:
        for k in range(1, vd[u] + 1):
            for l in range(1, vd[u] + 1):
                cov = () if k == l else ((idx[(u, k)], 1), (idx[(u, l)], -1))
                out.append(WeightEntry(x[(u, k)] / x[(u, l)], cov, (), -1))
    return out


def degree_tuples(nslots: int, N: int):
    """All nonnegative integer vectors of length nslots with sum <= N."""
    if nslots == 0:
        yield ()
        return

    def rec(prefix, left, remaining):
        if remaining == 1:
            for a in range(left + 1):
                yield prefix + (a,)
            return
        for a in range(left + 1):
            yield from rec(prefix + (a,), left - a, remaining - 1)

    yield from rec((), N, nslots)


_HBAR = Monomial.h(2)
_Q = Monomial.q(2)


class DegenerateLocusError(ArithmeticError):
    """A degree tuple whose weights vanish identically in numerator and denominator alike.

    This signals a non-isolated fixed quasimap locus at the given torus; the
    isolated localization formula does not apply there.
    """

    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


@dataclass
class _FactorInfo:
    value: Fraction
    zpos: int
    zneg: int
    kord: int
    bad: bool


class VertexEngine:
    """A weight table compiled against one sample point, with Pochhammer caching."""

    def __init__(self, theory: QuiverGaugeTheory, table: Sequence[WeightEntry], point: SamplePoint,
                 chern: Sequence[Monomial] | None = None, descendant: Descendant | None = None,
                 descendant_sign: int | None = None):
        self.theory = theory
        self.table = list(table)
        self.point = point
        self.slots = theory.chern_slots()
        self.chern = list(chern) if chern is not None else None
        self.descendant = descendant or Descendant.trivial()
        self.descendant_sign = DESCENDANT_SIGN if descendant_sign is None else descendant_sign
        if not self.descendant.is_trivial() and self.chern is None:
            raise UsageError("descendants need the Chern-root characters")
        self._cache: dict = {}
        self.pref = -point.q / point.hh            # -q hbar^(-1/2)
        self.vertex_of_slot = [theory.index(u) for u, _ in self.slots]
        self.msver = msver_exponents(theory)

    # plain evaluation ---------------------------------------------------------
    def _factor(self, value: Monomial, d: int, mult: int) -> _FactorInfo:
        key = (value, d, mult)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        num = poch_factor(_HBAR * value, d, self.point)
        den = poch_factor(_Q * value, d, self.point)
        if mult > 0:
            info = _FactorInfo(num.value / den.value if den.value else Fraction(0),
                               num.zeros + den.poles, num.poles + den.zeros,
                               num.korder - den.korder,
                               num.accidental or den.accidental or den.value == 0)
        else:
            info = _FactorInfo(den.value / num.value if num.value else Fraction(0),
                               den.zeros + num.poles, den.poles + num.zeros,
                               den.korder - num.korder,
                               num.accidental or den.accidental or num.value == 0)
        self._cache[key] = info
        return info

    def term(self, delta: Sequence[int], sigma: Mapping | None = None,
             normalized: bool = False) -> Scalar:
        """Localization term of delta; a pole flag marks a non-generic sample or invalid input."""
        value = Fraction(1)
        zpos = zneg = kord = 0
        bad = False
        M = 0
        for w in self.table:
            d = w.degree(delta, sigma)
            if d == 0:
                continue
            M += w.mult * d
            f = self._factor(w.value, d, w.mult)
            zpos += f.zpos
            zneg += f.zneg
            kord += f.kord
            bad = bad or f.bad
            value *= f.value
        net = zpos - zneg
        if net > 0:
            return Scalar(0)
        if net < 0 or bad or kord < 0:
            return Scalar(0, True)
        if zpos:
            raise DegenerateLocusError(f"weights vanish identically in numerator and denominator "
                                       f"at degree tuple {tuple(delta)}", where=tuple(delta))
        if kord > 0:
            return Scalar(0)
        return Scalar(value * self._scalar_prefactor(delta, M, normalized))

    def _scalar_prefactor(self, delta, M, normalized) -> Fraction:
        out = self.pref ** M
        if normalized:
            deg = self.degree_vector(delta)
            e = sum(a * n for a, n in zip(self.msver, deg))
            out *= (-1 / self.point.hh) ** e
        if not self.descendant.is_trivial():
            out *= self.descendant_value(delta)
        return out

    def descendant_value(self, delta: Sequence[int]) -> Fraction:
        q = self.point.q
        vals = {s: self.point.value(m) for s, m in zip(self.slots, self.chern)}
        qp = {s: q ** (self.descendant_sign * d) for s, d in zip(self.slots, delta)}
        return self.descendant.evaluate(vals, qp)

    # sums ---------------------------------------------------------------------
    def degree_vector(self, delta: Sequence[int]) -> tuple:
        deg = [0] * len(self.theory.vertices)
        for vi, d in zip(self.vertex_of_slot, delta):
            deg[vi] += d
        return tuple(deg)

    def partial_sum(self, deltas, sigma=None, normalized=False) -> dict:
        """{z-exponent: coefficient} over the given degree tuples."""
        out: dict = {}
        for delta in deltas:
            t = self.term(delta, sigma, normalized)
            if t.pole:
                raise PoleError(f"pole at degree tuple {tuple(delta)}", where=tuple(delta))
            if t.value:
                e = self.degree_vector(delta)
                out[e] = out.get(e, 0) + t.value
        return out

    def series(self, N: int, sigma: Mapping | None = None, normalized: bool = False,
               jobs: int = 1) -> TruncatedSeries:
        deltas = list(degree_tuples(len(self.slots), N))
        if jobs > 1 and len(deltas) > 200:
            chunks = [deltas[i::jobs] for i in range(jobs)]
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                parts = list(ex.map(_partial_job, [(self, c, sigma, normalized) for c in chunks]))
        else:
            parts = [self.partial_sum(deltas, sigma, normalized)]
        return TruncatedSeries(self.theory.vertices, N, self._combine(parts))

    def _combine(self, parts) -> dict:
        return _merge(parts)


def _merge(parts) -> dict:
    total: dict = {}
    for part in parts:
        for e, c in part.items():
            total[e] = total.get(e, 0) + c
    return total


def _partial_job(args):
    eng, deltas, sigma, normalized = args
    return eng.partial_sum(deltas, sigma, normalized)


def _chern_list(T: QuiverGaugeTheory, p: FixedPointData) -> list:
    return [p.at(u)[k - 1] for u, k in T.chern_slots()]


def make_engine(T: QuiverGaugeTheory, p: FixedPointData, point: SamplePoint,
                descendant: Descendant | None = None, descendant_sign: int | None = None,
                transform: Callable[[Monomial], Monomial] | None = None) -> VertexEngine:
    """Engine for (T, p); ``transform`` rewrites weight values and characters."""
    table = weight_table(T, p)
    chern = _chern_list(T, p)
    if transform is not None:
        table = [WeightEntry(transform(w.value), w.slots, w.framing, w.mult) for w in table]
        chern = [transform(m) for m in chern]
    return VertexEngine(T, table, point, chern, descendant, descendant_sign)


def term_coefficient(table: Sequence[WeightEntry], delta: Sequence[int], sigma: Mapping | None,
                     point: SamplePoint, theory: QuiverGaugeTheory) -> Scalar:
    return VertexEngine(theory, table, point).term(delta, sigma)


def vertex(T: QuiverGaugeTheory, p: FixedPointData, N: int, point: SamplePoint,
           descendant: Descendant | None = None, sigma: Mapping | None = None,
           normalized: bool = False, jobs: int = 1,
           descendant_sign: int | None = None) -> TruncatedSeries:
    """Bare, descendant or twisted vertex of T at p, to total z-degree N."""
    if not T.positive():
        raise UsageError("the vertex engine supports theta > 0 only")
    point = point.extend(T.framing_slots())
    eng = make_engine(T, p, point, descendant, descendant_sign)
    return eng.series(N, _norm_sigma(sigma), normalized, jobs)


def _norm_sigma(sigma):
    if not sigma:
        return None
    return {(str(j), int(k)): int(s) for (j, k), s in sigma.items() if s}


def shift_data(T: QuiverGaugeTheory, p: FixedPointData, sigma: Mapping, point: SamplePoint):
    """Pieces of the twist/shift relation for framing cocharacter sigma.

    Returns (ratio, c, L, shifted point): the Pochhammer ratio
    prod_w [(hbar x_w)_s / (q x_w)_s]^mult, the constant (-q hbar^(-1/2))^(sum mult s),
    the exponent vector <det V_i, sigma>, and the sample with a -> a q^sigma.
    Here s(w) is the power of q picked up by the value of w under a -> a q^sigma.
    """
    sigma = _norm_sigma(sigma) or {}

    def qshift(m: Monomial) -> int:
        return sum(e * sigma.get((k[1], k[2]), 0) for k, e in m.exps if k[0] == "a")

    ratio = Fraction(1)
    M = 0
    for w in weight_table(T, p):
        s = qshift(w.value)
        if not s:
            continue
        M += w.mult * s
        num = poch_factor(_HBAR * w.value, s, point)
        den = poch_factor(_Q * w.value, s, point)
        if num.zeros or num.poles or den.zeros or den.poles or den.value == 0 or num.value == 0:
            raise PoleError("degenerate shift ratio")
        r = num.value / den.value
        ratio *= r if w.mult > 0 else 1 / r
    c = (-point.q / point.hh) ** M
    L = tuple(sum(qshift(m) for m in p.at(u)) for u in T.vertices)
    shifted = point.with_framing({key: point.a[key] * point.q ** s for key, s in sigma.items()})
    return ratio, c, L, shifted


def twisted_vs_shift_check(T: QuiverGaugeTheory, p: FixedPointData, sigma: Mapping, N: int,
                           point: SamplePoint, descendant: Descendant | None = None) -> dict:
    """Compare the twisted vertex with c * z^L * ratio * V|_{a -> a q^sigma}, coefficientwise."""
    point = point.extend(T.framing_slots())
    lhs = vertex(T, p, N, point, descendant, sigma=sigma)
    ratio, c, L, shifted = shift_data(T, p, sigma, point)
    if min(L, default=0) < 0:
        raise UsageError("the twist must pair nonnegatively with every det V_i")
    untw = vertex(T, p, N, shifted, descendant)
    rhs = TruncatedSeries(T.vertices, N,
                          {tuple(x + y for x, y in zip(e, L)): v * ratio * c
                           for e, v in untw.terms.items()})
    mism = lhs.mismatches(rhs)
    return {"lhs": lhs, "rhs": rhs, "mismatches": mism, "L": L, "ratio": ratio, "c": c}
