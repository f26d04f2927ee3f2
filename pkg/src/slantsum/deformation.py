"""Slant-sum vertices at points where the quasimap fixed loci are not isolated.

At p1 # p2 the second theory's framing is pinned to the chamber weights of the
first theory, and these may differ by hbar.  Then some degree tuples have a
weight vanishing in both numerator and denominator.  We move the pinned framing
off the special values, a_{star2,k} = w_k (1+t)^c_k, in every weight that sees
it: the second theory's own weights and the arrows from star1, whose tail
weights play the role of that framing.  Each term becomes a Laurent series in
t.  Summed over the tuples of one Kahler degree the negative powers must
cancel, and the t^0 part is the value.  The first theory's weights are left
alone.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from . import tseries
from .fixedpoints import Chamber, FixedPointData, chamber_weights, slant_sum_fixed_point
from .scalars import Monomial, PoleError, SamplePoint, UsageError, akey
from .series import TruncatedSeries
from .theory import QuiverGaugeTheory, SlantSumSpec, slant_sum
from .vertex import (_HBAR, _Q, DegenerateLocusError, Descendant, VertexEngine, WeightEntry,
                     _chern_list, weight_table)

__all__ = ["DeformedEngine", "vertex_of_slant_sum", "deformation_exponents",
           "framing_limit_series"]


class DeformedEngine(VertexEngine):
    """Engine whose weight values carry exponents eps: x is read as x (1+t)^eps."""

    def __init__(self, theory: QuiverGaugeTheory, table: Sequence[WeightEntry], point: SamplePoint,
                 eps: Sequence[int], chern: Sequence[Monomial] | None = None,
                 chern_eps: Sequence[int] | None = None, descendant: Descendant | None = None,
                 descendant_sign: int | None = None, precision: int = 10):
        super().__init__(theory, table, point, chern, descendant, descendant_sign)
        if point.q_equals_hbar:
            raise UsageError("deformation limits are not supported at q = hbar")
        if len(eps) != len(self.table):
            raise UsageError("one deformation exponent per weight is needed")
        self.eps = list(eps)
        self.chern_eps = list(chern_eps) if chern_eps is not None else [0] * len(self.slots)
        self.P = precision

    def _poch_t(self, y: Monomial, k: int, d: int):
        """(y)_d with y -> y (1+t)^k as (valuation, unit, zeros, poles, bad)."""
        P = self.P
        u = tseries.unit(P)
        val = zeros = 0
        bad = False
        ya = bool(y.a_part().exps)
        rng = range(d) if d > 0 else range(-1, d - 1, -1)
        for i in rng:
            structural = not ya and y.sign == 1 and y.q2 + 2 * i == 0 and y.h2 == 0
            if structural and k == 0:
                zeros += 1
                continue
            c = Fraction(1) if structural else self.point.value(y) * self.point.qh ** (2 * i)
            if c == 1 and not structural and k == 0:
                bad = True
                continue
            v, f = tseries.one_minus(c, k, P)
            val += v
            u = tseries.mul(u, f, P)
        if d < 0:
            return -val, tseries.inv(u, P), 0, zeros, bad
        return val, u, zeros, 0, bad

    def _factor_t(self, value: Monomial, k: int, d: int, mult: int):
        key = ("t", value, k, d, mult)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        P = self.P
        nv, nu, nz, npo, nb = self._poch_t(_HBAR * value, k, d)
        dv, du, dz, dpo, db = self._poch_t(_Q * value, k, d)
        if mult > 0:
            f = (nv - dv, tseries.mul(nu, tseries.inv(du, P), P), nz + dpo, npo + dz, nb or db)
        else:
            f = (dv - nv, tseries.mul(du, tseries.inv(nu, P), P), dz + npo, dpo + nz, nb or db)
        self._cache[key] = f
        return f

    def term_t(self, delta: Sequence[int], sigma: Mapping | None = None,
               normalized: bool = False) -> dict:
        """Laurent coefficients {power of t: value} of the term, up to t^0."""
        P = self.P
        u = tseries.unit(P)
        val = zpos = zneg = M = 0
        bad = False
        for w, k in zip(self.table, self.eps):
            d = w.degree(delta, sigma)
            if d == 0:
                continue
            M += w.mult * d
            fv, fu, fz, fp, fb = self._factor_t(w.value, k, d, w.mult)
            val += fv
            zpos += fz
            zneg += fp
            bad = bad or fb
            u = tseries.mul(u, fu, P)
        net = zpos - zneg
        if net > 0:
            return {}
        if net < 0 or bad:
            raise PoleError(f"pole at degree tuple {tuple(delta)}", where=tuple(delta))
        if zpos:
            raise DegenerateLocusError(f"undeformed weights still vanish at {tuple(delta)}",
                                       where=tuple(delta))
        if val > 0:
            return {}
        if -val >= P:
            raise PoleError(f"deformation precision {P} is too small at {tuple(delta)}",
                            where=tuple(delta))
        pre = self.pref ** M
        if normalized:
            deg = self.degree_vector(delta)
            pre *= (-1 / self.point.hh) ** sum(a * n for a, n in zip(self.msver, deg))
        if not self.descendant.is_trivial():
            u = tseries.mul(u, self._descendant_t(delta), P)
        return {val + j: pre * u[j] for j in range(-val + 1) if u[j]}

    def _descendant_t(self, delta) -> tuple:
        P = self.P
        q = self.point.q
        vals = {s: (self.point.value(m) * q ** (self.descendant_sign * d), e)
                for s, m, d, e in zip(self.slots, self.chern, delta, self.chern_eps)}
        total = tseries.unit(P)
        for u, polys in self.descendant.terms:
            acc = [Fraction(0)] * P
            for c, ex in polys:
                t = tseries.unit(P)
                coef = Fraction(c)
                for k, e in enumerate(ex, start=1):
                    if e:
                        v, ke = vals[(u, k)]
                        coef *= v ** e
                        t = tseries.mul(t, tseries.binomial_series(ke * e, P), P)
                for j in range(P):
                    acc[j] += coef * t[j]
            total = tseries.mul(total, tuple(acc), P)
        return total

    def partial_sum(self, deltas, sigma=None, normalized=False) -> dict:
        out: dict = {}
        for delta in deltas:
            lt = self.term_t(delta, sigma, normalized)
            if lt:
                slot = out.setdefault(self.degree_vector(delta), {})
                for j, c in lt.items():
                    slot[j] = slot.get(j, 0) + c
        return out

    def _combine(self, parts) -> dict:
        total: dict = {}
        for part in parts:
            for e, lt in part.items():
                slot = total.setdefault(e, {})
                for j, x in lt.items():
                    slot[j] = slot.get(j, 0) + x
        out = {}
        for e, lt in total.items():
            if any(x for j, x in lt.items() if j < 0):
                raise PoleError(f"the deformation limit does not exist at z-exponent {e}", where=e)
            if lt.get(0):
                out[e] = lt[0]
        return out


def deformation_exponents(spec: SlantSumSpec, formal: FixedPointData, chamber: Chamber | None,
                          directions: Sequence[int]) -> tuple[list, list, list]:
    """(table, eps per weight, eps per Chern slot) for the formal point of a slant sum."""
    T = formal.theory
    n = len(directions)
    keys = [akey(spec.s2, k) for k in range(1, n + 1)]
    order = (chamber or Chamber.identity(n)).order
    pos = {i: k for k, i in enumerate(order)}           # character index -> chamber position
    slots = T.chern_slots()
    star1 = spec.s1
    second = {"2." + u for u in spec.second.vertices}

    def eps_of(m: Monomial) -> int:
        return sum(c * m.exp(key) for key, c in zip(keys, directions))

    table = weight_table(T, formal)
    eps = []
    for w in table:
        e = eps_of(w.value)
        verts = {slots[i][0] for i, _ in w.slots}
        if star1 in verts and verts & second:
            for i, sgn in w.slots:
                u, k = slots[i]
                if u == star1:
                    e += sgn * directions[pos[k - 1]]
        eps.append(e)
    chern = _chern_list(T, formal)
    return table, eps, [eps_of(m) for m in chern]


def vertex_of_slant_sum(spec: SlantSumSpec, p1: FixedPointData, chamber: Chamber | None,
                        p2: FixedPointData, N: int, point: SamplePoint,
                        descendant: Descendant | None = None, normalized: bool = False,
                        directions: Sequence[int] | None = None, jobs: int = 1,
                        descendant_sign: int | None = None, precision: int = 10) -> TruncatedSeries:
    """Vertex of the slant-sum theory at p1 # p2 by deformed localization.

    ``directions`` are the exponents c_k (default 1, 2, ...); the limit must not
    depend on them, which callers can test by varying them.
    """
    T = slant_sum(spec)
    if not T.positive():
        raise UsageError("the vertex engine supports theta > 0 only")
    formal = slant_sum_fixed_point(spec, p1, chamber, p2, substitute=False)
    ws = chamber_weights(spec, p1, chamber)
    c = list(directions) if directions is not None else list(range(1, len(ws) + 1))
    if len(c) != len(ws):
        raise UsageError(f"need {len(ws)} deformation directions")
    table, eps, chern_eps = deformation_exponents(spec, formal, chamber, c)
    keys = [akey(spec.s2, k) for k in range(1, len(ws) + 1)]

    def pin(m: Monomial) -> Monomial:
        for key, wk in zip(keys, ws):
            m = m.substitute(key, wk)
        return m

    table = [WeightEntry(pin(w.value), w.slots, w.framing, w.mult) for w in table]
    chern = [pin(m) for m in _chern_list(T, formal)]
    point = point.extend(T.framing_slots())
    eng = DeformedEngine(T, table, point, eps, chern, chern_eps, descendant, descendant_sign,
                         precision)
    return eng.series(N, None, normalized, jobs)


def framing_limit_series(T: QuiverGaugeTheory, p: FixedPointData, vertex: str, N: int,
                         point: SamplePoint, sigma: Mapping | None = None,
                         descendant: Descendant | None = None, normalized: bool = False,
                         directions: Sequence[int] | None = None, jobs: int = 1,
                         descendant_sign: int | None = None, precision: int = 10) -> TruncatedSeries:
    """Vertex of T at p as the limit a_{vertex,k} -> point value along (1+t)^c_k.

    Used when the framing values at ``vertex`` are special (e.g. differ by hbar)
    and single terms are 0/0 there although the sum is regular.
    """
    n = T.wd()[str(vertex)]
    c = list(directions) if directions is not None else list(range(1, n + 1))
    keys = [akey(str(vertex), k) for k in range(1, n + 1)]

    def eps_of(m: Monomial) -> int:
        return sum(ck * m.exp(key) for key, ck in zip(keys, c))

    table = weight_table(T, p)
    chern = _chern_list(T, p)
    point = point.extend(T.framing_slots())
    sig = None
    if sigma:
        sig = {(str(j), int(k)): int(s) for (j, k), s in sigma.items() if s}
    eng = DeformedEngine(T, table, point, [eps_of(w.value) for w in table], chern,
                         [eps_of(m) for m in chern], descendant, descendant_sign, precision)
    return eng.series(N, sig, normalized, jobs)
