"""Torus fixed points as character data: tautological characters per vertex.

A point stores, for each vertex i, the v_i torus weights of the tautological
bundle at the point.  For theta > 0 each weight is a_{j,k} hbar^c with c >= 0.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .kacmoody import WeightContext, extremal_word
from .scalars import Monomial, akey
from .theory import (QuiverGaugeTheory, SlantSumSpec, a_type, flag_theory, single_node,
                     slant_sum)

__all__ = ["FixedPointData", "Chamber", "is_split", "slant_sum_fixed_point",
           "validate_fixed_point", "tangent_character", "half_tangent",
           "builder_tstar_grassmannian", "builder_tstar_flag", "builder_paper_examples",
           "builder_zero_dim", "FixedPointError", "chamber_weights", "is_valid",
           "relabel_point"]


class FixedPointError(ValueError):
    pass


@dataclass(frozen=True)
class FixedPointData:
    theory: QuiverGaugeTheory
    chars: tuple            # tuple over vertices of tuples of Monomial

    @staticmethod
    def make(theory: QuiverGaugeTheory, chars: Mapping) -> "FixedPointData":
        chars = {str(k): tuple(v) for k, v in chars.items()}
        unknown = set(chars) - set(theory.vertices)
        if unknown:
            raise FixedPointError(f"characters for unknown vertices {sorted(unknown)}")
        out = tuple(chars.get(u, ()) for u in theory.vertices)
        for u, n, c in zip(theory.vertices, theory.v, out):
            if len(c) != n:
                raise FixedPointError(f"vertex {u}: {len(c)} weights but v={n}")
        return FixedPointData(theory, out)

    def at(self, vertex) -> tuple:
        return self.chars[self.theory.index(vertex)]

    def framing(self, vertex) -> tuple:
        n = self.theory.wd()[str(vertex)]
        return tuple(Monomial.a(vertex, k) for k in range(1, n + 1))

    def as_dict(self) -> dict:
        return dict(zip(self.theory.vertices, self.chars))

    def __str__(self):
        return "; ".join(f"V[{u}] = " + (" + ".join(map(str, c)) or "0")
                         for u, c in zip(self.theory.vertices, self.chars))


@dataclass(frozen=True)
class Chamber:
    """Total order on the distinct weights at a split vertex: order[k] is the index of the k-th weight."""

    order: tuple

    @staticmethod
    def identity(n: int) -> "Chamber":
        return Chamber(tuple(range(n)))


def is_split(p: FixedPointData, vertex) -> bool:
    c = p.at(vertex)
    return len(set(c)) == len(c)


def _rename_vertex_keys(m: Monomial, prefix: str) -> Monomial:
    return m.rename(lambda k: (k[0], prefix + k[1]) + k[2:] if k[0] in ("a", "z") else k)


def slant_sum_fixed_point(spec: SlantSumSpec, p1: FixedPointData, chamber: Chamber | None,
                          p2: FixedPointData, substitute: bool = True) -> FixedPointData:
    """The point p1 # p2 over the slant-sum theory.

    Theory-1 characters are copied (namespaced); theory-2 characters have each
    framing variable a_{star2,k} replaced by the k-th chamber-ordered weight of
    the star1 character.  With substitute=False the variables a_{2.star2,k} are
    kept; see chamber_weights for the values they stand for.
    """
    if p1.theory != spec.first or p2.theory != spec.second:
        raise FixedPointError("points do not belong to the theories of the spec")
    if not is_split(p1, spec.star1):
        raise FixedPointError(f"first point is not split over {spec.star1}")
    th2 = set(spec.second.theta)
    if len(th2) != 1:
        raise FixedPointError("second theory needs uniform stability")
    weights = p1.at(spec.star1)
    chamber = chamber or Chamber.identity(len(weights))
    if sorted(chamber.order) != list(range(len(weights))):
        raise FixedPointError(f"chamber must order {len(weights)} weights")
    ordered = [_rename_vertex_keys(weights[i], "1.") for i in chamber.order]
    total = slant_sum(spec)
    chars = {}
    for u, c in zip(spec.first.vertices, p1.chars):
        chars["1." + u] = tuple(_rename_vertex_keys(m, "1.") for m in c)
    for u, c in zip(spec.second.vertices, p2.chars):
        out = []
        for m in c:
            m2 = _rename_vertex_keys(m, "2.")
            if substitute:
                for k, wk in enumerate(ordered, start=1):
                    m2 = m2.substitute(akey(spec.s2, k), wk)
            out.append(m2)
        chars["2." + u] = tuple(out)
    return FixedPointData.make(total, chars)


def chamber_weights(spec: SlantSumSpec, p1: FixedPointData, chamber: Chamber | None) -> list:
    """The star1 weights of p1 in chamber order, in slant-sum variables."""
    weights = p1.at(spec.star1)
    chamber = chamber or Chamber.identity(len(weights))
    return [_rename_vertex_keys(weights[i], "1.") for i in chamber.order]


def relabel_point(p: FixedPointData, prefix: str) -> FixedPointData:
    """The same point over theory.relabel(prefix), with framing variables renamed to match."""
    T = p.theory.relabel(prefix)
    return FixedPointData.make(T, {prefix + u: [_rename_vertex_keys(m, prefix) for m in c]
                                   for u, c in zip(p.theory.vertices, p.chars)})


def half_tangent(p: FixedPointData) -> Counter:
    """Polarization T^(1/2) = sum_e V_h/V_t + sum_i V_i/W_i - sum_i V_i/V_i, as a signed multiset."""
    T = p.theory
    out: Counter = Counter()
    for t, h in T.arrows:
        for xt in p.at(t):
            for xh in p.at(h):
                out[xh / xt] += 1
    for u in T.vertices:
        xs = p.at(u)
        for x in xs:
            for a in p.framing(u):
                out[x / a] += 1
            for y in xs:
                out[x / y] -= 1
    return Counter({k: c for k, c in out.items() if c})


def tangent_character(p: FixedPointData) -> Counter:
    """T = T^(1/2) + hbar^-1 (T^(1/2))^dual; zero for an isolated point of a 0-dim variety."""
    half = half_tangent(p)
    out = Counter(half)
    hinv = Monomial.h(-2)
    for m, c in half.items():
        out[hinv * m.inverse()] += c
    return Counter({k: c for k, c in out.items() if c})


def validate_fixed_point(p: FixedPointData) -> dict:
    """Shape checks on characters; returns {check: list of offending entries}."""
    report = {"lengths": [], "hbar_exponent": [], "a_degree": [], "forbidden_vars": [],
              "declared_framing": []}
    T = p.theory
    declared = {akey(j, k) for j, k in T.framing_slots()}
    for u, n, c, th in zip(T.vertices, T.v, p.chars, T.theta):
        if len(c) != n:
            report["lengths"].append((u, len(c)))
        for m in c:
            a = [k for k, _ in m.exps if k[0] == "a"]
            if any(k[0] in ("q", "z") for k, _ in m.exps):
                report["forbidden_vars"].append((u, str(m)))
            if any(k not in declared for k in a):
                report["declared_framing"].append((u, str(m)))
            adeg = m.a_degree()
            if th > 0:
                if m.h2 < 0 or m.h2 % 2:
                    report["hbar_exponent"].append((u, str(m)))
                if adeg != 1 or len(a) != 1 or m.sign != 1:
                    report["a_degree"].append((u, str(m)))
            else:
                if adeg != 1 or len(a) != 1:
                    report["a_degree"].append((u, str(m)))
    return report


def is_valid(p: FixedPointData) -> bool:
    return not any(validate_fixed_point(p).values())


# builders -------------------------------------------------------------------

def builder_tstar_grassmannian(k: int, n: int, subset: Sequence[int],
                               theory: QuiverGaugeTheory | None = None) -> FixedPointData:
    """The fixed point of T*Gr(k, n) with V = sum_{j in subset} a_j."""
    subset = list(subset)
    if len(subset) != k or len(set(subset)) != k or not all(1 <= s <= n for s in subset):
        raise FixedPointError(f"need {k} distinct framing slots out of 1..{n}")
    T = theory or single_node(k, n)
    u = T.vertices[0]
    return FixedPointData.make(T, {u: [Monomial.a(u, s) for s in subset]})


def builder_tstar_flag(n: int, word: Sequence[int] | None = None) -> FixedPointData:
    """Fixed point of T*Fl(C^n) with V_i = b_{w(1)} + ... + b_{w(i)}, b the framing variables."""
    word = list(word) if word is not None else list(range(1, n + 1))
    if sorted(word) != list(range(1, n + 1)):
        raise FixedPointError("word must be a permutation of 1..n")
    T = flag_theory(n)
    top = T.vertices[-1]
    return FixedPointData.make(T, {str(i): [Monomial.a(top, word[j]) for j in range(i)]
                                   for i in range(1, n)})


def builder_zero_dim(T: QuiverGaugeTheory) -> FixedPointData:
    """The unique fixed point of a zero-dimensional theory with theta > 0.

    Walks the lowering word (reverse of the greedy raising word) from v = 0,
    applying the reflection rule V_j -> E_j - hbar V_j with
    E_j = W_j + sum_{h(e)=j} V_t(e) + hbar sum_{t(e)=j} V_h(e).
    Every intermediate point must have zero tangent character.  The tangent
    character alone does not pin the point down (on D7 two choices pass it);
    the reflection rule does.
    """
    ctx = WeightContext.from_theory(T)
    rep = extremal_word(ctx)
    if not rep.in_orbit:
        raise FixedPointError("theory is not zero-dimensional in the Weyl orbit sense")
    if not T.positive():
        raise FixedPointError("builder supports theta > 0 only")
    cd = ctx.cartan
    v = [0] * len(T.vertices)
    chars: dict = {u: [] for u in T.vertices}
    hbar = Monomial.h(2)
    for i in reversed(rep.word):
        u = T.vertices[i]
        p = T.w[i] - sum(cd.C[i][j] * v[j] for j in range(len(v)))
        if p <= 0:
            raise FixedPointError("lowering step with nonpositive pairing")
        E = Counter(Monomial.a(u, k) for k in range(1, T.w[i] + 1))
        for t, h in T.arrows:
            if h == u:
                E.update(chars[t])
            if t == u:
                E.update(hbar * m for m in chars[h])
        E.subtract(Counter(hbar * m for m in chars[u]))
        if any(c < 0 for c in E.values()):
            raise FixedPointError(f"vertex {u}: hbar V_j is not contained in E_j")
        v[i] += p
        chars[u] = sorted(E.elements(), key=str)
        sub = QuiverGaugeTheory(T.vertices, T.arrows, v, T.w, T.theta)
        if tangent_character(FixedPointData.make(sub, chars)):
            raise FixedPointError(f"vertex {u}: reflected point has nonzero tangent character")
    return FixedPointData.make(T, chars)


def builder_paper_examples(name: str) -> FixedPointData:
    """Named points: "A3-(2,2)", "Gr(2,2)", "D4", "flag3"."""
    if name == "A3-(2,2)":
        T = a_type([1, 2, 1], [0, 1, 0])
        a = Monomial.a("2", 1)
        h = Monomial.h(2)
        return FixedPointData.make(T, {"1": [a * h], "2": [a, a * h], "3": [a]})
    if name == "Gr(2,2)":
        return builder_tstar_grassmannian(2, 2, [1, 2])
    if name == "D4":
        spec = SlantSumSpec(a_type([1, 2, 1], [0, 1, 0]), "2", single_node(2, 2), "1")
        return slant_sum_fixed_point(spec, builder_paper_examples("A3-(2,2)"), None,
                                     builder_paper_examples("Gr(2,2)"))
    if name == "flag3":
        return builder_tstar_flag(3)
    raise KeyError(name)
