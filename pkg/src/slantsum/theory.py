"""Quiver gauge theories and the slant sum."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

__all__ = ["QuiverGaugeTheory", "SlantSumSpec", "slant_sum", "dim_additivity_check",
           "msver_exponents", "kahler_root_exponents", "a_type", "single_node", "flag_theory"]


@dataclass(frozen=True)
class QuiverGaugeTheory:
    """A loopless quiver with gauge dimensions v, framing w and per-vertex stability sign."""

    vertices: tuple
    arrows: tuple
    v: tuple
    w: tuple
    theta: tuple

    def __init__(self, vertices: Sequence, arrows: Sequence = (), v=None, w=None, theta=1):
        verts = tuple(str(x) for x in vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("vertex labels must be unique")
        arr = tuple((str(t), str(h)) for t, h in arrows)
        for t, h in arr:
            if t not in verts or h not in verts:
                raise ValueError(f"arrow {t}->{h} uses an unknown vertex")
            if t == h:
                raise ValueError(f"loop at vertex {t} is not allowed")

        def vec(x, name):
            if x is None:
                return (0,) * len(verts)
            if isinstance(x, Mapping):
                x = {str(k): y for k, y in x.items()}
                unknown = set(x) - set(verts)
                if unknown:
                    raise ValueError(f"{name} mentions unknown vertices {sorted(unknown)}")
                x = [x.get(u, 0) for u in verts]
            out = tuple(int(y) for y in x)
            if len(out) != len(verts):
                raise ValueError(f"{name} has wrong length")
            if min(out, default=0) < 0:
                raise ValueError(f"{name} must be nonnegative")
            return out

        if isinstance(theta, int):
            th = (theta,) * len(verts)
        elif isinstance(theta, Mapping):
            theta = {str(k): t for k, t in theta.items()}
            th = tuple(int(theta.get(u, 1)) for u in verts)
        else:
            th = tuple(int(t) for t in theta)
        if any(t not in (1, -1) for t in th) or len(th) != len(verts):
            raise ValueError("theta entries must be +1 or -1")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arr)
        object.__setattr__(self, "v", vec(v, "v"))
        object.__setattr__(self, "w", vec(w, "w"))
        object.__setattr__(self, "theta", th)

    def index(self, label) -> int:
        return self.vertices.index(str(label))

    def vd(self) -> dict:
        return dict(zip(self.vertices, self.v))

    def wd(self) -> dict:
        return dict(zip(self.vertices, self.w))

    def cartan(self) -> list:
        n = len(self.vertices)
        C = [[0] * n for _ in range(n)]
        for i in range(n):
            C[i][i] = 2
        for t, h in self.arrows:
            i, j = self.index(t), self.index(h)
            C[i][j] -= 1
            C[j][i] -= 1
        return C

    def framing_slots(self) -> list:
        return [(u, k) for u, n in zip(self.vertices, self.w) for k in range(1, n + 1)]

    def chern_slots(self) -> list:
        return [(u, k) for u, n in zip(self.vertices, self.v) for k in range(1, n + 1)]

    def positive(self) -> bool:
        return all(t == 1 for t in self.theta)

    def relabel(self, prefix: str) -> "QuiverGaugeTheory":
        f = lambda u: f"{prefix}{u}"
        return QuiverGaugeTheory([f(u) for u in self.vertices],
                                 [(f(t), f(h)) for t, h in self.arrows],
                                 self.v, self.w, self.theta)

    def __str__(self):
        arrows = ", ".join(f"{t}->{h}" for t, h in self.arrows)
        return f"Q0={list(self.vertices)} Q1=[{arrows}] v={list(self.v)} w={list(self.w)}"


@dataclass(frozen=True)
class SlantSumSpec:
    first: QuiverGaugeTheory
    star1: str
    second: QuiverGaugeTheory
    star2: str

    def __post_init__(self):
        object.__setattr__(self, "star1", str(self.star1))
        object.__setattr__(self, "star2", str(self.star2))
        if self.star1 not in self.first.vertices or self.star2 not in self.second.vertices:
            raise ValueError("star vertices must belong to their theories")
        v1 = self.first.vd()[self.star1]
        w2 = self.second.wd()[self.star2]
        if v1 != w2:
            raise ValueError(f"incompatible vertices: v1[{self.star1}]={v1} but w2[{self.star2}]={w2}")

    @property
    def s1(self) -> str:
        return f"1.{self.star1}"

    @property
    def s2(self) -> str:
        return f"2.{self.star2}"


def slant_sum(spec: SlantSumSpec) -> QuiverGaugeTheory:
    """Disjoint union (labels prefixed 1./2.) plus the arrow star1 -> star2; w at star2 drops to 0."""
    t1, t2 = spec.first.relabel("1."), spec.second.relabel("2.")
    w2 = list(t2.w)
    w2[t2.index(spec.s2)] = 0
    return QuiverGaugeTheory(t1.vertices + t2.vertices,
                             t1.arrows + t2.arrows + ((spec.s1, spec.s2),),
                             t1.v + t2.v, t1.w + tuple(w2), t1.theta + t2.theta)


def quiver_variety_dim(T: QuiverGaugeTheory) -> int:
    C = T.cartan()
    n = len(T.v)
    return sum(T.v[i] * (2 * T.w[i] - sum(C[i][j] * T.v[j] for j in range(n))) for i in range(n))


def dim_additivity_check(spec: SlantSumSpec) -> bool:
    return quiver_variety_dim(slant_sum(spec)) == (
        quiver_variety_dim(spec.first) + quiver_variety_dim(spec.second))


def msver_exponents(T: QuiverGaugeTheory) -> tuple:
    """a_i = sum_{h(e)=i} v_t(e) - sum_{t(e)=i} v_h(e) + w_i."""
    vd = T.vd()
    a = dict(T.wd())
    for t, h in T.arrows:
        a[h] += vd[t]
        a[t] -= vd[h]
    return tuple(a[u] for u in T.vertices)


def kahler_root_exponents(T: QuiverGaugeTheory) -> tuple:
    """b_i = v_i - sum_{t(e)=i} v_h(e), so that e^{alpha_i} = z_i kappa^{b_i}."""
    vd = T.vd()
    b = dict(vd)
    for t, h in T.arrows:
        b[t] -= vd[h]
    return tuple(b[u] for u in T.vertices)


def a_type(v: Sequence[int], w: Sequence[int], reverse: bool = False) -> QuiverGaugeTheory:
    """Linear quiver 1 -> 2 -> ... -> n (or the reverse orientation)."""
    n = len(v)
    labels = [str(i + 1) for i in range(n)]
    arrows = [(labels[i + 1], labels[i]) if reverse else (labels[i], labels[i + 1])
              for i in range(n - 1)]
    return QuiverGaugeTheory(labels, arrows, v, w)


def single_node(k: int, n: int) -> QuiverGaugeTheory:
    """T*Gr(k, n) as a one-vertex theory."""
    return QuiverGaugeTheory(["1"], [], [k], [n])


def flag_theory(n: int) -> QuiverGaugeTheory:
    """T*Fl(C^n): v = (1, ..., n-1), framing n at the last vertex, arrows i+1 -> i."""
    return a_type(list(range(1, n)), [0] * (n - 2) + [n], reverse=True)
