"""Real roots, Weyl words and character generators for the Kac-Moody algebra of a loopless quiver."""
from __future__ import annotations

import random
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .series import TruncatedSeries
from .theory import QuiverGaugeTheory, quiver_variety_dim as _theory_dim

__all__ = ["CartanData", "WeightContext", "RootReport", "reflect", "positive_real_roots",
           "extremal_word", "root_report", "dim_identity_check", "quiver_variety_dim",
           "dual_tangent_character", "gt_character", "convolution_tangent_character",
           "random_orbit_instance", "cross_validate", "OrbitError"]


class OrbitError(ValueError):
    pass


@dataclass(frozen=True)
class CartanData:
    labels: tuple
    C: tuple

    @staticmethod
    def from_theory(T: QuiverGaugeTheory) -> "CartanData":
        return CartanData(T.vertices, tuple(tuple(r) for r in T.cartan()))

    @staticmethod
    def from_arrows(n: int, arrows: Sequence) -> "CartanData":
        labels = [str(i + 1) for i in range(n)]
        T = QuiverGaugeTheory(labels, [(str(t), str(h)) for t, h in arrows])
        return CartanData.from_theory(T)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def form(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Symmetric bilinear form on the root lattice."""
        n = self.rank
        return sum(x[i] * self.C[i][j] * y[j] for i in range(n) for j in range(n))

    def simple(self, i: int) -> tuple:
        return tuple(1 if j == i else 0 for j in range(self.rank))


def reflect(alpha: Sequence[int], i: int, cd: CartanData) -> tuple:
    """s_i alpha = alpha - (sum_j n_j C_ji) alpha_i."""
    c = sum(alpha[j] * cd.C[j][i] for j in range(cd.rank))
    out = list(alpha)
    out[i] -= c
    return tuple(out)


def positive_real_roots(cd: CartanData, H: int) -> set:
    """Positive real roots of height <= H, found by reflecting upward from simple roots."""
    if H < 1:
        raise ValueError("height bound must be at least 1")
    seen = {cd.simple(i) for i in range(cd.rank)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(cd.rank):
                s = reflect(r, i, cd)
                h = sum(s)
                if h > sum(r) and h <= H and s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class WeightContext:
    cartan: CartanData
    v: tuple
    w: tuple

    @staticmethod
    def from_theory(T: QuiverGaugeTheory) -> "WeightContext":
        return WeightContext(CartanData.from_theory(T), tuple(T.v), tuple(T.w))

    def pairings(self) -> tuple:
        """p_i = (alpha_i, mu) = w_i - (C v)_i."""
        C, n = self.cartan.C, self.cartan.rank
        return tuple(self.w[i] - sum(C[i][j] * self.v[j] for j in range(n)) for i in range(n))

    def pairing(self, alpha: Sequence[int]) -> int:
        return sum(a * p for a, p in zip(alpha, self.pairings()))


@dataclass
class RootReport:
    roots: list                      # [(root tuple, pairing)]
    word: list                       # raising word, vertex indices
    in_orbit: bool
    truncated: bool = False
    labels: tuple = ()

    def total(self) -> int:
        return sum(-p for _, p in self.roots)

    def as_set(self) -> set:
        return set(self.roots)

    def describe(self) -> list:
        out = []
        for r, p in self.roots:
            name = " + ".join((f"{c}*" if c != 1 else "") + f"α[{l}]"
                              for c, l in zip(r, self.labels) if c)
            out.append((name, p))
        return out


def extremal_word(ctx: WeightContext) -> RootReport:
    """Greedy raising from mu to lambda by simple reflections.

    Each step reflects at the smallest vertex with negative pairing.  The
    inversion roots beta_t = s_{i_1}...s_{i_{t-1}} alpha_{i_t} are recorded with
    (beta_t, mu), which equals the pairing used at step t.
    """
    cd = ctx.cartan
    n = list(ctx.v)
    p = list(ctx.pairings())
    word, roots = [], []
    cap = sum(ctx.v)
    prefix: list = []
    for _ in range(cap + 1):
        if not any(n):
            return RootReport(roots, word, True, labels=cd.labels)
        i = next((j for j in range(cd.rank) if p[j] < 0), None)
        if i is None or len(word) >= cap:
            break
        pi = p[i]
        beta = cd.simple(i)
        for j in reversed(prefix):
            beta = reflect(beta, j, cd)
        roots.append((beta, pi))
        word.append(i)
        prefix.append(i)
        n[i] += pi
        if n[i] < 0:
            break
        for j in range(cd.rank):
            p[j] -= pi * cd.C[j][i]
    return RootReport(roots, word, False, labels=cd.labels)


def root_report(ctx: WeightContext, H: int | None = None) -> RootReport:
    """Word-derived report in the orbit; otherwise a height-capped enumeration, marked truncated."""
    rep = extremal_word(ctx)
    if rep.in_orbit:
        return rep
    H = H or max(2, 2 * sum(ctx.v))
    warnings.warn(f"mu is not in the Weyl orbit of lambda; roots enumerated up to height {H}")
    roots = sorted((r, ctx.pairing(r)) for r in positive_real_roots(ctx.cartan, H)
                   if ctx.pairing(r) < 0)
    return RootReport(roots, rep.word, False, truncated=True, labels=ctx.cartan.labels)


def cross_validate(ctx: WeightContext, rep: RootReport | None = None) -> bool:
    """Compare word-derived roots with a direct filter of enumerated roots."""
    rep = rep or extremal_word(ctx)
    if not rep.in_orbit:
        return False
    if not rep.roots:
        enumerated = {r for r in positive_real_roots(ctx.cartan, 2) if ctx.pairing(r) < 0}
        return not enumerated
    H = max(sum(r) for r, _ in rep.roots) + 2
    enumerated = Counter((r, ctx.pairing(r)) for r in positive_real_roots(ctx.cartan, H)
                         if ctx.pairing(r) < 0)
    return enumerated == Counter(rep.roots)


def dim_identity_check(ctx: WeightContext, rep: RootReport | None = None) -> bool:
    rep = rep or extremal_word(ctx)
    if not rep.in_orbit:
        raise OrbitError("dimension identity needs mu in the Weyl orbit of lambda")
    return rep.total() == sum(ctx.v)


def quiver_variety_dim(ctx) -> int:
    """(lambda,lambda) - (mu,mu) = sum_i v_i (2 w_i - (C v)_i)."""
    if isinstance(ctx, QuiverGaugeTheory):
        return _theory_dim(ctx)
    C, n = ctx.cartan.C, ctx.cartan.rank
    return sum(ctx.v[i] * (2 * ctx.w[i] - sum(C[i][j] * ctx.v[j] for j in range(n)))
               for i in range(n))


def _neg(r):
    return tuple(-x for x in r)


def dual_tangent_character(ctx: WeightContext) -> list:
    """Terms (hbar^! exponent, root) of sum over alpha in Phi^-_mu, i = 1..<alpha,mu>
    of hbar^(1-i) e^alpha + hbar^i e^-alpha.  Negative roots are the negatives of the report's."""
    rep = extremal_word(ctx)
    if not rep.in_orbit:
        raise OrbitError("tangent character needs mu in the Weyl orbit of lambda")
    out = []
    for beta, p in rep.roots:
        alpha, m = _neg(beta), -p
        for i in range(1, m + 1):
            out.append((1 - i, alpha))
            out.append((i, beta))
    return out


def gt_character(ctx: WeightContext, N: int) -> TruncatedSeries:
    """prod over alpha in Phi^-_mu of (1 - e^alpha)^(-<alpha,mu>), in variables y_i = e^{-alpha_i}."""
    rep = extremal_word(ctx)
    if not rep.in_orbit:
        raise OrbitError("character needs mu in the Weyl orbit of lambda")
    labels = ctx.cartan.labels
    out = TruncatedSeries.one(labels, N)
    for beta, p in rep.roots:
        geom = {}
        k = 0
        while k * sum(beta) <= N:
            geom[tuple(k * x for x in beta)] = 1
            k += 1
        g = TruncatedSeries(labels, N, geom)
        for _ in range(-p):
            out = out * g
    return out


def convolution_tangent_character(components: Sequence[WeightContext]) -> list:
    """Terms (hbar exponent, root) of the convolution formula; the k-th component's
    exponents shift by <alpha, mu_1 + ... + mu_{k-1}>."""
    out = []
    previous: list = []
    for k, ctx in enumerate(components):
        rep = extremal_word(ctx)
        if not rep.in_orbit:
            raise OrbitError(f"component {k + 1} is not in the Weyl orbit of its lambda")
        for beta, p in rep.roots:
            alpha, m = _neg(beta), -p
            shift = sum(c.pairing(alpha) for c in previous)
            for i in range(1, m + 1):
                out.append((1 - i - shift, alpha))
                out.append((i + shift, beta))
        previous.append(ctx)
    return out


def random_orbit_instance(rng: random.Random, max_vertices: int = 6, max_w: int = 4,
                          max_word: int = 8) -> tuple:
    """A random loopless quiver, dominant lambda and Weyl word; v is read off lambda - w(lambda).

    Returns (theory, word applied).
    """
    n = rng.randint(1, max_vertices)
    labels = [str(i + 1) for i in range(n)]
    arrows = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.45:
                arrows.extend([(labels[i], labels[j])] * rng.choice((1, 1, 1, 2)))
    w = [0] * n
    for _ in range(rng.randint(1, max_w)):
        w[rng.randrange(n)] += 1
    cd = CartanData.from_theory(QuiverGaugeTheory(labels, arrows))
    v = [0] * n
    applied = []
    for _ in range(rng.randint(0, max_word)):
        i = rng.randrange(n)
        p = w[i] - sum(cd.C[i][j] * v[j] for j in range(n))
        v[i] += p
        applied.append(i)
    return QuiverGaugeTheory(labels, arrows, v, w), applied
