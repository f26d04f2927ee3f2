"""Exact scalars: monomials in q^(1/2), hbar^(1/2), framing and Kahler variables,
seeded rational sample points, and q-Pochhammer symbols.

Exponents of q and hbar are stored doubled, so ``Monomial.q(1)`` is q^(1/2)
internally represented by the integer 1 and ``Monomial.q(2)`` is q.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "SchemaError", "UsageError", "PoleError", "NonTruncatingError",
    "Monomial", "VarTable", "SamplePoint", "Scalar",
    "eval_monomial", "pochhammer", "poch_factor", "PochData",
]


class SchemaError(ValueError):
    """Input refers to something that was never declared."""


class UsageError(ValueError):
    """An operation was called outside its domain."""


class PoleError(ArithmeticError):
    """An exact zero showed up in a denominator."""

    def __init__(self, msg, where=None):
        super().__init__(msg)
        self.where = where


class NonTruncatingError(UsageError):
    """A series expansion was requested that would never terminate."""


# variable keys: ("q",) ("h",) ("a", vertex, slot) ("z", vertex)
Q = ("q",)
H = ("h",)


def akey(vertex: str, slot: int) -> tuple:
    return ("a", str(vertex), int(slot))


def zkey(vertex: str) -> tuple:
    return ("z", str(vertex))


@dataclass(frozen=True)
class Monomial:
    """sign * prod var^exp, canonical: sorted keys, zero exponents dropped."""

    exps: tuple = ()
    sign: int = 1

    @staticmethod
    def make(exps: Mapping | Iterable = (), sign: int = 1) -> "Monomial":
        if isinstance(exps, Mapping):
            items = exps.items()
        else:
            items = exps
        acc: dict = {}
        for k, e in items:
            acc[k] = acc.get(k, 0) + int(e)
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return Monomial(tuple(sorted((k, e) for k, e in acc.items() if e)), sign)

    # convenient constructors; q and h take doubled exponents
    @staticmethod
    def one() -> "Monomial":
        return Monomial()

    @staticmethod
    def q(e2: int = 2) -> "Monomial":
        return Monomial.make({Q: e2})

    @staticmethod
    def h(e2: int = 2) -> "Monomial":
        return Monomial.make({H: e2})

    @staticmethod
    def kappa(n: int = 1) -> "Monomial":
        return Monomial.make({Q: 2 * n, H: -2 * n})

    @staticmethod
    def a(vertex, slot: int = 1, e: int = 1) -> "Monomial":
        return Monomial.make({akey(vertex, slot): e})

    @staticmethod
    def z(vertex, e: int = 1) -> "Monomial":
        return Monomial.make({zkey(vertex): e})

    @staticmethod
    def minus() -> "Monomial":
        return Monomial((), -1)

    def as_dict(self) -> dict:
        return dict(self.exps)

    def exp(self, key) -> int:
        for k, e in self.exps:
            if k == key:
                return e
        return 0

    @property
    def q2(self) -> int:
        return self.exp(Q)

    @property
    def h2(self) -> int:
        return self.exp(H)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        d = dict(self.exps)
        for k, e in other.exps:
            d[k] = d.get(k, 0) + e
        return Monomial(tuple(sorted((k, e) for k, e in d.items() if e)),
                        self.sign * other.sign)

    def __pow__(self, n: int) -> "Monomial":
        n = int(n)
        return Monomial(tuple((k, e * n) for k, e in self.exps if e * n),
                        self.sign if n % 2 else 1)

    def inverse(self) -> "Monomial":
        return self ** -1

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def __neg__(self) -> "Monomial":
        return Monomial(self.exps, -self.sign)

    def is_one(self) -> bool:
        return not self.exps and self.sign == 1

    def z_part(self) -> "Monomial":
        return Monomial(tuple(p for p in self.exps if p[0][0] == "z"))

    def scalar_part(self) -> "Monomial":
        return Monomial(tuple(p for p in self.exps if p[0][0] != "z"), self.sign)

    def z_degree(self) -> int:
        return sum(e for k, e in self.exps if k[0] == "z")

    def a_part(self) -> "Monomial":
        return Monomial(tuple(p for p in self.exps if p[0][0] == "a"))

    def a_degree(self) -> int:
        return sum(e for k, e in self.exps if k[0] == "a")

    def rename(self, fn) -> "Monomial":
        """Apply fn to every key (used for namespacing vertex labels)."""
        return Monomial.make([(fn(k), e) for k, e in self.exps], self.sign)

    def substitute(self, key, value: "Monomial") -> "Monomial":
        e = self.exp(key)
        if not e:
            return self
        rest = Monomial(tuple(p for p in self.exps if p[0] != key), self.sign)
        return rest * value ** e

    def __str__(self) -> str:
        return format_monomial(self)


def _half(e2: int) -> str:
    return str(e2 // 2) if e2 % 2 == 0 else f"{e2}/2"


def format_monomial(m: Monomial, kappa: bool = False) -> str:
    """Readable form.  With kappa=True, q^a hbar^b prints as kappa^a hbar^(a+b)."""
    d = m.as_dict()
    parts = []
    q2, h2 = d.pop(Q, 0), d.pop(H, 0)
    if kappa and q2:
        parts.append("κ" if q2 == 2 else f"κ^{_half(q2)}")
        q2, h2 = 0, h2 + q2
    if q2:
        parts.append("q" if q2 == 2 else f"q^{_half(q2)}")
    if h2:
        parts.append("ħ" if h2 == 2 else f"ħ^{_half(h2)}")
    for k in sorted(d):
        e = d[k]
        name = f"a[{k[1]},{k[2]}]" if k[0] == "a" else f"z[{k[1]}]"
        parts.append(name if e == 1 else f"{name}^{e}")
    body = "*".join(parts) if parts else "1"
    return ("-" + body) if m.sign < 0 else body


class VarTable:
    """Declared variables: framing slots (vertex, k) and Kahler vertices."""

    def __init__(self, framing: Iterable = (), kahler: Iterable = ()):
        self.framing = tuple(dict.fromkeys((str(j), int(k)) for j, k in framing))
        self.kahler = tuple(dict.fromkeys(str(v) for v in kahler))
        self._keys = {Q, H} | {akey(j, k) for j, k in self.framing} | {
            zkey(v) for v in self.kahler}

    def declares(self, key) -> bool:
        return key in self._keys

    def check(self, m: Monomial) -> None:
        for k, _ in m.exps:
            if k not in self._keys:
                raise SchemaError(f"undeclared variable {k!r}")


def _prime_pool(n: int) -> list[int]:
    out, c = [], 2
    while len(out) < n:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


_PRIMES = _prime_pool(120)[1:]   # odd primes only


@dataclass(frozen=True)
class SamplePoint:
    """Exact rational values for q^(1/2), hbar^(1/2) and framing variables.

    Values are p/r with p, r drawn without repetition from a seeded shuffle of
    odd primes, so distinct monomials of moderate degree take distinct values.
    """

    seed: int
    qh: Fraction
    hh: Fraction
    a: Mapping = field(default_factory=dict)
    q_equals_hbar: bool = False

    @staticmethod
    def from_seed(seed: int, framing: Iterable = (), q_equals_hbar: bool = False) -> "SamplePoint":
        rng = random.Random(seed)
        pool = list(_PRIMES)
        rng.shuffle(pool)
        it = iter(pool)

        def draw() -> Fraction:
            p, r = next(it), next(it)
            return Fraction(p, r)

        qh = draw()
        hh = qh if q_equals_hbar else draw()
        a = {}
        for j, k in sorted(set((str(j), int(k)) for j, k in framing)):
            a[(j, k)] = draw()
        return SamplePoint(seed, qh, hh, a, q_equals_hbar)

    def with_framing(self, values: Mapping) -> "SamplePoint":
        a = dict(self.a)
        a.update({(str(j), int(k)): Fraction(v) for (j, k), v in values.items()})
        return SamplePoint(self.seed, self.qh, self.hh, a, self.q_equals_hbar)

    def extend(self, framing: Iterable) -> "SamplePoint":
        """Add values for framing slots not yet assigned, without touching others."""
        missing = sorted(set((str(j), int(k)) for j, k in framing) - set(self.a))
        if not missing:
            return self
        rng = random.Random(self.seed * 7919 + len(self.a))
        used = {x for v in self.a.values() for x in (v.numerator, v.denominator)}
        used |= {self.qh.numerator, self.qh.denominator, self.hh.numerator, self.hh.denominator}
        pool = [p for p in _PRIMES if p not in used]
        rng.shuffle(pool)
        a = dict(self.a)
        for i, key in enumerate(missing):
            a[key] = Fraction(pool[2 * i], pool[2 * i + 1])
        return SamplePoint(self.seed, self.qh, self.hh, a, self.q_equals_hbar)

    @property
    def q(self) -> Fraction:
        return self.qh ** 2

    @property
    def hbar(self) -> Fraction:
        return self.hh ** 2

    def value(self, m: Monomial) -> Fraction:
        """Value of a monomial without z-exponents; raises on undeclared or z keys."""
        out = Fraction(m.sign)
        for k, e in m.exps:
            tag = k[0]
            if tag == "q":
                out *= self.qh ** e
            elif tag == "h":
                out *= self.hh ** e
            elif tag == "a":
                try:
                    out *= self.a[(k[1], k[2])] ** e
                except KeyError:
                    raise SchemaError(f"no value for framing variable a[{k[1]},{k[2]}]") from None
            elif tag == "z":
                raise UsageError("z variables stay formal and cannot be evaluated")
            else:
                raise SchemaError(f"unknown variable {k!r}")
        return out


@dataclass(frozen=True)
class Scalar:
    """Exact rational with a sticky pole flag."""

    value: Fraction = Fraction(0)
    pole: bool = False

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __mul__(self, other):
        o = other if isinstance(other, Scalar) else Scalar(other)
        return Scalar(self.value * o.value, self.pole or o.pole)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, Scalar) else Scalar(other)
        if o.value == 0:
            return Scalar(Fraction(0), True)
        return Scalar(self.value / o.value, self.pole or o.pole)

    def __add__(self, other):
        o = other if isinstance(other, Scalar) else Scalar(other)
        return Scalar(self.value + o.value, self.pole or o.pole)

    __radd__ = __add__

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.value == other.value and self.pole == other.pole
        return not self.pole and self.value == other

    def __hash__(self):
        return hash((self.value, self.pole))

    def __repr__(self):
        return f"Scalar({self.value}{', pole' if self.pole else ''})"


def eval_monomial(m: Monomial, s: SamplePoint, table: VarTable | None = None) -> Scalar:
    if table is not None:
        table.check(m)
    if m.z_degree() or any(k[0] == "z" for k, _ in m.exps):
        raise UsageError("monomial has z-exponents; Kahler variables stay formal")
    return Scalar(s.value(m))


def pochhammer(x, k: int, q) -> Scalar:
    """(x; q)_k, extended to k < 0 as prod_{i=1}^{-k} 1/(1 - x q^-i)."""
    x = x if isinstance(x, Scalar) else Scalar(x)
    q = Fraction(q)
    out = Fraction(1)
    pole = x.pole
    if k >= 0:
        for i in range(k):
            out *= 1 - x.value * q ** i
    else:
        for i in range(1, -k + 1):
            f = 1 - x.value * q ** -i
            if f == 0:
                pole = True
            else:
                out /= f
    return Scalar(out, pole)


@dataclass(frozen=True)
class PochData:
    """A Pochhammer symbol in factored form.

    value: product of the factors that do not vanish identically.
    zeros / poles: factors 1 - m with m == 1 as a monomial, in numerator / denominator.
    korder: net count of factors 1 - kappa^j (j != 0), which vanish only at q = hbar;
    at q = hbar their limit ratio j is folded into value instead.
    accidental: a denominator factor vanished at the sample but not identically.
    """

    value: Fraction
    zeros: int = 0
    poles: int = 0
    korder: int = 0
    accidental: bool = False


def poch_factor(x: Monomial, k: int, s: SamplePoint) -> PochData:
    """(x; q)_k with x a monomial, tracking identically vanishing factors."""
    if k == 0:
        return PochData(Fraction(1))
    sgn = 1 if k > 0 else -1
    rng = range(k) if k > 0 else range(-1, k - 1, -1)
    value = Fraction(1)
    zeros = korder = 0
    accidental = False
    base = x.scalar_part()
    if x.z_degree():
        raise UsageError("Pochhammer argument must not contain z")
    rest_a = bool(base.a_part().exps)
    for i in rng:
        q2 = base.q2 + 2 * i
        h2 = base.h2
        if not rest_a and base.sign == 1 and q2 == 0 and h2 == 0:
            zeros += 1
            continue
        if s.q_equals_hbar and not rest_a and base.sign == 1 and q2 + h2 == 0:
            # 1 - kappa^j -> (1 - kappa) * j near q = hbar
            korder += sgn
            j = q2 // 2 if q2 % 2 == 0 else Fraction(q2, 2)
            value *= j if sgn > 0 else Fraction(1) / j
            continue
        f = 1 - s.value(base) * s.qh ** (2 * i)
        if f == 0:
            if sgn < 0:
                accidental = True
            else:
                value = Fraction(0)
            continue
        value = value * f if sgn > 0 else value / f
    if sgn > 0:
        return PochData(value, zeros, 0, korder, accidental)
    return PochData(value, 0, zeros, korder, accidental)
