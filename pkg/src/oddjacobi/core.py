"""Exact arithmetic in Z2-graded, Z-weighted polynomial algebras.

Values are sparse polynomials with rational coefficients in the coordinates
of a Chart: an ordered list of named generators, each carrying a Grassmann
parity and an integer weight.  Odd generators anticommute and square to
zero; reordering factors into chart declaration order fixes a unique
canonical form for every monomial, with Koszul signs picked up from odd
transpositions.  Formal exponentials exp(r*t) of even coordinates are
carried as per-monomial tags that multiply by adding rates, so the algebra
stays closed and exact.

Charts and polynomials are immutable values; every operation is pure.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterable, Iterator, Mapping

Rat = int | Fraction


class EngineError(Exception):
    """Base class for all engine failures."""


class ChartError(EngineError):
    pass


class GeneratorError(EngineError):
    pass


class ParityError(EngineError):
    pass


class ShapeError(EngineError):
    pass


class WeightError(EngineError):
    pass


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def flip(self) -> "Parity":
        return Parity(1 - self.value)

    def __str__(self) -> str:
        return "even" if self is Parity.EVEN else "odd"


def parse_parity(p: "Parity | str | int") -> Parity:
    if isinstance(p, Parity):
        return p
    if isinstance(p, str):
        try:
            return Parity[p.upper()]
        except KeyError:
            raise ParityError(f"unknown parity {p!r}") from None
    return Parity(p & 1)


class Kind(enum.Enum):
    BASE = "base"
    MOMENTUM = "momentum"
    FIBRE = "fibre"


@dataclass(frozen=True)
class Generator:
    """One named coordinate symbol with parity, weight and conjugacy links.

    ``of`` names the underlying base generator for momentum and fibre
    kinds (the momentum conjugate to x, or the anticotangent fibre dx).
    """

    name: str
    parity: Parity
    weight: int = 0
    kind: Kind = Kind.BASE
    of: str | None = None


class Provenance(enum.Enum):
    PLAIN = "plain"
    COTANGENT = "cotangent"
    ANTICOTANGENT = "anticotangent"
    PRODUCT = "product"


@dataclass(frozen=True)
class Chart:
    """An ordered generator context; order fixes the canonical monomial order."""

    generators: tuple[Generator, ...]
    provenance: Provenance = Provenance.PLAIN
    base: "Chart | None" = None

    def __post_init__(self):
        seen = {}
        for i, g in enumerate(self.generators):
            if g.name in seen:
                raise GeneratorError(f"duplicate generator name {g.name!r}")
            seen[g.name] = i
        object.__setattr__(self, "_index", seen)

    def __repr__(self) -> str:
        return "Chart(" + ", ".join(g.name for g in self.generators) + ")"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GeneratorError(f"generator {name!r} not in chart") from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def non_momentum(self) -> tuple[Generator, ...]:
        return tuple(g for g in self.generators if g.kind is not Kind.MOMENTUM)

    def momentum_pairs(self) -> tuple[tuple[Generator, Generator], ...]:
        """Conjugate pairs (z, p_z), in declaration order of z."""
        pairs = []
        for g in self.generators:
            if g.kind is Kind.MOMENTUM:
                pairs.append((self.generator(g.of), g))
        return tuple(pairs)

    def extend(self, decls, provenance: Provenance = Provenance.PRODUCT) -> "Chart":
        """Product-style extension by fresh generators."""
        extra = _make_generators(decls)
        for g in extra:
            if g.name in self:
                raise GeneratorError(f"generator {g.name!r} already in chart")
        return Chart(self.generators + extra, provenance, self)


def _make_generators(decls) -> tuple[Generator, ...]:
    gens = []
    for d in decls:
        if isinstance(d, Generator):
            gens.append(d)
            continue
        name, parity = d[0], parse_parity(d[1])
        weight = int(d[2]) if len(d) > 2 else 0
        gens.append(Generator(name, parity, weight))
    return tuple(gens)


def make_chart(decls: Iterable) -> Chart:
    """Build a plain chart from (name, parity[, weight]) declarations."""
    return Chart(_make_generators(decls))


class Monomial:
    """Canonical monomial: factors (gen index, exponent) strictly increasing,

    plus exponential tags (base gen index, rate) with nonzero rates.
    """

    __slots__ = ("factors", "tags")

    def __init__(self, factors=(), tags=()):
        self.factors = tuple(factors)
        self.tags = tuple(tags)

    def __eq__(self, other) -> bool:
        return self.factors == other.factors and self.tags == other.tags

    def __hash__(self) -> int:
        return hash((self.factors, self.tags))

    def __repr__(self) -> str:
        return f"Monomial({self.factors}, {self.tags})"

    def sort_key(self):
        return (self.factors, self.tags)

    def degree(self) -> int:
        return sum(e for _, e in self.factors)


_ONE = Monomial()


def _mul_monomials(chart: Chart, m1: Monomial, m2: Monomial):
    """Merge two canonical monomials; returns (monomial, sign) or None if zero."""
    gens = chart.generators
    odd1 = [i for i, _ in m1.factors if gens[i].parity]
    crossings = 0
    for j, _ in m2.factors:
        if gens[j].parity:
            # odd factor of m2 moves left past every odd factor of m1 above it
            crossings += len(odd1) - bisect_right(odd1, j)
    merged: dict[int, int] = dict(m1.factors)
    for j, e in m2.factors:
        tot = merged.get(j, 0) + e
        if gens[j].parity and tot > 1:
            return None
        merged[j] = tot
    tags: dict[int, Fraction] = dict(m1.tags)
    for j, r in m2.tags:
        r2 = tags.get(j, Fraction(0)) + r
        if r2:
            tags[j] = r2
        else:
            del tags[j]
    mono = Monomial(tuple(sorted(merged.items())), tuple(sorted(tags.items())))
    return mono, (-1 if crossings & 1 else 1)


class Poly:
    """Canonical-form graded polynomial with exact rational coefficients.

    The term map never stores zero coefficients, so two equal values have
    identical term maps and equality is syntactic.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[Monomial, Fraction] | None = None):
        self.chart = chart
        self.terms: dict[Monomial, Fraction] = dict(terms) if terms else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls(chart)

    @classmethod
    def const(cls, chart: Chart, c: Rat) -> "Poly":
        c = Fraction(c)
        return cls(chart, {_ONE: c} if c else {})

    @classmethod
    def gen(cls, chart: Chart, name: str) -> "Poly":
        i = chart.index(name)
        return cls(chart, {Monomial(((i, 1),)): Fraction(1)})

    @classmethod
    def exp_tag(cls, chart: Chart, name: str, rate: Rat) -> "Poly":
        """The formal exponential exp(rate * name); name must be even."""
        g = chart.generator(name)
        if g.parity is not Parity.EVEN:
            raise ParityError(f"exp tag base {name!r} must be even")
        rate = Fraction(rate)
        if not rate:
            return cls.const(chart, 1)
        i = chart.index(name)
        return cls(chart, {Monomial((), ((i, rate),)): Fraction(1)})

    @classmethod
    def monomial(cls, chart: Chart, factors: Iterable[tuple[str, int]], coeff: Rat = 1) -> "Poly":
        out = cls.const(chart, coeff)
        for name, e in factors:
            out = out * (cls.gen(chart, name) ** e)
        return out

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.chart, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, tuple(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def monomial_parity(self, m: Monomial) -> Parity:
        gens = self.chart.generators
        return Parity(sum(gens[i].parity * e for i, e in m.factors) & 1)

    def monomial_weight(self, m: Monomial) -> int:
        gens = self.chart.generators
        return sum(gens[i].weight * e for i, e in m.factors)

    def parity(self) -> Parity | None:
        """Common parity of the terms, None if mixed; zero counts as even."""
        ps = {self.monomial_parity(m) for m in self.terms}
        if not ps:
            return Parity.EVEN
        if len(ps) > 1:
            return None
        return ps.pop()

    def weight(self) -> int | None:
        """Common weight of the terms, None if inhomogeneous; zero counts as 0."""
        ws = {self.monomial_weight(m) for m in self.terms}
        if not ws:
            return 0
        if len(ws) > 1:
            return None
        return ws.pop()

    def has_parity(self, p: Parity) -> bool:
        return self.is_zero() or self.parity() is p

    def parity_parts(self) -> tuple["Poly", "Poly"]:
        even, odd = {}, {}
        for m, c in self.terms.items():
            (odd if self.monomial_parity(m) else even)[m] = c
        return Poly(self.chart, even), Poly(self.chart, odd)

    def momentum_degrees(self) -> set[int]:
        gens = self.chart.generators
        out = set()
        for m in self.terms:
            out.add(sum(e for i, e in m.factors if gens[i].kind is Kind.MOMENTUM))
        return out

    def max_degree(self) -> int:
        return max((m.degree() for m in self.terms), default=0)

    # -- arithmetic --------------------------------------------------------

    def _check_chart(self, other: "Poly"):
        if self.chart != other.chart:
            raise ChartError("polynomials live on different charts")

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.chart, other)
        self._check_chart(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly(self.chart, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.chart, other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.chart)
            return Poly(self.chart, {m: k * c for m, k in self.terms.items()})
        self._check_chart(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                hit = _mul_monomials(self.chart, m1, m2)
                if hit is None:
                    continue
                mono, sign = hit
                s = terms.get(mono, Fraction(0)) + c1 * c2 * sign
                if s:
                    terms[mono] = s
                else:
                    terms.pop(mono, None)
        return Poly(self.chart, terms)

    def __rmul__(self, other) -> "Poly":
        # scalars commute with everything
        return self * other

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.chart, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self, name: str) -> "Poly":
        """Left derivative with respect to a generator.

        Each monomial contributes sign (-1)^(z~ * parity of the factors left
        of z) times the exponent; an exp tag exp(r*z) contributes an extra
        r times the untouched monomial.
        """
        idx = self.chart.index(name)
        gz = self.chart.generators[idx]
        gens = self.chart.generators
        terms: dict[Monomial, Fraction] = {}

        def put(m: Monomial, c: Fraction):
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)

        for m, c in self.terms.items():
            for pos, (i, e) in enumerate(m.factors):
                if i != idx:
                    continue
                sign = 1
                if gz.parity:
                    left = sum(gens[k].parity * ek for k, ek in m.factors[:pos]) & 1
                    sign = -1 if left else 1
                rest = list(m.factors)
                if e == 1:
                    del rest[pos]
                else:
                    rest[pos] = (i, e - 1)
                put(Monomial(tuple(rest), m.tags), c * e * sign)
            for i, rate in m.tags:
                if i == idx:
                    put(m, c * rate)
        return Poly(self.chart, terms)

    def substitute(self, binding: Mapping[str, "Poly"], target: Chart | None = None) -> "Poly":
        """Algebra morphism sending each bound generator to a same-parity Poly.

        Unbound generators map to the same-named generator of the target
        chart (the chart of the binding values, defaulting to this chart).
        Tagged exponential bases cannot be rebound.
        """
        for v in binding.values():
            if target is None:
                target = v.chart
            elif v.chart != target:
                raise ChartError("binding values live on different charts")
        if target is None:
            target = self.chart
        for name, v in binding.items():
            g = self.chart.generator(name)
            if not v.has_parity(g.parity):
                raise ParityError(f"binding for {name!r} must have parity {g.parity}")
        images: dict[str, Poly] = {}

        def image(name: str) -> Poly:
            if name not in images:
                if name in binding:
                    images[name] = binding[name]
                else:
                    g = self.chart.generator(name)
                    if name not in target:
                        raise GeneratorError(f"generator {name!r} missing from target chart")
                    if target.generator(name).parity is not g.parity:
                        raise ParityError(f"generator {name!r} changes parity across charts")
                    images[name] = Poly.gen(target, name)
            return images[name]

        out = Poly.zero(target)
        gens = self.chart.generators
        for m, c in self.terms.items():
            acc = Poly.const(target, c)
            for i, rate in m.tags:
                base = gens[i].name
                if base in binding:
                    raise GeneratorError(f"cannot substitute tagged exponential base {base!r}")
                acc = acc * Poly.exp_tag(target, base, rate)
            for i, e in m.factors:
                acc = acc * (image(gens[i].name) ** e)
            out = out + acc
        return out

    def inject(self, target: Chart) -> "Poly":
        """Reinterpret on a larger chart containing the same generator names."""
        return self.substitute({}, target)

    # -- rendering ---------------------------------------------------------

    def _mono_atoms(self, m: Monomial, expand_powers: bool) -> list[str]:
        gens = self.chart.generators
        items: list[tuple[int, int, str]] = []
        for i, rate in m.tags:
            items.append((i, 0, f"exp({_coeff_str(rate)}*{gens[i].name})"))
        for i, e in m.factors:
            name = gens[i].name
            if e == 1:
                items.append((i, 1, name))
            elif expand_powers:
                items.append((i, 1, "*".join([name] * e)))
            else:
                items.append((i, 1, f"{name}^{e}"))
        return [s for _, _, s in sorted(items, key=lambda t: (t[0], t[1]))]

    def render(self, expand_powers: bool = False) -> str:
        """Canonical text form; the bit-exact golden-file format."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(self._mono_atoms(m, expand_powers))
            mag = _coeff_str(abs(c))
            body = f"{mag}*{mono}" if mono else mag
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def to_dsl(self) -> str:
        """Rendering restricted to expression syntax (powers expanded)."""
        return self.render(expand_powers=True)

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- module-level operation surface ---------------------------------------


def multiply(f: Poly, g: Poly) -> Poly:
    return f * g


def left_derivative(f: Poly, z: str | Generator) -> Poly:
    return f.derivative(z.name if isinstance(z, Generator) else z)


def parity_of(f: Poly) -> Parity | None:
    return f.parity()


def weight_of(f: Poly) -> int | None:
    return f.weight()


def substitute(f: Poly, binding: Mapping[str, Poly], target: Chart | None = None) -> Poly:
    return f.substitute(binding, target)


def exp_of(chart: Chart, name: str, rate: Rat) -> Poly:
    return Poly.exp_tag(chart, name, rate)


def enumerate_monomials(chart: Chart, names: Iterable[str], max_degree: int) -> Iterator[Monomial]:
    """All canonical monomials in the given generators, total degree bound."""
    idxs = sorted(chart.index(n) for n in names)
    gens = chart.generators

    def rec(pos: int, budget: int, acc: list[tuple[int, int]]):
        if pos == len(idxs):
            yield Monomial(tuple(acc))
            return
        i = idxs[pos]
        top = 1 if gens[i].parity else budget
        for e in range(0, top + 1):
            if e:
                acc.append((i, e))
            yield from rec(pos + 1, budget - e, acc)
            if e:
                acc.pop()

    yield from rec(0, max_degree, [])


def random_poly(
    chart: Chart,
    names: Iterable[str],
    max_degree: int,
    parity: Parity | None,
    rng: Random,
    density: float = 0.6,
) -> Poly:
    """Deterministic random polynomial with coefficients in [-9, 9]."""
    terms: dict[Monomial, Fraction] = {}
    zero = Poly.zero(chart)
    for m in enumerate_monomials(chart, names, max_degree):
        if parity is not None and zero.monomial_parity(m) is not parity:
            continue
        if rng.random() > density:
            continue
        c = rng.randint(-9, 9)
        if c:
            terms[m] = Fraction(c)
    return Poly(chart, terms)
