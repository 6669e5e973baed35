"""Phase-space machinery over graded charts.

Cotangent and anticotangent chart builders, the canonical Poisson bracket
on a cotangent chart, vector fields and their momentum symbols, Lie
derivatives through the bracket, the weight-counting Euler field, and the
de Rham differential on anticotangent charts.

All vector-field semantics route through symbols and the Poisson bracket;
component formulas elsewhere in the package are cross-checked against this
single source of sign conventions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import (
    Chart,
    ChartError,
    Generator,
    GeneratorError,
    Kind,
    Monomial,
    ParityError,
    Parity,
    Poly,
    Provenance,
    ShapeError,
)


def momentum_name(name: str) -> str:
    return f"P[{name}]"


def fibre_name(name: str) -> str:
    return f"d[{name}]"


def _demote(g: Generator) -> Generator:
    """Pre-existing structure becomes plain coordinates of the new total space."""
    if g.kind is Kind.BASE:
        return g
    return Generator(g.name, g.parity, g.weight, Kind.BASE, None)


def cotangent_chart(base: Chart) -> Chart:
    """Append one momentum P[z] per generator: same parity, opposite weight.

    Momenta and fibres of earlier extensions turn into ordinary coordinates
    of the new base, so only the outermost level pairs conjugates.
    """
    if base.provenance is Provenance.COTANGENT:
        raise ChartError("chart already carries momenta")
    copied = tuple(_demote(g) for g in base.generators)
    momenta = tuple(
        Generator(momentum_name(g.name), g.parity, -g.weight, Kind.MOMENTUM, g.name)
        for g in base.generators
    )
    return Chart(copied + momenta, Provenance.COTANGENT, base)


def anticotangent_chart(base: Chart, weights: Mapping[str, int] | None = None) -> Chart:
    """Append one parity-flipped fibre d[z] per generator.

    The fibre weight defaults to the weight of z (the de Rham convention);
    callers may override per generator.
    """
    weights = weights or {}
    copied = tuple(_demote(g) for g in base.generators)
    fibres = tuple(
        Generator(
            fibre_name(g.name),
            g.parity.flip(),
            weights.get(g.name, g.weight),
            Kind.FIBRE,
            g.name,
        )
        for g in base.generators
    )
    return Chart(copied + fibres, Provenance.ANTICOTANGENT, base)


def _require_cotangent(chart: Chart) -> Chart:
    if chart.provenance is not Provenance.COTANGENT or chart.base is None:
        raise ChartError("operation needs a cotangent chart")
    return chart.base


def poisson(F: Poly, G: Poly) -> Poly:
    """Canonical Poisson bracket on a cotangent chart.

    {F,G} = (-1)^(A~ F~ + A~) dF/dp_A dG/dx^A - (-1)^(A~ F~) dF/dx^A dG/dp_A
    summed over conjugate pairs (x^A, p_A).  The signs involve only the
    parity of F, so a parity-mixed F is split and recombined linearly.
    """
    if F.chart != G.chart:
        raise ChartError("bracket arguments live on different charts")
    _require_cotangent(F.chart)
    fp = F.parity()
    if fp is None:
        even, odd = F.parity_parts()
        return poisson(even, G) + poisson(odd, G)
    out = Poly.zero(F.chart)
    for z, p in F.chart.momentum_pairs():
        a = z.parity
        s1 = -1 if (a and (fp + 1) & 1) else 1  # (-1)^(a(f+1))
        s2 = -1 if (a and fp) else 1            # (-1)^(a f)
        dFp = F.derivative(p.name)
        if dFp:
            out = out + s1 * (dFp * G.derivative(z.name))
        dFx = F.derivative(z.name)
        if dFx:
            out = out - s2 * (dFx * G.derivative(p.name))
    return out


@dataclass(frozen=True, eq=False)
class VectorField:
    """First-order derivation with Poly components, one per generator.

    Components are momentum-free and of uniform total parity
    parity(component) + parity(z); construction fails otherwise.
    """

    chart: Chart
    components: Mapping[str, Poly]

    def __post_init__(self):
        comps = {}
        parities = set()
        for name, c in self.components.items():
            g = self.chart.generator(name)
            if c.chart != self.chart:
                raise ChartError(f"component for {name!r} lives off-chart")
            if c.is_zero():
                continue
            if any(d for d in c.momentum_degrees() if d):
                raise ShapeError("vector-field components must be momentum-free")
            cp = c.parity()
            if cp is None:
                raise ParityError(f"component for {name!r} has mixed parity")
            parities.add(Parity((cp + g.parity) & 1))
            comps[name] = c
        if len(parities) > 1:
            raise ParityError("vector-field components have non-uniform parity")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "_parity", parities.pop() if parities else None)

    @property
    def parity(self) -> Parity | None:
        """None for the zero field (which acts as either parity)."""
        return self._parity

    def has_parity(self, p: Parity) -> bool:
        return self._parity is None or self._parity is p

    def is_zero(self) -> bool:
        return not self.components

    def component(self, name: str) -> Poly:
        return self.components.get(name, Poly.zero(self.chart))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and dict(self.components) == dict(other.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.chart != other.chart:
            raise ChartError("vector fields live on different charts")
        names = set(self.components) | set(other.components)
        return VectorField(self.chart, {n: self.component(n) + other.component(n) for n in names})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)

    def scale(self, f: Poly | int | Fraction) -> "VectorField":
        """Left multiplication by a function (or scalar)."""
        return VectorField(self.chart, {n: f * c for n, c in self.components.items()})

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __repr__(self) -> str:
        if not self.components:
            return "VectorField(0)"
        bits = ", ".join(f"d/d{n}: {c.render()}" for n, c in sorted(self.components.items()))
        return f"VectorField({bits})"


def zero_field(chart: Chart) -> VectorField:
    return VectorField(chart, {})


def symbol(X: VectorField, phase: Chart | None = None) -> Poly:
    """Momentum symbol sum(X^A P[A]), ordered component-then-momentum."""
    phase = phase or cotangent_chart(X.chart)
    out = Poly.zero(phase)
    for name, c in X.components.items():
        out = out + c.inject(phase) * Poly.gen(phase, momentum_name(name))
    return out


def unsymbol(chi: Poly) -> VectorField:
    """Inverse of the symbol map, defined on momentum-degree exactly 1."""
    base = _require_cotangent(chi.chart)
    gens = chi.chart.generators
    comps: dict[str, dict] = {}
    for m, c in chi.terms.items():
        moms = [(pos, i, e) for pos, (i, e) in enumerate(m.factors) if gens[i].kind is Kind.MOMENTUM]
        if len(moms) != 1 or moms[0][2] != 1:
            raise ShapeError("symbol must have momentum degree exactly 1")
        pos, i, _ = moms[0]
        rest = m.factors[:pos] + m.factors[pos + 1 :]
        comps.setdefault(gens[i].of, {})[Monomial(rest, m.tags)] = c
    base_comps = {}
    for name, terms in comps.items():
        base_comps[name] = Poly(chi.chart, terms).substitute({}, base)
    return VectorField(base, base_comps)


def apply(X: VectorField, f: Poly) -> Poly:
    """Action of the field through its symbol: X(f) = {symbol(X), f}."""
    if f.chart != X.chart:
        raise ChartError("function lives off the field's chart")
    if any(d for d in f.momentum_degrees() if d):
        raise ShapeError("apply expects a momentum-free function")
    phase = cotangent_chart(X.chart)
    res = poisson(symbol(X, phase), f.inject(phase))
    return res.substitute({}, X.chart)


def derivation_action(X: VectorField, f: Poly) -> Poly:
    """First-order action sum(X^z df/dz) with left derivatives.

    Equal to apply(X, f) wherever the cotangent of the chart exists (the
    Poisson formula collapses to exactly this sum); used where a second
    cotangent level would collide with derived momentum names.
    """
    if f.chart != X.chart:
        raise ChartError("function lives off the field's chart")
    out = Poly.zero(X.chart)
    for name, c in X.components.items():
        out = out + c * f.derivative(name)
    return out


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    """Graded commutator [X,Y], computed as unsymbol({symbol X, symbol Y})."""
    if X.chart != Y.chart:
        raise ChartError("vector fields live on different charts")
    phase = cotangent_chart(X.chart)
    return unsymbol(poisson(symbol(X, phase), symbol(Y, phase)))


def euler_field(chart: Chart) -> VectorField:
    """Weight-counting field sum(w(z) z d/dz) over nonzero-weight generators."""
    comps = {
        g.name: g.weight * Poly.gen(chart, g.name)
        for g in chart.generators
        if g.weight
    }
    return VectorField(chart, comps)


def field_weight(X: VectorField) -> int | None:
    """Common value of weight(component) - weight(z); None if inhomogeneous."""
    ws = set()
    for name, c in X.components.items():
        w = c.weight()
        if w is None:
            return None
        ws.add(w - X.chart.generator(name).weight)
    if not ws:
        return 0
    if len(ws) > 1:
        return None
    return ws.pop()


def de_rham_field(chart: Chart) -> VectorField:
    """The differential d = d[z] d/dz on an anticotangent chart."""
    if chart.provenance is not Provenance.ANTICOTANGENT:
        raise ChartError("de Rham differential needs an anticotangent chart")
    comps = {
        g.of: Poly.gen(chart, g.name)
        for g in chart.generators
        if g.kind is Kind.FIBRE
    }
    return VectorField(chart, comps)


def de_rham(f: Poly) -> Poly:
    return apply(de_rham_field(f.chart), f)


def interior_product(X: VectorField, form: Poly) -> Poly:
    """Contraction i_X on functions of an anticotangent chart.

    For X = X^A d/dx^A the contraction is the vertical field
    (-1)^(X~) X^A d/d(dx^A); on even fields this is the classical i_X.
    """
    anticot = form.chart
    if anticot.provenance is not Provenance.ANTICOTANGENT or anticot.base != X.chart:
        raise ChartError("form must live on the anticotangent chart of the field")
    sign = -1 if X.parity else 1
    comps = {fibre_name(n): sign * c.inject(anticot) for n, c in X.components.items()}
    return apply(VectorField(anticot, comps), form)


def lie_derivative(X: VectorField, F: Poly) -> Poly:
    """L_X on phase-space functions: {symbol(X), F} on the cotangent chart."""
    phase = F.chart
    _require_cotangent(phase)
    return poisson(symbol(X, phase), F)


def canonical_symplectic_form(phase: Chart) -> Poly:
    """sum of d[p_A] d[x^A] over conjugate pairs, on anticot(phase)."""
    _require_cotangent(phase)
    anticot = anticotangent_chart(phase)
    out = Poly.zero(anticot)
    for z, p in phase.momentum_pairs():
        out = out + Poly.gen(anticot, fibre_name(p.name)) * Poly.gen(anticot, fibre_name(z.name))
    return out


def pullback_to_forms(binding: Mapping[str, Poly], source: Chart, target: Chart) -> dict[str, Poly]:
    """Extend a chart morphism to anticotangent charts: d[z] -> d(image of z).

    ``binding`` sends source generators to polynomials on ``target``;
    unbound names map identically.  The returned binding acts on
    anticotangent(source) with values on anticotangent(target).
    """
    anticot_t = anticotangent_chart(target)
    d = de_rham_field(anticot_t)
    out: dict[str, Poly] = {}
    for g in source.generators:
        img = binding.get(g.name, Poly.gen(target, g.name) if g.name in target else None)
        if img is None:
            raise GeneratorError(f"no image for generator {g.name!r}")
        lifted = img.inject(anticot_t)
        out[g.name] = lifted
        out[fibre_name(g.name)] = derivation_action(d, lifted)
    return out
