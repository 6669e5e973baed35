"""Jacobi algebroids from structure functions.

An algebroid on a bundle E -> M is stored through its structure functions
over the base: anchor components Q_alpha^A, bracket functions
Q^gamma_{beta alpha} (graded antisymmetric in the lower indices), and
cocycle components Q_alpha.  On the cotangent chart of the parity-reversed
dual Pi E* these assemble into the weight minus one pair

    S = (-1)^a~ pi^a Q_a^A p_A  +  (-1)^(a~+b~) 1/2 pi^a pi^b Q^c_{ba} eta_c
    Q = pi^a Q_a

The canonical double-vector-bundle morphism R : T*(Pi E*) -> T*(Pi E) is a
symplectomorphism acting by R*(pi_a) = eta_a, R*(xi^a) = (-1)^a~ pi^a; the
inverse-direction substitution moves (S, Q) to Pi E where undoing the
symbol map produces weight-one quasi-Q data (D, q).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Chart,
    EngineError,
    Generator,
    GeneratorError,
    Kind,
    Parity,
    Poly,
    ShapeError,
    WeightError,
    make_chart,
    parse_parity,
)
from .jacobi import (
    OddJacobiStructure,
    VerificationReport,
    odd_jacobi_structure,
    verify_odd_jacobi,
)
from .constructions import (
    QSData,
    QuasiQData,
    quasiq_to_homological,
    schoutenize,
)
from .phase import (
    VectorField,
    anticotangent_chart,
    canonical_symplectic_form,
    cotangent_chart,
    de_rham,
    fibre_name,
    interior_product,
    momentum_name,
    pullback_to_forms,
    unsymbol,
)


@dataclass(frozen=True)
class Fibre:
    """One bundle direction: its Pi E* and Pi E coordinate names and e-parity."""

    dual_name: str
    pie_name: str
    e_parity: Parity

    @property
    def xi_parity(self) -> Parity:
        return self.e_parity.flip()


@dataclass(frozen=True, eq=False)
class AlgebroidData:
    name: str
    base: Chart
    fibres: tuple[Fibre, ...]
    anchor: dict[tuple[str, str], Poly]      # (fibre dual name, base name) -> Q_a^A
    bracket: dict[tuple[str, str, str], Poly]  # (gamma, beta, alpha) -> Q^g_{ba}
    cocycle: dict[str, Poly]                 # fibre dual name -> Q_a

    def fibre(self, dual_name: str) -> Fibre:
        for f in self.fibres:
            if f.dual_name == dual_name:
                return f
        raise GeneratorError(f"unknown fibre {dual_name!r}")

    def dual_chart(self) -> Chart:
        """Pi E*: base coordinates plus eta fibres of weight +1."""
        etas = tuple(
            Generator(f.dual_name, f.xi_parity, 1, Kind.BASE) for f in self.fibres
        )
        return Chart(self.base.generators + etas)

    def pie_chart(self) -> Chart:
        """Pi E with the dual weight convention: xi fibres of weight +1."""
        xis = tuple(
            Generator(f.pie_name, f.xi_parity, 1, Kind.BASE) for f in self.fibres
        )
        return Chart(self.base.generators + xis)


def algebroid_data(
    name: str,
    base: Chart,
    fibres,
    anchor=None,
    bracket=None,
    cocycle=None,
) -> AlgebroidData:
    """Normalize and validate algebroid structure functions.

    Missing entries default to zero; the bracket table is completed by
    graded antisymmetry Q^g_{ba} = (-1)^(p_a p_b) Q^g_{ab} (p the parity of
    the fibre coordinates) and checked for consistency when both orders are
    supplied.
    """
    fibres = tuple(
        f if isinstance(f, Fibre) else Fibre(f[0], f[1], parse_parity(f[2]))
        for f in fibres
    )
    if any(g.kind is not Kind.BASE for g in base.generators):
        raise ShapeError("algebroid base chart must hold plain coordinates only")
    names = {f.dual_name for f in fibres}
    zero = Poly.zero(base)

    def as_base(p) -> Poly:
        if isinstance(p, Poly):
            if p.chart != base:
                raise EngineError("structure functions must live on the base chart")
            return p
        return Poly.const(base, p)

    anc = {}
    for (a, A), v in (anchor or {}).items():
        if a not in names:
            raise GeneratorError(f"anchor for unknown fibre {a!r}")
        base.index(A)
        anc[(a, A)] = as_base(v)
    coc = {}
    for a, v in (cocycle or {}).items():
        if a not in names:
            raise GeneratorError(f"cocycle for unknown fibre {a!r}")
        coc[a] = as_base(v)

    par = {f.dual_name: f.xi_parity for f in fibres}
    brk: dict[tuple[str, str, str], Poly] = {}
    for (g, b, a), v in (bracket or {}).items():
        for n in (g, b, a):
            if n not in names:
                raise GeneratorError(f"bracket index {n!r} is not a fibre")
        brk[(g, b, a)] = as_base(v)
    for (g, b, a) in list(brk):
        sign = -1 if (par[a] and par[b]) else 1
        mirror = sign * brk[(g, b, a)]
        if (g, a, b) in brk:
            if brk[(g, a, b)] != mirror:
                raise ShapeError(
                    f"bracket functions violate graded antisymmetry at {(g, b, a)}"
                )
        else:
            brk[(g, a, b)] = mirror
    brk = {k: v for k, v in brk.items() if v}
    anc = {k: v for k, v in anc.items() if v}
    coc = {k: v for k, v in coc.items() if v}
    return AlgebroidData(name, base, fibres, anc, brk, coc)


def build_jacobi_algebroid(d: AlgebroidData) -> OddJacobiStructure:
    """Assemble (S, Q) on T*(Pi E*) and audit the weight minus one grading."""
    phase = cotangent_chart(d.dual_chart())
    S = Poly.zero(phase)
    Q = Poly.zero(phase)
    for fa in d.fibres:
        sa = -1 if fa.e_parity else 1
        pia = Poly.gen(phase, momentum_name(fa.dual_name))
        for gb in d.base.generators:
            v = d.anchor.get((fa.dual_name, gb.name))
            if v:
                S = S + sa * pia * v.inject(phase) * Poly.gen(phase, momentum_name(gb.name))
        v = d.cocycle.get(fa.dual_name)
        if v:
            Q = Q + pia * v.inject(phase)
        for fb in d.fibres:
            sab = -1 if (fa.e_parity + fb.e_parity) & 1 else 1
            pib = Poly.gen(phase, momentum_name(fb.dual_name))
            for fg in d.fibres:
                v = d.bracket.get((fg.dual_name, fb.dual_name, fa.dual_name))
                if v:
                    S = S + sab * Fraction(1, 2) * pia * pib * v.inject(phase) * Poly.gen(
                        phase, fg.dual_name
                    )
    for label, poly in (("S", S), ("Q", Q)):
        if poly and poly.weight() != -1:
            raise WeightError(f"{label} fails the weight audit: weight {poly.weight()}")
    return OddJacobiStructure(d.name, phase.base, phase, S, Q)


def r_inverse_binding(d: AlgebroidData) -> tuple[dict[str, Poly], Chart]:
    """(R^-1)* substitution: functions on T*(Pi E*) -> functions on T*(Pi E)."""
    pie_phase = cotangent_chart(d.pie_chart())
    binding = {}
    for f in d.fibres:
        sgn = -1 if f.e_parity else 1
        binding[f.dual_name] = Poly.gen(pie_phase, momentum_name(f.pie_name))
        binding[momentum_name(f.dual_name)] = sgn * Poly.gen(pie_phase, f.pie_name)
    return binding, pie_phase


def r_binding(d: AlgebroidData) -> tuple[dict[str, Poly], Chart]:
    """R* substitution: functions on T*(Pi E) -> functions on T*(Pi E*)."""
    dual_phase = cotangent_chart(d.dual_chart())
    binding = {}
    for f in d.fibres:
        sgn = -1 if f.e_parity else 1
        binding[f.pie_name] = sgn * Poly.gen(dual_phase, momentum_name(f.dual_name))
        binding[momentum_name(f.pie_name)] = Poly.gen(dual_phase, f.dual_name)
    return binding, dual_phase


def r_pullback(d: AlgebroidData, F: Poly) -> Poly:
    """Move a function across R, in the (R^-1)* direction used for S -> S^."""
    binding, pie_phase = r_inverse_binding(d)
    if F.chart != cotangent_chart(d.dual_chart()):
        raise EngineError("r_pullback expects a function on T*(Pi E*)")
    return F.substitute(binding, pie_phase)


def verify_symplectomorphism(base_dim: int, fibre_dim: int, name: str | None = None) -> VerificationReport:
    """R* of the canonical symplectic form on T*(Pi E) equals the one on T*(Pi E*)."""
    base = make_chart([(f"x{i+1}", Parity.EVEN, 0) for i in range(base_dim)])
    fibres = [(f"eta{j+1}", f"xi{j+1}", Parity.EVEN) for j in range(fibre_dim)]
    d = algebroid_data(name or f"R({base_dim}|{fibre_dim})", base, fibres)
    dual_phase = cotangent_chart(d.dual_chart())
    pie_phase = cotangent_chart(d.pie_chart())
    omega_dual = canonical_symplectic_form(dual_phase)
    omega_pie = canonical_symplectic_form(pie_phase)
    binding, _ = r_binding(d)
    lifted = pullback_to_forms(binding, pie_phase, dual_phase)
    pulled = omega_pie.substitute(lifted, anticotangent_chart(dual_phase))
    rep = VerificationReport(d.name)
    rep.add_residual("R* omega - omega", pulled - omega_dual)
    return rep


def extract_quasiq(d: AlgebroidData, require_verified: bool = True) -> QuasiQData:
    """Quasi-Q data on Pi E: D = unsymbol((R^-1)* S), q = -(R^-1)* Q.

    The extra minus sign on the curving function is part of the construction.
    """
    J = build_jacobi_algebroid(d)
    if require_verified and not verify_odd_jacobi(J).verdict:
        raise EngineError(f"algebroid {d.name!r} does not verify as a Jacobi algebroid")
    s_hat = r_pullback(d, J.S)
    q_hat = r_pullback(d, J.Qsym)
    D = unsymbol(s_hat)
    q = (-q_hat).substitute({}, d.pie_chart())
    return QuasiQData(f"{d.name}:quasiq", d.pie_chart(), D, q)


def lie_algebroid_from_jacobi(
    d: AlgebroidData, require_verified: bool = True
) -> tuple[VectorField, Poly]:
    """Homological field and cocycle on Pi E, via the replacement display

        Q = xi^a Q_a^A d/dx^A
          + 1/2 (xi^a xi^b Q^g_{ba} + (-1)^a~ 2 xi^a Q_a xi^g) d/dxi^g
        phi = (-1)^(a~+1) xi^a Q_a

    checked to agree exactly with quasiq_to_homological(extract_quasiq(d)).
    """
    pie = d.pie_chart()
    comps: dict[str, Poly] = {}
    for gb in d.base.generators:
        acc = Poly.zero(pie)
        for fa in d.fibres:
            v = d.anchor.get((fa.dual_name, gb.name))
            if v:
                acc = acc + Poly.gen(pie, fa.pie_name) * v.inject(pie)
        comps[gb.name] = acc
    for fg in d.fibres:
        acc = Poly.zero(pie)
        for fa in d.fibres:
            for fb in d.fibres:
                v = d.bracket.get((fg.dual_name, fb.dual_name, fa.dual_name))
                if v:
                    acc = acc + Fraction(1, 2) * Poly.gen(pie, fa.pie_name) * Poly.gen(
                        pie, fb.pie_name
                    ) * v.inject(pie)
            v = d.cocycle.get(fa.dual_name)
            if v:
                sgn = -1 if fa.e_parity else 1
                acc = acc + sgn * Poly.gen(pie, fa.pie_name) * v.inject(pie) * Poly.gen(
                    pie, fg.pie_name
                )
        comps[fg.pie_name] = acc
    Q = VectorField(pie, comps)
    phi = Poly.zero(pie)
    for fa in d.fibres:
        v = d.cocycle.get(fa.dual_name)
        if v:
            sgn = 1 if fa.e_parity else -1
            phi = phi + sgn * Poly.gen(pie, fa.pie_name) * v.inject(pie)

    Q2, phi2 = quasiq_to_homological(extract_quasiq(d, require_verified), require_verified)
    if Q != Q2 or phi != phi2:
        raise EngineError("replacement display disagrees with the quasi-Q conversion")
    return Q, phi


def extend_lie_algebroid_data(
    d: AlgebroidData, tau: str = "tau", tau_pie: str = "eta"
) -> AlgebroidData:
    """Extend the fibres by an odd direction carrying the canonical cocycle.

    The new structure functions add Q^a_{a,tau} = (-1)^a~ (completed by
    antisymmetry) and the cocycle Q_tau = -1, so the built S gains the term
    P[tau] pi^a eta_a and Q becomes -P[tau].
    """
    if d.cocycle:
        raise EngineError("extension expects a Lie algebroid (zero cocycle)")
    if tau in d.dual_chart() or tau_pie in d.pie_chart():
        raise GeneratorError("extension fibre name collides with the chart")
    fibres = d.fibres + (Fibre(tau, tau_pie, Parity.EVEN),)
    bracket = dict(d.bracket)
    for fa in d.fibres:
        sgn = -1 if fa.e_parity else 1
        bracket[(fa.dual_name, fa.dual_name, tau)] = Poly.const(d.base, sgn)
    cocycle = {tau: Poly.const(d.base, -1)}
    return algebroid_data(f"{d.name}:extended", d.base, fibres, dict(d.anchor), bracket, cocycle)


def extend_lie_to_jacobi(
    d: AlgebroidData, tau: str = "tau", tau_pie: str = "eta", require_verified: bool = True
) -> OddJacobiStructure:
    """Jacobi algebroid on Pi E* x R^(0|1) built from a Lie algebroid."""
    if require_verified and not verify_odd_jacobi(build_jacobi_algebroid(d)).verdict:
        raise EngineError(f"{d.name!r} does not verify as a Lie algebroid")
    return build_jacobi_algebroid(extend_lie_algebroid_data(d, tau, tau_pie))


def schoutenize_algebroid(d: AlgebroidData, t_name: str = "t") -> QSData:
    """Schoutenization of the built structure; the result stays weight -1."""
    J = build_jacobi_algebroid(d)
    qs = schoutenize(J, t_name)
    if qs.Sbar and qs.Sbar.weight() != -1:
        raise WeightError(f"schoutenized structure has weight {qs.Sbar.weight()}")
    return qs


def tables_from_field(pie: Chart, fibres: tuple[Fibre, ...], X: VectorField):
    """Read anchor and bracket functions off a weight-one field on Pi E."""
    base_names = [g.name for g in pie.generators if all(g.name != f.pie_name for f in fibres)]
    anchor: dict[tuple[str, str], Poly] = {}
    bracket: dict[tuple[str, str, str], Poly] = {}
    base = Chart(tuple(pie.generator(n) for n in base_names))
    for A in base_names:
        comp = X.component(A)
        for fa in fibres:
            v = comp.derivative(fa.pie_name)
            if v:
                anchor[(fa.dual_name, A)] = v.substitute({}, base)
    for fg in fibres:
        comp = X.component(fg.pie_name)
        for fa in fibres:
            da = comp.derivative(fa.pie_name)
            for fb in fibres:
                v = da.derivative(fb.pie_name)
                if v:
                    bracket[(fg.dual_name, fb.dual_name, fa.dual_name)] = v.substitute({}, base)
    return anchor, bracket


def algebroid_from_homological(
    d: AlgebroidData, Q: VectorField, name: str | None = None
) -> AlgebroidData:
    """Repackage a homological field on Pi E as algebroid data (zero cocycle)."""
    anchor, bracket = tables_from_field(d.pie_chart(), d.fibres, Q)
    out = algebroid_data(name or f"{d.name}:lie", d.base, d.fibres, anchor, bracket, {})
    rebuilt, _ = _field_from_tables(out)
    if rebuilt != Q:
        raise ShapeError("field is not of algebroid form")
    return out


def _field_from_tables(d: AlgebroidData) -> tuple[VectorField, Poly]:
    pie = d.pie_chart()
    comps: dict[str, Poly] = {}
    for gb in d.base.generators:
        acc = Poly.zero(pie)
        for fa in d.fibres:
            v = d.anchor.get((fa.dual_name, gb.name))
            if v:
                acc = acc + Poly.gen(pie, fa.pie_name) * v.inject(pie)
        comps[gb.name] = acc
    for fg in d.fibres:
        acc = Poly.zero(pie)
        for fa in d.fibres:
            for fb in d.fibres:
                v = d.bracket.get((fg.dual_name, fb.dual_name, fa.dual_name))
                if v:
                    acc = acc + Fraction(1, 2) * Poly.gen(pie, fa.pie_name) * Poly.gen(
                        pie, fb.pie_name
                    ) * v.inject(pie)
        comps[fg.pie_name] = acc
    D = VectorField(pie, comps)
    q = Poly.zero(pie)
    for fa in d.fibres:
        v = d.cocycle.get(fa.dual_name)
        if v:
            sgn = -1 if fa.e_parity else 1
            q = q - sgn * Poly.gen(pie, fa.pie_name) * v.inject(pie)
    return D, q


def section_report(d: AlgebroidData) -> str:
    """Section brackets and anchors read off the homological field on Pi E.

    Signs here are engine-derived from the stored index convention; they are
    presentation only and nothing downstream consumes them.
    """
    Q, phi = lie_algebroid_from_jacobi(d, require_verified=False)
    anchor, bracket = tables_from_field(d.pie_chart(), d.fibres, Q)
    lines = [f"algebroid {d.name}: sections s_[{', '.join(f.dual_name for f in d.fibres)}]"]
    for fa in d.fibres:
        terms = [
            f"({v.render()}) d/d{A}"
            for (n, A), v in sorted(anchor.items())
            if n == fa.dual_name
        ]
        lines.append(f"  a(s_{fa.dual_name}) = " + (" + ".join(terms) if terms else "0"))
    for i, fa in enumerate(d.fibres):
        for fb in d.fibres[i:]:
            terms = [
                f"({v.render()}) s_{g}"
                for (g, b, a), v in sorted(bracket.items())
                if (b, a) == (fb.dual_name, fa.dual_name)
            ]
            lines.append(
                f"  [s_{fb.dual_name}, s_{fa.dual_name}] = " + (" + ".join(terms) if terms else "0")
            )
    lines.append(f"  cocycle phi = {phi.render()}")
    return "\n".join(lines)


def odd_contact_chart(n: int) -> Chart:
    decls = [(f"x{i+1}", Parity.EVEN, 0) for i in range(n)]
    decls += [(f"xs{i+1}", Parity.ODD, 1) for i in range(n)]
    decls += [("tau", Parity.ODD, 1)]
    return make_chart(decls)


def odd_contact_structure(n: int = 1) -> OddJacobiStructure:
    """The canonical structure on Pi T*R^n x R^(0|1): S = p*^a (p_a + x*_a pi)."""
    phase = cotangent_chart(odd_contact_chart(n))
    S = Poly.zero(phase)
    for i in range(1, n + 1):
        S = S + Poly.gen(phase, momentum_name(f"xs{i}")) * (
            Poly.gen(phase, momentum_name(f"x{i}"))
            + Poly.gen(phase, f"xs{i}") * Poly.gen(phase, momentum_name("tau"))
        )
    Qsym = -Poly.gen(phase, momentum_name("tau"))
    return odd_jacobi_structure(S, Qsym, name=f"odd_contact({n})")


def contact_check(n: int) -> VerificationReport:
    """Contact-form identities for the structure above.

    With alpha = d[tau] - xs_a d[x_a] and the fibre morphism
    phi_S: d[x^a] -> dS/dp_a, d[xs_a] -> -dS/dp*^a, d[tau] -> -dS/dpi,
    checks phi*(alpha) = 0, phi*(d alpha) = S, i_Q alpha = 1, i_Q d alpha = 0,
    and the explicit form d alpha = -d[xs_a] d[x_a].
    """
    if n < 1:
        raise EngineError("contact check needs n >= 1")
    J = odd_contact_structure(n)
    base = J.base
    anticot = anticotangent_chart(base)
    alpha = Poly.gen(anticot, fibre_name("tau"))
    for i in range(1, n + 1):
        alpha = alpha - Poly.gen(anticot, f"xs{i}") * Poly.gen(anticot, fibre_name(f"x{i}"))
    dalpha = de_rham(alpha)
    explicit = Poly.zero(anticot)
    for i in range(1, n + 1):
        explicit = explicit - Poly.gen(anticot, fibre_name(f"xs{i}")) * Poly.gen(
            anticot, fibre_name(f"x{i}")
        )
    binding: dict[str, Poly] = {}
    for i in range(1, n + 1):
        binding[fibre_name(f"x{i}")] = J.S.derivative(momentum_name(f"x{i}"))
        binding[fibre_name(f"xs{i}")] = -J.S.derivative(momentum_name(f"xs{i}"))
    binding[fibre_name("tau")] = -J.S.derivative(momentum_name("tau"))
    rep = VerificationReport(J.name + ":contact")
    rep.add_residual("pullback phi*(alpha)", alpha.substitute(binding, J.phase))
    rep.add_residual("pullback phi*(d alpha) - S", dalpha.substitute(binding, J.phase) - J.S)
    Qf = J.Q
    rep.add_residual("i_Q alpha - 1", interior_product(Qf, alpha) - Poly.const(anticot, 1))
    rep.add_residual("i_Q d alpha", interior_product(Qf, dalpha))
    rep.add_residual("d alpha + d[xs]d[x]", dalpha - explicit)
    return rep


# -- plain data file ingestion ---------------------------------------------


def poly_from_monomial_map(chart: Chart, mapping: dict) -> Poly:
    """{"x1^2*x2": "3/2", "1": "-1"} -> exact polynomial on the chart."""
    out = Poly.zero(chart)
    for key, val in mapping.items():
        coeff = Fraction(str(val))
        term = Poly.const(chart, coeff)
        key = key.strip()
        if key not in ("", "1"):
            for atom in key.split("*"):
                if "^" in atom:
                    name, e = atom.split("^", 1)
                    term = term * (Poly.gen(chart, name.strip()) ** int(e))
                else:
                    term = term * Poly.gen(chart, atom.strip())
        out = out + term
    return out


def algebroid_from_json(data: dict | str) -> AlgebroidData:
    """Plain data format: base declarations, fibre table, then coefficient
    maps (rationals per monomial) for anchor, bracket and cocycle.

        {"name": "...", "base": [["x1", "even", 0]],
         "fibres": [["eta1", "xi1", "even"]],
         "anchor": {"eta1": {"x1": {"1": "1"}}},
         "bracket": {"eta1": {"eta1,eta2": {"x1": "2"}}},
         "cocycle": {"eta1": {"1": "-1"}}}
    """
    if isinstance(data, str):
        data = json.loads(data)
    base = make_chart([(d[0], d[1], int(d[2]) if len(d) > 2 else 0) for d in data["base"]])
    fibres = [(f[0], f[1], f[2]) for f in data["fibres"]]
    anchor = {}
    for a, per_base in data.get("anchor", {}).items():
        for A, mono_map in per_base.items():
            anchor[(a, A)] = poly_from_monomial_map(base, mono_map)
    bracket = {}
    for g, per_pair in data.get("bracket", {}).items():
        for pair, mono_map in per_pair.items():
            b, a = (s.strip() for s in pair.split(","))
            bracket[(g, b, a)] = poly_from_monomial_map(base, mono_map)
    cocycle = {
        a: poly_from_monomial_map(base, mono_map)
        for a, mono_map in data.get("cocycle", {}).items()
    }
    return algebroid_data(data.get("name", "algebroid"), base, fibres, anchor, bracket, cocycle)
