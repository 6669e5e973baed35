"""Odd Jacobi structures and their verification.

An odd Jacobi structure on a chart M is a pair (S, Q) of odd functions on
the cotangent chart, of momentum degree two and one, subject to three
conditions expressed through the canonical Poisson bracket:

    {Q,Q} = 0        {Q,S} = 0        {S,S} + 2QS = 0

The associated odd bracket on functions of M is

    [[f,g]] = (-1)^(f~+1) {{S,f},g} - (-1)^(f~+1) {Q,fg}

which satisfies symmetry, the Jacobi identity, and a Leibniz rule corrected
by the anomaly [[f,1]]gh.  Everything here reports exact polynomial
residuals; a check passes iff its residual is the zero polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .core import (
    Chart,
    EngineError,
    Kind,
    Parity,
    ParityError,
    Poly,
    ShapeError,
    random_poly,
)
from .phase import (
    VectorField,
    apply,
    commutator,
    momentum_name,
    poisson,
    symbol,
    unsymbol,
)


@dataclass
class ConditionResult:
    name: str
    residual: Poly | None
    passed: bool
    detail: str = ""

    def residual_text(self) -> str:
        if self.residual is not None:
            return self.residual.render()
        return self.detail

    def to_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual_text(), "pass": self.passed}


@dataclass
class VerificationReport:
    """Named condition list with exact residuals and an all-pass verdict."""

    structure: str
    conditions: list[ConditionResult] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add_residual(self, name: str, residual: Poly, detail: str = ""):
        self.conditions.append(ConditionResult(name, residual, residual.is_zero(), detail))

    def add_shape(self, message: str):
        self.conditions.append(ConditionResult("shape", None, False, message))

    def add_info(self, name: str, text: str):
        self.conditions.append(ConditionResult(name, None, True, text))

    def extend(self, other: "VerificationReport"):
        self.conditions.extend(other.conditions)

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "conditions": [c.to_dict() for c in self.conditions],
            "verdict": self.verdict,
        }

    def __repr__(self) -> str:
        flag = "pass" if self.verdict else "FAIL"
        return f"VerificationReport({self.structure}: {flag}, {len(self.conditions)} conditions)"


def momentum_degree_is(f: Poly, k: int) -> bool:
    """True when every term of f has exactly k momentum factors (zero passes)."""
    return f.momentum_degrees() <= {k}


@dataclass(frozen=True, eq=False)
class OddJacobiStructure:
    """Pair (S, Qsym) on a cotangent chart; Qsym is the symbol of Q."""

    name: str
    base: Chart
    phase: Chart
    S: Poly
    Qsym: Poly

    @property
    def Q(self) -> VectorField:
        """The homological vector field, recovered from its symbol."""
        return unsymbol(self.Qsym)

    def q_action(self, f: Poly) -> Poly:
        """Q(f) for momentum-free f, computed as {Qsym, f}."""
        return poisson(self.Qsym, f.inject(self.phase)).substitute({}, self.base)

    def shape_errors(self) -> list[str]:
        errs = []
        if not self.S.has_parity(Parity.ODD):
            errs.append(f"S must be odd, got {self.S.parity()}")
        if not self.Qsym.has_parity(Parity.ODD):
            errs.append(f"Q must be odd, got {self.Qsym.parity()}")
        if not momentum_degree_is(self.S, 2):
            errs.append(f"S must have momentum degree 2, got {sorted(self.S.momentum_degrees())}")
        if not momentum_degree_is(self.Qsym, 1):
            errs.append(f"Q must have momentum degree 1, got {sorted(self.Qsym.momentum_degrees())}")
        return errs


def odd_jacobi_structure(S: Poly, Qsym: Poly, name: str = "structure") -> OddJacobiStructure:
    if S.chart != Qsym.chart:
        raise EngineError("S and Q must live on the same cotangent chart")
    phase = S.chart
    if phase.base is None:
        raise EngineError("S must live on a cotangent chart")
    return OddJacobiStructure(name, phase.base, phase, S, Qsym)


def verify_odd_jacobi(J: OddJacobiStructure) -> VerificationReport:
    """Shape check, then the three defining residuals.

    Shape violations are a distinct failure class: they are reported before
    any residual so a parity bug is not mistaken for a false identity.
    """
    rep = VerificationReport(J.name)
    for msg in J.shape_errors():
        rep.add_shape(msg)
    rep.add_residual("homological {Q,Q}", poisson(J.Qsym, J.Qsym))
    rep.add_residual("invariance {Q,S}", poisson(J.Qsym, J.S))
    rep.add_residual("compatibility {S,S}+2QS", poisson(J.S, J.S) + 2 * J.Qsym * J.S)
    return rep


def _to_base(J: OddJacobiStructure, f: Poly) -> Poly:
    if f.chart == J.base:
        return f
    if f.chart == J.phase:
        if not momentum_degree_is(f, 0):
            raise ShapeError("expected a momentum-free function")
        return f.substitute({}, J.base)
    raise EngineError("function lives on a foreign chart")


def odd_jacobi_bracket(J: OddJacobiStructure, f: Poly, g: Poly) -> Poly:
    """[[f,g]] for momentum-free, parity-homogeneous f and g."""
    f = _to_base(J, f)
    g = _to_base(J, g)
    if f.parity() is None or g.parity() is None:
        raise ParityError("odd Jacobi bracket needs parity-homogeneous inputs")
    fl, gl = f.inject(J.phase), g.inject(J.phase)
    sgn = 1 if f.parity() is Parity.ODD else -1  # (-1)^(f~+1)
    out = sgn * (poisson(poisson(J.S, fl), gl) - poisson(J.Qsym, fl * gl))
    return out.substitute({}, J.base)


def s_table(J: OddJacobiStructure) -> dict[tuple[str, str], Poly]:
    """Structure functions S^{AB} with S = 1/2 S^{AB} p_B p_A, graded symmetric."""
    names = [g.name for g in J.base.generators]
    par = {n: J.base.generator(n).parity for n in names}
    tab: dict[tuple[str, str], Poly] = {}
    for A in names:
        dA = J.S.derivative(momentum_name(A))
        for B in names:
            e = (par[B] * (par[A] + par[B] + 1)) & 1  # (-1)^(B~(A~+B~+1))
            sgn = -1 if e else 1
            tab[(A, B)] = sgn * dA.derivative(momentum_name(B)).substitute({}, J.base)
    # the table must rebuild S exactly, else S is not fibre-wise quadratic
    rebuilt = Poly.zero(J.phase)
    for A in names:
        for B in names:
            rebuilt = rebuilt + Fraction(1, 2) * tab[(A, B)].inject(J.phase) * Poly.gen(
                J.phase, momentum_name(B)
            ) * Poly.gen(J.phase, momentum_name(A))
    if rebuilt != J.S:
        raise ShapeError("S is not of the form S^{AB} p_B p_A / 2")
    return tab


def q_table(J: OddJacobiStructure) -> dict[str, Poly]:
    """Components Q^A with Qsym = Q^A p_A."""
    names = [g.name for g in J.base.generators]
    tab = {A: J.Qsym.derivative(momentum_name(A)).substitute({}, J.base) for A in names}
    rebuilt = Poly.zero(J.phase)
    for A in names:
        rebuilt = rebuilt + tab[A].inject(J.phase) * Poly.gen(J.phase, momentum_name(A))
    if rebuilt != J.Qsym:
        raise ShapeError("Q is not of the form Q^A p_A")
    return tab


def hamiltonian_vf(J: OddJacobiStructure, f: Poly, _validation_seed: int = 17) -> VectorField:
    """Hamiltonian vector field of f, built from the component formula

        X_f^A = (-1)^(A~ f~ + 1) S^{AB} df/dx^B + (-1)^(f~) f Q^A

    and validated against the defining action
    X_f(g) = (-1)^(f~) [[f,g]] - Q(f) g; disagreement is a hard error.
    """
    f = _to_base(J, f)
    fp = f.parity()
    if fp is None:
        raise ParityError("hamiltonian field needs a parity-homogeneous function")
    stab, qtab = s_table(J), q_table(J)
    names = [g.name for g in J.base.generators]
    par = {n: J.base.generator(n).parity for n in names}
    comps = {}
    for A in names:
        acc = Poly.zero(J.base)
        for B in names:
            sgn = -1 if not (par[A] and fp) else 1  # (-1)^(A f + 1)
            acc = acc + sgn * stab[(A, B)] * f.derivative(B)
        acc = acc + (-1 if fp else 1) * f * qtab[A]
        comps[A] = acc
    X = VectorField(J.base, comps)
    rng = Random(_validation_seed)
    qf = J.q_action(f)
    probes = [Poly.gen(J.base, n) for n in names]
    probes += [
        random_poly(J.base, names, 2, p, rng) for p in (Parity.EVEN, Parity.ODD)
    ]
    for g in probes:
        if g.is_zero() or g.parity() is None:
            continue
        want = (-1 if fp else 1) * odd_jacobi_bracket(J, f, g) - qf * g
        if apply(X, g) != want:
            raise EngineError(
                "hamiltonian component formula disagrees with the defining action"
            )
    return X


def is_jacobi_vf(J: OddJacobiStructure, X: VectorField) -> VerificationReport:
    """Jacobi vector field check: {chi,S} = 0 and {chi,Q} = 0."""
    chi = symbol(X, J.phase)
    rep = VerificationReport(f"{J.name}:jacobi-field")
    rep.add_residual("field invariance {chi,S}", poisson(chi, J.S))
    rep.add_residual("field invariance {chi,Q}", poisson(chi, J.Qsym))
    return rep


def random_function(chart: Chart, max_degree: int, parity: Parity, seed: int) -> Poly:
    """Seed-deterministic homogeneous function, coefficients in [-9, 9].

    Momentum generators are excluded, so the result is a function of the
    underlying manifold when called on a cotangent chart.
    """
    names = [g.name for g in chart.generators if g.kind is not Kind.MOMENTUM]
    return random_poly(chart, names, max_degree, parity, Random(seed))


def _sample_parities(rng: Random, n: int) -> list[Parity]:
    return [Parity(rng.randint(0, 1)) for _ in range(n)]


def check_theorem_odd_jacobi_algebra(
    J: OddJacobiStructure, samples: int = 100, max_degree: int = 3, seed: int = 0
) -> VerificationReport:
    """Odd Jacobi algebra laws on seeded random homogeneous triples.

    Residual families: symmetry, cyclic Jacobi identity, generalised
    Leibniz rule with the [[f,1]]gh anomaly, and the even-diagonal identity
    [[f,[[f,f]]]] = 0.
    """
    rng = Random(seed)
    names = [g.name for g in J.base.generators]
    fails = {k: Poly.zero(J.base) for k in ("symmetry", "jacobi", "leibniz", "even diagonal")}
    counts = dict.fromkeys(fails, 0)

    def bracket(a, b):
        return odd_jacobi_bracket(J, a, b)

    one = Poly.const(J.base, 1)
    for _ in range(samples):
        pf, pg, ph_ = _sample_parities(rng, 3)
        f = random_poly(J.base, names, max_degree, pf, rng)
        g = random_poly(J.base, names, max_degree, pg, rng)
        h = random_poly(J.base, names, max_degree, ph_, rng)

        sym = bracket(f, g) + (-1 if ((pf + 1) * (pg + 1)) & 1 else 1) * bracket(g, f)
        jac = Poly.zero(J.base)
        parities = {id(f): pf, id(g): pg, id(h): ph_}
        for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
            e = ((parities[id(a)] + 1) * (parities[id(c)] + 1)) & 1
            jac = jac + (-1 if e else 1) * bracket(a, bracket(b, c))
        lei = (
            bracket(f, g * h)
            - bracket(f, g) * h
            - (-1 if ((pf + 1) * pg) & 1 else 1) * g * bracket(f, h)
            + bracket(f, one) * g * h
        )
        feven = f if pf is Parity.EVEN else g if pg is Parity.EVEN else h if ph_ is Parity.EVEN else None
        dia = bracket(feven, bracket(feven, feven)) if feven is not None else Poly.zero(J.base)

        for key, res in (("symmetry", sym), ("jacobi", jac), ("leibniz", lei), ("even diagonal", dia)):
            if res:
                counts[key] += 1
                if fails[key].is_zero():
                    fails[key] = res

    rep = VerificationReport(f"{J.name}:odd-jacobi-algebra[{samples} samples]")
    for key in fails:
        rep.add_residual(key, fails[key], detail=f"{counts[key]} failing samples" if counts[key] else "")
    return rep


def check_derivation_and_morphism(J: OddJacobiStructure, f: Poly, g: Poly) -> VerificationReport:
    """Q-derivation identity and the two Hamiltonian field identities.

        Q([[f,g]]) = [[Q(f),g]] + (-1)^(f~+1) [[f,Q(g)]]
        [Q, X_f]   = -X_{Q(f)}
        [X_f, X_g] = -X_{[[f,g]]}

    Field identities are compared component-wise through their symbols.
    """
    f, g = _to_base(J, f), _to_base(J, g)
    rep = VerificationReport(f"{J.name}:derivation-morphism")
    fp = f.parity()
    qf, qg = J.q_action(f), J.q_action(g)
    der = (
        J.q_action(odd_jacobi_bracket(J, f, g))
        - odd_jacobi_bracket(J, qf, g)
        - (1 if fp else -1) * odd_jacobi_bracket(J, f, qg)
    )
    rep.add_residual("Q derivation over bracket", der)

    Xf = hamiltonian_vf(J, f)
    Xg = hamiltonian_vf(J, g)
    r2 = symbol(commutator(J.Q, Xf), J.phase) + symbol(hamiltonian_vf(J, qf), J.phase)
    rep.add_residual("[Q,X_f]+X_{Q(f)}", r2)
    r3 = symbol(commutator(Xf, Xg), J.phase) + symbol(hamiltonian_vf(J, odd_jacobi_bracket(J, f, g)), J.phase)
    rep.add_residual("[X_f,X_g]+X_{[[f,g]]}", r3)
    return rep


def check_q_closed_hamiltonian(J: OddJacobiStructure, f: Poly) -> VerificationReport:
    """X_f is a Jacobi vector field iff f is Q-closed, checked on this f."""
    f = _to_base(J, f)
    qf = J.q_action(f)
    sub = is_jacobi_vf(J, hamiltonian_vf(J, f))
    rep = VerificationReport(f"{J.name}:q-closed-hamiltonian")
    rep.add_info("Q(f)", qf.render())
    rep.add_info("X_f jacobi", "pass" if sub.verdict else "fail")
    ok = qf.is_zero() == sub.verdict
    rep.conditions.append(
        ConditionResult("biconditional Q(f)=0 <=> X_f jacobi", None, ok, "equivalent" if ok else "not equivalent")
    )
    return rep
