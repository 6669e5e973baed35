"""Structure-producing constructions.

Schoutenization extends an odd Jacobi chart by an even coordinate t and
forms Sbar = exp(-t)(S - Q p), yielding a QS pair; exact QS data (a QS
pair with a homothety field scaling both by -1) is converted back into a
pencil of odd Jacobi structures a*Sbar + b*E*Qbar on the same chart; and
quasi Q-manifolds (an odd field D with D^2 = qD, D[q] = 0) convert to and
from homological fields with an odd 1-cocycle at weight one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Chart,
    EngineError,
    GeneratorError,
    Parity,
    ParityError,
    Poly,
    Rat,
    WeightError,
)
from .jacobi import (
    OddJacobiStructure,
    VerificationReport,
    momentum_degree_is,
    odd_jacobi_structure,
    verify_odd_jacobi,
)
from .phase import (
    VectorField,
    apply,
    commutator,
    cotangent_chart,
    euler_field,
    field_weight,
    momentum_name,
    poisson,
    symbol,
)


@dataclass(frozen=True, eq=False)
class QSData:
    """Almost Schouten structure and homological symbol on a cotangent chart."""

    name: str
    phase: Chart
    Sbar: Poly
    Qbar: Poly


@dataclass(frozen=True, eq=False)
class ExactQSData:
    """QS data with an even homothety field scaling Sbar and Qbar by -1."""

    qs: QSData
    homothety: VectorField

    @property
    def name(self) -> str:
        return self.qs.name


@dataclass(frozen=True, eq=False)
class QuasiQData:
    """Odd field D and odd curving function q with D^2 = qD and D[q] = 0."""

    name: str
    chart: Chart
    D: VectorField
    q: Poly


def verify_qs(d: QSData) -> VerificationReport:
    rep = VerificationReport(d.name)
    if not d.Sbar.has_parity(Parity.ODD):
        rep.add_shape(f"Sbar must be odd, got {d.Sbar.parity()}")
    if not momentum_degree_is(d.Sbar, 2):
        rep.add_shape(f"Sbar must have momentum degree 2, got {sorted(d.Sbar.momentum_degrees())}")
    if not d.Qbar.has_parity(Parity.ODD):
        rep.add_shape(f"Qbar must be odd, got {d.Qbar.parity()}")
    if not momentum_degree_is(d.Qbar, 1):
        rep.add_shape(f"Qbar must have momentum degree 1, got {sorted(d.Qbar.momentum_degrees())}")
    rep.add_residual("schouten {S,S}", poisson(d.Sbar, d.Sbar))
    rep.add_residual("invariance {Q,S}", poisson(d.Qbar, d.Sbar))
    rep.add_residual("homological {Q,Q}", poisson(d.Qbar, d.Qbar))
    return rep


def schoutenize(
    J: OddJacobiStructure, t_name: str = "t", require_verified: bool = True
) -> QSData:
    """Extend by an even coordinate and form Sbar = exp(-t)(S - Q p).

    The extension coordinate name is reserved; a collision is an error
    (rename via ``t_name``).
    """
    if require_verified and not verify_odd_jacobi(J).verdict:
        raise EngineError(f"structure {J.name!r} is not a verified odd Jacobi structure")
    if t_name in J.base:
        raise GeneratorError(f"extension coordinate {t_name!r} collides with the chart")
    base2 = J.base.extend([(t_name, Parity.EVEN, 0)])
    phase2 = cotangent_chart(base2)
    S2 = J.S.inject(phase2)
    Q2 = J.Qsym.inject(phase2)
    p = Poly.gen(phase2, momentum_name(t_name))
    Sbar = Poly.exp_tag(phase2, t_name, -1) * (S2 - Q2 * p)
    return QSData(f"{J.name}:schoutenized", phase2, Sbar, Q2)


def verify_exact_qs(d: ExactQSData) -> VerificationReport:
    """QS residuals plus the homothety conditions {E,S}+S and {E,Q}+Q."""
    rep = verify_qs(d.qs)
    rep.structure = d.name
    if not d.homothety.has_parity(Parity.EVEN):
        rep.add_shape("homothety field must be even")
    cal_e = symbol(d.homothety, d.qs.phase)
    rep.add_residual("homothety {E,S}+S", poisson(cal_e, d.qs.Sbar) + d.qs.Sbar)
    rep.add_residual("homothety {E,Q}+Q", poisson(cal_e, d.qs.Qbar) + d.qs.Qbar)
    return rep


def exact_qs_to_jacobi(
    d: ExactQSData, a: Rat, b: Rat, require_verified: bool = True
) -> OddJacobiStructure:
    """Pencil member (a Sbar + b E Qbar, b Qbar) as an odd Jacobi structure."""
    if require_verified and not verify_exact_qs(d).verdict:
        raise EngineError(f"{d.name!r} is not a verified exact QS structure")
    a, b = Fraction(a), Fraction(b)
    cal_e = symbol(d.homothety, d.qs.phase)
    S = a * d.qs.Sbar + b * cal_e * d.qs.Qbar
    Qsym = b * d.qs.Qbar
    return odd_jacobi_structure(S, Qsym, name=f"{d.name}:pencil({a},{b})")


def verify_quasi_q(d: QuasiQData) -> VerificationReport:
    """Residuals symbol([D,D]/2) - q symbol(D) and D[q]."""
    rep = VerificationReport(d.name)
    if not d.D.has_parity(Parity.ODD):
        rep.add_shape("D must be an odd vector field")
    qp = d.q.parity()
    if not d.q.has_parity(Parity.ODD):
        rep.add_shape(f"q must be odd, got {qp}")
    phase = cotangent_chart(d.chart)
    chi = symbol(d.D, phase)
    rep.add_residual(
        "almost homological [D,D]/2-qD",
        Fraction(1, 2) * poisson(chi, chi) - d.q.inject(phase) * chi,
    )
    rep.add_residual("curving closed D[q]", apply(d.D, d.q))
    return rep


def quasiq_to_homological(
    d: QuasiQData, require_verified: bool = True
) -> tuple[VectorField, Poly]:
    """Split weight-one quasi-Q data into a homological field and a 1-cocycle.

        Q = D - q Xi        phi = q

    with Xi the weight-counting Euler field.  Requires D and q homogeneous
    of weight one; returns (Q, phi) with [Q,Q] = 0 and Q(phi) = 0.
    """
    if require_verified and not verify_quasi_q(d).verdict:
        raise EngineError(f"{d.name!r} is not verified quasi-Q data")
    if not (d.D.is_zero() or field_weight(d.D) == 1):
        raise WeightError("D must be weight-homogeneous of weight 1")
    if not (d.q.is_zero() or d.q.weight() == 1):
        raise WeightError("q must be weight-homogeneous of weight 1")
    xi = euler_field(d.chart)
    Q = d.D - xi.scale(d.q)
    phi = d.q
    if not commutator(Q, Q).is_zero():
        raise EngineError("converted field is not homological")
    if not apply(Q, phi).is_zero():
        raise EngineError("curving function is not a cocycle for the converted field")
    if not (Q.is_zero() or field_weight(Q) == 1):
        raise WeightError("converted field is not of weight 1")
    return Q, phi


def homological_plus_cocycle_to_quasiq(
    Q: VectorField, phi: Poly, name: str = "quasiq"
) -> QuasiQData:
    """Curve a homological field by an odd weight-one cocycle.

        D = Q + phi Xi      q = phi

    Round-trips with quasiq_to_homological on weight-one data.
    """
    if phi.chart != Q.chart:
        raise EngineError("cocycle lives off the field's chart")
    if not phi.has_parity(Parity.ODD):
        raise ParityError("cocycle must be odd")
    xi = euler_field(Q.chart)
    if apply(xi, phi) != phi:
        raise WeightError("cocycle must be homogeneous of weight 1")
    if not commutator(Q, Q).is_zero():
        raise EngineError("field is not homological")
    if not apply(Q, phi).is_zero():
        raise EngineError("cocycle condition Q(phi) = 0 fails")
    D = Q + xi.scale(phi)
    return QuasiQData(name, Q.chart, D, phi)
