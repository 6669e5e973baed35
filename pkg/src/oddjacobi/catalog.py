"""Built-in example models.

Each entry is a declaration-language source reproducing one of the standard
structures: the superline, odd contact charts, Lie-Schouten and odd
symplectic structures, de Rham and Lie algebra Q-manifolds, exact QS data,
flat Abelian connections, and the algebroid constructions.  Two entries are
deliberately broken (structure constants violating the Jacobi identity, a
non-closed connection form) and must fail with nonzero residuals.

Library-level builders for the same objects live at the bottom; tests
cross-check that both routes produce identical canonical forms.
"""

from __future__ import annotations

from .core import EngineError, Poly, make_chart
from .dsl import Model, parse
from .phase import cotangent_chart, momentum_name
from .jacobi import OddJacobiStructure, odd_jacobi_structure
from .constructions import ExactQSData, QSData
from .algebroid import (
    AlgebroidData,
    algebroid_data,
    build_jacobi_algebroid,
    odd_contact_structure,
)
from .phase import unsymbol


class CatalogError(EngineError):
    pass


def _superline(**_):
    return """\
chart R11 {
  coord t: even;
  coord xi: odd;
}
structure oddjacobi superline on R11 {
  S = -P[xi]*P[t];
  Q = -P[xi];
}
check superline;
"""


def _odd_contact(n: int = 1, **_):
    n = int(n)
    coords = [f"  coord x{i}: even;" for i in range(1, n + 1)]
    coords += [f"  coord xs{i}: odd weight 1;" for i in range(1, n + 1)]
    coords += ["  coord tau: odd weight 1;"]
    s_terms = " + ".join(f"P[xs{i}]*(P[x{i}] + xs{i}*P[tau])" for i in range(1, n + 1))
    return (
        f"chart M{n} {{\n" + "\n".join(coords) + "\n}\n"
        f"structure oddjacobi odd_contact on M{n} {{\n"
        f"  S = {s_terms};\n"
        f"  Q = -P[tau];\n"
        f"}}\ncheck odd_contact;\n"
    )


def _odd_symplectic(n: int = 1, **_):
    n = int(n)
    coords = [f"  coord x{i}: even;" for i in range(1, n + 1)]
    coords += [f"  coord xs{i}: odd;" for i in range(1, n + 1)]
    s_terms = " + ".join(f"P[xs{i}]*P[x{i}]" for i in range(1, n + 1))
    return (
        f"chart PTR{n} {{\n" + "\n".join(coords) + "\n}\n"
        f"structure schouten odd_symplectic on PTR{n} {{\n  S = {s_terms};\n}}\n"
        "check odd_symplectic;\n"
    )


def _lie_schouten(**_):
    # the 2-dim solvable algebra [e1, e2] = e2
    return """\
chart Pg2 {
  coord eta1: odd weight 1;
  coord eta2: odd weight 1;
}
structure algebroid lie_schouten on Pg2 {
  bracket_eta2_eta2_eta1 = -1;
}
check lie_schouten;
"""


def _de_rham(n: int = 1, **_):
    n = int(n)
    coords = [f"  coord x{i}: even;" for i in range(1, n + 1)]
    coords += [f"  coord dx{i}: odd weight 1;" for i in range(1, n + 1)]
    q = " + ".join(f"dx{i}*P[x{i}]" for i in range(1, n + 1))
    return (
        f"chart PTM{n} {{\n" + "\n".join(coords) + "\n}\n"
        f"structure qmanifold de_rham on PTM{n} {{\n  Q = {q};\n}}\ncheck de_rham;\n"
    )


def _lie_algebra_bracket(**_):
    # Chevalley-Eilenberg field of [e1, e2] = e2 on the parity-reversed algebra
    return """\
chart Pg2xi {
  coord xi1: odd weight 1;
  coord xi2: odd weight 1;
}
structure qmanifold lie_algebra_bracket on Pg2xi {
  Q = -xi1*xi2*P[xi2];
}
check lie_algebra_bracket;
"""


def _exact_qs_1(**_):
    return """\
chart PTQ1 {
  coord x1: even;
  coord xs1: odd;
}
structure exactqs exact_qs_1 on PTQ1 {
  S = P[xs1]*P[x1];
  Q = 0;
  E = xs1*P[xs1];
}
check exact_qs_1;
"""


def _exact_qs_2(**_):
    return """\
chart PTQ2 {
  coord x1: even;
  coord xs1: odd;
}
structure exactqs exact_qs_2 on PTQ2 {
  S = P[xs1]*P[x1];
  Q = x1*P[xs1];
  E = xs1*P[xs1];
}
check exact_qs_2;
"""


def _flat_connection(n: int = 2, **_):
    if int(n) != 2:
        raise CatalogError("flat_connection is built for n = 2")
    # A = d(x1 x2) = x2 dx1 + x1 dx2, an exact odd one-form
    return """\
chart FC2 {
  coord x1: even;
  coord x2: even;
  coord dx1: odd weight 1;
  coord dx2: odd weight 1;
}
structure quasiq flat_connection on FC2 {
  D = dx1*P[x1] + dx2*P[x2] - x1*dx1*dx2*P[dx1] + x2*dx1*dx2*P[dx2];
  q = x2*dx1 + x1*dx2;
}
check flat_connection;
"""


def _nonflat_connection(**_):
    # A = x2 dx1 is not closed; the curving function fails D[q] = 0
    return """\
chart NFC2 {
  coord x1: even;
  coord x2: even;
  coord dx1: odd weight 1;
  coord dx2: odd weight 1;
}
structure quasiq nonflat_connection on NFC2 {
  D = dx1*P[x1] + dx2*P[x2] + x2*dx1*dx2*P[dx2];
  q = x2*dx1;
}
check nonflat_connection;
"""


def _lie_algebra_cocycle(**_):
    # [e1, e2] = e2 with the 1-cocycle dual to e1
    return """\
chart Pg2c {
  coord eta1: odd weight 1;
  coord eta2: odd weight 1;
}
structure algebroid lie_algebra_cocycle on Pg2c {
  bracket_eta2_eta2_eta1 = -1;
  cocycle_eta1 = 1;
}
check lie_algebra_cocycle;
convert lie_algebra_cocycle via quasiq;
"""


def _tangent_extension(**_):
    # tangent algebroid of R^1 extended by the canonical odd direction;
    # builds the same structure as odd_contact(1)
    return """\
chart TE1 {
  coord x1: even;
  coord xs1: odd weight 1;
  coord tau: odd weight 1;
}
structure algebroid tangent_extension on TE1 {
  anchor_xs1_x1 = 1;
  bracket_xs1_xs1_tau = 1;
  cocycle_tau = -1;
}
check tangent_extension;
convert tangent_extension via quasiq;
"""


def _algebroid_2dim(**_):
    # action algebroid of the affine algebra [e1, e2] = e2 on R^1
    return """\
chart A2 {
  coord x1: even;
  coord eta1: odd weight 1;
  coord eta2: odd weight 1;
}
structure algebroid algebroid_2dim on A2 {
  anchor_eta1_x1 = -x1;
  anchor_eta2_x1 = 1;
  bracket_eta2_eta2_eta1 = -1;
}
check algebroid_2dim;
"""


def _nonjacobi_3dim(**_):
    # structure constants violating the Jacobi identity
    return """\
chart NJ3 {
  coord eta1: odd weight 1;
  coord eta2: odd weight 1;
  coord eta3: odd weight 1;
}
structure algebroid nonjacobi_3dim on NJ3 {
  bracket_eta1_eta1_eta2 = -1;
  bracket_eta3_eta2_eta3 = -1;
  bracket_eta3_eta1_eta3 = -1;
}
check nonjacobi_3dim;
"""


CATALOG = {
    "superline": _superline,
    "odd_contact": _odd_contact,
    "odd_symplectic": _odd_symplectic,
    "lie_schouten": _lie_schouten,
    "de_rham": _de_rham,
    "lie_algebra_bracket": _lie_algebra_bracket,
    "exact_qs_1": _exact_qs_1,
    "exact_qs_2": _exact_qs_2,
    "flat_connection": _flat_connection,
    "nonflat_connection": _nonflat_connection,
    "lie_algebra_cocycle": _lie_algebra_cocycle,
    "tangent_extension": _tangent_extension,
    "algebroid_2dim": _algebroid_2dim,
    "nonjacobi_3dim": _nonjacobi_3dim,
}

NEGATIVE_ENTRIES = ("nonjacobi_3dim", "nonflat_connection")


def catalog_names() -> list[str]:
    return sorted(CATALOG)


def catalog_source(name: str, **params) -> str:
    try:
        builder = CATALOG[name]
    except KeyError:
        raise CatalogError(
            f"unknown example {name!r}; available: {', '.join(catalog_names())}"
        ) from None
    return builder(**params)


def catalog(name: str, **params) -> Model:
    return parse(catalog_source(name, **params))


# -- library-level builders of the same structures --------------------------


def superline_structure() -> OddJacobiStructure:
    phase = cotangent_chart(make_chart([("t", "even"), ("xi", "odd")]))
    S = -(Poly.gen(phase, "P[xi]") * Poly.gen(phase, "P[t]"))
    return odd_jacobi_structure(S, -Poly.gen(phase, "P[xi]"), name="superline")


def odd_symplectic_structure(n: int = 1) -> OddJacobiStructure:
    decls = [(f"x{i}", "even") for i in range(1, n + 1)]
    decls += [(f"xs{i}", "odd") for i in range(1, n + 1)]
    phase = cotangent_chart(make_chart(decls))
    S = Poly.zero(phase)
    for i in range(1, n + 1):
        S = S + Poly.gen(phase, momentum_name(f"xs{i}")) * Poly.gen(phase, momentum_name(f"x{i}"))
    return odd_jacobi_structure(S, Poly.zero(phase), name=f"odd_symplectic({n})")


def de_rham_structure(n: int = 1) -> OddJacobiStructure:
    decls = [(f"x{i}", "even", 0) for i in range(1, n + 1)]
    decls += [(f"dx{i}", "odd", 1) for i in range(1, n + 1)]
    phase = cotangent_chart(make_chart(decls))
    Q = Poly.zero(phase)
    for i in range(1, n + 1):
        Q = Q + Poly.gen(phase, f"dx{i}") * Poly.gen(phase, momentum_name(f"x{i}"))
    return odd_jacobi_structure(Poly.zero(phase), Q, name=f"de_rham({n})")


def tangent_algebroid(n: int = 1) -> AlgebroidData:
    base = make_chart([(f"x{i}", "even", 0) for i in range(1, n + 1)])
    fibres = [(f"xs{i}", f"xi{i}", "even") for i in range(1, n + 1)]
    anchor = {(f"xs{i}", f"x{i}"): 1 for i in range(1, n + 1)}
    return algebroid_data(f"tangent_R{n}", base, fibres, anchor)


def lie2_algebroid(cocycle=(1, 0), name: str = "lie2") -> AlgebroidData:
    """[e1, e2] = e2 over a point, with an optional cocycle (c1, c2)."""
    pt = make_chart([])
    c1, c2 = cocycle
    coc = {}
    if c1:
        coc["eta1"] = c1
    if c2:
        coc["eta2"] = c2
    return algebroid_data(
        name,
        pt,
        [("eta1", "xi1", "even"), ("eta2", "xi2", "even")],
        bracket={("eta2", "eta2", "eta1"): -1},
        cocycle=coc,
    )


def exact_qs_data(which: int = 1) -> ExactQSData:
    phase = cotangent_chart(make_chart([("x1", "even"), ("xs1", "odd")]))
    S = Poly.gen(phase, "P[xs1]") * Poly.gen(phase, "P[x1]")
    Q = Poly.zero(phase) if which == 1 else Poly.gen(phase, "x1") * Poly.gen(phase, "P[xs1]")
    E = unsymbol(Poly.gen(phase, "xs1") * Poly.gen(phase, "P[xs1]"))
    return ExactQSData(QSData(f"exact_qs_{which}", phase, S, Q), E)


def jacobi_catalog_structures() -> list[OddJacobiStructure]:
    """The odd Jacobi structures used by the sampled law checks."""
    lie_schouten = build_jacobi_algebroid(lie2_algebroid(cocycle=(0, 0), name="lie_schouten"))
    with_cocycle = build_jacobi_algebroid(lie2_algebroid(name="lie_algebra_cocycle"))
    return [
        superline_structure(),
        odd_contact_structure(1),
        odd_symplectic_structure(1),
        de_rham_structure(1),
        lie_schouten,
        with_cocycle,
    ]
