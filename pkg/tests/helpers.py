"""Shared oracles for the test suite.

The coordinate expansions here are coded independently of the engine,
term by term in the displayed multiplication order, so that engine brackets
can be checked against them on random structure functions.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from oddjacobi.core import Chart, Parity, Poly, random_poly
from oddjacobi.phase import momentum_name, poisson


def mom(phase: Chart, name: str) -> Poly:
    return Poly.gen(phase, momentum_name(name))


def random_tables(base: Chart, phase: Chart, names: list[str], rng: Random, max_degree: int = 2):
    """Graded-symmetric S^{AB} (odd total) and Q^A (odd total) over the base."""
    par = {n: base.generator(n).parity for n in names}
    S: dict[tuple[str, str], Poly] = {}
    for i, A in enumerate(names):
        for B in names[i:]:
            want = Parity((par[A] + par[B] + 1) & 1)
            f = random_poly(phase, names, max_degree, want, rng)
            if A == B and par[A]:
                f = Poly.zero(phase)
            S[(A, B)] = f
            S[(B, A)] = (-1 if (par[A] and par[B]) else 1) * f
    Q = {
        A: random_poly(phase, names, max_degree, Parity((par[A] + 1) & 1), rng)
        for A in names
    }
    return S, Q


def structures_from_tables(phase: Chart, names: list[str], S, Q) -> tuple[Poly, Poly]:
    Spoly = Poly.zero(phase)
    Qpoly = Poly.zero(phase)
    for A in names:
        for B in names:
            Spoly = Spoly + Fraction(1, 2) * S[(A, B)] * mom(phase, B) * mom(phase, A)
        Qpoly = Qpoly + Q[A] * mom(phase, A)
    return Spoly, Qpoly


def sgn(e: int) -> int:
    return -1 if e & 1 else 1


def display_qq(phase, names, Q) -> Poly:
    """{Q,Q} = 2 Q^B dQ^A/dx^B p_A."""
    out = Poly.zero(phase)
    for A in names:
        for B in names:
            out = out + 2 * Q[B] * Q[A].derivative(B) * mom(phase, A)
    return out


def display_qs(phase, base, names, S, Q) -> Poly:
    """{Q,S} = (1/2 Q^C dS^{BA}/dx^C + (-1)^B~ S^{BC} dQ^A/dx^C) p_A p_B."""
    par = {n: base.generator(n).parity for n in names}
    out = Poly.zero(phase)
    for A in names:
        for B in names:
            for C in names:
                coeff = Fraction(1, 2) * Q[C] * S[(B, A)].derivative(C)
                coeff = coeff + sgn(par[B]) * S[(B, C)] * Q[A].derivative(C)
                out = out + coeff * mom(phase, A) * mom(phase, B)
    return out


def display_ss_plus_2qs(phase, base, names, S, Q) -> Poly:
    """{S,S}+2QS = (-1)^C~ (S^{CD} dS^{BA}/dx^D + Q^C S^{BA}) p_A p_B p_C."""
    par = {n: base.generator(n).parity for n in names}
    out = Poly.zero(phase)
    for A in names:
        for B in names:
            for C in names:
                acc = Poly.zero(phase)
                for D in names:
                    acc = acc + S[(C, D)] * S[(B, A)].derivative(D)
                acc = acc + Q[C] * S[(B, A)]
                out = out + sgn(par[C]) * acc * mom(phase, A) * mom(phase, B) * mom(phase, C)
    return out


def display_bracket(phase, base, names, S, Q, f: Poly, g: Poly) -> Poly:
    """The defining bracket's coordinate expansion,

    (-1)^((B~+1)f~+1) S^{BA} df/dx^A dg/dx^B
      + (-1)^f~ (Q^A df/dx^A) g + f (Q^A dg/dx^A).
    """
    par = {n: base.generator(n).parity for n in names}
    fp = f.parity()
    out = Poly.zero(phase)
    for A in names:
        for B in names:
            e = ((par[B] + 1) * fp + 1) & 1
            out = out + sgn(e) * S[(B, A)] * f.derivative(A) * g.derivative(B)
    qf = Poly.zero(phase)
    qg = Poly.zero(phase)
    for A in names:
        qf = qf + Q[A] * f.derivative(A)
        qg = qg + Q[A] * g.derivative(A)
    return out + sgn(fp) * qf * g + f * qg


def poisson_axiom_residuals(a: Poly, b: Poly, c: Poly) -> list[Poly]:
    """Skew symmetry, the cyclic Jacobi identity and the Leibniz rule."""
    pa, pb, pc = a.parity(), b.parity(), c.parity()
    skew = poisson(a, b) + sgn(pa * pb) * poisson(b, a)
    jac = (
        sgn(pa * pc) * poisson(a, poisson(b, c))
        + sgn(pb * pa) * poisson(b, poisson(c, a))
        + sgn(pc * pb) * poisson(c, poisson(a, b))
    )
    lei = poisson(a, b * c) - poisson(a, b) * c - sgn(pa * pb) * b * poisson(a, c)
    return [skew, jac, lei]


def brute_reorder(chart: Chart, seq: list[int]):
    """Bubble-sort sign oracle: adjacent swaps, odd-odd swaps flip the sign.

    Returns (sorted index tuple, sign) or None when an odd square appears.
    """
    seq = list(seq)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            x, y = seq[i], seq[i + 1]
            if x == y and chart.generators[x].parity:
                return None
            if x > y:
                if chart.generators[x].parity and chart.generators[y].parity:
                    sign = -sign
                seq[i], seq[i + 1] = y, x
                changed = True
    for i in range(len(seq) - 1):
        if seq[i] == seq[i + 1] and chart.generators[seq[i]].parity:
            return None
    return tuple(seq), sign
