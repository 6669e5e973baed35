"""Check runner and report emitters shared by the CLI and the HTTP service.

Directives of a parsed model execute in order (optionally in parallel;
report order stays the directive order) and produce one report each.  The
JSON wire format per report is

    {"structure": str,
     "conditions": [{"name": str, "residual": str, "pass": bool}],
     "verdict": bool}

where ``residual`` is the canonical polynomial rendering (or a short
diagnostic for shape failures and emitted values).  Exit codes: 0 when all
verdicts hold, 1 on any failed condition, 2 on parse or elaboration errors.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import EngineError, Poly
from .dsl import Directive, DslError, Model, StructureDecl, parse
from .catalog import catalog_names, catalog_source
from .jacobi import (
    ConditionResult,
    OddJacobiStructure,
    VerificationReport,
    check_theorem_odd_jacobi_algebra,
    odd_jacobi_bracket,
    odd_jacobi_structure,
    verify_odd_jacobi,
)
from .constructions import (
    ExactQSData,
    QSData,
    QuasiQData,
    exact_qs_to_jacobi,
    quasiq_to_homological,
    schoutenize,
    verify_exact_qs,
    verify_qs,
    verify_quasi_q,
)
from .algebroid import build_jacobi_algebroid, extract_quasiq, lie_algebroid_from_jacobi
from .phase import apply, cotangent_chart, poisson, symbol, unsymbol


@dataclass
class RunOptions:
    seed: int = 0
    max_degree: int = 3
    samples: int = 4        # sampled algebra-law conditions per oddjacobi check
    parallel: bool = False


def _as_jacobi(decl: StructureDecl, model: Model) -> OddJacobiStructure:
    phase = cotangent_chart(model.charts[decl.chart_name])
    if decl.kind == "oddjacobi":
        return odd_jacobi_structure(decl.fields["S"], decl.fields["Q"], decl.name)
    if decl.kind == "schouten":
        return odd_jacobi_structure(decl.fields["S"], Poly.zero(phase), decl.name)
    if decl.kind == "qmanifold":
        return odd_jacobi_structure(Poly.zero(phase), decl.fields["Q"], decl.name)
    if decl.kind == "algebroid":
        return build_jacobi_algebroid(decl.algebroid)
    raise EngineError(f"structure kind {decl.kind!r} carries no odd Jacobi bracket")


def _as_quasiq(decl: StructureDecl, model: Model) -> QuasiQData:
    chart = model.charts[decl.chart_name]
    D = unsymbol(decl.fields["D"])
    q = decl.fields["q"].substitute({}, chart)
    return QuasiQData(decl.name, chart, D, q)


def _check(decl: StructureDecl, model: Model, opts: RunOptions) -> VerificationReport:
    if decl.kind in ("oddjacobi", "schouten", "qmanifold", "algebroid"):
        J = _as_jacobi(decl, model)
        rep = verify_odd_jacobi(J)
        rep.structure = decl.name
        if decl.kind == "algebroid":
            rep.add_info("weight audit", "S and Q have weight -1")
        if decl.kind == "oddjacobi" and opts.samples > 0 and rep.verdict:
            laws = check_theorem_odd_jacobi_algebra(
                J, samples=opts.samples, max_degree=opts.max_degree, seed=opts.seed
            )
            for cond in laws.conditions:
                cond.name = f"law {cond.name} [{opts.samples} samples]"
            rep.extend(laws)
        return rep
    if decl.kind == "quasiq":
        rep = verify_quasi_q(_as_quasiq(decl, model))
        rep.structure = decl.name
        return rep
    if decl.kind == "exactqs":
        phase = cotangent_chart(model.charts[decl.chart_name])
        d = ExactQSData(
            QSData(decl.name, phase, decl.fields["S"], decl.fields["Q"]),
            unsymbol(decl.fields["E"]),
        )
        return verify_exact_qs(d)
    raise EngineError(f"no check for structure kind {decl.kind!r}")


def _emit_field(rep: VerificationReport, label: str, value: Poly):
    rep.add_info(f"emit:{label}", value.render())


def _convert(decl: StructureDecl, model: Model, conv: str) -> VerificationReport:
    rep = VerificationReport(f"{decl.name}:{conv}")
    if conv == "schoutenize":
        J = _as_jacobi(decl, model)
        t_name = "t"
        k = 0
        while t_name in J.base:
            k += 1
            t_name = f"t{k}"
        qs = schoutenize(J, t_name=t_name)
        _emit_field(rep, "Sbar", qs.Sbar)
        _emit_field(rep, "Qbar", qs.Qbar)
        sub = verify_qs(qs)
        rep.extend(sub)
        return rep
    if conv == "quasiq":
        if decl.kind != "algebroid":
            raise EngineError("quasiq conversion applies to algebroid structures")
        qq = extract_quasiq(decl.algebroid)
        for name in sorted(qq.D.components):
            _emit_field(rep, f"D[d/d{name}]", qq.D.components[name])
        _emit_field(rep, "q", qq.q)
        rep.extend(verify_quasi_q(qq))
        return rep
    if conv == "homological":
        if decl.kind == "algebroid":
            Q, phi = lie_algebroid_from_jacobi(decl.algebroid)
        elif decl.kind == "quasiq":
            Q, phi = quasiq_to_homological(_as_quasiq(decl, model))
        else:
            raise EngineError("homological conversion applies to algebroid or quasiq structures")
        for name in sorted(Q.components):
            _emit_field(rep, f"Q[d/d{name}]", Q.components[name])
        _emit_field(rep, "phi", phi)
        phase = cotangent_chart(Q.chart)
        rep.add_residual("homological [Q,Q]", poisson(symbol(Q, phase), symbol(Q, phase)))
        rep.add_residual("cocycle Q(phi)", apply(Q, phi))
        return rep
    if conv == "jacobi":
        if decl.kind != "exactqs":
            raise EngineError("jacobi conversion applies to exactqs structures")
        phase = cotangent_chart(model.charts[decl.chart_name])
        d = ExactQSData(
            QSData(decl.name, phase, decl.fields["S"], decl.fields["Q"]),
            unsymbol(decl.fields["E"]),
        )
        J = exact_qs_to_jacobi(d, 1, 1)
        _emit_field(rep, "S", J.S)
        _emit_field(rep, "Q", J.Qsym)
        rep.extend(verify_odd_jacobi(J))
        return rep
    raise EngineError(f"unknown conversion {conv!r}")


def run_directive(model: Model, d: Directive, opts: RunOptions) -> VerificationReport:
    decl = model.structures[d.target]
    try:
        if d.kind == "check":
            return _check(decl, model, opts)
        if d.kind == "bracket":
            f, g = d.args
            value = odd_jacobi_bracket(_as_jacobi(decl, model), f, g)
            rep = VerificationReport(decl.name)
            rep.add_info(f"bracket [[{f.to_dsl()}, {g.to_dsl()}]]", value.render())
            return rep
        return _convert(decl, model, d.args[0])
    except EngineError as e:
        rep = VerificationReport(f"{decl.name}:{d.kind}")
        rep.conditions.append(ConditionResult("error", None, False, str(e)))
        return rep


def run_model(model: Model, opts: RunOptions | None = None) -> list[VerificationReport]:
    opts = opts or RunOptions()
    if opts.parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(lambda d: run_directive(model, d, opts), model.directives))
    return [run_directive(model, d, opts) for d in model.directives]


@dataclass
class RunOutcome:
    reports: list[VerificationReport] = field(default_factory=list)
    error: str | None = None
    error_line: int | None = None
    error_col: int | None = None

    @property
    def verdict(self) -> bool:
        return self.error is None and all(r.verdict for r in self.reports)

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 0 if self.verdict else 1

    def to_dict(self) -> dict:
        if self.error is not None:
            out = {"error": self.error, "verdict": False, "exit_code": 2}
            if self.error_line is not None:
                out["line"] = self.error_line
                out["col"] = self.error_col
            return out
        return {
            "reports": [r.to_dict() for r in self.reports],
            "verdict": self.verdict,
            "exit_code": self.exit_code,
        }


def run_source(source: str, opts: RunOptions | None = None) -> RunOutcome:
    try:
        model = parse(source)
        return RunOutcome(run_model(model, opts))
    except DslError as e:
        return RunOutcome([], str(e), e.line, e.col)


def run_catalog(name: str, params: dict | None = None, opts: RunOptions | None = None) -> RunOutcome:
    return run_source(catalog_source(name, **(params or {})), opts)


def bracket_source(source: str, structure: str, f_expr: str, g_expr: str,
                   opts: RunOptions | None = None) -> str:
    """Evaluate one odd Jacobi bracket against a model; returns the rendering."""
    from .dsl import Parser, elaborate

    model = parse(source)
    if structure not in model.structures:
        raise DslError(f"unknown structure {structure!r}", 0, 0)
    decl = model.structures[structure]
    scope = cotangent_chart(model.charts[decl.chart_name])
    f = elaborate(Parser(f_expr).parse_expr(), scope)
    g = elaborate(Parser(g_expr).parse_expr(), scope)
    return odd_jacobi_bracket(_as_jacobi(decl, model), f, g).render()


# -- emitters ----------------------------------------------------------------


def emit(outcome: RunOutcome, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(outcome.to_dict(), indent=2) + "\n").encode()
    if fmt != "text":
        raise EngineError(f"unknown format {fmt!r}")
    lines = []
    if outcome.error is not None:
        lines.append(f"error: {outcome.error}")
    for rep in outcome.reports:
        lines.append(f"structure {rep.structure}")
        for c in rep.conditions:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{flag}] {c.name}: {c.residual_text()}")
        lines.append(f"  verdict: {'PASS' if rep.verdict else 'FAIL'}")
    lines.append(f"overall: {'PASS' if outcome.verdict else 'FAIL'}")
    return ("\n".join(lines) + "\n").encode()


def examples_listing() -> list[str]:
    return catalog_names()
