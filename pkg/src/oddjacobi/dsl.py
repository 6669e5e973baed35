"""Small declaration language for charts, structures and checks.

    chart     := "chart" NAME "{" ("coord" NAME ":" ("even"|"odd") ["weight" INT] ";")* "}"
    structure := "structure" KIND NAME "on" NAME "{" (FIELD "=" expr ";")* "}"
    directive := ("check" NAME | "bracket" NAME "(" expr "," expr ")"
                 | "convert" NAME "via" CONV) ";"
    expr      := RATIONAL | NAME | "P[" NAME "]" | "d[" NAME "]"
               | "exp(" RATIONAL "*" NAME ")"
               | expr ("+"|"-"|"*") expr | "-" expr | "(" expr ")"

Momentum of a coordinate x is written P[x], an anticotangent fibre d[x].
Structure kinds: oddjacobi (fields S, Q), schouten (S), qmanifold (Q),
quasiq (D, q), exactqs (S, Q, E), algebroid (anchor_<fibre>_<coord>,
bracket_<g>_<b>_<a>, cocycle_<fibre>; fibres are the weight-one chart
coordinates).  Expressions elaborate with explicit parity checking at every
operator; '#' starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Chart, EngineError, Parity, Poly, make_chart
from .phase import cotangent_chart
from .algebroid import AlgebroidData, algebroid_data

KINDS = ("oddjacobi", "schouten", "qmanifold", "quasiq", "exactqs", "algebroid")
CONVERSIONS = ("quasiq", "homological", "schoutenize", "jacobi")
FIELD_PARITY = {
    "S": Parity.ODD,
    "Q": Parity.ODD,
    "D": Parity.ODD,
    "q": Parity.ODD,
    "E": Parity.EVEN,
}


class DslError(EngineError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


# -- lexer -------------------------------------------------------------------

_PUNCT = {
    "{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACK", "]": "RBRACK", ";": "SEMI", ":": "COLON",
    "=": "EQ", ",": "COMMA", "+": "PLUS", "-": "MINUS", "*": "STAR",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    toks = []
    line, col, i = 1, 1, 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "/" and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            toks.append(Token("NUMBER", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            toks.append(Token("NAME", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            toks.append(Token(_PUNCT[ch], ch, line, start_col))
            i += 1
            col += 1
            continue
        raise DslError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


# -- expression AST ----------------------------------------------------------


@dataclass(frozen=True)
class ENum:
    value: Fraction
    tok: Token


@dataclass(frozen=True)
class ERef:
    name: str  # literal generator name, including P[..] / d[..] forms
    tok: Token


@dataclass(frozen=True)
class EExp:
    rate: Fraction
    name: str
    tok: Token


@dataclass(frozen=True)
class ENeg:
    arg: object
    tok: Token


@dataclass(frozen=True)
class EBin:
    op: str
    left: object
    right: object
    tok: Token


def elaborate(expr, chart: Chart) -> Poly:
    """Expression to canonical Poly; parity is checked at every operator."""
    if isinstance(expr, ENum):
        return Poly.const(chart, expr.value)
    if isinstance(expr, ERef):
        if expr.name not in chart:
            raise DslError(f"unknown generator {expr.name!r}", expr.tok.line, expr.tok.col)
        return Poly.gen(chart, expr.name)
    if isinstance(expr, EExp):
        if expr.name not in chart:
            raise DslError(f"unknown generator {expr.name!r}", expr.tok.line, expr.tok.col)
        if chart.generator(expr.name).parity is not Parity.EVEN:
            raise DslError(f"exp() needs an even coordinate, {expr.name!r} is odd",
                           expr.tok.line, expr.tok.col)
        return Poly.exp_tag(chart, expr.name, expr.rate)
    if isinstance(expr, ENeg):
        return -elaborate(expr.arg, chart)
    if isinstance(expr, EBin):
        left = elaborate(expr.left, chart)
        right = elaborate(expr.right, chart)
        if expr.op in "+-":
            if left and right and left.parity() is not right.parity():
                raise DslError(
                    f"parity mismatch in {expr.op!r}: {left.parity()} vs {right.parity()}",
                    expr.tok.line, expr.tok.col,
                )
            return left + right if expr.op == "+" else left - right
        return left * right
    raise AssertionError(f"unknown expression node {expr!r}")


# -- model -------------------------------------------------------------------


@dataclass
class StructureDecl:
    kind: str
    name: str
    chart_name: str
    fields: dict[str, Poly]
    field_order: list[str]
    algebroid: AlgebroidData | None = None

    def __eq__(self, other):
        return (
            isinstance(other, StructureDecl)
            and (self.kind, self.name, self.chart_name) == (other.kind, other.name, other.chart_name)
            and self.fields == other.fields
        )


@dataclass
class Directive:
    kind: str               # check | bracket | convert
    target: str
    args: tuple = ()        # bracket: (Poly, Poly); convert: (conversion name,)

    def __eq__(self, other):
        return (
            isinstance(other, Directive)
            and (self.kind, self.target) == (other.kind, other.target)
            and tuple(self.args) == tuple(other.args)
        )


@dataclass
class Model:
    charts: dict[str, Chart] = field(default_factory=dict)
    chart_order: list[str] = field(default_factory=list)
    structures: dict[str, StructureDecl] = field(default_factory=dict)
    structure_order: list[str] = field(default_factory=list)
    directives: list[Directive] = field(default_factory=list)

    def __eq__(self, other):
        return (
            isinstance(other, Model)
            and self.charts == other.charts
            and {k: self.structures[k] for k in self.structures} == dict(other.structures)
            and self.directives == other.directives
        )


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.pos = 0
        self.model = Model()

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.next()
        if t.kind != kind:
            raise DslError(f"expected {what or kind}, found {t.value or t.kind!r}", t.line, t.col)
        return t

    def expect_name(self, word: str | None = None) -> Token:
        t = self.expect("NAME", word and f"'{word}'")
        if word is not None and t.value != word:
            raise DslError(f"expected '{word}', found {t.value!r}", t.line, t.col)
        return t

    # grammar
    def parse(self) -> Model:
        while self.peek().kind != "EOF":
            t = self.peek()
            if t.kind != "NAME":
                raise DslError(f"expected item, found {t.value!r}", t.line, t.col)
            if t.value == "chart":
                self.parse_chart()
            elif t.value == "structure":
                self.parse_structure()
            elif t.value in ("check", "bracket", "convert"):
                self.parse_directive()
            else:
                raise DslError(f"unknown item {t.value!r}", t.line, t.col)
        return self.model

    def parse_chart(self):
        self.expect_name("chart")
        name_tok = self.expect("NAME", "chart name")
        self.expect("LBRACE")
        decls = []
        while self.peek().kind == "NAME" and self.peek().value == "coord":
            self.next()
            cname = self.expect("NAME", "coordinate name").value
            self.expect("COLON")
            par_tok = self.expect("NAME", "'even' or 'odd'")
            if par_tok.value not in ("even", "odd"):
                raise DslError(f"expected parity, found {par_tok.value!r}", par_tok.line, par_tok.col)
            weight = 0
            if self.peek().kind == "NAME" and self.peek().value == "weight":
                self.next()
                sign = 1
                if self.peek().kind == "MINUS":
                    self.next()
                    sign = -1
                w_tok = self.expect("NUMBER", "integer weight")
                if "/" in w_tok.value:
                    raise DslError("weight must be an integer", w_tok.line, w_tok.col)
                weight = sign * int(w_tok.value)
            decls.append((cname, par_tok.value, weight))
            self.expect("SEMI")
        self.expect("RBRACE")
        if name_tok.value in self.model.charts:
            raise DslError(f"chart {name_tok.value!r} already declared", name_tok.line, name_tok.col)
        try:
            chart = make_chart(decls)
        except EngineError as e:
            raise DslError(str(e), name_tok.line, name_tok.col) from None
        self.model.charts[name_tok.value] = chart
        self.model.chart_order.append(name_tok.value)

    def parse_structure(self):
        self.expect_name("structure")
        kind_tok = self.expect("NAME", "structure kind")
        if kind_tok.value not in KINDS:
            raise DslError(f"unknown structure kind {kind_tok.value!r}", kind_tok.line, kind_tok.col)
        name_tok = self.expect("NAME", "structure name")
        self.expect_name("on")
        chart_tok = self.expect("NAME", "chart name")
        if chart_tok.value not in self.model.charts:
            raise DslError(f"unknown chart {chart_tok.value!r}", chart_tok.line, chart_tok.col)
        chart = self.model.charts[chart_tok.value]
        scope = chart if kind_tok.value == "algebroid" else cotangent_chart(chart)
        self.expect("LBRACE")
        fields: dict[str, Poly] = {}
        order: list[str] = []
        while self.peek().kind == "NAME" and self.peek().value not in ("chart", "structure"):
            f_tok = self.expect("NAME", "field name")
            self.expect("EQ")
            expr = self.parse_expr()
            self.expect("SEMI")
            if f_tok.value in fields:
                raise DslError(f"field {f_tok.value!r} repeated", f_tok.line, f_tok.col)
            value = elaborate(expr, scope)
            want = FIELD_PARITY.get(f_tok.value)
            if kind_tok.value != "algebroid" and want is not None and not value.has_parity(want):
                raise DslError(
                    f"field {f_tok.value!r} must be {want}, got {value.parity()}",
                    f_tok.line, f_tok.col,
                )
            fields[f_tok.value] = value
            order.append(f_tok.value)
        self.expect("RBRACE")
        if name_tok.value in self.model.structures:
            raise DslError(f"structure {name_tok.value!r} already declared", name_tok.line, name_tok.col)
        decl = StructureDecl(kind_tok.value, name_tok.value, chart_tok.value, fields, order)
        if kind_tok.value == "algebroid":
            try:
                decl.algebroid = _algebroid_from_fields(name_tok.value, chart, fields)
            except EngineError as e:
                raise DslError(str(e), name_tok.line, name_tok.col) from None
        else:
            missing = [f for f in _required_fields(kind_tok.value) if f not in fields]
            if missing:
                raise DslError(
                    f"{kind_tok.value} structure needs fields {missing}", name_tok.line, name_tok.col
                )
        self.model.structures[name_tok.value] = decl
        self.model.structure_order.append(name_tok.value)

    def parse_directive(self):
        head = self.next()
        if head.value == "check":
            target = self._target()
            self.expect("SEMI")
            self.model.directives.append(Directive("check", target))
            return
        if head.value == "convert":
            target = self._target()
            self.expect_name("via")
            conv = self.expect("NAME", "conversion name")
            if conv.value not in CONVERSIONS:
                raise DslError(f"unknown conversion {conv.value!r}", conv.line, conv.col)
            self.expect("SEMI")
            self.model.directives.append(Directive("convert", target, (conv.value,)))
            return
        # bracket NAME ( expr , expr )
        target = self._target()
        decl = self.model.structures[target]
        scope = cotangent_chart(self.model.charts[decl.chart_name])
        self.expect("LPAREN")
        f = elaborate(self.parse_expr(), scope)
        self.expect("COMMA")
        g = elaborate(self.parse_expr(), scope)
        self.expect("RPAREN")
        self.expect("SEMI")
        self.model.directives.append(Directive("bracket", target, (f, g)))

    def _target(self) -> str:
        t = self.expect("NAME", "structure name")
        if t.value not in self.model.structures:
            raise DslError(f"unknown structure {t.value!r}", t.line, t.col)
        return t.value

    # expressions (precedence: unary minus > '*' > '+'/'-')
    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("PLUS", "MINUS"):
            op = self.next()
            right = self.parse_term()
            node = EBin(op.value, node, right, op)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind == "STAR":
            op = self.next()
            right = self.parse_unary()
            node = EBin("*", node, right, op)
        return node

    def parse_unary(self):
        if self.peek().kind == "MINUS":
            t = self.next()
            return ENeg(self.parse_unary(), t)
        return self.parse_primary()

    def parse_primary(self):
        t = self.next()
        if t.kind == "NUMBER":
            return ENum(Fraction(t.value), t)
        if t.kind == "LPAREN":
            node = self.parse_expr()
            self.expect("RPAREN")
            return node
        if t.kind == "NAME":
            if t.value in ("P", "d") and self.peek().kind == "LBRACK":
                self.next()
                inner = self.expect("NAME", "generator name")
                self.expect("RBRACK")
                return ERef(f"{t.value}[{inner.value}]", t)
            if t.value == "exp" and self.peek().kind == "LPAREN":
                self.next()
                sign = 1
                if self.peek().kind == "MINUS":
                    self.next()
                    sign = -1
                num = self.expect("NUMBER", "rational rate")
                self.expect("STAR")
                name = self.expect("NAME", "coordinate name")
                self.expect("RPAREN")
                return EExp(sign * Fraction(num.value), name.value, t)
            return ERef(t.value, t)
        raise DslError(f"expected expression, found {t.value or t.kind!r}", t.line, t.col)


def _required_fields(kind: str) -> tuple[str, ...]:
    return {
        "oddjacobi": ("S", "Q"),
        "schouten": ("S",),
        "qmanifold": ("Q",),
        "quasiq": ("D", "q"),
        "exactqs": ("S", "Q", "E"),
    }[kind]


def _algebroid_from_fields(name: str, chart: Chart, fields: dict[str, Poly]) -> AlgebroidData:
    """Field-name convention: anchor_<fibre>_<coord>, bracket_<g>_<b>_<a>,
    cocycle_<fibre>.  Fibres are the weight-one coordinates of the chart."""
    base_gens = [g for g in chart.generators if g.weight == 0]
    fibre_gens = [g for g in chart.generators if g.weight == 1]
    if len(base_gens) + len(fibre_gens) != len(chart.generators):
        raise EngineError("algebroid chart coordinates must have weight 0 or 1")
    base = Chart(tuple(base_gens))
    fibres = [
        (g.name, f"xi{k+1}", g.parity.flip()) for k, g in enumerate(fibre_gens)
    ]
    fibre_names = {g.name for g in fibre_gens}
    base_names = {g.name for g in base_gens}

    def down(p: Poly) -> Poly:
        return p.substitute({}, base)

    anchor, bracket, cocycle = {}, {}, {}
    for fname, value in fields.items():
        parts = fname.split("_")
        try:
            if parts[0] == "anchor" and len(parts) == 3 and parts[1] in fibre_names and parts[2] in base_names:
                anchor[(parts[1], parts[2])] = down(value)
            elif parts[0] == "bracket" and len(parts) == 4 and all(p in fibre_names for p in parts[1:]):
                bracket[(parts[1], parts[2], parts[3])] = down(value)
            elif parts[0] == "cocycle" and len(parts) == 2 and parts[1] in fibre_names:
                cocycle[parts[1]] = down(value)
            else:
                raise EngineError(f"cannot interpret algebroid field {fname!r}")
        except EngineError as e:
            raise EngineError(f"field {fname!r}: {e}") from None
    return algebroid_data(name, base, fibres, anchor, bracket, cocycle)


def parse(source: str) -> Model:
    return Parser(source).parse()


# -- rendering ---------------------------------------------------------------


def render_model(model: Model) -> str:
    """Canonical source for a model; parse(render_model(m)) == m."""
    out = []
    for cname in model.chart_order:
        chart = model.charts[cname]
        out.append(f"chart {cname} {{")
        for g in chart.generators:
            w = f" weight {g.weight}" if g.weight else ""
            out.append(f"  coord {g.name}: {g.parity}{w};")
        out.append("}")
    for sname in model.structure_order:
        s = model.structures[sname]
        out.append(f"structure {s.kind} {sname} on {s.chart_name} {{")
        for fname in s.field_order:
            out.append(f"  {fname} = {s.fields[fname].to_dsl()};")
        out.append("}")
    for d in model.directives:
        if d.kind == "check":
            out.append(f"check {d.target};")
        elif d.kind == "convert":
            out.append(f"convert {d.target} via {d.args[0]};")
        else:
            f, g = d.args
            out.append(f"bracket {d.target} ({f.to_dsl()}, {g.to_dsl()});")
    return "\n".join(out) + "\n"
