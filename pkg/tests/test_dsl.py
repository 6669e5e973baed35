"""Parser, elaboration, model round-trips and the catalog."""

import pytest

from oddjacobi.core import Parity, Poly
from oddjacobi.catalog import (
    CatalogError,
    catalog,
    catalog_names,
    catalog_source,
    superline_structure,
)
from oddjacobi.dsl import DslError, parse, render_model
from oddjacobi.phase import cotangent_chart

SUPERLINE_SRC = catalog_source("superline")


class TestParse:
    def test_superline_elaborates_to_reference_structure(self):
        model = parse(SUPERLINE_SRC)
        decl = model.structures["superline"]
        ref = superline_structure()
        assert decl.fields["S"] == ref.S
        assert decl.fields["Q"] == ref.Qsym

    def test_empty_file(self):
        model = parse("")
        assert not model.charts and not model.structures and not model.directives

    def test_unknown_momentum_reports_position(self):
        src = "chart C { coord x: even; }\nstructure schouten s on C {\n  S = P[zz];\n}\n"
        with pytest.raises(DslError) as err:
            parse(src)
        assert err.value.line == 3
        assert "P[zz]" in str(err.value)

    def test_parity_mismatch_in_sum(self):
        src = "chart C { coord t: even; coord e: odd; }\nstructure schouten s on C { S = t + e; }\n"
        with pytest.raises(DslError) as err:
            parse(src)
        assert "parity" in str(err.value)

    def test_field_parity_enforced(self):
        src = "chart C { coord t: even; }\nstructure schouten s on C { S = t; }\n"
        with pytest.raises(DslError) as err:
            parse(src)
        assert "must be odd" in str(err.value)

    def test_rationals_and_unary_minus(self):
        src = (
            "chart C { coord t: even; coord e: odd; }\n"
            "structure schouten s on C { S = -1/2*e*P[t] + (3/4)*P[e]*t*t; }\n"
            "check s;\n"
        )
        model = parse(src)
        assert model.structures["s"].fields["S"].parity() is Parity.ODD

    def test_exp_syntax(self):
        src = (
            "chart C { coord t: even; coord e: odd; }\n"
            "structure schouten s on C { S = exp(-2*t)*e*P[t]; }\n"
        )
        model = parse(src)
        phase = cotangent_chart(model.charts["C"])
        expected = (
            Poly.exp_tag(phase, "t", -2) * Poly.gen(phase, "e") * Poly.gen(phase, "P[t]")
        )
        assert model.structures["s"].fields["S"] == expected

    def test_exp_needs_even_coordinate(self):
        src = "chart C { coord e: odd; }\nstructure schouten s on C { S = exp(1*e)*P[e]; }\n"
        with pytest.raises(DslError):
            parse(src)

    def test_negative_weight(self):
        model = parse("chart C { coord pi: odd weight -1; }\n")
        assert model.charts["C"].generator("pi").weight == -1

    def test_unknown_structure_kind(self):
        with pytest.raises(DslError):
            parse("chart C { coord t: even; }\nstructure banana s on C { }\n")

    def test_directive_requires_known_structure(self):
        with pytest.raises(DslError):
            parse("check nothing;\n")

    def test_missing_required_field(self):
        with pytest.raises(DslError) as err:
            parse("chart C { coord t: even; }\nstructure oddjacobi s on C { S = 0; }\n")
        assert "needs fields" in str(err.value)

    def test_comments_are_skipped(self):
        model = parse("# heading\nchart C { coord t: even; } # trailing\n")
        assert "C" in model.charts

    def test_lexical_error_position(self):
        with pytest.raises(DslError) as err:
            parse("chart C { coord t: even; }\n@")
        assert err.value.line == 2 and err.value.col == 1


class TestRoundTrip:
    @pytest.mark.parametrize("name", catalog_names())
    def test_parse_render_parse_identity(self, name):
        model = catalog(name)
        again = parse(render_model(model))
        assert again == model


class TestCatalog:
    def test_unknown_name_lists_available(self):
        with pytest.raises(CatalogError) as err:
            catalog_source("unknown")
        assert "superline" in str(err.value)

    def test_parameterized_entries(self):
        model = parse(catalog_source("odd_contact", n=2))
        chart = model.charts["M2"]
        assert "xs2" in chart and "tau" in chart

    def test_negative_entries_designated(self):
        from oddjacobi.catalog import NEGATIVE_ENTRIES

        assert set(NEGATIVE_ENTRIES) == {"nonjacobi_3dim", "nonflat_connection"}


class TestAlgebroidFields:
    def test_tangent_extension_structure(self):
        model = catalog("tangent_extension")
        decl = model.structures["tangent_extension"]
        assert decl.algebroid is not None
        names = {f.dual_name for f in decl.algebroid.fibres}
        assert names == {"xs1", "tau"}

    def test_unparseable_field_name(self):
        src = (
            "chart C { coord x: even; coord eta: odd weight 1; }\n"
            "structure algebroid a on C { anchor_bad = 1; }\n"
        )
        with pytest.raises(DslError):
            parse(src)

    def test_fibres_must_have_weight_one(self):
        src = (
            "chart C { coord x: even; coord eta: odd weight 2; }\n"
            "structure algebroid a on C { }\n"
        )
        with pytest.raises(DslError):
            parse(src)
