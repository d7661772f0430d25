import json
from fractions import Fraction

import pytest

from dgwb.dgalg.algebra import DgAlgebra
from dgwb.dgalg.constructions import localize
from dgwb.exactalg.base import BaseRing
from dgwb.exactalg.polynomial import MonomialOrder
from dgwb.io import (TERM_ORDER, InputError, algebra_from_json, algebra_to_json, atlas_from_json,
                     canonical_json, load_algebra, load_atlas, load_morphism, load_points, parse_source,
                     simplicial_from_json)
from dgwb.sampling import SamplingError, sample_points

from conftest import fixture_path


def _parse(obj):
    text = json.dumps(obj, indent=1)
    data, src = parse_source(text, "mem.json")
    return algebra_from_json(data, src)


def test_fixture_roundtrip(fixture_algebra):
    _, A = fixture_algebra
    data, src = parse_source(canonical_json(algebra_to_json(A)))
    assert algebra_from_json(data, src).same_structure(A)


def test_morphism_references_resolve_relative_to_file():
    phi = load_morphism(fixture_path("incl_twin.json"))
    assert phi.target.names == ("e1", "e2")


def test_atlas_loading():
    at = load_atlas(fixture_path("atlas_cover.json"))
    assert at.element_strings() == ["x", "-x + 1"]


@pytest.mark.parametrize("name,needle", [
    ("positive_degree.json", "degree must be <= 0"),
    ("unknown_symbol.json", "unknown symbol f"),
    ("not_json.json", "Expecting"),
])
def test_malformed_inputs_report_positions(name, needle):
    with pytest.raises(InputError) as exc:
        load_algebra(fixture_path("invalid", name))
    err = exc.value
    assert needle in err.message
    assert err.line >= 1 and err.column >= 1


def test_unknown_symbol_position_points_into_expression():
    text = '{"base": {"variables": ["x"]},\n "generators": [{"name": "e", "degree": -1, "differential": "x*f"}]}'
    data, src = parse_source(text, "t.json")
    with pytest.raises(InputError) as exc:
        algebra_from_json(data, src)
    assert exc.value.line == 2
    assert text.split("\n")[1][exc.value.column - 1] == "f"


def test_bad_variable_name_rejected():
    with pytest.raises(InputError):
        _parse({"base": {"variables": ["1x"]}, "generators": []})


def test_points_file():
    pts = load_points(fixture_path("samples.json"))
    assert [p["x"] for p in pts] == [0, 1, 2, Fraction(1, 2), -1]


def test_term_order_context():
    token = TERM_ORDER.set(MonomialOrder("lex"))
    try:
        A = load_algebra(fixture_path("koszul.json"))
    finally:
        TERM_ORDER.reset(token)
    assert A.base.order.kind == "lex"


def test_simplicial_shape_errors():
    data, src = parse_source('{"levels": [], "faces": []}')
    with pytest.raises(InputError):
        simplicial_from_json(data, src)
    A = algebra_to_json(DgAlgebra(BaseRing(("x",)), []))
    data, src = parse_source(json.dumps({"levels": [A, A], "faces": [[], []], "degeneracies": [[{}]]}))
    with pytest.raises(InputError):
        simplicial_from_json(data, src)


# -- sampling ---------------------------------------------------------------------------

def test_sampling_is_deterministic(qx):
    assert sample_points(qx, 5, 7) == sample_points(qx, 5, 7)
    assert len({p["x"] for p in sample_points(qx, 5, 7)}) == 5


def test_sampling_respects_inverses(qx):
    L, _ = localize(qx, "x^2 - 1")
    t = L.base.variables[-1]
    for p in sample_points(L, 5, 1):
        assert p["x"] ** 2 != 1 and p[t] * (p["x"] ** 2 - 1) == 1


def test_sampling_pins_linear_relations():
    A = DgAlgebra(BaseRing(("x", "y"), ("2*x - 1",)), [])
    pts = sample_points(A, 4, 0)
    assert all(p["x"] == Fraction(1, 2) for p in pts)


def test_sampling_without_free_variables():
    A = DgAlgebra(BaseRing(("x",), ("x - 3",)), [])
    assert sample_points(A, 5, 0) == [{"x": Fraction(3)}]


def test_sampling_fails_on_empty_locus():
    A = DgAlgebra(BaseRing(("x", "y"), ("x^2 + y^2 + 1",)), [])
    with pytest.raises(SamplingError):
        sample_points(A, 2, 0, attempts=200)
