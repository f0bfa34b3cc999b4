"""
Tests for workspace: parsing the text format, name resolution errors and
the canonical serialization.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, 'src')

from born_systems import RampFamily
from catalog import omega_maps
from errors import DuplicateName, InputError, ParseError, UnresolvedReference
from ideal_engine import RampDownset
from lattice_core import OMEGA
from workspace import format_ideal, parse, parse_text, serialize

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = [FIXTURES / name for name in ("base.bl", "spaces.bl", "systems.bl", "sources.bl", "morphisms.bl")]


def base_workspace():
    return parse([FIXTURES / "base.bl"])


def test_empty_text_gives_an_empty_workspace():
    assert parse_text("").is_empty()
    assert parse_text("# only a comment\n").is_empty()


def test_corpus_parses():
    ws = parse(CORPUS)
    assert len(ws.lattices) == 7
    assert len(ws.sets) == 4
    assert len(ws.spaces) == 10
    assert len(ws.systems) == 22
    assert len(ws.sources) == 5
    assert len(ws.morphisms) == 10


def test_ramp_basis_maps_are_normalized():
    ws = base_workspace()
    assert ws.basismaps["shift"] == omega_maps()["shift"]
    assert ws.basismaps["collapse"](4) == OMEGA


def test_ramp_space_literal():
    ws = parse(CORPUS[:2])
    tau = ws.spaces["w_mixed"].bornology
    assert isinstance(tau, RampDownset)
    assert tau.region == frozenset({"x"})
    assert format_ideal(tau) == "ideal ramp region={x} ceiling={x=w y=w}"


def test_ramp_kappa_literal():
    ws = parse(CORPUS[:3])
    system = ws.systems["ramp_mixed"]
    assert isinstance(system.kappa, RampFamily)
    assert system.kappa(2).values == (2, OMEGA)
    assert system.kappa(0).values == (0, 0)


def test_identity_names_resolve_without_a_declaration():
    ws = parse(CORPUS)
    leg = ws.sources["mixed_and_folded"].legs[0]
    assert leg.ground_map.images == ("x", "y")
    assert ws.morphisms["ramp_pair_id"].bobj_map(5) == 5


def test_serialization_is_stable():
    ws = parse(CORPUS)
    text = serialize(ws)
    again = parse_text(text, "<serialized>")
    assert serialize(again) == text
    assert again.systems == ws.systems
    assert again.spaces == ws.spaces
    assert again.basismaps == ws.basismaps


def test_invalid_lattice_is_recorded_not_raised():
    ws = parse([FIXTURES / "invalid" / "not_lattice.bl"])
    assert "V" in ws.lattice_errors
    assert "V" not in ws.lattices
    with pytest.raises(UnresolvedReference):
        parse_text("set P { p }\nspace s ground P basis V ideal full\n", workspace=ws)


def test_syntax_error_reports_the_line():
    with pytest.raises(ParseError) as err:
        parse([FIXTURES / "invalid" / "syntax.bl"])
    assert err.value.line == 3
    assert "syntax.bl" in str(err.value)


def test_duplicate_names():
    with pytest.raises(DuplicateName):
        parse([FIXTURES / "invalid" / "duplicate.bl"])


def test_dangling_reference():
    with pytest.raises(UnresolvedReference) as err:
        parse([FIXTURES / "base.bl", FIXTURES / "invalid" / "dangling.bl"])
    assert "L9" in str(err.value)


def test_dangling_fixture_alone_fails_on_the_ground_set():
    with pytest.raises(UnresolvedReference):
        parse([FIXTURES / "invalid" / "dangling.bl"])


@pytest.mark.parametrize("text", [
    "fn f : X1 -> Two { x=0 x=1 }",
    "fn f : X1 -> Two { x=m }",
    "fn f : X1 -> Two { }",
    "map g : X2 -> X1 { x -> x x -> x y -> x }",
    "system s ground X2 basis W bobj W kappa ramp { x: slope=1 }",
])
def test_literal_errors(text):
    with pytest.raises(InputError):
        parse_text(text, workspace=base_workspace())


def test_missing_file():
    with pytest.raises(InputError):
        parse([FIXTURES / "missing.bl"])
