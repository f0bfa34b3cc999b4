"""
Tests for ideal_engine: ideal checks, generation against the closure
oracle, preimages, ideal-category morphisms and ICD at top.
"""

import sys

import hypothesis
import hypothesis.strategies as strat
import pytest

sys.path.insert(0, 'src')

from catalog import finite_lattices, ground_set, lattice, omega, omega_maps
from errors import IdealError, NotIdealMorphism, TooLarge
from ideal_engine import (
    ChainIdeal, GenerationMode, GeneratorSet, MeetMode, RampDownset, TermTag, all_finite_ideal,
    contains_top, enumerate_ideals, full_ideal, generate_ideal, ideal_catalog, ideal_closure, ideal_verdict,
    in_L_vdash, intersect_ideals, is_catit_morphism, is_icd_at_top, is_ideal, preimage_ideal, principal_ideal,
    same_ideal,
)
from lattice_core import OMEGA, BasisMap
from powerset_theory import FunctionLattice


def members(ideal):
    return set(ideal.members)


def test_bottom_alone_is_an_ideal():
    for lat in finite_lattices(5):
        assert is_ideal(lat, [lat.bot])


def test_missing_join_is_reported():
    m3 = lattice("M3")
    verdict = ideal_verdict(m3, ["0", "a", "b"])
    assert not verdict
    assert verdict.witness == ("a", "b")
    assert verdict.detail == "join missing"


def test_empty_subset_is_not_an_ideal():
    assert not is_ideal(lattice("2"), [])


def test_not_down_closed():
    assert not is_ideal(lattice("C3"), ["0", "1"])


def test_all_finite_ramp_is_an_ideal():
    carrier = FunctionLattice(omega(), ground_set(1))
    ramp = RampDownset(carrier, frozenset({"x1"}), carrier.top)
    for level in range(1, 6):
        assert ideal_verdict(carrier, ramp, level)


def test_generate_from_nothing():
    c3 = lattice("C3")
    assert members(generate_ideal(GeneratorSet(c3, ()))) == {"0"}


def test_generate_from_middle():
    c3 = lattice("C3")
    assert members(generate_ideal(GeneratorSet(c3, ("m",)))) == {"0", "m"}


@pytest.mark.parametrize("mode", [GenerationMode.LAT_BOT, GenerationMode.CLAT])
def test_generate_two_atoms_of_m3(mode):
    m3 = lattice("M3")
    assert members(generate_ideal(GeneratorSet(m3, ("a", "b")), mode)) == set(m3.elements())


def test_generator_outside_carrier():
    with pytest.raises(IdealError):
        GeneratorSet(lattice("2"), ("m",))


def test_contains_top():
    m3 = lattice("M3")
    assert contains_top(GeneratorSet(m3, ("1",)))
    assert contains_top(GeneratorSet(m3, ("a", "b")))
    assert not contains_top(GeneratorSet(m3, ("a",)))


def test_ramp_top_needs_arbitrary_joins():
    carrier = FunctionLattice(omega(), ground_set(1))
    ramp = all_finite_ideal(carrier)
    assert contains_top(ramp, GenerationMode.CLAT)
    assert not contains_top(ramp, GenerationMode.LAT_BOT)


def test_preimage_under_identity():
    c3 = lattice("C3")
    target = principal_ideal(c3, "m")
    assert preimage_ideal(BasisMap.identity(c3), target) == target


def test_preimage_under_collapse():
    collapse = omega_maps()["collapse2"]
    pulled = preimage_ideal(collapse, principal_ideal(lattice("2"), "0"))
    assert pulled == ChainIdeal(omega(), 0)


def test_preimage_under_c3_onto_two():
    phi = BasisMap.from_table(lattice("C3"), lattice("2"), {"0": "0", "m": "0", "1": "1"})
    pulled = preimage_ideal(phi, principal_ideal(lattice("2"), "0"))
    assert members(pulled) == {"0", "m"}


def test_preimage_needs_an_ideal_morphism():
    phi = BasisMap.from_table(lattice("2"), lattice("2"), {"0": "1", "1": "1"})
    with pytest.raises(NotIdealMorphism):
        preimage_ideal(phi, full_ideal(lattice("2")))


def test_catit_morphisms():
    two, c3 = lattice("2"), lattice("C3")
    assert is_catit_morphism(BasisMap.from_table(two, c3, {"0": "0", "1": "1"}))
    assert not is_catit_morphism(BasisMap.from_table(two, two, {"0": "1", "1": "1"}))
    assert is_catit_morphism(omega_maps()["shift"], MeetMode.STRICT, 6)


def test_interchange_is_weaker_than_strict():
    b2, two = lattice("B2"), lattice("2")
    # joins preserved, meets of the two atoms not
    phi = BasisMap.from_table(b2, two, {"0": "0", "a": "1", "b": "1", "1": "1"})
    assert not is_catit_morphism(phi, MeetMode.STRICT)
    assert is_catit_morphism(phi, MeetMode.INTERCHANGE)


def test_enumerate_small_lattices():
    two, c3 = lattice("2"), lattice("C3")
    assert [members(i) for i in enumerate_ideals(two)] == [{"0"}, {"0", "1"}]
    assert [members(i) for i in enumerate_ideals(c3)] == [{"0"}, {"0", "m"}, {"0", "m", "1"}]


def test_enumerate_omega_catalog():
    w = omega()
    catalog = enumerate_ideals(w, level=2)
    assert catalog == [ChainIdeal(w, 0), ChainIdeal(w, 1), ChainIdeal(w, 2),
                       ChainIdeal(w, OMEGA, True), ChainIdeal(w, OMEGA)]


def test_enumerate_refuses_large_lattices():
    with pytest.raises(TooLarge):
        enumerate_ideals(lattice("M3"), limit=4)


@pytest.mark.parametrize("lat", finite_lattices(5), ids=lambda lat: lat.name)
def test_finite_ideals_are_principal(lat):
    found = enumerate_ideals(lat)
    assert len(found) == len(lat.elements())
    for ideal in found:
        assert ideal == principal_ideal(lat, ideal.sup())


@pytest.mark.parametrize("lat", finite_lattices(5), ids=lambda lat: lat.name)
def test_icd_holds_on_finite_lattices(lat):
    assert is_icd_at_top(lat)


def test_icd_holds_on_omega():
    assert is_icd_at_top(omega(), level=3, max_family=3)


def test_in_l_vdash():
    two, c3 = lattice("2"), lattice("C3")
    assert in_L_vdash(BasisMap.identity(c3))
    assert in_L_vdash(BasisMap.from_table(two, c3, {"0": "0", "1": "1"}))
    assert in_L_vdash(omega_maps()["collapse2"])


def test_ramp_intersection():
    carrier = FunctionLattice(omega(), ground_set(2))
    first = RampDownset(carrier, frozenset({"x1"}), carrier.top)
    second = RampDownset(carrier, frozenset({"x2"}), carrier.make((OMEGA, 4)))
    both = intersect_ideals(first, second)
    assert both == RampDownset(carrier, frozenset({"x1"}), carrier.make((OMEGA, 4)))
    assert both.contains(carrier.make((7, 4)))
    assert not both.contains(carrier.make((OMEGA, 0)))


def test_region_outside_ceiling_is_dropped():
    carrier = FunctionLattice(omega(), ground_set(2))
    ramp = RampDownset(carrier, frozenset({"x1", "x2"}), carrier.make((OMEGA, 3)))
    assert ramp.region == frozenset({"x1"})
    assert same_ideal(ramp, RampDownset(carrier, frozenset({"x1"}), carrier.make((OMEGA, 3))))


def test_ramp_catalog_size():
    carrier = FunctionLattice(omega(), ground_set(2))
    # 3 finite levels, all-finite and full per coordinate
    assert len(ideal_catalog(carrier, 2)) == 25


def test_term_tags_are_ideal_terms():
    c3 = lattice("C3")
    for tag in (TermTag.BOT, TermTag.BIN_MEET, TermTag.FINITE_JOIN, TermTag.ARB_JOIN):
        assert tag.is_ideal_term(c3)
    assert not TermTag.ARB_MEET.is_ideal_term(c3)


_LATTICES = finite_lattices(5)


@hypothesis.given(strat.sampled_from(_LATTICES), strat.data())
def test_generation_matches_closure_oracle(lat, data):
    gens = data.draw(strat.lists(strat.sampled_from(lat.elements()), max_size=3))
    generated = generate_ideal(GeneratorSet(lat, tuple(gens)), GenerationMode.LAT_BOT)
    assert generated == ideal_closure(lat, gens)
    assert generated == principal_ideal(lat, lat.sup(gens))
    assert is_ideal(lat, generated)


@hypothesis.given(strat.lists(strat.sampled_from([0, 1, 2, 3, OMEGA]), min_size=2, max_size=2),
                  strat.sets(strat.sampled_from(["x1", "x2"])))
def test_ramp_membership_matches_oracle(ceiling, region):
    carrier = FunctionLattice(omega(), ground_set(2))
    ramp = RampDownset(carrier, frozenset(region), carrier.make(tuple(ceiling)))
    assert ideal_verdict(carrier, ramp, 4)
    for alpha in carrier.truncated_elements(4):
        expected = all(v <= c for v, c in zip(alpha.values, ceiling)) and not any(
            v == OMEGA for x, v in zip(("x1", "x2"), alpha.values) if x in region)
        assert ramp.contains(alpha) == expected
