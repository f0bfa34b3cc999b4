"""
Tests for born_spaces: space validation, boundedness of (f, phi) and the
agreement with the classical set-based axioms over the two-element basis.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, 'src')

from born_spaces import (
    TWO, all_families, characteristic, classical_axioms, family_to_ideal, identity_morphism, is_bounded,
    space_morphism, validate_space,
)
from catalog import collapse_to_omega, ground_set, ground_sets, lattice, omega
from errors import BasisMismatch, NoCoverage, NotAnIdeal, StructureError
from ideal_engine import RampDownset, all_finite_ideal, full_ideal, principal_ideal
from lattice_core import OMEGA, BasisMap
from powerset_theory import FunctionLattice, GroundMap, GroundSet
from workspace import parse

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = [FIXTURES / name for name in ("base.bl", "spaces.bl", "systems.bl", "morphisms.bl")]

X1 = GroundSet("X1", ("x",))
X2 = GroundSet("X2", ("x", "y"))


def test_full_bornology_on_a_point():
    space = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)), name="two_full")
    assert space.carrier == FunctionLattice(TWO, X1)
    assert space.bornology.contains(characteristic(X1, {"x"}))


def test_bottom_alone_does_not_cover():
    carrier = FunctionLattice(TWO, X1)
    with pytest.raises(NoCoverage):
        validate_space(X1, TWO, principal_ideal(carrier, carrier.bot))


def test_missing_union_is_not_an_ideal():
    family = [frozenset(), frozenset({"x"}), frozenset({"y"})]
    with pytest.raises(NotAnIdeal) as err:
        validate_space(X2, TWO, family_to_ideal(X2, family).members)
    assert err.value.invariant == "ideal"


def test_bornology_on_the_wrong_carrier():
    with pytest.raises(NotAnIdeal):
        validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X1)))


def test_principal_c3_bornology():
    c3 = lattice("C3")
    carrier = FunctionLattice(c3, X2)
    space = validate_space(X2, c3, principal_ideal(carrier, carrier.top))
    assert len(space.bornology) == 9


def test_all_finite_covers_through_arbitrary_joins():
    carrier = FunctionLattice(omega(), X1)
    space = validate_space(X1, omega(), all_finite_ideal(carrier), level=4)
    assert not space.bornology.contains(carrier.top)


def test_identity_is_bounded():
    c3 = lattice("C3")
    carrier = FunctionLattice(c3, X2)
    space = validate_space(X2, c3, full_ideal(carrier))
    verdict = is_bounded(GroundMap.identity(X2), BasisMap.identity(c3), space, space)
    assert verdict
    assert verdict.checked == 9


def test_forgetting_omega_is_unbounded():
    w = omega()
    carrier = FunctionLattice(w, X2)
    full = validate_space(X2, w, full_ideal(carrier))
    finite = validate_space(X2, w, all_finite_ideal(carrier))
    verdict = is_bounded(GroundMap.identity(X2), BasisMap.identity(w), full, finite)
    assert not verdict
    assert OMEGA in verdict.witness.values
    assert is_bounded(GroundMap.identity(X2), BasisMap.identity(w), finite, full)


def test_collapse_sends_one_to_omega():
    w = omega()
    space = validate_space(X1, w, all_finite_ideal(FunctionLattice(w, X1)))
    verdict = is_bounded(GroundMap.identity(X1), collapse_to_omega(), space, space)
    assert not verdict
    assert verdict.witness.values == (1,)


def test_unbounded_beyond_the_truncation_level():
    w = omega()
    carrier = FunctionLattice(w, X1)
    src = validate_space(X1, w, all_finite_ideal(carrier))
    low = RampDownset(carrier, frozenset(), carrier.make((5,)))
    dst = validate_space(X1, w, low, name="below_five")
    verdict = is_bounded(GroundMap.identity(X1), BasisMap.identity(w), src, dst, level=2)
    assert not verdict
    assert verdict.witness.values == (6,)
    assert verdict.checked == 3


def test_fold_is_bounded_on_full_bornologies():
    src = validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X2)))
    dst = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)))
    fold = GroundMap.from_dict(X2, X1, {"x": "x", "y": "x"}, name="fold")
    morphism = space_morphism(src, dst, fold, BasisMap.identity(TWO), name="fold_pairs")
    assert morphism.compose(identity_morphism(dst)) == morphism
    assert identity_morphism(src).compose(morphism) == morphism


def test_space_morphism_refuses_unbounded_maps():
    w = omega()
    space = validate_space(X1, w, all_finite_ideal(FunctionLattice(w, X1)))
    with pytest.raises(StructureError) as err:
        space_morphism(space, space, GroundMap.identity(X1), collapse_to_omega())
    assert err.value.invariant == "bounded"


def test_shapes_must_fit():
    space = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)))
    c3 = lattice("C3")
    with pytest.raises(BasisMismatch):
        is_bounded(GroundMap.identity(X1), BasisMap.identity(c3), space, space)


def test_classical_axioms_examples():
    assert classical_axioms(X2, [frozenset(), frozenset({"x"}), frozenset({"y"}), frozenset({"x", "y"})])
    assert not classical_axioms(X2, [frozenset(), frozenset({"x"}), frozenset({"y"})])
    assert not classical_axioms(X2, [frozenset(), frozenset({"x"})])
    assert classical_axioms(GroundSet("E", ()), [frozenset()])


@pytest.mark.parametrize("ground", ground_sets(3), ids=lambda g: g.name)
def test_two_valued_spaces_match_classical_bornologies(ground):
    for family in all_families(ground):
        try:
            validate_space(ground, TWO, family_to_ideal(ground, family).members)
            accepted = True
        except (NotAnIdeal, NoCoverage):
            accepted = False
        assert accepted == classical_axioms(ground, family), family


def test_two_valued_boundedness_is_classical():
    ground = ground_set(2)
    space = validate_space(ground, TWO, full_ideal(FunctionLattice(TWO, ground)))
    for f in GroundMap.all_maps(ground, ground):
        assert is_bounded(f, BasisMap.identity(TWO), space, space)


@pytest.mark.parametrize("first, second", [("include_point", "fold_pairs"), ("swap_pairs", "fold_pairs"),
                                           ("fold_pairs", "include_point"), ("shift_finite", "swap_finite"),
                                           ("swap_finite", "shift_finite")])
def test_composites_of_bounded_morphisms_are_bounded(first, second):
    ws = parse(CORPUS)
    m, n = ws.morphisms[first], ws.morphisms[second]
    composite = m.compose(n)
    assert composite.src == m.src and composite.dst == n.dst
    assert is_bounded(composite.ground_map, composite.basis_map, composite.src, composite.dst)


def test_composition_needs_matching_spaces():
    ws = parse(CORPUS)
    with pytest.raises(StructureError):
        ws.morphisms["fold_pairs"].compose(ws.morphisms["swap_pairs"])
