"""
Tests for born_systems: system validation, morphism squares, the embedding
of spaces, spatialization and the reflection of systems onto spaces.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, 'src')

from born_spaces import TWO, BornSpace, identity_morphism, space_morphism, validate_space
from born_systems import (
    BornSystem, Corestriction, IdealCarrier, MemberLattice, RampFamily, SystemMorphism, cofinal_chain,
    embed_morphism, embed_space, identity_system_morphism, is_system_morphism, loc, morphisms_into_embedding,
    reflection_arrow, spatialize, spatialize_morphism, validate_system, verify_fullness, verify_universal_property,
)
from catalog import lattice, omega
from errors import NoCoverage, NotIdealMorphism, NotRepresentable, StructureError
from ideal_engine import RampDownset, all_finite_ideal, full_ideal, principal_ideal
from lattice_core import OMEGA, BasisMap
from powerset_theory import FunctionLattice, GroundMap, GroundSet
from workspace import parse

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = [FIXTURES / name for name in ("base.bl", "spaces.bl", "systems.bl", "morphisms.bl")]

X1 = GroundSet("X1", ("x",))
X2 = GroundSet("X2", ("x", "y"))
FOLD = GroundMap.from_dict(X2, X1, {"x": "x", "y": "x"}, name="fold")


def table_system(ground, basis, bobj, rows, name=''):
    carrier = FunctionLattice(basis, ground)
    kappa = BasisMap.from_table(bobj, carrier, {b: carrier.make(v) for b, v in rows.items()}, 'kappa')
    return validate_system(ground, kappa, bobj, basis, name=name)


def two_point():
    return table_system(X1, TWO, lattice("2"), {"0": ("0",), "1": ("1",)}, "two_point")


def b2_split():
    rows = {"0": ("0", "0"), "a": ("1", "0"), "b": ("0", "1"), "1": ("1", "1")}
    return table_system(X2, TWO, lattice("B2"), rows, "b2_split")


def two_diag():
    return table_system(X2, TWO, lattice("2"), {"0": ("0", "0"), "1": ("1", "1")}, "two_diag")


def ramp_system(ground, coordinates, name=''):
    w = omega()
    carrier = FunctionLattice(w, ground)
    kappa = RampFamily(w, carrier, tuple(coordinates), 'kappa')
    return validate_system(ground, kappa, w, w, name=name)


def rising():
    w = omega()
    return BasisMap.from_ramp(w, w, slope=1, offset=0, cap=OMEGA)


def jumping():
    w = omega()
    return BasisMap.from_ramp(w, w, {0: 0}, slope=0, cap=OMEGA)


def ramp_mixed():
    return ramp_system(X2, [rising(), jumping()], "ramp_mixed")


def join_b2():
    return BasisMap.from_table(lattice("B2"), lattice("2"), {"0": "0", "a": "1", "b": "1", "1": "1"}, "joinB2")


def test_table_system_is_valid():
    system = b2_split()
    assert loc(system) == lattice("B2")
    assert spatialize(system).bornology == full_ideal(system.carrier)


def test_kappa_must_cover():
    with pytest.raises(NoCoverage):
        table_system(X1, TWO, lattice("2"), {"0": ("0",), "1": ("0",)})


def test_kappa_must_keep_bottom():
    with pytest.raises(NotIdealMorphism):
        table_system(X1, TWO, lattice("2"), {"0": ("1",), "1": ("1",)})


def test_kappa_must_keep_meets():
    rows = {"0": ("0", "0"), "a": ("1", "0"), "b": ("1", "1"), "1": ("1", "1")}
    with pytest.raises(NotIdealMorphism):
        table_system(X2, TWO, lattice("B2"), rows)


def test_chain_basis_object_spatializes_to_a_principal_ideal():
    c3 = lattice("C3")
    with pytest.raises(NoCoverage):
        table_system(X2, c3, lattice("2"), {"0": ("0", "0"), "1": ("1", "m")})
    covered = table_system(X2, c3, c3, {"0": ("0", "0"), "m": ("m", "0"), "1": ("1", "1")})
    assert set(spatialize(covered).bornology.members) == set(covered.carrier.elements())


def test_ramp_system_spatializes_to_a_ramp_downset():
    system = ramp_mixed()
    space = spatialize(system)
    assert space.bornology == RampDownset(system.carrier, frozenset({"x"}), system.carrier.top)
    assert space.name == "Spat(ramp_mixed)"
    assert system.kappa(3).values == (3, OMEGA)


def test_ramp_family_shape_is_checked():
    w = omega()
    carrier = FunctionLattice(w, X2)
    with pytest.raises(StructureError):
        RampFamily(w, carrier, (rising(),))
    pinned = BasisMap.from_ramp(w, w, slope=1, offset=0, cap=3, at_omega=OMEGA)
    with pytest.raises(StructureError):
        RampFamily(w, carrier, (rising(), pinned))


def test_morphism_square_commutes():
    m = SystemMorphism(b2_split(), two_point(), FOLD, join_b2(), BasisMap.identity(TWO), "split_to_point")
    verdict = is_system_morphism(m)
    assert verdict
    assert verdict.checked == 4
    assert loc(m) == join_b2()


def test_square_failure_names_the_point():
    system = two_diag()
    zero = BasisMap.from_table(lattice("2"), lattice("2"), {"0": "0", "1": "0"}, "zero2")
    m = SystemMorphism(system, system, GroundMap.identity(X2), zero, BasisMap.identity(TWO))
    verdict = is_system_morphism(m)
    assert not verdict
    assert verdict.witness == "1"


def test_identity_and_composition():
    m = SystemMorphism(b2_split(), two_point(), FOLD, join_b2(), BasisMap.identity(TWO))
    assert is_system_morphism(identity_system_morphism(m.src))
    assert is_system_morphism(m.compose(identity_system_morphism(m.dst)))
    assert is_system_morphism(identity_system_morphism(ramp_mixed()))


def test_ramp_morphism_and_its_spatialization():
    w = omega()
    pair = ramp_system(X2, [rising(), rising()], "ramp_pair")
    one = ramp_system(X1, [rising()], "ramp_one")
    m = SystemMorphism(pair, one, FOLD, BasisMap.identity(w), BasisMap.identity(w), "ramp_fold")
    assert is_system_morphism(m)
    spatial = spatialize_morphism(m)
    assert spatial.src.bornology == all_finite_ideal(pair.carrier)
    assert spatial.dst.bornology == all_finite_ideal(one.carrier)


def test_spatializing_a_table_morphism():
    m = SystemMorphism(b2_split(), two_point(), FOLD, join_b2(), BasisMap.identity(TWO))
    spatial = spatialize_morphism(m)
    assert spatial.ground_map == FOLD


def test_embedding_round_trips_through_spatialization():
    space = validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X2)), name="two_pairs")
    system = embed_space(space)
    assert isinstance(system.bobj, MemberLattice)
    assert system.name == "E(two_pairs)"
    assert spatialize(system).bornology == space.bornology

    w = omega()
    ramp_space = validate_space(X2, w, all_finite_ideal(FunctionLattice(w, X2)), name="w_finite")
    ramp_embedded = embed_space(ramp_space)
    assert isinstance(ramp_embedded.bobj, IdealCarrier)
    assert spatialize(ramp_embedded).bornology == ramp_space.bornology


def test_large_bornologies_are_not_embedded():
    c3 = lattice("C3")
    space = validate_space(X2, c3, full_ideal(FunctionLattice(c3, X2)))
    with pytest.raises(NotRepresentable):
        embed_space(space, max_members=4)


def test_embedded_morphism_commutes():
    src = validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X2)))
    dst = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)))
    m = space_morphism(src, dst, FOLD, BasisMap.identity(TWO), name="fold_pairs")
    assert is_system_morphism(embed_morphism(m))
    assert is_system_morphism(embed_morphism(identity_morphism(src)))


def test_cofinal_chain_presents_the_ramp_bornology():
    space = spatialize(ramp_mixed())
    chain = cofinal_chain(space)
    assert chain.bobj == omega()
    assert spatialize(chain).bornology == space.bornology
    assert chain.kappa(1).values == (1, OMEGA)


def test_cofinal_chain_needs_a_ramp_bornology():
    space = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)))
    with pytest.raises(NotRepresentable):
        cofinal_chain(space)


@pytest.mark.parametrize("build", [two_point, b2_split, two_diag, ramp_mixed], ids=lambda f: f.__name__)
def test_reflection_arrow_is_a_morphism(build):
    system = build()
    eta = reflection_arrow(system)
    assert eta.dst.name == f"E(Spat({system.name}))"
    assert is_system_morphism(eta)


def test_universal_property_through_a_fold():
    system = b2_split()
    target = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)), name="two_full")
    embedded = embed_space(target)
    members = {a.values: a for a in embedded.bobj.elements()}
    theta = BasisMap.from_table(system.bobj, embedded.bobj,
                                {"0": members[("0",)], "a": members[("1",)], "b": members[("1",)],
                                 "1": members[("1",)]})
    m = SystemMorphism(system, embedded, FOLD, theta, BasisMap.identity(TWO))
    verdict = verify_universal_property(system, target, m)
    assert verdict
    assert verdict.checked >= 8


def test_universal_property_of_the_reflection_itself():
    system = ramp_mixed()
    target = spatialize(system)
    assert verify_universal_property(system, target, reflection_arrow(system))


def test_universal_property_rejects_a_non_commuting_arrow():
    system = two_diag()
    target = spatialize(system)
    embedded = embed_space(target)
    bottom = embedded.bobj.bot
    theta = BasisMap.from_table(system.bobj, embedded.bobj, {"0": bottom, "1": bottom})
    m = SystemMorphism(system, embedded, GroundMap.identity(X2), theta, BasisMap.identity(TWO))
    assert not verify_universal_property(system, target, m)


def test_universal_property_needs_the_embedding_of_the_target():
    system = two_point()
    target = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)), name="two_full")
    m = identity_system_morphism(system)
    verdict = verify_universal_property(system, target, m)
    assert not verdict
    assert "embedding of the target" in verdict.detail


def test_every_morphism_into_an_embedding_factors_on_the_corpus():
    ws = parse(CORPUS)
    total = 0
    for system in ws.systems.values():
        if len(system.ground) > 3:
            continue
        for target in ws.spaces.values():
            if target.basis != system.basis or len(target.ground) > 3:
                continue
            for m in morphisms_into_embedding(system, target):
                total += 1
                assert is_system_morphism(m), (system.name, target.name, m.ground_map.images)
                assert verify_universal_property(system, target, m), (system.name, target.name)
    assert total > 0


def test_morphisms_into_an_embedding_follow_the_bornology():
    system = two_diag()
    pairs = validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X2)), name="two_pairs")
    assert len(list(morphisms_into_embedding(system, pairs))) == 4
    point = BornSpace(X1, TWO, principal_ideal(FunctionLattice(TWO, X1), FunctionLattice(TWO, X1).bot), "two_bottom")
    assert list(morphisms_into_embedding(system, point)) == []
    assert list(morphisms_into_embedding(ramp_mixed(), pairs)) == []


def test_square_is_checked_at_omega():
    w = omega()
    carrier = FunctionLattice(w, X1)
    capped = BornSystem(X1, w, w, RampFamily(w, carrier, (BasisMap.from_ramp(w, w, {0: 0}, slope=0, cap=3),)),
                        "capped")
    target = ramp_system(X1, [rising()], "ramp_one")
    pinned = BasisMap.from_ramp(w, w, {0: 0}, slope=0, cap=3, at_omega=OMEGA)
    m = SystemMorphism(capped, target, GroundMap.identity(X1), pinned, BasisMap.identity(w))
    verdict = is_system_morphism(m)
    assert not verdict
    assert verdict.witness == OMEGA


def test_basis_object_map_must_land_in_the_target():
    system = two_point()
    carrier = FunctionLattice(TWO, X1)
    embedded = embed_space(BornSpace(X1, TWO, principal_ideal(carrier, carrier.bot), "two_bottom"))
    theta = Corestriction(system.bobj, embedded.bobj, system.kappa)
    m = SystemMorphism(system, embedded, GroundMap.identity(X1), theta, BasisMap.identity(TWO))
    verdict = is_system_morphism(m)
    assert not verdict
    assert verdict.witness == "1"
    assert verdict.detail == "basis-object map leaves the target basis object"


@pytest.mark.parametrize("first, second", [("ramp_pair_id", "ramp_fold"), ("ramp_pair_id", "ramp_pair_id"),
                                           ("diag_swap", "diag_swap")])
def test_spatialization_preserves_composition(first, second):
    ws = parse(CORPUS)
    m, n = ws.morphisms[first], ws.morphisms[second]
    composite = m.compose(n)
    assert is_system_morphism(composite)
    assert spatialize_morphism(composite) == spatialize_morphism(m).compose(spatialize_morphism(n))


@pytest.mark.parametrize("name", ["two_point", "b2_split", "ramp_pair", "ramp_one"])
def test_spatialization_preserves_identities(name):
    system = parse(CORPUS).systems[name]
    assert spatialize_morphism(identity_system_morphism(system)) == identity_morphism(spatialize(system))


def test_embedding_is_full_on_a_fold():
    src = validate_space(X2, TWO, full_ideal(FunctionLattice(TWO, X2)))
    dst = validate_space(X1, TWO, full_ideal(FunctionLattice(TWO, X1)))
    m = space_morphism(src, dst, FOLD, BasisMap.identity(TWO))
    verdict = verify_fullness(m)
    assert verdict
    assert verdict.checked == 1


def test_fullness_is_not_checked_on_ramp_bornologies():
    w = omega()
    space = validate_space(X1, w, all_finite_ideal(FunctionLattice(w, X1)))
    verdict = verify_fullness(identity_morphism(space))
    assert not verdict
    assert "extensional" in verdict.detail
