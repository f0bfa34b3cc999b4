"""
Tests for lattice_core: lattice construction, distributivity, homomorphism
checks, right adjoints and the ramp composition catalog.
"""

import itertools
import sys

import hypothesis
import hypothesis.strategies as strat
import pytest

sys.path.insert(0, 'src')

from catalog import finite_lattices, join_preserving_maps, lattice, omega, omega_maps
from errors import LatticeError, NoBotTop, NoJoin, NotAPoset, NotJoinPreserving, NotMonotone
from lattice_core import (
    JOIN_PRESERVING, LATTICE_HOM, OMEGA, BasisMap, LatticeSpec, OpSignature, build_lattice, check_homomorphism,
    compose_basis_maps, describe_lattice, galois_verdict, is_distributive, right_adjoint,
)
from powerset_theory import FunctionLattice, GroundSet


def spec(name, elements, covers):
    return LatticeSpec(name, 'finite', list(elements), list(covers))


def test_chain_builds():
    c3 = build_lattice(spec("C3", ["0", "m", "1"], [("0", "m"), ("m", "1")]))
    assert c3.bot == "0"
    assert c3.top == "1"
    assert c3.meet("m", "1") == "m"
    assert c3.join("0", "m") == "m"


def test_two_maxima_have_no_join():
    with pytest.raises(NoJoin):
        build_lattice(spec("V", ["0", "a", "b"], [("0", "a"), ("0", "b")]))


def test_diamond_is_a_lattice():
    m3 = lattice("M3")
    for a, b in itertools.combinations(["a", "b", "c"], 2):
        assert m3.join(a, b) == "1"
        assert m3.meet(a, b) == "0"


def test_cycle_is_not_a_poset():
    with pytest.raises(NotAPoset):
        build_lattice(spec("Loop", ["0", "a", "1"], [("0", "a"), ("a", "0"), ("a", "1")]))


def test_declared_top_must_be_the_top():
    with pytest.raises(NoBotTop):
        build_lattice(LatticeSpec("C3", 'finite', ["0", "m", "1"], [("0", "m"), ("m", "1")], top="m"))


def test_unknown_element_in_cover():
    with pytest.raises(NotAPoset):
        build_lattice(spec("Bad", ["0", "1"], [("0", "2")]))


def test_build_is_deterministic():
    first = describe_lattice(lattice("N5"))
    second = describe_lattice(build_lattice(first))
    assert first == second
    assert lattice("N5") == build_lattice(first)


def test_distributivity():
    assert is_distributive(lattice("C3"))
    assert is_distributive(lattice("B2"))
    assert not is_distributive(lattice("M3"))
    assert not is_distributive(lattice("N5"))
    assert is_distributive(omega())


def test_distributivity_of_powers():
    m3 = lattice("M3")
    assert is_distributive(FunctionLattice(m3, GroundSet("E", ())))
    assert not is_distributive(FunctionLattice(m3, GroundSet("X1", ("x",))))
    assert is_distributive(FunctionLattice(omega(), GroundSet("X2", ("x", "y"))))


def test_identity_is_a_lattice_homomorphism():
    assert check_homomorphism(BasisMap.identity(lattice("C3")), LATTICE_HOM)


def test_bottom_to_middle_breaks_bottom():
    phi = BasisMap.from_table(lattice("2"), lattice("C3"), {"0": "m", "1": "1"})
    assert not check_homomorphism(phi, OpSignature.of("Bot"))


def test_collapse_to_two_preserves_joins():
    assert check_homomorphism(omega_maps()["collapse2"], JOIN_PRESERVING)


def test_capped_ramp_is_not_continuous_at_omega():
    w = omega()
    phi = BasisMap.from_ramp(w, w, slope=1, offset=0, cap=3, at_omega=OMEGA)
    assert phi(2) == 2
    assert phi(10) == 3
    assert phi(OMEGA) == OMEGA
    assert not check_homomorphism(phi, JOIN_PRESERVING)


def test_ramp_rejects_negative_values():
    w = omega()
    with pytest.raises(NotMonotone):
        BasisMap.from_ramp(w, w, slope=1, offset=-2, cap=OMEGA)


def test_ramp_rejects_slope_two():
    w = omega()
    with pytest.raises(LatticeError):
        BasisMap.from_ramp(w, w, slope=2, cap=OMEGA)


def test_ramp_canonical_form():
    w = omega()
    spelled_out = BasisMap.from_ramp(w, w, {0: 0, 1: 2, 2: 3}, slope=1, offset=1, cap=OMEGA)
    short = BasisMap.from_ramp(w, w, {0: 0}, slope=1, offset=1, cap=OMEGA)
    assert spelled_out == short


def test_adjoint_of_identity():
    c3 = lattice("C3")
    identity = BasisMap.identity(c3)
    assert right_adjoint(identity) == identity


def test_adjoint_of_two_into_c3():
    phi = BasisMap.from_table(lattice("2"), lattice("C3"), {"0": "0", "1": "1"})
    adjoint = right_adjoint(phi)
    assert [adjoint(b) for b in ["0", "m", "1"]] == ["0", "0", "1"]


def test_adjoint_of_c3_onto_two():
    phi = BasisMap.from_table(lattice("C3"), lattice("2"), {"0": "0", "m": "0", "1": "1"})
    adjoint = right_adjoint(phi)
    assert adjoint("0") == "m"
    assert adjoint("1") == "1"


def test_adjoint_of_collapse():
    adjoint = right_adjoint(omega_maps()["collapse2"])
    assert adjoint("0") == 0
    assert adjoint("1") == OMEGA


def test_adjoint_needs_join_preservation():
    phi = BasisMap.from_table(lattice("2"), lattice("2"), {"0": "1", "1": "1"})
    with pytest.raises(NotJoinPreserving):
        right_adjoint(phi)


@pytest.mark.parametrize("name", ["id", "shift", "lag", "collapse2", "collapse3", "embed2", "embedC3"])
def test_omega_catalog_galois(name):
    phi = omega_maps()[name]
    assert galois_verdict(phi, right_adjoint(phi), 6)


def test_ramp_composition_matches_pointwise():
    maps = omega_maps()
    w_maps = [maps[k] for k in ("id", "shift", "lag", "cap3")]
    for first, second in itertools.product(w_maps, repeat=2):
        composite = compose_basis_maps(first, second)
        for n in list(range(9)) + [OMEGA]:
            assert composite(n) == second(first(n)), (first.name, second.name, n)


def test_composition_into_finite_lattice():
    maps = omega_maps()
    composite = compose_basis_maps(maps["shift"], maps["collapse2"])
    assert composite(0) == "0"
    assert composite(1) == "1"
    assert composite(OMEGA) == "1"


_SMALL = [lat for lat in finite_lattices(4)]
_JOIN_MAPS = [phi for src, dst in itertools.product(_SMALL, repeat=2) for phi in join_preserving_maps(src, dst)]


@hypothesis.given(strat.sampled_from(_JOIN_MAPS))
def test_galois_law_on_finite_catalog(phi):
    # phi(a) <= b  iff  a <= phi^(b)
    adjoint = right_adjoint(phi)
    for a in phi.src.elements():
        for b in phi.dst.elements():
            assert phi.dst.leq(phi(a), b) == phi.src.leq(a, adjoint(b))


@hypothesis.given(strat.sampled_from(_JOIN_MAPS), strat.data())
def test_finite_composition_is_pointwise(phi, data):
    second = data.draw(strat.sampled_from([psi for psi in _JOIN_MAPS if psi.src == phi.dst]))
    composite = compose_basis_maps(phi, second)
    assert all(composite(a) == second(phi(a)) for a in phi.src.elements())
