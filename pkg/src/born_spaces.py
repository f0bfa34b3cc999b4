"""
Bornological spaces module.
Spaces (X, tau) over a basis lattice, boundedness of (f, phi) between them,
and the classical set-based axioms used as a cross-check.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, FrozenSet, Iterable, List, Optional, Tuple

from errors import BasisMismatch, NoCoverage, NotAnIdeal, NotIdealMorphism, StructureError
from ideal_engine import (
    Extensional, GenerationMode, Ideal, RampDownset, basis_preimage, contains_top, coordinates, ideal_verdict,
)
from lattice_core import OMEGA, BasisMap, CompleteLattice, Verdict, chain_lattice
from powerset_theory import FunctionLattice, GroundMap, GroundSet, ImageOperator, LFunction

logger = logging.getLogger(__name__)

# the two-element lattice of the classical instance
TWO = chain_lattice("2", ("0", "1"))


@dataclass(frozen=True)
class BornSpace:
    ground: GroundSet
    basis: CompleteLattice
    bornology: Ideal
    name: str = field(default='', compare=False)

    @property
    def carrier(self) -> FunctionLattice:
        return FunctionLattice(self.basis, self.ground)


@dataclass(frozen=True)
class SpaceMorphism:
    src: BornSpace
    dst: BornSpace
    ground_map: GroundMap
    basis_map: BasisMap
    name: str = field(default='', compare=False)

    def image_operator(self) -> ImageOperator:
        return ImageOperator(self.ground_map, self.basis_map)

    def compose(self, second: 'SpaceMorphism') -> 'SpaceMorphism':
        """second AFTER self."""
        if self.dst != second.src:
            raise StructureError("Space morphisms do not compose: target and source differ")
        return SpaceMorphism(self.src, second.dst, self.ground_map.compose(second.ground_map),
                             self.basis_map.compose(second.basis_map))


def validate_space(ground: GroundSet, basis: CompleteLattice, tau: Any, level: Optional[int] = None,
                   name: str = '') -> BornSpace:
    """
    Check that tau is a bornology on ground over basis.

    Args:
        tau: an Ideal, or an iterable of LFunctions read extensionally
        level: truncation level for the ramp-downset oracle; None checks
            ramp downsets structurally only

    Raises:
        NotAnIdeal: tau fails the ideal axioms
        NoCoverage: top is not in the ideal generated by tau with arbitrary joins
    """
    carrier = FunctionLattice(basis, ground)
    if not isinstance(tau, Ideal):
        tau = Extensional(carrier, frozenset(tau))
    if tau.carrier != carrier:
        raise NotAnIdeal(f"Bornology of {name or 'space'} lives on {tau.carrier.name}, expected {carrier.name}",
                         invariant="carrier")
    verdict = ideal_verdict(carrier, tau, level)
    if not verdict:
        raise NotAnIdeal(f"Bornology of {name or 'space'} is not an ideal: {verdict.detail}",
                         invariant="ideal", witness=verdict.witness)
    if not contains_top(tau, GenerationMode.CLAT):
        raise NoCoverage(f"Bornology of {name or 'space'} does not cover {ground.name}",
                         invariant="coverage", witness=tau.sup())
    return BornSpace(ground, basis, tau, name)


def _check_shapes(f: GroundMap, phi: BasisMap, src: BornSpace, dst: BornSpace):
    if f.src != src.ground or f.dst != dst.ground:
        raise BasisMismatch(f"Ground map {f.name or '?'} does not run {src.ground.name} -> {dst.ground.name}")
    if phi.src != src.basis or phi.dst != dst.basis:
        raise BasisMismatch(f"Basis map {phi.name or '?'} does not run {src.basis.name} -> {dst.basis.name}")


def _structural_witness(image: ImageOperator, tau1: RampDownset, tau2: Ideal) -> Optional[LFunction]:
    """
    An element of tau1 sent outside tau2, found coordinate by coordinate, or
    None when tau1 lies inside the preimage of tau2.
    """
    phi, f, carrier = image.basis_map, image.ground_map, image.src
    targets = coordinates(tau2)
    for i, x in enumerate(carrier.ground.elements):
        have, have_finite_only = tau1.ceiling(x), x in tau1.region
        try:
            allowed, allowed_finite_only = basis_preimage(phi, *targets[f(x)])
        except NotIdealMorphism:
            return carrier.bot
        if have <= allowed and (have_finite_only or not allowed_finite_only or have != OMEGA):
            continue
        value = allowed + 1 if allowed != OMEGA else OMEGA
        values = list(carrier.bot.values)
        values[i] = value
        return carrier.make(values)
    return None


def is_bounded(f: GroundMap, phi: BasisMap, src: BornSpace, dst: BornSpace, level: int = 6) -> Verdict:
    """
    Whether T(f, phi) sends every member of src's bornology into dst's.

    Extensional bornologies are checked member by member. Ramp bornologies are
    decided by comparing coordinate ideals with the preimage of the target,
    then confirmed on every member up to the truncation level; the witness is
    the first failing member in enumeration order.

    Raises:
        BasisMismatch: f or phi do not fit the two spaces
    """
    _check_shapes(f, phi, src, dst)
    image = ImageOperator(f, phi)
    tau1, tau2 = src.bornology, dst.bornology

    structural = None
    if isinstance(tau1, RampDownset):
        structural = _structural_witness(image, tau1, tau2)
    checked = 0
    for alpha in tau1.members_upto(level):
        checked += 1
        if not tau2.contains(image(alpha)):
            return Verdict(False, alpha, "image leaves the target bornology", checked)
    if structural is not None:
        return Verdict(False, structural, "image leaves the target bornology beyond the truncation level", checked)
    return Verdict(True, checked=checked)


def space_morphism(src: BornSpace, dst: BornSpace, f: GroundMap, phi: BasisMap, level: int = 6,
                   name: str = '') -> SpaceMorphism:
    verdict = is_bounded(f, phi, src, dst, level)
    if not verdict:
        raise StructureError(f"Morphism {name or '?'} is not bounded", invariant="bounded", witness=verdict.witness)
    return SpaceMorphism(src, dst, f, phi, name)


def identity_morphism(space: BornSpace) -> SpaceMorphism:
    return SpaceMorphism(space, space, GroundMap.identity(space.ground), BasisMap.identity(space.basis), 'id')


def classical_axioms(ground: GroundSet, family: Iterable[FrozenSet[str]]) -> bool:
    """
    The three set-based bornology axioms: the family covers the ground set, is
    closed under subsets, and is closed under finite unions (the empty union
    included).
    """
    family = {frozenset(b) for b in family}
    points = frozenset(ground.elements)
    if frozenset().union(*family) != points:
        return False
    if frozenset() not in family:
        return False
    for b in family:
        for size in range(len(b)):
            if any(frozenset(d) not in family for d in itertools.combinations(sorted(b), size)):
                return False
    return all(a | b in family for a, b in itertools.combinations(family, 2))


def characteristic(ground: GroundSet, subset: Iterable[str]) -> LFunction:
    members = set(subset)
    return FunctionLattice(TWO, ground).make(tuple("1" if x in members else "0" for x in ground.elements))


def family_to_ideal(ground: GroundSet, family: Iterable[FrozenSet[str]]) -> Extensional:
    """A family of subsets as an extensional subset of 2^X (not necessarily an ideal)."""
    carrier = FunctionLattice(TWO, ground)
    return Extensional(carrier, frozenset(characteristic(ground, b) for b in family))


def all_subsets(ground: GroundSet) -> List[FrozenSet[str]]:
    return [frozenset(c) for size in range(len(ground) + 1) for c in itertools.combinations(ground.elements, size)]


def all_families(ground: GroundSet) -> Iterable[Tuple[FrozenSet[str], ...]]:
    """All 2^(2^|X|) families of subsets, in a fixed order."""
    subsets = all_subsets(ground)
    for mask in range(2 ** len(subsets)):
        yield tuple(s for i, s in enumerate(subsets) if mask >> i & 1)
