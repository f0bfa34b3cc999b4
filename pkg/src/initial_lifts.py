"""
Initial lifts module.
Initial structures for structured sources, coverage witnesses built from
choice maps, a probe-based initiality check, and the requirement checks
that make initial lifts cover.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from errors import NoLegCoverage, StructureError
from ideal_engine import (
    ChainIdeal, Extensional, GenerationMode, Ideal, RampDownset, TermTag, full_ideal, ideal_catalog,
    in_L_vdash, intersect_ideals, is_icd_at_top, is_omega_power, preimage_ideal,
)
from lattice_core import OMEGA, BasisMap, CompleteLattice, LatticeKind, Verdict
from powerset_theory import FunctionLattice, GroundMap, GroundSet, ImageOperator, LFunction
from born_spaces import BornSpace, is_bounded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Leg:
    ground_map: GroundMap
    basis_map: BasisMap
    space: BornSpace

    def image_operator(self) -> ImageOperator:
        return ImageOperator(self.ground_map, self.basis_map)


@dataclass(frozen=True)
class StructuredSource:
    apex: GroundSet
    basis: CompleteLattice
    legs: Tuple[Leg, ...] = ()
    name: str = field(default='', compare=False)

    def __post_init__(self):
        for j, leg in enumerate(self.legs):
            if leg.ground_map.src != self.apex or leg.ground_map.dst != leg.space.ground:
                raise StructureError(f"Leg {j} of {self.name or 'source'}: ground map does not run "
                                     f"{self.apex.name} -> {leg.space.ground.name}")
            if leg.basis_map.src != self.basis or leg.basis_map.dst != leg.space.basis:
                raise StructureError(f"Leg {j} of {self.name or 'source'}: basis map does not run "
                                     f"{self.basis.name} -> {leg.space.basis.name}")

    @property
    def carrier(self) -> FunctionLattice:
        return FunctionLattice(self.basis, self.apex)


@dataclass
class CoverageReport:
    alphas: List[LFunction]
    covered: bool
    certificate: str = ''  # 'attained', 'structural' or ''
    limit: Optional[LFunction] = None


def initial_structure(source: StructuredSource, level: int = 3) -> Ideal:
    """
    The largest ideal on the apex making every leg bounded: the intersection
    of the preimages of the legs' bornologies.
    """
    tau = full_ideal(source.carrier)
    for leg in source.legs:
        pulled = preimage_ideal(leg.image_operator(), leg.space.bornology, level)
        tau = intersect_ideals(tau, pulled)
    logger.debug(f"Initial structure of {source.name or 'source'} over {len(source.legs)} legs: {type(tau).__name__}")
    return tau


def coverage_family(ideal: Ideal, level: int) -> Tuple[Tuple[Any, ...], bool]:
    """
    A family of members whose join is top, if the ideal covers.

    Extensional ideals use all their members. Chain and ramp ideals use the
    constant-level chain 0..level, whose join reaches top only in the limit;
    top is appended when it is a member. The flag says whether the join is
    attained by the listed members.
    """
    carrier = ideal.carrier
    if isinstance(ideal, Extensional):
        members = ideal.ordered()
        return members, carrier.sup(members) == carrier.top
    if ideal.sup() != carrier.top:
        return (), False
    if isinstance(ideal, RampDownset):
        levels = tuple(carrier.constant(n) for n in range(level + 1))
    elif isinstance(ideal, ChainIdeal):
        levels = tuple(range(level + 1))
    else:
        return (), False
    if ideal.contains(carrier.top):
        return levels + (carrier.top,), True
    return levels, False


def _families(source: StructuredSource, level: int) -> List[Tuple[Any, ...]]:
    families = []
    for j, leg in enumerate(source.legs):
        tau = leg.space.bornology
        if tau.sup() != tau.carrier.top:
            raise NoLegCoverage(f"Leg {j} of {source.name or 'source'} has a bornology without coverage",
                                invariant="coverage", witness=j)
        family, _ = coverage_family(tau, level)
        families.append(family)
    return families


def coverage_witnesses(source: StructuredSource, level: int = 3) -> CoverageReport:
    """
    alpha_h = meet over legs j of T(f_j, phi_j)^(h(j)), for every choice map h
    on the legs' coverage families.

    The apex is covered when these alphas join to top. With ramp legs the
    families are truncated; the diagonal choices h_n (level n on every ramp
    leg, top on every other leg) then certify the limit: their alphas are
    constant functions rising to the meet over legs of the adjoints' limits.

    Raises:
        NoLegCoverage: some leg's bornology does not cover
    """
    carrier = source.carrier
    operators = [leg.image_operator() for leg in source.legs]
    families = _families(source, level)

    alphas = []
    for choice in itertools.product(*families):
        alpha = carrier.inf(op.right_adjoint(member) for op, member in zip(operators, choice))
        alphas.append(alpha)
    reached = carrier.sup(alphas)
    if reached == carrier.top:
        return CoverageReport(alphas, True, 'attained', reached)

    basis = source.basis
    limits = []
    for op, leg in zip(operators, source.legs):
        tau = leg.space.bornology
        if isinstance(tau, Extensional):
            limits.append(op.adjoint(tau.carrier.basis.top))
        else:
            limits.append(op.adjoint.finite_sup())
    limit = carrier.constant(basis.inf(limits))
    logger.debug(f"Coverage of {source.name or 'source'}: truncated join {carrier.format_element(reached)}, "
                 f"diagonal limit {carrier.format_element(limit)}")
    if limit == carrier.top:
        return CoverageReport(alphas, True, 'structural', limit)
    return CoverageReport(alphas, False, '', limit)


def probe_grounds(bound: int) -> Iterator[GroundSet]:
    for size in range(bound + 1):
        yield GroundSet(f"Z{size}", tuple(f"z{i + 1}" for i in range(size)))


def verify_initiality(source: StructuredSource, tau: Ideal, probe_bound: int = 2, probe_level: int = 3) -> Verdict:
    """
    For every probe space (Z, sigma) with |Z| <= probe_bound, sigma from the
    ideal catalog of L^Z, and every g: Z -> apex: g is bounded into
    (apex, tau) exactly when every f_j . g is bounded into the j-th leg.
    """
    basis = source.basis
    identity = BasisMap.identity(basis)
    apex_space = BornSpace(source.apex, basis, tau, source.name)
    checked = 0
    for ground in probe_grounds(probe_bound):
        for sigma in ideal_catalog(FunctionLattice(basis, ground), probe_level):
            probe = BornSpace(ground, basis, sigma)
            for g in GroundMap.all_maps(ground, source.apex):
                checked += 1
                legs_bounded = all(
                    is_bounded(g.compose(leg.ground_map), leg.basis_map, probe, leg.space, probe_level).holds
                    for leg in source.legs
                )
                lifted = is_bounded(g, identity, probe, apex_space, probe_level).holds
                if legs_bounded != lifted:
                    detail = "legs bounded but the lift is not" if legs_bounded else "lift bounded but a leg is not"
                    return Verdict(False, (ground, sigma, g), detail, checked)
    logger.debug(f"Initiality of {source.name or 'source'}: {checked} probe maps")
    return Verdict(True, checked=checked)


def _small_maps(max_ground: int) -> Iterator[GroundMap]:
    grounds = [GroundSet(f"X{n}", tuple(f"x{i + 1}" for i in range(n))) for n in range(max_ground + 1)]
    for src, dst in itertools.product(grounds, repeat=2):
        yield from GroundMap.all_maps(src, dst)


def family_limit(carrier: CompleteLattice, family: Tuple[Any, ...]) -> Any:
    """
    The join of a family, read as a chain on the omega chain or its powers:
    coordinates still rising between the last two members go to w.
    """
    reached = carrier.sup(family)
    if len(family) < 2 or carrier.is_finite:
        return reached
    last, before = family[-1], family[-2]
    if carrier.kind == LatticeKind.OMEGA:
        return OMEGA if last != before else reached
    if is_omega_power(carrier):
        return carrier.make(tuple(OMEGA if a != b else r
                                  for a, b, r in zip(last.values, before.values, reached.values)))
    return reached


def _req_top_families(lattice: CompleteLattice, max_ground: int, level: int) -> Verdict:
    checked = 0
    for ground in probe_grounds(max_ground):
        carrier = FunctionLattice(lattice, ground)
        for ideal in ideal_catalog(carrier, level):
            if not ideal.contains_top(GenerationMode.CLAT):
                continue
            checked += 1
            family, attained = coverage_family(ideal, level)
            stray = next((a for a in family if not ideal.contains(a)), None)
            if stray is not None:
                return Verdict(False, (ideal, stray), "coverage family leaves the ideal", checked)
            reached = carrier.sup(family) if attained else family_limit(carrier, family)
            if reached != carrier.top:
                return Verdict(False, ideal, "no family of members joins to top", checked)
    return Verdict(True, checked=checked)


def _req_adjoints(lattice: CompleteLattice, max_ground: int, level: int) -> Verdict:
    identity = BasisMap.identity(lattice)
    if not in_L_vdash(identity):
        return Verdict(False, identity, "identity adjoint breaks a join at top")
    checked = 0
    for f in _small_maps(max_ground):
        op = ImageOperator(f, identity)
        target = op.dst
        checked += 1
        if op.right_adjoint(target.top) != op.src.top:
            return Verdict(False, f, "adjoint does not preserve top", checked)
        for ideal in ideal_catalog(target, level):
            for member in ideal.members_upto(level):
                checked += 1
                if not ideal.contains(op(op.right_adjoint(member))):
                    return Verdict(False, (f, ideal, member), "image of the adjoint leaves the ideal", checked)
            family, attained = coverage_family(ideal, level)
            if attained:
                checked += 1
                if op.src.sup(op.right_adjoint(b) for b in family) != op.right_adjoint(target.top):
                    return Verdict(False, (f, ideal), "adjoint does not preserve a join at top", checked)
    return Verdict(True, checked=checked)


def _req_meets(lattice: CompleteLattice, max_ground: int, level: int) -> Verdict:
    identity = BasisMap.identity(lattice)
    checked = 0
    for arity in range(4):
        checked += 1
        if TermTag.ARB_MEET.evaluate(lattice, [lattice.top] * arity) != lattice.top:
            return Verdict(False, arity, "meet of tops is not top", checked)
    for f in _small_maps(max_ground):
        op = ImageOperator(f, identity)
        points = op.src.truncated_elements(min(level, 2))
        for a, b in itertools.combinations_with_replacement(points, 2):
            checked += 1
            low = op(TermTag.ARB_MEET.evaluate(op.src, [a, b]))
            if not (op.dst.leq(low, op(a)) and op.dst.leq(low, op(b))):
                return Verdict(False, (f, a, b), "image of a meet escapes a component's downset", checked)
    return Verdict(True, checked=checked)


def _req_icd(lattice: CompleteLattice, max_ground: int, level: int, max_family: int) -> Verdict:
    checked = 0
    for ground in probe_grounds(max_ground):
        verdict = is_icd_at_top(FunctionLattice(lattice, ground), level, max_family)
        checked += verdict.checked
        if not verdict:
            return Verdict(False, (ground, verdict.witness), verdict.detail, checked)
    return Verdict(True, checked=checked)


def check_requirements(lattice: CompleteLattice, max_ground: int = 2, level: int = 3,
                       max_family: int = 2) -> Dict[str, Verdict]:
    """
    The four requirements under which initial lifts cover, for the complete-
    lattice instance over `lattice`, with p the arbitrary join and t the
    arbitrary meet. Image operators T(f, id) over all maps between ground sets
    of size at most max_ground stand in for the morphisms.
    """
    report = {
        'Req1': _req_top_families(lattice, max_ground, level),
        'Req2': _req_adjoints(lattice, max_ground, level),
        'Req3': _req_meets(lattice, max_ground, level),
        'Req4': _req_icd(lattice, max_ground, level, max_family),
    }
    for name, verdict in report.items():
        logger.debug(f"{name} on {lattice.name}: {'pass' if verdict else 'fail'} ({verdict.checked} checks)")
    return report
