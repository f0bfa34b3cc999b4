"""
Law suite module.
Property checks for every module, run over the shipped catalog and the
workspace fixtures with bounded concurrency.
"""

import asyncio
import itertools
import logging
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

import catalog
from errors import BornolabError
from ideal_engine import (
    Extensional, GenerationMode, GeneratorSet, RampDownset, enumerate_ideals, full_ideal, generate_ideal,
    ideal_catalog, ideal_included, ideal_verdict, in_L_vdash, intersect_ideals, is_icd_at_top, same_ideal,
)
from lattice_core import (
    BasisMap, CompleteLattice, FiniteLattice, Verdict, compose_basis_maps, galois_verdict, is_distributive,
    right_adjoint,
)
from powerset_theory import FunctionLattice, GroundMap, GroundSet, ImageOperator, forward_image
from born_spaces import (
    BornSpace, SpaceMorphism, all_families, classical_axioms, family_to_ideal, is_bounded, validate_space,
)
from born_systems import (
    BornSystem, SystemMorphism, cofinal_chain, embed_morphism, embed_space, is_system_morphism,
    morphisms_into_embedding, reflection_arrow, spatialize, spatialize_morphism, validate_system, verify_fullness,
    verify_universal_property,
)
from initial_lifts import (
    Leg, StructuredSource, check_requirements, coverage_witnesses, initial_structure, verify_initiality,
)
from settings import Settings

logger = logging.getLogger(__name__)


@dataclass
class Law:
    name: str
    module: str
    check: Callable[[], Verdict]


@dataclass
class LawResult:
    law: Law
    verdict: Optional[Verdict] = None
    error: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.verdict is not None and self.verdict.holds


def _grounds(max_size: int) -> List[GroundSet]:
    return catalog.ground_sets(max_size)


def _points(lattice: CompleteLattice, level: int) -> Tuple:
    return lattice.elements() if lattice.is_finite else lattice.truncated_elements(level)


# lattice_core

def law_distributive(lattice: FiniteLattice) -> Verdict:
    elements = lattice.elements()
    checked = 0
    expected = True
    for a, b, c in itertools.product(elements, repeat=3):
        checked += 1
        if lattice.meet(a, lattice.join(b, c)) != lattice.join(lattice.meet(a, b), lattice.meet(a, c)):
            expected = False
            break
    if is_distributive(lattice) != expected:
        return Verdict(False, lattice.name, "table check disagrees with the triple loop", checked)
    return Verdict(True, checked=checked)


def law_galois(phi: BasisMap, level: int) -> Verdict:
    return galois_verdict(phi, right_adjoint(phi), level)


def law_basis_composition(first: BasisMap, second: BasisMap, level: int) -> Verdict:
    composite = compose_basis_maps(first, second)
    checked = 0
    for a in _points(first.src, level):
        checked += 1
        if composite(a) != second(first(a)):
            return Verdict(False, a, "composite disagrees with pointwise composition", checked)
    return Verdict(True, checked=checked)


# powerset_theory

def law_functor_identity(basis: CompleteLattice, max_ground: int, level: int) -> Verdict:
    identity = BasisMap.identity(basis)
    checked = 0
    for ground in _grounds(max_ground):
        carrier = FunctionLattice(basis, ground)
        f = GroundMap.identity(ground)
        for alpha in _points(carrier, level):
            checked += 1
            if forward_image(f, identity, alpha) != alpha:
                return Verdict(False, alpha, "T(id, id) moves an element", checked)
    return Verdict(True, checked=checked)


def _map_chains(max_ground: int) -> Iterator[Tuple[GroundMap, GroundMap]]:
    grounds = _grounds(max_ground)
    for x, y, z in itertools.product(grounds, repeat=3):
        for f in GroundMap.all_maps(x, y):
            for g in GroundMap.all_maps(y, z):
                yield f, g


def law_functor_composition(phi: BasisMap, psi: BasisMap, max_ground: int, level: int) -> Verdict:
    """T(g, psi) . T(f, phi) = T(g . f, psi . phi)."""
    composite = compose_basis_maps(phi, psi)
    checked = 0
    for f, g in _map_chains(max_ground):
        gf = f.compose(g)
        for alpha in _points(FunctionLattice(phi.src, f.src), level):
            checked += 1
            if forward_image(g, psi, forward_image(f, phi, alpha)) != forward_image(gf, composite, alpha):
                return Verdict(False, (f, g, alpha), "image operators do not compose", checked)
    return Verdict(True, checked=checked)


def law_lifted_galois(phi: BasisMap, max_ground: int, level: int) -> Verdict:
    """T(f, phi)(alpha) <= beta iff alpha <= T(f, phi)^(beta)."""
    checked = 0
    for x, y in itertools.product(_grounds(max_ground), repeat=2):
        for f in GroundMap.all_maps(x, y):
            op = ImageOperator(f, phi)
            betas = _points(op.dst, level)
            for alpha in _points(op.src, level):
                image = op(alpha)
                for beta in betas:
                    checked += 1
                    if op.dst.leq(image, beta) != op.src.leq(alpha, op.right_adjoint(beta)):
                        return Verdict(False, (f, alpha, beta), "lifted Galois law fails", checked)
    return Verdict(True, checked=checked)


def law_meet_interchange(phi: BasisMap, max_ground: int, level: int) -> Verdict:
    """T(a AND b) = (T(a) AND T(a AND b)) AND T(b)."""
    checked = 0
    for x, y in itertools.product(_grounds(max_ground), repeat=2):
        for f in GroundMap.all_maps(x, y):
            op = ImageOperator(f, phi)
            src, dst = op.src, op.dst
            points = _points(src, level)
            for a, b in itertools.combinations_with_replacement(points, 2):
                checked += 1
                low = op(src.meet(a, b))
                if low != dst.meet(dst.meet(op(a), low), op(b)):
                    return Verdict(False, (f, a, b), "meet interchange fails", checked)
    return Verdict(True, checked=checked)


# ideal_engine

def law_closure_oracle(lattice: FiniteLattice, limit: int) -> Verdict:
    """generate_ideal equals the least ideal containing the generators among all ideals."""
    ideals = enumerate_ideals(lattice, limit=limit)
    elements = lattice.elements()
    checked = 0
    for size in range(len(elements) + 1):
        for gens in itertools.combinations(elements, size):
            checked += 1
            above = [ideal.members for ideal in ideals if all(g in ideal.members for g in gens)]
            least = frozenset.intersection(*above)
            generated = generate_ideal(GeneratorSet(lattice, gens), GenerationMode.LAT_BOT)
            if frozenset(generated.members) != least:
                return Verdict(False, gens, "closure differs from the least ideal", checked)
    return Verdict(True, checked=checked)


def law_ramp_oracle(ground: GroundSet, catalog_level: int, level: int) -> Verdict:
    """Ramp downsets pass the truncation oracle; intersection and inclusion match membership."""
    carrier = FunctionLattice(catalog.omega(), ground)
    ideals = ideal_catalog(carrier, catalog_level)
    box = carrier.truncated_elements(level)
    checked = 0
    for ideal in ideals:
        verdict = ideal_verdict(carrier, ideal, level)
        checked += verdict.checked
        if not verdict:
            return Verdict(False, ideal, f"oracle rejects a ramp downset: {verdict.detail}", checked)
    for first, second in itertools.product(ideals, repeat=2):
        meet = intersect_ideals(first, second)
        members_first = [a for a in box if first.contains(a)]
        for a in box:
            checked += 1
            if meet.contains(a) != (first.contains(a) and second.contains(a)):
                return Verdict(False, (first, second, a), "intersection disagrees with membership", checked)
        if ideal_included(first, second) != all(second.contains(a) for a in members_first):
            return Verdict(False, (first, second), "inclusion disagrees with membership", checked)
    return Verdict(True, checked=checked)


def law_icd(lattice: CompleteLattice, level: int, max_family: int) -> Verdict:
    return is_icd_at_top(lattice, level, max_family)


def law_finite_coverage(basis: FiniteLattice, ground: GroundSet, limit: int) -> Verdict:
    """Over a finite basis and ground set the only covering ideal is the whole function lattice."""
    carrier = FunctionLattice(basis, ground)
    size = len(carrier.elements())
    if size <= limit:
        ideals = enumerate_ideals(carrier, limit=limit)
    else:
        ideals = ideal_catalog(carrier)
    covering = [ideal for ideal in ideals if ideal.contains(carrier.top)]
    if len(covering) != 1 or len(covering[0]) != size:
        return Verdict(False, tuple(covering), "a proper ideal covers", len(ideals))
    return Verdict(True, checked=len(ideals))


# born_spaces

def law_classical_equivalence(ground: GroundSet) -> Verdict:
    """The set-based axioms agree with validate_space over the two-element lattice."""
    checked = 0
    for family in all_families(ground):
        checked += 1
        classical = classical_axioms(ground, family)
        ideal = family_to_ideal(ground, family)
        try:
            validate_space(ground, ideal.carrier.basis, ideal)
            lattice_valued = True
        except BornolabError:
            lattice_valued = False
        if classical != lattice_valued:
            return Verdict(False, family, f"classical={classical} lattice-valued={lattice_valued}", checked)
    return Verdict(True, checked=checked)


def law_space_valid(space: BornSpace, level: int) -> Verdict:
    validate_space(space.ground, space.basis, space.bornology, level, space.name)
    return Verdict(True, checked=1)


def law_identity_bounded(space: BornSpace, level: int) -> Verdict:
    f, phi = GroundMap.identity(space.ground), BasisMap.identity(space.basis)
    return is_bounded(f, phi, space, space, level)


# initial_lifts

def _covering_targets(basis: CompleteLattice) -> List[BornSpace]:
    targets = []
    for size in (1, 2):
        ground = catalog.ground_set(size, 'y')
        carrier = FunctionLattice(basis, ground)
        if basis.is_finite:
            targets.append(BornSpace(ground, basis, full_ideal(carrier), f"Full{size}"))
        else:
            targets.append(BornSpace(ground, basis, RampDownset(carrier, frozenset(), carrier.top), f"All{size}"))
            targets.append(BornSpace(ground, basis, RampDownset(carrier, frozenset(ground.elements), carrier.top),
                                     f"Fin{size}"))
    return targets


def cross_maps(basis: CompleteLattice) -> List[BasisMap]:
    """Join-preserving maps from basis into the other generated bases whose adjoints keep joins at top."""
    others = [catalog.lattice("2"), catalog.lattice("C3")]
    found = [phi for phi in catalog.omega_maps().values() if phi.src == basis and phi.dst != basis]
    if basis.is_finite:
        for other in others:
            if other != basis:
                found += catalog.join_preserving_maps(basis, other)
    return [phi for phi in found if in_L_vdash(phi)]


def generated_sources(basis: CompleteLattice, max_apex: int) -> Iterator[StructuredSource]:
    """
    Structured sources with at most two legs into small covering spaces: apex
    sizes 1..max_apex, targets of size 1 and 2, constant and folding ground
    maps, the identity and one further join-preserving basis map. Folding
    legs also run through every cross map into the targets over its basis.
    """
    identity = BasisMap.identity(basis)
    if basis.is_finite:
        extra = BasisMap.from_table(basis, basis, {a: basis.bot for a in basis.elements()}, name='zero')
    else:
        extra = catalog.omega_maps()['shift']
    targets = _covering_targets(basis)
    crossing = [(phi, space) for phi in cross_maps(basis) for space in _covering_targets(phi.dst)]

    def fold_into(apex: GroundSet, space: BornSpace) -> GroundMap:
        points = space.ground.elements
        return GroundMap(apex, space.ground, tuple(points[min(i, len(points) - 1)] for i in range(len(apex))),
                         'fold')

    for apex_size in range(1, max_apex + 1):
        apex = catalog.ground_set(apex_size)
        legs = []
        for space in targets:
            constant = GroundMap(apex, space.ground, (space.ground.elements[0],) * apex_size, 'const')
            for f in (constant, fold_into(apex, space)):
                for phi in (identity, extra):
                    legs.append(Leg(f, phi, space))
        cross = [Leg(fold_into(apex, space), phi, space) for phi, space in crossing]
        yield StructuredSource(apex, basis, (), f"{apex.name}-empty")
        for j, leg in enumerate(legs):
            yield StructuredSource(apex, basis, (leg,), f"{apex.name}-leg{j}")
        for i, j in itertools.combinations(range(min(4, len(legs))), 2):
            yield StructuredSource(apex, basis, (legs[i], legs[j]), f"{apex.name}-legs{i}{j}")
        for k, leg in enumerate(cross):
            yield StructuredSource(apex, basis, (leg,), f"{apex.name}-cross{k}")
            if legs:
                yield StructuredSource(apex, basis, (legs[0], leg), f"{apex.name}-cross{k}-leg0")


def law_adjoint_coverage(phi: BasisMap, level: int) -> Verdict:
    """
    A single leg through phi into the finite-level space over its target
    covers exactly when phi's adjoint keeps joins at top.
    """
    ground = catalog.ground_set(1, 'y')
    carrier = FunctionLattice(phi.dst, ground)
    if phi.dst.is_finite:
        target = BornSpace(ground, phi.dst, full_ideal(carrier), "Full1")
    else:
        target = BornSpace(ground, phi.dst, RampDownset(carrier, frozenset(ground.elements), carrier.top), "Fin1")
    source = StructuredSource(ground, phi.src, (Leg(GroundMap.identity(ground), phi, target),), phi.name)
    expected = in_L_vdash(phi)
    report = coverage_witnesses(source, level)
    if report.covered != expected:
        detail = "covers although the adjoint breaks a join at top" if report.covered \
            else "does not cover although the adjoint keeps joins at top"
        return Verdict(False, phi.name, detail, len(report.alphas))
    return Verdict(True, checked=len(report.alphas))


def law_initial_lift(source: StructuredSource, probe_bound: int, probe_level: int) -> Verdict:
    """The initial structure is a bornology, its coverage is certified, and it is initial."""
    tau = initial_structure(source, probe_level)
    validate_space(source.apex, source.basis, tau, probe_level, source.name)
    report = coverage_witnesses(source, probe_level)
    if not report.covered:
        return Verdict(False, report.limit, "coverage witnesses do not reach top")
    return verify_initiality(source, tau, probe_bound, probe_level)


def law_requirements(lattice: CompleteLattice, max_ground: int, level: int, max_family: int) -> Verdict:
    report = check_requirements(lattice, max_ground, level, max_family)
    checked = sum(v.checked for v in report.values())
    for name, verdict in report.items():
        if not verdict:
            return Verdict(False, verdict.witness, f"{name}: {verdict.detail}", checked)
    return Verdict(True, checked=checked)


# born_systems

def law_system_valid(system: BornSystem, level: int) -> Verdict:
    validate_system(system.ground, system.kappa, system.bobj, system.basis, level, system.name)
    return Verdict(True, checked=1)


def law_reflection(system: BornSystem, level: int, max_members: int) -> Verdict:
    """eta is a system morphism and the identity on Spat factors through it."""
    eta = reflection_arrow(system, max_members, level)
    verdict = is_system_morphism(eta, level)
    if not verdict:
        return Verdict(False, verdict.witness, f"reflection arrow: {verdict.detail}", verdict.checked)
    return verify_universal_property(system, spatialize(system), eta, level, max_members)


def law_factorizations(system: BornSystem, target: BornSpace, level: int, max_members: int) -> Verdict:
    """Every system morphism into E(target) factors through the reflection arrow."""
    checked = 0
    for m in morphisms_into_embedding(system, target, level, max_members):
        verdict = verify_universal_property(system, target, m, level, max_members)
        checked += verdict.checked
        if not verdict:
            return Verdict(False, m.ground_map.images, verdict.detail, checked)
    return Verdict(True, checked=checked)


def law_spat_embed(space: BornSpace, level: int, max_members: int) -> Verdict:
    """Spat(E(space)) has the same bornology as space, structurally and on the truncation box."""
    back = spatialize(embed_space(space, max_members)).bornology
    tau = space.bornology
    if not same_ideal(back, tau):
        return Verdict(False, back, "Spat(E(space)) changes the bornology")
    checked = 0
    for alpha in _points(space.carrier, level):
        checked += 1
        if back.contains(alpha) != tau.contains(alpha):
            return Verdict(False, alpha, "Spat(E(space)) differs on the truncation box", checked)
    return Verdict(True, checked=checked)


def law_cofinal_chain(space: BornSpace) -> Verdict:
    back = spatialize(cofinal_chain(space)).bornology
    if not same_ideal(back, space.bornology):
        return Verdict(False, back, "the cofinal chain spatializes to another bornology")
    return Verdict(True, checked=1)


def law_fullness(m: SpaceMorphism, level: int, max_members: int) -> Verdict:
    if not is_bounded(m.ground_map, m.basis_map, m.src, m.dst, level):
        return Verdict(True, detail="not bounded; fullness not applicable")
    return verify_fullness(m, max_members)


def law_space_morphism(m: SpaceMorphism, level: int, max_members: int) -> Verdict:
    """A bounded map embeds as a system morphism."""
    verdict = is_bounded(m.ground_map, m.basis_map, m.src, m.dst, level)
    if not verdict:
        return Verdict(True, detail="not bounded; embedding not applicable", checked=verdict.checked)
    return is_system_morphism(embed_morphism(m, max_members), level)


def law_system_morphism(m: SystemMorphism, level: int) -> Verdict:
    """A commuting square spatializes to a bounded map."""
    verdict = is_system_morphism(m, level)
    if not verdict:
        return Verdict(True, detail="square does not commute; spatialization not applicable",
                       checked=verdict.checked)
    spatialize_morphism(m, level)
    return Verdict(True, checked=verdict.checked + 1)


def catalog_laws(settings: Settings) -> List[Law]:
    """Laws over the shipped catalog, independent of any workspace."""
    enum, scale = settings.enumeration, settings.laws
    level = enum.truncation_level
    lattices = catalog.finite_lattices(scale.max_basis_size)
    functor_bases = [catalog.lattice(name) for name in ("2", "C3", "M3")]
    omega = catalog.omega()
    laws: List[Law] = []

    for lattice in lattices:
        laws.append(Law(f"distributive-table[{lattice.name}]", "lattice_core", partial(law_distributive, lattice)))
    maps: List[BasisMap] = []
    for src, dst in itertools.product(functor_bases, repeat=2):
        maps += catalog.join_preserving_maps(src, dst)
    omega_maps = list(catalog.omega_maps().values()) + [catalog.collapse_to_omega()]
    for i, phi in enumerate(maps + omega_maps):
        laws.append(Law(f"galois[{phi.src.name}->{phi.dst.name}#{i}]", "lattice_core", partial(law_galois, phi, level)))
    omega_endo = [phi for phi in omega_maps if phi.src == omega and phi.dst == omega]
    for first, second in itertools.product(omega_endo, repeat=2):
        laws.append(Law(f"ramp-composition[{first.name}.{second.name}]", "lattice_core",
                        partial(law_basis_composition, first, second, level)))

    small = min(2, scale.max_ground_size)
    for basis in functor_bases + [omega]:
        laws.append(Law(f"functor-identity[{basis.name}]", "powerset_theory",
                        partial(law_functor_identity, basis, scale.max_ground_size, enum.probe_level)))
        identity = BasisMap.identity(basis)
        ground_bound = scale.max_ground_size if basis.is_finite else small
        laws.append(Law(f"functor-composition[{basis.name}]", "powerset_theory",
                        partial(law_functor_composition, identity, identity, ground_bound, enum.probe_level)))
    chains = [m for m in maps if m.src.name != "M3" and m.dst.name != "M3"]
    for i, (phi, psi) in enumerate((p, q) for p in chains for q in chains if p.dst == q.src):
        name = f"functor-composition[{phi.src.name}->{phi.dst.name}->{psi.dst.name}#{i}]"
        laws.append(Law(name, "powerset_theory", partial(law_functor_composition, phi, psi, small, level)))
    for first, second in itertools.product(omega_endo, repeat=2):
        laws.append(Law(f"functor-composition[W:{first.name}.{second.name}]", "powerset_theory",
                        partial(law_functor_composition, first, second, 1, enum.probe_level)))
    for i, phi in enumerate(maps + omega_endo):
        bound = small if phi.src.is_finite else 1
        laws.append(Law(f"lifted-galois[{phi.src.name}->{phi.dst.name}#{i}]", "powerset_theory",
                        partial(law_lifted_galois, phi, bound, enum.probe_level)))
        laws.append(Law(f"meet-interchange[{phi.src.name}->{phi.dst.name}#{i}]", "powerset_theory",
                        partial(law_meet_interchange, phi, bound, enum.probe_level)))

    for lattice in lattices:
        laws.append(Law(f"closure-oracle[{lattice.name}]", "ideal_engine",
                        partial(law_closure_oracle, lattice, enum.max_ideal_enumeration)))
        laws.append(Law(f"icd[{lattice.name}]", "ideal_engine",
                        partial(law_icd, lattice, enum.probe_level, enum.icd_max_family)))
    laws.append(Law("icd[W]", "ideal_engine", partial(law_icd, omega, enum.probe_level, enum.icd_max_family)))
    for ground in _grounds(2):
        laws.append(Law(f"ramp-oracle[W^{ground.name}]", "ideal_engine",
                        partial(law_ramp_oracle, ground, 2, level)))
        laws.append(Law(f"icd[W^{ground.name}]", "ideal_engine",
                        partial(law_icd, FunctionLattice(omega, ground), enum.probe_level,
                                enum.icd_function_max_family)))
        for basis in (lattice for lattice in lattices if len(lattice.elements()) <= 4):
            laws.append(Law(f"finite-coverage[{basis.name}^{ground.name}]", "ideal_engine",
                            partial(law_finite_coverage, basis, ground, enum.max_ideal_enumeration)))

    for ground in _grounds(scale.classical_max_ground):
        laws.append(Law(f"classical-equivalence[{ground.name}]", "born_spaces",
                        partial(law_classical_equivalence, ground)))

    for basis in (catalog.lattice("2"), catalog.lattice("C3"), omega):
        for source in generated_sources(basis, scale.max_ground_size):
            laws.append(Law(f"initial-lift[{basis.name}:{source.name}]", "initial_lifts",
                            partial(law_initial_lift, source, enum.probe_bound, enum.probe_level)))
        laws.append(Law(f"requirements[{basis.name}]", "initial_lifts",
                        partial(law_requirements, basis, enum.probe_bound, enum.probe_level,
                                enum.icd_function_max_family)))
    for phi in omega_maps:
        laws.append(Law(f"adjoint-coverage[{phi.name}]", "initial_lifts",
                        partial(law_adjoint_coverage, phi, enum.probe_level)))
    return laws


def workspace_laws(workspace, settings: Settings) -> List[Law]:
    """Laws over the spaces, systems, sources and morphisms of a workspace."""
    enum = settings.enumeration
    level = enum.truncation_level
    laws: List[Law] = []
    for name, space in workspace.spaces.items():
        laws.append(Law(f"space-valid[{name}]", "born_spaces", partial(law_space_valid, space, level)))
        laws.append(Law(f"identity-bounded[{name}]", "born_spaces", partial(law_identity_bounded, space, level)))
        laws.append(Law(f"spat-embed[{name}]", "born_systems",
                        partial(law_spat_embed, space, level, enum.max_extensional_members)))
        if isinstance(space.bornology, RampDownset):
            laws.append(Law(f"cofinal-chain[{name}]", "born_systems", partial(law_cofinal_chain, space)))
    for name, system in workspace.systems.items():
        laws.append(Law(f"system-valid[{name}]", "born_systems", partial(law_system_valid, system, enum.probe_level)))
        laws.append(Law(f"reflection[{name}]", "born_systems",
                        partial(law_reflection, system, level, enum.max_extensional_members)))
        if len(system.ground) > enum.max_factor_ground:
            logger.warning(f"Skipping factorizations of {name}: {len(system.ground)} points "
                           f"exceeds max_factor_ground={enum.max_factor_ground}")
            continue
        for target_name, space in workspace.spaces.items():
            if space.basis == system.basis and len(space.ground) <= enum.max_factor_ground:
                laws.append(Law(f"factorizations[{name}->{target_name}]", "born_systems",
                                partial(law_factorizations, system, space, level, enum.max_extensional_members)))
    for name, source in workspace.sources.items():
        laws.append(Law(f"initial-lift[{name}]", "initial_lifts",
                        partial(law_initial_lift, source, enum.probe_bound, enum.probe_level)))
    for name, m in workspace.morphisms.items():
        if isinstance(m, SpaceMorphism):
            laws.append(Law(f"embed-morphism[{name}]", "born_systems",
                            partial(law_space_morphism, m, level, enum.max_extensional_members)))
            if isinstance(m.src.bornology, Extensional) and isinstance(m.dst.bornology, Extensional):
                laws.append(Law(f"fullness[{name}]", "born_systems", partial(law_fullness, m, level, 8)))
        else:
            laws.append(Law(f"spatialize-morphism[{name}]", "born_systems", partial(law_system_morphism, m, level)))
    return laws


async def run_laws(laws: Sequence[Law], concurrency: int = 4, progress: bool = True) -> List[LawResult]:
    """
    Run laws in worker threads, at most `concurrency` at a time.

    A law that raises is logged and counted as a failure; the run goes on.

    Returns:
        Results in the order of `laws`
    """
    semaphore = asyncio.Semaphore(concurrency)
    bar = tqdm(total=len(laws), desc="Checking laws", disable=not progress)

    async def run_one(law: Law) -> LawResult:
        async with semaphore:
            try:
                result = LawResult(law, await asyncio.to_thread(law.check))
            except Exception as e:
                logger.error(f"Law {law.name} raised {type(e).__name__}: {e}")
                result = LawResult(law, error=f"{type(e).__name__}: {e}")
            bar.update(1)
            return result

    results = await asyncio.gather(*(run_one(law) for law in laws))
    bar.close()
    failed = sum(1 for r in results if not r.holds)
    logger.info(f"Law suite: {len(results) - failed} of {len(results)} laws hold")
    return list(results)
