"""
Bornological systems module.
Systems (X, kappa, B), their morphisms, the embedding of spaces, the
spatialization functor, the localic projection, and checks of the
reflection of systems onto spaces.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional, Tuple, Union

import numpy as np

from errors import BasisMismatch, LatticeError, NoCoverage, NotIdealMorphism, NotRepresentable, StructureError
from ideal_engine import (
    Extensional, GenerationMode, GeneratorSet, Ideal, MeetMode, RampDownset, catit_verdict, generate_ideal,
    principal_ideal,
)
from lattice_core import (
    OMEGA, BasisMap, CompleteLattice, FiniteLattice, LatticeKind, Verdict,
)
from powerset_theory import FunctionLattice, GroundMap, GroundSet, ImageOperator, LFunction
from born_spaces import BornSpace, SpaceMorphism, is_bounded

logger = logging.getLogger(__name__)


class MemberLattice(FiniteLattice):
    """The members of a finite bornology, ordered pointwise, as a lattice."""

    def __init__(self, ideal: Extensional, name: str = ''):
        members = ideal.ordered()
        carrier = ideal.carrier
        leq = np.array([[carrier.leq(a, b) for b in members] for a in members], dtype=bool).reshape(
            len(members), len(members))
        super().__init__(name or f"<{carrier.name}>", members, leq)
        self.ideal = ideal
        self.carrier = carrier

    def format_element(self, a: LFunction) -> str:
        return self.carrier.format_element(a)


class IdealCarrier(CompleteLattice):
    """
    An ideal of a function lattice used as an object in its own right. It has
    a bottom and binary meets and joins; a top only when the ideal contains
    its sup.
    """

    kind = LatticeKind.IDEAL

    def __init__(self, ideal: Ideal, name: str = ''):
        super().__init__(name or f"<{ideal.carrier.name}>")
        self.ideal = ideal
        self.carrier = ideal.carrier

    @property
    def bot(self):
        return self.carrier.bot

    @property
    def top(self):
        sup = self.ideal.sup()
        if not self.ideal.contains(sup):
            raise LatticeError(f"{self.name} does not contain its supremum")
        return sup

    def contains(self, a) -> bool:
        return self.ideal.contains(a)

    def leq(self, a, b) -> bool:
        return self.carrier.leq(a, b)

    def meet(self, a, b):
        return self.carrier.meet(a, b)

    def join(self, a, b):
        return self.carrier.join(a, b)

    def truncated_elements(self, level: int) -> Tuple[Any, ...]:
        return self.ideal.members_upto(level)

    def format_element(self, a) -> str:
        return self.carrier.format_element(a)

    def key(self) -> Tuple:
        return ('ideal', self.ideal)

    def order_key(self, a):
        return self.carrier.order_key(a)


@dataclass(frozen=True)
class RampFamily:
    """
    kappa: W -> L^X given coordinate-wise by ramp maps W -> L. kappa(w) is the
    pointwise sup of the finite values.
    """
    src: CompleteLattice
    dst: FunctionLattice
    coordinates: Tuple[BasisMap, ...]
    name: str = field(default='', compare=False)

    def __post_init__(self):
        if self.src.kind != LatticeKind.OMEGA:
            raise StructureError("Ramp kappa needs the omega chain as basis object")
        if len(self.coordinates) != len(self.dst.ground):
            raise StructureError(f"Ramp kappa needs one ramp per point of {self.dst.ground.name}")
        for x, ramp in zip(self.dst.ground.elements, self.coordinates):
            if ramp.src != self.src or ramp.dst != self.dst.basis:
                raise BasisMismatch(f"Ramp at {x} does not run W -> {self.dst.basis.name}")
            if ramp.ramp.at_omega is not None:
                raise StructureError(f"Ramp at {x} overrides its value at w")

    def __call__(self, n: Any) -> LFunction:
        return self.dst.make(tuple(ramp(n) for ramp in self.coordinates))

    def sample_level(self) -> int:
        return max((ramp.sample_level() for ramp in self.coordinates), default=0)

    def unbounded_points(self) -> frozenset:
        """Points whose coordinate rises through every finite level."""
        return frozenset(x for x, ramp in zip(self.dst.ground.elements, self.coordinates) if ramp.ramp.slope == 1)


@dataclass(frozen=True)
class Inclusion:
    """A member-preserving map from a lattice of members into the function lattice."""
    src: CompleteLattice
    dst: CompleteLattice
    name: str = field(default='e', compare=False)

    def __call__(self, a: Any) -> Any:
        return a

    def sample_level(self) -> int:
        return 0


@dataclass(frozen=True)
class Corestriction:
    """kappa read as a map into the bornology it generates."""
    src: CompleteLattice
    dst: CompleteLattice
    kappa: Any
    name: str = field(default='k', compare=False)

    def __call__(self, b: Any) -> Any:
        return self.kappa(b)

    def sample_level(self) -> int:
        return getattr(self.kappa, 'sample_level', lambda: 0)()


@dataclass(frozen=True)
class RestrictedImage:
    """T(f, psi) restricted to bornologies, as a map between basis objects."""
    src: CompleteLattice
    dst: CompleteLattice
    operator: ImageOperator
    name: str = field(default='T', compare=False)

    def __call__(self, alpha: LFunction) -> LFunction:
        return self.operator(alpha)

    def sample_level(self) -> int:
        return self.operator.sample_level()


@dataclass(frozen=True)
class ComposedMap:
    first: Any
    second: Any

    @property
    def src(self) -> CompleteLattice:
        return self.first.src

    @property
    def dst(self) -> CompleteLattice:
        return self.second.dst

    @property
    def name(self) -> str:
        return f"{getattr(self.second, 'name', '')}.{getattr(self.first, 'name', '')}"

    def __call__(self, a: Any) -> Any:
        return self.second(self.first(a))


def compose_maps(first: Any, second: Any) -> Any:
    """second AFTER first; basis maps stay in their normal form."""
    if first.dst != second.src:
        raise BasisMismatch(f"Cannot compose maps into {first.dst.name} with maps out of {second.src.name}")
    if isinstance(first, BasisMap) and isinstance(second, BasisMap):
        return first.compose(second)
    return ComposedMap(first, second)


@dataclass(frozen=True)
class BornSystem:
    ground: GroundSet
    basis: CompleteLattice
    bobj: CompleteLattice
    kappa: Any
    name: str = field(default='', compare=False)

    @property
    def carrier(self) -> FunctionLattice:
        return FunctionLattice(self.basis, self.ground)


@dataclass(frozen=True)
class SystemMorphism:
    src: BornSystem
    dst: BornSystem
    ground_map: GroundMap
    bobj_map: Any
    basis_map: BasisMap
    name: str = field(default='', compare=False)

    def compose(self, second: 'SystemMorphism') -> 'SystemMorphism':
        """second AFTER self."""
        return SystemMorphism(self.src, second.dst, self.ground_map.compose(second.ground_map),
                              compose_maps(self.bobj_map, second.bobj_map),
                              self.basis_map.compose(second.basis_map))


def bobj_points(bobj: CompleteLattice, level: int) -> Tuple[Any, ...]:
    """
    Elements of a basis object that the checks range over: the finite levels
    and w for the omega chain.
    """
    if bobj.kind == LatticeKind.OMEGA:
        return tuple(range(level + 1)) + (OMEGA,)
    if bobj.is_finite:
        return bobj.elements()
    return bobj.truncated_elements(level)


def kappa_image_sup(system: BornSystem) -> Any:
    """Join of the image of kappa, taken with arbitrary joins."""
    bobj, kappa = system.bobj, system.kappa
    if isinstance(kappa, RampFamily):
        return kappa(OMEGA)
    if isinstance(bobj, IdealCarrier):
        return bobj.ideal.sup()
    return system.carrier.sup(kappa(b) for b in bobj.elements())


def validate_system(ground: GroundSet, kappa: Any, bobj: CompleteLattice, basis: CompleteLattice,
                    level: int = 3, name: str = '') -> BornSystem:
    """
    Check that kappa: bobj -> basis^ground is an ideal-category morphism and
    that its image generates top with arbitrary joins.

    Raises:
        NotIdealMorphism: kappa fails bottom, join or meet preservation
        NoCoverage: the image of kappa does not join to top
    """
    carrier = FunctionLattice(basis, ground)
    if kappa.src != bobj or kappa.dst != carrier:
        raise BasisMismatch(f"kappa of {name or 'system'} does not run {bobj.name} -> {carrier.name}")
    verdict = catit_verdict(kappa, MeetMode.STRICT, level)
    if not verdict:
        raise NotIdealMorphism(f"kappa of {name or 'system'} is not an ideal morphism: {verdict.detail}",
                               invariant="kappa", witness=verdict.witness)
    system = BornSystem(ground, basis, bobj, kappa, name)
    top = kappa_image_sup(system)
    if top != carrier.top:
        raise NoCoverage(f"Image of kappa in {name or 'system'} does not cover {ground.name}",
                         invariant="coverage", witness=top)
    return system


def is_system_morphism(m: SystemMorphism, level: int = 6) -> Verdict:
    """
    phi lands in the target basis object and T(f, psi) . kappa1 = kappa2 . phi
    on the points of the source basis object. At w only the square is checked:
    an omega basis object reaches its bornology through the finite levels.
    """
    src, dst = m.src, m.dst
    if m.ground_map.src != src.ground or m.ground_map.dst != dst.ground:
        return Verdict(False, detail="ground map does not fit the systems")
    if m.basis_map.src != src.basis or m.basis_map.dst != dst.basis:
        return Verdict(False, detail="basis map does not fit the systems")
    if m.bobj_map.src != src.bobj or m.bobj_map.dst != dst.bobj:
        return Verdict(False, detail="basis-object map does not fit the systems")
    image = ImageOperator(m.ground_map, m.basis_map)
    checked = 0
    omega_source = src.bobj.kind == LatticeKind.OMEGA
    for b in bobj_points(src.bobj, level):
        checked += 1
        theta = m.bobj_map(b)
        if not (omega_source and b == OMEGA) and not dst.bobj.contains(theta):
            return Verdict(False, b, "basis-object map leaves the target basis object", checked)
        if image(src.kappa(b)) != dst.kappa(theta):
            return Verdict(False, b, "square does not commute", checked)
    return Verdict(True, checked=checked)


def identity_system_morphism(system: BornSystem) -> SystemMorphism:
    bobj = system.bobj
    if isinstance(bobj, FiniteLattice) or bobj.kind == LatticeKind.OMEGA:
        bobj_map = BasisMap.identity(bobj)
    else:
        bobj_map = Inclusion(bobj, bobj, 'id')
    return SystemMorphism(system, system, GroundMap.identity(system.ground), bobj_map,
                          BasisMap.identity(system.basis), 'id')


def spatialize(system: BornSystem) -> BornSpace:
    """
    The space whose bornology is the Lat_bot ideal generated by the image of
    kappa.

    Finite basis objects give a principal bornology. A ramp kappa gives the
    ramp downset whose region is the set of coordinates rising through every
    finite level and whose ceiling is kappa(w). An ideal used as basis object
    with its inclusion gives the ideal back.
    """
    carrier = system.carrier
    kappa, bobj = system.kappa, system.bobj
    if isinstance(kappa, RampFamily):
        if system.basis.kind == LatticeKind.OMEGA:
            tau = RampDownset(carrier, kappa.unbounded_points(), kappa(OMEGA))
        else:
            tau = principal_ideal(carrier, kappa(OMEGA))
    elif isinstance(bobj, IdealCarrier):
        tau = bobj.ideal
    else:
        image = tuple(kappa(b) for b in bobj.elements())
        tau = generate_ideal(GeneratorSet(carrier, image), GenerationMode.LAT_BOT)
    name = f"Spat({system.name})" if system.name else ''
    return BornSpace(system.ground, system.basis, tau, name)


def spatialize_morphism(m: SystemMorphism, level: int = 6) -> SpaceMorphism:
    """Spat(f, phi) = (f, psi), with boundedness re-verified."""
    src, dst = spatialize(m.src), spatialize(m.dst)
    verdict = is_bounded(m.ground_map, m.basis_map, src, dst, level)
    if not verdict:
        raise StructureError("Spatialized morphism is not bounded", invariant="bounded", witness=verdict.witness)
    return SpaceMorphism(src, dst, m.ground_map, m.basis_map)


def embed_space(space: BornSpace, max_members: int = 4096) -> BornSystem:
    """
    E(X, tau) = (X, e, tau): the bornology itself as basis object, with the
    inclusion into the function lattice as kappa.

    Raises:
        NotRepresentable: an extensional bornology with more than max_members members
    """
    tau = space.bornology
    name = f"E({space.name})" if space.name else ''
    if isinstance(tau, Extensional):
        if len(tau) > max_members:
            raise NotRepresentable(f"Bornology of {space.name or 'space'} has {len(tau)} members",
                                   invariant="size", witness=len(tau))
        bobj = MemberLattice(tau, f"<{space.name}>" if space.name else '')
    else:
        bobj = IdealCarrier(tau, f"<{space.name}>" if space.name else '')
    return BornSystem(space.ground, space.basis, bobj, Inclusion(bobj, space.carrier), name)


def embed_morphism(m: SpaceMorphism, max_members: int = 4096) -> SystemMorphism:
    """E(f, psi) = (f, T(f, psi) restricted to the bornologies, psi)."""
    src, dst = embed_space(m.src, max_members), embed_space(m.dst, max_members)
    restricted = RestrictedImage(src.bobj, dst.bobj, ImageOperator(m.ground_map, m.basis_map))
    return SystemMorphism(src, dst, m.ground_map, restricted, m.basis_map, m.name)


def cofinal_chain(space: BornSpace) -> BornSystem:
    """
    A ramp bornology presented by a chain indexed by the omega chain:
    kappa(n)(x) = n on the region, and kappa(n)(x) = ceiling(x) for n >= 1
    elsewhere.

    Raises:
        NotRepresentable: the bornology is not a ramp downset
    """
    tau = space.bornology
    if not isinstance(tau, RampDownset):
        raise NotRepresentable(f"Bornology of {space.name or 'space'} is not a ramp downset",
                               invariant="ramp")
    chain = space.basis
    ramps = []
    for x in space.ground.elements:
        if x in tau.region:
            ramps.append(BasisMap.from_ramp(chain, chain, slope=1, offset=0, cap=OMEGA, name=x))
        else:
            ramps.append(BasisMap.from_ramp(chain, chain, {0: 0}, slope=0, cap=tau.ceiling(x), name=x))
    kappa = RampFamily(chain, space.carrier, tuple(ramps))
    return BornSystem(space.ground, space.basis, chain, kappa, f"C({space.name})" if space.name else '')


def reflection_arrow(system: BornSystem, max_members: int = 4096, level: int = 6) -> SystemMorphism:
    """
    (1_X, kappa corestricted to its bornology): system -> E(Spat(system)).

    Raises:
        StructureError: kappa leaves the bornology it generates at a finite point
    """
    target = embed_space(spatialize(system), max_members)
    for b in bobj_points(system.bobj, level):
        if system.bobj.kind == LatticeKind.OMEGA and b == OMEGA:
            continue
        if not target.bobj.contains(system.kappa(b)):
            raise StructureError(f"kappa of {system.name or 'system'} leaves Spat at {b}",
                                 invariant="corestriction", witness=system.kappa(b))
    corestricted = Corestriction(system.bobj, target.bobj, system.kappa)
    return SystemMorphism(system, target, GroundMap.identity(system.ground), corestricted,
                          BasisMap.identity(system.basis), 'eta')


def loc(target: Union[BornSystem, SystemMorphism]) -> Any:
    """The basis object of a system, or the basis-object map of a morphism."""
    if isinstance(target, BornSystem):
        return target.bobj
    return target.bobj_map


def _maps_agree(first: Callable, second: Callable, points) -> Optional[Any]:
    for b in points:
        if first(b) != second(b):
            return b
    return None


def verify_universal_property(system: BornSystem, target: BornSpace, m: SystemMorphism, level: int = 6,
                              max_members: int = 4096) -> Verdict:
    """
    m: system -> E(target) factors as E(f, psi) . eta through the reflection
    arrow eta: (f, psi) is bounded from Spat(system) to target and the
    triangle of basis-object maps commutes.

    E(g, psi') . eta has ground component g and basis component psi', so the
    only candidate is (f, psi) = (m.ground_map, m.basis_map); a factorization
    is unique once it exists.
    """
    embedded = embed_space(target, max_members)
    if m.src != system or m.dst != embedded:
        return Verdict(False, detail="morphism does not run from the system into the embedding of the target")
    verdict = is_system_morphism(m, level)
    if not verdict:
        return Verdict(False, verdict.witness, f"not a system morphism: {verdict.detail}", verdict.checked)
    space = spatialize(system)
    bounded = is_bounded(m.ground_map, m.basis_map, space, target, level)
    if not bounded:
        return Verdict(False, bounded.witness, "ground map is not bounded out of the spatialization",
                       verdict.checked + bounded.checked)
    factor = embed_morphism(SpaceMorphism(space, target, m.ground_map, m.basis_map), max_members)
    composite = reflection_arrow(system, max_members, level).compose(factor)
    points = bobj_points(system.bobj, level)
    mismatch = _maps_agree(composite.bobj_map, m.bobj_map, points)
    checked = verdict.checked + bounded.checked + len(points)
    if mismatch is not None:
        return Verdict(False, mismatch, "triangle does not commute", checked)
    return Verdict(True, checked=checked)


def morphisms_into_embedding(system: BornSystem, target: BornSpace, level: int = 6,
                             max_members: int = 4096) -> Iterator[SystemMorphism]:
    """
    Every fixed-basis system morphism system -> E(target). The inclusion
    kappa of E(target) is injective, so the basis-object map is forced to
    b -> T(f, id)(kappa(b)); a ground map f qualifies when those values lie
    in the target bornology at the finite points.
    """
    if system.basis != target.basis:
        return
    embedded = embed_space(target, max_members)
    identity = BasisMap.identity(system.basis)
    omega_source = system.bobj.kind == LatticeKind.OMEGA
    points = [b for b in bobj_points(system.bobj, level) if not (omega_source and b == OMEGA)]
    for f in GroundMap.all_maps(system.ground, target.ground):
        image = ImageOperator(f, identity)
        if all(target.bornology.contains(image(system.kappa(b))) for b in points):
            theta = Corestriction(system.bobj, embedded.bobj, ComposedMap(system.kappa, image), 'theta')
            yield SystemMorphism(system, embedded, f, theta, identity, f"{system.name}->E({target.name})")


def verify_fullness(m: SpaceMorphism, max_members: int = 8) -> Verdict:
    """
    Every map theta between the embedded bornologies with
    e2 . theta = T(f, psi) . e1 is the restriction of T(f, psi). Candidates
    are built from the per-member solution sets.
    """
    src, dst = m.src.bornology, m.dst.bornology
    if not (isinstance(src, Extensional) and isinstance(dst, Extensional)):
        return Verdict(False, detail="fullness is checked on extensional bornologies only")
    if len(src) > max_members or len(dst) > max_members:
        return Verdict(False, detail=f"bornologies larger than {max_members} members")
    embedded = embed_morphism(m)
    e1, e2 = embedded.src, embedded.dst
    image = m.image_operator()
    members = e1.bobj.elements()
    solutions = [[beta for beta in e2.bobj.elements() if e2.kappa(beta) == image(e1.kappa(alpha))]
                 for alpha in members]
    checked = 0
    for candidate in itertools.product(*solutions):
        checked += 1
        if any(theta != embedded.bobj_map(alpha) for alpha, theta in zip(members, candidate)):
            return Verdict(False, candidate, "commuting map differs from the restricted image", checked)
    if checked == 0:
        return Verdict(False, detail="no commuting map: the image leaves the target bornology")
    return Verdict(True, checked=checked)
