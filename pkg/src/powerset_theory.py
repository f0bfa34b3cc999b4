"""
Powerset theory module.
Finite ground sets, function lattices L^X, the covariant image operator
T(f, phi) with its right adjoint, and the bornological theory handle.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple

from errors import BasisMismatch, IdealError, StructureError, UnsupportedReduct
from ideal_engine import (
    GenerationMode, Ideal, RampDownset, basis_preimage, coordinates, is_omega_power, principal_ideal,
)
from lattice_core import LAT_BOT, BasisMap, CompleteLattice, LatticeKind, OpSignature, right_adjoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundSet:
    name: str = field(compare=False)
    elements: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise StructureError(f"Ground set {self.name} lists a point twice")

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise StructureError(f"{x!r} is not a point of {self.name}") from None

    def __contains__(self, x: str) -> bool:
        return x in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class GroundMap:
    """A total map between ground sets; images[i] is the image of src.elements[i]."""
    src: GroundSet
    dst: GroundSet
    images: Tuple[str, ...]
    name: str = field(default='', compare=False)

    def __post_init__(self):
        if len(self.images) != len(self.src):
            raise StructureError(f"Map {self.name or '?'} is not total on {self.src.name}")
        stray = [y for y in self.images if y not in self.dst]
        if stray:
            raise StructureError(f"Map {self.name or '?'} leaves {self.dst.name} at {stray[0]!r}")

    @classmethod
    def from_dict(cls, src: GroundSet, dst: GroundSet, mapping: Dict[str, str], name: str = '') -> 'GroundMap':
        missing = [x for x in src.elements if x not in mapping]
        if missing:
            raise StructureError(f"Map {name or '?'} is undefined at {missing[0]!r}")
        extra = [x for x in mapping if x not in src]
        if extra:
            raise StructureError(f"Map {name or '?'} mentions {extra[0]!r}, not a point of {src.name}")
        return cls(src, dst, tuple(mapping[x] for x in src.elements), name)

    @classmethod
    def identity(cls, ground: GroundSet) -> 'GroundMap':
        return cls(ground, ground, ground.elements, 'id')

    @classmethod
    def all_maps(cls, src: GroundSet, dst: GroundSet) -> Iterator['GroundMap']:
        for images in itertools.product(dst.elements, repeat=len(src)):
            yield cls(src, dst, images)

    def __call__(self, x: str) -> str:
        return self.images[self.src.index(x)]

    @cached_property
    def fibres(self) -> Tuple[Tuple[str, ...], ...]:
        """Preimage of each point of dst, in dst order."""
        return tuple(tuple(x for x, y in zip(self.src.elements, self.images) if y == target)
                     for target in self.dst.elements)

    def preimage(self, y: str) -> Tuple[str, ...]:
        return self.fibres[self.dst.index(y)]

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def compose(self, second: 'GroundMap') -> 'GroundMap':
        """second AFTER self."""
        if self.dst != second.src:
            raise StructureError(f"Cannot compose {self.name or '?'} into {second.src.name}")
        name = f"{second.name}.{self.name}" if self.name and second.name else ''
        return GroundMap(self.src, second.dst, tuple(second(y) for y in self.images), name)

    def describe(self) -> str:
        return " ".join(f"{x}->{y}" for x, y in zip(self.src.elements, self.images))


@dataclass(frozen=True)
class LFunction:
    """An element of L^X; equality is pointwise."""
    domain: GroundSet
    values: Tuple[Any, ...]
    basis: CompleteLattice = field(compare=False, repr=False, default=None)

    def __call__(self, x: str) -> Any:
        return self.values[self.domain.index(x)]

    def as_dict(self) -> Dict[str, Any]:
        return dict(zip(self.domain.elements, self.values))


class FunctionLattice(CompleteLattice):
    """L^X under the pointwise order. Nothing is enumerated unless asked."""

    kind = LatticeKind.FUNCTION

    def __init__(self, basis: CompleteLattice, ground: GroundSet):
        super().__init__(f"{basis.name}^{ground.name}")
        self.basis = basis
        self.ground = ground

    def make(self, values: Sequence[Any]) -> LFunction:
        return LFunction(self.ground, tuple(values), self.basis)

    def from_mapping(self, mapping: Dict[str, Any]) -> LFunction:
        missing = [x for x in self.ground.elements if x not in mapping]
        if missing:
            raise StructureError(f"Function on {self.ground.name} has no value at {missing[0]!r}")
        extra = [x for x in mapping if x not in self.ground]
        if extra:
            raise StructureError(f"Function on {self.ground.name} mentions {extra[0]!r}")
        for x, v in mapping.items():
            if not self.basis.contains(v):
                raise StructureError(f"Value {v!r} at {x} is not in {self.basis.name}")
        return self.make(tuple(mapping[x] for x in self.ground.elements))

    def constant(self, value: Any) -> LFunction:
        return self.make((value,) * len(self.ground))

    @cached_property
    def bot(self) -> LFunction:
        return self.constant(self.basis.bot)

    @cached_property
    def top(self) -> LFunction:
        return self.constant(self.basis.top)

    @property
    def is_finite(self) -> bool:
        return self.basis.is_finite or len(self.ground) == 0

    def contains(self, a) -> bool:
        return (isinstance(a, LFunction) and a.domain == self.ground
                and all(self.basis.contains(v) for v in a.values))

    def leq(self, a: LFunction, b: LFunction) -> bool:
        return all(self.basis.leq(u, v) for u, v in zip(a.values, b.values))

    def meet(self, a: LFunction, b: LFunction) -> LFunction:
        return self.make(tuple(self.basis.meet(u, v) for u, v in zip(a.values, b.values)))

    def join(self, a: LFunction, b: LFunction) -> LFunction:
        return self.make(tuple(self.basis.join(u, v) for u, v in zip(a.values, b.values)))

    def elements(self) -> Tuple[LFunction, ...]:
        if not self.is_finite:
            return super().elements()
        if not self.ground.elements:
            return (self.make(()),)
        return tuple(self.make(v) for v in itertools.product(self.basis.elements(), repeat=len(self.ground)))

    def truncated_elements(self, level: int) -> Tuple[LFunction, ...]:
        levels = self.basis.truncated_elements(level)
        return tuple(self.make(v) for v in itertools.product(levels, repeat=len(self.ground)))

    def format_element(self, a: LFunction) -> str:
        inner = " ".join(f"{x}={self.basis.format_element(v)}" for x, v in zip(self.ground.elements, a.values))
        return "{" + inner + "}"

    def key(self) -> Tuple:
        return ('function', self.ground.elements, self.basis.key())

    def order_key(self, a: LFunction) -> Tuple:
        return tuple(self.basis.order_key(v) for v in a.values)


def function_lattice(basis: CompleteLattice, ground: GroundSet) -> FunctionLattice:
    return FunctionLattice(basis, ground)


def forward_image(f: GroundMap, phi: BasisMap, alpha: LFunction) -> LFunction:
    """
    (T(f, phi) alpha)(y) = join of phi(alpha(x)) over f(x) = y; an empty fibre
    gives bottom.

    Raises:
        BasisMismatch: alpha is not an element of phi.src^(f.src)
    """
    if alpha.domain != f.src:
        raise BasisMismatch(f"Function lives on {alpha.domain.name}, map starts at {f.src.name}")
    if alpha.basis is not None and alpha.basis != phi.src:
        raise BasisMismatch(f"Function takes values in {alpha.basis.name}, basis map starts at {phi.src.name}")
    dst = phi.dst
    values = tuple(dst.sup(phi(alpha(x)) for x in fibre) for fibre in f.fibres)
    return LFunction(f.dst, values, dst)


def forward_right_adjoint(f: GroundMap, phi: BasisMap, beta: LFunction,
                          adjoint: Optional[BasisMap] = None) -> LFunction:
    """
    phi^ . beta . f, the right adjoint of T(f, phi).

    Raises:
        NotJoinPreserving: phi has no right adjoint
        BasisMismatch: beta is not an element of phi.dst^(f.dst)
    """
    if beta.domain != f.dst:
        raise BasisMismatch(f"Function lives on {beta.domain.name}, map ends at {f.dst.name}")
    if beta.basis is not None and beta.basis != phi.dst:
        raise BasisMismatch(f"Function takes values in {beta.basis.name}, basis map ends at {phi.dst.name}")
    adjoint = adjoint if adjoint is not None else right_adjoint(phi)
    return LFunction(f.src, tuple(adjoint(beta(y)) for y in f.images), phi.src)


class ImageOperator:
    """T(f, phi): phi.src^(f.src) -> phi.dst^(f.dst), usable as an ideal-category map."""

    def __init__(self, ground_map: GroundMap, basis_map: BasisMap, name: str = ''):
        self.ground_map = ground_map
        self.basis_map = basis_map
        self.src = FunctionLattice(basis_map.src, ground_map.src)
        self.dst = FunctionLattice(basis_map.dst, ground_map.dst)
        self.name = name or f"T({ground_map.name or 'f'},{basis_map.name or 'phi'})"

    def __call__(self, alpha: LFunction) -> LFunction:
        return forward_image(self.ground_map, self.basis_map, alpha)

    @cached_property
    def adjoint(self) -> BasisMap:
        return right_adjoint(self.basis_map)

    def right_adjoint(self, beta: LFunction) -> LFunction:
        return forward_right_adjoint(self.ground_map, self.basis_map, beta, self.adjoint)

    def sample_level(self) -> int:
        return self.basis_map.sample_level()

    def pull_back(self, target: Ideal) -> Ideal:
        """
        { alpha | T(f, phi)(alpha) in target }.

        The target is a product of coordinate ideals J_y; alpha is in the
        preimage iff phi(alpha(x)) lies in J_f(x) for every x.
        """
        if target.carrier != self.dst:
            raise IdealError(f"Ideal lives on {target.carrier.name}, operator ends at {self.dst.name}")
        per_target = coordinates(target)
        per_point = [basis_preimage(self.basis_map, *per_target[y]) for y in self.ground_map.images]
        ceiling = self.src.make(tuple(c for c, _ in per_point))
        if is_omega_power(self.src):
            region = frozenset(x for x, (_, finite_only) in zip(self.src.ground.elements, per_point) if finite_only)
            return RampDownset(self.src, region, ceiling)
        return principal_ideal(self.src, ceiling)

    def compose(self, second: 'ImageOperator') -> 'ImageOperator':
        """second AFTER self."""
        return ImageOperator(self.ground_map.compose(second.ground_map), self.basis_map.compose(second.basis_map))


@dataclass(frozen=True)
class BornologicalTheory:
    """
    The powerset theory over a basis followed by the forgetful step to the
    Lat_bot reduct: objects go to function lattices, maps to image operators
    read as ideal-category morphisms.
    """
    basis: CompleteLattice
    signature: OpSignature
    generation_mode: GenerationMode = GenerationMode.LAT_BOT
    coverage_mode: GenerationMode = GenerationMode.CLAT

    def powerset(self, ground: GroundSet) -> FunctionLattice:
        return FunctionLattice(self.basis, ground)

    def image(self, f: GroundMap, phi: Optional[BasisMap] = None) -> ImageOperator:
        return ImageOperator(f, phi if phi is not None else BasisMap.identity(self.basis))


def bornological_theory(basis: CompleteLattice, sig: OpSignature = LAT_BOT) -> BornologicalTheory:
    """
    Raises:
        UnsupportedReduct: sig is not the Lat_bot reduct
    """
    if sig != LAT_BOT:
        raise UnsupportedReduct(f"Only the Lat_bot reduct {LAT_BOT} is supported, got {sig}")
    return BornologicalTheory(basis, sig)
