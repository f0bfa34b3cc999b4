"""
Catalog module.
The shipped lattices (every lattice up to isomorphism with at most five
elements), basis maps between them and on the omega chain, and small ground
sets and maps for exhaustive checks.
"""

import itertools
import logging
from typing import Dict, Iterator, List, Tuple

from lattice_core import (
    JOIN_PRESERVING, OMEGA, BasisMap, FiniteLattice, LatticeSpec, OmegaChain, build_lattice,
    check_homomorphism,
)
from powerset_theory import GroundMap, GroundSet

logger = logging.getLogger(__name__)

# name -> (elements, covers)
_SHAPES: Dict[str, Tuple[List[str], List[Tuple[str, str]]]] = {
    "1": (["0"], []),
    "2": (["0", "1"], [("0", "1")]),
    "C3": (["0", "m", "1"], [("0", "m"), ("m", "1")]),
    "C4": (["0", "a", "b", "1"], [("0", "a"), ("a", "b"), ("b", "1")]),
    "B2": (["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
    "C5": (["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "c"), ("c", "1")]),
    "M3": (["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]),
    "N5": (["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]),
    "B2T": (["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")]),
    "B2B": (["0", "c", "a", "b", "1"], [("0", "c"), ("c", "a"), ("c", "b"), ("a", "1"), ("b", "1")]),
}


def lattice(name: str) -> FiniteLattice:
    elements, covers = _SHAPES[name]
    return build_lattice(LatticeSpec(name, 'finite', list(elements), list(covers)))


def finite_lattices(max_size: int = 5) -> List[FiniteLattice]:
    """Catalog lattices with at most max_size elements, smallest first."""
    return [lattice(name) for name, (elements, _) in _SHAPES.items() if len(elements) <= max_size]


def omega() -> OmegaChain:
    return OmegaChain("W")


def join_preserving_maps(src: FiniteLattice, dst: FiniteLattice) -> List[BasisMap]:
    """Every map src -> dst preserving bottom and binary joins."""
    found = []
    for images in itertools.product(dst.elements(), repeat=len(src.elements())):
        phi = BasisMap.from_table(src, dst, dict(zip(src.elements(), images)))
        if check_homomorphism(phi, JOIN_PRESERVING):
            found.append(phi)
    return found


def omega_maps() -> Dict[str, BasisMap]:
    """Named join-preserving maps involving the omega chain."""
    w, two, c3 = omega(), lattice("2"), lattice("C3")
    return {
        "id": BasisMap.identity(w),
        "shift": BasisMap.from_ramp(w, w, {0: 0}, slope=1, offset=1, cap=OMEGA, name="shift"),
        "lag": BasisMap.from_ramp(w, w, {0: 0, 1: 0}, slope=1, offset=-1, cap=OMEGA, name="lag"),
        "cap3": BasisMap.from_ramp(w, w, slope=1, offset=0, cap=3, name="cap3"),
        "collapse2": BasisMap.from_ramp(w, two, {0: "0"}, slope=0, cap="1", name="collapse2"),
        "collapse3": BasisMap.from_ramp(w, c3, {0: "0", 1: "m"}, slope=0, cap="1", name="collapse3"),
        "embed2": BasisMap.from_table(two, w, {"0": 0, "1": OMEGA}, name="embed2"),
        "embedC3": BasisMap.from_table(c3, w, {"0": 0, "m": 2, "1": OMEGA}, name="embedC3"),
    }


def collapse_to_omega() -> BasisMap:
    """0 -> 0, every other level -> w. Its right adjoint is not continuous at w."""
    w = omega()
    return BasisMap.from_ramp(w, w, {0: 0}, slope=0, cap=OMEGA, name="collapse")


def ground_set(size: int, prefix: str = "x") -> GroundSet:
    return GroundSet(f"{prefix.upper()}{size}", tuple(f"{prefix}{i + 1}" for i in range(size)))


def ground_sets(max_size: int, prefix: str = "x") -> List[GroundSet]:
    return [ground_set(n, prefix) for n in range(max_size + 1)]


def ground_maps(src: GroundSet, dst: GroundSet) -> Iterator[GroundMap]:
    return GroundMap.all_maps(src, dst)
