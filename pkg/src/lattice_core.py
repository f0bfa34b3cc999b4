"""
Lattice core module.
Effectively presented complete lattices (finite ones and the omega+1 chain),
basis maps between them, signature homomorphism checks and right adjoints.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, reduce
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from errors import (
    BasisMismatch, LatticeError, NoBotTop, NoJoin, NoMeet, NotAPoset,
    NotJoinPreserving, NotMonotone, UnsupportedComposition,
)

logger = logging.getLogger(__name__)

# The top of the omega+1 chain. Finite levels are plain ints.
OMEGA = math.inf


class LatticeKind(Enum):
    FINITE = "finite"
    OMEGA = "omega"
    FUNCTION = "function"
    IDEAL = "ideal"


@dataclass
class Verdict:
    """Outcome of a check: holds, or a counterexample."""
    holds: bool
    witness: Any = None
    detail: str = ''
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ChainSubset:
    """
    A represented subset of the omega chain: finitely many members plus,
    optionally, every finite level from `tail_from` on.
    """
    members: Tuple[Any, ...] = ()
    tail_from: Optional[int] = None

    @classmethod
    def all_finite(cls) -> 'ChainSubset':
        return cls((), 0)


class CompleteLattice:
    """Common interface of every carrier the library computes with."""

    kind: LatticeKind

    def __init__(self, name: str):
        self.name = name

    @property
    def bot(self) -> Any:
        raise NotImplementedError

    @property
    def top(self) -> Any:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def leq(self, a: Any, b: Any) -> bool:
        raise NotImplementedError

    def meet(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def join(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def contains(self, a: Any) -> bool:
        raise NotImplementedError

    def elements(self) -> Tuple[Any, ...]:
        raise LatticeError(f"Lattice {self.name} is infinite; use truncated_elements")

    def truncated_elements(self, level: int) -> Tuple[Any, ...]:
        return self.elements()

    def format_element(self, a: Any) -> str:
        return str(a)

    def parse_element(self, token: str) -> Any:
        raise NotImplementedError

    def key(self) -> Tuple:
        raise NotImplementedError

    def order_key(self, a: Any) -> Any:
        """Sort key giving the deterministic output order of elements."""
        raise NotImplementedError

    def lt(self, a: Any, b: Any) -> bool:
        return self.leq(a, b) and a != b

    def sup(self, items: Iterable[Any]) -> Any:
        return reduce(self.join, items, self.bot)

    def inf(self, items: Iterable[Any]) -> Any:
        return reduce(self.meet, items, self.top)

    def size(self) -> Optional[int]:
        return len(self.elements()) if self.is_finite else None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CompleteLattice) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class FiniteLattice(CompleteLattice):
    """
    A finite lattice given extensionally by its order matrix.

    Elements are arbitrary hashables in declaration order; meets and joins are
    precomputed into index tables at construction.
    """

    kind = LatticeKind.FINITE

    def __init__(self, name: str, elements: Sequence[Hashable], leq_matrix: np.ndarray,
                 bot: Optional[Hashable] = None, top: Optional[Hashable] = None):
        super().__init__(name)
        self._elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self._elements)}
        if len(self._index) != len(self._elements):
            raise NotAPoset(f"Lattice {name} declares duplicate elements")
        if not self._elements:
            raise NoBotTop(f"Lattice {name} has no elements")

        self._leq = np.asarray(leq_matrix, dtype=bool)
        self._check_partial_order()
        self._bot_index = self._extremum(bot, lower=True)
        self._top_index = self._extremum(top, lower=False)
        self._meet = self._bound_table(lower=True)
        self._join = self._bound_table(lower=False)

    def _check_partial_order(self):
        n = len(self._elements)
        leq = self._leq
        if leq.shape != (n, n):
            raise NotAPoset(f"Order matrix of {self.name} has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            i = int(np.argmin(leq.diagonal()))
            raise NotAPoset(f"{self.name}: {self._elements[i]} is not below itself",
                            invariant="reflexive", witness=self._elements[i])
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise NotAPoset(f"{self.name}: {self._elements[i]} and {self._elements[j]} are mutually below each other",
                            invariant="antisymmetric", witness=(self._elements[i], self._elements[j]))
        # i <= j <= k must give i <= k
        composed = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
        missing = composed & ~leq
        if missing.any():
            i, k = map(int, np.argwhere(missing)[0])
            raise NotAPoset(f"{self.name}: order is not transitive at ({self._elements[i]}, {self._elements[k]})",
                            invariant="transitive", witness=(self._elements[i], self._elements[k]))

    def _extremum(self, declared: Optional[Hashable], lower: bool) -> int:
        rows = self._leq if lower else self._leq.T
        candidates = [i for i in range(len(self._elements)) if rows[i].all()]
        label = "bottom" if lower else "top"
        if not candidates:
            raise NoBotTop(f"Lattice {self.name} has no {label} element", invariant=label)
        found = candidates[0]
        if declared is not None:
            if declared not in self._index or self._index[declared] != found:
                raise NoBotTop(f"Declared {label} {declared} of {self.name} is not the {label} element",
                               invariant=label, witness=declared)
        return found

    def _bound_table(self, lower: bool) -> np.ndarray:
        n = len(self._elements)
        leq = self._leq if lower else self._leq.T
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                bounds = np.flatnonzero(leq[:, a] & leq[:, b])
                best = [c for c in bounds if leq[bounds, c].all()]
                if not best:
                    error = NoMeet if lower else NoJoin
                    label = "meet" if lower else "join"
                    raise error(f"{self._elements[a]} and {self._elements[b]} have no {label} in {self.name}",
                                invariant=label, witness=(self._elements[a], self._elements[b]))
                table[a, b] = table[b, a] = best[0]
        return table

    @property
    def bot(self) -> Hashable:
        return self._elements[self._bot_index]

    @property
    def top(self) -> Hashable:
        return self._elements[self._top_index]

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def order_matrix(self) -> np.ndarray:
        return self._leq.copy()

    def index(self, a: Hashable) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise LatticeError(f"{a!r} is not an element of {self.name}") from None

    def leq(self, a, b) -> bool:
        return bool(self._leq[self.index(a), self.index(b)])

    def meet(self, a, b):
        return self._elements[self._meet[self.index(a), self.index(b)]]

    def join(self, a, b):
        return self._elements[self._join[self.index(a), self.index(b)]]

    def contains(self, a) -> bool:
        try:
            return a in self._index
        except TypeError:
            return False

    def elements(self) -> Tuple[Hashable, ...]:
        return self._elements

    def parse_element(self, token: str) -> Hashable:
        for e in self._elements:
            if str(e) == token:
                return e
        raise LatticeError(f"{token!r} is not an element of {self.name}")

    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        """Hasse diagram edges in declaration order."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self._elements)))
        graph.add_edges_from((i, j) for i, j in np.argwhere(self._leq) if i != j)
        reduced = nx.transitive_reduction(graph)
        return [(self._elements[i], self._elements[j]) for i, j in sorted(reduced.edges)]

    def key(self) -> Tuple:
        return ('finite', self._elements, self._leq.tobytes())

    def order_key(self, a) -> int:
        return self.index(a)

    def distributive_table_check(self) -> bool:
        n = len(self._elements)
        m, j = self._meet, self._join
        lhs = m[np.arange(n)[:, None, None], j[None, :, :]]
        rhs = j[m[:, :, None], m[:, None, :]]
        return bool(np.array_equal(lhs, rhs))


class OmegaChain(CompleteLattice):
    """The chain 0 < 1 < 2 < ... < w, with top w."""

    kind = LatticeKind.OMEGA

    def __init__(self, name: str = "W"):
        super().__init__(name)

    @property
    def bot(self) -> int:
        return 0

    @property
    def top(self) -> float:
        return OMEGA

    def contains(self, a) -> bool:
        if a == OMEGA:
            return True
        return isinstance(a, int) and not isinstance(a, bool) and a >= 0

    def leq(self, a, b) -> bool:
        return a <= b

    def meet(self, a, b):
        return min(a, b)

    def join(self, a, b):
        return max(a, b)

    def sup(self, items: Iterable[Any]) -> Any:
        return max(items, default=0)

    def inf(self, items: Iterable[Any]) -> Any:
        return min(items, default=OMEGA)

    def sup_subset(self, subset: ChainSubset) -> Any:
        if subset.tail_from is not None:
            return OMEGA
        return self.sup(subset.members)

    def inf_subset(self, subset: ChainSubset) -> Any:
        bounds = list(subset.members)
        if subset.tail_from is not None:
            bounds.append(subset.tail_from)
        return self.inf(bounds)

    def truncated_elements(self, level: int) -> Tuple[Any, ...]:
        return tuple(range(level + 1)) + (OMEGA,)

    def format_element(self, a) -> str:
        return "w" if a == OMEGA else str(a)

    def parse_element(self, token: str):
        if token in ("w", "omega", "ω"):
            return OMEGA
        if token.isdigit():
            return int(token)
        raise LatticeError(f"{token!r} is not an element of the omega chain")

    def key(self) -> Tuple:
        return ('omega',)

    def order_key(self, a):
        return a


@dataclass
class LatticeSpec:
    """Parsed description of a lattice, before validation."""
    name: str
    kind: str = 'finite'  # 'finite' or 'omega'
    elements: List[str] = field(default_factory=list)
    covers: List[Tuple[str, str]] = field(default_factory=list)
    relation: Optional[List[Tuple[str, str]]] = None
    bot: Optional[str] = None
    top: Optional[str] = None


def build_lattice(spec: LatticeSpec) -> CompleteLattice:
    """
    Validate a lattice description.

    Args:
        spec: elements plus a cover relation (reflexive-transitive closure is
            taken) or a full order relation, or the omega chain

    Returns:
        The validated lattice
    """
    if spec.kind == 'omega':
        return OmegaChain(spec.name)

    elements = list(spec.elements)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    pairs = spec.relation if spec.relation is not None else spec.covers
    for a, b in pairs:
        for e in (a, b):
            if e not in index:
                raise NotAPoset(f"Lattice {spec.name}: unknown element {e!r} in order relation", witness=e)

    if spec.relation is not None:
        leq = np.zeros((n, n), dtype=bool)
        for a, b in spec.relation:
            leq[index[a], index[b]] = True
    else:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from((index[a], index[b]) for a, b in spec.covers)
        closure = nx.transitive_closure(graph, reflexive=True)
        leq = np.zeros((n, n), dtype=bool)
        for i, j in closure.edges:
            leq[i, j] = True
        np.fill_diagonal(leq, True)

    lattice = FiniteLattice(spec.name, elements, leq, bot=spec.bot, top=spec.top)
    logger.debug(f"Built lattice {spec.name} with {n} elements")
    return lattice


def chain_lattice(name: str, labels: Sequence[Hashable]) -> FiniteLattice:
    """The finite chain labels[0] < labels[1] < ..."""
    n = len(labels)
    leq = np.triu(np.ones((n, n), dtype=bool))
    return FiniteLattice(name, labels, leq)


def describe_lattice(lattice: CompleteLattice) -> LatticeSpec:
    """Inverse of build_lattice up to the choice of covers."""
    if lattice.kind == LatticeKind.OMEGA:
        return LatticeSpec(lattice.name, kind='omega')
    covers = [(str(a), str(b)) for a, b in lattice.covers()]
    return LatticeSpec(lattice.name, 'finite', [str(e) for e in lattice.elements()], covers,
                       bot=str(lattice.bot), top=str(lattice.top))


def is_distributive(lattice: CompleteLattice) -> bool:
    """True iff a AND (b OR c) = (a AND b) OR (a AND c) for all triples."""
    if lattice.kind == LatticeKind.OMEGA:
        return True
    if isinstance(lattice, FiniteLattice):
        return lattice.distributive_table_check()
    basis = getattr(lattice, 'basis', None)
    if basis is not None:
        # a power over the empty ground is the one-element lattice
        if len(lattice.ground) == 0:
            return True
        return is_distributive(basis)
    elements = lattice.elements()
    return all(
        lattice.meet(a, lattice.join(b, c)) == lattice.join(lattice.meet(a, b), lattice.meet(a, c))
        for a, b, c in itertools.product(elements, repeat=3)
    )


class Operation(Enum):
    BIN_MEET = "BinMeet"
    BIN_JOIN = "BinJoin"
    ARB_JOIN = "ArbJoin"
    ARB_MEET = "ArbMeet"
    BOT = "Bot"
    TOP = "Top"


@dataclass(frozen=True)
class OpSignature:
    """A set of operations a map is required to preserve."""
    flags: FrozenSet[Operation]

    def __post_init__(self):
        if not self.flags:
            raise LatticeError("An operation signature needs at least one operation")

    @classmethod
    def of(cls, *names: str) -> 'OpSignature':
        return cls(frozenset(Operation(n) for n in names))

    @property
    def is_reduct(self) -> bool:
        return Operation.BOT in self.flags

    def __str__(self) -> str:
        return "{" + ",".join(op.value for op in Operation if op in self.flags) + "}"


# FiniteJoin is BinJoin together with the empty join Bot
LAT_BOT = OpSignature(frozenset({Operation.BIN_MEET, Operation.BIN_JOIN, Operation.BOT}))
LATTICE_HOM = OpSignature(frozenset({Operation.BIN_MEET, Operation.BIN_JOIN, Operation.BOT, Operation.TOP}))
JOIN_PRESERVING = OpSignature(frozenset({Operation.ARB_JOIN, Operation.BOT}))
CLAT = OpSignature(frozenset(Operation))


@dataclass(frozen=True)
class CapRamp:
    """
    Basis-map rule on the omega chain.

    value(n) = exceptions[n] if present, else `cap` when slope is 0, else
    min(n + offset, cap). value(w) is `at_omega` when set, else the sup of
    the finite values. Instances are kept in canonical form (see
    BasisMap.from_ramp), so equal maps have equal rules.
    """
    exceptions: Tuple[Tuple[int, Any], ...] = ()
    slope: int = 0
    offset: int = 0
    cap: Any = 0
    at_omega: Any = None

    @property
    def tail_start(self) -> int:
        start = max((n for n, _ in self.exceptions), default=-1) + 1
        if self.slope == 1:
            start = max(start, -self.offset)
        return start


@dataclass(frozen=True)
class BasisMap:
    """A total map between lattices: a table on a finite source, or a CapRamp on the omega chain."""
    src: CompleteLattice
    dst: CompleteLattice
    table: Optional[Tuple[Tuple[Any, Any], ...]] = None
    ramp: Optional[CapRamp] = None
    name: str = field(default='', compare=False)

    @classmethod
    def from_table(cls, src: CompleteLattice, dst: CompleteLattice, mapping: Dict[Any, Any],
                   name: str = '') -> 'BasisMap':
        if not src.is_finite:
            raise LatticeError(f"Table maps need a finite source, got {src.name}")
        missing = [a for a in src.elements() if a not in mapping]
        if missing:
            raise LatticeError(f"Map {name or '?'} is undefined at {missing[0]!r}", witness=missing[0])
        extra = [a for a in mapping if not src.contains(a)]
        if extra:
            raise LatticeError(f"Map {name or '?'} is defined outside {src.name} at {extra[0]!r}", witness=extra[0])
        for a in src.elements():
            if not dst.contains(mapping[a]):
                raise LatticeError(f"Map {name or '?'} sends {a!r} outside {dst.name}", witness=a)
        return cls(src, dst, table=tuple((a, mapping[a]) for a in src.elements()), name=name)

    @classmethod
    def from_ramp(cls, src: CompleteLattice, dst: CompleteLattice, exceptions: Optional[Dict[int, Any]] = None,
                  slope: int = 0, offset: int = 0, cap: Any = None, at_omega: Any = None,
                  name: str = '') -> 'BasisMap':
        if src.kind != LatticeKind.OMEGA:
            raise LatticeError(f"Ramp maps need the omega chain as source, got {src.name}")
        rule = _normalize_ramp(dst, dict(exceptions or {}), slope, offset,
                               dst.top if cap is None else cap, at_omega, name)
        return cls(src, dst, ramp=rule, name=name)

    @classmethod
    def identity(cls, lattice: CompleteLattice) -> 'BasisMap':
        if lattice.kind == LatticeKind.OMEGA:
            return cls.from_ramp(lattice, lattice, slope=1, offset=0, cap=OMEGA, name='id')
        return cls.from_table(lattice, lattice, {a: a for a in lattice.elements()}, name='id')

    @cached_property
    def _lookup(self) -> Dict[Any, Any]:
        return dict(self.table) if self.table is not None else dict(self.ramp.exceptions)

    def __call__(self, a: Any) -> Any:
        if self.table is not None:
            try:
                return self._lookup[a]
            except KeyError:
                raise LatticeError(f"{a!r} is not in the domain {self.src.name}") from None
        if a == OMEGA:
            return self.ramp.at_omega if self.ramp.at_omega is not None else self.finite_sup()
        if not self.src.contains(a):
            raise LatticeError(f"{a!r} is not in the domain {self.src.name}")
        return _ramp_value(self.dst, self.ramp, self._lookup, a)

    def finite_sup(self) -> Any:
        """Sup of the values at finite levels (ramp maps only)."""
        rule = self.ramp
        return self.dst.sup([rule.cap] + [v for _, v in rule.exceptions])

    def sample_level(self) -> int:
        """A truncation level past which the map follows its tail formula."""
        if self.ramp is None:
            return 0
        return self.ramp.tail_start + 2

    def compose(self, second: 'BasisMap') -> 'BasisMap':
        """second AFTER self."""
        return compose_basis_maps(self, second)

    def describe(self) -> str:
        if self.table is not None:
            return " ".join(f"{self.src.format_element(a)}->{self.dst.format_element(b)}" for a, b in self.table)
        r = self.ramp
        parts = []
        if r.exceptions:
            parts.append("except={" + ",".join(f"{n}:{self.dst.format_element(v)}" for n, v in r.exceptions) + "}")
        parts.append(f"slope={r.slope} offset={r.offset} cap={self.dst.format_element(r.cap)}")
        if r.at_omega is not None:
            parts.append(f"top={self.dst.format_element(r.at_omega)}")
        return " ".join(parts)


def _ramp_value(dst: CompleteLattice, rule: CapRamp, exceptions: Dict[int, Any], n: int) -> Any:
    if n in exceptions:
        return exceptions[n]
    if rule.slope == 0:
        return rule.cap
    value = n + rule.offset
    if value < 0:
        raise NotMonotone(f"Ramp value at {n} is negative ({value})", witness=n)
    return dst.meet(value, rule.cap)


def _normalize_ramp(dst: CompleteLattice, exceptions: Dict[int, Any], slope: int, offset: int,
                    cap: Any, at_omega: Any, name: str) -> CapRamp:
    if slope not in (0, 1):
        raise LatticeError(f"Ramp {name or '?'}: slope must be 0 or 1, got {slope}")
    if slope == 1 and dst.kind != LatticeKind.OMEGA:
        raise LatticeError(f"Ramp {name or '?'}: slope 1 needs the omega chain as target")
    if not dst.contains(cap):
        raise LatticeError(f"Ramp {name or '?'}: cap {cap!r} is not in {dst.name}")
    for n, v in exceptions.items():
        if not (isinstance(n, int) and n >= 0):
            raise LatticeError(f"Ramp {name or '?'}: exception key {n!r} is not a finite level")
        if not dst.contains(v):
            raise LatticeError(f"Ramp {name or '?'}: exception value {v!r} is not in {dst.name}")
    if at_omega is not None and not dst.contains(at_omega):
        raise LatticeError(f"Ramp {name or '?'}: value at w {at_omega!r} is not in {dst.name}")

    if slope == 0:
        offset = 0
    elif cap != OMEGA:
        # a capped ramp is eventually constant
        draft = CapRamp(tuple(sorted(exceptions.items())), 1, offset, cap)
        stop = max(draft.tail_start, cap - offset, 0)
        exceptions = {n: _ramp_value(dst, draft, exceptions, n) for n in range(stop)}
        slope, offset = 0, 0

    def tail(n: int) -> Any:
        return cap if slope == 0 else n + offset

    for n in range(max(0, -offset) if slope == 1 else 0):
        if n not in exceptions:
            raise NotMonotone(f"Ramp {name or '?'}: value at {n} would be negative", witness=n)
    kept = {n: v for n, v in exceptions.items() if slope == 1 and n + offset < 0 or v != tail(n)}
    rule = CapRamp(tuple(sorted(kept.items())), slope, offset, cap)

    for n in range(rule.tail_start + 1):
        here = _ramp_value(dst, rule, kept, n)
        after = _ramp_value(dst, rule, kept, n + 1)
        if not dst.leq(here, after):
            raise NotMonotone(f"Ramp {name or '?'} is not monotone at {n}", witness=n)

    finite_sup = dst.sup([cap] + list(kept.values()))
    if at_omega is not None:
        if not dst.leq(finite_sup, at_omega):
            raise NotMonotone(f"Ramp {name or '?'}: value at w is below the finite values", witness=OMEGA)
        if at_omega == finite_sup:
            at_omega = None
    return CapRamp(rule.exceptions, slope, offset, cap, at_omega)


def compose_basis_maps(first: BasisMap, second: BasisMap) -> BasisMap:
    """
    second AFTER first, normalized back into the Table/CapRamp catalog.

    Raises:
        BasisMismatch: first.dst is not second.src
        UnsupportedComposition: the composite leaves the catalog
    """
    if first.dst != second.src:
        raise BasisMismatch(f"Cannot compose {first.name or '?'}: ->{first.dst.name} with "
                            f"{second.name or '?'}: {second.src.name}->")
    name = f"{second.name}.{first.name}" if first.name and second.name else ''
    if first.table is not None:
        return BasisMap.from_table(first.src, second.dst, {a: second(b) for a, b in first.table}, name=name)

    rule = first.ramp
    at_omega = second(first(OMEGA))
    if rule.slope == 0:
        start = rule.tail_start
        exceptions = {n: second(first(n)) for n in range(start)}
        return BasisMap.from_ramp(first.src, second.dst, exceptions, 0, 0, second(rule.cap), at_omega, name=name)

    if second.ramp is None:
        raise UnsupportedComposition(f"{second.name or '?'} has an infinite source but no ramp rule")
    inner = second.ramp
    if inner.slope == 0:
        start = max(rule.tail_start, inner.tail_start - rule.offset, 0)
        exceptions = {n: second(first(n)) for n in range(start)}
        return BasisMap.from_ramp(first.src, second.dst, exceptions, 0, 0, inner.cap, at_omega, name=name)
    offset = rule.offset + inner.offset
    start = max(rule.tail_start, inner.tail_start - rule.offset, -offset, 0)
    exceptions = {n: second(first(n)) for n in range(start)}
    return BasisMap.from_ramp(first.src, second.dst, exceptions, 1, offset, OMEGA, at_omega, name=name)


def is_monotone(phi: BasisMap) -> bool:
    """Ramp rules are monotone by construction; tables are checked."""
    if phi.ramp is not None:
        return True
    src = phi.src
    return all(phi.dst.leq(phi(a), phi(b))
               for a, b in itertools.product(src.elements(), repeat=2) if src.leq(a, b))


def homomorphism_failures(phi: BasisMap, sig: OpSignature) -> List[Tuple[Operation, Any]]:
    """Flagged operations phi fails to preserve, each with a witness."""
    src, dst = phi.src, phi.dst
    flags = sig.flags
    failures = []

    if flags & {Operation.BOT, Operation.ARB_JOIN} and phi(src.bot) != dst.bot:
        failures.append((Operation.BOT if Operation.BOT in flags else Operation.ARB_JOIN, src.bot))
    if flags & {Operation.TOP, Operation.ARB_MEET} and phi(src.top) != dst.top:
        failures.append((Operation.TOP if Operation.TOP in flags else Operation.ARB_MEET, src.top))

    # on the omega chain the tail is monotone, so pairs beyond the sample level add nothing
    points = src.truncated_elements(phi.sample_level())
    for a, b in itertools.combinations_with_replacement(points, 2):
        if flags & {Operation.BIN_JOIN, Operation.ARB_JOIN} and phi(src.join(a, b)) != dst.join(phi(a), phi(b)):
            failures.append((Operation.BIN_JOIN if Operation.BIN_JOIN in flags else Operation.ARB_JOIN, (a, b)))
            break
    for a, b in itertools.combinations_with_replacement(points, 2):
        if flags & {Operation.BIN_MEET, Operation.ARB_MEET} and phi(src.meet(a, b)) != dst.meet(phi(a), phi(b)):
            failures.append((Operation.BIN_MEET if Operation.BIN_MEET in flags else Operation.ARB_MEET, (a, b)))
            break

    if Operation.ARB_JOIN in flags and phi.ramp is not None and phi(OMEGA) != phi.finite_sup():
        # sup of all finite levels is w
        failures.append((Operation.ARB_JOIN, ChainSubset.all_finite()))
    return failures


def check_homomorphism(phi: BasisMap, sig: OpSignature) -> bool:
    """
    True iff phi preserves every operation flagged in sig.

    Finite sources are checked exhaustively. On the omega chain the check runs
    on every exception point and two levels into the tail (the tail formula is
    monotone, so its image is a chain), plus the sup-at-w condition.
    """
    failures = homomorphism_failures(phi, sig)
    if failures:
        logger.debug(f"{phi.name or 'map'} fails {failures[0][0].value} at {failures[0][1]!r}")
    return not failures


def _chain_adjoint_value(phi: BasisMap, b: Any) -> Any:
    """max{n | phi(n) <= b} for a join-preserving phi on the omega chain."""
    dst = phi.dst
    if dst.leq(phi(OMEGA), b):
        return OMEGA
    rule = phi.ramp
    limit = rule.tail_start
    if rule.slope == 1 and b != OMEGA:
        limit = max(limit, b - rule.offset + 1)
    best = 0
    for n in range(limit + 1):
        if dst.leq(phi(n), b):
            best = n
        else:
            break
    return best


def right_adjoint(phi: BasisMap) -> BasisMap:
    """
    The right adjoint b -> sup{a | phi(a) <= b}.

    Raises:
        NotJoinPreserving: phi does not preserve arbitrary joins and bottom
    """
    if not check_homomorphism(phi, JOIN_PRESERVING):
        raise NotJoinPreserving(f"{phi.name or 'map'} does not preserve joins; it has no right adjoint")
    src, dst = phi.src, phi.dst
    name = f"{phi.name}^" if phi.name else ''

    if src.is_finite:
        def value(b):
            return src.sup(a for a in src.elements() if dst.leq(phi(a), b))

        if dst.is_finite:
            return BasisMap.from_table(dst, src, {b: value(b) for b in dst.elements()}, name=name)
        finite_values = [phi(a) for a in src.elements() if phi(a) != OMEGA]
        stop = max(finite_values, default=0)
        exceptions = {b: value(b) for b in range(stop)}
        return BasisMap.from_ramp(dst, src, exceptions, 0, 0, value(stop), src.top, name=name)

    if dst.is_finite:
        return BasisMap.from_table(dst, src, {b: _chain_adjoint_value(phi, b) for b in dst.elements()}, name=name)

    rule = phi.ramp
    finite_exception_values = [v for _, v in rule.exceptions if v != OMEGA]
    if rule.slope == 0 and rule.cap != OMEGA:
        stop = rule.cap
        exceptions = {b: _chain_adjoint_value(phi, b) for b in range(stop)}
        return BasisMap.from_ramp(dst, src, exceptions, 0, 0, OMEGA, None, name=name)
    if rule.slope == 0:
        stop = max(finite_exception_values, default=0)
        exceptions = {b: _chain_adjoint_value(phi, b) for b in range(stop)}
        return BasisMap.from_ramp(dst, src, exceptions, 0, 0, _chain_adjoint_value(phi, stop), OMEGA, name=name)
    stop = max(max(finite_exception_values, default=0), rule.tail_start + rule.offset)
    exceptions = {b: _chain_adjoint_value(phi, b) for b in range(stop)}
    return BasisMap.from_ramp(dst, src, exceptions, 1, -rule.offset, OMEGA, None, name=name)


def galois_verdict(phi: BasisMap, adjoint: BasisMap, level: int) -> Verdict:
    """phi(a) <= b iff a <= adjoint(b), over the truncated carriers."""
    checked = 0
    for a in phi.src.truncated_elements(level):
        for b in phi.dst.truncated_elements(level):
            checked += 1
            if phi.dst.leq(phi(a), b) != phi.src.leq(a, adjoint(b)):
                return Verdict(False, (a, b), "Galois law fails", checked)
    return Verdict(True, checked=checked)
