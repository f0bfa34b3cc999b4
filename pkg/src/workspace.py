"""
Workspace module.
Parses the text format into a registry of named lattices, ground sets, maps,
functions, spaces, systems, sources and morphisms, and serializes it back.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput

from errors import BornolabError, DuplicateName, InputError, ParseError, UnresolvedReference
from ideal_engine import ChainIdeal, Extensional, Ideal, RampDownset, full_ideal, principal_ideal
from lattice_core import BasisMap, CompleteLattice, LatticeKind, LatticeSpec, build_lattice, describe_lattice
from powerset_theory import FunctionLattice, GroundMap, GroundSet, LFunction
from born_spaces import BornSpace, SpaceMorphism
from born_systems import BornSystem, RampFamily, SystemMorphism
from initial_lifts import Leg, StructuredSource

logger = logging.getLogger(__name__)

GRAMMAR_PATH = Path(__file__).with_name("bornolab.lark")


@dataclass
class Decl:
    """One parsed statement before name resolution."""
    kind: str
    name: str
    line: int
    column: int
    fields: Dict[str, Any] = field(default_factory=dict)


def _text(token: Token) -> str:
    return str(token)


@v_args(inline=True)
class ToDecls(Transformer):
    """Turns the parse tree into Decl records."""

    def start(self, *statements):
        return list(statements)

    def _decl(self, kind: str, name: Token, **fields) -> Decl:
        return Decl(kind, _text(name), name.line, name.column, fields)

    # lattices
    def finite_lattice(self, name, *clauses):
        spec = LatticeSpec(_text(name), 'finite')
        for tag, args in clauses:
            if tag == 'elements':
                spec.elements.extend(args)
            elif tag == 'cover':
                spec.covers.append(tuple(args))
            elif tag == 'leq':
                spec.relation = (spec.relation or []) + [tuple(args)]
            elif tag == 'bot':
                spec.bot = args[0]
            else:
                spec.top = args[0]
        return self._decl('lattice', name, spec=spec)

    def omega_lattice(self, name):
        return self._decl('lattice', name, spec=LatticeSpec(_text(name), 'omega'))

    def elements(self, *ids):
        return 'elements', [_text(i) for i in ids]

    def cover(self, a, b):
        return 'cover', [_text(a), _text(b)]

    def leq(self, a, b):
        return 'leq', [_text(a), _text(b)]

    def bot(self, a):
        return 'bot', [_text(a)]

    def top(self, a):
        return 'top', [_text(a)]

    # ground sets and maps
    def set_decl(self, name, *points):
        return self._decl('set', name, elements=[_text(p) for p in points])

    def pair(self, a, b):
        return _text(a), _text(b)

    def map_decl(self, name, src, dst, *pairs):
        return self._decl('map', name, src=_text(src), dst=_text(dst), pairs=list(pairs))

    # basis maps
    def table_map(self, name, src, dst, *pairs):
        return self._decl('basismap', name, src=_text(src), dst=_text(dst), rule='table', pairs=list(pairs))

    def ramp_map(self, name, src, dst, *options):
        return self._decl('basismap', name, src=_text(src), dst=_text(dst), rule='ramp', options=dict(options))

    def slope(self, value):
        return 'slope', int(value)

    def offset(self, value):
        return 'offset', int(value)

    def cap(self, value):
        return 'cap', _text(value)

    def at_top(self, value):
        return 'top', _text(value)

    def exceptions(self, *items):
        return 'except', [item for item in items if item is not None]

    def exception(self, level, value):
        return int(level), _text(value)

    # functions
    def fn_decl(self, name, ground, basis, literal):
        return self._decl('fn', name, ground=_text(ground), basis=_text(basis), values=literal)

    def fn_literal(self, *assigns):
        return ('literal', list(assigns))

    def assign(self, point, value):
        return _text(point), _text(value)

    def fn_name(self, name):
        return ('name', _text(name))

    # spaces
    def space_decl(self, name, ground, basis, ideal):
        return self._decl('space', name, ground=_text(ground), basis=_text(basis), ideal=ideal)

    def ideal_extensional(self, *refs):
        return {'kind': 'extensional', 'members': list(refs)}

    def ideal_ramp(self, *items):
        *region, ceiling = items
        return {'kind': 'ramp', 'region': [_text(x) for x in region if x is not None], 'ceiling': ceiling}

    def ideal_principal(self, ref):
        return {'kind': 'principal', 'generator': ref}

    def ideal_full(self):
        return {'kind': 'full'}

    # systems
    def system_decl(self, name, ground, basis, bobj, kappa):
        return self._decl('system', name, ground=_text(ground), basis=_text(basis), bobj=_text(bobj), kappa=kappa)

    def kappa_table(self, *entries):
        return {'kind': 'table', 'entries': list(entries)}

    def kappa_entry(self, b, ref):
        return _text(b), ref

    def kappa_ramp(self, *coords):
        return {'kind': 'ramp', 'coords': list(coords)}

    def kappa_coord(self, point, *options):
        return _text(point), dict(options)

    # sources and morphisms
    def source_decl(self, name, apex, basis, *legs):
        return self._decl('source', name, apex=_text(apex), basis=_text(basis), legs=list(legs))

    def leg(self, ground_map, basis_map, space):
        return _text(ground_map), _text(basis_map), _text(space)

    def morphism_decl(self, name, src, dst, ground, basis, bobj=None):
        return self._decl('morphism', name, src=_text(src), dst=_text(dst), ground=_text(ground),
                          basis=_text(basis), bobj=_text(bobj) if bobj is not None else None)


_PARSER: Optional[Lark] = None


def _parser() -> Lark:
    global _PARSER
    if _PARSER is None:
        _PARSER = Lark(GRAMMAR_PATH.read_text(encoding="utf-8"), start="start", parser="lalr")
    return _PARSER


@dataclass
class Workspace:
    """Named objects from one or more files, resolved in declaration order."""
    lattices: Dict[str, CompleteLattice] = field(default_factory=dict)
    lattice_errors: Dict[str, BornolabError] = field(default_factory=dict)
    sets: Dict[str, GroundSet] = field(default_factory=dict)
    maps: Dict[str, GroundMap] = field(default_factory=dict)
    basismaps: Dict[str, BasisMap] = field(default_factory=dict)
    fns: Dict[str, LFunction] = field(default_factory=dict)
    spaces: Dict[str, BornSpace] = field(default_factory=dict)
    systems: Dict[str, BornSystem] = field(default_factory=dict)
    sources: Dict[str, StructuredSource] = field(default_factory=dict)
    morphisms: Dict[str, Any] = field(default_factory=dict)
    declarations: List[Decl] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.declarations

    def registry(self, kind: str) -> Dict[str, Any]:
        return {
            'lattice': self.lattices, 'set': self.sets, 'map': self.maps, 'basismap': self.basismaps,
            'fn': self.fns, 'space': self.spaces, 'system': self.systems, 'source': self.sources,
            'morphism': self.morphisms,
        }[kind]


class Resolver:
    """Resolves Decl records against a workspace, one at a time."""

    def __init__(self, workspace: Workspace, source: str):
        self.ws = workspace
        self.source = source
        self.decl: Optional[Decl] = None

    def fail(self, error_type, message: str):
        line = self.decl.line if self.decl else 0
        return error_type(f"{self.source}:{line}: {message}")

    def lookup(self, kind: str, name: str) -> Any:
        if kind == 'lattice' and name in self.ws.lattice_errors:
            raise self.fail(UnresolvedReference, f"lattice {name} is invalid: {self.ws.lattice_errors[name]}")
        registry = self.ws.registry(kind)
        if name not in registry:
            raise self.fail(UnresolvedReference, f"unknown {kind} {name!r}")
        return registry[name]

    def register(self, decl: Decl, value: Any):
        registry = self.ws.registry(decl.kind)
        taken = decl.name in registry or (decl.kind == 'lattice' and decl.name in self.ws.lattice_errors)
        if taken:
            raise self.fail(DuplicateName, f"{decl.kind} {decl.name!r} is declared twice")
        registry[decl.name] = value

    def resolve(self, decl: Decl):
        self.decl = decl
        handler = getattr(self, f"_resolve_{decl.kind}")
        try:
            handler(decl)
        except InputError:
            raise
        except BornolabError as e:
            raise self.fail(InputError, f"{decl.kind} {decl.name}: {e}") from e
        self.ws.declarations.append(decl)

    def _resolve_lattice(self, decl: Decl):
        try:
            lattice = build_lattice(decl.fields['spec'])
        except BornolabError as e:
            if decl.name in self.ws.lattices or decl.name in self.ws.lattice_errors:
                raise self.fail(DuplicateName, f"lattice {decl.name!r} is declared twice")
            logger.debug(f"Lattice {decl.name} is invalid: {e}")
            self.ws.lattice_errors[decl.name] = e
            return
        self.register(decl, lattice)

    def _resolve_set(self, decl: Decl):
        self.register(decl, GroundSet(decl.name, tuple(decl.fields['elements'])))

    def _pairs(self, pairs: List[Tuple[str, str]]) -> Dict[str, str]:
        mapping = {}
        for a, b in pairs:
            if a in mapping:
                raise self.fail(InputError, f"{a} is mapped twice")
            mapping[a] = b
        return mapping

    def _resolve_map(self, decl: Decl):
        src, dst = self.lookup('set', decl.fields['src']), self.lookup('set', decl.fields['dst'])
        self.register(decl, GroundMap.from_dict(src, dst, self._pairs(decl.fields['pairs']), decl.name))

    def _ramp(self, src: CompleteLattice, dst: CompleteLattice, options: Dict[str, Any], name: str) -> BasisMap:
        exceptions = {n: dst.parse_element(v) for n, v in options.get('except', [])}
        cap = dst.parse_element(options['cap']) if 'cap' in options else None
        at_omega = dst.parse_element(options['top']) if 'top' in options else None
        return BasisMap.from_ramp(src, dst, exceptions, options.get('slope', 0), options.get('offset', 0),
                                  cap, at_omega, name)

    def _resolve_basismap(self, decl: Decl):
        src, dst = self.lookup('lattice', decl.fields['src']), self.lookup('lattice', decl.fields['dst'])
        if decl.fields['rule'] == 'table':
            pairs = self._pairs(decl.fields['pairs'])
            mapping = {src.parse_element(a): dst.parse_element(b) for a, b in pairs.items()}
            phi = BasisMap.from_table(src, dst, mapping, decl.name)
        else:
            phi = self._ramp(src, dst, decl.fields['options'], decl.name)
        self.register(decl, phi)

    def function(self, ref: Tuple[str, Any], carrier: FunctionLattice) -> LFunction:
        tag, payload = ref
        if tag == 'name':
            fn = self.lookup('fn', payload)
            if not carrier.contains(fn):
                raise self.fail(InputError, f"function {payload} is not an element of {carrier.name}")
            return fn
        mapping = {}
        for x, v in payload:
            if x in mapping:
                raise self.fail(InputError, f"function literal sets {x} twice")
            mapping[x] = carrier.basis.parse_element(v)
        return carrier.from_mapping(mapping)

    def _resolve_fn(self, decl: Decl):
        basis, ground = self.lookup('lattice', decl.fields['basis']), self.lookup('set', decl.fields['ground'])
        carrier = FunctionLattice(basis, ground)
        self.register(decl, self.function(decl.fields['values'], carrier))

    def ideal(self, literal: Dict[str, Any], carrier: FunctionLattice) -> Ideal:
        kind = literal['kind']
        if kind == 'extensional':
            return Extensional(carrier, frozenset(self.function(ref, carrier) for ref in literal['members']))
        if kind == 'ramp':
            return RampDownset(carrier, frozenset(literal['region']), self.function(literal['ceiling'], carrier))
        if kind == 'principal':
            return principal_ideal(carrier, self.function(literal['generator'], carrier))
        return full_ideal(carrier)

    def _resolve_space(self, decl: Decl):
        ground, basis = self.lookup('set', decl.fields['ground']), self.lookup('lattice', decl.fields['basis'])
        tau = self.ideal(decl.fields['ideal'], FunctionLattice(basis, ground))
        self.register(decl, BornSpace(ground, basis, tau, decl.name))

    def _resolve_system(self, decl: Decl):
        ground, basis = self.lookup('set', decl.fields['ground']), self.lookup('lattice', decl.fields['basis'])
        bobj = self.lookup('lattice', decl.fields['bobj'])
        carrier = FunctionLattice(basis, ground)
        literal = decl.fields['kappa']
        if literal['kind'] == 'table':
            mapping = {}
            for b, ref in literal['entries']:
                element = bobj.parse_element(b)
                if element in mapping:
                    raise self.fail(InputError, f"kappa sets {b} twice")
                mapping[element] = self.function(ref, carrier)
            kappa = BasisMap.from_table(bobj, carrier, mapping, 'kappa')
        else:
            coords = dict(literal['coords'])
            if len(coords) != len(literal['coords']):
                raise self.fail(InputError, "kappa ramp sets a point twice")
            stray = [x for x in coords if x not in ground]
            if stray:
                raise self.fail(InputError, f"kappa ramp mentions {stray[0]}, not a point of {ground.name}")
            missing = [x for x in ground.elements if x not in coords]
            if missing:
                raise self.fail(InputError, f"kappa ramp has no entry for {missing[0]}")
            ramps = tuple(self._ramp(bobj, basis, coords[x], x) for x in ground.elements)
            kappa = RampFamily(bobj, carrier, ramps, 'kappa')
        self.register(decl, BornSystem(ground, basis, bobj, kappa, decl.name))

    def _basis_map_or_identity(self, name: str, lattice: CompleteLattice) -> BasisMap:
        if name == 'id' and 'id' not in self.ws.basismaps:
            return BasisMap.identity(lattice)
        return self.lookup('basismap', name)

    def _ground_map_or_identity(self, name: str, ground: GroundSet) -> GroundMap:
        if name == 'id' and 'id' not in self.ws.maps:
            return GroundMap.identity(ground)
        return self.lookup('map', name)

    def _resolve_source(self, decl: Decl):
        apex, basis = self.lookup('set', decl.fields['apex']), self.lookup('lattice', decl.fields['basis'])
        legs = []
        for f_name, phi_name, space_name in decl.fields['legs']:
            legs.append(Leg(self._ground_map_or_identity(f_name, apex),
                            self._basis_map_or_identity(phi_name, basis),
                            self.lookup('space', space_name)))
        self.register(decl, StructuredSource(apex, basis, tuple(legs), decl.name))

    def _resolve_morphism(self, decl: Decl):
        fields = decl.fields
        if fields['src'] in self.ws.spaces:
            src, dst = self.lookup('space', fields['src']), self.lookup('space', fields['dst'])
            f = self._ground_map_or_identity(fields['ground'], src.ground)
            psi = self._basis_map_or_identity(fields['basis'], src.basis)
            self.register(decl, SpaceMorphism(src, dst, f, psi, decl.name))
            return
        src, dst = self.lookup('system', fields['src']), self.lookup('system', fields['dst'])
        f = self._ground_map_or_identity(fields['ground'], src.ground)
        psi = self._basis_map_or_identity(fields['basis'], src.basis)
        if fields['bobj'] is None:
            raise self.fail(InputError, f"system morphism {decl.name} needs a bobj map")
        if fields['bobj'] == 'id' and 'id' not in self.ws.basismaps:
            phi = BasisMap.identity(src.bobj)
        else:
            phi = self.lookup('basismap', fields['bobj'])
        self.register(decl, SystemMorphism(src, dst, f, phi, psi, decl.name))


def parse_text(text: str, source: str = '<string>', workspace: Optional[Workspace] = None) -> Workspace:
    """
    Parse one document into a workspace (a new one unless given).

    Raises:
        ParseError: syntax error, with line and column
        DuplicateName, UnresolvedReference, InputError: resolution failures
    """
    workspace = workspace if workspace is not None else Workspace()
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as e:
        raise ParseError(f"unexpected input near {str(e.get_context(text)).strip()!r}",
                         e.line, e.column, source) from e
    resolver = Resolver(workspace, source)
    for decl in ToDecls().transform(tree):
        resolver.resolve(decl)
    return workspace


def parse(files: Iterable[str]) -> Workspace:
    """Parse files in order into one workspace."""
    workspace = Workspace()
    for path in files:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"Cannot read {path}: {e}") from e
        logger.info(f"Parsing {path}")
        parse_text(text, str(path), workspace)
    return workspace


def format_function(fn: LFunction) -> str:
    return FunctionLattice(fn.basis, fn.domain).format_element(fn)


def format_ideal(ideal: Ideal) -> str:
    carrier = ideal.carrier
    if isinstance(ideal, Extensional):
        return "ideal extensional " + " ".join(carrier.format_element(a) for a in ideal.ordered())
    if isinstance(ideal, RampDownset):
        return (f"ideal ramp region={{{','.join(ideal.ordered_region())}}} "
                f"ceiling={carrier.format_element(ideal.ceiling)}")
    if isinstance(ideal, ChainIdeal):
        suffix = " finite" if ideal.finite_only else ""
        return f"down {carrier.format_element(ideal.ceiling)}{suffix}"
    return repr(ideal)


def _serialize_lattice(name: str, lattice: CompleteLattice) -> List[str]:
    if lattice.kind == LatticeKind.OMEGA:
        return [f"lattice {name} omega"]
    spec = describe_lattice(lattice)
    lines = [f"lattice {name} finite", "  elements " + " ".join(spec.elements)]
    lines += [f"  cover {a} {b}" for a, b in spec.covers]
    lines += [f"  bot {spec.bot}", f"  top {spec.top}"]
    return lines


def _serialize_ramp_options(phi: BasisMap) -> str:
    return phi.describe()


def serialize(workspace: Workspace) -> str:
    """Canonical text for a workspace; parsing it back gives the same objects."""
    lines: List[str] = []
    for decl in workspace.declarations:
        name, fields = decl.name, decl.fields
        value = workspace.registry(decl.kind).get(name) if decl.kind != 'lattice' else workspace.lattices.get(name)
        if decl.kind == 'lattice':
            if value is None:
                continue
            lines += _serialize_lattice(name, value)
        elif decl.kind == 'set':
            lines.append(f"set {name} {{ {' '.join(value.elements)} }}".replace("{  }", "{ }"))
        elif decl.kind == 'map':
            pairs = " ".join(f"{x} -> {y}" for x, y in zip(value.src.elements, value.images))
            lines.append(f"map {name} : {fields['src']} -> {fields['dst']} {{ {pairs} }}")
        elif decl.kind == 'basismap':
            head = f"basismap {name} : {fields['src']} -> {fields['dst']}"
            if value.table is not None:
                pairs = " ".join(f"{value.src.format_element(a)} -> {value.dst.format_element(b)}"
                                 for a, b in value.table)
                lines.append(f"{head} table {{ {pairs} }}")
            else:
                lines.append(f"{head} ramp {_serialize_ramp_options(value)}")
        elif decl.kind == 'fn':
            lines.append(f"fn {name} : {fields['ground']} -> {fields['basis']} {format_function(value)}")
        elif decl.kind == 'space':
            lines += [f"space {name}", f"  ground {fields['ground']}", f"  basis {fields['basis']}",
                      f"  {format_ideal(value.bornology)}"]
        elif decl.kind == 'system':
            lines += [f"system {name}", f"  ground {fields['ground']}", f"  basis {fields['basis']}",
                      f"  bobj {fields['bobj']}"]
            kappa = value.kappa
            if isinstance(kappa, RampFamily):
                lines.append("  kappa ramp {")
                lines += [f"    {x}: {_serialize_ramp_options(r)}"
                          for x, r in zip(value.ground.elements, kappa.coordinates)]
            else:
                lines.append("  kappa {")
                lines += [f"    {value.bobj.format_element(b)} -> {format_function(fn)}" for b, fn in kappa.table]
            lines.append("  }")
        elif decl.kind == 'source':
            lines.append(f"source {name} apex {fields['apex']} basis {fields['basis']}")
            lines += [f"  leg {f} {phi} {space}" for f, phi, space in fields['legs']]
        elif decl.kind == 'morphism':
            tail = f" bobj {fields['bobj']}" if fields['bobj'] else ""
            lines.append(f"morphism {name} : {fields['src']} -> {fields['dst']} "
                         f"ground {fields['ground']} basis {fields['basis']}{tail}")
        lines.append("")
    return "\n".join(lines)
