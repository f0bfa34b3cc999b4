"""
Main entry point for bornolab.
Parses workspace files, dispatches a command and prints its report.
"""

import argparse
import asyncio
import logging
import sys
from typing import Awaitable, Callable, Dict, List

from errors import BornolabError, InputError, UnknownCommand
from ideal_engine import Extensional, RampDownset, is_icd_at_top
from lattice_core import describe_lattice, is_distributive
from born_spaces import SpaceMorphism, is_bounded, validate_space
from born_systems import (
    IdealCarrier, RampFamily, SystemMorphism, embed_space, loc, spatialize, validate_system,
)
from initial_lifts import check_requirements, coverage_witnesses, initial_structure, verify_initiality
from laws import (
    catalog_laws, law_cofinal_chain, law_factorizations, law_fullness, law_reflection, law_spat_embed, run_laws,
    workspace_laws,
)
from report import EXIT_INPUT_ERROR, Report, format_witness
from settings import Settings, load_settings
from workspace import Workspace, format_ideal, parse

logger = logging.getLogger(__name__)


async def check_lattice(ws: Workspace, settings: Settings, report: Report):
    for name, error in ws.lattice_errors.items():
        report.add(f"lattice[{name}]", False, str(error), error.witness)
    for name, lattice in ws.lattices.items():
        if lattice.is_finite:
            spec = describe_lattice(lattice)
            law = "distributive" if is_distributive(lattice) else "not distributive"
            shape = f"{len(spec.elements)} elements, {len(spec.covers)} covers, {law}"
        else:
            shape = "omega chain, distributive"
        report.add(f"lattice[{name}]", True, shape)


async def check_space(ws: Workspace, settings: Settings, report: Report):
    level = settings.enumeration.truncation_level
    for name, space in ws.spaces.items():
        try:
            validate_space(space.ground, space.basis, space.bornology, level, name)
            report.add(f"space[{name}]", True)
        except BornolabError as e:
            report.add(f"space[{name}]", False, f"{e.invariant or 'invalid'}: {e}", e.witness)


async def check_system(ws: Workspace, settings: Settings, report: Report):
    level = settings.enumeration.probe_level
    for name, system in ws.systems.items():
        try:
            validate_system(system.ground, system.kappa, system.bobj, system.basis, level, name)
            report.add(f"system[{name}]", True)
        except BornolabError as e:
            report.add(f"system[{name}]", False, f"{e.invariant or 'invalid'}: {e}", e.witness)


async def check_bounded(ws: Workspace, settings: Settings, report: Report):
    level = settings.enumeration.truncation_level
    for name, m in ws.morphisms.items():
        if isinstance(m, SpaceMorphism):
            report.add_verdict(f"bounded[{name}]", is_bounded(m.ground_map, m.basis_map, m.src, m.dst, level))


async def initial_lift(ws: Workspace, settings: Settings, report: Report):
    enum = settings.enumeration
    for name, source in ws.sources.items():
        tau = initial_structure(source, enum.probe_level)
        report.emit(f"space {name}_lift ground {source.apex.name} basis {source.basis.name} {format_ideal(tau)}")
        try:
            validate_space(source.apex, source.basis, tau, enum.probe_level, f"{name}_lift")
            report.add(f"lift-valid[{name}]", True)
        except BornolabError as e:
            report.add(f"lift-valid[{name}]", False, str(e), e.witness)
        coverage = coverage_witnesses(source, enum.probe_level)
        report.emit(f"  {len(coverage.alphas)} choice maps, coverage certificate: {coverage.certificate or 'none'}")
        report.add(f"coverage[{name}]", coverage.covered, coverage.certificate, coverage.limit)
        report.add_verdict(f"initiality[{name}]", verify_initiality(source, tau, enum.probe_bound, enum.probe_level))


async def check_reqs(ws: Workspace, settings: Settings, report: Report):
    enum = settings.enumeration
    for name, lattice in ws.lattices.items():
        results = check_requirements(lattice, enum.probe_bound, enum.probe_level, enum.icd_function_max_family)
        for req, verdict in results.items():
            report.add_verdict(f"{req}[{name}]", verdict)


async def icd(ws: Workspace, settings: Settings, report: Report):
    enum = settings.enumeration
    for name, lattice in ws.lattices.items():
        verdict = is_icd_at_top(lattice, enum.probe_level, enum.icd_max_family)
        report.emit(f"{name}: {'holds' if verdict else 'fails'}")
        report.add_verdict(f"icd[{name}]", verdict)


async def spatialize_systems(ws: Workspace, settings: Settings, report: Report):
    for name, system in ws.systems.items():
        space = spatialize(system)
        report.emit(f"space Spat_{name} ground {system.ground.name} basis {system.basis.name} "
                     f"{format_ideal(space.bornology)}")


async def embed(ws: Workspace, settings: Settings, report: Report):
    max_members = settings.enumeration.max_extensional_members
    for name, space in ws.spaces.items():
        try:
            system = embed_space(space, max_members)
        except BornolabError as e:
            report.add(f"embed[{name}]", False, str(e), e.witness)
            continue
        bobj = system.bobj
        if isinstance(bobj, IdealCarrier):
            shape = f"the bornology itself: {format_ideal(bobj.ideal)}"
        else:
            shape = f"{len(bobj.elements())} members of the bornology"
        report.emit(f"system E_{name} ground {space.ground.name} basis {space.basis.name}")
        report.emit(f"  bobj {shape}")
        report.emit("  kappa inclusion")


async def check_reflection(ws: Workspace, settings: Settings, report: Report):
    enum = settings.enumeration
    level = enum.truncation_level
    for name, system in ws.systems.items():
        report.add_verdict(f"reflection[{name}]", law_reflection(system, level, enum.max_extensional_members))
        if len(system.ground) <= enum.max_factor_ground:
            for target_name, space in ws.spaces.items():
                if space.basis == system.basis and len(space.ground) <= enum.max_factor_ground:
                    report.add_verdict(f"factorizations[{name}->{target_name}]",
                                       law_factorizations(system, space, level, enum.max_extensional_members))
    for name, space in ws.spaces.items():
        report.add_verdict(f"spat-embed[{name}]", law_spat_embed(space, level, enum.max_extensional_members))
        if isinstance(space.bornology, RampDownset):
            report.add_verdict(f"cofinal-chain[{name}]", law_cofinal_chain(space))
    for name, m in ws.morphisms.items():
        if isinstance(m, SpaceMorphism) and isinstance(m.src.bornology, Extensional) \
                and isinstance(m.dst.bornology, Extensional):
            report.add_verdict(f"fullness[{name}]", law_fullness(m, level, 8))


async def loc_command(ws: Workspace, settings: Settings, report: Report):
    for name, system in ws.systems.items():
        bobj = loc(system)
        kind = "ramp" if isinstance(system.kappa, RampFamily) else "table"
        report.emit(f"Loc({name}) = {bobj.name} ({kind} kappa)")
    for name, m in ws.morphisms.items():
        if isinstance(m, SystemMorphism):
            phi = loc(m)
            report.emit(f"Loc({name}) = {phi.src.name} -> {phi.dst.name}: {format_witness(phi)}")


async def laws_command(ws: Workspace, settings: Settings, report: Report):
    suite = catalog_laws(settings) + workspace_laws(ws, settings)
    results = await run_laws(suite, settings.laws.concurrency, settings.laws.progress)
    for result in results:
        if result.error is not None:
            report.add(result.law.name, False, f"raised {result.error}")
        else:
            verdict = result.verdict
            report.add(result.law.name, verdict.holds, verdict.detail if not verdict else '', verdict.witness)


COMMANDS: Dict[str, Callable[[Workspace, Settings, Report], Awaitable[None]]] = {
    'check-lattice': check_lattice,
    'check-space': check_space,
    'check-system': check_system,
    'check-bounded': check_bounded,
    'initial-lift': initial_lift,
    'check-reqs': check_reqs,
    'icd': icd,
    'spatialize': spatialize_systems,
    'embed': embed,
    'check-reflection': check_reflection,
    'loc': loc_command,
    'laws': laws_command,
}


async def run(command: str, workspace: Workspace, settings: Settings, files: List[str] = None) -> Report:
    """
    Run one command over a parsed workspace.

    Raises:
        UnknownCommand: command is not one of COMMANDS
    """
    handler = COMMANDS.get(command)
    if handler is None:
        raise UnknownCommand(f"Unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    report = Report(command, list(files or []))
    logger.info(f"Running {command} over {len(workspace.declarations)} declarations")
    await handler(workspace, settings, report)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bornolab',
        description='Lattice-valued bornology checker: ideals, image operators, spaces, systems and reflections'
    )
    parser.add_argument('command', help=f"one of: {', '.join(COMMANDS)}")
    parser.add_argument('files', nargs='*', help='workspace files, parsed in order')
    parser.add_argument('--truncation-level', type=int, help='truncation level for omega-chain checks (default 6)')
    parser.add_argument('--probe-bound', type=int, help='largest probe ground set for initiality (default 2)')
    parser.add_argument('--config', default='config.yaml', help='configuration file (default config.yaml)')
    parser.add_argument('--verbose', action='store_true', help='log at DEBUG level')
    parser.add_argument('--quiet', action='store_true', help='log warnings only and hide progress bars')
    return parser


def configure(args: argparse.Namespace) -> Settings:
    settings = load_settings(args.config)
    if args.truncation_level is not None:
        settings.enumeration.truncation_level = args.truncation_level
    if args.probe_bound is not None:
        settings.enumeration.probe_bound = args.probe_bound
    if args.quiet:
        settings.laws.progress = False
    level = 'DEBUG' if args.verbose else 'WARNING' if args.quiet else settings.logging.level
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    return settings


async def main(argv: List[str] = None) -> int:
    """Main entry point; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        settings = configure(args)
        workspace = parse(args.files)
        report = await run(args.command, workspace, settings, args.files)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BornolabError as e:
        logger.error(f"{args.command} stopped: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sys.stdout.write(report.render())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
