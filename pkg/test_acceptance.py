"""
Acceptance run: every law over the fixture corpus, plus the cheaper
catalog laws at a reduced scale.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, 'src')

from born_systems import RampFamily, spatialize
from ideal_engine import RampDownset
from laws import catalog_laws, run_laws, workspace_laws
from settings import LawSettings, Settings
from workspace import parse

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = [FIXTURES / name for name in ("base.bl", "spaces.bl", "systems.bl", "sources.bl", "morphisms.bl")]
CATALOG_MODULES = ["lattice_core", "powerset_theory", "ideal_engine", "born_spaces", "initial_lifts"]


def failures(results):
    return [(r.law.name, r.error or r.verdict.detail) for r in results if not r.holds]


def test_corpus_is_large_enough():
    ws = parse(CORPUS)
    assert len(ws.systems) >= 20
    ramps = [s for s in ws.systems.values() if isinstance(s.kappa, RampFamily)]
    assert len(ramps) >= 5
    mixed = [s for s in ramps
             if isinstance(spatialize(s).bornology, RampDownset) and spatialize(s).bornology.region]
    assert mixed


@pytest.mark.asyncio
async def test_workspace_laws_hold_on_the_corpus():
    ws = parse(CORPUS)
    laws = workspace_laws(ws, Settings())
    assert len(laws) > 2 * len(ws.systems)
    results = await run_laws(laws, concurrency=4, progress=False)
    assert len(results) == len(laws)
    assert failures(results) == []


@pytest.mark.asyncio
@pytest.mark.parametrize("module", CATALOG_MODULES)
async def test_catalog_laws_hold(module):
    settings = Settings(laws=LawSettings(max_basis_size=4, max_ground_size=2, classical_max_ground=2))
    laws = [law for law in catalog_laws(settings) if law.module == module]
    assert laws
    results = await run_laws(laws, progress=False)
    assert failures(results) == []


@pytest.mark.asyncio
async def test_a_raising_law_is_counted_not_propagated():
    from laws import Law

    def boom():
        raise ValueError("no")

    results = await run_laws([Law("boom", "test", boom)], progress=False)
    assert not results[0].holds
    assert results[0].error == "ValueError: no"


def test_every_catalog_module_is_covered():
    settings = Settings(laws=LawSettings(max_basis_size=4, max_ground_size=2, classical_max_ground=2))
    assert {law.module for law in catalog_laws(settings)} == set(CATALOG_MODULES)
