"""
Report module.
Collects check verdicts for one command and renders them deterministically.
"""

import math
from dataclasses import dataclass, field
from typing import Any, List, Optional

from ideal_engine import Ideal
from lattice_core import BasisMap, Verdict
from powerset_theory import GroundMap, GroundSet, LFunction
from workspace import format_function, format_ideal

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2


def format_witness(value: Any) -> str:
    """Render a witness in the literal syntax of the text format."""
    if value is None:
        return "-"
    if isinstance(value, LFunction):
        return format_function(value)
    if isinstance(value, Ideal):
        return format_ideal(value)
    if isinstance(value, GroundMap):
        return "{ " + " ".join(f"{x} -> {y}" for x, y in zip(value.src.elements, value.images)) + " }"
    if isinstance(value, BasisMap):
        if value.table is not None:
            return "table { " + " ".join(f"{value.src.format_element(a)} -> {value.dst.format_element(b)}"
                                         for a, b in value.table) + " }"
        return "ramp " + value.describe()
    if isinstance(value, GroundSet):
        return "{ " + " ".join(value.elements) + " }"
    if isinstance(value, float) and math.isinf(value):
        return "w"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(format_witness(v) for v in value) + ")"
    return str(value)


@dataclass
class Check:
    name: str
    holds: bool
    detail: str = ''
    witness: Optional[str] = None


@dataclass
class Report:
    """Output of one CLI command."""
    command: str
    files: List[str] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    lines: List[str] = field(default_factory=list)

    def add(self, name: str, holds: bool, detail: str = '', witness: Any = None):
        text = format_witness(witness) if not holds and witness is not None else None
        self.checks.append(Check(name, bool(holds), detail, text))

    def add_verdict(self, name: str, verdict: Verdict):
        self.add(name, verdict.holds, verdict.detail, verdict.witness)

    def emit(self, line: str = ''):
        self.lines.append(line)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.holds]

    @property
    def exit_code(self) -> int:
        return EXIT_FAILED if self.failures else EXIT_OK

    def render(self) -> str:
        out = [f"$ bornolab {' '.join([self.command] + self.files)}"]
        out += self.lines
        for check in self.checks:
            if check.holds:
                out.append(f"PASS {check.name}" + (f" ({check.detail})" if check.detail else ""))
                continue
            out.append(f"FAIL {check.name}" + (f": {check.detail}" if check.detail else ""))
            if check.witness is not None:
                out.append(f"  witness: {check.witness}")
        failed = len(self.failures)
        if failed:
            out.append(f"result: fail ({failed} of {len(self.checks)} checks failed)")
        else:
            out.append(f"result: pass ({len(self.checks)} checks)")
        return "\n".join(out) + "\n"
