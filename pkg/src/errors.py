"""
Exception hierarchy for bornolab.
Every failure raised by the library derives from BornolabError.
"""

from typing import Any, Optional


class BornolabError(Exception):
    """Base class for all bornolab errors."""

    def __init__(self, message: str, invariant: Optional[str] = None,
                 witness: Any = None):
        super().__init__(message)
        self.invariant = invariant
        self.witness = witness


# Lattices and basis maps
class LatticeError(BornolabError, ValueError):
    pass


class NotAPoset(LatticeError):
    pass


class NoMeet(LatticeError):
    pass


class NoJoin(LatticeError):
    pass


class NoBotTop(LatticeError):
    pass


class NotMonotone(LatticeError):
    pass


class NotJoinPreserving(LatticeError):
    pass


class UnsupportedComposition(LatticeError):
    pass


class BasisMismatch(LatticeError):
    pass


# Ideals
class IdealError(BornolabError, ValueError):
    pass


class TooLarge(IdealError):
    pass


class NotIdealMorphism(IdealError):
    pass


class UnsupportedReduct(BornolabError, ValueError):
    pass


# Spaces and systems
class StructureError(BornolabError, ValueError):
    pass


class NotAnIdeal(StructureError):
    pass


class NoCoverage(StructureError):
    pass


class NoLegCoverage(StructureError):
    pass


class NotRepresentable(StructureError):
    pass


# Text format and CLI
class InputError(BornolabError):
    pass


class ParseError(InputError):

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 source: str = ''):
        location = f"{source}:{line}:{column}" if source else f"{line}:{column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column
        self.source = source


class DuplicateName(InputError):
    pass


class UnresolvedReference(InputError):
    pass


class UnknownCommand(InputError):
    pass
