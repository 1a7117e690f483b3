"""
Error types for the nested graph engine.

Every failure carries a stable error code and the ids of the offending
nodes/flags, so reports can be matched by scripts and failing random cases
can be archived as fixtures.
"""

from typing import Any, Dict, Iterable, List, Optional


class NestedGraphError(Exception):
    """Base class for all engine errors"""

    code = "NestedGraphError"

    def __init__(self, message: str, ids: Optional[Iterable[Any]] = None):
        super().__init__(message)
        self.message = message
        self.ids: List[str] = sorted(str(i) for i in (ids or []))

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable error report"""
        return {
            "error": self.code,
            "message": self.message,
            "ids": self.ids,
        }

    def __str__(self) -> str:
        if self.ids:
            return f"{self.code}: {self.message} [{', '.join(self.ids)}]"
        return f"{self.code}: {self.message}"


# graph_core
class DanglingReference(NestedGraphError):
    code = "DanglingReference"


class CycleDetected(NestedGraphError):
    code = "CycleDetected"


class CompositionIncomplete(NestedGraphError):
    code = "CompositionIncomplete"


class CompositionMismatch(NestedGraphError):
    code = "CompositionMismatch"


class AssociativityViolation(NestedGraphError):
    code = "AssociativityViolation"


# functors
class EndpointMismatch(NestedGraphError):
    code = "EndpointMismatch"


class FunctorialityViolation(NestedGraphError):
    code = "FunctorialityViolation"


class SourceTargetMismatch(NestedGraphError):
    code = "SourceTargetMismatch"


class NotAdmissible(NestedGraphError):
    code = "NotAdmissible"


class NotEpi(NestedGraphError):
    code = "NotEpi"


class NotMerger(NestedGraphError):
    code = "NotMerger"


class NotContraction(NestedGraphError):
    code = "NotContraction"


class FiberNotCorolla(NestedGraphError):
    code = "FiberNotCorolla"


# double_category
class NotCommuting(NestedGraphError):
    code = "NotCommuting"


class PreimageMismatch(NestedGraphError):
    code = "PreimageMismatch"


class RestrictionNotMerger(NestedGraphError):
    code = "RestrictionNotMerger"


class RestrictionNotContraction(NestedGraphError):
    code = "RestrictionNotContraction"


class BoundaryMismatch(NestedGraphError):
    code = "BoundaryMismatch"


# gluing
class CompositionConflict(NestedGraphError):
    code = "CompositionConflict"


class InducedMapIllDefined(NestedGraphError):
    code = "InducedMapIllDefined"


# cli
class GenerationExhausted(NestedGraphError):
    code = "GenerationExhausted"


class MalformedDocument(NestedGraphError):
    code = "MalformedDocument"


class UsageError(NestedGraphError):
    code = "UsageError"
