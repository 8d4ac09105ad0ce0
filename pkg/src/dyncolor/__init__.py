"""Fully dynamic (Delta+1)-vertex-coloring engine with verification
oracles, adversary harness and an operation-count benchmark CLI."""

from .config import Config, auto_zeta
from .engine import (
    CostMeter,
    CostReport,
    Engine,
    EngineFailure,
    InlierPaletteEmpty,
    PhaseRestart,
    Update,
)
from .graph import (
    DegreeCapExceeded,
    DuplicateEdge,
    DynamicGraph,
    GraphError,
    MissingEdge,
)
from .report import Violation, summarize
from .state import ColoringState

__all__ = [
    "Config",
    "auto_zeta",
    "CostMeter",
    "CostReport",
    "Engine",
    "EngineFailure",
    "InlierPaletteEmpty",
    "PhaseRestart",
    "Update",
    "DegreeCapExceeded",
    "DuplicateEdge",
    "DynamicGraph",
    "GraphError",
    "MissingEdge",
    "Violation",
    "summarize",
    "ColoringState",
]
