"""Max flow in directed planar graphs with multiple sources and sinks."""

from .config import EngineConfig
from .engine import MsmsEngine, MsmsResult, msms_max_flow
from .flow import (
    FlowStore,
    ResidualView,
    accumulate,
    decompose_acyclic,
    flow_value,
    inflow,
    is_feasible,
    residual_reachable,
)
from .generate import generate
from .graph import PlanarGraph, TerminalSets, build_graph
from .instance import InstanceFile, parse_instance, serialize_instance
from .separator import BOUNDARY_CONSTANT, Piece, Separator, find_cycle_separator, split_into_pieces
from .solvers import limited_max_flow, msss_max_flow, oracle_max_flow, ssms_max_flow
from .surgery import attach_apex, detach_terminal_from_cycle, triangulate_and_biconnect

__all__ = [
    "BOUNDARY_CONSTANT",
    "EngineConfig",
    "FlowStore",
    "InstanceFile",
    "MsmsEngine",
    "MsmsResult",
    "Piece",
    "PlanarGraph",
    "ResidualView",
    "Separator",
    "TerminalSets",
    "accumulate",
    "attach_apex",
    "build_graph",
    "decompose_acyclic",
    "detach_terminal_from_cycle",
    "find_cycle_separator",
    "flow_value",
    "generate",
    "inflow",
    "is_feasible",
    "limited_max_flow",
    "msms_max_flow",
    "msss_max_flow",
    "oracle_max_flow",
    "parse_instance",
    "residual_reachable",
    "serialize_instance",
    "split_into_pieces",
    "ssms_max_flow",
    "triangulate_and_biconnect",
]
