"""Executable Schreier families, ordinal-tree functions and greedy-basis constants."""
from .ordinal import (
    DEFAULT_POLICY,
    OMEGA,
    ONE,
    PLUS_ONE_POLICY,
    ZERO,
    Ordinal,
    add,
    classify,
    compare,
    format_ordinal,
    fund_seq,
    parse_ordinal,
)
from .ordtree import build_graph, export_dot, f_value, f_witness, find_separation
from .schreier import (
    OVERFLOW,
    SchreierHandle,
    decompose,
    enumerate_family,
    g_value,
    is_maximal,
    member,
    parse_finset,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY", "OMEGA", "ONE", "PLUS_ONE_POLICY", "ZERO", "Ordinal", "add", "classify", "compare",
    "format_ordinal", "fund_seq", "parse_ordinal",
    "build_graph", "export_dot", "f_value", "f_witness", "find_separation",
    "OVERFLOW", "SchreierHandle", "decompose", "enumerate_family", "g_value", "is_maximal", "member",
    "parse_finset",
]
