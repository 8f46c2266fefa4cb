"""Report writers for a :class:`~circuit_profiler.report.FlatCallTree`."""

from .dot import DotThresholds, export_dot
from .gprof import export_gprof
from .json_report import export_json, parse_json_report, tree_from_dict, tree_to_dict

__all__ = [
    "DotThresholds",
    "export_dot",
    "export_gprof",
    "export_json",
    "parse_json_report",
    "tree_from_dict",
    "tree_to_dict",
]
