"""Command-line entry point.

Exit status: 0 success, 1 usage or configuration error, 2 input parse
error, 3 profiling error (recursion, zero total time).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from . import profile
from .errors import ConfigError, InputError, ProfilingError
from .exporters import DotThresholds, export_dot, export_gprof, export_json
from .frontends import load_qasm, parse_interchange
from .model import parse_gate_times

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PROFILE = 3

FORMATS = ("qasm", "interchange")
EXPORTERS = ("gprof", "json", "dot")
_EXTENSIONS = {".qasm": "qasm", ".json": "interchange"}


@dataclass(frozen=True)
class CliConfig:
    input_path: Path
    gate_times_path: Path
    input_format: str | None = None
    exporter: str = "gprof"
    output_path: Path | None = None
    node_threshold: float = 0.5
    edge_threshold: float = 0.1
    root_name: str | None = None

    def resolved_format(self) -> str:
        if self.input_format is not None:
            if self.input_format not in FORMATS:
                raise ConfigError(f"unknown input format {self.input_format!r}")
            return self.input_format
        fmt = _EXTENSIONS.get(self.input_path.suffix.lower())
        if fmt is None:
            raise ConfigError(
                f"cannot infer the format of {self.input_path.name!r}; pass --format qasm|interchange"
            )
        return fmt


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="circuit-profiler",
        description="Profile a hierarchical quantum circuit and write a gprof, JSON or DOT report.",
    )
    parser.add_argument("input", type=Path, help="circuit file (.qasm or interchange .json)")
    parser.add_argument("--gate-times", required=True, type=Path, metavar="PATH",
                        help="JSON object mapping native gate names to durations")
    parser.add_argument("--format", choices=FORMATS, dest="input_format",
                        help="input format (default: from the file extension)")
    parser.add_argument("--exporter", choices=EXPORTERS, default="gprof")
    parser.add_argument("--output", type=Path, metavar="PATH", help="report file (default: stdout)")
    parser.add_argument("--node-threshold", type=float, default=0.5, metavar="PCT",
                        help="DOT only: hide routines below this share of total time")
    parser.add_argument("--edge-threshold", type=float, default=0.1, metavar="PCT",
                        help="DOT only: hide calls at or below this share of total time")
    parser.add_argument("--root", dest="root_name", metavar="NAME",
                        help="profile this routine instead of the whole program")
    return parser


def _read(path: Path, what: str) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {str(path)!r}: {exc.strerror or exc}") from exc


def render(config: CliConfig) -> str:
    """Run the pipeline and return the report text. Raises package errors."""
    try:
        thresholds = DotThresholds(config.node_threshold, config.edge_threshold)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    fmt = config.resolved_format()
    times = parse_gate_times(_read(config.gate_times_path, "gate times file"))
    source = _read(config.input_path, "input file")
    if fmt == "qasm":
        ir = load_qasm(source, times)
    else:
        ir = parse_interchange(source, times)
    tree = profile(ir, config.root_name)
    if config.exporter == "gprof":
        return export_gprof(tree)
    if config.exporter == "json":
        return export_json(tree)
    if config.exporter == "dot":
        return export_dot(tree, thresholds)
    raise ConfigError(f"unknown exporter {config.exporter!r}")


def run(config: CliConfig, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        report = render(config)
    except ConfigError as exc:
        print(f"circuit-profiler: error: {exc}", file=stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"circuit-profiler: {config.input_path.name}: {exc}", file=stderr)
        return EXIT_PARSE
    except ProfilingError as exc:
        print(f"circuit-profiler: error: {exc}", file=stderr)
        return EXIT_PROFILE
    if config.output_path is None:
        stdout.write(report)
        return EXIT_OK
    try:
        config.output_path.write_text(report, encoding="utf-8")
    except OSError as exc:
        print(f"circuit-profiler: error: cannot write {str(config.output_path)!r}: {exc.strerror or exc}", file=stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = CliConfig(
        input_path=args.input,
        gate_times_path=args.gate_times,
        input_format=args.input_format,
        exporter=args.exporter,
        output_path=args.output,
        node_threshold=args.node_threshold,
        edge_threshold=args.edge_threshold,
        root_name=args.root_name,
    )
    return run(config)
