from __future__ import annotations

from pathlib import Path

import pytest

from circuit_profiler import GateTimes, load_qasm, profile

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

IBM_TIMES = {"u1": 0.0, "u2": 35.0, "u3": 70.0, "cx": 300.0}
TOFFOLI = 'OPENQASM 2.0; include "qelib1.inc"; qreg q[3]; ccx q[0],q[1],q[2];'

# Filled by tests/test_acceptance.py; printed at the end of the run.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def ibm_times() -> GateTimes:
    return GateTimes(IBM_TIMES)


@pytest.fixture
def toffoli_ir(ibm_times):
    return load_qasm(TOFFOLI, ibm_times)


@pytest.fixture
def toffoli_tree(toffoli_ir):
    return profile(toffoli_ir)


@pytest.fixture
def single_gate_tree():
    return profile(load_qasm((CORPUS / "single_gate.qasm").read_text(), {"x": 1.0}))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
