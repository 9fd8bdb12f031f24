"""Circuit unit testing: prepare, run, decode, compare.

A test case names a circuit, a backend, register preparations and
expectations. Logic-backend cases compare decoded register integers
exactly; state-vector cases compare listed amplitudes within per-entry
tolerances and require every unlisted amplitude to be negligible.

Suite files (``.qtest``) are line oriented::

    circuit adder.fqt
    backend logic
    case add_1_2 prep a=1,b=2 expect b=3,c=0
    # state-vector expectations attach to the preceding case:
    backend sv
    case bell prep a=0
    expect amp 0 0.70710678 0 tol 1e-6
    expect amp 3 0.70710678 0 tol 1e-6

A backend mismatch (e.g. a Hadamard under the logic backend) reports
the case as an error, not a failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .ir import Circuit, register_bases
from .logic import BasisState, NonLogicGate, run_logic
from .passes import (
    PassConfig,
    expand_multi_controls,
    lower_negative_controls,
    lower_swaps,
    resolve_names,
    verify,
)
from .source import ParseError, parse_source
from .statevector import run

DEFAULT_AMPLITUDE_TOL = 1e-9


class Backend(Enum):
    LOGIC = "logic"
    SV = "sv"


class SuiteError(Exception):
    """Malformed suite file."""

    def __init__(self, message: str, line: int | None = None):
        where = "" if line is None else f"line {line}: "
        super().__init__(where + message)
        self.line = line


@dataclass
class AmplitudeExpectation:
    index: int
    amplitude: complex
    tolerance: float


@dataclass
class TestCase:
    __test__ = False  # keep pytest from collecting the API type

    name: str
    circuit: Circuit
    backend: Backend
    prep: dict[str, int] = field(default_factory=dict)
    expect_registers: dict[str, int] = field(default_factory=dict)
    expect_amplitudes: list[AmplitudeExpectation] = field(default_factory=list)


@dataclass(frozen=True)
class CaseResult:
    name: str
    status: str  # "pass" | "fail" | "error"
    message: str = ""


@dataclass(frozen=True)
class TestReport:
    __test__ = False

    results: tuple[CaseResult, ...]

    @property
    def passed(self) -> int:
        return sum(r.status == "pass" for r in self.results)

    @property
    def failed(self) -> int:
        return sum(r.status == "fail" for r in self.results)

    @property
    def errors(self) -> int:
        return sum(r.status == "error" for r in self.results)

    @property
    def all_passed(self) -> bool:
        return self.passed == len(self.results)


def _prep_bits(circuit: Circuit, prep: dict[str, int]) -> int:
    bases = register_bases(circuit)
    bits = 0
    for label, value in prep.items():
        entry = bases.get(label)
        if entry is None:
            raise ValueError(f"prep names unknown register {label!r}")
        base, size = entry
        if not 0 <= value < (1 << size):
            raise ValueError(
                f"prep {label}={value} does not fit the {size}-qubit register"
            )
        bits |= value << base
    return bits


def _decode_registers(circuit: Circuit, bits: int) -> dict[str, int]:
    out = {}
    for label, (base, size) in register_bases(circuit).items():
        out[label] = (bits >> base) & ((1 << size) - 1)
    return out


def _run_case(case: TestCase, lower: bool) -> CaseResult:
    diags = verify(case.circuit)
    if diags:
        first = diags[0]
        return CaseResult(
            case.name, "error", f"verify: gate {first.gate_index}: {first.message}"
        )
    circuit, _ = resolve_names(case.circuit)
    if lower:
        circuit = lower_swaps(circuit)
        circuit = lower_negative_controls(circuit)
        circuit = expand_multi_controls(circuit, PassConfig())
    try:
        bits = _prep_bits(case.circuit, case.prep)
    except ValueError as e:
        return CaseResult(case.name, "error", str(e))

    if case.backend is Backend.LOGIC:
        try:
            # lowering may append ancillas; they prep to 0
            out = run_logic(circuit, BasisState(circuit.n_qubits, bits))
        except NonLogicGate as e:
            return CaseResult(case.name, "error", str(e))
        decoded = _decode_registers(case.circuit, out.bits)
        mismatches = [
            f"expected {label}={want}, actual {label}={decoded.get(label)}"
            for label, want in case.expect_registers.items()
            if decoded.get(label) != want
        ]
        if mismatches:
            return CaseResult(case.name, "fail", "; ".join(mismatches))
        return CaseResult(case.name, "pass")

    state = run(circuit, bits)
    listed = {e.index: e for e in case.expect_amplitudes}
    floor = min(
        (e.tolerance for e in case.expect_amplitudes), default=DEFAULT_AMPLITUDE_TOL
    )
    for e in case.expect_amplitudes:
        if not 0 <= e.index < len(state.amplitudes):
            return CaseResult(
                case.name, "error", f"expected amplitude index {e.index} out of range"
            )
        actual = state.amplitudes[e.index]
        if abs(actual - e.amplitude) > e.tolerance:
            return CaseResult(
                case.name,
                "fail",
                f"amplitude[{e.index}] = {actual:.9g}, expected "
                f"{e.amplitude:.9g} within {e.tolerance:g}",
            )
    for i, actual in enumerate(state.amplitudes):
        if i not in listed and abs(actual) > floor:
            return CaseResult(
                case.name,
                "fail",
                f"unlisted amplitude[{i}] = {actual:.9g} exceeds {floor:g}",
            )
    return CaseResult(case.name, "pass")


def run_suite(cases: list[TestCase], lower: bool = False) -> TestReport:
    """Run every case on its backend; results keep the case order."""
    return TestReport(tuple(_run_case(case, lower) for case in cases))


def _parse_assignments(text: str, what: str, line: int) -> dict[str, int]:
    out: dict[str, int] = {}
    for part in text.split(","):
        if not part:
            continue
        name, eq, value = part.partition("=")
        if not eq or not name:
            raise SuiteError(f"bad {what} entry {part!r}", line)
        try:
            out[name] = int(value, 0)
        except ValueError:
            raise SuiteError(f"bad integer in {what} entry {part!r}", line) from None
    return out


def parse_suite(path: str | Path) -> list[TestCase]:
    """Read a .qtest file; circuit paths resolve relative to the suite."""
    path = Path(path)
    base = path.parent
    circuit: Circuit | None = None
    backend = Backend.LOGIC
    cases: list[TestCase] = []
    loaded: dict[Path, Circuit] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        keyword = words[0]
        if keyword == "circuit":
            if len(words) != 2:
                raise SuiteError("circuit takes one path", lineno)
            target = base / words[1]
            if target not in loaded:
                try:
                    loaded[target] = parse_source(target.read_text())
                except OSError as e:
                    raise SuiteError(f"cannot read circuit: {e}", lineno) from None
                except ParseError as e:
                    raise SuiteError(f"bad circuit {words[1]}: {e}", lineno) from None
            circuit = loaded[target]
        elif keyword == "backend":
            if len(words) != 2 or words[1] not in ("logic", "sv"):
                raise SuiteError("backend must be 'logic' or 'sv'", lineno)
            backend = Backend(words[1])
        elif keyword == "case":
            if circuit is None:
                raise SuiteError("case before any circuit line", lineno)
            if len(words) < 2:
                raise SuiteError("case needs a name", lineno)
            case = TestCase(name=words[1], circuit=circuit, backend=backend)
            i = 2
            while i < len(words):
                if words[i] == "prep" and i + 1 < len(words):
                    case.prep = _parse_assignments(words[i + 1], "prep", lineno)
                    i += 2
                elif words[i] == "expect" and i + 1 < len(words):
                    case.expect_registers = _parse_assignments(
                        words[i + 1], "expect", lineno
                    )
                    i += 2
                else:
                    raise SuiteError(f"unexpected token {words[i]!r}", lineno)
            cases.append(case)
        elif keyword == "expect":
            # continuation line: expect amp <index> <re> <im> tol <t>
            if not cases:
                raise SuiteError("expect line before any case", lineno)
            if len(words) != 7 or words[1] != "amp" or words[5] != "tol":
                raise SuiteError(
                    "expected: expect amp <index> <re> <im> tol <t>", lineno
                )
            if cases[-1].backend is not Backend.SV:
                raise SuiteError("amplitude expectations need the sv backend", lineno)
            try:
                cases[-1].expect_amplitudes.append(
                    AmplitudeExpectation(
                        index=int(words[2]),
                        amplitude=complex(float(words[3]), float(words[4])),
                        tolerance=float(words[6]),
                    )
                )
            except ValueError:
                raise SuiteError("bad number in amplitude expectation", lineno) from None
        else:
            raise SuiteError(f"unknown keyword {keyword!r}", lineno)
    return cases
