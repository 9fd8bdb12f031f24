"""The QP (Quantum Problem) integer instruction format.

A program is a plain list of decimal integers: a three-value header
``n_qubits n_gates max_controls`` followed by one fixed-width record
per gate, ``opcode target c1 .. cM`` with -1 marking unused control
slots. Any amount of ASCII whitespace separates tokens. There are no
strings and no floats, so the file is trivially diffable and trivially
consumed by a hardware host.

Opcodes: 1=x 2=y 3=z 4=h 5=s 6=sdg 7=t 8=tdg. SWAP has no opcode on
purpose; it must be lowered before a program can be emitted.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ir import Circuit, Control, Gate, GateKind, Index

OPCODES: dict[GateKind, int] = {
    GateKind.X: 1,
    GateKind.Y: 2,
    GateKind.Z: 3,
    GateKind.H: 4,
    GateKind.S: 5,
    GateKind.SDG: 6,
    GateKind.T: 7,
    GateKind.TDG: 8,
}

KINDS_BY_OPCODE: dict[int, GateKind] = {v: k for k, v in OPCODES.items()}


class QPFormatError(Exception):
    """Base class for malformed QP text or programs."""


class Truncated(QPFormatError):
    pass


class NonIntegerToken(QPFormatError):
    pass


class BadOpcode(QPFormatError):
    def __init__(self, value: int, gate_index: int | None = None):
        where = "" if gate_index is None else f" in gate {gate_index}"
        super().__init__(f"bad opcode {value}{where}")
        self.value = value


class BadIndex(QPFormatError):
    def __init__(self, message: str, value: int | None = None):
        super().__init__(message)
        self.value = value


class InvariantViolation(QPFormatError):
    def __init__(self, message: str, gate_index: int | None = None):
        where = "" if gate_index is None else f"gate {gate_index}: "
        super().__init__(where + message)
        self.gate_index = gate_index


@dataclass(frozen=True, slots=True)
class QPGate:
    opcode: int
    target: int
    controls: tuple[int, ...]  # length = max_controls, -1 = unused slot


@dataclass(frozen=True, slots=True)
class QPProgram:
    n_qubits: int
    max_controls: int
    gates: tuple[QPGate, ...] = ()


def _check_program(p: QPProgram) -> None:
    if p.n_qubits < 1:
        raise InvariantViolation(f"n_qubits must be positive, got {p.n_qubits}")
    if p.max_controls < 2:
        raise InvariantViolation(
            f"max_controls must be at least 2, got {p.max_controls}"
        )
    for gi, g in enumerate(p.gates):
        if g.opcode not in KINDS_BY_OPCODE:
            raise InvariantViolation(f"bad opcode {g.opcode}", gi)
        if not 0 <= g.target < p.n_qubits:
            raise InvariantViolation(f"target {g.target} out of range", gi)
        if len(g.controls) != p.max_controls:
            raise InvariantViolation(
                f"expected {p.max_controls} control slots, got {len(g.controls)}", gi
            )
        seen: set[int] = set()
        unused = False
        for v in g.controls:
            if v == -1:
                unused = True
                continue
            if unused:
                raise InvariantViolation("control after a -1 slot", gi)
            if not 0 <= v < p.n_qubits:
                raise InvariantViolation(f"control {v} out of range", gi)
            if v == g.target:
                raise InvariantViolation(f"control {v} equals target", gi)
            if v in seen:
                raise InvariantViolation(f"duplicate control {v}", gi)
            seen.add(v)


def emit_qp(p: QPProgram) -> str:
    """Serialize a program; deterministic byte-for-byte."""
    _check_program(p)
    parts = [f"{p.n_qubits} {len(p.gates)} {p.max_controls}"]
    for g in p.gates:
        parts.append(" ".join(str(v) for v in (g.opcode, g.target, *g.controls)))
    return "  ".join(parts)


def parse_qp(text: str) -> QPProgram:
    """Inverse of emit_qp on its image; validates every invariant."""
    values = []
    for tok in text.split():
        try:
            values.append(int(tok))
        except ValueError:
            raise NonIntegerToken(f"not an integer: {tok!r}") from None
    if len(values) < 3:
        raise Truncated(f"header needs 3 integers, got {len(values)}")
    n_qubits, n_gates, max_controls = values[0], values[1], values[2]
    if n_qubits < 1:
        raise BadIndex(f"n_qubits must be positive, got {n_qubits}", n_qubits)
    if n_gates < 0:
        raise QPFormatError(f"negative gate count {n_gates}")
    if max_controls < 2:
        raise QPFormatError(f"max_controls must be at least 2, got {max_controls}")
    expected = 3 + n_gates * (2 + max_controls)
    if len(values) < expected:
        raise Truncated(f"expected {expected} integers, got {len(values)}")
    if len(values) > expected:
        raise QPFormatError(f"{len(values) - expected} trailing token(s)")
    gates = []
    pos = 3
    for gi in range(n_gates):
        opcode = values[pos]
        target = values[pos + 1]
        controls = tuple(values[pos + 2 : pos + 2 + max_controls])
        pos += 2 + max_controls
        if opcode not in KINDS_BY_OPCODE:
            raise BadOpcode(opcode, gi)
        if not 0 <= target < n_qubits:
            raise BadIndex(f"target {target} out of range in gate {gi}", target)
        seen: set[int] = set()
        unused = False
        for v in controls:
            if v == -1:
                unused = True
                continue
            if unused:
                raise BadIndex(f"control after a -1 slot in gate {gi}", v)
            if not 0 <= v < n_qubits:
                raise BadIndex(f"control {v} out of range in gate {gi}", v)
            if v == target:
                raise BadIndex(f"control {v} equals target in gate {gi}", v)
            if v in seen:
                raise BadIndex(f"duplicate control {v} in gate {gi}", v)
            seen.add(v)
        gates.append(QPGate(opcode, target, controls))
    return QPProgram(n_qubits, max_controls, tuple(gates))


def to_circuit(p: QPProgram) -> Circuit:
    """View a program as an anonymous indexed circuit (for simulation)."""
    _check_program(p)
    gates = tuple(
        Gate(
            KINDS_BY_OPCODE[g.opcode],
            (Index(g.target),),
            tuple(Control(Index(v), True) for v in g.controls if v != -1),
        )
        for g in p.gates
    )
    return Circuit((), p.n_qubits, gates)
