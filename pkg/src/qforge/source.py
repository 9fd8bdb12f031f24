"""Reader and writer for the circuit source format (``.fqt``).

One statement per line, whitespace-insensitive within a line::

    qreg a 4            # register declaration
    x a[0]              # gate: target operand first
    x a[1] a[0] !a[2]   # remaining operands are controls, '!' = negative
    swap a[0] a[1] b[0] # swap takes two targets, then controls

Gate names are case-insensitive; register labels are case-sensitive
and must be declared before use. ``#`` starts a comment.
"""
from __future__ import annotations

import re

from .ir import (
    Circuit,
    Control,
    Gate,
    GateKind,
    Named,
    QubitRef,
    register_bases,
)

_GATES = {k.value: k for k in GateKind}

_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+|[!\[\]]|\S")
_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(Exception):
    """Source error with a 1-based line and column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UnknownGate(ParseError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unknown gate {name!r}", line, col)
        self.name = name


class UndeclaredRegister(ParseError):
    def __init__(self, label: str, line: int, col: int):
        super().__init__(f"undeclared register {label!r}", line, col)
        self.label = label


class _Line:
    """Token cursor over one source line."""

    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.toks: list[tuple[str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group() == "#":
                break
            self.toks.append((m.group(), m.start() + 1))
        self.pos = 0

    def peek(self) -> tuple[str, int] | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, what: str) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1][1] + len(self.toks[-1][0]) if self.toks else 1
            raise ParseError(f"expected {what}", self.lineno, last)
        self.pos += 1
        return tok

    def expect(self, literal: str) -> None:
        text, col = self.take(repr(literal))
        if text != literal:
            raise ParseError(
                f"expected {literal!r}, got {text!r}", self.lineno, col
            )


def _parse_operand(ln: _Line, declared: dict[str, int]) -> tuple[QubitRef, bool]:
    """One operand: optional '!' then label[offset]. Returns (ref, positive)."""
    positive = True
    tok = ln.peek()
    if tok is not None and tok[0] == "!":
        ln.take("'!'")
        positive = False
    text, col = ln.take("a qubit operand")
    if not _LABEL.match(text):
        raise ParseError(f"expected register label, got {text!r}", ln.lineno, col)
    if text not in declared:
        raise UndeclaredRegister(text, ln.lineno, col)
    ln.expect("[")
    off_text, off_col = ln.take("an offset")
    if not off_text.isdigit():
        raise ParseError(f"expected integer offset, got {off_text!r}", ln.lineno, off_col)
    ln.expect("]")
    return Named(text, int(off_text)), positive


def parse_source(text: str) -> Circuit:
    """Parse circuit source text into a Circuit.

    Every failure raises a positioned ParseError (or a subclass); the
    parser never crashes on arbitrary input.
    """
    registers: list[tuple[str, int]] = []
    declared: dict[str, int] = {}
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = _Line(raw, lineno)
        head = ln.peek()
        if head is None:
            continue
        word, col = head
        if word == "qreg":
            ln.take("'qreg'")
            label, lcol = ln.take("a register label")
            if not _LABEL.match(label):
                raise ParseError(f"bad register label {label!r}", lineno, lcol)
            if label in declared:
                raise ParseError(f"register {label!r} already declared", lineno, lcol)
            size_text, scol = ln.take("a register size")
            if not size_text.isdigit() or int(size_text) < 1:
                raise ParseError(
                    f"register size must be a positive integer, got {size_text!r}",
                    lineno,
                    scol,
                )
            if ln.peek() is not None:
                extra, ecol = ln.peek()
                raise ParseError(f"unexpected token {extra!r}", lineno, ecol)
            registers.append((label, int(size_text)))
            declared[label] = int(size_text)
            continue
        kind = _GATES.get(word.lower())
        if kind is None:
            if _LABEL.match(word):
                raise UnknownGate(word, lineno, col)
            raise ParseError(f"unexpected token {word!r}", lineno, col)
        ln.take("a gate name")
        operands: list[tuple[QubitRef, bool, int]] = []
        while ln.peek() is not None:
            before = ln.peek()[1]
            ref, positive = _parse_operand(ln, declared)
            operands.append((ref, positive, before))
        n_targets = 2 if kind is GateKind.SWAP else 1
        if len(operands) < n_targets:
            raise ParseError(
                f"{kind.value} needs {n_targets} target operand(s)", lineno, col
            )
        targets = []
        for ref, positive, ocol in operands[:n_targets]:
            if not positive:
                raise ParseError("a target cannot be negated", lineno, ocol)
            targets.append(ref)
        controls = tuple(
            Control(ref, positive) for ref, positive, _ in operands[n_targets:]
        )
        gates.append(Gate(kind, tuple(targets), controls))
    n_qubits = sum(size for _, size in registers)
    return Circuit(tuple(registers), n_qubits, tuple(gates))


def _formatter(c: Circuit):
    bases = register_bases(c)
    spans = []  # (start, end, label) in declaration order
    for label, (base, size) in bases.items():
        spans.append((base, base + size, label))

    def fmt(ref: QubitRef) -> str:
        if isinstance(ref, Named):
            if ref.label not in bases:
                raise ValueError(f"cannot print: undeclared register {ref.label!r}")
            return f"{ref.label}[{ref.offset}]"
        for start, end, label in spans:
            if start <= ref.index < end:
                return f"{label}[{ref.index - start}]"
        raise ValueError(
            f"cannot print: qubit {ref.index} is not covered by any register"
        )

    return fmt


def print_source(c: Circuit) -> str:
    """Canonical source text for a circuit.

    Every qubit must be printable as label[offset]: named references
    must use declared registers, and index references must fall inside
    the register span (they are printed through the reverse mapping).
    """
    fmt = _formatter(c)
    lines = [f"qreg {label} {size}" for label, size in c.registers]
    for g in c.gates:
        parts = [g.kind.value]
        parts.extend(fmt(t) for t in g.targets)
        for k in g.controls:
            parts.append(("" if k.positive else "!") + fmt(k.qubit))
        lines.append(" ".join(parts))
    return "".join(line + "\n" for line in lines)
