"""Lowering pipeline from the builder IR down to the integer format.

The pass order is fixed: verify, resolve names, lower swaps, lower
negative controls, expand multi-controls, emit. Swaps go first so a
controlled swap turns into controlled NOTs whose (possibly negative)
controls the next pass still sees; multi-control expansion runs last so
it only ever meets plain positive controls.

Every pass is a pure circuit -> circuit function and each is
idempotent, so reruns are harmless.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ir import (
    Circuit,
    Control,
    Gate,
    GateKind,
    Index,
    QubitRef,
    register_bases,
)
from .qp import OPCODES, QPGate, QPProgram


class AncillaGrowthDisabled(Exception):
    """Expansion needs workspace qubits but growing the register is off."""


class CompileError(Exception):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, pass_name: str, message: str):
        super().__init__(f"{pass_name}: {message}")
        self.pass_name = pass_name


@dataclass(frozen=True)
class PassConfig:
    """Architecture limits for lowering.

    max_controls is the largest control count the target accepts; 2 is
    the minimum, since the expansion scheme itself needs Toffolis.
    """

    max_controls: int = 2
    allow_ancilla_growth: bool = True

    def __post_init__(self) -> None:
        if self.max_controls < 2:
            raise ValueError(
                f"max_controls must be at least 2, got {self.max_controls}"
            )


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # currently always "error"
    gate_index: int | None
    message: str


def _resolver(c: Circuit):
    bases = register_bases(c)

    def resolve(ref: QubitRef) -> int | str:
        """Resolved index, or a human-readable problem description."""
        if isinstance(ref, Index):
            if 0 <= ref.index < c.n_qubits:
                return ref.index
            return f"qubit index {ref.index} out of range ({c.n_qubits} qubits)"
        entry = bases.get(ref.label)
        if entry is None:
            return f"undeclared register {ref.label!r}"
        base, size = entry
        if not 0 <= ref.offset < size:
            return (
                f"qubit {ref.label}[{ref.offset}] out of range "
                f"(register has {size} qubits)"
            )
        return base + ref.offset

    return resolve


def verify(c: Circuit) -> list[Diagnostic]:
    """Well-formedness diagnostics; an empty list means the circuit is clean.

    Reports unresolvable or out-of-range qubits, targets reused as
    controls, duplicate or contradictory controls, and swaps whose two
    targets coincide.
    """
    resolve = _resolver(c)
    diags: list[Diagnostic] = []
    for gi, g in enumerate(c.gates):
        broken = False
        targets: list[int] = []
        for t in g.targets:
            r = resolve(t)
            if isinstance(r, str):
                diags.append(Diagnostic("error", gi, r))
                broken = True
            else:
                targets.append(r)
        controls: list[tuple[int, bool]] = []
        for k in g.controls:
            r = resolve(k.qubit)
            if isinstance(r, str):
                diags.append(Diagnostic("error", gi, r))
                broken = True
            else:
                controls.append((r, k.positive))
        if broken:
            continue
        if g.kind is GateKind.SWAP and targets[0] == targets[1]:
            diags.append(
                Diagnostic("error", gi, f"swap targets are identical (qubit {targets[0]})")
            )
        seen: dict[int, bool] = {}
        for q, positive in controls:
            if q in targets:
                diags.append(
                    Diagnostic("error", gi, f"target qubit {q} used as a control")
                )
                continue
            if q in seen:
                if seen[q] == positive:
                    diags.append(
                        Diagnostic("error", gi, f"duplicate control on qubit {q}")
                    )
                else:
                    diags.append(
                        Diagnostic(
                            "error",
                            gi,
                            f"qubit {q} is both a positive and a negative control",
                        )
                    )
                continue
            seen[q] = positive
    return diags


def resolve_names(c: Circuit) -> tuple[Circuit, dict[tuple[str, int], int]]:
    """Replace named references with indices.

    Registers map to indices in declaration order, offset-ascending.
    Returns the indexed circuit together with the full mapping table
    (label, offset) -> index. Already-indexed circuits pass through
    unchanged.
    """
    bases = register_bases(c)
    table = {
        (label, off): base + off
        for label, (base, size) in bases.items()
        for off in range(size)
    }
    resolve = _resolver(c)

    def conv(ref: QubitRef) -> Index:
        r = resolve(ref)
        if isinstance(r, str):
            raise ValueError(r)
        return Index(r)

    gates = tuple(
        Gate(
            g.kind,
            tuple(conv(t) for t in g.targets),
            tuple(Control(conv(k.qubit), k.positive) for k in g.controls),
        )
        for g in c.gates
    )
    return Circuit(c.registers, c.n_qubits, gates), table


def lower_swaps(c: Circuit) -> Circuit:
    """Replace SWAP(p, q) with CX(p->q), CX(q->p), CX(p->q).

    Controls on the swap are carried onto all three NOTs, so controlled
    swaps lower exactly.
    """
    out: list[Gate] = []
    for g in c.gates:
        if g.kind is not GateKind.SWAP:
            out.append(g)
            continue
        p, q = g.targets

        def cx(a: QubitRef, b: QubitRef) -> Gate:
            return Gate(GateKind.X, (b,), g.controls + (Control(a, True),))

        out.extend((cx(p, q), cx(q, p), cx(p, q)))
    return Circuit(c.registers, c.n_qubits, tuple(out))


def lower_negative_controls(c: Circuit) -> Circuit:
    """Make every control positive by negating its qubit around the gate.

    Each negative control q becomes a positive one with X(q) inserted
    immediately before and after the gate. No cancellation of adjacent
    X pairs is attempted.
    """
    out: list[Gate] = []
    for g in c.gates:
        flips = [
            Gate(GateKind.X, (k.qubit,), ()) for k in g.controls if not k.positive
        ]
        if not flips:
            out.append(g)
            continue
        positive = tuple(Control(k.qubit, True) for k in g.controls)
        out.extend(flips)
        out.append(Gate(g.kind, g.targets, positive))
        out.extend(reversed(flips))
    return Circuit(c.registers, c.n_qubits, tuple(out))


def _fresh_ancilla_label(c: Circuit) -> str:
    taken = {label for label, _ in c.registers}
    label = "anc"
    i = 0
    while label in taken:
        i += 1
        label = f"anc{i}"
    return label


def expand_multi_controls(c: Circuit, cfg: PassConfig) -> Circuit:
    """Rewrite gates with more than max_controls controls.

    While a gate has too many controls, a Toffoli folds its first two
    controls into a fresh |0> ancilla, which then stands in for the
    pair; the ancillas are uncomputed in reverse order right after the
    gate, so each one is back to |0> and the pool (sized by the worst
    gate, k - max_controls ancillas) is reused across gates.

    Expects positive controls only, i.e. runs after
    lower_negative_controls.
    """
    m = cfg.max_controls
    pool = max((len(g.controls) - m for g in c.gates), default=0)
    if pool <= 0:
        return c
    if not cfg.allow_ancilla_growth:
        raise AncillaGrowthDisabled(
            f"{pool} ancilla qubit(s) required but ancilla growth is disabled"
        )
    base = c.n_qubits
    registers = c.registers
    if c.register_span == c.n_qubits:
        registers = registers + ((_fresh_ancilla_label(c), pool),)
    out: list[Gate] = []
    for g in c.gates:
        if len(g.controls) <= m:
            out.append(g)
            continue
        for k in g.controls:
            if not k.positive:
                raise ValueError(
                    "negative controls must be lowered before multi-control expansion"
                )
        controls = list(g.controls)
        computed: list[Gate] = []
        next_ancilla = base
        while len(controls) > m:
            w = Index(next_ancilla)
            next_ancilla += 1
            computed.append(Gate(GateKind.X, (w,), (controls[0], controls[1])))
            controls = [Control(w, True)] + controls[2:]
        out.extend(computed)
        out.append(Gate(g.kind, g.targets, tuple(controls)))
        out.extend(reversed(computed))
    return Circuit(registers, base + pool, tuple(out))


def compile_circuit(c: Circuit, cfg: PassConfig | None = None) -> QPProgram:
    """Run the whole pipeline and produce a QP program.

    Fails fast with a CompileError naming the stage that rejected the
    circuit.
    """
    cfg = cfg or PassConfig()
    diags = verify(c)
    if diags:
        first = diags[0]
        where = "" if first.gate_index is None else f"gate {first.gate_index}: "
        raise CompileError(
            "verify", f"{len(diags)} error(s); first: {where}{first.message}"
        )
    resolved, _ = resolve_names(c)
    lowered = lower_swaps(resolved)
    lowered = lower_negative_controls(lowered)
    try:
        lowered = expand_multi_controls(lowered, cfg)
    except AncillaGrowthDisabled as e:
        raise CompileError("expand_multi_controls", str(e)) from e
    gates = []
    for g in lowered.gates:
        slots = [k.qubit.index for k in g.controls]
        slots.extend([-1] * (cfg.max_controls - len(slots)))
        gates.append(QPGate(OPCODES[g.kind], g.targets[0].index, tuple(slots)))
    return QPProgram(lowered.n_qubits, cfg.max_controls, tuple(gates))
