"""Circuit qubit reduction: specialize constant qubits away.

Fixing k qubits to constant bits produces a kernel circuit over the
remaining n - k qubits, so each kernel's state vector is 2**k times
smaller than the original's. Two strategies are tried in order:

* syntactic: walk the gate list propagating the known bits. Controls
  on specialized qubits are evaluated (drop the gate or strip the
  control); NOT gates targeting a specialized qubit with fully-known
  controls just update the tracked bit. Anything else is NotReducible.

* semantic: for computational-basis (NOT-family) circuits, evaluate
  the permutation the circuit applies to the free qubits under the
  fixed assignment, then resynthesize it as multi-controlled NOTs.
  Requires the specialized qubits to end in a constant state; if their
  output depends on the free inputs the specialization is entangled
  and removing the qubits would change semantics, which is an error.

Kernel circuits are densely reindexed over the free qubits (old index
order preserved) and carry a fresh register ``q`` so they can be
printed and run like any other circuit.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

from .fileio import atomic_write_text
from .ir import Circuit, Control, Gate, GateKind, Index, is_indexed
from .logic import NonLogicGate, logic_function
from .source import print_source


class ReductionError(Exception):
    """Base class for reduction failures."""


class NotReducible(ReductionError):
    """The syntactic walk hit a gate it cannot specialize away."""

    def __init__(self, gate_index: int, reason: str):
        super().__init__(f"gate {gate_index}: {reason}")
        self.gate_index = gate_index
        self.reason = reason


class UnsupportedForSemanticReduction(ReductionError):
    """Semantic extraction needs a computational-basis circuit."""


class EntangledSpecialization(ReductionError):
    """The specialized qubits do not end in a free-independent constant."""


class NotAPermutation(ReductionError):
    """Synthesis input is not a bijection over a power-of-two domain."""


@dataclass(frozen=True)
class Specialization:
    """Constant-bit assignment for a subset of qubits.

    ``method`` records how a kernel was obtained ("syntactic" or
    "semantic") and is filled in on results.
    """

    assignments: Mapping[int, int]
    method: str | None = None


@dataclass(frozen=True)
class ReducedKernel:
    """A specialized kernel over the free qubits.

    index_map sends old free-qubit indices to their dense new ones;
    final_constants gives the classical output bit of every
    specialized qubit.
    """

    circuit: Circuit
    index_map: dict[int, int]
    final_constants: dict[int, int]
    specialization: Specialization


@dataclass(frozen=True)
class KernelOutcome:
    value: tuple[int, ...]
    kernel: ReducedKernel | None = None
    error: str | None = None


@dataclass(frozen=True)
class ReductionReport:
    outcomes: tuple[KernelOutcome, ...]

    @property
    def kernels(self) -> list[ReducedKernel]:
        return [o.kernel for o in self.outcomes if o.kernel is not None]

    @property
    def ok(self) -> bool:
        return all(o.error is None for o in self.outcomes)


def find_control_only_qubits(c: Circuit) -> set[int]:
    """Qubits that never appear as a gate target: ideal specialization picks."""
    if not is_indexed(c):
        raise ValueError("circuit must be indexed; run resolve_names first")
    targeted = {t.index for g in c.gates for t in g.targets}
    return set(range(c.n_qubits)) - targeted


def _check_assignments(c: Circuit, assignments: Mapping[int, int]) -> None:
    for q, bit in assignments.items():
        if not 0 <= q < c.n_qubits:
            raise ValueError(f"specialized qubit {q} not in circuit of {c.n_qubits}")
        if bit not in (0, 1):
            raise ValueError(f"assignment for qubit {q} must be 0 or 1, got {bit}")


def _free_index_map(n: int, assignments: Mapping[int, int]) -> dict[int, int]:
    free = [q for q in range(n) if q not in assignments]
    return {old: new for new, old in enumerate(free)}


def _kernel_circuit(m: int, gates: Sequence[Gate]) -> Circuit:
    registers = ((("q", m),) if m > 0 else ())
    return Circuit(registers, m, tuple(gates))


def specialize_syntactic(c: Circuit, spec: Specialization) -> ReducedKernel:
    """Constant-propagate the assigned bits through the gate list.

    Raises NotReducible at the first gate whose effect on a specialized
    qubit cannot be evaluated classically.
    """
    if not is_indexed(c):
        raise ValueError("circuit must be indexed; run resolve_names first")
    _check_assignments(c, spec.assignments)
    tracked = dict(spec.assignments)
    index_map = _free_index_map(c.n_qubits, tracked)
    out: list[Gate] = []
    for gi, g in enumerate(c.gates):
        target_idx = [t.index for t in g.targets]
        if any(t in tracked for t in target_idx):
            if g.kind is not GateKind.X:
                raise NotReducible(
                    gi, f"{g.kind.value} gate targets a specialized qubit"
                )
            t = target_idx[0]
            fires = True
            for k in g.controls:
                q = k.qubit.index
                if q not in tracked:
                    raise NotReducible(
                        gi,
                        f"NOT targeting specialized qubit {t} has a control "
                        f"on free qubit {q}",
                    )
                if tracked[q] != (1 if k.positive else 0):
                    fires = False
            if fires:
                tracked[t] ^= 1
            continue
        keep: list[Control] = []
        fires = True
        for k in g.controls:
            q = k.qubit.index
            if q in tracked:
                if tracked[q] != (1 if k.positive else 0):
                    fires = False
                    break
            else:
                keep.append(k)
        if not fires:
            continue
        out.append(
            Gate(
                g.kind,
                tuple(Index(index_map[t]) for t in target_idx),
                tuple(Control(Index(index_map[k.qubit.index]), k.positive) for k in keep),
            )
        )
    m = c.n_qubits - len(tracked)
    kernel = c if not spec.assignments else _kernel_circuit(m, out)
    return ReducedKernel(
        circuit=kernel,
        index_map=index_map,
        final_constants=tracked,
        specialization=replace(spec, method="syntactic"),
    )


def _embed(free_value: int, index_map: dict[int, int], fixed_bits: int) -> int:
    bits = fixed_bits
    for old, new in index_map.items():
        if (free_value >> new) & 1:
            bits |= 1 << old
    return bits


def extract_permutation(
    c: Circuit, spec: Specialization, cap: int = 20
) -> tuple[list[int], dict[int, int]]:
    """Evaluate the free-qubit permutation under a fixed assignment.

    Runs the circuit in the computational basis on every free value and
    requires the specialized qubits to come out the same every time.
    Returns (permutation, final constant bits of the assigned qubits).
    """
    if not is_indexed(c):
        raise ValueError("circuit must be indexed; run resolve_names first")
    _check_assignments(c, spec.assignments)
    m = c.n_qubits - len(spec.assignments)
    if m > cap:
        raise UnsupportedForSemanticReduction(
            f"{m} free qubits exceed the semantic sweep cap of {cap}"
        )
    try:
        step = logic_function(c)
    except NonLogicGate as e:
        raise UnsupportedForSemanticReduction(str(e)) from e
    index_map = _free_index_map(c.n_qubits, spec.assignments)
    fixed_bits = 0
    for q, bit in spec.assignments.items():
        fixed_bits |= bit << q
    assigned = sorted(spec.assignments)
    perm: list[int] = []
    constants: dict[int, int] | None = None
    for v in range(1 << m):
        out_bits = step(_embed(v, index_map, fixed_bits))
        out_free = 0
        for old, new in index_map.items():
            out_free |= ((out_bits >> old) & 1) << new
        out_assigned = {q: (out_bits >> q) & 1 for q in assigned}
        if constants is None:
            constants = out_assigned
        elif constants != out_assigned:
            raise EntangledSpecialization(
                "specialized qubits do not end in a constant state; their "
                f"output differs between free inputs (e.g. at value {v})"
            )
        perm.append(out_free)
    assert constants is not None
    if constants != dict(spec.assignments):
        warnings.warn(
            f"specialized qubits end at {constants}, not at their input "
            f"assignment {dict(spec.assignments)}",
            stacklevel=2,
        )
    return perm, constants


def synthesize_from_permutation(perm: Sequence[int]) -> Circuit:
    """Resynthesize a basis permutation as multi-controlled NOTs.

    Output-side transformation-based method: walk basis values in
    ascending order and append NOT gates that map the current image of
    v onto v without disturbing any already-fixed smaller value (the
    control sets guarantee that); the collected gate list, reversed, is
    the circuit. Gate count is bounded by m * 2**m.
    """
    size = len(perm)
    if size == 0 or size & (size - 1):
        raise NotAPermutation(f"domain size {size} is not a power of two")
    m = size.bit_length() - 1
    if sorted(perm) != list(range(size)):
        raise NotAPermutation("values are not a bijection over the domain")
    f = list(perm)

    def apply_fix(target_bit: int, control_mask: int) -> None:
        flip = 1 << target_bit
        for i in range(size):
            if f[i] & control_mask == control_mask:
                f[i] ^= flip

    fixes: list[tuple[int, int]] = []  # (target bit, positive-control mask)
    for v in range(size):
        y = f[v]
        if y == v:
            continue
        # raise the bits v has and y lacks, controlled on y's current ones
        missing = v & ~y
        while missing:
            j = (missing & -missing).bit_length() - 1
            fixes.append((j, y))
            apply_fix(j, y)
            y = f[v]
            missing = v & ~y
        # then clear the extra bits, controlled on v's ones
        extra = y & ~v
        while extra:
            j = (extra & -extra).bit_length() - 1
            fixes.append((j, v))
            apply_fix(j, v)
            extra &= extra - 1
    gates = []
    for target_bit, mask in reversed(fixes):
        controls = tuple(
            Control(Index(b), True) for b in range(m) if (mask >> b) & 1
        )
        gates.append(Gate(GateKind.X, (Index(target_bit),), controls))
    return Circuit((), m, tuple(gates))


def generate_kernels(
    c: Circuit,
    qubit_indices: Sequence[int],
    values: Sequence[Sequence[int]],
    semantic_cap: int = 20,
) -> ReductionReport:
    """One kernel per assignment value, syntactic first, semantic fallback.

    values[i][j] is the bit assigned to qubit_indices[j]. Failures are
    recorded per value and do not abort the remaining ones.
    """
    if not is_indexed(c):
        raise ValueError("circuit must be indexed; run resolve_names first")
    if len(set(qubit_indices)) != len(qubit_indices):
        raise ValueError("specialized qubits must be pairwise distinct")
    outcomes: list[KernelOutcome] = []
    for value in values:
        bits = tuple(int(b) for b in value)
        if len(bits) != len(qubit_indices):
            outcomes.append(
                KernelOutcome(
                    bits,
                    error=f"value width {len(bits)} != qubit count {len(qubit_indices)}",
                )
            )
            continue
        spec = Specialization(dict(zip(qubit_indices, bits)))
        try:
            outcomes.append(KernelOutcome(bits, kernel=specialize_syntactic(c, spec)))
            continue
        except NotReducible:
            pass
        except (ValueError, ReductionError) as e:
            outcomes.append(KernelOutcome(bits, error=str(e)))
            continue
        try:
            perm, constants = extract_permutation(c, spec, cap=semantic_cap)
            synth = synthesize_from_permutation(perm)
            m = synth.n_qubits
            kernel = ReducedKernel(
                circuit=_kernel_circuit(m, synth.gates),
                index_map=_free_index_map(c.n_qubits, spec.assignments),
                final_constants=constants,
                specialization=replace(spec, method="semantic"),
            )
            outcomes.append(KernelOutcome(bits, kernel=kernel))
        except (ValueError, ReductionError) as e:
            outcomes.append(KernelOutcome(bits, error=str(e)))
    return ReductionReport(tuple(outcomes))


def write_kernels(
    report: ReductionReport, base_name: str, directory: str | Path
) -> dict:
    """Write kernels as ``<base>.k<value>.fqt`` plus a JSON manifest.

    Returns the manifest, which lists value, file, method and the
    specialization bookkeeping for every outcome (including failures).
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest: dict = {"source": base_name, "kernels": []}
    for outcome in report.outcomes:
        value_str = "".join(str(b) for b in outcome.value)
        entry: dict = {"value": value_str}
        if outcome.kernel is None:
            entry["error"] = outcome.error
        else:
            file_name = f"{base_name}.k{value_str}.fqt"
            atomic_write_text(directory / file_name, print_source(outcome.kernel.circuit))
            entry["file"] = file_name
            entry["method"] = outcome.kernel.specialization.method
            entry["final_constants"] = {
                str(q): bit for q, bit in sorted(outcome.kernel.final_constants.items())
            }
            entry["index_map"] = {
                str(old): new for old, new in sorted(outcome.kernel.index_map.items())
            }
        manifest["kernels"].append(entry)
    atomic_write_text(
        directory / f"{base_name}.manifest.json",
        json.dumps(manifest, indent=2) + "\n",
    )
    return manifest
