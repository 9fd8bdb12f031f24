"""Shared random-circuit generators and independent oracles.

The oracles here deliberately avoid the code paths they are used to
check: the dense matrix oracle enumerates basis columns instead of
strided pairs, and the arithmetic oracles are plain Python integers.
"""
from __future__ import annotations

import random

import numpy as np

from qforge.ir import Circuit, Control, Gate, GateKind, Index, Named, new_circuit
from qforge.statevector import GATE_MATRICES

ALL_KINDS = list(GateKind)
NON_SWAP_KINDS = [k for k in ALL_KINDS if k is not GateKind.SWAP]


def random_indexed_circuit(
    rng: random.Random,
    n_qubits: int,
    n_gates: int,
    kinds=ALL_KINDS,
    max_controls: int = 3,
    p_negative: float = 0.3,
) -> Circuit:
    gates = []
    for _ in range(n_gates):
        kind = rng.choice(kinds)
        if kind is GateKind.SWAP and n_qubits < 2:
            kind = GateKind.X
        n_targets = 2 if kind is GateKind.SWAP else 1
        want = n_targets + rng.randint(0, max_controls)
        qs = rng.sample(range(n_qubits), min(n_qubits, want))
        targets = tuple(Index(q) for q in qs[:n_targets])
        controls = tuple(
            Control(Index(q), rng.random() >= p_negative) for q in qs[n_targets:]
        )
        gates.append(Gate(kind, targets, controls))
    return Circuit((), n_qubits, tuple(gates))


def random_x_circuit(
    rng: random.Random,
    n_qubits: int,
    n_gates: int,
    max_controls: int = 3,
    p_negative: float = 0.3,
) -> Circuit:
    return random_indexed_circuit(
        rng, n_qubits, n_gates, kinds=[GateKind.X], max_controls=max_controls,
        p_negative=p_negative,
    )


_LABELS = ["a", "b", "c", "r", "q", "work"]


def random_named_circuit(
    rng: random.Random,
    max_registers: int = 3,
    max_size: int = 4,
    max_gates: int = 50,
) -> Circuit:
    labels = rng.sample(_LABELS, rng.randint(1, max_registers))
    registers = [(label, rng.randint(1, max_size)) for label in labels]
    pool = [Named(label, i) for label, size in registers for i in range(size)]
    gates = []
    for _ in range(rng.randint(0, max_gates)):
        kind = rng.choice(ALL_KINDS)
        if kind is GateKind.SWAP and len(pool) < 2:
            kind = GateKind.X
        n_targets = 2 if kind is GateKind.SWAP else 1
        want = n_targets + rng.randint(0, 3)
        refs = rng.sample(pool, min(len(pool), want))
        targets = tuple(refs[:n_targets])
        controls = tuple(
            Control(ref, rng.random() >= 0.3) for ref in refs[n_targets:]
        )
        gates.append(Gate(kind, targets, controls))
    return new_circuit(*registers) + Circuit((), 0, tuple(gates))


def dense_gate_matrix(g: Gate, n: int) -> np.ndarray:
    """Full 2**n matrix of one gate, built column by column."""
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        satisfied = all(
            ((j >> k.qubit.index) & 1) == (1 if k.positive else 0)
            for k in g.controls
        )
        if not satisfied:
            m[j, j] = 1.0
            continue
        if g.kind is GateKind.SWAP:
            p = g.targets[0].index
            q = g.targets[1].index
            i = j
            if ((j >> p) ^ (j >> q)) & 1:
                i = j ^ ((1 << p) | (1 << q))
            m[i, j] = 1.0
        else:
            u = GATE_MATRICES[g.kind]
            t = g.targets[0].index
            b = (j >> t) & 1
            m[j & ~(1 << t), j] = u[0, b]
            m[j | (1 << t), j] = u[1, b]
    return m


def dense_unitary(c: Circuit) -> np.ndarray:
    """Dense product of the whole circuit; independent of the simulator."""
    u = np.eye(1 << c.n_qubits, dtype=complex)
    for g in c.gates:
        u = dense_gate_matrix(g, c.n_qubits) @ u
    return u


def norm(v: np.ndarray) -> float:
    return float(np.sqrt(np.sum(v.real**2 + v.imag**2)))
