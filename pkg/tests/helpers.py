"""Shared builders for the test suite."""

import numpy as np

from pqc_forge.circuit import Circuit, Op
from pqc_forge.gates import ALPHABET, GateKind, unitary

FIXED_1Q = tuple(k for k in ALPHABET if k is not GateKind.ID)
ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)


def random_circuit(n_qubits, n_ops, rng, p_cnot=0.3, p_rotation=0.4):
    """Mixed random circuit over the catalog, CNOTs, and trainable rotations."""
    ops = []
    for _ in range(n_ops):
        r = rng.random()
        if r < p_cnot and n_qubits >= 2:
            q1, q2 = rng.choice(n_qubits, size=2, replace=False)
            ops.append(Op(GateKind.CNOT, (int(q1), int(q2))))
        elif r < p_cnot + p_rotation:
            kind = ROTATIONS[rng.integers(len(ROTATIONS))]
            angle = float(rng.uniform(-np.pi, np.pi))
            ops.append(Op(kind, (int(rng.integers(n_qubits)),), (angle,), True))
        else:
            kind = FIXED_1Q[rng.integers(len(FIXED_1Q))]
            ops.append(Op(kind, (int(rng.integers(n_qubits)),)))
    return Circuit(n_qubits, tuple(ops))


def random_1q_target(rng, max_gates=6):
    """2×2 unitary: product of a few catalog gates and random rotations."""
    u = np.eye(2, dtype=complex)
    for _ in range(int(rng.integers(1, max_gates + 1))):
        if rng.random() < 0.5:
            u = unitary(ALPHABET[rng.integers(len(ALPHABET))]) @ u
        else:
            kind = ROTATIONS[rng.integers(len(ROTATIONS))]
            u = unitary(kind, (float(rng.uniform(-np.pi, np.pi)),)) @ u
    return u


def sequence_product(seq):
    """Product unitary of (kind, angles) or bare-kind items, circuit order."""
    u = np.eye(2, dtype=complex)
    for item in seq:
        kind, angles = item if isinstance(item, tuple) else (item, ())
        u = unitary(kind, tuple(angles)) @ u
    return u
