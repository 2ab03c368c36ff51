"""Gate catalog: unitaries, multi-qubit embedding, and basis decomposition.

Conventions fixed here and relied on everywhere else:

* Rotations use the e^{-i θ P / 2} sign, so
  RX(θ) = cos(θ/2)·I - i·sin(θ/2)·X (and likewise RY, RZ), giving
  Tr(RX(θ)) = 2·cos(θ/2).
* The three-angle rotation is R(φ, θ, ω) = RZ(ω)·RY(θ)·RZ(φ) as a matrix
  product, i.e. RZ(φ) acts first in circuit order.
* Qubit 0 is the most significant bit of the state index: for n qubits,
  basis state |q0 q1 ... q_{n-1}⟩ has index q0·2^{n-1} + ... + q_{n-1}.

The search alphabet is the 11 fixed single-qubit gates, in this order:
x, y, z, h, s, t, id, sx, sdg, sxdg, tdg. The order matters: it breaks
ties deterministically in the greedy search.

``decompose_to_basis`` rewrites any catalog gate over the hardware basis
{cx, id, rz, sx, x}, used for depth / gate-count accounting. Generic
single-qubit gates take the 5-element rz·sx·rz·sx·rz Euler form; exact
special cases (phase gates, h, sxdg) use shorter table entries. Every
table entry is checked against the gate unitary by the test suite, up to
global phase, at 1e-9.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .matrix import check_unitary

MAX_EMBED_QUBITS = 12


class GateKind(Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    T = "t"
    ID = "id"
    SX = "sx"
    SDG = "sdg"
    SXDG = "sxdg"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    R3 = "r"
    CNOT = "cnot"


# The paper-order search alphabet of fixed single-qubit gates.
ALPHABET: tuple[GateKind, ...] = (
    GateKind.X,
    GateKind.Y,
    GateKind.Z,
    GateKind.H,
    GateKind.S,
    GateKind.T,
    GateKind.ID,
    GateKind.SX,
    GateKind.SDG,
    GateKind.SXDG,
    GateKind.TDG,
)

ALPHABET_INDEX: dict[GateKind, int] = {g: i for i, g in enumerate(ALPHABET)}

ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.R3})

N_ANGLES: dict[GateKind, int] = {kind: 0 for kind in GateKind}
N_ANGLES.update({GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.R3: 3})

_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED: dict[GateKind, np.ndarray] = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.ID: np.eye(2, dtype=complex),
    GateKind.SX: np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.SXDG: np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex) / 2,
    GateKind.TDG: np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    u = np.empty((2, 2), dtype=complex)
    u[0, 0] = c
    u[0, 1] = u[1, 0] = -1j * s
    u[1, 1] = c
    return u


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    u = np.empty((2, 2), dtype=complex)
    u[0, 0] = c
    u[0, 1] = -s
    u[1, 0] = s
    u[1, 1] = c
    return u


def rz(theta: float) -> np.ndarray:
    u = np.zeros((2, 2), dtype=complex)
    u[0, 0] = complex(math.cos(theta / 2), -math.sin(theta / 2))
    u[1, 1] = u[0, 0].conjugate()
    return u


def unitary(kind: GateKind, angles: tuple[float, ...] = ()) -> np.ndarray:
    """2×2 unitary of a single-qubit gate. CNOT must go through ``embed``."""
    if kind is GateKind.CNOT:
        raise ValueError("cnot has no 2x2 unitary; use embed() for two-qubit gates")
    if len(angles) != N_ANGLES[kind]:
        raise ValueError(
            f"{kind.value} takes {N_ANGLES[kind]} angle(s), got {len(angles)}"
        )
    if kind in _FIXED:
        return _FIXED[kind].copy()
    if kind is GateKind.RX:
        return rx(angles[0])
    if kind is GateKind.RY:
        return ry(angles[0])
    if kind is GateKind.RZ:
        return rz(angles[0])
    # R(φ, θ, ω) = RZ(ω)·RY(θ)·RZ(φ)
    phi, theta, omega = angles
    return rz(omega) @ ry(theta) @ rz(phi)


def sequence_unitary(seq) -> np.ndarray:
    """Product unitary of single-qubit gates listed in circuit order.

    Items are either a bare ``GateKind`` or a ``(GateKind, angles)`` pair.
    The first item acts first, so it sits rightmost in the product.
    """
    u = np.eye(2, dtype=complex)
    for item in seq:
        kind, angles = item if isinstance(item, tuple) else (item, ())
        u = unitary(kind, tuple(angles)) @ u
    return u


def _bit(index: int, q: int, n: int) -> int:
    return (index >> (n - 1 - q)) & 1


def embed(
    kind: GateKind,
    qubits: tuple[int, ...] | list[int],
    n: int,
    angles: tuple[float, ...] = (),
) -> np.ndarray:
    """2ⁿ×2ⁿ unitary acting as the gate on ``qubits``, identity elsewhere."""
    if n < 1 or n > MAX_EMBED_QUBITS:
        raise ValueError(f"qubit count {n} outside 1..{MAX_EMBED_QUBITS}")
    qubits = tuple(qubits)
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices {qubits}")
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    if kind is GateKind.CNOT:
        if len(qubits) != 2:
            raise ValueError("cnot takes exactly 2 qubits")
        control, target = qubits
        dim = 1 << n
        u = np.zeros((dim, dim), dtype=complex)
        flip = 1 << (n - 1 - target)
        for i in range(dim):
            j = i ^ flip if _bit(i, control, n) else i
            u[j, i] = 1.0
        return u
    if len(qubits) != 1:
        raise ValueError(f"{kind.value} takes exactly 1 qubit")
    (q,) = qubits
    left = np.eye(1 << q, dtype=complex)
    right = np.eye(1 << (n - 1 - q), dtype=complex)
    return np.kron(left, np.kron(unitary(kind, angles), right))


def euler_zsxz(u: np.ndarray) -> tuple[float, float, float]:
    """Angles (α, β, γ) with RZ(α)·SX·RZ(β)·SX·RZ(γ) equal to u up to phase.

    Goes through the ZYZ form u ~ RZ(φ)·RY(θ)·RZ(λ) and the identity
    RY(θ) ~ RZ(π)·SX·RZ(θ+π)·SX, giving α = φ+π, β = θ+π, γ = λ.
    """
    check_unitary(u, atol=1e-9)
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    m = u / np.sqrt(det)  # SU(2) up to sign; sign is a global phase
    theta = 2.0 * math.atan2(abs(m[1, 0]), abs(m[0, 0]))
    if abs(m[0, 0]) < 1e-12:  # pure off-diagonal: only φ-λ is determined
        plus = 0.0
        minus = 2.0 * np.angle(m[1, 0])
    elif abs(m[1, 0]) < 1e-12:  # diagonal: only φ+λ is determined
        plus = 2.0 * np.angle(m[1, 1])
        minus = 0.0
    else:
        plus = 2.0 * np.angle(m[1, 1])
        minus = 2.0 * np.angle(m[1, 0])
    phi = (plus + minus) / 2.0
    lam = (plus - minus) / 2.0
    return phi + math.pi, theta + math.pi, lam


BasisGate = tuple[GateKind, tuple[float, ...]]

# Exact rewritings over {cx, id, rz, sx, x}, valid up to global phase.
# Sequences are in circuit order (first gate acts first). Verified against
# the generic Euler form by the unitary-equivalence tests.
_PI = math.pi
_TABLE: dict[GateKind, tuple[BasisGate, ...]] = {
    GateKind.ID: (),
    GateKind.X: ((GateKind.X, ()),),
    GateKind.SX: ((GateKind.SX, ()),),
    GateKind.Z: ((GateKind.RZ, (_PI,)),),
    GateKind.S: ((GateKind.RZ, (_PI / 2,)),),
    GateKind.SDG: ((GateKind.RZ, (-_PI / 2,)),),
    GateKind.T: ((GateKind.RZ, (_PI / 4,)),),
    GateKind.TDG: ((GateKind.RZ, (-_PI / 4,)),),
    GateKind.H: (
        (GateKind.RZ, (_PI / 2,)),
        (GateKind.SX, ()),
        (GateKind.RZ, (_PI / 2,)),
    ),
    GateKind.SXDG: (
        (GateKind.RZ, (_PI,)),
        (GateKind.SX, ()),
        (GateKind.RZ, (_PI,)),
    ),
}


def decompose_to_basis(
    kind: GateKind, angles: tuple[float, ...] = ()
) -> list[BasisGate]:
    """Basis-gate sequence for one catalog gate, in circuit order.

    cx, x, sx pass through; rz keeps its angle; id vanishes; exact phase
    gates shorten to a single rz; everything else (rx, ry, r, y) gets the
    generic 5-element Euler form. Lengths are what the depth / gate-count
    metrics count.
    """
    if kind is GateKind.CNOT:
        return [(GateKind.CNOT, ())]
    if kind is GateKind.RZ:
        return [(GateKind.RZ, (angles[0],))]
    if kind in _TABLE:
        return list(_TABLE[kind])
    alpha, beta, gamma = euler_zsxz(unitary(kind, angles))
    return [
        (GateKind.RZ, (gamma,)),
        (GateKind.SX, ()),
        (GateKind.RZ, (beta,)),
        (GateKind.SX, ()),
        (GateKind.RZ, (alpha,)),
    ]
