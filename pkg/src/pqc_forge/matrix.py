"""Dense complex matrix arithmetic and the unitary overlap distance.

Matrices are square ``complex128`` numpy arrays whose dimension is a power
of two (2 for single-qubit gates, 2**n for embedded circuits). Everything
here is a pure function; nothing mutates its inputs.

The distance between two unitaries U (target) and V (candidate) is built
from the trace overlap Tr(V†U). For general unitaries that trace is
complex, so two reductions to a real number are offered:

* ``PHASE_INVARIANT`` (default): 1 - |Tr(V†U)| / dim, in [0, 1]. Blind to
  a global phase e^{ia} on either argument, which is physically
  unobservable.
* ``LITERAL_REAL``: 1 - Re(Tr(V†U)) / dim, in [0, 2]. The formula taken
  at face value, sensitive to global phase.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

UNITARY_ATOL = 1e-12


class DistanceMetric(Enum):
    """Reduction of the complex trace overlap to a real distance."""

    LITERAL_REAL = "literal-real"
    PHASE_INVARIANT = "phase-invariant"


def _require_square(m: np.ndarray, name: str) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")


def _require_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def is_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    """True when M†M = I entry-wise within ``atol``."""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(m.conj().T @ m - eye)) <= atol)


def check_unitary(m: np.ndarray, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Return ``m`` unchanged, raising ValueError when it is not unitary."""
    _require_square(m, "matrix")
    off = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if off > atol:
        raise ValueError(f"matrix is not unitary: max |U†U - I| = {off:.3e}")
    return m


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a·b of two equal-dimension square matrices."""
    _require_square(a, "a")
    _require_square(b, "b")
    _require_same_dim(a, b)
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product a ⊗ b; result dimension is dim(a)·dim(b)."""
    _require_square(a, "a")
    _require_square(b, "b")
    return np.kron(a, b)


def trace_overlap(u: np.ndarray, v: np.ndarray) -> complex:
    """Tr(V†U), the (complex) overlap between target u and candidate v."""
    _require_square(u, "u")
    _require_square(v, "v")
    _require_same_dim(u, v)
    # Tr(V†U) = sum_ij conj(V_ij) U_ij, cheaper than forming V†U.
    return complex(np.sum(v.conj() * u))


def distance(
    u: np.ndarray,
    v: np.ndarray,
    metric: DistanceMetric = DistanceMetric.PHASE_INVARIANT,
) -> float:
    """Distance 1 - Tr(V†U)/dim between target ``u`` and candidate ``v``.

    ``PHASE_INVARIANT`` uses |Tr|, ``LITERAL_REAL`` uses Re(Tr). Either way
    the result is 0 when v equals u (up to global phase for the former).
    """
    tr = trace_overlap(u, v)
    dim = u.shape[0]
    if metric is DistanceMetric.LITERAL_REAL:
        d = 1.0 - tr.real / dim
    else:
        d = 1.0 - abs(tr) / dim
    # |Tr| <= dim exactly; clamp the float noise below zero.
    return max(0.0, d)
