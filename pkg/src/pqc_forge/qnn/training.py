"""Forward pass, parameter-shift gradients, and Adam training.

The forward pass runs encoding + ansatz on |0...0⟩ exactly; logits are
⟨Z⟩ on the readout qubits and class probabilities are their softmax.
Loss is softmax cross-entropy averaged over the batch.

Gradients use the parameter-shift rule: for every trainable angle θ
(rx/ry/rz, and each angle of a three-angle r gate, all of which enter as
exp(-iθP/2) factors),

    d⟨Z⟩/dθ = (⟨Z⟩(θ + π/2) - ⟨Z⟩(θ - π/2)) / 2,

chained through the softmax cross-entropy analytically via
dL/dlogit = softmax - onehot at the unshifted point. The implementation
caches the batch state just before every trainable op so each shift only
re-simulates the tail of the circuit; results are identical to the naive
two-full-circuits-per-parameter evaluation and are checked against
finite differences in the test suite.

Everything is deterministic given the config seed: batches are shuffled
by one generator consumed in a fixed order, and gradient reductions are
plain numpy sums in sample order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import gates, sim
from ..circuit import Circuit, Op
from ..gates import GateKind
from .data import Dataset
from .model import Model

TWO_PI = 2.0 * math.pi
SHIFT = math.pi / 2.0


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")


@dataclass
class History:
    epochs: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"epochs": self.epochs, "warnings": self.warnings}


class Adam:
    """Plain Adam with bias correction, one slot per trainable angle."""

    def __init__(self, n_params: int, cfg: TrainConfig):
        self.cfg = cfg
        self.m = np.zeros(n_params)
        self.v = np.zeros(n_params)
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        c = self.cfg
        self.t += 1
        self.m = c.beta1 * self.m + (1 - c.beta1) * grad
        self.v = c.beta2 * self.v + (1 - c.beta2) * grad**2
        m_hat = self.m / (1 - c.beta1**self.t)
        v_hat = self.v / (1 - c.beta2**self.t)
        return params - c.learning_rate * m_hat / (np.sqrt(v_hat) + c.eps)


def trainable_slots(c: Circuit) -> list[tuple[int, int]]:
    """(op index, angle index) for every trainable angle, in circuit order."""
    return [
        (i, a)
        for i, op in enumerate(c.ops)
        for a in range(len(op.angles))
        if op.trainable
    ]


def get_params(c: Circuit) -> np.ndarray:
    return np.array([c.ops[i].angles[a] for i, a in trainable_slots(c)])


def set_params(c: Circuit, values: np.ndarray) -> Circuit:
    """Circuit with trainable angles replaced by ``values`` (slot order)."""
    slots = trainable_slots(c)
    if len(values) != len(slots):
        raise ValueError(f"expected {len(slots)} values, got {len(values)}")
    by_op: dict[int, dict[int, float]] = {}
    for (i, a), v in zip(slots, values):
        by_op.setdefault(i, {})[a] = float(v)
    ops = list(c.ops)
    for i, updates in by_op.items():
        angles = tuple(
            updates.get(a, ops[i].angles[a]) for a in range(len(ops[i].angles))
        )
        ops[i] = Op(ops[i].kind, ops[i].qubits, angles, ops[i].trainable)
    return c.with_ops(ops)


def _wrap_angles(values: np.ndarray) -> np.ndarray:
    """Map angles into (-2π, 2π]; rotations are 4π-periodic so this is exact."""
    return -((-values + TWO_PI) % (2 * TWO_PI) - TWO_PI)


def encode_batch(model: Model, x: np.ndarray) -> np.ndarray:
    """States after the per-sample RX feature encoding, shape (batch, 2**n)."""
    x = np.atleast_2d(x)
    states = np.zeros((x.shape[0], 1 << model.n_qubits), dtype=complex)
    states[:, 0] = 1.0
    for q in range(model.n_qubits):
        states = sim.apply_rx_batch(states, q, x[:, q % model.feature_count])
    return states


def _logits_from_states(model: Model, states: np.ndarray) -> np.ndarray:
    cols = [sim.expect_z_batch(states, q) for q in model.readout_qubits]
    return np.stack(cols, axis=1)


def logits_batch(model: Model, x: np.ndarray) -> np.ndarray:
    """⟨Z⟩ readouts for a batch of raw (already scaled) feature rows."""
    states = sim.run_batch(model.ansatz, encode_batch(model, x))
    return _logits_from_states(model, states)


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def forward(model: Model, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(logits, probabilities) for a single feature vector."""
    z = logits_batch(model, np.asarray(x, dtype=float)[None, :])[0]
    return z, softmax(z)


def predict(model: Model, x: np.ndarray) -> np.ndarray:
    """Class ids for a batch of feature rows."""
    return np.argmax(logits_batch(model, x), axis=1)


def accuracy(model: Model, x: np.ndarray, y: np.ndarray) -> float:
    if len(y) == 0:
        return float("nan")
    return float(np.mean(predict(model, x) == y))


def _cross_entropy(probs: np.ndarray, y: np.ndarray) -> float:
    picked = probs[np.arange(len(y)), y]
    return float(-np.log(np.maximum(picked, 1e-300)).mean())


def _gate_matrix(op: Op, angles=None) -> np.ndarray | None:
    """2×2 matrix of a 1q op (None for cnot), with optional angle override."""
    if op.kind is GateKind.CNOT:
        return None
    return gates.unitary(op.kind, op.angles if angles is None else angles)


def loss_and_gradient(
    model: Model, x: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray]:
    """Batch cross-entropy and its parameter-shift gradient.

    Returns the loss at the current angles and a vector with one entry
    per trainable slot of the ansatz (empty for a fully frozen circuit).
    The two ±π/2 evaluations per parameter restart from a cached state
    just before the shifted op and ride one stacked array through the
    tail of the circuit, which changes nothing numerically.
    """
    ansatz = model.ansatz
    slots = trainable_slots(ansatz)
    n = model.n_qubits
    ops = ansatz.ops
    mats = [_gate_matrix(op) for op in ops]

    # base pass, snapshotting the batch state before every trainable op
    trainable_ops = {i for i, _ in slots}
    states = encode_batch(model, x)
    cache: dict[int, np.ndarray] = {}
    for i, op in enumerate(ops):
        if i in trainable_ops:
            cache[i] = states
        if mats[i] is None:
            states = sim.apply_cnot_batch(states, *op.qubits)
        else:
            states = sim.apply_1q_batch(states, mats[i], op.qubits[0])
    logits = _logits_from_states(model, states)
    probs = softmax(logits)
    loss = _cross_entropy(probs, y)
    if not slots:
        return loss, np.zeros(0)

    # dL/dlogit at the unshifted point; the batch mean is folded in here
    dl_dz = probs.copy()
    dl_dz[np.arange(len(y)), y] -= 1.0
    dl_dz /= len(y)

    batch = len(y)
    grad = np.zeros(len(slots))
    for s, (i, a) in enumerate(slots):
        op = ops[i]
        plus = list(op.angles)
        plus[a] += SHIFT
        minus = list(op.angles)
        minus[a] -= SHIFT
        q = op.qubits[0]
        stacked = np.concatenate(
            [
                sim.apply_1q_batch(cache[i], _gate_matrix(op, tuple(plus)), q),
                sim.apply_1q_batch(cache[i], _gate_matrix(op, tuple(minus)), q),
            ]
        )
        for j in range(i + 1, len(ops)):
            if mats[j] is None:
                stacked = sim.apply_cnot_batch(stacked, *ops[j].qubits)
            else:
                stacked = sim.apply_1q_batch(stacked, mats[j], ops[j].qubits[0])
        z = _logits_from_states(model, stacked)
        dz_dtheta = (z[:batch] - z[batch:]) / 2.0
        grad[s] = float(np.sum(dl_dz * dz_dtheta))
    return loss, grad


def gradient(model: Model, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Parameter-shift gradient of the batch cross-entropy."""
    return loss_and_gradient(model, x, y)[1]


def train(model: Model, dataset: Dataset, cfg: TrainConfig) -> tuple[Model, History]:
    """Mini-batch Adam on the train split; returns a new model + history."""
    history = History()
    slots = trainable_slots(model.ansatz)
    if not slots:
        history.warnings.append(
            "no trainable parameters left; returning the model unchanged"
        )
        return model, history

    rng = np.random.default_rng(cfg.seed)
    params = get_params(model.ansatz)
    adam = Adam(len(params), cfg)
    train_x, train_y = dataset.train_x, dataset.train_y
    test_x, test_y = dataset.test_x, dataset.test_y

    current = model
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(len(train_x))
        losses = []
        for start in range(0, len(order), cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, grad = loss_and_gradient(current, train_x[batch], train_y[batch])
            losses.append(loss)
            params = _wrap_angles(adam.step(params, grad))
            current = current.with_ansatz(set_params(current.ansatz, params))
        history.epochs.append(
            {
                "epoch": epoch,
                "train_loss": float(np.mean(losses)),
                "test_accuracy": accuracy(current, test_x, test_y),
            }
        )
    return current, history


def retrain(model: Model, dataset: Dataset, cfg: TrainConfig) -> tuple[Model, History]:
    """Same loop as ``train``; meant for the shorter post-optimization run.

    A model whose rotations were all replaced has nothing to train; it is
    returned unchanged with a warning record instead of an error.
    """
    return train(model, dataset, cfg)


def evaluate(model: Model, dataset: Dataset) -> dict:
    return {
        "train_accuracy": accuracy(model, dataset.train_x, dataset.train_y),
        "test_accuracy": accuracy(model, dataset.test_x, dataset.test_y),
    }
