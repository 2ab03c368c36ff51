"""Model assembly: entangling-layer ansatz, feature encoding, persistence.

A model is (encoding rule, trainable ansatz circuit, readout). The
encoding rule is fixed: qubit q gets a frozen RX with angle x[q mod F]
for F features, so every feature lands at least once and small feature
sets repeat around the register (iris: features 0–3 appear on qubits
0–3 and again on 4–7). Readout is ⟨Z⟩ on the first ``n_classes`` qubits.

Two ansatz families:

* basic entangler (``bel``): one trainable RX per qubit, then the
  circular ring cnot(q, q+1 mod n).
* strongly entangling (``sel``): one trainable three-angle R per qubit,
  then the ring cnot(q, q+r mod n) with per-layer range
  r = (layer mod (n-1)) + 1, which is what keeps the decomposed depth of
  the published 5-layer baselines well under the bel figure.

On disk a model is a circuit text file plus a JSON sidecar (same stem,
``.json``) carrying the encoding spec, readout, normalization bounds and
seeds, so any saved model can be evaluated without its dataset object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .. import circuit as circ
from ..circuit import Circuit, Op
from ..gates import GateKind
from .data import Dataset

SIDECAR_FORMAT = "pqc-forge-model"
SIDECAR_VERSION = 1


class LayerKind(Enum):
    BASIC_ENTANGLER = "bel"
    STRONGLY_ENTANGLING = "sel"


@dataclass(frozen=True)
class LayerSpec:
    kind: LayerKind
    layers: int
    n_qubits: int

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")


def _ring(layer: int, n: int, kind: LayerKind) -> list[tuple[int, int]]:
    if n < 2:
        return []
    if kind is LayerKind.STRONGLY_ENTANGLING:
        r = (layer % (n - 1)) + 1
    else:
        r = 1
    return [(q, (q + r) % n) for q in range(n)]


def build_ansatz(spec: LayerSpec, seed: int = 0) -> Circuit:
    """Layered ansatz with angles drawn uniform in (-π, π) from the seed."""
    rng = np.random.default_rng(seed)
    ops: list[Op] = []
    for layer in range(spec.layers):
        for q in range(spec.n_qubits):
            if spec.kind is LayerKind.BASIC_ENTANGLER:
                angle = float(rng.uniform(-np.pi, np.pi))
                ops.append(Op(GateKind.RX, (q,), (angle,), trainable=True))
            else:
                angles = tuple(rng.uniform(-np.pi, np.pi, size=3).tolist())
                ops.append(Op(GateKind.R3, (q,), angles, trainable=True))
        for control, target in _ring(layer, spec.n_qubits, spec.kind):
            ops.append(Op(GateKind.CNOT, (control, target)))
    return Circuit(spec.n_qubits, tuple(ops))


@dataclass
class Model:
    ansatz: Circuit
    n_classes: int
    feature_count: int
    layer_kind: str
    layers: int
    lo: np.ndarray  # normalization bounds, copied from the training dataset
    hi: np.ndarray
    dataset_name: str
    seed: int
    split_seed: int = 0

    @property
    def n_qubits(self) -> int:
        return self.ansatz.n_qubits

    @property
    def readout_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_classes))

    def with_ansatz(self, ansatz: Circuit) -> "Model":
        return replace(self, ansatz=ansatz)


def build_model(spec: LayerSpec, dataset: Dataset, seed: int = 0) -> Model:
    if dataset.n_classes > spec.n_qubits:
        raise ValueError(
            f"{dataset.n_classes} classes need at least that many qubits, "
            f"got {spec.n_qubits}"
        )
    return Model(
        ansatz=build_ansatz(spec, seed),
        n_classes=dataset.n_classes,
        feature_count=dataset.n_features,
        layer_kind=spec.kind.value,
        layers=spec.layers,
        lo=dataset.lo.copy(),
        hi=dataset.hi.copy(),
        dataset_name=dataset.name,
        seed=seed,
        split_seed=dataset.seed,
    )


def encoding_ops(x: np.ndarray, n_qubits: int, feature_count: int) -> list[Op]:
    """Frozen RX encoding gates for one sample (qubit q ← x[q mod F])."""
    return [
        Op(GateKind.RX, (q,), (float(x[q % feature_count]),), trainable=False)
        for q in range(n_qubits)
    ]


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def save_model(model: Model, path, extra: dict | None = None) -> None:
    """Write ``path`` (circuit text) and its JSON sidecar."""
    path = Path(path)
    circ.save(model.ansatz, path)
    meta = {
        "format": SIDECAR_FORMAT,
        "version": SIDECAR_VERSION,
        "dataset": model.dataset_name,
        "n_qubits": model.n_qubits,
        "n_classes": model.n_classes,
        "feature_count": model.feature_count,
        "readout_qubits": list(model.readout_qubits),
        "encoding": {"kind": "cyclic-rx"},
        "normalization": {"lo": model.lo.tolist(), "hi": model.hi.tolist()},
        "layer": {"kind": model.layer_kind, "layers": model.layers},
        "seed": model.seed,
        "split_seed": model.split_seed,
    }
    if extra:
        meta.update(extra)
    with open(sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Model:
    """Read a circuit file plus sidecar back into a Model."""
    path = Path(path)
    ansatz = circ.load(path)
    side = sidecar_path(path)
    try:
        with open(side, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except OSError as exc:
        raise FileNotFoundError(f"missing model sidecar {side}: {exc}") from exc
    if meta.get("format") != SIDECAR_FORMAT:
        raise ValueError(f"{side} is not a {SIDECAR_FORMAT} sidecar")
    return Model(
        ansatz=ansatz,
        n_classes=int(meta["n_classes"]),
        feature_count=int(meta["feature_count"]),
        layer_kind=meta["layer"]["kind"],
        layers=int(meta["layer"]["layers"]),
        lo=np.asarray(meta["normalization"]["lo"], dtype=float),
        hi=np.asarray(meta["normalization"]["hi"], dtype=float),
        dataset_name=meta["dataset"],
        seed=int(meta["seed"]),
        split_seed=int(meta.get("split_seed", 0)),
    )
