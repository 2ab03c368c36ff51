"""pqc-forge command line: approximate, optimize, measure, train, evaluate.

Every command is a thin adapter over one library operation. Reports are
JSON, tables are CSV; each output file embeds a run manifest (command,
resolved flags, seeds, version, timestamp) or gets one written beside it,
so any artifact can be traced back to the exact invocation. Seeds default
to 0 (or the PQC_FORGE_SEED environment variable), never to entropy.

Exit codes: 0 success, 1 evaluation/input failure, 2 usage error.
"""

# Tiny 2xN gate kernels gain nothing from BLAS threads and lose badly to
# thread churn; pin before numpy loads (no effect if it is already loaded).
import os

os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

import csv
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__, circuit as circ, qnn
from .gates import GateKind, unitary
from .greedy import GreedyParams, exhaustive_oracle, param_gate_transform
from .matrix import DistanceMetric
from .optimizer import OptimizeConfig, OptimizeMode, optimize, sweep
from .qnn.model import sidecar_path

_METRICS = {m.value: m for m in DistanceMetric}
_MODES = {m.value: m for m in OptimizeMode}
_LAYER_KINDS = {k.value: k for k in qnn.LayerKind}


def _env_seed() -> int:
    raw = os.environ.get("PQC_FORGE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"PQC_FORGE_SEED must be an integer, got {raw!r}")


def _resolve_seed(seed: int | None) -> int:
    return _env_seed() if seed is None else seed


def _manifest(command: str, flags: dict, seed: int) -> dict:
    return {
        "command": command,
        "flags": {k: v for k, v in flags.items() if v is not None},
        "seed": seed,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_csv(path, rows: list[dict], manifest: dict) -> None:
    fields = list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    _write_json(Path(str(path) + ".manifest.json"), manifest)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_circuit(path) -> circ.Circuit:
    try:
        return circ.load(path)
    except (OSError, ValueError) as exc:
        _fail(f"cannot load circuit {path}: {exc}")


def _load_dataset(name, path, seed):
    try:
        return qnn.load_dataset(name, path=path, seed=seed)
    except (OSError, ValueError) as exc:
        _fail(f"cannot load dataset {name}: {exc}")


def _load_model(path):
    try:
        return qnn.load_model(path)
    except (OSError, ValueError) as exc:
        _fail(f"cannot load model {path}: {exc}")


@click.group()
@click.version_option(__version__, prog_name="pqc-forge")
def main():
    """Greedy non-parametric optimization of parametric quantum circuits."""


@main.command("approx-gate")
@click.option("--gate", type=click.Choice(["rx", "ry", "rz"]), required=True)
@click.option("--angle", type=float, default=None, help="Rotation angle in radians.")
@click.option(
    "--angle-grid",
    nargs=3,
    type=float,
    default=None,
    help="START STOP STEP grid of angles (inclusive of STOP).",
)
@click.option("--iters", type=int, default=20, show_default=True)
@click.option("--top-k", type=int, default=4, show_default=True)
@click.option(
    "--metric",
    type=click.Choice(sorted(_METRICS)),
    default=DistanceMetric.PHASE_INVARIANT.value,
    show_default=True,
)
@click.option("--seed", type=int, default=None, help="Default: $PQC_FORGE_SEED or 0.")
@click.option("--restarts", type=int, default=8, show_default=True)
def cmd_approx_gate(gate, angle, angle_grid, iters, top_k, metric, seed, restarts):
    """Approximate one rotation gate by fixed gates; report the distances."""
    if (angle is None) == (angle_grid is None):
        raise click.UsageError("give exactly one of --angle or --angle-grid")
    if restarts < 1:
        raise click.UsageError("--restarts must be >= 1")
    seed = _resolve_seed(seed)
    params = GreedyParams(
        iterations=iters, top_k=top_k, metric=_METRICS[metric], seed=seed,
        restarts=restarts,
    )
    kind = GateKind(gate)
    if angle_grid is not None:
        start, stop, step = angle_grid
        if step <= 0:
            raise click.UsageError("--angle-grid STEP must be > 0")
        angles = list(np.arange(start, stop + step / 2, step))
    else:
        angles = [angle]

    rows = []
    for theta in angles:
        target = unitary(kind, (float(theta),))
        best = param_gate_transform(target, params)
        _, oracle_dist = exhaustive_oracle(target, max_len=4, metric=params.metric)
        rows.append(
            {
                "angle": float(theta),
                "sequence": " ".join(best.mnemonics()) or "-",
                "final_dist": best.final_dist,
                "oracle_dist_len4": oracle_dist,
            }
        )

    if len(rows) == 1:
        row = rows[0]
        click.echo(f"gate:        {gate}({row['angle']:.10g})")
        click.echo(f"sequence:    {row['sequence']}")
        click.echo(f"final dist:  {row['final_dist']:.6e}")
        click.echo(f"oracle dist: {row['oracle_dist_len4']:.6e} (length <= 4)")
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


@main.command("metrics")
@click.option("--in", "in_path", type=click.Path(), required=True)
@click.option("--json", "json_path", type=click.Path(), default=None)
def cmd_metrics(in_path, json_path):
    """Depth / gate-count / parameter metrics of a circuit file."""
    c = _load_circuit(in_path)
    m = circ.metrics(c)
    click.echo(f"logical depth:         {m.logical_depth}")
    click.echo(f"logical gate count:    {m.logical_gate_count}")
    click.echo(f"decomposed depth:      {m.decomposed_depth}")
    click.echo(f"decomposed gate count: {m.decomposed_gate_count}")
    click.echo(f"remaining parameters:  {m.remaining_parameters}")
    if json_path:
        payload = dict(m.as_dict())
        payload["manifest"] = _manifest("metrics", {"in": str(in_path)}, seed=0)
        _write_json(json_path, payload)


def _greedy_flags(func):
    func = click.option("--iters", type=int, default=20, show_default=True)(func)
    func = click.option("--top-k", type=int, default=4, show_default=True)(func)
    func = click.option(
        "--metric",
        type=click.Choice(sorted(_METRICS)),
        default=DistanceMetric.PHASE_INVARIANT.value,
        show_default=True,
    )(func)
    func = click.option(
        "--seed", type=int, default=None, help="Default: $PQC_FORGE_SEED or 0."
    )(func)
    return func


@main.command("optimize")
@click.option("--in", "in_path", type=click.Path(), required=True)
@click.option("--tolerance", type=float, required=True)
@click.option(
    "--mode",
    type=click.Choice(sorted(_MODES)),
    default=OptimizeMode.PER_GATE.value,
    show_default=True,
)
@_greedy_flags
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
def cmd_optimize(in_path, tolerance, mode, iters, top_k, metric, seed, out_path, report_path, jobs):
    """Replace parametric gates whose approximation beats the tolerance."""
    seed = _resolve_seed(seed)
    c = _load_circuit(in_path)
    cfg = OptimizeConfig(
        tolerance=tolerance,
        greedy=GreedyParams(iters, top_k, _METRICS[metric], seed),
        mode=_MODES[mode],
    )
    try:
        new_c, report = optimize(c, cfg, jobs=jobs)
    except ValueError as exc:
        _fail(str(exc))
    out_path = out_path or str(Path(in_path).with_suffix(".opt.qc"))
    report_path = report_path or str(Path(out_path).with_suffix(".report.json"))
    circ.save(new_c, out_path)
    payload = report.as_dict()
    payload["manifest"] = _manifest(
        "optimize",
        {"in": str(in_path), "tolerance": tolerance, "mode": mode, "out": out_path},
        seed,
    )
    _write_json(report_path, payload)
    # a model circuit keeps its sidecar usable after optimization
    side = sidecar_path(in_path)
    if side.exists():
        side_out = sidecar_path(out_path)
        side_out.write_text(side.read_text(encoding="utf-8"), encoding="utf-8")
    b, a = report.before, report.after
    click.echo(
        f"replaced {report.replaced_count}/{report.transform_calls} targets; "
        f"gates {b.decomposed_gate_count} -> {a.decomposed_gate_count}, "
        f"depth {b.decomposed_depth} -> {a.decomposed_depth}, "
        f"params {b.remaining_parameters} -> {a.remaining_parameters}"
    )
    click.echo(f"wrote {out_path} and {report_path}")


@main.command("sweep")
@click.option("--in", "in_path", type=click.Path(), required=True)
@click.option("--tolerances", required=True, help="Comma-separated list, e.g. 0.1,0.01.")
@click.option(
    "--mode",
    type=click.Choice(sorted(_MODES)),
    default=OptimizeMode.PER_GATE.value,
    show_default=True,
)
@_greedy_flags
@click.option("--dataset", type=click.Choice(qnn.data.DATASET_NAMES), default=None)
@click.option("--data", "data_path", type=click.Path(), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
def cmd_sweep(in_path, tolerances, mode, iters, top_k, metric, seed, dataset, data_path, out_path, jobs):
    """Optimize at several tolerances; emit one CSV row per tolerance."""
    seed = _resolve_seed(seed)
    try:
        tols = [float(t) for t in tolerances.split(",") if t.strip()]
    except ValueError:
        raise click.UsageError(f"bad --tolerances value {tolerances!r}")
    if not tols:
        raise click.UsageError("--tolerances is empty")
    c = _load_circuit(in_path)
    cfg = OptimizeConfig(
        tolerance=tols[0],
        greedy=GreedyParams(iters, top_k, _METRICS[metric], seed),
        mode=_MODES[mode],
    )
    evaluate = None
    if dataset is not None:
        if not sidecar_path(in_path).exists():
            _fail(f"--dataset needs a model sidecar next to {in_path}")
        model = _load_model(in_path)
        ds = _load_dataset(dataset, data_path, model.split_seed)

        def evaluate(opt_circuit):
            return qnn.accuracy(model.with_ansatz(opt_circuit), ds.test_x, ds.test_y)

    try:
        rows = sweep(c, tols, cfg, evaluate=evaluate, jobs=jobs)
    except ValueError as exc:
        _fail(str(exc))
    manifest = _manifest(
        "sweep",
        {"in": str(in_path), "tolerances": tolerances, "dataset": dataset, "mode": mode},
        seed,
    )
    if out_path:
        _write_csv(out_path, rows, manifest)
        click.echo(f"wrote {out_path}")
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


@main.command("train")
@click.option("--dataset", type=click.Choice(qnn.data.DATASET_NAMES), required=True)
@click.option("--data", "data_path", type=click.Path(), default=None)
@click.option(
    "--layer-kind",
    type=click.Choice(sorted(_LAYER_KINDS)),
    default=qnn.LayerKind.BASIC_ENTANGLER.value,
    show_default=True,
)
@click.option("--layers", type=int, default=5, show_default=True)
@click.option("--qubits", type=int, required=True)
@click.option("--epochs", type=int, default=50, show_default=True)
@click.option("--lr", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=None, help="Default: $PQC_FORGE_SEED or 0.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_train(dataset, data_path, layer_kind, layers, qubits, epochs, lr, batch_size, seed, out_path):
    """Train a fresh layered model; write circuit + sidecar + history."""
    seed = _resolve_seed(seed)
    ds = _load_dataset(dataset, data_path, seed)
    try:
        spec = qnn.LayerSpec(_LAYER_KINDS[layer_kind], layers, qubits)
        model = qnn.build_model(spec, ds, seed=seed)
        cfg = qnn.TrainConfig(
            epochs=epochs, learning_rate=lr, batch_size=batch_size, seed=seed
        )
        model, history = qnn.train(model, ds, cfg)
    except ValueError as exc:
        _fail(str(exc))
    manifest = _manifest(
        "train",
        {"dataset": dataset, "layer_kind": layer_kind, "layers": layers,
         "qubits": qubits, "epochs": epochs, "lr": lr, "batch_size": batch_size,
         "out": str(out_path)},
        seed,
    )
    qnn.save_model(model, out_path, extra={"manifest": manifest})
    hist_path = Path(str(out_path)).with_suffix(".history.json")
    _write_json(hist_path, {**history.as_dict(), "manifest": manifest})
    final = history.epochs[-1] if history.epochs else {}
    click.echo(
        f"trained {layer_kind}({layers}, {qubits}q) on {dataset}: "
        f"test accuracy {final.get('test_accuracy', float('nan')):.4f}"
    )
    click.echo(f"wrote {out_path}, {sidecar_path(out_path)}, {hist_path}")


@main.command("retrain")
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--dataset", type=click.Choice(qnn.data.DATASET_NAMES), default=None)
@click.option("--data", "data_path", type=click.Path(), default=None)
@click.option("--epochs", type=int, default=20, show_default=True)
@click.option("--lr", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=None, help="Default: $PQC_FORGE_SEED or 0.")
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_retrain(model_path, dataset, data_path, epochs, lr, batch_size, seed, out_path):
    """Re-train the surviving parameters of an optimized model."""
    seed = _resolve_seed(seed)
    model = _load_model(model_path)
    ds = _load_dataset(dataset or model.dataset_name, data_path, model.split_seed)
    cfg = qnn.TrainConfig(
        epochs=epochs, learning_rate=lr, batch_size=batch_size, seed=seed
    )
    model, history = qnn.retrain(model, ds, cfg)
    for warning in history.warnings:
        click.echo(f"warning: {warning}", err=True)
    manifest = _manifest(
        "retrain",
        {"model": str(model_path), "dataset": ds.name, "epochs": epochs,
         "lr": lr, "batch_size": batch_size, "out": str(out_path)},
        seed,
    )
    qnn.save_model(model, out_path, extra={"manifest": manifest})
    hist_path = Path(str(out_path)).with_suffix(".history.json")
    _write_json(hist_path, {**history.as_dict(), "manifest": manifest})
    if history.epochs:
        click.echo(f"retrained: test accuracy {history.epochs[-1]['test_accuracy']:.4f}")
    else:
        click.echo("model unchanged (nothing to retrain)")
    click.echo(f"wrote {out_path}")


@main.command("eval")
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--dataset", type=click.Choice(qnn.data.DATASET_NAMES), default=None)
@click.option("--data", "data_path", type=click.Path(), default=None)
def cmd_eval(model_path, dataset, data_path):
    """Accuracy of a saved model on its dataset."""
    model = _load_model(model_path)
    ds = _load_dataset(dataset or model.dataset_name, data_path, model.split_seed)
    try:
        scores = qnn.evaluate(model, ds)
    except ValueError as exc:
        _fail(str(exc))
    click.echo(f"train accuracy: {scores['train_accuracy']:.4f}")
    click.echo(f"test accuracy:  {scores['test_accuracy']:.4f}")


if __name__ == "__main__":
    main()
