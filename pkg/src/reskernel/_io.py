"""File formats: deterministic CSV writers, time-series files, flat configs.

All writers are atomic (write to a sibling temp file, then rename) and emit
LF line endings with floats at 17 significant digits, so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ContractViolation
from .temporal_kernel import MetricTensor, TimeSeries


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise ContractViolation("boolean cells are not part of any file format")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    return str(value)


def atomic_write_text(path, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: list[str] | None, rows) -> None:
    lines = []
    if header is not None:
        lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(c) for c in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_time_series(path) -> TimeSeries:
    """Parse a time-series file: one real per line, most recent first."""
    values = []
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ContractViolation(f"cannot read time series {path}: {exc}") from exc
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            values.append(float(stripped))
        except ValueError as exc:
            raise ContractViolation(
                f"{path}:{lineno}: not a real number: {stripped!r}"
            ) from exc
    if not values:
        raise ContractViolation(f"time series file {path} holds no samples")
    return TimeSeries(np.array(values))


def write_time_series(series: TimeSeries, path) -> None:
    atomic_write_text(path, "\n".join(fmt_float(v) for v in series.values) + "\n")


def write_metric_tensor_csv(tensor: MetricTensor, path) -> None:
    write_csv(path, None, tensor.matrix)


def write_motifs_csv(vectors: np.ndarray, weights: np.ndarray, path) -> None:
    """One motif per row: index, weight, then the motif components."""
    horizon = vectors.shape[1] if vectors.shape[0] else 0
    header = ["index", "weight"] + [f"m_{j}" for j in range(1, horizon + 1)]
    rows = ([i + 1, float(weights[i])] + [float(c) for c in vectors[i]]
            for i in range(vectors.shape[0]))
    write_csv(path, header, rows)


def write_weights_csv(weights: np.ndarray, path) -> None:
    write_csv(path, ["index", "weight"],
              ([i + 1, float(w)] for i, w in enumerate(weights)))


def write_weights_mean_std_csv(mean: np.ndarray, std: np.ndarray, path) -> None:
    write_csv(path, ["index", "weight_mean", "weight_std"],
              ([i + 1, float(mean[i]), float(std[i])] for i in range(mean.shape[0])))


def write_comparison_csv(comparison, predicted_weights, empirical_weights, path) -> None:
    n = comparison.n_compared
    rows = ([i + 1, int(comparison.cluster_ids[i]), float(predicted_weights[i]),
             float(empirical_weights[i]), float(comparison.weight_rel_errors[i]),
             float(comparison.alignments[i])] for i in range(n))
    write_csv(path, ["index", "cluster", "predicted_weight", "empirical_weight",
                     "weight_rel_error", "alignment"], rows)


SWEEP_HEADER = ["nu", "regime", "input_kind", "trial", "n_motifs", "cells_visited",
                "relative_area", "weighted_relative_area", "discarded_points"]

_SWEEP_STAT_FIELDS = ("n_motifs", "cells_visited", "relative_area",
                      "weighted_relative_area", "discarded_points")


def write_sweep_csv(reports, path, aggregate: bool = True) -> None:
    """Sweep rows in canonical order, plus mean/std rows per configuration.

    Aggregate rows reuse the trial column with the labels ``mean`` and
    ``std`` (population standard deviation).
    """
    rows = []
    groups: dict[tuple, list] = {}
    for r in reports:
        rows.append([r.nu, r.regime, r.input_kind, r.trial, r.n_motifs, r.cells_visited,
                     r.relative_area, r.weighted_relative_area, r.discarded_points])
        groups.setdefault((r.nu, r.regime, r.input_kind), []).append(r)
    if aggregate:
        for key in sorted(groups, key=lambda k: (k[0], k[1], k[2])):
            members = groups[key]
            stats = {f: np.array([getattr(m, f) for m in members], dtype=float)
                     for f in _SWEEP_STAT_FIELDS}
            rows.append([key[0], key[1], key[2], "mean"]
                        + [float(np.mean(stats[f])) for f in _SWEEP_STAT_FIELDS])
            rows.append([key[0], key[1], key[2], "std"]
                        + [float(np.std(stats[f])) for f in _SWEEP_STAT_FIELDS])
    write_csv(path, SWEEP_HEADER, rows)


def parse_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` file; blank lines and ``#`` comments ignored."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ContractViolation(f"cannot read config {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ContractViolation(f"{path}:{lineno}: expected 'key = value'")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ContractViolation(f"{path}:{lineno}: empty key or value")
        if key in out:
            raise ContractViolation(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out
