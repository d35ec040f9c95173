"""File ingestion, model persistence, and figure emission.

All writers use shortest round-trip decimal formatting and fixed key
ordering, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import ClassSubspace, RankPolicy, SubspaceModel
from .datagen import DatasetSpec
from .errors import PersistenceError, ValidationError
from .geodesy import PathPointSet
from .signals import Signal
from .transform import Reference, Scdt, cdf

MODEL_FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# signal CSV
# ---------------------------------------------------------------------------

def write_signal_csv(path, s: Signal, header: bool = True) -> None:
    """Two-column ``t,value`` table; round-trips losslessly."""
    lines = []
    if header:
        lines.append("t,value")
    lines.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(s.grid, s.values))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_signal_csv(path) -> Signal:
    """Parse a ``t,value`` table; a header row is tolerated."""
    grid, values = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise PersistenceError(f"{path}: line {lineno}: expected 2 columns, got {len(cells)}")
            try:
                t, v = float(cells[0]), float(cells[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise PersistenceError(f"{path}: line {lineno}: non-numeric cell") from None
            grid.append(t)
            values.append(v)
    if len(grid) < 2:
        raise PersistenceError(f"{path}: fewer than 2 data rows")
    return Signal(np.array(grid), np.array(values))


# ---------------------------------------------------------------------------
# UCR archive rows: label <delim> v1 <delim> ... <delim> vL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledDataset:
    """Signals on one shared grid with integer class labels."""

    signals: tuple[Signal, ...]
    labels: tuple[int, ...]
    class_names: tuple[str, ...] | None = None
    source: str = ""

    def __post_init__(self):
        if len(self.signals) != len(self.labels):
            raise ValidationError("signals and labels length mismatch")
        if any(l < 0 for l in self.labels):
            raise ValidationError("labels must be nonnegative")
        if self.signals:
            g0 = self.signals[0].grid
            for s in self.signals[1:]:
                if not np.array_equal(s.grid, g0):
                    raise ValidationError("all dataset signals must share one grid")

    def __len__(self) -> int:
        return len(self.signals)


def read_ucr(path, delimiter: str = "auto", classes=None,
             shift_min_zero: bool = False) -> LabeledDataset:
    """Load archive-format time series onto a uniform [0, 1] grid.

    Each row is a label followed by an equal-length numeric series.
    ``classes`` filters labels; ``shift_min_zero`` adds a constant so the
    minimum value is zero (off by default: signed data is handled as-is,
    the archive's z-normalization is not undone).
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise PersistenceError(f"{path}: empty file")
    if delimiter == "auto":
        delimiter = "\t" if "\t" in lines[0] else ","
    rows = []
    length = None
    for lineno, line in enumerate(lines, start=1):
        cells = [c for c in line.split(delimiter) if c.strip()]
        try:
            label = int(float(cells[0]))
            series = np.array([float(c) for c in cells[1:]])
        except (ValueError, IndexError):
            raise PersistenceError(f"{path}: line {lineno}: malformed row") from None
        if series.size < 2:
            raise PersistenceError(f"{path}: line {lineno}: series too short")
        if np.any(~np.isfinite(series)):
            raise PersistenceError(f"{path}: line {lineno}: missing or non-finite value")
        if length is None:
            length = series.size
        elif series.size != length:
            raise PersistenceError(
                f"{path}: line {lineno}: ragged row ({series.size} != {length})")
        rows.append((label, series))
    if classes is not None:
        wanted = {int(c) for c in classes}
        present = {label for label, _ in rows}
        unknown = wanted - present
        if unknown:
            raise ValidationError(f"labels {sorted(unknown)} not present in {path}")
        rows = [(l, v) for l, v in rows if l in wanted]
    grid = np.linspace(0.0, 1.0, length)
    signals = []
    for _, series in rows:
        vals = series - series.min() if shift_min_zero else series
        signals.append(Signal(grid, vals))
    return LabeledDataset(tuple(signals), tuple(l for l, _ in rows), source=str(path))


# ---------------------------------------------------------------------------
# transform tuple persistence
# ---------------------------------------------------------------------------

def save_scdt(path, t: Scdt) -> None:
    doc = {
        "reference": t.reference.label,
        "grid_length": len(t.reference.signal),
        "f_plus": None if t.f_plus is None else t.f_plus.values.tolist(),
        "a": t.a,
        "f_minus": None if t.f_minus is None else t.f_minus.values.tolist(),
        "b": t.b,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_scdt(path, ref: Reference) -> Scdt:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise PersistenceError(f"{path}: not a valid transform file: {e}") from None
    if doc.get("grid_length") != len(ref.signal):
        raise PersistenceError(
            f"{path}: tuple was sampled at {doc.get('grid_length')} points, "
            f"reference has {len(ref.signal)}")
    if doc.get("reference") != ref.label:
        raise PersistenceError(
            f"{path}: tuple reference {doc.get('reference')!r} != {ref.label!r}")
    return Scdt.raw(doc["f_plus"], doc["a"], doc["f_minus"], doc["b"], ref)


# ---------------------------------------------------------------------------
# model persistence
# ---------------------------------------------------------------------------

def save_model(path, model: SubspaceModel) -> None:
    ref = model.reference
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "reference": {
            "label": ref.label,
            "grid": ref.signal.grid.tolist(),
            "values": ref.signal.values.tolist(),
        },
        "method": model.method,
        "nls_k": model.nls_k,
        "rank_policy": {"rel_tol": model.rank_policy.rel_tol},
        "classes": [
            {
                "label": c.label,
                "basis": None if c.basis is None else c.basis.tolist(),
                "train_vectors": None if c.train_vectors is None else c.train_vectors.tolist(),
            }
            for c in model.classes
        ],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_model(path) -> SubspaceModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise PersistenceError(f"{path}: not a valid model file: {e}") from None
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise PersistenceError(
            f"{path}: format_version {version!r} unsupported (expected {MODEL_FORMAT_VERSION})")
    method = doc.get("method")
    if method not in ("ns", "nls"):
        raise PersistenceError(f"{path}: unknown method {method!r}")
    try:
        rd = doc["reference"]
        density = Signal(np.array(rd["grid"]), np.array(rd["values"]))
        ref = Reference(density, cdf(density), rd["label"])
        classes = tuple(
            ClassSubspace(
                int(c["label"]),
                None if c["basis"] is None else np.array(c["basis"]),
                None if c["train_vectors"] is None else np.array(c["train_vectors"]),
            )
            for c in doc["classes"]
        )
        policy = RankPolicy(float(doc["rank_policy"]["rel_tol"]))
        return SubspaceModel(ref, method, int(doc["nls_k"]), policy, classes)
    except (KeyError, TypeError) as e:
        raise PersistenceError(f"{path}: malformed model file ({e})") from None


def save_dataset_spec(path, spec: DatasetSpec) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "template_ids": list(spec.template_ids),
        "omega_range": list(spec.omega_range),
        "tau_range": list(spec.tau_range),
        "train_per_class": spec.train_per_class,
        "test_per_class": spec.test_per_class,
        "resolution": spec.resolution,
        "seed": spec.seed,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_dataset_spec(path) -> DatasetSpec:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise PersistenceError(f"{path}: not a valid dataset spec: {e}") from None
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise PersistenceError(f"{path}: format_version {doc.get('format_version')!r} "
                               f"unsupported (expected {MODEL_FORMAT_VERSION})")
    try:
        return DatasetSpec(
            template_ids=tuple(doc["template_ids"]),
            omega_range=tuple(doc["omega_range"]),
            tau_range=tuple(doc["tau_range"]),
            train_per_class=int(doc["train_per_class"]),
            test_per_class=int(doc["test_per_class"]),
            resolution=int(doc["resolution"]),
            seed=int(doc["seed"]),
        )
    except KeyError as e:
        raise PersistenceError(f"{path}: missing field {e}") from None


# ---------------------------------------------------------------------------
# path figures
# ---------------------------------------------------------------------------

def emit_path_figure(path_prefix, pps: PathPointSet, format: str = "csv") -> list[str]:
    """Write a sampled path as per-point CSV tables plus a summary, or SVG.

    CSV mode produces one signal table per alpha and a summary whose
    ``segment`` rows carry the per-segment distances followed by the
    endpoint distance, total length, and gap ratio. SVG mode renders one
    panel per alpha with the segment distances annotated in between.
    """
    if format not in ("csv", "svg", "both"):
        raise ValidationError(f"unknown figure format {format!r}")
    prefix = Path(path_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    if format in ("csv", "both"):
        for i, point in enumerate(pps.points):
            out = prefix.parent / f"{prefix.name}_alpha_{i:02d}.csv"
            write_signal_csv(out, point)
            written.append(str(out))
        summary = prefix.parent / f"{prefix.name}_summary.csv"
        lines = ["record,alpha_from,alpha_to,value"]
        for i, d in enumerate(pps.segment_distances):
            lines.append(f"segment,{_fmt(pps.alphas[i])},{_fmt(pps.alphas[i + 1])},{_fmt(d)}")
        lines.append(f"endpoint_distance,,,{_fmt(pps.endpoint_distance)}")
        lines.append(f"total_length,,,{_fmt(pps.total_length)}")
        lines.append(f"gap_ratio,,,{_fmt(pps.gap_ratio)}")
        summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(str(summary))
    if format in ("svg", "both"):
        out = prefix.parent / f"{prefix.name}_path.svg"
        out.write_text(_render_path_svg(pps), encoding="utf-8")
        written.append(str(out))
    return written


def _render_path_svg(pps: PathPointSet, panel_w: int = 200, panel_h: int = 140,
                     gap: int = 46, margin: int = 34) -> str:
    n = len(pps.points)
    width = margin * 2 + n * panel_w + (n - 1) * gap
    height = margin * 2 + panel_h + 26
    xs_lo = min(p.grid[0] for p in pps.points)
    xs_hi = max(p.grid[-1] for p in pps.points)
    ys = np.concatenate([p.values for p in pps.points])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x, x0):
        return x0 + (x - xs_lo) / (xs_hi - xs_lo) * panel_w

    def sy(y):
        return margin + 22 + (y_hi - y) / (y_hi - y_lo) * panel_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{margin}" y="{margin - 12}" font-family="sans-serif" font-size="12">'
        f"endpoint distance {pps.endpoint_distance:.6g}, path length {pps.total_length:.6g}, "
        f"gap ratio {pps.gap_ratio:.6g}</text>",
    ]
    for i, point in enumerate(pps.points):
        x0 = margin + i * (panel_w + gap)
        top = margin + 22
        parts.append(f'<rect x="{x0:.2f}" y="{top:.2f}" width="{panel_w}" height="{panel_h}" '
                     f'fill="none" stroke="#999" stroke-width="1"/>')
        if y_lo < 0 < y_hi:
            zy = sy(0.0)
            parts.append(f'<line x1="{x0:.2f}" y1="{zy:.2f}" x2="{x0 + panel_w:.2f}" '
                         f'y2="{zy:.2f}" stroke="#ddd" stroke-width="1"/>')
        coords = " ".join(f"{sx(t, x0):.2f},{sy(v):.2f}"
                          for t, v in zip(point.grid, point.values))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="#1f5fa8" '
                     f'stroke-width="1.3"/>')
        parts.append(f'<text x="{x0 + panel_w / 2:.2f}" y="{top + panel_h + 16:.2f}" '
                     f'font-family="sans-serif" font-size="11" text-anchor="middle">'
                     f"alpha = {pps.alphas[i]:.6g}</text>")
        if i < n - 1:
            mid = x0 + panel_w + gap / 2
            parts.append(f'<text x="{mid:.2f}" y="{top + panel_h / 2:.2f}" '
                         f'font-family="sans-serif" font-size="11" text-anchor="middle">'
                         f"D{i + 1} = {pps.segment_distances[i]:.3g}</text>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
