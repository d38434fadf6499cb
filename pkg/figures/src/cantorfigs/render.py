"""Render count/predict CSV series into publication-style plots.

Three figure kinds:

* ``totals``  — the window count next to its predictors, one curve each.
* ``ratio``   — predictor/count ratio curves with a y = 1 guide line.
* ``multi_c`` — one ratio panel per input CSV (one window width c each).

Rendering is a pure function of the CSV bytes and the spec: fixed DPI, no
timestamps or software metadata, so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

KINDS = ("totals", "ratio", "multi_c")
SCALES = ("linear", "loglog")
DPI = 120

_TOTAL_COLUMNS = ("N_tilde", "M", "F")
_RATIO_COLUMNS = ("ratio_M", "ratio_F")


class FigureError(ValueError):
    """Bad figure spec or input data (missing columns, too few points)."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    kind: str
    output: str
    scale: str = "linear"
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")
        if self.scale not in SCALES:
            raise FigureError(f"unknown scale {self.scale!r}")
        if not self.inputs:
            raise FigureError("spec lists no input CSV")
        if self.kind != "multi_c" and len(self.inputs) != 1:
            raise FigureError(f"kind {self.kind!r} takes exactly one input CSV")
        if self.labels and len(self.labels) != len(self.inputs):
            raise FigureError("labels must match inputs one to one")

    @classmethod
    def from_json(cls, path: str | Path) -> "FigureSpec":
        with open(path) as fh:
            raw = json.load(fh)
        inputs = raw.get("inputs") or ([raw["input"]] if "input" in raw else [])
        return cls(
            inputs=tuple(inputs),
            kind=raw.get("kind", ""),
            output=raw.get("output", ""),
            scale=raw.get("scale", "linear"),
            labels=tuple(raw.get("labels", ())),
        )


def _load_series(path: str) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        rows = list(reader)
    if "T" not in columns:
        raise FigureError(f"{path}: missing column 'T'")
    if len(rows) < 2:
        raise FigureError(f"{path}: need at least 2 data points, got {len(rows)}")
    out: dict[str, list[float]] = {c: [] for c in columns}
    for row in rows:
        for c in columns:
            v = row[c]
            out[c].append(float(v) if v not in ("", None) else float("nan"))
    return out


def _require(series: dict, columns, path: str) -> list[str]:
    present = [c for c in columns if c in series]
    if not present:
        raise FigureError(f"{path}: missing columns {', '.join(columns)}")
    return present


def _apply_scale(ax, scale: str):
    if scale == "loglog":
        ax.set_xscale("log")
        ax.set_yscale("log")


def _plot_totals(ax, series, scale, path):
    for col in _require(series, _TOTAL_COLUMNS, path):
        ax.plot(series["T"], series[col], label=col, linewidth=1.2)
    _apply_scale(ax, scale)
    ax.set_xlabel("T")
    ax.legend(frameon=False)


def _plot_ratio(ax, series, scale, path):
    ax.axhline(1.0, color="0.4", linewidth=0.8, linestyle="--", label="y = 1")
    for col in _require(series, _RATIO_COLUMNS, path):
        ax.plot(series["T"], series[col], label=col, linewidth=1.2)
    if scale == "loglog":
        ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.legend(frameon=False)


def build_figure(spec: FigureSpec):
    """Build the matplotlib Figure for a spec (no file output)."""
    if spec.kind == "multi_c":
        n = len(spec.inputs)
        fig, axes = plt.subplots(n, 1, figsize=(6, 2.2 * n), squeeze=False)
        for i, path in enumerate(spec.inputs):
            ax = axes[i][0]
            _plot_ratio(ax, _load_series(path), spec.scale, path)
            title = spec.labels[i] if spec.labels else Path(path).stem
            ax.set_title(title, fontsize=9)
        fig.tight_layout()
        return fig
    fig, ax = plt.subplots(figsize=(6, 4))
    series = _load_series(spec.inputs[0])
    if spec.kind == "totals":
        _plot_totals(ax, series, spec.scale, spec.inputs[0])
    else:
        _plot_ratio(ax, series, spec.scale, spec.inputs[0])
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Render the spec to its output PNG, byte-stable across runs."""
    fig = build_figure(spec)
    out = Path(spec.output)
    try:
        fig.savefig(out, dpi=DPI, format="png", metadata={"Software": None})
    finally:
        plt.close(fig)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: render_figures <spec.json>", file=sys.stderr)
        return 2
    try:
        spec = FigureSpec.from_json(argv[0])
        out = render(spec)
    except (FigureError, FileNotFoundError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
