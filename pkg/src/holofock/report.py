"""Report emission: JSON documents, delimited tables and figures.

Every command writes a structured JSON document (complex numbers as
[re, im] pairs, matrices as nested arrays, top-level ``schema_version``),
a flat CSV with one row per scalar result, and — unless plotting is
disabled — PNG figures rendered next to them.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["jsonify", "write_report", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1


def jsonify(obj):
    """Recursively convert results into the JSON report representation."""
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return jsonify([jsonify(row) for row in obj]) if obj.ndim > 1 else [
                [c.real, c.imag] for c in obj.tolist()
            ]
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return repr(obj)


def _flatten_scalars(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten_scalars(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)) and obj and all(
        isinstance(v, (bool, int, float, str)) for v in obj
    ) and len(obj) <= 4:
        rows.append((prefix, ";".join(str(v) for v in obj)))
    elif isinstance(obj, (bool, int, float, str, np.floating, np.integer)):
        rows.append((prefix, obj))


def write_report(
    out_dir,
    command: str,
    config: dict,
    results: dict,
    figures: list | None = None,
    name: str = "report",
) -> dict:
    """Write <name>.json / <name>.csv (+ figures) into ``out_dir``.

    ``figures`` is a list of (filename, draw_fn) pairs; each draw_fn
    receives a matplotlib figure to draw on.  Returns the paths written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": jsonify(config),
        "results": jsonify(results),
    }
    json_path = out / f"{name}.json"
    json_path.write_text(json.dumps(doc, indent=1))

    rows: list = []
    _flatten_scalars("", doc["results"], rows)
    csv_path = out / f"{name}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        writer.writerows(rows)

    written = {"json": str(json_path), "csv": str(csv_path), "figures": []}
    for fname, draw in figures or []:
        fig = plt.figure(figsize=(6.0, 4.0))
        try:
            draw(fig)
            fig.tight_layout()
            path = out / fname
            fig.savefig(path, dpi=130)
            written["figures"].append(str(path))
        finally:
            plt.close(fig)
    return written


# ---------------------------------------------------------------------------
# stock figure painters
# ---------------------------------------------------------------------------

def matrix_figure(matrices: dict, title: str):
    """Heatmaps of |entries| for a dict of named matrices."""

    def draw(fig):
        n = len(matrices)
        cols = min(3, n)
        rows = -(-n // cols)
        for k, (name, mat) in enumerate(matrices.items()):
            ax = fig.add_subplot(rows, cols, k + 1)
            im = ax.imshow(np.abs(np.asarray(mat)), cmap="viridis")
            ax.set_title(name, fontsize=9)
            ax.set_xticks([])
            ax.set_yticks([])
            fig.colorbar(im, ax=ax, fraction=0.046)
        fig.suptitle(title, fontsize=10)

    return draw


def history_figure(history, title: str):
    def draw(fig):
        ax = fig.add_subplot(1, 1, 1)
        ax.semilogy(np.asarray(history), lw=1.0)
        ax.set_xlabel("objective evaluation")
        ax.set_ylabel("best gate distance")
        ax.set_title(title, fontsize=10)
        ax.grid(True, alpha=0.3)

    return draw


def loop_figure(path_reals: np.ndarray, names: list, title: str):
    def draw(fig):
        ax = fig.add_subplot(1, 1, 1)
        ts = np.linspace(0.0, 1.0, path_reals.shape[0])
        for i, name in enumerate(names):
            ax.plot(ts, path_reals[:, i], lw=0.9, label=name)
        ax.set_xlabel("loop parameter t")
        ax.set_ylabel("coordinate value")
        ax.legend(fontsize=6, ncol=3)
        ax.set_title(title, fontsize=10)
        ax.grid(True, alpha=0.3)

    return draw


def check_figure(checks: list, title: str):
    """log-scale bars of measured values against tolerances."""

    def draw(fig):
        ax = fig.add_subplot(1, 1, 1)
        names = [c["name"] for c in checks]
        measured = [max(abs(float(c.get("measured", 0.0))), 1e-18) for c in checks]
        tol = []
        for c in checks:
            t = c.get("tolerance")
            if isinstance(t, (list, tuple)):
                t = t[-1]
            try:
                t = float(t)
                tol.append(t if t > 0 else None)
            except (TypeError, ValueError):
                tol.append(None)
        ys = np.arange(len(names))
        colors = ["tab:green" if c.get("passed") else "tab:red" for c in checks]
        ax.barh(ys, np.log10(measured), color=colors, alpha=0.8)
        for y, t in zip(ys, tol):
            if t:
                ax.plot([np.log10(t)] * 2, [y - 0.4, y + 0.4], "k-", lw=1.2)
        ax.set_yticks(ys)
        ax.set_yticklabels(names, fontsize=7)
        ax.set_xlabel("log10 measured (bar) vs tolerance (tick)")
        ax.set_title(title, fontsize=10)
        ax.grid(True, axis="x", alpha=0.3)

    return draw
