"""Render diagnostics CSV files and sweep JSON reports to SVG plots plus a Markdown table."""
from __future__ import annotations

import csv
import json
import os

import numpy as np


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def read_csv(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path} is empty")
    head, body = rows[0], rows[1:]
    cols = {h: np.array([float(r[i]) for r in body]) for i, h in enumerate(head)}
    return cols


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name).strip("_")


def render_csv(path, outdir) -> list:
    """One SVG per non-time column of a diagnostics CSV."""
    plt = _plt()
    cols = read_csv(path)
    t = cols.get("t")
    stem = os.path.splitext(os.path.basename(path))[0]
    out = []
    for name, vals in cols.items():
        if name == "t" or t is None:
            continue
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(t, vals)
        ax.set_xlabel("t")
        ax.set_ylabel(name)
        ax.set_title(f"{stem}: {name}")
        fig.tight_layout()
        p = os.path.join(outdir, f"{stem}_{_safe(name)}.svg")
        fig.savefig(p, format="svg")
        plt.close(fig)
        out.append(p)
    return out


def render_sweep(path, outdir) -> tuple:
    """Log-log plots of each sweep metric against eps and a Markdown summary table."""
    plt = _plt()
    with open(path) as fh:
        rep = json.load(fh)
    if "schema_version" not in rep:
        raise ValueError(f"{path} is not a sweep report")
    eps = np.array(rep["eps"], float)
    stem = os.path.splitext(os.path.basename(path))[0]
    svgs = []
    lines = ["| metric | " + " | ".join(f"eps={e:g}" for e in eps) + " | slope | +/- |",
             "|---" * (len(eps) + 3) + "|"]
    for name, vals in rep["metrics"].items():
        y = np.array([np.nan if v is None else v for v in vals], float)
        fit = rep["slopes"].get(name)
        cells = " | ".join("failed" if np.isnan(v) else f"{v:.4g}" for v in y)
        slope = f"{fit['slope']:.3f} | {fit['half_width']:.3f}" if fit else "n/a | n/a"
        lines.append(f"| {name} | {cells} | {slope} |")
        good = np.isfinite(y) & (y > 0)
        if good.sum() < 2:
            continue
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.loglog(eps[good], y[good], "o-")
        ax.set_xlabel("eps")
        ax.set_ylabel(name)
        if fit:
            ax.set_title(f"slope {fit['slope']:.2f}")
        fig.tight_layout()
        p = os.path.join(outdir, f"{stem}_{_safe(name)}.svg")
        fig.savefig(p, format="svg")
        plt.close(fig)
        svgs.append(p)
    if rep.get("failures"):
        lines.append("")
        lines.extend(f"- eps={k}: {v}" for k, v in sorted(rep["failures"].items()))
    return svgs, "\n".join(lines) + "\n"


def render(inputs, outdir) -> dict:
    """Dispatch on file type; writes ``summary.md`` when any JSON report is given."""
    os.makedirs(outdir, exist_ok=True)
    svgs, tables = [], []
    for path in inputs:
        if path.endswith(".json"):
            s, table = render_sweep(path, outdir)
            svgs += s
            tables.append(f"## {os.path.basename(path)}\n\n{table}")
        elif path.endswith(".csv"):
            svgs += render_csv(path, outdir)
        else:
            raise ValueError(f"cannot render {path}: expected .csv or .json")
    summary = None
    if tables:
        summary = os.path.join(outdir, "summary.md")
        with open(summary, "w") as fh:
            fh.write("\n".join(tables))
    return {"svg": svgs, "summary": summary}
