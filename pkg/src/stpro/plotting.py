"""Optional figures for run reports (matplotlib, Agg backend).

Figures are a convenience on top of the text and JSONL reports and carry
no information that the reports do not.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLORS = {"pass": "#4c956c", "inconclusive": "#f2a541", "fail": "#c44536"}

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "svg.hashsalt": "stpro",  # stable svg ids
}


def _slug(text):
    return "".join(c if c.isalnum() else "_" for c in text).strip("_").lower() or "entry"


def case_counts(results, path):
    """One horizontal bar per entry: cases checked, coloured by worst status."""
    names, counts, colors = [], [], []
    for name, _kind, _values, reports in results:
        rs = [r for rep in reports for r in rep.results]
        statuses = {r.status for r in rs}
        status = "fail" if "fail" in statuses else "inconclusive" if "inconclusive" in statuses else "pass"
        names.append(name)
        counts.append(max(1, sum(r.cases for r in rs)))
        colors.append(COLORS[status])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 0.3 * len(names) + 1.0))
        y = np.arange(len(names))
        ax.barh(y, counts, color=colors)
        ax.set_yticks(y, names)
        ax.invert_yaxis()
        ax.set_xscale("log")
        ax.set_xlabel("cases checked")
        fig.savefig(path)
        plt.close(fig)
    return path


def root_projection(rs, path):
    """Roots projected on the first two principal directions."""
    R = np.array(rs.roots, dtype=float)
    _, _, vt = np.linalg.svd(R, full_matrices=False)
    xy = R @ vt[:2].T
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 4.0))
        ultra = np.array([rs.is_ultrashort(r) for r in rs.roots])
        ax.scatter(xy[~ultra, 0], xy[~ultra, 1], s=18, color="#33658a", label="roots")
        if ultra.any():
            ax.scatter(xy[ultra, 0], xy[ultra, 1], s=18, color="#c44536", label="ultrashort")
        ax.axhline(0, color="0.8", lw=0.5)
        ax.axvline(0, color="0.8", lw=0.5)
        ax.set_aspect("equal")
        ax.set_title(rs.tag)
        ax.legend(frameon=False, loc="upper right")
        fig.savefig(path)
        plt.close(fig)
    return path


def render(results, directory):
    """Write every figure for a run into directory; returns the paths."""
    from .rootsys import root_system

    os.makedirs(directory, exist_ok=True)
    paths = [case_counts(results, os.path.join(directory, "cases.png"))]
    for name, kind, values, _reports in results:
        if kind == "roots":
            paths.append(root_projection(root_system(values["phi"]), os.path.join(directory, f"roots_{_slug(name)}.png")))
    return paths
