"""Matplotlib figure rendering for the CLI report path.

Each report-emitting subcommand saves one PNG next to its delimited output.
Figures are rendered off-screen with a fixed style and scrubbed metadata so
repeated runs produce identical images.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.markersize": 3,
    "savefig.bbox": "tight",
}


def save_figure(fig, path) -> None:
    fig.savefig(path, format="png", metadata={"Software": "homspec"})
    plt.close(fig)


def dims_figure(path, space_label, ns, d_vals, tau_vals) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ns = np.asarray(ns)
        d_vals = np.asarray(d_vals, dtype=float)
        tau_vals = np.asarray(tau_vals, dtype=float)
        keep = d_vals > 0
        ax.loglog(ns[keep], d_vals[keep], "o-", label="$d_n$")
        keep = tau_vals > 0
        ax.loglog(ns[keep], tau_vals[keep], "s-", label=r"$\tau_n$")
        ax.set_xlabel("degree $n$")
        ax.set_ylabel("dimension")
        ax.set_title(f"eigenspace dimensions on {space_label}")
        ax.legend()
        save_figure(fig, path)


def quad_figure(path, label, nodes, weights) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        markerline, stemlines, baseline = ax.stem(nodes, weights)
        plt.setp(stemlines, linewidth=0.8)
        plt.setp(baseline, visible=False)
        ax.set_xlabel("node")
        ax.set_ylabel("weight")
        ax.set_title(f"Gauss-Jacobi rule, {label}")
        save_figure(fig, path)


def spectrum_figure(path, label, values) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        values = np.abs(np.asarray(values, dtype=float))
        k = np.arange(1, len(values) + 1)
        keep = values > 0
        ax.loglog(k[keep], values[keep], ".", rasterized=len(values) > 4096)
        ax.set_xlabel("index $k$")
        ax.set_ylabel("$|s_k|$")
        ax.set_title(f"spectrum, {label}")
        save_figure(fig, path)


def decay_figure(path, label, values, slope, intercept, exponent) -> None:
    """Log-log spectrum with the fitted line and the theorem-exponent line
    anchored at the fit midpoint."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        values = np.abs(np.asarray(values, dtype=float))
        k = np.arange(1, len(values) + 1)
        keep = values > 0
        ax.loglog(k[keep], values[keep], ".", color="0.6", rasterized=True,
                  label="spectrum")
        kk = np.array([k[keep][0], k[keep][-1]], dtype=float)
        ax.loglog(kk, np.exp(intercept) * kk**slope, "-",
                  label=f"fit, slope {slope:.3f}")
        mid = float(np.sqrt(kk[0] * kk[1]))
        anchor = np.exp(intercept) * mid**slope
        ax.loglog(kk, anchor * (kk / mid) ** exponent, "--",
                  label=f"theorem exponent {exponent:.3f}")
        ax.set_xlabel("index $k$")
        ax.set_ylabel("$|s_k|$")
        ax.set_title(label)
        ax.legend()
        save_figure(fig, path)


def nystrom_figure(path, label, analytic, numeric) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        k = np.arange(1, len(analytic) + 1)
        ax.semilogy(k, np.abs(analytic), "o", label="analytic", fillstyle="none")
        ax.semilogy(k, np.abs(numeric), "x", label="quadrature")
        ax.set_xlabel("index $k$")
        ax.set_ylabel("$|eigenvalue|$")
        ax.set_title(f"operator spectrum cross-check, {label}")
        ax.legend()
        save_figure(fig, path)


def lemmas_figure(path, space_label, reports) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        labels = [rep.lemma_id for rep in reports]
        deltas = [rep.minimal_delta if rep.minimal_delta is not None else -1
                  for rep in reports]
        ax.bar(labels, deltas)
        ax.set_ylabel(r"minimal $\delta$")
        ax.set_title(f"counting-lemma thresholds on {space_label}")
        save_figure(fig, path)
