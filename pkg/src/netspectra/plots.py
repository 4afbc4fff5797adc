"""Figure rendering for the experiment reports.

Headless by construction: every function takes precomputed rows from the
corresponding CSV writer and saves a PNG next to it.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .graphs import FAMILIES  # noqa: E402

_THETA_LABEL = {
    "erdos-renyi": "edge probability",
    "scale-free": "attachment exponent",
    "small-world": "rewiring probability",
}


def entropy_curve_figure(rows, path) -> None:
    families = [f for f in FAMILIES if any(r["family"] == f for r in rows)]
    fig, axes = plt.subplots(1, len(families), figsize=(4.2 * len(families), 3.4),
                             squeeze=False)
    for ax, family in zip(axes[0], families):
        sub = [r for r in rows if r["family"] == family]
        thetas = [r["theta"] for r in sub]
        ax.errorbar(thetas, [r["mean_entropy"] for r in sub],
                    yerr=[r["sd_entropy"] for r in sub],
                    fmt="o-", ms=3, lw=1, label="estimated")
        theory = [(r["theta"], r["theoretical"]) for r in sub
                  if r["theoretical"] is not None]
        if theory:
            ax.plot(*zip(*theory), "--", lw=1, label="closed form")
            ax.legend(fontsize=8)
        ax.set_xlabel(_THETA_LABEL[family])
        ax.set_ylabel("spectral entropy")
        ax.set_title(family)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def estimate_table_figure(rows, path) -> None:
    families = [f for f in FAMILIES if any(r["family"] == f for r in rows)]
    fig, axes = plt.subplots(1, len(families), figsize=(4.2 * len(families), 3.4),
                             squeeze=False)
    for ax, family in zip(axes[0], families):
        sub = [r for r in rows if r["family"] == family]
        ns = [r["n"] for r in sub]
        ax.errorbar(ns, [r["theta_hat_mean"] for r in sub],
                    yerr=[r["theta_hat_sd"] for r in sub], fmt="o-", ms=4, lw=1)
        ax.axhline(sub[0]["theta_true"], ls="--", lw=1, color="gray")
        ax.set_xlabel("nodes")
        ax.set_ylabel("estimated parameter")
        ax.set_title(family)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def selection_accuracy_figure(rows, path) -> None:
    families = [f for f in FAMILIES if any(r["true_family"] == f for r in rows)]
    fig, axes = plt.subplots(1, len(families), figsize=(4.2 * len(families), 3.4),
                             squeeze=False)
    styles = {"frac_erdos_renyi": ("-", "classified ER"),
              "frac_scale_free": ("--", "classified scale-free"),
              "frac_small_world": (":", "classified small-world")}
    for ax, family in zip(axes[0], families):
        sub = sorted((r for r in rows if r["true_family"] == family),
                     key=lambda r: r["n"])
        ns = [r["n"] for r in sub]
        for column, (style, label) in styles.items():
            ax.plot(ns, [r[column] for r in sub], style, lw=1.2, label=label)
        ax.set_ylim(-0.02, 1.02)
        ax.set_xlabel("nodes")
        ax.set_ylabel("proportion")
        ax.set_title(f"true family: {family}")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def roc_figure(curve_rows, auc_rows, path) -> None:
    families = [f for f in FAMILIES
                if any(r["family"] == f for r in curve_rows)]
    aucs = {(r["family"], r["variant"]): r["auc"] for r in auc_rows}
    fig, axes = plt.subplots(1, len(families), figsize=(3.8 * len(families), 3.6),
                             squeeze=False)
    for ax, family in zip(axes[0], families):
        for variant, style in (("spectrum", "-"), ("degree", "--")):
            sub = [r for r in curve_rows
                   if r["family"] == family and r["variant"] == variant]
            sub.sort(key=lambda r: r["threshold"])
            ax.plot([r["one_minus_specificity"] for r in sub],
                    [r["sensitivity"] for r in sub], style, lw=1.2,
                    label=f"{variant} (AUC {aucs[(family, variant)]:.2f})")
        ax.plot([0, 1], [0, 1], color="lightgray", lw=0.8, zorder=0)
        ax.set_xlabel("1 - specificity")
        ax.set_ylabel("sensitivity")
        ax.set_title(family)
        ax.legend(fontsize=7, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def pvalue_histogram_figure(rows, path) -> None:
    families = sorted({r["family"] for r in rows})
    fig, axes = plt.subplots(1, len(families), figsize=(3.8 * len(families), 3.2),
                             squeeze=False)
    for ax, family in zip(axes[0], families):
        pvals = [r["p_value"] for r in rows if r["family"] == family]
        ax.hist(pvals, bins=10, range=(0, 1), density=True,
                edgecolor="white")
        ax.axhline(1.0, ls="--", lw=1, color="gray")
        ax.set_xlabel("p-value")
        ax.set_ylabel("density")
        ax.set_title(family)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
