"""Matplotlib rendering of the report figures: one self-contained SVG each."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (9.0, 4.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "svg.fonttype": "path",  # embed glyphs; no external font assets
})


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def shrinkage_map_figure(path, s, picks):
    """Shrinkage maps vs eigenvalue for a handful of times.

    picks: iterable of (t, phi_mgf_row, phi_ridge_row, phi_gf_row).
    """
    fig, ax = plt.subplots()
    cmap = plt.cm.viridis
    n = max(len(picks) - 1, 1)
    for k, (t, phi_m, phi_r, phi_g) in enumerate(picks):
        c = cmap(k / n)
        ax.plot(s, phi_m, color=c, label=f"flow t={t:g}")
        ax.plot(s, phi_r, color=c, linestyle="--", label=f"ridge 2/t^2, t={t:g}")
        ax.plot(s, phi_g, color=c, linestyle=":", alpha=0.7)
    ax.set_xscale("log")
    ax.set_xlabel("eigenvalue s")
    ax.set_ylabel("shrinkage")
    ax.set_title("Spectral shrinkage: flow (solid), calibrated ridge (dashed), GF (dotted)")
    ax.legend(ncol=2)
    _save(fig, path)


def risk_curves_figure(path, t, cols):
    """Bayes risk curves vs time and vs expected squared norm."""
    fig, (ax1, ax2) = plt.subplots(1, 2)
    ax1.plot(t, cols["bayes_mgf"], label="flow")
    ax1.plot(t, cols["bayes_ridge_at_2_over_t2"], "--", label="ridge 2/t^2")
    ax1.plot(t, cols["bayes_gf"], label="GF")
    ax1.plot(t, cols["bayes_ridge_at_1_over_t"], "--", label="ridge 1/t")
    ax1.plot(t, cols["asymptotic_mgf"], ":", color="k", label="flow limit")
    ax1.plot(t, cols["asymptotic_ridge"], ":", color="gray", label="ridge limit")
    ax1.set_xscale("log")
    ax1.set_xlabel("t")
    ax1.set_ylabel("Bayes risk")
    ax1.legend()
    ax2.plot(cols["expected_norm_mgf"], cols["bayes_mgf"], label="flow")
    ax2.plot(cols["expected_norm_ridge"], cols["bayes_ridge_at_2_over_t2"], "--",
             label="ridge")
    ax2.set_xlabel("E ||estimate||^2")
    ax2.set_ylabel("Bayes risk")
    ax2.legend()
    _save(fig, path)


def bounds_figure(path, t, ratio_by_kind, bound):
    """Calibrated flow/ridge risk ratios vs time with the bound constant."""
    fig, ax = plt.subplots()
    for kind, ratio in ratio_by_kind.items():
        ax.plot(t, ratio, label=kind)
    ax.axhline(bound, color="k", linestyle="--", label=f"bound {bound:g}")
    ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("risk ratio (flow / calibrated ridge)")
    ax.legend()
    _save(fig, path)


def discretization_figure(path, eps, gaps):
    """Flow/iteration gap vs step size with a first-order reference slope."""
    fig, ax = plt.subplots()
    ax.loglog(eps, gaps, "o-", label="max gap")
    ref = gaps[0] * (eps / eps[0])
    ax.loglog(eps, ref, "--", color="gray", label="slope 1")
    ax.set_xlabel("step size")
    ax.set_ylabel("max ||flow - iterate||")
    ax.legend()
    _save(fig, path)


def mp_compare_figure(path, blocks):
    """Finite-sample vs limiting Bayes risks.

    blocks: iterable of (gamma, t, finite_mgf, limit_mgf, finite_ridge,
    limit_ridge).
    """
    fig, ax = plt.subplots()
    for gamma, t, fin_m, lim_m, fin_r, lim_r in blocks:
        ax.plot(t, fin_m, label=f"flow, gamma={gamma:g}")
        ax.plot(t, lim_m, "--", label=f"flow limit, gamma={gamma:g}")
        ax.plot(t, fin_r, alpha=0.7, label=f"ridge, gamma={gamma:g}")
        ax.plot(t, lim_r, "--", alpha=0.7, label=f"ridge limit, gamma={gamma:g}")
    ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("Bayes risk")
    ax.legend()
    _save(fig, path)
