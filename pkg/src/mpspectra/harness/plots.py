"""Static figures written next to the CSV/JSON output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .results import DiagnoseResult, NormcheckResult, ResidualResult, SweepResult, VarcheckResult  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (4.8, 3.2),
    "savefig.dpi": 150,
    # keep PNG/SVG output free of timestamps
    "svg.hashsalt": "mpspectra",
}


def _sweep(ax, result: SweepResult):
    n = np.array([r.n for r in result.rows])
    avg = np.array([r.kdist_of_average for r in result.rows])
    single = np.array([r.kdist_mean_single for r in result.rows])
    ax.errorbar(n, single, yerr=[2 * r.se_single for r in result.rows], marker="o", ms=3, label="mean single trial")
    ax.errorbar(n, avg, yerr=[2 * r.se for r in result.rows], marker="s", ms=3, label="averaged ESD")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("Kolmogorov distance")
    ax.legend(frameon=False)


def _residual(ax, result: ResidualResult):
    for n, rep in result.reports.items():
        u = [p.real for p in rep.grid.points]
        ax.semilogy(u, rep.residuals, marker=".", ms=3, label=f"n={n}")
    ax.set_xlabel("Re z")
    ax.set_ylabel("self-consistency residual")
    ax.legend(frameon=False)


def _varcheck(ax, result: VarcheckResult):
    for beta, cells in result.table.normalized_by_beta().items():
        ns = sorted(cells)
        ax.loglog(ns, [cells[n] for n in ns], marker="o", ms=3, label=f"beta={beta}")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$n\,\mathrm{Var}\,(\mathrm{Im}\,z)^2/(\beta+1)^2$")
    ax.legend(frameon=False)


def _normcheck(ax, result: NormcheckResult):
    n = [r.n for r in result.rows]
    ax.plot(n, [r.mean_norm for r in result.rows], marker="o", ms=3, label="mean")
    ax.plot(n, [r.max_norm for r in result.rows], marker="^", ms=3, label="max")
    c = float(result.info.aspect)
    ax.axhline((1 + c**0.5) ** 2, color="0.5", lw=0.8, ls="--", label="right edge")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\|AA^T\|/n$")
    ax.legend(frameon=False)


def _diagnose(ax, result: DiagnoseResult):
    names = ["q_hat", "pair_corr_sup", "quad_mixed_sup", "rho_hat"]
    width = 0.8 / max(1, len(result.reports))
    for k, (n, rep) in enumerate(result.reports.items()):
        xs = np.arange(len(names)) + k * width
        ax.bar(xs, [getattr(rep, m) for m in names], width, label=f"n={n}")
    ax.set_xticks(np.arange(len(names)) + 0.4 - width / 2)
    ax.set_xticklabels(names, rotation=20)
    ax.legend(frameon=False)


_DRAW = {
    SweepResult: _sweep,
    ResidualResult: _residual,
    VarcheckResult: _varcheck,
    NormcheckResult: _normcheck,
    DiagnoseResult: _diagnose,
}


def render(result, path) -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        _DRAW[type(result)](ax, result)
        ax.set_title(f"{result.info.experiment} {result.info.kind}", fontsize=9)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)


def render_law(table: dict, c: float, path) -> None:
    with plt.rc_context(STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=(7.0, 3.0))
        left.plot(table["x"], table["density"])
        left.set_xlabel("x")
        left.set_ylabel("density")
        right.plot(table["x"], table["cdf"])
        right.set_xlabel("x")
        right.set_ylabel("distribution function")
        fig.suptitle(f"Marchenko-Pastur law, c={c:g}", fontsize=9)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
