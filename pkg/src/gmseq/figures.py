"""PNG figure rendering for the report command.

Uses the Agg backend so plots render headless; files land next to the
delimited output with fixed names.  Styling stays close to matplotlib
defaults apart from a readable figure size.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .membership import DefectReport
from .series import ConvergenceReport

__all__ = ["defect_figure", "convergence_figure", "divergence_figure"]

_GOLDEN = (math.sqrt(5) - 1) / 2
_WIDTH = 7.0
_DPI = 150


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=(_WIDTH, _WIDTH * _GOLDEN))
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def defect_figure(report: DefectReport, path, title: str = "defect profile") -> None:
    """Log-log ratio against window start m, with the fitted slope."""
    ms = [s.m for s in report.samples if math.isfinite(s.ratio) and s.ratio > 0]
    ratios = [s.ratio for s in report.samples if math.isfinite(s.ratio) and s.ratio > 0]
    fig, ax = _new_axes(title)
    if ms:
        ax.loglog(ms, ratios, "o-", label="variation / majorant")
    ax.set_xlabel("window start m")
    ax.set_ylabel("defect ratio")
    ax.annotate(
        f"verdict: {report.verdict}\nslope: {report.slope:.3f}",
        xy=(0.02, 0.95),
        xycoords="axes fraction",
        va="top",
    )
    if ms:
        ax.legend(loc="lower right")
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def convergence_figure(
    report: ConvergenceReport, path, title: str = "tail diagnostics"
) -> None:
    """Remainder and decay moduli against the cut index, log-log."""
    fig, ax = _new_axes(title)
    ax.loglog(report.n_grid, report.sup_remainder, "o-", label="sup remainder")
    if any(v > 0 for v in report.eps1):
        ax.loglog(report.n_grid, report.eps1, "s--", label="eps1")
    if report.eps2 and any(v > 0 for v in report.eps2):
        ax.loglog(report.n_grid, report.eps2, "d--", label="eps2")
    if any(v > 0 for v in report.nbn_sup):
        ax.loglog(report.n_grid, report.nbn_sup, "^:", label="sup of k|b_k|")
    ax.set_xlabel("cut index n")
    ax.set_ylabel("value")
    ax.annotate(
        f"verdict: {report.verdict}",
        xy=(0.02, 0.05),
        xycoords="axes fraction",
    )
    ax.legend(loc="upper right")
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def divergence_figure(
    Ns, partial_sums, Ks, minorants, path, title: str = "checkpointed partial sums"
) -> None:
    """Partial sums at sparse checkpoints next to the positive minorant."""
    fig, ax = _new_axes(title)
    ax.semilogx(Ns, partial_sums, "o-", label="partial sum at 2*pi/3")
    ax.semilogx([3 * k + 3 for k in Ks], minorants, "s--", label="minorant partial sum")
    ax.set_xlabel("truncation N")
    ax.set_ylabel("value")
    ax.legend(loc="lower right")
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
