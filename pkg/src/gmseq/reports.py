"""Deterministic CSV and JSON serialization of report objects.

CSV contract: header row, comma separators, LF line endings, reals in
scientific notation with 17 significant digits (round-trip exact for
doubles), integers as plain decimals.  Column orders are frozen per
report type and extending them is append-only.  JSON mirrors the report
fields as arrays; non-finite reals become ``null`` there (JSON has no
inf), while CSV spells them ``inf``/``nan``.

Identical reports serialize to byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

from .membership import DefectReport, RatioReport
from .series import AbelSuiteResult, ConvergenceReport

__all__ = [
    "format_real",
    "write_csv",
    "write_json",
    "defect_rows",
    "defect_dict",
    "convergence_rows",
    "convergence_dict",
    "suite_rows",
    "suite_dict",
    "DEFECT_HEADER",
    "CONVERGENCE_HEADER",
    "SUITE_HEADER",
    "EMBED_HEADER",
    "DIVERGE_HEADER",
]

DEFECT_HEADER = ["m", "lhs", "beta", "ratio"]
CONVERGENCE_HEADER = [
    "n",
    "eps1",
    "eps2",
    "sup_remainder",
    "side_condition_partial",
    "nbn_sup",
]
SUITE_HEADER = ["trial", "n", "r", "x", "residual"]
EMBED_HEADER = ["n", "beta", "window_ratio"]
DIVERGE_HEADER = ["j", "N", "partial_sum", "K", "minorant"]


def format_real(x: float) -> str:
    """17-significant-digit scientific rendering; round-trips any double."""
    return f"{float(x):.16e}"


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_real(v)
    return str(v)


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def write_json(path, obj: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_json_safe(obj), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# per-report tables


def defect_rows(report: DefectReport) -> list[list[Any]]:
    return [[s.m, s.lhs, s.beta, s.ratio] for s in report.samples]


def defect_dict(report: DefectReport) -> dict:
    return {
        "m": [s.m for s in report.samples],
        "lhs": [s.lhs for s in report.samples],
        "beta": [s.beta for s in report.samples],
        "ratio": [s.ratio for s in report.samples],
        "max_ratio": report.max_ratio,
        "slope": report.slope,
        "verdict": report.verdict,
    }


def convergence_rows(report: ConvergenceReport) -> list[list[Any]]:
    # eps2 is empty for steps r <= 2; the frozen column is filled with nan
    eps2 = report.eps2 if report.eps2 else [math.nan] * len(report.n_grid)
    return [
        [n, e1, e2, rem, side, nbn]
        for n, e1, e2, rem, side, nbn in zip(
            report.n_grid,
            report.eps1,
            eps2,
            report.sup_remainder,
            report.side_condition_partials,
            report.nbn_sup,
        )
    ]


def convergence_dict(report: ConvergenceReport) -> dict:
    return {
        "n_grid": list(report.n_grid),
        "eps1": list(report.eps1),
        "eps2": list(report.eps2),
        "sup_remainder": list(report.sup_remainder),
        "side_condition_partials": list(report.side_condition_partials),
        "nbn_sup": list(report.nbn_sup),
        "verdict": report.verdict,
    }


def suite_rows(result: AbelSuiteResult) -> list[list[Any]]:
    return [
        [int(t), int(n), int(r), float(x), float(res)]
        for t, n, r, x, res in zip(
            result.trial, result.n, result.r, result.x, result.residual
        )
    ]


def suite_dict(result: AbelSuiteResult) -> dict:
    return {
        "trial": [int(v) for v in result.trial],
        "n": [int(v) for v in result.n],
        "r": [int(v) for v in result.r],
        "x": [float(v) for v in result.x],
        "residual": [float(v) for v in result.residual],
        "max_residual": result.max_residual,
    }


def ratio_dict(report: RatioReport) -> dict:
    return {
        "n": [s.n for s in report.samples],
        "ratio": [s.ratio for s in report.samples],
        "max_ratio": report.max_ratio,
        "flagged": list(report.flagged),
    }
