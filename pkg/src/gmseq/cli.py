"""Command-line front end exposing the experiments as reproducible commands.

Commands
--------
defect    profile the r-step variation against beta_star(r, c) on a dyadic grid
embed     window ratio sum_{i<r} beta(n+i) / beta(n) for beta = beta_star(1, c)
lemma1    Abel block-identity residual suite on seeded random series
converge  tail diagnostics and a convergence verdict for a coefficient family
diverge   checkpointed partial sums at x0 = 2*pi/3 beside the positive minorant
report    defect + converge (+ diverge for the boosted family), each with a
          PNG figure rendered next to the delimited output

Families (``--family``): thm2 (notched inverse square, parameter --r2),
thm3 (same construction, parameter --r1), remark3 (boosted log-harmonic),
remark4 (punctured log-harmonic, parameter --family-r, defaulting to
--r), powerlog (--p/--q), random (--seed/--length/--amplitude).

Configuration may also come from a flat ``key=value`` file (``--config``,
``#`` comments, no sections).  Precedence: flags override file values
override built-in defaults; unknown keys are rejected.

Frozen CSV column orders (append-only):
  defect:   m,lhs,beta,ratio
  embed:    n,beta,window_ratio
  lemma1:   trial,n,r,x,residual
  converge: n,eps1,eps2,sup_remainder,side_condition_partial,nbn_sup
  diverge:  j,N,partial_sum,K,minorant

Each run prints one machine-greppable summary line of space-separated
``key=value`` tokens, starting with ``verdict=`` where a verdict exists
(the report command prefixes each line with ``report=<part>``).

Exit status: 0 success; 1 usage error; 2 numerical guard tripped under
--strict (singularity, or a truncated sup attained at its cap); 3 output
I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import membership, reports, series
from .membership import BetaSpec, beta_star, beta_window_ratio, defect_profile, dyadic_grid
from .sequences import (
    RealSequence,
    boosted_log_harmonic,
    notched_inverse_square,
    power_log,
    punctured_log_harmonic,
    random_uniform,
)
from .series import (
    ABEL_RESIDUAL_TOL,
    DIVERGENCE_MIN_INCREASE,
    EvalGrid,
    SineSeries,
    SingularityError,
    abel_identity_suite,
    convergence_report,
    divergence_minorant,
    partial_sums_checkpointed,
)

__all__ = ["RunConfig", "UsageError", "parse_config", "run", "main"]

COMMANDS = ("defect", "embed", "lemma1", "converge", "diverge", "report")
FAMILIES = ("thm2", "thm3", "remark3", "remark4", "powerlog", "random")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_IO = 3


class UsageError(Exception):
    """Malformed or contradictory configuration."""


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    r: int = 1
    r1: int | None = None
    r2: int | None = None
    family_r: int | None = None
    p: float = 1.0
    q: float = 0.0
    length: int = 1024
    amplitude: float = 1.0
    c: float = 2.0
    m_max: int = 2**13
    n_max: int = 2**10
    grid_size: int = 1024
    N_max: int = 2**16
    cap: int = 2**20
    seed: int = 0
    trials: int = 200
    slope_bounded: float = membership.DEFAULT_SLOPE_BOUNDED
    slope_growing: float = membership.DEFAULT_SLOPE_GROWING
    ratio_cap: float = membership.DEFAULT_RATIO_CAP
    out: str | None = None
    format: str = "csv"
    strict: bool = False


_DEFAULTS = {f.name: f.default for f in fields(RunConfig) if f.name != "command"}

_INT_KEYS = {
    "r", "r1", "r2", "family_r", "length", "m_max", "n_max", "grid_size",
    "N_max", "cap", "seed", "trials",
}
_FLOAT_KEYS = {"p", "q", "amplitude", "c", "slope_bounded", "slope_growing", "ratio_cap"}
_STR_KEYS = {"family", "out", "format"}
_BOOL_KEYS = {"strict"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _BOOL_KEYS

# flags a family may legitimately receive beyond the shared set
_FAMILY_FLAGS = {
    "thm2": {"r2"},
    "thm3": {"r1"},
    "remark3": set(),
    "remark4": {"family_r"},
    "powerlog": {"p", "q"},
    "random": {"length", "amplitude"},
}
_FAMILY_ONLY_FLAGS = {"r1", "r2", "family_r", "p", "q", "length", "amplitude"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); map to usage errors
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gmseq", description="sequence-class and sine-series lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, add_help=True)
        p.error = parser.error
        p.add_argument("--family", choices=FAMILIES, default=None)
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--r1", type=int, default=None)
        p.add_argument("--r2", type=int, default=None)
        p.add_argument("--family-r", dest="family_r", type=int, default=None)
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--q", type=float, default=None)
        p.add_argument("--length", type=int, default=None)
        p.add_argument("--amplitude", type=float, default=None)
        p.add_argument("--c", type=float, default=None)
        p.add_argument("--m-max", dest="m_max", type=int, default=None)
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--grid-size", dest="grid_size", type=int, default=None)
        p.add_argument("--N-max", dest="N_max", type=int, default=None)
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--slope-bounded", dest="slope_bounded", type=float, default=None)
        p.add_argument("--slope-growing", dest="slope_growing", type=float, default=None)
        p.add_argument("--ratio-cap", dest="ratio_cap", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--config", default=None)
        p.add_argument("--strict", action="store_const", const=True, default=None)
    return parser


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _BOOL_KEYS:
                if value.lower() not in ("true", "false"):
                    raise ValueError(value)
                values[key] = value.lower() == "true"
            else:
                values[key] = value
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _validate(cfg: RunConfig, explicit: set[str]) -> None:
    if not cfg.c > 1:
        raise UsageError(f"c must exceed 1, got {cfg.c}")
    if cfg.r < 1:
        raise UsageError(f"r must be >= 1, got {cfg.r}")
    for key in ("m_max", "n_max", "grid_size", "N_max", "cap", "trials", "length"):
        if getattr(cfg, key) < 1:
            raise UsageError(f"{key} must be >= 1, got {getattr(cfg, key)}")
    if not cfg.amplitude > 0:
        raise UsageError(f"amplitude must be > 0, got {cfg.amplitude}")
    if cfg.p < 0 or cfg.q < 0:
        raise UsageError(f"p and q must be >= 0, got p={cfg.p}, q={cfg.q}")
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {cfg.format!r}")
    if not cfg.slope_bounded < cfg.slope_growing:
        raise UsageError("slope-bounded must be below slope-growing")

    if cfg.family is not None and cfg.family not in FAMILIES:
        raise UsageError(f"unknown family {cfg.family!r}")
    needs_family = cfg.command in ("defect", "embed", "converge", "report")
    if needs_family and cfg.family is None:
        raise UsageError(f"command {cfg.command} requires --family")
    if cfg.command == "lemma1" and cfg.family is not None:
        raise UsageError("lemma1 draws its own random series; --family is contradictory")
    if cfg.command == "diverge" and cfg.family not in (None, "remark3"):
        raise UsageError("diverge evaluates the remark3 family only")

    if cfg.family is not None:
        allowed = _FAMILY_FLAGS[cfg.family]
        stray = (explicit & _FAMILY_ONLY_FLAGS) - allowed
        if stray:
            raise UsageError(
                f"flag(s) {sorted(stray)} do not apply to family {cfg.family!r}"
            )
    if cfg.family == "thm2" and cfg.r2 is None:
        raise UsageError("family thm2 requires --r2")
    if cfg.family == "thm3" and cfg.r1 is None:
        raise UsageError("family thm3 requires --r1")
    if cfg.r1 is not None and cfg.r1 < 1:
        raise UsageError(f"r1 must be >= 1, got {cfg.r1}")
    if cfg.r2 is not None and cfg.r2 < 1:
        raise UsageError(f"r2 must be >= 1, got {cfg.r2}")
    if cfg.family == "remark4":
        fr = cfg.family_r if cfg.family_r is not None else cfg.r
        if fr < 3:
            raise UsageError(f"remark4 needs a family step >= 3, got {fr}")
    if cfg.command == "converge" and cfg.N_max < 2 * cfg.n_max:
        raise UsageError(
            f"N-max must be at least twice n-max ({2 * cfg.n_max}), got {cfg.N_max}"
        )


def parse_config(argv: list[str], file: str | None = None) -> RunConfig:
    """Assemble a RunConfig: flags override file values override defaults."""
    ns = _build_parser().parse_args(argv)
    cli_values = {
        k: v for k, v in vars(ns).items() if k not in ("command", "config") and v is not None
    }
    config_path = ns.config if ns.config is not None else file
    file_values = _parse_config_file(config_path) if config_path else {}

    merged = dict(_DEFAULTS)
    merged.update(file_values)
    merged.update(cli_values)
    cfg = RunConfig(command=ns.command, **merged)
    _validate(cfg, explicit=set(cli_values) | set(file_values))
    return cfg


# ---------------------------------------------------------------------------
# command execution


def _build_family(cfg: RunConfig) -> RealSequence:
    if cfg.family == "thm2":
        return notched_inverse_square(cfg.r2)
    if cfg.family == "thm3":
        return notched_inverse_square(cfg.r1)
    if cfg.family == "remark3":
        return boosted_log_harmonic()
    if cfg.family == "remark4":
        return punctured_log_harmonic(cfg.family_r if cfg.family_r is not None else cfg.r)
    if cfg.family == "powerlog":
        return power_log(cfg.p, cfg.q)
    if cfg.family == "random":
        return random_uniform(cfg.seed, cfg.length, cfg.amplitude)
    raise UsageError(f"no family configured for command {cfg.command}")


def _out_path(cfg: RunConfig, default_stem: str) -> Path:
    if cfg.out is not None:
        return Path(cfg.out)
    return Path(f"{default_stem}.{cfg.format}")


def _write(cfg: RunConfig, path: Path, header, rows, payload: dict) -> None:
    if cfg.format == "csv":
        reports.write_csv(path, header, rows)
    else:
        reports.write_json(path, payload)


def _fmt(x: float) -> str:
    return reports.format_real(x)


def _converge_n_grid(cfg: RunConfig) -> list[int]:
    grid = [m for m in dyadic_grid(cfg.n_max) if m >= 16]
    return grid if grid else dyadic_grid(cfg.n_max)


def _run_defect(cfg: RunConfig, out: Path) -> tuple[str, list[str]]:
    seq = _build_family(cfg)
    rep = defect_profile(
        seq,
        cfg.r,
        BetaSpec.star(cfg.r, cfg.c),
        dyadic_grid(cfg.m_max),
        slope_growing=cfg.slope_growing,
        slope_bounded=cfg.slope_bounded,
        ratio_cap=cfg.ratio_cap,
    )
    _write(cfg, out, reports.DEFECT_HEADER, reports.defect_rows(rep), reports.defect_dict(rep))
    summary = f"verdict={rep.verdict} max_ratio={_fmt(rep.max_ratio)} slope={_fmt(rep.slope)}"
    return summary, []


def _run_embed(cfg: RunConfig, out: Path) -> tuple[str, list[str]]:
    seq = _build_family(cfg)
    betas = {}

    def beta_fn(n: int) -> float:
        if n not in betas:
            betas[n] = beta_star(seq, n, 1, cfg.c)
        return betas[n]

    n_grid = dyadic_grid(cfg.n_max)
    rep = beta_window_ratio(beta_fn, cfg.r, n_grid)
    rows = [[s.n, beta_fn(s.n), s.ratio] for s in rep.samples]
    payload = reports.ratio_dict(rep)
    payload["beta"] = [beta_fn(s.n) for s in rep.samples]
    _write(cfg, out, reports.EMBED_HEADER, rows, payload)
    verdict = "flagged" if rep.flagged else "bounded"
    return f"verdict={verdict} max_ratio={_fmt(rep.max_ratio)}", []


def _run_lemma1(cfg: RunConfig, out: Path) -> tuple[str, list[str]]:
    result = abel_identity_suite(trials=cfg.trials, seed=cfg.seed)
    _write(cfg, out, reports.SUITE_HEADER, reports.suite_rows(result), reports.suite_dict(result))
    ok = "true" if result.max_residual <= ABEL_RESIDUAL_TOL else "false"
    return f"max_residual={_fmt(result.max_residual)} pass={ok}", []


def _run_converge(cfg: RunConfig, out: Path) -> tuple[str, list[str]]:
    seq = _build_family(cfg)
    rep = convergence_report(
        SineSeries(seq),
        cfg.r,
        cfg.c,
        _converge_n_grid(cfg),
        EvalGrid.chebyshev(cfg.grid_size, r=cfg.r),
        cfg.N_max,
        cfg.cap,
    )
    _write(
        cfg, out, reports.CONVERGENCE_HEADER, reports.convergence_rows(rep),
        reports.convergence_dict(rep),
    )
    final = rep.sup_remainder[-1] if rep.sup_remainder else 0.0
    guards = ["truncated sup attained its cap"] if rep.cap_attained else []
    return f"verdict={rep.verdict} final_remainder={_fmt(final)}", guards


def _diverge_data(cap: int) -> dict:
    js = [j for j in range(1, 7) if 10**j <= cap]
    if not js:
        raise UsageError(f"cap {cap} leaves no checkpoint; need cap >= 10")
    x0 = 2.0 * math.pi / 3.0
    s = SineSeries(boosted_log_harmonic())
    Ns = [3 * 10**j + 3 for j in js]
    sums = [float(v) for v in partial_sums_checkpointed(s, Ns, x0)]
    Ks = [10**j for j in js]
    minor = [divergence_minorant(K) for K in Ks]
    climb = sums[-1] - sums[0]
    increasing = all(b > a for a, b in zip(sums, sums[1:]))
    witness = increasing and climb >= DIVERGENCE_MIN_INCREASE
    verdict = series.VERDICT_DIVERGENCE if witness else series.VERDICT_INCONCLUSIVE_CONV
    return {
        "j": js, "N": Ns, "partial_sum": sums, "K": Ks, "minorant": minor,
        "verdict": verdict, "climb": climb,
    }


def _run_diverge(cfg: RunConfig, out: Path) -> tuple[str, list[str]]:
    data = _diverge_data(cfg.cap)
    rows = [
        list(row)
        for row in zip(data["j"], data["N"], data["partial_sum"], data["K"], data["minorant"])
    ]
    payload = {k: data[k] for k in ("j", "N", "partial_sum", "K", "minorant", "verdict")}
    _write(cfg, out, reports.DIVERGE_HEADER, rows, payload)
    return f"verdict={data['verdict']} climb={_fmt(data['climb'])}", []


def _run_report(cfg: RunConfig) -> tuple[list[str], list[str]]:
    from . import figures  # deferred: pulls in matplotlib

    out_dir = Path(cfg.out) if cfg.out is not None else Path("report_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    lines: list[str] = []
    guards: list[str] = []

    seq = _build_family(cfg)
    defect = defect_profile(
        seq,
        cfg.r,
        BetaSpec.star(cfg.r, cfg.c),
        dyadic_grid(cfg.m_max),
        slope_growing=cfg.slope_growing,
        slope_bounded=cfg.slope_bounded,
        ratio_cap=cfg.ratio_cap,
    )
    _write(
        cfg, out_dir / f"defect.{cfg.format}", reports.DEFECT_HEADER,
        reports.defect_rows(defect), reports.defect_dict(defect),
    )
    figures.defect_figure(defect, out_dir / "defect.png", title=seq.name)
    lines.append(
        f"report=defect verdict={defect.verdict} "
        f"max_ratio={_fmt(defect.max_ratio)} slope={_fmt(defect.slope)}"
    )

    conv = convergence_report(
        SineSeries(seq),
        cfg.r,
        cfg.c,
        _converge_n_grid(cfg),
        EvalGrid.chebyshev(cfg.grid_size, r=cfg.r),
        cfg.N_max,
        cfg.cap,
    )
    _write(
        cfg, out_dir / f"convergence.{cfg.format}", reports.CONVERGENCE_HEADER,
        reports.convergence_rows(conv), reports.convergence_dict(conv),
    )
    figures.convergence_figure(conv, out_dir / "convergence.png", title=seq.name)
    if conv.cap_attained:
        guards.append("truncated sup attained its cap")
    final = conv.sup_remainder[-1] if conv.sup_remainder else 0.0
    lines.append(
        f"report=convergence verdict={conv.verdict} final_remainder={_fmt(final)}"
    )

    if cfg.family == "remark3":
        data = _diverge_data(cfg.cap)
        rows = [
            list(row)
            for row in zip(data["j"], data["N"], data["partial_sum"], data["K"], data["minorant"])
        ]
        payload = {k: data[k] for k in ("j", "N", "partial_sum", "K", "minorant", "verdict")}
        _write(cfg, out_dir / f"divergence.{cfg.format}", reports.DIVERGE_HEADER, rows, payload)
        figures.divergence_figure(
            data["N"], data["partial_sum"], data["K"], data["minorant"],
            out_dir / "divergence.png",
        )
        lines.append(
            f"report=divergence verdict={data['verdict']} climb={_fmt(data['climb'])}"
        )

    return lines, guards


def run(config: RunConfig) -> int:
    """Execute the configured command; returns the documented exit status."""
    try:
        guards: list[str] = []
        if config.command == "report":
            lines, guards = _run_report(config)
            for line in lines:
                print(line)
        else:
            runner = {
                "defect": _run_defect,
                "embed": _run_embed,
                "lemma1": _run_lemma1,
                "converge": _run_converge,
                "diverge": _run_diverge,
            }[config.command]
            summary, guards = runner(config, _out_path(config, config.command))
            print(summary)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularityError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_GUARD if config.strict else EXIT_OK
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    if guards:
        for g in guards:
            print(f"warning: {g}", file=sys.stderr)
        if config.strict:
            return EXIT_GUARD
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)
