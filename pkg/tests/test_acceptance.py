"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  Every tolerance is pinned here; the few frozen constants (the
minorant climb, the remainder tolerance split) were established first by
direct-summation oracles and recorded next to their assertions.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from gmseq.cli import EXIT_GUARD, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from gmseq.membership import (
    BetaSpec,
    beta_star,
    beta_value,
    block_asymmetry_partial,
    block_asymmetry_tail,
    defect_profile,
    dyadic_grid,
    r_variation,
    tail_nbn_sup,
    weak_monotone_bound_check,
)
from gmseq.sequences import (
    boosted_log_harmonic,
    notched_inverse_square,
    power_log,
    punctured_log_harmonic,
    random_uniform,
)
from gmseq.series import (
    EvalGrid,
    SineSeries,
    abel_identity_suite,
    convergence_report,
    divergence_minorant,
    remainder_profile,
    telescoped_partial_sum_identity,
)

M_GRID = dyadic_grid(2**13)

BASELINES = {
    "1/n": power_log(1, 0),
    "1/n^2": power_log(2, 0),
    "1/(n ln(n+1))": power_log(1, 1),
}

# families shared across criteria so value caches are built once
NOTCHED = {r: notched_inverse_square(r) for r in (2, 3, 4)}
PUNCTURED = {r: punctured_log_harmonic(r) for r in (3, 4, 5)}
BOOSTED = boosted_log_harmonic()

ACCEPTANCE_SEQUENCES = list(BASELINES.values()) + list(NOTCHED.values()) + list(
    PUNCTURED.values()
) + [BOOSTED]


@contextmanager
def criterion(num, slug):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {num} {slug}: FAIL")
        raise
    print(f"\nACCEPTANCE {num} {slug}: PASS")


def test_01_abel_identity_suite():
    with criterion(1, "abel-identity-suite"):
        start = time.perf_counter()
        result = abel_identity_suite(trials=200, seed=20240811)
        elapsed = time.perf_counter() - start
        assert result.residual.shape == (200 * 64 * 8,)
        assert np.all(np.abs(np.sin(result.r * result.x / 2.0)) >= 1e-3)
        assert result.max_residual <= 1e-10, result.max_residual
        assert elapsed < 10.0, f"suite took {elapsed:.2f}s"


def test_02_monotone_baseline_telescoping_bound():
    with criterion(2, "monotone-telescoping-bound"):
        for name, seq in BASELINES.items():
            for r in (1, 2, 3, 4):
                rep = defect_profile(seq, r, BetaSpec.star(r, 2.0), M_GRID)
                worst = max(s.ratio for s in rep.samples)
                assert worst <= 1 + 1e-12, (name, r, worst)


def _assert_separation(seq, r_bounded, r_growing, slope_growing_min=0.8):
    bounded = defect_profile(seq, r_bounded, BetaSpec.star(r_bounded, 2.0), M_GRID)
    assert bounded.verdict == "bounded", (seq.name, r_bounded, bounded.verdict)
    assert -0.2 <= bounded.slope <= 0.2, bounded.slope
    growing = defect_profile(seq, r_growing, BetaSpec.star(r_growing, 2.0), M_GRID)
    assert growing.verdict == "growing", (seq.name, r_growing, growing.verdict)
    assert growing.slope >= slope_growing_min, growing.slope


def test_03_divisible_step_separation():
    with criterion(3, "divisible-step-separation"):
        n_max = 10**4
        for r1, r2 in ((1, 2), (2, 4)):
            seq = NOTCHED[r2]
            _assert_separation(seq, r_bounded=r2, r_growing=r1)

            # pointwise lower bound on the r1-step variation, via one
            # cumulative pass over |a_k - a_{k+r1}|
            vals = seq.values(2 * n_max - 1 + r1)
            diffs = np.abs(vals[:-r1] - vals[r1:])
            cum = np.concatenate([[0.0], np.cumsum(diffs)])
            ns = np.arange(5 * r1, n_max + 1)
            lhs = cum[2 * ns - 1] - cum[ns - 1]
            assert np.all(lhs >= 1.0 / (4.0 * ns * r2))
            # the cumulative route must agree with the profiled operation
            for n in (5 * r1, 64, 1024, n_max):
                direct = r_variation(seq, int(n), r1)
                assert direct == pytest.approx(
                    float(cum[2 * n - 1] - cum[n - 1]), rel=1e-12
                )

            # majorant side stays under 3 (r1 + c^4) / n^2 for c = 2
            c = 2.0
            weighted = vals / np.arange(1, vals.shape[0] + 1)
            cum_a = np.concatenate([[0.0], np.cumsum(vals)])
            cum_w = np.concatenate([[0.0], np.cumsum(weighted)])
            ns2 = np.arange(2, n_max + 1)
            lo = np.maximum(1, ns2 // 2)
            hi = 2 * ns2
            beta_side = (cum_a[ns2 + r1 - 1] - cum_a[ns2 - 1]) + (
                cum_w[hi] - cum_w[lo - 1]
            )
            assert np.all(beta_side <= 3.0 * (r1 + c**4) / ns2**2)
            for n in (2, 64, 4096):
                assert beta_star(seq, n, r1, c) == pytest.approx(
                    float(beta_side[n - 2]), rel=1e-12
                )


def test_04_incomparable_steps():
    with criterion(4, "incomparable-steps"):
        _assert_separation(NOTCHED[3], r_bounded=3, r_growing=2)
        _assert_separation(NOTCHED[2], r_bounded=2, r_growing=3)


def test_05_divergence_at_two_thirds_pi():
    with criterion(5, "divergence-witness"):
        for M in (10, 10**2, 10**3, 10**4):
            lhs, rhs = telescoped_partial_sum_identity(M)
            assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs)), M

        lo = divergence_minorant(10**3)
        hi = divergence_minorant(10**6)
        assert hi > lo
        # frozen from the direct-summation oracle: the climb between the
        # two checkpoints is 0.359088...
        assert 0.355 <= hi - lo <= 0.363, hi - lo

        rep = convergence_report(
            SineSeries(BOOSTED),
            3,
            2.0,
            [16, 32, 64, 128, 256],
            EvalGrid.chebyshev(32, r=3),
            2**13,
            2**14,
        )
        assert 2 * math.pi / 3 in EvalGrid.chebyshev(32, r=3).points
        assert rep.verdict == "divergence_witness"


def test_06_punctured_family_triple_check():
    with criterion(6, "punctured-family-triple-check"):
        ns = np.arange(1, 10**5 + 1, dtype=np.float64)
        majorant = float(np.sum(1.0 / (ns * ns * np.log(ns + 1.0))))
        for r in (3, 4, 5):
            seq = PUNCTURED[r]
            own = defect_profile(seq, r, BetaSpec.star(r, 2.0), M_GRID)
            assert own.verdict == "bounded", (r, own.verdict)
            assert own.slope <= 0.2, own.slope

            partial = block_asymmetry_partial(seq, r, 10**5)
            assert partial <= majorant, (r, partial, majorant)

            for c in (2.0, 4.0, 8.0):
                two = defect_profile(seq, 2, BetaSpec.star(2, c), M_GRID)
                assert two.verdict == "growing", (r, c, two.verdict)
                assert two.slope >= 0.7, (r, c, two.slope)


def test_07_weak_monotone_window_bound():
    with criterion(7, "weak-monotone-window-bound"):
        cases = [(seq, 1) for seq in BASELINES.values()]
        cases += [(PUNCTURED[r], r) for r in (3, 4, 5)]
        for seq, r in cases:
            rep = weak_monotone_bound_check(seq, r, 2.0, range(r + 1, 10**4 + 1))
            assert rep.max_ratio <= 1.0, (seq.name, r, rep.max_ratio)
            assert not rep.flagged


def test_08_remainder_epsilon_consistency():
    with criterion(8, "remainder-epsilon-consistency"):
        n_grid = [2**j for j in range(4, 11)]
        for seq, r in ((BASELINES["1/(n ln(n+1))"], 2), (PUNCTURED[3], 3)):
            grid = EvalGrid.chebyshev(1024, r=r)
            rem = remainder_profile(SineSeries(seq), n_grid, grid, 2**16)
            assert np.all(np.diff(rem) <= 0), (seq.name, list(rem))

            eps = []
            for n in n_grid:
                e1 = tail_nbn_sup(seq, n, 2.0, 2**20)
                assert not e1.attained_at_cap
                e2 = block_asymmetry_tail(seq, r, n, 10**5) if r >= 3 else 0.0
                eps.append(e1.value + e2)
            ratios = sorted(float(rr) / e for rr, e in zip(rem, eps))
            median = ratios[len(ratios) // 2]
            spread = max(max(x / median, median / x) for x in ratios)
            assert spread <= 10.0, (seq.name, spread)


def test_09_beta_consistency_and_tail_sup():
    with criterion(9, "beta-consistency-and-tail-sup"):
        rng = np.random.default_rng(90125)
        for _ in range(1000):
            seq = random_uniform(
                int(rng.integers(0, 2**62)),
                int(rng.integers(1, 256)),
                float(rng.uniform(0.1, 10.0)),
            )
            n = int(rng.integers(1, 200))
            c = float(rng.uniform(1.01, 8.0))
            assert beta_value(seq, n, BetaSpec("v5", c=c)) == beta_star(seq, n, 1, c)

        for seq in ACCEPTANCE_SEQUENCES:
            sups = [tail_nbn_sup(seq, n, 2.0, 2**20) for n in dyadic_grid(2**10)]
            assert all(not s.attained_at_cap for s in sups), seq.name
            assert all(
                b.value <= a.value for a, b in zip(sups, sups[1:])
            ), seq.name


def test_10_cli_determinism_and_exit_statuses(tmp_path, capsys):
    with criterion(10, "cli-determinism-and-exit-statuses"):
        commands = {
            "defect": ["defect", "--family", "thm2", "--r2", "2", "--r", "1",
                       "--m-max", "8192"],
            "embed": ["embed", "--family", "powerlog", "--r", "3",
                      "--n-max", "1024"],
            "lemma1": ["lemma1", "--trials", "5", "--seed", "42"],
            "converge": ["converge", "--family", "powerlog", "--p", "1", "--q", "1",
                         "--r", "2", "--grid-size", "64", "--n-max", "256",
                         "--N-max", "65536", "--cap", "131072"],
            "diverge": ["diverge", "--cap", "1000000"],
        }
        for name, argv in commands.items():
            first = tmp_path / f"{name}_a.csv"
            second = tmp_path / f"{name}_b.csv"
            assert main(argv + ["--out", str(first)]) == EXIT_OK
            assert main(argv + ["--out", str(second)]) == EXIT_OK
            assert first.read_bytes() == second.read_bytes(), name

        report_argv = ["report", "--family", "remark4", "--family-r", "3",
                       "--r", "3", "--m-max", "512", "--grid-size", "16",
                       "--n-max", "64", "--N-max", "2048", "--cap", "4096"]
        dirs = (tmp_path / "rpt_a", tmp_path / "rpt_b")
        for d in dirs:
            assert main(report_argv + ["--out", str(d)]) == EXIT_OK
        for fname in ("defect.csv", "convergence.csv", "defect.png", "convergence.png"):
            assert (dirs[0] / fname).read_bytes() == (dirs[1] / fname).read_bytes(), fname

        # documented exit statuses: usage, strict numerical guard, i/o error
        assert main(["defect", "--family", "powerlog", "--c", "0.5"]) == EXIT_USAGE
        assert main(
            ["converge", "--family", "powerlog", "--p", "0.5", "--q", "0",
             "--grid-size", "4", "--n-max", "16", "--N-max", "64", "--cap", "128",
             "--strict", "--out", str(tmp_path / "strict.csv")]
        ) == EXIT_GUARD
        assert main(
            ["defect", "--family", "powerlog", "--m-max", "4",
             "--out", str(tmp_path / "no_such_dir" / "x.csv")]
        ) == EXIT_IO
        capsys.readouterr()  # keep the criterion line tidy
