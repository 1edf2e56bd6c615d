import math

import numpy as np
import pytest

from gmseq.sequences import (
    RealSequence,
    boosted_log_harmonic,
    constant,
    notched_inverse_square,
    power_log,
    punctured_log_harmonic,
    random_uniform,
)


def test_index_validation():
    seq = power_log(1, 0)
    for bad in (0, -1, -17):
        with pytest.raises(ValueError):
            seq.term(bad)
    with pytest.raises(TypeError):
        seq.term(2.5)


def test_zero_and_constant():
    assert constant(0.0).term(17) == 0.0
    assert constant(2.5).term(3) == 2.5


@pytest.mark.parametrize(
    "p,q,n,expected",
    [(1, 0, 4, 0.25), (1, 0, 5, 0.2), (2, 0, 3, 1 / 9), (1, 1, 1, 1 / math.log(2))],
)
def test_power_log_values(p, q, n, expected):
    assert power_log(p, q).term(n) == expected


def test_power_log_rejects_negative_exponents():
    with pytest.raises(ValueError):
        power_log(-1, 0)
    with pytest.raises(ValueError):
        power_log(0, -0.5)


def test_notched_values():
    t2 = notched_inverse_square(2)
    assert t2.term(2) == 0.25
    assert t2.term(3) == 1 / 3
    assert notched_inverse_square(5).term(1) == 3.0
    t3 = notched_inverse_square(3)
    assert t3.term(3) == 1 / 9
    assert t3.term(4) == 3 / 16
    t1 = notched_inverse_square(1)
    assert all(t1.term(k) == 1.0 / (k * k) for k in range(1, 50))
    with pytest.raises(ValueError):
        notched_inverse_square(0)


def test_notched_branch_map_up_to_1e5():
    for r in (2, 3):
        seq = notched_inverse_square(r)
        n = np.arange(1, 100_001, dtype=np.float64)
        expected = np.where(np.arange(1, 100_001) % r == 0, 1.0 / (n * n), 3.0 / (n * n))
        assert np.array_equal(seq.values(100_000), expected)


def test_boosted_values():
    d = boosted_log_harmonic()
    assert d.term(1) == 3 / math.log(2)
    assert d.term(2) == 1 / (2 * math.log(3))
    assert d.term(4) == 3 / (4 * math.log(5))


def test_punctured_values():
    a = punctured_log_harmonic(3)
    assert a.term(3) == 0.0
    assert a.term(4) == 1 / (4 * math.log(5))
    assert punctured_log_harmonic(4).term(8) == 0.0
    with pytest.raises(ValueError):
        punctured_log_harmonic(2)


def test_log_weighted_families_scaled_decay():
    # n * a_n is dominated by 3/ln(n+1), which decays through dyadic n
    for seq in (boosted_log_harmonic(), punctured_log_harmonic(3)):
        bounds = []
        for j in range(16):
            n = 2**j
            bound = 3 / math.log(n + 1)
            assert n * seq.term(n) <= bound * (1 + 1e-15)
            bounds.append(bound)
        assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_power_log_strictly_decreasing():
    vals = power_log(1.5, 0).values(10_000)
    assert np.all(np.diff(vals) < 0)
    vals = power_log(0.5, 1).values(10_000)
    assert np.all(np.diff(vals) < 0)


def test_families_nonnegative():
    for seq in (
        power_log(1, 1),
        notched_inverse_square(4),
        boosted_log_harmonic(),
        punctured_log_harmonic(5),
    ):
        assert np.all(seq.values(5000) >= 0)


def test_random_finite_support_and_determinism():
    seq = random_uniform(42, 32, 1.5)
    assert seq.term(33) == 0.0
    assert seq.term(1000) == 0.0
    assert all(abs(seq.term(n)) <= 1.5 for n in range(1, 33))
    again = random_uniform(42, 32, 1.5)
    assert all(seq.term(n) == again.term(n) for n in range(1, 40))
    other = random_uniform(43, 32, 1.5)
    assert any(seq.term(n) != other.term(n) for n in range(1, 33))
    with pytest.raises(ValueError):
        random_uniform(1, 0, 1.0)
    with pytest.raises(ValueError):
        random_uniform(1, 8, 0.0)


def test_values_cache_consistent_with_term():
    seq = boosted_log_harmonic()
    vals = seq.values(200)
    assert vals.shape == (200,)
    for n in (1, 2, 77, 200):
        assert vals[n - 1] == seq.term(n)
    # growing the cache keeps earlier entries identical
    more = seq.values(400)
    assert np.array_equal(more[:200], vals)
    with pytest.raises(ValueError):
        vals[0] = 1.0  # read-only view


def test_repeated_term_calls_bit_identical():
    seq = random_uniform(7, 64, 1.0)
    assert [seq.term(n) for n in range(1, 70)] == [seq.term(n) for n in range(1, 70)]


def test_custom_sequence_wrapper():
    seq = RealSequence(lambda n: float(n), "identity")
    assert seq.term(3) == 3.0
    assert seq.params == {}
