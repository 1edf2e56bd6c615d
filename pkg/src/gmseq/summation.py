"""Compensated summation with checkpointed prefix sums.

Every series or window sum in this package funnels through the two entry
points below, so summation order is fixed (ascending index) and results
are bit-reproducible between runs.  ``prefix_sums_at`` samples one
accumulation pass at several cut points; because the accumulator state
after k terms does not depend on later terms, a sampled prefix is
bit-identical to a standalone sum over the truncated array.

The accumulator is the Neumaier variant of Kahan summation, which keeps
round-off near one ulp of the true sum even for 10^6-term series.
"""

from __future__ import annotations

import numpy as np


def _neumaier_prefix(terms, stops, out):
    # stops ascending, each in [0, len(terms)]; out[j] = compensated sum
    # of terms[:stops[j]].
    total = 0.0
    comp = 0.0
    pos = 0
    for j in range(stops.shape[0]):
        stop = stops[j]
        while pos < stop:
            t = terms[pos]
            s = total + t
            if abs(total) >= abs(t):
                comp += (total - s) + t
            else:
                comp += (t - s) + total
            total = s
            pos += 1
        out[j] = total + comp
    return out


try:  # compiled kernel when numba is present; same IEEE arithmetic either way
    from numba import njit

    _neumaier_prefix = njit(
        "float64[::1](float64[::1], int64[::1], float64[::1])",
        cache=True,
    )(_neumaier_prefix)
except ImportError:  # pragma: no cover - exercised only without numba
    pass


def kahan_sum(terms) -> float:
    """Sum ``terms`` in ascending index order with Neumaier compensation."""
    arr = np.ascontiguousarray(terms, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("terms must be one-dimensional")
    stops = np.array([arr.shape[0]], dtype=np.int64)
    out = np.empty(1, dtype=np.float64)
    return float(_neumaier_prefix(arr, stops, out)[0])


def prefix_sums_at(terms, stops) -> np.ndarray:
    """Compensated running sums of ``terms`` sampled after ``stops`` terms.

    ``stops`` must be ascending integers in [0, len(terms)].  Entry j of
    the result equals ``kahan_sum(terms[:stops[j]])`` bit for bit.
    """
    arr = np.ascontiguousarray(terms, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("terms must be one-dimensional")
    st = np.ascontiguousarray(stops, dtype=np.int64)
    if st.ndim != 1 or st.size == 0:
        raise ValueError("stops must be a nonempty 1-d sequence")
    if st[0] < 0 or st[-1] > arr.shape[0] or np.any(st[1:] < st[:-1]):
        raise ValueError("stops must be ascending within [0, len(terms)]")
    out = np.empty(st.shape[0], dtype=np.float64)
    return _neumaier_prefix(arr, st, out)
