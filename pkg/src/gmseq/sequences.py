"""Real sequences indexed from 1 and the concrete families under study.

A :class:`RealSequence` is a pure map ``n -> a_n`` for integer ``n >= 1``.
Construction parameters travel with the sequence as metadata so reports
can identify what was run.  ``ln`` always denotes the natural logarithm
and its argument is always ``n + 1``, never ``n``.

Families:

* ``notched_inverse_square(r)`` -- ``(2 + s_n) / n^2`` with ``s_n = -1``
  on multiples of ``r`` and ``+1`` elsewhere, i.e. ``1/n^2`` on the
  multiples and ``3/n^2`` off them.  The notch spacing is what separates
  membership at different variation steps.
* ``boosted_log_harmonic()`` -- ``1/(n ln(n+1))`` tripled on indices
  ``n = 3k + 1``; its sine series diverges at ``x = 2*pi/3``.
* ``punctured_log_harmonic(r)`` -- ``1/(n ln(n+1))`` zeroed on multiples
  of ``r``; defined for ``r >= 3``.
* ``power_log(p, q)`` -- ``n^-p * (ln(n+1))^-q``, the monotone baselines.
* ``random_uniform(seed, length, amplitude)`` -- seeded uniform noise in
  ``[-amplitude, amplitude]`` up to ``length`` and zero beyond; the
  finite support keeps shifted-window sums defined at any index.
* ``constant(value)``.
"""

from __future__ import annotations

import math
import operator
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "RealSequence",
    "notched_inverse_square",
    "boosted_log_harmonic",
    "punctured_log_harmonic",
    "power_log",
    "random_uniform",
    "constant",
]


def _check_index(n) -> int:
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"sequence index must be >= 1, got {n}")
    return n


class RealSequence:
    """Lazily evaluated real sequence, 1-indexed, immutable after construction.

    ``term_fn`` must be pure and deterministic; repeated calls with the
    same index return bit-identical floats.  ``values`` caches evaluated
    prefixes so window sums over large index ranges stay cheap; the cache
    is append-only, which keeps concurrent reads safe.
    """

    def __init__(
        self,
        term_fn: Callable[[int], float],
        name: str,
        params: Mapping[str, float] | None = None,
    ):
        self._term_fn = term_fn
        self.name = name
        self.params = dict(params or {})
        self._cache = np.empty(0, dtype=np.float64)

    def __repr__(self) -> str:
        return f"RealSequence({self.name!r})"

    def term(self, n) -> float:
        """Value ``a_n``; raises ``ValueError`` for ``n < 1``."""
        n = _check_index(n)
        return float(self._term_fn(n))

    def values(self, count: int) -> np.ndarray:
        """Read-only array of ``a_1 .. a_count`` from the prefix cache."""
        count = operator.index(count)
        if count < 0:
            raise ValueError("count must be >= 0")
        if count > self._cache.shape[0]:
            start = self._cache.shape[0] + 1
            tail = np.array(
                [float(self._term_fn(k)) for k in range(start, count + 1)],
                dtype=np.float64,
            )
            self._cache = np.concatenate([self._cache, tail])
        view = self._cache[:count]
        view.flags.writeable = False
        return view


def notched_inverse_square(r: int) -> RealSequence:
    """``1/n^2`` on multiples of ``r``, ``3/n^2`` elsewhere."""
    r = operator.index(r)
    if r < 1:
        raise ValueError(f"notch spacing r must be >= 1, got {r}")

    def term(n: int) -> float:
        return 1.0 / (n * n) if n % r == 0 else 3.0 / (n * n)

    return RealSequence(term, f"notched_inverse_square(r={r})", {"r": r})


def boosted_log_harmonic() -> RealSequence:
    """``3/(n ln(n+1))`` when ``n = 3k + 1``, ``1/(n ln(n+1))`` otherwise."""

    def term(n: int) -> float:
        num = 3.0 if n % 3 == 1 else 1.0
        return num / (n * math.log(n + 1))

    return RealSequence(term, "boosted_log_harmonic", {})


def punctured_log_harmonic(r: int) -> RealSequence:
    """``1/(n ln(n+1))`` with zeros on multiples of ``r``; needs ``r >= 3``."""
    r = operator.index(r)
    if r < 3:
        raise ValueError(f"puncture spacing r must be >= 3, got {r}")

    def term(n: int) -> float:
        return 0.0 if n % r == 0 else 1.0 / (n * math.log(n + 1))

    return RealSequence(term, f"punctured_log_harmonic(r={r})", {"r": r})


def power_log(p: float, q: float) -> RealSequence:
    """``n^-p * (ln(n+1))^-q`` for ``p, q >= 0``."""
    p = float(p)
    q = float(q)
    if p < 0 or q < 0:
        raise ValueError(f"exponents must be >= 0, got p={p}, q={q}")

    def term(n: int) -> float:
        return n ** (-p) * math.log(n + 1) ** (-q)

    return RealSequence(term, f"power_log(p={p:g},q={q:g})", {"p": p, "q": q})


def random_uniform(seed: int, length: int, amplitude: float) -> RealSequence:
    """Seeded uniform noise in ``[-amplitude, amplitude]``, zero past ``length``."""
    seed = operator.index(seed)
    length = operator.index(length)
    amplitude = float(amplitude)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if not amplitude > 0:
        raise ValueError(f"amplitude must be > 0, got {amplitude}")
    draws = np.random.default_rng(seed).uniform(-amplitude, amplitude, size=length)

    def term(n: int) -> float:
        return float(draws[n - 1]) if n <= length else 0.0

    return RealSequence(
        term,
        f"random_uniform(seed={seed},length={length})",
        {"seed": seed, "length": length, "amplitude": amplitude},
    )


def constant(value: float) -> RealSequence:
    value = float(value)
    return RealSequence(lambda n: value, f"constant({value:g})", {"value": value})
