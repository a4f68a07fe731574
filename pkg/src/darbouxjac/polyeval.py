"""Stable evaluation of first-kind P_n, second-kind Q_n, and R_n polynomials.

All three families satisfy the same second-order difference equation

    y_{n+1} = (z - c_{n+1}) y_n - lambda_{n+1} y_{n-1}

and differ only in initial data: (P_0, P_1) = (1, z - c_1),
(Q_0, Q_1) = (0, s_0), and (R_0, R_1) = (1, z - c_1 + s_0/s0star).
Magnitudes span hundreds of orders of magnitude in n, so evaluation keeps a
running power-of-e exponent (``log_scale``) once values leave a safe window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RecurrenceCoeffs
from .errors import ConfigurationError, PrefixError, ZeroHitError

__all__ = [
    "EvalTriple",
    "RatioSequence",
    "eval_P",
    "eval_Q",
    "eval_R",
    "evaluate",
    "ratio_sequence",
]

# Rescale once |y_n| leaves this window; generic values grow like |z|^n while
# monic Chebyshev values decay like 2^-n.
_SCALE_HI = 1e150
_SCALE_LO = 1e-150
# |r_n| below this is a genuine zero hit, not underflow.
_ZERO_HIT = 1e-290


@dataclass(frozen=True)
class EvalTriple:
    """Values of P_n, Q_n (and R_n when s0star is given) at one point."""

    n: int
    value_P: complex
    value_Q: complex
    value_R: complex | None
    ratio_P: complex | None
    log_scale: float


@dataclass(frozen=True)
class RatioSequence:
    """Consecutive ratios r_n = y_n(z)/y_{n-1}(z) for y in {P, Q, R}.

    ``values[k]`` holds r_{start+k}; P and R sequences start at n = 1,
    the Q sequence at n = 2 (Q_0 = 0 makes r_1 undefined).
    """

    z: complex
    which: str
    start: int
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=complex).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def r(self, n: int) -> complex:
        """Ratio y_n/y_{n-1} by recurrence index n."""
        k = n - self.start
        if not 0 <= k < len(self.values):
            raise PrefixError(f"r_{n} outside computed range")
        return complex(self.values[k])


def _initial_pair(m: RecurrenceCoeffs, which: str, z: complex, s0star: complex | None):
    if which == "P":
        return 1.0 + 0.0j, z - m.c[0]
    if which == "Q":
        return 0.0j, complex(m.s0)
    if which == "R":
        if s0star is None or s0star == 0:
            raise ConfigurationError(
                "R_n requires s0star != 0; the corresponding OPS does not exist for s0star = 0"
            )
        return 1.0 + 0.0j, z - m.c[0] + m.s0 / s0star
    raise ConfigurationError(f"unknown solution family {which!r}")


def _scaled_run(m: RecurrenceCoeffs, n: int, z: complex, y0: complex, y1: complex):
    """Run the recurrence to degree n with rescaling.

    Returns (y_{n-1}, y_n, log_scale, peak_log) where the true values are
    y * exp(log_scale) and peak_log is log of the largest |y_k| seen.
    """
    if n > m.n_max:
        raise PrefixError(f"degree {n} exceeds prefix length {m.n_max}")
    prev, cur = complex(y0), complex(y1)
    log_scale = 0.0
    peak = max(abs(prev), abs(cur))
    peak_log = math.log(peak) if peak > 0 else -math.inf
    c, lam = m.c, m.lam
    for k in range(1, n):
        prev, cur = cur, (z - c[k]) * cur - lam[k - 1] * prev
        mag = abs(cur)
        if mag > 0:
            peak_log = max(peak_log, math.log(mag) + log_scale)
        if mag > _SCALE_HI or (0 < mag < _SCALE_LO):
            log_scale += math.log(mag)
            prev /= mag
            cur /= mag
    return prev, cur, log_scale, peak_log


def _eval_scaled(m: RecurrenceCoeffs, which: str, n: int, z: complex, s0star=None):
    y0, y1 = _initial_pair(m, which, z, s0star)
    if n == 0:
        return y0, 0.0
    prev, cur, log_scale, _ = _scaled_run(m, n, z, y0, y1)
    return cur, log_scale


def eval_P(m: RecurrenceCoeffs, n: int, z: complex) -> complex:
    """Value of the monic degree-n orthogonal polynomial P_n(z)."""
    val, log_scale = _eval_scaled(m, "P", n, z)
    return val * math.exp(log_scale) if log_scale != 0.0 else val


def eval_Q(m: RecurrenceCoeffs, n: int, z: complex) -> complex:
    """Second-kind polynomial Q_n(z); Q_0 = 0, Q_1 = s_0 (1 when normalized)."""
    val, log_scale = _eval_scaled(m, "Q", n, z)
    return val * math.exp(log_scale) if log_scale != 0.0 else val


def eval_R(m: RecurrenceCoeffs, n: int, z: complex, s0star: complex) -> complex:
    """R_n(z) = P_n(z) + Q_n(z)/s0star, the Geronimus denominator polynomial."""
    val, log_scale = _eval_scaled(m, "R", n, z, s0star)
    return val * math.exp(log_scale) if log_scale != 0.0 else val


def evaluate(m: RecurrenceCoeffs, n: int, z: complex, s0star: complex | None = None) -> EvalTriple:
    """P_n, Q_n (and R_n if s0star given) at z, sharing one log_scale frame.

    The stored values satisfy true_value = value * exp(log_scale).
    """
    ratio = None
    if n == 0:
        p, lp = 1.0 + 0.0j, 0.0
    else:
        prev, p, lp, _ = _scaled_run(m, n, z, *_initial_pair(m, "P", z, None))
        ratio = p / prev if prev != 0 else complex("inf")
    q, lq = _eval_scaled(m, "Q", n, z)
    r = None
    if s0star is not None:
        rv, lr = _eval_scaled(m, "R", n, z, s0star)
        r = rv * math.exp(lr - lp)
    return EvalTriple(
        n=n,
        value_P=p,
        value_Q=q * math.exp(lq - lp),
        value_R=r,
        ratio_P=ratio,
        log_scale=lp,
    )


def ratio_sequence(
    m: RecurrenceCoeffs,
    z: complex,
    which: str = "P",
    s0star: complex | None = None,
    n_terms: int | None = None,
) -> RatioSequence:
    """Ratios r_n = y_n/y_{n-1} via r_{n+1} = z - c_{n+1} - lambda_{n+1}/r_n.

    Overflow-free: only ratios are propagated.  Raises ZeroHitError when the
    recurrence hits a zero of y_n at z (|r_n| < 1e-290).
    """
    y0, y1 = _initial_pair(m, which, z, s0star)
    if which == "Q":
        # Q_0 = 0: the ratio chain starts at r_2 = Q_2/Q_1 = z - c_2.
        if m.n_max < 2:
            raise PrefixError("Q-ratio sequence needs n_max >= 2")
        start = 2
        r = z - m.c[1]
    else:
        start = 1
        r = y1 / y0
    last = m.n_max if n_terms is None else start - 1 + n_terms
    if last > m.n_max:
        raise PrefixError(f"ratio r_{last} exceeds prefix length {m.n_max}")
    values = np.empty(last - start + 1, dtype=complex)
    c, lam = m.c, m.lam
    for n in range(start, last + 1):
        if n > start:
            r = (z - c[n - 1]) - lam[n - 2] / r
        if abs(r) < _ZERO_HIT or not np.isfinite(r):
            raise ZeroHitError(n, which)
        values[n - start] = r
    return RatioSequence(z=z, which=which, start=start, values=values)
