"""Trigonometric polynomials ``f(x) = sum_k a_k e^{ikx}`` on ``[-pi, pi)``.

Coefficients follow ``a_k = (1/2pi) int f(x) e^{-ikx} dx``, so Parseval
reads ``||f||_2^2 = 2pi sum |a_k|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .sequence import TwoSidedSequence

__all__ = [
    "QuadratureSpec",
    "LpResult",
    "grid",
    "evaluate",
    "evaluate_direct",
    "lp_norm",
    "partial_sum",
    "apply_multiplier",
    "multiplier_values",
    "MULTIPLIERS",
]

MULTIPLIERS = ("alternating", "dyadic-sign")


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the periodic rectangle rule.

    ``sample_count`` is a floor; the grid is enlarged to the next power of
    two holding ``oversample * (2 max|k| + 1)`` points.
    """

    sample_count: int = 1024
    oversample: int = 4
    refine_tolerance: float = 1e-6
    max_doublings: int = 6

    def __post_init__(self):
        m = self.sample_count
        if m < 1 or m & (m - 1):
            raise ValueError("sample_count must be a power of two")
        if self.oversample < 4:
            raise ValueError("oversample must be >= 4")
        if not self.refine_tolerance > 0:
            raise ValueError("refine_tolerance must be positive")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be >= 0")

    def samples_for(self, a: TwoSidedSequence) -> int:
        need = self.oversample * (2 * a.radius() + 1)
        m = max(self.sample_count, 1 << max(need - 1, 0).bit_length())
        return m


class LpResult(NamedTuple):
    value: float
    converged: bool
    samples: int


def grid(m: int) -> np.ndarray:
    """``x_j = -pi + 2 pi j / m``, ``j = 0 .. m-1``."""
    return -math.pi + 2.0 * math.pi * np.arange(m) / m


def evaluate_direct(a: TwoSidedSequence, x) -> np.ndarray:
    """Sum the series term by term at arbitrary points."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for k, c in zip(a.indices, a.values):
        if c:
            out += c * np.exp(1j * k * x)
    return out


def _evaluate_uniform(a: TwoSidedSequence, x0: float, m: int) -> np.ndarray:
    # f(x0 + 2 pi j/m) = sum_k (a_k e^{ik x0}) w^{kj}: fold k mod m, one inverse FFT
    k = a.indices
    b = np.zeros(m, dtype=complex)
    if x0 == -math.pi:
        phase = np.where(k % 2 == 0, 1.0, -1.0)
    else:
        phase = np.exp(1j * k * x0)
    np.add.at(b, k % m, a.values * phase)
    return np.fft.ifft(b) * m


def evaluate(a: TwoSidedSequence, x) -> np.ndarray:
    """Values ``f(x_j)``.

    A grid with step exactly ``2pi/len(x)`` goes through an FFT; anything
    else is summed directly.
    """
    x = np.asarray(x, dtype=float)
    m = x.size
    if m >= 2 and np.allclose(np.diff(x), 2.0 * math.pi / m, rtol=0, atol=1e-12):
        return _evaluate_uniform(a, float(x[0]), m)
    return evaluate_direct(a, x)


def _rect(a, p, m):
    f = np.abs(_evaluate_uniform(a, -math.pi, m))
    return (2.0 * math.pi / m * np.sum(f ** p)) ** (1.0 / p)


def lp_norm(a: TwoSidedSequence, p: float, spec: QuadratureSpec | None = None,
            full_output: bool = False):
    """``||f||_{L_p[-pi, pi]}`` by the rectangle rule on a uniform grid.

    The grid is doubled until two successive values agree to
    ``spec.refine_tolerance`` (relative).  If ``max_doublings`` runs out the
    last value is returned with ``converged=False`` (only visible with
    ``full_output=True``).
    """
    p = float(p)
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    spec = spec or QuadratureSpec()
    m = spec.samples_for(a)
    val = _rect(a, p, m)
    converged = False
    for _ in range(spec.max_doublings):
        m *= 2
        new = _rect(a, p, m)
        done = abs(new - val) <= spec.refine_tolerance * abs(new)
        val = new
        if done:
            converged = True
            break
    if full_output:
        return LpResult(float(val), converged, m)
    return float(val)


def partial_sum(a: TwoSidedSequence, n: int) -> TwoSidedSequence:
    """Keep ``|k| <= 2^n`` and zero the rest."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    r = 2 ** n
    return a.restrict(-r, r)


def multiplier_values(kind: str, ks) -> np.ndarray:
    ks = np.asarray(ks)
    if kind == "alternating":
        return np.where(ks % 2 == 0, 1.0, -1.0)
    if kind == "dyadic-sign":
        # (-1)^n on 2^(n-1) <= |k| < 2^n, i.e. n = bit length of |k|
        nbits = np.array([int(abs(int(k))).bit_length() for k in ks.ravel()]).reshape(ks.shape)
        return np.where(nbits % 2 == 0, 1.0, -1.0)
    raise ValueError(f"unknown multiplier {kind!r}; expected one of {MULTIPLIERS}")


def apply_multiplier(a: TwoSidedSequence, m) -> TwoSidedSequence:
    """Coefficient-wise product ``lambda_k a_k``.

    ``m`` is ``"alternating"``, ``"dyadic-sign"``, or a list of ``+-1``
    aligned with ``a``'s stored range.
    """
    if isinstance(m, str):
        lam = multiplier_values(m, a.indices)
    else:
        lam = np.asarray(m, dtype=float)
        if lam.shape != a.values.shape:
            raise ValueError("multiplier list must match the stored range of the sequence")
        if not np.all((lam == 1.0) | (lam == -1.0)):
            raise ValueError("multiplier entries must be +1 or -1")
    return TwoSidedSequence(a.offset, a.values * lam)
