"""Interval averages, net-space norms and discrete Lorentz norms.

The interval average ``ã_k`` is a supremum over infinitely many integer
intervals.  It becomes a finite maximum by two reductions:

* Shrinking.  Let the support lie in a window of ``D`` consecutive indices.
  An interval ``w`` with ``|w| > max(k, D)`` meets the support in a
  sub-interval of length at most ``D``; sliding the ends of ``w`` inwards to
  length ``max(k, D)`` keeps that part, so the sum is unchanged and the
  denominator drops.  Hence only lengths ``<= max(k, D)`` matter.
* Splitting.  An interval of length ``>= 2k`` splits into two intervals of
  length ``>= k`` and its average modulus is at most the larger of the two
  halves' (triangle inequality plus a convex combination).  Hence only
  lengths ``< 2k`` matter.

For ``k >= D`` every admissible interval meets the support in a prefix, a
suffix or the whole of it, so ``ã_k = M / k`` with ``M`` the largest modulus
of those sums.  Net norms add the tail ``k > D`` in closed form through the
Hurwitz zeta function.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta

from .sequence import TwoSidedSequence

__all__ = [
    "PrefixSums",
    "TildeProfile",
    "tilde_profile",
    "tilde_average",
    "tilde_dyadic",
    "hat_average",
    "hat_dyadic",
    "net_norm",
    "net_norm_dyadic",
    "lorentz_norm",
]


class PrefixSums:
    """Cumulative sums ``P(c) = sum_{j <= c} a_j``.

    Interval sums are differences of two entries, which makes every window
    sum O(1).  ``P`` is stored over ``[k_min - 1, k_max]`` and is constant
    outside it.
    """

    def __init__(self, a: TwoSidedSequence):
        self.base = a.k_min - 1
        self._p = np.concatenate(([0j], np.cumsum(a.values)))
        self._p.flags.writeable = False

    @property
    def total(self) -> complex:
        return complex(self._p[-1])

    def at(self, c):
        """``P(c)`` for an integer or integer array ``c``."""
        idx = np.clip(np.asarray(c) - self.base, 0, self._p.size - 1)
        return self._p[idx]

    def interval(self, lo, hi):
        """``sum_{lo <= j <= hi} a_j`` (zero for empty intervals)."""
        return self.at(hi) - self.at(np.asarray(lo) - 1)


class TildeProfile:
    """All values ``ã_k`` of one sequence.

    ``values[k-1] = ã_k`` for ``1 <= k <= D``; beyond that ``ã_k = M / k``.
    """

    def __init__(self, values, diameter, edge_max):
        self.values = values
        self.diameter = diameter
        self.edge_max = edge_max

    def __call__(self, k):
        k = int(k)
        if k < 1:
            raise ValueError("k must be >= 1")
        if k <= self.diameter:
            return float(self.values[k - 1])
        return self.edge_max / k


def _window_maxima(a: TwoSidedSequence, lengths):
    """``max_w |sum_w a| / |w|`` over all intervals of each given length."""
    t = a.trimmed()
    d = len(t)
    # padded prefix sums: q[i] = sum of the first i entries of (0^d, a, 0^d)
    q = np.concatenate((np.zeros(d + 1, dtype=complex), np.cumsum(t.values)))
    q = np.concatenate((q, np.full(d, q[-1])))
    is_real = not np.any(t.values.imag)
    qr = np.ascontiguousarray(q.real)
    qi = np.ascontiguousarray(q.imag)
    out = np.empty(len(lengths))
    for i, L in enumerate(lengths):
        L = int(L)
        if L > d:
            raise ValueError("window length exceeds the support diameter")
        # windows [s, s+L) meeting the support: s = d-L+1 .. 2d-1
        lo, hi = d - L + 1, 2 * d
        if is_real:
            best = np.abs(qr[lo + L:hi + L] - qr[lo:hi]).max()
        else:
            dr = qr[lo + L:hi + L] - qr[lo:hi]
            di = qi[lo + L:hi + L] - qi[lo:hi]
            best = np.hypot(dr, di).max()  # squaring would underflow tiny data
        out[i] = best / L
    return out


def _edge_max(t: TwoSidedSequence) -> float:
    c = np.cumsum(t.values)
    pre = np.abs(c).max()
    suf = np.abs(c[-1] - np.concatenate(([0j], c[:-1]))).max()
    return float(max(pre, suf))


def tilde_profile(a: TwoSidedSequence) -> TildeProfile:
    """Compute ``ã_k`` for every ``k`` (O(D^2) for support diameter ``D``)."""
    t = a.trimmed()
    if t.is_zero():
        return TildeProfile(np.zeros(1), 1, 0.0)
    d = len(t)
    g = _window_maxima(t, range(1, d + 1))
    # ã is the running max from the right of the per-length maxima
    vals = np.maximum.accumulate(g[::-1])[::-1]
    return TildeProfile(vals, d, _edge_max(t))


def tilde_average(a: TwoSidedSequence, k: int) -> float:
    """``ã_k = sup_{|w| >= k} |sum_{m in w} a_m| / |w|``, exactly."""
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    t = a.trimmed()
    if t.is_zero():
        return 0.0
    d = len(t)
    if k >= d:
        return _edge_max(t) / k
    return float(_window_maxima(t, range(k, min(2 * k - 1, d) + 1)).max())


def tilde_dyadic(a: TwoSidedSequence, levels: int) -> np.ndarray:
    """``[ã_{2^0}, ..., ã_{2^(levels-1)}]``.

    Uses only lengths ``2^n <= L < 2^(n+1)`` for level ``n``, so the cost is
    about ``2 D^2`` window evaluations regardless of ``levels``.
    """
    t = a.trimmed()
    out = np.zeros(int(levels))
    if t.is_zero():
        return out
    d = len(t)
    em = _edge_max(t)
    cap = min(int(levels), d.bit_length() + 1)
    g = _window_maxima(t, range(1, min(2 ** cap, d) + 1)) if cap else np.zeros(0)
    for n in range(int(levels)):
        k = 2 ** n
        if k >= d:
            out[n] = em / k
        else:
            out[n] = g[k - 1:min(2 * k - 1, d)].max()
    return out


def _side_partial_sums(a: TwoSidedSequence, reach: int):
    """``|sum_{j=0}^{m} a_j|`` for ``m = 0..reach`` and ``|sum_{j=m}^{0}|`` likewise."""
    pos = np.abs(np.cumsum(a.window(0, reach)))
    neg = np.abs(np.cumsum(a.window(-reach, 0)[::-1]))
    return pos, neg


def hat_dyadic(a: TwoSidedSequence, levels: int) -> np.ndarray:
    """``[â_{2^0}, ..., â_{2^(levels-1)}]`` with both signs of ``m``.

    For ``m < 0`` the anchored sum runs over ``m <= j <= 0``.
    """
    levels = int(levels)
    out = np.zeros(levels)
    r = a.radius()
    reach = min(2 ** levels - 1, max(r, 1))
    pos, neg = _side_partial_sums(a, reach)
    for n in range(levels):
        lo, hi = 2 ** n, 2 ** (n + 1) - 1
        if lo <= reach:
            m = np.arange(lo, min(hi, reach) + 1)
            out[n] = max((pos[m] / (m + 1)).max(), (neg[m] / (m + 1)).max())
        else:
            # partial sums are frozen past the support: best m is the first one
            out[n] = max(pos[-1], neg[-1]) / (lo + 1)
    return out


def hat_average(a: TwoSidedSequence, level: int) -> float:
    """``â_{2^level} = sup_{2^level <= |m| < 2^(level+1)} |sum_0^m a_j| / (|m|+1)``."""
    level = int(level)
    if level < 0:
        raise ValueError("level must be >= 0")
    return float(hat_dyadic(a, level + 1)[level])


def _check_pq(p, q):
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    if not (q == math.inf or 1 <= q < math.inf):
        raise ValueError(f"q must lie in [1, inf], got {q}")


def net_norm(a: TwoSidedSequence, p: float, q: float, profile: TildeProfile | None = None) -> float:
    """Discrete net-space norm ``(sum_k k^(q/p - 1) ã_k^q)^(1/q)``.

    ``q = inf`` gives ``sup_k k^(1/p) ã_k``.  Terms with ``k > D`` are summed
    in closed form: there ``ã_k = M / k`` and the tail is
    ``M^q * zeta(q + 1 - q/p, D + 1)``.
    """
    p, q = float(p), float(q)
    _check_pq(p, q)
    prof = profile if profile is not None else tilde_profile(a)
    if prof.edge_max == 0:
        return 0.0
    d = prof.diameter
    k = np.arange(1, d + 1, dtype=float)
    if q == math.inf:
        return float((k ** (1.0 / p) * prof.values).max())
    head = np.sum(k ** (q / p - 1.0) * prof.values ** q)
    tail = prof.edge_max ** q * zeta(q + 1.0 - q / p, d + 1)
    return float((head + tail) ** (1.0 / q))


def net_norm_dyadic(a: TwoSidedSequence, p: float, q: float, levels: int | None = None) -> float:
    """Dyadic form ``(sum_k (2^(k/p) ã_{2^k})^q)^(1/q)`` of the net norm."""
    p, q = float(p), float(q)
    _check_pq(p, q)
    t = a.trimmed()
    if t.is_zero():
        return 0.0
    d = len(t)
    dl = d.bit_length()
    levels = dl + 1 if levels is None else int(levels)
    vals = tilde_dyadic(t, levels)
    k = np.arange(levels, dtype=float)
    terms = 2.0 ** (k / p) * vals
    em = _edge_max(t)
    if q == math.inf:
        return float(terms.max())
    # past level dl every ã_{2^k} is em / 2^k: geometric tail
    r = 2.0 ** (q / p - q)
    tail = (em * 2.0 ** ((1.0 / p - 1.0) * levels)) ** q / (1.0 - r)
    return float((np.sum(terms ** q) + tail) ** (1.0 / q))


def lorentz_norm(a: TwoSidedSequence, p: float, q: float) -> float:
    """Discrete Lorentz norm ``(sum_{n>=1} n^(q/p - 1) (a*_n)^q)^(1/q)``."""
    p, q = float(p), float(q)
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    if not 0 < q < math.inf:
        raise ValueError(f"q must lie in (0, inf), got {q}")
    mags = np.sort(np.abs(a.values))[::-1]
    mags = mags[mags > 0]
    if mags.size == 0:
        return 0.0
    n = np.arange(1, mags.size + 1, dtype=float)
    return float(np.sum(n ** (q / p - 1.0) * mags ** q) ** (1.0 / q))
