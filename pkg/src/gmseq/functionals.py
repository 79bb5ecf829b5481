"""Paley-type functionals, dyadic block sums and Hardy sums."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .netspace import hat_dyadic, tilde_dyadic
from .sequence import TwoSidedSequence, delta_abs_array, symmetric_rearrangement, zigzag_indices

__all__ = [
    "DyadicProfile",
    "NormReport",
    "default_levels",
    "dyadic_profile",
    "majorant",
    "theta_blocks",
    "j_p",
    "j_p_star",
    "i_p",
    "hardy_lhs_rhs",
    "conjugate",
]

# plain summation below this many terms, math.fsum above
COMPENSATED_THRESHOLD = 2 ** 15


def conjugate(p: float) -> float:
    return p / (p - 1.0)


def _check_p(p):
    p = float(p)
    if not 1 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    return p


def _ordered_sum(terms):
    if terms.size > COMPENSATED_THRESHOLD:
        return math.fsum(terms.tolist())
    return float(np.sum(terms))


def default_levels(a: TwoSidedSequence) -> int:
    """Dyadic blocks covering the support plus one empty block beyond it.

    Block ``b = bit_length(max|k|)`` is the last one meeting the support, so
    the count is ``b + 2``.
    """
    return a.radius().bit_length() + 2


def theta_blocks(a: TwoSidedSequence, levels: int | None = None) -> np.ndarray:
    """Block sums ``Θ_n = sum_{[2^(n-1)] <= |m| < 2^n} |Δa_m|``.

    ``Θ_0 = |Δa_0|``; block ``n >= 1`` collects both signs of ``m``.
    """
    levels = default_levels(a) if levels is None else int(levels)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    mid = 2 ** (levels - 1) - 1
    d = delta_abs_array(a, -mid, mid)
    out = np.empty(levels)
    out[0] = d[mid]
    for n in range(1, levels):
        lo, hi = 2 ** (n - 1), 2 ** n
        out[n] = d[mid + lo:mid + hi].sum() + d[mid - hi + 1:mid - lo + 1].sum()
    return out


def _weighted_power_sum(ks, mags, p):
    # fixed order: ascending |k|, negative before positive on ties
    order = np.lexsort((ks > 0, np.abs(ks)))
    terms = (np.abs(ks[order]) + 1.0) ** (p - 2.0) * mags[order] ** p
    return _ordered_sum(terms) ** (1.0 / p)


def j_p(a: TwoSidedSequence, p: float) -> float:
    """``J_p = (sum_k (|k|+1)^(p-2) |a_k|^p)^(1/p)``."""
    p = _check_p(p)
    return _weighted_power_sum(a.indices, np.abs(a.values), p)


def j_p_star(a: TwoSidedSequence, p: float) -> float:
    """:func:`j_p` of the symmetric nonincreasing rearrangement."""
    p = _check_p(p)
    r = symmetric_rearrangement(a)
    return _weighted_power_sum(zigzag_indices(r.symmetric.size), r.symmetric, p)


def i_p(a: TwoSidedSequence, p: float, levels: int | None = None) -> float:
    """``I_p = (sum_k (2^(k/p') Θ_k)^p)^(1/p)``.

    ``levels`` must reach past the support; smaller values are rejected
    because the sum would silently drop blocks.
    """
    p = _check_p(p)
    need = a.radius().bit_length() + 1
    levels = default_levels(a) if levels is None else int(levels)
    if levels < need:
        raise ValueError(f"levels={levels} does not cover the support (need {need})")
    theta = theta_blocks(a, levels)
    k = np.arange(levels, dtype=float)
    terms = (2.0 ** (k / conjugate(p)) * theta) ** p
    return _ordered_sum(terms) ** (1.0 / p)


def majorant(avg: np.ndarray) -> np.ndarray:
    """``sup_k min(1, 2^(k-n)) avg[k]`` for every ``n < len(avg)``.

    ``avg`` must extend to a level past the support; both averages are
    nonincreasing from there on, so the levels beyond the array cannot
    raise the sup.
    """
    L = avg.size
    # k <= n: 2^-n max_{k<=n} 2^k avg[k];  k >= n: max_{k>=n} avg[k]
    left = np.maximum.accumulate(avg * 2.0 ** np.arange(L)) * 2.0 ** -np.arange(L)
    right = np.maximum.accumulate(avg[::-1])[::-1]
    return np.maximum(left, right)


@dataclass(frozen=True)
class DyadicProfile:
    """Per-level quantities of one sequence, index ``n = 0 .. levels-1``."""

    levels: int
    theta: np.ndarray
    tilde_avg: np.ndarray
    hat_avg: np.ndarray
    majorant_tilde: np.ndarray
    majorant_hat: np.ndarray

    def rows(self):
        for n in range(self.levels):
            yield (n, self.theta[n], self.tilde_avg[n], self.hat_avg[n],
                   self.majorant_tilde[n], self.majorant_hat[n])

    CSV_HEADER = ("n", "theta", "tilde_avg", "hat_avg", "majorant_tilde", "majorant_hat")


def dyadic_profile(a: TwoSidedSequence, levels: int | None = None, tilde: bool = True) -> DyadicProfile:
    """Collect Θ, ã, â and both majorants.

    ``tilde=False`` skips the quadratic ``ã`` computation (the tilde columns
    are then NaN).
    """
    levels = default_levels(a) if levels is None else int(levels)
    theta = theta_blocks(a, levels)
    # averages are needed a little past ``levels`` so the sups are complete
    ext = max(levels, default_levels(a)) + 1
    hat = hat_dyadic(a, ext)
    mh = majorant(hat)[:levels]
    if tilde:
        til = tilde_dyadic(a, ext)
        mt = majorant(til)[:levels]
        til = til[:levels]
    else:
        til = np.full(levels, np.nan)
        mt = np.full(levels, np.nan)
    return DyadicProfile(levels, theta, til, hat[:levels], mt, mh)


@dataclass
class NormReport:
    """All functionals of one sequence at one exponent ``p``."""

    p: float
    p_prime: float
    j_p: float
    j_p_star: float
    i_p: float
    net_norm: float
    lorentz_norm: float
    lp_quadrature: float
    ratios: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def hardy_lhs_rhs(a, alpha: float, q: float, which: str = "tail"):
    """Both sides of the discrete Hardy inequalities.

    ``tail``:  ``(sum_k (2^(αk) sum_{m>=k} a_m)^q)^(1/q)``
    ``head``:  ``(sum_k (2^((α-1)k) sum_{m<=k} 2^m a_m)^q)^(1/q)``

    The right side is ``(sum_k (2^(αk) a_k)^q)^(1/q)`` in both cases.  The
    head sum has infinitely many nonzero terms; past the list they form a
    geometric series and are added in closed form.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise ValueError("expected a one-dimensional list")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise ValueError("entries must be finite and nonnegative")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 1 < q < math.inf:
        raise ValueError("q must lie in (1, inf)")
    if which not in ("tail", "head"):
        raise ValueError("which must be 'tail' or 'head'")
    if a.size == 0:
        return 0.0, 0.0
    k = np.arange(a.size, dtype=float)
    rhs = np.sum((2.0 ** (alpha * k) * a) ** q) ** (1.0 / q)
    if which == "tail":
        inner = np.cumsum(a[::-1])[::-1]
        lhs = np.sum((2.0 ** (alpha * k) * inner) ** q)
    else:
        inner = np.cumsum(2.0 ** k * a)
        lhs = np.sum((2.0 ** ((alpha - 1.0) * k) * inner) ** q)
        r = 2.0 ** ((alpha - 1.0) * q)
        lhs += (2.0 ** ((alpha - 1.0) * a.size) * inner[-1]) ** q / (1.0 - r)
    return float(lhs ** (1.0 / q)), float(rhs)
