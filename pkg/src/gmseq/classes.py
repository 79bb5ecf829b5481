"""Membership diagnostics for general monotone sequence classes.

Membership of a finite truncation cannot be decided, so every diagnostic
returns the ratio curve it measured together with a verdict that is a
statement about the computed range only:

``growing``
    some ratio is infinite, or each entry of the last third of the scored
    curve is at least 1.5 times the largest entry of the first third;
``inconclusive``
    no scored block at all;
``bounded``
    otherwise.

Blocks where numerator and denominator both vanish are not scored.  The
verdict window opens at the first block with a nonzero numerator (earlier
blocks lie before the support and say nothing about growth) and closes
before the first block past the support, which is reported but not judged.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .functionals import default_levels, dyadic_profile
from .sequence import TwoSidedSequence

__all__ = [
    "ClassDiagnostic",
    "verdict",
    "GROWTH_FACTOR",
    "gm_star_diagnostic",
    "gm_bar_diagnostic",
    "gm_classic_diagnostic",
    "wm_diagnostic",
    "gm_real_inclusion_diagnostic",
    "sector_check",
    "block_harmonic_sum",
    "one_sided",
]

GROWTH_FACTOR = 1.5


@dataclass(frozen=True)
class ClassDiagnostic:
    class_name: str
    block_index: np.ndarray
    numerator: np.ndarray
    denominator: np.ndarray
    ratio: np.ndarray        # NaN where the block is not scored
    running_max: np.ndarray
    best_constant: float
    witness: int | None
    verdict: str

    @property
    def scored(self) -> np.ndarray:
        return ~np.isnan(self.ratio)

    def to_dict(self):
        def num(x):
            x = float(x)
            if math.isnan(x):
                return None
            if math.isinf(x):
                return "inf"
            return x

        return {
            "class_name": self.class_name,
            "block_index": [int(n) for n in self.block_index],
            "numerator": [num(x) for x in self.numerator],
            "denominator": [num(x) for x in self.denominator],
            "ratio": [num(x) for x in self.ratio],
            "running_max": [num(x) for x in self.running_max],
            "best_constant": num(self.best_constant),
            "witness": self.witness,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "numerator", "denominator", "ratio"])
        for n, u, v, r in zip(self.block_index, self.numerator, self.denominator, self.ratio):
            w.writerow([int(n), f"{u:.17g}", f"{v:.17g}", f"{r:.17g}"])
        return buf.getvalue()


def verdict(ratio) -> str:
    """Classify a ratio curve (NaN entries are unscored)."""
    r = np.asarray(ratio, dtype=float)
    r = r[~np.isnan(r)]
    if r.size == 0:
        return "inconclusive"
    if np.any(np.isinf(r)):
        return "growing"
    t = r.size // 3
    if t and np.all(r[-t:] >= GROWTH_FACTOR * r[:t].max()) and r[-t:].max() > 0:
        return "growing"
    return "bounded"


def _diagnostic(name, idx, num, den, horizon):
    """Assemble a diagnostic; ``horizon`` is the exclusive end of the judged window."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    ratio = np.full(num.shape, np.nan)
    both_zero = (num == 0) & (den == 0)
    pos = den > 0
    ratio[pos] = num[pos] / den[pos]
    ratio[(den == 0) & ~both_zero] = np.inf
    filled = np.where(np.isnan(ratio), -np.inf, ratio)
    running = np.maximum.accumulate(filled) if filled.size else filled
    running = np.where(np.isneginf(running), np.nan, running)
    if np.all(np.isnan(ratio)):
        best, witness = 0.0, None
    else:
        witness = int(idx[int(np.argmax(filled))])
        best = float(np.max(filled))
    nz = np.flatnonzero(num[:horizon] > 0)
    judged = ratio[nz[0]:horizon] if nz.size else ratio[:0]
    return ClassDiagnostic(name, np.asarray(idx), num, den, ratio, running, best, witness,
                           verdict(judged))


def _block_horizon(a):
    # blocks 0 .. bit_length(max|k|) meet the support
    return a.radius().bit_length() + 1


def _require_nonzero(a):
    if a.is_zero():
        raise ValueError("diagnostic needs a nonzero sequence")


def gm_star_diagnostic(a: TwoSidedSequence, levels: int | None = None) -> ClassDiagnostic:
    """``Θ_n`` against ``sup_k min(1, 2^(k-n)) ã_{2^k}``."""
    _require_nonzero(a)
    prof = dyadic_profile(a, levels)
    idx = np.arange(prof.levels)
    return _diagnostic("gm-star", idx, prof.theta, prof.majorant_tilde, _block_horizon(a))


def gm_bar_diagnostic(a: TwoSidedSequence, levels: int | None = None) -> ClassDiagnostic:
    """``Θ_n`` against ``sup_k min(1, 2^(k-n)) â_{2^k}``."""
    _require_nonzero(a)
    prof = dyadic_profile(a, levels, tilde=False)
    idx = np.arange(prof.levels)
    return _diagnostic("gm-bar", idx, prof.theta, prof.majorant_hat, _block_horizon(a))


def one_sided(a: TwoSidedSequence) -> TwoSidedSequence:
    """The part ``k >= 1`` (everything else zeroed)."""
    return a.restrict(1, None)


def gm_classic_diagnostic(a: TwoSidedSequence, lam: float = 2.0, full_grid: bool = False) -> ClassDiagnostic:
    """``n sum_{k=n}^{2n} |a_k - a_{k+1}|`` against ``sum_{n/lam <= k <= lam n} |a_k|``.

    Only ``k >= 1`` is read.  ``n`` runs over powers of two unless
    ``full_grid`` is set.  Every grid point is reported, but the verdict only
    reads those with ``max(2n + 1, lam n) <= max k``.
    """
    lam = float(lam)
    if not lam > 1:
        raise ValueError("lambda must be > 1")
    r = max(one_sided(a).radius(), 1)
    if full_grid:
        ns = np.arange(1, r + 2)
    else:
        ns = 2 ** np.arange(r.bit_length() + 1)
    top = int(math.floor(lam * ns[-1])) + 2
    v = a.window(0, max(top, 2 * int(ns[-1]) + 2))
    v[0] = 0
    absv = np.abs(v)
    diff = np.abs(v[:-1] - v[1:])             # diff[k] = |a_k - a_{k+1}|
    lo = np.maximum(np.ceil(ns / lam - 1e-12).astype(int), 1)
    hi = np.floor(lam * ns + 1e-9).astype(int)
    if full_grid:
        # differences of prefix sums lose the small late blocks in double precision
        cd = np.concatenate(([0.0], np.cumsum(diff, dtype=np.longdouble)))
        ca = np.concatenate(([0.0], np.cumsum(absv, dtype=np.longdouble)))
        lhs = (ns * (cd[2 * ns + 1] - cd[ns])).astype(float)
        rhs = (ca[hi + 1] - ca[lo]).astype(float)
    else:
        lhs = np.array([n * diff[n:2 * n + 1].sum() for n in ns])
        rhs = np.array([absv[l:h + 1].sum() for l, h in zip(lo, hi)])
    # only grid points whose windows stay inside the stored range are judged;
    # past that the truncation edge shows up as a spurious jump
    inside = np.maximum(2 * ns + 1, hi) <= r
    return _diagnostic("gm", ns, lhs, rhs, int(np.count_nonzero(inside)))


def wm_diagnostic(a: TwoSidedSequence) -> ClassDiagnostic:
    """``n |a_n|`` against ``|sum_{j=1}^n a_j|`` for ``n = 1 .. max k + 1``."""
    r = max(one_sided(a).radius(), 1)
    v = a.window(1, r + 1)
    ns = np.arange(1, r + 2)
    return _diagnostic("wm", ns, ns * np.abs(v), np.abs(np.cumsum(v)), r)


def block_harmonic_sum(a: TwoSidedSequence, n: int) -> float:
    """``sum_{k=2^n}^{2^(n+1)} |a_k| / k``."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    lo, hi = 2 ** n, 2 ** (n + 1)
    k = np.arange(lo, hi + 1)
    return float(np.sum(np.abs(a.window(lo, hi)) / k))


def gm_real_inclusion_diagnostic(a: TwoSidedSequence, levels: int | None = None) -> ClassDiagnostic:
    """Block harmonic sums against the ``â`` majorant, for ``k >= 1`` only.

    Finite ratios across ``n`` are what the inclusion of real general
    monotone sequences into the ``â`` class rests on.
    """
    b = one_sided(a)
    _require_nonzero(b)
    prof = dyadic_profile(b, levels, tilde=False)
    idx = np.arange(prof.levels)
    num = np.array([block_harmonic_sum(b, n) for n in idx])
    horizon = b.radius().bit_length()  # block [2^n, 2^(n+1)] meets the support iff 2^n <= max k
    return _diagnostic("gm-real-inclusion", idx, num, prof.majorant_hat, horizon)


def sector_check(a: TwoSidedSequence, alpha: float, beta: float):
    """Whether every nonzero ``a_k`` (``k >= 1``) has ``|arg a_k - alpha| <= beta``.

    Returns ``(inside, first_violation)``; the angle difference is reduced
    into ``(-pi, pi]``.
    """
    if not 0 <= alpha < 2 * math.pi:
        raise ValueError("alpha must lie in [0, 2 pi)")
    if not 0 <= beta < math.pi / 2:
        raise ValueError("beta must lie in [0, pi/2)")
    b = one_sided(a)
    for k, z in zip(b.indices, b.values):
        if z == 0:
            continue
        d = math.remainder(math.atan2(z.imag, z.real) - alpha, 2 * math.pi)
        if d == -math.pi:
            d = math.pi
        if abs(d) > beta:
            return False, int(k)
    return True, None
