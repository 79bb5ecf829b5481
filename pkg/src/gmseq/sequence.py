"""Finite two-sided complex sequences.

A :class:`TwoSidedSequence` stores the coefficients ``a_k`` for
``k_min <= k <= k_max``; every other index is exactly zero.  All the other
modules take these objects as input, so this module also hosts the
difference operator, the symmetric rearrangement, the generators for the
example sequences, and JSON/CSV readers and writers.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "TwoSidedSequence",
    "RearrangedSequence",
    "delta_abs",
    "delta_abs_array",
    "symmetric_rearrangement",
    "make_example",
    "make_family",
    "EXAMPLES",
    "FAMILIES",
    "read_sequence",
    "write_sequence",
    "SequenceFormatError",
]

EXAMPLES = ("prop-5-gap", "prop-6-compensated", "prop-7-lacunary")
FAMILIES = ("power", "one-sided-power", "random-gm", "random-complex")


class SequenceFormatError(ValueError):
    """Raised when a sequence file is malformed."""


@dataclass(frozen=True, eq=False)
class TwoSidedSequence:
    """Complex sequence with finite support.

    Parameters
    ----------
    offset : int
        Index of the first stored coefficient.
    values : array_like
        Coefficients ``a_offset, a_offset+1, ...``.  Copied into a read-only
        complex array.
    """

    offset: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex, copy=True).ravel()
        if vals.size == 0:
            raise ValueError("a sequence needs at least one stored value")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sequence values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict(cls, coeffs):
        """Build from a mapping ``{k: a_k}``."""
        if not coeffs:
            return cls(0, [0.0])
        lo, hi = min(coeffs), max(coeffs)
        vals = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in coeffs.items():
            vals[k - lo] = v
        return cls(lo, vals)

    @classmethod
    def delta(cls, k=0, value=1.0):
        return cls(k, [value])

    @property
    def k_min(self) -> int:
        return self.offset

    @property
    def k_max(self) -> int:
        return self.offset + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def __len__(self):
        return self.values.size

    def __getitem__(self, k):
        k = int(k)
        if self.k_min <= k <= self.k_max:
            return complex(self.values[k - self.offset])
        return 0j

    def __eq__(self, other):
        if not isinstance(other, TwoSidedSequence):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.offset == b.offset and np.array_equal(a.values, b.values)

    def __hash__(self):
        t = self.trimmed()
        return hash((t.offset, t.values.tobytes()))

    def __repr__(self):
        return f"TwoSidedSequence(offset={self.offset}, len={self.values.size})"

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def support(self):
        """Return ``(first, last)`` nonzero index, or ``None`` if all zero."""
        nz = np.flatnonzero(self.values)
        if nz.size == 0:
            return None
        return self.offset + int(nz[0]), self.offset + int(nz[-1])

    def trimmed(self) -> TwoSidedSequence:
        """Same sequence with leading and trailing zeros dropped."""
        supp = self.support()
        if supp is None:
            return TwoSidedSequence(0, [0.0])
        lo, hi = supp
        if lo == self.k_min and hi == self.k_max:
            return self
        return TwoSidedSequence(lo, self.values[lo - self.offset:hi - self.offset + 1])

    def radius(self) -> int:
        """Largest ``|k|`` with ``a_k != 0`` (0 for the zero sequence)."""
        supp = self.support()
        if supp is None:
            return 0
        return max(abs(supp[0]), abs(supp[1]))

    def window(self, lo, hi) -> np.ndarray:
        """Dense array of ``a_lo .. a_hi`` (inclusive), zero-padded."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        s, e = max(lo, self.k_min), min(hi, self.k_max)
        if s <= e:
            out[s - lo:e - lo + 1] = self.values[s - self.offset:e - self.offset + 1]
        return out

    def reflect(self) -> TwoSidedSequence:
        """``k -> -k``."""
        return TwoSidedSequence(-self.k_max, self.values[::-1])

    def scale(self, c) -> TwoSidedSequence:
        return TwoSidedSequence(self.offset, self.values * complex(c))

    def restrict(self, lo=None, hi=None) -> TwoSidedSequence:
        """Zero every coefficient outside ``[lo, hi]`` (``None`` = unbounded)."""
        lo = self.k_min if lo is None else max(lo, self.k_min)
        hi = self.k_max if hi is None else min(hi, self.k_max)
        if lo > hi:
            return TwoSidedSequence(0, [0.0])
        return TwoSidedSequence(lo, self.values[lo - self.offset:hi - self.offset + 1])

    def with_value(self, k, value) -> TwoSidedSequence:
        lo, hi = min(k, self.k_min), max(k, self.k_max)
        vals = self.window(lo, hi)
        vals[k - lo] = value
        return TwoSidedSequence(lo, vals)

    def to_dict(self):
        return {
            "offset": self.offset,
            "re": [float(v) for v in self.values.real],
            "im": [float(v) for v in self.values.imag],
        }


@dataclass(frozen=True)
class RearrangedSequence:
    """Magnitudes sorted into zigzag and one-sided orders.

    ``symmetric[i]`` is the value at the i-th position of the order
    ``0, -1, 1, -2, 2, ...``; ``one_sided`` holds the same numbers as
    ``a*_1 >= a*_2 >= ...``.
    """

    symmetric: np.ndarray
    one_sided: np.ndarray

    def as_sequence(self) -> TwoSidedSequence:
        """Lay the zigzag list out as a two-sided sequence."""
        n = self.symmetric.size
        if n == 0:
            return TwoSidedSequence(0, [0.0])
        idx = zigzag_indices(n)
        return TwoSidedSequence.from_dict({int(k): v for k, v in zip(idx, self.symmetric)})


def zigzag_indices(n):
    """First ``n`` integers of the order ``0, -1, 1, -2, 2, ...``."""
    i = np.arange(n)
    return np.where(i % 2 == 1, -(i + 1) // 2, i // 2)


def delta_abs(a: TwoSidedSequence, k: int) -> float:
    """Symmetric difference ``|Delta a_k|``.

    Forward difference for ``k > 0``, backward for ``k < 0``, and the sum of
    both one-step differences at ``k = 0``.
    """
    k = int(k)
    if k > 0:
        return abs(a[k] - a[k + 1])
    if k < 0:
        return abs(a[k] - a[k - 1])
    return abs(a[0] - a[1]) + abs(a[0] - a[-1])


def delta_abs_array(a: TwoSidedSequence, lo: int, hi: int) -> np.ndarray:
    """Vectorised :func:`delta_abs` for ``k = lo .. hi`` (inclusive)."""
    v = a.window(lo - 1, hi + 1)
    ks = np.arange(lo, hi + 1)
    fwd = np.abs(v[1:-1] - v[2:])
    bwd = np.abs(v[1:-1] - v[:-2])
    out = np.where(ks > 0, fwd, bwd)
    if lo <= 0 <= hi:
        out[-lo] = fwd[-lo] + bwd[-lo]
    return out


def symmetric_rearrangement(a: TwoSidedSequence) -> RearrangedSequence:
    """Sort magnitudes descending and lay them out in zigzag order.

    Ties are broken by larger ``|k|`` first, then positive before negative
    index, so the output is fully deterministic.  Zeros outside the stored
    range are not listed.
    """
    mags = np.abs(a.values)
    ks = a.indices
    # lexsort: last key is primary
    order = np.lexsort((ks < 0, -np.abs(ks), -mags))
    sorted_mags = mags[order]
    return RearrangedSequence(symmetric=sorted_mags.copy(), one_sided=sorted_mags.copy())


def make_example(name: str, nmax: int) -> TwoSidedSequence:
    """Example sequences with dyadic block structure, blocks ``n <= nmax``.

    ``prop-5-gap``
        ``1/2^n`` on ``2^n <= k < 2^(n+1)`` (``n >= 4``), except that the even
        ``k < 2^n + isqrt(n)`` are zero; zero for ``k <= 15``.
    ``prop-6-compensated``
        ``(-1)^k 2^(-7n/4) + i (2/3)^n`` on ``2^n <= k < 2^(n+1)`` (``n >= 0``),
        zero for ``k <= 0``.
    ``prop-7-lacunary``
        ``(2/3)^n`` on ``2^n <= k < 2^(n+1)`` and at ``k = -2^n``; zero elsewhere.
    """
    if name not in EXAMPLES:
        raise ValueError(f"unknown example {name!r}; expected one of {EXAMPLES}")
    nmax = int(nmax)
    if nmax < 5:
        raise ValueError("nmax must be at least 5")
    if nmax > 26:
        raise ValueError("nmax above 26 does not fit in memory")
    top = 2 ** (nmax + 1)
    k = np.arange(1, top)
    n = np.floor(np.log2(k)).astype(int)
    # guard the float log2 at exact powers of two
    n = np.where(2 ** (n + 1) <= k, n + 1, n)
    n = np.where(2 ** n > k, n - 1, n)

    if name == "prop-5-gap":
        gap = np.array([math.isqrt(int(j)) for j in range(nmax + 1)])
        vals = np.ldexp(1.0, -n)
        zero = (k % 2 == 0) & (k < 2 ** n + gap[n])
        vals = np.where(zero | (k <= 15), 0.0, vals)
        return TwoSidedSequence(16, vals[15:])

    if name == "prop-6-compensated":
        sign = np.where(k % 2 == 0, 1.0, -1.0)
        re = sign * 2.0 ** (-1.75 * n)
        im = (2.0 / 3.0) ** n
        return TwoSidedSequence(1, re + 1j * im)

    # prop-7-lacunary
    pos = (2.0 / 3.0) ** n
    vals = np.zeros(top + 2 ** nmax, dtype=complex)
    base = -(2 ** nmax)
    vals[1 - base:] = pos
    for j in range(nmax + 1):
        vals[-(2 ** j) - base] = (2.0 / 3.0) ** j
    return TwoSidedSequence(base, vals)


def make_family(family: str, params, size: int) -> TwoSidedSequence:
    """Parametric test families on ``[-size, size]``.

    ``power``            ``[alpha]``: ``(|k|+1)^-alpha``.
    ``one-sided-power``  ``[alpha]``: ``(k+1)^-alpha`` for ``0 <= k <= size``.
    ``random-gm``        ``[seed, alpha=1]``: real, ``|a_k|`` nonincreasing
                         in ``|k|`` (jittered power envelope, sorted) with
                         one random sign per dyadic block of ``|k|``.
    ``random-complex``   ``[seed]``: independent standard complex normals.
    """
    params = [float(p) for p in (params or [])]
    size = int(size)
    if size < 1:
        raise ValueError("size must be >= 1")
    k = np.arange(-size, size + 1)

    if family in ("power", "one-sided-power"):
        if len(params) != 1:
            raise ValueError(f"{family} takes exactly one parameter (alpha)")
        alpha = params[0]
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        if family == "power":
            return TwoSidedSequence(-size, (np.abs(k) + 1.0) ** -alpha)
        return TwoSidedSequence(0, (np.arange(size + 1) + 1.0) ** -alpha)

    if family == "random-gm":
        if not 1 <= len(params) <= 2:
            raise ValueError("random-gm takes [seed] or [seed, alpha]")
        alpha = params[1] if len(params) == 2 else 1.0
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        rng = np.random.default_rng(_seed(params[0]))
        r = np.arange(size + 1)
        mag = np.sort(rng.uniform(0.5, 1.5, size=r.size) * (r + 1.0) ** -alpha)[::-1]
        blocks = np.array([int(j).bit_length() for j in r])
        signs = rng.choice([-1.0, 1.0], size=(2, blocks[-1] + 1))
        pos = signs[0][blocks] * mag
        neg = signs[1][blocks] * mag
        neg[0] = pos[0]
        return TwoSidedSequence(-size, np.concatenate((neg[:0:-1], pos)))

    if family == "random-complex":
        if len(params) != 1:
            raise ValueError("random-complex takes exactly one parameter (seed)")
        rng = np.random.default_rng(_seed(params[0]))
        z = rng.standard_normal((2, k.size))
        return TwoSidedSequence(-size, z[0] + 1j * z[1])

    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _seed(x):
    if x != int(x) or x < 0:
        raise ValueError("seed must be a nonnegative integer")
    return int(x)


def read_sequence(path) -> TwoSidedSequence:
    """Read a sequence from ``.json`` or ``.csv`` (rows ``k,re,im``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SequenceFormatError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return _parse_csv(text)
    return _parse_json(text)


def _parse_json(text):
    try:
        obj = json.loads(text)
        offset, re, im = obj["offset"], obj["re"], obj["im"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SequenceFormatError(f"bad sequence JSON: {exc}") from exc
    if not isinstance(offset, int) or isinstance(offset, bool):
        raise SequenceFormatError("offset must be an integer")
    if len(re) != len(im):
        raise SequenceFormatError(f"re/im length mismatch ({len(re)} vs {len(im)})")
    try:
        vals = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SequenceFormatError(f"non-numeric entry: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise SequenceFormatError("non-finite entry")
    if vals.size == 0:
        raise SequenceFormatError("empty sequence")
    return TwoSidedSequence(offset, vals)


def _parse_csv(text):
    coeffs = {}
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip():
            continue
        if lineno == 1 and row[0].strip().lower() == "k":
            continue
        if len(row) != 3:
            raise SequenceFormatError(f"line {lineno}: expected k,re,im")
        try:
            k, re, im = int(row[0]), float(row[1]), float(row[2])
        except ValueError as exc:
            raise SequenceFormatError(f"line {lineno}: {exc}") from exc
        if not (math.isfinite(re) and math.isfinite(im)):
            raise SequenceFormatError(f"line {lineno}: non-finite entry")
        if k in coeffs:
            raise SequenceFormatError(f"line {lineno}: duplicate index {k}")
        coeffs[k] = complex(re, im)
    if not coeffs:
        raise SequenceFormatError("empty sequence")
    return TwoSidedSequence.from_dict(coeffs)


def write_sequence(a: TwoSidedSequence, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "re", "im"])
            for k, v in zip(a.indices, a.values):
                w.writerow([int(k), repr(float(v.real)), repr(float(v.imag))])
    else:
        path.write_text(json.dumps(a.to_dict()))
