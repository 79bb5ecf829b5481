import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import sequences
from gmseq import TwoSidedSequence, make_example, make_family
from gmseq.classes import (block_harmonic_sum, gm_bar_diagnostic, gm_classic_diagnostic,
                           gm_real_inclusion_diagnostic, gm_star_diagnostic, sector_check,
                           verdict, wm_diagnostic)
from gmseq.experiments import load_frozen

FROZEN = load_frozen()


def harmonic(n, shift=0):
    return TwoSidedSequence(1, 1.0 / (np.arange(1, n + 1) + shift))


def test_verdict_rule():
    nan = math.nan
    assert verdict([]) == "inconclusive"
    assert verdict([nan, nan]) == "inconclusive"
    assert verdict([1.0]) == "bounded"
    assert verdict([1.0, math.inf]) == "growing"
    assert verdict([1, 1, 1, 2, 2, 2]) == "growing"
    assert verdict([1, 1, 1, 2, 1.4, 2]) == "bounded"
    assert verdict([0, 0, 0]) == "bounded"
    assert verdict([1, nan, 2, 3]) == "growing"


def test_gm_star_examples():
    d = gm_star_diagnostic(TwoSidedSequence.delta())
    assert d.ratio[0] == 2 and d.verdict == "bounded"
    assert np.all(d.ratio[1:] == 0)
    m = gm_star_diagnostic(harmonic(4096, shift=1))
    assert m.verdict == "bounded" and math.isfinite(m.best_constant)
    p6 = gm_star_diagnostic(make_example("prop-6-compensated", 12))
    assert p6.verdict == "bounded"
    assert p6.best_constant <= 20 / 3 * 1.05


def test_gm_bar_examples():
    p5 = gm_bar_diagnostic(make_example("prop-5-gap", 14))
    assert p5.verdict == "bounded"
    assert p5.best_constant <= FROZEN["prop5_gm_bar_max"]["value"]
    p7 = make_example("prop-7-lacunary", 14)
    assert gm_bar_diagnostic(p7).verdict == "bounded"
    assert gm_bar_diagnostic(p7.restrict(None, 0)).verdict == "growing"


def test_gm_bar_on_prop7_negative_side_grows_geometrically():
    neg = make_example("prop-7-lacunary", 14).restrict(None, 0)
    r = gm_bar_diagnostic(neg).ratio[2:14]
    assert np.all(r[1:] > r[:-1])


def test_gm_classic_examples():
    assert gm_classic_diagnostic(harmonic(4096)).verdict == "bounded"
    assert gm_classic_diagnostic(harmonic(1024), full_grid=True).verdict == "bounded"
    alt = TwoSidedSequence(1, [(-1.0) ** k for k in range(1, 513)])
    g = gm_classic_diagnostic(alt)
    assert g.verdict == "growing"
    # brute force: the ratio roughly doubles with n
    for n, r in zip(g.block_index[:8], g.ratio[:8]):
        assert r == pytest.approx(O.gm_classic_ratio(lambda k: alt[k], int(n)), rel=1e-13)
    assert gm_classic_diagnostic(make_example("prop-5-gap", 12)).verdict == "growing"
    with pytest.raises(ValueError):
        gm_classic_diagnostic(alt, lam=1)


@pytest.mark.parametrize("name", ["prop-5-gap", "prop-6-compensated", "prop-7-lacunary"])
@pytest.mark.parametrize("lam", [2.0, 3.0])
def test_gm_classic_matches_brute_force(name, lam):
    a = make_example(name, 8)
    for full in (False, True):
        g = gm_classic_diagnostic(a, lam, full_grid=full)
        for n, r in list(zip(g.block_index, g.ratio))[:300]:
            want = O.gm_classic_ratio(lambda k: a[k] if k >= 1 else 0, int(n), lam)
            if math.isnan(r):
                assert want == math.inf or want == 0 or math.isnan(want)
            else:
                assert r == pytest.approx(want, rel=1e-12)


def test_prop5_classic_ratio_grows_like_sqrt_level():
    g = gm_classic_diagnostic(make_example("prop-5-gap", 16))
    for n, r in zip(g.block_index, g.ratio):
        level = int(n).bit_length() - 1
        if 5 <= level <= 16:
            assert r >= 0.3 * math.sqrt(level)


@given(st.integers(2, 600), st.floats(0.1, 3), st.sampled_from(["power", "exp", "step"]))
def test_monotone_classic_constant(size, rate, kind):
    k = np.arange(1, size + 1, dtype=float)
    vals = {"power": k ** -rate, "exp": np.exp(-rate * k / 50), "step": (k <= size // 2) + 0.5}[kind]
    for full in (False, True):
        g = gm_classic_diagnostic(TwoSidedSequence(1, vals), 2.0, full_grid=full)
        finite = g.ratio[np.isfinite(g.ratio)]
        assert np.all(finite <= 2 * (1 + 1e-12))


def test_wm_examples():
    ones = TwoSidedSequence(1, np.ones(64))
    w = wm_diagnostic(ones)
    assert np.allclose(w.ratio[:64], 1) and w.verdict == "bounded"
    w = wm_diagnostic(harmonic(50))
    h = np.cumsum(1 / np.arange(1, 51))
    assert np.allclose(w.ratio[:50], 1 / h, rtol=1e-14)
    alt = TwoSidedSequence(1, [(-1.0) ** (k + 1) for k in range(1, 21)])
    w = wm_diagnostic(alt)
    assert np.all(np.isinf(w.ratio[1:20:2])) and w.verdict == "growing"


def test_sector_examples():
    k = np.arange(1, 20)
    assert sector_check(TwoSidedSequence(1, 1.0 / k), 0, 0) == (True, None)
    assert sector_check(TwoSidedSequence.delta(1, -1.0), 0, math.pi / 4) == (False, 1)
    rot = TwoSidedSequence(1, np.exp(1j * math.pi / 8) / k)
    assert sector_check(rot, 0, 0.45) == (True, None)
    assert sector_check(rot, 0, 0.3) == (False, 1)
    # negative indices and zeros are ignored; angles wrap around
    b = TwoSidedSequence(-2, [-5, 0, 7, 0, np.exp(-0.1j)])
    assert sector_check(b, 2 * math.pi - 0.05, 0.06) == (True, None)
    for alpha, beta in ((-0.1, 0.1), (2 * math.pi, 0.1), (0, math.pi / 2), (0, -0.1)):
        with pytest.raises(ValueError):
            sector_check(b, alpha, beta)


def test_block_harmonic_sum():
    h = harmonic(64)
    want = math.fsum(1 / k ** 2 for k in range(8, 17))
    assert block_harmonic_sum(h, 3) == pytest.approx(want, rel=1e-14)
    assert block_harmonic_sum(h, 3) == pytest.approx(0.0725495, abs=1e-7)
    assert block_harmonic_sum(TwoSidedSequence(0, [0.0]), 2) == 0
    with pytest.raises(ValueError):
        block_harmonic_sum(h, -1)


def test_real_gm_inclusion_bounded():
    bound = FROZEN["gm_real_inclusion_max"]["value"]
    for seed in range(20):
        d = gm_real_inclusion_diagnostic(make_family("random-gm", [seed], 1024))
        assert d.verdict == "bounded"
        assert d.best_constant <= bound


@given(sequences(max_len=30, nonzero=True), st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_scale_invariance(a, c):
    b = a.scale(c)
    for fn in (gm_star_diagnostic, gm_bar_diagnostic, gm_classic_diagnostic, wm_diagnostic):
        ra, rb = fn(a).ratio, fn(b).ratio
        assert np.array_equal(np.isnan(ra), np.isnan(rb)) or fn is wm_diagnostic
        mask = np.isfinite(ra) & np.isfinite(rb)
        assert np.allclose(ra[mask], rb[mask], rtol=1e-9, atol=1e-300)


@given(sequences(max_len=30, nonzero=True))
def test_bar_bound_implies_star_bound(a):
    s, b = gm_star_diagnostic(a), gm_bar_diagnostic(a)
    mask = np.isfinite(b.ratio) & np.isfinite(s.ratio)
    assert np.all(s.ratio[mask] <= b.ratio[mask] * (1 + 1e-12))


def test_running_max_and_witness():
    d = gm_star_diagnostic(make_example("prop-5-gap", 8))
    scored = d.ratio[d.scored]
    assert d.best_constant == scored.max()
    assert d.ratio[d.witness] == d.best_constant
    assert np.nanmax(d.running_max) == d.best_constant


def test_serialization():
    d = wm_diagnostic(TwoSidedSequence(1, [1.0, -1.0, 1.0]))
    obj = json.loads(d.to_json())
    assert obj["class_name"] == "wm" and obj["ratio"][1] == "inf"
    assert set(obj) == {"class_name", "block_index", "numerator", "denominator", "ratio",
                        "running_max", "best_constant", "witness", "verdict"}
    lines = d.to_csv().splitlines()
    assert lines[0] == "n,numerator,denominator,ratio" and len(lines) == 5
    assert lines[2].endswith(",inf")
    g = wm_diagnostic(TwoSidedSequence.delta(2))
    assert json.loads(g.to_json())["ratio"][0] is None


def test_zero_sequence_rejected():
    z = TwoSidedSequence(0, [0.0, 0.0])
    for fn in (gm_star_diagnostic, gm_bar_diagnostic, gm_real_inclusion_diagnostic):
        with pytest.raises(ValueError):
            fn(z)
