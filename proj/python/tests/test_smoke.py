import math
import os

import pytest
from scipy import stats

import gaitxai


def test_min_max_normalize():
    assert gaitxai.min_max_normalize([2.0, 4.0, 6.0]) == [0.0, 0.5, 1.0]
    assert gaitxai.min_max_normalize([7.0, 7.0]) == [0.5, 0.5]


def test_t_curve_matches_scipy():
    a = [[1.0, 5.0], [2.0, 6.0], [4.0, 9.0]]
    b = [[2.0, 4.0], [3.0, 7.0], [5.0, 8.0], [4.0, 6.0]]
    t, nu = gaitxai.t_curve(a, b)
    assert nu == 5.0
    for q in range(2):
        expected = stats.ttest_ind([c[q] for c in a], [c[q] for c in b]).statistic
        assert t[q] == pytest.approx(expected, rel=1e-12)
    d = gaitxai.cohens_d(a, b)
    factor = math.sqrt(3 * 4 / 7)
    for q in range(2):
        assert t[q] == pytest.approx(d[q] * factor, rel=1e-12)


def test_rft_threshold_pointwise_limit():
    # With zero resels the threshold is the plain upper-tail t quantile.
    assert gaitxai.rft_threshold(30.0, 0.0, 0.05) == pytest.approx(
        stats.t.ppf(0.95, 30), abs=1e-8
    )
    assert gaitxai.rft_threshold(30.0, 10.0, 0.05) > stats.t.ppf(0.95, 30)
    with pytest.raises(gaitxai.GaitxaiError):
        gaitxai.rft_threshold(30.0, 10.0, 1.5)


def test_pipeline_end_to_end(tmp_path):
    data = tmp_path / "data.csv"
    out = tmp_path / "out"
    gaitxai.synth(
        str(data),
        seed=5,
        n_subjects_class0=6,
        n_subjects_class1=6,
        trials_per_subject=2,
        series_length=50,
        bump_center=25,
        bump_width=8,
    )
    assert data.exists()
    assert gaitxai.zero_rule(str(data)) == 0.5

    config = {
        "data.path": str(data),
        "out": str(out),
        "cv.k": 2,
        "train.epochs": 3,
        "seed": 5,
    }
    gaitxai.train(config)
    gaitxai.explain(config)
    gaitxai.spm(config)
    gaitxai.report(config)
    for name in [
        "report.json",
        "relevance_total.csv",
        "spm.csv",
        "panel_A.svg",
        "overlap_table.txt",
    ]:
        assert (out / name).exists(), name
    assert (out / "panel_A.svg").read_text().startswith("<?xml")


def test_missing_input_raises(tmp_path):
    with pytest.raises(gaitxai.GaitxaiError):
        gaitxai.train({"data.path": str(tmp_path / "absent.csv")})


def test_smoothness_estimate(tmp_path):
    rng_a = [[math.sin(q / 7.0 + i) for q in range(60)] for i in range(4)]
    rng_b = [[math.cos(q / 9.0 + i) for q in range(60)] for i in range(4)]
    fwhm = gaitxai.estimate_fwhm(rng_a, rng_b)
    assert fwhm > 0.0
    thr = gaitxai.permutation_threshold(rng_a, rng_b, alpha=0.05, n_perm=1000, seed=1)
    assert thr > 0.0
