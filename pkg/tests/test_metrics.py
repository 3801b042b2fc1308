import numpy as np
import pytest
from scipy import linalg as scipy_linalg

from sgt import metrics, skeleton, stylestats
from sgt.controls import StyleControlTrack, empty_controls
from sgt.errors import DimensionMismatch, EmptySet, NoMaskedFrames
from sgt.metrics import GaussianStats, fgd, fit_gaussian, frechet_distance, pcs, scs
from sgt.skeleton import POSE_DIM

from .conftest import random_motion


def test_frechet_identity_zero():
    rng = np.random.default_rng(0)
    feats = rng.normal(0, 1, (200, 8))
    g = fit_gaussian(feats)
    assert abs(frechet_distance(g, g)) < 1e-8


def test_frechet_mean_shift_closed_form():
    d = 6
    m = np.linspace(0.5, 2.0, d)
    g1 = GaussianStats(np.zeros(d), np.eye(d))
    g2 = GaussianStats(m, np.eye(d))
    assert frechet_distance(g1, g2) == pytest.approx(float(m @ m), abs=1e-8)


def test_frechet_covariance_scaling_closed_form():
    d = 5
    g1 = GaussianStats(np.zeros(d), np.eye(d))
    g2 = GaussianStats(np.zeros(d), 4.0 * np.eye(d))
    assert frechet_distance(g1, g2) == pytest.approx(d, abs=1e-6)


def test_frechet_symmetric_nonnegative_and_matches_scipy():
    rng = np.random.default_rng(3)
    a = rng.normal(0, 1, (300, 7))
    b = rng.normal(0.3, 1.4, (300, 7))
    g1, g2 = fit_gaussian(a), fit_gaussian(b)
    d12 = frechet_distance(g1, g2)
    d21 = frechet_distance(g2, g1)
    assert d12 >= 0 and d12 == pytest.approx(d21, rel=1e-8)
    # independent square-root oracle
    covmean = scipy_linalg.sqrtm(g1.sigma @ g2.sigma).real
    oracle = float(((g1.mu - g2.mu) ** 2).sum() + np.trace(g1.sigma + g2.sigma - 2 * covmean))
    assert d12 == pytest.approx(oracle, rel=1e-6, abs=1e-8)


def test_frechet_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        frechet_distance(GaussianStats(np.zeros(3), np.eye(3)), GaussianStats(np.zeros(4), np.eye(4)))


@pytest.fixture(scope="module")
def extractor_and_windows():
    rng = np.random.default_rng(8)
    windows = np.stack(
        [skeleton.to_dirvec(random_motion(rng, 30), skeleton.SkeletonSpec()).reshape(30, POSE_DIM) for _ in range(60)]
    )
    extractor = metrics.train_feature_extractor(windows, seed=0, epochs=4)
    return extractor, windows


def test_fgd_identical_sets_zero(extractor_and_windows):
    extractor, windows = extractor_and_windows
    assert fgd(windows, windows, extractor) < 1e-8


def test_fgd_ordering_static_worse_than_split_halves(extractor_and_windows, skel):
    extractor, windows = extractor_and_windows
    half = fgd(windows[::2], windows[1::2], extractor)
    from sgt import poses

    static_rows = skeleton.to_dirvec(poses.rest_pose(skel), skel).reshape(POSE_DIM)
    static = np.tile(static_rows, (30, 30, 1))
    static_fgd = fgd(windows, static, extractor)
    assert half < static_fgd


def test_fgd_sample_order_invariant(extractor_and_windows):
    extractor, windows = extractor_and_windows
    perm = np.random.default_rng(2).permutation(30)
    assert fgd(windows[:30], windows[30:], extractor) == pytest.approx(
        fgd(windows[:30], windows[30:][perm], extractor), rel=1e-6, abs=1e-9
    )


def test_fgd_empty_set(extractor_and_windows):
    extractor, windows = extractor_and_windows
    with pytest.raises(EmptySet):
        fgd(windows, np.empty((0, 30, POSE_DIM)), extractor)


def test_pcs_passthrough_zero(skel):
    ref = skeleton.to_dirvec(random_motion(np.random.default_rng(4), 30), skel)
    cp = metrics.standard_pose_protocol(ref)
    assert pcs(cp, ref) == 0.0
    assert np.flatnonzero(cp.mask).tolist() == [10, 11, 12, 13, 14]


def test_pcs_uniform_offset(skel):
    ref = skeleton.to_dirvec(random_motion(np.random.default_rng(5), 30), skel).reshape(30, POSE_DIM)
    cp = metrics.standard_pose_protocol(ref)
    assert pcs(cp, ref + 0.1) == pytest.approx(0.1, abs=1e-12)


def test_pcs_requires_mask():
    cp, _ = empty_controls(30)
    with pytest.raises(NoMaskedFrames):
        pcs(cp, np.zeros((30, POSE_DIM)))


def test_scs_passthrough_zero(skel):
    frames = random_motion(np.random.default_rng(6), 30)
    stats = stylestats.fit_norm_stats([random_motion(np.random.default_rng(7), 40), frames])
    cs = metrics.standard_style_protocol(frames, stats)
    assert cs.masks.all()
    assert scs(cs, frames, stats) == 0.0


def test_scs_uniform_offset(skel):
    frames = random_motion(np.random.default_rng(8), 30)
    stats = stylestats.fit_norm_stats([random_motion(np.random.default_rng(9), 40), frames])
    track = stylestats.normalize_style(stylestats.style_track(frames), stats)
    # keep controls inside the clamp so the offset survives normalization
    assert np.abs(track).max() < 2.7
    cs = StyleControlTrack(track + 0.25, np.ones_like(track))
    assert scs(cs, frames, stats) == pytest.approx(0.25, abs=1e-12)


def test_scs_requires_mask(skel):
    frames = random_motion(np.random.default_rng(10), 30)
    stats = stylestats.fit_norm_stats([frames, random_motion(np.random.default_rng(11), 40)])
    _, cs = empty_controls(30)
    with pytest.raises(NoMaskedFrames):
        scs(cs, frames, stats)


def test_mean_bone_angle_degrees(skel):
    ref = skeleton.to_dirvec(random_motion(np.random.default_rng(12), 30), skel)
    cp = metrics.standard_pose_protocol(ref)
    assert metrics.mean_bone_angle_degrees(cp, ref) == pytest.approx(0.0, abs=1e-6)
