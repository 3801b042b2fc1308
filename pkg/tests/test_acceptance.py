"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  The end-to-end criteria train a real model on the 200-clip
synthetic corpus (a few minutes on CPU); everything else is fast.
"""
import time

import numpy as np
import pytest
import torch

from sgt import controls, keyframe, metrics, poses, skeleton, speech, stylestats, synthesis, training
from sgt.genmodel import load_checkpoint
from sgt.metrics import GaussianStats, frechet_distance, pcs, scs
from sgt.skeleton import POSE_DIM
from sgt.speech import SpeechContext
from sgt.training import TrainConfig, make_synthetic_corpus, split_corpus

from .conftest import PassThroughStub, nondegenerate_gradient_point, random_motion
from .test_keyframe import tridiagonal_natural_spline

CORPUS_CLIPS = 200
TOY_SEED = 7


def ok(name: str) -> None:
    print(f"[ACCEPT] {name}: PASS")


# ---------------------------------------------------------------------------
# style statistics


def literal_style_oracle(frames: np.ndarray, window: int = 30) -> np.ndarray:
    """Unwindowed-literal re-implementation: explicit loops over frames and
    window positions, per-term norms straight from the definitions."""
    t = len(frames)
    half = window // 2
    step = np.linalg.norm(frames[1:] - frames[:-1], axis=2)  # (t-1, J)
    step_mean = step.mean(axis=1)
    gap = np.linalg.norm(frames[:, skeleton.L_WRIST] - frames[:, skeleton.R_WRIST], axis=1)
    out = np.zeros((t, 3))
    for i in range(t):
        speed_terms, space_terms, l_terms, r_terms = [], [], [], []
        for j in range(i - half, i + half + 1):
            if 0 <= j < t:
                space_terms.append(gap[j])
            if 1 <= j < t:
                speed_terms.append(step_mean[j - 1])
                l_terms.append(step[j - 1, skeleton.L_WRIST])
                r_terms.append(step[j - 1, skeleton.R_WRIST])
        out[i, 0] = sum(speed_terms) / len(speed_terms)
        out[i, 1] = sum(space_terms) / len(space_terms)
        sl = sum(l_terms) / len(l_terms)
        sr = sum(r_terms) / len(r_terms)
        if sl < 1e-6 and sr < 1e-6:
            out[i, 2] = 0.0
        elif sr > sl:
            out[i, 2] = sl / sr - 1.0
        else:
            out[i, 2] = 1.0 - sr / sl
    return out


def test_style_statistics_oracle_equivalence():
    """Implementation matches the brute-force oracle on 100 random 60-frame
    sequences within 1e-9, in under 5 seconds."""
    rng = np.random.default_rng(100)
    start = time.time()
    worst = 0.0
    for k in range(100):
        if k % 2 == 0:
            frames = random_motion(rng, 60)
        else:  # unconstrained Gaussian walk
            frames = np.cumsum(rng.normal(0, 0.02, (60, 10, 3)), axis=0)
        fast = stylestats.style_track(frames)
        slow = literal_style_oracle(frames)
        worst = max(worst, float(np.abs(fast - slow).max()))
    elapsed = time.time() - start
    assert worst < 1e-9, f"max deviation {worst}"
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    ok(f"style oracle equivalence (max dev {worst:.2e}, {elapsed:.2f}s)")


def test_style_gradient_check():
    """Autodiff vs central differences (h=1e-5) within 1e-3 relative at 20
    random non-degenerate points."""
    rng = np.random.default_rng(200)
    h = 1e-5
    for point in range(20):
        frames, i = nondegenerate_gradient_point(rng)
        element = point % 3
        pos = torch.tensor(frames, requires_grad=True)
        value = stylestats.style_track_torch(pos)[i, element]
        (grad,) = torch.autograd.grad(value, pos)
        grad = grad.numpy()
        coords = np.argsort(np.abs(grad).ravel())[::-1][:8]
        for k in coords:
            f, j, c = np.unravel_index(k, frames.shape)
            up = frames.copy()
            up[f, j, c] += h
            down = frames.copy()
            down[f, j, c] -= h
            fd = (stylestats.style_track(up)[i, element] - stylestats.style_track(down)[i, element]) / (2 * h)
            assert grad[f, j, c] == pytest.approx(fd, rel=1e-3, abs=1e-9), (point, element, (f, j, c))
    ok("style gradient vs finite differences (20 points)")


# ---------------------------------------------------------------------------
# Fréchet distance closed forms


def test_frechet_closed_forms():
    rng = np.random.default_rng(5)
    g = metrics.fit_gaussian(rng.normal(0, 1, (256, 16)))
    assert abs(frechet_distance(g, g)) < 1e-8

    d = 9
    m = np.linspace(-1.0, 1.5, d)
    shift = frechet_distance(GaussianStats(np.zeros(d), np.eye(d)), GaussianStats(m, np.eye(d)))
    assert shift == pytest.approx(float(m @ m), abs=1e-8)

    scale = frechet_distance(GaussianStats(np.zeros(d), np.eye(d)), GaussianStats(np.zeros(d), 4 * np.eye(d)))
    assert scale == pytest.approx(d, abs=1e-6)
    ok("Fréchet distance closed forms")


# ---------------------------------------------------------------------------
# compliance metric zeros


def test_compliance_zeros_with_passthrough_stub(skel):
    frames = random_motion(np.random.default_rng(33), 30)
    ref_dirs = skeleton.to_dirvec(frames, skel).reshape(30, POSE_DIM)

    cp = metrics.standard_pose_protocol(ref_dirs)
    stub = PassThroughStub(skel)
    ctx = SpeechContext(np.zeros((30, speech.AUDIO_DIM)), np.zeros(30, dtype=np.int64), 16000, "")
    out = stub.forward(ctx, cp, controls.empty_controls(30)[1]).reshape(30, POSE_DIM)
    assert pcs(cp, out) == 0.0

    stats = stylestats.fit_norm_stats([frames, random_motion(np.random.default_rng(34), 40)])
    cs = metrics.standard_style_protocol(frames, stats)
    assert cs.masks.all() and len(cs) == 30
    # identity pass-through of the reference motion
    assert scs(cs, frames, stats) == 0.0
    ok("PCS/SCS exactly 0 on pass-through stub")


# ---------------------------------------------------------------------------
# spline baseline


def test_spline_baseline(skel):
    mean = poses.rest_pose(skel)
    rng = np.random.default_rng(44)
    motion = random_motion(rng, 4)
    keys = [(5, motion[0]), (14, motion[1]), (15, motion[2]), (31, motion[3])]
    seq = keyframe.interpolate(keys, 40, mean, skel)
    for idx, pose in keys:
        assert np.abs(seq.frames[idx] - pose).max() == 0.0

    spline = keyframe.coordinate_splines(keys, 40, mean)
    xs = [0, 5, 14, 15, 31, 39]
    ys = np.stack([mean, motion[0], motion[1], motion[2], motion[3], mean])
    query = np.arange(40)
    ours = spline(query)
    for j in range(10):
        for c in range(3):
            oracle = tridiagonal_natural_spline(xs, ys[:, j, c], query)
            assert np.abs(ours[:, j, c] - oracle).max() < 1e-9

    constant = keyframe.interpolate([], 40, mean, skel)
    assert np.abs(constant.frames - mean).max() < 1e-12
    ok("spline baseline: exact knots, tridiagonal oracle, constant mean")


# ---------------------------------------------------------------------------
# end-to-end toy training (shared by several criteria)


@pytest.fixture(scope="session")
def toy_run(tmp_path_factory):
    corpus = make_synthetic_corpus(CORPUS_CLIPS, seed=TOY_SEED)
    config = TrainConfig(epochs=80, seed=TOY_SEED)
    start = time.time()
    ckpt = tmp_path_factory.mktemp("toy") / "toy.ckpt"
    model, history = training.train(corpus, config, out_ckpt=ckpt)
    elapsed = time.time() - start
    return {"corpus": corpus, "config": config, "model": model, "history": history, "elapsed": elapsed, "ckpt": ckpt}


def _static_baselines(model, windows):
    static_rows = skeleton.to_dirvec(model.mean_pose, model.skeleton).reshape(POSE_DIM)
    static = np.tile(static_rows, (len(windows), 30, 1))
    lo, hi = metrics.PCS_CONTROL_RANGE
    pcs_static = float(np.abs(windows.dirs[:, lo:hi].astype(np.float64) - static[:, lo:hi]).mean())
    static_pos = skeleton.to_pose(static.reshape(len(windows), 30, 9, 3), model.skeleton)
    measured = stylestats.normalize_style(
        stylestats.style_track_torch(torch.from_numpy(static_pos)).numpy(), model.norm_stats
    )
    scs_static = float(np.abs(windows.norm_style.astype(np.float64) - measured).mean())
    fgd_static = metrics.fgd(windows.dirs, static, model.fgd_extractor)
    return pcs_static, scs_static, fgd_static


def test_toy_end_to_end_training(toy_run):
    """80-epoch training on the synthetic corpus beats the static-mean-pose
    baseline by the required margins on held-out clips, within 15 minutes."""
    model = toy_run["model"]
    config = toy_run["config"]
    assert toy_run["elapsed"] < 900, f"training took {toy_run['elapsed']:.0f}s"

    splits = split_corpus(toy_run["corpus"], config.seed)
    report = training.evaluate_model(model, splits.test, config)
    windows = training.collect_windows(
        splits.test, model.dictionary, model.skeleton, model.norm_stats, 30, 30, 30
    )
    pcs_static, scs_static, fgd_static = _static_baselines(model, windows)

    assert report.pcs < 0.5 * pcs_static, f"PCS {report.pcs:.4f} vs static {pcs_static:.4f}"
    assert report.scs < 0.5 * scs_static, f"SCS {report.scs:.4f} vs static {scs_static:.4f}"
    assert report.fgd_no_controls < 0.1 * fgd_static, (
        f"FGD {report.fgd_no_controls:.4f} vs static {fgd_static:.4f}"
    )
    assert report.fgd_pose_controls <= report.fgd_no_controls, (
        f"FGD w/ pose {report.fgd_pose_controls:.4f} > no-controls {report.fgd_no_controls:.4f}"
    )
    history = toy_run["history"]
    assert history[-1].val_huber < 0.5 * history[0].val_huber, "training made too little progress"
    ok(
        f"toy end-to-end training ({toy_run['elapsed']:.0f}s; "
        f"PCS {report.pcs:.4f}/{pcs_static:.4f}, SCS {report.scs:.4f}/{scs_static:.4f}, "
        f"FGD {report.fgd_no_controls:.3f}/{fgd_static:.1f}, w/pose {report.fgd_pose_controls:.3f})"
    )


def test_style_responsiveness(toy_run):
    """Sweeping the speed control from -2 to +2 raises the measured raw speed
    monotonically across >= 4 of 5 sweep points (median over 20 test clips)."""
    model = toy_run["model"]
    config = toy_run["config"]
    splits = split_corpus(toy_run["corpus"], config.seed)
    windows = training.collect_windows(
        splits.test, model.dictionary, model.skeleton, model.norm_stats, 30, 30, 30
    )
    assert len(windows) >= 20
    sweep = np.linspace(-2.0, 2.0, 5)
    run_lengths = []
    for w in range(20):
        speeds = []
        for v in sweep:
            sv = np.zeros((30, 3), dtype=np.float64)
            sv[:, stylestats.SPEED] = v
            sm = np.zeros((30, 3), dtype=np.float64)
            sm[:, stylestats.SPEED] = 1.0
            ctx = SpeechContext(
                windows.audio[w].astype(np.float64), windows.words[w], 16000, ""
            )
            dirs = model.forward(ctx, controls.empty_controls(30)[0], controls.StyleControlTrack(sv, sm))
            positions = skeleton.to_pose(dirs, model.skeleton)
            speeds.append(stylestats.style_track(positions)[:, stylestats.SPEED].mean())
        # longest strictly increasing run over the 5 sweep points
        best = cur = 1
        for a, b in zip(speeds, speeds[1:]):
            cur = cur + 1 if b > a else 1
            best = max(best, cur)
        run_lengths.append(best)
    median_run = float(np.median(run_lengths))
    assert median_run >= 4, f"median increasing run {median_run} (runs: {run_lengths})"
    ok(f"style responsiveness (median increasing run {median_run}/5)")


# ---------------------------------------------------------------------------
# long-form synthesis


def test_long_form_synthesis(stub_model):
    for n in (1, 29, 30, 31, 75, 300):
        ctx = SpeechContext(np.zeros((n, speech.AUDIO_DIM)), np.zeros(n, dtype=np.int64), 16000, "")
        cp, cs = controls.empty_controls(n)
        out = synthesis.generate_long(ctx, cp, cs, stub_model)
        assert len(out) == n, f"N={n} produced {len(out)}"
    ctx = SpeechContext(np.zeros((300, speech.AUDIO_DIM)), np.zeros(300, dtype=np.int64), 16000, "")
    cp, cs = controls.empty_controls(300)
    out = synthesis.generate_long(ctx, cp, cs, stub_model)
    seam_gaps = [np.abs(out.frames[s] - out.frames[s - 1]).max() for s in range(30, 300, 30)]
    assert max(seam_gaps) == 0.0
    ok("long-form synthesis: exact lengths, zero stub seam discontinuity")


# ---------------------------------------------------------------------------
# determinism


def test_ui_round_trip_secondary(tmp_path):
    """[SECONDARY] Scripted client flows against the real service: commit,
    regenerate, undo restores the prior controls JSON byte-identically, and
    every emitted controls document validates against the shared schema."""
    import json

    import jsonschema
    from fastapi.testclient import TestClient

    from sgt.motionlib import MotionLibrary
    from sgt.service import create_app, load_controls_schema

    schema = load_controls_schema()
    app = create_app(model=PassThroughStub(), data_dir=tmp_path, library=MotionLibrary.default())
    rng = np.random.default_rng(99)
    dump = lambda controls: json.dumps(controls, separators=(",", ":")).encode()
    with TestClient(app) as client:
        audio_id = client.post("/api/speech", json={"text": "alpha beta gamma delta epsilon"}).json()["audio_id"]
        for seq in range(20):
            pid = client.post("/api/projects", json={"name": f"seq{seq}", "text": "alpha beta"}).json()["id"]
            committed = [dump(client.get(f"/api/projects/{pid}").json()["controls"])]
            for _ in range(int(rng.integers(2, 5))):
                pose = random_motion(rng, int(rng.integers(1, 4)))
                doc = {
                    "pose_controls": [{"start": int(rng.integers(0, 20)), "frames": [p.tolist() for p in pose]}],
                    "style_controls": [{"start": 0, "end": 30, "speed": float(np.round(rng.uniform(-3, 3), 1))}],
                }
                jsonschema.validate(doc, schema)  # what the UI emits must be schema-valid
                client.put(f"/api/projects/{pid}", json={"controls": doc})
                assert client.post("/api/generate", json={"audio_id": audio_id, "controls": doc}).status_code == 200
                committed.append(dump(client.get(f"/api/projects/{pid}").json()["controls"]))
            # undo walks back through the committed control states byte-identically
            for back in range(len(committed) - 2, -1, -1):
                restored = client.post(f"/api/projects/{pid}/undo").json()["controls"]
                assert dump(restored) == committed[back]
    ok("[SECONDARY] UI round trip: schema-valid edits, byte-identical undo (20 sequences)")


def test_determinism(tmp_path, toy_run):
    corpus = make_synthetic_corpus(12, seed=2)
    cfg = TrainConfig(
        epochs=2,
        seed=5,
        extractor_epochs=3,
        model=training.ModelConfig(audio_channels=16, word_hidden=16, decoder_hidden=48, critic_channels=32),
    )
    training.train(corpus, cfg, history_csv=tmp_path / "a.csv")
    training.train(corpus, cfg, history_csv=tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    model = toy_run["model"]
    loaded = load_checkpoint(toy_run["ckpt"])
    rng = np.random.default_rng(1)
    ctx = SpeechContext(rng.normal(0, 1, (30, speech.AUDIO_DIM)), rng.integers(0, 3, 30), 16000, "")
    cp, cs = controls.empty_controls(30)
    np.testing.assert_array_equal(model.forward(ctx, cp, cs), loaded.forward(ctx, cp, cs))
    ok("determinism: byte-identical history CSV, bit-exact checkpoint round trip")
