import numpy as np
import pytest

from sgt import poses, skeleton
from sgt.genmodel import ModelConfig
from sgt.skeleton import POSE_DIM, SkeletonSpec


@pytest.fixture(scope="session")
def skel():
    return SkeletonSpec()


def random_body(rng) -> poses.BodyAngles:
    return poses.BodyAngles(
        poses.ArmAngles(*rng.uniform(0.1, 1.6, 4)),
        poses.ArmAngles(*rng.uniform(0.1, 1.6, 4)),
        rng.uniform(0.0, 0.4),
    )


def random_motion(rng, n_frames: int) -> np.ndarray:
    """Smooth, rigid random motion (angle-space sinusoids); no zero displacements."""
    base = rng.uniform(0.2, 1.2, 9)
    amp = rng.uniform(0.05, 0.4, 9)
    freq = rng.uniform(0.3, 1.6, 9)
    phase = rng.uniform(0, 2 * np.pi, 9)
    frames = np.empty((n_frames, skeleton.N_JOINTS, 3))
    for i in range(n_frames):
        a = base + amp * np.sin(2 * np.pi * freq * i / skeleton.FPS + phase)
        body = poses.BodyAngles(
            poses.ArmAngles(*np.abs(a[:4])), poses.ArmAngles(*np.abs(a[4:8])), 0.2 * abs(a[8])
        )
        frames[i] = poses.pose_from_angles(body)
    return frames


def nondegenerate_gradient_point(rng, n_frames: int = 40, window: int = 30):
    """A (frames, i) pair safe for finite-difference gradient checks.

    Rejects draws where any joint's within-window displacement is small but
    nonzero (the |.| curvature there breaks central differences at h=1e-5),
    or where the wrist speeds nearly tie (handedness branch point).
    """
    half = window // 2
    while True:
        frames = random_motion(rng, n_frames)
        i = int(rng.integers(5, n_frames - 5))
        lo, hi = max(1, i - half), min(n_frames - 1, i + half)
        disp = np.linalg.norm(frames[lo : hi + 1] - frames[lo - 1 : hi], axis=2)
        moving = disp[disp > 0]
        speed_l = disp[:, skeleton.L_WRIST].mean()
        speed_r = disp[:, skeleton.R_WRIST].mean()
        if moving.min() > 1e-3 and abs(speed_l - speed_r) > 1e-4 * max(speed_l, speed_r):
            return frames, i


class PassThroughStub:
    """Copies pose controls to the output and emits a constant pose elsewhere."""

    def __init__(self, skel: SkeletonSpec | None = None, window: int = 30):
        from sgt.speech import Dictionary
        from sgt.stylestats import StyleNormStats

        self.skeleton = skel or SkeletonSpec()
        self.config = ModelConfig(frames_per_window=window)
        rest = poses.rest_pose(self.skeleton)
        self.constant_rows = skeleton.to_dirvec(rest, self.skeleton).reshape(POSE_DIM)
        self.mean_pose = rest
        self.norm_stats = StyleNormStats(np.array([0.01, 0.4, 0.0]), np.array([0.01, 0.2, 0.5]))
        self.dictionary = Dictionary(["hello", "world"])

    def forward(self, ctx, cp, cs):
        rows = np.tile(self.constant_rows, (ctx.n_frames, 1))
        masked = cp.mask.astype(bool)
        rows[masked] = cp.poses[masked]
        return rows.reshape(ctx.n_frames, POSE_DIM // 3, 3)


@pytest.fixture
def stub_model():
    return PassThroughStub()
