"""Long-form generation by sliding-window chunking with seam conditioning.

A request for N frames runs ceil(N/30) model invocations.  The first
invocation covers frames [0, 30).  Every later invocation k covers a
60-frame span [30(k-1), 30(k+1)): its first 30 frames overlap the previous
emission and are injected as pose controls (user controls take precedence),
and its last 30 frames are the new emission.  Speech features are
zero-padded past N and the concatenated emissions are trimmed to N.
"""
from __future__ import annotations

import math

import numpy as np

from . import skeleton
from .controls import PoseControlTrack, StyleControlTrack, empty_controls
from .errors import ModelNotLoaded, RangeOutOfBounds
from .skeleton import POSE_DIM, MotionSequence
from .speech import SpeechContext


def merge_controls(
    global_cp: PoseControlTrack,
    global_cs: StyleControlTrack,
    start: int,
    length: int,
    seam_dirs: np.ndarray | None = None,
) -> tuple[PoseControlTrack, StyleControlTrack]:
    """Slice global controls to a window; seam rows fill only user-free frames.

    `seam_dirs` (m, 27) applies to the first m local frames of the window.
    """
    n = len(global_cp)
    if start < 0 or start >= n:
        raise RangeOutOfBounds(f"window start {start} outside [0, {n})")
    cp, cs = empty_controls(length)
    avail = min(start + length, n) - start
    cp.poses[:avail] = global_cp.poses[start : start + avail]
    cp.mask[:avail] = global_cp.mask[start : start + avail]
    cs.values[:avail] = global_cs.values[start : start + avail]
    cs.masks[:avail] = global_cs.masks[start : start + avail]
    if seam_dirs is not None:
        m = min(len(seam_dirs), length)
        free = cp.mask[:m] == 0
        cp.poses[:m][free] = seam_dirs[:m][free]
        cp.mask[:m][free] = 1.0
    return cp, cs


def generate_long(
    ctx: SpeechContext,
    cp: PoseControlTrack,
    cs: StyleControlTrack,
    model,
) -> MotionSequence:
    """Generate exactly ctx.n_frames frames of motion on the global timeline."""
    if model is None:
        raise ModelNotLoaded("no generator model")
    n = ctx.n_frames
    t = model.config.frames_per_window
    n_windows = max(1, math.ceil(n / t))
    gcp, gcs = _padded(cp, cs, n_windows * t)
    emitted: list[np.ndarray] = []  # (t, 27) rows per window
    for k in range(n_windows):
        if k == 0:
            lo, hi = 0, t
            seam = None
        else:
            lo, hi = (k - 1) * t, (k + 1) * t
            seam = emitted[-1]
        wcp, wcs = merge_controls(gcp, gcs, lo, hi - lo, seam)
        dirs = model.forward(ctx.window(lo, hi), wcp, wcs)
        emitted.append(dirs.reshape(hi - lo, POSE_DIM)[-t:])
    rows = np.concatenate(emitted, axis=0)[:n]
    frames = skeleton.to_pose(rows.reshape(n, POSE_DIM // 3, 3), model.skeleton)
    return MotionSequence(frames, ctx.fps)


def _padded(cp: PoseControlTrack, cs: StyleControlTrack, total: int) -> tuple[PoseControlTrack, StyleControlTrack]:
    if len(cp) >= total:
        return cp, cs
    pcp, pcs_track = empty_controls(total)
    pcp.poses[: len(cp)] = cp.poses
    pcp.mask[: len(cp)] = cp.mask
    pcs_track.values[: len(cs)] = cs.values
    pcs_track.masks[: len(cs)] = cs.masks
    return pcp, pcs_track
