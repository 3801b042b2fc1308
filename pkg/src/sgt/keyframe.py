"""Manual-authoring baseline: natural cubic-spline keyframe interpolation.

The mean pose is inserted as a key at the first and last frames (unless the
user keyed them) to prevent extrapolation artifacts.  Coordinates are
splined independently per joint; frames between knots are then renormalized
onto the skeleton's bone lengths, while knot frames keep the exact keyed
poses.
"""
from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from . import skeleton
from .errors import DuplicateKeyIndex, IndexOutOfRange
from .skeleton import MotionSequence, SkeletonSpec


def _knots(keyframes, n: int, mean_pose: np.ndarray):
    seen = {}
    for idx, pose in keyframes:
        idx = int(idx)
        if idx < 0 or idx >= n:
            raise IndexOutOfRange(f"key frame {idx} outside [0, {n})")
        if idx in seen:
            raise DuplicateKeyIndex(f"two keys at frame {idx}")
        seen[idx] = np.asarray(pose, dtype=np.float64)
    if 0 not in seen:
        seen[0] = np.asarray(mean_pose, dtype=np.float64)
    if n - 1 not in seen:
        seen[n - 1] = np.asarray(mean_pose, dtype=np.float64)
    xs = sorted(seen)
    ys = np.stack([seen[x] for x in xs])  # (K, 10, 3)
    return np.asarray(xs, dtype=np.float64), ys


def coordinate_splines(keyframes, n: int, mean_pose: np.ndarray) -> CubicSpline:
    """The underlying per-coordinate natural splines (vectorized over 10x3)."""
    if n < 2:
        raise IndexOutOfRange("need at least 2 frames")
    xs, ys = _knots(keyframes, n, mean_pose)
    return CubicSpline(xs, ys, axis=0, bc_type="natural")


def interpolate(
    keyframes,
    n: int,
    mean_pose: np.ndarray,
    skel: SkeletonSpec = SkeletonSpec(),
    renormalize: bool = True,
) -> MotionSequence:
    """Fill motion between key poses; passes through every knot exactly."""
    spline = coordinate_splines(keyframes, n, mean_pose)
    frames = spline(np.arange(n))
    if renormalize:
        frames = skeleton.renormalize(frames, skel)
    # keyed poses are authoritative: exact at their frames
    xs, ys = _knots(keyframes, n, mean_pose)
    frames[xs.astype(int)] = ys
    return MotionSequence(frames)
