"""Pose and style control tracks with mask bits, plus training-time simulation.

Masked rows carry the user's values; unmasked rows are always zero-filled so
the generator never sees stale data.  The JSON wire format used by the
service is::

    {"pose_controls":  [{"start": int, "frames": [row, ...]}, ...],
     "style_controls": [{"start": int, "end": int,
                         "speed": float|null, "space": float|null,
                         "handedness": float|null}, ...]}

where a pose row is either 27 flat bone-direction values or a nested
10 x [x, y, z] joint-position pose (converted internally).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import skeleton, stylestats
from .errors import LengthMismatch, RangeOutOfBounds
from .skeleton import POSE_DIM, SkeletonSpec
from .stylestats import STYLE_NAMES, StyleNormStats


@dataclass
class PoseControlTrack:
    poses: np.ndarray  # (t, POSE_DIM) dir-vec rows
    mask: np.ndarray  # (t,) in {0, 1}

    def __post_init__(self):
        self.poses = np.asarray(self.poses, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=np.float64)
        if self.poses.shape != (len(self.mask), POSE_DIM):
            raise LengthMismatch("pose rows and mask bits disagree")

    def __len__(self) -> int:
        return len(self.mask)


@dataclass
class StyleControlTrack:
    values: np.ndarray  # (t, 3) normalized style values
    masks: np.ndarray  # (t, 3) in {0, 1}

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.masks = np.asarray(self.masks, dtype=np.float64)
        if self.values.shape != self.masks.shape or self.values.ndim != 2 or self.values.shape[1] != 3:
            raise LengthMismatch("style values and masks disagree")

    def __len__(self) -> int:
        return len(self.masks)


def empty_controls(t: int) -> tuple[PoseControlTrack, StyleControlTrack]:
    """All-zero masks and values: the fully automatic generation input."""
    if t < 1:
        raise RangeOutOfBounds("need at least one frame")
    return (
        PoseControlTrack(np.zeros((t, POSE_DIM)), np.zeros(t)),
        StyleControlTrack(np.zeros((t, 3)), np.zeros((t, 3))),
    )


def set_pose_control(track: PoseControlTrack, start: int, motion, skel: SkeletonSpec = SkeletonSpec()) -> PoseControlTrack:
    """Fill [start, start + len(motion)) with the motion's dir-vec rows (last writer wins)."""
    frames = motion.frames if isinstance(motion, skeleton.MotionSequence) else np.asarray(motion, dtype=np.float64)
    if frames.ndim == 2 and frames.shape == (len(skel.joints), 3):
        frames = frames[None]
    if frames.ndim == 3 and frames.shape[1:] == (len(skel.joints), 3):
        rows = skeleton.to_dirvec(frames, skel).reshape(len(frames), POSE_DIM)
    elif frames.ndim == 2 and frames.shape[1] == POSE_DIM:
        rows = frames
    else:
        raise LengthMismatch("motion must be poses (n,10,3) or dir-vec rows (n,27)")
    n = len(rows)
    t = len(track)
    if start < 0 or start + n > t:
        raise RangeOutOfBounds(f"[{start}, {start + n}) outside [0, {t})")
    poses = track.poses.copy()
    mask = track.mask.copy()
    poses[start : start + n] = rows
    mask[start : start + n] = 1.0
    return PoseControlTrack(poses, mask)


def set_style_control(
    track: StyleControlTrack,
    start: int,
    end: int,
    speed: float | None = None,
    space: float | None = None,
    handedness: float | None = None,
) -> StyleControlTrack:
    """Set masked style elements to constant values on [start, end)."""
    t = len(track)
    if not (0 <= start < end <= t):
        raise RangeOutOfBounds(f"[{start}, {end}) outside [0, {t})")
    values = track.values.copy()
    masks = track.masks.copy()
    for el, v in enumerate((speed, space, handedness)):
        if v is not None:
            values[start:end, el] = float(v)
            masks[start:end, el] = 1.0
    return StyleControlTrack(values, masks)


def draw_control_plan(t: int, rng: np.random.Generator, drop_all_p: float = 0.3, style_drop_p: float = 0.5):
    """Random control layout used during training.

    Returns (pose_slice, style_keep) where pose_slice is a (start, length)
    tuple and style_keep a (3,) bool array, or (None, None) when the
    drop-everything branch was taken.
    """
    if rng.random() < drop_all_p:
        return None, None
    length = int(rng.integers(1, t + 1))
    start = int(rng.integers(0, t - length + 1))
    keep = rng.random(3) >= style_drop_p
    while not keep.any():
        keep = rng.random(3) >= style_drop_p
    return (start, length), keep


def simulate_controls(
    reference,
    stats: StyleNormStats,
    rng: np.random.Generator,
    drop_all_p: float = 0.3,
    style_drop_p: float = 0.5,
    skel: SkeletonSpec = SkeletonSpec(),
    window: int = stylestats.DEFAULT_WINDOW,
) -> tuple[PoseControlTrack, StyleControlTrack]:
    """Simulate user controls from a reference motion.

    The pose control is a uniformly random-length, random-position
    contiguous slice of the reference; the style control is the reference's
    normalized style track with a random element subset kept.  With
    probability `drop_all_p` everything is dropped.
    """
    frames = reference.frames if isinstance(reference, skeleton.MotionSequence) else np.asarray(reference, dtype=np.float64)
    t = len(frames)
    cp, cs = empty_controls(t)
    pose_slice, style_keep = draw_control_plan(t, rng, drop_all_p, style_drop_p)
    if pose_slice is None:
        return cp, cs
    start, length = pose_slice
    cp = set_pose_control(cp, start, frames[start : start + length], skel)
    normalized = stylestats.normalize_style(stylestats.style_track(frames, window), stats)
    values = np.where(style_keep, normalized, 0.0)
    masks = np.broadcast_to(style_keep.astype(np.float64), (t, 3)).copy()
    cs = StyleControlTrack(values, masks)
    return cp, cs


def controls_to_json(cp: PoseControlTrack, cs: StyleControlTrack) -> dict:
    """Serialize tracks as contiguous segments; lossless under controls_from_json."""
    pose_controls = []
    t = len(cp)
    i = 0
    while i < t:
        if cp.mask[i]:
            j = i
            while j < t and cp.mask[j]:
                j += 1
            pose_controls.append({"start": i, "frames": [[float(v) for v in row] for row in cp.poses[i:j]]})
            i = j
        else:
            i += 1
    style_controls = []
    i = 0
    while i < len(cs):
        if cs.masks[i].any():
            j = i
            while (
                j + 1 < len(cs)
                and np.array_equal(cs.masks[j + 1], cs.masks[i])
                and np.array_equal(cs.values[j + 1], cs.values[i])
            ):
                j += 1
            seg: dict = {"start": i, "end": j + 1}
            for el, name in enumerate(STYLE_NAMES):
                seg[name] = float(cs.values[i, el]) if cs.masks[i, el] else None
            style_controls.append(seg)
            i = j + 1
        else:
            i += 1
    return {"pose_controls": pose_controls, "style_controls": style_controls}


def controls_from_json(obj: dict, t: int, skel: SkeletonSpec = SkeletonSpec()) -> tuple[PoseControlTrack, StyleControlTrack]:
    """Parse the service JSON control schema into length-t tracks."""
    cp, cs = empty_controls(t)
    for seg in obj.get("pose_controls", []):
        rows = np.asarray(seg["frames"], dtype=np.float64)
        cp = set_pose_control(cp, int(seg["start"]), rows, skel)
    for seg in obj.get("style_controls", []):
        cs = set_style_control(
            cs,
            int(seg["start"]),
            int(seg["end"]),
            speed=seg.get("speed"),
            space=seg.get("space"),
            handedness=seg.get("handedness"),
        )
    return cp, cs
