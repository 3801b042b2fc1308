"""Upper-body skeleton: pose representations and conversions.

A pose is a (10, 3) float array of root-relative joint positions.  A motion
is a (T, 10, 3) array at 15 fps.  The equivalent bone representation is a
(9, 3) array of unit direction vectors, one per bone, in `BONES` order.

Axis conventions (declared, the motion file format documents them):
+x is the character's left, +y is up, +z is forward.  Mirroring swaps the
left/right joints and negates x.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegeneratePose, EmptyDataset

FPS = 15

JOINTS = (
    "nose",
    "head_top",
    "neck",
    "spine",
    "r_shoulder",
    "l_shoulder",
    "r_elbow",
    "l_elbow",
    "r_wrist",
    "l_wrist",
)

NOSE, HEAD_TOP, NECK, SPINE = 0, 1, 2, 3
R_SHOULDER, L_SHOULDER, R_ELBOW, L_ELBOW, R_WRIST, L_WRIST = 4, 5, 6, 7, 8, 9

# Minimal anatomical tree rooted at the spine; parents precede children.
BONES = (
    (SPINE, NECK),
    (NECK, NOSE),
    (NOSE, HEAD_TOP),
    (NECK, R_SHOULDER),
    (NECK, L_SHOULDER),
    (R_SHOULDER, R_ELBOW),
    (L_SHOULDER, L_ELBOW),
    (R_ELBOW, R_WRIST),
    (L_ELBOW, L_WRIST),
)

SYMMETRIC_PAIRS = ((R_SHOULDER, L_SHOULDER), (R_ELBOW, L_ELBOW), (R_WRIST, L_WRIST))

# Plausible proportions in normalized skeleton units; replaced by the
# dataset mean skeleton when a corpus is loaded.
DEFAULT_BONE_LENGTHS = (0.50, 0.18, 0.12, 0.20, 0.20, 0.28, 0.28, 0.26, 0.26)

N_JOINTS = len(JOINTS)
N_BONES = len(BONES)
POSE_DIM = N_BONES * 3


@dataclass(frozen=True)
class SkeletonSpec:
    """Joint/bone layout plus canonical bone lengths."""

    joints: tuple[str, ...] = JOINTS
    bones: tuple[tuple[int, int], ...] = BONES
    bone_lengths: np.ndarray = field(
        default_factory=lambda: np.asarray(DEFAULT_BONE_LENGTHS, dtype=np.float64)
    )
    root: int = SPINE
    symmetric_pairs: tuple[tuple[int, int], ...] = SYMMETRIC_PAIRS

    def __post_init__(self):
        lengths = np.asarray(self.bone_lengths, dtype=np.float64)
        object.__setattr__(self, "bone_lengths", lengths)
        if lengths.shape != (len(self.bones),):
            raise ValueError("one length per bone required")
        if not np.all(lengths > 0):
            raise ValueError("bone lengths must be positive")
        # The bone graph must be a tree rooted at `root` covering all joints,
        # with every parent defined before its children.
        seen = {self.root}
        for parent, child in self.bones:
            if parent not in seen:
                raise ValueError(f"bone parent {parent} appears before being reached")
            if child in seen:
                raise ValueError(f"joint {child} has two parents")
            seen.add(child)
        if seen != set(range(len(self.joints))):
            raise ValueError("bone tree does not cover all joints")

    def with_bone_lengths(self, lengths) -> "SkeletonSpec":
        return replace(self, bone_lengths=np.asarray(lengths, dtype=np.float64))

    def mirror_permutation(self) -> np.ndarray:
        """Joint index permutation that swaps declared left/right pairs."""
        perm = np.arange(len(self.joints))
        for a, b in self.symmetric_pairs:
            perm[a], perm[b] = b, a
        return perm


@dataclass
class MotionSequence:
    """Fixed-rate sequence of poses sharing one skeleton."""

    frames: np.ndarray  # (T, N_JOINTS, 3)
    fps: int = FPS

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 3 or self.frames.shape[1:] != (N_JOINTS, 3):
            raise ValueError(f"frames must be (T, {N_JOINTS}, 3)")

    def __len__(self) -> int:
        return self.frames.shape[0]


def _frames_of(motion) -> np.ndarray:
    if isinstance(motion, MotionSequence):
        return motion.frames
    return np.asarray(motion, dtype=np.float64)


def to_dirvec(pose: np.ndarray, skel: SkeletonSpec) -> np.ndarray:
    """Bone unit direction vectors of a pose.

    Accepts a single (10, 3) pose or a (T, 10, 3) motion array and returns
    (9, 3) or (T, 9, 3) accordingly.
    """
    coords = np.asarray(pose, dtype=np.float64)
    parents = [p for p, _ in skel.bones]
    children = [c for _, c in skel.bones]
    diff = coords[..., children, :] - coords[..., parents, :]
    norms = np.linalg.norm(diff, axis=-1, keepdims=True)
    if np.any(norms < 1e-9):
        raise DegeneratePose("parent and child joints coincide")
    return diff / norms


def to_pose(dirs: np.ndarray, skel: SkeletonSpec) -> np.ndarray:
    """Forward-kinematics reconstruction: root at origin, child = parent + length * dir."""
    d = np.asarray(dirs, dtype=np.float64)
    coords = np.zeros(d.shape[:-2] + (len(skel.joints), 3))
    for b, (parent, child) in enumerate(skel.bones):
        coords[..., child, :] = coords[..., parent, :] + skel.bone_lengths[b] * d[..., b, :]
    return coords


def bone_lengths_of(pose: np.ndarray, skel: SkeletonSpec) -> np.ndarray:
    """Measured per-bone lengths of a pose (or mean lengths of a motion)."""
    coords = np.asarray(pose, dtype=np.float64)
    parents = [p for p, _ in skel.bones]
    children = [c for _, c in skel.bones]
    lengths = np.linalg.norm(coords[..., children, :] - coords[..., parents, :], axis=-1)
    while lengths.ndim > 1:
        lengths = lengths.mean(axis=0)
    return lengths


def renormalize(pose: np.ndarray, skel: SkeletonSpec) -> np.ndarray:
    """Snap a pose (or motion) onto the skeleton's canonical bone lengths."""
    return to_pose(to_dirvec(pose, skel), skel)


def mirror(motion, skel: SkeletonSpec = SkeletonSpec()):
    """Swap left/right joint data and negate the lateral (x) coordinate."""
    frames = _frames_of(motion)
    out = frames[..., skel.mirror_permutation(), :].copy()
    out[..., 0] = -out[..., 0]
    if isinstance(motion, MotionSequence):
        return MotionSequence(out, motion.fps)
    return out


def mean_pose(dataset, skel: SkeletonSpec = SkeletonSpec()) -> np.ndarray:
    """Per-joint arithmetic mean over all frames of all sequences, root re-centered."""
    if not dataset:
        raise EmptyDataset("mean pose of an empty dataset")
    stacked = np.concatenate([_frames_of(m) for m in dataset], axis=0)
    mean = stacked.mean(axis=0)
    return mean - mean[skel.root]


def motion_to_json(motion, skel: SkeletonSpec = SkeletonSpec()) -> dict:
    frames = _frames_of(motion)
    fps = motion.fps if isinstance(motion, MotionSequence) else FPS
    return {
        "fps": fps,
        "joints": list(skel.joints),
        "frames": [[[float(v) for v in joint] for joint in frame] for frame in frames],
    }


def motion_from_json(obj: dict) -> MotionSequence:
    if list(obj.get("joints", JOINTS)) != list(JOINTS):
        raise ValueError("motion JSON joint names do not match the skeleton")
    frames = np.asarray(obj["frames"], dtype=np.float64)
    return MotionSequence(frames, int(obj.get("fps", FPS)))


def save_motion(motion, path, skel: SkeletonSpec = SkeletonSpec()) -> None:
    with open(path, "w") as f:
        json.dump(motion_to_json(motion, skel), f)


def load_motion(path) -> MotionSequence:
    with open(path) as f:
        return motion_from_json(json.load(f))
