"""Procedural poses built from a small arm-angle parametrization.

Poses here are produced by forward kinematics from unit bone directions, so
bone lengths are exact by construction.  The parametrization drives the
synthetic corpus generator and the starter motion library.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import skeleton
from .skeleton import SkeletonSpec


@dataclass(frozen=True)
class ArmAngles:
    """Two angles per segment: abduction lifts the arm in the frontal plane
    (0 = hanging down, pi/2 = horizontal, pi = straight up), flexion rotates
    it toward the front of the body."""

    upper_abduction: float = 0.12
    upper_flexion: float = 0.10
    fore_abduction: float = 0.18
    fore_flexion: float = 0.35

    def blend(self, other: "ArmAngles", w: float) -> "ArmAngles":
        return ArmAngles(*((1 - w) * a + w * b for a, b in zip(self.astuple(), other.astuple())))

    def astuple(self) -> tuple[float, float, float, float]:
        return (self.upper_abduction, self.upper_flexion, self.fore_abduction, self.fore_flexion)


@dataclass(frozen=True)
class BodyAngles:
    right: ArmAngles = ArmAngles()
    left: ArmAngles = ArmAngles()
    head_nod: float = 0.0  # forward head tilt, radians

    def blend(self, other: "BodyAngles", w: float) -> "BodyAngles":
        return BodyAngles(
            self.right.blend(other.right, w),
            self.left.blend(other.left, w),
            (1 - w) * self.head_nod + w * other.head_nod,
        )


def _segment_dir(side: float, abduction: float, flexion: float) -> np.ndarray:
    # Start from hanging down, lift sideways by abduction, then rotate the
    # result about the lateral axis by flexion (toward +z).
    v = np.array([side * np.sin(abduction), -np.cos(abduction), 0.0])
    c, s = np.cos(flexion), np.sin(flexion)
    return np.array([v[0], v[1] * c - v[2] * s, v[1] * s + v[2] * c])


def _rot_x(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([v[0], v[1] * c - v[2] * s, v[1] * s + v[2] * c])


def dirs_from_angles(body: BodyAngles) -> np.ndarray:
    """Unit bone directions (9, 3) for a body configuration."""
    nod = -body.head_nod
    dirs = np.zeros((skeleton.N_BONES, 3))
    dirs[0] = (0.0, 1.0, 0.0)  # spine -> neck
    dirs[1] = _rot_x(np.array([0.0, 0.55, 0.84]) / np.linalg.norm([0.0, 0.55, 0.84]), nod)  # neck -> nose
    dirs[2] = _rot_x(np.array([0.0, 0.97, -0.26]) / np.linalg.norm([0.0, 0.97, -0.26]), nod)  # nose -> head_top
    dirs[3] = (-1.0, 0.0, 0.0)  # neck -> r_shoulder
    dirs[4] = (1.0, 0.0, 0.0)  # neck -> l_shoulder
    dirs[5] = _segment_dir(-1.0, body.right.upper_abduction, body.right.upper_flexion)
    dirs[6] = _segment_dir(1.0, body.left.upper_abduction, body.left.upper_flexion)
    dirs[7] = _segment_dir(-1.0, body.right.fore_abduction, body.right.fore_flexion)
    dirs[8] = _segment_dir(1.0, body.left.fore_abduction, body.left.fore_flexion)
    return dirs


def pose_from_angles(body: BodyAngles, skel: SkeletonSpec = SkeletonSpec()) -> np.ndarray:
    return skeleton.to_pose(dirs_from_angles(body), skel)


REST = BodyAngles()

_ARM_OUT = ArmAngles(np.pi / 2, 0.0, np.pi / 2, 0.0)
_ARM_UP = ArmAngles(2.6, 0.15, 2.9, 0.1)
_ARM_RAISED = ArmAngles(1.25, 0.55, 2.1, 0.7)
_ARM_FRONT = ArmAngles(0.55, 1.15, 0.9, 1.35)
_ARM_OPEN = ArmAngles(0.85, 0.25, 1.0, 0.35)
_ARM_SHRUG = ArmAngles(0.45, 0.2, 1.5, 0.9)

CANONICAL = {
    "rest": REST,
    "point_right": BodyAngles(right=_ARM_OUT),
    "point_left": BodyAngles(left=_ARM_OUT),
    "point_up": BodyAngles(right=_ARM_UP),
    "raise_right_hand": BodyAngles(right=_ARM_RAISED),
    "raise_left_hand": BodyAngles(left=_ARM_RAISED),
    "raise_both_hands": BodyAngles(right=_ARM_RAISED, left=_ARM_RAISED),
    "bow": BodyAngles(head_nod=0.7),
    "framing": BodyAngles(right=_ARM_FRONT, left=_ARM_FRONT),
    "open_palm": BodyAngles(right=_ARM_OPEN, left=_ARM_OPEN),
    "head_nod": BodyAngles(head_nod=0.35),
    "shrug": BodyAngles(right=_ARM_SHRUG, left=_ARM_SHRUG, head_nod=0.1),
}


def canonical_angles(name: str) -> BodyAngles:
    return CANONICAL[name]


def canonical_pose(name: str, skel: SkeletonSpec = SkeletonSpec()) -> np.ndarray:
    return pose_from_angles(CANONICAL[name], skel)


def rest_pose(skel: SkeletonSpec = SkeletonSpec()) -> np.ndarray:
    return pose_from_angles(REST, skel)
