"""The manual-authoring baseline: natural cubic-spline keyframing.

Key poses are interpolated per joint coordinate; the mean pose is inserted
at the first and last frames to avoid extrapolation artifacts, and frames
between knots are renormalized to keep bone lengths rigid.
"""
import numpy as np

from sgt import keyframe, poses, skeleton

skel = skeleton.SkeletonSpec()
mean = poses.rest_pose(skel)

keys = [
    (10, poses.canonical_pose("point_right", skel)),
    (25, poses.canonical_pose("raise_both_hands", skel)),
    (40, poses.canonical_pose("point_left", skel)),
]
seq = keyframe.interpolate(keys, 55, mean, skel)
print(f"{len(seq)} frames through {len(keys)} key poses (+ mean pose at both ends)")

for idx, pose in keys:
    print(f"  knot error at frame {idx}: {np.abs(seq.frames[idx] - pose).max()}")

lengths = skeleton.bone_lengths_of(seq.frames, skel)
print("mean bone-length deviation:", np.abs(lengths - skel.bone_lengths).max().round(12))

wrist_y = seq.frames[:, skeleton.R_WRIST, 1]
print("\nright wrist height over time (every 5th frame):")
print(np.round(wrist_y[::5], 3))
