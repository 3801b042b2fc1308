"""Poses, bone direction vectors, and the conversions between them.

The toolkit represents a pose two ways: 10 root-relative 3D joint positions,
or 9 unit vectors along the bones.  The model works in bone-vector space;
everything user-facing works in joint space.
"""
import numpy as np

from sgt import poses, skeleton
from sgt.skeleton import SkeletonSpec

skel = SkeletonSpec()
print("joints:", ", ".join(skel.joints))
print("bones: ", ", ".join(f"{skel.joints[p]}->{skel.joints[c]}" for p, c in skel.bones))

pose = poses.canonical_pose("point_right", skel)
print("\npoint_right wrist position:", np.round(pose[skeleton.R_WRIST], 3))

dirs = skeleton.to_dirvec(pose, skel)
print("shoulder->elbow direction:", np.round(dirs[5], 3), "(unit length:", np.linalg.norm(dirs[5]), ")")

rebuilt = skeleton.to_pose(dirs, skel)
print("FK reconstruction error:", np.abs(rebuilt - pose).max())

mirrored = skeleton.mirror(pose[None], skel)[0]
print("\nmirrored wrist positions (left<->right swapped, x negated):")
print("  r_wrist:", np.round(mirrored[skeleton.R_WRIST], 3))
print("  l_wrist:", np.round(mirrored[skeleton.L_WRIST], 3))

left = poses.canonical_pose("point_left", skel)
print("mirror(point_right) equals point_left:", np.allclose(mirrored, left))
