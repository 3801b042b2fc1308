"""Regenerate the packaged starter motion library (src/sgt/data/motionlib).

Gestures are authored as angle-space keyframes with cosine easing, so every
frame has exact canonical bone lengths.
"""
import json
from pathlib import Path

import numpy as np

from sgt import poses, skeleton
from sgt.poses import ArmAngles, BodyAngles

OUT = Path(__file__).resolve().parents[1] / "src" / "sgt" / "data" / "motionlib"

REST = poses.REST
_BEAT = BodyAngles(right=ArmAngles(0.35, 0.7, 0.6, 1.0), left=ArmAngles(0.35, 0.7, 0.6, 1.0))
_NOD = BodyAngles(head_nod=0.35)


def ease(a: BodyAngles, b: BodyAngles, w: float) -> BodyAngles:
    return a.blend(b, 0.5 - 0.5 * np.cos(np.pi * w))


def angle_track(keys):
    """keys: [(frame, BodyAngles), ...] -> (T, 10, 3) motion via eased blending."""
    total = keys[-1][0] + 1
    frames = np.empty((total, skeleton.N_JOINTS, 3))
    for (f0, a0), (f1, a1) in zip(keys, keys[1:]):
        for i in range(f0, f1 + 1):
            w = (i - f0) / max(f1 - f0, 1)
            frames[i] = poses.pose_from_angles(ease(a0, a1, w))
    return frames


def hold(angles, start, length):
    return [(start, angles), (start + length, angles)]


GESTURES = [
    ("point_right", "Point right", ["deictic"],
     [(0, REST), (10, poses.canonical_angles("point_right"))] + hold(poses.canonical_angles("point_right"), 11, 7) + [(28, REST)]),
    ("point_left", "Point left", ["deictic"],
     [(0, REST), (10, poses.canonical_angles("point_left"))] + hold(poses.canonical_angles("point_left"), 11, 7) + [(28, REST)]),
    ("point_up", "Point up", ["deictic"],
     [(0, REST), (11, poses.canonical_angles("point_up"))] + hold(poses.canonical_angles("point_up"), 12, 6) + [(30, REST)]),
    ("raise_right_hand", "Raise right hand", ["emblem"],
     [(0, REST), (12, poses.canonical_angles("raise_right_hand"))] + hold(poses.canonical_angles("raise_right_hand"), 13, 7) + [(30, REST)]),
    ("raise_left_hand", "Raise left hand", ["emblem"],
     [(0, REST), (12, poses.canonical_angles("raise_left_hand"))] + hold(poses.canonical_angles("raise_left_hand"), 13, 7) + [(30, REST)]),
    ("raise_both_hands", "Raise both hands", ["emblem"],
     [(0, REST), (12, poses.canonical_angles("raise_both_hands"))] + hold(poses.canonical_angles("raise_both_hands"), 13, 7) + [(32, REST)]),
    ("bow", "Bow", ["emblem"],
     [(0, REST), (12, poses.canonical_angles("bow"))] + hold(poses.canonical_angles("bow"), 13, 9) + [(32, REST)]),
    ("framing", "Framing", ["iconic"],
     [(0, REST), (10, poses.canonical_angles("framing"))] + hold(poses.canonical_angles("framing"), 11, 13) + [(34, REST)]),
    ("beat", "Beat", ["beat"],
     [(0, REST), (6, _BEAT), (12, REST), (18, _BEAT), (24, REST)]),
    ("open_palm", "Open palms", ["emblem", "iconic"],
     [(0, REST), (10, poses.canonical_angles("open_palm"))] + hold(poses.canonical_angles("open_palm"), 11, 9) + [(30, REST)]),
    ("head_nod", "Head nod", ["beat", "emblem"],
     [(0, REST), (5, _NOD), (10, REST), (15, _NOD), (20, REST)]),
    ("shrug", "Shrug", ["emblem"],
     [(0, REST), (8, poses.canonical_angles("shrug"))] + hold(poses.canonical_angles("shrug"), 9, 5) + [(22, REST)]),
    ("rest", "Rest", ["rest"],
     [(0, REST), (23, REST)]),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    index = []
    for gesture_id, name, tags, keys in GESTURES:
        frames = angle_track(keys)
        skeleton.save_motion(skeleton.MotionSequence(frames), OUT / f"{gesture_id}.json")
        index.append({"id": gesture_id, "name": name, "tags": tags, "frames": len(frames), "file": f"{gesture_id}.json"})
    with open(OUT / "index.json", "w") as f:
        json.dump({"gestures": index}, f, indent=1)
    print(f"wrote {len(index)} gestures to {OUT}")


if __name__ == "__main__":
    main()
