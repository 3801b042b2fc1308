"""The unit-gesture library: browse, instantiate at three speeds, flip.

Library gestures are short motion clips usable directly as pose controls.
The packaged starter set is procedurally authored; import your own motion
JSON files to extend it.
"""
from sgt import stylestats
from sgt.motionlib import MotionLibrary

library = MotionLibrary.default()
print(f"{len(library)} gestures:")
for meta in library.list_gestures():
    print(f"  {meta['id']:18s} {meta['frames']:3d} frames  tags={','.join(meta['tags'])}")

print("\ndeictic gestures only:", [g["id"] for g in library.list_gestures(tag="deictic")])

base = library.instantiate("point_right")
double = library.instantiate("point_right", speed_level=2)
print(f"\npoint_right at 1x: {len(base)} frames, at 2x: {len(double)} frames")
print(
    "raw speed 1x vs 2x:",
    round(stylestats.style_track(base.frames)[:, 0].mean(), 4),
    "vs",
    round(stylestats.style_track(double.frames)[:, 0].mean(), 4),
)

flipped = library.instantiate("point_right", flip=True)
print("\nflip moves the pointing wrist across the body:")
print("  normal r_wrist x:", round(base.frames[15, 8, 0], 3), " flipped l_wrist x:", round(flipped.frames[15, 9, 0], 3))
