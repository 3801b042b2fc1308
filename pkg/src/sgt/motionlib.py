"""Library of unit gestures usable as pose controls.

The packaged starter library is a set of procedurally authored gestures
(motion JSON files plus an index).  Instantiation supports three speed
levels (1x, 2x, 3x via temporal resampling) and left/right flipping.
Libraries are extensible at runtime by importing motion JSON files; imports
rewrite the index atomically so readers never observe a partial library.
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import skeleton
from .errors import InvalidSpeedLevel, UnknownGesture
from .skeleton import MotionSequence, SkeletonSpec

SPEED_LEVELS = (1, 2, 3)


@dataclass(frozen=True)
class UnitGesture:
    gesture_id: str
    name: str
    tags: tuple[str, ...]
    motion: MotionSequence

    def meta(self) -> dict:
        return {
            "id": self.gesture_id,
            "name": self.name,
            "tags": list(self.tags),
            "frames": len(self.motion),
        }


def resample(frames: np.ndarray, speed_level: int) -> np.ndarray:
    """Linear temporal resampling to ceil(L / speed) frames; endpoints exact."""
    if speed_level not in SPEED_LEVELS:
        raise InvalidSpeedLevel(f"speed level {speed_level} not in {SPEED_LEVELS}")
    length = frames.shape[0]
    m = int(np.ceil(length / speed_level))
    if m <= 1 or length == 1:
        return frames[:1].copy()
    t = np.arange(m) * (length - 1) / (m - 1)
    lo = np.floor(t).astype(int)
    hi = np.minimum(lo + 1, length - 1)
    w = (t - lo)[:, None, None]
    return frames[lo] * (1 - w) + frames[hi] * w


class MotionLibrary:
    def __init__(self, gestures: list[UnitGesture], directory: Path | None = None, skel: SkeletonSpec = SkeletonSpec()):
        self._gestures = {g.gesture_id: g for g in gestures}
        self._directory = directory
        self._skel = skel
        self._write_lock = threading.Lock()

    @classmethod
    def from_dir(cls, directory, skel: SkeletonSpec = SkeletonSpec()) -> "MotionLibrary":
        directory = Path(directory)
        with open(directory / "index.json") as f:
            index = json.load(f)
        gestures = []
        for entry in index["gestures"]:
            motion = skeleton.load_motion(directory / entry["file"])
            gestures.append(UnitGesture(entry["id"], entry["name"], tuple(entry["tags"]), motion))
        return cls(gestures, directory, skel)

    @classmethod
    def default(cls, skel: SkeletonSpec = SkeletonSpec()) -> "MotionLibrary":
        root = resources.files("sgt").joinpath("data/motionlib")
        with resources.as_file(root) as path:
            return cls.from_dir(path, skel)

    def __len__(self) -> int:
        return len(self._gestures)

    def list_gestures(self, tag: str | None = None) -> list[dict]:
        """Metadata in stable (id-sorted) order, optionally filtered by tag."""
        items = sorted(self._gestures.values(), key=lambda g: g.gesture_id)
        if tag is not None:
            items = [g for g in items if tag in g.tags]
        return [g.meta() for g in items]

    def get(self, gesture_id: str) -> UnitGesture:
        try:
            return self._gestures[gesture_id]
        except KeyError:
            raise UnknownGesture(gesture_id) from None

    def instantiate(self, gesture_id: str, speed_level: int = 1, flip: bool = False) -> MotionSequence:
        gesture = self.get(gesture_id)
        frames = resample(gesture.motion.frames, speed_level)
        if flip:
            frames = skeleton.mirror(frames, self._skel)
        return MotionSequence(frames.copy(), gesture.motion.fps)

    def import_gesture(self, gesture_id: str, name: str, tags, motion: MotionSequence) -> UnitGesture:
        """Add a gesture; persisted atomically when the library is directory-backed."""
        if gesture_id in self._gestures:
            raise ValueError(f"gesture id {gesture_id!r} already exists")
        gesture = UnitGesture(gesture_id, name, tuple(tags), motion)
        with self._write_lock:
            if self._directory is not None:
                skeleton.save_motion(motion, self._directory / f"{gesture_id}.json", self._skel)
                index = {
                    "gestures": [
                        {**g.meta(), "file": f"{g.gesture_id}.json"}
                        for g in list(self._gestures.values()) + [gesture]
                    ]
                }
                fd, tmp = tempfile.mkstemp(dir=self._directory, suffix=".tmp")
                with os.fdopen(fd, "w") as f:
                    json.dump(index, f, indent=1)
                os.replace(tmp, self._directory / "index.json")
            updated = dict(self._gestures)
            updated[gesture_id] = gesture
            self._gestures = updated  # swap, so concurrent readers see old or new
        return gesture
