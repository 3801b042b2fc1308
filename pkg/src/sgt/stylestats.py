"""Style statistics of a motion: speed, space, and handedness.

All three are windowed statistics (default window 30 frames, stride 1,
centered at each frame and clamped to the sequence bounds):

* speed: mean per-joint displacement per frame over the window and joints,
* space: mean distance between the two wrists over the window,
* handedness: signed wrist-speed ratio in [-1, 1], positive when the left
  hand is faster.

The core runs on torch tensors so the same code path is differentiable and
can sit inside a training loss; the public functions accept numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from . import skeleton
from .errors import DegenerateVariance, SequenceTooShort

DEFAULT_WINDOW = 30
CLAMP = 3.0
# Below this raw wrist speed both hands count as still and handedness is 0.
WRIST_SPEED_EPS = 1e-6

SPEED, SPACE, HANDEDNESS = 0, 1, 2
STYLE_NAMES = ("speed", "space", "handedness")


@dataclass(frozen=True)
class StyleNormStats:
    """Per-element mean/std fitted on a training set."""

    mean: np.ndarray  # (3,)
    std: np.ndarray  # (3,)

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "std", np.asarray(self.std, dtype=np.float64))
        if self.mean.shape != (3,) or self.std.shape != (3,):
            raise ValueError("norm stats are per style element")
        if not np.all(self.std > 0):
            raise ValueError("std must be positive")

    def to_json(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "StyleNormStats":
        return cls(np.asarray(obj["mean"]), np.asarray(obj["std"]))


def _safe_norm(sq: torch.Tensor) -> torch.Tensor:
    # sqrt with an exact 0 at 0 and a finite (zero) gradient there.
    nonzero = sq > 0
    return torch.where(nonzero, torch.sqrt(torch.where(nonzero, sq, torch.ones_like(sq))), torch.zeros_like(sq))


def _windowed_mean(x: torch.Tensor, n_frames: int, half: int, first: int) -> torch.Tensor:
    """Centered clamped-window mean.

    `x[k]` holds the value for frame `k + first`; the window for output
    frame i is [i - half, i + half] intersected with [first, n_frames - 1].
    """
    csum = torch.cat([torch.zeros_like(x[..., :1]), torch.cumsum(x, dim=-1)], dim=-1)
    i = torch.arange(n_frames, device=x.device)
    lo = torch.clamp(i - half, min=first) - first
    hi = torch.clamp(i + half, max=n_frames - 1) - first
    count = (hi - lo + 1).to(x.dtype)
    total = csum.index_select(-1, hi + 1) - csum.index_select(-1, lo)
    return total / count


def style_track_torch(positions: torch.Tensor, window: int = DEFAULT_WINDOW) -> torch.Tensor:
    """Raw style track of joint positions (..., T, J, 3) -> (..., T, 3)."""
    n_frames = positions.shape[-3]
    if n_frames < 2:
        raise SequenceTooShort("style statistics need at least 2 frames")
    half = window // 2

    disp = positions[..., 1:, :, :] - positions[..., :-1, :, :]
    disp_norm = _safe_norm((disp**2).sum(dim=-1))  # (..., T-1, J)

    speed = _windowed_mean(disp_norm.mean(dim=-1), n_frames, half, first=1)

    gap = _safe_norm(
        ((positions[..., :, skeleton.L_WRIST, :] - positions[..., :, skeleton.R_WRIST, :]) ** 2).sum(dim=-1)
    )
    space = _windowed_mean(gap, n_frames, half, first=0)

    speed_l = _windowed_mean(disp_norm[..., skeleton.L_WRIST], n_frames, half, first=1)
    speed_r = _windowed_mean(disp_norm[..., skeleton.R_WRIST], n_frames, half, first=1)

    right_faster = speed_r > speed_l
    one = torch.ones_like(speed_l)
    denom_r = torch.where(right_faster, speed_r, one)
    denom_l = torch.where(~right_faster & (speed_l > 0), speed_l, one)
    handedness = torch.where(right_faster, speed_l / denom_r - 1.0, 1.0 - speed_r / denom_l)
    both_still = (speed_l < WRIST_SPEED_EPS) & (speed_r < WRIST_SPEED_EPS)
    handedness = torch.where(both_still, torch.zeros_like(handedness), handedness)

    return torch.stack([speed, space, handedness], dim=-1)


def style_track(motion, window: int = DEFAULT_WINDOW) -> np.ndarray:
    """Raw style track of a motion, one (speed, space, handedness) row per frame."""
    frames = motion.frames if isinstance(motion, skeleton.MotionSequence) else np.asarray(motion, dtype=np.float64)
    with torch.no_grad():
        out = style_track_torch(torch.from_numpy(np.ascontiguousarray(frames, dtype=np.float64)), window)
    return out.numpy()


def normalize_style(raw, stats: StyleNormStats):
    """Z-score with the training-set stats, clamped to [-3, 3]."""
    arr = np.asarray(raw, dtype=np.float64)
    return np.clip((arr - stats.mean) / stats.std, -CLAMP, CLAMP)


def denormalize_style(normalized, stats: StyleNormStats):
    return np.asarray(normalized, dtype=np.float64) * stats.std + stats.mean


def normalize_style_torch(raw: torch.Tensor, stats: StyleNormStats) -> torch.Tensor:
    mean = torch.as_tensor(stats.mean, dtype=raw.dtype, device=raw.device)
    std = torch.as_tensor(stats.std, dtype=raw.dtype, device=raw.device)
    return torch.clamp((raw - mean) / std, -CLAMP, CLAMP)


def fit_norm_stats(dataset, window: int = DEFAULT_WINDOW) -> StyleNormStats:
    """Elementwise mean/std over all style frames of all sequences."""
    tracks = [style_track(m, window) for m in dataset]
    if not tracks or sum(t.shape[0] for t in tracks) < 2:
        raise DegenerateVariance("need at least 2 style frames to fit stats")
    stacked = np.concatenate(tracks, axis=0)
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0)
    low = std < 1e-8
    if np.any(low):
        names = [STYLE_NAMES[i] for i in np.flatnonzero(low)]
        raise DegenerateVariance(f"zero variance in style element(s): {', '.join(names)}")
    return StyleNormStats(mean, std)
