"""The three style statistics: speed, space, handedness.

Each is a windowed statistic (30 frames, stride 1) of a motion; they are
normalized to z-scores on the training set and clamped to [-3, 3] when used
as controls.  The same computation is differentiable in torch so it can sit
inside the training objective.
"""
import numpy as np
import torch

from sgt import stylestats
from sgt.training import make_synthetic_corpus

corpus = make_synthetic_corpus(12, seed=0)
clip = corpus[0]
print(f"clip text: {clip.text!r}")

track = stylestats.style_track(clip.motion.frames)
print("\nraw style track (first 5 frames):")
print(np.round(track[:5], 4))

stats = stylestats.fit_norm_stats([c.motion.frames for c in corpus])
print("\ntraining-set stats: mean", np.round(stats.mean, 4), "std", np.round(stats.std, 4))

normalized = stylestats.normalize_style(track, stats)
print("normalized range:", normalized.min().round(2), "to", normalized.max().round(2))

# differentiability: gradient of the mid-frame speed w.r.t. joint positions
pos = torch.tensor(clip.motion.frames, requires_grad=True)
speed_mid = stylestats.style_track_torch(pos)[len(clip.motion) // 2, stylestats.SPEED]
speed_mid.backward()
print("\ngradient norm of mid-frame speed w.r.t. all joints:", float(pos.grad.norm()))
