"""FGD, PCS, and SCS: the three numerical evaluation metrics.

FGD is the Fréchet distance between Gaussian fits of real and generated
motion in the latent space of an autoencoder trained on real motion only;
PCS/SCS measure compliance with pose/style controls (lower is better for
all three).
"""
import numpy as np

from sgt import metrics, skeleton, stylestats
from sgt.metrics import GaussianStats, frechet_distance
from sgt.skeleton import POSE_DIM
from sgt.training import make_synthetic_corpus

# closed forms first
d = 8
same = frechet_distance(GaussianStats(np.zeros(d), np.eye(d)), GaussianStats(np.zeros(d), np.eye(d)))
shift = frechet_distance(GaussianStats(np.zeros(d), np.eye(d)), GaussianStats(np.ones(d), np.eye(d)))
scale = frechet_distance(GaussianStats(np.zeros(d), np.eye(d)), GaussianStats(np.zeros(d), 4 * np.eye(d)))
print(f"closed forms: identical={same:.2e}, unit mean shift={shift:.3f} (= d), I vs 4I={scale:.3f} (= d)")

# FGD separates real motion from a frozen mean pose
corpus = make_synthetic_corpus(30, seed=3)
skel = skeleton.SkeletonSpec()
windows = []
for clip in corpus:
    frames = clip.motion.frames
    for lo in range(0, len(frames) - 30 + 1, 30):
        windows.append(skeleton.to_dirvec(frames[lo : lo + 30], skel).reshape(30, POSE_DIM))
windows = np.stack(windows)
extractor = metrics.train_feature_extractor(windows, seed=0, epochs=8)

mean_rows = skeleton.to_dirvec(skeleton.mean_pose([c.motion.frames for c in corpus], skel), skel).reshape(POSE_DIM)
static = np.tile(mean_rows, (len(windows), 30, 1))
print("\nFGD(real vs real half):   ", round(metrics.fgd(windows[::2], windows[1::2], extractor), 4))
print("FGD(real vs static mean): ", round(metrics.fgd(windows, static, extractor), 4))

# compliance scores are zero for a perfectly compliant generator
stats = stylestats.fit_norm_stats([c.motion.frames for c in corpus])
frames = corpus[0].motion.frames[:30]
cp = metrics.standard_pose_protocol(skeleton.to_dirvec(frames, skel))
cs = metrics.standard_style_protocol(frames, stats)
print("\npass-through PCS:", metrics.pcs(cp, skeleton.to_dirvec(frames, skel)))
print("pass-through SCS:", metrics.scs(cs, frames, stats))
