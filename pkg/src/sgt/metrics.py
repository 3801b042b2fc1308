"""Evaluation metrics: Fréchet gesture distance and compliance scores.

FGD compares Gaussian fits of real vs. generated motion windows in the
latent space of a fixed autoencoder trained on reference motion only; it is
comparable only across runs sharing one extractor, which is why the
extractor travels inside the model checkpoint.

PCS is the mean absolute difference between pose controls and the generated
bone vectors over controlled frames (protocol: a 5-frame control at frames
[10, 15)).  SCS is the mean absolute difference between controlled and
measured normalized style values over masked entries (protocol: full-window
style control).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from . import stylestats
from .controls import PoseControlTrack, StyleControlTrack, empty_controls
from .errors import DimensionMismatch, EmptySet, NoMaskedFrames
from .skeleton import POSE_DIM
from .stylestats import StyleNormStats

PCS_CONTROL_RANGE = (10, 15)  # 5-frame pose control in the middle of a 30-frame window
EIG_FLOOR = 1e-10


@dataclass(frozen=True)
class GaussianStats:
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=np.float64))
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=np.float64))
        d = self.mu.shape[0]
        if self.sigma.shape != (d, d):
            raise DimensionMismatch("covariance shape does not match mean")


def fit_gaussian(features: np.ndarray) -> GaussianStats:
    feats = np.asarray(features, dtype=np.float64)
    if feats.ndim != 2 or feats.shape[0] < 2:
        raise EmptySet("need at least 2 feature vectors")
    return GaussianStats(feats.mean(axis=0), np.cov(feats, rowvar=False))


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_symmetrize(a))
    vals = np.clip(vals, EIG_FLOOR, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def frechet_distance(g1: GaussianStats, g2: GaussianStats) -> float:
    """||mu1-mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}), via eigendecompositions."""
    if g1.mu.shape != g2.mu.shape:
        raise DimensionMismatch("gaussian dimensions differ")
    s1 = _symmetrize(g1.sigma)
    s2 = _symmetrize(g2.sigma)
    root1 = _psd_sqrt(s1)
    inner = _symmetrize(root1 @ s2 @ root1)
    vals = np.linalg.eigh(inner)[0]
    trace_sqrt = np.sqrt(np.clip(vals, 0.0, None)).sum()
    mean_term = float(((g1.mu - g2.mu) ** 2).sum())
    return mean_term + float(np.trace(s1) + np.trace(s2) - 2.0 * trace_sqrt)


class FeatureExtractor(nn.Module):
    """Temporal-conv autoencoder over motion windows; the encoder output is
    the FGD latent."""

    def __init__(self, pose_dim: int = POSE_DIM, latent_dim: int = 32, channels: int = 64, window: int = 30):
        super().__init__()
        self.pose_dim = pose_dim
        self.latent_dim = latent_dim
        self.channels = channels
        self.window = window
        reduced = ((window + 1) // 2 + 1) // 2
        self._reduced = reduced
        self.encoder = nn.Sequential(
            nn.Conv1d(pose_dim, channels, kernel_size=5, stride=2, padding=2),
            nn.LeakyReLU(0.1),
            nn.Conv1d(channels, channels, kernel_size=5, stride=2, padding=2),
            nn.LeakyReLU(0.1),
        )
        self.to_latent = nn.Linear(channels * reduced, latent_dim)
        self.from_latent = nn.Linear(latent_dim, channels * reduced)
        self.decoder = nn.Sequential(
            nn.ConvTranspose1d(channels, channels, kernel_size=4, stride=2, padding=1),
            nn.LeakyReLU(0.1),
            nn.ConvTranspose1d(channels, pose_dim, kernel_size=4, stride=2, padding=1),
        )

    def encode(self, windows: torch.Tensor) -> torch.Tensor:  # (B, T, D) -> (B, latent)
        h = self.encoder(windows.transpose(1, 2))
        return self.to_latent(h.flatten(1))

    def forward(self, windows: torch.Tensor) -> torch.Tensor:
        z = self.encode(windows)
        h = self.from_latent(z).view(-1, self.channels, self._reduced)
        recon = self.decoder(h)
        return recon.transpose(1, 2)[:, : self.window, :]

    def config_json(self) -> dict:
        return {
            "pose_dim": self.pose_dim,
            "latent_dim": self.latent_dim,
            "channels": self.channels,
            "window": self.window,
        }

    @classmethod
    def from_config_json(cls, obj: dict) -> "FeatureExtractor":
        return cls(**obj)


def train_feature_extractor(
    reference_windows: np.ndarray,
    seed: int = 0,
    epochs: int = 20,
    batch_size: int = 64,
    lr: float = 1e-3,
    latent_dim: int = 32,
) -> FeatureExtractor:
    """Fit the autoencoder on reference motion windows (N, T, 27); frozen afterwards."""
    windows = np.asarray(reference_windows, dtype=np.float32)
    if windows.ndim != 3 or windows.shape[0] < 2:
        raise EmptySet("need reference windows to train the extractor")
    torch.manual_seed(seed)
    extractor = FeatureExtractor(pose_dim=windows.shape[2], latent_dim=latent_dim, window=windows.shape[1])
    opt = torch.optim.Adam(extractor.parameters(), lr=lr)
    data = torch.from_numpy(windows)
    rng = np.random.default_rng(seed)
    for _ in range(epochs):
        order = rng.permutation(len(data))
        for lo in range(0, len(data), batch_size):
            batch = data[order[lo : lo + batch_size]]
            opt.zero_grad()
            loss = torch.mean((extractor(batch) - batch) ** 2)
            loss.backward()
            opt.step()
    extractor.eval()
    for p in extractor.parameters():
        p.requires_grad_(False)
    return extractor


def extract_features(extractor: FeatureExtractor, windows: np.ndarray) -> np.ndarray:
    arr = np.asarray(windows, dtype=np.float32)
    if arr.ndim != 3:
        raise EmptySet("expected (N, T, pose_dim) windows")
    extractor.eval()
    with torch.no_grad():
        out = []
        for lo in range(0, len(arr), 256):
            out.append(extractor.encode(torch.from_numpy(arr[lo : lo + 256])).numpy())
    return np.concatenate(out, axis=0).astype(np.float64)


def fgd(real_windows: np.ndarray, generated_windows: np.ndarray, extractor: FeatureExtractor) -> float:
    """Fréchet distance between Gaussian fits of the two sets' latent features."""
    real = np.asarray(real_windows)
    gen = np.asarray(generated_windows)
    if real.size == 0 or gen.size == 0:
        raise EmptySet("fgd needs non-empty sets")
    return frechet_distance(
        fit_gaussian(extract_features(extractor, real)),
        fit_gaussian(extract_features(extractor, gen)),
    )


def pcs(cp: PoseControlTrack, generated) -> float:
    """Mean |control - output| over masked frames, in bone-vector space."""
    rows = np.asarray(generated, dtype=np.float64)
    if rows.ndim == 3:
        rows = rows.reshape(rows.shape[0], -1)
    if rows.shape != cp.poses.shape:
        raise NoMaskedFrames(f"generated shape {rows.shape} does not match controls")
    masked = cp.mask.astype(bool)
    if not masked.any():
        raise NoMaskedFrames("pose control mask is empty")
    return float(np.abs(cp.poses[masked] - rows[masked]).mean())


def mean_bone_angle_degrees(cp: PoseControlTrack, generated) -> float:
    """Average per-bone angle between control and output on masked frames (display only)."""
    rows = np.asarray(generated, dtype=np.float64).reshape(len(cp), -1, 3)
    ctrl = cp.poses.reshape(len(cp), -1, 3)
    masked = cp.mask.astype(bool)
    if not masked.any():
        raise NoMaskedFrames("pose control mask is empty")
    dots = np.clip((ctrl[masked] * rows[masked]).sum(-1), -1.0, 1.0)
    return float(np.degrees(np.arccos(dots)).mean())


def scs(cs: StyleControlTrack, generated_positions, stats: StyleNormStats, window: int = stylestats.DEFAULT_WINDOW) -> float:
    """Mean |control - measured| over masked entries of the normalized style track."""
    masked = cs.masks.astype(bool)
    if not masked.any():
        raise NoMaskedFrames("style control mask is empty")
    measured = stylestats.normalize_style(stylestats.style_track(generated_positions, window), stats)
    if measured.shape != cs.values.shape:
        raise NoMaskedFrames(f"style track shape {measured.shape} does not match controls")
    return float(np.abs(cs.values[masked] - measured[masked]).mean())


def standard_pose_protocol(reference_dirs: np.ndarray) -> PoseControlTrack:
    """Evaluation pose control: reference rows on frames [10, 15) of a window."""
    rows = np.asarray(reference_dirs, dtype=np.float64)
    if rows.ndim == 3:
        rows = rows.reshape(rows.shape[0], -1)
    t = rows.shape[0]
    cp, _ = empty_controls(t)
    lo, hi = PCS_CONTROL_RANGE
    poses = cp.poses.copy()
    mask = cp.mask.copy()
    poses[lo:hi] = rows[lo:hi]
    mask[lo:hi] = 1.0
    return PoseControlTrack(poses, mask)


def standard_style_protocol(reference_positions: np.ndarray, stats: StyleNormStats, window: int = stylestats.DEFAULT_WINDOW) -> StyleControlTrack:
    """Evaluation style control: the reference's normalized style on every frame."""
    values = stylestats.normalize_style(stylestats.style_track(reference_positions, window), stats)
    return StyleControlTrack(values, np.ones_like(values))
