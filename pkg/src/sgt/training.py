"""Training: objective terms, control simulation, the epoch loop, and the
synthetic corpus generator used in place of a mocap dataset.

The generator objective is ``alpha * Huber + beta * GAN + gamma * style``
(defaults 500 / 5 / 0.05) with one critic update per generator update.
Controls are simulated from the reference motion of each training window and
randomly dropped so the model also learns the fully automatic regime.
Validation tracks FGD / PCS / SCS per epoch; the returned model is the
best-validation-FGD checkpoint.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from . import controls as controls_mod
from . import metrics, poses, skeleton, speech, stylestats
from .errors import EmptyDataset, NonFiniteLoss, ShapeMismatch
from .genmodel import GeneratorModel, ModelConfig, save_checkpoint, unit_normalize_rows
from .metrics import fit_gaussian, frechet_distance
from .skeleton import POSE_DIM, MotionSequence, SkeletonSpec
from .speech import Dictionary, SyntheticTts, WordTiming, build_dictionary
from .stylestats import StyleNormStats


@dataclass
class TrainConfig:
    alpha: float = 500.0
    beta: float = 5.0
    gamma: float = 0.05
    epochs: int = 80
    learning_rate: float = 0.0005
    batch_size: int = 128
    seed: int = 0
    window: int = 30
    window_stride: int = 10
    style_window: int = 30
    drop_all_p: float = 0.3
    style_drop_p: float = 0.5
    huber_delta: float = 1.0
    extractor_epochs: int = 20
    extractor_latent: int = 32
    word_embeddings_path: str | None = None
    model: ModelConfig = field(default_factory=ModelConfig)

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError("loss weights must be positive")

    @classmethod
    def from_dict(cls, obj: dict) -> "TrainConfig":
        obj = dict(obj)
        model = ModelConfig(**obj.pop("model", {}))
        return cls(model=model, **obj)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# objective terms


def huber_loss(pred: torch.Tensor, ref: torch.Tensor, delta: float = 1.0) -> torch.Tensor:
    """Mean Huber over all elements (quadratic inside delta, linear outside)."""
    if pred.shape != ref.shape:
        raise ShapeMismatch(f"{tuple(pred.shape)} vs {tuple(ref.shape)}")
    return F.huber_loss(pred, ref, delta=delta)


def fk_positions_torch(rows: torch.Tensor, skel: SkeletonSpec) -> torch.Tensor:
    """Differentiable forward kinematics: (..., T, 27) rows -> (..., T, 10, 3)."""
    dirs = rows.reshape(*rows.shape[:-1], len(skel.bones), 3)
    joints: list = [None] * len(skel.joints)
    joints[skel.root] = torch.zeros_like(dirs[..., 0, :])
    for b, (parent, child) in enumerate(skel.bones):
        joints[child] = joints[parent] + float(skel.bone_lengths[b]) * dirs[..., b, :]
    return torch.stack(joints, dim=-2)


def style_loss(
    pred_rows: torch.Tensor,
    ref_rows: torch.Tensor,
    skel: SkeletonSpec,
    stats: StyleNormStats,
    window: int = stylestats.DEFAULT_WINDOW,
) -> torch.Tensor:
    """L1 between normalized style tracks, through the differentiable path."""
    if pred_rows.shape != ref_rows.shape:
        raise ShapeMismatch(f"{tuple(pred_rows.shape)} vs {tuple(ref_rows.shape)}")
    pred_style = stylestats.style_track_torch(fk_positions_torch(pred_rows, skel), window)
    ref_style = stylestats.style_track_torch(fk_positions_torch(ref_rows, skel), window)
    pred_norm = stylestats.normalize_style_torch(pred_style, stats)
    ref_norm = stylestats.normalize_style_torch(ref_style, stats)
    return torch.mean(torch.abs(pred_norm - ref_norm))


def gan_losses(critic, real_batch: torch.Tensor, fake_batch: torch.Tensor):
    """Non-saturating GAN terms: (generator_term, critic_term)."""
    if real_batch.shape[1:] != fake_batch.shape[1:]:
        raise ShapeMismatch("real and fake windows disagree")
    ones_real = torch.ones(real_batch.shape[0], device=real_batch.device)
    zeros_fake = torch.zeros(fake_batch.shape[0], device=fake_batch.device)
    ones_fake = torch.ones(fake_batch.shape[0], device=fake_batch.device)
    critic_term = F.binary_cross_entropy_with_logits(
        critic(real_batch), ones_real
    ) + F.binary_cross_entropy_with_logits(critic(fake_batch.detach()), zeros_fake)
    generator_term = F.binary_cross_entropy_with_logits(critic(fake_batch), ones_fake)
    return generator_term, critic_term


# ---------------------------------------------------------------------------
# corpus


@dataclass
class Clip:
    clip_id: str
    text: str
    timings: list[WordTiming]
    waveform: np.ndarray
    sample_rate: int
    motion: MotionSequence


FILLER_WORDS = (
    "the", "we", "you", "they", "story", "world", "time", "people", "idea",
    "come", "go", "now", "today", "welcome", "think", "about", "place",
    "start", "small", "great", "together", "question", "answer", "because",
)

TRIGGER_POSES = {
    "right": "point_right",
    "left": "point_left",
    "up": "point_up",
    "hands": "raise_both_hands",
}


def _frame_energy(waveform: np.ndarray, sample_rate: int, n_frames: int, fps: int = skeleton.FPS) -> np.ndarray:
    env = np.empty(n_frames)
    for i in range(n_frames):
        lo = int(np.floor(i * sample_rate / fps))
        hi = int(np.floor((i + 1) * sample_rate / fps))
        seg = waveform[lo:hi]
        env[i] = np.sqrt(np.mean(seg**2)) if seg.size else 0.0
    peak = env.max()
    return env / peak if peak > 0 else env


def _smooth(x: np.ndarray, width: int = 5) -> np.ndarray:
    kernel = np.ones(width) / width
    return np.convolve(np.pad(x, (width // 2, width // 2), mode="edge"), kernel, mode="valid")


def make_synthetic_corpus(n_clips: int, seed: int = 0, skel: SkeletonSpec = SkeletonSpec()) -> list[Clip]:
    """Deterministic corpus where motion is a known function of speech.

    Wrist oscillation amplitude tracks the audio energy envelope, trigger
    words blend in canonical poses, and per-clip parameters spread the three
    style statistics: oscillation frequency (speed), arm extension (space),
    and left/right amplitude asymmetry (handedness).
    """
    if n_clips < 10:
        raise ValueError("need at least 10 clips")
    rng = np.random.default_rng(seed)
    tts = SyntheticTts()
    triggers = sorted(TRIGGER_POSES)
    clips = []
    for c in range(n_clips):
        n_words = int(rng.integers(12, 21))
        words = [
            triggers[rng.integers(len(triggers))] if rng.random() < 0.22 else FILLER_WORDS[rng.integers(len(FILLER_WORDS))]
            for _ in range(n_words)
        ]
        text = " ".join(words)
        wav, sr, timings = tts.synthesize(text)
        n_frames = int(round(len(wav) / sr * skeleton.FPS))
        env = _smooth(_frame_energy(wav, sr, n_frames))

        freq = rng.uniform(0.6, 2.0)
        amp = rng.uniform(0.25, 0.85)
        ext = rng.uniform(0.0, 1.0)
        handed = rng.uniform(-0.8, 0.8)
        phase_r = rng.uniform(0, 2 * np.pi)
        phase_l = phase_r + np.pi + rng.uniform(-0.5, 0.5)
        base = poses.ArmAngles(0.15 + 0.9 * ext, 0.25, 0.3 + 0.6 * ext, 0.45)
        amp_r = amp * (1.0 - 0.8 * handed)
        amp_l = amp * (1.0 + 0.8 * handed)

        # blend weight toward a canonical pose around each trigger word
        blend = np.zeros(n_frames)
        target = np.full(n_frames, -1, dtype=int)
        for k, word in enumerate(words):
            if word not in TRIGGER_POSES:
                continue
            center = k * 6 + 3
            for i in range(max(0, center - 5), min(n_frames, center + 6)):
                w = 0.5 * (1 + np.cos(np.pi * (i - center) / 5))
                if w > blend[i]:
                    blend[i] = w
                    target[i] = triggers.index(word)

        frames = np.empty((n_frames, skeleton.N_JOINTS, 3))
        for i in range(n_frames):
            phase = 2 * np.pi * freq * i / skeleton.FPS
            swing_r = amp_r * env[i]
            swing_l = amp_l * env[i]
            right = poses.ArmAngles(
                max(base.upper_abduction + 0.5 * swing_r * np.sin(phase + phase_r), 0.02),
                base.upper_flexion + 0.4 * swing_r * np.cos(0.85 * phase + phase_r),
                max(base.fore_abduction + 0.6 * swing_r * np.sin(phase + phase_r + 0.8), 0.02),
                base.fore_flexion + 0.5 * swing_r * np.cos(phase + phase_r + 1.7),
            )
            left = poses.ArmAngles(
                max(base.upper_abduction + 0.5 * swing_l * np.sin(phase + phase_l), 0.02),
                base.upper_flexion + 0.4 * swing_l * np.cos(0.85 * phase + phase_l),
                max(base.fore_abduction + 0.6 * swing_l * np.sin(phase + phase_l + 0.8), 0.02),
                base.fore_flexion + 0.5 * swing_l * np.cos(phase + phase_l + 1.7),
            )
            body = poses.BodyAngles(right, left, 0.06 + 0.05 * np.sin(0.5 * phase))
            if blend[i] > 0:
                body = body.blend(poses.canonical_angles(TRIGGER_POSES[triggers[target[i]]]), blend[i])
            frames[i] = poses.pose_from_angles(body, skel)

        clips.append(Clip(f"clip_{c:04d}", text, timings, wav, sr, MotionSequence(frames)))
    return clips


def save_corpus(clips: list[Clip], out_dir, skel: SkeletonSpec = SkeletonSpec()) -> None:
    out = Path(out_dir)
    (out / "clips").mkdir(parents=True, exist_ok=True)
    for clip in clips:
        speech.save_wav(out / "clips" / f"{clip.clip_id}.wav", clip.waveform, clip.sample_rate)
        doc = skeleton.motion_to_json(clip.motion, skel)
        doc.update(
            {
                "id": clip.clip_id,
                "text": clip.text,
                "sample_rate": clip.sample_rate,
                "timings": speech.timings_to_json(clip.timings),
                "wav": f"{clip.clip_id}.wav",
            }
        )
        with open(out / "clips" / f"{clip.clip_id}.json", "w") as f:
            json.dump(doc, f)
    with open(out / "index.json", "w") as f:
        json.dump({"clips": [c.clip_id for c in clips]}, f, indent=1)


def load_corpus(data_dir) -> list[Clip]:
    root = Path(data_dir)
    with open(root / "index.json") as f:
        ids = json.load(f)["clips"]
    clips = []
    for clip_id in ids:
        with open(root / "clips" / f"{clip_id}.json") as f:
            doc = json.load(f)
        wav, sr = speech.load_wav(root / "clips" / doc["wav"])
        clips.append(
            Clip(
                clip_id,
                doc["text"],
                speech.timings_from_json(doc["timings"]),
                wav,
                sr,
                skeleton.motion_from_json(doc),
            )
        )
    if not clips:
        raise EmptyDataset(f"no clips under {data_dir}")
    return clips


@dataclass
class CorpusSplits:
    train: list[Clip]
    val: list[Clip]
    test: list[Clip]
    fingerprints: dict


def _fingerprint(clips: list[Clip]) -> str:
    joined = ",".join(sorted(c.clip_id for c in clips))
    return hashlib.sha256(joined.encode()).hexdigest()[:16]


def split_corpus(clips: list[Clip], seed: int = 0) -> CorpusSplits:
    """80/10/10 split; fingerprints let later tooling verify held-out sets."""
    if len(clips) < 3:
        raise EmptyDataset("need at least 3 clips to split")
    order = np.random.default_rng(seed).permutation(len(clips))
    n_val = max(1, round(0.1 * len(clips)))
    n_test = max(1, round(0.1 * len(clips)))
    val = [clips[i] for i in order[:n_val]]
    test = [clips[i] for i in order[n_val : n_val + n_test]]
    train = [clips[i] for i in order[n_val + n_test :]]
    fingerprints = {
        "seed": seed,
        "train": _fingerprint(train),
        "val": _fingerprint(val),
        "test": _fingerprint(test),
        "test_ids": sorted(c.clip_id for c in test),
    }
    return CorpusSplits(train, val, test, fingerprints)


# ---------------------------------------------------------------------------
# window assembly


@dataclass
class WindowSet:
    """Stacked t-frame training windows."""

    audio: np.ndarray  # (N, t, A) float32
    words: np.ndarray  # (N, t) int64
    dirs: np.ndarray  # (N, t, 27) float32
    positions: np.ndarray  # (N, t, 10, 3) float32
    norm_style: np.ndarray  # (N, t, 3) float32

    def __len__(self) -> int:
        return len(self.audio)


def collect_windows(
    clips: list[Clip],
    dictionary: Dictionary,
    skel: SkeletonSpec,
    stats: StyleNormStats,
    window: int,
    stride: int,
    style_window: int,
) -> WindowSet:
    audio, words, dirs, positions, norm_style = [], [], [], [], []
    for clip in clips:
        t_total = len(clip.motion)
        if t_total < window:
            continue
        feats = speech.extract_audio_features(clip.waveform, clip.sample_rate, n_frames=t_total)
        indices = speech.align_words(clip.timings, t_total, dictionary)
        frames = skeleton.renormalize(clip.motion.frames, skel)
        clip_dirs = skeleton.to_dirvec(frames, skel).reshape(t_total, POSE_DIM)
        for lo in range(0, t_total - window + 1, stride):
            hi = lo + window
            seg = frames[lo:hi]
            audio.append(feats[lo:hi])
            words.append(indices[lo:hi])
            dirs.append(clip_dirs[lo:hi])
            positions.append(seg)
            norm_style.append(stylestats.normalize_style(stylestats.style_track(seg, style_window), stats))
    if not audio:
        raise EmptyDataset("no training windows (clips shorter than the window?)")
    return WindowSet(
        np.asarray(audio, dtype=np.float32),
        np.asarray(words, dtype=np.int64),
        np.asarray(dirs, dtype=np.float32),
        np.asarray(positions, dtype=np.float32),
        np.asarray(norm_style, dtype=np.float32),
    )


def simulate_batch_controls(windows: WindowSet, idx: np.ndarray, rng: np.random.Generator, config: TrainConfig):
    """Per-sample simulated controls for a batch, as float32 tensors."""
    t = windows.dirs.shape[1]
    b = len(idx)
    pose_values = np.zeros((b, t, POSE_DIM), dtype=np.float32)
    pose_mask = np.zeros((b, t), dtype=np.float32)
    style_values = np.zeros((b, t, 3), dtype=np.float32)
    style_masks = np.zeros((b, t, 3), dtype=np.float32)
    for row, i in enumerate(idx):
        pose_slice, style_keep = controls_mod.draw_control_plan(t, rng, config.drop_all_p, config.style_drop_p)
        if pose_slice is None:
            continue
        lo, length = pose_slice
        pose_values[row, lo : lo + length] = windows.dirs[i, lo : lo + length]
        pose_mask[row, lo : lo + length] = 1.0
        keep = style_keep.astype(np.float32)
        style_values[row] = windows.norm_style[i] * keep
        style_masks[row] = keep
    return (
        torch.from_numpy(pose_values),
        torch.from_numpy(pose_mask),
        torch.from_numpy(style_values),
        torch.from_numpy(style_masks),
    )


# ---------------------------------------------------------------------------
# training loop


@dataclass
class EpochMetrics:
    epoch: int
    fgd: float
    pcs: float
    scs: float
    huber: float
    gan_g: float
    gan_c: float
    style: float
    val_huber: float


HISTORY_FIELDS = ("epoch", "fgd", "pcs", "scs", "huber", "gan_g", "gan_c", "style", "val_huber")


def write_history_csv(history: list[EpochMetrics], path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(HISTORY_FIELDS)
        for m in history:
            writer.writerow([m.epoch] + [repr(float(getattr(m, k))) for k in HISTORY_FIELDS[1:]])


def _batched_generate(model: GeneratorModel, windows: WindowSet, pose_ctrl=None, style_ctrl=None, batch: int = 256) -> np.ndarray:
    """No-grad batched generation over a window set; returns raw rows (N, t, 27)."""
    n = len(windows)
    t = windows.dirs.shape[1]
    out = np.empty((n, t, POSE_DIM), dtype=np.float32)
    model.generator.eval()
    with torch.no_grad():
        for lo in range(0, n, batch):
            hi = min(lo + batch, n)
            if pose_ctrl is None:
                pv = torch.zeros(hi - lo, t, POSE_DIM)
                pm = torch.zeros(hi - lo, t)
            else:
                pv, pm = pose_ctrl[0][lo:hi], pose_ctrl[1][lo:hi]
            if style_ctrl is None:
                sv = torch.zeros(hi - lo, t, 3)
                sm = torch.zeros(hi - lo, t, 3)
            else:
                sv, sm = style_ctrl[0][lo:hi], style_ctrl[1][lo:hi]
            rows = model.generator(
                torch.from_numpy(windows.audio[lo:hi]),
                torch.from_numpy(windows.words[lo:hi]),
                pv,
                pm,
                sv,
                sm,
            )
            out[lo:hi] = rows.numpy()
    return out


def _pose_protocol_tensors(windows: WindowSet):
    lo, hi = metrics.PCS_CONTROL_RANGE
    t = windows.dirs.shape[1]
    pv = np.zeros_like(windows.dirs)
    pm = np.zeros((len(windows), t), dtype=np.float32)
    pv[:, lo:hi] = windows.dirs[:, lo:hi]
    pm[:, lo:hi] = 1.0
    return torch.from_numpy(pv), torch.from_numpy(pm)


def _style_protocol_tensors(windows: WindowSet):
    sv = torch.from_numpy(windows.norm_style)
    sm = torch.ones_like(sv)
    return sv, sm


def validation_metrics(model: GeneratorModel, windows: WindowSet, real_gauss, config: TrainConfig) -> tuple[float, float, float, float]:
    """(fgd, pcs, scs, val_huber) under the evaluation protocols."""
    skel = model.skeleton
    stats = model.norm_stats
    lo, hi = metrics.PCS_CONTROL_RANGE

    raw_free = _batched_generate(model, windows)
    val_huber = float(F.huber_loss(torch.from_numpy(raw_free), torch.from_numpy(windows.dirs), delta=config.huber_delta))
    free_dirs = unit_normalize_rows(raw_free.astype(np.float64).reshape(len(windows), -1, POSE_DIM // 3, 3))
    feats = metrics.extract_features(model.fgd_extractor, free_dirs.reshape(len(windows), -1, POSE_DIM))
    fgd_val = frechet_distance(real_gauss, fit_gaussian(feats))

    pose_ctrl = _pose_protocol_tensors(windows)
    raw_pose = _batched_generate(model, windows, pose_ctrl=pose_ctrl)
    pose_dirs = unit_normalize_rows(raw_pose.astype(np.float64).reshape(len(windows), -1, POSE_DIM // 3, 3))
    pcs_val = float(np.abs(windows.dirs[:, lo:hi].astype(np.float64) - pose_dirs.reshape(len(windows), -1, POSE_DIM)[:, lo:hi]).mean())

    style_ctrl = _style_protocol_tensors(windows)
    raw_style = _batched_generate(model, windows, style_ctrl=style_ctrl)
    style_dirs = unit_normalize_rows(raw_style.astype(np.float64).reshape(len(windows), -1, POSE_DIM // 3, 3))
    gen_positions = skeleton.to_pose(style_dirs, skel)
    measured = stylestats.normalize_style(
        stylestats.style_track_torch(torch.from_numpy(gen_positions), config.style_window).numpy(), stats
    )
    scs_val = float(np.abs(windows.norm_style.astype(np.float64) - measured).mean())

    return float(fgd_val), pcs_val, scs_val, val_huber


def load_word_embeddings(path, dictionary: Dictionary, dim: int) -> np.ndarray:
    """Optional embedding-matrix loader: 'word v1 v2 ...' per line; unknown rows stay random."""
    rng = np.random.default_rng(0)
    matrix = rng.normal(0, 0.1, size=(len(dictionary), dim)).astype(np.float32)
    matrix[Dictionary.PAD] = 0.0
    with open(path) as f:
        for line in f:
            parts = line.rstrip().split(" ")
            if len(parts) != dim + 1:
                continue
            idx = dictionary.index(parts[0])
            if idx != Dictionary.PAD:
                matrix[idx] = np.asarray(parts[1:], dtype=np.float32)
    return matrix


def train(
    corpus: list[Clip],
    config: TrainConfig = TrainConfig(),
    out_ckpt=None,
    history_csv=None,
    log=None,
) -> tuple[GeneratorModel, list[EpochMetrics]]:
    """Train on an 80/10/10 split of the corpus; returns the best-FGD model.

    Deterministic for a fixed config/seed on one machine.  The test split is
    never touched here; its fingerprint is stored in the checkpoint so
    evaluation can verify it operates on the held-out clips.
    """
    if not corpus:
        raise EmptyDataset("empty corpus")
    splits = split_corpus(corpus, config.seed)

    skel = SkeletonSpec().with_bone_lengths(
        np.mean([skeleton.bone_lengths_of(c.motion.frames, SkeletonSpec()) for c in splits.train], axis=0)
    )
    mean_pose = skeleton.renormalize(
        skeleton.mean_pose([skeleton.renormalize(c.motion.frames, skel) for c in splits.train], skel), skel
    )
    dictionary = build_dictionary(c.text for c in splits.train)
    stats = stylestats.fit_norm_stats(
        [skeleton.renormalize(c.motion.frames, skel) for c in splits.train], config.style_window
    )

    train_windows = collect_windows(splits.train, dictionary, skel, stats, config.window, config.window_stride, config.style_window)
    val_windows = collect_windows(splits.val, dictionary, skel, stats, config.window, config.window_stride, config.style_window)

    model = GeneratorModel.initialize(
        replace(config.model, audio_dim=train_windows.audio.shape[2]),
        stats,
        dictionary,
        skel,
        mean_pose,
        seed=config.seed,
    )
    model.split_fingerprints = splits.fingerprints
    if config.word_embeddings_path:
        matrix = load_word_embeddings(config.word_embeddings_path, dictionary, config.model.word_embedding_dim)
        with torch.no_grad():
            model.generator.word_encoder.embedding.weight.copy_(torch.from_numpy(matrix))

    model.fgd_extractor = metrics.train_feature_extractor(
        train_windows.dirs, seed=config.seed, epochs=config.extractor_epochs, latent_dim=config.extractor_latent
    )
    real_gauss = fit_gaussian(metrics.extract_features(model.fgd_extractor, val_windows.dirs))

    opt_g = torch.optim.Adam(model.generator.parameters(), lr=config.learning_rate)
    opt_c = torch.optim.Adam(model.critic.parameters(), lr=config.learning_rate)
    rng = np.random.default_rng(config.seed)

    history: list[EpochMetrics] = []
    best_fgd = math.inf
    best_state = None
    for epoch in range(1, config.epochs + 1):
        model.generator.train()
        model.critic.train()
        order = rng.permutation(len(train_windows))
        sums = {"huber": 0.0, "gan_g": 0.0, "gan_c": 0.0, "style": 0.0}
        n_batches = 0
        for lo in range(0, len(order), config.batch_size):
            idx = order[lo : lo + config.batch_size]
            audio = torch.from_numpy(train_windows.audio[idx])
            words = torch.from_numpy(train_windows.words[idx])
            ref = torch.from_numpy(train_windows.dirs[idx])
            pv, pm, sv, sm = simulate_batch_controls(train_windows, idx, rng, config)

            with torch.no_grad():
                fake_for_critic = model.generator(audio, words, pv, pm, sv, sm)
            opt_c.zero_grad()
            _, critic_term = gan_losses(model.critic, ref, fake_for_critic)
            critic_term.backward()
            opt_c.step()

            opt_g.zero_grad()
            fake = model.generator(audio, words, pv, pm, sv, sm)
            h = huber_loss(fake, ref, config.huber_delta)
            g_term = F.binary_cross_entropy_with_logits(model.critic(fake), torch.ones(len(idx)))
            s_term = style_loss(fake, ref, skel, stats, config.style_window)
            total = config.alpha * h + config.beta * g_term + config.gamma * s_term
            if not torch.isfinite(total):
                raise NonFiniteLoss(
                    f"epoch {epoch}: huber={float(h.detach())} gan_g={float(g_term.detach())} "
                    f"style={float(s_term.detach())} critic={float(critic_term.detach())}"
                )
            total.backward()
            opt_g.step()

            sums["huber"] += float(h.detach())
            sums["gan_g"] += float(g_term.detach())
            sums["gan_c"] += float(critic_term.detach())
            sums["style"] += float(s_term.detach())
            n_batches += 1

        fgd_val, pcs_val, scs_val, val_huber = validation_metrics(model, val_windows, real_gauss, config)
        entry = EpochMetrics(
            epoch,
            fgd_val,
            pcs_val,
            scs_val,
            sums["huber"] / n_batches,
            sums["gan_g"] / n_batches,
            sums["gan_c"] / n_batches,
            sums["style"] / n_batches,
            val_huber,
        )
        history.append(entry)
        if log:
            log(f"epoch {epoch:3d}  fgd={fgd_val:.4f}  pcs={pcs_val:.4f}  scs={scs_val:.4f}  huber={entry.huber:.5f}")
        if fgd_val < best_fgd:
            best_fgd = fgd_val
            best_state = (
                {k: v.detach().clone() for k, v in model.generator.state_dict().items()},
                {k: v.detach().clone() for k, v in model.critic.state_dict().items()},
            )

    if best_state is not None:
        model.generator.load_state_dict(best_state[0])
        model.critic.load_state_dict(best_state[1])
    model.generator.eval()
    model.critic.eval()

    if history_csv:
        write_history_csv(history, history_csv)
    if out_ckpt:
        save_checkpoint(model, out_ckpt)
    return model, history


# ---------------------------------------------------------------------------
# evaluation report (the Table-style summary used by `sgt eval`)


@dataclass
class EvalReport:
    fgd_no_controls: float
    fgd_pose_controls: float
    fgd_style_controls: float
    pcs: float
    scs: float

    def rows(self):
        return [
            ("fgd_no_controls", self.fgd_no_controls),
            ("fgd_pose_controls", self.fgd_pose_controls),
            ("fgd_style_controls", self.fgd_style_controls),
            ("pcs", self.pcs),
            ("scs", self.scs),
        ]


def evaluate_model(model: GeneratorModel, clips: list[Clip], config: TrainConfig = TrainConfig()) -> EvalReport:
    """FGD (no / pose / style controls), PCS, and SCS on the given clips.

    Evaluation always uses non-overlapping windows, independent of the
    training stride.
    """
    windows = collect_windows(
        clips, model.dictionary, model.skeleton, model.norm_stats, config.window, config.window, config.style_window
    )
    real_gauss = fit_gaussian(metrics.extract_features(model.fgd_extractor, windows.dirs))

    def gauss_of(raw):
        dirs = unit_normalize_rows(raw.astype(np.float64).reshape(len(windows), -1, POSE_DIM // 3, 3))
        return fit_gaussian(metrics.extract_features(model.fgd_extractor, dirs.reshape(len(windows), -1, POSE_DIM))), dirs

    g_free, _ = gauss_of(_batched_generate(model, windows))
    pose_ctrl = _pose_protocol_tensors(windows)
    g_pose, pose_dirs = gauss_of(_batched_generate(model, windows, pose_ctrl=pose_ctrl))
    style_ctrl = _style_protocol_tensors(windows)
    g_style, style_dirs = gauss_of(_batched_generate(model, windows, style_ctrl=style_ctrl))

    lo, hi = metrics.PCS_CONTROL_RANGE
    pcs_val = float(
        np.abs(windows.dirs[:, lo:hi].astype(np.float64) - pose_dirs.reshape(len(windows), -1, POSE_DIM)[:, lo:hi]).mean()
    )
    gen_positions = skeleton.to_pose(style_dirs, model.skeleton)
    measured = stylestats.normalize_style(
        stylestats.style_track_torch(torch.from_numpy(gen_positions), config.style_window).numpy(), model.norm_stats
    )
    scs_val = float(np.abs(windows.norm_style.astype(np.float64) - measured).mean())

    return EvalReport(
        frechet_distance(real_gauss, g_free),
        frechet_distance(real_gauss, g_pose),
        frechet_distance(real_gauss, g_style),
        pcs_val,
        scs_val,
    )


def write_eval_report(report: EvalReport, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["metric", "value"])
        for name, value in report.rows():
            writer.writerow([name, repr(float(value))])
