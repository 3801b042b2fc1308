"""Conditional gesture generator and adversarial critic.

Per frame the decoder consumes the concatenation of the encoded audio
feature, the encoded word feature, the pose control (27 dir-vec values plus
one mask bit), and the style control (3 values plus 3 mask bits).  Control
values are multiplied by their masks during input assembly, so zero-masked
rows can never leak values into the network.

Checkpoints are a single file: magic, a JSON header (format version, model
config, dictionary, style normalization stats, skeleton, mean pose, tensor
manifest) followed by the raw little-endian parameter blob.  Loading is
bit-exact.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
import torch
from torch import nn

from .controls import PoseControlTrack, StyleControlTrack
from .errors import CorruptCheckpoint, ShapeMismatch, VersionMismatch
from .metrics import FeatureExtractor
from .skeleton import POSE_DIM, SkeletonSpec
from .speech import AUDIO_DIM, Dictionary, SpeechContext
from .stylestats import StyleNormStats

CHECKPOINT_MAGIC = b"SGTCKPT\x00"
CHECKPOINT_VERSION = 1


@dataclass
class ModelConfig:
    frames_per_window: int = 30
    audio_dim: int = AUDIO_DIM
    audio_channels: int = 32
    word_embedding_dim: int = 50
    word_hidden: int = 32  # bidirectional GRU -> 64 per frame
    decoder_hidden: int = 256
    pose_dim: int = POSE_DIM
    critic_channels: int = 64

    @property
    def fused_dim(self) -> int:
        return self.audio_channels + 2 * self.word_hidden + (self.pose_dim + 1) + 6


class AudioEncoder(nn.Module):
    """Four temporal conv layers, stride 1, one feature row per frame."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        c = cfg.audio_channels
        self.net = nn.Sequential(
            nn.Conv1d(cfg.audio_dim, c, kernel_size=3, padding=1),
            nn.LeakyReLU(0.1),
            nn.Conv1d(c, c, kernel_size=3, padding=1),
            nn.LeakyReLU(0.1),
            nn.Conv1d(c, c, kernel_size=3, padding=1),
            nn.LeakyReLU(0.1),
            nn.Conv1d(c, c, kernel_size=3, padding=1),
        )

    def forward(self, audio):  # (B, T, A) -> (B, T, C)
        return self.net(audio.transpose(1, 2)).transpose(1, 2)


class WordEncoder(nn.Module):
    def __init__(self, cfg: ModelConfig, vocab_size: int):
        super().__init__()
        self.embedding = nn.Embedding(vocab_size, cfg.word_embedding_dim, padding_idx=Dictionary.PAD)
        self.rnn = nn.GRU(cfg.word_embedding_dim, cfg.word_hidden, batch_first=True, bidirectional=True)

    def forward(self, words):  # (B, T) -> (B, T, 2*H)
        out, _ = self.rnn(self.embedding(words))
        return out


class PoseDecoder(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.rnn = nn.GRU(cfg.fused_dim, cfg.decoder_hidden, batch_first=True, bidirectional=True)
        self.head = nn.Linear(2 * cfg.decoder_hidden, cfg.pose_dim)

    def forward(self, fused):  # (B, T, F) -> (B, T, POSE_DIM)
        out, _ = self.rnn(fused)
        return self.head(out)


class GestureGenerator(nn.Module):
    def __init__(self, cfg: ModelConfig, vocab_size: int):
        super().__init__()
        self.audio_encoder = AudioEncoder(cfg)
        self.word_encoder = WordEncoder(cfg, vocab_size)
        self.decoder = PoseDecoder(cfg)

    def forward(self, audio, words, pose_values, pose_mask, style_values, style_masks):
        """All inputs batch-first with the same frame count; returns raw pose rows."""
        fused = assemble_inputs(
            self.audio_encoder(audio),
            self.word_encoder(words),
            pose_values,
            pose_mask,
            style_values,
            style_masks,
        )
        return self.decoder(fused)


class Critic(nn.Module):
    """Temporal conv discriminator: motion window -> realness logit."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        c = cfg.critic_channels
        self.net = nn.Sequential(
            nn.Conv1d(cfg.pose_dim, c, kernel_size=5, stride=2, padding=2),
            nn.LeakyReLU(0.1),
            nn.Conv1d(c, c, kernel_size=5, stride=2, padding=2),
            nn.LeakyReLU(0.1),
            nn.Conv1d(c, c // 2, kernel_size=3, padding=1),
            nn.LeakyReLU(0.1),
        )
        self.head = nn.Linear(c // 2, 1)

    def forward(self, motion):  # (B, T, POSE_DIM) -> (B,)
        h = self.net(motion.transpose(1, 2)).mean(dim=2)
        return self.head(h).squeeze(-1)


def assemble_inputs(audio_enc, word_enc, pose_values, pose_mask, style_values, style_masks):
    """Concatenate per-frame features; control values are re-zeroed by their masks."""
    return torch.cat(
        [
            audio_enc,
            word_enc,
            pose_values * pose_mask.unsqueeze(-1),
            pose_mask.unsqueeze(-1),
            style_values * style_masks,
            style_masks,
        ],
        dim=-1,
    )


def unit_normalize_rows(rows: np.ndarray) -> np.ndarray:
    """Renormalize (…, 9, 3) bone vectors to unit length (zero rows become +y)."""
    norms = np.linalg.norm(rows, axis=-1, keepdims=True)
    safe = np.where(norms > 1e-12, norms, 1.0)
    out = rows / safe
    out = np.where(norms > 1e-12, out, np.array([0.0, 1.0, 0.0]))
    return out


@dataclass
class GeneratorModel:
    """Trained parameters plus everything baked in at training time."""

    config: ModelConfig
    generator: GestureGenerator
    critic: Critic
    norm_stats: StyleNormStats
    dictionary: Dictionary
    skeleton: SkeletonSpec
    mean_pose: np.ndarray
    fgd_extractor: FeatureExtractor | None = None
    split_fingerprints: dict = field(default_factory=dict)

    @classmethod
    def initialize(cls, config, norm_stats, dictionary, skel, mean_pose, seed: int = 0) -> "GeneratorModel":
        torch.manual_seed(seed)
        generator = GestureGenerator(config, len(dictionary))
        critic = Critic(config)
        return cls(config, generator, critic, norm_stats, dictionary, skel, np.asarray(mean_pose, dtype=np.float64))

    def _check_window(self, ctx: SpeechContext, cp: PoseControlTrack, cs: StyleControlTrack) -> int:
        t = ctx.n_frames
        if len(cp) != t or len(cs) != t:
            raise ShapeMismatch(f"controls must match the {t}-frame context")
        if ctx.audio_features.shape[1] != self.config.audio_dim:
            raise ShapeMismatch("audio feature dimensionality mismatch")
        return t

    def generate_raw(self, ctx: SpeechContext, cp: PoseControlTrack, cs: StyleControlTrack) -> np.ndarray:
        """Raw decoder output rows (t, POSE_DIM), before unit renormalization."""
        self._check_window(ctx, cp, cs)
        self.generator.eval()
        with torch.no_grad():
            rows = self.generator(
                torch.from_numpy(ctx.audio_features[None]).float(),
                torch.from_numpy(ctx.word_indices[None]),
                torch.from_numpy(cp.poses[None]).float(),
                torch.from_numpy(cp.mask[None]).float(),
                torch.from_numpy(cs.values[None]).float(),
                torch.from_numpy(cs.masks[None]).float(),
            )
        return rows[0].numpy().astype(np.float64)

    def forward(self, ctx: SpeechContext, cp: PoseControlTrack, cs: StyleControlTrack) -> np.ndarray:
        """Generate one window: (t, 9, 3) unit bone direction vectors."""
        rows = self.generate_raw(ctx, cp, cs)
        return unit_normalize_rows(rows.reshape(-1, POSE_DIM // 3, 3))

    def critic_score(self, motion) -> float:
        """Realness logit of a single t-frame motion window."""
        rows = np.asarray(motion, dtype=np.float64)
        if rows.ndim == 3:
            rows = rows.reshape(rows.shape[0], -1)
        if rows.ndim != 2 or rows.shape[1] != self.config.pose_dim:
            raise ShapeMismatch("critic expects (t, 27) or (t, 9, 3)")
        self.critic.eval()
        with torch.no_grad():
            score = self.critic(torch.from_numpy(rows[None]).float())
        return float(score[0])


def _tensor_manifest(module: nn.Module, prefix: str):
    entries = []
    blobs = []
    for name, tensor in module.state_dict().items():
        arr = tensor.detach().cpu().numpy()
        blob = arr.tobytes()
        entries.append(
            {
                "name": f"{prefix}.{name}",
                "shape": list(arr.shape),
                "dtype": str(arr.dtype),
                "nbytes": len(blob),
            }
        )
        blobs.append(blob)
    return entries, blobs


def _load_module_params(module: nn.Module, prefix: str, entries, blob: bytes, offsets):
    state = {}
    for entry in entries:
        if not entry["name"].startswith(prefix + "."):
            continue
        name = entry["name"][len(prefix) + 1 :]
        start = offsets[entry["name"]]
        raw = blob[start : start + entry["nbytes"]]
        if len(raw) != entry["nbytes"]:
            raise CorruptCheckpoint("parameter blob truncated")
        arr = np.frombuffer(raw, dtype=entry["dtype"]).reshape(entry["shape"]).copy()
        state[name] = torch.from_numpy(arr)
    module.load_state_dict(state)


def _skeleton_to_json(skel: SkeletonSpec) -> dict:
    return {
        "joints": list(skel.joints),
        "bones": [list(b) for b in skel.bones],
        "bone_lengths": skel.bone_lengths.tolist(),
        "root": skel.root,
        "symmetric_pairs": [list(p) for p in skel.symmetric_pairs],
    }


def _skeleton_from_json(obj: dict) -> SkeletonSpec:
    return SkeletonSpec(
        joints=tuple(obj["joints"]),
        bones=tuple(tuple(b) for b in obj["bones"]),
        bone_lengths=np.asarray(obj["bone_lengths"]),
        root=obj["root"],
        symmetric_pairs=tuple(tuple(p) for p in obj["symmetric_pairs"]),
    )


def save_checkpoint(model: GeneratorModel, path) -> None:
    entries, blobs = [], []
    for prefix, module in (("generator", model.generator), ("critic", model.critic)):
        e, b = _tensor_manifest(module, prefix)
        entries += e
        blobs += b
    extractor_cfg = None
    if model.fgd_extractor is not None:
        e, b = _tensor_manifest(model.fgd_extractor, "fgd_extractor")
        entries += e
        blobs += b
        extractor_cfg = model.fgd_extractor.config_json()
    header = {
        "format_version": CHECKPOINT_VERSION,
        "config": asdict(model.config),
        "dictionary": model.dictionary.to_json(),
        "norm_stats": model.norm_stats.to_json(),
        "skeleton": _skeleton_to_json(model.skeleton),
        "mean_pose": model.mean_pose.tolist(),
        "fgd_extractor": extractor_cfg,
        "split_fingerprints": model.split_fingerprints,
        "params": entries,
    }
    header_bytes = json.dumps(header).encode()
    with open(path, "wb") as f:
        f.write(CHECKPOINT_MAGIC)
        f.write(len(header_bytes).to_bytes(8, "little"))
        f.write(header_bytes)
        for blob in blobs:
            f.write(blob)


def load_checkpoint(path) -> GeneratorModel:
    with open(path, "rb") as f:
        data = f.read()
    if data[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CorruptCheckpoint("bad magic")
    try:
        header_len = int.from_bytes(data[8:16], "little")
        header = json.loads(data[16 : 16 + header_len].decode())
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptCheckpoint(f"unreadable header: {exc}") from exc
    if header.get("format_version") != CHECKPOINT_VERSION:
        raise VersionMismatch(f"checkpoint format {header.get('format_version')} != {CHECKPOINT_VERSION}")
    blob = data[16 + header_len :]
    offsets = {}
    cursor = 0
    for entry in header["params"]:
        offsets[entry["name"]] = cursor
        cursor += entry["nbytes"]
    if len(blob) < cursor:
        raise CorruptCheckpoint("parameter blob truncated")
    config = ModelConfig(**header["config"])
    dictionary = Dictionary.from_json(header["dictionary"])
    model = GeneratorModel(
        config=config,
        generator=GestureGenerator(config, len(dictionary)),
        critic=Critic(config),
        norm_stats=StyleNormStats.from_json(header["norm_stats"]),
        dictionary=dictionary,
        skeleton=_skeleton_from_json(header["skeleton"]),
        mean_pose=np.asarray(header["mean_pose"]),
        split_fingerprints=header.get("split_fingerprints") or {},
    )
    _load_module_params(model.generator, "generator", header["params"], blob, offsets)
    _load_module_params(model.critic, "critic", header["params"], blob, offsets)
    if header.get("fgd_extractor") is not None:
        extractor = FeatureExtractor.from_config_json(header["fgd_extractor"])
        _load_module_params(extractor, "fgd_extractor", header["params"], blob, offsets)
        extractor.eval()
        model.fgd_extractor = extractor
    return model
