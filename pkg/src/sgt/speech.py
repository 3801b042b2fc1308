"""Frame-aligned speech features: audio feature rows and word-index tracks.

Real TTS / forced-aligner backends are HTTP clients selected through the
``SGT_TTS_URL`` / ``SGT_ALIGNER_URL`` environment variables; when unset, a
deterministic synthetic fallback is used (per-word fixed-duration beeps and
uniform word timings), so nothing here needs network access.
"""
from __future__ import annotations

import hashlib
import io
import os
import wave
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyAudio, TtsUnavailable
from .skeleton import FPS

AUDIO_DIM = 24  # log-mel bands per frame
N_FFT = 1024
LOG_FLOOR = 1e-10

FALLBACK_SAMPLE_RATE = 16000
FALLBACK_WORD_SECONDS = 0.4


@dataclass(frozen=True)
class WordTiming:
    word: str
    start: float
    end: float

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError("word timing needs 0 <= start < end")


@dataclass
class SpeechContext:
    """Everything the generator needs to know about one utterance window."""

    audio_features: np.ndarray  # (t, AUDIO_DIM)
    word_indices: np.ndarray  # (t,)
    sample_rate: int
    text: str
    timings: list[WordTiming] = field(default_factory=list)
    fps: int = FPS

    @property
    def n_frames(self) -> int:
        return self.audio_features.shape[0]

    def window(self, start: int, end: int) -> "SpeechContext":
        """Slice [start, end), zero-padding (audio) / padding-index (words) past the end."""
        t = end - start
        feats = np.zeros((t, self.audio_features.shape[1]))
        words = np.zeros(t, dtype=np.int64)
        avail = min(end, self.n_frames) - start
        if avail > 0:
            feats[:avail] = self.audio_features[start : start + avail]
            words[:avail] = self.word_indices[start : start + avail]
        return SpeechContext(feats, words, self.sample_rate, self.text, self.timings, self.fps)


class Dictionary:
    """Token -> index map; index 0 is reserved for padding/unknown."""

    PAD = 0

    def __init__(self, tokens=()):
        self.tokens = ["<pad>"]
        self._index = {}
        for tok in tokens:
            self.add(tok)

    def add(self, token: str) -> int:
        if token not in self._index:
            self._index[token] = len(self.tokens)
            self.tokens.append(token)
        return self._index[token]

    def index(self, token: str) -> int:
        return self._index.get(token, self.PAD)

    def __len__(self) -> int:
        return len(self.tokens)

    def to_json(self) -> dict:
        return {"tokens": self.tokens[1:]}

    @classmethod
    def from_json(cls, obj: dict) -> "Dictionary":
        return cls(obj["tokens"])


def tokenize(text: str) -> list[str]:
    return [w.strip(".,!?;:\"'()").lower() for w in text.split() if w.strip(".,!?;:\"'()")]


def build_dictionary(texts) -> Dictionary:
    d = Dictionary()
    for text in texts:
        for tok in tokenize(text):
            d.add(tok)
    return d


def _mel_filterbank(n_mels: int, n_fft: int, sample_rate: int) -> np.ndarray:
    def to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def from_mel(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    n_bins = n_fft // 2 + 1
    freqs = np.linspace(0, sample_rate / 2, n_bins)
    mel_pts = from_mel(np.linspace(to_mel(0.0), to_mel(sample_rate / 2), n_mels + 2))
    bank = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        lo, center, hi = mel_pts[m], mel_pts[m + 1], mel_pts[m + 2]
        up = (freqs - lo) / max(center - lo, 1e-12)
        down = (hi - freqs) / max(hi - center, 1e-12)
        bank[m] = np.clip(np.minimum(up, down), 0.0, None)
    return bank


def extract_audio_features(
    waveform: np.ndarray,
    sample_rate: int,
    n_frames: int | None = None,
    fps: int = FPS,
    n_mels: int = AUDIO_DIM,
    n_fft: int = N_FFT,
) -> np.ndarray:
    """Log-mel energy rows, one per pose frame (frame i starts at sample floor(i*sr/fps))."""
    wav = np.asarray(waveform, dtype=np.float64)
    if wav.ndim != 1 or wav.size == 0:
        raise EmptyAudio("mono, non-empty waveform required")
    if n_frames is None:
        n_frames = max(1, round(wav.size / sample_rate * fps))
    window = np.hanning(n_fft)
    bank = _mel_filterbank(n_mels, n_fft, sample_rate)
    rows = np.empty((n_frames, n_mels))
    for i in range(n_frames):
        start = int(np.floor(i * sample_rate / fps))
        seg = wav[start : start + n_fft]
        if seg.size < n_fft:
            seg = np.pad(seg, (0, n_fft - seg.size))
        spectrum = np.abs(np.fft.rfft(seg * window)) ** 2
        rows[i] = np.log(bank @ spectrum + LOG_FLOOR)
    return rows


def align_words(timings, n_frames: int, dictionary: Dictionary, fps: int = FPS) -> np.ndarray:
    """Frame i gets the index of the word whose [start, end) contains i/fps, else padding."""
    indices = np.zeros(n_frames, dtype=np.int64)
    for tm in timings:
        lo = int(np.ceil(tm.start * fps - 1e-9))
        hi = int(np.ceil(tm.end * fps - 1e-9))
        indices[max(lo, 0) : min(hi, n_frames)] = dictionary.index(tm.word)
    return indices


def _word_hash(word: str) -> int:
    return int.from_bytes(hashlib.sha256(word.encode()).digest()[:4], "little")


class SyntheticTts:
    """Deterministic fallback: one fixed-duration beep per word.

    Beep frequency and amplitude derive from a hash of the word, so the same
    text always produces bit-identical audio.
    """

    def __init__(self, sample_rate: int = FALLBACK_SAMPLE_RATE, word_seconds: float = FALLBACK_WORD_SECONDS):
        self.sample_rate = sample_rate
        self.word_seconds = word_seconds

    def synthesize(self, text: str) -> tuple[np.ndarray, int, list[WordTiming]]:
        words = tokenize(text)
        if not words:
            raise EmptyAudio("no words to synthesize")
        sr = self.sample_rate
        n_word = int(round(self.word_seconds * sr))
        wav = np.zeros(n_word * len(words))
        timings = []
        for k, word in enumerate(words):
            h = _word_hash(word)
            freq = 180.0 + (h % 400)
            amp = 0.25 + 0.65 * ((h // 400) % 1000) / 999.0
            voiced = int(n_word * 0.75)
            t = np.arange(voiced) / sr
            tone = amp * np.sin(2 * np.pi * freq * t) * np.hanning(voiced)
            wav[k * n_word : k * n_word + voiced] = tone
            timings.append(WordTiming(word, k * self.word_seconds, (k + 1) * self.word_seconds))
        return wav, sr, timings


class HttpTts:
    """POSTs {"text": ...} to a TTS service returning 16-bit PCM WAV bytes."""

    def __init__(self, url: str):
        self.url = url

    def synthesize(self, text: str) -> tuple[np.ndarray, int, list[WordTiming]]:
        import httpx

        try:
            resp = httpx.post(self.url, json={"text": text}, timeout=30.0)
            resp.raise_for_status()
        except Exception as exc:
            raise TtsUnavailable(f"TTS backend {self.url} failed: {exc}") from exc
        wav, sr = read_wav_bytes(resp.content)
        return wav, sr, []


class UniformAligner:
    """Fallback aligner: spreads the words uniformly over the audio duration."""

    def align(self, text: str, waveform: np.ndarray, sample_rate: int) -> list[WordTiming]:
        words = tokenize(text)
        if not words:
            return []
        duration = len(waveform) / sample_rate
        per = duration / len(words)
        return [WordTiming(w, k * per, (k + 1) * per) for k, w in enumerate(words)]


class HttpAligner:
    """POSTs text + WAV to a forced-alignment service returning word timestamps."""

    def __init__(self, url: str):
        self.url = url

    def align(self, text: str, waveform: np.ndarray, sample_rate: int) -> list[WordTiming]:
        import base64

        import httpx

        payload = {
            "text": text,
            "audio": base64.b64encode(write_wav_bytes(waveform, sample_rate)).decode(),
        }
        try:
            resp = httpx.post(self.url, json=payload, timeout=60.0)
            resp.raise_for_status()
            items = resp.json()["words"]
        except Exception as exc:
            raise TtsUnavailable(f"aligner backend {self.url} failed: {exc}") from exc
        return [WordTiming(w["word"], float(w["start"]), float(w["end"])) for w in items]


def default_tts():
    url = os.environ.get("SGT_TTS_URL")
    return HttpTts(url) if url else SyntheticTts()


def default_aligner():
    url = os.environ.get("SGT_ALIGNER_URL")
    return HttpAligner(url) if url else UniformAligner()


def synthesize_speech(text: str, tts=None, aligner=None) -> tuple[np.ndarray, int, list[WordTiming]]:
    """Waveform plus word timings for a text, via the configured backends."""
    if not tokenize(text):
        raise EmptyAudio("empty text")
    tts = tts or default_tts()
    wav, sr, timings = tts.synthesize(text)
    if not timings:
        aligner = aligner or default_aligner()
        timings = aligner.align(text, wav, sr)
    return wav, sr, timings


def make_speech_context(
    text: str,
    dictionary: Dictionary,
    tts=None,
    aligner=None,
    n_frames: int | None = None,
    fps: int = FPS,
) -> SpeechContext:
    wav, sr, timings = synthesize_speech(text, tts, aligner)
    feats = extract_audio_features(wav, sr, n_frames=n_frames, fps=fps)
    indices = align_words(timings, feats.shape[0], dictionary, fps)
    return SpeechContext(feats, indices, sr, text, timings, fps)


def context_from_audio(
    text: str,
    waveform: np.ndarray,
    sample_rate: int,
    timings,
    dictionary: Dictionary,
    n_frames: int | None = None,
    fps: int = FPS,
) -> SpeechContext:
    feats = extract_audio_features(waveform, sample_rate, n_frames=n_frames, fps=fps)
    indices = align_words(timings, feats.shape[0], dictionary, fps)
    return SpeechContext(feats, indices, sample_rate, text, list(timings), fps)


def write_wav_bytes(waveform: np.ndarray, sample_rate: int) -> bytes:
    pcm = np.clip(np.asarray(waveform, dtype=np.float64), -1.0, 1.0)
    data = (pcm * 32767.0).astype("<i2").tobytes()
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(data)
    return buf.getvalue()


def read_wav_bytes(data: bytes) -> tuple[np.ndarray, int]:
    with wave.open(io.BytesIO(data), "rb") as w:
        if w.getnchannels() != 1 or w.getsampwidth() != 2:
            raise EmptyAudio("expected mono 16-bit PCM WAV")
        sr = w.getframerate()
        raw = w.readframes(w.getnframes())
    wav = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    return wav, sr


def save_wav(path, waveform: np.ndarray, sample_rate: int) -> None:
    with open(path, "wb") as f:
        f.write(write_wav_bytes(waveform, sample_rate))


def load_wav(path) -> tuple[np.ndarray, int]:
    with open(path, "rb") as f:
        return read_wav_bytes(f.read())


def timings_to_json(timings) -> list[dict]:
    return [{"word": t.word, "start": t.start, "end": t.end} for t in timings]


def timings_from_json(items) -> list[WordTiming]:
    return [WordTiming(t["word"], float(t["start"]), float(t["end"])) for t in items]
