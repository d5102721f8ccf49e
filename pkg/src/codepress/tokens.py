"""Token counting.

Every compression ratio in the toolkit divides a token count by a payload
size, so the numerator must come from exactly one place. This module is
that place: a TokenizerProfile is threaded through a run and all counts
(context, compressed output, chunk costs, budgets) use it.

Two profile kinds are supported:

- ``byte_estimator``: deterministic ``round_half_up(utf8_bytes / bytes_per_token)``.
  Self-contained, no vocabulary file needed.
- ``subword_vocab``: greedy longest-match against a plain-text vocabulary
  (one entry per line, UTF-8). At each position the longest matching entry
  is consumed; if nothing matches, a single character counts as one token.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path

DEFAULT_BYTES_PER_TOKEN = 3.5


class VocabError(ValueError):
    """Raised when a subword vocabulary file is missing or unusable."""


class TokenizerKind(str, Enum):
    BYTE_ESTIMATOR = "byte_estimator"
    SUBWORD_VOCAB = "subword_vocab"


@dataclass(frozen=True)
class TokenizerProfile:
    """Configuration for a token counter.

    Immutable and hashable so that a loaded vocabulary can be cached per
    profile and counting stays pure.
    """

    kind: TokenizerKind = TokenizerKind.BYTE_ESTIMATOR
    bytes_per_token: float = DEFAULT_BYTES_PER_TOKEN
    vocab_path: Path | None = None

    def __post_init__(self) -> None:
        if self.kind == TokenizerKind.BYTE_ESTIMATOR:
            if self.bytes_per_token <= 0:
                raise ValueError("bytes_per_token must be positive")
        elif self.kind == TokenizerKind.SUBWORD_VOCAB:
            if self.vocab_path is None:
                raise ValueError("subword_vocab profile requires vocab_path")
            object.__setattr__(self, "vocab_path", Path(self.vocab_path))


class _SubwordVocab:
    """Greedy longest-match tokenizer over a fixed vocabulary."""

    def __init__(self, entries: list[str]):
        self.entries = frozenset(e for e in entries if e)
        # Per-first-character maximum entry length bounds the scan window.
        self.max_len: dict[str, int] = {}
        for entry in self.entries:
            first = entry[0]
            if len(entry) > self.max_len.get(first, 0):
                self.max_len[first] = len(entry)

    def spans(self, text: str) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            limit = min(self.max_len.get(text[pos], 1), n - pos)
            length = 1
            for cand in range(limit, 0, -1):
                if text[pos : pos + cand] in self.entries:
                    length = cand
                    break
            out.append((pos, pos + length))
            pos += length
        return out


@lru_cache(maxsize=8)
def _load_vocab(path: Path) -> _SubwordVocab:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise VocabError(f"cannot read vocabulary file {path}: {exc}") from exc
    entries = [line for line in raw.splitlines() if line]
    if not entries:
        raise VocabError(f"vocabulary file {path} contains no entries")
    return _SubwordVocab(entries)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def count_tokens(text: str, profile: TokenizerProfile) -> int:
    """Deterministic token count of ``text`` under ``profile``.

    Empty text counts as 0. The byte estimator rounds half up on the final
    division so counts are reproducible across implementations.
    """
    if not text:
        return 0
    if profile.kind == TokenizerKind.BYTE_ESTIMATOR:
        return _round_half_up(len(text.encode("utf-8")) / profile.bytes_per_token)
    return len(_load_vocab(profile.vocab_path).spans(text))


def token_spans(text: str, profile: TokenizerProfile) -> list[tuple[int, int]]:
    """Segment ``text`` into per-token character spans.

    Used by chunkers that address text by token offset. For subword
    profiles the segmentation is the longest-match tokenization, so
    ``len(token_spans(t)) == count_tokens(t)``. For the byte estimator the
    segmentation accumulates UTF-8 bytes and cuts a span whenever
    ``bytes_per_token`` bytes have been consumed, yielding
    ``ceil(bytes / bytes_per_token)`` spans; this can exceed
    ``count_tokens`` by one when the final fragment rounds down.
    """
    if not text:
        return []
    if profile.kind == TokenizerKind.SUBWORD_VOCAB:
        return _load_vocab(profile.vocab_path).spans(text)

    spans: list[tuple[int, int]] = []
    start = 0
    acc = 0.0
    threshold = profile.bytes_per_token
    for i, ch in enumerate(text):
        acc += len(ch.encode("utf-8"))
        if acc >= threshold:
            spans.append((start, i + 1))
            start = i + 1
            acc -= threshold
    if start < len(text):
        spans.append((start, len(text)))
    return spans
