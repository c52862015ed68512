"""Corpus ingestion: cleaning, tokenization, vocabularies, and windowed samples.

A corpus on disk is a directory with one subdirectory per proficiency level
(``elemental``, ``pre_intermediate``, ``upper_intermediate``), each holding
UTF-8 ``.txt`` files with one sentence per line.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import InvalidConfig, InvalidLevel

PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"
PAD_ID = 0
OOV_ID = 1


class Level(str, Enum):
    """Proficiency tier of a sentence, model, or request."""

    ELEMENTAL = "elemental"
    PRE_INTERMEDIATE = "pre_intermediate"
    UPPER_INTERMEDIATE = "upper_intermediate"

    @classmethod
    def parse(cls, name: str) -> "Level":
        try:
            return cls(name)
        except ValueError:
            raise InvalidLevel(name) from None


@dataclass(frozen=True)
class Sentence:
    """One line of corpus text tagged with its level."""

    text: str
    level: Level


class _PunctTable(dict):
    """Lazy str.translate table deleting every Unicode punctuation character."""

    def __missing__(self, codepoint):
        keep = not unicodedata.category(chr(codepoint)).startswith("P")
        value = codepoint if keep else None
        self[codepoint] = value
        return value


_PUNCT_TABLE = _PunctTable()


def clean_and_tokenize(text: str) -> list[str]:
    """Lowercase, strip all punctuation, and split on whitespace runs.

    Apostrophes are deleted rather than split, so "don't" becomes "dont".
    Empty input yields an empty list; no token is ever empty.
    """
    return text.lower().translate(_PUNCT_TABLE).split()


@dataclass
class Vocabulary:
    """Bidirectional word/id mapping with reserved pad and oov slots.

    ``words[0]`` is always the pad token and ``words[1]`` the oov token; all
    ids are dense in ``0..len(words)-1``.
    """

    words: list[str]
    index: dict[str, int] = field(init=False, repr=False)
    pad_id: int = PAD_ID
    oov_id: int = OOV_ID

    def __post_init__(self):
        if self.words[:2] != [PAD_TOKEN, OOV_TOKEN]:
            raise InvalidConfig("vocabulary must start with the pad and oov tokens")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise InvalidConfig("vocabulary contains duplicate words")

    def __len__(self) -> int:
        return len(self.words)

    def encode(self, tokens: list[str]) -> list[int]:
        """Map tokens to ids; unknown tokens map to the oov id."""
        index = self.index
        return [index.get(t, OOV_ID) for t in tokens]

    def lookup(self, word_id: int) -> str:
        return self.words[word_id]

    def decode(self, ids: list[int]) -> list[str]:
        return [self.words[i] for i in ids]


@dataclass(frozen=True)
class WindowSample:
    """A fixed-length context of word ids and the id of the word that follows."""

    context: tuple[int, ...]
    target: int

    def __post_init__(self):
        if self.target == PAD_ID:
            raise InvalidConfig("window target must not be the pad id")


@dataclass
class DatasetSplit:
    """Disjoint train/dev/test partitions of windowed samples."""

    train: list[WindowSample]
    dev: list[WindowSample]
    test: list[WindowSample]


def load_corpus(root_path: str | Path) -> list[Sentence]:
    """Read every level subdirectory under ``root_path`` into tagged sentences.

    Each non-blank line of each ``.txt`` file becomes one Sentence. Lines that
    clean to nothing (pure punctuation) are skipped along with blank ones.
    Subdirectories that are not valid level names raise InvalidLevel.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root not found: {root}")
    sentences: list[Sentence] = []
    for subdir in sorted(p for p in root.iterdir() if p.is_dir()):
        level = Level.parse(subdir.name)
        for txt in sorted(subdir.glob("*.txt")):
            for line in txt.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if line and clean_and_tokenize(line):
                    sentences.append(Sentence(text=line, level=level))
    return sentences


def build_vocabulary(sentences: list[Sentence], max_size: int) -> Vocabulary:
    """Keep the ``max_size - 2`` most frequent tokens after the reserved slots.

    Frequency ties are broken lexicographically ascending so the result is a
    pure function of the corpus.
    """
    if max_size < 3:
        raise InvalidConfig(f"max_size must be >= 3, got {max_size}")
    counts: Counter[str] = Counter()
    for sentence in sentences:
        counts.update(clean_and_tokenize(sentence.text))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = [w for w, _ in ranked[: max_size - 2]]
    return Vocabulary(words=[PAD_TOKEN, OOV_TOKEN] + kept)


def make_windows(sentence_ids: list[int], window: int) -> list[WindowSample]:
    """Slide a fixed-length context over a sentence, one sample per target.

    Every position from the second token on becomes a target; its context is
    the last ``window`` ids of the preceding prefix, left-padded with the pad
    id. A sentence of n tokens therefore yields n - 1 samples.
    """
    if window < 1:
        raise InvalidConfig(f"window must be >= 1, got {window}")
    samples = []
    for i in range(1, len(sentence_ids)):
        prefix = sentence_ids[max(0, i - window) : i]
        context = (PAD_ID,) * (window - len(prefix)) + tuple(prefix)
        samples.append(WindowSample(context=context, target=sentence_ids[i]))
    return samples


def split_dataset(samples: list[WindowSample], seed: int) -> DatasetSplit:
    """Deterministically shuffle and partition samples 80/20 with a dev carve.

    The test share is floor(20%) of the whole; the dev share is floor(10%) of
    the remaining train portion. The same seed always produces the same
    member sets.
    """
    if len(samples) < 10:
        raise InvalidConfig(f"need at least 10 samples to split, got {len(samples)}")
    order = np.random.Generator(np.random.PCG64(seed)).permutation(len(samples))
    shuffled = [samples[i] for i in order]
    n_test = len(samples) * 20 // 100
    n_dev = (len(samples) - n_test) * 10 // 100
    return DatasetSplit(
        test=shuffled[:n_test],
        dev=shuffled[n_test : n_test + n_dev],
        train=shuffled[n_test + n_dev :],
    )


def sentences_to_windows(
    sentences: list[Sentence], vocab: Vocabulary, window: int
) -> list[WindowSample]:
    """Tokenize, encode, and window every sentence in order."""
    samples: list[WindowSample] = []
    for sentence in sentences:
        ids = vocab.encode(clean_and_tokenize(sentence.text))
        samples.extend(make_windows(ids, window))
    return samples


def prepare_level_data(
    root_path: str | Path,
    level: Level,
    max_vocab: int,
    window: int,
    seed: int,
) -> tuple[Vocabulary, DatasetSplit]:
    """Full ingestion pipeline for one level: load, build vocab, window, split."""
    sentences = [s for s in load_corpus(root_path) if s.level == level]
    if not sentences:
        raise InvalidConfig(f"corpus has no sentences for level {level.value!r}")
    vocab = build_vocabulary(sentences, max_vocab)
    samples = sentences_to_windows(sentences, vocab, window)
    return vocab, split_dataset(samples, seed)


def samples_to_arrays(samples: list[WindowSample]) -> tuple[np.ndarray, np.ndarray]:
    """Stack samples into (contexts [N, W] int64, targets [N] int64) arrays."""
    if not samples:
        raise InvalidConfig("cannot convert an empty sample list")
    contexts = np.array([s.context for s in samples], dtype=np.int64)
    targets = np.array([s.target for s in samples], dtype=np.int64)
    return contexts, targets
