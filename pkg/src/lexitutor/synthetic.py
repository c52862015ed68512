"""Deterministic synthetic corpora for tests and benchmarks.

Two flavors:

* a cyclic corpus — one long sentence repeating a short word cycle, where
  every context has exactly one correct successor (memorization target);
* a templated three-level corpus — each level holds fixed sentence patterns
  whose first word (a unique name) determines the rest of the sentence, so
  next-word prediction is fully learnable while the text still reads like
  simple English.

Run ``python -m lexitutor.synthetic OUT_DIR`` to regenerate the bundled copy.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import Level

NAMES = [
    "anna", "boris", "carla", "david", "elena", "felix", "grace", "henry",
    "irene", "jonas", "karim", "laura", "marco", "nadia", "oscar", "paula",
    "quentin", "rosa", "samuel", "tessa", "uri", "vera", "walter", "xenia",
    "yusuf", "zoe", "amir", "bianca", "cedric", "dalia", "edgar", "farah",
    "gustav", "hana", "ivan", "julia",
]
VERBS = ["feeds", "paints", "watches", "cleans", "carries", "repairs", "draws", "guards"]
ADJECTIVES = ["red", "small", "quiet", "bright", "heavy", "round", "soft", "narrow"]
NOUNS = [
    "cat", "table", "garden", "bicycle", "window", "basket", "mirror",
    "lantern", "carpet", "kettle", "ladder", "violin",
]
TIMES = ["today", "tonight", "early", "late", "daily", "weekly", "often", "rarely"]
ADVERBS = ["carefully", "quickly", "silently", "proudly", "calmly", "eagerly", "slowly", "gently"]
PREPOSITIONS = ["near", "behind", "beside", "under", "above", "inside"]
PLACES = [
    "station", "harbor", "market", "library", "bridge", "museum",
    "bakery", "school", "theater", "garage",
]

PATTERNS_PER_LEVEL = 36


def cyclic_sentence(words=("a", "b", "c", "d"), repeats=200) -> str:
    """One long sentence repeating a word cycle end to end."""
    return " ".join(list(words) * repeats)


def write_cyclic_corpus(root: str | Path, words=("a", "b", "c", "d"), repeats=200,
                        level: Level = Level.ELEMENTAL) -> Path:
    root = Path(root)
    level_dir = root / level.value
    level_dir.mkdir(parents=True, exist_ok=True)
    (level_dir / "cyclic.txt").write_text(cyclic_sentence(words, repeats) + "\n", encoding="utf-8")
    return root


def pattern_sentence(level: Level, i: int) -> str:
    """The i-th fixed sentence pattern of a level.

    The leading name is unique per pattern, so with a window that spans the
    sentence, every context determines its next word exactly. Slot choices
    are offset differently per level so the three corpora differ.
    """
    name = NAMES[i % len(NAMES)]
    if level is Level.ELEMENTAL:
        return (
            f"{name} {VERBS[i % 8]} the {NOUNS[(i * 5 + 1) % 12]}"
        )
    if level is Level.PRE_INTERMEDIATE:
        return (
            f"{name} {VERBS[(i * 3 + 2) % 8]} the {ADJECTIVES[i % 8]} "
            f"{NOUNS[(i * 7 + 3) % 12]} {TIMES[(i * 5 + 1) % 8]}"
        )
    return (
        f"{name} {ADVERBS[(i * 3 + 1) % 8]} {VERBS[(i * 5 + 4) % 8]} the "
        f"{ADJECTIVES[(i * 7 + 2) % 8]} {NOUNS[(i * 11 + 5) % 12]} "
        f"{PREPOSITIONS[i % 6]} the {PLACES[(i * 3 + 2) % 10]}"
    )


def level_sentences(level: Level, repetitions: int, seed: int = 7) -> list[str]:
    """All patterns of a level, each repeated, in a seed-shuffled order."""
    lines = [pattern_sentence(level, i) for i in range(PATTERNS_PER_LEVEL)] * repetitions
    order = np.random.Generator(np.random.PCG64(seed)).permutation(len(lines))
    return [lines[i] for i in order]


def write_synthetic_corpus(root: str | Path, seed: int = 7) -> Path:
    """Write the three-level corpus. Repetition counts keep every level above
    2,000 windowed samples."""
    repetitions = {
        Level.ELEMENTAL: 19,          # 4-token sentences, 3 windows each
        Level.PRE_INTERMEDIATE: 12,   # 6-token sentences, 5 windows each
        Level.UPPER_INTERMEDIATE: 9,  # 9-token sentences, 8 windows each
    }
    root = Path(root)
    for offset, (level, reps) in enumerate(repetitions.items()):
        level_dir = root / level.value
        level_dir.mkdir(parents=True, exist_ok=True)
        lines = level_sentences(level, reps, seed=seed + offset)
        (level_dir / "sentences.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return root


if __name__ == "__main__":
    import sys

    out = sys.argv[1] if len(sys.argv) > 1 else "synthetic_corpus"
    print(f"writing synthetic corpus to {write_synthetic_corpus(out)}")
