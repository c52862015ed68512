"""Seed-to-continuation decoding by repeated next-word prediction.

The context window slides left as each generated word is appended, mirroring
how training windows are built. The pad and oov ids are masked out of every
selection so a learner never sees a reserved token.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Level, clean_and_tokenize
from .errors import EmptySeed, InvalidConfig, InvalidLevel
from .model import LanguageModel

STRATEGIES = ("greedy", "sample")


@dataclass
class GenerationRequest:
    seed_text: str
    level: Level
    num_words: int = 5
    strategy: str = "greedy"
    temperature: float = 1.0
    rng_seed: int | None = None

    def validate(self):
        if self.num_words < 1:
            raise InvalidConfig(f"num_words must be >= 1, got {self.num_words}")
        if self.strategy not in STRATEGIES:
            raise InvalidConfig(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not self.temperature > 0:
            raise InvalidConfig(f"temperature must be positive, got {self.temperature}")
        return self


@dataclass
class GenerationResult:
    generated_words: list[str]
    full_text: str
    level: Level
    model_id: str
    seed_tokens: list[str] = field(default_factory=list)


def apply_temperature(probs: np.ndarray, temperature: float) -> np.ndarray:
    """Sharpen (t < 1) or flatten (t > 1) a distribution: p_i^(1/t), renormalized."""
    if not temperature > 0:
        raise InvalidConfig(f"temperature must be positive, got {temperature}")
    if temperature == 1.0:
        return probs.copy()
    logs = np.log(np.asarray(probs, dtype=np.float64), where=probs > 0,
                  out=np.full(probs.shape, -np.inf))
    scaled = logs / temperature
    scaled -= scaled.max()
    out = np.exp(scaled)
    return out / out.sum()


def _mask_specials(probs, vocab):
    """Zero out pad/oov and renormalize; uniform fallback if nothing remains."""
    masked = np.asarray(probs, dtype=np.float64).copy()
    masked[vocab.pad_id] = 0.0
    masked[vocab.oov_id] = 0.0
    total = masked.sum()
    if total <= 0:
        masked[2:] = 1.0
        total = masked.sum()
    return masked / total


def generate(model: LanguageModel, request: GenerationRequest) -> GenerationResult:
    """Decode ``num_words`` continuations of the seed text."""
    request.validate()
    if not isinstance(request.level, Level):
        raise InvalidLevel(str(request.level))
    if model.level is not None and model.level != request.level:
        raise InvalidLevel(
            f"model is for level {model.level.value!r}, request asked for {request.level.value!r}"
        )
    if model.vocab is None:
        raise InvalidConfig("model has no vocabulary; load it from a checkpoint or attach one")

    seed_tokens = clean_and_tokenize(request.seed_text)
    if not seed_tokens:
        raise EmptySeed(f"seed text {request.seed_text!r} has no tokens after cleaning")

    vocab = model.vocab
    W = model.config.window
    ids = vocab.encode(seed_tokens)
    context = [vocab.pad_id] * max(0, W - len(ids)) + ids[-W:]
    rng = np.random.default_rng(request.rng_seed)

    generated: list[str] = []
    for _ in range(request.num_words):
        probs = _mask_specials(model.predict_next_distribution(np.array(context)), vocab)
        if request.strategy == "greedy":
            chosen = int(probs.argmax())
        else:
            chosen = int(rng.choice(len(probs), p=apply_temperature(probs, request.temperature)))
        generated.append(vocab.lookup(chosen))
        context = context[1:] + [chosen]

    return GenerationResult(
        generated_words=generated,
        full_text=" ".join(seed_tokens + generated),
        level=request.level,
        model_id=model.model_id,
        seed_tokens=seed_tokens,
    )
