"""Mini-batch training loop, evaluation, and metric export.

Everything is deterministic given the config seed: the shuffle order and the
dropout masks come from generators derived from it. Epoch metrics are
measured at epoch end with dropout disabled, on both the train and dev sets.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import DatasetSplit, WindowSample, samples_to_arrays
from .errors import InvalidConfig
from .model import LanguageModel
from .nn import Adam, cross_entropy_batch, softmax_ce_grad, spawn_rngs

EVAL_BATCH = 512


@dataclass
class TrainConfig:
    epochs: int = 20
    batch_size: int = 150
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    checkpoint_every: int = 0
    checkpoint_path: str | Path | None = None

    def validate(self):
        if self.epochs < 1:
            raise InvalidConfig(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1, got {self.batch_size}")
        return self


@dataclass
class EpochMetrics:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float | None
    val_accuracy: float | None
    wall_time: float


@dataclass
class TrainReport:
    epochs: list[EpochMetrics] = field(default_factory=list)
    best_epoch: int = 0
    test_loss: float | None = None
    test_accuracy: float | None = None


def evaluate(model: LanguageModel, samples: list[WindowSample]) -> tuple[float, float]:
    """Mean cross-entropy and top-1 accuracy with dropout off.

    Argmax ties resolve to the lowest word id, so accuracy is well defined
    even for degenerate models.
    """
    if not samples:
        raise InvalidConfig("cannot evaluate on an empty sample list")
    contexts, targets = samples_to_arrays(samples)
    total_loss = 0.0
    hits = 0
    for start in range(0, len(samples), EVAL_BATCH):
        ctx = contexts[start : start + EVAL_BATCH]
        tgt = targets[start : start + EVAL_BATCH]
        probs = model.forward(ctx, train=False)
        total_loss += cross_entropy_batch(probs, tgt) * len(tgt)
        hits += int((probs.argmax(axis=1) == tgt).sum())
    return total_loss / len(samples), hits / len(samples)


def train(model: LanguageModel, split: DatasetSplit, config: TrainConfig) -> TrainReport:
    """Run the full loop and return per-epoch metrics plus final test metrics."""
    config.validate()
    if not split.train:
        raise InvalidConfig("training requires a non-empty train set")
    shuffle_rng, dropout_rng = spawn_rngs(config.seed, 2)
    contexts, targets = samples_to_arrays(split.train)
    n = len(split.train)
    optimizer = Adam(model.params(), lr=config.lr, beta1=config.beta1,
                     beta2=config.beta2, eps=config.eps)

    report = TrainReport()
    for epoch in range(1, config.epochs + 1):
        started = time.perf_counter()
        order = shuffle_rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            optimizer.zero_grad()
            probs = model.forward(contexts[batch], train=True, rng=dropout_rng)
            model.backward(softmax_ce_grad(probs, targets[batch]).astype(probs.dtype))
            optimizer.step()

        train_loss, train_acc = evaluate(model, split.train)
        val_loss, val_acc = evaluate(model, split.dev) if split.dev else (None, None)
        report.epochs.append(
            EpochMetrics(
                epoch=epoch,
                train_loss=train_loss,
                train_accuracy=train_acc,
                val_loss=val_loss,
                val_accuracy=val_acc,
                wall_time=time.perf_counter() - started,
            )
        )
        if config.checkpoint_every and config.checkpoint_path and epoch % config.checkpoint_every == 0:
            from .checkpoint import save_checkpoint

            save_checkpoint(model, config.checkpoint_path)

    key = (lambda m: m.val_accuracy) if split.dev else (lambda m: m.train_accuracy)
    report.best_epoch = max(report.epochs, key=key).epoch if report.epochs else 0
    if split.test:
        report.test_loss, report.test_accuracy = evaluate(model, split.test)
    return report


def export_metrics(report: TrainReport, path: str | Path) -> None:
    """Write one CSV row per epoch; floats use repr so they re-parse exactly."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "train_acc", "val_loss", "val_acc", "seconds"])
        for m in report.epochs:
            writer.writerow(
                [
                    m.epoch,
                    repr(m.train_loss),
                    repr(m.train_accuracy),
                    "" if m.val_loss is None else repr(m.val_loss),
                    "" if m.val_accuracy is None else repr(m.val_accuracy),
                    repr(m.wall_time),
                ]
            )
