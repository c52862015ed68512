"""A level-aware next-word tutor: corpus tooling, recurrent language models,
text generation, and an HTTP practice service."""

__version__ = "0.1.0"

from .corpus import (
    DatasetSplit,
    Level,
    Sentence,
    Vocabulary,
    WindowSample,
    build_vocabulary,
    clean_and_tokenize,
    load_corpus,
    make_windows,
    prepare_level_data,
    split_dataset,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .generation import GenerationRequest, GenerationResult, apply_temperature, generate
from .model import LanguageModel, ModelConfig, build_model, count_parameters
from .training import TrainConfig, TrainReport, evaluate, export_metrics, train

__all__ = [
    "Level",
    "Sentence",
    "Vocabulary",
    "WindowSample",
    "DatasetSplit",
    "clean_and_tokenize",
    "load_corpus",
    "build_vocabulary",
    "make_windows",
    "split_dataset",
    "prepare_level_data",
    "ModelConfig",
    "LanguageModel",
    "build_model",
    "count_parameters",
    "save_checkpoint",
    "load_checkpoint",
    "TrainConfig",
    "TrainReport",
    "train",
    "evaluate",
    "export_metrics",
    "GenerationRequest",
    "GenerationResult",
    "generate",
    "apply_temperature",
]
