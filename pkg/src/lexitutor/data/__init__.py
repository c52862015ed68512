"""Bundled corpora: a small hand-written sample and a generated synthetic set."""

from importlib.resources import files
from pathlib import Path


def corpus_path(name: str) -> Path:
    """Filesystem path of a bundled corpus: 'sample_corpus' or 'synthetic_corpus'."""
    path = Path(str(files(__package__) / name))
    if not path.is_dir():
        raise FileNotFoundError(f"no bundled corpus named {name!r}")
    return path
