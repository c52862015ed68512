"""Binary model checkpoints.

Layout: 7 magic bytes ``LMCKPT1``, a little-endian u32 metadata byte length,
UTF-8 JSON metadata (config, level, vocabulary word list, and an ordered
layer manifest of names and shapes), then the payload: every parameter
array concatenated as little-endian float32 in manifest order. Saving the
same model twice produces byte-identical files.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .corpus import Level, Vocabulary
from .errors import CorruptCheckpoint, FormatError, InvalidConfig
from .model import LanguageModel, ModelConfig, build_model
from .nn import make_rng

MAGIC = b"LMCKPT1"


def save_checkpoint(model: LanguageModel, path: str | Path) -> None:
    if model.vocab is None:
        raise InvalidConfig("cannot checkpoint a model without a vocabulary")
    params = model.params()
    meta = {
        "format_version": 1,
        "config": model.config.to_dict(),
        "level": model.level.value if model.level is not None else None,
        "vocab": model.vocab.words,
        "manifest": [{"name": p.name, "shape": list(p.shape)} for p in params],
    }
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )
    payload = b"".join(np.ascontiguousarray(p.value, dtype="<f4").tobytes() for p in params)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(meta_bytes)))
        fh.write(meta_bytes)
        fh.write(payload)


def load_checkpoint(path: str | Path) -> LanguageModel:
    path = Path(path)
    blob = path.read_bytes()
    if blob[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path} does not start with the {MAGIC!r} magic")
    offset = len(MAGIC)
    if len(blob) < offset + 4:
        raise CorruptCheckpoint(f"{path} is truncated before the metadata length")
    (meta_len,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    if len(blob) < offset + meta_len:
        raise CorruptCheckpoint(f"{path} is truncated inside the metadata")
    try:
        meta = json.loads(blob[offset : offset + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptCheckpoint(f"{path} holds unparseable metadata: {exc}") from None
    offset += meta_len

    config = ModelConfig.from_dict(meta["config"])
    vocab = Vocabulary(words=list(meta["vocab"]))
    level = Level(meta["level"]) if meta.get("level") else None
    manifest = meta["manifest"]

    expected = sum(int(np.prod(entry["shape"])) for entry in manifest) * 4
    payload = blob[offset:]
    if len(payload) != expected:
        raise CorruptCheckpoint(
            f"{path}: payload holds {len(payload)} bytes but the manifest implies {expected}"
        )

    model = build_model(config, make_rng(0), vocab=vocab, level=level)
    params = model.params()
    if len(params) != len(manifest):
        raise CorruptCheckpoint(
            f"{path}: manifest lists {len(manifest)} arrays, model has {len(params)}"
        )
    pos = 0
    for p, entry in zip(params, manifest):
        if list(p.shape) != list(entry["shape"]) or p.name != entry["name"]:
            raise CorruptCheckpoint(
                f"{path}: manifest entry {entry['name']}{entry['shape']} does not match "
                f"model layer {p.name}{list(p.shape)}"
            )
        n = p.size * 4
        arr = np.frombuffer(payload, dtype="<f4", count=p.size, offset=pos)
        p.value[...] = arr.reshape(p.shape)
        pos += n
    model.model_id = path.stem
    return model
