"""Checkpoint format: bit-exact round trips and corruption detection."""

import struct

import numpy as np
import numpy.testing as npt
import pytest

from lexitutor.checkpoint import MAGIC, load_checkpoint, save_checkpoint
from lexitutor.corpus import Level, Vocabulary
from lexitutor.errors import CorruptCheckpoint, FormatError, InvalidConfig
from lexitutor.model import ModelConfig, build_model
from lexitutor.nn import make_rng


@pytest.fixture
def model():
    vocab = Vocabulary(words=["<pad>", "<oov>"] + [f"w{i}" for i in range(7)])
    config = ModelConfig(preset="stacked", vocab_size=9, embed_dim=4, hidden=5,
                         window=3, dropout_rate=0.4)
    return build_model(config, make_rng(5), vocab=vocab, level=Level.ELEMENTAL)


def test_round_trip_bit_exact(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    for a, b in zip(model.params(), loaded.params()):
        assert a.name == b.name
        npt.assert_array_equal(a.value, b.value)
    assert loaded.config == model.config
    assert loaded.vocab.words == model.vocab.words
    assert loaded.level is Level.ELEMENTAL
    assert loaded.model_id == "m"


def test_save_load_save_byte_identical(model, tmp_path):
    p1, p2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    save_checkpoint(model, p1)
    save_checkpoint(load_checkpoint(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_predictions_preserved(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    context = np.array([1, 2, 3])
    npt.assert_array_equal(
        model.predict_next_distribution(context),
        loaded.predict_next_distribution(context),
    )


def test_bad_magic(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    data = bytearray(path.read_bytes())
    data[:7] = b"NOTMINE"
    path.write_bytes(bytes(data))
    with pytest.raises(FormatError):
        load_checkpoint(path)


def test_truncated_payload(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    blob = path.read_bytes()
    path.write_bytes(blob[:-17])
    with pytest.raises(CorruptCheckpoint):
        load_checkpoint(path)


def test_extended_payload(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    path.write_bytes(path.read_bytes() + b"\x00" * 8)
    with pytest.raises(CorruptCheckpoint):
        load_checkpoint(path)


def test_garbage_metadata(model, tmp_path):
    path = tmp_path / "m.ckpt"
    junk = b"\xff" * 20
    path.write_bytes(MAGIC + struct.pack("<I", len(junk)) + junk)
    with pytest.raises(CorruptCheckpoint):
        load_checkpoint(path)


def test_truncated_before_metadata(tmp_path):
    path = tmp_path / "m.ckpt"
    path.write_bytes(MAGIC + b"\x10")
    with pytest.raises(CorruptCheckpoint):
        load_checkpoint(path)


def test_vocabless_model_rejected(tmp_path):
    config = ModelConfig(preset="simple", vocab_size=5, embed_dim=2, hidden=2, window=2)
    model = build_model(config, make_rng(0))
    with pytest.raises(InvalidConfig):
        save_checkpoint(model, tmp_path / "m.ckpt")


def test_payload_is_little_endian_float32(model, tmp_path):
    path = tmp_path / "m.ckpt"
    save_checkpoint(model, path)
    blob = path.read_bytes()
    (meta_len,) = struct.unpack_from("<I", blob, 7)
    payload = blob[7 + 4 + meta_len :]
    first = model.params()[0]
    decoded = np.frombuffer(payload, dtype="<f4", count=first.size)
    npt.assert_array_equal(decoded.reshape(first.shape), first.value)
