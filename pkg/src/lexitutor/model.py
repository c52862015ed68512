"""Model presets: assembly, parameter counting, and next-word prediction.

Three topologies are provided. ``simple`` is a single recurrent layer into
the softmax head. ``stacked`` (the default) inserts dropout, a second
recurrent layer, and a ReLU layer before the head. ``encdec`` encodes the
context window, optionally pools it with dot-product attention, and runs a
single decoder step.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .corpus import Level, Vocabulary
from .errors import InvalidConfig, ShapeError
from .nn import (
    BiLstm,
    Dense,
    DotAttention,
    Dropout,
    Embedding,
    Lstm,
    softmax,
)

PRESETS = ("simple", "stacked", "encdec")


@dataclass
class ModelConfig:
    preset: str
    vocab_size: int
    embed_dim: int = 70
    hidden: int = 100
    window: int = 10
    dropout_rate: float = 0.6
    bidirectional_first_layer: bool = False
    use_attention: bool = False

    def validate(self):
        if self.preset not in PRESETS:
            raise InvalidConfig(f"unknown preset {self.preset!r}, expected one of {PRESETS}")
        if self.vocab_size < 3:
            raise InvalidConfig(f"vocab_size must be >= 3, got {self.vocab_size}")
        if min(self.embed_dim, self.hidden, self.window) < 1:
            raise InvalidConfig("embed_dim, hidden, and window must all be >= 1")
        if not 0 <= self.dropout_rate < 1:
            raise InvalidConfig(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.use_attention and self.preset != "encdec":
            raise InvalidConfig("use_attention is only valid with the encdec preset")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data).validate()


class LanguageModel:
    """A preset layer stack with its config and (optionally) its vocabulary."""

    def __init__(self, config: ModelConfig, layers: dict, vocab: Vocabulary | None,
                 level: Level | None = None, model_id: str | None = None):
        self.config = config
        self.layers = layers
        self.vocab = vocab
        self.level = level
        self.model_id = model_id or config.preset

    def params(self):
        out = []
        for layer in self.layers.values():
            out.extend(layer.params)
        return out

    def zero_grads(self):
        for p in self.params():
            p.zero_grad()

    def forward(self, ids, train=False, rng=None):
        """ids: [B, T] word ids -> probability rows [B, V]."""
        logits = self.forward_logits(ids, train=train, rng=rng)
        return softmax(logits)

    def forward_logits(self, ids, train=False, rng=None):
        ids = np.asarray(ids)
        if ids.ndim != 2:
            raise ShapeError(f"expected [B, T] ids, got shape {ids.shape}")
        L = self.layers
        x = L["embedding"].forward(ids)
        if self.config.preset == "simple":
            h = L["rnn1"].forward(x)
            return L["output"].forward(h)
        if self.config.preset == "stacked":
            s = L["rnn1"].forward(x)
            s = L["dropout"].forward(s, train=train, rng=rng)
            h = L["rnn2"].forward(s)
            h = L["dense1"].forward(h)
            return L["output"].forward(h)
        # encdec
        enc_seq = L["encoder"].forward(x)
        self._enc_shape = enc_seq.shape
        if self.config.use_attention:
            query = enc_seq[:, -1]
            ctx = L["attention"].forward(query, enc_seq, enc_seq)
        else:
            ctx = enc_seq[:, -1]
        h = L["decoder"].forward(np.ascontiguousarray(ctx[:, None, :]))
        return L["output"].forward(h)

    def backward(self, dlogits):
        """Backpropagate a gradient on the logits through the whole stack."""
        L = self.layers
        if self.config.preset == "simple":
            dh = L["output"].backward(dlogits)
            dx = L["rnn1"].backward(dh)
        elif self.config.preset == "stacked":
            dh = L["output"].backward(dlogits)
            dh = L["dense1"].backward(dh)
            ds = L["rnn2"].backward(dh)
            ds = L["dropout"].backward(ds)
            dx = L["rnn1"].backward(ds)
        else:
            dh = L["output"].backward(dlogits)
            dctx = L["decoder"].backward(dh)[:, 0, :]
            denc = np.zeros(self._enc_shape, dtype=dctx.dtype)
            if self.config.use_attention:
                dquery, dkeys, dvalues = L["attention"].backward(dctx)
                denc += dkeys + dvalues
                denc[:, -1] += dquery
            else:
                denc[:, -1] += dctx
            dx = L["encoder"].backward(denc)
        L["embedding"].backward(dx)

    def predict_next_distribution(self, context) -> np.ndarray:
        """Probability vector over the vocabulary for one context window."""
        context = np.asarray(context)
        if context.shape != (self.config.window,):
            raise ShapeError(
                f"context must have exactly {self.config.window} ids, got shape {context.shape}"
            )
        return self.forward(context[None, :], train=False)[0]


def build_model(config: ModelConfig, rng, vocab: Vocabulary | None = None,
                level: Level | None = None, dtype=np.float32) -> LanguageModel:
    """Instantiate a preset with deterministic Glorot initialization."""
    config.validate()
    if vocab is not None and len(vocab) != config.vocab_size:
        raise InvalidConfig(
            f"vocabulary has {len(vocab)} words but config.vocab_size is {config.vocab_size}"
        )
    V, d, H = config.vocab_size, config.embed_dim, config.hidden
    bidi = config.bidirectional_first_layer
    first_out = 2 * H if bidi else H

    def rnn(input_dim, return_sequences, name):
        cls = BiLstm if bidi else Lstm
        return cls(input_dim, H, rng, dtype, return_sequences=return_sequences, name=name)

    layers: dict = {"embedding": Embedding(V, d, rng, dtype)}
    if config.preset == "simple":
        layers["rnn1"] = rnn(d, False, "lstm1")
        layers["output"] = Dense(first_out, V, rng, dtype, name="output")
    elif config.preset == "stacked":
        layers["rnn1"] = rnn(d, True, "lstm1")
        layers["dropout"] = Dropout(config.dropout_rate)
        layers["rnn2"] = Lstm(first_out, H, rng, dtype, return_sequences=False, name="lstm2")
        layers["dense1"] = Dense(H, H, rng, dtype, activation="relu", name="dense1")
        layers["output"] = Dense(H, V, rng, dtype, name="output")
    else:
        layers["encoder"] = rnn(d, True, "encoder")
        if config.use_attention:
            layers["attention"] = DotAttention()
        layers["decoder"] = Lstm(first_out, H, rng, dtype, return_sequences=False, name="decoder")
        layers["output"] = Dense(H, V, rng, dtype, name="output")
    return LanguageModel(config, layers, vocab, level=level)


def count_parameters(model: LanguageModel) -> int:
    """Total number of trainable scalar parameters."""
    return sum(p.size for p in model.params())
