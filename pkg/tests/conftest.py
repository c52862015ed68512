"""Shared fixtures: tiny checkpoints, service apps, and a webhook stub."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from lexitutor.checkpoint import save_checkpoint
from lexitutor.corpus import Level, Vocabulary
from lexitutor.model import ModelConfig, build_model
from lexitutor.nn import make_rng


def tiny_checkpoint(path, level=Level.ELEMENTAL, seed=0):
    """An untrained but fully functional small model saved as <level>.ckpt."""
    vocab = Vocabulary(words=["<pad>", "<oov>", "a", "b", "c", "d", "e"])
    config = ModelConfig(preset="simple", vocab_size=7, embed_dim=4, hidden=5,
                         window=3, dropout_rate=0.0)
    model = build_model(config, make_rng(seed), vocab=vocab, level=level)
    save_checkpoint(model, path)
    return path


@pytest.fixture
def models_dir(tmp_path):
    d = tmp_path / "models"
    d.mkdir()
    tiny_checkpoint(d / "elemental.ckpt", Level.ELEMENTAL)
    tiny_checkpoint(d / "pre_intermediate.ckpt", Level.PRE_INTERMEDIATE, seed=1)
    return d


class _Recorder(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length)) if length else None
        status = self.server.next_status()
        self.server.requests.append({"path": self.path, "body": body, "status": status})
        self.send_response(status)
        self.end_headers()

    def log_message(self, *args):
        pass


class WebhookStub:
    """Records webhook POSTs; can be told to fail the first N attempts."""

    def __init__(self):
        self._server = HTTPServer(("127.0.0.1", 0), _Recorder)
        self._server.requests = []
        self._fail_remaining = [0]
        self._server.next_status = self._next_status
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def _next_status(self):
        if self._fail_remaining[0] > 0:
            self._fail_remaining[0] -= 1
            return 500
        return 200

    def fail_next(self, n):
        self._fail_remaining[0] = n

    @property
    def url(self):
        host, port = self._server.server_address
        return f"http://{host}:{port}/hook"

    @property
    def requests(self):
        return self._server.requests

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def webhook_stub():
    stub = WebhookStub()
    yield stub
    stub.close()
