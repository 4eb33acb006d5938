"""Turing-style test session: mix real and synthetic erroneous sentences,
collect human judgments over HTTP, score precision/recall/F1 on close.

The answer key lives server-side only and is never serialized to clients;
the browser UI is a thin client over four JSON endpoints:

* ``GET  /api/session``  -> {"items": [{"id", "text"}, ...]}
* ``POST /api/judgment`` {"id", "synthetic": bool} -> 204 (last write wins)
* ``POST /api/close``    -> DetectionMetrics JSON (also written to disk)
* ``GET  /api/results``  -> metrics after close, 409 before
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import ConfigError
from .metrics import score_turing
from .rng import Xoshiro256, mix


@dataclass
class TuringSession:
    """Shuffled items, server-side answer key, and collected judgments."""

    items: list
    key: dict
    judgments: dict = field(default_factory=dict)
    closed: bool = False
    metrics: object = None

    def judge(self, item_id, says_synthetic):
        if item_id not in self.key:
            raise KeyError(f"unknown item {item_id!r}")
        self.judgments[item_id] = bool(says_synthetic)

    def close(self):
        self.metrics = score_turing(list(self.judgments.items()), self.key.items())
        self.closed = True
        return self.metrics


def build_session(real_texts, synthetic_texts, n=50, seed=0):
    """Mix the first n real and first n synthetic sentences, deterministically
    shuffled under the seed. Item ids carry no information about the key."""
    if len(real_texts) < n:
        raise ConfigError(f"need {n} real sentences, found {len(real_texts)}")
    if len(synthetic_texts) < n:
        raise ConfigError(
            f"need {n} synthetic sentences, found {len(synthetic_texts)}"
        )
    entries = [(text, False) for text in real_texts[:n]]
    entries += [(text, True) for text in synthetic_texts[:n]]
    rng = Xoshiro256(mix(seed, 0x7E57))
    rng.shuffle(entries)
    items = []
    key = {}
    for pos, (text, is_synthetic) in enumerate(entries):
        item_id = f"item-{pos:04d}"
        items.append({"id": item_id, "text": text})
        key[item_id] = is_synthetic
    return TuringSession(items, key)


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>Turing session</title></head>
<body><h1>Turing session server</h1>
<p>No UI assets were provided (--ui). The JSON API is live:</p>
<ul><li>GET /api/session</li><li>POST /api/judgment</li>
<li>POST /api/close</li><li>GET /api/results</li></ul>
</body></html>"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def _send(self, status, body, content_type="application/json"):
        payload = body.encode("utf-8") if isinstance(body, str) else body
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status, obj):
        self._send(status, json.dumps(obj, sort_keys=True))

    def _read_body(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        try:
            return json.loads(raw) if raw else {}
        except json.JSONDecodeError:
            return None

    def do_GET(self):
        server = self.server
        if self.path == "/api/session":
            with server.lock:
                items = [dict(item) for item in server.session.items]
            self._send_json(200, {"items": items})
        elif self.path == "/api/results":
            with server.lock:
                if not server.session.closed:
                    self._send_json(409, {"error": "session not closed"})
                    return
                self._send_json(200, server.session.metrics.to_dict())
        else:
            self._serve_static()

    def do_POST(self):
        server = self.server
        if self.path == "/api/judgment":
            body = self._read_body()
            if body is None or "id" not in body or "synthetic" not in body:
                self._send_json(400, {"error": "expected {id, synthetic}"})
                return
            with server.lock:
                try:
                    server.session.judge(body["id"], body["synthetic"])
                except KeyError:
                    self._send_json(404, {"error": f"unknown id {body['id']!r}"})
                    return
            self.send_response(204)
            self.send_header("Content-Length", "0")
            self.end_headers()
        elif self.path == "/api/close":
            with server.lock:
                metrics = server.session.close()
                if server.out_path:
                    Path(server.out_path).write_text(
                        metrics.to_json() + "\n", encoding="utf-8"
                    )
            self._send_json(200, metrics.to_dict())
        else:
            self._send_json(404, {"error": "not found"})

    def _serve_static(self):
        path = self.path.split("?", 1)[0]
        if path == "/":
            path = "/index.html"
        if server_dir := self.server.ui_dir:
            root = Path(server_dir).resolve()
            target = (root / path.lstrip("/")).resolve()
            if root in target.parents or target == root:
                if target.is_file():
                    ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
                    self._send(200, target.read_bytes(), ctype)
                    return
            self._send_json(404, {"error": "not found"})
            return
        if path == "/index.html":
            self._send(200, _FALLBACK_PAGE, "text/html; charset=utf-8")
        else:
            self._send_json(404, {"error": "not found"})

    def log_message(self, fmt, *args):
        pass


def make_server(session, host="127.0.0.1", port=0, out_path=None, ui_dir=None):
    """ThreadingHTTPServer over the session; handlers serialize state access."""
    server = ThreadingHTTPServer((host, port), _Handler)
    server.session = session
    server.lock = threading.Lock()
    server.out_path = out_path
    server.ui_dir = ui_dir
    return server
