"""Pluggable score providers: embedding similarity and output analysis.

Wire protocol (subprocess stdin/stdout or TCP), one request per frame:

    request:  "<len_a> <len_b>\\n" followed by len_a bytes of fragment A
              source and len_b bytes of fragment B source, both UTF-8
    response: one line, either a decimal score in [0, 1] or "MISSING"

A provider that is absent, times out, or misbehaves yields MISSING with a
recorded reason; it never aborts vector computation. In-process providers
are also supported: an embedding function returning one fixed-length
vector per fragment (scored by cosine, rescaled from [-1, 1] to [0, 1]),
or an execution function returning the matching-output ratio for a pair.
"""

from __future__ import annotations

import math
import select
import shlex
import socket
import subprocess
import time
from dataclasses import dataclass, field

from codesim.budget import Deadline
from codesim.measures.missing import MISSING

PROVIDER_KINDS = ("embedding", "execution")

_DEFAULT_TIMEOUT_S = 30.0


class ProviderError(Exception):
    pass


def rescaled_cosine(va, vb) -> float:
    """Cosine of two real vectors mapped from [-1, 1] onto [0, 1]."""
    if len(va) != len(vb):
        raise ProviderError(f"vector length mismatch: {len(va)} vs {len(vb)}")
    dot = sum(x * y for x, y in zip(va, vb))
    norm_a = math.sqrt(sum(x * x for x in va))
    norm_b = math.sqrt(sum(x * x for x in vb))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ProviderError("zero-length embedding vector")
    cos = max(-1.0, min(1.0, dot / (norm_a * norm_b)))
    return (cos + 1.0) / 2.0


class VectorEmbeddingClient:
    """In-process embedding provider: fn(source) -> sequence of floats."""

    def __init__(self, fn):
        self.fn = fn

    def score_pair(self, a_source: str, b_source: str, timeout_s: float | None) -> float:
        return rescaled_cosine(self.fn(a_source), self.fn(b_source))


class PairScoreClient:
    """In-process pair scorer: fn(a_source, b_source) -> score in [0, 1]."""

    def __init__(self, fn):
        self.fn = fn

    def score_pair(self, a_source: str, b_source: str, timeout_s: float | None) -> float:
        return float(self.fn(a_source, b_source))


def _encode_request(a_source: str, b_source: str) -> bytes:
    blob_a = a_source.encode("utf-8")
    blob_b = b_source.encode("utf-8")
    return b"%d %d\n" % (len(blob_a), len(blob_b)) + blob_a + blob_b


def _parse_response(line: bytes) -> float | None:
    text = line.decode("utf-8", errors="replace").strip()
    if text == "MISSING":
        return None
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise ProviderError(f"provider score out of range: {value}")
    return value


class SubprocessWireClient:
    """Wire-protocol provider on a persistent subprocess."""

    def __init__(self, command: str):
        self.command = command
        self._proc: subprocess.Popen | None = None

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                shlex.split(self.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
            )
        return self._proc

    def score_pair(self, a_source: str, b_source: str, timeout_s: float | None):
        proc = self._ensure()
        proc.stdin.write(_encode_request(a_source, b_source))
        proc.stdin.flush()
        line = self._read_line(proc, timeout_s)
        return _parse_response(line)

    def _read_line(self, proc, timeout_s: float | None) -> bytes:
        end = None if timeout_s is None else time.monotonic() + timeout_s
        buf = bytearray()
        fd = proc.stdout.fileno()
        while True:
            remaining = None if end is None else end - time.monotonic()
            if remaining is not None and remaining <= 0:
                raise TimeoutError("provider response timed out")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                raise TimeoutError("provider response timed out")
            chunk = proc.stdout.read1(4096)
            if not chunk:
                raise ProviderError("provider closed its output")
            buf.extend(chunk)
            if b"\n" in buf:
                return bytes(buf.split(b"\n", 1)[0])

    def close(self):
        if self._proc is not None and self._proc.poll() is None:
            self._proc.terminate()
            try:
                self._proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self._proc.kill()
        self._proc = None


class TcpWireClient:
    """Wire-protocol provider over a TCP endpoint, one connection per request."""

    def __init__(self, host: str, port: int):
        self.host = host
        self.port = port

    def score_pair(self, a_source: str, b_source: str, timeout_s: float | None):
        timeout = timeout_s if timeout_s is not None else _DEFAULT_TIMEOUT_S
        with socket.create_connection((self.host, self.port), timeout=timeout) as sock:
            sock.settimeout(timeout)
            sock.sendall(_encode_request(a_source, b_source))
            buf = bytearray()
            while b"\n" not in buf:
                chunk = sock.recv(4096)
                if not chunk:
                    break  # closed socket: parse whatever arrived
                buf.extend(chunk)
            return _parse_response(bytes(buf.split(b"\n", 1)[0]))


@dataclass
class ProviderHandle:
    """A connected (or absent) provider endpoint for one pluggable measure."""

    kind: str
    endpoint_config: str = ""
    client: object | None = None
    last_error: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in PROVIDER_KINDS:
            raise ValueError(f"unknown provider kind: {self.kind!r}")

    @property
    def connected(self) -> bool:
        return self.client is not None


def open_provider(kind: str, endpoint: str) -> ProviderHandle:
    """Open a wire provider from an endpoint spec: 'cmd:<command line>' or
    'tcp:<host>:<port>'."""
    if endpoint.startswith("cmd:"):
        client = SubprocessWireClient(endpoint[4:])
    elif endpoint.startswith("tcp:"):
        host, _, port = endpoint[4:].rpartition(":")
        client = TcpWireClient(host, int(port))
    else:
        raise ValueError(f"endpoint must start with 'cmd:' or 'tcp:': {endpoint!r}")
    return ProviderHandle(kind, endpoint, client)


def embedding_provider(fn) -> ProviderHandle:
    return ProviderHandle("embedding", "in-process", VectorEmbeddingClient(fn))


def execution_provider(fn) -> ProviderHandle:
    return ProviderHandle("execution", "in-process", PairScoreClient(fn))


_MEASURE_PROVIDER_KIND = {"embedding": "embedding", "output_analysis": "execution"}


def score_pluggable_explained(kind: str, a, b, provider: ProviderHandle | None,
                              deadline: Deadline | None = None):
    """Returns (score | MISSING, reason | None)."""
    if kind not in _MEASURE_PROVIDER_KIND:
        raise KeyError(f"unknown pluggable kind: {kind!r}")
    if provider is None or not provider.connected:
        return MISSING, "provider absent"
    expected = _MEASURE_PROVIDER_KIND[kind]
    if provider.kind != expected:
        return MISSING, f"provider kind {provider.kind!r}, expected {expected!r}"

    timeout_s = None
    if deadline is not None and deadline.expires_at is not None:
        timeout_s = max(0.0, deadline.expires_at - time.perf_counter())
    try:
        score = provider.client.score_pair(a.source, b.source, timeout_s)
    except Exception as exc:  # noqa: BLE001 - any provider failure means MISSING
        provider.last_error = str(exc)
        return MISSING, f"provider failure: {exc}"
    if score is None:
        return MISSING, "provider reported MISSING"
    return min(1.0, max(0.0, float(score))), None


def score_pluggable(kind: str, a, b, provider: ProviderHandle | None,
                    deadline: Deadline | None = None):
    score, _reason = score_pluggable_explained(kind, a, b, provider, deadline)
    return score
