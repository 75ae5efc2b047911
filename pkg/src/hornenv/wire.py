"""Wire protocol client for external membership oracles.

Frames are newline-delimited JSON over stdio (a spawned subprocess) or a TCP
socket:

    client -> {"type": "hello", "vars": ["a", "b", ...]}
    server -> {"type": "ready", "vars": ["a", "b", ...]}    (must match)
    client -> {"type": "membership", "id": 1, "model": [0, 1, ...]}
    server -> {"type": "answer", "id": 1, "label": "positive" | "negative"}
    client -> {"type": "bye"}

Ids are strictly increasing per session.  A server may reply
{"type": "error", "reason": ...} to a malformed frame.  Requests are
serialized; the learner issues queries sequentially anyway.
"""

from __future__ import annotations

import json
import shlex
import socket
import subprocess
from typing import IO

from .logic import Model, VariableUniverse
from .oracles import NEGATIVE, POSITIVE, MembershipOracle


class ProtocolError(RuntimeError):
    """Malformed or unexpected frame; carries the raw payload."""

    def __init__(self, message: str, payload: object = None):
        super().__init__(message if payload is None else f"{message}: {payload!r}")
        self.payload = payload


class HandshakeError(ProtocolError):
    """Configuration mismatch discovered during the hello/ready exchange."""


def encode_frame(obj: dict) -> bytes:
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode("utf-8")


def decode_frame(line: bytes | str) -> dict:
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        frame = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"frame is not valid JSON ({e})", line) from None
    if not isinstance(frame, dict) or "type" not in frame:
        raise ProtocolError("frame is not an object with a 'type' field", frame)
    return frame


class _StdioTransport:
    def __init__(self, command: str | list[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.process = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE)
        self._writer: IO[bytes] = self.process.stdin  # type: ignore[assignment]
        self._reader: IO[bytes] = self.process.stdout  # type: ignore[assignment]

    def send(self, data: bytes) -> None:
        self._writer.write(data)
        self._writer.flush()

    def recv_line(self) -> bytes:
        return self._reader.readline()

    def close(self) -> None:
        try:
            self._writer.close()
        except Exception:
            pass
        try:
            self.process.wait(timeout=10)
        except subprocess.TimeoutExpired:
            self.process.kill()
            self.process.wait()


class _TcpTransport:
    def __init__(self, host: str, port: int):
        self._sock = socket.create_connection((host, port), timeout=30)
        self._file = self._sock.makefile("rwb")

    def send(self, data: bytes) -> None:
        self._file.write(data)
        self._file.flush()

    def recv_line(self) -> bytes:
        return self._file.readline()

    def close(self) -> None:
        try:
            self._file.close()
        finally:
            self._sock.close()


class WireMembershipOracle(MembershipOracle):
    """Membership oracle that forwards queries over the wire protocol.

    Answers are cached per session by default, which both upholds the
    determinism contract and avoids repeated round trips.  With the cache off,
    a peer that relabels a model trips OracleInconsistencyError in the base
    class before any learner state can be corrupted.
    """

    def __init__(self, transport, universe: VariableUniverse, cache: bool = True):
        super().__init__(universe, cache)
        self._transport = transport
        self._next_id = 1
        self._closed = False
        self._handshake()

    def _handshake(self) -> None:
        self._transport.send(encode_frame({"type": "hello", "vars": list(self.universe.names)}))
        frame = self._read_frame()
        if frame["type"] == "error":
            raise HandshakeError("peer rejected handshake", frame)
        if frame["type"] != "ready":
            raise ProtocolError("expected a ready frame", frame)
        if list(frame.get("vars", [])) != list(self.universe.names):
            raise HandshakeError(
                f"peer universe {frame.get('vars')!r} does not match {list(self.universe.names)!r}"
            )

    def _read_frame(self) -> dict:
        line = self._transport.recv_line()
        if not line:
            raise ProtocolError("peer closed the connection")
        return decode_frame(line)

    def _answer(self, x: Model) -> bool:
        qid = self._next_id
        self._next_id += 1
        self._transport.send(
            encode_frame({"type": "membership", "id": qid, "model": list(x.bits())})
        )
        frame = self._read_frame()
        if frame["type"] == "error":
            raise ProtocolError("peer reported an error", frame)
        if frame["type"] != "answer":
            raise ProtocolError("expected an answer frame", frame)
        if frame.get("id") != qid:
            raise ProtocolError(f"answer id {frame.get('id')!r} does not match query {qid}", frame)
        label = frame.get("label")
        if label not in (POSITIVE, NEGATIVE):
            raise ProtocolError("answer label must be 'positive' or 'negative'", frame)
        return label == POSITIVE

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._transport.send(encode_frame({"type": "bye"}))
        except Exception:
            pass
        self._transport.close()


def external_oracle_connect(
    descriptor: str, universe: VariableUniverse, cache: bool = True
) -> WireMembershipOracle:
    """Connect to an external oracle.

    Descriptors: "tcp:HOST:PORT" for a socket, anything else is a command line
    to spawn and talk to over stdio.
    """
    if descriptor.startswith("tcp:"):
        _, host, port = descriptor.split(":", 2)
        return WireMembershipOracle(_TcpTransport(host, int(port)), universe, cache)
    return WireMembershipOracle(_StdioTransport(descriptor), universe, cache)
