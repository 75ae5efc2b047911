"""Stub membership-oracle server: answers wire-protocol queries from a clause
file.  Serves one session over stdio (default) or a single TCP connection.

    python -m hornenv.stub_server --target formula.txt
    python -m hornenv.stub_server --target formula.txt --tcp 0
"""

from __future__ import annotations

import argparse
import socket
import sys

from .formula_io import load_formula
from .logic import Formula, Model, VariableUniverse
from .oracles import NEGATIVE, POSITIVE
from .wire import decode_frame, encode_frame


class StubSession:
    """Protocol state machine for one client connection."""

    def __init__(self, target: Formula, universe: VariableUniverse):
        self.target = target
        self.universe = universe
        self._masks = [c.masks(universe.size) for c in target.clauses]
        self._ready = False
        self._last_id = 0

    def _classify(self, mask: int) -> str:
        for ant, con in self._masks:
            if mask & ant == ant and mask & con == 0:
                return NEGATIVE
        return POSITIVE

    def handle_line(self, line: bytes | str) -> tuple[bytes | None, bool]:
        """Returns (reply bytes or None, keep_going)."""
        try:
            frame = decode_frame(line)
        except Exception as e:
            return encode_frame({"type": "error", "reason": str(e)}), True
        kind = frame["type"]
        if kind == "hello":
            if list(frame.get("vars", [])) != list(self.universe.names):
                return (
                    encode_frame(
                        {"type": "error", "reason": "variable universe mismatch",
                         "vars": list(self.universe.names)}
                    ),
                    False,
                )
            self._ready = True
            return encode_frame({"type": "ready", "vars": list(self.universe.names)}), True
        if kind == "bye":
            return None, False
        if kind == "membership":
            if not self._ready:
                return encode_frame({"type": "error", "reason": "membership before hello"}), True
            qid = frame.get("id")
            model = frame.get("model")
            if not isinstance(qid, int) or qid <= self._last_id:
                return (
                    encode_frame({"type": "error", "reason": "ids must be strictly increasing"}),
                    True,
                )
            self._last_id = qid
            if (
                not isinstance(model, list)
                or len(model) != self.universe.size
                or any(b not in (0, 1) for b in model)
            ):
                return (
                    encode_frame(
                        {"type": "error", "id": qid,
                         "reason": f"model must be a 0/1 array of length {self.universe.size}"}
                    ),
                    True,
                )
            label = self._classify(Model.from_bits(model).mask)
            return encode_frame({"type": "answer", "id": qid, "label": label}), True
        return encode_frame({"type": "error", "reason": f"unknown frame type {kind!r}"}), True


def serve_stream(session: StubSession, reader, writer) -> None:
    for line in reader:
        if not line.strip():
            continue
        reply, keep_going = session.handle_line(line)
        if reply is not None:
            writer.write(reply)
            writer.flush()
        if not keep_going:
            break


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="stub membership oracle server")
    parser.add_argument("--target", required=True, help="clause file defining the oracle")
    parser.add_argument("--tcp", type=int, default=None, metavar="PORT",
                        help="serve one TCP connection instead of stdio (0 = ephemeral port)")
    args = parser.parse_args(argv)

    parsed = load_formula(args.target)
    session = StubSession(parsed.formula, parsed.universe)

    if args.tcp is None:
        serve_stream(session, sys.stdin.buffer, sys.stdout.buffer)
        return 0

    with socket.create_server(("127.0.0.1", args.tcp)) as server:
        print(f"PORT {server.getsockname()[1]}", flush=True)
        conn, _ = server.accept()
        with conn, conn.makefile("rwb") as stream:
            serve_stream(session, stream, stream)
    return 0


if __name__ == "__main__":
    sys.exit(main())
