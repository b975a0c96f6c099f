"""Two-party execution fabric.

Each party runs the same (SPMD) protocol function on its own
:class:`Endpoint`. Outgoing payloads accumulate as bit vectors and are
exchanged with the peer on :meth:`Endpoint.flush`; one flush from each
side is one communication round. The meter records pre-padding bits per
tag, padded wire bytes, and the round count.
"""

from __future__ import annotations

import queue
import socket
import struct
import threading
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .ring import pack_bits_u64, unpack_bits_u64


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True)
class NetworkProfile:
    """Analytic link model: latency per round plus serialization time."""

    name: str
    rtt_ms: float
    bandwidth_bps: float


LAN = NetworkProfile("lan", 0.2, 1e9)
WAN = NetworkProfile("wan", 40.0, 100e6)
PROFILES = {"lan": LAN, "wan": WAN}


class Meter:
    """Per-party communication accounting."""

    def __init__(self):
        self.bits_sent = 0
        self.bytes_sent = 0
        self.rounds = 0
        self.bits_by_tag: dict[str, int] = {}
        self._tag_stack: list[str] = ["untagged"]

    @contextmanager
    def scope(self, tag: str):
        self._tag_stack.append(tag)
        try:
            yield
        finally:
            self._tag_stack.pop()

    def record_bits(self, nbits: int):
        self.bits_sent += nbits
        tag = self._tag_stack[-1]
        self.bits_by_tag[tag] = self.bits_by_tag.get(tag, 0) + nbits

    def record_flush(self, payload_bytes: int):
        self.bytes_sent += payload_bytes
        self.rounds += 1

    def snapshot(self) -> dict:
        return {
            "bits_sent": self.bits_sent,
            "bytes_sent": self.bytes_sent,
            "rounds": self.rounds,
            "bits_by_tag": dict(self.bits_by_tag),
        }

    def delta(self, before: dict) -> dict:
        return {
            "bits_sent": self.bits_sent - before["bits_sent"],
            "bytes_sent": self.bytes_sent - before["bytes_sent"],
            "rounds": self.rounds - before["rounds"],
        }


def estimate_time(meter: Meter, profile: NetworkProfile) -> float:
    """Seconds under the analytic model: rounds*RTT + bytes/bandwidth."""
    return meter.rounds * profile.rtt_ms / 1e3 + meter.bytes_sent * 8.0 / profile.bandwidth_bps


class BitReader:
    """Sequential reader over a peer's unpacked flush payload."""

    def __init__(self, bits: np.ndarray):
        self._bits = bits
        self._pos = 0

    def read_u64(self, count: int, width: int) -> np.ndarray:
        n = count * width
        if self._pos + n > self._bits.size:
            raise ProtocolError("flush payload shorter than expected")
        chunk = self._bits[self._pos : self._pos + n]
        self._pos += n
        return unpack_bits_u64(chunk, width)

    def done(self):
        if self._pos != self._bits.size:
            raise ProtocolError(
                f"flush payload longer than expected ({self._bits.size - self._pos} bits left)"
            )


class Endpoint:
    """One party's view of the duplex channel."""

    def __init__(self, party: int, inbox, peer_inbox, meter: Meter, timeout: float = 60.0):
        self.party = party
        self._inbox = inbox
        self._peer_inbox = peer_inbox
        self.meter = meter
        self.timeout = timeout
        self._out: list[np.ndarray] = []
        self._out_bits = 0

    def push_u64(self, vals, width: int, tag: str | None = None):
        """Queue ring values (low ``width`` bits each) for the next flush."""
        bits = pack_bits_u64(np.asarray(vals, dtype=np.uint64), width)
        if tag is None:
            self.meter.record_bits(bits.size)
        else:
            with self.meter.scope(tag):
                self.meter.record_bits(bits.size)
        self._out.append(bits)
        self._out_bits += bits.size

    def flush(self) -> BitReader:
        """Exchange queued payloads with the peer; one round."""
        bits = np.concatenate(self._out) if self._out else np.zeros(0, dtype=np.uint8)
        self._out = []
        self._out_bits = 0
        packed = np.packbits(bits, bitorder="little").tobytes()
        round_idx = self.meter.rounds
        self.meter.record_flush(len(packed))
        self._send(round_idx, bits.size, packed)
        peer_round, peer_nbits, peer_packed = self._recv(round_idx)
        if peer_round != round_idx:
            raise ProtocolError(
                f"round mismatch: local {round_idx}, peer {peer_round}"
            )
        peer_bits = np.unpackbits(
            np.frombuffer(peer_packed, dtype=np.uint8), bitorder="little"
        )[:peer_nbits]
        return BitReader(peer_bits)

    def _send(self, round_idx, nbits, packed):
        self._peer_inbox.put((round_idx, nbits, packed))

    def _recv(self, round_idx):
        try:
            return self._inbox.get(timeout=self.timeout)
        except queue.Empty:
            raise ProtocolError(
                f"deadlock: no peer message at round {round_idx}"
            ) from None


class SocketEndpoint(Endpoint):
    """Endpoint variant speaking the same framing over a TCP socket.

    Frames are little-endian: 4-byte round index, 4-byte bit count,
    4-byte payload byte count, then the bit-packed payload. Excluded from
    acceptance runs; exists for realism.
    """

    def __init__(self, party: int, sock: socket.socket, meter: Meter, timeout: float = 60.0):
        super().__init__(party, None, None, meter, timeout)
        self._sock = sock
        sock.settimeout(timeout)

    def _send(self, round_idx, nbits, packed):
        hdr = struct.pack("<III", round_idx, nbits, len(packed))
        self._sock.sendall(hdr + packed)

    def _recv(self, round_idx):
        try:
            hdr = self._recv_exact(12)
            r, nbits, nbytes = struct.unpack("<III", hdr)
            return r, nbits, self._recv_exact(nbytes)
        except socket.timeout:
            raise ProtocolError(
                f"deadlock: no peer message at round {round_idx}"
            ) from None

    def _recv_exact(self, n: int) -> bytes:
        buf = b""
        while len(buf) < n:
            chunk = self._sock.recv(n - len(buf))
            if not chunk:
                raise ProtocolError("peer closed connection")
            buf += chunk
        return buf


def run_two_party(fn, args0=(), args1=(), timeout: float = 60.0):
    """Run ``fn(endpoint, *args_b)`` concurrently for both parties.

    Returns:
        ``(out0, out1, meter0, meter1)``.
    """
    q0, q1 = queue.Queue(), queue.Queue()
    meters = (Meter(), Meter())
    eps = (
        Endpoint(0, q0, q1, meters[0], timeout),
        Endpoint(1, q1, q0, meters[1], timeout),
    )
    outs: list = [None, None]
    errs: list = [None, None]

    def work(b, args):
        try:
            outs[b] = fn(eps[b], *args)
        except BaseException as e:  # noqa: BLE001 - propagate to caller
            errs[b] = e

    threads = [
        threading.Thread(target=work, args=(0, args0)),
        threading.Thread(target=work, args=(1, args1)),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for e in errs:
        if e is not None:
            raise e
    return outs[0], outs[1], meters[0], meters[1]
