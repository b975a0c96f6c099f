"""2-out-of-2 additive secret sharing and its basic protocol operations.

All shares are plain uint64 arrays; a :class:`Session` bundles a party's
channel endpoint, dealer and ring configuration. Every interactive
operation comes as a ``*_start`` / ``*_finish`` pair so that independent
operations can share one communication round; the plain wrappers flush
immediately.
"""

from __future__ import annotations

import numpy as np

from .dealer import Dealer, mark_consumed
from .ring import RingConfig
from .transport import BitReader, Endpoint


class Session:
    """One party's protocol context."""

    def __init__(self, ep: Endpoint, dealer: Dealer, cfg: RingConfig):
        self.ep = ep
        self.dealer = dealer
        self.cfg = cfg

    @property
    def b(self) -> int:
        return self.ep.party

    @property
    def meter(self):
        return self.ep.meter

    def push(self, vals, width: int | None = None, tag: str | None = None):
        self.ep.push_u64(vals, self.cfg.ell if width is None else width, tag)

    def flush(self) -> BitReader:
        return self.ep.flush()


# -- share construction (dealer/test side) ---------------------------------


def share_value(x, cfg: RingConfig, rng: np.random.Generator):
    """Split plaintext ring values into two random summands."""
    x = np.asarray(x, dtype=np.uint64) & cfg.mask
    r = rng.integers(0, 1 << 64, size=x.shape, dtype=np.uint64) & cfg.mask
    return (x - r) & cfg.mask, r


def degenerate_share(x, owner: int, party: int, cfg: RingConfig) -> np.ndarray:
    """Share where the owner holds the plaintext and the peer holds zero."""
    x = np.asarray(x, dtype=np.uint64) & cfg.mask
    return x if party == owner else np.zeros_like(x)


def const_share(c, party: int, cfg: RingConfig, shape=()) -> np.ndarray:
    """Public constant as a share (party 1 carries the value)."""
    c = np.broadcast_to(np.asarray(c, dtype=np.uint64), shape).copy() & cfg.mask
    return c if party == 1 else np.zeros_like(c)


# -- local operations -------------------------------------------------------


def add_const(x, c, party: int, cfg: RingConfig) -> np.ndarray:
    """Add a public constant (applied by party 1 only)."""
    x = np.asarray(x, dtype=np.uint64)
    if party == 1:
        return (x + np.asarray(c, dtype=np.uint64)) & cfg.mask
    return x & cfg.mask


def mod2(x) -> np.ndarray:
    """Boolean share of an arithmetically shared bit (low bit of the share)."""
    return np.asarray(x, dtype=np.uint64) & np.uint64(1)


def trunc_share(x, party: int, cfg: RingConfig, bits: int | None = None) -> np.ndarray:
    """Share-wise fixed-point truncation (local; at most one-ulp error).

    Party 0 shifts its share down; party 1 shifts the negation, so the
    results recombine to the arithmetic shift of the secret up to a
    +-1 off-by-one from the discarded carry.
    """
    f = np.uint64(cfg.ell_f if bits is None else bits)
    x = np.asarray(x, dtype=np.uint64) & cfg.mask
    if party == 0:
        return x >> f
    return (-(((-x) & cfg.mask) >> f)) & cfg.mask


# -- interactive operations --------------------------------------------------


def open_start(sess: Session, x, width: int | None = None, tag: str = "open"):
    x = np.asarray(x, dtype=np.uint64)
    w = sess.cfg.ell if width is None else width
    sess.push(x, w, tag)
    return (x, w)


def open_finish(sess: Session, state, reader: BitReader) -> np.ndarray:
    x, w = state
    peer = reader.read_u64(x.size, w).reshape(x.shape)
    return (x + peer) & np.uint64((1 << w) - 1 if w < 64 else 0xFFFFFFFFFFFFFFFF)


def open_values(sess: Session, x, width: int | None = None, tag: str = "open") -> np.ndarray:
    st = open_start(sess, x, width, tag)
    return open_finish(sess, st, sess.flush())


def mul_start(sess: Session, x, y, tag: str = "mul"):
    x, y = np.broadcast_arrays(np.asarray(x, np.uint64), np.asarray(y, np.uint64))
    t = sess.dealer.triples(x.shape)
    mark_consumed(t)
    d = (x - t.a) & sess.cfg.mask
    e = (y - t.b) & sess.cfg.mask
    sess.push(d, tag=tag)
    sess.push(e, tag=tag)
    return (t, d, e)


def mul_finish(sess: Session, state, reader: BitReader) -> np.ndarray:
    t, d, e = state
    mask = sess.cfg.mask
    dd = (d + reader.read_u64(d.size, sess.cfg.ell).reshape(d.shape)) & mask
    ee = (e + reader.read_u64(e.size, sess.cfg.ell).reshape(e.shape)) & mask
    z = t.c + dd * t.b + ee * t.a
    if sess.b == 1:
        z = z + dd * ee
    return z & mask


def mul(sess: Session, x, y, tag: str = "mul") -> np.ndarray:
    st = mul_start(sess, x, y, tag)
    return mul_finish(sess, st, sess.flush())


def square_start(sess: Session, x, tag: str = "square"):
    x = np.asarray(x, dtype=np.uint64)
    sq = sess.dealer.squares(x.shape)
    mark_consumed(sq)
    e = (x - sq.r) & sess.cfg.mask
    sess.push(e, tag=tag)
    return (sq, e)


def square_finish(sess: Session, state, reader: BitReader) -> np.ndarray:
    sq, e = state
    mask = sess.cfg.mask
    ee = (e + reader.read_u64(e.size, sess.cfg.ell).reshape(e.shape)) & mask
    z = sq.r2 + np.uint64(2) * ee * sq.r
    if sess.b == 1:
        z = z + ee * ee
    return z & mask


def square(sess: Session, x, tag: str = "square") -> np.ndarray:
    st = square_start(sess, x, tag)
    return square_finish(sess, st, sess.flush())
