"""Secure comparison, oblivious select, and argmax.

The masked less-than gate opens m = x - omega + 2^{ell-1} + alpha (one
round, ell bits per gate) and then evaluates two comparison-FSS keys
locally: with C = 2^{ell-1} and wrap = msb(alpha),

    1{(m - alpha) mod 2^ell < C} = 1{m < alpha + C} - 1{m < alpha} + wrap,

which equals the signed comparison whenever signed(x - omega) lies in
[-C, C) - guaranteed by the stated operand range.
"""

from __future__ import annotations

import numpy as np

from .dcf import IdealDcfBatch, dcf_eval, ideal_dcf_eval
from .dealer import LtGateBatch, mark_consumed
from .sharing import Session, mul_finish, mul_start


def _eval_keys(key, x, cfg):
    if isinstance(key, IdealDcfBatch):
        return ideal_dcf_eval(key, x, cfg)
    return dcf_eval(key, x, cfg)


def lt_gate_start(sess: Session, x, omega, gates: LtGateBatch | None = None, tag: str = "lt"):
    """Queue the masked open for 1{signed(x) < signed(omega)} (omega public)."""
    x = np.asarray(x, dtype=np.uint64).ravel()
    omega = np.broadcast_to(np.asarray(omega, dtype=np.uint64), x.shape)
    if gates is None:
        gates = sess.dealer.lt_gates(x.size)
    mark_consumed(gates)
    cfg = sess.cfg
    z = x
    if sess.b == 1:
        z = (z + cfg.half - omega) & cfg.mask
    masked = (z + gates.alpha) & cfg.mask
    sess.push(masked, tag=tag)
    return (gates, masked)


def lt_gate_finish(sess: Session, state, reader) -> np.ndarray:
    gates, masked = state
    cfg = sess.cfg
    m = (masked + reader.read_u64(masked.size, cfg.ell)) & cfg.mask
    both = _eval_keys(gates.dcf, np.concatenate([m, m]), cfg)
    k = masked.size
    lo, hi = both[:k], both[k:]
    return (hi - lo + gates.wrap) & cfg.mask


def lt_gate(sess: Session, x, omega, gates: LtGateBatch | None = None, tag: str = "lt") -> np.ndarray:
    """Arithmetic share of 1{signed(x) < signed(omega)}; 1 round, ell bits/gate."""
    st = lt_gate_start(sess, x, omega, gates, tag)
    return lt_gate_finish(sess, st, sess.flush())


def ge_bit_start(sess: Session, x, omega, gates: LtGateBatch | None = None, tag: str = "lt"):
    return lt_gate_start(sess, x, omega, gates, tag)


def ge_bit_finish(sess: Session, state, reader) -> np.ndarray:
    lt = lt_gate_finish(sess, state, reader)
    comp = (-lt) & sess.cfg.mask
    if sess.b == 1:
        comp = (comp + np.uint64(1)) & sess.cfg.mask
    return comp


def ge_bit(sess: Session, x, omega, gates: LtGateBatch | None = None, tag: str = "lt") -> np.ndarray:
    """Arithmetic share of 1{signed(x) >= signed(omega)} (local complement)."""
    st = ge_bit_start(sess, x, omega, gates, tag)
    return ge_bit_finish(sess, st, sess.flush())


def select_start(sess: Session, bit, x, y, tag: str = "select"):
    """Queue b*x + (1-b)*y (one Beaver product)."""
    x = np.asarray(x, dtype=np.uint64)
    y = np.asarray(y, dtype=np.uint64)
    st = mul_start(sess, bit, (x - y) & sess.cfg.mask, tag)
    return (st, y)


def select_finish(sess: Session, state, reader) -> np.ndarray:
    st, y = state
    return (y + mul_finish(sess, st, reader)) & sess.cfg.mask


def select(sess: Session, bit, x, y, tag: str = "select") -> np.ndarray:
    st = select_start(sess, bit, x, y, tag)
    return select_finish(sess, st, sess.flush())


def argmax(sess: Session, values: np.ndarray, tags: list[np.ndarray], tag: str = "argmax"):
    """Tournament argmax over shared values; ties go to the lower index.

    Args:
        values: (K,) shared comparison-safe values.
        tags: list of (K,) shared payload columns carried with each value.

    Returns:
        Tuple of scalar shares: (winning value, winning entry of each tag).
    """
    vals = np.asarray(values, dtype=np.uint64).ravel()
    if vals.size == 0:
        raise ValueError("argmax over an empty candidate list")
    cols = [np.asarray(t, dtype=np.uint64).ravel() for t in tags]
    mask = sess.cfg.mask
    while vals.size > 1:
        h = vals.size // 2
        lv, rv = vals[0 : 2 * h : 2], vals[1 : 2 * h : 2]
        # right strictly greater wins, so equal values keep the left entry
        swap = lt_gate(sess, (lv - rv) & mask, 0, tag=tag)
        states = [select_start(sess, swap, rv, lv, tag)]
        for c in cols:
            states.append(select_start(sess, swap, c[1 : 2 * h : 2], c[0 : 2 * h : 2], tag))
        reader = sess.flush()
        picked = [select_finish(sess, st, reader) for st in states]
        tail = slice(2 * h, vals.size)
        vals = np.concatenate([picked[0], vals[tail]])
        cols = [np.concatenate([p, c[tail]]) for p, c in zip(picked[1:], cols)]
    return vals[0], [c[0] for c in cols]
