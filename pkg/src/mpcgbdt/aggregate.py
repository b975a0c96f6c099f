"""Compressed secure aggregation and masked bit multiplication.

``agg_online`` computes the dot product sum_i s_i * g_i of a shared 0/1
indicator vector with shared bounded gradients, exchanging only 1 + ell_c
bits per element per party in a single round: the indicator travels as a
one-bit Boolean-masked value and the gradient as an ell_c-bit masked value
after a +2^{ell_f} bias shift. The local recombination uses

    s = s_hat + (1-2*s_hat)*r_s
    g' = g_hat' - r_g + wrap*2^{ell_c},  wrap = msb(r_g)*(1-msb(g_hat'))

with the dealer supplying shares of r_s, r_g, u = r_s*r_g, v = msb(r_g)
and m = r_s*v.

``bitmul`` is the two-operand specialization for bit*bit products
(2 masked bits per element per party, one round).
"""

from __future__ import annotations

import numpy as np

from .dealer import AggKeys, BitMulKeys, mark_consumed
from .sharing import Session


def agg_online(sess: Session, s, g, keys: AggKeys | None = None, tag: str = "agg") -> np.ndarray:
    """Share of sum over the last axis of s*g.

    Args:
        s: shares of 0/1 indicators, any shape (..., N).
        g: shares of gradients with signed value in [-2^ell_f, 2^ell_f),
           broadcastable against ``s``.
        keys: fresh aggregation keys (drawn from the dealer if omitted).

    Returns:
        Shares of shape (...,) reconstructing exactly to sum s_i*g_i.
    """
    cfg = sess.cfg
    s, g = np.broadcast_arrays(np.asarray(s, np.uint64), np.asarray(g, np.uint64))
    if keys is None:
        keys = sess.dealer.agg_keys(s.shape)
    mark_consumed(keys)
    lc = cfg.ell_c
    bias = np.uint64(1 << cfg.ell_f)
    two_lc = np.uint64(1 << lc)

    s_bit = (s & np.uint64(1)) ^ (keys.r_s & np.uint64(1))
    g_masked = (g + keys.r_g) & cfg.mask_c
    if sess.b == 1:
        g_masked = (g_masked + bias) & cfg.mask_c

    sess.push(s_bit, 1, tag)
    sess.push(g_masked, lc, tag)
    reader = sess.flush()
    s_pub = s_bit ^ reader.read_u64(s.size, 1).reshape(s.shape)
    g_pub = (g_masked + reader.read_u64(s.size, lc).reshape(s.shape)) & cfg.mask_c

    nmsb = np.uint64(1) - (g_pub >> np.uint64(lc - 1))  # 1 - msb(g_hat'), public
    cf = np.uint64(1) - np.uint64(2) * s_pub  # (1 - 2*s_hat) as ring multiplier

    out = (
        -s_pub * keys.r_g
        + s_pub * nmsb * keys.v * two_lc
        + cf * (g_pub * keys.r_s - keys.u + nmsb * keys.m * two_lc)
        - cf * keys.r_s * bias
    )
    if sess.b == 1:
        out = out + s_pub * g_pub - s_pub * bias
    return out.sum(axis=-1, dtype=np.uint64) & cfg.mask


def bitmul(sess: Session, s, t, keys: BitMulKeys | None = None, tag: str = "bitmul") -> np.ndarray:
    """Elementwise shares of s*t for shared bits (2 bits/element/party)."""
    cfg = sess.cfg
    s, t = np.broadcast_arrays(np.asarray(s, np.uint64), np.asarray(t, np.uint64))
    if keys is None:
        keys = sess.dealer.bitmul_keys(s.shape)
    mark_consumed(keys)

    s_bit = (s & np.uint64(1)) ^ (keys.r_s & np.uint64(1))
    t_bit = (t & np.uint64(1)) ^ (keys.r_t & np.uint64(1))
    sess.push(s_bit, 1, tag)
    sess.push(t_bit, 1, tag)
    reader = sess.flush()
    s_pub = s_bit ^ reader.read_u64(s.size, 1).reshape(s.shape)
    t_pub = t_bit ^ reader.read_u64(t.size, 1).reshape(t.shape)

    cs = np.uint64(1) - np.uint64(2) * s_pub
    ct = np.uint64(1) - np.uint64(2) * t_pub
    out = s_pub * ct * keys.r_t + t_pub * cs * keys.r_s + cs * ct * keys.u
    if sess.b == 1:
        out = out + s_pub * t_pub
    return out & cfg.mask
