"""Function secret sharing for the comparison function.

A key pair, evaluated at any point x, yields additive ring shares of
``1{x < alpha}`` (unsigned, over Z_{2^ell}). The construction is the
standard logarithmic key tree driven by a length-quadrupling PRG, with
one correction word per level plus a final output word. Everything is
vectorized over batches of keys, each key carrying its own alpha and
evaluated at its own point.

An ideal-model variant (dealer shares the whole truth table) exists for
differential testing on small rings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .prg import convert_seed, expand_seeds
from .ring import RingConfig


@dataclass
class DcfKeyBatch:
    """One party's keys for a batch of comparison gates."""

    party: int
    ell: int
    s_root: np.ndarray  # (K, 16) uint8
    s_cw: np.ndarray  # (n, K, 16) uint8, shared between parties
    v_cw: np.ndarray  # (n, K) uint64
    t_cw_l: np.ndarray  # (n, K) uint8
    t_cw_r: np.ndarray  # (n, K) uint8
    cw_final: np.ndarray  # (K,) uint64

    @property
    def size(self) -> int:
        return self.s_root.shape[0]


def _neg_if(bits: np.ndarray) -> np.ndarray:
    """(-1)^bits as a ring multiplier (uint64 wraparound)."""
    return np.uint64(1) - np.uint64(2) * bits.astype(np.uint64)


def dcf_gen(alphas: np.ndarray, cfg: RingConfig, rng: np.random.Generator):
    """Generate key batches for ``1{x < alpha}`` with payload 1.

    Args:
        alphas: (K,) uint64 comparison points.
        cfg: ring configuration (tree depth = cfg.ell).
        rng: source of the root seeds.

    Returns:
        ``(DcfKeyBatch_party0, DcfKeyBatch_party1)`` sharing correction arrays.
    """
    alphas = np.asarray(alphas, dtype=np.uint64)
    k = alphas.size
    n = cfg.ell
    mask = cfg.mask
    beta = np.uint64(1)

    s0 = rng.integers(0, 256, size=(k, 16), dtype=np.uint8)
    s1 = rng.integers(0, 256, size=(k, 16), dtype=np.uint8)
    root0, root1 = s0.copy(), s1.copy()
    t0 = np.zeros(k, dtype=np.uint8)
    t1 = np.ones(k, dtype=np.uint8)
    v_alpha = np.zeros(k, dtype=np.uint64)

    s_cw = np.empty((n, k, 16), dtype=np.uint8)
    v_cw = np.empty((n, k), dtype=np.uint64)
    t_cw_l = np.empty((n, k), dtype=np.uint8)
    t_cw_r = np.empty((n, k), dtype=np.uint8)

    for i in range(n):
        a = ((alphas >> np.uint64(n - 1 - i)) & np.uint64(1)).astype(np.uint8)
        keep_r = a.astype(bool)  # alpha bit 1: keep right, lose left

        e0 = expand_seeds(s0)
        e1 = expand_seeds(s1)
        s0l, v0l, t0l, s0r, v0r, t0r = e0
        s1l, v1l, t1l, s1r, v1r, t1r = e1

        s0_lose = np.where(keep_r[:, None], s0l, s0r)
        s1_lose = np.where(keep_r[:, None], s1l, s1r)
        v0_lose = np.where(keep_r, v0l & mask, v0r & mask)
        v1_lose = np.where(keep_r, v1l & mask, v1r & mask)
        s0_keep = np.where(keep_r[:, None], s0r, s0l)
        s1_keep = np.where(keep_r[:, None], s1r, s1l)
        v0_keep = np.where(keep_r, v0r & mask, v0l & mask)
        v1_keep = np.where(keep_r, v1r & mask, v1l & mask)
        t0_keep = np.where(keep_r, t0r, t0l)
        t1_keep = np.where(keep_r, t1r, t1l)

        sign1 = _neg_if(t1)
        cw = sign1 * (v1_lose - v0_lose - v_alpha)
        # When the lost subtree lies left of the alpha path it is entirely
        # below alpha and must carry the payload.
        cw = cw + sign1 * np.where(keep_r, beta, np.uint64(0))
        cw &= mask

        v_alpha = (v_alpha - v1_keep + v0_keep + sign1 * cw) & mask

        scw = s0_lose ^ s1_lose
        tcl = t0l ^ t1l ^ a ^ np.uint8(1)
        tcr = t0r ^ t1r ^ a

        s_cw[i] = scw
        v_cw[i] = cw
        t_cw_l[i] = tcl
        t_cw_r[i] = tcr

        s0 = s0_keep ^ (t0[:, None] * scw)
        s1 = s1_keep ^ (t1[:, None] * scw)
        tc_keep = np.where(keep_r, tcr, tcl)
        t0, t1 = t0_keep ^ (t0 * tc_keep), t1_keep ^ (t1 * tc_keep)

    cw_final = (_neg_if(t1) * (convert_seed(s1, mask) - convert_seed(s0, mask) - v_alpha)) & mask

    k0 = DcfKeyBatch(0, cfg.ell, root0, s_cw, v_cw, t_cw_l, t_cw_r, cw_final)
    k1 = DcfKeyBatch(1, cfg.ell, root1, s_cw, v_cw, t_cw_l, t_cw_r, cw_final)
    return k0, k1


def dcf_eval(key: DcfKeyBatch, x: np.ndarray, cfg: RingConfig) -> np.ndarray:
    """Evaluate a key batch at per-key points; returns ring shares (K,)."""
    x = np.asarray(x, dtype=np.uint64)
    if x.size != key.size:
        raise ValueError("one evaluation point per key expected")
    n = cfg.ell
    mask = cfg.mask
    sign = np.uint64(1) if key.party == 0 else mask  # +1 or -1 in the ring

    s = key.s_root
    t = np.full(key.size, key.party, dtype=np.uint8)
    acc = np.zeros(key.size, dtype=np.uint64)

    for i in range(n):
        xi = ((x >> np.uint64(n - 1 - i)) & np.uint64(1)).astype(bool)
        sl, vl, tl, sr, vr, tr = expand_seeds(s)

        v_curr = np.where(xi, vr & mask, vl & mask)
        acc = (acc + sign * (v_curr + t.astype(np.uint64) * key.v_cw[i])) & mask

        s_child = np.where(xi[:, None], sr, sl) ^ (t[:, None] * key.s_cw[i])
        t_child = np.where(xi, tr ^ (t * key.t_cw_r[i]), tl ^ (t * key.t_cw_l[i]))
        s, t = s_child, t_child

    acc = (acc + sign * (convert_seed(s, mask) + t.astype(np.uint64) * key.cw_final)) & mask
    return acc


@dataclass
class IdealDcfBatch:
    """Dealer-simulated comparison shares over the full (small) domain."""

    party: int
    ell: int
    table: np.ndarray  # (K, 2^ell) uint64: this party's share of 1{x < alpha}

    @property
    def size(self) -> int:
        return self.table.shape[0]


def ideal_dcf_gen(alphas: np.ndarray, cfg: RingConfig, rng: np.random.Generator):
    """Truth-table variant of :func:`dcf_gen` for rings up to 2^20."""
    if cfg.ell > 20:
        raise ValueError("ideal mode is for small rings only")
    alphas = np.asarray(alphas, dtype=np.uint64)
    domain = np.arange(1 << cfg.ell, dtype=np.uint64)
    truth = (domain[None, :] < alphas[:, None]).astype(np.uint64)
    r = rng.integers(0, 1 << cfg.ell, size=truth.shape, dtype=np.uint64)
    return (
        IdealDcfBatch(0, cfg.ell, r),
        IdealDcfBatch(1, cfg.ell, (truth - r) & cfg.mask),
    )


def ideal_dcf_eval(key: IdealDcfBatch, x: np.ndarray, cfg: RingConfig) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    return key.table[np.arange(key.size), x.astype(np.int64)]
