"""Plaintext gradient-boosting oracles.

Two modes over the same tree-building skeleton:

* ``exact``: float64 arithmetic, true sigmoid, division-based gain and
  leaf weight. An accuracy baseline.
* ``mirror``: fixed-point integer arithmetic using the same lookup
  tables, division-free gain, truncation points, candidate order and
  tie rule as the secure trainer, so both produce identical trees when
  candidate gains are separated by more than the secure pipeline's
  one-ulp truncation noise.

Also hosts the brute-force micro-oracles used by the protocol tests.
"""

from __future__ import annotations

import numpy as np

from .gain import exact_gain_plain, gain_fixed
from .lut import (
    LeafWeightTable,
    SigmoidTable,
    leafweight_index_fixed,
    segment_index_fixed,
    sigmoid,
)
from .trees import ARGMAX_OFFSET_ULP, PlainTree, TrainConfig, candidate_grid


def _mirror_gradients(margins_enc, y_enc, sig: SigmoidTable, cfg: TrainConfig):
    rc = cfg.ring
    j = segment_index_fixed(margins_enc, sig.omegas_enc, rc)
    p = sig.entries[j]
    g = (p - y_enc) & rc.mask
    return g, sig.hess[j]


def _exact_gradients(margins, y):
    p = sigmoid(margins)
    return p - y, p * (1.0 - p)


def plain_train(X: np.ndarray, y: np.ndarray, thresholds, cfg: TrainConfig, mode: str):
    """Train T trees; returns (list of PlainTree, final train margins)."""
    if mode not in ("exact", "mirror"):
        raise ValueError(f"unknown oracle mode: {mode}")
    cfg.validate_for(X.shape[0])
    rc = cfg.ring
    n, n_feat = X.shape
    cand_z, cand_u = candidate_grid(n_feat, cfg.buckets)
    tests = np.stack(
        [X[:, z] < thresholds[z][u - 1] for z, u in zip(cand_z, cand_u)]
    )  # (K, N) bool
    offsets = (
        (cand_z.size - 1 - np.arange(cand_z.size)).astype(np.int64) * ARGMAX_OFFSET_ULP
    )

    mirror = mode == "mirror"
    sig = SigmoidTable.build(cfg.segments, rc)
    leaf_tab = LeafWeightTable.build(cfg.segments, rc)
    gamma_enc = int(rc.encode(cfg.gamma))
    y_enc = rc.encode(y.astype(np.float64))

    if mirror:
        margins = np.zeros(n, dtype=np.uint64)
    else:
        margins = np.zeros(n, dtype=np.float64)
    trees: list[PlainTree] = []

    for _ in range(cfg.trees):
        if mirror:
            g, h = _mirror_gradients(margins, y_enc, sig, cfg)
            g_s, h_s = rc.signed(g), rc.signed(h)
        else:
            g_s, h_s = _exact_gradients(margins, y)

        nodes: list = [None] * ((1 << cfg.depth) - 1)
        leaves = []
        leaf_masks = []

        def build(depth, mask, node_idx=0):
            G = g_s[mask].sum()
            H = h_s[mask].sum()
            if depth == cfg.depth:
                if mirror:
                    j = leafweight_index_fixed(
                        np.int64(G).astype(np.uint64) & rc.mask,
                        np.int64(H).astype(np.uint64) & rc.mask,
                        gamma_enc,
                        leaf_tab,
                        rc,
                    )
                    leaves.append(leaf_tab.entries[j])
                else:
                    leaves.append(-G / (H + cfg.gamma))
                leaf_masks.append(mask)
                return
            if mask.any():
                tm = tests[:, mask].astype(g_s.dtype)
                gl = tm @ g_s[mask]
                hl = tm @ h_s[mask]
            else:
                gl = np.zeros(tests.shape[0], dtype=g_s.dtype)
                hl = np.zeros(tests.shape[0], dtype=h_s.dtype)
            gr, hr = G - gl, H - hl
            if mirror:
                gains = gain_fixed(gl, gr, hl, hr, np.int64(H), gamma_enc, rc.ell_f)
                gains = gains + offsets
            else:
                gains = exact_gain_plain(gl, gr, np.float64(G), hl, hr, np.float64(H), cfg.gamma)
            best = int(np.argmax(gains))  # first max: lowest (feature, bucket) wins ties
            z, u = int(cand_z[best]), int(cand_u[best])
            nodes[node_idx] = (z, u)
            left = mask & tests[best]
            build(depth + 1, left, 2 * node_idx + 1)
            build(depth + 1, mask & ~tests[best], 2 * node_idx + 2)

        build(0, np.ones(n, dtype=bool))
        tree = PlainTree(nodes, np.array(leaves, dtype=np.uint64 if mirror else np.float64))
        trees.append(tree)

        for mask, w in zip(leaf_masks, tree.leaves):
            if mirror:
                step = rc.signed(w)
                if cfg.eta != 1.0:
                    step = (step * np.int64(rc.encode(cfg.eta))) >> np.int64(rc.ell_f)
                margins[mask] = (margins[mask] + np.int64(step).astype(np.uint64)) & rc.mask
            else:
                margins[mask] += cfg.eta * w
    return trees, margins


def predict_margins(trees, X, thresholds, cfg: TrainConfig, mode: str) -> np.ndarray:
    from .trees import eval_plain_trees

    m = eval_plain_trees(trees, X, thresholds, cfg.ring, encoded=(mode == "mirror"))
    return cfg.eta * m if cfg.eta != 1.0 else m


# -- brute-force micro-oracles -------------------------------------------------


def oracle_dot(s, g):
    """Plain dot product of an indicator with gradients."""
    return (np.asarray(s, dtype=np.float64) * np.asarray(g, dtype=np.float64)).sum()


def oracle_signed_lt(x, w, ell: int):
    """Brute-force signed comparison over an ell-bit ring."""
    sx = np.asarray(x, dtype=np.uint64).astype(np.int64)
    sw = np.asarray(w, dtype=np.uint64).astype(np.int64)
    if ell < 64:
        half, full = np.int64(1 << (ell - 1)), np.int64(1 << ell)
        sx = np.where(sx >= half, sx - full, sx)
        sw = np.where(sw >= half, sw - full, sw)
    return (sx < sw).astype(np.uint64)


def oracle_piecewise(x, points, values):
    """Left-endpoint piecewise lookup with saturation."""
    idx = np.searchsorted(points, x, side="right") - 1
    return np.asarray(values)[np.clip(idx, 0, len(values) - 1)]


def oracle_compressed_mul(s: int, g: int, ell: int) -> int:
    """Single-element s*g mod 2^ell with signed g."""
    return (s * g) % (1 << ell)
