"""Secure two-party GBDT training and prediction.

Both parties run :func:`train_party` in lockstep over the transport
fabric. Feature columns are vertically partitioned (party 0's features
come first in the global index); party 1 additionally holds the labels
as degenerate shares. Each tree is a complete binary tree: per node the
parties evaluate every (feature, bucket) candidate with the compressed
aggregation and division-free gain protocols, select the best with an
oblivious argmax, and reveal the winning identifier only to its owner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregate import agg_online, bitmul
from .compare import argmax, lt_gate
from .dealer import Dealer
from .lut import LeafWeightTable, SigmoidTable, leafweight_online, sigmoid_online
from .gain import gain_online
from .ring import RingConfig
from .sharing import (
    Session,
    const_share,
    degenerate_share,
    open_values,
    mul,
    trunc_share,
)
from .transport import run_two_party
from .trees import (
    ARGMAX_OFFSET_ULP,
    PartyTree,
    TrainConfig,
    candidate_grid,
    leaf_paths,
    party_model_doc,
)


@dataclass
class PartyData:
    """One party's private inputs.

    Attributes:
        X: (N, F_b) float feature columns owned by this party.
        thresholds: per local feature, the B-1 ascending split thresholds.
        y: labels in {0,1} (party 1 only, None for party 0).
        n_features_total: global feature count F.
        n_features_p0: the partition point F_0 (party 0's column count).
    """

    X: np.ndarray
    thresholds: list
    y: np.ndarray | None
    n_features_total: int
    n_features_p0: int

    def owner_of(self, z: int) -> int:
        return 0 if z < self.n_features_p0 else 1

    def local_index(self, z: int) -> int:
        return z if z < self.n_features_p0 else z - self.n_features_p0


def _candidate_tests(data: PartyData, party: int, buckets: int) -> np.ndarray:
    """(K, N) degenerate-share bit matrix of every candidate's split test."""
    cand_z, cand_u = candidate_grid(data.n_features_total, buckets)
    n = data.X.shape[0]
    tests = np.zeros((cand_z.size, n), dtype=np.uint64)
    for k, (z, u) in enumerate(zip(cand_z, cand_u)):
        if data.owner_of(z) == party:
            j = data.local_index(z)
            tests[k] = (data.X[:, j] < data.thresholds[j][u - 1]).astype(np.uint64)
    return tests


def _split_test(data: PartyData, z: int, u: int) -> np.ndarray:
    j = data.local_index(z)
    return (data.X[:, j] < data.thresholds[j][u - 1]).astype(np.uint64)


def train_party(ep, data: PartyData, cfg: TrainConfig):
    """SPMD body of secure training; returns (PartyTree list, margin shares)."""
    rc = cfg.ring
    b = ep.party
    n = data.X.shape[0]
    cfg.validate_for(n)
    dealer = Dealer(cfg.seed, rc, b)
    sess = Session(ep, dealer, rc)

    sig_tab = SigmoidTable.build(cfg.segments, rc)
    leaf_tab = LeafWeightTable.build(cfg.segments, rc)
    gamma_enc = int(rc.encode(cfg.gamma))
    eta_enc = int(rc.encode(cfg.eta))
    cand_z, cand_u = candidate_grid(data.n_features_total, cfg.buckets)
    n_cand = cand_z.size
    offsets = ((n_cand - 1 - np.arange(n_cand)).astype(np.uint64) * np.uint64(ARGMAX_OFFSET_ULP)) & rc.mask
    tests = _candidate_tests(data, b, cfg.buckets)

    y_share = degenerate_share(
        rc.encode(data.y.astype(np.float64)) if data.y is not None else np.zeros(n),
        owner=1,
        party=b,
        cfg=rc,
    )

    margins = np.zeros(n, dtype=np.uint64)
    trees: list[PartyTree] = []

    for _ in range(cfg.trees):
        with sess.meter.scope("gradients"):
            p, h = sigmoid_online(sess, margins, sig_tab, with_hess=True)
        g = (p - y_share) & rc.mask

        nodes: list = [None] * ((1 << cfg.depth) - 1)
        leaves: list = []
        leaf_spaces: list = []

        def build(depth: int, space: np.ndarray, node_idx: int = 0):
            if depth == cfg.depth:
                with sess.meter.scope("leaf"):
                    gh = agg_online(
                        sess,
                        np.stack([space, space]),
                        np.stack([g, h]),
                    )
                    w = leafweight_online(sess, gh[:1], gh[1:], gamma_enc, leaf_tab)
                leaves.append(w[0])
                leaf_spaces.append(space)
                return

            with sess.meter.scope("split-search"):
                s_left = bitmul(sess, tests, space[None, :])
                s_right = (space[None, :] - s_left) & rc.mask
                stacked_s = np.concatenate(
                    [s_left, s_left, s_right, s_right, space[None, :]]
                )
                stacked_g = np.concatenate(
                    [
                        np.broadcast_to(g, s_left.shape),
                        np.broadcast_to(h, s_left.shape),
                        np.broadcast_to(g, s_left.shape),
                        np.broadcast_to(h, s_left.shape),
                        h[None, :],
                    ]
                )
                aggs = agg_online(sess, stacked_s, stacked_g)
                g_l, h_l = aggs[:n_cand], aggs[n_cand : 2 * n_cand]
                g_r, h_r = aggs[2 * n_cand : 3 * n_cand], aggs[3 * n_cand : 4 * n_cand]
                h_x = aggs[4 * n_cand]

                gains = gain_online(
                    sess, g_l, g_r, h_l, h_r, np.broadcast_to(h_x, (n_cand,)), gamma_enc
                )
                if b == 1:
                    gains = (gains + offsets) & rc.mask
                _, (z_star, u_star) = argmax(
                    sess,
                    gains,
                    [const_share(cand_z, b, rc, cand_z.shape), const_share(cand_u, b, rc, cand_u.shape)],
                )

            # reveal the winning identifier to its owner only; the peer
            # learns nothing beyond the ownership bit c
            with sess.meter.scope("open-split"):
                c = int(
                    open_values(
                        sess, lt_gate(sess, z_star, np.uint64(data.n_features_p0))
                    )[0]
                )
                owner = 0 if c == 1 else 1
                if b != owner:
                    sess.push(np.array([z_star, u_star]), tag="open-split")
                    sess.flush().done()
                    test_share = np.zeros(n, dtype=np.uint64)
                    nodes[node_idx] = (-1, -1)
                else:
                    reader = sess.flush()
                    zu = (np.array([z_star, u_star]) + reader.read_u64(2, rc.ell)) & rc.mask
                    z_pub, u_pub = int(zu[0]), int(zu[1])
                    test_share = _split_test(data, z_pub, u_pub)
                    nodes[node_idx] = (z_pub, u_pub)

            with sess.meter.scope("split-apply"):
                left = bitmul(sess, test_share, space)
            build(depth + 1, left, 2 * node_idx + 1)
            build(depth + 1, (space - left) & rc.mask, 2 * node_idx + 2)

        root = const_share(np.uint64(1), b, rc, (n,))
        build(0, root)
        trees.append(PartyTree(nodes, np.array(leaves, dtype=np.uint64)))

        # margin update: each sample collects eta * w of the leaf it reached
        with sess.meter.scope("margin-update"):
            w_vec = trees[-1].leaves
            if cfg.eta != 1.0:
                w_vec = trunc_share((w_vec * np.uint64(eta_enc)) & rc.mask, b, rc)
            contrib = mul(sess, np.stack(leaf_spaces), w_vec[:, None])
            margins = (margins + contrib.sum(axis=0, dtype=np.uint64)) & rc.mask

    return trees, margins


def predict_party(ep, data: PartyData, trees: list[PartyTree], cfg: TrainConfig):
    """SPMD secure prediction; returns margin shares for data.X's rows."""
    rc = cfg.ring
    b = ep.party
    n = data.X.shape[0]
    dealer = Dealer(cfg.seed ^ 0x5EED, rc, b)
    sess = Session(ep, dealer, rc)
    paths = leaf_paths(cfg.depth)
    margins = np.zeros(n, dtype=np.uint64)
    eta_enc = int(rc.encode(cfg.eta))

    for tree in trees:
        node_tests = {}
        for idx, (z, u) in enumerate(tree.nodes):
            if z >= 0:
                node_tests[idx] = _split_test(data, z, u)
        path_bits = np.ones((n, len(paths)), dtype=np.uint64)
        for k, steps in enumerate(paths):
            for node_idx, go_right in steps:
                if node_idx in node_tests:
                    t = node_tests[node_idx]
                    path_bits[:, k] &= (np.uint64(1) - t) if go_right else t

        own0 = degenerate_share(path_bits, owner=0, party=b, cfg=rc)
        own1 = degenerate_share(path_bits, owner=1, party=b, cfg=rc)
        with sess.meter.scope("predict"):
            indicator = bitmul(sess, own0, own1)
            w_vec = tree.leaves
            if cfg.eta != 1.0:
                w_vec = trunc_share((w_vec * np.uint64(eta_enc)) & rc.mask, b, rc)
            contrib = mul(sess, indicator, w_vec[None, :])
        margins = (margins + contrib.sum(axis=1, dtype=np.uint64)) & rc.mask
    return margins


def train_two_party(data0: PartyData, data1: PartyData, cfg: TrainConfig, timeout: float = 300.0):
    """Orchestrate a full secure training session.

    Returns:
        (trees0, trees1, margins0, margins1, meter0, meter1).
    """
    (t0, m0), (t1, m1), me0, me1 = run_two_party(
        train_party, (data0, cfg), (data1, cfg), timeout=timeout
    )
    return t0, t1, m0, m1, me0, me1


def predict_two_party(data0, data1, trees0, trees1, cfg: TrainConfig, timeout: float = 300.0):
    m0, m1, me0, me1 = run_two_party(
        predict_party, (data0, trees0, cfg), (data1, trees1, cfg), timeout=timeout
    )
    return m0, m1, me0, me1
