"""Training configuration, tree model structures and serialization.

Trees are complete binary trees of depth D: 2^D - 1 internal nodes in
level order (children of node i are 2i+1 and 2i+2) and 2^D leaves left
to right. A distributed tree stores (feature, bucket) only at the nodes
the party owns, (-1, -1) elsewhere, and additive shares of the leaf
weights; opening both parties' documents yields a plaintext-evaluable
tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .ring import RingConfig

# Public per-candidate tie-breaking offset, in ring ulps. Candidate k out
# of K gets (K-1-k) * ARGMAX_OFFSET_ULP added to its gain by both the
# secure path and the mirror oracle, so exactly tied gains resolve to the
# lowest (feature, bucket) index deterministically on both sides despite
# the one-ulp truncation noise of the secure gain pipeline.
ARGMAX_OFFSET_ULP = 1 << 10


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters shared by the secure trainer and the oracles."""

    trees: int = 5
    depth: int = 4
    buckets: int = 8
    segments: int = 12
    gamma: float = 1.0
    eta: float = 1.0
    ring: RingConfig = field(default_factory=RingConfig)
    seed: int = 0x2026_0823

    def __post_init__(self):
        if self.buckets < 2 or self.depth < 1 or self.segments < 1 or self.trees < 1:
            raise ValueError("need buckets >= 2, depth >= 1, segments >= 1, trees >= 1")

    def validate_for(self, n_samples: int):
        self.ring.check_overflow_budget(n_samples)

    def echo(self) -> dict:
        return {
            "trees": self.trees,
            "depth": self.depth,
            "buckets": self.buckets,
            "segments": self.segments,
            "gamma": self.gamma,
            "eta": self.eta,
            "ring_bits": self.ring.ell,
            "frac_bits": self.ring.ell_f,
            "seed": self.seed,
        }


def candidate_grid(n_features: int, buckets: int):
    """Public candidate order: feature-major, bucket-minor; u is 1-based."""
    z = np.repeat(np.arange(n_features), buckets - 1)
    u = np.tile(np.arange(1, buckets), n_features)
    return z, u


def leaf_paths(depth: int):
    """For each leaf, the (node_index, go_right_bit) constraints on its path."""
    paths = []
    for k in range(1 << depth):
        node, steps = 0, []
        for level in range(depth - 1, -1, -1):
            bit = (k >> level) & 1
            steps.append((node, bit))
            node = 2 * node + 1 + bit
        paths.append(steps)
    return paths


@dataclass
class PartyTree:
    """One party's half of a trained tree."""

    nodes: list  # [(feature, bucket)] or (-1, -1), level order, length 2^D - 1
    leaves: np.ndarray  # (2^D,) uint64 leaf weight shares


@dataclass
class PlainTree:
    """Fully known tree (mirror/exact oracles, or an opened secure model)."""

    nodes: list  # [(feature, bucket)], level order
    leaves: np.ndarray  # (2^D,) encoded uint64 (mirror) or float (exact)


def merge_party_trees(t0: PartyTree, t1: PartyTree, cfg: RingConfig) -> PlainTree:
    """Combine both halves: resolve node ownership, open leaf shares."""
    nodes = []
    for a, b in zip(t0.nodes, t1.nodes):
        if (a[0] >= 0) == (b[0] >= 0):
            raise ValueError("exactly one party must own each internal node")
        nodes.append(a if a[0] >= 0 else b)
    return PlainTree(nodes, (t0.leaves + t1.leaves) & cfg.mask)


def eval_plain_trees(trees: list[PlainTree], X: np.ndarray, thresholds, cfg: RingConfig, encoded: bool = True) -> np.ndarray:
    """Sum of leaf weights along each sample's root-to-leaf paths."""
    n = X.shape[0]
    margins = np.zeros(n, dtype=np.float64)
    for t in trees:
        node = np.zeros(n, dtype=np.int64)
        n_internal = len(t.nodes)
        while True:
            z = np.array([t.nodes[i][0] for i in node])
            u = np.array([t.nodes[i][1] for i in node])
            thr = np.array([thresholds[zz][uu - 1] for zz, uu in zip(z, u)])
            go_right = ~(X[np.arange(n), z] < thr)
            node = 2 * node + 1 + go_right
            if node[0] >= n_internal:
                break
        leaf = node - n_internal
        w = cfg.decode(t.leaves[leaf]) if encoded else np.asarray(t.leaves, dtype=np.float64)[leaf]
        margins += w
    return margins


# -- serialization ------------------------------------------------------------


def party_model_doc(trees: list[PartyTree], party: int, cfg: TrainConfig) -> dict:
    return {
        "format": "mpcgbdt-model-v1",
        "party": party,
        "config": cfg.echo(),
        "trees": [
            {
                "nodes": [[int(z), int(u)] for z, u in t.nodes],
                "leaves": [f"{int(v):016x}" for v in t.leaves],
            }
            for t in trees
        ],
    }


def plain_model_doc(trees: list[PlainTree], cfg: TrainConfig, encoded: bool = True) -> dict:
    return {
        "format": "mpcgbdt-model-v1",
        "party": None,
        "config": cfg.echo(),
        "trees": [
            {
                "nodes": [[int(z), int(u)] for z, u in t.nodes],
                "leaves": [f"{int(v):016x}" for v in t.leaves]
                if encoded
                else [float(v) for v in t.leaves],
            }
            for t in trees
        ],
    }


def trees_from_doc(doc: dict) -> list:
    """Parse a model document back into PartyTree/PlainTree objects."""
    out = []
    for t in doc["trees"]:
        nodes = [tuple(n) for n in t["nodes"]]
        raw = t["leaves"]
        if raw and isinstance(raw[0], str):
            leaves = np.array([int(v, 16) for v in raw], dtype=np.uint64)
        else:
            leaves = np.array(raw, dtype=np.float64)
        cls = PlainTree if doc.get("party") is None else PartyTree
        out.append(cls(nodes, leaves))
    return out


def load_model(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def save_model(doc: dict, path: str):
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
