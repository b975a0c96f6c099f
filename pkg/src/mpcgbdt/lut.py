"""Lookup-table approximations of the sigmoid and the leaf weight.

Both tables segment [-5, 5] into n equal intervals with boundaries
omega_i = -5 + 10*i/n. A secure evaluation computes one comparison bit
per boundary (n comparison gates sharing one round, n*ell bits per
party) and telescopes the public entry differences:

    out = entry_0 + sum_i 1{x >= omega_i} * (entry_i - entry_{i-1})

so the reconstruction equals the left-endpoint table entry of the
segment containing x, saturating at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compare import ge_bit
from .dealer import LtGateBatch
from .ring import RingConfig
from .sharing import Session


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def segment_points(n: int) -> np.ndarray:
    """The n+1 grid points omega_i = -5 + 10*i/n."""
    return -5.0 + 10.0 * np.arange(n + 1) / n


@dataclass(frozen=True)
class SigmoidTable:
    """Fixed-point sigmoid values (and their p*(1-p) companions) on the grid."""

    n: int
    omegas: np.ndarray  # (n+1,) float grid points
    omegas_enc: np.ndarray  # (n+1,) uint64 encoded grid points
    entries: np.ndarray  # (n+1,) uint64 encoded sigmoid values
    hess: np.ndarray  # (n+1,) uint64 encoded p*(1-p) values

    @staticmethod
    def build(n: int, cfg: RingConfig) -> "SigmoidTable":
        om = segment_points(n)
        p = sigmoid(om)
        return SigmoidTable(n, om, cfg.encode(om), cfg.encode(p), cfg.encode(p * (1 - p)))


@dataclass(frozen=True)
class LeafWeightTable:
    """The leaf-weight grid itself: candidate weights omega'_i in [-5, 5]."""

    n: int
    omegas: np.ndarray
    entries: np.ndarray  # (n+1,) uint64 encoded grid points

    @staticmethod
    def build(n: int, cfg: RingConfig) -> "LeafWeightTable":
        om = segment_points(n)
        return LeafWeightTable(n, om, cfg.encode(om))


# -- plaintext references ----------------------------------------------------


def sigmoid_plain(x, n: int) -> np.ndarray:
    """Piecewise-constant sigmoid: left endpoint value, saturating at +-5."""
    x = np.asarray(x, dtype=np.float64)
    j = np.clip(np.floor((x + 5.0) * n / 10.0).astype(np.int64), 0, n)
    return sigmoid(segment_points(n)[j])


def segment_index_fixed(x_enc, omegas_enc, cfg: RingConfig) -> np.ndarray:
    """Segment index using encoded comparisons, matching the secure gates."""
    xs = cfg.signed(np.asarray(x_enc, dtype=np.uint64))
    bounds = cfg.signed(np.asarray(omegas_enc[1:], dtype=np.uint64))
    return (xs[..., None] >= bounds).sum(axis=-1)


def leafweight_plain(G, H, gamma: float, n: int) -> np.ndarray:
    """Eq.-style plaintext leaf weight snapped to the grid: t = -G/(H+gamma)."""
    t = -np.asarray(G, dtype=np.float64) / (np.asarray(H, dtype=np.float64) + gamma)
    j = np.clip(np.floor((t + 5.0) * n / 10.0).astype(np.int64), 0, n)
    return segment_points(n)[j]


def leafweight_index_fixed(g_enc, h_enc, gamma_enc: int, table: LeafWeightTable, cfg: RingConfig) -> np.ndarray:
    """Grid index via the integer comparisons the secure protocol performs.

    beta_i = 1{ -G*2^ell_f - omega'_i * (H + gamma) >= 0 }, evaluated at
    double scale so no truncation is involved.
    """
    g = cfg.signed(np.asarray(g_enc, dtype=np.uint64))
    h = cfg.signed(np.asarray(h_enc, dtype=np.uint64))
    om = cfg.signed(table.entries[1:])
    x = -(g[..., None] << np.int64(cfg.ell_f)) - om * (h[..., None] + np.int64(gamma_enc))
    return (x >= 0).sum(axis=-1)


# -- secure protocols ---------------------------------------------------------


def _telescope(sess: Session, base: np.uint64, diffs: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """entry_0 + sum_i bits_i * diff_i over shares; bits shaped (n, K)."""
    out = (diffs[:, None] * bits).sum(axis=0, dtype=np.uint64)
    if sess.b == 1:
        out = out + base
    return out & sess.cfg.mask


def sigmoid_online(
    sess: Session,
    x,
    table: SigmoidTable,
    gates: LtGateBatch | None = None,
    with_hess: bool = False,
    tag: str = "sigmoid",
):
    """Secure piecewise sigmoid; one round, n*ell bits per input per party.

    With ``with_hess`` the same comparison bits also produce shares of
    p*(1-p) at zero extra communication.
    """
    cfg = sess.cfg
    x = np.asarray(x, dtype=np.uint64).ravel()
    n, k = table.n, x.size
    xs = np.broadcast_to(x[None, :], (n, k)).ravel()
    oms = np.broadcast_to(table.omegas_enc[1:, None], (n, k)).ravel()
    if gates is None:
        gates = sess.dealer.lt_gates(n * k)
    beta = ge_bit(sess, xs, oms, gates, tag).reshape(n, k)
    p = _telescope(sess, table.entries[0], (table.entries[1:] - table.entries[:-1]) & cfg.mask, beta)
    if not with_hess:
        return p
    h = _telescope(sess, table.hess[0], (table.hess[1:] - table.hess[:-1]) & cfg.mask, beta)
    return p, h


def leafweight_online(
    sess: Session,
    G,
    H,
    gamma_enc: int,
    table: LeafWeightTable,
    gates: LtGateBatch | None = None,
    tag: str = "leaf",
):
    """Secure grid-snapped leaf weight; one round, n*ell bits per leaf.

    The comparisons run at double fixed-point scale (no truncation), so
    the selected grid index is exact: beta_i tests
    -G*2^ell_f - omega'_i*(H+gamma) >= 0, i.e. -G/(H+gamma) >= omega'_i.
    """
    cfg = sess.cfg
    G = np.asarray(G, dtype=np.uint64).ravel()
    H = np.asarray(H, dtype=np.uint64).ravel()
    n, k = table.n, G.size
    hg = (H + (np.uint64(gamma_enc) if sess.b == 1 else np.uint64(0))) & cfg.mask
    gs = (-(G << np.uint64(cfg.ell_f))) & cfg.mask
    x = (gs[None, :] - table.entries[1:, None] * hg[None, :]) & cfg.mask
    if gates is None:
        gates = sess.dealer.lt_gates(n * k)
    beta = ge_bit(sess, x.ravel(), 0, gates, tag).reshape(n, k)
    return _telescope(sess, table.entries[0], (table.entries[1:] - table.entries[:-1]) & cfg.mask, beta)
