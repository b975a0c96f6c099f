"""Division-free split gain.

The surrogate gain is G* = (H_R+gamma)*G_L^2 + (H_L+gamma)*G_R^2, output
with sign +G* when 2*H_L < H_X and -G* otherwise. G* is non-negative, so
the sign alone encodes the case split; within candidates sharing the same
H_L (hence the same denominators) the surrogate orders candidates exactly
like the exact division-based gain.

The secure evaluation costs 3 rounds and exactly 9*ell bits per party per
candidate: one masked comparison open (ell) and two square opens (2*ell)
share round one, two Beaver products take round two (4*ell), and the
final sign product takes round three (2*ell).
"""

from __future__ import annotations

import numpy as np

from .compare import lt_gate_finish, lt_gate_start
from .sharing import (
    Session,
    mul_finish,
    mul_start,
    square_finish,
    square_start,
    trunc_share,
)


def gain_plain(G_L, G_R, H_L, H_R, H_X, gamma: float) -> np.ndarray:
    """Plaintext division-free gain (real arithmetic)."""
    G_L, G_R, H_L, H_R, H_X = (np.asarray(v, dtype=np.float64) for v in (G_L, G_R, H_L, H_R, H_X))
    g_star = (H_R + gamma) * G_L**2 + (H_L + gamma) * G_R**2
    return np.where(2.0 * H_L < H_X, g_star, -g_star)


def exact_gain_plain(G_L, G_R, G_X, H_L, H_R, H_X, gamma: float) -> np.ndarray:
    """The exact division-based gain (reference oracle only)."""
    G_L, G_R, G_X, H_L, H_R, H_X = (
        np.asarray(v, dtype=np.float64) for v in (G_L, G_R, G_X, H_L, H_R, H_X)
    )
    return 0.5 * (
        G_L**2 / (H_L + gamma) + G_R**2 / (H_R + gamma) - G_X**2 / (H_X + gamma)
    )


def gain_fixed(G_L, G_R, H_L, H_R, H_X, gamma_enc: int, ell_f: int) -> np.ndarray:
    """Fixed-point mirror of the secure gain (exact floor truncations).

    Operates on signed encoded values (int64); overflow is excluded by
    the configuration budget.
    """
    G_L, G_R, H_L, H_R, H_X = (np.asarray(v, dtype=np.int64) for v in (G_L, G_R, H_L, H_R, H_X))
    f = np.int64(ell_f)
    sq_l = (G_L * G_L) >> f
    sq_r = (G_R * G_R) >> f
    t1 = ((H_R + np.int64(gamma_enc)) * sq_l) >> f
    t2 = ((H_L + np.int64(gamma_enc)) * sq_r) >> f
    g_star = t1 + t2
    return np.where(2 * H_L < H_X, g_star, -g_star)


def gain_online(sess: Session, G_L, G_R, H_L, H_R, H_X, gamma_enc: int, tag: str = "gain") -> np.ndarray:
    """Shares of the division-free gain for a batch of candidates."""
    cfg = sess.cfg
    G_L, G_R, H_L, H_R, H_X = (
        np.asarray(v, dtype=np.uint64).ravel() for v in (G_L, G_R, H_L, H_R, H_X)
    )
    with sess.meter.scope(tag):
        # round 1: sign comparison open + the two square opens
        st_lt = lt_gate_start(sess, (np.uint64(2) * H_L - H_X) & cfg.mask, 0, tag=tag)
        st_sl = square_start(sess, G_L, tag)
        st_sr = square_start(sess, G_R, tag)
        reader = sess.flush()
        sign = lt_gate_finish(sess, st_lt, reader)
        sq_l = trunc_share(square_finish(sess, st_sl, reader), sess.b, cfg)
        sq_r = trunc_share(square_finish(sess, st_sr, reader), sess.b, cfg)

        # round 2: weight the squares by the opposite branch hessians
        gam = np.uint64(gamma_enc) if sess.b == 1 else np.uint64(0)
        st_1 = mul_start(sess, (H_R + gam) & cfg.mask, sq_l, tag)
        st_2 = mul_start(sess, (H_L + gam) & cfg.mask, sq_r, tag)
        reader = sess.flush()
        t1 = trunc_share(mul_finish(sess, st_1, reader), sess.b, cfg)
        t2 = trunc_share(mul_finish(sess, st_2, reader), sess.b, cfg)
        g_star = (t1 + t2) & cfg.mask

        # round 3: apply the sign: (2*Sign - 1) * G*
        coeff = (np.uint64(2) * sign) & cfg.mask
        if sess.b == 1:
            coeff = (coeff - np.uint64(1)) & cfg.mask
        st_3 = mul_start(sess, coeff, g_star, tag)
        return mul_finish(sess, st_3, sess.flush())
