import numpy as np

from conftest import reconstruct, run_protocol
from mpcgbdt.lut import (
    LeafWeightTable,
    SigmoidTable,
    leafweight_index_fixed,
    leafweight_online,
    leafweight_plain,
    segment_index_fixed,
    segment_points,
    sigmoid,
    sigmoid_online,
    sigmoid_plain,
)
from mpcgbdt.ring import RingConfig
from mpcgbdt.sharing import share_value


RC = RingConfig()
N_SEG = 12


def test_grid_points():
    pts = segment_points(10)
    assert pts[0] == -5.0 and pts[-1] == 5.0
    assert np.allclose(np.diff(pts), 1.0)


def _sigmoid_secure(x_enc, with_hess=False, seed=0):
    tab = SigmoidTable.build(N_SEG, RC)
    rng = np.random.default_rng(seed)
    x0, x1 = share_value(x_enc, RC, rng)

    def body(sess, sh):
        return sigmoid_online(sess, sh, tab, with_hess=with_hess)

    o0, o1, m0, _ = run_protocol(body, RC, seed=seed, args0=(x0,), args1=(x1,))
    if with_hess:
        return (
            reconstruct(o0[0], o1[0], RC),
            reconstruct(o0[1], o1[1], RC),
            m0,
        )
    return reconstruct(o0, o1, RC), m0


def test_secure_sigmoid_equals_table_lookup():
    """Secure output is bit-identical to the plaintext indexed entry."""
    rng = np.random.default_rng(1)
    x = rng.uniform(-8, 8, 10_000)
    x_enc = RC.encode(x)
    tab = SigmoidTable.build(N_SEG, RC)
    got, _ = _sigmoid_secure(x_enc)
    want = tab.entries[segment_index_fixed(x_enc, tab.omegas_enc, RC)]
    assert (got == want).all()


def test_sigmoid_approximation_bound():
    rng = np.random.default_rng(2)
    x = rng.uniform(-10, 10, 10_000)
    approx = RC.decode(SigmoidTable.build(N_SEG, RC).entries)[
        segment_index_fixed(RC.encode(x), SigmoidTable.build(N_SEG, RC).omegas_enc, RC)
    ]
    assert np.abs(approx - sigmoid(x)).max() <= 0.21


def test_sigmoid_hess_shares_same_round():
    x_enc = RC.encode(np.linspace(-6, 6, 50))
    p, h, m = _sigmoid_secure(x_enc, with_hess=True)
    tab = SigmoidTable.build(N_SEG, RC)
    j = segment_index_fixed(x_enc, tab.omegas_enc, RC)
    assert (p == tab.entries[j]).all()
    assert (h == tab.hess[j]).all()
    assert m.rounds == 1
    assert m.bits_sent == 50 * N_SEG * RC.ell  # the hessian costs nothing extra


def test_sigmoid_plain_reference():
    x = np.array([-100.0, -5.0, 0.0, 4.999, 100.0])
    out = sigmoid_plain(x, N_SEG)
    assert out[0] == sigmoid(-5.0)  # saturates low
    assert out[-1] == sigmoid(5.0)  # saturates high
    assert np.all(np.diff(sigmoid_plain(np.linspace(-7, 7, 200), N_SEG)) >= 0)


def test_leafweight_range_and_exactness():
    """Secure leaf weight equals the mirror index rule and stays in [-5, 5]."""
    rng = np.random.default_rng(3)
    k = 64
    G = RC.encode(rng.uniform(-200, 200, k))
    H = RC.encode(rng.uniform(0.01, 150, k))
    gamma_enc = int(RC.encode(1.0))
    tab = LeafWeightTable.build(N_SEG, RC)
    g0, g1 = share_value(G, RC, rng)
    h0, h1 = share_value(H, RC, rng)

    def body(sess, gg, hh):
        return leafweight_online(sess, gg, hh, gamma_enc, tab)

    o0, o1, m0, _ = run_protocol(body, RC, args0=(g0, h0), args1=(g1, h1))
    got = reconstruct(o0, o1, RC)
    want = tab.entries[leafweight_index_fixed(G, H, gamma_enc, tab, RC)]
    assert (got == want).all()
    w = RC.decode(got)
    assert (w >= -5.0).all() and (w <= 5.0).all()
    assert m0.rounds == 1 and m0.bits_sent == k * N_SEG * RC.ell


def test_leafweight_tracks_ratio():
    """The snapped weight is within one grid step of -G/(H+gamma)."""
    rng = np.random.default_rng(4)
    G = rng.uniform(-20, 20, 500)
    H = rng.uniform(0.1, 30, 500)
    tab = LeafWeightTable.build(N_SEG, RC)
    j = leafweight_index_fixed(RC.encode(G), RC.encode(H), int(RC.encode(1.0)), tab, RC)
    got = RC.decode(tab.entries[j])
    t = np.clip(-G / (H + 1.0), -5.0, 5.0)
    assert np.abs(got - t).max() <= 10.0 / N_SEG + 1e-9


def test_leafweight_plain_matches_fixed_index_off_grid():
    """Float and integer index rules agree away from encoding boundaries."""
    rng = np.random.default_rng(5)
    G = rng.uniform(-20, 20, 2000)
    H = rng.uniform(0.1, 30, 2000)
    tab = LeafWeightTable.build(N_SEG, RC)
    t = -G / (H + 1.0)
    pos = (t + 5.0) * N_SEG / 10.0
    off_grid = np.abs(pos - np.round(pos)) > 1e-3
    jf = np.clip(np.floor(pos).astype(int), 0, N_SEG)
    ji = leafweight_index_fixed(RC.encode(G), RC.encode(H), int(RC.encode(1.0)), tab, RC)
    agree = (jf == ji) | ~off_grid
    assert agree.mean() > 0.999
    assert (leafweight_plain(G, H, 1.0, N_SEG) == segment_points(N_SEG)[jf]).all()
