"""End-to-end acceptance gate.

Each test covers one release criterion and prints a single PASS/FAIL
line; run with ``pytest -v -s tests/test_acceptance.py`` to see them.
Criterion 9 (wall-clock comparisons against external systems at
datacenter scale) is not reproducible on a desk machine and is
substituted by the analytic round/byte accounting of criterion 3 plus
the LAN/WAN time estimates reported here.
"""

import time

import numpy as np
import pytest

from conftest import reconstruct, run_protocol
from mpcgbdt.aggregate import agg_online
from mpcgbdt.data import Dataset, bin_features, load_fixture, split_train_test, vertical_split
from mpcgbdt.dcf import dcf_eval, dcf_gen
from mpcgbdt.dealer import AggKeys
from mpcgbdt.gain import exact_gain_plain, gain_online, gain_plain
from mpcgbdt.lut import LeafWeightTable, SigmoidTable, leafweight_online, segment_index_fixed, sigmoid, sigmoid_online
from mpcgbdt.reference import plain_train, predict_margins
from mpcgbdt.ring import RingConfig
from mpcgbdt.sharing import share_value
from mpcgbdt.trainer import train_two_party
from mpcgbdt.transport import LAN, WAN, estimate_time
from mpcgbdt.trees import TrainConfig, eval_plain_trees, merge_party_trees

RC = RingConfig()
SPLIT_SEED = 24


def _report(num: int, name: str, ok: bool, detail: str = ""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {name}"
    if detail:
        line += f" ({detail})"
    print("\n" + line)
    assert ok, line


def test_criterion_1_comparison_fss_exhaustive():
    """All 65,536 (alpha, x) pairs on the 8-bit ring, exact, under 10 s."""
    rc = RingConfig(8, 3)
    t0 = time.time()
    alphas = np.arange(256, dtype=np.uint64)
    k0, k1 = dcf_gen(alphas, rc, np.random.default_rng(0))
    ok = True
    for x in range(256):
        xv = np.full(256, x, dtype=np.uint64)
        got = (dcf_eval(k0, xv, rc) + dcf_eval(k1, xv, rc)) & rc.mask
        if not (got == (xv < alphas).astype(np.uint64)).all():
            ok = False
            break
    elapsed = time.time() - t0
    _report(1, "comparison FSS exhaustive on 8-bit ring", ok and elapsed < 10,
            f"65536 cases in {elapsed:.2f}s")


def test_criterion_2_aggregation_oracle_equivalence():
    """Exhaustive (s, g, r_s, r_g) on the small ring plus 10^6 random
    full-width trials, all exact, under 1 minute."""
    t0 = time.time()
    rc = RingConfig(8, 3)
    lc = rc.ell_c  # 5
    cases = ok = 0
    for r_s in (0, 1):
        for r_g in range(1 << lc):
            keys0 = AggKeys(
                r_s=np.full((32, 1), r_s, np.uint64),
                r_g=np.full((32, 1), r_g, np.uint64),
                u=np.full((32, 1), r_s * r_g, np.uint64),
                v=np.full((32, 1), r_g >> (lc - 1), np.uint64),
                m=np.full((32, 1), r_s * (r_g >> (lc - 1)), np.uint64),
            )
            keys1 = AggKeys(*(np.zeros((32, 1), np.uint64) for _ in range(5)))
            s = np.repeat(np.array([0, 1], np.uint64), 16)
            g = np.tile(np.arange(-8, 8, dtype=np.int64), 2).astype(np.uint64) & rc.mask
            rng = np.random.default_rng(r_s * 32 + r_g)
            s0, s1 = share_value(s, rc, rng)
            g0, g1 = share_value(g, rc, rng)

            def body(sess, ss, gg, kk):
                return agg_online(sess, ss[:, None], gg[:, None], keys=kk)

            o0, o1, *_ = run_protocol(body, rc, args0=(s0, g0, keys0), args1=(s1, g1, keys1))
            got = rc.signed(reconstruct(o0, o1, rc))
            want = s.astype(np.int64) * rc.signed(g)
            cases += 32
            ok += int((got == want).all()) * 32

    rng = np.random.default_rng(1)
    n = 1_000_000
    s = rng.integers(0, 2, n).astype(np.uint64)
    g = RC.reduce(rng.integers(-(1 << 16), 1 << 16, n).astype(np.int64).astype(np.uint64))
    s0, s1 = share_value(s, RC, rng)
    g0, g1 = share_value(g, RC, rng)
    o0, o1, *_ = run_protocol(lambda sess, a, b: agg_online(sess, a, b), RC, args0=(s0, g0), args1=(s1, g1))
    rand_ok = int(RC.signed(reconstruct(o0, o1, RC))) == int((s.astype(np.int64) * RC.signed(g)).sum())
    elapsed = time.time() - t0
    _report(2, "compressed aggregation oracle equivalence",
            ok == cases == 2048 and rand_ok and elapsed < 60,
            f"{cases} exhaustive + 10^6 random in {elapsed:.1f}s")


def test_criterion_3_communication_formulas():
    n = 10_000
    zeros = np.zeros(n, np.uint64)
    _, _, m_agg, _ = run_protocol(lambda s, a, b: agg_online(s, a, b), RC, args0=(zeros, zeros), args1=(zeros, zeros))
    agg_ok = m_agg.bits_sent == n * (RC.ell_f + 3) and m_agg.rounds == 1
    saving_ok = RC.ell - RC.ell_c == 46  # vs a full-width open of the gradient

    tab = SigmoidTable.build(12, RC)
    k = 32
    _, _, m_sig, _ = run_protocol(lambda s: sigmoid_online(s, np.zeros(k, np.uint64), tab), RC)
    sig_ok = m_sig.rounds == 1 and m_sig.bits_sent == k * 12 * RC.ell

    _, _, m_gain, _ = run_protocol(
        lambda s: gain_online(s, *(np.zeros(k, np.uint64) for _ in range(5)), int(RC.encode(1.0))), RC
    )
    gain_ok = m_gain.rounds <= 5 and m_gain.bits_sent <= k * 9 * RC.ell
    _report(3, "communication formulas", agg_ok and saving_ok and sig_ok and gain_ok,
            f"agg {m_agg.bits_sent // n} b/elt, sigmoid {m_sig.rounds} round {m_sig.bits_sent // k} b/elt, "
            f"gain {m_gain.rounds} rounds {m_gain.bits_sent // k} b/cand")


def test_criterion_4_lut_bounds():
    n_seg = 12
    rng = np.random.default_rng(2)
    x = rng.uniform(-10, 10, 10_000)
    x_enc = RC.encode(x)
    tab = SigmoidTable.build(n_seg, RC)
    x0, x1 = share_value(x_enc, RC, rng)
    o0, o1, *_ = run_protocol(lambda s, sh: sigmoid_online(s, sh, tab), RC, args0=(x0,), args1=(x1,))
    got = reconstruct(o0, o1, RC)
    want = tab.entries[segment_index_fixed(x_enc, tab.omegas_enc, RC)]
    exact_ok = (got == want).all()
    approx_ok = np.abs(RC.decode(want) - sigmoid(x)).max() <= 0.21

    G = RC.encode(rng.uniform(-100, 100, 256))
    H = RC.encode(rng.uniform(0.01, 80, 256))
    lt = LeafWeightTable.build(n_seg, RC)
    g0, g1 = share_value(G, RC, rng)
    h0, h1 = share_value(H, RC, rng)
    w0, w1, *_ = run_protocol(
        lambda s, a, b: leafweight_online(s, a, b, int(RC.encode(1.0)), lt), RC,
        args0=(g0, h0), args1=(g1, h1),
    )
    w = RC.decode(reconstruct(w0, w1, RC))
    range_ok = (w >= -5.0).all() and (w <= 5.0).all()
    _report(4, "lookup-table approximation bounds", exact_ok and approx_ok and range_ok,
            f"max sigmoid err {np.abs(RC.decode(want) - sigmoid(x)).max():.3f}, leaf range [{w.min():.2f}, {w.max():.2f}]")


def test_criterion_5_gain_properties():
    t0 = time.time()
    rng = np.random.default_rng(3)
    n = 10_000
    hx = rng.uniform(2, 40, n)
    hl = hx * rng.uniform(0.01, 0.99, n)
    hr = hx - hl
    gl = rng.uniform(-30, 30, n)
    gx = rng.uniform(-30, 30, n)
    out = gain_plain(gl, gx - gl, hl, hr, hx, 1.0)
    sign_ok = ((out >= 0) == (2 * hl < hx)).all()

    pos = 2 * hl < hx
    gl_b = rng.uniform(-30, 30, n)
    sur_a = gain_plain(gl, gx - gl, hl, hr, hx, 1.0)
    sur_b = gain_plain(gl_b, gx - gl_b, hl, hr, hx, 1.0)
    ex_a = exact_gain_plain(gl, gx - gl, gx, hl, hr, hx, 1.0)
    ex_b = exact_gain_plain(gl_b, gx - gl_b, gx, hl, hr, hx, 1.0)
    order_ok = ((sur_a > sur_b) == (ex_a > ex_b))[pos].all()
    elapsed = time.time() - t0
    _report(5, "gain sign rule and restricted ordering", sign_ok and order_ok and elapsed < 60,
            f"10^4 samples in {elapsed:.2f}s")


def test_criterion_6_mirror_end_to_end_equality():
    t_start = time.time()
    ds = load_fixture()
    rng = np.random.default_rng(7)
    idx = rng.choice(ds.n_samples, 200, replace=False)
    X, y = ds.X[idx], ds.y[idx]
    thr = bin_features(X, 8)
    cfg = TrainConfig(trees=2, depth=3, buckets=8, segments=12, seed=1234)
    d0, d1 = vertical_split(Dataset(X, y, ds.feature_names), thr)
    t0, t1, m0, m1, *_ = train_two_party(d0, d1, cfg, timeout=300.0)
    merged = [merge_party_trees(a, b, cfg.ring) for a, b in zip(t0, t1)]
    mirror, mm = plain_train(X, y, thr, cfg, "mirror")
    nodes_ok = all(a.nodes == b.nodes for a, b in zip(merged, mirror))
    leaves_ok = all((a.leaves == b.leaves).all() for a, b in zip(merged, mirror))
    margins_ok = (((m0 + m1) & cfg.ring.mask) == mm).all()
    elapsed = time.time() - t_start
    _report(6, "secure training bit-identical to the mirror oracle",
            nodes_ok and leaves_ok and margins_ok and elapsed < 300,
            f"2 trees, depth 3, 200 samples in {elapsed:.1f}s")


def test_criterion_7_accuracy_reproduction():
    ds = load_fixture()
    tr, te = split_train_test(ds, 0.8, SPLIT_SEED)
    thr = bin_features(tr.X, 8)
    cfg = TrainConfig(trees=5, depth=4, buckets=8, segments=12, seed=0)

    d0, d1 = vertical_split(tr, thr)
    t0, t1, *_ = train_two_party(d0, d1, cfg, timeout=600.0)
    trees = [merge_party_trees(a, b, cfg.ring) for a, b in zip(t0, t1)]
    m_sec = eval_plain_trees(trees, te.X, thr, cfg.ring, encoded=True)
    acc_sec = ((m_sec > 0).astype(int) == te.y).mean() * 100

    t_exact, _ = plain_train(tr.X, tr.y, thr, cfg, "exact")
    m_ex = predict_margins(t_exact, te.X, thr, cfg, "exact")
    acc_ex = ((m_ex > 0).astype(int) == te.y).mean() * 100

    sec_ok = abs(acc_sec - 94.74) <= 2.0
    ex_ok = abs(acc_ex - 96.37) <= 2.0
    _report(7, "test accuracy reproduction", sec_ok and ex_ok,
            f"secure {acc_sec:.2f}% (target 94.74+-2), exact {acc_ex:.2f}% (target 96.37+-2)")


def test_criterion_8_segment_size_stability():
    ds = load_fixture()
    tr, te = split_train_test(ds, 0.8, SPLIT_SEED)
    thr = bin_features(tr.X, 8)
    accs = {}
    for n_seg in range(4, 17):
        cfg = TrainConfig(trees=5, depth=4, buckets=8, segments=n_seg, seed=0)
        # the mirror oracle is bit-identical to the secure path (criterion 6)
        trees, _ = plain_train(tr.X, tr.y, thr, cfg, "mirror")
        m = predict_margins(trees, te.X, thr, cfg, "mirror")
        accs[n_seg] = ((m > 0).astype(int) == te.y).mean() * 100
    plateau = [accs[n] for n in range(12, 17)]
    spread = max(plateau) - min(plateau)
    _report(8, "segment-size accuracy plateau for n >= 12", spread <= 2.0,
            f"spread {spread:.2f} points over n in 12..16")


def test_criterion_9_declared_runtime_substitution():
    """Cross-system wall-clock comparisons are out of desk-scale reach;
    the analytic LAN/WAN estimates from the meter stand in for them."""
    zeros = np.zeros(1000, np.uint64)
    _, _, meter, _ = run_protocol(lambda s, a, b: agg_online(s, a, b), RC, args0=(zeros, zeros), args1=(zeros, zeros))
    lan = estimate_time(meter, LAN)
    wan = estimate_time(meter, WAN)
    ok = 0 < lan < wan
    _report(9, "runtime criteria substituted by analytic estimates (declared)", ok,
            f"1000-element aggregation: LAN {lan * 1e3:.3f} ms, WAN {wan * 1e3:.1f} ms")
