"""Command-line surface.

Subcommands::

    train           train a model (secure/mirror/exact), emit a JSON report
    predict         score a dataset with a saved model document
    bench-agg       meter the compressed aggregation protocol
    bench-micro     meter the sigmoid, gain, comparison and bit-product gates
    sweep-segments  CSV of (segments, test accuracy) pairs
    selftest        exhaustive small-ring oracle checks; nonzero exit on mismatch

Every command's output is a deterministic function of its flags, input
files and seed. Reports embed the meter breakdown and analytic LAN/WAN
time estimates.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .aggregate import agg_online, bitmul
from .data import Dataset, bin_features, load_csv, load_fixture, split_train_test, vertical_split
from .dealer import Dealer
from .gain import gain_online, gain_plain
from .lut import SigmoidTable, sigmoid_online
from .compare import lt_gate
from .reference import plain_train
from .ring import RingConfig
from .sharing import Session, share_value
from .trainer import train_two_party
from .transport import PROFILES, estimate_time, run_two_party
from .trees import (
    TrainConfig,
    eval_plain_trees,
    load_model,
    merge_party_trees,
    plain_model_doc,
    save_model,
    trees_from_doc,
)

REPORT_VERSION = "mpcgbdt-report-v1"


def _add_common(p):
    p.add_argument("--dataset", help="CSV path; omit for the bundled breast-cancer data")
    p.add_argument("--label-col", default="label")
    p.add_argument("--split-cols", type=int, default=None, help="party 0's feature-column count")
    p.add_argument("--trees", type=int, default=5)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--buckets", type=int, default=8)
    p.add_argument("--segments", type=int, default=12)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--ring-bits", type=int, default=64)
    p.add_argument("--frac-bits", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-seed", type=int, default=24, help="train/test shuffle seed")
    p.add_argument("--mode", choices=("secure", "mirror", "exact"), default="secure")
    p.add_argument("--net-profile", choices=("lan", "wan", "none"), default="none")
    p.add_argument("--out", help="output path (JSON report / CSV sweep)")
    p.add_argument("--model-out", help="where to write the trained model document")


def _config(args) -> TrainConfig:
    return TrainConfig(
        trees=args.trees,
        depth=args.depth,
        buckets=args.buckets,
        segments=args.segments,
        gamma=args.gamma,
        eta=args.eta,
        ring=RingConfig(args.ring_bits, args.frac_bits),
        seed=args.seed,
    )


def _load(args) -> Dataset:
    if args.dataset:
        return load_csv(args.dataset, args.label_col)
    return load_fixture()


def _accuracy(margins: np.ndarray, y: np.ndarray) -> float:
    return float(((margins > 0).astype(int) == y).mean())


def _estimates(meter) -> dict:
    return {name: estimate_time(meter, prof) for name, prof in PROFILES.items()}


def _emit(doc, args):
    text = json.dumps(doc, indent=1)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_train(args) -> int:
    cfg = _config(args)
    ds = _load(args)
    tr, te = split_train_test(ds, 0.8, args.split_seed)
    thresholds = bin_features(tr.X, cfg.buckets)
    t0 = time.time()
    if args.mode == "secure":
        d0, d1 = vertical_split(tr, thresholds, args.split_cols)
        p0, p1, _, _, me0, me1 = train_two_party(d0, d1, cfg)
        trees = [merge_party_trees(a, b, cfg.ring) for a, b in zip(p0, p1)]
        encoded = True
        meter_doc = {
            "party0": me0.snapshot(),
            "party1": me1.snapshot(),
            "estimated_seconds": _estimates(me0),
        }
    else:
        trees, _ = plain_train(tr.X, tr.y, thresholds, cfg, args.mode)
        encoded = args.mode == "mirror"
        meter_doc = None
    elapsed = time.time() - t0

    m_tr = eval_plain_trees(trees, tr.X, thresholds, cfg.ring, encoded=encoded)
    m_te = eval_plain_trees(trees, te.X, thresholds, cfg.ring, encoded=encoded)
    if cfg.eta != 1.0:
        m_tr, m_te = cfg.eta * m_tr, cfg.eta * m_te
    report = {
        "report": REPORT_VERSION,
        "command": "train",
        "mode": args.mode,
        "config": cfg.echo(),
        "n_train": tr.n_samples,
        "n_test": te.n_samples,
        "train_seconds": elapsed,
        "seconds_per_tree": elapsed / cfg.trees,
        "train_accuracy": _accuracy(m_tr, tr.y),
        "test_accuracy": _accuracy(m_te, te.y),
        "meter": meter_doc,
    }
    if args.net_profile != "none" and meter_doc is not None:
        report["selected_estimate_seconds"] = meter_doc["estimated_seconds"][args.net_profile]
    _emit(report, args)
    if args.model_out:
        save_model(plain_model_doc(trees, cfg, encoded=encoded), args.model_out)
    return 0


def cmd_predict(args) -> int:
    doc = load_model(args.model)
    trees = trees_from_doc(doc)
    c = doc["config"]
    cfg = TrainConfig(
        trees=c["trees"],
        depth=c["depth"],
        buckets=c["buckets"],
        segments=c["segments"],
        gamma=c["gamma"],
        eta=c["eta"],
        ring=RingConfig(c["ring_bits"], c["frac_bits"]),
        seed=c["seed"],
    )
    ds = _load(args)
    thresholds = bin_features(ds.X, cfg.buckets)
    encoded = isinstance(trees[0].leaves.dtype.type(), np.uint64)
    m = eval_plain_trees(trees, ds.X, thresholds, cfg.ring, encoded=encoded)
    if cfg.eta != 1.0:
        m = cfg.eta * m
    _emit(
        {
            "report": REPORT_VERSION,
            "command": "predict",
            "n_samples": ds.n_samples,
            "accuracy": _accuracy(m, ds.y),
            "predictions": (m > 0).astype(int).tolist(),
        },
        args,
    )
    return 0


def cmd_bench_agg(args) -> int:
    rc = RingConfig(args.ring_bits, args.frac_bits)
    n = args.n
    rng = np.random.default_rng(args.seed)
    s = rng.integers(0, 2, n).astype(np.uint64)
    g = rc.reduce(rng.integers(-(1 << rc.ell_f), 1 << rc.ell_f, n).astype(np.int64).astype(np.uint64))
    s0, s1 = share_value(s, rc, rng)
    g0, g1 = share_value(g, rc, rng)

    def body(ep, ss, gg):
        sess = Session(ep, Dealer(args.seed, rc, ep.party), rc)
        return agg_online(sess, ss, gg)

    o0, o1, me0, me1 = run_two_party(body, (s0, g0), (s1, g1))
    got = int(rc.signed(np.uint64((int(o0) + int(o1)) & int(rc.mask))))
    want = int((rc.signed(s) * rc.signed(g)).sum())
    per_elt = me0.bits_sent / n
    _emit(
        {
            "report": REPORT_VERSION,
            "command": "bench-agg",
            "n": n,
            "bits_per_element_per_party": per_elt,
            "formula_bits": rc.ell_c + 1,
            "saving_vs_full_open_bits": rc.ell - rc.ell_f - 2,
            "rounds": me0.rounds,
            "exact": got == want,
            "estimated_seconds": _estimates(me0),
        },
        args,
    )
    return 0 if got == want and per_elt == rc.ell_c + 1 else 1


def cmd_bench_micro(args) -> int:
    rc = RingConfig(args.ring_bits, args.frac_bits)
    rng = np.random.default_rng(args.seed)
    n = args.n

    def body(ep):
        sess = Session(ep, Dealer(args.seed, rc, ep.party), rc)
        out = {}
        tab = SigmoidTable.build(args.segments, rc)
        for name, fn in (
            ("sigmoid", lambda: sigmoid_online(sess, np.zeros(n, np.uint64), tab)),
            ("gain", lambda: gain_online(
                sess, *(np.zeros(n, np.uint64) for _ in range(5)), int(rc.encode(args.gamma))
            )),
            ("compare", lambda: lt_gate(sess, np.zeros(n, np.uint64), 0)),
            ("bit_product", lambda: bitmul(sess, np.zeros(n, np.uint64), np.zeros(n, np.uint64))),
        ):
            before = sess.meter.snapshot()
            fn()
            out[name] = sess.meter.delta(before)
        return out

    o0, _, me0, _ = run_two_party(body, (), ())
    per = {
        name: {
            "rounds": d["rounds"],
            "bits_total": d["bits_sent"],
            "bits_per_element": d["bits_sent"] / n,
        }
        for name, d in o0.items()
    }
    _emit(
        {
            "report": REPORT_VERSION,
            "command": "bench-micro",
            "n": n,
            "segments": args.segments,
            "gates": per,
            "estimated_seconds": _estimates(me0),
        },
        args,
    )
    return 0


def cmd_sweep_segments(args) -> int:
    ds = _load(args)
    tr, te = split_train_test(ds, 0.8, args.split_seed)
    thresholds = bin_features(tr.X, args.buckets)
    rows = []
    for n_seg in range(args.seg_min, args.seg_max + 1):
        cfg = TrainConfig(
            trees=args.trees,
            depth=args.depth,
            buckets=args.buckets,
            segments=n_seg,
            gamma=args.gamma,
            eta=args.eta,
            ring=RingConfig(args.ring_bits, args.frac_bits),
            seed=args.seed,
        )
        trees, _ = plain_train(tr.X, tr.y, thresholds, cfg, args.mode if args.mode != "secure" else "mirror")
        m = eval_plain_trees(trees, te.X, thresholds, cfg.ring, encoded=args.mode != "exact")
        rows.append((n_seg, _accuracy(m, te.y)))
    text = "segments,accuracy\n" + "\n".join(f"{n},{a:.6f}" for n, a in rows) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_selftest(args) -> int:
    """Exhaustive small-ring checks of the comparison and aggregation gates."""
    from .dcf import dcf_eval, dcf_gen
    from .reference import oracle_signed_lt

    failures = []

    rc8 = RingConfig(8, 3)
    rng = np.random.default_rng(0)
    alphas = np.arange(256, dtype=np.uint64)
    k0, k1 = dcf_gen(alphas, rc8, rng)
    xs = np.arange(256, dtype=np.uint64)
    for x in xs:
        xv = np.full(256, x, dtype=np.uint64)
        got = (dcf_eval(k0, xv, rc8) + dcf_eval(k1, xv, rc8)) & rc8.mask
        want = (np.full(256, x, dtype=np.uint64) < alphas).astype(np.uint64)
        if not (got == want).all():
            failures.append(f"comparison fss mismatch at x={int(x)}")
            break

    lc = rc8.ell_c  # 5
    rng = np.random.default_rng(1)
    for s in (0, 1):
        for g in range(-8, 8):
            gv = np.uint64(g & int(rc8.mask))
            s0, s1 = share_value(np.array([s], np.uint64), rc8, rng)
            g0, g1 = share_value(np.array([gv]), rc8, rng)

            def body(ep, ss, gg):
                sess = Session(ep, Dealer(7, rc8, ep.party), rc8)
                return agg_online(sess, ss, gg)

            o0, o1, _, _ = run_two_party(body, (s0, g0), (s1, g1))
            got = int(rc8.signed(np.uint64((int(o0) + int(o1)) & int(rc8.mask))))
            if got != s * g:
                failures.append(f"aggregation mismatch at s={s}, g={g}: {got}")

    rng = np.random.default_rng(2)
    agg = rng.integers(-50, 50, size=(200, 5)).astype(np.float64)
    gl, gr, hl, hr = agg[:, 0], agg[:, 1], np.abs(agg[:, 2]), np.abs(agg[:, 3])
    hx = hl + hr
    gains = gain_plain(gl, gr, hl, hr, hx, 1.0)
    sign_ok = ((gains >= 0) == (2 * hl < hx)).all()
    if not sign_ok:
        failures.append("gain sign rule violated")

    ok = not failures
    _emit(
        {
            "report": REPORT_VERSION,
            "command": "selftest",
            "passed": ok,
            "failures": failures,
        },
        args,
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpcgbdt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and report accuracy + comms")
    _add_common(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("predict", help="score a dataset with a saved model")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("bench-agg", help="meter the compressed aggregation")
    _add_common(p)
    p.add_argument("--n", type=int, default=10000)
    p.set_defaults(fn=cmd_bench_agg)

    p = sub.add_parser("bench-micro", help="meter the protocol gates")
    _add_common(p)
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(fn=cmd_bench_micro)

    p = sub.add_parser("sweep-segments", help="accuracy vs lookup-table size (CSV)")
    _add_common(p)
    p.add_argument("--seg-min", type=int, default=4)
    p.add_argument("--seg-max", type=int, default=16)
    p.set_defaults(fn=cmd_sweep_segments)

    p = sub.add_parser("selftest", help="exhaustive small-ring protocol checks")
    _add_common(p)
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
