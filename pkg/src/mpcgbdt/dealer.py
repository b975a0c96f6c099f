"""Trusted dealer for correlated randomness.

Both parties instantiate a :class:`Dealer` from the same 128-bit seed and
call the same methods in the same order; each instance derives the full
correlated material deterministically and hands out only its own party's
half. Randomness kinds are namespaced by label so offline/online pairing
is deterministic and auditable. Every bundle is single-use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import prg
from .dcf import DcfKeyBatch, IdealDcfBatch, dcf_gen, ideal_dcf_gen
from .ring import RingConfig
from .transport import ProtocolError


def _split(value: np.ndarray, rng, mask, party: int) -> np.ndarray:
    """This party's additive share of ``value`` (both parties draw alike)."""
    s0 = rng.integers(0, 1 << 64, size=value.shape, dtype=np.uint64) & mask
    return s0 if party == 0 else (value - s0) & mask


@dataclass
class Triples:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    consumed: bool = False


@dataclass
class Squares:
    r: np.ndarray
    r2: np.ndarray
    consumed: bool = False


@dataclass
class BitMulKeys:
    """Shares of two random mask bits and their product."""

    r_s: np.ndarray
    r_t: np.ndarray
    u: np.ndarray
    consumed: bool = False


@dataclass
class AggKeys:
    """Per-element masks for the compressed aggregation protocol."""

    r_s: np.ndarray  # share of a bit
    r_g: np.ndarray  # share of an ell_c-bit mask (held over the full ring)
    u: np.ndarray  # share of r_s * r_g
    v: np.ndarray  # share of msb_{ell_c}(r_g)
    m: np.ndarray  # share of r_s * v
    consumed: bool = False


@dataclass
class LtGateBatch:
    """Keys for masked signed less-than gates.

    Each gate holds shares of a uniform mask alpha and of its top bit,
    plus comparison-FSS keys at alpha and at alpha + 2^{ell-1}: the two
    evaluations at the opened masked input, combined with the wrap bit,
    yield shares of the signed comparison.
    """

    alpha: np.ndarray  # share of the mask
    wrap: np.ndarray  # share of msb(alpha)
    dcf: DcfKeyBatch | IdealDcfBatch  # batch of 2k keys: [low | high]
    consumed: bool = False

    @property
    def size(self) -> int:
        return self.alpha.size


def mark_consumed(bundle):
    if bundle.consumed:
        raise ProtocolError("correlated randomness reused")
    bundle.consumed = True


class Dealer:
    """Per-party deterministic source of correlated randomness."""

    def __init__(self, seed: int, cfg: RingConfig, party: int, ideal_dcf: bool = False):
        self.seed = seed
        self.cfg = cfg
        self.party = party
        self.ideal_dcf = ideal_dcf
        self._streams: dict[str, np.random.Generator] = {}

    def _rng(self, kind: str) -> np.random.Generator:
        if kind not in self._streams:
            self._streams[kind] = prg.stream(self.seed, kind)
        return self._streams[kind]

    def _share(self, value, rng) -> np.ndarray:
        return _split(value, rng, self.cfg.mask, self.party)

    def triples(self, shape) -> Triples:
        rng = self._rng("triple")
        mask = self.cfg.mask
        a = rng.integers(0, 1 << 64, size=shape, dtype=np.uint64) & mask
        b = rng.integers(0, 1 << 64, size=shape, dtype=np.uint64) & mask
        c = (a * b) & mask
        return Triples(self._share(a, rng), self._share(b, rng), self._share(c, rng))

    def squares(self, shape) -> Squares:
        rng = self._rng("square")
        mask = self.cfg.mask
        r = rng.integers(0, 1 << 64, size=shape, dtype=np.uint64) & mask
        r2 = (r * r) & mask
        return Squares(self._share(r, rng), self._share(r2, rng))

    def bitmul_keys(self, shape) -> BitMulKeys:
        rng = self._rng("bitmul")
        r_s = rng.integers(0, 2, size=shape, dtype=np.uint64)
        r_t = rng.integers(0, 2, size=shape, dtype=np.uint64)
        u = r_s * r_t
        return BitMulKeys(
            self._share(r_s, rng), self._share(r_t, rng), self._share(u, rng)
        )

    def agg_keys(self, shape) -> AggKeys:
        rng = self._rng("agg")
        lc = self.cfg.ell_c
        r_s = rng.integers(0, 2, size=shape, dtype=np.uint64)
        r_g = rng.integers(0, 1 << lc, size=shape, dtype=np.uint64)
        u = (r_s * r_g) & self.cfg.mask
        v = r_g >> np.uint64(lc - 1)
        m = r_s * v
        return AggKeys(
            self._share(r_s, rng),
            self._share(r_g, rng),
            self._share(u, rng),
            self._share(v, rng),
            self._share(m, rng),
        )

    def lt_gates(self, k: int) -> LtGateBatch:
        rng = self._rng("lt")
        cfg = self.cfg
        alpha = rng.integers(0, 1 << 64, size=k, dtype=np.uint64) & cfg.mask
        wrap = cfg.msb(alpha)
        points = np.concatenate([alpha, (alpha + cfg.half) & cfg.mask])
        if self.ideal_dcf:
            pair = ideal_dcf_gen(points, cfg, rng)
        else:
            pair = dcf_gen(points, cfg, rng)
        return LtGateBatch(
            self._share(alpha, rng), self._share(wrap, rng), pair[self.party]
        )
