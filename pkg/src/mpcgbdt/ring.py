"""Ring arithmetic over Z_{2^ell} and fixed-point encoding.

All ring values are numpy ``uint64`` arrays reduced modulo ``2**ell``.
Arithmetic relies on native uint64 wraparound followed by masking, so
every helper here is vectorized and allocation-light.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_U64_MASK = 0xFFFFFFFFFFFFFFFF


def u64(x) -> np.ndarray:
    """Coerce ints / int arrays to uint64 ring representation (mod 2^64)."""
    a = np.asarray(x)
    if a.dtype == np.uint64:
        return a
    if a.dtype.kind == "f":
        raise TypeError("floats must go through RingConfig.encode")
    if a.dtype.kind == "O":
        # Arbitrary python ints: reduce elementwise first.
        flat = [int(v) & _U64_MASK for v in a.ravel()]
        return np.array(flat, dtype=np.uint64).reshape(a.shape)
    return a.astype(np.int64).astype(np.uint64)


def const(x: int) -> np.uint64:
    """A single ring constant, accepting negative python ints."""
    return np.uint64(x & _U64_MASK)


@dataclass(frozen=True)
class RingConfig:
    """Widths of the computation ring and its fixed-point encoding.

    Attributes:
        ell: total bit width, at most 64.
        ell_f: fraction bits of the fixed-point encoding.
    """

    ell: int = 64
    ell_f: int = 16

    def __post_init__(self):
        if not (0 < self.ell_f + 2 < self.ell <= 64):
            raise ValueError(
                f"invalid ring widths: need 0 < ell_f+2 < ell <= 64, "
                f"got ell={self.ell}, ell_f={self.ell_f}"
            )

    @property
    def ell_c(self) -> int:
        """Compressed sub-ring width used by the aggregation protocol."""
        return self.ell_f + 2

    @property
    def mask(self) -> np.uint64:
        return const((1 << self.ell) - 1)

    @property
    def mask_c(self) -> np.uint64:
        return const((1 << self.ell_c) - 1)

    @property
    def half(self) -> np.uint64:
        """2^{ell-1}, the signed/unsigned pivot."""
        return const(1 << (self.ell - 1))

    @property
    def one(self) -> np.uint64:
        """The fixed-point encoding of 1.0."""
        return const(1 << self.ell_f)

    # -- fixed point ------------------------------------------------------

    def encode(self, x) -> np.ndarray:
        """Encode reals as fixed-point ring elements: round(x * 2^ell_f) mod 2^ell."""
        a = np.asarray(x, dtype=np.float64)
        bound = float(1 << (self.ell - self.ell_f - 1))
        if np.any(np.abs(a) >= bound):
            raise ValueError(f"value out of fixed-point range (+-{bound})")
        v = np.round(a * (1 << self.ell_f)).astype(np.int64)
        return (v.astype(np.uint64)) & self.mask

    def decode(self, e) -> np.ndarray:
        """Decode ring elements to reals via the signed interpretation."""
        return self.signed(e).astype(np.float64) / float(1 << self.ell_f)

    def signed(self, e) -> np.ndarray:
        """Signed interpretation in [-2^{ell-1}, 2^{ell-1}) as int64."""
        v = np.asarray(e, dtype=np.uint64) & self.mask
        s = v.astype(np.int64)  # C cast: wraps, which is the signed reading for ell=64
        if self.ell == 64:
            return s
        return np.where(s >= (1 << (self.ell - 1)), s - (1 << self.ell), s)

    def reduce(self, e) -> np.ndarray:
        """Reduce uint64 values into the ring."""
        return np.asarray(e, dtype=np.uint64) & self.mask

    def msb(self, e, width: int | None = None) -> np.ndarray:
        """Top bit of the stated width (defaults to ell)."""
        w = self.ell if width is None else width
        return (np.asarray(e, dtype=np.uint64) >> np.uint64(w - 1)) & np.uint64(1)

    # -- truncation -------------------------------------------------------

    def trunc_exact(self, e, bits: int | None = None) -> np.ndarray:
        """Exact arithmetic right shift of the signed interpretation.

        Used on plaintext/mirror values; share-wise truncation lives in
        :func:`mpcgbdt.sharing.trunc_share`.
        """
        f = self.ell_f if bits is None else bits
        s = self.signed(e) >> np.int64(f)
        return s.astype(np.uint64) & self.mask

    # -- configuration guards ---------------------------------------------

    def check_overflow_budget(self, n_samples: int):
        """Reject configurations whose gain intermediates can overflow.

        The largest intermediate of the division-free gain is bounded by
        N^3 * 2^{2*ell_f} (an (H+gamma)-weighted squared gradient sum before
        the final truncation); it must stay below the comparison-safe bound
        2^{ell-2}.
        """
        if n_samples**3 * (1 << (2 * self.ell_f)) >= (1 << (self.ell - 2)):
            raise ValueError(
                f"overflow budget violated: N^3 * 2^(2*ell_f) must stay below "
                f"2^(ell-2); N={n_samples}, ell={self.ell}, ell_f={self.ell_f}"
            )


def pack_bits_u64(vals: np.ndarray, width: int) -> np.ndarray:
    """Explode uint64 values into a flat little-endian bit vector (uint8)."""
    v = np.asarray(vals, dtype=np.uint64).ravel()
    shifts = np.arange(width, dtype=np.uint64)
    return ((v[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8).ravel()


def unpack_bits_u64(bits: np.ndarray, width: int) -> np.ndarray:
    """Inverse of :func:`pack_bits_u64`."""
    b = np.asarray(bits, dtype=np.uint64).reshape(-1, width)
    shifts = np.arange(width, dtype=np.uint64)
    return (b << shifts[None, :]).sum(axis=1, dtype=np.uint64)
