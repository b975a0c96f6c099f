"""Pseudorandom generators.

Two flavors:

* a fixed-key AES expansion (Matyas-Meyer-Oseas style) used inside the
  function-secret-sharing key trees, vectorized over batches of seeds;
* numpy ``Philox`` streams namespaced by a label, used by the dealer so
  that both parties derive identical correlated randomness from one seed.
"""

from __future__ import annotations

import hashlib

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

# Fixed public AES key for the MMO hash; any constant works.
_MMO_KEY = bytes.fromhex("00112233445566778899aabbccddeeff")
_CIPHER = Cipher(algorithms.AES(_MMO_KEY), modes.ECB())

# Per-output-block tweak constants (first byte differs per block).
_TWEAKS = np.zeros((4, 16), dtype=np.uint8)
_TWEAKS[:, 0] = np.arange(4, dtype=np.uint8)


def expand_seeds(seeds: np.ndarray):
    """Length-quadrupling PRG over 16-byte seeds.

    Args:
        seeds: (K, 16) uint8 array.

    Returns:
        Tuple ``(s_left, v_left, t_left, s_right, v_right, t_right)`` with
        seeds (K, 16) uint8, payload words (K,) uint64 and bits (K,) uint8.
    """
    k = seeds.shape[0]
    buf = np.bitwise_xor(seeds[:, None, :], _TWEAKS[None, :, :])
    enc = _CIPHER.encryptor()
    out = np.frombuffer(enc.update(buf.tobytes()), dtype=np.uint8).reshape(k, 4, 16)
    out = np.bitwise_xor(out, buf)
    s_l = out[:, 0, :]
    s_r = out[:, 2, :]
    v_l = np.ascontiguousarray(out[:, 1, :8]).view(np.uint64).ravel()
    v_r = np.ascontiguousarray(out[:, 3, :8]).view(np.uint64).ravel()
    t_l = s_l[:, 0] & np.uint8(1)
    t_r = s_r[:, 0] & np.uint8(1)
    return s_l, v_l, t_l, s_r, v_r, t_r


def convert_seed(seeds: np.ndarray, mask: np.uint64) -> np.ndarray:
    """Map 16-byte pseudorandom strings into the ring (first 8 bytes, LE)."""
    return np.ascontiguousarray(seeds[:, :8]).view(np.uint64).ravel() & mask


def stream(seed: int, label: str) -> np.random.Generator:
    """Deterministic counter-mode generator namespaced by a label."""
    h = hashlib.sha256(f"{seed:#x}/{label}".encode()).digest()
    key = int.from_bytes(h[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))
