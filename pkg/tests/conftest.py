"""Shared helpers for the protocol tests."""

from __future__ import annotations

import numpy as np
import pytest

from mpcgbdt.dealer import Dealer
from mpcgbdt.ring import RingConfig
from mpcgbdt.sharing import Session
from mpcgbdt.transport import run_two_party


def run_protocol(body, rc: RingConfig, seed: int = 0, args0=(), args1=(), ideal_dcf=False, timeout=60.0):
    """Run ``body(session, *args_b)`` for both parties; returns outs + meters."""

    def wrap(ep, *args):
        sess = Session(ep, Dealer(seed, rc, ep.party, ideal_dcf=ideal_dcf), rc)
        return body(sess, *args)

    return run_two_party(wrap, args0, args1, timeout=timeout)


def reconstruct(o0, o1, rc: RingConfig) -> np.ndarray:
    return (np.asarray(o0, np.uint64) + np.asarray(o1, np.uint64)) & rc.mask


@pytest.fixture
def rc64() -> RingConfig:
    return RingConfig(64, 16)


@pytest.fixture
def rc8() -> RingConfig:
    return RingConfig(8, 3)
