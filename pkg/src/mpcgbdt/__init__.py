"""Two-party secure gradient-boosted decision trees over vertically
partitioned data.

The package is layered bottom-up:

* :mod:`mpcgbdt.ring` / :mod:`mpcgbdt.prg` — fixed-point ring arithmetic
  and AES-based pseudorandomness.
* :mod:`mpcgbdt.transport` — the metered two-party execution fabric.
* :mod:`mpcgbdt.dcf` / :mod:`mpcgbdt.dealer` / :mod:`mpcgbdt.sharing` —
  comparison function secret sharing, correlated randomness, and additive
  sharing with Beaver products.
* :mod:`mpcgbdt.compare` / :mod:`mpcgbdt.aggregate` / :mod:`mpcgbdt.lut`
  / :mod:`mpcgbdt.gain` — the protocol building blocks.
* :mod:`mpcgbdt.trainer` / :mod:`mpcgbdt.reference` — the secure trainer
  and its plaintext oracles.
* :mod:`mpcgbdt.estimator` — a scikit-learn style front end.
"""

from .data import Dataset, ParseError, bin_features, load_csv, load_fixture, split_train_test, vertical_split
from .estimator import SecureGBDTClassifier
from .reference import plain_train, predict_margins
from .ring import RingConfig
from .trainer import PartyData, predict_two_party, train_two_party
from .transport import LAN, WAN, Meter, NetworkProfile, ProtocolError, estimate_time
from .trees import PartyTree, PlainTree, TrainConfig, eval_plain_trees, merge_party_trees

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "LAN",
    "Meter",
    "NetworkProfile",
    "ParseError",
    "PartyData",
    "PartyTree",
    "PlainTree",
    "ProtocolError",
    "RingConfig",
    "SecureGBDTClassifier",
    "TrainConfig",
    "WAN",
    "bin_features",
    "estimate_time",
    "eval_plain_trees",
    "load_csv",
    "load_fixture",
    "merge_party_trees",
    "plain_train",
    "predict_margins",
    "predict_two_party",
    "split_train_test",
    "train_two_party",
    "vertical_split",
    "__version__",
]
