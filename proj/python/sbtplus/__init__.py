"""Vertical federated gradient boosting with packed Paillier ciphertexts."""

from ._core import (
    BoostingParams,
    Ciphertext,
    ConfigError,
    CryptoError,
    DataError,
    KeyPair,
    Model,
    PackState,
    ProtocolError,
    SbtError,
    accuracy,
    assign_bits,
    auc,
    compress_capacity,
    compute_pack_state,
    estimate_cost,
    make_synthetic,
    pack_gh,
    train,
    unpack_gh,
)

__all__ = [
    "BoostingParams",
    "Ciphertext",
    "ConfigError",
    "CryptoError",
    "DataError",
    "KeyPair",
    "Model",
    "PackState",
    "ProtocolError",
    "SbtError",
    "accuracy",
    "assign_bits",
    "auc",
    "compress_capacity",
    "compute_pack_state",
    "estimate_cost",
    "make_synthetic",
    "pack_gh",
    "train",
    "unpack_gh",
]

__version__ = "0.1.0"
