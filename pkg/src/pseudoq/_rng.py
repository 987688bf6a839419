"""Deterministic seed fan-out: one master seed, named subsystem streams."""

from __future__ import annotations

import hashlib

import numpy as np


def stream_seed(master_seed: int, label: str) -> int:
    """Stable 64-bit seed for a named stream: sha256("<master>:<label>")."""
    digest = hashlib.sha256(f"{master_seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def stream(master_seed: int, label: str) -> np.random.Generator:
    return np.random.default_rng(stream_seed(master_seed, label))
