"""Seed handling shared by every randomized routine."""
from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derived_seed(master: int, *key: int) -> np.random.SeedSequence:
    """Child seed for ``key`` under ``master``.

    Children depend only on ``(master, key)``, never on how many siblings were
    drawn, so replication ``i`` is the same whether a study runs 10 or 10000
    replications, and in any order.
    """
    return np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(k) for k in key))
