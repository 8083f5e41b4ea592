"""Seeded random streams with independent keyed substreams.

Each stream is a Philox generator seeded from ``SeedSequence(seed,
spawn_key=key)``. Child keys extend the parent key, so a stream for
(grid point, run, agent) is reachable directly from the master seed and
never depends on what else was drawn.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np


class RngStream:
    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, *key: int) -> "RngStream":
        return RngStream(self.seed, self.key + key)

    def random(self) -> float:
        return float(self._gen.random())

    def block(self, shape) -> np.ndarray:
        """Uniforms in [0, 1); consumes the same variates as repeated ``random()``."""
        return self._gen.random(shape)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key})"


# child indices of a run stream
POLICY = 0
ENVIRONMENT = 1
