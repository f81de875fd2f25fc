"""Reproducible random-number streams.

A stream is identified by (seed, stream_id); identical identifiers
reproduce identical variate sequences and distinct stream ids give
statistically independent streams (numpy SeedSequence spawn keys).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0
    _subkeys: tuple = ()

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(
            entropy=self.seed, spawn_key=(self.stream_id, *self._subkeys)
        )
        return np.random.default_rng(ss)

    def substream(self, *keys: int) -> "RngStream":
        """Independent child stream, deterministic in (self, keys)."""
        return RngStream(self.seed, self.stream_id, self._subkeys + tuple(keys))
