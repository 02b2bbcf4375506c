"""Open-addressing hash accumulator used by the hash execution strategy.

Keys are column ids hashed with a 32-bit multiply-xor-shift avalanche mix and
placed by linear probing with stride one. The empty-slot sentinel reserves
the largest representable column id. Occupancy is capped upstream (the chunk
planner keeps it at or below the strategy's load factor), which guarantees an
empty slot terminates every unsuccessful probe.
"""

import numpy as np

EMPTY_SLOT = np.iinfo(np.int64).max

_MASK32 = np.uint64(0xFFFFFFFF)
_MIX1 = np.uint64(0x85EBCA6B)
_MIX2 = np.uint64(0xC2B2AE35)
_S16 = np.uint64(16)
_S13 = np.uint64(13)


def mix32(keys):
    """32-bit avalanche mix of non-negative integer keys (vectorized)."""
    h = np.asarray(keys).astype(np.uint64) & _MASK32
    h = h ^ (h >> _S16)
    h = (h * _MIX1) & _MASK32
    h = h ^ (h >> _S13)
    h = (h * _MIX2) & _MASK32
    h = h ^ (h >> _S16)
    return h


class HashAccumulator:
    """Fixed-capacity map from column id to float value."""

    def __init__(self, capacity):
        capacity = int(capacity)
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = capacity
        self._keys = np.full(capacity, EMPTY_SLOT, dtype=np.int64)
        self._values = np.zeros(capacity, dtype=np.float64)
        self.size = 0

    def build(self, cols, vals):
        """Reset the table and insert unique keys ``cols`` with ``vals``."""
        cap = self.capacity
        if len(cols) >= cap:
            raise ValueError(f"{len(cols)} entries cannot fit capacity {cap}")
        self._keys.fill(EMPTY_SLOT)
        self.size = int(len(cols))
        if self.size == 0:
            return
        keys = self._keys
        values = self._values
        slots = (mix32(cols) % np.uint64(cap)).astype(np.int64)
        for c, v, h in zip(np.asarray(cols).tolist(), np.asarray(vals).tolist(),
                           slots.tolist()):
            while keys[h] != EMPTY_SLOT:
                h += 1
                if h == cap:
                    h = 0
            keys[h] = c
            values[h] = v

    def probe(self, col):
        """Value stored for ``col``, or ``None`` when absent."""
        cap = self.capacity
        h = int(mix32(np.int64(col)) % np.uint64(cap))
        keys = self._keys
        while True:
            k = keys[h]
            if k == col:
                return float(self._values[h])
            if k == EMPTY_SLOT:
                return None
            h += 1
            if h == cap:
                h = 0

    def probe_many(self, cols):
        """Vectorized lookup: (values, found) with 0.0 for absent keys."""
        cols = np.asarray(cols, dtype=np.int64)
        n = cols.size
        values = np.zeros(n, dtype=np.float64)
        found = np.zeros(n, dtype=bool)
        if n == 0 or self.size == 0:
            return values, found
        cap = self.capacity
        pos = (mix32(cols) % np.uint64(cap)).astype(np.int64)
        pending = np.arange(n)
        pend_keys = cols
        while pending.size:
            slot_keys = self._keys[pos]
            hit = slot_keys == pend_keys
            if hit.any():
                rows = pending[hit]
                found[rows] = True
                values[rows] = self._values[pos[hit]]
            keep = ~(hit | (slot_keys == EMPTY_SLOT))
            if not keep.any():
                break
            pending = pending[keep]
            pend_keys = pend_keys[keep]
            pos = pos[keep] + 1
            pos[pos == cap] = 0
        return values, found
