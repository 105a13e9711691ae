"""
Deterministic random streams derived from one master seed.

Stream ``(master_seed, index)`` is built from
``SeedSequence(master_seed, spawn_key=(index,))``, so any stream can be
re-created on its own, in any order and on any thread.
"""

import numpy as np

from extropy.exceptions import DomainError

MAX_SEED = 2**64


class RandomStream:
    """A numpy Generator bound to one ``(master_seed, index)`` pair."""

    __slots__ = ("generator", "index", "master_seed")

    def __init__(self, master_seed: int, index: int) -> None:
        if not 0 <= master_seed < MAX_SEED:
            raise DomainError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
        if index < 0:
            raise DomainError(f"stream index must be non-negative, got {index}")
        self.master_seed = int(master_seed)
        self.index = int(index)
        sequence = np.random.SeedSequence(self.master_seed, spawn_key=(self.index,))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, index={self.index})"


def derive_stream(master_seed: int, index: int) -> RandomStream:
    """
    Derive the stream for one replication.

    Args:
        master_seed: 64-bit unsigned master seed
        index: Non-negative stream index

    Returns:
        A fresh RandomStream; identical arguments replay identical draws
    """
    return RandomStream(master_seed, index)
