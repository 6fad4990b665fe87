"""Counter-based random streams.

Every source of randomness in the library draws from a Philox generator keyed
by ``(seed, purpose, index)``.  Streams are independent of each other and of
execution order, which is what makes dataset generation, dropout masks and
shuffling reproducible across runs and across worker counts.
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """Return the generator for sub-stream ``(seed, purpose, index)``."""
    digest = hashlib.blake2b(
        f"{purpose}\x1f{index}".encode(), digest_size=8
    ).digest()
    key = np.array(
        [seed & _MASK64, int.from_bytes(digest, "little")], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))
