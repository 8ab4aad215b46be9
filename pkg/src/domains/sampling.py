import numpy as np

_SMALL = 1 << 62


def make_rng(seed: int | np.random.SeedSequence | None = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def randbelow(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n); `n` may exceed 64 bits."""
    if n <= 0:
        raise ValueError(f"randbelow needs a positive bound, got {n}")
    if n < _SMALL:
        return int(rng.integers(n))
    bits = n.bit_length()
    words = (bits + 31) // 32
    while True:
        value = 0
        for word in rng.integers(0, 1 << 32, size=words, dtype=np.uint64):
            value = (value << 32) | int(word)
        value >>= words * 32 - bits
        if value < n:
            return value


def coin(rng: np.random.Generator) -> bool:
    return bool(rng.integers(2))
