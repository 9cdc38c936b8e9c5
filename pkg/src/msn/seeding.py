"""Deterministic seed derivation.

All sampling flows from one 64-bit seed.  Child seeds are derived with
splitmix64 over the parent seed and a label hashed by FNV-1a, so the
stream layout is stable across platforms and thread counts.
"""

import random

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def child_seed(seed: int, *labels) -> int:
    x = seed & _MASK
    for lab in labels:
        x = _splitmix64(x ^ _fnv1a(str(lab).encode()))
    return x


def rng(seed: int, *labels) -> random.Random:
    return random.Random(child_seed(seed, *labels))
