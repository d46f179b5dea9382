"""Pinned 64-bit hashing shared by fingerprints, signatures, and caches.

The scheme is FNV-1a (64-bit, standard offset basis as the seed)
applied to the little-endian 8-byte encoding of each input word,
followed by the MurmurHash3 64-bit finalizer for avalanche. It is
platform- and run-independent, so serialized fingerprints and index
files are bit-exact across machines.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fmix64(h: int) -> int:
    h &= _MASK
    h ^= h >> 33
    h = (h * 0xFF51AFD7ED558CCD) & _MASK
    h ^= h >> 33
    h = (h * 0xC4CEB9FE1A85EC53) & _MASK
    h ^= h >> 33
    return h


def mix64(*words: int) -> int:
    """Hash a sequence of integers (each folded to 64 bits)."""
    h = FNV_OFFSET
    for word in words:
        v = word & _MASK
        for _ in range(8):
            h = ((h ^ (v & 0xFF)) * FNV_PRIME) & _MASK
            v >>= 8
    return fmix64(h)


def hash_bytes(data: bytes, seed: int = FNV_OFFSET) -> int:
    h = seed
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK
    return fmix64(h)


def hash_text(text: str) -> int:
    return hash_bytes(text.encode("utf-8"))
