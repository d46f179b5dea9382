"""Morgan-style circular fingerprints and Tanimoto similarity.

For every atom and every radius 0..r, the canonical code of the
neighborhood (initial invariant: element, degree, charge, total H,
ring flag, aromatic flag; refined by sorted neighbor-code folding)
sets one bit at code mod nbits. Defaults are radius 2 over 2048 bits;
both parameters travel with the fingerprint and must match for
comparison. Hashing is the pinned scheme in molrefine.hashing, so
fingerprints are bit-exact across platforms.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass

from .hashing import mix64
from .molgraph import MolGraph
from .molgraph.elements import ATOMIC_NUMBER
from .molgraph.signature import refine_codes

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 2048


@dataclass(frozen=True)
class Fingerprint:
    bits: int
    nbits: int
    radius: int

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    def to_base64(self) -> str:
        raw = self.bits.to_bytes(self.nbits // 8, "little")
        return base64.b64encode(raw).decode("ascii")

    @classmethod
    def from_base64(cls, text: str, nbits: int, radius: int) -> "Fingerprint":
        raw = base64.b64decode(text.encode("ascii"))
        if len(raw) != nbits // 8:
            raise ValueError(f"fingerprint payload is {len(raw)} bytes, expected {nbits // 8}")
        return cls(int.from_bytes(raw, "little"), nbits, radius)


def initial_codes(mol: MolGraph) -> list[int]:
    return [
        mix64(
            ATOMIC_NUMBER[atom.element],
            mol.degree(idx),
            atom.formal_charge,
            mol.total_h(idx),
            int(idx in mol.ring_atoms),
            int(atom.aromatic_flag),
        )
        for idx, atom in enumerate(mol.atoms)
    ]


def morgan_fingerprint(
    mol: MolGraph,
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> Fingerprint:
    if nbits < 64 or nbits & (nbits - 1):
        raise ValueError(f"nbits must be a power of two >= 64, got {nbits}")
    if not 0 <= radius <= 8:
        raise ValueError(f"radius must be in 0..8, got {radius}")
    bits = 0
    codes = initial_codes(mol)
    for r in range(radius + 1):
        for code in codes:
            bits |= 1 << (code % nbits)
        if r < radius:
            codes = refine_codes(mol, codes, 1)
    return Fingerprint(bits, nbits, radius)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    if a.nbits != b.nbits or a.radius != b.radius:
        raise ValueError(
            f"fingerprints are not comparable: "
            f"(nbits={a.nbits}, radius={a.radius}) vs (nbits={b.nbits}, radius={b.radius})"
        )
    union = bin(a.bits | b.bits).count("1")
    if union == 0:
        return 1.0
    inter = bin(a.bits & b.bits).count("1")
    return inter / union
