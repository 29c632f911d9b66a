"""2-adic residue-class tables for the split and non-split problems."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType


@dataclass(frozen=True)
class TwoAdicTable:
    """Classes s in S with residue sets R(s) mod M(s) and weights tau.

    ``residues[s]`` are the classes as printed; ``value_classes(s)`` gives
    the residues the represented value F(x) itself must lie in.  For the
    split table the printed classes are those of the discriminant -F(x), so
    the value classes are their negatives.
    """

    name: str
    S: tuple[int, ...]
    residues: MappingProxyType
    moduli: MappingProxyType
    weights: MappingProxyType
    negate: bool

    def value_classes(self, s: int) -> frozenset[int]:
        M = self.moduli[s]
        sign = -1 if self.negate else 1
        return frozenset((sign * r) % M for r in self.residues[s])

    def tau(self, *key) -> int:
        return self.weights[key if len(key) > 1 else key[0]]


SPLIT = TwoAdicTable(
    name="split",
    S=(1, 4),
    residues=MappingProxyType({1: (5,), 4: (2, 3)}),
    moduli=MappingProxyType({1: 8, 4: 4}),
    weights=MappingProxyType({(1, 1): 1, (1, 4): 2, (4, 1): 2, (4, 4): 4}),
    negate=True,
)

NONSPLIT = TwoAdicTable(
    name="nonsplit",
    S=(3, 4, 8),
    residues=MappingProxyType({3: (3,), 4: (4,), 8: (8,)}),
    moduli=MappingProxyType({3: 8, 4: 16, 8: 16}),
    weights=MappingProxyType({3: 1, 4: 2, 8: 2}),
    negate=False,
)
