"""Multidegrees in Z^(k+1) and the Koszul signs they induce.

Every sign in the package is derived from `dot`: two homogeneous elements of
degrees g and h commute up to (-1)**dot(g, h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import UsageError

MAX_DEPTH = 16

MultiDegree = tuple  # tuple[int, ...] of length k + 1


@dataclass(frozen=True)
class ChartSpec:
    """One polynomial coordinate chart: n coordinates, iteration depth k."""

    n: int
    k: int
    names: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise UsageError(f"chart needs n >= 1, got {self.n!r}")
        if not isinstance(self.k, int) or not 1 <= self.k <= MAX_DEPTH:
            raise UsageError(f"chart needs 1 <= k <= {MAX_DEPTH}, got {self.k!r}")
        names = tuple(self.names) or tuple(f"x{i}" for i in range(1, self.n + 1))
        if len(names) != self.n or len(set(names)) != self.n:
            raise UsageError("coordinate names must be n pairwise distinct strings")
        object.__setattr__(self, "names", names)

    @property
    def slots(self) -> int:
        """Number of differential slots, k + 1."""
        return self.k + 1

    @property
    def top(self) -> int:
        """Index of the outermost slot, k + 1."""
        return self.k + 1

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k}


def zero_degree(length: int) -> MultiDegree:
    return (0,) * length


def unit_degree(slot: int, length: int) -> MultiDegree:
    """Degree of d_slot: 1 in position slot (1-based)."""
    if not 1 <= slot <= length:
        raise UsageError(f"slot {slot} outside 1..{length}")
    return tuple(1 if i == slot - 1 else 0 for i in range(length))


def add(g: Sequence[int], h: Sequence[int]) -> MultiDegree:
    _check_lengths(g, h)
    return tuple(a + b for a, b in zip(g, h))


def neg(g: Sequence[int]) -> MultiDegree:
    return tuple(-a for a in g)


def dot(g: Sequence[int], h: Sequence[int]) -> int:
    _check_lengths(g, h)
    return sum(a * b for a, b in zip(g, h))


def commutation_sign(g: Sequence[int], h: Sequence[int]) -> int:
    return -1 if dot(g, h) & 1 else 1


def reorder_sign(degrees: Sequence[Sequence[int]], permutation: Sequence[int]) -> int:
    """Sign picked up when factors of the given degrees are rearranged.

    ``permutation[i]`` is the index of the factor placed at position i.
    """
    m = len(degrees)
    if sorted(permutation) != list(range(m)):
        raise UsageError(f"invalid permutation {list(permutation)!r} of {m} factors")
    sign = 1
    for i in range(m):
        for j in range(i + 1, m):
            if permutation[i] > permutation[j]:
                sign *= commutation_sign(degrees[permutation[i]], degrees[permutation[j]])
    return sign


def _check_lengths(g, h):
    if len(g) != len(h):
        raise UsageError(f"multidegree length mismatch: {len(g)} vs {len(h)}")


# Subset labels L of {1, ..., k+1} are stored as bitmasks: slot i <-> bit i-1.

def mask_of(labels: Sequence[int], slots: int) -> int:
    mask = 0
    for s in labels:
        if not 1 <= s <= slots:
            raise UsageError(f"slot {s} outside 1..{slots}")
        if mask >> (s - 1) & 1:
            raise UsageError(f"slot {s} repeated in subset label")
        mask |= 1 << (s - 1)
    return mask


def labels_of(mask: int) -> tuple:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_degree(mask: int, slots: int) -> MultiDegree:
    if mask >> slots:
        raise UsageError(f"subset mask {mask:#b} has bits beyond slot {slots}")
    return tuple((mask >> i) & 1 for i in range(slots))


def parity(mask: int) -> int:
    return bin(mask).count("1") & 1
