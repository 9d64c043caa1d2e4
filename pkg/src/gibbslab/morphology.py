"""Boolean image algebra: shifts, dilation, erosion, and VOI borders.

Everything outside the array counts as background for both operators,
so erosion shrinks a mask at the array faces and dilation never grows
past them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import GridMismatchError
from .grid import LabelVolume

Offset = tuple[int, int, int]


@dataclass(frozen=True)
class StructuringElement:
    """A non-empty set of integer voxel offsets."""

    offsets: tuple[Offset, ...]

    def __post_init__(self) -> None:
        offs = tuple(tuple(int(c) for c in o) for o in self.offsets)
        if not offs:
            raise ValueError("structuring element must be non-empty")
        if any(len(o) != 3 for o in offs):
            raise ValueError("offsets must be 3-vectors")
        object.__setattr__(self, "offsets", offs)


#: Center plus the six face neighbours.
CROSS = StructuringElement(
    (
        (0, 0, 0),
        (1, 0, 0),
        (-1, 0, 0),
        (0, 1, 0),
        (0, -1, 0),
        (0, 0, 1),
        (0, 0, -1),
    )
)


@dataclass(frozen=True)
class BoolMask:
    """Dense Boolean image with an index-set view."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 3:
            raise ValueError(f"mask must be 3-D, got {bits.ndim}-D")
        bits = bits.copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.bits.shape

    def index_set(self) -> np.ndarray:
        """True-voxel indices as an (n, 3) array, i-fastest order."""
        idx = np.argwhere(self.bits.transpose(2, 1, 0))
        return idx[:, ::-1]

    def __invert__(self) -> "BoolMask":
        return BoolMask(~self.bits)

    def __or__(self, other: "BoolMask") -> "BoolMask":
        return BoolMask(self.bits | other.bits)

    def __and__(self, other: "BoolMask") -> "BoolMask":
        return BoolMask(self.bits & other.bits)

    def __xor__(self, other: "BoolMask") -> "BoolMask":
        return BoolMask(self.bits ^ other.bits)


def volume(mask: BoolMask) -> int:
    """Number of true voxels."""
    return int(np.count_nonzero(mask.bits))


def _shifted(bits: np.ndarray, offset: Offset) -> np.ndarray:
    """Translate content by ``offset``; vacated voxels become background."""
    out = np.zeros_like(bits)
    src = []
    dst = []
    for size, o in zip(bits.shape, offset):
        if abs(o) >= size:
            return out
        if o >= 0:
            src.append(slice(0, size - o))
            dst.append(slice(o, size))
        else:
            src.append(slice(-o, size))
            dst.append(slice(0, size + o))
    out[tuple(dst)] = bits[tuple(src)]
    return out


def dilate(mask: BoolMask, element: StructuringElement = CROSS, n: int = 1) -> BoolMask:
    """n-fold dilation: union of the mask shifted by every offset."""
    if n < 1:
        raise ValueError(f"repetitions must be >= 1, got {n}")
    bits = mask.bits
    for _ in range(n):
        bits = reduce(np.logical_or, (_shifted(bits, o) for o in element.offsets))
    return BoolMask(bits)


def erode(mask: BoolMask, element: StructuringElement = CROSS, n: int = 1) -> BoolMask:
    """n-fold erosion: intersection of the mask shifted by every -offset.

    A voxel survives only if all its offset neighbours are inside the
    mask; neighbours falling outside the array count as background.
    """
    if n < 1:
        raise ValueError(f"repetitions must be >= 1, got {n}")
    bits = mask.bits
    neg = [(-o[0], -o[1], -o[2]) for o in element.offsets]
    for _ in range(n):
        bits = reduce(np.logical_and, (_shifted(bits, o) for o in neg))
    return BoolMask(bits)


def voi_border(labels: LabelVolume, n: int = 3) -> BoolMask:
    """OR over every VOI (background included) of dilate^n XOR erode^n."""
    if labels.labels.ndim != 3:
        raise GridMismatchError("labels must be a 3-D volume")
    acc = np.zeros(labels.grid.counts, dtype=bool)
    for p in range(labels.n_labels):
        part = BoolMask(labels.labels == p)
        band = dilate(part, CROSS, n).bits ^ erode(part, CROSS, n).bits
        acc |= band
    return BoolMask(acc)
