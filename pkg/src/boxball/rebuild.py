"""Rebuild configurations from their components (the inverse of the decomposition).

An excursion is rebuilt top-down: starting from the largest size, the
requested number of k-solitons is spliced in after each labeled k-slot of
the partial excursion, records first.  A block inserted after a head site is
oriented zeros-then-ones, after a tail site or record ones-then-zeros; this
is the unique orientation that keeps the walk valid and makes the
decomposition return the same counts.

Excursions are then concatenated with one record between each, Record 0 at
the origin; entries with negative labels feed the excursions left of the
origin, consumed contiguously from label -1 leftward.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BoxBallError, Excursion, Walk, lift
from .slots import SlotComponents, slot_configuration
from .solitons import identify_stream


class RebuildError(BoxBallError):
    pass


@dataclass
class ComponentCursor:
    """Per-size bookkeeping of consumed component entries.

    ``right[k]`` entries with labels 0, 1, ... have been used; ``left[k]``
    entries with labels -1, -2, ... have been used.  Consumption is
    contiguous outward from the origin on both sides.
    """

    right: dict[int, int] = field(default_factory=dict)
    left: dict[int, int] = field(default_factory=dict)

    def take_right(self, k: int, count: int) -> tuple[int, int]:
        start = self.right.get(k, 0)
        self.right[k] = start + count
        return start, start + count

    def take_left(self, k: int, count: int) -> tuple[int, int]:
        used = self.left.get(k, 0)
        self.left[k] = used + count
        return -used - count, -used


class _ZetaSource:
    """Reads component entries from a frozen field through a cursor."""

    def __init__(self, zeta: SlotComponents, cursor: ComponentCursor | None = None):
        self.zeta = zeta
        self.cursor = cursor if cursor is not None else ComponentCursor()
        self.max_size = zeta.max_size

    def next_right(self, k: int, count: int) -> list[int]:
        lo, hi = self.cursor.take_right(k, count)
        return [self.zeta.get(k, i) for i in range(lo, hi)]

    def next_left(self, k: int, count: int) -> list[int]:
        lo, hi = self.cursor.take_left(k, count)
        return [self.zeta.get(k, i) for i in range(lo, hi)]

    def remaining_right(self) -> bool:
        for k, per_slot in self.zeta.counts.items():
            used = self.cursor.right.get(k, 0)
            if any(i >= used and c for i, c in per_slot.items()):
                return True
        return False


def n_slots_in_excursion(excursion, k: int) -> int:
    """Number of k-slots an excursion offers: its preceding record plus the
    interior sites of order >= k."""
    bits = excursion.bits if isinstance(excursion, Excursion) else np.asarray(excursion)
    if not len(bits):
        return 1
    order = slot_configuration(bits).order
    return 1 + int(np.count_nonzero(order >= k))


def _interior_slots(bits: np.ndarray, k: int) -> np.ndarray:
    if not len(bits):
        return np.array([], dtype=np.int64)
    order = slot_configuration(bits).order
    return np.flatnonzero(order >= k)


def _splice(bits: list[int], at: int, k: int, count: int, after_head: bool) -> None:
    """Insert ``count`` k-soliton blocks at index ``at`` of the working list."""
    if after_head:
        block = [0] * k + [1] * k
    else:
        block = [1] * k + [0] * k
    bits[at:at] = block * count


def _build_excursion(take, max_size: int) -> np.ndarray:
    """Build one excursion, consuming ``take(k, n_k)`` entries top-down."""
    bits: list[int] = []
    for k in range(max_size, 0, -1):
        arr = np.array(bits, dtype=np.int8)
        interior = _interior_slots(arr, k)
        values = take(k, 1 + len(interior))
        # splice right-to-left so earlier slot positions stay valid
        for ordinal in range(len(interior), 0, -1):
            count = values[ordinal]
            if count:
                site = int(interior[ordinal - 1])
                _splice(bits, site + 1, k, count, after_head=bool(arr[site] == 1))
        if values[0]:
            _splice(bits, 0, k, values[0], after_head=False)
    return np.array(bits, dtype=np.int8)


def reconstruct_excursion(zeta: SlotComponents, cursor: ComponentCursor | None = None) -> np.ndarray:
    """Rebuild the next excursion right of the origin, advancing the cursor."""
    source = _ZetaSource(zeta, cursor)
    return _build_excursion(source.next_right, source.max_size)


def reconstruct(zeta: SlotComponents, n_right: int | None = None, n_left: int = 0) -> Walk:
    """Rebuild a configuration from components.

    Builds ``n_right`` excursions right of the origin and ``n_left`` to its
    left, concatenated with one record between each and Record 0 at the
    origin.  When ``n_right`` is None, excursions are built until every
    nonzero entry with a nonnegative label has been consumed.  The returned
    walk starts at the leftmost rebuilt site and is 0 at the origin record.
    """
    source = _ZetaSource(zeta, ComponentCursor())

    right_parts: list[np.ndarray] = []
    if n_right is None:
        while source.remaining_right():
            right_parts.append(_build_excursion(source.next_right, source.max_size))
        if not right_parts:
            right_parts.append(_build_excursion(source.next_right, source.max_size))
    else:
        for _ in range(n_right):
            right_parts.append(_build_excursion(source.next_right, source.max_size))

    left_parts: list[np.ndarray] = []
    for _ in range(n_left):
        left_parts.append(_build_excursion(source.next_left, source.max_size))

    pieces: list[np.ndarray] = []
    for part in reversed(left_parts):
        pieces.append(np.zeros(1, dtype=np.int8))
        pieces.append(part)
    origin = sum(len(p) for p in pieces)
    pieces.append(np.zeros(1, dtype=np.int8))
    for j, part in enumerate(right_parts):
        if j:
            pieces.append(np.zeros(1, dtype=np.int8))
        pieces.append(part)
    bits = np.concatenate(pieces)
    walk = lift(bits, start=-origin)
    shift = int(walk.values[origin])
    return Walk(values=walk.values - shift, base=walk.base - shift, start=-origin)


def reconstruct_config(zeta: SlotComponents, n_right: int | None = None, n_left: int = 0):
    """Like :func:`reconstruct` but returning ``(bits, origin_index)``."""
    walk = reconstruct(zeta, n_right=n_right, n_left=n_left)
    return walk.project(), -walk.start


def strip_solitons(bits, max_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Delete the sites of every soliton of size <= ``max_size``.

    Removing those sites leaves the walk values of the surviving sites, and
    hence the records and all larger components, unchanged.  Returns the
    thinned configuration and the sorted removed sites.
    """
    bits = np.asarray(bits, dtype=np.int8)
    solitons = identify_stream(bits)
    removed = sorted(
        x
        for k, group in solitons.by_size.items()
        if k <= max_size
        for s in group
        for x in s.sites
    )
    if removed and removed[-1] >= len(bits):
        raise RebuildError("cannot strip solitons extending past the window; close the configuration first")
    keep = np.delete(bits, removed)
    return keep, np.asarray(removed, dtype=np.int64)
