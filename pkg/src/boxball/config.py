"""Ball configurations, walk lifts, records, excursions, and the update operator.

A configuration is a finite 0/1 array indexed from site 0, with implicit
zeros on both sides.  Its walk lift steps up at balls and down at empty
boxes; strict new minima of the walk are the records, and the sites between
consecutive records form excursions.  The one-step update can be computed
either by the left-to-right carrier pass or, equivalently, by reflecting the
walk about its running minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class BoxBallError(Exception):
    """Base class for errors raised by this package."""


class ParseError(BoxBallError):
    """Configuration text contained a character other than 0, 1, whitespace."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class NotRecordClosedError(BoxBallError):
    """An operation needed the walk to end at its running minimum."""


def as_config(values) -> np.ndarray:
    """Coerce a 0/1 sequence to the canonical int8 configuration array."""
    bits = np.asarray(values, dtype=np.int8)
    if bits.ndim != 1:
        raise ValueError("configuration must be one-dimensional")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise ValueError("configuration values must be 0 or 1")
    return bits


def parse_config(text: str) -> np.ndarray:
    """Parse one line of '0'/'1' characters; whitespace is ignored.

    Any other character raises :class:`ParseError` naming its position in
    the raw text.
    """
    bits = []
    for pos, ch in enumerate(text):
        if ch == "0":
            bits.append(0)
        elif ch == "1":
            bits.append(1)
        elif ch.isspace():
            continue
        else:
            raise ParseError(f"invalid character {ch!r} at index {pos}", pos)
    return np.array(bits, dtype=np.int8)


def format_config(bits) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits))


def ball_count(bits) -> int:
    return int(np.sum(np.asarray(bits)))


def density(bits) -> float:
    bits = np.asarray(bits)
    return float(np.mean(bits)) if bits.size else 0.0


@dataclass(frozen=True)
class Walk:
    """Integer walk over a window of sites, plus its value just left of it.

    ``values[i]`` is the walk at site ``start + i``; ``base`` is the value at
    site ``start - 1``.  Sites left of the window are implicit zeros of the
    configuration, so the virtual walk ascends going left from ``base``.
    """

    values: np.ndarray
    base: int = 0
    start: int = 0

    def __len__(self) -> int:
        return len(self.values)

    @property
    def steps(self) -> np.ndarray:
        prev = np.concatenate(([self.base], self.values[:-1]))
        return self.values - prev

    def running_min(self) -> np.ndarray:
        """min over y <= x of the walk, base included."""
        if not len(self.values):
            return np.array([], dtype=np.int64)
        return np.minimum.accumulate(np.minimum(self.values, self.base))

    @property
    def final_height(self) -> int:
        """Height of the walk's endpoint above its running minimum."""
        if not len(self.values):
            return 0
        return int(self.values[-1] - self.running_min()[-1])

    @property
    def is_record_closed(self) -> bool:
        return self.final_height == 0

    def project(self) -> np.ndarray:
        """Recover the configuration: eta(x) = (1 + xi(x) - xi(x-1)) / 2."""
        steps = self.steps
        if steps.size and not np.all(np.abs(steps) == 1):
            raise ValueError("walk steps must be +-1")
        return ((steps + 1) // 2).astype(np.int8)


def lift(bits, base: int = 0, start: int = 0) -> Walk:
    """Walk lift of a configuration: xi(x) = xi(x-1) + 2 eta(x) - 1."""
    bits = np.asarray(bits, dtype=np.int64)
    values = base + np.cumsum(2 * bits - 1)
    return Walk(values=values, base=base, start=start)


def lift_anchored(bits, anchor: int) -> Walk:
    """Lift with the additive constant fixed so that the walk is 0 at ``anchor``.

    ``anchor`` must be a record of the configuration; the anchored labeling
    makes it the record at level 0.
    """
    walk = lift(bits)
    if not is_record(bits, anchor, walk=walk):
        raise ValueError(f"site {anchor} is not a record")
    shift = int(walk.values[anchor])
    return Walk(values=walk.values - shift, base=walk.base - shift, start=walk.start)


def record_mask(walk: Walk) -> np.ndarray:
    """Boolean mask of window sites that are strict new minima of the walk."""
    n = len(walk.values)
    if n == 0:
        return np.array([], dtype=bool)
    prev_min = np.minimum.accumulate(
        np.concatenate(([walk.base], walk.values[:-1]))
    )
    return walk.values < prev_min


def is_record(bits, site: int, walk: Walk | None = None) -> bool:
    if walk is None:
        walk = lift(bits)
    if not (0 <= site < len(walk.values)):
        return False
    return bool(record_mask(walk)[site])


@dataclass(frozen=True)
class RecordIndex:
    """Record sites of a configuration with their level labels.

    With the canonical lift (base 0 left of the window) the j-th in-window
    record sits at walk level -j, so ``levels`` maps j = 1, 2, ... to sites.
    Virtual sites left of the window are all records (levels <= 0).
    """

    positions: np.ndarray
    levels: dict[int, int]


def records(bits) -> RecordIndex:
    walk = lift(bits)
    positions = np.flatnonzero(record_mask(walk))
    levels = {int(-walk.values[p]): int(p) for p in positions}
    return RecordIndex(positions=positions, levels=levels)


@dataclass(frozen=True)
class Excursion:
    """Sites strictly between two consecutive records.

    ``left_record`` may be -1 (the virtual record just left of the window)
    and ``right_record`` may be ``n`` (the terminal record materialized by
    the implicit zero at the window's right edge).  ``length`` counts the
    support plus the record preceding it.
    """

    left_record: int
    right_record: int
    bits: np.ndarray
    height: int

    @property
    def support(self) -> range:
        return range(self.left_record + 1, self.right_record)

    @property
    def length(self) -> int:
        return self.right_record - self.left_record

    @property
    def is_empty(self) -> bool:
        return self.right_record == self.left_record + 1


def excursions(bits) -> list[Excursion]:
    """Split a configuration into the excursions ending at each record.

    The configuration must end at a record, where trailing implicit zeros
    count: the walk has to finish at its running minimum.  Otherwise the
    final excursion is not closed inside the window and
    :class:`NotRecordClosedError` is raised.
    """
    bits = np.asarray(bits, dtype=np.int8)
    walk = lift(bits)
    if not walk.is_record_closed:
        raise NotRecordClosedError(
            "configuration does not end at a record "
            f"(final height {walk.final_height}); append trailing zeros"
        )
    rec = np.flatnonzero(record_mask(walk))
    bounds = [-1] + [int(r) for r in rec]
    n = len(bits)
    if n and (not len(rec) or rec[-1] < n - 1):
        bounds.append(n)
    out = []
    values = walk.values
    for y1, y2 in zip(bounds[:-1], bounds[1:]):
        seg = bits[y1 + 1 : y2]
        left_level = int(values[y1]) if y1 >= 0 else walk.base
        height = int(values[y1 + 1 : y2].max() - left_level) if y2 > y1 + 1 else 0
        out.append(Excursion(left_record=y1, right_record=y2, bits=seg, height=height))
    return out


def close_config(bits) -> np.ndarray:
    """Append just enough zeros that the configuration ends at a record."""
    bits = np.asarray(bits, dtype=np.int8)
    pad = lift(bits).final_height
    if pad == 0:
        return bits
    return np.concatenate([bits, np.zeros(pad, dtype=np.int8)])


def apply_T_carrier(bits) -> np.ndarray:
    """One update step by the literal carrier pass.

    The carrier starts empty left of the window, picks up every ball it
    visits and deposits one in each empty box while loaded.  The output is
    extended to the right until the carrier is empty, so the ball count is
    preserved exactly.
    """
    out = []
    carry = 0
    for b in np.asarray(bits).tolist():
        if b:
            carry += 1
            out.append(0)
        elif carry:
            carry -= 1
            out.append(1)
        else:
            out.append(0)
    out.extend([1] * carry)
    return np.array(out, dtype=np.int8)


def apply_T_reflect(walk: Walk) -> Walk:
    """One update step by reflecting the walk about its running minimum.

    The window is first extended by the walk's final height so the reflected
    image keeps every ball; the result covers the same sites as the carrier
    output.
    """
    ext = walk.final_height
    values = walk.values
    if ext:
        tail = values[-1] - np.arange(1, ext + 1)
        values = np.concatenate([values, tail])
    if not len(values):
        return Walk(values=values.copy(), base=walk.base, start=walk.start)
    run_min = np.minimum.accumulate(np.minimum(values, walk.base))
    return Walk(values=2 * run_min - values, base=walk.base, start=walk.start)


def apply_T(bits) -> np.ndarray:
    """One update step (vectorized walk-reflection form)."""
    return apply_T_reflect(lift(np.asarray(bits, dtype=np.int8))).project()


def evolve(bits, steps: int) -> np.ndarray:
    """Apply the update ``steps`` times."""
    bits = np.asarray(bits, dtype=np.int8)
    for _ in range(steps):
        bits = apply_T(bits)
    return bits
