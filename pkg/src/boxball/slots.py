"""Slot configurations, components, soliton flows, and the component shift law.

The j-th head or tail site of a soliton of size m has order j-1 and is a
k-slot for every k <= j-1; records are k-slots for every k.  Slots are
labeled so that label 0 sits at a chosen anchor record ("Record 0"), and the
k-component counts the k-solitons appended after each labeled k-slot.

On a finite window the anchor is passed explicitly: configurations built by
the reconstruction can carry material on both sides of Record 0, in which
case slots and solitons left of the anchor get negative labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import (
    BoxBallError,
    NotRecordClosedError,
    apply_T_reflect,
    close_config,
    lift_anchored,
)
from .solitons import SolitonSet, identify_stream, match_sets

# sentinel order for record sites; larger than any soliton size
RECORD_ORDER = 1 << 30


class SlotError(BoxBallError):
    pass


@dataclass(frozen=True)
class SlotConfig:
    """Per-site slot order; records carry :data:`RECORD_ORDER`."""

    order: np.ndarray

    def slot_sites(self, k: int) -> np.ndarray:
        """Sites that are k-slots, ascending."""
        return np.flatnonzero(self.order >= k)


def slot_configuration(bits, solitons: SolitonSet | None = None) -> SlotConfig:
    """Assign each window site its slot order.

    The j-th head site and j-th tail site of any soliton get order j-1;
    records get the sentinel.  The configuration must be record-closed so
    that every site is classified.
    """
    bits = np.asarray(bits, dtype=np.int8)
    if solitons is None:
        solitons = identify_stream(bits)
    n = len(bits)
    order = np.full(n, -1, dtype=np.int64)
    order[solitons.record_sites] = RECORD_ORDER
    for group in solitons.by_size.values():
        for s in group:
            for j, x in enumerate(s.head):
                if x < n:
                    order[x] = j
            for j, x in enumerate(s.tail):
                if x < n:
                    order[x] = j
    if np.any(order < 0):
        raise NotRecordClosedError(
            "unclassified sites: close the configuration with trailing zeros first"
        )
    return SlotConfig(order=order)


@dataclass(frozen=True)
class SlotTable:
    """k-slot positions with labels anchored at Record 0.

    ``per_k[k]`` lists slot sites ascending; the site at index
    ``zero_index[k]`` is the anchor, so the label of ``per_k[k][i]`` is
    ``i - zero_index[k]``.
    """

    per_k: dict[int, np.ndarray]
    zero_index: dict[int, int]
    anchor: int

    def position(self, k: int, label: int) -> int:
        sites = self.per_k[k]
        idx = self.zero_index[k] + label
        if not (0 <= idx < len(sites)):
            raise SlotError(f"{k}-slot label {label} outside the enumerated range")
        return int(sites[idx])

    def label_range(self, k: int) -> tuple[int, int]:
        """Half-open label interval enumerable in the window."""
        return -self.zero_index[k], len(self.per_k[k]) - self.zero_index[k]

    def label_of_site_left_of(self, k: int, site: int) -> int:
        """Label of the rightmost k-slot strictly left of ``site``."""
        sites = self.per_k[k]
        idx = int(np.searchsorted(sites, site, side="left")) - 1
        if idx < 0:
            raise SlotError(f"no {k}-slot left of site {site} in the window")
        return idx - self.zero_index[k]


def enumerate_slots(slot_config: SlotConfig, record_zero: int, ks=None) -> SlotTable:
    """Label the k-slots of each requested k with label 0 at ``record_zero``."""
    order = slot_config.order
    if not (0 <= record_zero < len(order)) or order[record_zero] != RECORD_ORDER:
        raise SlotError(f"site {record_zero} is not a record")
    if ks is None:
        finite = order[order < RECORD_ORDER]
        kmax = int(finite.max()) + 1 if finite.size else 1
        ks = range(1, kmax + 1)
    per_k, zero_index = {}, {}
    for k in ks:
        sites = slot_config.slot_sites(k)
        zi = int(np.searchsorted(sites, record_zero))
        per_k[k] = sites
        zero_index[k] = zi
    return SlotTable(per_k=per_k, zero_index=zero_index, anchor=record_zero)


@dataclass
class SlotComponents:
    """Sparse per-size soliton counts per labeled slot.

    ``counts[k][i]`` is the number of k-solitons appended to the i-th k-slot;
    missing entries are zero.  ``label_range`` records, when known, the label
    window the counts were enumerated over.
    """

    counts: dict[int, dict[int, int]]
    label_range: dict[int, tuple[int, int]] | None = None

    def get(self, k: int, i: int) -> int:
        return self.counts.get(k, {}).get(i, 0)

    def sizes(self) -> list[int]:
        return sorted(k for k, v in self.counts.items() if v)

    @property
    def max_size(self) -> int:
        return max(self.sizes(), default=0)

    def total(self, k: int) -> int:
        return sum(self.counts.get(k, {}).values())

    def nonzero(self) -> list[tuple[int, int, int]]:
        out = []
        for k in sorted(self.counts):
            for i in sorted(self.counts[k]):
                c = self.counts[k][i]
                if c:
                    out.append((k, i, c))
        return out

    def to_text(self) -> str:
        lines = ["slots v1"]
        lines += [f"{k} {i} {c}" for k, i, c in self.nonzero()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SlotComponents":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != "slots v1":
            raise SlotError("missing 'slots v1' header")
        counts: dict[int, dict[int, int]] = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise SlotError(f"bad components line: {ln!r}")
            k, i, c = (int(p) for p in parts)
            if k < 1 or c < 0:
                raise SlotError(f"bad components entry: {ln!r}")
            counts.setdefault(k, {})[i] = c
        return cls(counts=counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SlotComponents):
            return NotImplemented
        return self.nonzero() == other.nonzero()


def components(bits, record_zero: int = 0) -> SlotComponents:
    """Component decomposition of a record-closed configuration.

    Each k-soliton is assigned to the unique labeled k-slot it sits after;
    label 0 is the k-slot at ``record_zero``.
    """
    bits = np.asarray(bits, dtype=np.int8)
    solitons = identify_stream(bits)
    slot_config = slot_configuration(bits, solitons)
    table = enumerate_slots(slot_config, record_zero)
    counts: dict[int, dict[int, int]] = {}
    label_range: dict[int, tuple[int, int]] = {}
    for k in table.per_k:
        label_range[k] = table.label_range(k)
        if k not in solitons.by_size:
            continue
        per_slot: dict[int, int] = {}
        for s in solitons.by_size[k]:
            i = table.label_of_site_left_of(k, s.leftmost)
            per_slot[i] = per_slot.get(i, 0) + 1
        counts[k] = per_slot
    return SlotComponents(counts=counts, label_range=label_range)


@dataclass
class FlowReport:
    """Cumulative soliton and slot flows through Record 0.

    ``J[(m, s)]`` counts m-solitons that started strictly left of the anchor
    record and sit entirely right of its image after s steps;
    ``o[(k, s)] = sum_{m>k} 2(m-k) J[(m, s)]``.
    """

    t: int
    J: dict[tuple[int, int], int] = field(default_factory=dict)
    o: dict[tuple[int, int], int] = field(default_factory=dict)

    def offset(self, k: int, s: int) -> int:
        return self.o.get((k, s), 0)


def _evolved_anchor(walk) -> int:
    """Position of the level-0 record of an anchored walk."""
    hits = np.flatnonzero(walk.values == 0)
    if not hits.size:
        raise SlotError("anchor record left the window")
    return int(hits[0])


def soliton_flow(bits, t: int, record_zero: int = 0) -> FlowReport:
    """Track solitons for ``t`` steps and report flows through Record 0."""
    bits = close_config(np.asarray(bits, dtype=np.int8))
    walk = lift_anchored(bits, record_zero)
    current = identify_stream(bits)
    sizes = sorted(current.by_size)
    max_size = current.max_size
    # for each soliton starting left of the anchor, remember its image
    tracked = {
        s: s
        for group in current.by_size.values()
        for s in group
        if max(s.sites) < record_zero
    }
    report = FlowReport(t=t)
    for step in range(1, t + 1):
        walk = apply_T_reflect(walk)
        new_set = identify_stream(walk.project())
        mapping = match_sets(current, new_set)
        tracked = {s0: mapping[img] for s0, img in tracked.items()}
        anchor = _evolved_anchor(walk)
        crossed: dict[int, int] = {}
        for s0, img in tracked.items():
            if min(img.sites) >= anchor:
                crossed[s0.size] = crossed.get(s0.size, 0) + 1
        for m in sizes:
            report.J[(m, step)] = crossed.get(m, 0)
        for k in range(1, max_size + 1):
            report.o[(k, step)] = sum(
                2 * (m - k) * report.J.get((m, step), 0) for m in sizes if m > k
            )
        current = new_set
    return report


@dataclass
class ShiftReport:
    ok: bool
    t: int
    failures: list[tuple[int, int, int, int, int]]  # (k, t, i, expected, got)
    checked: int


def verify_component_shift(bits, t: int, record_zero: int = 0) -> ShiftReport:
    """Check that each k-component after s <= t steps is the s-step shift.

    Compares ``M_k T^s (i)`` with ``M_k (i - o_k^s - k s)`` for every k with
    solitons present, on the label range enumerable in both windows.
    """
    bits = close_config(np.asarray(bits, dtype=np.int8))
    comps0 = components(bits, record_zero)
    flow = soliton_flow(bits, t, record_zero)
    walk = lift_anchored(bits, record_zero)
    failures = []
    checked = 0
    for s in range(1, t + 1):
        walk = apply_T_reflect(walk)
        cfg_s = close_config(walk.project())
        anchor_s = _evolved_anchor(walk)
        comps_s = components(cfg_s, anchor_s)
        for k in comps0.sizes():
            shift = flow.offset(k, s) + k * s
            lo_s, hi_s = comps_s.label_range[k]
            lo_0, hi_0 = comps0.label_range[k]
            lo = max(lo_s, lo_0 + shift)
            hi = min(hi_s, hi_0 + shift)
            for i in range(lo, hi):
                expected = comps0.get(k, i - shift)
                got = comps_s.get(k, i)
                checked += 1
                if expected != got:
                    failures.append((k, s, i, expected, got))
    return ShiftReport(ok=not failures, t=t, failures=failures, checked=checked)


def tagged_slot(bits, k: int, j: int, t: int, record_zero: int = 0) -> int:
    """Position after ``t`` steps of the k-slot initially labeled ``j``.

    Returns ``s_k(T^t xi, o_k^t + k t + j)``.  A k-soliton appended to the
    slot at time 0 is appended to the returned slot at time t.
    """
    bits = close_config(np.asarray(bits, dtype=np.int8))
    if t == 0:
        table = enumerate_slots(slot_configuration(bits), record_zero, ks=[k])
        return table.position(k, j)
    flow = soliton_flow(bits, t, record_zero)
    walk = lift_anchored(bits, record_zero)
    for _ in range(t):
        walk = apply_T_reflect(walk)
    cfg_t = close_config(walk.project())
    anchor_t = _evolved_anchor(walk)
    table = enumerate_slots(slot_configuration(cfg_t), anchor_t, ks=[k])
    return table.position(k, flow.offset(k, t) + k * t + j)
