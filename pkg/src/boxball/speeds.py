"""Deterministic speed systems and empirical speed measurement.

Three routes to the asymptotic speeds are implemented and cross-checked:

* the explicit triangular recursions (slot counts w, per-slot densities
  alpha, head sizes s, speeds v = s / w),
* the dense interaction system expressing each speed through collision
  frequencies with every other size,
* the vertical system for speeds measured in records (h, the tagged-record
  speed v0, and the walk's vertical speed h0 = v0 / w0).

Trajectory tracking follows tagged solitons exactly through the tail-to-head
pairing, tagged records through their walk level, and counts collisions by
half-steps: a tagged soliton frozen at a step records half a collision with
the top soliton of its nesting chain, and a free soliton records half a
collision with every soliton nested below it.  Complete overtakings then
contribute exactly one collision, and truncated ones at the window edges a
half, making the displacement identity exact over full laps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BoxBallError, apply_T_reflect, close_config, lift
from .slots import RECORD_ORDER, slot_configuration
from .solitons import Soliton, SolitonSet, identify_stream, match_sets


class SpeedSystemError(BoxBallError):
    pass


class WindowMarginError(BoxBallError):
    pass


@dataclass
class SpeedTable:
    """Solved speed systems at truncation K; vectors are indexed by k-1."""

    K: int
    rho: np.ndarray
    alpha: np.ndarray
    w: np.ndarray
    s: np.ndarray
    v: np.ndarray
    h: np.ndarray
    w0: float
    v0: float
    h0: float

    def to_tsv(self) -> str:
        lines = ["k\trho\talpha\tw\ts\tv\th"]
        for k in range(1, self.K + 1):
            i = k - 1
            lines.append(
                f"{k}\t{self.rho[i]:.6f}\t{self.alpha[i]:.6f}\t{self.w[i]:.6f}"
                f"\t{self.s[i]:.6f}\t{self.v[i]:.6f}\t{self.h[i]:.6f}"
            )
        lines.append(f"w0\t{self.w0:.6f}")
        lines.append(f"v0\t{self.v0:.6f}")
        lines.append(f"h0\t{self.h0:.6f}")
        return "\n".join(lines) + "\n"


def _check_nonneg(name, vec):
    vec = np.asarray(vec, dtype=np.float64)
    if np.any(vec < 0):
        raise SpeedSystemError(f"{name} entries must be nonnegative")
    return vec


def solve_explicit(rho=None, alpha=None, K: int | None = None) -> SpeedTable:
    """Solve the triangular recursions from either rho or alpha.

    Given rho: w_k = 1 + sum_{m>k} 2(m-k) rho_m downward, alpha_k = rho_k / w_k.
    Given alpha: the same w recursion with rho_m = alpha_m w_m, downward from
    w_K = 1.  Then s_k = k + sum_{m<k} 2(k-m) s_m alpha_m upward and
    v_k = s_k / w_k.  The vertical system is solved alongside.
    """
    if (rho is None) == (alpha is None):
        raise SpeedSystemError("provide exactly one of rho or alpha")
    if rho is not None:
        rho = _check_nonneg("rho", rho)
        K = K if K is not None else len(rho)
        rho = np.concatenate([rho, np.zeros(max(0, K - len(rho)))])[:K]
        w = np.ones(K)
        for k in range(K - 1, 0, -1):
            m = np.arange(k + 1, K + 1)
            w[k - 1] = 1.0 + np.sum(2 * (m - k) * rho[k:])
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = np.where(w > 0, rho / w, 0.0)
    else:
        alpha = _check_nonneg("alpha", alpha)
        K = K if K is not None else len(alpha)
        alpha = np.concatenate([alpha, np.zeros(max(0, K - len(alpha)))])[:K]
        w = np.ones(K)
        for k in range(K - 1, 0, -1):
            m = np.arange(k + 1, K + 1)
            w[k - 1] = 1.0 + np.sum(2 * (m - k) * w[k:] * alpha[k:])
        rho = alpha * w
    w0 = 1.0 + np.sum(2 * np.arange(1, K + 1) * rho)

    s = np.zeros(K)
    for k in range(1, K + 1):
        m = np.arange(1, k)
        s[k - 1] = k + np.sum(2 * (k - m) * s[: k - 1] * alpha[: k - 1])
    v = s / w

    h, v0, h0 = solve_vertical(rho, K)
    return SpeedTable(K=K, rho=rho, alpha=alpha, w=w, s=s, v=v, h=h, w0=float(w0), v0=v0, h0=h0)


def solve_interaction(rho_bar, K: int | None = None) -> np.ndarray:
    """Solve the dense interaction system for the speeds.

    v_k = k + sum_{m<k} 2 m rbar_m (v_k - v_m) - sum_{m>k} 2 k rbar_m (v_m - v_k)
    rearranged into a K x K linear solve with partial pivoting.
    """
    rho_bar = _check_nonneg("rho_bar", rho_bar)
    K = K if K is not None else len(rho_bar)
    rho_bar = np.concatenate([rho_bar, np.zeros(max(0, K - len(rho_bar)))])[:K]
    A = np.zeros((K, K))
    b = np.arange(1, K + 1, dtype=np.float64)
    for k in range(1, K + 1):
        below = np.arange(1, k)
        above = np.arange(k + 1, K + 1)
        A[k - 1, k - 1] = 1.0 - np.sum(2 * below * rho_bar[: k - 1]) - np.sum(
            2 * k * rho_bar[k:]
        )
        A[k - 1, : k - 1] = 2 * below * rho_bar[: k - 1]
        A[k - 1, k:] = 2 * k * rho_bar[k:]
    try:
        return np.linalg.solve(A, b)
    except np.linalg.LinAlgError as err:
        raise SpeedSystemError(
            f"interaction system singular (cond={np.linalg.cond(A):.3e})"
        ) from err


def solve_vertical(rho, K: int | None = None) -> tuple[np.ndarray, float, float]:
    """Solve the record-measured speed system.

    h_k = k + sum_{m>k} 2(m-k)(h_m - h_k) rho_m, downward from h_K = K;
    v0 = sum 2 m rho_m h_m; h0 = v0 / w0.
    """
    rho = _check_nonneg("rho", rho)
    K = K if K is not None else len(rho)
    rho = np.concatenate([rho, np.zeros(max(0, K - len(rho)))])[:K]
    h = np.zeros(K)
    for k in range(K, 0, -1):
        m = np.arange(k + 1, K + 1)
        wk = 1.0 + np.sum(2 * (m - k) * rho[k:])
        h[k - 1] = (k + np.sum(2 * (m - k) * rho[k:] * h[k:])) / wk
    ks = np.arange(1, K + 1)
    v0 = float(np.sum(2 * ks * rho * h))
    w0 = 1.0 + np.sum(2 * ks * rho)
    return h, v0, float(v0 / w0)


def consistency_residuals(table: SpeedTable) -> dict[str, float]:
    """Max-abs residuals of the cross-identities between the three systems."""
    K, v, h = table.K, table.v, table.h
    rho_bar = table.rho / table.w0
    res_interaction = 0.0
    for k in range(1, K + 1):
        below = np.arange(1, k)
        above = np.arange(k + 1, K + 1)
        rhs = (
            k
            + np.sum(2 * below * rho_bar[: k - 1] * (v[k - 1] - v[: k - 1]))
            - np.sum(2 * k * rho_bar[k:] * (v[k:] - v[k - 1]))
        )
        res_interaction = max(res_interaction, abs(v[k - 1] - rhs))
    res_vertical = float(np.max(np.abs(v - (h * table.w0 - table.v0)))) if K else 0.0
    ks = np.arange(1, K + 1)
    res_v0 = abs(table.v0 - float(np.sum(2 * ks * table.rho * v)))
    res_rho = float(np.max(np.abs(table.rho - table.alpha * table.w))) if K else 0.0
    return {
        "interaction": float(res_interaction),
        "vertical": res_vertical,
        "v0": float(res_v0),
        "rho_alpha_w": res_rho,
    }


@dataclass
class TrackedSoliton:
    size: int
    x: np.ndarray  # leftmost site at t = 0..T
    y: np.ndarray  # records passed by t = 0..T
    collisions: dict[int, float] = field(default_factory=dict)


@dataclass
class TrackedRecord:
    level: int
    x: np.ndarray  # position at t = 0..T


@dataclass
class TrajectorySet:
    steps: int
    solitons: list[TrackedSoliton]
    records: list[TrackedRecord]

    def by_size(self) -> dict[int, list[TrackedSoliton]]:
        out: dict[int, list[TrackedSoliton]] = {}
        for s in self.solitons:
            out.setdefault(s.size, []).append(s)
        return out

    def to_tsv(self) -> str:
        lines = ["kind\tid\tk\tt\tx"]
        for idx, s in enumerate(self.solitons):
            for t, x in enumerate(s.x):
                lines.append(f"soliton\t{idx}\t{s.size}\t{t}\t{x}")
        for idx, r in enumerate(self.records):
            for t, x in enumerate(r.x):
                lines.append(f"record\t{idx}\t{r.level}\t{t}\t{x}")
        return "\n".join(lines) + "\n"


def _nesting_halves(sols: SolitonSet, order: np.ndarray, tagged: set[Soliton]) -> dict[Soliton, dict[int, float]]:
    """Half-collision increments for one step, from the appended-to forest.

    A soliton appended after a slot site belonging to another soliton is
    frozen this step; its chain's root is the one free to move.
    """
    all_sols = sols.all()
    if not all_sols:
        return {}
    owner: dict[int, Soliton] = {}
    for s in all_sols:
        for x in s.sites:
            if x < len(order):
                owner[x] = s
    # slot sites per size are needed to find each soliton's parent
    slot_sites: dict[int, np.ndarray] = {}
    parent: dict[Soliton, Soliton | None] = {}
    for s in all_sols:
        k = s.size
        if k not in slot_sites:
            slot_sites[k] = np.flatnonzero(order >= k)
        sites = slot_sites[k]
        idx = int(np.searchsorted(sites, s.leftmost, side="left")) - 1
        site = int(sites[idx]) if idx >= 0 else -1
        parent[s] = owner.get(site) if site >= 0 and order[site] != RECORD_ORDER else None

    def root(s: Soliton) -> Soliton:
        while parent[s] is not None:
            s = parent[s]
        return s

    halves: dict[Soliton, dict[int, float]] = {}
    for s in all_sols:
        r = root(s)
        if r is s:
            continue
        if s in tagged:
            halves.setdefault(s, {}).setdefault(r.size, 0.0)
            halves[s][r.size] += 0.5
        if r in tagged:
            halves.setdefault(r, {}).setdefault(s.size, 0.0)
            halves[r][s.size] += 0.5
    return halves


def track_trajectories(
    bits,
    steps: int,
    soliton_tags=None,
    record_levels=None,
    count_collisions: bool = False,
    enforce_margin: bool | None = None,
) -> TrajectorySet:
    """Track tagged solitons and records exactly for ``steps`` updates.

    ``soliton_tags`` selects solitons by initial leftmost site (default: all
    inside the safety margin of ``max_size * (steps + 2)`` sites, the zone
    where inner-window statistics stay clean).  ``record_levels`` selects
    records by level of the canonical lift.  Window growth is materialized,
    so tracking itself is exact everywhere; with ``enforce_margin`` (the
    default for auto-selected tags) a tag inside the margin raises
    :class:`WindowMarginError` before any step is run.
    """
    bits = close_config(np.asarray(bits, dtype=np.int8))
    current = identify_stream(bits)
    n = len(bits)
    max_size = current.max_size
    margin = max_size * (steps + 2)
    if enforce_margin is None:
        enforce_margin = soliton_tags is None

    if soliton_tags is None:
        chosen = [
            s
            for s in current.all()
            if s.leftmost >= margin and max(s.sites) < n - margin
        ]
    else:
        wanted = set(soliton_tags)
        chosen = [s for s in current.all() if s.leftmost in wanted]
        missing = wanted - {s.leftmost for s in chosen}
        if missing:
            raise SpeedSystemError(f"no solitons at tagged sites {sorted(missing)}")
    if enforce_margin:
        for s in chosen:
            if s.leftmost < margin or max(s.sites) >= n - margin:
                raise WindowMarginError(
                    f"tagged soliton at {s.leftmost} violates the {margin}-site margin"
                )
    if record_levels is None:
        record_levels = []
    walk = lift(bits)
    levels = sorted(record_levels)
    if levels:
        attained = -int(walk.running_min()[-1])
        bad = [j for j in levels if not 1 <= j <= attained]
        if bad:
            raise WindowMarginError(f"record levels {bad} not attained in the window")

    def record_positions(w) -> dict[int, int]:
        cm = np.minimum.accumulate(np.minimum(w.values, w.base))
        return {j: int(np.searchsorted(-cm, j, side="left")) for j in levels}

    def passed_records(cm0, cm_t, x0: int, xt: int) -> int:
        return max(0, int(-cm_t[xt]) - int(-cm0[x0]))

    cm0 = np.minimum.accumulate(np.minimum(walk.values, walk.base))
    tracked: dict[int, Soliton] = {i: s for i, s in enumerate(chosen)}
    xs = {i: [s.leftmost] for i, s in tracked.items()}
    ys = {i: [0] for i in tracked}
    collisions: dict[int, dict[int, float]] = {i: {} for i in tracked}
    rec0 = record_positions(walk)
    rec_xs = {j: [rec0[j]] for j in levels}

    for _ in range(steps):
        if count_collisions:
            order = slot_configuration(walk.project(), current).order
            halves = _nesting_halves(current, order, set(tracked.values()))
            for i, s in tracked.items():
                for m, half in halves.get(s, {}).items():
                    collisions[i][m] = collisions[i].get(m, 0.0) + half
        walk = apply_T_reflect(walk)
        new_set = identify_stream(walk.project())
        mapping = match_sets(current, new_set)
        tracked = {i: mapping[s] for i, s in tracked.items()}
        cm_t = np.minimum.accumulate(np.minimum(walk.values, walk.base))
        for i, s in tracked.items():
            x = s.leftmost
            xs[i].append(x)
            ys[i].append(passed_records(cm0, cm_t, xs[i][0], x))
        rp = record_positions(walk)
        for j in levels:
            rec_xs[j].append(rp[j])
        current = new_set

    sol_tracks = [
        TrackedSoliton(
            size=chosen[i].size,
            x=np.array(xs[i]),
            y=np.array(ys[i]),
            collisions=collisions[i],
        )
        for i in sorted(tracked)
    ]
    rec_tracks = [TrackedRecord(level=j, x=np.array(rec_xs[j])) for j in levels]
    return TrajectorySet(steps=steps, solitons=sol_tracks, records=rec_tracks)


@dataclass
class SpeedEstimate:
    mean: float
    stderr: float
    count: int


@dataclass
class EmpiricalSpeeds:
    v: dict[int, SpeedEstimate]
    h: dict[int, SpeedEstimate]
    v0: SpeedEstimate | None


def _slope(series: np.ndarray) -> float:
    t = np.arange(len(series), dtype=np.float64)
    return float(np.polyfit(t, np.asarray(series, dtype=np.float64), 1)[0])


def _aggregate(slopes: list[float]) -> SpeedEstimate:
    arr = np.array(slopes, dtype=np.float64)
    stderr = float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return SpeedEstimate(mean=float(arr.mean()), stderr=stderr, count=len(arr))


def empirical_speeds(traj: TrajectorySet) -> EmpiricalSpeeds:
    """Least-squares slopes of tagged trajectories, aggregated per size."""
    if traj.steps < 2:
        raise SpeedSystemError("need at least two steps to fit slopes")
    v_slopes: dict[int, list[float]] = {}
    h_slopes: dict[int, list[float]] = {}
    for s in traj.solitons:
        v_slopes.setdefault(s.size, []).append(_slope(s.x))
        h_slopes.setdefault(s.size, []).append(_slope(s.y))
    v = {k: _aggregate(sl) for k, sl in sorted(v_slopes.items())}
    h = {k: _aggregate(sl) for k, sl in sorted(h_slopes.items())}
    v0 = None
    if traj.records:
        v0 = _aggregate([-_slope(r.x) for r in traj.records])
    return EmpiricalSpeeds(v=v, h=h, v0=v0)
