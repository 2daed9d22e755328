"""Samplers for invariant ensembles, Palm re-centering, and density estimation.

Configurations "seen from a typical record" are drawn by rebuilding
excursions from independent component entries, sampled lazily as the
rebuild consumes them.  The inverse-Palm shift turns such samples into
stationary ones by length-biasing the excursion choice and placing the
origin uniformly inside it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BoxBallError, apply_T, close_config, excursions, records
from .rebuild import _build_excursion
from .slots import SlotComponents
from .solitons import identify_stream


class MeasureError(BoxBallError):
    pass


@dataclass(frozen=True)
class Dist:
    """Marginal law for one component entry: bernoulli, geometric, or constant.

    ``geometric`` is parameterized by its mean and supported on 0, 1, 2, ...;
    ``bernoulli`` by its success probability.
    """

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("bernoulli", "geometric", "constant"):
            raise MeasureError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "bernoulli" and not 0.0 <= self.param <= 1.0:
            raise MeasureError("bernoulli parameter must be in [0, 1]")
        if self.param < 0:
            raise MeasureError("distribution parameter must be nonnegative")

    @property
    def mean(self) -> float:
        return float(self.param)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "bernoulli":
            return (rng.random(size) < self.param).astype(np.int64)
        if self.kind == "geometric":
            if self.param == 0:
                return np.zeros(size, dtype=np.int64)
            p = 1.0 / (1.0 + self.param)
            return rng.geometric(p, size).astype(np.int64) - 1
        return np.full(size, int(self.param), dtype=np.int64)

    def pmf(self, value: int) -> float:
        if self.kind == "bernoulli":
            return self.param if value == 1 else (1.0 - self.param) if value == 0 else 0.0
        if self.kind == "geometric":
            if self.param == 0:
                return 1.0 if value == 0 else 0.0
            p = 1.0 / (1.0 + self.param)
            return p * (1.0 - p) ** value
        return 1.0 if value == int(self.param) else 0.0


@dataclass(frozen=True)
class ComponentLaw:
    """Truncated family of independent component laws, one per size k <= K."""

    dists: dict[int, Dist]
    K: int

    def __post_init__(self):
        for k in self.dists:
            if not 1 <= k <= self.K:
                raise MeasureError(f"size {k} outside truncation K={self.K}")

    def dist(self, k: int) -> Dist:
        return self.dists.get(k, Dist("constant", 0.0))

    def alpha(self, k: int) -> float:
        return self.dist(k).mean

    @classmethod
    def bernoulli(cls, alphas) -> "ComponentLaw":
        alphas = list(alphas)
        return cls(
            dists={k: Dist("bernoulli", a) for k, a in enumerate(alphas, start=1) if a > 0},
            K=len(alphas),
        )

    @classmethod
    def geometric(cls, alphas) -> "ComponentLaw":
        alphas = list(alphas)
        return cls(
            dists={k: Dist("geometric", a) for k, a in enumerate(alphas, start=1) if a > 0},
            K=len(alphas),
        )


@dataclass
class SampleBatch:
    seed: int
    configs: list[np.ndarray]
    provenance: dict = field(default_factory=dict)


def _rng_streams(seed: int, K: int) -> dict[int, np.random.Generator]:
    return {k: np.random.default_rng([seed, k]) for k in range(1, K + 1)}


def sample_components(law: ComponentLaw, slots_needed: dict[int, int], seed: int) -> SlotComponents:
    """Draw component entries: i.i.d. over labels, independent over sizes."""
    streams = _rng_streams(seed, law.K)
    counts: dict[int, dict[int, int]] = {}
    for k, n in sorted(slots_needed.items()):
        draws = law.dist(k).sample(streams[k], n)
        per = {i: int(v) for i, v in enumerate(draws) if v}
        if per:
            counts[k] = per
    return SlotComponents(counts=counts, label_range={k: (0, n) for k, n in slots_needed.items()})


def sample_hat_mu(law: ComponentLaw, n_excursions: int, seed: int) -> np.ndarray:
    """Configuration seen from a typical record: Record 0 at the origin,
    ``n_excursions`` rebuilt excursions to its right.

    Component entries are drawn lazily, in the order the rebuild consumes
    them, from one stream per size; identical (law, n, seed) give identical
    bytes.
    """
    streams = _rng_streams(seed, law.K)

    def take(k: int, count: int) -> list[int]:
        return law.dist(k).sample(streams[k], count).tolist()

    pieces = []
    for j in range(n_excursions):
        pieces.append(np.zeros(1, dtype=np.int8))
        pieces.append(_build_excursion(take, law.K))
    return np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int8)


def inverse_palm_shift(bits, seed: int) -> np.ndarray:
    """Place the origin at a uniform site of a length-biased excursion.

    Choosing an excursion with probability proportional to its length
    (preceding record included) and then a uniform position inside it sends
    record-anchored samples to stationary ones.  The returned window starts
    at the new origin.
    """
    bits = np.asarray(bits, dtype=np.int8)
    exc = excursions(bits)
    if not exc:
        raise MeasureError("no excursions to shift into")
    rng = np.random.default_rng(seed)
    lengths = np.array([e.length for e in exc], dtype=np.float64)
    chosen = exc[int(rng.choice(len(exc), p=lengths / lengths.sum()))]
    offset = int(rng.integers(1, chosen.length + 1))
    origin = chosen.left_record + offset
    return bits[origin:].copy()


def palm_condition(batch: SampleBatch, target, seed: int) -> SampleBatch:
    """Re-center each sample at a uniformly chosen point of a covariant set.

    ``target`` is ``"records"`` or ``("soliton", k)`` for the leftmost sites
    of k-solitons.  Samples with an empty target set are skipped; the output
    provenance reports how many.
    """
    rng = np.random.default_rng(seed)
    out: list[np.ndarray] = []
    skipped = 0
    for bits in batch.configs:
        bits = np.asarray(bits, dtype=np.int8)
        if target == "records":
            sites = records(bits).positions
        else:
            kind, k = target
            if kind != "soliton":
                raise MeasureError(f"unknown target {target!r}")
            group = identify_stream(close_config(bits)).by_size.get(k, ())
            sites = np.array([s.leftmost for s in group], dtype=np.int64)
        if not len(sites):
            skipped += 1
            continue
        origin = int(sites[int(rng.integers(len(sites)))])
        out.append(bits[origin:].copy())
    return SampleBatch(
        seed=seed,
        configs=out,
        provenance={"target": target, "skipped": skipped, "source_seed": batch.seed},
    )


def sample_bernoulli(lam: float, n: int, seed: int) -> np.ndarray:
    """Independent ball placements with density ``lam`` in (0, 1/2)."""
    if n == 0:
        return np.zeros(0, dtype=np.int8)
    if not 0.0 < lam < 0.5:
        raise MeasureError(f"density must lie in (0, 1/2), got {lam}")
    rng = np.random.default_rng(seed)
    return (rng.random(n) < lam).astype(np.int8)


def sample_append_mix(rho, n: int, mix_steps: int, seed: int, trim: bool = True) -> np.ndarray:
    """Ensemble with prescribed per-excursion densities, mixed by the dynamics.

    After each record, one k-soliton is appended independently with
    probability ``rho[k-1]``; the update is then applied ``mix_steps`` times.
    With ``trim`` the returned window is cut back to records, dropping the
    drained left margin and the segregated right frontier.
    """
    rho = np.asarray(rho, dtype=np.float64)
    if np.any(rho < 0) or np.any(rho > 1):
        raise MeasureError("per-record append probabilities must lie in [0, 1]")
    K = len(rho)
    margin = K * (mix_steps + 2) if trim else 0
    target = n + 2 * margin
    rng = np.random.default_rng(seed)
    pieces = []
    length = 0
    while length < target:
        pieces.append([0])
        length += 1
        for k in range(K, 0, -1):
            if rho[k - 1] > 0 and rng.random() < rho[k - 1]:
                pieces.append([1] * k + [0] * k)
                length += 2 * k
    bits = np.array([b for piece in pieces for b in piece], dtype=np.int8)
    for _ in range(mix_steps):
        bits = apply_T(bits)
    if not trim:
        return bits
    rec = records(bits).positions
    inner = rec[(rec >= margin) & (rec <= len(bits) - margin)]
    if len(inner) < 2:
        raise MeasureError("window too small for the requested mixing margin")
    return bits[inner[0] : inner[-1] + 1].copy()


@dataclass
class DensityEstimate:
    """Per-excursion and per-site soliton densities of one window."""

    rho: dict[int, float]
    w0: float
    rho_bar: dict[int, float]
    n_excursions: int
    counts: dict[int, int]

    def rho_vector(self, K: int | None = None) -> np.ndarray:
        K = K if K is not None else max(self.rho, default=0)
        return np.array([self.rho.get(k, 0.0) for k in range(1, K + 1)])

    @property
    def max_size(self) -> int:
        return max(self.counts, default=0)


def estimate_densities(bits) -> DensityEstimate:
    """Count solitons per excursion and per site on a record-bounded window.

    The identity w0 = 1 + sum_k 2 k rho_k holds exactly for every window
    that ends at a record, because each site is either a record or soliton
    material.
    """
    bits = np.asarray(bits, dtype=np.int8)
    exc = excursions(bits)
    if not exc:
        raise MeasureError("no complete excursion in the window")
    sols = identify_stream(bits)
    counts = {k: len(v) for k, v in sols.by_size.items() if v}
    n_exc = len(exc)
    w0 = sum(e.length for e in exc) / n_exc
    rho = {k: c / n_exc for k, c in counts.items()}
    rho_bar = {k: r / w0 for k, r in rho.items()}
    return DensityEstimate(rho=rho, w0=w0, rho_bar=rho_bar, n_excursions=n_exc, counts=counts)
