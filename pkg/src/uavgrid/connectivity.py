"""Monte Carlo estimation of the connectivity distribution.

A vehicle is connected at level p_c = 1 - prod(1 - p_LoS) over the UAVs in
range.  Realizations are scored in fixed-size chunks; every realization owns
a counter-based substream keyed by (seed, realization index), so results do
not depend on chunking, worker count, or evaluation order, and scenarios that
share a sampling envelope see nested constellations (see geometry).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import (
    CityModel,
    InvalidGeometryError,
    NetworkRealization,
    RadioParams,
    SamplingEnvelope,
    ground_range,
    intersection_weight,
    sample_envelope_points,
)
from .los import LinkGeometry, Placement, los_probability, los_probability_batch

DEFAULT_CHUNK = 8192


class PlacementMode(enum.Enum):
    INTERSECTION_ONLY = "intersection-only"
    STREET_ONLY = "street-only"
    MIXTURE = "mixture"

    @property
    def placements(self) -> tuple[Placement, ...]:
        if self is PlacementMode.INTERSECTION_ONLY:
            return (Placement.INTERSECTION,)
        if self is PlacementMode.STREET_ONLY:
            return (Placement.STREET,)
        return (Placement.INTERSECTION, Placement.STREET)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """CDF of connectivity scores from n Monte Carlo realizations."""

    samples: np.ndarray  # sorted ascending
    n: int
    seed: int

    def __post_init__(self):
        if self.samples.shape != (self.n,):
            raise ValueError("sample count does not match n")

    def evaluate(self, gamma):
        """Right-continuous empirical CDF: fraction of samples <= gamma."""
        return np.searchsorted(self.samples, gamma, side="right") / self.n


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one distribution estimate depends on."""

    city: CityModel
    radio: RadioParams
    placement_mode: PlacementMode = PlacementMode.MIXTURE
    n_realizations: int = 100_000
    seed: int = 0
    workers: int = 1
    chunk_size: int = DEFAULT_CHUNK
    envelope: SamplingEnvelope | None = None

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("need n_realizations >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.workers < 1 or self.chunk_size < 1:
            raise ValueError("workers and chunk_size must be >= 1")


def conditional_connectivity(
    realization: NetworkRealization,
    city: CityModel,
    radio: RadioParams,
    placement: Placement,
) -> float:
    """Connectivity level of one constellation: 1 - prod(1 - p_LoS)."""
    survival = 1.0
    for d, phi in zip(realization.d, realization.phi):
        link = LinkGeometry(d=float(d), phi=float(phi), h_uav=radio.h_uav, h_v=radio.h_v)
        survival *= 1.0 - los_probability(link, city, placement)
    return 1.0 - survival


def _substream(seed: int, index: int) -> np.random.Generator:
    # one counter-based stream per realization; (seed, index) is the whole key
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunk_bounds(n: int, chunk: int) -> list[tuple[int, int]]:
    return [(s, min(s + chunk, n)) for s in range(0, n, chunk)]


def _draw_chunk(envelope, seed, start, stop):
    """Envelope points for realizations [start, stop): flat arrays + counts."""
    m = stop - start
    counts = np.zeros(m, dtype=np.int64)
    parts_d, parts_phi, parts_mark = [], [], []
    for j, index in enumerate(range(start, stop)):
        d, phi, mark = sample_envelope_points(envelope, _substream(seed, index))
        counts[j] = d.shape[0]
        parts_d.append(d)
        parts_phi.append(phi)
        parts_mark.append(mark)
    return (
        np.concatenate(parts_d) if parts_d else np.empty(0),
        np.concatenate(parts_phi) if parts_phi else np.empty(0),
        np.concatenate(parts_mark) if parts_mark else np.empty(0),
        counts,
    )


def _segment_products(values: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Per-segment products of a flat array split by counts; empty segments -> 1."""
    out = np.ones(counts.shape[0])
    nonzero = counts > 0
    if values.size:
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        out[nonzero] = np.multiply.reduceat(values, starts[nonzero])
    return out


def _scenario_chunk_scores(args):
    (envelope, seed, start, stop, city, h_uav, h_v, lambda_uav, d_max, placements) = args
    d, phi, mark, counts = _draw_chunk(envelope, seed, start, stop)
    keep = (mark < lambda_uav / envelope.lambda_cap) & (d <= d_max)
    ridx = np.repeat(np.arange(counts.size), counts)[keep]
    d, phi = d[keep], phi[keep]
    kept_counts = np.bincount(ridx, minlength=counts.size)
    scores = {}
    for placement in placements:
        p = los_probability_batch(d, phi, h_uav, h_v, city, placement)
        scores[placement] = 1.0 - _segment_products(1.0 - p, kept_counts)
    return scores


def _map_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def estimate_distribution(config: ScenarioConfig) -> dict[Placement, EmpiricalDistribution]:
    """Estimate the connectivity CDF, one distribution per placement scored.

    Mixture mode scores both placements on the same constellations, so the
    two distributions (and anything derived from both) are coupled draws.
    """
    radio = config.radio
    placements = config.placement_mode.placements
    n = config.n_realizations
    if radio.lambda_uav == 0.0:
        zeros = np.zeros(n)
        return {pl: EmpiricalDistribution(zeros.copy(), n, config.seed) for pl in placements}
    d_max = ground_range(radio)
    envelope = config.envelope
    if envelope is None:
        envelope = SamplingEnvelope(lambda_cap=radio.lambda_uav, d_cap=d_max)
    if radio.lambda_uav > envelope.lambda_cap or d_max > envelope.d_cap:
        raise InvalidGeometryError("scenario exceeds its sampling envelope")
    tasks = [
        (envelope, config.seed, start, stop, config.city, radio.h_uav, radio.h_v,
         radio.lambda_uav, d_max, placements)
        for start, stop in _chunk_bounds(n, config.chunk_size)
    ]
    chunks = _map_tasks(_scenario_chunk_scores, tasks, config.workers)
    result = {}
    for pl in placements:
        samples = np.sort(np.concatenate([c[pl] for c in chunks]))
        result[pl] = EmpiricalDistribution(samples, n, config.seed)
    return result


@dataclass(frozen=True)
class MixtureCDF:
    """Placement-weighted blend of the two conditional CDFs."""

    intersection: EmpiricalDistribution
    street: EmpiricalDistribution
    weight: float  # probability of the intersection placement

    def evaluate(self, gamma):
        return self.weight * self.intersection.evaluate(gamma) + (
            1.0 - self.weight
        ) * self.street.evaluate(gamma)


def mixture_cdf(
    intersection: EmpiricalDistribution,
    street: EmpiricalDistribution,
    city: CityModel,
) -> MixtureCDF:
    return MixtureCDF(intersection, street, intersection_weight(city))


def outage(distribution, gamma_th: float) -> float:
    """P(connectivity <= gamma_th) under an evaluable CDF."""
    if not 0.0 <= gamma_th <= 1.0:
        raise ValueError("gamma_th must lie in [0, 1]")
    return float(distribution.evaluate(gamma_th))


def _grid_chunk_counts(args):
    (envelope, seed, start, stop, city, h_v, r_max, lambda_values, height_values,
     gamma_th, placements) = args
    d, phi, mark, counts = _draw_chunk(envelope, seed, start, stop)
    m = counts.size
    ridx = np.repeat(np.arange(m), counts)
    fracs = np.asarray(lambda_values) / envelope.lambda_cap
    out = np.zeros((len(placements), len(lambda_values), len(height_values)), dtype=np.int64)
    for j, h in enumerate(height_values):
        dz = h - h_v
        d_max = math.sqrt(r_max * r_max - dz * dz)
        hmask = d <= d_max
        d_h, phi_h, mark_h, ridx_h = d[hmask], phi[hmask], mark[hmask], ridx[hmask]
        for ip, placement in enumerate(placements):
            factors = 1.0 - los_probability_batch(d_h, phi_h, h, h_v, city, placement)
            for i, frac in enumerate(fracs):
                lmask = mark_h < frac
                seg_counts = np.bincount(ridx_h[lmask], minlength=m)
                pc = 1.0 - _segment_products(factors[lmask], seg_counts)
                out[ip, i, j] = np.count_nonzero(pc <= gamma_th)
    return out


def outage_grid(
    city: CityModel,
    r_max: float,
    h_v: float,
    lambda_values,
    height_values,
    gamma_th: float,
    n_realizations: int,
    seed: int,
    placement_mode: PlacementMode = PlacementMode.MIXTURE,
    envelope: SamplingEnvelope | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> np.ndarray:
    """Outage probability over a (density, altitude) grid with shared draws.

    Every cell is scored on the same n_realizations envelope realizations, so
    comparisons across cells are exact: more density or a nested ground disk
    can only add UAVs to a realization.  Cell values equal what the
    estimate_distribution / mixture_cdf / outage pipeline returns for the same
    envelope, seed and n.
    """
    if not 0.0 <= gamma_th <= 1.0:
        raise ValueError("gamma_th must lie in [0, 1]")
    lambda_values = [float(v) for v in lambda_values]
    height_values = [float(h) for h in height_values]
    if not lambda_values or not height_values:
        raise ValueError("grid axes cannot be empty")
    if min(lambda_values) < 0.0:
        raise InvalidGeometryError("densities cannot be negative")
    for h in height_values:
        if not h_v < h < h_v + r_max:
            raise InvalidGeometryError(
                f"altitude {h} outside the feasible range ({h_v}, {h_v + r_max})"
            )
    lam_top = max(lambda_values)
    d_top = math.sqrt(r_max * r_max - (min(height_values) - h_v) ** 2)
    if envelope is None:
        if lam_top == 0.0:
            raise InvalidGeometryError("need a positive density to build an envelope")
        envelope = SamplingEnvelope(lambda_cap=lam_top, d_cap=d_top)
    if lam_top > envelope.lambda_cap or d_top > envelope.d_cap:
        raise InvalidGeometryError("grid exceeds its sampling envelope")

    placements = placement_mode.placements
    tasks = [
        (envelope, seed, start, stop, city, h_v, r_max, lambda_values, height_values,
         gamma_th, placements)
        for start, stop in _chunk_bounds(n_realizations, chunk_size)
    ]
    chunks = _map_tasks(_grid_chunk_counts, tasks, workers)
    totals = np.zeros_like(chunks[0])
    for c in chunks:
        totals += c

    n = n_realizations
    if placement_mode is PlacementMode.MIXTURE:
        w = intersection_weight(city)
        return w * (totals[0] / n) + (1.0 - w) * (totals[1] / n)
    return totals[0] / n
