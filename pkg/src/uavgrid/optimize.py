"""Altitude optimization under an outage constraint, plus density sweeps.

Raising a UAV swarm trades coverage radius against blockage: low altitudes
see far along the ground but graze rooftops, high altitudes clear buildings
but shrink the ground disk.  The outage-vs-altitude curve therefore has an
interior minimum, located here by a coarse grid pass plus golden-section
refinement.  All evaluations for one search share a sampling envelope, so the
comparisons the search relies on are between coupled estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .connectivity import DEFAULT_CHUNK, PlacementMode, outage_grid
from .geometry import CityModel, InvalidGeometryError, SamplingEnvelope

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InfeasibleSearchError(InvalidGeometryError):
    """The requested altitude window leaves no feasible heights."""


@dataclass(frozen=True)
class HeightSearchSpec:
    """Altitude window and stopping rules for optimize_height."""

    h_lo: float
    h_hi: float
    grid_step: float = 5.0
    refine_tol: float = 1.0
    gamma_th: float = 0.8

    def __post_init__(self):
        if self.grid_step <= 0.0 or self.refine_tol <= 0.0:
            raise ValueError("grid_step and refine_tol must be positive")
        if not self.h_lo < self.h_hi:
            raise ValueError("need h_lo < h_hi")
        if not 0.0 <= self.gamma_th <= 1.0:
            raise ValueError("gamma_th must lie in [0, 1]")


def grid_points(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive grid from lo towards hi; hi is appended if the step misses it.

    Values are rounded to 10 decimals so grids built from decimal steps carry
    clean coordinates instead of accumulated float noise.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if hi < lo:
        raise ValueError("need lo <= hi")
    n = int(math.floor((hi - lo) / step + 1e-9))
    vals = [round(lo + k * step, 10) for k in range(n + 1)]
    if vals[-1] < hi - 1e-9 * max(1.0, abs(hi)):
        vals.append(round(hi, 10))
    return vals


def optimize_height(
    city: CityModel,
    r_max: float,
    h_v: float,
    lambda_uav: float,
    search: HeightSearchSpec,
    n_realizations: int = 100_000,
    seed: int = 0,
    placement_mode: PlacementMode = PlacementMode.MIXTURE,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> tuple[float, float]:
    """Altitude minimizing the outage probability at search.gamma_th.

    Returns (h_star, outage_star), where outage_star is the Monte Carlo
    estimate at h_star itself.  The winner is the best height among the grid
    pass and every refinement evaluation, so refinement can only improve on
    the grid answer; ties go to the lower altitude.
    """
    if not h_v < search.h_lo < search.h_hi < h_v + r_max:
        raise InfeasibleSearchError(
            f"window [{search.h_lo}, {search.h_hi}] not inside ({h_v}, {h_v + r_max})"
        )
    if lambda_uav < 0.0:
        raise InvalidGeometryError("lambda_uav cannot be negative")

    grid = grid_points(search.h_lo, search.h_hi, search.grid_step)
    if lambda_uav == 0.0:
        # no UAVs, outage 1 at every altitude; lowest height wins the tie
        return grid[0], 1.0

    # widest disk occurs at the lowest altitude; one envelope covers the search
    d_cap = math.sqrt(r_max * r_max - (grid[0] - h_v) ** 2)
    envelope = SamplingEnvelope(lambda_cap=lambda_uav, d_cap=d_cap)

    def evaluate(hs: list[float]) -> np.ndarray:
        return outage_grid(
            city,
            r_max,
            h_v,
            [lambda_uav],
            hs,
            search.gamma_th,
            n_realizations,
            seed,
            placement_mode=placement_mode,
            envelope=envelope,
            workers=workers,
            chunk_size=chunk_size,
        )[0]

    cache = dict(zip(grid, (float(v) for v in evaluate(grid))))

    def f(h: float) -> float:
        h = float(h)
        if h not in cache:
            cache[h] = float(evaluate([h])[0])
        return cache[h]

    j0 = int(np.argmin([cache[h] for h in grid]))
    a = grid[max(j0 - 1, 0)]
    b = grid[min(j0 + 1, len(grid) - 1)]

    if b - a > search.refine_tol:
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc, fd = f(c), f(d)
        while b - a > search.refine_tol:
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = f(d)

    outage_star, h_star = min((v, h) for h, v in cache.items())
    return h_star, outage_star


@dataclass(frozen=True)
class ContourGrid:
    """Outage over a (density, altitude) grid.  Densities are per m2."""

    lambda_axis: np.ndarray
    height_axis: np.ndarray
    outage: np.ndarray  # shape (len(lambda_axis), len(height_axis))
    gamma_th: float

    def __post_init__(self):
        expected = (self.lambda_axis.shape[0], self.height_axis.shape[0])
        if self.outage.shape != expected:
            raise ValueError(f"outage shape {self.outage.shape} != {expected}")


def sweep_contour(
    city: CityModel,
    r_max: float,
    h_v: float,
    lambda_axis,
    height_axis,
    gamma_th: float,
    n_realizations: int = 100_000,
    seed: int = 0,
    placement_mode: PlacementMode = PlacementMode.MIXTURE,
    envelope: SamplingEnvelope | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> ContourGrid:
    """Score every (density, altitude) cell on shared constellation draws.

    Sharing makes the grid monotone in density exactly, not just on average:
    raising the density only adds UAVs to each realization.
    """
    lambda_axis = np.asarray([float(v) for v in lambda_axis])
    height_axis = np.asarray([float(v) for v in height_axis])
    for name, axis in (("lambda_axis", lambda_axis), ("height_axis", height_axis)):
        if axis.ndim != 1 or axis.size == 0:
            raise ValueError(f"{name} must be a non-empty 1-d sequence")
        if axis.size > 1 and not np.all(np.diff(axis) > 0):
            raise ValueError(f"{name} must be strictly ascending")
    values = outage_grid(
        city,
        r_max,
        h_v,
        list(lambda_axis),
        list(height_axis),
        gamma_th,
        n_realizations,
        seed,
        placement_mode=placement_mode,
        envelope=envelope,
        workers=workers,
        chunk_size=chunk_size,
    )
    return ContourGrid(lambda_axis, height_axis, values, gamma_th)


def min_density_for_outage(grid: ContourGrid, target: float) -> tuple[float, float] | None:
    """Smallest density whose best altitude meets the outage target.

    Returns (lambda_min, h_star) or None when no grid density reaches the
    target.  Infeasibility is an answer here, not an error.
    """
    if not 0.0 <= target <= 1.0:
        raise ValueError("target must lie in [0, 1]")
    for i, lam in enumerate(grid.lambda_axis):
        j = int(np.argmin(grid.outage[i]))
        if grid.outage[i, j] <= target:
            return float(lam), float(grid.height_axis[j])
    return None
