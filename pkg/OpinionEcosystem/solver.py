"""Stationary points of the one- and two-component functionals.

One component: every root of ``m = tanh(K m^2 + J m + h)`` is bracketed on a
fine grid and refined with Brent's method, so that unstable roots are found as
well as stable ones. Two components: damped fixed-point iteration from a grid
of starts, polished with Newton steps on the gradient of Phi; Newton iteration
is also run from every start to reach saddles when possible.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, NamedTuple, Optional, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .models import (
    DomainError,
    InvalidParametersError,
    MagnetizationPair,
    OneComponentParams,
    Params,
    TwoComponentParams,
    consistency_residual,
    grad_phi_two,
    hessian_phi_two,
    local_fields,
    phi_one,
    phi_two,
    second_deriv_phi_one,
    total_magnetization,
)

logger = logging.getLogger(__name__)
logger.propagate = True

# points whose free energies differ by less than this are tied
TIE_TOLERANCE = 1e-10
# maximal residual of the consistency equation for an accepted root
RESIDUAL_TOLERANCE = 1e-10
MIN_DAMPING = 0.125
STALL_RATIO = 0.9
NEWTON_MAX_STEPS = 50
GRID_EDGE = 1e-9
# largest double below 1; tanh saturates to exactly 1.0 for large fields
OPEN_EDGE = float(np.nextafter(1.0, 0.0))


class SolverError(RuntimeError):
    """Raised when no stationary point could be found"""


class Stability(str, Enum):
    GLOBAL_MAX = "global"
    LOCAL_MAX = "local"
    UNSTABLE = "unstable"

    @property
    def is_max(self) -> bool:
        return self is not Stability.UNSTABLE


@dataclass(frozen=True)
class SolverConfig:
    """Numerical settings of the stationary point searches.

    :param fp_tol: convergence tolerance on successive iterates, also the bracketing tolerance
    :type fp_tol: float
    :param max_iter: maximal number of fixed-point iterations
    :type max_iter: int
    :param damping: initial damping of the fixed-point map, halved on oscillation
    :type damping: float
    :param n_starts: starts per dimension of the two-component multi-start grid
    :type n_starts: int
    :param dedup_tol: distance below which two roots are the same point
    :type dedup_tol: float
    :param grid_resolution: step of the one-component bracketing grid
    :type grid_resolution: float
    """

    fp_tol: float = 1e-12
    max_iter: int = 100000
    damping: float = 1.0
    n_starts: int = 21
    dedup_tol: float = 1e-8
    grid_resolution: float = 1e-4

    def __post_init__(self):
        if not self.fp_tol > 0:
            raise InvalidParametersError("fp_tol must be positive")
        if not self.dedup_tol > self.fp_tol:
            raise InvalidParametersError("dedup_tol must be larger than fp_tol")
        if not 0 < self.damping <= 1:
            raise InvalidParametersError("damping must lie in (0, 1]")
        if self.n_starts < 3:
            raise InvalidParametersError("n_starts must be at least 3")
        if self.max_iter < 1:
            raise InvalidParametersError("max_iter must be at least 1")
        if not 0 < self.grid_resolution < 1:
            raise InvalidParametersError("grid_resolution must lie in (0, 1)")


@dataclass(frozen=True)
class StationaryPoint:
    """Root of the consistency equation with its free energy and stability class.

    ``location`` is a float for the one-component model and a
    :class:`MagnetizationPair` for the two-component one. ``m_total`` is the
    combined order parameter.
    """

    location: Union[float, MagnetizationPair]
    phi_value: float
    stability: Stability
    m_total: float

    @property
    def m1(self) -> float:
        return self.location.m1 if isinstance(self.location, tuple) else self.location

    @property
    def m2(self) -> float:
        return self.location.m2 if isinstance(self.location, tuple) else self.location

    def distance(self, other: "StationaryPoint") -> float:
        return float(np.max(np.abs(np.subtract(self.location, other.location))))


class GlobalSolution(NamedTuple):
    points: List[StationaryPoint]
    coexistence: bool


@dataclass
class SolutionSet:
    """All stationary points found for a parameter set, sorted by location.

    ``failed_starts`` counts the two-component starts that did not converge.
    """

    points: List[StationaryPoint]
    failed_starts: int = 0
    alpha: Optional[float] = None

    @property
    def global_points(self) -> List[StationaryPoint]:
        return [p for p in self.points if p.stability is Stability.GLOBAL_MAX]

    @property
    def coexistence(self) -> bool:
        return len(self.global_points) > 1

    @property
    def phi_max(self) -> float:
        return max(p.phi_value for p in self.points)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "m1": [p.m1 for p in self.points],
                "m2": [p.m2 for p in self.points],
                "m_total": [p.m_total for p in self.points],
                "phi": [p.phi_value for p in self.points],
                "stability": [p.stability.value for p in self.points],
            },
            columns=["m1", "m2", "m_total", "phi", "stability"],
        )


class FixedPointResult(NamedTuple):
    point: Union[float, np.ndarray]
    converged: bool
    iterations: int


def select_global(points: Union[SolutionSet, Iterable[StationaryPoint]]) -> GlobalSolution:
    """Points realizing the supremum of the functional.

    :param points: candidate stationary points
    :type points: SolutionSet or iterable of StationaryPoint
    :return: every point within the tie tolerance of the largest value, and whether more than one ties
    :rtype: GlobalSolution
    """
    if isinstance(points, SolutionSet):
        points = points.points
    points = list(points)
    if not points:
        raise ValueError("cannot select a global maximum among no points")

    best = max(p.phi_value for p in points)
    winners = [p for p in points if best - p.phi_value <= TIE_TOLERANCE]
    return GlobalSolution(winners, len(winners) > 1)


def _mark_global(points: List[StationaryPoint]) -> List[StationaryPoint]:
    winners = {id(p) for p in select_global(points).points}
    return [
        StationaryPoint(p.location, p.phi_value, Stability.GLOBAL_MAX, p.m_total)
        if id(p) in winners
        else p
        for p in points
    ]


def _fixed_point_map(p: Params, m):
    if isinstance(p, OneComponentParams):
        return np.tanh(p.K * m**2 + p.J * m + p.h)
    return np.tanh(local_fields(p, m))


def _damped_iteration(p: Params, starts: np.ndarray, config: SolverConfig):
    """Vectorized damped iteration, one row of ``starts`` per start.

    Returns final iterates, a convergence mask and the iteration count of each start.
    """
    m = np.clip(np.array(starts, dtype=float), -OPEN_EDGE, OPEN_EDGE)
    n = len(m)
    damping = np.full(n, config.damping)
    floor = min(MIN_DAMPING, config.damping)
    active = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    iterations = np.zeros(n, dtype=int)
    last_distance = np.full(n, np.inf)
    last_step = np.zeros_like(m)
    growth = np.zeros(n, dtype=int)

    for _ in range(config.max_iter):
        idx = np.flatnonzero(active)
        if not len(idx):
            break

        current = m[idx]
        lam = damping[idx].reshape((-1,) + (1,) * (current.ndim - 1))
        new = np.clip(
            (1 - lam) * current + lam * _fixed_point_map(p, current), -OPEN_EDGE, OPEN_EDGE
        )
        step = new - current
        distance = np.abs(step)
        reversal = step * last_step[idx]
        if distance.ndim > 1:
            distance = distance.max(axis=1)
            reversal = reversal.sum(axis=1)
        m[idx] = new
        iterations[idx] += 1

        done = distance < config.fp_tol
        converged[idx[done]] = True
        active[idx[done]] = False

        # a growing step, or a reversing one that barely shrinks, means a cycle
        cycling = (distance > last_distance[idx]) | (
            (reversal < 0) & (distance > STALL_RATIO * last_distance[idx])
        )
        growth[idx] = np.where(cycling, growth[idx] + 1, 0)
        oscillating = idx[growth[idx] >= 3]
        if len(oscillating):
            damping[oscillating] = np.maximum(damping[oscillating] / 2, floor)
            growth[oscillating] = 0
        last_distance[idx] = distance
        last_step[idx] = step

    return m, converged, iterations


def fixed_point_iterate(
    p: Params, start, config: Optional[SolverConfig] = None
) -> FixedPointResult:
    """Iterate ``m <- (1 - damping) m + damping tanh(field(m))`` from a single start.

    Non-convergence after ``config.max_iter`` iterations is reported through
    ``FixedPointResult.converged``.

    :param p: model parameters
    :type p: OneComponentParams or TwoComponentParams
    :param start: starting magnetization (pair for the two-component model), strictly inside the domain
    :type start: float or MagnetizationPair
    :param config: solver settings
    :type config: SolverConfig
    :return: last iterate, convergence flag and iteration count
    :rtype: FixedPointResult
    """
    config = config or SolverConfig()
    start = np.asarray(start, dtype=float)
    if np.any(np.abs(start) >= 1):
        raise DomainError("start must lie strictly inside the domain, got {}".format(start))

    m, converged, iterations = _damped_iteration(p, start[None, ...], config)
    point = float(m[0]) if isinstance(p, OneComponentParams) else m[0]
    return FixedPointResult(point, bool(converged[0]), int(iterations[0]))


def _residual_one(p: OneComponentParams, m):
    return m - np.tanh(p.K * m**2 + p.J * m + p.h)


def find_all_stationary_one(
    p: OneComponentParams, config: Optional[SolverConfig] = None
) -> SolutionSet:
    """Every root of the one-component consistency equation.

    Sign changes of ``g(m) = m - tanh(K m^2 + J m + h)`` are detected on a grid
    of step ``config.grid_resolution`` over ``(-1 + 1e-9, 1 - 1e-9)`` and refined
    to ``config.fp_tol``. The grid is extended to the last representable points
    before -1 and 1, so roots squeezed against the boundary by strong fields
    are kept.

    :param p: model parameters
    :type p: OneComponentParams
    :param config: solver settings
    :type config: SolverConfig
    :return: classified stationary points, sorted ascending
    :rtype: SolutionSet
    """
    config = config or SolverConfig()
    lo, hi = -1 + GRID_EDGE, 1 - GRID_EDGE
    n = int(math.ceil((hi - lo) / config.grid_resolution)) + 1
    grid = np.concatenate([[-OPEN_EDGE], np.linspace(lo, hi, n), [OPEN_EDGE]])
    g = _residual_one(p, grid)

    roots = list(grid[g == 0])
    for i in np.flatnonzero(g[:-1] * g[1:] < 0):
        roots.append(
            brentq(lambda m: _residual_one(p, m), grid[i], grid[i + 1], xtol=config.fp_tol)
        )
    # saturated roots beyond the last representable point
    for edge, value in ((0, g[0]), (-1, g[-1])):
        if grid[edge] * value < 0 and abs(value) <= RESIDUAL_TOLERANCE:
            roots.append(grid[edge])

    if not roots:
        raise SolverError(
            "no sign change of the consistency equation found for {}; "
            "try a finer grid_resolution".format(p)
        )

    unique = []
    for root in sorted(roots):
        if not unique or root - unique[-1] >= config.dedup_tol:
            unique.append(float(root))

    points = []
    for root in unique:
        stability = (
            Stability.LOCAL_MAX if second_deriv_phi_one(p, root) < 0 else Stability.UNSTABLE
        )
        points.append(StationaryPoint(root, phi_one(p, root), stability, root))

    return SolutionSet(_mark_global(points))


def _solve_pairs(H: np.ndarray, rhs: np.ndarray):
    """Solve a stack of 2x2 systems; returns solutions and a mask of singular systems."""
    det = H[:, 0, 0] * H[:, 1, 1] - H[:, 0, 1] * H[:, 1, 0]
    singular = ~(np.abs(det) > np.finfo(float).tiny) | ~np.isfinite(det)
    det = np.where(singular, 1.0, det)
    x0 = (H[:, 1, 1] * rhs[:, 0] - H[:, 0, 1] * rhs[:, 1]) / det
    x1 = (H[:, 0, 0] * rhs[:, 1] - H[:, 1, 0] * rhs[:, 0]) / det
    return np.stack([x0, x1], axis=1), singular


def _newton_two(p: TwoComponentParams, starts: np.ndarray, config: SolverConfig):
    """Newton iteration on the gradient of Phi, batched over starts.

    Returns the final points and a mask of the runs that stayed inside the open
    square with a regular Hessian.
    """
    m = np.array(starts, dtype=float)
    alive = np.all(np.abs(m) < 1, axis=1)
    moving = alive.copy()
    for _ in range(NEWTON_MAX_STEPS):
        idx = np.flatnonzero(moving)
        if not len(idx):
            break
        step, singular = _solve_pairs(
            hessian_phi_two(p, m[idx]), -grad_phi_two(p, m[idx])
        )
        new = m[idx] + step
        inside = np.all(np.abs(new) < 1, axis=1) & ~singular & np.all(np.isfinite(new), axis=1)

        alive[idx[~inside]] = False
        moving[idx[~inside]] = False
        m[idx[inside]] = new[inside]
        settled = inside & (np.max(np.abs(step), axis=1) < config.fp_tol)
        moving[idx[settled]] = False
    return m, alive


def _residuals(p: TwoComponentParams, m: np.ndarray) -> np.ndarray:
    return np.max(np.abs(m - np.tanh(local_fields(p, m))), axis=1)


def _classify_two(p: TwoComponentParams, m: np.ndarray) -> Stability:
    eigenvalues = np.linalg.eigvalsh(hessian_phi_two(p, m))
    return Stability.LOCAL_MAX if np.all(eigenvalues < 0) else Stability.UNSTABLE


def _degenerate_two(p: TwoComponentParams, config: SolverConfig) -> SolutionSet:
    """alpha in {0, 1}: solve the surviving group alone."""
    surviving = 1 if p.alpha == 1 else 2
    vanished_field = math.tanh(p.h2 if surviving == 1 else p.h1)
    reduced = find_all_stationary_one(p.component(surviving), config)

    points = []
    for point in reduced.points:
        if surviving == 1:
            location = MagnetizationPair(point.location, vanished_field)
        else:
            location = MagnetizationPair(vanished_field, point.location)
        points.append(
            StationaryPoint(
                location,
                point.phi_value,
                point.stability,
                total_magnetization(p.alpha, location),
            )
        )
    return SolutionSet(points, alpha=p.alpha)


def find_all_stationary_two(
    p: TwoComponentParams, config: Optional[SolverConfig] = None
) -> SolutionSet:
    """Stationary points of the two-component functional Phi.

    Starts lie on an ``n_starts x n_starts`` grid strictly inside the square.
    Each converged fixed point is polished by Newton steps; Newton is also run
    directly from every start so that saddles can be found. Points are merged
    within ``dedup_tol`` (max-norm) and sorted lexicographically.

    :param p: model parameters
    :type p: TwoComponentParams
    :param config: solver settings
    :type config: SolverConfig
    :raises SolverError: if no start converged
    :return: classified stationary points
    :rtype: SolutionSet
    """
    config = config or SolverConfig()
    if p.alpha in (0.0, 1.0):
        return _degenerate_two(p, config)

    axis = np.linspace(-1, 1, config.n_starts + 2)[1:-1]
    starts = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)

    iterates, converged, _ = _damped_iteration(p, starts, config)
    failed = int(np.sum(~converged))
    if failed:
        logger.warning(
            "%d of %d fixed-point starts did not converge for %s", failed, len(starts), p
        )

    candidates = []
    fixed = iterates[converged]
    if len(fixed):
        polished, ok = _newton_two(p, fixed, config)
        polished = np.where(ok[:, None], polished, fixed)
        accepted = _residuals(p, polished) <= RESIDUAL_TOLERANCE
        # newton may have drifted from a valid unpolished point
        fallback = ~accepted & (_residuals(p, fixed) <= RESIDUAL_TOLERANCE)
        polished[fallback] = fixed[fallback]
        unresolved = int(np.sum(~(accepted | fallback)))
        if unresolved:
            logger.warning("%d converged starts failed the residual check", unresolved)
        failed += unresolved
        candidates.extend(polished[accepted | fallback])

    saddles, ok = _newton_two(p, starts, config)
    saddles = saddles[ok]
    if len(saddles):
        candidates.extend(saddles[_residuals(p, saddles) <= RESIDUAL_TOLERANCE])

    if not candidates:
        raise SolverError("none of the {} starts converged for {}".format(len(starts), p))

    unique: List[np.ndarray] = []
    for candidate in candidates:
        if all(np.max(np.abs(candidate - kept)) >= config.dedup_tol for kept in unique):
            unique.append(candidate)
    unique.sort(key=lambda c: (c[0], c[1]))

    points = []
    for location in unique:
        pair = MagnetizationPair(float(location[0]), float(location[1]))
        points.append(
            StationaryPoint(
                pair,
                float(phi_two(p, location)),
                _classify_two(p, location),
                float(total_magnetization(p.alpha, location)),
            )
        )
    return SolutionSet(_mark_global(points), failed_starts=failed, alpha=p.alpha)


def find_all_stationary(p: Params, config: Optional[SolverConfig] = None) -> SolutionSet:
    """dispatch to the one- or two-component search according to the parameter type"""
    if isinstance(p, OneComponentParams):
        return find_all_stationary_one(p, config)
    if isinstance(p, TwoComponentParams):
        return find_all_stationary_two(p, config)
    raise TypeError("unsupported parameter type {}".format(type(p).__name__))


def max_residual(p: Params, solutions: SolutionSet) -> float:
    """largest consistency residual over a solution set"""
    return max(consistency_residual(p, point.location) for point in solutions.points)
