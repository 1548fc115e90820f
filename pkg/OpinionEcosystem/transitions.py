"""Parameter sweeps, jump detection and first-order transition location.

A sweep solves the model at every step of a parameter range and records the
global order parameter. Adjacent steps whose order parameters differ by more
than a threshold bracket a jump, which is then refined by bisection on the
difference of free energy between the two competing branches.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .models import (
    InvalidParametersError,
    OneComponentParams,
    Params,
    TwoComponentParams,
    phi_one,
)
from .solver import (
    SolutionSet,
    SolverConfig,
    SolverError,
    StationaryPoint,
    find_all_stationary,
    find_all_stationary_one,
)
from .utils import pool_map

logger = logging.getLogger(__name__)
logger.propagate = True

DEFAULT_JUMP_THRESHOLD = 0.1
DEFAULT_TRANSITION_TOL = 1e-8
DEFAULT_MAX_STEPS = 512
# free-energy difference below which two branches are taken to cross exactly
EXACT_CROSSING = 1e-13
# a tracked root farther than this multiple of the branch gap ends the branch
BRANCH_REACH = 5
CRITICAL_K_STEP = 0.05
CRITICAL_K_MAX = 100.0
CRITICAL_K_TOL = 1e-13

SWEEP_COLUMNS = ["param", "m_total", "m1", "m2", "phi", "n_roots", "coexistence"]
JUMP_COLUMNS = ["location", "width", "m_left", "m_right", "delta"]

InternalEquilibria = Optional[Tuple[Optional[float], Optional[float]]]


class NoTransitionError(RuntimeError):
    """Raised when a critical point is requested where none exists"""


class NoBranchChangeError(NoTransitionError):
    """Raised when a bracketed jump turns out to be continuous variation of one branch"""


class BranchTrackingError(SolverError):
    """Raised when a competing branch cannot be followed through a bracket"""


class GridTooLargeError(InvalidParametersError):
    pass


def check_parameter_names(model: Params, vary: Sequence[str]):
    names = {f.name for f in dataclasses.fields(model)}
    unknown = [name for name in vary if name not in names]
    if unknown:
        raise InvalidParametersError(
            "unknown parameter(s) {} for {}; valid names are {}".format(
                ",".join(unknown), type(model).__name__, ",".join(sorted(names))
            )
        )
    if not vary:
        raise InvalidParametersError("at least one parameter must be varied")


def parameters_at(
    model: Params,
    vary: Sequence[str],
    value: float,
    internal_equilibria: InternalEquilibria = None,
) -> Params:
    """Copy of ``model`` with every name of ``vary`` set to ``value``.

    When ``internal_equilibria`` is given, the biases are recomputed afterwards
    so that each isolated group keeps equilibrating at the same opinion.
    """
    params = dataclasses.replace(model, **{name: value for name in vary})
    if internal_equilibria is not None:
        params = params.with_internal_equilibria(*internal_equilibria)
    return params


def _check_internal_equilibria(model: Params, vary, internal_equilibria):
    if internal_equilibria is None:
        return
    if not isinstance(model, TwoComponentParams):
        raise InvalidParametersError(
            "internal equilibria only apply to the two-component model"
        )
    for name, m_star in zip(("h1", "h2"), internal_equilibria):
        if m_star is not None and name in vary:
            raise InvalidParametersError(
                "{} cannot be varied while it is set by an internal equilibrium".format(name)
            )


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter range.

    Every name of ``vary`` receives the same value at each step, e.g.
    ``("K112", "K122")`` sweeps both cross couplings together.
    """

    model: Params
    vary: Tuple[str, ...]
    start: float
    stop: float
    steps: int
    internal_equilibria: InternalEquilibria = None

    def __post_init__(self):
        object.__setattr__(self, "vary", tuple(self.vary))
        check_parameter_names(self.model, self.vary)
        _check_internal_equilibria(self.model, self.vary, self.internal_equilibria)
        if not self.start < self.stop:
            raise InvalidParametersError(
                "sweep start ({}) must be lower than stop ({})".format(self.start, self.stop)
            )
        if self.steps < 2:
            raise InvalidParametersError("a sweep needs at least 2 steps")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, value: float) -> Params:
        return parameters_at(self.model, self.vary, value, self.internal_equilibria)


@dataclass(frozen=True)
class JumpEvent:
    """Jump of the global order parameter between ``lower`` and ``upper``.

    ``location`` is the middle of the bracket and ``width`` its size; a refined
    event also carries the free-energy gap of the two branches at ``location``.
    """

    location: float
    width: float
    m_left: float
    m_right: float
    delta: float
    lower: float
    upper: float
    phi_gap: float = math.nan
    refined: bool = False


def _solve_cell(task) -> Optional[SolutionSet]:
    params, config = task
    try:
        return find_all_stationary(params, config)
    except SolverError as e:
        logger.warning("solver failed for %s: %s", params, e)
        return None


def _solve_many(params: List[Params], config: SolverConfig, threads: int):
    return pool_map(_solve_cell, [(p, config) for p in params], threads)


def _rows_from_solutions(values, solutions: Sequence[Optional[SolutionSet]]) -> pd.DataFrame:
    """Sweep rows; at coexistence the primary value continues the previous row."""
    rows = []
    previous: Optional[StationaryPoint] = None
    for value, solution in zip(values, solutions):
        if solution is None:
            rows.append(
                {
                    "param": value,
                    "m_total": math.nan,
                    "m1": math.nan,
                    "m2": math.nan,
                    "phi": math.nan,
                    "n_roots": 0,
                    "coexistence": False,
                    "m_total_alt": math.nan,
                    "failed_starts": 0,
                    "valid": False,
                }
            )
            previous = None
            continue

        winners = solution.global_points
        if previous is None:
            primary = min(winners, key=lambda p: p.m_total)
        else:
            primary = min(winners, key=lambda p: p.distance(previous))
        alternative = math.nan
        if solution.coexistence:
            alternative = max(
                (p for p in winners if p is not primary),
                key=lambda p: abs(p.m_total - primary.m_total),
            ).m_total

        rows.append(
            {
                "param": value,
                "m_total": primary.m_total,
                "m1": primary.m1,
                "m2": primary.m2,
                "phi": primary.phi_value,
                "n_roots": len(solution.points),
                "coexistence": solution.coexistence,
                "m_total_alt": alternative,
                "failed_starts": solution.failed_starts,
                "valid": True,
            }
        )
        previous = primary

    return pd.DataFrame(rows)


def sweep_1d(
    spec: SweepSpec, config: Optional[SolverConfig] = None, threads: int = 1
) -> pd.DataFrame:
    """Global solution at every step of a parameter range.

    :param spec: model, varied parameter(s) and range
    :type spec: SweepSpec
    :param config: solver settings
    :type config: SolverConfig
    :param threads: processes used to solve the steps, 0 for all cores
    :type threads: int
    :return: one row per step with columns param, m_total, m1, m2, phi, n_roots, coexistence, m_total_alt, failed_starts and valid
    :rtype: pd.DataFrame
    """
    config = config or SolverConfig()
    values = spec.values
    solutions = _solve_many([spec.params_at(v) for v in values], config, threads)
    rows = _rows_from_solutions(values, solutions)

    failed = int((~rows["valid"]).sum())
    if failed:
        logger.warning("%d of %d sweep steps could not be solved", failed, len(rows))
    return rows


def detect_jumps(
    rows: pd.DataFrame, jump_threshold: float = DEFAULT_JUMP_THRESHOLD
) -> List[JumpEvent]:
    """coarse brackets between adjacent rows whose order parameters differ by more than ``jump_threshold``"""
    values = rows["param"].to_numpy(dtype=float)
    m = rows["m_total"].to_numpy(dtype=float)

    events = []
    for i in range(len(values) - 1):
        delta = abs(m[i + 1] - m[i])
        if np.isfinite(delta) and delta > jump_threshold:
            events.append(
                JumpEvent(
                    location=0.5 * (values[i] + values[i + 1]),
                    width=values[i + 1] - values[i],
                    m_left=m[i],
                    m_right=m[i + 1],
                    delta=delta,
                    lower=values[i],
                    upper=values[i + 1],
                )
            )
    return events


def _nearest_max(solution: SolutionSet, reference: StationaryPoint) -> StationaryPoint:
    maxima = [p for p in solution.points if p.stability.is_max] or solution.points
    return min(maxima, key=lambda p: p.distance(reference))


def _follow(solution, ref_a, ref_b, gap, config, where):
    """Continue both branches to a new parameter value.

    Returns ``(a, b)``, or ``(a, None)`` when a single maximum is left near
    both references.
    """
    a, b = _nearest_max(solution, ref_a), _nearest_max(solution, ref_b)
    if a.distance(b) < config.dedup_tol:
        return a, None
    if max(a.distance(ref_a), b.distance(ref_b)) > BRANCH_REACH * gap:
        raise BranchTrackingError("a branch was lost at {}".format(where))
    return a, b


def refine_transition(
    model: Params,
    vary: Union[str, Sequence[str]],
    bracket: Union[JumpEvent, Tuple[float, float]],
    transition_tol: float = DEFAULT_TRANSITION_TOL,
    config: Optional[SolverConfig] = None,
    internal_equilibria: InternalEquilibria = None,
) -> JumpEvent:
    """Locate a first-order transition inside a bracket.

    The global branch at the lower end (A) and the one at the upper end (B)
    are followed through the bracket by nearest-root tracking, and the bracket
    is bisected on the sign of phi(A) - phi(B) until it is narrower than
    ``transition_tol``.

    :param model: base parameters
    :type model: OneComponentParams or TwoComponentParams
    :param vary: name(s) of the parameter(s) moved together
    :type vary: str or list of str
    :param bracket: coarse jump or (lower, upper) pair containing one change of global branch
    :type bracket: JumpEvent or tuple
    :param transition_tol: largest width of the refined bracket
    :type transition_tol: float
    :param config: solver settings
    :type config: SolverConfig
    :param internal_equilibria: (m1star, m2star) held fixed while parameters move
    :type internal_equilibria: tuple, optional
    :raises NoBranchChangeError: if a single branch carries the order parameter through the bracket
    :raises BranchTrackingError: if a branch cannot be followed through the bracket
    :return: refined event with side limits and free-energy gap
    :rtype: JumpEvent
    """
    config = config or SolverConfig()
    vary = (vary,) if isinstance(vary, str) else tuple(vary)
    check_parameter_names(model, vary)
    _check_internal_equilibria(model, vary, internal_equilibria)

    if isinstance(bracket, JumpEvent):
        lower, upper = bracket.lower, bracket.upper
    else:
        lower, upper = (float(x) for x in bracket)
    if not lower < upper:
        raise InvalidParametersError("bracket must satisfy lower < upper")

    def solve(x):
        return find_all_stationary(parameters_at(model, vary, x, internal_equilibria), config)

    left, right = solve(lower), solve(upper)
    a_lower, b_upper = max(
        ((p, q) for p in left.global_points for q in right.global_points),
        key=lambda pair: pair[0].distance(pair[1]),
    )
    gap = a_lower.distance(b_upper)
    if gap < config.dedup_tol:
        raise NoBranchChangeError(
            "no change of global branch between {} and {}".format(lower, upper)
        )

    exact = None
    _, b_lower = _follow(left, a_lower, b_upper, gap, config, lower)
    a_upper, b_check = _follow(right, a_lower, b_upper, gap, config, upper)
    if b_lower is not None and abs(a_lower.phi_value - b_lower.phi_value) <= EXACT_CROSSING:
        exact = lower, a_lower, b_lower
    elif b_check is not None and abs(a_upper.phi_value - b_upper.phi_value) <= EXACT_CROSSING:
        exact = upper, a_upper, b_upper

    while exact is None and upper - lower > transition_tol:
        mid = 0.5 * (lower + upper)
        if not lower < mid < upper:
            break
        a, b = _follow(solve(mid), a_lower, b_upper, gap, config, mid)
        if b is None:
            # one maximum here: it belongs to whichever side it is closer to
            if a.distance(a_lower) <= a.distance(b_upper):
                lower, a_lower = mid, a
            else:
                upper, b_upper = mid, a
            continue
        gap = a.distance(b)
        difference = a.phi_value - b.phi_value
        if abs(difference) <= EXACT_CROSSING:
            exact = mid, a, b
        elif difference > 0:
            lower, a_lower = mid, a
        else:
            upper, b_upper = mid, b

    if exact is not None:
        location, a, b = exact
        event = JumpEvent(
            location=location,
            width=0.0,
            m_left=a.m_total,
            m_right=b.m_total,
            delta=abs(b.m_total - a.m_total),
            lower=location,
            upper=location,
            phi_gap=abs(a.phi_value - b.phi_value),
            refined=True,
        )
    else:
        location = 0.5 * (lower + upper)
        a, b = _follow(solve(location), a_lower, b_upper, gap, config, location)
        if b is None:
            raise NoBranchChangeError(
                "the order parameter varies continuously through {}".format(location)
            )
        event = JumpEvent(
            location=location,
            width=upper - lower,
            m_left=a_lower.m_total,
            m_right=b_upper.m_total,
            delta=abs(b_upper.m_total - a_lower.m_total),
            lower=lower,
            upper=upper,
            phi_gap=abs(a.phi_value - b.phi_value),
            refined=True,
        )

    logger.info(
        "transition in %s at %.10g (width %.3g, jump %.6g -> %.6g)",
        ",".join(vary),
        event.location,
        event.width,
        event.m_left,
        event.m_right,
    )
    return event


def refine_jumps(
    model: Params,
    vary: Union[str, Sequence[str]],
    events: Sequence[JumpEvent],
    transition_tol: float = DEFAULT_TRANSITION_TOL,
    config: Optional[SolverConfig] = None,
    internal_equilibria: InternalEquilibria = None,
) -> List[JumpEvent]:
    """Refine coarse jumps, keeping only the genuine transitions.

    Brackets crossed by a single continuous branch are dropped. Brackets whose
    branches cannot be tracked are dropped with a warning.
    """
    refined = []
    for event in events:
        try:
            refined.append(
                refine_transition(
                    model, vary, event, transition_tol, config, internal_equilibria
                )
            )
        except NoBranchChangeError as e:
            logger.debug("dropping the bracket [%g, %g]: %s", event.lower, event.upper, e)
        except BranchTrackingError as e:
            logger.warning(
                "could not refine the bracket [%g, %g], it is not reported: %s",
                event.lower,
                event.upper,
                e,
            )
    return refined


def _ordered_beats_paramagnetic(K: float, J: float, config: SolverConfig) -> bool:
    """whether a positive maximum of phi exceeds phi(0)"""
    p = OneComponentParams(K=K, J=J, h=0)
    solution = find_all_stationary_one(p, config)
    positive = [
        point
        for point in solution.points
        if point.stability.is_max and point.location > config.dedup_tol
    ]
    if not positive:
        return False
    branch = max(positive, key=lambda point: point.location)
    return branch.phi_value > phi_one(p, 0.0)


def critical_K_bracket(
    J: float, h: float = 0.0, config: Optional[SolverConfig] = None
) -> Tuple[float, float]:
    """Bracket of the positive cubic coupling where the ordered branch overtakes m = 0.

    :raises InvalidParametersError: if h is not 0
    :raises NoTransitionError: if J >= 1 or no crossing exists below a cubic coupling of 100
    :return: (lower, upper) with upper - lower at double resolution
    :rtype: tuple
    """
    config = config or SolverConfig()
    if h != 0:
        raise InvalidParametersError("the symmetric critical coupling requires h = 0")
    if J >= 1:
        raise NoTransitionError(
            "for J = {} >= 1 the two jumps have merged at K = 0; "
            "there is no positive-branch crossing".format(J)
        )

    lower = 0.0
    upper = CRITICAL_K_STEP
    while not _ordered_beats_paramagnetic(upper, J, config):
        lower, upper = upper, upper + CRITICAL_K_STEP
        if upper > CRITICAL_K_MAX:
            raise NoTransitionError(
                "no positive-branch crossing for J = {} below K = {}".format(J, CRITICAL_K_MAX)
            )

    while upper - lower > CRITICAL_K_TOL:
        mid = 0.5 * (lower + upper)
        if not lower < mid < upper:
            break
        if _ordered_beats_paramagnetic(mid, J, config):
            upper = mid
        else:
            lower = mid
    return lower, upper


def critical_K_symmetric(J: float, h: float = 0.0, config: Optional[SolverConfig] = None) -> float:
    """Positive K at which phi(0) equals phi on the positive stable branch.

    At J = 0 this is 2.016295...; the negative transition lies at the opposite
    value by spin-flip symmetry.
    """
    lower, upper = critical_K_bracket(J, h, config)
    return 0.5 * (lower + upper)


@dataclass(frozen=True)
class AxisSpec:
    """an axis of a phase diagram: tied parameter names and a range"""

    vary: Tuple[str, ...]
    start: float
    stop: float
    steps: int

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        """Read ``name[,name...]:from:to:steps``.

        :raises InvalidParametersError: on malformed text
        """
        parts = text.split(":")
        if len(parts) != 4 or not parts[0]:
            raise InvalidParametersError(
                "malformed axis '{}', expected name[,name]:from:to:steps".format(text)
            )
        try:
            start, stop, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise InvalidParametersError(
                "malformed axis '{}', expected name[,name]:from:to:steps".format(text)
            )
        return cls(tuple(parts[0].split(",")), start, stop, steps)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def label(self) -> str:
        return "=".join(self.vary)

    def __str__(self):
        return "{}:{!r}:{!r}:{}".format(",".join(self.vary), self.start, self.stop, self.steps)


@dataclass(frozen=True)
class PhaseDiagramSpec:
    model: Params
    x: AxisSpec
    y: AxisSpec
    internal_equilibria: InternalEquilibria = None
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        for axis in (self.x, self.y):
            check_parameter_names(self.model, axis.vary)
            if not axis.start < axis.stop:
                raise InvalidParametersError(
                    "axis {} must satisfy from < to".format(axis.label)
                )
            if axis.steps < 2:
                raise InvalidParametersError("axis {} needs at least 2 steps".format(axis.label))
            if axis.steps > self.max_steps:
                raise GridTooLargeError(
                    "axis {} has {} steps, the cap is {}".format(
                        axis.label, axis.steps, self.max_steps
                    )
                )
        shared = set(self.x.vary) & set(self.y.vary)
        if shared:
            raise InvalidParametersError(
                "axes must vary disjoint parameters, both vary {}".format(",".join(sorted(shared)))
            )
        _check_internal_equilibria(
            self.model, self.x.vary + self.y.vary, self.internal_equilibria
        )

    def row_model(self, y: float) -> Params:
        return parameters_at(self.model, self.y.vary, y)

    def params_at(self, x: float, y: float) -> Params:
        return parameters_at(self.row_model(y), self.x.vary, x, self.internal_equilibria)


def _link_polylines(rows: List[Tuple[float, List[float]]]) -> List[np.ndarray]:
    """Chain per-row transition points into polylines, matching nearest x between consecutive rows."""
    finished, current = [], []
    for y, locations in rows:
        pairs = sorted(
            (abs(line[-1][0] - x), i, j)
            for i, line in enumerate(current)
            for j, x in enumerate(locations)
        )
        used_lines, used_points = set(), set()
        for _, i, j in pairs:
            if i in used_lines or j in used_points:
                continue
            current[i].append((locations[j], y))
            used_lines.add(i)
            used_points.add(j)

        finished.extend(line for i, line in enumerate(current) if i not in used_lines)
        current = [line for i, line in enumerate(current) if i in used_lines]
        current.extend(
            [(x, y)] for j, x in enumerate(locations) if j not in used_points
        )
    finished.extend(current)
    return [np.array(line, dtype=float) for line in finished]


@dataclass
class PhaseDiagram:
    """Global order parameter on a grid, with the transitions found along x.

    ``grid`` has columns x, y, m_total, phi, jump and valid; ``jumps`` has one
    row per transition with its y value; ``polylines`` are arrays of (x, y)
    points.
    """

    spec: PhaseDiagramSpec
    grid: pd.DataFrame
    jumps: pd.DataFrame
    polylines: List[np.ndarray]

    def polylines_frame(self) -> pd.DataFrame:
        frames = [
            pd.DataFrame({"line": i, "x": line[:, 0], "y": line[:, 1]})
            for i, line in enumerate(self.polylines)
        ]
        if not frames:
            return pd.DataFrame(columns=["line", "x", "y"])
        return pd.concat(frames, ignore_index=True)

    def to_svg(self) -> str:
        from .heatmap import render_svg

        return render_svg(self)


def phase_diagram_2d(
    spec: PhaseDiagramSpec,
    config: Optional[SolverConfig] = None,
    threads: int = 1,
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
    transition_tol: float = DEFAULT_TRANSITION_TOL,
    refine: bool = True,
) -> PhaseDiagram:
    """Solve every cell of a two-parameter grid and locate the transitions of each row.

    Cells whose solve failed are kept with ``valid`` False. Jumps are detected
    along x for each y value; both cells around a jump are flagged.

    :param spec: base model and axes
    :type spec: PhaseDiagramSpec
    :param config: solver settings
    :type config: SolverConfig
    :param threads: processes used to solve the cells, 0 for all cores
    :type threads: int
    :param refine: refine every detected jump, otherwise keep the coarse brackets
    :type refine: bool
    :rtype: PhaseDiagram
    """
    config = config or SolverConfig()
    xs, ys = spec.x.values, spec.y.values
    solutions = _solve_many([spec.params_at(x, y) for y in ys for x in xs], config, threads)

    frames, jump_rows, row_points = [], [], []
    for j, y in enumerate(ys):
        rows = _rows_from_solutions(xs, solutions[j * len(xs) : (j + 1) * len(xs)])
        flags = np.zeros(len(xs), dtype=bool)
        locations = []
        events = detect_jumps(rows, jump_threshold)
        if refine:
            events = refine_jumps(
                spec.row_model(y),
                spec.x.vary,
                events,
                transition_tol,
                config,
                spec.internal_equilibria,
            )
        for event in events:
            index = int(np.searchsorted(xs, event.location, side="right")) - 1
            index = min(max(index, 0), len(xs) - 2)
            flags[index : index + 2] = True
            locations.append(event.location)
            jump_rows.append({"y": y, **{c: getattr(event, c) for c in JUMP_COLUMNS}})

        row_points.append((y, locations))
        frames.append(
            pd.DataFrame(
                {
                    "x": xs,
                    "y": y,
                    "m_total": rows["m_total"].to_numpy(),
                    "phi": rows["phi"].to_numpy(),
                    "jump": flags,
                    "valid": rows["valid"].to_numpy(),
                }
            )
        )

    invalid = int(sum((~frame["valid"]).sum() for frame in frames))
    if invalid:
        logger.warning("%d of %d cells could not be solved", invalid, len(xs) * len(ys))

    return PhaseDiagram(
        spec=spec,
        grid=pd.concat(frames, ignore_index=True),
        jumps=pd.DataFrame(jump_rows, columns=["y"] + JUMP_COLUMNS),
        polylines=_link_polylines(row_points),
    )


@dataclass
class CriticalAlphaCurve:
    """AI fraction at which the global order parameter jumps, per coupling value (None when it never does)"""

    vary: Tuple[str, ...]
    couplings: np.ndarray
    alpha_star: List[Optional[float]]
    widths: List[Optional[float]]

    @property
    def is_empty(self) -> bool:
        return all(a is None for a in self.alpha_star)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "coupling": self.couplings,
                "alpha_star": [math.nan if a is None else a for a in self.alpha_star],
                "width": [math.nan if w is None else w for w in self.widths],
            }
        )


def critical_alpha(
    model: TwoComponentParams,
    config: Optional[SolverConfig] = None,
    alpha_steps: int = 101,
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
    transition_tol: float = DEFAULT_TRANSITION_TOL,
    internal_equilibria: InternalEquilibria = None,
    threads: int = 1,
) -> JumpEvent:
    """First jump of the global order parameter along alpha in [0, 1].

    :raises NoTransitionError: if the order parameter never jumps
    :return: the first jump that survives refinement
    :rtype: JumpEvent
    """
    if not isinstance(model, TwoComponentParams):
        raise InvalidParametersError("a critical AI fraction needs the two-component model")
    config = config or SolverConfig()
    rows = sweep_1d(
        SweepSpec(model, ("alpha",), 0.0, 1.0, alpha_steps, internal_equilibria), config, threads
    )
    for event in detect_jumps(rows, jump_threshold):
        refined = refine_jumps(
            model, ("alpha",), [event], transition_tol, config, internal_equilibria
        )
        if refined:
            return refined[0]
    raise NoTransitionError("the global order parameter does not jump along alpha")


def critical_alpha_curve(
    model: TwoComponentParams,
    vary: Union[str, Sequence[str]],
    start: float,
    stop: float,
    steps: int,
    config: Optional[SolverConfig] = None,
    alpha_steps: int = 101,
    jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
    transition_tol: float = DEFAULT_TRANSITION_TOL,
    internal_equilibria: InternalEquilibria = None,
    threads: int = 1,
) -> CriticalAlphaCurve:
    """Critical AI fraction as a function of a coupling.

    For each of ``steps`` values of the coupling(s) ``vary`` between ``start``
    and ``stop``, alpha is swept over [0, 1] and its first jump refined.

    :rtype: CriticalAlphaCurve
    """
    vary = (vary,) if isinstance(vary, str) else tuple(vary)
    coupling_axis = SweepSpec(model, vary, start, stop, steps)
    if "alpha" in vary:
        raise InvalidParametersError("alpha cannot be the coupling of a critical alpha curve")

    alpha_star, widths = [], []
    for value in coupling_axis.values:
        try:
            event = critical_alpha(
                parameters_at(model, vary, value),
                config,
                alpha_steps,
                jump_threshold,
                transition_tol,
                internal_equilibria,
                threads,
            )
        except NoTransitionError:
            logger.info("no alpha transition at %s = %g", ",".join(vary), value)
            alpha_star.append(None)
            widths.append(None)
            continue
        alpha_star.append(event.location)
        widths.append(event.width)

    return CriticalAlphaCurve(vary, coupling_axis.values, alpha_star, widths)
