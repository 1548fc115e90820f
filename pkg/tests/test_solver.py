import math

import numpy as np
import pytest
from scipy.optimize import brentq

from OpinionEcosystem.models import (
    InvalidParametersError,
    OneComponentParams,
    TwoComponentParams,
    consistency_residual,
    phi_one,
    phi_two,
)
from OpinionEcosystem.solver import (
    SolverConfig,
    Stability,
    find_all_stationary,
    find_all_stationary_one,
    find_all_stationary_two,
    fixed_point_iterate,
    max_residual,
    select_global,
)

FAST = SolverConfig(n_starts=9)


def classical_root(J):
    return brentq(lambda m: m - math.tanh(J * m), 0.01, 1 - 1e-12, xtol=1e-15)


def test_fixed_point_iterate():
    result = fixed_point_iterate(OneComponentParams(h=0.5), 0.0)
    assert result.converged
    assert result.point == pytest.approx(math.tanh(0.5), abs=1e-11)

    result = fixed_point_iterate(OneComponentParams(J=0.5), 0.3)
    assert result.converged
    assert abs(result.point) < 1e-10

    result = fixed_point_iterate(OneComponentParams(K=2.1), 0.95)
    assert result.converged
    assert 0.9 < result.point < 0.96


def test_fixed_point_iterate_reports_non_convergence():
    result = fixed_point_iterate(OneComponentParams(J=0.5), 0.3, SolverConfig(max_iter=2))
    assert not result.converged
    assert result.iterations == 2


def test_fixed_point_iterate_two_components():
    p = TwoComponentParams(h1=0.3, h2=-0.2, alpha=0.4)
    result = fixed_point_iterate(p, (0.1, 0.1), SolverConfig(damping=0.5))
    assert result.converged
    assert consistency_residual(p, result.point) < 1e-10


def test_strong_antiferromagnetic_coupling_settles():
    # the undamped map 2-cycles here; oscillation detection halves the damping
    result = fixed_point_iterate(OneComponentParams(J=-5), 0.5)
    assert result.converged
    assert abs(result.point) < 1e-10


def test_start_outside_a_two_cycle_settles():
    # the undamped steps shrink towards the width of the cycle without ever growing
    result = fixed_point_iterate(OneComponentParams(J=-5), 0.99999, SolverConfig(max_iter=2000))
    assert result.converged
    assert abs(result.point) < 1e-10


def test_single_root():
    solutions = find_all_stationary_one(OneComponentParams())
    assert len(solutions.points) == 1
    point = solutions.points[0]
    assert point.location == pytest.approx(0, abs=1e-12)
    assert point.stability is Stability.GLOBAL_MAX
    assert not solutions.coexistence


def test_above_critical_cubic_coupling():
    p = OneComponentParams(K=2.1)
    solutions = find_all_stationary_one(p)
    assert [point.stability for point in solutions.points] == [
        Stability.LOCAL_MAX,
        Stability.UNSTABLE,
        Stability.GLOBAL_MAX,
    ]
    zero, unstable, stable = (point.location for point in solutions.points)
    assert zero == pytest.approx(0, abs=1e-12)
    assert 0.5 < unstable < 0.9
    assert 0.9 < stable < 0.96
    assert max_residual(p, solutions) <= 1e-10

    # no grid point beats the global maximum
    grid = np.arange(-1, 1 + 1e-4, 1e-4).clip(-1, 1)
    assert phi_one(p, grid).max() <= solutions.phi_max + 1e-10


@pytest.mark.parametrize("J", [1.2, 1.5])
def test_classical_symmetric_tie(J):
    solutions = find_all_stationary_one(OneComponentParams(J=J))
    m_star = classical_root(J)

    assert len(solutions.points) == 3
    negative, zero, positive = solutions.points
    assert negative.location == pytest.approx(-m_star, abs=1e-10)
    assert positive.location == pytest.approx(m_star, abs=1e-10)
    assert zero.stability is Stability.UNSTABLE
    assert solutions.global_points == [negative, positive]
    assert solutions.coexistence


def test_classical_single_phase():
    solutions = find_all_stationary_one(OneComponentParams(J=0.9))
    assert [point.location for point in solutions.points] == [pytest.approx(0, abs=1e-12)]


def test_solution_set_spin_flip():
    rng = np.random.default_rng(0)
    config = SolverConfig()
    for _ in range(30):
        p = OneComponentParams(*rng.uniform(-3, 3, size=3))
        solutions = find_all_stationary_one(p)
        flipped = find_all_stationary_one(p.flipped())

        assert len(solutions.points) == len(flipped.points)
        for point, mirror in zip(solutions.points, reversed(flipped.points)):
            assert point.location == pytest.approx(-mirror.location, abs=config.dedup_tol)
            assert point.stability == mirror.stability


@pytest.mark.parametrize("K,truth", [(1.9, [0.0]), (2.1, None)])
def test_select_global(K, truth):
    solutions = find_all_stationary_one(OneComponentParams(K=K))
    selected = select_global(solutions)

    assert not selected.coexistence
    assert len(selected.points) == 1
    if truth is None:
        assert selected.points[0].location > 0.9
    else:
        assert selected.points[0].location == pytest.approx(truth[0], abs=1e-12)


def test_select_global_needs_points():
    with pytest.raises(ValueError):
        select_global([])


def test_two_components_trivial():
    solutions = find_all_stationary_two(TwoComponentParams(alpha=0.5))
    assert len(solutions.points) == 1
    point = solutions.points[0]
    assert point.location == pytest.approx((0, 0), abs=1e-12)
    assert point.stability is Stability.GLOBAL_MAX
    assert solutions.failed_starts == 0


def test_two_components_equal_couplings():
    one = select_global(find_all_stationary_one(OneComponentParams(K=2.1))).points[0]
    p = TwoComponentParams.equal_couplings(K=2.1, alpha=0.3)
    solutions = find_all_stationary_two(p)

    (point,) = solutions.global_points
    assert point.m1 == pytest.approx(one.location, abs=1e-8)
    assert point.m2 == pytest.approx(one.location, abs=1e-8)
    assert point.m_total == pytest.approx(one.location, abs=1e-8)
    assert max_residual(p, solutions) <= 1e-10


@pytest.mark.parametrize("K,J,h", [(2.1, 0, 0), (1.0, 0.5, 0.1), (2.5, 0.2, 0.05)])
def test_equal_couplings_ignore_alpha(K, J, h):
    m_total = [
        select_global(
            find_all_stationary_two(TwoComponentParams.equal_couplings(K=K, J=J, h=h, alpha=alpha))
        ).points[0].m_total
        for alpha in np.linspace(0.1, 0.9, 9)
    ]
    assert max(m_total) - min(m_total) < 1e-8


def test_two_components_points_are_sorted_and_classified():
    p = TwoComponentParams.equal_couplings(K=2.1, alpha=0.3)
    solutions = find_all_stationary_two(p)
    locations = [tuple(point.location) for point in solutions.points]
    assert locations == sorted(locations)

    for point in solutions.points:
        assert point.phi_value == pytest.approx(phi_two(p, point.location), abs=1e-14)
    # the disordered state is still locally stable, a saddle separates it from the ordered one
    stabilities = {point.stability for point in solutions.points}
    assert Stability.LOCAL_MAX in stabilities
    assert Stability.UNSTABLE in stabilities


@pytest.mark.parametrize("alpha,component", [(0, 2), (1, 1)])
def test_two_components_reduction(alpha, component):
    rng = np.random.default_rng(alpha + 10)
    for _ in range(50):
        p = TwoComponentParams(*rng.uniform(-3, 3, size=9), alpha=alpha)
        one = find_all_stationary_one(p.component(component))
        two = find_all_stationary_two(p)

        assert len(two.points) == len(one.points)
        for reduced, point in zip(one.points, two.points):
            assert point.m_total == pytest.approx(reduced.location, abs=1e-8)
            assert point.stability == reduced.stability

        vanished = two.points[0].m1 if component == 2 else two.points[0].m2
        assert vanished == pytest.approx(math.tanh(p.h1 if component == 2 else p.h2))


def test_two_components_near_reduction():
    p = TwoComponentParams(K222=2.1, alpha=0)
    reduced = select_global(find_all_stationary_two(p)).points[0]
    nearby = select_global(find_all_stationary_two(TwoComponentParams(K222=2.1, alpha=1e-6))).points[0]
    assert reduced.m_total == pytest.approx(nearby.m_total, abs=1e-5)


def test_damping_does_not_change_the_solution():
    rng = np.random.default_rng(3)
    for _ in range(20):
        values = np.concatenate([rng.uniform(-1.5, 1.5, size=7), rng.uniform(-0.5, 0.5, size=2)])
        p = TwoComponentParams(*values, alpha=rng.uniform(0.1, 0.9))
        full = find_all_stationary_two(p, SolverConfig(n_starts=7, damping=1.0))
        half = find_all_stationary_two(p, SolverConfig(n_starts=7, damping=0.5))

        assert [point.m_total for point in full.global_points] == pytest.approx(
            [point.m_total for point in half.global_points], abs=1e-8
        )


def test_dispatch():
    assert find_all_stationary(OneComponentParams(J=0.9)).alpha is None
    assert find_all_stationary(TwoComponentParams(alpha=0.2), FAST).alpha == 0.2
    with pytest.raises(TypeError):
        find_all_stationary((0, 0, 0))


def test_to_frame():
    df = find_all_stationary_one(OneComponentParams(K=2.1)).to_frame()
    assert list(df.columns) == ["m1", "m2", "m_total", "phi", "stability"]
    assert df["stability"].tolist() == ["local", "unstable", "global"]
    assert (df["m1"] == df["m_total"]).all()


@pytest.mark.parametrize(
    "kwargs",
    [{"fp_tol": 0}, {"dedup_tol": 1e-13}, {"damping": 0}, {"damping": 1.5}, {"n_starts": 2}],
)
def test_solver_config_validation(kwargs):
    with pytest.raises(InvalidParametersError):
        SolverConfig(**kwargs)
