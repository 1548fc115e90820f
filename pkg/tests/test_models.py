import math

import numpy as np
import pytest

from OpinionEcosystem.models import (
    DomainError,
    InvalidParametersError,
    MagnetizationPair,
    OneComponentParams,
    TwoComponentParams,
    bias_from_internal_equilibrium,
    energy_one,
    energy_two,
    entropy_term,
    grad_phi_one,
    grad_phi_two,
    hessian_phi_two,
    phi_one,
    phi_two,
    second_deriv_phi_one,
    total_magnetization,
)

STEP = 1e-6


def random_one(rng):
    K, J, h = rng.uniform(-3, 3, size=3)
    return OneComponentParams(K, J, h)


def random_two(rng):
    values = rng.uniform(-3, 3, size=9)
    return TwoComponentParams(*values, alpha=rng.uniform(0.05, 0.95))


def close(estimate, exact, tol):
    return abs(estimate - exact) <= tol * max(1, abs(exact))


@pytest.mark.parametrize(
    "m,truth",
    [(0, -math.log(2)), (1, 0), (-1, 0), (0.5, -0.5623351446188083)],
)
def test_entropy_term(m, truth):
    assert entropy_term(m) == pytest.approx(truth, abs=1e-12)


def test_entropy_term_is_even_and_bounded():
    m = np.linspace(-1, 1, 2001)
    values = entropy_term(m)

    np.testing.assert_allclose(values, entropy_term(-m), atol=1e-15)
    assert values.min() == pytest.approx(-math.log(2))
    assert np.argmin(values) == 1000
    assert values.max() == 0


@pytest.mark.parametrize("m", [1.0000001, -2, float("nan")])
def test_entropy_term_domain(m):
    with pytest.raises(DomainError):
        entropy_term(m)


@pytest.mark.parametrize(
    "K,J,h,m,truth",
    [
        (3, 2, 1, 1, 3.0),
        (1.3, -0.2, 0.7, 0, 0.0),
        (2.016295, 0, 0, 0.5, 0.0840123),
    ],
)
def test_energy_one(K, J, h, m, truth):
    assert energy_one(OneComponentParams(K, J, h), m) == pytest.approx(truth, abs=1e-7)


def test_phi_one():
    free = OneComponentParams()
    assert phi_one(free, 0) == pytest.approx(math.log(2))
    assert phi_one(free, 1) == 0

    # above the critical coupling the positive branch beats the disordered state
    p = OneComponentParams(K=2.1)
    m = np.linspace(-1, 1, 2000001)
    assert phi_one(p, m).max() > math.log(2)
    assert m[np.argmax(phi_one(p, m))] > 0.9


def test_phi_one_spin_flip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        p = random_one(rng)
        m = rng.uniform(-1, 1)
        assert phi_one(p, m) == pytest.approx(phi_one(p.flipped(), -m), abs=1e-13)


def test_grad_phi_one():
    assert grad_phi_one(OneComponentParams(), 0) == 0
    assert grad_phi_one(OneComponentParams(h=0.5), math.tanh(0.5)) == pytest.approx(0, abs=1e-15)

    with pytest.raises(DomainError):
        grad_phi_one(OneComponentParams(), 1)


def test_second_deriv_phi_one():
    assert second_deriv_phi_one(OneComponentParams(), 0) == -1.0
    assert second_deriv_phi_one(OneComponentParams(J=1.2), 0) == pytest.approx(0.2)

    with pytest.raises(DomainError):
        second_deriv_phi_one(OneComponentParams(), -1)


def test_one_component_finite_differences():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        p = random_one(rng)
        m = rng.uniform(-0.95, 0.95)

        fd = (phi_one(p, m + STEP) - phi_one(p, m - STEP)) / (2 * STEP)
        assert close(fd, grad_phi_one(p, m), 1e-6)

        fd = (grad_phi_one(p, m + STEP) - grad_phi_one(p, m - STEP)) / (2 * STEP)
        assert close(fd, second_deriv_phi_one(p, m), 1e-6)


def test_energy_two():
    rng = np.random.default_rng(2)
    assert energy_two(random_two(rng), (0, 0)) == 0

    equal = TwoComponentParams.equal_couplings(K=3, J=2, h=1, alpha=0.5)
    assert energy_two(equal, (1, 1)) == pytest.approx(3.0)

    p = TwoComponentParams(K111=1, alpha=0.5)
    assert energy_two(p, (1, 0.3)) == pytest.approx(1 / 24)


def test_phi_two():
    assert phi_two(TwoComponentParams(alpha=0.5), (0, 0)) == pytest.approx(math.log(2))

    # without AI agents only the Human group counts
    p = TwoComponentParams(K111=5, K112=-2, K122=1, K222=0.7, J11=3, J12=-1, J22=0.4, h1=2, h2=-0.3, alpha=0)
    for m1 in (-0.9, 0, 0.4):
        assert phi_two(p, (m1, 0.35)) == pytest.approx(phi_one(p.component(2), 0.35), abs=1e-14)


@pytest.mark.parametrize("alpha", [0, 0.1, 0.5, 0.73, 1])
def test_phi_two_collapses_for_equal_couplings(alpha):
    p = TwoComponentParams.equal_couplings(K=1.3, J=-0.4, h=0.2, alpha=alpha)
    one = OneComponentParams(K=1.3, J=-0.4, h=0.2)
    for m in np.linspace(-1, 1, 41):
        assert phi_two(p, (m, m)) == pytest.approx(phi_one(one, m), abs=1e-12)

    half = TwoComponentParams.equal_couplings(K=1, alpha=0.5)
    assert phi_two(half, (0.5, 0.5)) == pytest.approx(phi_one(OneComponentParams(K=1), 0.5), abs=1e-12)


def test_grad_phi_two():
    np.testing.assert_array_equal(grad_phi_two(TwoComponentParams(), (0, 0)), [0, 0])

    rng = np.random.default_rng(3)
    p = TwoComponentParams(*rng.uniform(-3, 3, size=9), alpha=1)
    for m2 in (-0.8, 0.1, 0.6):
        assert grad_phi_two(p, (0.2, m2))[1] == 0


def test_two_component_finite_differences():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        p = random_two(rng)
        m = rng.uniform(-0.95, 0.95, size=2)
        gradient = grad_phi_two(p, m)
        hessian = hessian_phi_two(p, m)

        for l, shift in enumerate(np.eye(2) * STEP):
            fd = (phi_two(p, m + shift) - phi_two(p, m - shift)) / (2 * STEP)
            assert close(fd, gradient[l], 1e-6)

            fd = (grad_phi_two(p, m + shift) - grad_phi_two(p, m - shift)) / (2 * STEP)
            for k in range(2):
                assert close(fd[k], hessian[k, l], 1e-5)

        assert hessian[0, 1] == pytest.approx(hessian[1, 0], abs=1e-14)


def test_hessian_phi_two():
    np.testing.assert_allclose(
        hessian_phi_two(TwoComponentParams(alpha=0.5), (0, 0)), [[-0.5, 0], [0, -0.5]]
    )

    # stacked pairs are evaluated one by one
    rng = np.random.default_rng(5)
    p = random_two(rng)
    m = rng.uniform(-0.9, 0.9, size=(7, 2))
    stacked = hessian_phi_two(p, m)
    for i in range(7):
        np.testing.assert_allclose(stacked[i], hessian_phi_two(p, m[i]))


def test_two_component_domain():
    with pytest.raises(DomainError):
        grad_phi_two(TwoComponentParams(), (1, 0))
    with pytest.raises(DomainError):
        phi_two(TwoComponentParams(), (0, -1.5))


@pytest.mark.parametrize(
    "m_star,K,J,truth",
    [(0, 2.3, -1.1, 0.0), (0.5, 0, 0, 0.5493061443340549), (0.5, 1, 1, -0.2006938556659451)],
)
def test_bias_from_internal_equilibrium(m_star, K, J, truth):
    assert bias_from_internal_equilibrium(m_star, K, J) == pytest.approx(truth, abs=1e-12)


def test_bias_from_internal_equilibrium_makes_a_root():
    rng = np.random.default_rng(6)
    for _ in range(200):
        m_star = rng.uniform(-0.99, 0.99)
        K, J = rng.uniform(-3, 3, size=2)
        h = bias_from_internal_equilibrium(m_star, K, J)
        assert abs(m_star - math.tanh(K * m_star**2 + J * m_star + h)) <= 1e-12

    with pytest.raises(DomainError):
        bias_from_internal_equilibrium(1, 0, 0)


def test_with_internal_equilibria():
    p = TwoComponentParams(K111=1, J11=1, K222=2, J22=-0.5, h2=0.3).with_internal_equilibria(m1star=0.5)
    assert p.h1 == pytest.approx(-0.2006938556659451)
    assert p.h2 == 0.3


@pytest.mark.parametrize(
    "alpha,m,truth",
    [(0.5, (1, -1), 0.0), (0, (0.9, 0.2), 0.2), (0.25, (0.8, -0.4), -0.1)],
)
def test_total_magnetization(alpha, m, truth):
    assert total_magnetization(alpha, MagnetizationPair(*m)) == pytest.approx(truth, abs=1e-15)


def test_invalid_parameters():
    with pytest.raises(InvalidParametersError):
        OneComponentParams(K=float("inf"))
    with pytest.raises(InvalidParametersError):
        TwoComponentParams(alpha=1.2)
    with pytest.raises(InvalidParametersError):
        TwoComponentParams(J12=float("nan"))
