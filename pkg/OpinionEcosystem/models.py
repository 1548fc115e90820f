"""Parameters and free-energy functionals of the cubic mean-field model.

The one-component model has energy ``U(m) = K/3 m^3 + J/2 m^2 + h m`` and the
variational functional ``phi(m) = U(m) - I(m)``. The two-component model splits
the agents into an AI group (fraction ``alpha``) and a Human group
(fraction ``1 - alpha``) with cubic couplings ``K111, K112, K122, K222``,
quadratic couplings ``J11, J12, J22`` and biases ``h1, h2``.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.special import xlogy

logger = logging.getLogger(__name__)
logger.propagate = True


class DomainError(ValueError):
    """Raised when a magnetization lies outside the domain of an operation"""


class InvalidParametersError(ValueError):
    """Raised for non-finite couplings, out-of-range fractions or conflicting biases"""


def _check_finite(name: str, values: dict):
    bad = [key for key, value in values.items() if not math.isfinite(value)]
    if bad:
        raise InvalidParametersError(
            "{}: the following parameters are not finite: {}".format(name, ",".join(bad))
        )


@dataclass(frozen=True)
class OneComponentParams:
    """Couplings of the one-component cubic mean-field model.

    :param K: cubic coupling
    :type K: float
    :param J: binary coupling
    :type J: float
    :param h: uniform bias
    :type h: float
    """

    K: float = 0.0
    J: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        for field in dataclasses.fields(self):
            object.__setattr__(self, field.name, float(getattr(self, field.name)))
        _check_finite("OneComponentParams", dataclasses.asdict(self))

    def flipped(self) -> "OneComponentParams":
        """parameters of the spin-flipped model (K, J, h) -> (-K, J, -h)"""
        return OneComponentParams(K=-self.K, J=self.J, h=-self.h)


@dataclass(frozen=True)
class TwoComponentParams:
    """Couplings of the two-component (AI / Human) cubic mean-field model.

    Component 1 is the AI group, of relative size ``alpha``; component 2 is the
    Human group, of relative size ``1 - alpha``. Only the canonical cubic
    couplings are given; the tensor is symmetrised (``K121 = K211 = K112``,
    ``K212 = K221 = K122``).
    """

    K111: float = 0.0
    K112: float = 0.0
    K122: float = 0.0
    K222: float = 0.0
    J11: float = 0.0
    J12: float = 0.0
    J22: float = 0.0
    h1: float = 0.0
    h2: float = 0.0
    alpha: float = 0.5

    def __post_init__(self):
        for field in dataclasses.fields(self):
            object.__setattr__(self, field.name, float(getattr(self, field.name)))
        _check_finite("TwoComponentParams", dataclasses.asdict(self))
        if not 0 <= self.alpha <= 1:
            raise InvalidParametersError(
                "alpha must lie in [0, 1], got {}".format(self.alpha)
            )

    @classmethod
    def equal_couplings(cls, K: float = 0, J: float = 0, h: float = 0, alpha: float = 0.5):
        """model where every cubic coupling equals K, every quadratic one J and both biases h"""
        return cls(
            K111=K, K112=K, K122=K, K222=K, J11=J, J12=J, J22=J, h1=h, h2=h, alpha=alpha
        )

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.alpha, 1 - self.alpha])

    @property
    def cubic_tensor(self) -> np.ndarray:
        K = np.empty((2, 2, 2))
        K[0, 0, 0] = self.K111
        K[0, 0, 1] = K[0, 1, 0] = K[1, 0, 0] = self.K112
        K[0, 1, 1] = K[1, 0, 1] = K[1, 1, 0] = self.K122
        K[1, 1, 1] = self.K222
        return K

    @property
    def quadratic_matrix(self) -> np.ndarray:
        return np.array([[self.J11, self.J12], [self.J12, self.J22]])

    @property
    def biases(self) -> np.ndarray:
        return np.array([self.h1, self.h2])

    def component(self, l: int) -> OneComponentParams:
        """isolated one-component parameters (K_lll, J_ll, h_l) of group ``l`` (1 or 2)"""
        if l == 1:
            return OneComponentParams(K=self.K111, J=self.J11, h=self.h1)
        if l == 2:
            return OneComponentParams(K=self.K222, J=self.J22, h=self.h2)
        raise ValueError("component must be 1 or 2, got {}".format(l))

    def with_internal_equilibria(
        self, m1star: Optional[float] = None, m2star: Optional[float] = None
    ) -> "TwoComponentParams":
        """Recompute the biases from the opinions each isolated group equilibrates at.

        :param m1star: internal equilibrium of the AI group, bias left untouched if None
        :type m1star: float, optional
        :param m2star: internal equilibrium of the Human group, bias left untouched if None
        :type m2star: float, optional
        :return: parameters with h1 and/or h2 replaced
        :rtype: TwoComponentParams
        """
        changes = {}
        if m1star is not None:
            changes["h1"] = bias_from_internal_equilibrium(m1star, self.K111, self.J11)
        if m2star is not None:
            changes["h2"] = bias_from_internal_equilibrium(m2star, self.K222, self.J22)
        return dataclasses.replace(self, **changes)


Params = Union[OneComponentParams, TwoComponentParams]


class MagnetizationPair(NamedTuple):
    """average opinions of the AI group (m1) and of the Human group (m2)"""

    m1: float
    m2: float


def _closed_domain(m, name="m"):
    m = np.asarray(m, dtype=float)
    if np.any(np.abs(m) > 1) or np.any(np.isnan(m)):
        raise DomainError("{} must lie in [-1, 1], got {}".format(name, m))
    return m


def _open_domain(m, name="m"):
    m = np.asarray(m, dtype=float)
    if np.any(np.abs(m) >= 1) or np.any(np.isnan(m)):
        raise DomainError("{} must lie in (-1, 1), got {}".format(name, m))
    return m


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def entropy_term(m):
    """Entropy contribution I(m), the log-count of configurations at magnetization m.

    ``I(m) = (1-m)/2 log((1-m)/2) + (1+m)/2 log((1+m)/2)`` with ``0 log 0 = 0``
    at the endpoints. Works on scalars and numpy arrays.

    :param m: magnetization(s) in [-1, 1]
    :type m: float or np.ndarray
    :return: I(m), in [-log 2, 0]
    :rtype: float or np.ndarray
    """
    m = _closed_domain(m)
    down, up = (1 - m) / 2, (1 + m) / 2
    return _scalar(xlogy(down, down) + xlogy(up, up))


def energy_one(p: OneComponentParams, m):
    m = _closed_domain(m)
    return _scalar((p.K / 3) * m**3 + (p.J / 2) * m**2 + p.h * m)


def phi_one(p: OneComponentParams, m):
    """variational functional phi(m) = U(m) - I(m) of the one-component model"""
    return _scalar(np.asarray(energy_one(p, m)) - np.asarray(entropy_term(m)))


def grad_phi_one(p: OneComponentParams, m):
    """derivative of phi; its zeros are the solutions of m = tanh(K m^2 + J m + h)"""
    m = _open_domain(m)
    return _scalar(p.K * m**2 + p.J * m + p.h - np.arctanh(m))


def second_deriv_phi_one(p: OneComponentParams, m):
    m = _open_domain(m)
    return _scalar(2 * p.K * m + p.J - 1 / (1 - m**2))


def _pair(m, domain):
    m = domain(m)
    if m.shape[-1:] != (2,):
        raise ValueError("a magnetization pair must have a trailing dimension of 2")
    return m


def energy_two(p: TwoComponentParams, m):
    """Energy U(m1, m2) of the two-component model.

    :param p: model parameters
    :type p: TwoComponentParams
    :param m: (m1, m2), or an array of pairs with shape (..., 2)
    :type m: MagnetizationPair or np.ndarray
    :return: energy, one value per pair
    :rtype: float or np.ndarray
    """
    m = _pair(m, _closed_domain)
    a1, a2 = p.alpha, 1 - p.alpha
    m1, m2 = m[..., 0], m[..., 1]
    cubic = (
        p.K111 * a1**3 * m1**3
        + 3 * p.K112 * a1**2 * a2 * m1**2 * m2
        + 3 * p.K122 * a1 * a2**2 * m1 * m2**2
        + p.K222 * a2**3 * m2**3
    ) / 3
    quadratic = (
        p.J11 * a1**2 * m1**2 + 2 * p.J12 * a1 * a2 * m1 * m2 + p.J22 * a2**2 * m2**2
    ) / 2
    return _scalar(cubic + quadratic + p.h1 * a1 * m1 + p.h2 * a2 * m2)


def phi_two(p: TwoComponentParams, m):
    """variational functional Phi = U(m1, m2) - alpha I(m1) - (1 - alpha) I(m2)"""
    m = _pair(m, _closed_domain)
    entropy = p.alpha * np.asarray(entropy_term(m[..., 0])) + (1 - p.alpha) * np.asarray(
        entropy_term(m[..., 1])
    )
    return _scalar(np.asarray(energy_two(p, m)) - entropy)


def local_fields(p: TwoComponentParams, m) -> np.ndarray:
    """Effective field felt by each group.

    ``h_l + sum_p alpha_p J_lp m_p + sum_pq alpha_p alpha_q K_lpq m_p m_q``;
    its hyperbolic tangent is the right-hand side of the two-component
    consistency equation. ``m`` may be a pair or an array of pairs.
    """
    wm = np.asarray(m, dtype=float) * p.weights
    return (
        p.biases
        + wm @ p.quadratic_matrix.T
        + np.einsum("lpq,...p,...q->...l", p.cubic_tensor, wm, wm)
    )


def grad_phi_two(p: TwoComponentParams, m) -> np.ndarray:
    """gradient (dPhi/dm1, dPhi/dm2); component l carries the prefactor alpha_l"""
    m = _pair(m, _open_domain)
    return p.weights * (local_fields(p, m) - np.arctanh(m))


def hessian_phi_two(p: TwoComponentParams, m) -> np.ndarray:
    """Matrix of second partials of Phi, shape (..., 2, 2), symmetric."""
    m = _pair(m, _open_domain)
    w = p.weights
    wm = m * w
    # d/dm_k sum_pq a_p a_q K_lpq m_p m_q = 2 a_k sum_q a_q K_lkq m_q
    cubic = 2 * np.einsum("lkq,...q->...lk", p.cubic_tensor, wm)
    inner = (p.quadratic_matrix + cubic) * w
    entropy = np.einsum("...l,lk->...lk", 1 / (1 - m**2), np.eye(2))
    return w[:, None] * (inner - entropy)


def bias_from_internal_equilibrium(m_star: float, K_diag: float, J_diag: float) -> float:
    """Bias making ``m_star`` a fixed point of the isolated group.

    ``h = arctanh(m*) - K m*^2 - J m*``, so that ``m* = tanh(K m*^2 + J m* + h)``.

    :param m_star: opinion the isolated group settles at, in (-1, 1)
    :type m_star: float
    :param K_diag: in-group cubic coupling (K111 or K222)
    :type K_diag: float
    :param J_diag: in-group binary coupling (J11 or J22)
    :type J_diag: float
    :return: bias h_l
    :rtype: float
    """
    m_star = float(_open_domain(m_star, "m_star"))
    return math.atanh(m_star) - K_diag * m_star**2 - J_diag * m_star


def total_magnetization(alpha: float, m) -> float:
    """combined order parameter alpha m1 + (1 - alpha) m2"""
    if not 0 <= alpha <= 1:
        raise InvalidParametersError("alpha must lie in [0, 1], got {}".format(alpha))
    m = np.asarray(m, dtype=float)
    return _scalar(alpha * m[..., 0] + (1 - alpha) * m[..., 1])


def consistency_residual(p: Params, m) -> float:
    """max-norm of m - tanh(field) at ``m``, the residual of the consistency equation"""
    if isinstance(p, OneComponentParams):
        m = float(m)
        return abs(m - math.tanh(p.K * m**2 + p.J * m + p.h))
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m - np.tanh(local_fields(p, m)))))
