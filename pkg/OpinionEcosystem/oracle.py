"""Finite-N reference values of the cubic mean-field model.

The Gibbs weight of a configuration is ``exp(N U)`` with ``U`` evaluated at the
configuration's magnetization(s), so configurations only matter through their
magnetization sector. The exact partition function is therefore a sum over
sectors weighted by binomial coefficients, carried out in the log domain.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from numba import njit
from numpy.random import PCG64, Generator
from scipy.special import gammaln, logsumexp

from .models import (
    InvalidParametersError,
    OneComponentParams,
    Params,
    TwoComponentParams,
    energy_one,
    energy_two,
)
from .solver import SolverConfig, find_all_stationary

logger = logging.getLogger(__name__)
logger.propagate = True

GENERATOR_NAME = "numpy.random.PCG64"
MAX_SIZE_ONE = 10**7
MAX_SIZE_PRODUCT = 10**8
N_BATCHES = 30
# sector pairs evaluated at once by the two-component sum
CHUNK_SECTORS = 2**22
# spin-flip proposals generated at once by the sampler
CHUNK_PROPOSALS = 2**22


@dataclass(frozen=True)
class FiniteSystemSpec:
    """Sizes and couplings of a finite system.

    ``sizes`` is ``N`` for the one-component model and ``(N1, N2)`` for the
    two-component one; in the latter case ``params.alpha`` is replaced by
    ``N1 / N``.
    """

    params: Params
    sizes: Union[int, Tuple[int, int]]

    def __post_init__(self):
        if isinstance(self.params, OneComponentParams):
            if isinstance(self.sizes, tuple) or int(self.sizes) != self.sizes:
                raise InvalidParametersError("the one-component model takes a single size N")
            if self.sizes < 1:
                raise InvalidParametersError("N must be at least 1, got {}".format(self.sizes))
            object.__setattr__(self, "sizes", int(self.sizes))
        else:
            N1, N2 = (int(n) for n in self.sizes)
            if N1 < 0 or N2 < 0 or N1 + N2 < 1:
                raise InvalidParametersError(
                    "component sizes must be non-negative with N1 + N2 >= 1, got {}".format(
                        self.sizes
                    )
                )
            object.__setattr__(self, "sizes", (N1, N2))
            object.__setattr__(
                self, "params", dataclasses.replace(self.params, alpha=N1 / (N1 + N2))
            )

    @property
    def N(self) -> int:
        return self.sizes if isinstance(self.sizes, int) else sum(self.sizes)

    @property
    def is_two(self) -> bool:
        return isinstance(self.params, TwoComponentParams)


@dataclass(frozen=True)
class ExactResult:
    """per-agent log partition function ``p_N`` and moments of the order parameter"""

    N: int
    p_N: float
    mean_m: float
    mean_abs_m: float
    mean_m2: float


@dataclass(frozen=True)
class MCConfig:
    total_sweeps: int
    burn_in_sweeps: int = 0
    seed: int = 0
    thinning: int = 1

    def __post_init__(self):
        if self.total_sweeps < 1:
            raise InvalidParametersError("total_sweeps must be positive")
        if not 0 <= self.burn_in_sweeps < self.total_sweeps:
            raise InvalidParametersError("burn_in_sweeps must lie in [0, total_sweeps)")
        if self.thinning < 1:
            raise InvalidParametersError("thinning must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise InvalidParametersError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class MCResult:
    N: int
    mean_m: float
    std_error: float
    n_samples: int
    seed: int
    generator: str = GENERATOR_NAME


def log_binomial(n: int, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def sector_magnetizations(n: int) -> np.ndarray:
    """(2k - n) / n for k = 0..n; a single sector at 0 for an empty component"""
    if n == 0:
        return np.zeros(1)
    return (2 * np.arange(n + 1) - n) / n


def _moments(log_weights: np.ndarray, m: np.ndarray, log_z: float):
    w = np.exp(log_weights - log_z)
    return np.sum(w * m), np.sum(w * np.abs(m)), np.sum(w * m**2)


def exact_one(spec: FiniteSystemSpec) -> ExactResult:
    """Exact partition function of the one-component model.

    ``Z_N = sum_k C(N, k) exp(N U(m_k))`` with ``m_k = (2k - N) / N``.

    :param spec: one-component system, N <= 10^7
    :type spec: FiniteSystemSpec
    :rtype: ExactResult
    """
    if spec.is_two:
        raise InvalidParametersError("exact_one needs a one-component system")
    N = spec.N
    if N > MAX_SIZE_ONE:
        raise InvalidParametersError("N = {} exceeds {}".format(N, MAX_SIZE_ONE))

    m = sector_magnetizations(N)
    log_weights = log_binomial(N, np.arange(N + 1)) + N * energy_one(spec.params, m)
    log_z = logsumexp(log_weights)
    mean_m, mean_abs_m, mean_m2 = _moments(log_weights, m, log_z)
    return ExactResult(N, log_z / N, mean_m, mean_abs_m, mean_m2)


def exact_two(spec: FiniteSystemSpec) -> ExactResult:
    """Exact partition function of the two-component model.

    Double sum over the sector pairs ``(k1, k2)``, weighted by
    ``C(N1, k1) C(N2, k2) exp(N U(m1, m2))``. Moments are those of the combined
    order parameter ``(N1 m1 + N2 m2) / N``. An empty component contributes a
    single sector and drops out since its weight in U is zero.

    :param spec: two-component system, with N1 * N2 <= 10^8
    :type spec: FiniteSystemSpec
    :rtype: ExactResult
    """
    if not spec.is_two:
        raise InvalidParametersError("exact_two needs a two-component system")
    N1, N2 = spec.sizes
    N = N1 + N2
    if N1 * N2 > MAX_SIZE_PRODUCT:
        raise InvalidParametersError(
            "N1 * N2 = {} exceeds {}".format(N1 * N2, MAX_SIZE_PRODUCT)
        )

    m1, m2 = sector_magnetizations(N1), sector_magnetizations(N2)
    log_c1 = log_binomial(N1, np.arange(len(m1)))
    log_c2 = log_binomial(N2, np.arange(len(m2)))
    rows = max(1, CHUNK_SECTORS // len(m2))

    def chunks():
        for start in range(0, len(m1), rows):
            block = slice(start, start + rows)
            pairs = np.stack(np.broadcast_arrays(m1[block, None], m2[None, :]), axis=-1)
            log_weights = (
                log_c1[block, None] + log_c2[None, :] + N * energy_two(spec.params, pairs)
            )
            combined = (N1 * pairs[..., 0] + N2 * pairs[..., 1]) / N
            yield log_weights.ravel(), combined.ravel()

    log_z = logsumexp([logsumexp(log_weights) for log_weights, _ in chunks()])
    moments = np.zeros(3)
    for log_weights, combined in chunks():
        moments += _moments(log_weights, combined, log_z)
    return ExactResult(N, log_z / N, *moments)


def exact(spec: FiniteSystemSpec) -> ExactResult:
    return exact_two(spec) if spec.is_two else exact_one(spec)


@njit(cache=True)
def _energy(c, x1, x2):
    # x_l is the sum of the spins of group l divided by N
    return (
        (c[0] * x1**3 + 3 * c[1] * x1**2 * x2 + 3 * c[2] * x1 * x2**2 + c[3] * x2**3) / 3
        + (c[4] * x1**2 + 2 * c[5] * x1 * x2 + c[6] * x2**2) / 2
        + c[7] * x1
        + c[8] * x2
    )


@njit(cache=True)
def _metropolis_block(spins, groups, sums, couplings, sites, uniforms, trace):
    """Run ``len(trace)`` sweeps of single-spin flips, recording the order parameter after each."""
    N = spins.shape[0]
    n = 0
    for t in range(trace.shape[0]):
        for _ in range(N):
            i = sites[n]
            u = uniforms[n]
            n += 1
            g = groups[i]
            s = spins[i]
            x1 = sums[0] / N
            x2 = sums[1] / N
            if g == 0:
                delta = N * (_energy(couplings, x1 - 2 * s / N, x2) - _energy(couplings, x1, x2))
            else:
                delta = N * (_energy(couplings, x1, x2 - 2 * s / N) - _energy(couplings, x1, x2))
            if delta >= 0 or u < np.exp(delta):
                spins[i] = -s
                sums[g] -= 2 * s
        trace[t] = (sums[0] + sums[1]) / N


def _as_two_groups(spec: FiniteSystemSpec):
    if spec.is_two:
        p, (N1, N2) = spec.params, spec.sizes
        couplings = [p.K111, p.K112, p.K122, p.K222, p.J11, p.J12, p.J22, p.h1, p.h2]
    else:
        p, N1, N2 = spec.params, spec.N, 0
        couplings = [p.K, 0, 0, 0, p.J, 0, 0, p.h, 0]
    return np.array(couplings, dtype=np.float64), N1, N2


def batch_means_error(samples: np.ndarray, n_batches: int = N_BATCHES) -> float:
    """standard error of the mean from the spread of ``n_batches`` batch averages"""
    size = len(samples) // n_batches
    if size < 1:
        raise InvalidParametersError(
            "at least {} samples are needed for the error estimate, got {}".format(
                n_batches, len(samples)
            )
        )
    batches = samples[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(np.std(batches, ddof=1) / math.sqrt(n_batches))


def metropolis(spec: FiniteSystemSpec, mc: MCConfig) -> MCResult:
    """Single-spin-flip Metropolis estimate of the mean order parameter.

    A sweep proposes N flips at uniformly drawn sites, each accepted with
    probability ``min(1, exp(N dU))``. Random numbers come from
    ``numpy.random.Generator(PCG64(seed))``, so a run is fully determined by
    its seed.

    :param spec: finite system, N >= 2
    :type spec: FiniteSystemSpec
    :param mc: sweeps, burn-in, seed and thinning
    :type mc: MCConfig
    :rtype: MCResult
    """
    N = spec.N
    if N < 2:
        raise InvalidParametersError("the sampler needs N >= 2, got {}".format(N))

    couplings, N1, N2 = _as_two_groups(spec)
    rng = Generator(PCG64(mc.seed))
    spins = (2 * rng.integers(0, 2, size=N) - 1).astype(np.int64)
    groups = np.concatenate([np.zeros(N1, dtype=np.int64), np.ones(N2, dtype=np.int64)])
    sums = np.array([spins[:N1].sum(), spins[N1:].sum()], dtype=np.int64)

    trace = np.empty(mc.total_sweeps)
    block = max(1, CHUNK_PROPOSALS // N)
    for start in range(0, mc.total_sweeps, block):
        sweeps = min(block, mc.total_sweeps - start)
        sites = rng.integers(0, N, size=sweeps * N)
        uniforms = rng.random(sweeps * N)
        _metropolis_block(
            spins, groups, sums, couplings, sites, uniforms, trace[start : start + sweeps]
        )

    samples = trace[mc.burn_in_sweeps :: mc.thinning]
    result = MCResult(
        N=N,
        mean_m=float(samples.mean()),
        std_error=batch_means_error(samples),
        n_samples=len(samples),
        seed=mc.seed,
    )
    logger.debug("metropolis %s: %s", spec, result)
    return result


def convergence_report(
    params: Params, N_list: Iterable[int], config: Optional[SolverConfig] = None
) -> pd.DataFrame:
    """Gap between the finite-N log partition function and its variational limit.

    Two-component rows use ``N1 = round(alpha N)``.

    :return: columns N, p_N, p_limit and gap = p_N - p_limit
    :rtype: pd.DataFrame
    """
    p_limit = find_all_stationary(params, config).phi_max

    rows = []
    for N in N_list:
        if isinstance(params, TwoComponentParams):
            N1 = int(round(params.alpha * N))
            spec = FiniteSystemSpec(params, (N1, N - N1))
        else:
            spec = FiniteSystemSpec(params, N)
        p_N = exact(spec).p_N
        rows.append({"N": N, "p_N": p_N, "p_limit": p_limit, "gap": p_N - p_limit})
    return pd.DataFrame(rows, columns=["N", "p_N", "p_limit", "gap"])
