import dataclasses
import logging
from functools import partial
from typing import List

import pandas as pd

from ..models import InvalidParametersError
from ..oracle import (
    GENERATOR_NAME,
    FiniteSystemSpec,
    MCConfig,
    convergence_report,
    exact,
    metropolis,
)
from ..utils import pool_map
from .pipeline import Pipeline

logger = logging.getLogger(__name__)
logger.propagate = True

ORACLE_COLUMNS = ["N", "p_N", "mean_m", "mean_abs_m", "mean_m2"]
CONVERGENCE_COLUMNS = ["N", "p_N", "p_limit", "gap"]
MC_COLUMNS = ["N", "mean_m", "std_error", "n_samples", "seed"]


def add_size_arguments(parser):
    parser.add_argument(
        "--N",
        help="system size(s) of the one-component model, or total sizes for --convergence",
        type=int,
        nargs="+",
        default=None,
    )
    parser.add_argument("--N1", help="size of the AI group", type=int, default=None)
    parser.add_argument("--N2", help="size of the Human group", type=int, default=None)


def finite_systems(params, model: str, N: List[int], N1: int, N2: int) -> List[FiniteSystemSpec]:
    """finite systems requested on the command line"""
    if model == "one":
        if N is None or N1 is not None or N2 is not None:
            raise InvalidParametersError("the one-component model takes --N only")
        return [FiniteSystemSpec(params, n) for n in N]

    if N1 is None or N2 is None or N is not None:
        raise InvalidParametersError("the two-component model takes --N1 and --N2")
    return [FiniteSystemSpec(params, (N1, N2))]


def _run_chain(spec: FiniteSystemSpec, mc: MCConfig):
    return metropolis(spec, mc)


class OraclePipeline(Pipeline):
    SUBCOMMAND = "oracle"

    def run(
        self,
        model: str = "one",
        N: List[int] = None,
        N1: int = None,
        N2: int = None,
        convergence: bool = False,
        out: str = None,
        **kwargs,
    ):
        """exact finite-size log partition function and moments by sector enumeration"""
        params = self.build_params(model, **kwargs)
        parameters = self.resolved_parameters(model, params, **kwargs)

        if convergence:
            if N is None:
                raise InvalidParametersError("--convergence needs the sizes --N")
            table = convergence_report(params, N, self.build_solver_config(**kwargs))
            parameters.update({"N": N, "convergence": True})
            return self.write(out, table, CONVERGENCE_COLUMNS, parameters)

        systems = finite_systems(params, model, N, N1, N2)
        table = pd.DataFrame([dataclasses.asdict(exact(spec)) for spec in systems])
        parameters.update({"N": N} if model == "one" else {"N1": N1, "N2": N2})
        return self.write(out, table, ORACLE_COLUMNS, parameters)

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser)
        add_size_arguments(parser)
        parser.add_argument(
            "--convergence",
            help="report the gap between p_N and the variational limit for each --N",
            action="store_true",
        )
        Pipeline.add_common_arguments(parser)


class MonteCarloPipeline(Pipeline):
    SUBCOMMAND = "mc"

    def run(
        self,
        model: str = "one",
        N: List[int] = None,
        N1: int = None,
        N2: int = None,
        sweeps: int = 10000,
        burn_in: int = None,
        seed: int = 0,
        thin: int = 1,
        out: str = None,
        threads: int = 1,
        **kwargs,
    ):
        """Metropolis estimate of the mean order parameter"""
        params = self.build_params(model, **kwargs)
        burn_in = sweeps // 10 if burn_in is None else burn_in
        mc = MCConfig(total_sweeps=sweeps, burn_in_sweeps=burn_in, seed=seed, thinning=thin)
        systems = finite_systems(params, model, N, N1, N2)

        results = pool_map(partial(_run_chain, mc=mc), systems, threads)
        table = pd.DataFrame([dataclasses.asdict(result) for result in results])
        for result in results:
            logger.info(
                "N=%d: <m> = %.6f +/- %.6f", result.N, result.mean_m, result.std_error
            )

        parameters = self.resolved_parameters(model, params, **kwargs)
        parameters.update({"N": N} if model == "one" else {"N1": N1, "N2": N2})
        parameters.update(
            {
                "sweeps": sweeps,
                "burn-in": burn_in,
                "seed": seed,
                "thin": thin,
                "generator": GENERATOR_NAME,
            }
        )
        return self.write(out, table, MC_COLUMNS, parameters)

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser, solver=False)
        add_size_arguments(parser)
        parser.add_argument("--sweeps", help="total number of sweeps", type=int, default=10000)
        parser.add_argument(
            "--burn-in",
            help="sweeps discarded before sampling (default: a tenth of --sweeps)",
            type=int,
            default=None,
        )
        parser.add_argument("--seed", help="seed of the PCG64 generator", type=int, default=0)
        parser.add_argument(
            "--thin", help="keep one sample every THIN sweeps", type=int, default=1
        )
        Pipeline.add_common_arguments(parser)
