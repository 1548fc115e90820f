import logging

import pandas as pd

from ..transitions import (
    DEFAULT_JUMP_THRESHOLD,
    DEFAULT_TRANSITION_TOL,
    JUMP_COLUMNS,
    SWEEP_COLUMNS,
    SweepSpec,
    detect_jumps,
    refine_jumps,
    sweep_1d,
)
from .pipeline import Pipeline

logger = logging.getLogger(__name__)
logger.propagate = True


def add_jump_arguments(parser):
    parser.add_argument(
        "--jump-threshold",
        help="smallest change of the order parameter between two steps counted as a jump",
        type=float,
        default=DEFAULT_JUMP_THRESHOLD,
    )
    parser.add_argument(
        "--transition-tol",
        help="width below which a transition bracket is considered refined",
        type=float,
        default=DEFAULT_TRANSITION_TOL,
    )


class SweepPipeline(Pipeline):
    SUBCOMMAND = "sweep"

    def run(
        self,
        model: str = "one",
        vary: str = None,
        start: float = None,
        stop: float = None,
        steps: int = None,
        jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
        transition_tol: float = DEFAULT_TRANSITION_TOL,
        out: str = None,
        threads: int = 1,
        **kwargs,
    ):
        """sweep one or several tied parameters and locate the jumps of the order parameter"""
        params = self.build_params(model, **kwargs)
        config = self.build_solver_config(**kwargs)
        equilibria = self.internal_equilibria(model, **kwargs)
        spec = SweepSpec(params, vary.split(","), start, stop, steps, equilibria)

        rows = sweep_1d(spec, config, threads)

        jumps = refine_jumps(
            params, spec.vary, detect_jumps(rows, jump_threshold), transition_tol, config, equilibria
        )
        logger.info("%d jump(s) found along %s", len(jumps), vary)

        jumps = pd.DataFrame(
            [{c: getattr(event, c) for c in JUMP_COLUMNS} for event in jumps],
            columns=JUMP_COLUMNS,
        )
        parameters = self.resolved_parameters(model, params, **kwargs)
        parameters.update(
            {
                "vary": vary,
                "from": start,
                "to": stop,
                "steps": steps,
                "jump-threshold": jump_threshold,
                "transition-tol": transition_tol,
            }
        )
        return self.write(
            out,
            rows,
            SWEEP_COLUMNS,
            parameters,
            side_tables={"_jumps.csv": (jumps, JUMP_COLUMNS)},
        )

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser)
        parser.add_argument(
            "--vary",
            help="comma-separated parameters moved together, e.g. K112,K122",
            required=True,
        )
        parser.add_argument(
            "--from", dest="start", help="first value", type=float, required=True
        )
        parser.add_argument("--to", dest="stop", help="last value", type=float, required=True)
        parser.add_argument("--steps", help="number of values", type=int, required=True)
        add_jump_arguments(parser)
        Pipeline.add_common_arguments(parser)
