import logging

import pandas as pd

from ..models import InvalidParametersError
from ..transitions import (
    DEFAULT_JUMP_THRESHOLD,
    DEFAULT_TRANSITION_TOL,
    NoTransitionError,
    critical_alpha,
    critical_alpha_curve,
    critical_K_bracket,
)
from .pipeline import Pipeline
from .sweep import add_jump_arguments

logger = logging.getLogger(__name__)
logger.propagate = True

CRITICAL_COLUMNS = ["target", "value", "width"]
CURVE_COLUMNS = ["target", "value", "width", "coupling"]


class CriticalPipeline(Pipeline):
    SUBCOMMAND = "critical"

    def run(
        self,
        model: str = "one",
        target: str = "K",
        vary: str = None,
        start: float = None,
        stop: float = None,
        steps: int = None,
        alpha_steps: int = 101,
        jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
        transition_tol: float = DEFAULT_TRANSITION_TOL,
        out: str = None,
        threads: int = 1,
        **kwargs,
    ):
        """locate the critical cubic coupling or the critical AI fraction"""
        params = self.build_params(model, **kwargs)
        config = self.build_solver_config(**kwargs)
        parameters = self.resolved_parameters(model, params, **kwargs)
        parameters["target"] = target

        if target == "K":
            if model != "one":
                raise InvalidParametersError("--target K needs the one-component model")
            lower, upper = critical_K_bracket(params.J, params.h, config)
            table = pd.DataFrame(
                [{"target": "K", "value": 0.5 * (lower + upper), "width": upper - lower}]
            )
            logger.info("critical cubic coupling %.10g", table["value"][0])
            return self.write(out, table, CRITICAL_COLUMNS, parameters)

        if model != "two":
            raise InvalidParametersError("--target alpha needs the two-component model")
        equilibria = self.internal_equilibria(model, **kwargs)
        parameters.update(
            {
                "alpha-steps": alpha_steps,
                "jump-threshold": jump_threshold,
                "transition-tol": transition_tol,
            }
        )

        if vary is None:
            event = critical_alpha(
                params, config, alpha_steps, jump_threshold, transition_tol, equilibria, threads
            )
            table = pd.DataFrame(
                [{"target": "alpha", "value": event.location, "width": event.width}]
            )
            logger.info("critical AI fraction %.10g", event.location)
            return self.write(out, table, CRITICAL_COLUMNS, parameters)

        if start is None or stop is None or steps is None:
            raise InvalidParametersError("--vary needs --from, --to and --steps")
        curve = critical_alpha_curve(
            params,
            vary.split(","),
            start,
            stop,
            steps,
            config,
            alpha_steps,
            jump_threshold,
            transition_tol,
            equilibria,
            threads,
        )
        if curve.is_empty:
            raise NoTransitionError(
                "the order parameter does not jump along alpha for any {} in [{}, {}]".format(
                    vary, start, stop
                )
            )
        frame = curve.to_frame()
        table = pd.DataFrame(
            {
                "target": "alpha",
                "value": frame["alpha_star"],
                "width": frame["width"],
                "coupling": frame["coupling"],
            }
        )
        parameters.update({"vary": vary, "from": start, "to": stop, "steps": steps})
        return self.write(out, table, CURVE_COLUMNS, parameters)

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser)
        parser.add_argument(
            "--target",
            help="K: positive critical cubic coupling of the symmetric one-component model; alpha: critical AI fraction",
            choices=["K", "alpha"],
            required=True,
        )
        parser.add_argument(
            "--vary",
            help="with --target alpha, coupling(s) along which the critical fraction is traced",
            default=None,
        )
        parser.add_argument("--from", dest="start", help="first coupling value", type=float)
        parser.add_argument("--to", dest="stop", help="last coupling value", type=float)
        parser.add_argument("--steps", help="number of coupling values", type=int)
        parser.add_argument(
            "--alpha-steps",
            help="number of alpha values scanned for a jump",
            type=int,
            default=101,
        )
        add_jump_arguments(parser)
        Pipeline.add_common_arguments(parser)
