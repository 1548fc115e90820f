import logging

from ..solver import find_all_stationary
from .pipeline import Pipeline

logger = logging.getLogger(__name__)
logger.propagate = True

SOLVE_COLUMNS = ["m1", "m2", "m_total", "phi", "stability"]


class SolvePipeline(Pipeline):
    SUBCOMMAND = "solve"

    def run(self, model: str = "one", out: str = None, **kwargs):
        """list every stationary point of the model with its stability"""
        params = self.build_params(model, **kwargs)
        solutions = find_all_stationary(params, self.build_solver_config(**kwargs))

        logger.info(
            "%d stationary point(s), %d global%s",
            len(solutions.points),
            len(solutions.global_points),
            " (coexistence)" if solutions.coexistence else "",
        )
        if solutions.failed_starts:
            logger.warning("%d start(s) did not converge", solutions.failed_starts)

        parameters = self.resolved_parameters(model, params, **kwargs)
        return self.write(out, solutions.to_frame(), SOLVE_COLUMNS, parameters)

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser)
        Pipeline.add_common_arguments(parser)
