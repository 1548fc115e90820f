import logging

from ..transitions import (
    DEFAULT_JUMP_THRESHOLD,
    DEFAULT_MAX_STEPS,
    DEFAULT_TRANSITION_TOL,
    AxisSpec,
    PhaseDiagramSpec,
    phase_diagram_2d,
)
from .pipeline import Pipeline
from .sweep import add_jump_arguments

logger = logging.getLogger(__name__)
logger.propagate = True

GRID_COLUMNS = ["x", "y", "m_total", "phi", "jump"]
POLYLINE_COLUMNS = ["line", "x", "y"]


class DiagramPipeline(Pipeline):
    SUBCOMMAND = "diagram"

    def run(
        self,
        model: str = "one",
        x: str = None,
        y: str = None,
        max_steps: int = DEFAULT_MAX_STEPS,
        jump_threshold: float = DEFAULT_JUMP_THRESHOLD,
        transition_tol: float = DEFAULT_TRANSITION_TOL,
        out: str = None,
        threads: int = 1,
        format: str = "csv",
        **kwargs,
    ):
        """map the global order parameter over two parameter axes"""
        params = self.build_params(model, **kwargs)
        spec = PhaseDiagramSpec(
            params,
            AxisSpec.parse(x),
            AxisSpec.parse(y),
            self.internal_equilibria(model, **kwargs),
            max_steps,
        )
        logger.info(
            "solving a %dx%d grid of %s against %s",
            spec.x.steps,
            spec.y.steps,
            spec.x.label,
            spec.y.label,
        )
        diagram = phase_diagram_2d(
            spec,
            self.build_solver_config(**kwargs),
            threads,
            jump_threshold,
            transition_tol,
        )

        side_files = {}
        if format == "csv+svg":
            side_files[".svg"] = diagram.to_svg()

        parameters = self.resolved_parameters(model, params, **kwargs)
        parameters.update(
            {
                "x": str(spec.x),
                "y": str(spec.y),
                "max-steps": max_steps,
                "jump-threshold": jump_threshold,
                "transition-tol": transition_tol,
                "format": format,
            }
        )
        return self.write(
            out,
            diagram.grid,
            GRID_COLUMNS,
            parameters,
            side_tables={"_transitions.csv": (diagram.polylines_frame(), POLYLINE_COLUMNS)},
            side_files=side_files,
        )

    @staticmethod
    def setup_parser(parser):
        Pipeline.add_model_arguments(parser)
        parser.add_argument(
            "--x",
            help="horizontal axis as name[,name]:from:to:steps; transitions are located along it",
            required=True,
        )
        parser.add_argument(
            "--y", help="vertical axis as name[,name]:from:to:steps", required=True
        )
        parser.add_argument(
            "--max-steps",
            help="largest number of steps per axis",
            type=int,
            default=DEFAULT_MAX_STEPS,
        )
        add_jump_arguments(parser)
        Pipeline.add_common_arguments(parser)
