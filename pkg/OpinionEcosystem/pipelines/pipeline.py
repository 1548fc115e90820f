from abc import ABC, abstractmethod
import datetime
import logging
import os
import sys
from typing import Dict, List, Optional, Tuple

import pandas as pd
from yaml import dump

from ..models import InvalidParametersError, OneComponentParams, Params, TwoComponentParams
from ..solver import SolverConfig
from ..tables import (
    EQUILIBRIUM_COLUMNS,
    MODEL_COLUMNS,
    SOLVER_COLUMNS,
    model_columns,
    to_csv,
)
from ..utils import atomic_write

from OpinionEcosystem import __version__

logger = logging.getLogger(__name__)
logger.propagate = True


class Pipeline(ABC):
    """Base class of the command-line subcommands.

    Subclasses declare their options in :meth:`setup_parser` and do their work
    in :meth:`run`, which receives every parsed option as a keyword argument.
    """

    SUBCOMMAND = ""

    def __init__(self):
        self.outputs = []

    @abstractmethod
    def run(self, **kwargs):
        pass

    @staticmethod
    def setup_parser(parser):
        pass

    @staticmethod
    def add_common_arguments(parser):
        parser.add_argument(
            "--out",
            help="path of the output CSV; side tables and the parameters file are written next to it. Without it, the main table goes to the standard output",
            default=None,
        )
        parser.add_argument(
            "--config",
            help="path to a configuration file of 'key = value' lines, keys being flag names; flags override it",
            default=None,
        )
        parser.add_argument(
            "--threads",
            help="amount of processes to run on, 0 for all cores",
            type=int,
            default=1,
        )
        parser.add_argument(
            "--format",
            help="output format; csv+svg also renders phase diagrams as SVG",
            choices=["csv", "csv+svg"],
            default="csv",
        )
        parser.add_argument(
            "--verbose", help="print debug messages", action="store_true"
        )

    @staticmethod
    def add_model_arguments(parser, solver: bool = True):
        parser.add_argument(
            "--model",
            help="one-component or two-component (AI/Human) model",
            choices=["one", "two"],
            default="one",
        )
        for column in MODEL_COLUMNS + EQUILIBRIUM_COLUMNS:
            parser.add_argument(
                column.flag,
                help="{} ({}-component model, default {})".format(
                    column.description, column.models[0], column.default
                ),
                type=column.dtype,
                default=None,
            )
        if solver:
            for column in SOLVER_COLUMNS:
                parser.add_argument(
                    column.flag,
                    help="{} (default {})".format(column.description, column.default),
                    type=column.dtype,
                    default=column.default,
                )

    @staticmethod
    def internal_equilibria(model: str, **kwargs) -> Optional[Tuple]:
        if model != "two":
            return None
        m1star, m2star = kwargs.get("m1star"), kwargs.get("m2star")
        if m1star is None and m2star is None:
            return None
        return m1star, m2star

    @staticmethod
    def build_params(model: str, **kwargs) -> Params:
        """Model parameters from the parsed options, missing ones taking their defaults.

        :raises InvalidParametersError: for options of the other model, or a bias given twice
        """
        other = [
            column.name
            for column in MODEL_COLUMNS + EQUILIBRIUM_COLUMNS
            if model not in column.models and kwargs.get(column.name) is not None
        ]
        if other:
            raise InvalidParametersError(
                "{} do(es) not apply to the {}-component model".format(",".join(other), model)
            )

        values = {
            column.name: column.default if kwargs.get(column.name) is None else kwargs[column.name]
            for column in model_columns(model)
        }
        if model == "one":
            return OneComponentParams(**values)

        for bias, m_star in (("h1", "m1star"), ("h2", "m2star")):
            if kwargs.get(bias) is not None and kwargs.get(m_star) is not None:
                raise InvalidParametersError(
                    "--{} and --{} both set the same bias, give only one".format(bias, m_star)
                )
        params = TwoComponentParams(**values)
        equilibria = Pipeline.internal_equilibria(model, **kwargs)
        if equilibria is not None:
            params = params.with_internal_equilibria(*equilibria)
        return params

    @staticmethod
    def build_solver_config(**kwargs) -> SolverConfig:
        return SolverConfig(
            **{column.name: kwargs[column.name] for column in SOLVER_COLUMNS if column.name in kwargs}
        )

    @staticmethod
    def resolved_parameters(model: str, params: Params, **kwargs) -> Dict:
        """every model and solver setting actually used, keyed by flag name"""
        resolved = {"model": model}
        for column in model_columns(model):
            resolved[column.name] = getattr(params, column.name)
        for column in EQUILIBRIUM_COLUMNS:
            if model in column.models and kwargs.get(column.name) is not None:
                resolved[column.name] = kwargs[column.name]
                # the bias follows from the equilibrium
                resolved.pop("h" + column.name[1], None)
        for column in SOLVER_COLUMNS:
            if column.name in kwargs:
                resolved[column.name] = kwargs[column.name]
        return resolved

    def write(
        self,
        out: Optional[str],
        table: pd.DataFrame,
        columns: List[str],
        parameters: Dict,
        side_tables: Optional[Dict[str, Tuple[pd.DataFrame, List[str]]]] = None,
        side_files: Optional[Dict[str, str]] = None,
    ):
        """Write the main table, its side tables and the parameters file.

        Everything is serialized before the first file is written. Side
        outputs are named after the stem of ``out``, e.g. ``<stem>_jumps.csv``.

        :param out: main CSV path, or None for the standard output
        :type out: str
        :param parameters: resolved parameters, echoed as metadata
        :type parameters: dict
        :param side_tables: suffix to (dataframe, columns)
        :type side_tables: dict
        :param side_files: suffix to raw text content
        :type side_files: dict
        """
        date = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        metadata = {
            "tool": "OpinionEcosystem",
            "version": __version__,
            "command": self.SUBCOMMAND,
            **parameters,
        }
        main = to_csv(table, columns, metadata)

        if out is None:
            sys.stdout.write(main)
            if side_tables or side_files:
                logger.info(
                    "side outputs (%s) are only written when --out is given",
                    ",".join(list(side_tables or {}) + list(side_files or {})),
                )
            return []

        stem = os.path.splitext(out)[0]
        contents = {out: main}
        for suffix, (df, df_columns) in (side_tables or {}).items():
            contents[stem + suffix] = to_csv(df, df_columns, metadata)
        for suffix, text in (side_files or {}).items():
            contents[stem + suffix] = text
        contents[stem + "_parameters.yml"] = dump(
            {
                "parameters": parameters,
                "package_version": __version__,
                "date": date,
            }
        )

        for path, content in contents.items():
            atomic_write(path, content)
            logger.info("exported %s", path)

        self.outputs = list(contents)
        return self.outputs
