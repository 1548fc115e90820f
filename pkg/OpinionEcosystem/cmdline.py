#!/usr/bin/env python3
from .models import InvalidParametersError
from .solver import SolverError
from .tables import ConfigFileError, config_to_arguments, read_config
from .transitions import NoTransitionError
from .pipelines.solve import SolvePipeline
from .pipelines.sweep import SweepPipeline
from .pipelines.diagram import DiagramPipeline
from .pipelines.critical import CriticalPipeline
from .pipelines.oracle import OraclePipeline, MonteCarloPipeline
from . import __version__

import argparse
import logging
import sys

import colorlog

EXIT_INVALID_INPUT = 2
EXIT_SOLVER_FAILURE = 3
EXIT_NO_TRANSITION = 4

# Create a ColorFormatter with desired color settings
color_formatter = colorlog.ColoredFormatter(
    '%(log_color)s%(levelname)-8s%(reset)s %(message)s %(purple)s[%(name)s]%(reset)s',
    log_colors={
        'DEBUG': 'cyan',
        'INFO': 'green',
        'WARNING': 'yellow',
        'ERROR': 'red',
        'CRITICAL': 'bold_red',
    }
)

stream_handler = logging.StreamHandler(sys.stderr)
stream_handler.setFormatter(color_formatter)

# package logger; every module logger propagates to it
logger = logging.getLogger(__package__)
logger.addHandler(stream_handler)
logger.setLevel(logging.INFO)

# Setting up the parse of arguments
parser = argparse.ArgumentParser(
    prog="opinion-ecosystem",
    description="cubic mean-field model of a Human-AI opinion ecosystem",
    allow_abbrev=False,
)
subparsers = parser.add_subparsers(dest="subcommand")
parser.add_argument('--version', action='version', version="{} {}".format(__package__, __version__), help='displays the current version of the package')


def get_doc_summary(doc):
    return doc.split("\n")[0] if doc else ""


def register_pipeline(subcommand, cls):
    _parser = subparsers.add_parser(
        subcommand, description=get_doc_summary(cls.run.__doc__), allow_abbrev=False
    )
    cls.setup_parser(_parser)
    _parser.set_defaults(func=lambda args: cls().run(**vars(args)))


register_pipeline("solve", SolvePipeline)
register_pipeline("sweep", SweepPipeline)
register_pipeline("diagram", DiagramPipeline)
register_pipeline("critical", CriticalPipeline)
register_pipeline("oracle", OraclePipeline)
register_pipeline("mc", MonteCarloPipeline)


def parse_arguments(argv):
    """Parse the command line, merging the configuration file given by --config.

    Values from the file are inserted right after the subcommand, so that any
    flag given on the command line overrides them.
    """
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv[1:])
    if known.config is None:
        return parser.parse_args(argv)

    from_file = config_to_arguments(known.config, read_config(known.config))
    logger.debug("configuration from %s: %s", known.config, " ".join(from_file))
    args, unknown = parser.parse_known_args(argv[:1] + from_file + argv[1:])
    stray = [token for token in unknown if token not in from_file]
    if stray:
        parser.error("unrecognized arguments: {}".format(" ".join(stray)))
    if unknown:
        raise ConfigFileError(
            known.config, "unknown key(s) for {}: {}".format(argv[0], " ".join(unknown))
        )
    return args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)

    try:
        args = parse_arguments(argv)
        if args.subcommand is None:
            parser.print_help(sys.stderr)
            sys.exit(EXIT_INVALID_INPUT)
        if getattr(args, "verbose", False):
            logger.setLevel(logging.DEBUG)
        logger.debug("resolved options: %s", vars(args))
        args.func(args)
    except NoTransitionError as e:
        logger.error("no transition found: %s", e)
        sys.exit(EXIT_NO_TRANSITION)
    except SolverError as e:
        logger.error("solver failure: %s", e)
        sys.exit(EXIT_SOLVER_FAILURE)
    except (InvalidParametersError, ConfigFileError, ValueError, OSError) as e:
        logger.error("%s", e)
        sys.exit(EXIT_INVALID_INPUT)


if __name__ == "__main__":
    main()
