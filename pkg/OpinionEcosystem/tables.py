import io
import re
from typing import Dict, List, Mapping, Optional

import pandas as pd

from .utils import format_float


class ConfigFileError(ValueError):
    """Exception raised for malformed configuration files or unknown keys"""

    def __init__(self, path: str, message: str):
        super().__init__("{}: {}".format(path, message))


class MissingColumnsException(Exception):
    def __init__(self, name: str, missing):
        missing = ",".join(sorted(missing))

        super().__init__(
            f"dataframe {name} misses the following required columns: {missing}"
        )


def assert_columns_presence(name: str, df: pd.DataFrame, columns: List[str]):
    missing = set(columns) - set(df.columns)

    if len(missing):
        raise MissingColumnsException(name, missing)


class ParameterColumn:
    """A model or solver parameter exposed on the command line and in config files."""

    def __init__(
        self,
        name="",
        description="",
        dtype=float,
        default=None,
        models=("one", "two"),
    ):
        self.name = name
        self.description = description
        self.dtype = dtype
        self.default = default
        self.models = models

    @property
    def flag(self):
        return "--{}".format(self.name)

    def __str__(self):
        return "ParameterColumn(name = {})".format(self.name)

    def __repr__(self):
        return "ParameterColumn(name = {})".format(self.name)


ONE_COMPONENT_COLUMNS = [
    ParameterColumn(name="K", description="cubic coupling", default=0.0, models=("one",)),
    ParameterColumn(name="J", description="binary coupling", default=0.0, models=("one",)),
    ParameterColumn(name="h", description="uniform bias", default=0.0, models=("one",)),
]

TWO_COMPONENT_COLUMNS = [
    ParameterColumn(
        name="K111", description="cubic coupling within the AI group", default=0.0, models=("two",)
    ),
    ParameterColumn(
        name="K112",
        description="cubic coupling between two AI agents and a Human agent",
        default=0.0,
        models=("two",),
    ),
    ParameterColumn(
        name="K122",
        description="cubic coupling between an AI agent and two Human agents",
        default=0.0,
        models=("two",),
    ),
    ParameterColumn(
        name="K222",
        description="cubic coupling within the Human group",
        default=0.0,
        models=("two",),
    ),
    ParameterColumn(
        name="J11", description="binary coupling within the AI group", default=0.0, models=("two",)
    ),
    ParameterColumn(
        name="J12",
        description="binary coupling between the AI and Human groups",
        default=0.0,
        models=("two",),
    ),
    ParameterColumn(
        name="J22",
        description="binary coupling within the Human group",
        default=0.0,
        models=("two",),
    ),
    ParameterColumn(name="h1", description="bias of the AI group", default=0.0, models=("two",)),
    ParameterColumn(name="h2", description="bias of the Human group", default=0.0, models=("two",)),
    ParameterColumn(
        name="alpha",
        description="relative size of the AI group, in [0, 1]",
        default=0.5,
        models=("two",),
    ),
]

EQUILIBRIUM_COLUMNS = [
    ParameterColumn(
        name="m1star",
        description="opinion the isolated AI group equilibrates at; sets h1",
        models=("two",),
    ),
    ParameterColumn(
        name="m2star",
        description="opinion the isolated Human group equilibrates at; sets h2",
        models=("two",),
    ),
]

SOLVER_COLUMNS = [
    ParameterColumn(
        name="fp_tol", description="tolerance on successive iterates", default=1e-12
    ),
    ParameterColumn(
        name="max_iter", description="maximal fixed-point iterations", dtype=int, default=100000
    ),
    ParameterColumn(
        name="damping", description="initial damping of the fixed-point map", default=1.0
    ),
    ParameterColumn(
        name="n_starts",
        description="starts per dimension of the two-component search",
        dtype=int,
        default=21,
    ),
    ParameterColumn(
        name="dedup_tol", description="distance below which roots are merged", default=1e-8
    ),
    ParameterColumn(
        name="grid_resolution",
        description="step of the one-component bracketing grid",
        default=1e-4,
    ),
]

MODEL_COLUMNS = ONE_COMPONENT_COLUMNS + TWO_COMPONENT_COLUMNS

# keys of config files that stand for switches without value
SWITCHES = {"verbose", "convergence"}
TRUE_VALUES = {"1", "true", "yes", "on"}
FALSE_VALUES = {"0", "false", "no", "off"}


def model_columns(model: str) -> List[ParameterColumn]:
    return [column for column in MODEL_COLUMNS if model in column.models]


def read_config(path: str) -> Dict[str, str]:
    """Parse a ``key = value`` configuration file.

    Blank lines and ``#`` comments are ignored. Keys are flag names without
    their leading dashes.

    :raises ConfigFileError: on lines without ``=``, empty keys or duplicated keys
    """
    config = {}
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigFileError(path, "line {}: expected 'key = value'".format(number))

            key, value = (part.strip() for part in line.split("=", 1))
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_\-]*", key):
                raise ConfigFileError(path, "line {}: invalid key '{}'".format(number, key))
            if key in config:
                raise ConfigFileError(path, "line {}: duplicated key '{}'".format(number, key))
            config[key] = value
    return config


def config_to_arguments(path: str, config: Mapping[str, str]) -> List[str]:
    """command-line tokens equivalent to a parsed configuration file"""
    arguments = []
    for key, value in config.items():
        if key in SWITCHES:
            if value.lower() in TRUE_VALUES:
                arguments.append("--{}".format(key))
            elif value.lower() not in FALSE_VALUES:
                raise ConfigFileError(path, "'{}' expects true or false".format(key))
        elif len(value.split()) > 1:
            arguments.extend(["--{}".format(key)] + value.split())
        else:
            arguments.append("--{}={}".format(key, value))
    return arguments


def _metadata_value(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_metadata_value(v) for v in value)
    return str(value)


def to_csv(df: pd.DataFrame, columns: List[str], metadata: Optional[Mapping] = None) -> str:
    """Serialize ``columns`` of ``df`` as CSV followed by ``# key = value`` metadata lines.

    Floats are written with 17 significant digits, which reads back to the same
    double.
    """
    assert_columns_presence("output", df, columns)

    buffer = io.StringIO()
    df[columns].to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    for key, value in (metadata or {}).items():
        buffer.write("# {} = {}\n".format(key, _metadata_value(value)))
    return buffer.getvalue()


def read_csv(path: str) -> pd.DataFrame:
    """read back a table written by :func:`to_csv`, skipping its metadata"""
    return pd.read_csv(path, comment="#", float_precision="round_trip")


def read_metadata(path: str) -> Dict[str, str]:
    metadata = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("# ") and " = " in line:
                key, value = line[2:].rstrip("\n").split(" = ", 1)
                metadata[key] = value
    return metadata
