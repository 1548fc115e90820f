import os

import numpy as np
import pandas as pd
import pytest

from OpinionEcosystem.tables import (
    ConfigFileError,
    MissingColumnsException,
    config_to_arguments,
    model_columns,
    read_config,
    read_csv,
    read_metadata,
    to_csv,
)
from OpinionEcosystem.utils import atomic_write, format_float

PATH = os.path.join("output", "tables")


@pytest.fixture(scope="function")
def folder(request):
    os.makedirs(PATH, exist_ok=True)
    yield PATH


def write(folder, name, content):
    path = os.path.join(folder, name)
    with open(path, "w") as f:
        f.write(content)
    return path


def test_read_config(folder):
    path = write(
        folder,
        "valid.cfg",
        "# regime of the cross couplings\nmodel = two\n\nK112=0.5  # tied\nvary = K112,K122\nN = 10 20 40\n",
    )
    config = read_config(path)
    assert config == {"model": "two", "K112": "0.5", "vary": "K112,K122", "N": "10 20 40"}

    assert config_to_arguments(path, config) == [
        "--model=two",
        "--K112=0.5",
        "--vary=K112,K122",
        "--N",
        "10",
        "20",
        "40",
    ]


@pytest.mark.parametrize(
    "content",
    ["model two\n", "= 3\n", "K = 1\nK = 2\n", "1K = 2\n"],
)
def test_read_config_errors(folder, content):
    path = write(folder, "invalid.cfg", content)
    with pytest.raises(ConfigFileError) as excinfo:
        read_config(path)
    assert path in str(excinfo.value)


def test_config_switches():
    assert config_to_arguments("x.cfg", {"verbose": "yes", "convergence": "off"}) == ["--verbose"]
    with pytest.raises(ConfigFileError):
        config_to_arguments("x.cfg", {"verbose": "maybe"})


def test_model_columns():
    assert [column.name for column in model_columns("one")] == ["K", "J", "h"]
    two = [column.name for column in model_columns("two")]
    assert two[-1] == "alpha"
    assert len(two) == 10


def test_to_csv_round_trip(folder):
    df = pd.DataFrame(
        {
            "param": np.linspace(0, 1, 7),
            "m_total": [np.pi / k for k in range(1, 8)],
            "coexistence": [False] * 6 + [True],
            "unused": 0,
        }
    )
    text = to_csv(
        df,
        ["param", "m_total", "coexistence"],
        {"model": "one", "K": 2.016295, "N": [10, 20], "convergence": True},
    )
    assert text.splitlines()[0] == "param,m_total,coexistence"
    assert "unused" not in text
    assert text.endswith("# convergence = True\n")

    path = os.path.join(folder, "table.csv")
    atomic_write(path, text)
    back = read_csv(path)
    assert len(back) == 7
    np.testing.assert_array_equal(back["m_total"], df["m_total"])
    np.testing.assert_array_equal(back["param"], df["param"])

    assert read_metadata(path) == {
        "model": "one",
        "K": "2.016295",
        "N": "10 20",
        "convergence": "True",
    }


def test_to_csv_missing_columns():
    with pytest.raises(MissingColumnsException):
        to_csv(pd.DataFrame({"x": [1]}), ["x", "y"])


def test_format_float():
    for x in (0.1, 1 / 3, 2.016295, 1e-300, -0.0):
        assert float(format_float(x)) == x


def test_atomic_write_replaces(folder):
    path = os.path.join(folder, "replaced.txt")
    atomic_write(path, "first")
    atomic_write(path, "second")
    with open(path) as f:
        assert f.read() == "second"
    assert not [name for name in os.listdir(folder) if name.endswith(".tmp")]
