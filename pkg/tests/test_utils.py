"""
tests.test_utils

Tests des utilitaires : .env, centrage-réduction, lecture des lignes CSV

"""

import importlib
import os

import numpy as np
import pytest

from libs.errors import RaggedRowError
from libs.utils import check_row_widths, init_env, make_rng, scale_columns
from settings import constants


@pytest.fixture
def seed_from_dotenv(tmp_path):
    path = tmp_path / ".env"
    path.write_text("MIFS_SEED=123\n", encoding="utf-8")
    yield path
    os.environ.pop("MIFS_SEED", None)
    importlib.reload(constants)


def test_init_env_reloads_constants(seed_from_dotenv):
    assert init_env(str(seed_from_dotenv)) is True
    assert constants.SEED == 123


def test_init_env_without_file(tmp_path):
    assert init_env(str(tmp_path / "absent.env")) is False


# ----------------
# scale_columns
# ----------------

@pytest.mark.parametrize("offset", [0.0, -3.5, 1e6, 1e9, 1e12])
def test_scale_columns_offsets(offset):
    block = offset + make_rng(1).uniform(size=(300, 2))
    scaled, means, scales = scale_columns(block)
    assert abs(scaled.mean(axis=0)).max() <= 1e-9
    assert np.allclose(scaled.var(axis=0), 1.0, atol=1e-6)
    assert np.allclose(scaled * scales + means, block, rtol=1e-12, atol=0)


def test_scale_columns_constant_column():
    block = np.column_stack([np.arange(5.0), np.full(5, 7.0)])
    scaled, means, scales = scale_columns(block)
    assert scales[1] == 1.0 and means[1] == 7.0
    assert np.all(scaled[:, 1] == 0.0)
    assert scaled[:, 0].tolist() == pytest.approx([-2, -1, 0, 1, 2] / np.sqrt(2.0))


# -------------------
# check_row_widths
# -------------------

def test_check_row_widths_keeps_file_line_numbers(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,b\n\n1,2\n   \n3,4\n", encoding="utf-8")
    numbers, lines = check_row_widths(path)
    assert numbers == [1, 3, 5]
    assert lines == ["a,b", "1,2", "3,4"]


def test_check_row_widths_ragged(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,b\n\n1,2,3\n", encoding="utf-8")
    with pytest.raises(RaggedRowError) as excinfo:
        check_row_widths(path)
    assert excinfo.value.line == 3
