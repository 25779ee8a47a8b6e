"""
Shared pytest fixtures
"""

import json
import os
import sys

import pytest

# Add repository root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from fca.binarize import parse_labeled_csv, role_config_from_dict
from fca.context import parse_cxt

K1_CXT = "B\n\n3\n3\n\no1\no2\no3\na\nb\nc\nXX.\n.XX\n.X.\n"

# Six positives, six negatives over three numeric traits.
# A=HIGH & B=HIGH (or both LOW) only occurs among positives; the C categories
# occur in both classes. Medians: A 8, B 13, C 27.
CONTRAST_CSV = """species,A,B,C,reservoir
p1,10,20,50,1
p2,11,21,1,1
p3,12,22,NA,1
p4,1,1,51,1
p5,2,2,2,1
p6,3,3,,1
n1,13,4,52,0
n2,14,5,3,0
n3,15,6,-999,0
n4,4,23,53,0
n5,5,24,4,0
n6,6,25,NaN,0
"""

CONTRAST_ROLES = {
    "id_column": "species",
    "label_column": "reservoir",
    "positive_label": "1",
    "columns": {"A": "numeric", "B": "numeric", "C": "numeric"}
}


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run large performance tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running performance test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def k1():
    return parse_cxt(K1_CXT)


@pytest.fixture
def k1_file(tmp_path):
    path = tmp_path / "k1.cxt"
    path.write_text(K1_CXT, encoding="utf-8")
    return str(path)


@pytest.fixture
def contrast_roles():
    return role_config_from_dict(CONTRAST_ROLES)


@pytest.fixture
def contrast_dataset(contrast_roles):
    return parse_labeled_csv(CONTRAST_CSV, contrast_roles)


@pytest.fixture
def contrast_files(tmp_path):
    """(trait CSV path, role config path) for the engineered dataset"""
    data = tmp_path / "traits.csv"
    data.write_text(CONTRAST_CSV, encoding="utf-8")
    roles = tmp_path / "roles.json"
    roles.write_text(json.dumps(CONTRAST_ROLES), encoding="utf-8")
    return str(data), str(roles)
