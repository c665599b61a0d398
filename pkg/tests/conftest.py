import pathlib

import pytest

from earqsim import load_scenario, run_scenario

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
TOY_SCENARIO_PATH = REPO_ROOT / "scenarios" / "toy_example.json"


@pytest.fixture(scope="session")
def toy_scenario():
    return load_scenario(TOY_SCENARIO_PATH)


@pytest.fixture(scope="session")
def toy_trace(toy_scenario):
    return run_scenario(toy_scenario)
