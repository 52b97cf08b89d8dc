import pytest

import mylogging

import dirsimplicial
from dirsimplicial.configuration import config


config_for_tests = {
    "logger_level": "WARNING",
    "logger_color": False,
    "print_table": False,
    "multiprocessing": None,
    "nodes": 12,
    "communities": 3,
    "signals": 40,
    "spike_edges": 2,
    "snr_grid": [0],
    "seeds": 1,
    "layers_grid": [1],
    "width_grid": [4],
    "epochs": 3,
    "batch": 8,
    "expressivity_epochs": 60,
}


@pytest.fixture(autouse=True)
def setup_tests(doctest_namespace):

    doctest_namespace["dirsimplicial"] = dirsimplicial
    doctest_namespace["mylogging"] = mylogging

    # Config reset to default for each test
    config.reset()
    config.update(config_for_tests)

