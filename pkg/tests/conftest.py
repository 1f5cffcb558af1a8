import json

import pytest

from models import qp_to_file
from utils.heart_graph import a2_quiver_with_potential, standard_heart
from utils.qp_core import Potential, Quiver, QuiverWithPotential


@pytest.fixture
def a2():
    """1 → 2 with arrow a, zero potential"""
    return a2_quiver_with_potential()


@pytest.fixture
def a3():
    """Linearly oriented A3: 1 →a 2 →b 3"""
    return QuiverWithPotential(Quiver.from_edges(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]))


@pytest.fixture
def three_cycle():
    """1 →α 2 →β 3 →γ 1 with W = αβγ"""
    quiver = Quiver.from_edges(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3"), ("gamma", "3", "1")])
    return QuiverWithPotential(quiver, Potential.from_terms([(1, ["alpha", "beta", "gamma"])]))


@pytest.fixture
def h0(a2):
    return standard_heart(a2)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path as a string"""
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def a3_file(a3, write_json):
    return write_json("a3.json", qp_to_file(a3).model_dump(mode="json"))


@pytest.fixture
def a2_heart_file(a2, write_json):
    return write_json("h0.json", {"qp": qp_to_file(a2).model_dump(mode="json"), "classes": [[1, 0], [0, 1]]})
