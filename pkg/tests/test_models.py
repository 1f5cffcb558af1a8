"""
Tests for the JSON file models and their conversion to domain objects.
"""

import json
import math
import pytest
from fractions import Fraction

from models import (
    GradedQuiverFile,
    HeartFile,
    ProbeFile,
    QPFile,
    RepresentationFile,
    TriangulationFile,
    dump_model,
    graded_quiver_to_file,
    heart_from_file,
    heart_to_file,
    load_model,
    parse_central_charge,
    parse_class,
    parse_model,
    probe_from_file,
    probe_to_file,
    qp_from_file,
    qp_to_file,
    representation_from_file,
    representation_to_file,
    triangulation_from_file,
    triangulation_to_file,
)
from utils.error_handler import FormatError, InvalidCentralChargeError, InvalidQuiverError
from utils.heart_graph import HNData, ProbeEntry, pentagon_hearts, probe_distance
from utils.qp_core import ginzburg_graded_quiver, is_isomorphic
from utils.rep_stab import Representation
from utils.surface_lab import DiscTriangulation


class TestQuiverFiles:
    def test_round_trip(self, three_cycle):
        restored = qp_from_file(parse_model(dump_model(qp_to_file(three_cycle)), QPFile))
        assert restored.vertices == three_cycle.vertices
        assert is_isomorphic(restored, three_cycle)

    def test_rational_coefficients(self):
        data = QPFile.model_validate({
            "vertices": ["1", "2", "3"],
            "arrows": [{"id": "x", "src": "1", "tgt": "2"}, {"id": "y", "src": "2", "tgt": "3"},
                       {"id": "z", "src": "3", "tgt": "1"}],
            "potential": [{"coeff": "2/3", "cycle": ["y", "z", "x"]}],
        })
        qp = qp_from_file(data)
        assert qp.potential.terms == ((Fraction(2, 3), ("x", "y", "z")),)
        assert qp_to_file(qp).potential[0].coeff == "2/3"

    def test_invalid_quiver_is_a_domain_error(self):
        data = QPFile(vertices=["1"], arrows=[{"id": "x", "src": "1", "tgt": "1"}])
        with pytest.raises(InvalidQuiverError):
            qp_from_file(data)

    @pytest.mark.parametrize("text,fragment", [
        ("{not json", "document"),
        ('{"arrows": []}', "vertices"),
        ('{"vertices": ["1"], "potential": [{"coeff": "x", "cycle": []}]}', "coeff"),
        ('{"format_version": 2, "vertices": ["1"]}', "format_version 2"),
    ])
    def test_malformed(self, text, fragment):
        with pytest.raises(FormatError) as info:
            parse_model(text, QPFile, "input.json")
        assert fragment in str(info.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            load_model(str(tmp_path / "absent.json"), QPFile)

    def test_load(self, a3_file, a3):
        assert is_isomorphic(qp_from_file(load_model(a3_file, QPFile)), a3)


class TestRepresentationFiles:
    def test_round_trip(self, three_cycle):
        rep = Representation(three_cycle, 3, (1, 1, 1), {"beta": [[2]]})
        restored = representation_from_file(parse_model(dump_model(representation_to_file(rep)), RepresentationFile))
        assert restored.p == 3
        assert restored.dim == (1, 1, 1)
        assert restored.mats["beta"].tolist() == [[2]]

    def test_default_prime(self, a2):
        data = RepresentationFile(qp=qp_to_file(a2), dim=[1, 1], mats={"a": [[1]]})
        assert representation_from_file(data).p == 2


class TestHeartFiles:
    def test_round_trip(self):
        heart = pentagon_hearts()["H2"]
        restored = heart_from_file(parse_model(dump_model(heart_to_file(heart)), HeartFile))
        assert restored.key() == heart.key()
        assert restored.levels == heart.levels

    def test_levels_default_from_signs(self, a2_heart_file):
        heart = heart_from_file(load_model(a2_heart_file, HeartFile))
        assert heart.levels == (0, 0)


class TestTriangulationFiles:
    def test_round_trip(self):
        T = DiscTriangulation(6, ((0, 2), (2, 4), (0, 4)))
        assert triangulation_from_file(parse_model(dump_model(triangulation_to_file(T)), TriangulationFile)) == T

    def test_arcs_are_pairs(self):
        with pytest.raises(FormatError):
            parse_model('{"m": 5, "arcs": [[0, 2, 4]]}', TriangulationFile)


class TestProbeFiles:
    def test_round_trip(self):
        entries = [ProbeEntry((1, 0), HNData(0.5, 0.5, 1.0), HNData(0.25, 0.25, 2.0))]
        restored = probe_from_file(parse_model(dump_model(probe_to_file(entries)), ProbeFile))
        assert restored == entries
        assert probe_distance(restored) == pytest.approx(max(0.25, abs(math.log(2.0))))


class TestGradedQuiverFiles:
    def test_a2(self, a2):
        data = json.loads(dump_model(graded_quiver_to_file(ginzburg_graded_quiver(a2))))
        assert GradedQuiverFile.model_validate(data).N == 3
        degrees = {arrow["id"]: arrow["degree"] for arrow in data["arrows"]}
        assert degrees == {"a": 0, "a*": -1, "e1": -2, "e2": -2}
        differential = {entry["arrow"]: entry["terms"] for entry in data["differential"]}
        assert differential["e1"] == [{"coeff": "1", "path": ["a", "a*"]}]
        assert differential["a*"] == []


class TestCommandLineValues:
    def test_central_charge(self):
        Z = parse_central_charge("0,1;-1/2,1")
        assert Z.values == ((0, 1), (Fraction(-1, 2), 1))

    def test_decimal_entries(self):
        assert parse_central_charge("0.5,1").values == ((Fraction(1, 2), 1),)

    def test_float_backend(self):
        Z = parse_central_charge("0,1;-1,1", backend="float", tolerance=1e-9)
        assert Z.backend == "float"
        assert Z.tolerance == 1e-9

    @pytest.mark.parametrize("text", ["0,1;1", "a,b", "1,2,3"])
    def test_malformed_central_charge(self, text):
        with pytest.raises(FormatError):
            parse_central_charge(text)

    def test_central_charge_outside_upper_half_plane(self):
        with pytest.raises(InvalidCentralChargeError):
            parse_central_charge("1,-1")

    def test_class(self):
        assert parse_class("1,0") == (1, 0)
        assert parse_class("-1, 2") == (-1, 2)
        with pytest.raises(FormatError):
            parse_class("1,x")
