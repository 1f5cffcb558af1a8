"""
Tests for hearts, simple tilts, exchange graphs and the stability-space
operations built on them.
"""

import itertools
import math
import pytest
from fractions import Fraction

import networkx as nx
import numpy as np

from utils.error_handler import (
    InvalidCentralChargeError,
    InvalidHeartError,
    OutOfRangeError,
    ProportionalClassesError,
)
from utils.heart_graph import (
    HEART_NOT_UPDATED,
    Direction,
    HNData,
    Heart,
    ProbeEntry,
    StabilityCondition,
    c_action,
    c_action_probe,
    central_charge_on,
    chamber_from_imaginary_parts,
    chamber_of,
    cross_wall,
    exchange_graph,
    heart_chamber_label,
    is_intermediate,
    marginal_wall_check,
    pentagon_hearts,
    probe_distance,
    probe_from_representations,
    second_type_walls,
    shift_heart,
    simple_tilt,
    sph_twist_class_action,
    stab_metric,
    standard_heart,
    support_constant,
)
from utils.qp_core import Quiver, QuiverWithPotential
from utils.rep_stab import CentralChargeVector, Representation

PENTAGON_CLASSES = {
    "H0": {(1, 0), (0, 1)},
    "H1": {(-1, 0), (1, 1)},
    "H2": {(0, 1), (-1, -1)},
    "H3": {(1, 0), (0, -1)},
    "H4": {(-1, 0), (0, -1)},
}


def _exact(*pairs, strict=True):
    return CentralChargeVector(tuple(pairs), "exact", strict=strict)


@pytest.fixture
def pentagon():
    return pentagon_hearts()


@pytest.fixture
def sigma(h0):
    return StabilityCondition(h0, CentralChargeVector.from_complex([1j, -1 + 1j]))


class TestHeart:
    def test_classes_must_form_a_basis(self, a2):
        with pytest.raises(InvalidHeartError):
            Heart(a2, ((1, 0), (1, 0)))
        with pytest.raises(InvalidHeartError):
            Heart(a2, ((2, 0), (0, 1)))

    def test_default_levels_follow_signs(self, a2):
        heart = Heart(a2, ((1, 0), (0, -1)))
        assert heart.levels == (0, 1)

    def test_coordinates(self, pentagon):
        assert pentagon["H1"].coordinates((0, 1)) == (Fraction(1), Fraction(1))

    def test_shift(self, h0):
        shifted = shift_heart(h0, 1)
        assert shifted.classes == ((-1, 0), (0, -1))
        assert shifted.levels == (1, 1)
        assert shift_heart(h0, 2).classes == h0.classes

    def test_intermediate(self, h0, pentagon):
        assert all(is_intermediate(heart) for heart in pentagon.values())
        assert not is_intermediate(shift_heart(h0, 2))
        assert not is_intermediate(simple_tilt(h0, "1", Direction.BACKWARD))


class TestSimpleTilt:
    def test_pentagon_classes(self, pentagon):
        for label, heart in pentagon.items():
            assert heart.class_set() == PENTAGON_CLASSES[label]

    def test_pentagon_levels(self, pentagon):
        assert pentagon["H2"].levels == (0, 1)
        assert pentagon["H4"].key() == shift_heart(pentagon["H0"], 1).key()

    def test_forward_then_backward_is_identity(self, h0):
        for vertex in h0.vertices:
            there = simple_tilt(h0, vertex, Direction.FORWARD)
            assert simple_tilt(there, vertex, Direction.BACKWARD).key() == h0.key()

    @pytest.mark.parametrize("word", list(itertools.product(["1", "2"], repeat=4)))
    def test_classes_stay_a_basis(self, h0, word):
        heart = h0
        for step, vertex in enumerate(word):
            heart = simple_tilt(heart, vertex, Direction.FORWARD if step % 2 else Direction.BACKWARD)
            assert abs(round(np.linalg.det(np.array(heart.classes, dtype=float)))) == 1

    def test_different_paths_reach_the_same_heart(self, pentagon):
        via_h3 = simple_tilt(pentagon["H3"], "1")
        assert via_h3.key() == pentagon["H4"].key()


class TestCrossWall:
    @pytest.mark.parametrize("start,simple,label", [
        ("H0", "1", "H1"),
        ("H0", "2", "H3"),
        ("H1", "2", "H2"),
        ("H3", "1", "H4"),
        ("H2", "1", "H4"),
    ])
    def test_labels(self, pentagon, start, simple, label):
        assert heart_chamber_label(cross_wall(pentagon[start], simple)) == label

    def test_pentagon_labels_itself(self, pentagon):
        for label, heart in pentagon.items():
            assert heart_chamber_label(heart) == label


class TestSphericalTwist:
    def test_twist_of_second_simple(self, h0):
        assert sph_twist_class_action(h0, "1", (0, 1)) == (1, 1)

    def test_twist_fixes_its_own_class(self, h0):
        assert sph_twist_class_action(h0, "1", (1, 0)) == (1, 0)

    def test_inverse(self, h0):
        twisted = sph_twist_class_action(h0, "1", (0, 1))
        assert sph_twist_class_action(h0, "1", twisted, inverse=True) == (0, 1)


class TestChambers:
    @pytest.mark.parametrize("im1,im2,label", [
        (1, 1, "H0"),
        (2, -1, "H3"),
        (-1, -1, "H4"),
        (-1, 2, "H1"),
        (-2, 1, "H2"),
        (1, 0, "wall:S2"),
        (1, -1, "wall:E"),
        (0, 0, "wall:S1,S2,E"),
    ])
    def test_imaginary_parts(self, im1, im2, label):
        assert chamber_from_imaginary_parts(im1, im2) == label

    def test_chamber_of(self):
        assert chamber_of(_exact((0, 1), (-1, 1))) == "H0"
        assert chamber_of(_exact((1, 2), (0, -1), strict=False)) == "H3"
        assert chamber_of(_exact((-1, 0), (0, 1))) == "wall:S1"

    def test_float_tolerance(self):
        Z = CentralChargeVector.from_complex([1 + 1e-15j, 1j], strict=False)
        assert chamber_of(Z) == "wall:S1"


class TestExchangeGraph:
    def test_a1_depth_two_is_a_path(self):
        a1 = QuiverWithPotential(Quiver.from_edges(["1"], []))
        graph = exchange_graph(standard_heart(a1), max_depth=2)
        assert len(graph.vertices) == 5
        assert nx.is_isomorphic(graph.to_networkx(directed=False), nx.path_graph(5))

    def test_intermediate_hearts_form_a_pentagon(self, h0):
        graph = exchange_graph(h0, heart_filter=is_intermediate)
        assert len(graph.vertices) == 5
        assert nx.is_isomorphic(graph.to_networkx(directed=False), nx.cycle_graph(5))
        assert {heart_chamber_label(heart) for heart in graph.vertices} == set(PENTAGON_CLASSES)
        assert len(graph.forward_edges()) == 5

    def test_numbering_does_not_depend_on_threads(self, h0):
        single = exchange_graph(h0, max_depth=3, threads=1)
        pooled = exchange_graph(h0, max_depth=3, threads=4)
        assert single.to_dot() == pooled.to_dot()

    def test_depths(self, h0):
        graph = exchange_graph(h0, max_depth=1)
        assert graph.depths == [0, 1, 1, 1, 1]

    def test_unbounded_without_filter(self, h0):
        with pytest.raises(OutOfRangeError):
            exchange_graph(h0)
        with pytest.raises(OutOfRangeError):
            exchange_graph(h0, max_depth=-1)

    def test_dot_output(self, h0):
        dot = exchange_graph(h0, heart_filter=is_intermediate).to_dot()
        assert dot.startswith("digraph exchange_graph {")
        assert 'H0: (1,0);(0,1)' in dot


class TestCAction:
    def test_real_round_trip_returns_to_the_seed(self, sigma, h0):
        moved = c_action(sigma, 0.3)
        back = c_action(moved, -0.3)
        assert back.heart.key() == h0.key()
        assert central_charge_on(back, (1, 0)) == pytest.approx(1j)
        assert central_charge_on(back, (0, 1)) == pytest.approx(-1 + 1j)

    def test_values_stay_in_the_upper_half_plane(self, sigma):
        moved = c_action(sigma, 0.3)
        assert HEART_NOT_UPDATED not in moved.flags
        for value in moved.Z.complex_values():
            assert value.imag > 0 or (value.imag == 0 and value.real < 0)

    def test_central_charge_is_rotated(self, sigma):
        moved = c_action(sigma, 0.3)
        factor = complex(math.cos(-0.3 * math.pi), math.sin(-0.3 * math.pi))
        for cls in [(1, 0), (0, 1), (1, 1)]:
            assert central_charge_on(moved, cls) == pytest.approx(factor * central_charge_on(sigma, cls))

    def test_integer_action_is_a_shift(self, h0):
        sigma = StabilityCondition(h0, _exact((0, 1), (-1, 1)))
        shifted = c_action(sigma, 1)
        assert shifted.heart.key() == shift_heart(h0, 1).key()
        assert shifted.Z.values == sigma.Z.values

    def test_complex_lambda_keeps_the_heart(self, sigma):
        moved = c_action(sigma, 0.3 + 0.2j)
        assert HEART_NOT_UPDATED in moved.flags
        assert moved.heart is sigma.heart


class TestMetric:
    CLASSES = [(1, 0), (0, 1), (1, 1)]

    def test_distance_to_the_rotated_condition(self, sigma):
        rng = np.random.default_rng(7)
        for _ in range(100):
            lam = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            probe = c_action_probe(sigma, lam, self.CLASSES)
            distance = stab_metric(sigma, c_action(sigma, lam), probe)
            assert distance == pytest.approx(max(abs(lam.real), math.pi * abs(lam.imag)))

    def test_zero_distance(self, sigma):
        assert probe_distance(c_action_probe(sigma, 0, self.CLASSES)) == 0

    def test_distance_from_a_condition_to_itself(self, sigma):
        assert stab_metric(sigma, sigma, c_action_probe(sigma, 0, self.CLASSES)) == 0

    def test_entries_must_match_the_second_condition(self, sigma):
        with pytest.raises(InvalidCentralChargeError):
            stab_metric(sigma, sigma, c_action_probe(sigma, 0.25, self.CLASSES))

    def test_real_lambda_moves_the_heart(self, sigma):
        moved = c_action(sigma, 0.6)
        assert HEART_NOT_UPDATED not in moved.flags
        assert moved.heart.class_set() != sigma.heart.class_set()
        assert stab_metric(sigma, moved, c_action_probe(sigma, 0.6, self.CLASSES)) == pytest.approx(0.6)

    def test_entries_must_lie_in_the_shifted_heart(self, sigma):
        # Z(1, −1) = 1 has phase 0, so the object would sit in H[−1]; (−1, 1) is not effective
        entry = ProbeEntry((1, -1), HNData(0.0, 0.0, 1.0), HNData(0.0, 0.0, 1.0))
        with pytest.raises(InvalidHeartError):
            stab_metric(sigma, sigma, [entry])

    def test_no_entries(self):
        with pytest.raises(OutOfRangeError):
            probe_distance([])

    def test_entries_from_representations(self, a2, h0):
        sigma = StabilityCondition(h0, _exact((0, 1), (-1, 1)))
        rep = Representation(a2, 2, (1, 1), {"a": [[1]]})
        entries = probe_from_representations([rep], sigma, sigma)
        assert entries[0].first.phi_plus == pytest.approx(0.75)
        assert entries[0].first.phi_minus == pytest.approx(0.5)
        assert probe_distance(entries) == 0
        assert stab_metric(sigma, sigma, entries) == 0


class TestSupportAndWalls:
    def test_support_constant(self, h0):
        sigma = StabilityCondition(h0, _exact((0, 1), (0, 1)))
        report = support_constant(sigma, [(1, 0), (0, 1), (1, 1)])
        assert report.constant == Fraction(1)
        assert dict(report.quadratic_form)[(1, 1)] == pytest.approx(2.0)

    def test_sup_norm(self, h0):
        sigma = StabilityCondition(h0, _exact((0, 1), (0, 1)))
        assert support_constant(sigma, [(1, 1)], norm="sup").constant == Fraction(2)

    def test_unknown_norm(self, h0):
        sigma = StabilityCondition(h0, _exact((0, 1), (0, 1)))
        with pytest.raises(OutOfRangeError):
            support_constant(sigma, [(1, 0)], norm="taxicab")

    def test_second_type_walls(self, h0):
        assert second_type_walls(StabilityCondition(h0, _exact((0, 1), (0, 1)))) == ("none", [])
        assert second_type_walls(StabilityCondition(h0, _exact((-1, 0), (0, 1)))) == ("wall", ["1"])
        kind, simples = second_type_walls(StabilityCondition(h0, _exact((-1, 0), (-2, 0))))
        assert kind == "higher-codimension wall"
        assert simples == ["1", "2"]

    def test_marginal_walls(self):
        assert marginal_wall_check(_exact((0, 1), (0, 1)), (1, 0), (0, 1))
        assert not marginal_wall_check(_exact((0, 1), (-1, 1)), (1, 0), (0, 1))
        with pytest.raises(ProportionalClassesError):
            marginal_wall_check(_exact((0, 1), (0, 1)), (1, 1), (2, 2))
