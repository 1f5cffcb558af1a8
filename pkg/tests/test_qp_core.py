"""
Tests for quivers with potential: cyclic derivatives, Jacobian relations,
mutation, isomorphism, the Ginzburg graded quiver and the Euler form.
"""

import pytest
from fractions import Fraction

from utils.error_handler import (
    GinzburgPreconditionError,
    InvalidQuiverError,
    OutOfRangeError,
    UnknownArrowError,
    UnknownVertexError,
)
from utils.qp_core import (
    PathSum,
    Potential,
    Quiver,
    QuiverWithPotential,
    canonical_rotation,
    cyclic_derivative,
    euler_form_cy3,
    euler_matrix,
    euler_pairing,
    exchange_matrix,
    ginzburg_graded_quiver,
    is_isomorphic,
    is_nondegenerate_to_depth,
    jacobian_algebra_basis,
    jacobian_relations,
    mutate,
    mutate_sequence,
)


def _matrix_mutation(b, k):
    n = len(b)
    result = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if k in (i, j):
                result[i][j] = -b[i][j]
            else:
                sign = (b[i][k] > 0) - (b[i][k] < 0)
                result[i][j] = b[i][j] + sign * max(b[i][k] * b[k][j], 0)
    return result


class TestQuiverValidation:
    def test_loop_rejected(self):
        with pytest.raises(InvalidQuiverError):
            Quiver.from_edges(["1"], [("x", "1", "1")])

    def test_two_cycle_rejected(self):
        with pytest.raises(InvalidQuiverError):
            Quiver.from_edges(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])

    def test_undeclared_endpoint_rejected(self):
        with pytest.raises(InvalidQuiverError):
            Quiver.from_edges(["1"], [("a", "1", "2")])

    def test_potential_terms_must_be_cycles(self, a3):
        with pytest.raises(InvalidQuiverError):
            QuiverWithPotential(a3.quiver, Potential.from_terms([(1, ["a", "b", "a"])]))

    def test_potential_arrows_must_exist(self, a3):
        with pytest.raises(UnknownArrowError):
            QuiverWithPotential(a3.quiver, Potential.from_terms([(1, ["a", "b", "c"])]))

    def test_potential_is_stored_by_canonical_rotation(self):
        potential = Potential.from_terms([(1, ["beta", "gamma", "alpha"]), ("1/2", ["alpha", "beta", "gamma"])])
        assert potential.terms == ((Fraction(3, 2), ("alpha", "beta", "gamma")),)

    def test_canonical_rotation(self):
        assert canonical_rotation(("c", "a", "b")) == ("a", "b", "c")


class TestCyclicDerivative:
    def test_derivative_of_three_cycle(self, three_cycle):
        assert cyclic_derivative(three_cycle.potential, "alpha") == PathSum.single(("beta", "gamma"))
        assert cyclic_derivative(three_cycle.potential, "beta") == PathSum.single(("gamma", "alpha"))

    def test_arrow_not_in_potential_gives_zero(self, a3):
        assert cyclic_derivative(a3.potential, "a").is_zero()

    def test_unknown_arrow(self, three_cycle):
        with pytest.raises(UnknownArrowError):
            three_cycle.cyclic_derivative("delta")

    def test_repeated_arrow_counts_every_occurrence(self, three_cycle):
        twice = Potential.from_terms([(1, ["alpha", "beta", "gamma", "alpha", "beta", "gamma"])])
        assert cyclic_derivative(twice, "alpha") == PathSum.single(("beta", "gamma", "alpha", "beta", "gamma"), 2)


class TestJacobian:
    def test_relations_of_three_cycle(self, three_cycle):
        relations = jacobian_relations(three_cycle)
        assert relations == [
            PathSum.single(("beta", "gamma")),
            PathSum.single(("gamma", "alpha")),
            PathSum.single(("alpha", "beta")),
        ]

    def test_zero_potential_has_no_relations(self, a3):
        assert jacobian_relations(a3) == []

    def test_three_cycle_algebra_has_dimension_six(self, three_cycle):
        basis = jacobian_algebra_basis(three_cycle)
        assert len(basis) == 6
        assert sum(1 for _, path in basis if not path) == 3

    def test_a3_path_algebra_basis(self, a3):
        assert len(jacobian_algebra_basis(a3)) == 6

    def test_cyclic_zero_potential_is_infinite(self):
        quiver = Quiver.from_edges(["1", "2", "3"], [("x", "1", "2"), ("y", "2", "3"), ("z", "3", "1")])
        with pytest.raises(OutOfRangeError):
            jacobian_algebra_basis(QuiverWithPotential(quiver), max_length=5)


class TestMutation:
    def test_a3_at_middle_vertex_is_three_cycle(self, a3, three_cycle):
        mutated = mutate(a3, "2")
        assert is_isomorphic(mutated, three_cycle)
        assert len(mutated.potential.terms) == 1
        assert len(mutated.potential.terms[0][1]) == 3

    def test_mutation_is_an_involution(self, a3, three_cycle):
        assert is_isomorphic(mutate(mutate(a3, "2"), "2"), a3)
        assert is_isomorphic(mutate(mutate(three_cycle, "1"), "1"), three_cycle)

    def test_three_cycle_mutation_cancels_two_cycle(self, three_cycle):
        mutated = mutate(three_cycle, "1")
        assert len(mutated.quiver.arrows) == 2
        assert mutated.potential.is_zero()

    def test_unknown_vertex(self, a3):
        with pytest.raises(UnknownVertexError):
            mutate(a3, "99")

    @pytest.mark.parametrize("vertex", ["1", "2", "3"])
    def test_exchange_matrix_follows_matrix_mutation(self, three_cycle, a3, vertex):
        for qp in (three_cycle, a3):
            k = qp.quiver.index(vertex)
            assert exchange_matrix(mutate(qp, vertex)) == _matrix_mutation(exchange_matrix(qp), k)

    def test_mutation_sequence(self, a3):
        assert is_isomorphic(mutate_sequence(a3, ["2", "2"]), a3)

    def test_nondegenerate_three_cycle(self, three_cycle):
        assert is_nondegenerate_to_depth(three_cycle, 2)

    def test_three_cycle_without_potential_is_degenerate(self):
        quiver = Quiver.from_edges(["1", "2", "3"], [("x", "1", "2"), ("y", "2", "3"), ("z", "3", "1")])
        assert not is_nondegenerate_to_depth(QuiverWithPotential(quiver), 1)

    @pytest.fixture
    def two_triangles(self):
        """Triangles abd and def sharing d; mutating at 2 leaves rest terms on both arrows of a 2-cycle"""
        quiver = Quiver.from_edges(
            ["1", "2", "3", "4"],
            [("a", "1", "2"), ("b", "2", "3"), ("d", "3", "1"), ("e", "1", "4"), ("f", "4", "3")],
        )
        return QuiverWithPotential(quiver, Potential.from_terms([(1, ["a", "b", "d"]), (1, ["d", "e", "f"])]))

    def test_reduction_leaves_a_single_product_term(self, two_triangles):
        mutated = mutate(two_triangles, "2")
        assert len(mutated.quiver.arrows) == 4
        assert len(mutated.potential.terms) == 1
        coeff, word = mutated.potential.terms[0]
        assert coeff == -1
        assert sorted(word) == sorted(["a*", "b*", "e", "f"])

    def test_double_mutation_returns_the_triangles(self, two_triangles):
        twice = mutate(mutate(two_triangles, "2"), "2")
        assert is_isomorphic(twice, two_triangles, rescaling=True)

    @pytest.mark.parametrize("name", ["a2", "a3", "three_cycle"])
    def test_involution_at_every_vertex(self, request, name):
        qp = request.getfixturevalue(name)
        for vertex in qp.vertices:
            assert is_isomorphic(mutate(mutate(qp, vertex), vertex), qp), vertex

    def test_a2_is_nondegenerate_to_depth_six(self, a2):
        assert is_nondegenerate_to_depth(a2, 6)

    def test_three_cycle_is_nondegenerate_to_depth_four(self, three_cycle):
        assert is_nondegenerate_to_depth(three_cycle, 4)

    def test_depth_zero_is_trivially_nondegenerate(self):
        quiver = Quiver.from_edges(["1", "2", "3"], [("x", "1", "2"), ("y", "2", "3"), ("z", "3", "1")])
        assert is_nondegenerate_to_depth(QuiverWithPotential(quiver), 0)


class TestIsomorphism:
    def test_relabelled_quivers_are_isomorphic(self, a3):
        relabelled = QuiverWithPotential(Quiver.from_edges(["x", "y", "z"], [("p", "z", "y"), ("q", "y", "x")]))
        assert is_isomorphic(a3, relabelled)

    def test_orientation_matters(self, a3):
        alternating = QuiverWithPotential(Quiver.from_edges(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")]))
        assert not is_isomorphic(a3, alternating)

    def test_potential_coefficient_matters(self, three_cycle):
        other = QuiverWithPotential(three_cycle.quiver, Potential.from_terms([(2, ["alpha", "beta", "gamma"])]))
        assert not is_isomorphic(three_cycle, other)

    def test_rescaling_absorbs_a_single_coefficient(self, three_cycle):
        other = QuiverWithPotential(three_cycle.quiver, Potential.from_terms([(2, ["alpha", "beta", "gamma"])]))
        assert is_isomorphic(three_cycle, other, rescaling=True)

    def test_rescaling_keeps_invariant_ratios(self, three_cycle):
        cycle = ["alpha", "beta", "gamma"]
        # c₂/c₁² is unchanged by any rescaling of the arrows
        first = QuiverWithPotential(three_cycle.quiver, Potential.from_terms([(1, cycle), (1, cycle * 2)]))
        second = QuiverWithPotential(three_cycle.quiver, Potential.from_terms([(1, cycle), (2, cycle * 2)]))
        assert not is_isomorphic(first, second, rescaling=True)
        third = QuiverWithPotential(three_cycle.quiver, Potential.from_terms([(2, cycle), (4, cycle * 2)]))
        assert is_isomorphic(first, third, rescaling=True)


class TestGinzburg:
    def test_a2_graded_quiver(self, a2):
        graded = ginzburg_graded_quiver(a2, 3)
        degrees = {arrow.id: arrow.degree for arrow in graded.arrows}
        assert degrees == {"a": 0, "a*": -1, "e1": -2, "e2": -2}
        assert graded.d_generator("a*").is_zero()
        assert graded.d_generator("e1") == PathSum.single(("a", "a*"))
        assert graded.d_generator("e2") == PathSum.single(("a*", "a"), -1)

    def test_three_cycle_differential_of_opposite_arrow(self, three_cycle):
        graded = ginzburg_graded_quiver(three_cycle, 3)
        assert graded.d_generator("alpha*") == PathSum.single(("beta", "gamma"))

    def test_degree_zero_relations_match_jacobian(self, three_cycle):
        assert ginzburg_graded_quiver(three_cycle).degree_zero_relations() == jacobian_relations(three_cycle)

    @pytest.mark.parametrize("name", ["a2", "a3", "three_cycle"])
    def test_d_squared_vanishes_on_generators(self, name, request):
        graded = ginzburg_graded_quiver(request.getfixturevalue(name))
        for arrow in graded.arrows:
            assert graded.d(graded.d_generator(arrow.id)).is_zero()

    def test_differential_raises_degree(self, three_cycle):
        graded = ginzburg_graded_quiver(three_cycle)
        for arrow in graded.arrows:
            for path, _ in graded.d_generator(arrow.id).terms:
                assert graded.path_degree(path) == arrow.degree + 1

    def test_higher_n_on_acyclic_quiver(self, a2):
        graded = ginzburg_graded_quiver(a2, 5)
        assert graded.degree_of("a*") == -3
        assert graded.degree_of("e1") == -4

    def test_preconditions(self, a2, three_cycle):
        with pytest.raises(GinzburgPreconditionError):
            ginzburg_graded_quiver(a2, 2)
        with pytest.raises(GinzburgPreconditionError):
            ginzburg_graded_quiver(three_cycle, 4)


class TestEulerForm:
    def test_examples(self, a2, three_cycle):
        assert euler_form_cy3(a2, "1", "2") == -1
        assert euler_form_cy3(a2, "1", "1") == 0
        assert euler_form_cy3(three_cycle, "1", "2") == -1

    def test_alternating_hom_dimensions(self, a2, three_cycle):
        for qp in (a2, three_cycle):
            graded = ginzburg_graded_quiver(qp)
            for i in qp.vertices:
                for j in qp.vertices:
                    dims = graded.hom_dimensions(i, j)
                    assert sum((-1) ** k * d for k, d in dims.items()) == euler_form_cy3(qp, i, j)

    def test_antisymmetry(self, three_cycle, a3):
        for qp in (three_cycle, a3):
            matrix = euler_matrix(qp)
            n = len(matrix)
            assert all(matrix[i][j] == -matrix[j][i] for i in range(n) for j in range(n))

    def test_bilinear_extension(self, a3):
        assert euler_pairing(a3, (1, 1, 0), (0, 1, 1)) == -euler_pairing(a3, (0, 1, 1), (1, 1, 0))
        assert euler_pairing(a3, (1, 0, 0), (0, 1, 0)) == -1

    def test_unknown_vertex(self, a2):
        with pytest.raises(UnknownVertexError):
            euler_form_cy3(a2, "1", "7")
