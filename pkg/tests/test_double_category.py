"""
Test cases for dependencies, morphism squares and their composition
"""

import os
import sys
import pytest

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services import fixtures
from services.double_category import (
    MorphismSquare,
    hcompose_squares,
    horizontal_identity,
    identity_square,
    image,
    inclusion_dependency,
    is_dependency,
    preimage,
    restrict_morphism,
    validate_square,
    vcompose_squares,
)
from services.errors import BoundaryMismatch, NotCommuting, PreimageMismatch
from services.functors import (
    GraphFunctor,
    compose_functors,
    contract_flags,
    identity_functor,
    inclusion,
    is_merger,
)
from services.graph_core import full_subgraph_closure, subgraph
from services.ngr_category import NGrMorphism, morphism_from_functor, ngr_equal, ngr_identity


class TestDependencies:
    """Injective functors onto full subgraphs"""

    def test_point_in_tri(self):
        tri = fixtures.tri()
        assert is_dependency(inclusion(tri, subgraph(tri, ["p"])))

    def test_surface_without_its_curves(self):
        tri = fixtures.tri()
        assert not is_dependency(inclusion(tri, subgraph(tri, ["s"])))
        with pytest.raises(BoundaryMismatch):
            inclusion_dependency(tri, subgraph(tri, ["s"]))

    def test_identity_and_collapse(self):
        assert is_dependency(identity_functor(fixtures.surf()))
        assert not is_dependency(fixtures.collapse(fixtures.tri()))

    def test_image_and_preimage(self):
        grafting = fixtures.grafting()
        curve = full_subgraph_closure(grafting.target, ["c1"])
        found = preimage(grafting, curve.nodes)
        assert found.nodes == ("c1", "p1", "p2", "x")
        assert set(found.flags) == {"xc1", "p1c1"}
        assert image(inclusion_dependency(grafting.target, curve)) == curve


class TestSquares:
    """Square validation"""

    def setup_method(self):
        self.collapse = morphism_from_functor(fixtures.collapse(fixtures.tri()))

    def test_identity_morphisms_over_a_dependency(self):
        tri = fixtures.tri()
        square = horizontal_identity(inclusion_dependency(tri, subgraph(tri, ["p"])))
        assert square.top == ngr_identity(tri)

    def test_collapse_over_identities(self):
        m = self.collapse
        deps = (identity_functor(m.source), identity_functor(m.middle), identity_functor(m.target))
        assert validate_square(m, m, deps) == MorphismSquare(m, m, deps)

    def test_middle_dependency_smaller_than_preimage(self):
        m = self.collapse
        point = subgraph(m.source, ["p"])
        bottom = NGrMorphism(point, point, m.target, identity_functor(point),
                             GraphFunctor(point, m.target, {"p": "a"}, {}))
        deps = (inclusion(m.source, point), inclusion(m.middle, point), identity_functor(m.target))
        with pytest.raises(PreimageMismatch):
            validate_square(m, bottom, deps)

    def test_not_commuting(self):
        pair = fixtures.two_isolated()
        identity = ngr_identity(pair)
        swap = GraphFunctor(pair, pair, {"a": "b", "b": "a"}, {})
        with pytest.raises(NotCommuting):
            validate_square(identity, identity, (swap, identity_functor(pair), identity_functor(pair)))

    def test_wrong_boundary(self):
        m = self.collapse
        deps = (identity_functor(m.target), identity_functor(m.middle), identity_functor(m.target))
        with pytest.raises(BoundaryMismatch):
            validate_square(m, m, deps)


class TestRestriction:
    """Restricting morphisms along dependencies into their target"""

    def test_identity_dependency(self):
        m = morphism_from_functor(fixtures.edge_contraction())
        square = restrict_morphism(m, identity_functor(m.target))
        assert square.bottom == m
        assert square == identity_square(m)

    def test_surface_collapse(self):
        m = morphism_from_functor(fixtures.collapse(fixtures.surf()))
        assert restrict_morphism(m, identity_functor(m.target)).bottom == m

    def test_grafting_restricted_to_one_corolla(self):
        m = morphism_from_functor(fixtures.grafting())
        corolla = full_subgraph_closure(m.target, ["c1"])
        square = restrict_morphism(m, inclusion_dependency(m.target, corolla))
        assert square.bottom.source.nodes == ("c1", "p1", "p2", "x")
        assert square.bottom.middle.nodes == ("c1", "p1+p2", "x")
        assert square.bottom.target == corolla
        assert square.deps[2] == inclusion_dependency(m.target, corolla)
        assert is_merger(square.bottom.merger)

    def test_dependency_must_reach_the_target(self):
        m = morphism_from_functor(fixtures.grafting())
        with pytest.raises(BoundaryMismatch):
            restrict_morphism(m, identity_functor(fixtures.tri()))


class TestComposition:
    """Horizontal and vertical pasting"""

    def test_horizontal_with_identity_square(self):
        m = morphism_from_functor(fixtures.grafting())
        corolla = full_subgraph_closure(m.target, ["c2"])
        square = restrict_morphism(m, inclusion_dependency(m.target, corolla))
        pasted = hcompose_squares(horizontal_identity(square.deps[2]), square)
        assert ngr_equal(pasted.top, square.top)
        assert ngr_equal(pasted.bottom, square.bottom)
        assert pasted.deps[0] == square.deps[0]
        assert pasted.deps[2] == square.deps[2]

    def test_vertical_with_identity_square(self):
        m = morphism_from_functor(fixtures.grafting())
        corolla = full_subgraph_closure(m.target, ["c1"])
        square = restrict_morphism(m, inclusion_dependency(m.target, corolla))
        assert vcompose_squares(square, identity_square(m)) == square

    def test_collapse_chain(self):
        partial, first = contract_flags(fixtures.tri(), ["pc"])
        _, second = contract_flags(partial, ["cs+ps"])
        m1, m2 = morphism_from_functor(first), morphism_from_functor(second)
        pasted = hcompose_squares(identity_square(m2), identity_square(m1))
        assert ngr_equal(pasted.top, morphism_from_functor(compose_functors(second, first)))

    def test_vertical_restriction_of_a_restriction(self):
        m = morphism_from_functor(fixtures.grafting())
        corolla = full_subgraph_closure(m.target, ["c1"])
        upper = restrict_morphism(m, inclusion_dependency(m.target, corolla))
        leg = full_subgraph_closure(corolla, ["x"])
        lower = restrict_morphism(upper.bottom, inclusion_dependency(corolla, leg))
        stacked = vcompose_squares(lower, upper)
        assert stacked.bottom == lower.bottom
        assert stacked.deps[2] == inclusion_dependency(m.target, leg)

    def test_horizontal_boundary_mismatch(self):
        m = morphism_from_functor(fixtures.grafting())
        square = identity_square(m)
        with pytest.raises(BoundaryMismatch):
            hcompose_squares(square, square)

    def test_vertical_boundary_mismatch(self):
        m = morphism_from_functor(fixtures.grafting())
        other = identity_square(morphism_from_functor(fixtures.edge_contraction()))
        with pytest.raises(BoundaryMismatch):
            vcompose_squares(other, identity_square(m))
