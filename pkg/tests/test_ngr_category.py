"""
Test cases for decomposition, composition and equality in NGr
"""

import os
import sys
import pytest

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services import fixtures
from services.errors import NotAdmissible, NotEpi, NotMerger, SourceTargetMismatch
from services.functors import (
    GraphFunctor,
    compose_functors,
    contract_flags,
    contracted_flags,
    identity_functor,
    inclusion,
    is_contraction,
    is_isomorphism,
    is_merger,
)
from services.graph_core import rename, subgraph, validate_graph
from services.ngr_category import (
    NGrMorphism,
    decompose,
    is_canonical,
    make_morphism,
    morphism_from_functor,
    ngr_compose,
    ngr_equal,
    ngr_identity,
)


def leaf_edge_and_point():
    """A leaf l on v next to an isolated node w"""
    return validate_graph({"nodes": ["l", "v", "w"], "flags": [{"id": "lv", "dom": "l", "cod": "v"}]})


def non_canonical_pair() -> NGrMorphism:
    """Collapses everything, but merges l with w instead of v with w"""
    source = leaf_edge_and_point()
    middle = validate_graph({"nodes": ["l+w", "v"], "flags": [{"id": "lv", "dom": "l+w", "cod": "v"}]})
    merger = fixtures.functor(source, middle, {"l": "l+w", "w": "l+w", "v": "v"}, {"lv": "lv"})
    contraction = fixtures.collapse(middle)
    return NGrMorphism(source, middle, contraction.target, merger, contraction)


class TestDecompose:
    """Canonical decomposition of admissible epi-functors"""

    def test_merger_decomposes_with_trivial_contraction(self):
        grafting = fixtures.grafting()
        merger, contraction = decompose(grafting)
        assert is_merger(merger)
        assert is_isomorphism(contraction)
        assert compose_functors(contraction, merger) == grafting
        assert merger.node_map["p1"] == merger.node_map["p2"] == "p1+p2"

    def test_contraction_decomposes_with_identity_merger(self):
        collapse = fixtures.collapse(fixtures.tri())
        merger, contraction = decompose(collapse)
        assert merger == identity_functor(fixtures.tri())
        assert contraction == collapse

    def test_edge_contraction(self):
        merger, contraction = decompose(fixtures.edge_contraction())
        assert merger.node_map["c1"] == merger.node_map["c2"] == "c1+c2"
        assert merger.node_map["p"] == "p"
        assert contracted_flags(contraction) == {"pc1", "pc2"}
        assert is_merger(merger) and is_contraction(contraction)
        assert compose_functors(contraction, merger) == fixtures.edge_contraction()

    def test_not_admissible(self):
        tri = fixtures.tri()
        target = validate_graph({
            "nodes": ["p", "c", "m", "s"],
            "flags": [{"id": "pc", "dom": "p", "cod": "c"}, {"id": "cm", "dom": "c", "cod": "m"},
                      {"id": "ms", "dom": "m", "cod": "s"}, {"id": "cs", "dom": "c", "cod": "s"},
                      {"id": "pm", "dom": "p", "cod": "m"}, {"id": "ps", "dom": "p", "cod": "s"}],
            "comp": [["pc", "cm", "pm"], ["cm", "ms", "cs"], ["pc", "cs", "ps"], ["pm", "ms", "ps"]],
        })
        functor = fixtures.functor(tri, target, {n: n for n in tri.nodes}, {f: f for f in tri.flags})
        with pytest.raises(NotAdmissible):
            decompose(functor)

    def test_not_epi(self):
        tri = fixtures.tri()
        with pytest.raises(NotEpi):
            decompose(inclusion(tri, subgraph(tri, ["p"])))


class TestMakeMorphism:
    """Canonical pairs"""

    def test_identity_pair(self):
        tri = fixtures.tri()
        identity = identity_functor(tri)
        assert make_morphism(identity, identity) == ngr_identity(tri)

    def test_rejects_non_merger(self):
        collapse = fixtures.collapse(fixtures.tri())
        with pytest.raises(NotMerger):
            make_morphism(collapse, identity_functor(collapse.target))

    def test_rejects_mismatched_middle(self):
        with pytest.raises(SourceTargetMismatch):
            make_morphism(identity_functor(fixtures.tri()), identity_functor(fixtures.point()))

    def test_renamed_middle_has_the_same_canonical_form(self):
        m = morphism_from_functor(fixtures.edge_contraction())
        node_names = {n: f"q_{n}" for n in m.middle.nodes}
        flag_names = {f: f"g_{f}" for f in m.middle.flags}
        middle = rename(m.middle, node_names, flag_names)
        merger = GraphFunctor(m.source, middle,
                              {n: node_names[v] for n, v in m.merger.node_map.items()},
                              {f: flag_names[v] for f, v in m.merger.flag_map.items()})
        contraction = GraphFunctor(middle, m.target,
                                   {node_names[n]: v for n, v in m.contraction.node_map.items()},
                                   {flag_names[f]: v for f, v in m.contraction.flag_map.items()})
        shifted = NGrMorphism(m.source, middle, m.target, merger, contraction)
        assert ngr_equal(shifted, m)
        assert make_morphism(merger, contraction) == m

    def test_non_canonical_pair(self):
        raw = non_canonical_pair()
        assert is_merger(raw.merger) and is_contraction(raw.contraction)
        assert not is_canonical(raw)
        canonical = make_morphism(raw.merger, raw.contraction)
        assert canonical.merger.node_map["w"] == canonical.merger.node_map["v"] == "v+w"
        assert is_canonical(canonical)


class TestComposition:
    """Composition, identities and equality"""

    def test_unit_laws(self):
        m = morphism_from_functor(fixtures.edge_contraction())
        assert ngr_equal(ngr_compose(m, ngr_identity(m.source)), m)
        assert ngr_equal(ngr_compose(ngr_identity(m.target), m), m)

    def test_identities(self):
        for graph in (fixtures.point(), fixtures.tri(), fixtures.surf()):
            identity = ngr_identity(graph)
            assert identity.merger == identity.contraction == identity_functor(graph)

    def test_contractions_compose_to_a_contraction(self):
        tri = fixtures.tri()
        partial, first = contract_flags(tri, ["pc"])
        _, second = contract_flags(partial, ["cs+ps"])
        composite = ngr_compose(morphism_from_functor(second), morphism_from_functor(first))
        assert is_isomorphism(composite.merger)
        assert ngr_equal(composite, morphism_from_functor(compose_functors(second, first)))

    def test_grafting_then_edge_contraction(self):
        grafting = morphism_from_functor(fixtures.grafting())
        contraction = morphism_from_functor(fixtures.edge_contraction())
        direct = morphism_from_functor(fixtures.graft_and_contract())
        assert ngr_equal(ngr_compose(contraction, grafting), direct)

    def test_not_composable(self):
        with pytest.raises(SourceTargetMismatch):
            ngr_compose(ngr_identity(fixtures.tri()), ngr_identity(fixtures.point()))

    def test_equal_needs_same_boundaries(self):
        with pytest.raises(SourceTargetMismatch):
            ngr_equal(ngr_identity(fixtures.tri()), ngr_identity(fixtures.surf()))

    def test_different_middles_are_not_equal(self):
        raw = non_canonical_pair()
        assert not ngr_equal(raw, morphism_from_functor(raw.functor()))
        assert ngr_equal(raw, raw)
