"""
Test cases for document loading, dumping and DOT export
"""

import os
import sys
import logging

import pytest
from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services import fixtures
from services.double_category import inclusion_dependency, restrict_morphism
from services.errors import DanglingReference, MalformedDocument, NotMerger
from services.functors import identity_functor
from services.graph_core import full_subgraph_closure, validate_graph
from services.gluing import morphism_corolla_cover
from services.ngr_category import morphism_from_functor
from services.random_generator import KINDS, RandomGenerator, RandomSpec
from services.serialization import (
    document_kind,
    dump_diagram,
    dump_graph,
    dumps,
    load_diagram,
    load_functor,
    load_graph,
    load_morphism,
    load_pair,
    load_square,
    loads,
    to_dot,
)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)

TRI_DOT = """digraph "nested" {
  rankdir=BT;
  "c" [label="c (1)"];
  "p" [label="p (0)"];
  "s" [label="s (2)"];
  { rank=same; "p"; }
  { rank=same; "c"; }
  { rank=same; "s"; }
  "c" -> "s" [label="cs"];
  "p" -> "c" [label="pc"];
}
"""


def non_canonical_document():
    """Merger identifying a leaf with an unrelated node before a full collapse"""
    source = validate_graph({"nodes": ["l", "v", "w"], "flags": [{"id": "lv", "dom": "l", "cod": "v"}]})
    middle = validate_graph({"nodes": ["l+w", "v"], "flags": [{"id": "lv", "dom": "l+w", "cod": "v"}]})
    merger = fixtures.functor(source, middle, {"l": "l+w", "w": "l+w", "v": "v"}, {"lv": "lv"})
    return {"merger": merger.to_dict(), "contraction": fixtures.collapse(middle).to_dict()}


class TestJson:
    """Text level"""

    def test_canonical_text_is_reproduced(self):
        text = dumps(fixtures.surf().to_dict())
        assert dumps(dump_graph(load_graph(loads(text)))) == text

    def test_invalid_json(self):
        with pytest.raises(MalformedDocument):
            loads("{\"nodes\": [")

    def test_document_kinds(self):
        m = morphism_from_functor(fixtures.grafting())
        assert document_kind(fixtures.tri().to_dict()) == "graph"
        assert document_kind(fixtures.grafting().to_dict()) == "functor"
        assert document_kind(m.to_dict()) == "morphism"
        assert document_kind(restrict_morphism(m, identity_functor(m.target)).to_dict()) == "square"
        assert document_kind(dump_diagram(morphism_corolla_cover(m))) == "morphism-diagram"

    def test_unknown_document(self):
        with pytest.raises(MalformedDocument):
            document_kind({"colour": "blue"})
        with pytest.raises(MalformedDocument):
            document_kind([1, 2])


class TestLoaders:
    """Reading each document kind"""

    def test_graph_without_nodes(self):
        with pytest.raises(MalformedDocument):
            load_graph({"flags": []})

    def test_functor_with_named_graphs(self):
        grafting = fixtures.grafting()
        doc = grafting.to_dict("two", "grafted")
        table = {"two": fixtures.two_corollas(), "grafted": fixtures.grafted()}
        assert load_functor(doc, table) == grafting

    def test_functor_with_unknown_graph_name(self):
        doc = fixtures.grafting().to_dict("two", "grafted")
        with pytest.raises(DanglingReference):
            load_functor(doc, {"two": fixtures.two_corollas()})

    def test_functor_missing_keys(self):
        with pytest.raises(MalformedDocument):
            load_functor({"source": fixtures.tri().to_dict()})

    def test_canonical_morphism(self):
        m = morphism_from_functor(fixtures.edge_contraction())
        loaded, canonical = load_morphism(m.to_dict())
        assert canonical
        assert loaded == m

    def test_non_canonical_morphism_is_renamed(self, caplog):
        with caplog.at_level(logging.WARNING, logger="services.serialization"):
            loaded, canonical = load_morphism(non_canonical_document())
        assert not canonical
        assert loaded.merger.node_map["w"] == "v+w"
        assert "not canonical" in caplog.text

    def test_pair_with_collapsing_merger(self):
        collapse = fixtures.collapse(fixtures.tri())
        doc = {"merger": collapse.to_dict(), "contraction": identity_functor(collapse.target).to_dict()}
        with pytest.raises(NotMerger):
            load_pair(doc)

    def test_square(self):
        m = morphism_from_functor(fixtures.grafting())
        square = restrict_morphism(m, inclusion_dependency(m.target, full_subgraph_closure(m.target, ["c1"])))
        doc = square.to_dict()
        assert sorted(doc["graphs"]) == ["M1", "M2", "M3", "N1", "N2", "N3"]
        assert load_square(doc) == square

    def test_square_needs_three_dependencies(self):
        m = morphism_from_functor(fixtures.grafting())
        doc = restrict_morphism(m, identity_functor(m.target)).to_dict()
        doc["deps"] = doc["deps"][:2]
        with pytest.raises(MalformedDocument):
            load_square(doc)

    def test_morphism_diagram(self):
        cover = morphism_corolla_cover(morphism_from_functor(fixtures.grafting()))
        assert load_diagram(dump_diagram(cover)) == cover

    def test_diagram_arrow_without_functor(self):
        doc = {"graphs": {"t": fixtures.tri().to_dict()}, "arrows": [{"from": "t", "to": "t"}]}
        with pytest.raises(MalformedDocument):
            load_diagram(doc)


class TestRandomRoundTrip:
    """Generated values survive dump and load"""

    @settings(max_examples=10, deadline=None)
    @given(seeds, st.sampled_from(KINDS))
    def test_round_trip(self, seed, kind):
        value = RandomGenerator(RandomSpec(seed=seed, kind=kind)).generate()
        if kind == "graph":
            assert load_graph(loads(dumps(dump_graph(value)))) == value
        elif kind == "morphism":
            loaded, canonical = load_morphism(loads(dumps(value.to_dict())))
            assert canonical and loaded == value
        elif kind == "diagram":
            assert load_diagram(loads(dumps(dump_diagram(value)))) == value
        else:
            assert load_functor(loads(dumps(value.to_dict()))) == value


class TestDot:
    """DOT export"""

    def test_tri(self):
        assert to_dot(fixtures.tri()) == TRI_DOT

    def test_only_irreducible_flags(self):
        dot = to_dot(fixtures.surf(), name="surf")
        assert dot.startswith('digraph "surf" {')
        assert '[label="ps"]' not in dot
        assert dot.count(" -> ") == 4

    def test_deterministic(self):
        graph = RandomGenerator(RandomSpec(seed=11)).graph()
        assert to_dot(graph) == to_dot(validate_graph(graph.to_dict()))
