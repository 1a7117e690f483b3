"""
Test cases for the seeded random generator
"""

import os
import sys
import pytest

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services import fixtures
from services.errors import GenerationExhausted, UsageError
from services.functors import is_admissible, is_contraction, is_epi, is_merger
from services.gluing import glue
from services.graph_core import IdentityAt, grading, validate_graph
from services.ngr_category import is_canonical
from services.random_generator import KINDS, RandomGenerator, RandomSpec, gen_random


class TestRandomSpec:
    """Settings validation"""

    def test_defaults(self):
        spec = RandomSpec()
        assert spec.to_dict() == {"seed": 0, "max_nodes": 6, "max_flags": 12, "max_grade": 3, "kind": "graph"}

    def test_unknown_kind(self):
        with pytest.raises(UsageError):
            RandomSpec(kind="hypergraph")

    def test_bounds_must_be_positive(self):
        with pytest.raises(UsageError) as info:
            RandomSpec(max_nodes=0, max_grade=-1)
        assert info.value.ids == ["max_grade", "max_nodes"]

    def test_from_dict(self):
        spec = RandomSpec.from_dict({"seed": "5", "kind": "morphism", "verbose": True})
        assert spec == RandomSpec(seed=5, kind="morphism")

    def test_from_dict_bad_number(self):
        with pytest.raises(UsageError):
            RandomSpec.from_dict({"seed": "five"})


class TestGraphs:
    """Random graphs"""

    def test_single_node(self):
        graph = RandomGenerator(RandomSpec(seed=1, max_nodes=1)).graph()
        assert graph.nodes == ("n0",)
        assert graph.flags == {}

    def test_same_seed_same_graph(self):
        spec = RandomSpec(seed=42, max_nodes=8, max_flags=15)
        assert RandomGenerator(spec).graph() == RandomGenerator(spec).graph()

    @pytest.mark.parametrize("seed", range(30))
    def test_within_bounds(self, seed):
        spec = RandomSpec(seed=seed, max_nodes=7, max_flags=10, max_grade=2)
        graph = RandomGenerator(spec).graph()
        assert validate_graph(graph.to_dict()) == graph
        assert 1 <= len(graph.nodes) <= 7
        assert len(graph.flags) <= 10
        assert max(grading(graph).values()) <= 2


class TestFunctors:
    """Random functors have the advertised kind"""

    @pytest.mark.parametrize("seed", range(1, 101))
    def test_contractions(self, seed):
        assert is_contraction(RandomGenerator(RandomSpec(seed=seed, kind="contraction")).generate())

    @pytest.mark.parametrize("seed", range(40))
    def test_mergers(self, seed):
        assert is_merger(RandomGenerator(RandomSpec(seed=seed)).merger())

    @pytest.mark.parametrize("seed", range(40))
    def test_admissible_epis(self, seed):
        functor = RandomGenerator(RandomSpec(seed=seed)).admissible_epi()
        assert is_admissible(functor) and is_epi(functor)

    def test_mergers_identify_nodes_of_different_grades(self):
        pair = fixtures.path_pair()
        levels = grading(pair)
        mixed = 0
        for seed in range(100):
            merger = RandomGenerator(RandomSpec(seed=seed)).merger_on(pair)
            assert is_merger(merger)
            blocks = {}
            for node, image in merger.node_map.items():
                blocks.setdefault(image, set()).add(levels[node])
            mixed += any(len(grades) > 1 for grades in blocks.values())
        assert mixed > 0

    def test_contractions_reach_several_codomains(self):
        # n has irreducible flags into a and b, beside the composite n -> a -> b
        graph = validate_graph({
            "nodes": ["n", "a", "b"],
            "flags": [{"id": "x", "dom": "n", "cod": "a"}, {"id": "y", "dom": "a", "cod": "b"},
                      {"id": "z", "dom": "n", "cod": "b"}, {"id": "w", "dom": "n", "cod": "b"}],
            "comp": [["x", "y", "w"]],
        })
        spread = 0
        for seed in range(30):
            contraction = RandomGenerator(RandomSpec(seed=seed)).contraction_on(graph)
            assert is_contraction(contraction)
            spread += isinstance(contraction.flag_map["x"], IdentityAt) and \
                isinstance(contraction.flag_map["z"], IdentityAt)
        assert spread > 0

    @pytest.mark.parametrize("seed", range(20))
    def test_morphisms_are_canonical(self, seed):
        assert is_canonical(RandomGenerator(RandomSpec(seed=seed)).morphism())

    def test_exhausted_budget(self):
        generator = RandomGenerator(RandomSpec(seed=3, kind="merger"), retry_budget=0)
        with pytest.raises(GenerationExhausted) as info:
            generator.generate()
        assert info.value.ids == ["seed=3"]

    def test_budget_from_environment(self, monkeypatch):
        monkeypatch.setenv("NGR_RETRY_BUDGET", "7")
        assert RandomGenerator(RandomSpec()).retry_budget == 7


class TestComposites:
    """Chains, squares and diagrams"""

    def test_chain_is_composable(self):
        chain = RandomGenerator(RandomSpec(seed=9)).morphism_chain(3)
        assert len(chain) == 3
        assert chain[0].target == chain[1].source
        assert chain[1].target == chain[2].source

    @pytest.mark.parametrize("seed", range(10))
    def test_squares_have_dependency_legs(self, seed):
        square = RandomGenerator(RandomSpec(seed=seed)).square()
        assert square.deps[2].target == square.top.target

    @pytest.mark.parametrize("seed", range(20))
    def test_diagrams_glue(self, seed):
        colimit, legs = glue(RandomGenerator(RandomSpec(seed=seed)).diagram())
        assert validate_graph(colimit.to_dict()) == colimit
        assert all(leg.target == colimit for leg in legs.values())

    @pytest.mark.parametrize("kind", KINDS)
    def test_every_kind_is_deterministic(self, kind):
        spec = RandomSpec(seed=17, kind=kind)
        assert gen_random(spec) == gen_random(spec)
