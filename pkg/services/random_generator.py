"""
Seeded random generation of graphs, functors, morphisms and diagrams.

Graphs are free categories on random layered DAGs, with random identifications
of parallel composites kept only when the result still validates. Admissible
epi-functors are built as a random contraction after a random merger.
"""

import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .double_category import MorphismSquare, inclusion_dependency, restrict_morphism
from .errors import GenerationExhausted, NestedGraphError, UsageError
from .functors import (
    GraphFunctor,
    NodePartition,
    compose_functors,
    contract_flags,
    free_quotient,
    is_contraction,
    is_merger,
    quotient_by_partition,
)
from .gluing import (
    DiagramArrow,
    GlueDiagram,
    MorphismGlueDiagram,
    make_diagram,
    restrict_along,
)
from .graph_core import (
    NestedGraph,
    full_subgraph_closure,
    irreducible_flags,
    is_one_dimensional,
    subgraph,
    validate_graph,
)
from .ngr_category import NGrMorphism, morphism_from_functor

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

logger = logging.getLogger(__name__)

KINDS = ("graph", "merger", "contraction", "admissible-epi", "morphism", "diagram")
DEFAULT_RETRY_BUDGET = 200

T = TypeVar("T")


@dataclass(frozen=True)
class RandomSpec:
    """What to generate and within which bounds"""
    seed: int = 0
    max_nodes: int = 6
    max_flags: int = 12
    max_grade: int = 3
    kind: str = "graph"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown kind {self.kind!r}, expected one of {', '.join(KINDS)}")
        bounds = {"max_nodes": self.max_nodes, "max_flags": self.max_flags, "max_grade": self.max_grade}
        bad = [name for name, value in bounds.items() if value < 1]
        if bad:
            raise UsageError("bounds must be positive", ids=bad)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "RandomSpec":
        try:
            return cls(
                seed=int(raw.get("seed", 0)),
                max_nodes=int(raw.get("max_nodes", cls.max_nodes)),
                max_flags=int(raw.get("max_flags", cls.max_flags)),
                max_grade=int(raw.get("max_grade", cls.max_grade)),
                kind=str(raw.get("kind", cls.kind)),
            )
        except (TypeError, ValueError) as e:
            raise UsageError(f"invalid generator settings: {e}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class RandomGenerator:
    """Deterministic per seed: every value is drawn from one numpy Generator"""

    def __init__(self, spec: RandomSpec, retry_budget: Optional[int] = None):
        self.spec = spec
        self.rng = np.random.default_rng(spec.seed)
        if retry_budget is None:
            retry_budget = int(os.getenv("NGR_RETRY_BUDGET", str(DEFAULT_RETRY_BUDGET)))
        self.retry_budget = retry_budget

    def _retry(self, build: Callable[[], Optional[T]], what: str) -> T:
        for attempt in range(self.retry_budget):
            try:
                result = build()
            except NestedGraphError as e:
                logger.debug(f"Rejected random {what} (attempt {attempt + 1}): {e}")
                continue
            if result is not None:
                return result
        raise GenerationExhausted(f"no valid {what} within {self.retry_budget} attempts",
                                  ids=[f"seed={self.spec.seed}"])

    def _pick(self, items: Sequence[T]) -> T:
        return items[int(self.rng.integers(0, len(items)))]

    def _subset(self, items: Sequence[T], low: int = 0) -> List[T]:
        size = int(self.rng.integers(low, len(items) + 1))
        order = self.rng.permutation(len(items))[:size]
        return [items[int(i)] for i in sorted(order)]

    # Graphs

    @staticmethod
    def _chain_count(nodes: Sequence[str], letters: Mapping[str, Tuple[str, str]],
                     levels: Mapping[str, int]) -> int:
        from_node = {n: 0 for n in nodes}
        for node in sorted(nodes, key=lambda n: -levels[n]):
            from_node[node] = sum(1 + from_node[cod] for dom, cod in letters.values() if dom == node)
        return sum(from_node.values())

    def graph(self) -> NestedGraph:
        spec = self.spec
        count = int(self.rng.integers(1, spec.max_nodes + 1))
        nodes = [f"n{i}" for i in range(count)]
        levels = dict(zip(nodes, sorted(int(x) for x in self.rng.integers(0, spec.max_grade + 1, size=count))))
        arcs = [(u, v) for u in nodes for v in nodes if levels[u] < levels[v]]

        letters: Dict[str, Tuple[str, str]] = {}
        if arcs:
            for _ in range(int(self.rng.integers(0, spec.max_flags + 1))):
                name = f"f{len(letters)}"
                letters[name] = self._pick(arcs)
                if self._chain_count(nodes, letters, levels) > spec.max_flags:
                    del letters[name]

        table: Dict[Tuple[str, str], str] = {}
        graph = free_quotient(nodes, letters, table)
        candidates = [
            (x, y, z)
            for x, (x_dom, x_cod) in letters.items()
            for y, (y_dom, y_cod) in letters.items() if y_dom == x_cod
            for z, (z_dom, z_cod) in letters.items() if (z_dom, z_cod) == (x_dom, y_cod)
        ]
        for index in self.rng.permutation(len(candidates)):
            if self.rng.random() < 0.5:
                continue
            x, y, z = candidates[int(index)]
            if (x, y) in table:
                continue
            trial = dict(table)
            trial[(x, y)] = z
            try:
                identified = free_quotient(nodes, letters, trial)
                validate_graph(identified.to_dict())
            except NestedGraphError:
                continue
            table, graph = trial, identified

        logger.debug(f"Generated {graph!r} with {len(table)} identifications (seed {self.spec.seed})")
        return validate_graph(graph.to_dict())

    # Functors on a given graph

    def merger_on(self, graph: NestedGraph) -> GraphFunctor:
        """Random node identifications of any grades, kept when they give a merger"""

        def build() -> Optional[GraphFunctor]:
            blocks: List[List[str]] = [[n] for n in graph.nodes]
            for _ in range(int(self.rng.integers(0, len(graph.nodes)))):
                if len(blocks) < 2:
                    break
                first, second = self.rng.permutation(len(blocks))[:2]
                keep, drop = sorted((int(first), int(second)))
                blocks[keep] += blocks.pop(drop)
            _, projection = quotient_by_partition(graph, NodePartition.of(graph, blocks))
            return projection if is_merger(projection) else None

        return self._retry(build, "merger")

    def contraction_on(self, graph: NestedGraph) -> GraphFunctor:
        """Contract every irreducible flag out of random nodes, whatever their codomains"""
        irreducible = irreducible_flags(graph)
        candidates = [n for n in graph.nodes if any(f in irreducible for f in graph.out_flags[n])]

        def build() -> Optional[GraphFunctor]:
            chosen = self._subset(candidates)
            flags = [f for node in chosen for f in graph.out_flags[node] if f in irreducible]
            _, contraction = contract_flags(graph, flags)
            return contraction if is_contraction(contraction) else None

        return self._retry(build, "contraction")

    def admissible_epi_on(self, graph: NestedGraph) -> GraphFunctor:
        merger = self.merger_on(graph)
        return compose_functors(self.contraction_on(merger.target), merger)

    def morphism_on(self, graph: NestedGraph) -> NGrMorphism:
        return morphism_from_functor(self.admissible_epi_on(graph))

    def dependency_into(self, graph: NestedGraph) -> GraphFunctor:
        """Inclusion of the full subgraph generated by random nodes"""
        seed = self._subset(list(graph.nodes), low=1)
        return inclusion_dependency(graph, full_subgraph_closure(graph, seed))

    # Values of each kind

    def merger(self) -> GraphFunctor:
        return self.merger_on(self.graph())

    def contraction(self) -> GraphFunctor:
        return self.contraction_on(self.graph())

    def admissible_epi(self) -> GraphFunctor:
        return self.admissible_epi_on(self.graph())

    def morphism(self) -> NGrMorphism:
        return self.morphism_on(self.graph())

    def _cover(self, graph: NestedGraph) -> GlueDiagram:
        """One or two full subgraphs of a graph, with their overlap"""
        pieces = {}
        for i in range(int(self.rng.integers(1, 3))):
            seed = self._subset(list(graph.nodes), low=1)
            pieces[f"m{i}"] = full_subgraph_closure(graph, seed)
        graphs = dict(pieces)
        arrows = []
        if len(pieces) == 2:
            common = pieces["m0"].node_set & pieces["m1"].node_set
            if common:
                graphs["m0&m1"] = subgraph(graph, common)
                for name in ("m0", "m1"):
                    arrows.append(DiagramArrow("m0&m1", name, inclusion_dependency(pieces[name], graphs["m0&m1"])))
        return make_diagram(graphs, arrows)

    def _span(self) -> GlueDiagram:
        """Two independent graphs sharing one undecorated-into node"""
        point = NestedGraph.build(["pt"], [], {})
        graphs = {"left": self.graph(), "right": self.graph(), "shared": point}
        arrows = []
        for name in ("left", "right"):
            graph = graphs[name]
            leaves = [n for n in graph.nodes if not graph.in_flags[n]]
            arrows.append(DiagramArrow("shared", name, GraphFunctor(point, graph, {"pt": self._pick(leaves)}, {})))
        return make_diagram(graphs, arrows)

    def diagram(self) -> GlueDiagram:
        if self.rng.random() < 0.5:
            return self._cover(self.graph())
        return self._span()

    # Composite shapes used by the law suites

    def composable_mergers(self) -> Tuple[GraphFunctor, GraphFunctor]:
        first = self.merger()
        return first, self.merger_on(first.target)

    def composable_contractions(self) -> Tuple[GraphFunctor, GraphFunctor]:
        first = self.contraction()
        return first, self.contraction_on(first.target)

    def composable_admissible(self) -> Tuple[GraphFunctor, GraphFunctor]:
        first = self.admissible_epi()
        return first, self.admissible_epi_on(first.target)

    def morphism_chain(self, length: int) -> List[NGrMorphism]:
        chain = [self.morphism()]
        while len(chain) < length:
            chain.append(self.morphism_on(chain[-1].target))
        return chain

    def classic_chain(self, length: int) -> List[NGrMorphism]:
        """Composable morphisms between classic 1-dimensional graphs"""

        def build() -> Optional[List[NGrMorphism]]:
            chain = self.morphism_chain(length)
            objects = [chain[0].source] + [m.target for m in chain]
            return chain if all(is_one_dimensional(g, classic=True) for g in objects) else None

        return self._retry(build, "classic chain")

    def square(self) -> MorphismSquare:
        morphism = self.morphism()
        return restrict_morphism(morphism, self.dependency_into(morphism.target))

    def morphism_diagram(self) -> MorphismGlueDiagram:
        morphism = self.morphism()
        return restrict_along(morphism, self._cover(morphism.target))

    def generate(self) -> Any:
        """Value of the requested kind"""
        builders = {
            "graph": self.graph,
            "merger": self.merger,
            "contraction": self.contraction,
            "admissible-epi": self.admissible_epi,
            "morphism": self.morphism,
            "diagram": self.diagram,
        }
        return builders[self.spec.kind]()


def gen_random(spec: RandomSpec) -> Any:
    return RandomGenerator(spec).generate()
