"""
Nested graphs: finite direct categories with an explicit composition table.

Identities are implicit and never stored as flags. A morphism is either a
flag id (str) or an IdentityAt(node) value.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx
from networkx.algorithms import isomorphism

from .errors import (
    AssociativityViolation,
    CompositionIncomplete,
    CompositionMismatch,
    CycleDetected,
    DanglingReference,
    MalformedDocument,
)

logger = logging.getLogger(__name__)

NodeId = str
FlagId = str


@dataclass(frozen=True)
class Flag:
    """A non-identity morphism, decorated by dom and attached to cod"""
    id: FlagId
    dom: NodeId
    cod: NodeId

    def to_dict(self) -> Dict[str, str]:
        return {"id": self.id, "dom": self.dom, "cod": self.cod}


@dataclass(frozen=True)
class IdentityAt:
    """The implicit identity morphism of a node"""
    node: NodeId


Morphism = Union[FlagId, IdentityAt]


@dataclass(frozen=True)
class NestedGraph:
    """A validated nested graph.

    ``comp`` maps a composable pair ``(g, f)`` with ``g: A->B`` and ``f: B->C``
    to the flag ``f∘g: A->C``. Build instances with :func:`validate_graph` for
    untrusted input, or :meth:`build` for values derived from validated graphs.
    """
    nodes: Tuple[NodeId, ...]
    flags: Dict[FlagId, Flag] = field(default_factory=dict)
    comp: Dict[Tuple[FlagId, FlagId], FlagId] = field(default_factory=dict)

    @classmethod
    def build(cls, nodes: Iterable[NodeId], flags: Iterable[Flag],
              comp: Mapping[Tuple[FlagId, FlagId], FlagId]) -> "NestedGraph":
        """Assemble a graph in canonical (sorted) order without validation"""
        ordered_flags = sorted(flags, key=lambda f: f.id)
        return cls(
            nodes=tuple(sorted(set(nodes))),
            flags={f.id: f for f in ordered_flags},
            comp={key: comp[key] for key in sorted(comp)},
        )

    @cached_property
    def out_flags(self) -> Dict[NodeId, List[FlagId]]:
        """Flags decorated by each node"""
        result: Dict[NodeId, List[FlagId]] = {n: [] for n in self.nodes}
        for f in self.flags.values():
            result[f.dom].append(f.id)
        return result

    @cached_property
    def in_flags(self) -> Dict[NodeId, List[FlagId]]:
        """Flags attached to each node"""
        result: Dict[NodeId, List[FlagId]] = {n: [] for n in self.nodes}
        for f in self.flags.values():
            result[f.cod].append(f.id)
        return result

    @cached_property
    def node_set(self) -> frozenset:
        return frozenset(self.nodes)

    def dom(self, m: Morphism) -> NodeId:
        if isinstance(m, IdentityAt):
            return m.node
        return self.flags[m].dom

    def cod(self, m: Morphism) -> NodeId:
        if isinstance(m, IdentityAt):
            return m.node
        return self.flags[m].cod

    def compose(self, first: Morphism, second: Morphism) -> Morphism:
        """Composite ``second∘first`` with identities absorbed"""
        if isinstance(first, IdentityAt):
            return second
        if isinstance(second, IdentityAt):
            return first
        return self.comp[(first, second)]

    def digraph(self) -> nx.DiGraph:
        """Node digraph with one arc per (dom, cod) pair carrying flags"""
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for f in self.flags.values():
            g.add_edge(f.dom, f.cod)
        return g

    def to_dict(self) -> Dict[str, Any]:
        """Graph file document"""
        return {
            "nodes": list(self.nodes),
            "flags": [f.to_dict() for f in self.flags.values()],
            "comp": [[g, f, h] for (g, f), h in self.comp.items()],
        }

    def __repr__(self) -> str:
        return f"<NestedGraph(nodes={len(self.nodes)}, flags={len(self.flags)})>"


@dataclass(frozen=True)
class GraphIsomorphism:
    """A pair of bijections preserving dom, cod and comp"""
    node_map: Dict[NodeId, NodeId]
    flag_map: Dict[FlagId, FlagId]

    def inverse(self) -> "GraphIsomorphism":
        return GraphIsomorphism(
            node_map={v: k for k, v in self.node_map.items()},
            flag_map={v: k for k, v in self.flag_map.items()},
        )

    def then(self, other: "GraphIsomorphism") -> "GraphIsomorphism":
        """Apply self, then other"""
        return GraphIsomorphism(
            node_map={k: other.node_map[v] for k, v in self.node_map.items()},
            flag_map={k: other.flag_map[v] for k, v in self.flag_map.items()},
        )


def _find_cycle(nodes: Iterable[NodeId], flags: Iterable[Flag]) -> Optional[List[NodeId]]:
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    for f in flags:
        if f.dom == f.cod:
            return [f.dom]
        g.add_edge(f.dom, f.cod)
    try:
        return [u for u, _ in nx.find_cycle(g)]
    except nx.NetworkXNoCycle:
        return None


def check_acyclic(nodes: Iterable[NodeId], flags: Iterable[Flag]) -> None:
    """Raise CycleDetected unless the flags admit a grading"""
    flags = list(flags)
    cycle = _find_cycle(nodes, flags)
    if cycle is not None:
        offending = [f.id for f in flags if f.dom in cycle and f.cod in cycle]
        raise CycleDetected("flags form a directed cycle, no grading exists",
                            ids=list(cycle) + offending)


def validate_graph(raw: Mapping[str, Any]) -> NestedGraph:
    """Validate a graph description (graph file document) into a NestedGraph"""
    try:
        node_list = [str(n) for n in raw.get("nodes", [])]
        flag_list = [Flag(str(f["id"]), str(f["dom"]), str(f["cod"])) for f in raw.get("flags", [])]
        comp_list = [tuple(str(x) for x in entry) for entry in raw.get("comp", [])]
    except (AttributeError, KeyError, TypeError) as e:
        raise MalformedDocument(f"graph document is malformed: {e}")

    if any(len(entry) != 3 for entry in comp_list):
        raise MalformedDocument("comp entries must be [g, f, f∘g] triples")
    duplicates = {n for n in node_list if node_list.count(n) > 1}
    duplicates |= {f.id for f in flag_list if sum(1 for x in flag_list if x.id == f.id) > 1}
    if duplicates:
        raise MalformedDocument("duplicate ids", ids=duplicates)

    nodes = set(node_list)
    flags = {f.id: f for f in flag_list}

    dangling = [f.id for f in flag_list if f.dom not in nodes or f.cod not in nodes]
    dangling += [x for entry in comp_list for x in entry if x not in flags]
    if dangling:
        raise DanglingReference("reference to an unknown id", ids=set(dangling))

    check_acyclic(nodes, flag_list)

    comp: Dict[Tuple[FlagId, FlagId], FlagId] = {}
    for g, f, h in comp_list:
        if flags[g].cod != flags[f].dom:
            raise CompositionMismatch("comp entry for a non-composable pair", ids=[g, f])
        if flags[h].dom != flags[g].dom or flags[h].cod != flags[f].cod:
            raise CompositionMismatch("composite has wrong endpoints", ids=[g, f, h])
        if comp.get((g, f), h) != h:
            raise CompositionMismatch("conflicting comp entries", ids=[g, f])
        comp[(g, f)] = h

    graph = NestedGraph.build(nodes, flag_list, comp)

    for g in graph.flags.values():
        for f in graph.out_flags[g.cod]:
            if (g.id, f) not in comp:
                raise CompositionIncomplete("composable pair without comp entry", ids=[g.id, f])

    for (g, f), gf in graph.comp.items():
        for h in graph.out_flags[graph.flags[f].cod]:
            if graph.comp[(gf, h)] != graph.comp[(g, graph.comp[(f, h)])]:
                raise AssociativityViolation("composition is not associative", ids=[g, f, h])

    logger.debug(f"Validated graph with {len(graph.nodes)} nodes and {len(graph.flags)} flags")
    return graph


def grading(graph: NestedGraph) -> Dict[NodeId, int]:
    """Minimal grading by longest-path layering"""
    digraph = graph.digraph()
    levels: Dict[NodeId, int] = {}
    for node in nx.topological_sort(digraph):
        levels[node] = max((levels[p] + 1 for p in digraph.predecessors(node)), default=0)
    return {n: levels[n] for n in graph.nodes}


def irreducible_flags(graph: NestedGraph) -> Set[FlagId]:
    """Flags that are not the composite of two flags"""
    composites = set(graph.comp.values())
    return {f for f in graph.flags if f not in composites}


def vertices(graph: NestedGraph) -> Set[NodeId]:
    """Nodes that decorate no flag"""
    return {n for n in graph.nodes if not graph.out_flags[n]}


def is_corolla(graph: NestedGraph) -> bool:
    return len(vertices(graph)) == 1


def generated_flags(graph: NestedGraph, gens: Iterable[FlagId]) -> Set[FlagId]:
    """Close a set of flags under composition"""
    generated = set(gens)
    frontier = list(generated)
    while frontier:
        new = []
        for x in frontier:
            for y in list(generated):
                for pair in ((x, y), (y, x)):
                    h = graph.comp.get(pair)
                    if h is not None and h not in generated:
                        generated.add(h)
                        new.append(h)
        frontier = new
    return generated


def subgraph(graph: NestedGraph, nodes: Iterable[NodeId]) -> NestedGraph:
    """Full subcategory on the given nodes (ids preserved)"""
    keep = set(nodes)
    flags = [f for f in graph.flags.values() if f.dom in keep and f.cod in keep]
    kept = {f.id for f in flags}
    comp = {(g, f): h for (g, f), h in graph.comp.items() if g in kept and f in kept}
    return NestedGraph.build(keep, flags, comp)


def full_subgraph_closure(graph: NestedGraph, seed: Iterable[NodeId]) -> NestedGraph:
    """Smallest full subgraph containing the seed nodes"""
    closed = set(seed)
    stack = list(closed)
    while stack:
        node = stack.pop()
        for f in graph.in_flags[node]:
            dom = graph.flags[f].dom
            if dom not in closed:
                closed.add(dom)
                stack.append(dom)
    return subgraph(graph, closed)


def is_full_subgraph(graph: NestedGraph, sub: NestedGraph) -> bool:
    if not sub.node_set <= graph.node_set:
        return False
    return sub == full_subgraph_closure(graph, sub.nodes)


def is_one_dimensional(graph: NestedGraph, classic: bool = False) -> bool:
    """Grading into the ordinal 2; classic also bounds each node to two flags"""
    if any(level > 1 for level in grading(graph).values()):
        return False
    if classic:
        return all(len(out) <= 2 for out in graph.out_flags.values())
    return True


def hyper_edges(graph: NestedGraph) -> Dict[NodeId, List[FlagId]]:
    """Flags grouped by the node decorating them (edges, hyper-edges, legs)"""
    return {n: sorted(out) for n, out in graph.out_flags.items() if out}


def rename(graph: NestedGraph, node_names: Mapping[NodeId, NodeId],
           flag_names: Mapping[FlagId, FlagId]) -> NestedGraph:
    """Copy of the graph with ids replaced (missing keys keep their id)"""
    n = lambda x: node_names.get(x, x)
    f = lambda x: flag_names.get(x, x)
    flags = [Flag(f(x.id), n(x.dom), n(x.cod)) for x in graph.flags.values()]
    comp = {(f(g), f(h)): f(gh) for (g, h), gh in graph.comp.items()}
    return NestedGraph.build([n(x) for x in graph.nodes], flags, comp)


def _encode(graph: NestedGraph) -> nx.DiGraph:
    # nodes, flags and comp entries all become vertices so one matcher
    # run preserves dom, cod and comp together
    g = nx.DiGraph()
    for n in graph.nodes:
        g.add_node(("n", n), kind="node")
    for f in graph.flags.values():
        g.add_node(("f", f.id), kind="flag")
        g.add_edge(("n", f.dom), ("f", f.id), role="dom")
        g.add_edge(("f", f.id), ("n", f.cod), role="cod")
    for (x, y), xy in graph.comp.items():
        entry = ("c", x, y)
        g.add_node(entry, kind="comp")
        g.add_edge(entry, ("f", x), role="first")
        g.add_edge(entry, ("f", y), role="second")
        g.add_edge(entry, ("f", xy), role="result")
    return g


def graph_iso(first: NestedGraph, second: NestedGraph) -> Optional[GraphIsomorphism]:
    """Find an isomorphism between two graphs, or None"""
    if (len(first.nodes), len(first.flags), len(first.comp)) != \
            (len(second.nodes), len(second.flags), len(second.comp)):
        return None
    if sorted(grading(first).values()) != sorted(grading(second).values()):
        return None

    matcher = isomorphism.DiGraphMatcher(
        _encode(first), _encode(second),
        node_match=isomorphism.categorical_node_match("kind", None),
        edge_match=isomorphism.categorical_edge_match("role", None),
    )
    for mapping in matcher.isomorphisms_iter():
        return GraphIsomorphism(
            node_map={k[1]: v[1] for k, v in mapping.items() if k[0] == "n"},
            flag_map={k[1]: v[1] for k, v in mapping.items() if k[0] == "f"},
        )
    return None
