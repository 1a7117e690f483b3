"""
Gluing: finite colimits of nested graphs along dependencies, and the
induced gluing of morphisms.

Colimit ids keep the member's own id whenever that id names a single class
of the colimit; otherwise ids are namespaced as ``<member>/<id>``.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from networkx.utils import UnionFind

from .double_category import MorphismSquare, inclusion_dependency, is_dependency, restrict_morphism
from .errors import (
    BoundaryMismatch,
    CompositionConflict,
    DanglingReference,
    InducedMapIllDefined,
    NestedGraphError,
)
from .functors import GraphFunctor, assign_names, block_name, compose_functors, factor_through, free_quotient
from .graph_core import NestedGraph, NodeId, full_subgraph_closure, subgraph, validate_graph, vertices
from .ngr_category import NGrMorphism, make_morphism, ngr_identity

logger = logging.getLogger(__name__)

NAMESPACE_SEPARATOR = "/"


@dataclass(frozen=True)
class DiagramArrow:
    source: str
    target: str
    functor: GraphFunctor


@dataclass(frozen=True)
class GlueDiagram:
    """Named member graphs with dependency arrows between them"""
    graphs: Dict[str, NestedGraph]
    arrows: Tuple[DiagramArrow, ...] = ()


@dataclass(frozen=True)
class SquareArrow:
    source: str
    target: str
    square: MorphismSquare


@dataclass(frozen=True)
class MorphismGlueDiagram:
    """Named morphisms with squares from the bottom member into the top member"""
    morphisms: Dict[str, NGrMorphism]
    arrows: Tuple[SquareArrow, ...] = ()


def make_diagram(graphs: Mapping[str, NestedGraph], arrows: Iterable[DiagramArrow]) -> GlueDiagram:
    """Validate arrow references and dependency-ness"""
    arrows = tuple(arrows)
    for arrow in arrows:
        if arrow.source not in graphs or arrow.target not in graphs:
            raise DanglingReference("arrow names an unknown member", ids=[arrow.source, arrow.target])
        if arrow.functor.source != graphs[arrow.source] or arrow.functor.target != graphs[arrow.target]:
            raise BoundaryMismatch("arrow functor does not join its members", ids=[arrow.source, arrow.target])
        if not is_dependency(arrow.functor):
            raise BoundaryMismatch("arrow is not a dependency", ids=[arrow.source, arrow.target])
    return GlueDiagram(dict(graphs), arrows)


def make_morphism_diagram(morphisms: Mapping[str, NGrMorphism],
                          arrows: Iterable[SquareArrow]) -> MorphismGlueDiagram:
    arrows = tuple(arrows)
    for arrow in arrows:
        if arrow.source not in morphisms or arrow.target not in morphisms:
            raise DanglingReference("arrow names an unknown member", ids=[arrow.source, arrow.target])
        if arrow.square.bottom != morphisms[arrow.source] or arrow.square.top != morphisms[arrow.target]:
            raise BoundaryMismatch("square does not join its members", ids=[arrow.source, arrow.target])
    return MorphismGlueDiagram(dict(morphisms), arrows)


def _qualify(member: str, item: str) -> str:
    return f"{member}{NAMESPACE_SEPARATOR}{item}"


def _class_names(classes: Sequence[set], original: Mapping[str, str], what: str) -> Dict[str, str]:
    candidates = [block_name({original[q] for q in members}) for members in classes]
    names = [candidate if candidates.count(candidate) == 1 else block_name(members)
             for members, candidate in zip(classes, candidates)]
    return assign_names(classes, names, what)


def glue(diagram: GlueDiagram) -> Tuple[NestedGraph, Dict[str, GraphFunctor]]:
    """Colimit of the diagram with its cocone legs"""
    members = sorted(diagram.graphs)
    original_node, original_flag = {}, {}
    for name in members:
        graph = diagram.graphs[name]
        original_node.update({_qualify(name, n): n for n in graph.nodes})
        original_flag.update({_qualify(name, f): f for f in graph.flags})

    node_uf, flag_uf = UnionFind(original_node), UnionFind(original_flag)
    for arrow in diagram.arrows:
        delta = arrow.functor
        for n, m in delta.node_map.items():
            node_uf.union(_qualify(arrow.source, n), _qualify(arrow.target, m))
        for f, g in delta.flag_map.items():
            flag_uf.union(_qualify(arrow.source, f), _qualify(arrow.target, g))

    node_name = _class_names(sorted(node_uf.to_sets(), key=sorted), original_node, "node")
    flag_name = _class_names(sorted(flag_uf.to_sets(), key=sorted), original_flag, "flag")

    letters, table = {}, {}
    for name in members:
        graph = diagram.graphs[name]
        for f in graph.flags.values():
            letters[flag_name[_qualify(name, f.id)]] = (node_name[_qualify(name, f.dom)],
                                                        node_name[_qualify(name, f.cod)])
        for (g, f), h in graph.comp.items():
            key = (flag_name[_qualify(name, g)], flag_name[_qualify(name, f)])
            value = flag_name[_qualify(name, h)]
            if table.setdefault(key, value) != value:
                raise CompositionConflict("identified flags have different composites",
                                          ids=[key[0], key[1], value, table[key]])

    colimit = free_quotient(node_name.values(), letters, table)
    try:
        validate_graph(colimit.to_dict())
    except NestedGraphError as e:
        raise CompositionConflict(f"glued composition is inconsistent: {e.message}", ids=e.ids)

    legs = {}
    for name in members:
        graph = diagram.graphs[name]
        legs[name] = GraphFunctor(
            graph, colimit,
            {n: node_name[_qualify(name, n)] for n in graph.nodes},
            {f: flag_name[_qualify(name, f)] for f in graph.flags},
        )
    logger.debug(f"Glued {len(members)} graphs along {len(diagram.arrows)} arrows into {colimit!r}")
    return colimit, legs


def disjoint_union(graphs: Sequence[NestedGraph]) -> Tuple[NestedGraph, List[GraphFunctor]]:
    """Coproduct with its injections (a diagram without arrows)"""
    names = [str(i) for i in range(len(graphs))]
    union, legs = glue(GlueDiagram(dict(zip(names, graphs))))
    return union, [legs[name] for name in names]


def push_grading(diagram: GlueDiagram, gradings: Mapping[str, Mapping[NodeId, int]]) -> Dict[NodeId, int]:
    """Grading of the colimit induced by compatible member gradings"""
    _, legs = glue(diagram)
    result: Dict[NodeId, int] = {}
    for name, leg in legs.items():
        for node, level in gradings[name].items():
            if result.setdefault(leg.node_map[node], level) != level:
                raise InducedMapIllDefined("member gradings disagree on a glued node",
                                           ids=[leg.node_map[node]])
    return result


def glue_morphisms(diagram: MorphismGlueDiagram) -> NGrMorphism:
    """Glue sources, middles and targets, then induce merger and contraction"""
    if not diagram.morphisms:
        return ngr_identity(NestedGraph.build([], [], {}))

    names = sorted(diagram.morphisms)
    glued = []
    for index, part in enumerate(("source", "middle", "target")):
        parts = GlueDiagram(
            {n: getattr(diagram.morphisms[n], part) for n in names},
            tuple(DiagramArrow(a.source, a.target, a.square.deps[index]) for a in diagram.arrows),
        )
        glued.append(glue(parts)[1])
    source_legs, middle_legs, target_legs = glued

    merger = factor_through(
        [source_legs[n] for n in names],
        [compose_functors(middle_legs[n], diagram.morphisms[n].merger) for n in names],
    )
    contraction = factor_through(
        [middle_legs[n] for n in names],
        [compose_functors(target_legs[n], diagram.morphisms[n].contraction) for n in names],
    )
    if merger is None or contraction is None:
        raise InducedMapIllDefined("member morphisms do not agree on glued nodes")
    return make_morphism(merger, contraction)


def corolla_cover(graph: NestedGraph) -> GlueDiagram:
    """Corollas under each vertex with their pairwise overlaps; glues back to the graph"""
    tops = sorted(vertices(graph))
    pieces = {v: full_subgraph_closure(graph, [v]) for v in tops}
    graphs: Dict[str, NestedGraph] = dict(pieces)
    arrows = []
    for i, v in enumerate(tops):
        for w in tops[i + 1:]:
            common = pieces[v].node_set & pieces[w].node_set
            if not common:
                continue
            name = f"{v}&{w}"
            graphs[name] = subgraph(graph, common)
            arrows.append(DiagramArrow(name, v, inclusion_dependency(pieces[v], graphs[name])))
            arrows.append(DiagramArrow(name, w, inclusion_dependency(pieces[w], graphs[name])))
    return make_diagram(graphs, arrows)


def restrict_along(morphism: NGrMorphism, cover: GlueDiagram) -> MorphismGlueDiagram:
    """Restrictions of a morphism to a diagram of full subgraphs of its target"""
    morphisms = {}
    for name, piece in cover.graphs.items():
        square = restrict_morphism(morphism, inclusion_dependency(morphism.target, piece))
        morphisms[name] = square.bottom

    arrows = []
    for arrow in cover.arrows:
        square = restrict_morphism(morphisms[arrow.target], arrow.functor)
        arrows.append(SquareArrow(arrow.source, arrow.target, square))
    return make_morphism_diagram(morphisms, arrows)


def morphism_corolla_cover(morphism: NGrMorphism) -> MorphismGlueDiagram:
    """Restrictions of a morphism to the corolla cover of its target"""
    return restrict_along(morphism, corolla_cover(morphism.target))
