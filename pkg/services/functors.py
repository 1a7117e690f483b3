"""
Functors between nested graphs: validation, classification (admissible,
epi, merger, contraction), fibers, and the quotient builders that produce
canonical mergers and contractions.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from networkx.utils import UnionFind

from .errors import (
    CompositionConflict,
    DanglingReference,
    EndpointMismatch,
    FiberNotCorolla,
    FunctorialityViolation,
    MalformedDocument,
    NestedGraphError,
    NotAdmissible,
    SourceTargetMismatch,
)
from .graph_core import (
    Flag,
    FlagId,
    IdentityAt,
    Morphism,
    NestedGraph,
    NodeId,
    check_acyclic,
    generated_flags,
    irreducible_flags,
    is_corolla,
    subgraph,
    validate_graph,
)

logger = logging.getLogger(__name__)

NODE_SEPARATOR = "+"
CHAIN_SEPARATOR = ";"


@dataclass(frozen=True)
class GraphFunctor:
    """Structure-preserving map between nested graphs.

    Flags map to target flags or to ``IdentityAt`` values (contracted flags).
    """
    source: NestedGraph
    target: NestedGraph
    node_map: Dict[NodeId, NodeId]
    flag_map: Dict[FlagId, Morphism]

    def apply(self, m: Morphism) -> Morphism:
        if isinstance(m, IdentityAt):
            return IdentityAt(self.node_map[m.node])
        return self.flag_map[m]

    def to_dict(self, source_ref: Any = None, target_ref: Any = None) -> Dict[str, Any]:
        """Functor file document; graphs are embedded unless refs are given"""
        flag_map = {}
        for f in sorted(self.flag_map):
            img = self.flag_map[f]
            flag_map[f] = {"id_at": img.node} if isinstance(img, IdentityAt) else {"flag": img}
        return {
            "source": source_ref if source_ref is not None else self.source.to_dict(),
            "target": target_ref if target_ref is not None else self.target.to_dict(),
            "node_map": {n: self.node_map[n] for n in sorted(self.node_map)},
            "flag_map": flag_map,
        }

    def __repr__(self) -> str:
        return f"<GraphFunctor({self.source!r} -> {self.target!r})>"


@dataclass(frozen=True)
class NodePartition:
    """Partition of the nodes of a graph into disjoint blocks"""
    blocks: Tuple[Tuple[NodeId, ...], ...]

    @classmethod
    def of(cls, graph: NestedGraph, blocks: Iterable[Iterable[NodeId]]) -> "NodePartition":
        """Validate blocks against a graph; uncovered nodes become singletons"""
        seen: Set[NodeId] = set()
        result = []
        for block in blocks:
            block = tuple(sorted(set(block)))
            if not block:
                continue
            if seen & set(block) or not set(block) <= graph.node_set:
                raise MalformedDocument("blocks overlap or name unknown nodes", ids=block)
            seen |= set(block)
            result.append(block)
        result.extend((n,) for n in graph.nodes if n not in seen)
        return cls(tuple(sorted(result)))

    @classmethod
    def discrete(cls, graph: NestedGraph) -> "NodePartition":
        return cls(tuple((n,) for n in graph.nodes))

    @classmethod
    def induced(cls, functor: GraphFunctor) -> "NodePartition":
        """Partition of the source into node_map fibers"""
        fibers: Dict[NodeId, List[NodeId]] = {}
        for node in functor.source.nodes:
            fibers.setdefault(functor.node_map[node], []).append(node)
        return cls.of(functor.source, fibers.values())

    def block_ids(self) -> Dict[NodeId, NodeId]:
        """Node -> id of its block"""
        return assign_names(self.blocks, [block_name(block) for block in self.blocks], "node")


def block_name(members: Iterable[str]) -> str:
    return NODE_SEPARATOR.join(sorted(members))


def assign_names(groups: Sequence[Iterable[str]], names: Sequence[str], what: str) -> Dict[str, str]:
    """Member -> name of its group; distinct groups must get distinct names"""
    clashes = {name for name in names if names.count(name) > 1}
    if clashes:
        raise CompositionConflict(f"derived {what} ids collide", ids=clashes)
    return {member: name for group, name in zip(groups, names) for member in group}


def check_functor(functor: GraphFunctor) -> None:
    """Raise unless node/flag maps are total, endpoint-compatible and functorial"""
    source, target = functor.source, functor.target
    missing = [n for n in source.nodes if functor.node_map.get(n) not in target.node_set]
    missing += [f for f in source.flags if f not in functor.flag_map]
    missing += [img for img in functor.flag_map.values()
                if not isinstance(img, IdentityAt) and img not in target.flags]
    missing += [img.node for img in functor.flag_map.values()
                if isinstance(img, IdentityAt) and img.node not in target.node_set]
    if missing:
        raise DanglingReference("functor references unknown ids", ids=missing)

    for f in source.flags.values():
        img = functor.flag_map[f.id]
        dom, cod = functor.node_map[f.dom], functor.node_map[f.cod]
        if isinstance(img, IdentityAt):
            if not (img.node == dom == cod):
                raise EndpointMismatch("contracted flag joins distinct image nodes", ids=[f.id])
        elif target.flags[img].dom != dom or target.flags[img].cod != cod:
            raise EndpointMismatch("flag image has wrong endpoints", ids=[f.id, img])

    for (g, f), h in source.comp.items():
        if target.compose(functor.flag_map[g], functor.flag_map[f]) != functor.flag_map[h]:
            raise FunctorialityViolation("composite is not preserved", ids=[g, f, h])


def _parse_image(value: Any) -> Morphism:
    if isinstance(value, (str, IdentityAt)):
        return value
    if isinstance(value, Mapping) and "flag" in value:
        return str(value["flag"])
    if isinstance(value, Mapping) and "id_at" in value:
        return IdentityAt(str(value["id_at"]))
    raise MalformedDocument(f"flag image {value!r} is neither a flag nor an identity")


def validate_functor(raw: Mapping[str, Any]) -> GraphFunctor:
    """Validate a functor description whose source/target are validated graphs"""
    source, target = raw.get("source"), raw.get("target")
    if not isinstance(source, NestedGraph) or not isinstance(target, NestedGraph):
        raise MalformedDocument("functor source and target must be validated graphs")
    node_map, flag_map = raw.get("node_map", {}), raw.get("flag_map", {})
    wrong = [key for key, value in (("node_map", node_map), ("flag_map", flag_map))
             if not isinstance(value, Mapping)]
    if wrong:
        raise MalformedDocument("functor maps must be objects", ids=wrong)
    functor = GraphFunctor(
        source=source,
        target=target,
        node_map={str(k): str(v) for k, v in node_map.items()},
        flag_map={str(k): _parse_image(v) for k, v in flag_map.items()},
    )
    check_functor(functor)
    return functor


def identity_functor(graph: NestedGraph) -> GraphFunctor:
    return GraphFunctor(graph, graph, {n: n for n in graph.nodes}, {f: f for f in graph.flags})


def inclusion(graph: NestedGraph, sub: NestedGraph) -> GraphFunctor:
    """Inclusion of a graph whose ids are drawn from ``graph``"""
    functor = GraphFunctor(sub, graph, {n: n for n in sub.nodes}, {f: f for f in sub.flags})
    check_functor(functor)
    return functor


def compose_functors(second: GraphFunctor, first: GraphFunctor) -> GraphFunctor:
    """Ordinary composite ``second∘first``"""
    if first.target != second.source:
        raise SourceTargetMismatch("target of the first functor is not the source of the second")
    return GraphFunctor(
        source=first.source,
        target=second.target,
        node_map={n: second.node_map[m] for n, m in first.node_map.items()},
        flag_map={f: second.apply(img) for f, img in first.flag_map.items()},
    )


def contracted_flags(functor: GraphFunctor) -> Set[FlagId]:
    return {f for f, img in functor.flag_map.items() if isinstance(img, IdentityAt)}


def contracted_nodes(functor: GraphFunctor) -> Set[NodeId]:
    """Nodes decorating a contracted flag"""
    return {functor.source.flags[f].dom for f in contracted_flags(functor)}


def admissibility_violation(functor: GraphFunctor) -> Optional[Tuple[str, List[str]]]:
    """First violated admissibility condition with its offending ids, or None"""
    irreducible = irreducible_flags(functor.source)
    target_irreducible = irreducible_flags(functor.target)
    for f in sorted(irreducible):
        img = functor.flag_map[f]
        if not isinstance(img, IdentityAt) and img not in target_irreducible:
            return "irreducible flag maps to a reducible flag", [f, img]
    for f in sorted(irreducible):
        if not isinstance(functor.flag_map[f], IdentityAt):
            continue
        dom = functor.source.flags[f].dom
        kept = [g for g in functor.source.out_flags[dom]
                if g in irreducible and not isinstance(functor.flag_map[g], IdentityAt)]
        if kept:
            return "contracted node decorates an uncontracted irreducible flag", [f] + kept
    return None


def is_admissible(functor: GraphFunctor) -> bool:
    return admissibility_violation(functor) is None


def is_epi(functor: GraphFunctor) -> bool:
    """Surjective on nodes and the image generates every target flag"""
    if set(functor.node_map.values()) != functor.target.node_set:
        return False
    images = {img for img in functor.flag_map.values() if not isinstance(img, IdentityAt)}
    return generated_flags(functor.target, images) == set(functor.target.flags)


def is_isomorphism(functor: GraphFunctor) -> bool:
    images = list(functor.flag_map.values())
    if any(isinstance(img, IdentityAt) for img in images):
        return False
    return (len(set(functor.node_map.values())) == len(functor.source.nodes) == len(functor.target.nodes)
            and len(set(images)) == len(images) == len(functor.target.flags))


def fiber(functor: GraphFunctor, node: NodeId) -> NestedGraph:
    """Full subcategory over a target node; its flags are exactly the ones contracted to it"""
    return subgraph(functor.source, [n for n, m in functor.node_map.items() if m == node])


def is_contraction(functor: GraphFunctor) -> bool:
    if not is_admissible(functor) or not is_epi(functor):
        return False
    return all(is_corolla(fiber(functor, node)) for node in functor.target.nodes)


def is_merger(functor: GraphFunctor) -> bool:
    """Admissible epi that is the quotient of its source by its node partition"""
    if contracted_flags(functor) or not is_admissible(functor):
        return False
    try:
        _, projection = quotient_by_partition(functor.source, NodePartition.induced(functor))
    except NestedGraphError:
        return False
    comparison = factor_through([projection], [functor])
    return comparison is not None and is_isomorphism(comparison)


def factor_through(legs: Sequence[GraphFunctor], maps: Sequence[GraphFunctor]) -> Optional[GraphFunctor]:
    """The unique functor i with i∘legs[k] = maps[k] for all k, or None.

    The legs share a target M and must jointly generate it; the maps share a
    target T. Values on composites are forced by functoriality, so the map
    is propagated from the leg images through M's composition table.
    """
    middle, target = legs[0].target, maps[0].target
    node_map: Dict[NodeId, NodeId] = {}
    flag_map: Dict[FlagId, Morphism] = {}
    for leg, other in zip(legs, maps):
        for n in leg.source.nodes:
            if node_map.setdefault(leg.node_map[n], other.node_map[n]) != other.node_map[n]:
                return None
        for f in leg.source.flags:
            img, value = leg.flag_map[f], other.flag_map[f]
            if isinstance(img, IdentityAt):
                if not isinstance(value, IdentityAt):
                    return None
                continue
            if flag_map.setdefault(img, value) != value:
                return None

    frontier = list(flag_map)
    while frontier:
        found = []
        for x in frontier:
            pairs = [(x, y) for y in middle.out_flags[middle.flags[x].cod] if y in flag_map]
            pairs += [(y, x) for y in middle.in_flags[middle.flags[x].dom] if y in flag_map]
            for a, b in pairs:
                first, second = flag_map[a], flag_map[b]
                if target.cod(first) != target.dom(second):
                    return None
                value = target.compose(first, second)
                ab = middle.comp[(a, b)]
                if ab not in flag_map:
                    flag_map[ab] = value
                    found.append(ab)
                elif flag_map[ab] != value:
                    return None
        frontier = found

    if set(node_map) != middle.node_set or len(flag_map) != len(middle.flags):
        return None
    induced = GraphFunctor(middle, target, node_map, flag_map)
    try:
        check_functor(induced)
    except NestedGraphError:
        return None
    return induced


def free_quotient(nodes: Iterable[NodeId], letters: Mapping[str, Tuple[NodeId, NodeId]],
                  table: Mapping[Tuple[str, str], str]) -> NestedGraph:
    """Category freely generated by letters between nodes, subject to ``table``.

    Flags are reduced chains: composable letter sequences with no adjacent
    pair in the table. A one-letter chain keeps the letter id, longer chains
    join letter ids in path order.
    """
    nodes = sorted(set(nodes))
    check_acyclic(nodes, [Flag(l, d, c) for l, (d, c) in letters.items()])

    outgoing: Dict[NodeId, List[str]] = {n: [] for n in nodes}
    for letter in sorted(letters):
        outgoing[letters[letter][0]].append(letter)

    chains: List[Tuple[str, ...]] = []
    stack = [(letter,) for letter in sorted(letters)]
    while stack:
        chain = stack.pop()
        chains.append(chain)
        last = chain[-1]
        for nxt in outgoing[letters[last][1]]:
            if (last, nxt) not in table:
                stack.append(chain + (nxt,))

    names = {chain: CHAIN_SEPARATOR.join(chain) for chain in chains}
    if len(set(names.values())) != len(names):
        clashes = [n for n in names.values() if list(names.values()).count(n) > 1]
        raise CompositionConflict("generated flag ids collide", ids=set(clashes))

    def normalize(word: Tuple[str, ...]) -> Tuple[str, ...]:
        reduced: List[str] = []
        for letter in word:
            reduced.append(letter)
            while len(reduced) >= 2 and (reduced[-2], reduced[-1]) in table:
                second = reduced.pop()
                first = reduced.pop()
                reduced.append(table[(first, second)])
        return tuple(reduced)

    by_dom: Dict[NodeId, List[Tuple[str, ...]]] = {n: [] for n in nodes}
    for chain in chains:
        by_dom[letters[chain[0]][0]].append(chain)

    comp = {}
    for chain in chains:
        for tail in by_dom[letters[chain[-1]][1]]:
            word = normalize(chain + tail)
            if word not in names:
                raise CompositionConflict("composite has no normal form", ids=list(chain + tail))
            comp[(names[chain], names[tail])] = names[word]

    flags = [Flag(names[c], letters[c[0]][0], letters[c[-1]][1]) for c in chains]
    return NestedGraph.build(nodes, flags, comp)


def quotient_by_partition(graph: NestedGraph, partition: NodePartition) -> Tuple[NestedGraph, GraphFunctor]:
    """Identify nodes block-wise; morphisms are free modulo the relations of ``graph``"""
    node_class = partition.block_ids()
    letters = {f.id: (node_class[f.dom], node_class[f.cod]) for f in graph.flags.values()}
    quotient = free_quotient(node_class.values(), letters, graph.comp)

    projection = GraphFunctor(graph, quotient, node_class, {f: f for f in graph.flags})
    lost = irreducible_flags(graph) - irreducible_flags(quotient)
    if lost:
        raise NotAdmissible("identification makes irreducible flags reducible", ids=lost)
    logger.debug(f"Quotient by {len(partition.blocks)} blocks: {len(quotient.flags)} flags "
                 f"from {len(graph.flags)}")
    return quotient, projection


def contract_flags(graph: NestedGraph, flags: Iterable[FlagId]) -> Tuple[NestedGraph, GraphFunctor]:
    """Contract a set of flags into identities, producing the free contraction"""
    flags = set(flags)
    unknown = flags - set(graph.flags)
    if unknown:
        raise DanglingReference("contracting unknown flags", ids=unknown)

    nodes_uf = UnionFind(graph.nodes)
    for f in flags:
        nodes_uf.union(graph.flags[f].dom, graph.flags[f].cod)
    blocks = list(nodes_uf.to_sets())
    block_of = assign_names(blocks, [block_name(block) for block in blocks], "node")

    contracted = {f.id for f in graph.flags.values() if block_of[f.dom] == block_of[f.cod]}
    for block in {b for b in block_of.values()}:
        members = [n for n in graph.nodes if block_of[n] == block]
        tops = [n for n in members if not any(g in contracted for g in graph.out_flags[n])]
        if len(tops) != 1:
            raise FiberNotCorolla(f"block has {len(tops)} vertices", ids=tops or members)

    kept = [f for f in graph.flags if f not in contracted]
    classes = UnionFind(kept)
    for c in contracted:
        flag = graph.flags[c]
        for f in graph.in_flags[flag.dom]:
            if f not in contracted:
                classes.union(f, graph.comp[(f, c)])
        for f in graph.out_flags[flag.cod]:
            if f not in contracted:
                classes.union(f, graph.comp[(c, f)])

    # congruence closure: a pair of classes must have a single composite class
    while True:
        table: Dict[Tuple[FlagId, FlagId], FlagId] = {}
        merged = False
        for (g, f), h in graph.comp.items():
            if g in contracted or f in contracted:
                continue
            key, value = (classes[g], classes[f]), classes[h]
            if key in table and classes[table[key]] != value:
                classes.union(table[key], value)
                merged = True
            else:
                table[key] = value
        if not merged:
            break

    flag_classes = list(classes.to_sets())
    class_name = assign_names(flag_classes, [block_name(members) for members in flag_classes], "flag")
    letters = {class_name[f]: (block_of[graph.flags[f].dom], block_of[graph.flags[f].cod]) for f in kept}
    named_table = {(class_name[g], class_name[f]): class_name[h] for (g, f), h in table.items()}
    target = free_quotient(block_of.values(), letters, named_table)
    try:
        validate_graph(target.to_dict())
    except NestedGraphError as e:
        # only reachable when the flags violate the decoration condition
        raise NotAdmissible(f"contracted graph is not a category: {e.message}", ids=e.ids)

    flag_map: Dict[FlagId, Morphism] = {}
    for f in graph.flags.values():
        flag_map[f.id] = IdentityAt(block_of[f.dom]) if f.id in contracted else class_name[f.id]
    contraction = GraphFunctor(graph, target, block_of, flag_map)

    violation = admissibility_violation(contraction)
    if violation is not None:
        raise NotAdmissible(violation[0], ids=violation[1])
    logger.debug(f"Contracted {len(contracted)} flags into {len(target.nodes)} nodes")
    return target, contraction
