"""
Double category structure on NGr.

Vertical arrows are dependencies (injective functors onto full subgraphs);
squares relate a morphism to its restriction along dependencies.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Set, Tuple

from .errors import (
    BoundaryMismatch,
    NotCommuting,
    PreimageMismatch,
    RestrictionNotContraction,
    RestrictionNotMerger,
)
from .functors import (
    GraphFunctor,
    compose_functors,
    factor_through,
    identity_functor,
    inclusion,
    is_contraction,
    is_merger,
)
from .graph_core import FlagId, IdentityAt, NestedGraph, NodeId, is_full_subgraph, subgraph
from .ngr_category import NGrMorphism, ngr_compose, ngr_identity

logger = logging.getLogger(__name__)


def is_dependency(functor: GraphFunctor) -> bool:
    """Injective, contracts nothing, and the image is a full subgraph"""
    flag_images = list(functor.flag_map.values())
    if any(isinstance(img, IdentityAt) for img in flag_images):
        return False
    if len(set(flag_images)) != len(flag_images):
        return False
    if len(set(functor.node_map.values())) != len(functor.node_map):
        return False
    return is_full_subgraph(functor.target, image(functor))


def image(functor: GraphFunctor) -> NestedGraph:
    """Image of an injective functor as a subgraph of its target"""
    target = functor.target
    flags = {img for img in functor.flag_map.values() if not isinstance(img, IdentityAt)}
    return NestedGraph.build(
        functor.node_map.values(),
        [target.flags[f] for f in flags],
        {k: v for k, v in target.comp.items() if k[0] in flags and k[1] in flags},
    )


def inclusion_dependency(graph: NestedGraph, sub: NestedGraph) -> GraphFunctor:
    dependency = inclusion(graph, sub)
    if not is_dependency(dependency):
        raise BoundaryMismatch("subgraph is not full", ids=sub.nodes)
    return dependency


def compose_dependencies(second: GraphFunctor, first: GraphFunctor) -> GraphFunctor:
    return compose_functors(second, first)


def preimage(functor: GraphFunctor, nodes: Iterable[NodeId]) -> NestedGraph:
    """Full preimage of a full subgraph, given by its nodes"""
    keep = set(nodes)
    return subgraph(functor.source, [n for n, m in functor.node_map.items() if m in keep])


def _preimage_flags(functor: GraphFunctor, sub: NestedGraph) -> Set[FlagId]:
    result = set()
    for f, img in functor.flag_map.items():
        if isinstance(img, IdentityAt) and img.node in sub.node_set:
            result.add(f)
        elif not isinstance(img, IdentityAt) and img in sub.flags:
            result.add(f)
    return result


def _matches_preimage(functor: GraphFunctor, target_dep: GraphFunctor, source_dep: GraphFunctor) -> bool:
    wanted, found = image(target_dep), image(source_dep)
    nodes = {n for n, m in functor.node_map.items() if m in wanted.node_set}
    return nodes == found.node_set and _preimage_flags(functor, wanted) == set(found.flags)


@dataclass(frozen=True)
class MorphismSquare:
    """A morphism of the category of morphisms: bottom sits inside top via deps"""
    top: NGrMorphism
    bottom: NGrMorphism
    deps: Tuple[GraphFunctor, GraphFunctor, GraphFunctor]

    def to_dict(self) -> Dict[str, Any]:
        """Square file document with a shared graph table"""
        top_refs = {"source": "N1", "middle": "N2", "target": "N3"}
        bottom_refs = {"source": "M1", "middle": "M2", "target": "M3"}
        return {
            "graphs": {
                "N1": self.top.source.to_dict(), "N2": self.top.middle.to_dict(),
                "N3": self.top.target.to_dict(), "M1": self.bottom.source.to_dict(),
                "M2": self.bottom.middle.to_dict(), "M3": self.bottom.target.to_dict(),
            },
            "top": self.top.to_dict(top_refs),
            "bottom": self.bottom.to_dict(bottom_refs),
            "deps": [dep.to_dict(f"M{i}", f"N{i}") for i, dep in enumerate(self.deps, start=1)],
        }


def validate_square(top: NGrMorphism, bottom: NGrMorphism,
                    deps: Tuple[GraphFunctor, GraphFunctor, GraphFunctor]) -> MorphismSquare:
    """Check boundaries, commutativity and the preimage conditions"""
    outer = (top.source, top.middle, top.target)
    inner = (bottom.source, bottom.middle, bottom.target)
    for i, dep in enumerate(deps):
        if dep.source != inner[i] or dep.target != outer[i]:
            raise BoundaryMismatch(f"dependency {i + 1} does not join the matching graphs")
        if not is_dependency(dep):
            raise BoundaryMismatch(f"arrow {i + 1} is not a dependency", ids=dep.source.nodes)

    first, second, third = deps
    if compose_functors(top.merger, first) != compose_functors(second, bottom.merger):
        raise NotCommuting("merger square does not commute")
    if compose_functors(top.contraction, second) != compose_functors(third, bottom.contraction):
        raise NotCommuting("contraction square does not commute")

    if not _matches_preimage(top.contraction, third, second):
        raise PreimageMismatch("contraction preimage differs from the middle dependency",
                               ids=image(second).nodes)
    if not _matches_preimage(top.merger, second, first):
        raise PreimageMismatch("merger preimage differs from the source dependency",
                               ids=image(first).nodes)
    return MorphismSquare(top, bottom, deps)


def restrict_morphism(morphism: NGrMorphism, dependency: GraphFunctor) -> MorphismSquare:
    """The unique square over a dependency into the target of a morphism"""
    if dependency.target != morphism.target or not is_dependency(dependency):
        raise BoundaryMismatch("restriction needs a dependency into the morphism target")

    merger, contraction = morphism.merger, morphism.contraction
    middle = preimage(contraction, image(dependency).nodes)
    source = preimage(merger, middle.nodes)
    back_nodes = {v: k for k, v in dependency.node_map.items()}
    back_flags = {v: k for k, v in dependency.flag_map.items()}

    restricted_merger = GraphFunctor(
        source, middle,
        {n: merger.node_map[n] for n in source.nodes},
        {f: merger.flag_map[f] for f in source.flags},
    )
    flag_map = {}
    for f in middle.flags:
        img = contraction.flag_map[f]
        flag_map[f] = IdentityAt(back_nodes[img.node]) if isinstance(img, IdentityAt) else back_flags[img]
    restricted_contraction = GraphFunctor(
        middle, dependency.source,
        {n: back_nodes[contraction.node_map[n]] for n in middle.nodes},
        flag_map,
    )

    if not is_merger(restricted_merger):
        raise RestrictionNotMerger("restricted merger is not a merger", ids=source.nodes)
    if not is_contraction(restricted_contraction):
        raise RestrictionNotContraction("restricted contraction is not a contraction", ids=middle.nodes)

    # restriction preserves whole fibers, so the restricted pair is already canonical
    bottom = NGrMorphism(source, middle, dependency.source, restricted_merger, restricted_contraction)
    deps = (inclusion(morphism.source, source), inclusion(morphism.middle, middle), dependency)
    return validate_square(morphism, bottom, deps)


def identity_square(morphism: NGrMorphism) -> MorphismSquare:
    """Square with identity dependencies (vertical identity)"""
    return restrict_morphism(morphism, identity_functor(morphism.target))


def horizontal_identity(dependency: GraphFunctor) -> MorphismSquare:
    """Square between identity morphisms along one dependency"""
    return validate_square(ngr_identity(dependency.target), ngr_identity(dependency.source),
                           (dependency, dependency, dependency))


def hcompose_squares(second: MorphismSquare, first: MorphismSquare) -> MorphismSquare:
    """Paste squares side by side: first then second"""
    if first.deps[2] != second.deps[0]:
        raise BoundaryMismatch("shared dependency differs")
    top = ngr_compose(second.top, first.top)
    bottom = ngr_compose(second.bottom, first.bottom)
    source_dep, target_dep = first.deps[0], second.deps[2]
    middle_dep = factor_through([bottom.merger], [compose_functors(top.merger, source_dep)])
    if middle_dep is None:
        raise NotCommuting("composite mergers induce no middle dependency")
    return validate_square(top, bottom, (source_dep, middle_dep, target_dep))


def vcompose_squares(lower: MorphismSquare, upper: MorphismSquare) -> MorphismSquare:
    """Stack ``lower`` under ``upper``; lower's top must be upper's bottom"""
    if lower.top != upper.bottom:
        raise BoundaryMismatch("lower square does not sit on the upper square's bottom")
    deps = tuple(compose_dependencies(u, l) for u, l in zip(upper.deps, lower.deps))
    return validate_square(upper.top, lower.bottom, deps)
