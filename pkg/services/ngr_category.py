"""
The category NGr of nested graphs.

A morphism is a merger followed by a contraction. Morphisms are stored in
canonical form: the decomposition of the composite functor whose merger
identifies only vertices lying in a common fiber.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .errors import InducedMapIllDefined, NotAdmissible, NotContraction, NotEpi, NotMerger, SourceTargetMismatch
from .functors import (
    GraphFunctor,
    NodePartition,
    admissibility_violation,
    compose_functors,
    factor_through,
    fiber,
    identity_functor,
    is_contraction,
    is_epi,
    is_isomorphism,
    is_merger,
    quotient_by_partition,
)
from .graph_core import NestedGraph, vertices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NGrMorphism:
    """A (merger, contraction) pair through a middle graph"""
    source: NestedGraph
    middle: NestedGraph
    target: NestedGraph
    merger: GraphFunctor
    contraction: GraphFunctor

    def functor(self) -> GraphFunctor:
        """The admissible epi-functor contraction∘merger"""
        return compose_functors(self.contraction, self.merger)

    def to_dict(self, refs: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Morphism file document; ``refs`` names source/middle/target graphs"""
        refs = refs or {}
        return {
            "merger": self.merger.to_dict(refs.get("source"), refs.get("middle")),
            "contraction": self.contraction.to_dict(refs.get("middle"), refs.get("target")),
        }

    def __repr__(self) -> str:
        return f"<NGrMorphism({self.source!r} -> {self.middle!r} -> {self.target!r})>"


def decompose(functor: GraphFunctor) -> Tuple[GraphFunctor, GraphFunctor]:
    """Canonical (merger, contraction) with contraction∘merger == functor"""
    violation = admissibility_violation(functor)
    if violation is not None:
        raise NotAdmissible(violation[0], ids=violation[1])
    if not is_epi(functor):
        raise NotEpi("image does not generate the target")

    blocks = [sorted(vertices(fiber(functor, node))) for node in functor.target.nodes]
    partition = NodePartition.of(functor.source, blocks)
    _, merger = quotient_by_partition(functor.source, partition)
    contraction = factor_through([merger], [functor])
    if contraction is None:
        raise InducedMapIllDefined("functor does not factor through its minimal merger")
    logger.debug(f"Decomposed functor through middle graph {merger.target!r}")
    return merger, contraction


def morphism_from_functor(functor: GraphFunctor) -> NGrMorphism:
    """Canonical NGr morphism of an admissible epi-functor"""
    merger, contraction = decompose(functor)
    return NGrMorphism(functor.source, merger.target, functor.target, merger, contraction)


def make_morphism(merger: GraphFunctor, contraction: GraphFunctor, validate: bool = True) -> NGrMorphism:
    """Canonicalize a (merger, contraction) pair"""
    if merger.target != contraction.source:
        raise SourceTargetMismatch("merger target is not the contraction source")
    if validate:
        if not is_merger(merger):
            raise NotMerger("first component is not a merger")
        if not is_contraction(contraction):
            raise NotContraction("second component is not a contraction")
    return morphism_from_functor(compose_functors(contraction, merger))


def ngr_identity(graph: NestedGraph) -> NGrMorphism:
    identity = identity_functor(graph)
    return NGrMorphism(graph, graph, graph, identity, identity)


def ngr_compose(second: NGrMorphism, first: NGrMorphism) -> NGrMorphism:
    """Composite ``second∘first``: commute first's contraction past second's merger"""
    if first.target != second.source:
        raise SourceTargetMismatch("morphisms are not composable")
    merger, contraction = decompose(compose_functors(second.merger, first.contraction))
    return make_morphism(
        compose_functors(merger, first.merger),
        compose_functors(second.contraction, contraction),
        validate=False,
    )


def middle_comparison(first: NGrMorphism, second: NGrMorphism) -> Optional[GraphFunctor]:
    """The isomorphism of middles shifting first onto second, if one exists"""
    comparison = factor_through([first.merger], [second.merger])
    if comparison is None or not is_isomorphism(comparison):
        return None
    if compose_functors(second.contraction, comparison) != first.contraction:
        return None
    return comparison


def ngr_equal(first: NGrMorphism, second: NGrMorphism) -> bool:
    if first.source != second.source or first.target != second.target:
        raise SourceTargetMismatch("morphisms have different boundaries")
    return middle_comparison(first, second) is not None


def is_canonical(morphism: NGrMorphism) -> bool:
    """Whether a raw pair already is the canonical decomposition up to renaming"""
    return ngr_equal(morphism, morphism_from_functor(morphism.functor()))
