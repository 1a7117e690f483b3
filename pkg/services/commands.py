"""
Subcommand bodies shared by the command line and the HTTP API.

Each command takes parsed documents and returns a report document; failures
propagate as NestedGraphError subclasses carrying their error code.
"""

import logging
from typing import Any, Dict, Mapping, Tuple

from .double_category import is_dependency, restrict_morphism
from .functors import compose_functors, is_admissible, is_contraction, is_epi, is_merger
from .gluing import GlueDiagram, glue, glue_morphisms
from .graph_core import (
    NestedGraph,
    grading,
    hyper_edges,
    irreducible_flags,
    is_corolla,
    is_one_dimensional,
    vertices,
)
from .ngr_category import decompose as decompose_functor, ngr_compose, ngr_equal
from .random_generator import RandomGenerator, RandomSpec
from .serialization import (
    document_kind,
    dump_diagram,
    dump_functor,
    dump_graph,
    dump_morphism,
    dump_square,
    load_diagram,
    load_functor,
    load_graph,
    load_morphism,
    load_square,
    to_dot,
)

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "info", "decompose", "compose", "equal", "restrict", "glue", "export-dot", "gen-random")


def format_grading(levels: Mapping[str, int]) -> str:
    ordered = sorted(levels.items(), key=lambda item: (item[1], item[0]))
    return "{" + ",".join(f"{node}:{level}" for node, level in ordered) + "}"


def _graph_info(graph: NestedGraph) -> Dict[str, Any]:
    levels = grading(graph)
    return {
        "nodes": len(graph.nodes),
        "flags": len(graph.flags),
        "irreducible": sorted(irreducible_flags(graph)),
        "vertices": sorted(vertices(graph)),
        "grading": levels,
        "dimension": max(levels.values(), default=0),
        "corolla": is_corolla(graph),
        "one_dimensional": is_one_dimensional(graph),
        "classic": is_one_dimensional(graph, classic=True),
        "hyper_edges": hyper_edges(graph),
    }


def validate(doc: Any) -> Dict[str, Any]:
    """Validate any document; graphs also report their grading"""
    kind = document_kind(doc)
    if kind == "graph":
        levels = grading(load_graph(doc))
        return {"status": "valid", "kind": kind, "grading": levels,
                "message": f"valid, grading {format_grading(levels)}"}
    report: Dict[str, Any] = {"status": "valid", "kind": kind}
    if kind == "functor":
        load_functor(doc)
    elif kind == "morphism":
        _, report["canonical"] = load_morphism(doc)
    elif kind == "square":
        load_square(doc)
    else:
        load_diagram(doc)
    report["message"] = f"valid {kind}"
    return report


def info(doc: Any) -> Dict[str, Any]:
    kind = document_kind(doc)
    if kind == "graph":
        return {"kind": kind, **_graph_info(load_graph(doc))}
    if kind == "functor":
        functor = load_functor(doc)
        return {
            "kind": kind,
            "admissible": is_admissible(functor),
            "epi": is_epi(functor),
            "merger": is_merger(functor),
            "contraction": is_contraction(functor),
            "dependency": is_dependency(functor),
        }
    if kind == "morphism":
        morphism, canonical = load_morphism(doc)
        return {
            "kind": kind,
            "canonical": canonical,
            "source": _graph_info(morphism.source),
            "middle": _graph_info(morphism.middle),
            "target": _graph_info(morphism.target),
        }
    if kind == "square":
        square = load_square(doc)
        return {"kind": kind, "top_target": _graph_info(square.top.target),
                "bottom_target": _graph_info(square.bottom.target)}
    diagram = load_diagram(doc)
    members = diagram.graphs if isinstance(diagram, GlueDiagram) else diagram.morphisms
    return {"kind": kind, "members": sorted(members), "arrows": len(diagram.arrows)}


def decompose(doc: Any) -> Dict[str, Any]:
    """Canonical (merger, contraction) of an admissible epi-functor"""
    functor = load_functor(doc)
    merger, contraction = decompose_functor(functor)
    verified = compose_functors(contraction, merger) == functor
    return {
        "merger": dump_functor(merger),
        "contraction": dump_functor(contraction),
        "verified": verified,
    }


def compose(first_doc: Any, second_doc: Any) -> Dict[str, Any]:
    """Composite ``second∘first`` in canonical form"""
    first, _ = load_morphism(first_doc)
    second, _ = load_morphism(second_doc)
    return dump_morphism(ngr_compose(second, first))


def equal(first_doc: Any, second_doc: Any) -> Dict[str, Any]:
    first, _ = load_morphism(first_doc)
    second, _ = load_morphism(second_doc)
    return {"equal": ngr_equal(first, second)}


def restrict(morphism_doc: Any, dependency_doc: Any) -> Dict[str, Any]:
    morphism, _ = load_morphism(morphism_doc)
    return dump_square(restrict_morphism(morphism, load_functor(dependency_doc)))


def glue_diagram(doc: Any) -> Dict[str, Any]:
    """Colimit with legs for graph diagrams, glued morphism for morphism diagrams"""
    diagram = load_diagram(doc)
    if not isinstance(diagram, GlueDiagram):
        return dump_morphism(glue_morphisms(diagram))
    colimit, legs = glue(diagram)
    return {
        "colimit": dump_graph(colimit),
        "legs": {name: dump_functor(leg, name, "colimit") for name, leg in sorted(legs.items())},
    }


def export_dot(doc: Any) -> str:
    return to_dot(load_graph(doc))


def gen_random(spec: RandomSpec) -> Tuple[str, Dict[str, Any]]:
    """Generated value of the requested kind, as (document kind, document)"""
    value = RandomGenerator(spec).generate()
    if spec.kind == "graph":
        return "graph", dump_graph(value)
    if spec.kind == "morphism":
        return "morphism", dump_morphism(value)
    if spec.kind == "diagram":
        return "diagram", dump_diagram(value)
    return "functor", dump_functor(value)
