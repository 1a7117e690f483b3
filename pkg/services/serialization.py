"""
File formats for graphs, functors, morphisms, squares and diagrams.

Documents are plain JSON values. Canonical text is two-space indented JSON
with the key order produced by the ``to_dict`` methods, so printing a loaded
canonical document reproduces it byte for byte.
"""

import json
import logging
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from .double_category import MorphismSquare, validate_square
from .errors import (
    DanglingReference,
    MalformedDocument,
    NotContraction,
    NotMerger,
    SourceTargetMismatch,
)
from .functors import GraphFunctor, is_contraction, is_merger, validate_functor
from .gluing import (
    DiagramArrow,
    GlueDiagram,
    MorphismGlueDiagram,
    SquareArrow,
    make_diagram,
    make_morphism_diagram,
)
from .graph_core import NestedGraph, grading, irreducible_flags, validate_graph
from .ngr_category import NGrMorphism, morphism_from_functor, ngr_equal

logger = logging.getLogger(__name__)

GraphTable = Mapping[str, NestedGraph]


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"document is not valid JSON: {e.msg} at line {e.lineno}")


def document_kind(doc: Any) -> str:
    """Which file format a parsed document is written in"""
    if not isinstance(doc, Mapping):
        raise MalformedDocument("document must be an object")
    if "morphisms" in doc:
        return "morphism-diagram"
    if "arrows" in doc:
        return "diagram"
    if "top" in doc:
        return "square"
    if "merger" in doc:
        return "morphism"
    if "node_map" in doc:
        return "functor"
    if "nodes" in doc:
        return "graph"
    raise MalformedDocument("unrecognized document", ids=list(doc))


def _require(doc: Any, *keys: str) -> None:
    if not isinstance(doc, Mapping):
        raise MalformedDocument("document must be an object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise MalformedDocument("document lacks required keys", ids=missing)


# Graphs

def load_graph(doc: Any) -> NestedGraph:
    _require(doc, "nodes")
    return validate_graph(doc)


def dump_graph(graph: NestedGraph) -> Dict[str, Any]:
    return graph.to_dict()


def _resolve(ref: Any, graphs: Optional[GraphTable]) -> NestedGraph:
    if isinstance(ref, str):
        if not graphs or ref not in graphs:
            raise DanglingReference("graph reference is not in the graph table", ids=[ref])
        return graphs[ref]
    return load_graph(ref)


def load_graph_table(doc: Any) -> Dict[str, NestedGraph]:
    if not isinstance(doc, Mapping):
        raise MalformedDocument("graph table must be an object")
    return {str(name): load_graph(graph) for name, graph in doc.items()}


# Functors

def load_functor(doc: Any, graphs: Optional[GraphTable] = None) -> GraphFunctor:
    """Functor document with embedded graphs or names from ``graphs``"""
    _require(doc, "source", "target", "node_map", "flag_map")
    return validate_functor({
        "source": _resolve(doc["source"], graphs),
        "target": _resolve(doc["target"], graphs),
        "node_map": doc["node_map"],
        "flag_map": doc["flag_map"],
    })


def dump_functor(functor: GraphFunctor, source_ref: Optional[str] = None,
                 target_ref: Optional[str] = None) -> Dict[str, Any]:
    return functor.to_dict(source_ref, target_ref)


# Morphisms

def load_pair(doc: Any, graphs: Optional[GraphTable] = None) -> NGrMorphism:
    """A (merger, contraction) pair exactly as written, checked but not renamed"""
    _require(doc, "merger", "contraction")
    merger = load_functor(doc["merger"], graphs)
    contraction = load_functor(doc["contraction"], graphs)
    if merger.target != contraction.source:
        raise SourceTargetMismatch("merger target is not the contraction source")
    if not is_merger(merger):
        raise NotMerger("first component is not a merger")
    if not is_contraction(contraction):
        raise NotContraction("second component is not a contraction")
    return NGrMorphism(merger.source, merger.target, contraction.target, merger, contraction)


def load_morphism(doc: Any, graphs: Optional[GraphTable] = None) -> Tuple[NGrMorphism, bool]:
    """Canonical morphism and whether the document already was canonical"""
    raw = load_pair(doc, graphs)
    canonical = morphism_from_functor(raw.functor())
    was_canonical = ngr_equal(raw, canonical)
    if not was_canonical:
        logger.warning("Morphism document is not canonical; its merger identifies vertices across fibers")
    return canonical, was_canonical


def dump_morphism(morphism: NGrMorphism) -> Dict[str, Any]:
    return morphism.to_dict()


# Squares

def load_square(doc: Any) -> MorphismSquare:
    _require(doc, "graphs", "top", "bottom", "deps")
    graphs = load_graph_table(doc["graphs"])
    top = load_pair(doc["top"], graphs)
    bottom = load_pair(doc["bottom"], graphs)
    deps = doc["deps"]
    if not isinstance(deps, list) or len(deps) != 3:
        raise MalformedDocument("a square has exactly three dependencies")
    first, second, third = (load_functor(d, graphs) for d in deps)
    return validate_square(top, bottom, (first, second, third))


def dump_square(square: MorphismSquare) -> Dict[str, Any]:
    return square.to_dict()


# Diagrams

def _arrow_list(doc: Mapping[str, Any]) -> List[Any]:
    arrows = doc["arrows"]
    if not isinstance(arrows, list):
        raise MalformedDocument("diagram arrows must be a list", ids=["arrows"])
    return arrows


def _arrow_ends(arrow: Any) -> Tuple[str, str]:
    _require(arrow, "from", "to")
    return str(arrow["from"]), str(arrow["to"])


def load_diagram(doc: Any) -> Union[GlueDiagram, MorphismGlueDiagram]:
    """Graph diagram, or morphism diagram when the document names morphisms"""
    if document_kind(doc) == "morphism-diagram":
        _require(doc, "morphisms", "arrows")
        if not isinstance(doc["morphisms"], Mapping):
            raise MalformedDocument("morphism table must be an object")
        morphisms = {str(name): load_pair(m) for name, m in doc["morphisms"].items()}
        arrows = []
        for arrow in _arrow_list(doc):
            source, target = _arrow_ends(arrow)
            _require(arrow, "square")
            arrows.append(SquareArrow(source, target, load_square(arrow["square"])))
        return make_morphism_diagram(morphisms, arrows)

    _require(doc, "graphs", "arrows")
    graphs = load_graph_table(doc["graphs"])
    arrows = []
    for arrow in _arrow_list(doc):
        source, target = _arrow_ends(arrow)
        _require(arrow, "functor")
        arrows.append(DiagramArrow(source, target, load_functor(arrow["functor"], graphs)))
    return make_diagram(graphs, arrows)


def dump_diagram(diagram: Union[GlueDiagram, MorphismGlueDiagram]) -> Dict[str, Any]:
    if isinstance(diagram, MorphismGlueDiagram):
        return {
            "morphisms": {name: dump_morphism(diagram.morphisms[name]) for name in sorted(diagram.morphisms)},
            "arrows": [
                {"from": a.source, "to": a.target, "square": dump_square(a.square)}
                for a in diagram.arrows
            ],
        }
    return {
        "graphs": {name: diagram.graphs[name].to_dict() for name in sorted(diagram.graphs)},
        "arrows": [
            {"from": a.source, "to": a.target, "functor": dump_functor(a.functor, a.source, a.target)}
            for a in diagram.arrows
        ],
    }


# DOT

def _quote(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def to_dot(graph: NestedGraph, name: str = "nested") -> str:
    """Irreducible flags only, nodes ranked by grade"""
    levels = grading(graph)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;"]
    for node in graph.nodes:
        lines.append(f"  {_quote(node)} [label={_quote(f'{node} ({levels[node]})')}];")
    for level in sorted(set(levels.values())):
        members = " ".join(f"{_quote(n)};" for n in graph.nodes if levels[n] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for f in sorted(irreducible_flags(graph)):
        flag = graph.flags[f]
        lines.append(f"  {_quote(flag.dom)} -> {_quote(flag.cod)} [label={_quote(f)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
