"""
Small named graphs and functors used across tests, docs and the API.
"""

from typing import Callable, Dict, Iterable, List, Tuple

from .functors import GraphFunctor, validate_functor
from .graph_core import IdentityAt, NestedGraph, validate_graph


def _graph(nodes: Iterable[str], flags: Iterable[Tuple[str, str, str]],
           comp: Iterable[Tuple[str, str, str]] = ()) -> NestedGraph:
    return validate_graph({
        "nodes": list(nodes),
        "flags": [{"id": f, "dom": d, "cod": c} for f, d, c in flags],
        "comp": [list(entry) for entry in comp],
    })


def point() -> NestedGraph:
    """Pt: one node, nothing else"""
    return _graph(["a"], [])


def tri() -> NestedGraph:
    """Tri: a point on a curve on a surface"""
    return _graph(["p", "c", "s"],
                  [("pc", "p", "c"), ("cs", "c", "s"), ("ps", "p", "s")],
                  [("pc", "cs", "ps")])


def loop_document() -> Dict:
    """A two-node cycle; not a nested graph"""
    return {
        "nodes": ["a", "b"],
        "flags": [{"id": "f", "dom": "a", "cod": "b"}, {"id": "g", "dom": "b", "cod": "a"}],
        "comp": [],
    }


def surf() -> NestedGraph:
    """Surf: a surface with two marked curves meeting at a point"""
    return _graph(["p", "c1", "c2", "s"],
                  [("pc1", "p", "c1"), ("pc2", "p", "c2"), ("c1s", "c1", "s"),
                   ("c2s", "c2", "s"), ("ps", "p", "s")],
                  [("pc1", "c1s", "ps"), ("pc2", "c2s", "ps")])


def two_isolated() -> NestedGraph:
    return _graph(["a", "b"], [])


def corolla(legs: int, center: str = "v", prefix: str = "l") -> NestedGraph:
    """Star with ``legs`` leaves attached to one center"""
    leaves = [f"{prefix}{i}" for i in range(1, legs + 1)]
    return _graph(leaves + [center], [(f"{leaf}{center}", leaf, center) for leaf in leaves])


def hyper_edge() -> NestedGraph:
    """One leaf decorating three flags"""
    return _graph(["h", "v1", "v2", "v3"], [(f"hv{i}", "h", f"v{i}") for i in (1, 2, 3)])


def edge_graph() -> NestedGraph:
    """One leaf p decorating two flags: an edge between c1 and c2"""
    return _graph(["p", "c1", "c2"], [("pc1", "p", "c1"), ("pc2", "p", "c2")])


def path_pair() -> NestedGraph:
    """Two disjoint arrows a->b and c->d"""
    return _graph(["a", "b", "c", "d"], [("ab", "a", "b"), ("cd", "c", "d")])


def two_corollas() -> NestedGraph:
    """Corollas c1 (legs x, p1) and c2 (legs y, p2), ready for grafting p1 onto p2"""
    return _graph(["x", "p1", "c1", "y", "p2", "c2"],
                  [("xc1", "x", "c1"), ("p1c1", "p1", "c1"), ("yc2", "y", "c2"), ("p2c2", "p2", "c2")])


def grafted() -> NestedGraph:
    """two_corollas with p1, p2 joined into the edge p"""
    return _graph(["x", "p", "c1", "y", "c2"],
                  [("xc1", "x", "c1"), ("pc1", "p", "c1"), ("yc2", "y", "c2"), ("pc2", "p", "c2")])


def joined_corolla() -> NestedGraph:
    """The corolla left after contracting the edge of ``grafted``"""
    return _graph(["x", "y", "c"], [("xc", "x", "c"), ("yc", "y", "c")])


def functor(source: NestedGraph, target: NestedGraph, node_map: Dict[str, str],
            flag_map: Dict[str, object]) -> GraphFunctor:
    """Validated functor; flag images are flag ids or IdentityAt values"""
    return validate_functor({"source": source, "target": target, "node_map": node_map, "flag_map": flag_map})


def collapse(graph: NestedGraph, node: str = "a") -> GraphFunctor:
    """Everything onto a single node"""
    return functor(graph, _graph([node], []), {n: node for n in graph.nodes},
                   {f: IdentityAt(node) for f in graph.flags})


def grafting() -> GraphFunctor:
    """Merger joining the legs p1, p2"""
    return functor(two_corollas(), grafted(),
                   {"x": "x", "p1": "p", "p2": "p", "c1": "c1", "y": "y", "c2": "c2"},
                   {"xc1": "xc1", "p1c1": "pc1", "yc2": "yc2", "p2c2": "pc2"})


def edge_contraction() -> GraphFunctor:
    """Admissible epi contracting the edge p of ``grafted``"""
    return functor(grafted(), joined_corolla(),
                   {"x": "x", "y": "y", "p": "c", "c1": "c", "c2": "c"},
                   {"xc1": "xc", "yc2": "yc", "pc1": IdentityAt("c"), "pc2": IdentityAt("c")})


def graft_and_contract() -> GraphFunctor:
    """Single step from two_corollas to joined_corolla"""
    return functor(two_corollas(), joined_corolla(),
                   {"x": "x", "y": "y", "p1": "c", "p2": "c", "c1": "c", "c2": "c"},
                   {"xc1": "xc", "yc2": "yc", "p1c1": IdentityAt("c"), "p2c2": IdentityAt("c")})


GRAPHS: Dict[str, Callable[[], NestedGraph]] = {
    "pt": point,
    "tri": tri,
    "surf": surf,
    "two-isolated": two_isolated,
    "corolla3": lambda: corolla(3),
    "hyper-edge": hyper_edge,
    "edge": edge_graph,
    "path-pair": path_pair,
    "two-corollas": two_corollas,
    "grafted": grafted,
    "joined-corolla": joined_corolla,
}


def names() -> List[str]:
    return sorted(GRAPHS)
