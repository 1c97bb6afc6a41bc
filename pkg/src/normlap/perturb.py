"""The three local graph operations, with explicit vertex bookkeeping.

* Edge subdivision: replace an edge uv by the path u-w-v through a fresh
  vertex w (appended at index n, so existing indices survive unchanged).
* Vertex identification: glue two graphs at one vertex; degrees add at the
  glued vertex and volumes are additive.
* Edge transfer: move edges from v's private neighbors over to u; the
  degree shifts by s at both endpoints and the volume is preserved.

Each operation returns a PerturbResult carrying the new graph plus the
correspondence maps a checker needs to carry vertex functions from the old
graph to the new one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import Graph, GraphError, from_edges, is_connected


@dataclass(frozen=True)
class PerturbResult:
    """Perturbed graph plus vertex-correspondence maps.

    ``old_to_new`` maps the (first) input graph's indices into the result;
    ``old_to_new_2`` is present only for identification and maps the second
    graph (with the glued vertex folded onto ``merged_vertex``).
    ``disconnected`` flags an edge transfer that cut the graph; the
    operation still succeeds because lambda_2 of the result is then 0 and
    the monotonicity checks remain evaluable.
    """

    result: Graph
    old_to_new: dict
    new_vertices: tuple = ()
    merged_vertex: int | None = None
    old_to_new_2: dict | None = None
    disconnected: bool = False


def _identity_map(n: int) -> dict:
    return {v: v for v in range(n)}


def subdivide_edge(g: Graph, u: int, v: int) -> PerturbResult:
    """Insert a new vertex w of degree 2 into the edge uv (w gets index n)."""
    key = (min(u, v), max(u, v))
    if key not in g.edges:
        raise GraphError(f"({u}, {v}) is not an edge")
    w = g.n
    edges = set(g.edges)
    edges.remove(key)
    edges.add((u, w))
    edges.add((v, w))
    return PerturbResult(
        result=from_edges(g.n + 1, edges),
        old_to_new=_identity_map(g.n),
        new_vertices=(w,),
    )


def subdivision_graph(g: Graph, edges) -> PerturbResult:
    """Subdivide each listed edge once (listed pairs are treated as a set).

    Equivalent to composing single subdivisions; the inserted vertices take
    indices n, n+1, ... in sorted edge order, so the outcome is
    deterministic and order-independent up to that relabeling.
    """
    todo = sorted({(min(u, v), max(u, v)) for u, v in edges})
    for pair in todo:
        if pair not in g.edges:
            raise GraphError(f"{pair} is not an edge")
    current = g
    new_vertices = []
    for u, v in todo:
        step = subdivide_edge(current, u, v)
        current = step.result
        new_vertices.extend(step.new_vertices)
    return PerturbResult(
        result=current,
        old_to_new=_identity_map(g.n),
        new_vertices=tuple(new_vertices),
    )


def identify(g1: Graph, u: int, g2: Graph, v: int) -> PerturbResult:
    """Glue g2 onto g1 by identifying g2's vertex v with g1's vertex u.

    g1 keeps its labels 0..m-1; the other vertices of g2 map onto
    m, m+1, ... in ascending original order.  The merged vertex ends up
    with degree d1(u) + d2(v) and the volumes add exactly.
    """
    if not 0 <= u < g1.n:
        raise GraphError(f"vertex {u} out of range for the first graph")
    if not 0 <= v < g2.n:
        raise GraphError(f"vertex {v} out of range for the second graph")
    if not is_connected(g1) or not is_connected(g2):
        raise GraphError("identification requires two connected graphs")
    m = g1.n
    map2 = {}
    nxt = m
    for x in range(g2.n):
        if x == v:
            map2[x] = u
        else:
            map2[x] = nxt
            nxt += 1
    edges = set(g1.edges)
    for a, b in g2.edges:
        edges.add((map2[a], map2[b]))
    return PerturbResult(
        result=from_edges(m + g2.n - 1, edges),
        old_to_new=_identity_map(m),
        merged_vertex=u,
        old_to_new_2=map2,
    )


def transfer_edges(g: Graph, u: int, v: int, targets) -> PerturbResult:
    """Replace the edges v-t by u-t for each target t.

    Every target must be a neighbor of v but not of u (and not u itself),
    so no edge is duplicated; the volume is unchanged.  The result may be
    disconnected (transferring all of v's edges isolates v); this is
    reported via the flag rather than an error.
    """
    if u == v:
        raise GraphError("transfer endpoints must differ")
    ts = list(targets)
    if not ts:
        raise GraphError("need at least one target")
    if len(set(ts)) != len(ts):
        raise GraphError(f"targets must be distinct, got {ts}")
    nv = g.neighbor_sets[v]
    nu = g.neighbor_sets[u]
    for t in ts:
        if t == u:
            raise GraphError(f"target {t} equals u")
        if t not in nv:
            raise GraphError(f"target {t} is not a neighbor of v={v}")
        if t in nu:
            raise GraphError(f"target {t} is already a neighbor of u={u}")
    edges = set(g.edges)
    for t in ts:
        edges.remove((min(v, t), max(v, t)))
        edges.add((min(u, t), max(u, t)))
    result = from_edges(g.n, edges)
    return PerturbResult(
        result=result,
        old_to_new=_identity_map(g.n),
        disconnected=not is_connected(result),
    )
