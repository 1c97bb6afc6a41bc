"""Immutable simple-graph data model, named families, and text I/O.

Vertices are dense integers 0..n-1 so that eigenvector coordinates have a
fixed order.  Graphs are value objects: every perturbation elsewhere in the
package returns a new graph, which lets checkers hold G and G' side by side
and makes instances safe to share across workers.

Supported text formats:

* graph6, single-byte size form only (1 <= n <= 62), one graph per line;
* edge lists: first line ``n m``, then m lines ``u v``, ``#`` comments ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

VALID_FAMILIES = ("path", "cycle", "star", "complete")

MAX_VERTICES = 62  # single-byte graph6 size limit


class GraphError(ValueError):
    """Invalid graph construction input."""


class Graph6Error(ValueError):
    """Base for graph6 decoding failures."""


class Graph6CharacterError(Graph6Error):
    """Character outside the printable graph6 range 63..126."""


class Graph6SizeError(Graph6Error):
    """Multi-byte size header (n > 62) or empty input."""


class Graph6PayloadError(Graph6Error):
    """Adjacency bit payload truncated or overlong."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``edges`` holds normalized pairs (u, v) with u < v; ``degrees`` is
    cached at construction.  Instances are immutable and hashable.
    """

    n: int
    edges: frozenset
    degrees: tuple

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))

    @cached_property
    def neighbor_sets(self) -> tuple:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def neighbor_masks(self) -> tuple:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.array(self.sorted_edges, dtype=np.intp).reshape(-1, 2)
        arr.flags.writeable = False
        return arr

    @cached_property
    def degree_array(self) -> np.ndarray:
        arr = np.array(self.degrees, dtype=float)
        arr.flags.writeable = False
        return arr

    def neighbors(self, v: int) -> frozenset:
        return self.neighbor_sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class NamedFamily:
    """A member of one of the classical families: path, cycle, star, complete."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in VALID_FAMILIES:
            raise GraphError(f"unknown family kind {self.kind!r}")
        if self.n < 1:
            raise GraphError(f"family order must be >= 1, got {self.n}")
        if self.kind == "cycle" and self.n < 3:
            raise GraphError(f"cycle requires n >= 3, got {self.n}")
        if self.n > MAX_VERTICES:
            raise GraphError(f"order {self.n} exceeds the supported maximum {MAX_VERTICES}")


def from_edges(n: int, edges) -> Graph:
    """Build a graph from a vertex count and edge pairs.

    Pairs are normalized to (min, max) and deduplicated.  Self-loops and
    out-of-range endpoints are rejected with the offending pair.
    """
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
    norm = set()
    for pair in edges:
        u, v = pair
        if u == v:
            raise GraphError(f"self-loop rejected: ({u}, {v})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge endpoint out of range 0..{n - 1}: ({u}, {v})")
        norm.add((min(u, v), max(u, v)))
    degrees = [0] * n
    for u, v in norm:
        degrees[u] += 1
        degrees[v] += 1
    return Graph(n=n, edges=frozenset(norm), degrees=tuple(degrees))


def make_named(family: NamedFamily) -> Graph:
    """Canonical labeled representative of a named family.

    Path: 0-1-...-(n-1).  Cycle: path plus edge (n-1, 0).  Star: center 0.
    Complete: all pairs.
    """
    n = family.n
    if family.kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif family.kind == "cycle":
        edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    elif family.kind == "star":
        edges = [(0, i) for i in range(1, n)]
    else:  # complete
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return from_edges(n, edges)


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from vertex 0; a single vertex is connected."""
    if g.n == 1:
        return True
    seen = {0}
    frontier = [0]
    nbrs = g.neighbor_sets
    while frontier:
        nxt = []
        for v in frontier:
            for u in nbrs[v]:
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return len(seen) == g.n


def volume(g: Graph) -> int:
    """Sum of all vertex degrees (= 2|E|)."""
    return sum(g.degrees)


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Subgraph induced on ``vertices``, relabeled densely in sorted order."""
    vs = sorted(set(vertices))
    if not vs:
        raise GraphError("induced subgraph needs at least one vertex")
    for v in vs:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range 0..{g.n - 1}")
    index = {v: i for i, v in enumerate(vs)}
    keep = set(vs)
    edges = [(index[u], index[v]) for u, v in g.edges if u in keep and v in keep]
    return from_edges(len(vs), edges)


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _pair_order(n: int):
    """Upper-triangle pairs in graph6 column-major order: (0,1); (0,2),(1,2); ..."""
    for j in range(1, n):
        for i in range(j):
            yield (i, j)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line (single-byte size header, n <= 62)."""
    s = text.strip()
    if not s:
        raise Graph6SizeError("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise Graph6CharacterError(f"character {ch!r} outside graph6 range 63..126")
    header = ord(s[0]) - 63
    if header >= 63:
        raise Graph6SizeError("multi-byte graph6 size headers are not supported (n > 62)")
    n = header
    if n < 1:
        raise Graph6SizeError("graph6 order 0 is not supported")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    payload = s[1:]
    if len(payload) < need:
        raise Graph6PayloadError(
            f"truncated graph6 payload: need {need} characters for n={n}, got {len(payload)}")
    if len(payload) > need:
        raise Graph6PayloadError(
            f"overlong graph6 payload: need {need} characters for n={n}, got {len(payload)}")
    bits = []
    for ch in payload:
        val = ord(ch) - 63
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    edges = [pair for pair, bit in zip(_pair_order(n), bits) if bit]
    return from_edges(n, edges)


def to_graph6(g: Graph) -> str:
    """Encode a graph as a canonical single-line graph6 string."""
    if not 1 <= g.n <= MAX_VERTICES:
        raise Graph6SizeError(f"graph6 supports 1..{MAX_VERTICES} vertices, got {g.n}")
    out = [chr(63 + g.n)]
    edge_set = g.edges
    bits = [1 if pair in edge_set else 0 for pair in _pair_order(g.n)]
    while len(bits) % 6:
        bits.append(0)
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: a header line ``n m`` then m lines ``u v``."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"edge-list header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"non-integer edge-list header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise GraphError(f"edge-list declares {m} edges but has {len(lines) - 1} edge lines")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"malformed edge line {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise GraphError(f"non-integer edge line {line!r}") from exc
    return from_edges(n, edges)
