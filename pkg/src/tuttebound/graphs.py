"""Multigraphs, two-terminal graphs, flows, and block decomposition.

Vertices are integers ``0..n-1``.  Edges are an ordered tuple of endpoint
pairs; the position of an edge in that tuple is its identity, so parallel
edges are distinct and weight maps key on edge indices.  Loops are allowed
in raw input, but flow and coloring operations reject them.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence


class GraphError(ValueError):
    """Malformed graph, or an operation applied outside its domain."""


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise GraphError(f"edge ({a},{b}) has endpoint outside 0..{self.vertex_count - 1}")
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.edges)

    def require_loopless(self, what: str) -> None:
        if self.has_loops():
            raise GraphError(f"{what} requires a loopless graph")

    def degree(self, v: int) -> int:
        """Degree of v; a loop at v counts twice."""
        d = 0
        for a, b in self.edges:
            d += (a == v) + (b == v)
        return d

    def incidence(self) -> list[list[int]]:
        """For each vertex, the indices of incident edges (loops listed once)."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (a, b) in enumerate(self.edges):
            inc[a].append(i)
            if b != a:
                inc[b].append(i)
        return inc

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists."""
        seen = [False] * self.vertex_count
        inc = self.incidence()
        comps = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            comp = [start]
            seen[start] = True
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for i in inc[v]:
                    a, b = self.edges[i]
                    u = b if a == v else a
                    if not seen[u]:
                        seen[u] = True
                        comp.append(u)
                        queue.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def with_edge(self, a: int, b: int) -> "Multigraph":
        return Multigraph(self.vertex_count, self.edges + ((a, b),))

    def relabeled(self, vertex_map: Sequence[int], new_count: int) -> "Multigraph":
        """Apply vertex_map[old] -> new to every endpoint."""
        return Multigraph(new_count, tuple((vertex_map[a], vertex_map[b]) for a, b in self.edges))

    def to_json(self, s: int | None = None, t: int | None = None) -> str:
        record: dict = {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}
        if s is not None:
            record["s"] = s
        if t is not None:
            record["t"] = t
        return json.dumps(record)


@dataclass(frozen=True)
class TwoTerminalGraph:
    graph: Multigraph
    s: int
    t: int

    def __post_init__(self) -> None:
        n = self.graph.vertex_count
        if not (0 <= self.s < n and 0 <= self.t < n):
            raise GraphError("terminal out of range")
        if self.s == self.t:
            raise GraphError("terminals must be distinct")


def load_graph(source: str | Path) -> tuple[Multigraph, int | None, int | None]:
    """Parse the JSON record {"vertices": n, "edges": [[a,b],...], "s":?, "t":?}.

    ``source`` may be a path or a JSON string.  Returns (graph, s, t) with the
    terminals None when absent.
    """
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        text = Path(source).read_text()
    try:
        record = json.loads(text)
        g = Multigraph(int(record["vertices"]), tuple((int(a), int(b)) for a, b in record["edges"]))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise GraphError(f"bad graph record: {exc}") from exc
    s = record.get("s")
    t = record.get("t")
    return g, (None if s is None else int(s)), (None if t is None else int(t))


# ---------------------------------------------------------------------------
# Flows
# ---------------------------------------------------------------------------

def max_flow(g: Multigraph | TwoTerminalGraph, x: int | None = None, y: int | None = None) -> int:
    """Maximum number of edge-disjoint x-y paths (unit capacity per edge).

    Accepts either a TwoTerminalGraph (flow between its terminals) or a
    Multigraph plus an explicit vertex pair.  Parallel edges count
    separately; loops are rejected.
    """
    if isinstance(g, TwoTerminalGraph):
        x, y = g.s, g.t
        g = g.graph
    if x is None or y is None:
        raise GraphError("max_flow needs a vertex pair")
    if not (0 <= x < g.vertex_count and 0 <= y < g.vertex_count):
        raise GraphError("flow endpoints out of range")
    if x == y:
        raise GraphError("flow endpoints must be distinct")
    g.require_loopless("max_flow")

    # Each undirected edge becomes arcs 2i (a->b) and 2i+1 (b->a), capacity 1.
    # Arc j and j^1 are reverses of each other.
    m = g.edge_count
    head = [0] * (2 * m)
    out: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for i, (a, b) in enumerate(g.edges):
        head[2 * i] = b
        head[2 * i + 1] = a
        out[a].append(2 * i)
        out[b].append(2 * i + 1)
    flow = [0] * (2 * m)

    total = 0
    while True:
        parent_arc = [-1] * g.vertex_count
        parent_arc[x] = -2
        queue = deque([x])
        while queue and parent_arc[y] == -1:
            v = queue.popleft()
            for j in out[v]:
                u = head[j]
                if parent_arc[u] == -1 and flow[j] - flow[j ^ 1] < 1:
                    parent_arc[u] = j
                    queue.append(u)
        if parent_arc[y] == -1:
            return total
        v = y
        while v != x:
            j = parent_arc[v]
            if flow[j ^ 1] > 0:
                flow[j ^ 1] -= 1
            else:
                flow[j] += 1
            v = head[j ^ 1]
        total += 1


def maxmaxflow(g: Multigraph, limit: int | None = None) -> int:
    """Maximum of max_flow over all unordered vertex pairs.

    With limit set, returns early with the first value found above it
    (exact whenever the result is <= limit; callers use this to filter).
    """
    if g.vertex_count < 2:
        raise GraphError("maxmaxflow needs at least 2 vertices")
    g.require_loopless("maxmaxflow")
    best = 0
    for x in range(g.vertex_count):
        for y in range(x + 1, g.vertex_count):
            f = max_flow(g, x, y)
            if f > best:
                best = f
                if limit is not None and best > limit:
                    return best
    return best


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """A maximal nonseparable subgraph, relabeled to 0..k-1.

    vertices[i] is the original id of block vertex i; edge_indices[j] is the
    original index of block edge j.  A lone loop forms its own block, and an
    isolated vertex is a block with no edges.
    """
    graph: Multigraph
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]


def blocks(g: Multigraph) -> list[Block]:
    """Block decomposition; the blocks partition the edge set."""
    inc = g.incidence()
    visited_edge = [False] * g.edge_count
    num = [0] * g.vertex_count          # DFS numbers, 1-based; 0 = unvisited
    low = [0] * g.vertex_count
    out: list[Block] = []
    loop_edges = [i for i, (a, b) in enumerate(g.edges) if a == b]
    for i in loop_edges:
        visited_edge[i] = True
        v = g.edges[i][0]
        out.append(Block(Multigraph(1, ((0, 0),)), (v,), (i,)))

    counter = 1
    for root in range(g.vertex_count):
        if num[root]:
            continue
        # Iterative DFS; an explicit stack keeps deep series chains safe.
        num[root] = low[root] = counter
        counter += 1
        edge_stack: list[int] = []
        stack: list[tuple[int, int, Iterator[int]]] = [(root, -1, iter(inc[root]))]
        touched_any_edge = False
        while stack:
            v, in_edge, it = stack[-1]
            advanced = False
            for j in it:
                if visited_edge[j]:
                    continue
                a, b = g.edges[j]
                u = b if a == v else a
                visited_edge[j] = True
                touched_any_edge = True
                edge_stack.append(j)
                if num[u] == 0:
                    num[u] = low[u] = counter
                    counter += 1
                    stack.append((u, j, iter(inc[u])))
                    advanced = True
                    break
                low[v] = min(low[v], num[u])
            if advanced:
                continue
            stack.pop()
            if stack:
                pv = stack[-1][0]
                low[pv] = min(low[pv], low[v])
                if low[v] >= num[pv]:
                    # pv is a cut vertex (or the root): pop one block.
                    members: list[int] = []
                    while True:
                        j = edge_stack.pop()
                        members.append(j)
                        if j == in_edge:
                            break
                    out.append(_make_block(g, members))
        if not touched_any_edge and not inc[root]:
            out.append(Block(Multigraph(1, ()), (root,), ()))
        assert not edge_stack
    return out


def _make_block(g: Multigraph, edge_members: list[int]) -> Block:
    edge_members = sorted(edge_members)
    vmap: dict[int, int] = {}
    verts: list[int] = []
    pairs = []
    for j in edge_members:
        a, b = g.edges[j]
        for v in (a, b):
            if v not in vmap:
                vmap[v] = len(verts)
                verts.append(v)
        pairs.append((vmap[a], vmap[b]))
    return Block(Multigraph(len(verts), tuple(pairs)), tuple(verts), tuple(edge_members))


# ---------------------------------------------------------------------------
# Gadget insertion
# ---------------------------------------------------------------------------

def insert_2term(h: Multigraph, e_star: int, g: TwoTerminalGraph,
                 orientation: tuple[int, int] | None = None) -> Multigraph:
    """Replace edge e_star of h by the 2-terminal graph g.

    The edge is deleted and g is glued in with s on the first endpoint and t
    on the second (or on the given orientation, which must list e_star's
    endpoints).  Edge order of the result: h's edges without e_star, in their
    original order, then g's edges.
    """
    if not (0 <= e_star < h.edge_count):
        raise GraphError("invalid edge index")
    a, b = h.edges[e_star]
    if orientation is not None:
        if set(orientation) != {a, b} and orientation != (a, b):
            raise GraphError("orientation must list the endpoints of e_star")
        a, b = orientation
    gg = g.graph
    # Nonterminal vertices of g get fresh ids after h's.
    fresh = h.vertex_count
    vmap: dict[int, int] = {g.s: a, g.t: b}
    for v in range(gg.vertex_count):
        if v not in vmap:
            vmap[v] = fresh
            fresh += 1
    new_edges = [e for i, e in enumerate(h.edges) if i != e_star]
    new_edges.extend((vmap[u], vmap[w]) for u, w in gg.edges)
    return Multigraph(fresh, tuple(new_edges))


# ---------------------------------------------------------------------------
# Small constructions (used by tests and generators)
# ---------------------------------------------------------------------------

def disjoint_union(g1: Multigraph, g2: Multigraph) -> Multigraph:
    shift = g1.vertex_count
    edges = g1.edges + tuple((a + shift, b + shift) for a, b in g2.edges)
    return Multigraph(g1.vertex_count + g2.vertex_count, edges)


def glue_at_vertex(g1: Multigraph, v1: int, g2: Multigraph, v2: int) -> Multigraph:
    """Identify v1 of g1 with v2 of g2 (cut-vertex gluing)."""
    shift = g1.vertex_count
    def remap(v: int) -> int:
        if v == v2:
            return v1
        return v + shift - (1 if v > v2 else 0)
    edges = g1.edges + tuple((remap(a), remap(b)) for a, b in g2.edges)
    return Multigraph(g1.vertex_count + g2.vertex_count - 1, edges)


def banana(r: int) -> Multigraph:
    """Two vertices joined by r parallel edges."""
    if r < 1:
        raise GraphError("need at least one edge")
    return Multigraph(2, tuple((0, 1) for _ in range(r)))


def path_graph(k: int) -> Multigraph:
    """Path with k edges on k+1 vertices."""
    if k < 1:
        raise GraphError("need at least one edge")
    return Multigraph(k + 1, tuple((i, i + 1) for i in range(k)))


def cycle_graph(k: int) -> Multigraph:
    if k < 1:
        raise GraphError("need at least one edge")
    if k == 1:
        return Multigraph(1, ((0, 0),))
    return Multigraph(k, tuple((i, (i + 1) % k) for i in range(k)))
