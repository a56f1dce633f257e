"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the code paths it checks:
the min-cut oracle enumerates edge subsets, the series-parallel test
follows the recursive definition (try all binary splits), and the random
generators build expressions before the library ever sees a graph.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from tuttebound.graphs import Multigraph, TwoTerminalGraph
from tuttebound.sp import SPLeaf, SPOp, SPExpr


def min_cut_brute(g: Multigraph, x: int, y: int) -> int:
    """Smallest edge set whose removal separates x from y; exhaustive."""
    m = g.edge_count

    def connected_without(removed: int) -> bool:
        adj = [[] for _ in range(g.vertex_count)]
        for i, (a, b) in enumerate(g.edges):
            if not (removed >> i) & 1 and a != b:
                adj[a].append(b)
                adj[b].append(a)
        seen = {x}
        stack = [x]
        while stack:
            v = stack.pop()
            if v == y:
                return True
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return False

    best = m
    for mask in range(1 << m):
        size = mask.bit_count()
        if size < best and not connected_without(mask):
            best = size
    return best


def is_2tsp_definitional(g: TwoTerminalGraph) -> bool:
    """2-terminal series-parallel by the recursive definition, memoized."""
    edges = g.graph.edges

    def verts(edge_ids: frozenset) -> set[int]:
        out: set[int] = set()
        for i in edge_ids:
            out.update(edges[i])
        return out

    memo: dict[tuple, bool] = {}

    def check(edge_ids: frozenset, s: int, t: int) -> bool:
        key = (edge_ids, s, t) if s <= t else (edge_ids, t, s)
        if key in memo:
            return memo[key]
        memo[key] = False
        if len(edge_ids) == 1:
            (i,) = edge_ids
            memo[key] = set(edges[i]) == {s, t}
            return memo[key]
        ids = sorted(edge_ids)
        anchored = ids[0]
        rest = ids[1:]
        for k in range(len(rest) + 1):
            for combo in combinations(rest, k):
                e1 = frozenset({anchored, *combo})
                e2 = edge_ids - e1
                if not e2:
                    continue
                v1, v2 = verts(e1), verts(e2)
                shared = v1 & v2
                # Parallel split: parts share exactly the terminals.
                if shared == {s, t}:
                    if check(e1, s, t) and check(e2, s, t):
                        memo[key] = True
                        return True
                # Series split: parts share one inner junction.
                if len(shared) == 1:
                    (w,) = shared
                    if w not in (s, t):
                        if s in v1 and t in v2 and check(e1, s, w) and check(e2, w, t):
                            memo[key] = True
                            return True
                        if s in v2 and t in v1 and check(e2, s, w) and check(e1, w, t):
                            memo[key] = True
                            return True
        return memo[key]

    if g.graph.edge_count == 0:
        return False
    return check(frozenset(range(g.graph.edge_count)), g.s, g.t)


def random_sp_ast(rng: random.Random, leaves: int, bases: tuple[str, ...] = ("e",),
                  series_bias: float = 0.5) -> SPExpr:
    """Random expression with exactly `leaves` leaf symbols."""
    if leaves <= 1:
        return SPLeaf(rng.choice(bases))
    kind = "s" if rng.random() < series_bias else "p"
    pieces = rng.randint(2, min(3, leaves))
    cuts = sorted(rng.sample(range(1, leaves), pieces - 1))
    sizes = [b - a for a, b in zip([0, *cuts], [*cuts, leaves])]
    return SPOp(kind, tuple(random_sp_ast(rng, sz, bases, series_bias)
                            for sz in sizes))


def random_multigraph(rng: random.Random, max_vertices: int = 6,
                      max_edges: int = 10, ensure_connected: bool = False) -> Multigraph:
    n = rng.randint(2, max_vertices)
    m = rng.randint(1, max_edges)
    edges = []
    if ensure_connected:
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            a = order[rng.randint(0, i - 1)]
            edges.append((a, order[i]))
        m = max(m, len(edges))
    while len(edges) < m:
        a, b = rng.randint(0, n - 1), rng.randint(0, n - 1)
        if a != b:
            edges.append((a, b))
    return Multigraph(n, tuple(edges))


def random_small_fraction(rng: random.Random) -> Fraction:
    num = rng.randint(-3, 3)
    den = rng.randint(1, 4)
    if num == 0:
        num = 1
    return Fraction(num, den)
