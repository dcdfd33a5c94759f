"""Exhaustive enumeration of dual graphs up to based isomorphism.

Shapes (multigraphs with a base, no genus yet) with E edges are grown from
shapes with E - 1 edges by adding a loop, an edge between existing vertices,
or a pendant vertex. Deleting a non-bridge edge, or the edge of a non-base
leaf when every edge is a bridge, undoes one of those moves, so every shape
is reached. Genus labels are then distributed so that the total rank is n.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import CapExceeded
from .canonical import canonical_form, canonical_key
from .graph import LabeledGraph, has_ball_vertex

MAX_RANK = 4
MAX_EDGES = 8

Shape = tuple  # (num_vertices, sorted edge tuple); base is vertex 0


def _check_caps(n: int, max_edges: int):
    if not 1 <= n <= MAX_RANK:
        raise CapExceeded(f"graph enumeration supports 1 <= n <= {MAX_RANK}, got {n}")
    if not 1 <= max_edges <= MAX_EDGES:
        raise CapExceeded(f"graph enumeration supports 1 <= max_edges <= {MAX_EDGES}, got {max_edges}")


def _shape_key(nv: int, edges) -> Shape:
    _, canon = canonical_key(nv, 0, [0] * nv, edges)
    return (nv, canon)


def _extensions(shape: Shape):
    nv, edges = shape
    for u in range(nv):
        for v in range(u, nv):
            yield nv, edges + ((u, v),)
        yield nv + 1, edges + ((u, nv),)


@lru_cache(maxsize=None)
def shapes(max_betti: int, num_edges: int) -> tuple[Shape, ...]:
    """Connected based shapes with ``num_edges`` edges and first Betti number <= max_betti."""
    if num_edges < 1:
        return ()
    if num_edges == 1:
        out = [(1, ((0, 0),)), (2, ((0, 1),))]
        return tuple(s for s in out if len(s[1]) - s[0] + 1 <= max_betti)
    found = set()
    for s in shapes(max_betti, num_edges - 1):
        for nv, edges in _extensions(s):
            if len(edges) - nv + 1 > max_betti:
                continue
            found.add(_shape_key(nv, edges))
    return tuple(sorted(found))


def _genus_labels(nv: int, total: int, floors: list[int]):
    """Every genus vector with the given lower bounds summing to ``total``."""
    spare = total - sum(floors)
    if spare < 0:
        return
    for cuts in itertools.combinations_with_replacement(range(nv), spare):
        genus = list(floors)
        for c in cuts:
            genus[c] += 1
        yield tuple(genus)


def graphs_with_edges(n: int, num_edges: int, drop_ball_vertices: bool = True) -> list[LabeledGraph]:
    """Representatives of every class with exactly ``num_edges`` edges, in canonical order."""
    found = set()
    for nv, edges in shapes(n, num_edges):
        betti = len(edges) - nv + 1
        val = [0] * nv
        for u, v in edges:
            val[u] += 1
            val[v] += 1
        floors = [1 if drop_ball_vertices and x != 0 and val[x] == 1 else 0 for x in range(nv)]
        for genus in _genus_labels(nv, n - betti, floors):
            found.add((nv, canonical_key(nv, 0, genus, edges)))
    out = [LabeledGraph(genus, 0, edges, n) for nv, (genus, edges) in sorted(found)]
    if drop_ball_vertices:
        out = [g for g in out if not has_ball_vertex(g)]
    return out


def enumerate_graphs(n: int, max_edges: int, drop_ball_vertices: bool = True) -> list[LabeledGraph]:
    """One representative per based isomorphism class with 1..max_edges edges.

    Graphs with a genus-0 leaf away from the base are left out unless
    ``drop_ball_vertices`` is false.
    """
    _check_caps(n, max_edges)
    out = []
    for e in range(1, max_edges + 1):
        out.extend(graphs_with_edges(n, e, drop_ball_vertices))
    return out


def canonical_graph(g: LabeledGraph) -> LabeledGraph:
    """Isomorphic copy in canonical labelling, base at 0."""
    (genus, edges), _ = canonical_form(g.num_vertices, g.base, g.genus, g.edges)
    return LabeledGraph(genus, 0, edges, g.n)


def is_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    return g.n == h.n and canonical_graph(g) == canonical_graph(h)
