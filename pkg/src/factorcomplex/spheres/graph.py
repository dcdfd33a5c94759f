"""Genus-labelled based multigraphs: the dual graphs of sphere systems.

Vertices are ``0..V-1``; ``genus[x]`` is the rank of the fundamental group of
the complementary piece, ``base`` is the piece holding the boundary sphere.
Edges are unordered pairs ``(u, v)`` with ``u <= v``; loops are ``(x, x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Edge = tuple[int, int]


def _norm(e: Sequence[int]) -> Edge:
    u, v = e
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class LabeledGraph:
    genus: tuple[int, ...]
    base: int
    edges: tuple[Edge, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "genus", tuple(self.genus))
        object.__setattr__(self, "edges", tuple(sorted(_norm(e) for e in self.edges)))
        self.validate()

    @classmethod
    def build(cls, genus: Sequence[int], edges: Iterable[Sequence[int]], base: int = 0, n: int | None = None):
        """Graph with ``n`` inferred from the total-rank identity when omitted."""
        edges = [_norm(e) for e in edges]
        if n is None:
            n = len(edges) - len(genus) + 1 + sum(genus)
        return cls(tuple(genus), base, tuple(edges), n)

    def validate(self):
        nv = len(self.genus)
        if nv == 0:
            raise ValueError("graph has no vertices")
        if not 0 <= self.base < nv:
            raise ValueError(f"base {self.base} is not a vertex")
        if any(g < 0 for g in self.genus):
            raise ValueError("genus labels must be non-negative")
        if not self.edges:
            raise ValueError("a sphere system has at least one sphere")
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise ValueError(f"edge {(u, v)} has an endpoint outside 0..{nv - 1}")
        if len(self._components(range(nv))) != 1:
            raise ValueError("graph is disconnected")
        if self.total_rank != self.n:
            raise ValueError(f"total rank {self.total_rank} differs from n = {self.n}")

    @property
    def num_vertices(self) -> int:
        return len(self.genus)

    @property
    def first_betti(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    @property
    def total_rank(self) -> int:
        return self.first_betti + sum(self.genus)

    def valence(self, x: int) -> int:
        return sum((u == x) + (v == x) for u, v in self.edges)

    def valences(self) -> list[int]:
        out = [0] * self.num_vertices
        for u, v in self.edges:
            out[u] += 1
            out[v] += 1
        return out

    def loops_at(self, x: int) -> int:
        return sum(1 for u, v in self.edges if u == v == x)

    def _components(self, vertices: Iterable[int]) -> list[set[int]]:
        keep = set(vertices)
        adj: dict[int, set[int]] = {x: set() for x in keep}
        for u, v in self.edges:
            if u in keep and v in keep:
                adj[u].add(v)
                adj[v].add(u)
        comps, seen = [], set()
        for x in sorted(keep):
            if x in seen:
                continue
            comp, stack = {x}, [x]
            while stack:
                y = stack.pop()
                for z in adj[y]:
                    if z not in comp:
                        comp.add(z)
                        stack.append(z)
            seen |= comp
            comps.append(comp)
        return comps

    def punctured_components(self) -> list[tuple[str, set[int]]]:
        """Pieces of the realization with the base point removed.

        Each loop at the base becomes an open arc of its own; every other
        piece is a component of the graph minus the base vertex, carrying the
        half-open base edges that end in it.
        """
        arcs = [("loop", set()) for _ in range(self.loops_at(self.base))]
        rest = [("vertices", c) for c in self._components(x for x in range(self.num_vertices) if x != self.base)]
        return arcs + rest

    def to_json(self) -> dict:
        return {
            "format": "lg-v1",
            "n": self.n,
            "base": self.base,
            "vertices": [{"id": i, "genus": g} for i, g in enumerate(self.genus)],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabeledGraph":
        if data.get("format") != "lg-v1":
            raise ValueError("not an lg-v1 graph")
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        if [v["id"] for v in verts] != list(range(len(verts))):
            raise ValueError("vertex ids must be 0..V-1")
        return cls(tuple(v["genus"] for v in verts), data["base"], tuple(tuple(e) for e in data["edges"]), data["n"])

    def __str__(self):
        es = " ".join(f"{u}-{v}" for u, v in self.edges)
        gs = ",".join(map(str, self.genus))
        return f"LG(n={self.n}, base={self.base}, genus=[{gs}], edges=[{es}])"


def degree(g: LabeledGraph) -> int:
    """Sum over non-base vertices of valence - 2 + 2 * genus."""
    val = g.valences()
    return sum(val[x] - 2 + 2 * g.genus[x] for x in range(g.num_vertices) if x != g.base)


def pillar_edges(g: LabeledGraph) -> list[int]:
    """Indices of the non-loop edges incident to the base."""
    return [i for i, (u, v) in enumerate(g.edges) if u != v and g.base in (u, v)]


def is_cut_basepoint(g: LabeledGraph) -> bool:
    """Whether removing the base point disconnects the realization."""
    return len(g.punctured_components()) > 1


def in_FCDg(g: LabeledGraph) -> bool:
    return g.genus[g.base] > 0 or is_cut_basepoint(g)


def in_FCDg_loose(g: LabeledGraph) -> bool:
    """Variant in which any loop at the base is taken to witness cutness."""
    return in_FCDg(g) or (g.genus[g.base] == 0 and g.loops_at(g.base) > 0)


def is_cut(g: LabeledGraph) -> bool:
    """Simply connected base piece that is also a cut vertex."""
    return g.genus[g.base] == 0 and is_cut_basepoint(g)


def has_ball_vertex(g: LabeledGraph) -> bool:
    """A genus-0 non-base vertex of valence 1: its single sphere bounds a ball."""
    val = g.valences()
    return any(val[x] == 1 and g.genus[x] == 0 for x in range(g.num_vertices) if x != g.base)


def collapse_edge(g: LabeledGraph, e: int | Edge) -> LabeledGraph:
    """Forget one sphere: a loop raises its vertex's genus, a non-loop merges its ends.

    ``e`` is an edge index or an endpoint pair. The merged vertex keeps the
    smaller id, or the base id when the base is an endpoint.
    """
    if isinstance(e, int):
        if not 0 <= e < len(g.edges):
            raise KeyError(f"no edge with index {e}")
        idx = e
    else:
        pair = _norm(e)
        if pair not in g.edges:
            raise KeyError(f"no edge {pair}")
        idx = g.edges.index(pair)
    if len(g.edges) == 1:
        raise ValueError("collapsing the only sphere leaves an empty system")
    u, v = g.edges[idx]
    rest = g.edges[:idx] + g.edges[idx + 1:]
    if u == v:
        genus = list(g.genus)
        genus[u] += 1
        return LabeledGraph(tuple(genus), g.base, rest, g.n)
    keep, gone = (u, v) if u == g.base or (v != g.base and u < v) else (v, u)
    genus = list(g.genus)
    genus[keep] += genus[gone]
    del genus[gone]

    def ren(x):
        x = keep if x == gone else x
        return x - 1 if x > gone else x

    return LabeledGraph(tuple(genus), ren(g.base), tuple((ren(a), ren(b)) for a, b in rest), g.n)


def decomposition_ranks(g: LabeledGraph) -> list[int]:
    """Ranks of the free factors cut out by the pieces of the punctured base, ascending."""
    if not is_cut(g):
        raise ValueError("decomposition ranks need a genus-0 cut base")
    out = []
    for kind, comp in g.punctured_components():
        if kind == "loop":
            out.append(1)
            continue
        e = sum(1 for a, b in g.edges if (a in comp or a == g.base) and (b in comp or b == g.base) and (a in comp or b in comp))
        out.append(e - len(comp) + sum(g.genus[x] for x in comp))
    return sorted(out)


def tau_d_graph(ranks: Sequence[int]) -> LabeledGraph:
    """Star with a genus-0 base and one leaf of genus r for each rank r."""
    ranks = list(ranks)
    if not ranks:
        raise ValueError("need at least one rank")
    if any(r < 1 for r in ranks):
        raise ValueError("ranks must be positive")
    return LabeledGraph((0, *ranks), 0, tuple((0, i + 1) for i in range(len(ranks))), sum(ranks))

