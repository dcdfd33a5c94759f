"""Stallings subgroup graphs: folding, membership, intersection.

A folded core graph is stored canonically: vertices are numbered in the
order a breadth-first walk from the base reaches them, trying labels in the
order x_1, x_1^-1, x_2, x_2^-1, ...; since folded graphs are deterministic
automata that numbering is unique, so equal subgroups give equal graphs.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

from .words import Word, reduce_letters


class _Folder:
    """Union-find folding of a labelled graph, edges held in both directions."""

    def __init__(self):
        self.parent: list[int] = []
        self.adj: list[dict[int, int]] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def merge(self, a: int, b: int):
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            moved, self.adj[b] = self.adj[b], {}
            for lab, t in moved.items():
                if lab in self.adj[a]:
                    stack.append((self.adj[a][lab], t))
                else:
                    self.adj[a][lab] = t

    def add_edge(self, u: int, lab: int, v: int):
        u, v = self.find(u), self.find(v)
        # an existing edge with the same label at either end forces a fold
        if lab in self.adj[u]:
            self.merge(self.adj[u][lab], v)
            return
        if -lab in self.adj[v]:
            self.merge(self.adj[v][-lab], u)
            return
        self.adj[u][lab] = v
        self.adj[v][-lab] = u

    def edges(self) -> list[tuple[int, int, int]]:
        out = set()
        for v in range(len(self.parent)):
            if self.find(v) != v:
                continue
            for lab, t in self.adj[v].items():
                t = self.find(t)
                if lab > 0:
                    out.add((v, lab, t))
                else:
                    out.add((t, -lab, v))
        return sorted(out)


def _core_canonical(n: int, edges: Iterable[tuple[int, int, int]], base: int):
    """Prune hanging trees away from ``base`` and renumber canonically."""
    adj: dict[int, dict[int, int]] = {base: {}}
    for u, lab, v in edges:
        adj.setdefault(u, {})[lab] = v
        adj.setdefault(v, {})[-lab] = u
    degree = {v: len(a) for v, a in adj.items()}
    queue = deque(v for v, d in degree.items() if d <= 1 and v != base)
    alive = set(adj)
    while queue:
        v = queue.popleft()
        if v not in alive or v == base or degree[v] > 1:
            continue
        alive.discard(v)
        for lab, t in adj[v].items():
            if t in alive:
                del adj[t][-lab]
                degree[t] -= 1
                if degree[t] <= 1 and t != base:
                    queue.append(t)
        adj[v] = {}
    order = [lab for i in range(1, n + 1) for lab in (i, -i)]
    number = {base: 0}
    bfs = deque([base])
    while bfs:
        v = bfs.popleft()
        for lab in order:
            t = adj[v].get(lab)
            if t is not None and t not in number:
                number[t] = len(number)
                bfs.append(t)
    out = set()
    for v in number:
        for lab, t in adj[v].items():
            if lab > 0:
                out.add((number[v], lab, number[t]))
    return len(number), tuple(sorted(out))


class StallingsGraph:
    """Folded based core graph of a finitely generated subgroup of F_n."""

    def __init__(self, n: int, num_vertices: int, edges: Sequence[tuple[int, int, int]]):
        self.n = n
        self.num_vertices = num_vertices
        self.edges = tuple(edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]], base: int = 0) -> "StallingsGraph":
        f = _Folder()
        edges = list(edges)
        size = max([base] + [max(u, v) for u, _, v in edges]) + 1
        for _ in range(size):
            f.new_vertex()
        for u, lab, v in edges:
            f.add_edge(u, lab, v)
        return cls(n, *_core_canonical(n, f.edges(), f.find(base)))

    @property
    def key(self):
        return (self.n, self.num_vertices, self.edges)

    def __eq__(self, other):
        return isinstance(other, StallingsGraph) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"StallingsGraph(n={self.n}, V={self.num_vertices}, E={len(self.edges)}, rank={self.rank})"

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    @property
    def is_whole_group(self) -> bool:
        return self.num_vertices == 1 and len(self.edges) == self.n

    @cached_property
    def transitions(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [{} for _ in range(self.num_vertices)]
        for u, lab, v in self.edges:
            out[u][lab] = v
            out[v][-lab] = u
        return out

    def is_folded(self) -> bool:
        seen = set()
        for u, lab, v in self.edges:
            if (u, lab) in seen or (v, -lab) in seen:
                return False
            seen.update({(u, lab), (v, -lab)})
        return True

    def is_core(self) -> bool:
        deg = [0] * self.num_vertices
        for u, _, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return all(d >= 2 for d in deg[1:])

    def reads(self, w: Word, start: int = 0) -> int | None:
        """End vertex of the path spelling ``w`` from ``start``, if it exists."""
        v = start
        tr = self.transitions
        for x in w.letters:
            v = tr[v].get(x)
            if v is None:
                return None
        return v

    @cached_property
    def generators(self) -> tuple[Word, ...]:
        """Free basis read off a breadth-first spanning tree."""
        order = [lab for i in range(1, self.n + 1) for lab in (i, -i)]
        path: dict[int, tuple[int, ...]] = {0: ()}
        tree = set()
        bfs = deque([0])
        tr = self.transitions
        while bfs:
            v = bfs.popleft()
            for lab in order:
                t = tr[v].get(lab)
                if t is not None and t not in path:
                    path[t] = path[v] + (lab,)
                    tree.add((v, lab, t) if lab > 0 else (t, -lab, v))
                    bfs.append(t)
        gens = []
        for u, lab, v in self.edges:
            if (u, lab, v) in tree:
                continue
            back = tuple(-x for x in reversed(path[v]))
            gens.append(Word(reduce_letters(path[u] + (lab,) + back), self.n))
        return tuple(gens)

    @property
    def label(self) -> str:
        return "<" + ",".join(str(g) for g in self.generators) + ">"

    def to_json(self) -> dict:
        return {"n": self.n, "base": 0, "vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}

    def to_dot(self) -> str:
        lines = ["digraph stallings {", '  0 [shape=doublecircle];']
        for u, lab, v in self.edges:
            lines.append(f'  {u} -> {v} [label="{chr(ord("a") + lab - 1)}"];')
        lines.append("}")
        return "\n".join(lines)


def fold(generators: Iterable[Word], n: int | None = None) -> StallingsGraph:
    """Stallings graph of the subgroup generated by ``generators``."""
    gens = list(generators)
    if n is None:
        if not gens:
            raise ValueError("rank needed for an empty generator list")
        n = gens[0].n
    f = _Folder()
    base = f.new_vertex()
    for w in gens:
        if w.n != n:
            raise ValueError("generators from free groups of different rank")
        letters = reduce_letters(w.letters)
        if not letters:
            continue
        v = base
        for i, x in enumerate(letters):
            t = base if i == len(letters) - 1 else f.new_vertex()
            if x > 0:
                f.add_edge(v, x, t)
            else:
                f.add_edge(t, -x, v)
            v = t
    return StallingsGraph(n, *_core_canonical(n, f.edges(), f.find(base)))


def contains(g: StallingsGraph, w: Word) -> bool:
    return g.reads(w) == 0


def is_subgroup(h: StallingsGraph, g: StallingsGraph) -> bool:
    """Whether the subgroup of ``h`` lies inside that of ``g``."""
    return all(contains(g, w) for w in h.generators)


def intersect(g1: StallingsGraph, g2: StallingsGraph) -> StallingsGraph:
    """Core of the pullback graph at the pair of base points."""
    if g1.n != g2.n:
        raise ValueError("graphs over free groups of different rank")
    n = g1.n
    t1, t2 = g1.transitions, g2.transitions
    number = {(0, 0): 0}
    bfs = deque([(0, 0)])
    edges = set()
    while bfs:
        pair = bfs.popleft()
        a, b = pair
        for lab in [x for i in range(1, n + 1) for x in (i, -i)]:
            na, nb = t1[a].get(lab), t2[b].get(lab)
            if na is None or nb is None:
                continue
            nxt = (na, nb)
            if nxt not in number:
                number[nxt] = len(number)
                bfs.append(nxt)
            u, v = number[pair], number[nxt]
            edges.add((u, lab, v) if lab > 0 else (v, -lab, u))
    return StallingsGraph(n, *_core_canonical(n, sorted(edges), 0))
