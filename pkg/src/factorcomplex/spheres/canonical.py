"""Canonical labelling of based genus-labelled multigraphs.

Colour refinement seeded by (is-base, genus, valence, loops) splits vertices
into invariant cells; ties are broken by individualising each vertex of the
first non-singleton cell in turn and refining again. The canonical encoding is
the least encoding over all leaves of that search. Transposing two twins
(same genus and loops, same edge multiplicities to every other vertex) is an
automorphism, so one vertex per twin class is enough at each branch.
"""
from __future__ import annotations

from typing import Sequence

Encoding = tuple  # (genus in canonical order, sorted edge pairs)


def _relabel(keys: Sequence) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


class _Search:
    def __init__(self, nv: int, base: int, genus: Sequence[int], edges: Sequence[tuple[int, int]]):
        self.nv = nv
        self.genus = list(genus)
        self.edges = list(edges)
        mult = [[0] * nv for _ in range(nv)]
        for u, v in edges:
            mult[u][v] += 1
            if u != v:
                mult[v][u] += 1
        self.mult = mult
        self.nbrs = [[(y, mult[x][y]) for y in range(nv) if y != x and mult[x][y]] for x in range(nv)]
        val = [0] * nv
        for u, v in edges:
            val[u] += 1
            val[v] += 1
        seed = [(0 if x == base else 1, genus[x], val[x], mult[x][x]) for x in range(nv)]
        self.start = self.refine(_relabel(seed))
        self.twin = self._twins()

    def _twins(self) -> list[int]:
        cls = list(range(self.nv))
        m = self.mult
        for u in range(self.nv):
            if cls[u] != u:
                continue
            for v in range(u + 1, self.nv):
                if cls[v] != v or self.start[u] != self.start[v]:
                    continue
                if self.genus[u] != self.genus[v] or m[u][u] != m[v][v]:
                    continue
                if all(m[u][w] == m[v][w] for w in range(self.nv) if w != u and w != v):
                    cls[v] = u
        return cls

    def refine(self, col: list[int]) -> list[int]:
        cells = len(set(col))
        while True:
            sig = [(col[x], tuple(sorted((col[y], k) for y, k in self.nbrs[x]))) for x in range(self.nv)]
            new = _relabel(sig)
            ncells = len(set(new))
            if ncells == cells:
                return new
            col, cells = new, ncells

    def encode(self, col: list[int]) -> Encoding:
        genus = [0] * self.nv
        for x in range(self.nv):
            genus[col[x]] = self.genus[x]
        edges = sorted((min(col[u], col[v]), max(col[u], col[v])) for u, v in self.edges)
        return (tuple(genus), tuple(edges)), col

    def best(self, col: list[int]):
        if len(set(col)) == self.nv:
            return self.encode(col)
        sizes = {}
        for c in col:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        tried = set()
        result = None
        for x in range(self.nv):
            if col[x] != target or self.twin[x] in tried:
                continue
            tried.add(self.twin[x])
            split = _relabel([(col[y], 0 if y == x else 1) for y in range(self.nv)])
            cand = self.best(self.refine(split))
            if result is None or cand[0] < result[0]:
                result = cand
        return result


def canonical_form(nv: int, base: int, genus: Sequence[int], edges: Sequence[tuple[int, int]]):
    """Least encoding and the vertex map realising it (old id -> new id, base -> 0)."""
    s = _Search(nv, base, genus, edges)
    return s.best(s.start)


def canonical_key(nv: int, base: int, genus: Sequence[int], edges: Sequence[tuple[int, int]]) -> Encoding:
    s = _Search(nv, base, genus, edges)
    return s.best(s.start)[0]
