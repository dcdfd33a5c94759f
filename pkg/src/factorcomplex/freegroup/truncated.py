"""Truncated common-basis complex and partial-decomposition poset of F_n.

Bases are enumerated by breadth-first search over Nielsen moves from the
standard basis, keeping only bases whose elements all have reduced length at
most L. A Nielsen-reduced basis is a signed permutation of the generators and
Nielsen reduction never lengthens an element, so every basis within the
length bound is reachable through bases within the same bound.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import CapExceeded, InvariantError
from ..poset import Poset, SimplicialComplex, face_closure
from .stallings import StallingsGraph, fold, is_subgroup
from .words import Word

MAX_RANK = 3
MAX_LENGTH = 6
CACHE_ENV = "FACTORCOMPLEX_CACHE"

Basis = tuple  # n Words, each the shortlex-least of itself and its inverse, sorted


def _check_caps(n: int, L: int):
    if not 1 <= n <= MAX_RANK:
        raise CapExceeded(f"basis enumeration supports 1 <= n <= {MAX_RANK}, got {n}")
    if not 1 <= L <= MAX_LENGTH:
        raise CapExceeded(f"basis enumeration supports 1 <= L <= {MAX_LENGTH}, got {L}")


def _orient(w: Word) -> Word:
    inv = w.inverse()
    return w if w.sort_key() <= inv.sort_key() else inv


def normalize_basis(words: Iterable[Word]) -> Basis:
    return tuple(sorted((_orient(w) for w in words), key=Word.sort_key))


def _nielsen_neighbours(basis: Basis) -> Iterable[tuple[Word, ...]]:
    n = len(basis)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for y in (basis[j], basis[j].inverse()):
                for new in (basis[i] * y, y * basis[i]):
                    yield basis[:i] + (new,) + basis[i + 1:]


def _cache_path(n: int, L: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"bases-n{n}-L{L}.json"


def _load_cached(n: int, L: int) -> list[Basis] | None:
    path = _cache_path(n, L)
    if path is None or not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        return [tuple(Word.parse(s, n) for s in b) for b in data["bases"]]
    except (ValueError, KeyError, TypeError):
        # unreadable cache is recomputed and overwritten
        return None


def _store_cached(n: int, L: int, bases: Sequence[Basis]):
    path = _cache_path(n, L)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"n": n, "L": L, "bases": [[str(w) for w in b] for b in bases]}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)


def enumerate_bases(n: int, L: int, use_cache: bool = True) -> list[Basis]:
    """Unordered bases of F_n (up to inverting entries) with entries of length <= L."""
    _check_caps(n, L)
    if use_cache:
        cached = _load_cached(n, L)
        if cached is not None:
            return cached
    start = normalize_basis(Word.generator(i, n) for i in range(1, n + 1))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for b in frontier:
            for cand in _nielsen_neighbours(b):
                if any(len(w) > L for w in cand):
                    continue
                key = normalize_basis(cand)
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    out = sorted(seen, key=lambda b: [w.sort_key() for w in b])
    for b in out:
        if not fold(b, n).is_whole_group:
            raise InvariantError("enumerated tuple does not generate F_n", {"basis": [str(w) for w in b]})
    if use_cache:
        _store_cached(n, L, out)
    return out


class _SubgroupIndex:
    """Dedups subgroups by canonical Stallings graph, numbering in first-seen order."""

    def __init__(self):
        self.graphs: list[StallingsGraph] = []
        self.index: dict[StallingsGraph, int] = {}

    def id(self, g: StallingsGraph) -> int:
        if g not in self.index:
            self.index[g] = len(self.graphs)
            self.graphs.append(g)
        return self.index[g]


def build_truncated_CB(n: int, L: int) -> SimplicialComplex:
    """Union of the simplices {<S> : S a non-empty proper subset of B} over bases B."""
    bases = enumerate_bases(n, L)
    subs = _SubgroupIndex()
    facets = []
    for b in bases:
        facet = []
        for k in range(1, n):
            for sub in itertools.combinations(b, k):
                facet.append(subs.id(fold(sub, n)))
        if facet:
            facets.append(facet)
    return face_closure(
        facets,
        labels={i: g.label for i, g in enumerate(subs.graphs)},
        payloads=dict(enumerate(subs.graphs)),
    )


@dataclass(frozen=True)
class FreeFactorSystem:
    """A set of pairwise distinct subgroups, each given by its Stallings graph."""

    factors: frozenset

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a factor system needs at least one factor")
        ns = {g.n for g in self.factors}
        if len(ns) != 1:
            raise ValueError("factors from free groups of different rank")

    @property
    def n(self) -> int:
        return next(iter(self.factors)).n

    def ordered(self) -> tuple[StallingsGraph, ...]:
        return tuple(sorted(self.factors, key=lambda g: (g.rank, g.label)))

    @property
    def total_rank(self) -> int:
        return sum(g.rank for g in self.factors)

    def join(self) -> StallingsGraph:
        return fold([w for g in self.ordered() for w in g.generators], self.n)

    def is_rank_additive(self) -> bool:
        """The joint subgroup has rank equal to the sum of the factor ranks."""
        return self.total_rank <= self.n and self.join().rank == self.total_rank

    def refines(self, other: "FreeFactorSystem") -> bool:
        return all(any(is_subgroup(a, b) for b in other.factors) for a in self.factors)

    @property
    def label(self) -> str:
        return "{" + ", ".join(g.label for g in self.ordered()) + "}"

    def __str__(self):
        return self.label


def _set_partitions(items: Sequence) -> Iterable[list[tuple]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]
        yield [(first,)] + part


def truncated_partial_decompositions(n: int, L: int) -> list[FreeFactorSystem]:
    """Blocks of subsets of enumerated bases, each block spanning a proper factor."""
    bases = enumerate_bases(n, L)
    seen: dict[FreeFactorSystem, None] = {}
    graphs: dict[tuple, StallingsGraph] = {}
    for b in bases:
        for k in range(1, n + 1):
            for subset in itertools.combinations(b, k):
                for blocks in _set_partitions(subset):
                    if len(blocks) == 1 and len(blocks[0]) == n:
                        continue  # the whole group is not a proper factor
                    parts = []
                    for block in blocks:
                        if block not in graphs:
                            graphs[block] = fold(block, n)
                        parts.append(graphs[block])
                    sys_ = FreeFactorSystem(frozenset(parts))
                    if sys_ in seen:
                        continue
                    if len(sys_.factors) != len(blocks) or not sys_.is_rank_additive():
                        raise InvariantError(
                            "blocks of a basis failed the rank-additivity test",
                            {"basis": [str(w) for w in b], "blocks": [[str(w) for w in bl] for bl in blocks]},
                        )
                    seen[sys_] = None
    return sorted(seen, key=lambda s: (len(s.factors), s.total_rank, s.label))


def build_truncated_PD(n: int, L: int) -> Poset:
    """Refinement poset on truncated partial decompositions."""
    decs = truncated_partial_decompositions(n, L)
    return Poset.from_leq(decs, lambda c, d: c.refines(d), labeler=lambda d: d.label)
