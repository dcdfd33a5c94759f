"""Finite simplicial complexes, finite posets and poset maps.

Posets keep their order relation as one bitmask per element (the principal
down-set), so ``a <= b`` is a single shift-and-mask and sub-posets are cheap
to cut out. Complexes store faces as sorted tuples of integer vertex ids.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .errors import CapExceeded, InvariantError

DEFAULT_MAX_CHAIN = 25
# total faces (or chains) one complex may hold; beyond this memory, not time, runs out
DEFAULT_MAX_FACES = 2_000_000


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


class SimplicialComplex:
    """A finite abstract simplicial complex on integer vertex ids.

    ``faces`` holds every non-empty face as a sorted tuple. ``labels`` maps a
    vertex id to a display string and ``payloads`` (never serialised) to the
    object the vertex stands for.
    """

    def __init__(self, faces: Iterable[Iterable[int]], labels=None, payloads=None, check: bool = True):
        self.faces = frozenset(tuple(sorted(f)) for f in faces)
        self.vertices = tuple(sorted(f[0] for f in self.faces if len(f) == 1))
        self.labels = {v: str(v) for v in self.vertices}
        if labels:
            self.labels.update({v: labels[v] for v in self.vertices if v in labels})
        self.payloads = dict(payloads) if payloads else {}
        if check:
            self._validate()

    def _validate(self):
        for f in self.faces:
            if not f:
                raise ValueError("the empty face is not stored")
            if len(set(f)) != len(f):
                raise ValueError(f"face {f} repeats a vertex")
            if len(f) > 1:
                for i in range(len(f)):
                    sub = f[:i] + f[i + 1:]
                    if sub not in self.faces:
                        raise InvariantError(f"face {f} is missing its facet {sub}", {"face": list(f)})

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def faces_by_dim(self) -> list[list[tuple[int, ...]]]:
        out = [[] for _ in range(self.dimension + 1)]
        for f in self.faces:
            out[len(f) - 1].append(f)
        for level in out:
            level.sort()
        return out

    def f_vector(self) -> list[int]:
        return [len(level) for level in self.faces_by_dim()]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def facets(self) -> list[tuple[int, ...]]:
        """Maximal faces, sorted."""
        covered = set()
        for f in self.faces:
            if len(f) > 1:
                for i in range(len(f)):
                    covered.add(f[:i] + f[i + 1:])
        return sorted(f for f in self.faces if f not in covered)

    def relabel(self) -> "SimplicialComplex":
        """Same complex with vertices renumbered 0..V-1 in increasing id order."""
        index = {v: i for i, v in enumerate(self.vertices)}
        return SimplicialComplex(
            (tuple(index[v] for v in f) for f in self.faces),
            labels={index[v]: self.labels[v] for v in self.vertices},
            payloads={index[v]: p for v, p in self.payloads.items() if v in index},
            check=False,
        )

    def __len__(self):
        return len(self.faces)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.faces == other.faces

    def __hash__(self):
        return hash(self.faces)

    def __repr__(self):
        return f"SimplicialComplex(vertices={len(self.vertices)}, faces={len(self.faces)}, dim={self.dimension})"


def _capped(items: Iterable, max_faces: int, what: str) -> Iterator:
    for count, item in enumerate(items, 1):
        if count > max_faces:
            raise CapExceeded(f"more than {max_faces} {what}")
        yield item


def face_closure(
    maximal_faces: Iterable[Sequence[int]], labels=None, payloads=None, max_faces: int = DEFAULT_MAX_FACES
) -> SimplicialComplex:
    """Smallest complex containing every listed face."""
    faces = set()
    for f in maximal_faces:
        f = tuple(sorted(f))
        if len(set(f)) != len(f):
            raise ValueError(f"face {f} repeats a vertex")
        if not f or f in faces:
            continue
        for k in range(1, len(f) + 1):
            faces.update(itertools.combinations(f, k))
        if len(faces) > max_faces:
            raise CapExceeded(f"more than {max_faces} faces")
    return SimplicialComplex(faces, labels=labels, payloads=payloads, check=False)


class Poset:
    """A finite partial order on element ids ``0..N-1``.

    ``elements[i]`` is the payload of element ``i``. The relation is held as
    ``below[i]``, the bitmask of all ``j <= i`` (including ``i``).
    """

    def __init__(self, elements: Sequence, below: Sequence[int], check: bool = True, labeler: Callable = str):
        if len(elements) != len(below):
            raise ValueError("one down-set mask per element required")
        self.elements = list(elements)
        self.below = list(below)
        self.labeler = labeler
        # set by chain_poset: the poset whose chains these elements are
        self.chain_of: Poset | None = None
        self._above = None
        self._hasse = None
        if check:
            self._validate()

    @classmethod
    def from_leq(cls, elements: Sequence, leq: Callable, labeler: Callable = str) -> "Poset":
        n = len(elements)
        below = [0] * n
        for j, b in enumerate(elements):
            m = 0
            for i, a in enumerate(elements):
                if i == j or leq(a, b):
                    m |= 1 << i
            below[j] = m
        return cls(elements, below, labeler=labeler)

    @classmethod
    def from_hasse(cls, elements: Sequence, hasse: Iterable[tuple[int, int]], labeler: Callable = str) -> "Poset":
        """Build from covering pairs ``(a, b)`` meaning ``a < b``; closes transitively."""
        n = len(elements)
        lower = [[] for _ in range(n)]
        for a, b in hasse:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"hasse pair ({a}, {b}) out of range")
            lower[b].append(a)
        below = [None] * n
        state = [0] * n  # 0 new, 1 in progress, 2 done

        def close(x):
            stack = [(x, iter(lower[x]))]
            state[x] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    m = 1 << v
                    for u in lower[v]:
                        m |= below[u]
                    below[v] = m
                    state[v] = 2
                    stack.pop()
                elif state[nxt] == 1:
                    raise InvariantError("hasse relation contains a cycle", {"element": nxt})
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(lower[nxt])))

        for x in range(n):
            if state[x] == 0:
                close(x)
        return cls(elements, below, labeler=labeler)

    def _validate(self):
        for i, m in enumerate(self.below):
            if not (m >> i) & 1:
                raise InvariantError(f"relation is not reflexive at {i}", {"element": i})
            for j in iter_bits(m ^ (1 << i)):
                if (self.below[j] >> i) & 1:
                    raise InvariantError(f"relation is not antisymmetric: {i}, {j}", {"pair": [i, j]})
                if self.below[j] & ~m:
                    raise InvariantError(f"relation is not transitive below {i}", {"pair": [j, i]})

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Poset(elements={len(self)})"

    def leq(self, a: int, b: int) -> bool:
        return bool((self.below[b] >> a) & 1)

    def label(self, i: int) -> str:
        return self.labeler(self.elements[i])

    @property
    def above(self) -> list[int]:
        if self._above is None:
            above = [0] * len(self)
            for j, m in enumerate(self.below):
                for i in iter_bits(m):
                    above[i] |= 1 << j
            self._above = above
        return self._above

    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs ``(a, b)``: ``a < b`` with nothing strictly between."""
        if self._hasse is None:
            pairs = []
            for b, m in enumerate(self.below):
                strict = m ^ (1 << b)
                for a in iter_bits(strict):
                    if not (strict & self.above[a] & ~(1 << a)):
                        pairs.append((a, b))
            pairs.sort()
            self._hasse = pairs
        return self._hasse

    def subposet(self, ids: Iterable[int]) -> "Poset":
        """Induced sub-poset; ``origin`` maps new ids back to ours."""
        ids = sorted(set(ids))
        index = {old: new for new, old in enumerate(ids)}
        sel = _mask(ids)
        below = []
        for old in ids:
            below.append(_mask(index[j] for j in iter_bits(self.below[old] & sel)))
        sub = Poset([self.elements[i] for i in ids], below, check=False, labeler=self.labeler)
        sub.origin = ids
        if self.chain_of is not None:
            sub.chain_of = self.chain_of
        return sub

    def height(self) -> int:
        """Number of elements in a longest chain."""
        order = sorted(range(len(self)), key=lambda i: bin(self.below[i]).count("1"))
        longest = [0] * len(self)
        for b in order:
            longest[b] = 1 + max((longest[a] for a in iter_bits(self.below[b] ^ (1 << b))), default=0)
        return max(longest, default=0)

    def chains(self) -> Iterator[tuple[int, ...]]:
        """All non-empty chains, each listed from its minimum upward."""
        strict = [m ^ (1 << i) for i, m in enumerate(self.below)]

        def grow(top_down, cand):
            yield tuple(reversed(top_down))
            for y in iter_bits(cand):
                top_down.append(y)
                yield from grow(top_down, cand & strict[y])
                top_down.pop()

        for x in range(len(self)):
            yield from grow([x], strict[x])

    def is_down_closed(self, ids: Iterable[int]) -> bool:
        sel = _mask(ids)
        return all(self.below[i] & ~sel == 0 for i in iter_bits(sel))


def chain_poset(p: Poset, max_chain: int = DEFAULT_MAX_CHAIN, max_faces: int = DEFAULT_MAX_FACES) -> Poset:
    """The poset of non-empty chains of ``p`` ordered by inclusion."""
    if p.height() > max_chain:
        raise CapExceeded(f"poset has a chain longer than {max_chain}")
    chains = sorted(_capped(p.chains(), max_faces, "chains"), key=lambda c: (len(c), c))
    index = {frozenset(c): i for i, c in enumerate(chains)}
    below = []
    for c in chains:
        m = 0
        for k in range(1, len(c) + 1):
            for sub in itertools.combinations(c, k):
                m |= 1 << index[frozenset(sub)]
        below.append(m)

    def labeler(chain, _p=p):
        return "<".join(_p.label(i) for i in chain)

    sd = Poset(chains, below, check=False, labeler=labeler)
    sd.chain_of = p
    return sd


def order_complex(p: Poset, max_faces: int = DEFAULT_MAX_FACES) -> SimplicialComplex:
    """Vertices are the elements of ``p``; faces are its non-empty chains."""
    return SimplicialComplex(
        _capped(p.chains(), max_faces, "chains"),
        labels={i: p.label(i) for i in range(len(p))},
        payloads=dict(enumerate(p.elements)),
        check=False,
    )


def join(k: SimplicialComplex, l: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; ``l`` is re-keyed past ``k``'s ids when they overlap."""
    offset = 0
    if set(k.vertices) & set(l.vertices):
        offset = max(k.vertices) + 1 - min(l.vertices)
    lf = [tuple(v + offset for v in f) for f in l.faces]
    faces = set(k.faces) | set(lf)
    for a in k.faces:
        for b in lf:
            faces.add(a + b)
    labels = dict(k.labels)
    labels.update({v + offset: s for v, s in l.labels.items()})
    return SimplicialComplex(faces, labels=labels, check=False)


@dataclass(frozen=True)
class PosetMap:
    """A total function between the element ids of two posets."""

    source: Poset
    target: Poset
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != len(self.source):
            raise ValueError("assignment must be total over the source elements")
        bad = [t for t in self.assignment if not 0 <= t < len(self.target)]
        if bad:
            raise ValueError(f"assignment hits unknown target elements {bad[:5]}")

    def __call__(self, x: int) -> int:
        return self.assignment[x]


def is_order_preserving(f: PosetMap) -> bool:
    # covering pairs suffice: the target order is transitive
    return all(f.target.leq(f(a), f(b)) for a, b in f.source.hasse())


def lower_fiber(f: PosetMap, q: int) -> Poset:
    """Sub-poset of the source on ``{x : f(x) <= q}``."""
    if not 0 <= q < len(f.target):
        raise KeyError(f"unknown target element {q}")
    down = f.target.below[q]
    return f.source.subposet(x for x, y in enumerate(f.assignment) if (down >> y) & 1)


@dataclass
class FiberRecord:
    target: int
    label: str
    size: int
    betti: list[int]
    passed: bool


@dataclass
class QuillenReport:
    fibers: list[FiberRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.fibers)

    def failures(self) -> list[FiberRecord]:
        return [r for r in self.fibers if not r.passed]

    def to_json(self) -> dict:
        return {
            "checked": len(self.fibers),
            "passed": self.passed,
            "fibers": [
                {"target": r.target, "label": r.label, "size": r.size, "betti": r.betti, "passed": r.passed}
                for r in self.fibers
            ],
        }


def fiber_complex(fiber: Poset, use_chains: bool = True) -> SimplicialComplex:
    """A complex with the homotopy type of ``fiber``.

    When the fiber is a down-closed set of chains of some poset, its elements
    are already the faces of a simplicial complex whose subdivision is the
    fiber's order complex, so they are used directly.
    """
    if use_chains and fiber.chain_of is not None:
        faces = [tuple(sorted(c)) for c in fiber.elements]
        face_set = set(faces)
        if all(f[:i] + f[i + 1:] in face_set for f in faces if len(f) > 1 for i in range(len(f))):
            return SimplicialComplex(faces, check=False)
    return order_complex(fiber)


def check_quillen_fibers(f: PosetMap, coefficients="Q", use_chains: bool = True, seed: int = 0) -> QuillenReport:
    """Reduced homology of every lower fiber of ``f``.

    A fiber passes when all its reduced Betti numbers vanish; an empty fiber
    fails (its reduced homology sits in degree -1).
    """
    from .homology import betti, chain_complex_of

    report = QuillenReport()
    for q in range(len(f.target)):
        fiber = lower_fiber(f, q)
        if len(fiber) == 0:
            report.fibers.append(FiberRecord(q, f.target.label(q), 0, [], False))
            continue
        b = betti(chain_complex_of(fiber_complex(fiber, use_chains)), coefficients, seed=seed)
        report.fibers.append(FiberRecord(q, f.target.label(q), len(fiber), b, not any(b)))
    return report
