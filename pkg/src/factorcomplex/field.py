"""Subspaces of GF(q)^n and the common-basis posets built from them.

A subspace is stored by its reduced row echelon basis, so equal subspaces
have identical representations. The builders below produce, for small
``(n, q)``, the complex CB of families with a common basis, the refinement
poset PD of partial direct-sum decompositions, its full part D, the
inclusion poset FC, the pair poset FCD, and the map from chains of PD to FCD.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, InvariantError
from .gf import SUPPORTED_ORDERS, field
from .poset import Poset, PosetMap, SimplicialComplex, chain_poset, face_closure, iter_bits

MAX_AMBIENT_DIM = 4
MAX_FRAME_CANDIDATES = 500_000

Vector = tuple


def rref(rows: Iterable[Sequence[int]], q: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form with zero rows dropped."""
    F = field(q)
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((i for i in range(pivot_row, len(m)) if m[i][col]), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        inv = F.inv(m[pivot_row][col])
        m[pivot_row] = [F.mul(inv, x) for x in m[pivot_row]]
        top = m[pivot_row]
        for i in range(len(m)):
            if i != pivot_row and m[i][col]:
                f = m[i][col]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], top)]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return tuple(tuple(r) for r in m[:pivot_row])


@dataclass(frozen=True, order=True)
class Subspace:
    """A non-zero subspace of GF(q)^n given by its RREF basis rows."""

    q: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.q not in SUPPORTED_ORDERS:
            raise ValueError(f"field order {self.q} not supported")
        if not 1 <= self.n <= MAX_AMBIENT_DIM:
            raise ValueError(f"ambient dimension {self.n} outside 1..{MAX_AMBIENT_DIM}")
        if not self.rows:
            raise ValueError("the zero subspace is not a Subspace")
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("row length differs from ambient dimension")
        if rref(self.rows, self.q) != self.rows:
            raise ValueError("rows are not in reduced row echelon form")

    @classmethod
    def span(cls, q: int, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        return cls(q, n, rref(vectors, q))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @cached_property
    def vectors(self) -> frozenset:
        """Every vector of the subspace, zero included."""
        F = field(self.q)
        out = set()
        for coeffs in itertools.product(range(self.q), repeat=self.dim):
            v = [0] * self.n
            for c, r in zip(coeffs, self.rows):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
            out.add(tuple(v))
        return frozenset(out)

    def contains_vector(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.vectors

    def issubspace(self, other: "Subspace") -> bool:
        return self.dim <= other.dim and all(other.contains_vector(r) for r in self.rows)

    def sort_key(self):
        return (self.dim, self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.q, self.n, self.rows + other.rows)

    def intersection(self, other: "Subspace") -> "Subspace | None":
        common = self.vectors & other.vectors
        if len(common) == 1:
            return None
        return Subspace.span(self.q, self.n, common)

    @property
    def is_full(self) -> bool:
        return self.dim == self.n

    @property
    def label(self) -> str:
        return "<" + ",".join("".join(map(str, r)) for r in self.rows) + ">"

    def __str__(self):
        return self.label

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_params(n: int, q: int):
    if q not in SUPPORTED_ORDERS:
        raise ValueError(f"field order {q} not supported")
    if not 1 <= n <= MAX_AMBIENT_DIM:
        raise ValueError(f"ambient dimension {n} outside 1..{MAX_AMBIENT_DIM}")


def enumerate_subspaces(n: int, q: int, d: int) -> list[Subspace]:
    """All d-dimensional subspaces, by pivot pattern then free entries."""
    _check_params(n, q)
    if not 1 <= d <= n:
        raise ValueError(f"subspace dimension {d} outside 1..{n}")
    out = []
    for pivots in itertools.combinations(range(n), d):
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, values):
                rows[i][c] = v
            out.append(Subspace(q, n, tuple(tuple(r) for r in rows)))
    out.sort(key=Subspace.sort_key)
    return out


@lru_cache(maxsize=None)
def proper_subspaces(n: int, q: int) -> tuple[Subspace, ...]:
    """All proper non-zero subspaces, ordered by dimension then RREF rows."""
    return tuple(s for d in range(1, n) for s in enumerate_subspaces(n, q, d))


@lru_cache(maxsize=None)
def projective_points(n: int, q: int) -> tuple[Vector, ...]:
    """One representative per line: first non-zero coordinate equal to 1."""
    pts = []
    for v in itertools.product(range(q), repeat=n):
        lead = next((x for x in v if x), None)
        if lead == 1:
            pts.append(v)
    return tuple(pts)


@lru_cache(maxsize=None)
def frames(n: int, q: int) -> tuple[tuple[Vector, ...], ...]:
    """Unordered bases of GF(q)^n up to rescaling of each vector.

    Two bases give the same family of coordinate subspaces exactly when they
    agree as frames, so these index the maximal simplices of CB.
    """
    _check_params(n, q)
    pts = projective_points(n, q)
    if comb(len(pts), n) > MAX_FRAME_CANDIDATES:
        raise CapExceeded(f"exhaustive basis search over GF({q})^{n} is beyond desk scale")
    return tuple(b for b in itertools.combinations(pts, n) if len(rref(b, q)) == n)


def _distributive_triples(family: Sequence[Subspace]) -> bool:
    # necessary: A cap (B + C) = (A cap B) + (A cap C) for members A, B, C
    for a, b, c in itertools.permutations(family, 3):
        left = a.intersection(b + c)
        ab, ac = a.intersection(b), a.intersection(c)
        parts = [x for x in (ab, ac) if x is not None]
        right = None
        for x in parts:
            right = x if right is None else right + x
        if (left.dim if left else 0) != (right.dim if right else 0):
            return False
    return True


_cb_memo: dict = {}


def has_common_basis(family: Iterable[Subspace]) -> tuple[bool, list[Vector] | None]:
    """Whether one basis of GF(q)^n spans every member by a subset of itself.

    Returns ``(True, basis)`` with a witness basis, or ``(False, None)``.
    """
    fam = frozenset(family)
    if not fam:
        raise ValueError("family must be non-empty")
    ambient = {(s.q, s.n) for s in fam}
    if len(ambient) > 1:
        raise ValueError(f"family mixes ambient spaces {sorted(ambient)}")
    if fam in _cb_memo:
        return _cb_memo[fam]
    (q, n), = ambient
    members = sorted(fam, key=Subspace.sort_key)
    result: tuple[bool, list | None] = (False, None)
    if len(members) < 3 or _distributive_triples(members):
        for basis in frames(n, q):
            if all(sum(1 for b in basis if m.contains_vector(b)) == m.dim for m in members):
                result = (True, [tuple(b) for b in basis])
                break
    _cb_memo[fam] = result
    return result


def spans_by_subset(basis: Sequence[Vector], member: Subspace) -> bool:
    """Independent re-check of a witness: some subset of ``basis`` spans ``member``."""
    inside = [b for b in basis if member.contains_vector(b)]
    return len(inside) == member.dim and Subspace.span(member.q, member.n, inside) == member


@dataclass(frozen=True)
class FieldDecomposition:
    """A set of independent subspaces (a partial direct-sum decomposition)."""

    parts: frozenset

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a decomposition has at least one part")
        ambient = {(s.q, s.n) for s in self.parts}
        if len(ambient) != 1:
            raise ValueError("parts live in different ambient spaces")
        if self.span.dim != sum(s.dim for s in self.parts):
            raise ValueError("parts are not independent")

    @classmethod
    def of(cls, parts: Iterable[Subspace]) -> "FieldDecomposition":
        return cls(frozenset(parts))

    @cached_property
    def ordered(self) -> tuple[Subspace, ...]:
        return tuple(sorted(self.parts, key=Subspace.sort_key))

    @cached_property
    def span(self) -> Subspace:
        rows = tuple(r for s in self.parts for r in s.rows)
        first = next(iter(self.parts))
        return Subspace.span(first.q, first.n, rows)

    @property
    def is_full(self) -> bool:
        return self.span.is_full

    def refines(self, other: "FieldDecomposition") -> bool:
        """``self <= other``: every part lies inside some part of ``other``."""
        return all(any(a.issubspace(b) for b in other.parts) for a in self.parts)

    @property
    def label(self) -> str:
        return "{" + ",".join(s.label for s in self.ordered) + "}"

    def __str__(self):
        return self.label

    def sort_key(self):
        return (len(self.parts), tuple((s.dim, s.rows) for s in self.ordered))


def _check_caps(n: int, q: int):
    if q not in (2, 3):
        raise CapExceeded(f"builders support q in (2, 3), got {q}")
    limit = 4 if q == 2 else 3
    if not 1 <= n <= limit:
        raise CapExceeded(f"builders support n <= {limit} for q = {q}, got {n}")


def build_CB(n: int, q: int) -> SimplicialComplex:
    """Common basis complex: one full simplex per frame, merged."""
    _check_caps(n, q)
    verts = proper_subspaces(n, q)
    index = {s: i for i, s in enumerate(verts)}
    facets = []
    for basis in frames(n, q):
        facet = []
        for k in range(1, n):
            for sub in itertools.combinations(basis, k):
                facet.append(index[Subspace.span(q, n, sub)])
        if facet:
            facets.append(facet)
    return face_closure(
        facets,
        labels={i: s.label for i, s in enumerate(verts)},
        payloads=dict(enumerate(verts)),
    )


def _contain_masks(subs: Sequence[Subspace]) -> list[int]:
    # bit j of masks[i] set when subs[i] <= subs[j]
    masks = []
    for a in subs:
        m = 0
        for j, b in enumerate(subs):
            if a.issubspace(b):
                m |= 1 << j
        masks.append(m)
    return masks


@lru_cache(maxsize=None)
def partial_decompositions(n: int, q: int) -> tuple[FieldDecomposition, ...]:
    subs = proper_subspaces(n, q)
    out = []

    def grow(start, chosen, span, total):
        if chosen:
            out.append(FieldDecomposition(frozenset(chosen)))
        for i in range(start, len(subs)):
            s = subs[i]
            if total + s.dim > n:
                continue
            new = s if span is None else span + s
            if new.dim == total + s.dim:
                chosen.append(s)
                grow(i + 1, chosen, new, total + s.dim)
                chosen.pop()

    grow(0, [], None, 0)
    out.sort(key=FieldDecomposition.sort_key)
    return tuple(out)


def _refinement_poset(decs: Sequence[FieldDecomposition], n: int, q: int) -> Poset:
    subs = proper_subspaces(n, q)
    sidx = {s: i for i, s in enumerate(subs)}
    contain = _contain_masks(subs)
    parts = [[sidx[s] for s in d.parts] for d in decs]
    # reach[k]: subspaces lying inside some part of decs[k]
    reach = []
    for ps in parts:
        r = 0
        for a, m in enumerate(contain):
            if any((m >> b) & 1 for b in ps):
                r |= 1 << a
        reach.append(r)
    pmask = [sum(1 << a for a in ps) for ps in parts]
    below = []
    for k in range(len(decs)):
        r = reach[k]
        m = 0
        for c, pm in enumerate(pmask):
            if pm & ~r == 0:
                m |= 1 << c
        below.append(m)
    return Poset(list(decs), below, labeler=lambda d: d.label)


def build_PD(n: int, q: int) -> Poset:
    """Partial decompositions into proper non-zero subspaces, by refinement."""
    _check_caps(n, q)
    return _refinement_poset(partial_decompositions(n, q), n, q)


def build_D(n: int, q: int) -> Poset:
    """Full decompositions (parts sum to the whole space), by refinement."""
    _check_caps(n, q)
    return _refinement_poset([d for d in partial_decompositions(n, q) if d.is_full], n, q)


def build_FC(n: int, q: int) -> Poset:
    """Proper non-zero subspaces under inclusion."""
    _check_caps(n, q)
    subs = proper_subspaces(n, q)
    contain = _contain_masks(subs)
    below = [0] * len(subs)
    for a, m in enumerate(contain):
        for b in range(len(subs)):
            if (m >> b) & 1:
                below[b] |= 1 << a
    return Poset(list(subs), below, labeler=lambda s: s.label)


@dataclass(frozen=True)
class FcdElement:
    """A pair (factor, decomposition); ``None`` marks the full space or no decomposition."""

    factor: Subspace | None
    decomposition: FieldDecomposition | None

    def __post_init__(self):
        if self.factor is None and self.decomposition is None:
            raise ValueError("(full space, empty) is excluded")
        if self.factor is not None and self.decomposition is not None:
            ok, _ = has_common_basis({self.factor} | set(self.decomposition.parts))
            if not ok:
                raise ValueError("factor and decomposition have no common basis")

    def leq(self, other: "FcdElement") -> bool:
        """Factors by reverse inclusion, decompositions by refinement with empty at the bottom."""
        if other.factor is not None and not (self.factor is None or other.factor.issubspace(self.factor)):
            return False
        if self.factor is not None and other.factor is None:
            return False
        if self.decomposition is None:
            return True
        if other.decomposition is None:
            return False
        return self.decomposition.refines(other.decomposition)

    @property
    def label(self) -> str:
        a = "F" if self.factor is None else self.factor.label
        d = "{}" if self.decomposition is None else self.decomposition.label
        return f"({a},{d})"

    def sort_key(self):
        a = (0, ()) if self.factor is None else (1, (self.factor.dim, self.factor.rows))
        d = (0, ()) if self.decomposition is None else (1, self.decomposition.sort_key())
        return (a, d)


def _set_partitions(items: Sequence) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def fcd_elements(n: int, q: int) -> list[FcdElement]:
    """Factors alone, full decompositions alone, and basis-compatible pairs.

    A pair is compatible exactly when some frame spans the factor by a subset
    and splits into the parts of the decomposition, so pairs are read off the
    frames; each witness is recorded in the common-basis memo.
    """
    _check_caps(n, q)
    fc = proper_subspaces(n, q)
    ds = [d for d in partial_decompositions(n, q) if d.is_full]
    pairs = set()
    for basis in frames(n, q):
        spanned = [Subspace.span(q, n, sub) for k in range(1, n) for sub in itertools.combinations(basis, k)]
        for blocks in _set_partitions(list(basis)):
            if len(blocks) < 2:
                continue
            parts = frozenset(Subspace.span(q, n, b) for b in blocks)
            for a in spanned:
                if (a, parts) not in pairs:
                    pairs.add((a, parts))
                    _cb_memo.setdefault(parts | {a}, (True, [tuple(b) for b in basis]))
    out = [FcdElement(a, None) for a in fc] + [FcdElement(None, d) for d in ds]
    out += [FcdElement(a, FieldDecomposition(parts)) for a, parts in pairs]
    out.sort(key=FcdElement.sort_key)
    return out


def build_FCD(n: int, q: int) -> Poset:
    """Basis-compatible (factor, decomposition) pairs under the product order."""
    elements = fcd_elements(n, q)
    subs = proper_subspaces(n, q)
    sidx = {s: i for i, s in enumerate(subs)}
    ds = [d for d in partial_decompositions(n, q) if d.is_full]
    didx = {d: i for i, d in enumerate(ds)}
    d_below = _refinement_poset(ds, n, q).below
    # group element bits by factor (None = whole space) and by decomposition
    by_factor = [0] * (len(subs) + 1)
    by_dec = [0] * (len(ds) + 1)
    for e, x in enumerate(elements):
        by_factor[len(subs) if x.factor is None else sidx[x.factor]] |= 1 << e
        by_dec[len(ds) if x.decomposition is None else didx[x.decomposition]] |= 1 << e
    contain = _contain_masks(subs)
    # factors by reverse inclusion: below g sit the factors containing g, and the whole space
    factor_below = [by_factor[len(subs)]] * len(subs) + [by_factor[len(subs)]]
    for g, m in enumerate(contain):
        for f in iter_bits(m):
            factor_below[g] |= by_factor[f]
    dec_below = [by_dec[len(ds)]] * len(ds) + [by_dec[len(ds)]]
    for k, m in enumerate(d_below):
        for c in iter_bits(m):
            dec_below[k] |= by_dec[c]
    below = [
        factor_below[len(subs) if x.factor is None else sidx[x.factor]]
        & dec_below[len(ds) if x.decomposition is None else didx[x.decomposition]]
        for x in elements
    ]
    return Poset(elements, below, labeler=lambda e: e.label)


def phi_element(pd: Poset, chain: Sequence[int]) -> FcdElement:
    """Image of a chain of PD (listed minimum first) in FCD.

    Factor: span of the least element that is not a full decomposition, or
    the full space when there is none. Decomposition: the greatest full
    decomposition in the chain, or empty when there is none.
    """
    decs = [pd.elements[i] for i in chain]
    partial = [d for d in decs if not d.is_full]
    full = [d for d in decs if d.is_full]
    factor = partial[0].span if partial else None
    return FcdElement(factor, full[-1] if full else None)


def phi_map(n: int, q: int) -> PosetMap:
    """Order-preserving map from chains of PD to FCD."""
    pd = build_PD(n, q)
    sd = chain_poset(pd)
    fcd = build_FCD(n, q)
    index = {(e.factor, e.decomposition): i for i, e in enumerate(fcd.elements)}
    assignment = []
    for chain in sd.elements:
        img = phi_element(pd, chain)
        key = (img.factor, img.decomposition)
        if key not in index:
            raise InvariantError("chain maps outside FCD", {"chain": [pd.label(i) for i in chain]})
        assignment.append(index[key])
    return PosetMap(sd, fcd, tuple(assignment))
