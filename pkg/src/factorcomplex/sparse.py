"""Exact sparse elimination: rank over GF(p) and Q, Smith normal form over Z.

A sparse matrix is given column-wise as a list of ``{row: value}`` dicts.
Rank uses the pivot-on-lowest-row column reduction familiar from persistent
homology; ``skip`` lets callers drop columns already known to reduce to zero.
"""
from __future__ import annotations

import random
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded
from .gf import is_prime

SNF_MAX_COLUMNS = 20000

Columns = Sequence[dict]


def _pivots_gf2(columns: Columns, skip: frozenset = frozenset()) -> dict:
    pivots = {}
    for j, col in enumerate(columns):
        if j in skip:
            continue
        c = 0
        for r, v in col.items():
            if v % 2:
                c ^= 1 << r
        while c:
            low = c.bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = c
                break
            c ^= piv
    return pivots


def _pivots_field(columns: Columns, p: int, skip: frozenset = frozenset()) -> dict:
    pivots = {}
    for j, col in enumerate(columns):
        if j in skip:
            continue
        c = {r: v % p for r, v in col.items() if v % p}
        while c:
            low = max(c)
            piv = pivots.get(low)
            if piv is None:
                inv = pow(c[low], -1, p)
                pivots[low] = {r: v * inv % p for r, v in c.items()}
                break
            f = c[low]
            for r, v in piv.items():
                nv = (c.get(r, 0) - f * v) % p
                if nv:
                    c[r] = nv
                else:
                    del c[r]
    return pivots


def _pivots_rational(columns: Columns, skip: frozenset = frozenset()) -> dict:
    pivots = {}
    for j, col in enumerate(columns):
        if j in skip:
            continue
        c = {r: Fraction(v) for r, v in col.items() if v}
        while c:
            low = max(c)
            piv = pivots.get(low)
            if piv is None:
                lead = c[low]
                pivots[low] = {r: v / lead for r, v in c.items()}
                break
            f = c[low]
            for r, v in piv.items():
                nv = c.get(r, 0) - f * v
                if nv:
                    c[r] = nv
                else:
                    del c[r]
    return pivots


def pivot_rows(columns: Columns, p: int | None, skip: Iterable[int] = ()) -> set:
    """Rows carrying a pivot after reduction; ``len`` is the rank.

    ``p=None`` means exact rational arithmetic.
    """
    skip = frozenset(skip)
    if p is None:
        return set(_pivots_rational(columns, skip))
    if p == 2:
        return set(_pivots_gf2(columns, skip))
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return set(_pivots_field(columns, p, skip))


def rank_mod_p(columns: Columns, p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return len(pivot_rows(columns, p))


@lru_cache(maxsize=64)
def random_large_primes(count: int, seed: int = 0, low: int = 2**30, high: int = 2**31) -> tuple[int, ...]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        c = rng.randrange(low, high) | 1
        if c not in out and is_prime(c):
            out.append(c)
    return tuple(out)


def rank_rational(columns: Columns, seed: int = 0) -> int:
    """Rank over Q: two random large primes, exact fallback if they disagree."""
    p1, p2 = random_large_primes(2, seed)
    r1, r2 = rank_mod_p(columns, p1), rank_mod_p(columns, p2)
    if r1 == r2:
        return r1
    return len(pivot_rows(columns, None))


def _dense_snf(a: list[list[int]]) -> list[int]:
    """Invariant factors of a dense integer matrix (modified in place)."""
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            moved = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                    if ri[t]:
                        a[t], a[i] = a[i], a[t]
                        moved = True
                        break
            if moved:
                continue
            piv = a[t][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        moved = True
                        break
            if moved:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            rt, rb = a[t], a[bad]
            for j in range(t, n):
                rt[j] += rb[j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _snf_sparse(columns: Columns, nrows: int, max_columns: int = SNF_MAX_COLUMNS) -> list[int]:
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[j] = v
                cols.setdefault(j, {})[r] = v
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols, key=lambda c: len(cols[c])):
            col = cols.get(j)
            if not col:
                continue
            candidates = [r for r, v in col.items() if v in (1, -1)]
            if not candidates:
                continue
            i = min(candidates, key=lambda r: len(rows[r]))
            a_ij = col[i]
            prow = rows[i]
            for k, a_kj in list(col.items()):
                if k == i:
                    continue
                f = a_kj * a_ij
                rk = rows[k]
                for c, v in prow.items():
                    nv = rk.get(c, 0) - f * v
                    if nv:
                        rk[c] = nv
                        cols[c][k] = nv
                    else:
                        rk.pop(c, None)
                        cols[c].pop(k, None)
                if not rk:
                    del rows[k]
            for c in prow:
                cols[c].pop(i, None)
                if not cols[c]:
                    del cols[c]
            del rows[i]
            cols.pop(j, None)
            units += 1
            progress = True
    if not cols:
        return [1] * units
    if len(cols) > max_columns:
        raise CapExceeded(f"Smith normal form needs {len(cols)} columns after unit reduction (cap {max_columns})")
    rlist = sorted(rows)
    clist = sorted(cols)
    cidx = {c: k for k, c in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for a, r in enumerate(rlist):
        for c, v in rows[r].items():
            dense[a][cidx[c]] = v
    rest = _dense_snf(dense)
    return [1] * units + sorted(rest)


def _as_columns(m) -> tuple[list[dict], int]:
    if hasattr(m, "tocsc"):
        csc = m.tocsc()
        cols = []
        for j in range(csc.shape[1]):
            lo, hi = csc.indptr[j], csc.indptr[j + 1]
            cols.append({int(r): int(v) for r, v in zip(csc.indices[lo:hi], csc.data[lo:hi]) if v})
        return cols, csc.shape[0]
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    cols = [{i: int(rows[i][j]) for i in range(nrows) if rows[i][j]} for j in range(ncols)]
    return cols, nrows


def smith_normal_form(m, max_columns: int = SNF_MAX_COLUMNS) -> list[int]:
    """Non-zero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    ``m`` may be a scipy sparse matrix, a dense nested sequence, or a pair
    ``(columns, nrows)`` in the column-dict format used in this module.
    """
    if isinstance(m, tuple) and len(m) == 2 and isinstance(m[1], int):
        cols, nrows = m
    else:
        cols, nrows = _as_columns(m)
    factors = _snf_sparse(cols, nrows, max_columns)
    # unit elimination leaves ones first; a final pass makes the chain strict
    return _normalise_chain(factors)


def _normalise_chain(factors: list[int]) -> list[int]:
    from math import gcd

    ones = sum(1 for x in factors if abs(x) == 1)
    f = [abs(x) for x in factors if abs(x) > 1]
    # replace (a, b) by (gcd, lcm) until every entry divides the next
    changed = True
    while changed:
        changed = False
        for i in range(len(f)):
            for j in range(i + 1, len(f)):
                a, b = f[i], f[j]
                if b % a:
                    g = gcd(a, b)
                    f[i], f[j] = g, a * b // g
                    changed = True
    ones += f.count(1)
    return [1] * ones + sorted(x for x in f if x != 1)
