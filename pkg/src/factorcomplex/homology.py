"""Simplicial homology with exact coefficients.

Faces are indexed per dimension in sorted order and oriented by increasing
vertex id; ``d(v0..vk) = sum (-1)^i (v0..^vi..vk)``.
"""
from __future__ import annotations

import csv
import io
import itertools
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse as sp

from .errors import InvariantError
from .gf import is_prime
from .sparse import pivot_rows, random_large_primes, smith_normal_form


class ChainComplex:
    """Simplicial chain complex of a finite complex.

    ``boundaries[d]`` (for ``d >= 1``) is the matrix of the boundary map from
    d-chains to (d-1)-chains, stored column-wise as ``{row: +-1}`` dicts.
    """

    def __init__(self, faces: list[list[tuple[int, ...]]], boundaries: dict[int, list[dict]], check: bool = True):
        self.faces = faces
        self.dims = [len(level) for level in faces]
        self.boundaries = boundaries
        self._matrices: dict[int, sp.csc_matrix] = {}
        if check:
            self.check()

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def _arrays(self, d: int):
        cols = self.boundaries[d]
        ptr = np.zeros(len(cols) + 1, dtype=np.int64)
        np.cumsum([len(c) for c in cols], out=ptr[1:])
        nnz = int(ptr[-1])
        rows = np.fromiter(itertools.chain.from_iterable(cols), dtype=np.int64, count=nnz)
        data = np.fromiter(itertools.chain.from_iterable(c.values() for c in cols), dtype=np.int64, count=nnz)
        return ptr, rows, data

    def matrix(self, d: int) -> sp.csc_matrix:
        if d not in self._matrices:
            m = sp.csc_matrix(self._arrays(d)[::-1], shape=(self.dims[d - 1], self.dims[d]))
            m.sort_indices()
            self._matrices[d] = m
        return self._matrices[d]

    def check(self):
        """Boundary-of-boundary vanishes; every d-face column has d+1 entries."""
        for d in range(1, self.top + 1):
            ptr, rows, data = self._arrays(d)
            sizes = np.diff(ptr)
            bad = sizes != d + 1
            wrong = (np.abs(data) != 1) | (rows < 0) | (rows >= self.dims[d - 1])
            bad[np.repeat(np.arange(len(sizes)), sizes)[wrong]] = True
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                raise InvariantError(
                    f"boundary column of a {d}-face is malformed",
                    {"dimension": d, "face": list(self.faces[d][j])},
                )
        for d in range(2, self.top + 1):
            prod = self.matrix(d - 1) @ self.matrix(d)
            prod.eliminate_zeros()
            if prod.nnz:
                r, c = prod.nonzero()
                raise InvariantError(
                    "boundary of boundary is non-zero",
                    {"dimension": d, "face": list(self.faces[d][int(c[0])])},
                )


def chain_complex_of(k, check: bool = True) -> ChainComplex:
    """Chain complex of a SimplicialComplex with deterministic face order."""
    faces = k.faces_by_dim()
    index = [{f: i for i, f in enumerate(level)} for level in faces]
    boundaries = {}
    for d in range(1, len(faces)):
        lower = index[d - 1]
        cols = []
        for f in faces[d]:
            cols.append({lower[f[:i] + f[i + 1:]]: (-1) ** i for i in range(d + 1)})
        boundaries[d] = cols
    return ChainComplex(faces, boundaries, check=check)


def parse_coefficients(coeffs) -> int | None:
    """``"Q"`` -> None; ``"GF(p)"``, ``"GFp:p"``, ``"GF:p"`` or an int -> p."""
    if coeffs is None or coeffs == "Q":
        return None
    if isinstance(coeffs, int):
        p = coeffs
    else:
        m = re.fullmatch(r"GF\((\d+)\)|GFp?:(\d+)", str(coeffs).strip())
        if not m:
            raise ValueError(f"unrecognised coefficients {coeffs!r}; use Q or GF(p)")
        p = int(m.group(1) or m.group(2))
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def coefficient_name(p: int | None) -> str:
    return "Q" if p is None else f"GF({p})"


def _ranks(c: ChainComplex, p: int | None) -> list[int]:
    """``ranks[d]`` = rank of the boundary out of dimension d (``ranks[0] = 0``).

    Runs top-down so that columns hit by a pivot one dimension up are skipped:
    such a face bounds modulo earlier faces, so its own column reduces to zero.
    """
    ranks = [0] * (c.top + 2)
    cleared: set = set()
    for d in range(c.top, 0, -1):
        piv = pivot_rows(c.boundaries[d], p, skip=cleared)
        ranks[d] = len(piv)
        cleared = piv
    return ranks


def _rational_ranks(c: ChainComplex, seed: int) -> list[int]:
    p1, p2 = random_large_primes(2, seed)
    r1, r2 = _ranks(c, p1), _ranks(c, p2)
    if r1 == r2:
        return r1
    return _ranks(c, None)


def ranks(c: ChainComplex, coefficients="Q", seed: int = 0) -> list[int]:
    p = parse_coefficients(coefficients)
    return _rational_ranks(c, seed) if p is None else _ranks(c, p)


def _reduced_from_ranks(c: ChainComplex, rk: list[int]) -> list[int]:
    if not c.dims or c.dims[0] == 0:
        return []
    out = [c.dims[d] - rk[d] - rk[d + 1] for d in range(c.top + 1)]
    out[0] -= 1
    return out


def betti(c: ChainComplex, coefficients="Q", seed: int = 0) -> list[int]:
    """Reduced Betti numbers in degrees ``0..top``; ``[]`` for the empty complex."""
    return _reduced_from_ranks(c, ranks(c, coefficients, seed))


@dataclass
class HomologyReport:
    betti: list[int]
    torsion: list[list[int]]
    euler: int
    coefficients: str = "Q"
    f_vector: list[int] = field(default_factory=list)

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def to_json(self, meta: dict | None = None) -> dict:
        out = {
            "format": "homology-v1",
            "betti": self.betti,
            "torsion": self.torsion,
            "euler": self.euler,
            "coefficients": self.coefficients,
        }
        if meta:
            out["meta"] = meta
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dimension", "faces", "reduced_betti", "torsion"])
        for d, b in enumerate(self.betti):
            faces = self.f_vector[d] if d < len(self.f_vector) else 0
            w.writerow([d, faces, b, " ".join(map(str, self.torsion[d]))])
        return buf.getvalue()


def homology_report(k, seed: int = 0, torsion: bool = True, check_prime: int = 2) -> HomologyReport:
    """Rational Betti numbers, integral torsion and the engine self-checks.

    Raises InvariantError when the Euler characteristic computed from faces
    disagrees with the one from Betti numbers, when the integral rank from
    Smith normal form disagrees with the rational rank, or when Betti numbers
    over GF(``check_prime``) fall below (or, torsion-free, differ from) the
    rational ones.
    """
    c = chain_complex_of(k)
    rk = _rational_ranks(c, seed)
    b = _reduced_from_ranks(c, rk)
    tors = [[] for _ in range(c.top + 1)]
    if torsion:
        for d in range(1, c.top + 1):
            factors = smith_normal_form((c.boundaries[d], c.dims[d - 1]))
            if len(factors) != rk[d]:
                raise InvariantError(
                    f"integral rank {len(factors)} of boundary {d} differs from rational rank {rk[d]}",
                    {"dimension": d},
                )
            tors[d - 1] = [f for f in factors if f > 1]
    euler_faces = sum((-1) ** d * n for d, n in enumerate(c.dims))
    unreduced = list(b)
    if unreduced:
        unreduced[0] += 1
    euler_betti = sum((-1) ** d * x for d, x in enumerate(unreduced))
    if euler_faces != euler_betti:
        raise InvariantError("Euler characteristic mismatch", {"faces": euler_faces, "betti": euler_betti})
    if check_prime:
        bp = _reduced_from_ranks(c, _ranks(c, check_prime))
        if any(x < y for x, y in zip(bp, b)):
            raise InvariantError(f"GF({check_prime}) Betti below rational Betti", {"gf": bp, "q": b})
        if torsion and not any(tors) and bp != b:
            raise InvariantError(
                f"GF({check_prime}) and rational Betti differ without torsion", {"gf": bp, "q": b}
            )
    return HomologyReport(b, tors, euler_faces, "Q", list(c.dims))


def homology_report_mod_p(k, p: int) -> HomologyReport:
    """Reduced Betti numbers over GF(p) with the boundary and Euler checks."""
    c = chain_complex_of(k)
    b = _reduced_from_ranks(c, _ranks(c, p))
    euler_faces = sum((-1) ** d * n for d, n in enumerate(c.dims))
    euler_betti = sum((-1) ** d * x for d, x in enumerate(b)) + (1 if b else 0)
    if euler_faces != euler_betti:
        raise InvariantError("Euler characteristic mismatch", {"faces": euler_faces, "betti": euler_betti})
    return HomologyReport(b, [[] for _ in b], euler_faces, coefficient_name(p), list(c.dims))
