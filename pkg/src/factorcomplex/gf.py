"""Arithmetic in small finite fields GF(q), q a prime power.

Elements are the integers ``0..q-1``; for q = p^k an element encodes the
polynomial whose base-p digits are its coefficients (lowest degree first).
"""
from __future__ import annotations

from functools import lru_cache

# Irreducible (monic) polynomials, coefficients lowest degree first.
_MODULI = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, (1, 0, 1)),  # x^2 + 1
}

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)


@lru_cache(maxsize=1024)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class GF:
    """Finite field of order ``q`` backed by precomputed tables."""

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            raise ValueError(f"unsupported field order {q}; expected one of {SUPPORTED_ORDERS}")
        self.q = q
        if is_prime(q):
            self.p, self.k = q, 1
            self.add_table = [[(a + b) % q for b in range(q)] for a in range(q)]
            self.mul_table = [[(a * b) % q for b in range(q)] for a in range(q)]
        else:
            p, modulus = _MODULI[q]
            self.p, self.k = p, len(modulus) - 1
            self.add_table = [[self._poly_add(a, b) for b in range(q)] for a in range(q)]
            self.mul_table = [[self._poly_mul(a, b, modulus) for b in range(q)] for a in range(q)]
        self.neg_table = [self.add_table[a].index(0) for a in range(q)]
        self.inv_table = [0] + [self.mul_table[a].index(1) for a in range(1, q)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _poly_add(self, a, b):
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_mul(self, a, b, modulus):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(len(prod) - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i, m in enumerate(modulus):
                    prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
        return self._undigits(prod[:k])

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
