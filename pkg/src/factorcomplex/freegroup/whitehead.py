"""Whitehead automorphisms and the primitivity test by cyclic-length descent."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .words import Word

Automorphism = tuple  # images of x_1..x_n, each a Word

# per non-multiplier generator x: x, x a, a^-1 x, a^-1 x a
_CHOICES = ("fix", "right", "left", "both")


def _image(x: int, a: int, choice: str, n: int) -> Word:
    gx, ga = Word((x,), n), Word((a,), n)
    if choice == "fix":
        return gx
    if choice == "right":
        return gx * ga
    if choice == "left":
        return ga.inverse() * gx
    return ga.inverse() * gx * ga


@lru_cache(maxsize=None)
def type_one_moves(n: int) -> tuple[Automorphism, ...]:
    """Signed permutations of the generators, identity first."""
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(tuple(Word((s * p,), n) for p, s in zip(perm, signs)))
    return tuple(out)


@lru_cache(maxsize=None)
def type_two_moves(n: int) -> tuple[Automorphism, ...]:
    """Non-identity moves fixing a multiplier letter ``a`` and sending each
    other generator to one of x, xa, a^-1 x, a^-1 x a."""
    out = []
    for a in [x for i in range(1, n + 1) for x in (i, -i)]:
        others = [i for i in range(1, n + 1) if i != abs(a)]
        for choice in itertools.product(_CHOICES, repeat=len(others)):
            if all(c == "fix" for c in choice):
                continue
            images = [Word((i,), n) for i in range(1, n + 1)]
            for i, c in zip(others, choice):
                images[i - 1] = _image(i, a, c, n)
            out.append(tuple(images))
    return tuple(out)


def whitehead_moves(n: int) -> list[Automorphism]:
    if n < 1:
        raise ValueError("rank must be at least 1")
    return list(type_one_moves(n)) + list(type_two_moves(n))


def apply(move: Automorphism, w: Word) -> Word:
    return w.apply(move)


def whitehead_minimize(w: Word) -> Word:
    """Cyclic word reached by greedy strictly length-decreasing Whitehead moves.

    Among the moves that shorten the most, the shortlex-least result wins.
    """
    cur = w.cyclic_reduce()
    moves = type_two_moves(w.n)
    while True:
        best = None
        for m in moves:
            img = cur.apply(m).cyclic_reduce()
            if len(img) < len(cur) and (best is None or img.sort_key() < best.sort_key()):
                best = img
        if best is None:
            return cur
        cur = best


def is_primitive(w: Word) -> bool:
    """Whether ``w`` belongs to some free basis of F_n.

    If a cyclic word is not of minimal length in its automorphism orbit, some
    Whitehead move shortens it; the orbit of a basis element has minimum
    length 1. So the greedy descent ends at length 1 exactly for primitives.
    """
    if w.is_trivial or not w.cyclic_reduce().letters:
        raise ValueError("the trivial word is not a basis element")
    return len(whitehead_minimize(w)) == 1
