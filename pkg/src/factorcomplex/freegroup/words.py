"""Words in the free group on generators x_1..x_n.

A letter is a signed generator index: ``i`` is x_i and ``-i`` its inverse.
The text syntax uses ``a..z`` for generators and ``A..Z`` for inverses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_RANK = 26


def letter_key(letter: int) -> tuple[int, int]:
    # a < A < b < B < ...
    return (abs(letter), 0 if letter > 0 else 1)


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_RANK:
            raise ValueError(f"rank {self.n} outside 1..{MAX_RANK}")
        for x in self.letters:
            if x == 0 or abs(x) > self.n:
                raise ValueError(f"generator index {x} out of range for rank {self.n}")

    @classmethod
    def parse(cls, text: str, n: int) -> "Word":
        text = text.strip()
        if text in ("", "1", "e"):
            return cls((), n)
        letters = []
        for ch in text:
            if "a" <= ch <= "z":
                letters.append(ord(ch) - ord("a") + 1)
            elif "A" <= ch <= "Z":
                letters.append(-(ord(ch) - ord("A") + 1))
            else:
                raise ValueError(f"bad letter {ch!r} in {text!r}")
        return free_reduce(cls(tuple(letters), n))

    @classmethod
    def generator(cls, i: int, n: int) -> "Word":
        return cls((i,), n)

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r}, n={self.n})"

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.n != other.n:
            raise ValueError("words from free groups of different rank")
        return Word(reduce_letters(self.letters + other.letters), self.n)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.n)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(reduce_letters(base.letters * abs(k)), self.n)

    @property
    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def cyclic_reduce(self) -> "Word":
        w = reduce_letters(self.letters)
        i, j = 0, len(w)
        while j - i >= 2 and w[i] == -w[j - 1]:
            i += 1
            j -= 1
        return Word(w[i:j], self.n)

    @property
    def cyclic_length(self) -> int:
        return len(self.cyclic_reduce())

    def sort_key(self):
        """Shortlex order with a < A < b < B < ..."""
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def apply(self, images: Sequence["Word"]) -> "Word":
        """Image under the endomorphism sending x_i to ``images[i-1]``."""
        out: list[int] = []
        for x in self.letters:
            img = images[x - 1].letters if x > 0 else images[-x - 1].inverse().letters
            for y in img:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return Word(tuple(out), images[0].n if images else self.n)


def free_reduce(w: Word) -> Word:
    return Word(reduce_letters(w.letters), w.n)


def all_reduced_words(n: int, max_len: int) -> list[Word]:
    """Every freely reduced word of length <= max_len, shortlex ordered."""
    letters = [x for i in range(1, n + 1) for x in (i, -i)]
    level = [()]
    out = [Word((), n)]
    for _ in range(max_len):
        nxt = []
        for w in level:
            for x in letters:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        out.extend(Word(w, n) for w in nxt)
        level = nxt
    out.sort(key=Word.sort_key)
    return out
