"""Alphabets and words.

Words are plain tuples of non-negative ints; letters compare by value, which
is the lexicographic order used throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple


@dataclass(frozen=True)
class Alphabet:
    size: int
    labels: tuple | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"alphabet size must be positive, got {self.size}")
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("one label per letter required")

    @property
    def letters(self) -> range:
        return range(self.size)

    def check(self, word: Sequence[int]) -> Word:
        w = tuple(int(a) for a in word)
        for a in w:
            if not 0 <= a < self.size:
                raise ValueError(f"letter {a} outside alphabet of size {self.size}")
        return w

    def render(self, word: Sequence[int]) -> str:
        if self.labels is None:
            if self.size <= 10:
                return "".join(str(a) for a in word)
            return ".".join(str(a) for a in word)
        return "".join(str(self.labels[a]) for a in word)


def word(s: str | Iterable[int]) -> Word:
    """Build a word from a digit string ("0110") or an iterable of ints."""
    if isinstance(s, str):
        return tuple(int(ch) for ch in s)
    return tuple(int(a) for a in s)


def is_prefix(u: Word, w: Word) -> bool:
    return len(u) <= len(w) and w[: len(u)] == u


def is_suffix(u: Word, w: Word) -> bool:
    return len(u) <= len(w) and (len(u) == 0 or w[-len(u):] == u)


def is_subword(u: Word, w: Word) -> bool:
    n = len(u)
    return any(w[i:i + n] == u for i in range(len(w) - n + 1))


def occurrences(u: Word, w: Word) -> int:
    n = len(u)
    return sum(1 for i in range(len(w) - n + 1) if w[i:i + n] == u)


def lex_le(u: Word, w: Word) -> bool:
    """u precedes-or-equals w on their common length (prefix comparison)."""
    n = min(len(u), len(w))
    return u[:n] <= w[:n]
