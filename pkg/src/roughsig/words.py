"""Words over {1, ..., d} and the shuffle Hopf algebra on them.

Words are plain tuples of 1-based letters; the empty word is ``()``.
Integer linear combinations of words are :class:`WordPoly` instances.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from functools import lru_cache

from ._layout import get_entry_cap, tensor_size
from .errors import CapacityError, DomainError

Word = tuple[int, ...]
EMPTY: Word = ()


def word(letters: Iterable[int] | str, d: int | None = None) -> Word:
    """Build a word from letters, or from a digit string such as ``"121"``."""
    if isinstance(letters, str):
        w = tuple(int(c) for c in letters if not c.isspace())
    else:
        w = tuple(int(a) for a in letters)
    if d is not None:
        check_word(w, d)
    return w


def check_word(w: Word, d: int) -> None:
    if d < 1:
        raise DomainError("alphabet size must be >= 1")
    for a in w:
        if not 1 <= a <= d:
            raise DomainError(f"letter {a} not in alphabet 1..{d}")


def word_str(w: Word) -> str:
    return "".join(map(str, w)) if w else "∅"


class WordPoly(Mapping):
    """Finite integer combination of words; zero coefficients are dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = {}
        for w, c in items:
            acc[tuple(w)] = acc.get(tuple(w), 0) + int(c)
        self._terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1) -> WordPoly:
        return cls({w: coeff})

    def __getitem__(self, w: Word) -> int:
        return self._terms[w]

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WordPoly):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self._terms == WordPoly(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: WordPoly) -> WordPoly:
        return WordPoly(itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> WordPoly:
        return WordPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: WordPoly) -> WordPoly:
        return self + (-other)

    def __rmul__(self, k: int) -> WordPoly:
        return WordPoly({w: k * c for w, c in self._terms.items()})

    def shuffle(self, other: WordPoly) -> WordPoly:
        """Bilinear extension of :func:`shuffle`."""
        out: dict[Word, int] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                for w, c in shuffle(u, v).items():
                    out[w] = out.get(w, 0) + a * b * c
        return WordPoly(out)

    def degrees(self) -> set[int]:
        return {len(w) for w in self._terms}

    def __repr__(self) -> str:
        if not self._terms:
            return "WordPoly(0)"
        parts = [f"{c}*{word_str(w)}" for w, c in sorted(self._terms.items(), key=_order_key)]
        return "WordPoly(" + " + ".join(parts) + ")"


def _order_key(item):
    w = item[0]
    return (len(w), w)


@lru_cache(maxsize=1 << 16)
def _shuffle(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict[Word, int] = {}
    a, b = u[0], v[0]
    for w, c in _shuffle(u[1:], v):
        key = (a,) + w
        out[key] = out.get(key, 0) + c
    for w, c in _shuffle(u, v[1:]):
        key = (b,) + w
        out[key] = out.get(key, 0) + c
    return tuple(out.items())


def shuffle(u: Word, v: Word) -> WordPoly:
    """Shuffle product of two words.

    Uses the recursion (au) ш (bw) = a(u ш bw) + b(au ш w) with the empty
    word as unit; results are memoised on the (u, v) pair.

    >>> shuffle((1,), (2,))
    WordPoly(1*12 + 1*21)
    """
    return WordPoly(_shuffle(tuple(u), tuple(v)))


def deconcat(w: Word) -> list[tuple[Word, Word]]:
    """All |w|+1 splittings of ``w`` into (prefix, suffix)."""
    w = tuple(w)
    return [(w[:i], w[i:]) for i in range(len(w) + 1)]


def antipode(w: Word) -> tuple[int, Word]:
    """Signed reversal: S(a_1...a_n) = (-1)^n a_n...a_1."""
    w = tuple(w)
    return (-1 if len(w) % 2 else 1), w[::-1]


def antipode_poly(p: WordPoly) -> WordPoly:
    out = {}
    for w, c in p.items():
        sign, r = antipode(w)
        out[r] = out.get(r, 0) + sign * c
    return WordPoly(out)


def enumerate_words(d: int, depth: int) -> list[Word]:
    """Words of length <= depth, ordered by length then lexicographically.

    The position of a word in this list equals its index in the flat
    storage of a tensor in T^depth(R^d).
    """
    if d < 1:
        raise DomainError("alphabet size must be >= 1")
    if depth < 0:
        raise DomainError("depth must be >= 0")
    count = tensor_size(d, depth)
    if count > get_entry_cap():
        raise CapacityError(f"{count} words exceed the entry cap {get_entry_cap()}")
    letters = range(1, d + 1)
    return [w for k in range(depth + 1) for w in itertools.product(letters, repeat=k)]


def word_index(w: Word, d: int) -> int:
    """Position of ``w`` inside its level: sum_i (a_i - 1) d^(k-i)."""
    idx = 0
    for a in w:
        idx = idx * d + (a - 1)
    return idx


def flat_index(w: Word, d: int) -> int:
    """Position of ``w`` in the flattened tensor (all levels)."""
    return tensor_size(d, len(w) - 1) + word_index(w, d) if w else 0


def pair(x, w: Word) -> float:
    """Coefficient of e_{a_1} (x) ... (x) e_{a_k} in ``x``, for w = a_1...a_k."""
    w = tuple(w)
    if len(w) > x.depth:
        raise DomainError(f"word of length {len(w)} exceeds tensor depth {x.depth}")
    check_word(w, x.d)
    return float(x.flat[flat_index(w, x.d)])


def pair_poly(x, p: WordPoly) -> float:
    """Linear extension of :func:`pair` to word polynomials."""
    return float(sum(c * pair(x, w) for w, c in p.items()))
