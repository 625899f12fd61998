"""Reduced words in the free group of rank n.

A letter is a nonzero int: ``g`` stands for the generator ``a_g`` and ``-g``
for its inverse.  A :class:`Word` is a tuple of letters that is always
freely reduced; the empty word is the identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Letter",
    "Word",
    "WordSyntaxError",
    "parse_word",
    "format_word",
    "concat",
    "invert",
    "subview",
    "maximal_common_initial",
    "is_letter_free",
    "count_words",
    "count_words_exact_length",
    "enumerate_words",
    "check_rank",
]

DEFAULT_ENUMERATION_CAP = 10**7


class WordSyntaxError(ValueError):
    """Raised when text does not parse as a word at the requested rank."""


class Letter(NamedTuple):
    generator: int
    sign: int

    @classmethod
    def from_int(cls, x: int) -> "Letter":
        return cls(abs(x), 1 if x > 0 else -1)

    def __int__(self) -> int:
        return self.generator * self.sign


def check_rank(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"rank must be an integer >= 2, got {n!r}")
    return n


def _reduce(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


class Word(tuple):
    """An element of a free group, stored in freely reduced form.

    >>> Word([1, 2, -2, 1])
    Word('a^2')
    >>> Word([2, 1]) * Word([-1, -2])
    Word('1')
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        return tuple.__new__(cls, _reduce(int(x) for x in letters))

    @classmethod
    def _trusted(cls, letters: Iterable[int]) -> "Word":
        # caller guarantees the sequence is already reduced
        return tuple.__new__(cls, letters)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls(int(letter) for letter in letters)

    def letters(self) -> list[Letter]:
        return [Letter.from_int(x) for x in self]

    @property
    def max_generator(self) -> int:
        return max((abs(x) for x in self), default=0)

    def __mul__(self, other: "Word") -> "Word":  # type: ignore[override]
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def inverse(self) -> "Word":
        return invert(self)

    def prefix(self, k: int) -> "Word":
        return subview(self, k, "initial")

    def terminal_inverse(self, k: int) -> "Word":
        return subview(self, k, "terminalInverse")

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word._trusted(())


def concat(u: Word, v: Word) -> Word:
    """Reduced product ``uv``; only the seam needs cancelling."""
    i, j = len(u), 0
    while i > 0 and j < len(v) and u[i - 1] == -v[j]:
        i -= 1
        j += 1
    return Word._trusted(u[:i] + v[j:])


def invert(w: Word) -> Word:
    return Word._trusted(tuple(-x for x in reversed(w)))


def subview(w: Word, k: int, side: str = "initial") -> Word:
    """``w|_k`` (side="initial") or ``w|^k`` (side="terminalInverse").

    ``w|^k`` is the inverse of the terminal subword of length ``k``.
    """
    if not 1 <= k <= len(w):
        raise IndexError(f"subview length {k} out of range for word of length {len(w)}")
    if side == "initial":
        return Word._trusted(w[:k])
    if side == "terminalInverse":
        return Word._trusted(tuple(-x for x in reversed(w[len(w) - k:])))
    raise ValueError(f"unknown side {side!r}")


def maximal_common_initial(x: Word, y: Word) -> Word:
    """Longest common prefix of two distinct reduced words.

    For reduced words this is the largest initial subword of ``x`` that
    cancels in ``y^-1 x``.
    """
    if x == y:
        raise ValueError("maximal common initial subword is only defined for x != y")
    k = 0
    for a, b in zip(x, y):
        if a != b:
            break
        k += 1
    return Word._trusted(x[:k])


def is_letter_free(w: Word, i: int) -> bool:
    return all(abs(x) != i for x in w)


def count_words_exact_length(n: int, length: int) -> int:
    if length < 0:
        raise ValueError("length must be >= 0")
    if length == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (length - 1)


def count_words(n: int, p: int) -> int:
    """Number of reduced words of length at most ``p`` (identity included)."""
    check_rank(n)
    if p < 0:
        raise ValueError("p must be >= 0")
    return (n * (2 * n - 1) ** p - 1) // (n - 1)


def _letter_order(n: int) -> list[int]:
    # a, a^-1, b, b^-1, ...
    return [s * g for g in range(1, n + 1) for s in (1, -1)]


def enumerate_words(n: int, p: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Word]:
    """Yield every reduced word of length <= p, shortest first.

    Within one length the order is lexicographic in the letter order
    ``a < a^-1 < b < b^-1 < ...``.
    """
    total = count_words(n, p)
    if total > cap:
        raise OverflowError(f"|G_p| = {total} exceeds enumeration cap {cap}")
    order = _letter_order(n)
    layer: list[tuple[int, ...]] = [()]
    yield IDENTITY
    for _ in range(p):
        nxt = []
        for w in layer:
            last = w[-1] if w else 0
            for x in order:
                if x != -last:
                    nxt.append(w + (x,))
        for w in nxt:
            yield Word._trusted(w)
        layer = nxt


# ---------------------------------------------------------------- text format

_TERM = re.compile(r"\s*(?:g(\d+)|([a-z]))\s*(?:\^\s*([+-]?\d+))?\s*")


def parse_word(text: str, n: int) -> Word:
    """Parse ``text`` into a reduced word of rank ``n``.

    Accepts ``"1"`` for the identity, letter mode (``"ba^3b"``, ``a`` is
    generator 1) and general mode (``"g2.g1^3.g2"``).  The two modes may
    not be mixed.
    """
    check_rank(n)
    s = text.strip()
    if s == "1":
        return IDENTITY
    if not s:
        raise WordSyntaxError("empty word text; use '1' for the identity")
    letters: list[int] = []
    mode = None
    pos = 0
    while pos < len(s):
        if s[pos] == "." and mode == "general" and letters:
            pos += 1
            continue
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise WordSyntaxError(f"cannot parse {text!r} at offset {pos}")
        idx, char, exp = m.groups()
        # 'g' alone in letter mode is generator 7, 'g12' is general mode
        term_mode = "letter" if char is not None else "general"
        if mode is None:
            mode = term_mode
        elif mode != term_mode:
            raise WordSyntaxError(f"mixed letter and indexed generators in {text!r}")
        gen = ord(char) - ord("a") + 1 if char is not None else int(idx)
        if gen < 1 or gen > n:
            raise WordSyntaxError(f"generator {gen} out of range for rank {n}")
        e = 1 if exp is None else int(exp)
        if e == 0:
            raise WordSyntaxError(f"zero exponent in {text!r}")
        letters.extend([gen if e > 0 else -gen] * abs(e))
        pos = m.end()
    return Word(letters)


def _runs(w: Word) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    for x in w:
        g, s = abs(x), (1 if x > 0 else -1)
        if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (s > 0):
            runs[-1] = (g, runs[-1][1] + s)
        else:
            runs.append((g, s))
    return runs


def format_word(w: Word, n: int | None = None) -> str:
    """Canonical text for ``w``; letter mode unless the rank exceeds 26."""
    if not w:
        return "1"
    general = (n if n is not None else w.max_generator) > 26
    parts = []
    for g, e in _runs(w):
        name = f"g{g}" if general else chr(ord("a") + g - 1)
        parts.append(name if e == 1 else f"{name}^{e}")
    return ".".join(parts) if general else "".join(parts)
