"""Braid words, the wrap/torus families built from them, and braid closure.

A braid word on ``n`` strands is a sequence of nonzero integers; ``k > 0`` is
the generator sigma_k (a positive crossing between strands k and k+1) and
``k < 0`` its inverse.  Generators are indexed from 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence


class MalformedWordError(ValueError):
    """Raised when braid word text cannot be parsed."""


class BraidDomainError(ValueError):
    """Raised when a braid operation gets out-of-range parameters."""


class SplitSummandWarning(UserWarning):
    """A connected-sum summand closes up to a link with several components."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidDomainError(f"strand count must be positive, got {self.strands}")
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        for k in self.letters:
            if k == 0 or abs(k) >= self.strands:
                raise BraidDomainError(f"letter {k} is not a generator of B_{self.strands}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(k) for k in self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return concat(self, other)

    def __pow__(self, k: int) -> "BraidWord":
        return power(self, k)

    @property
    def exponent_sum(self) -> int:
        return sum(1 if k > 0 else -1 for k in self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-k for k in reversed(self.letters)))

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-k for k in self.letters))

    def permutation(self) -> "BraidPermutation":
        return BraidPermutation.of(self)

    def components(self) -> int:
        return self.permutation().cycle_count()

    def to_dict(self) -> dict:
        return {"strands": self.strands, "letters": list(self.letters)}


@dataclass(frozen=True)
class BraidPermutation:
    """Permutation of strand positions induced by a braid word.

    ``images[p]`` is the bottom position (0-based) reached by the strand
    that starts at top position ``p``.
    """

    strands: int
    images: tuple[int, ...]

    @classmethod
    def of(cls, word: BraidWord) -> "BraidPermutation":
        at = list(range(word.strands))  # at[position] = starting strand
        for k in word.letters:
            i = abs(k) - 1
            at[i], at[i + 1] = at[i + 1], at[i]
        images = [0] * word.strands
        for pos, strand in enumerate(at):
            images[strand] = pos
        return cls(word.strands, tuple(images))

    def compose(self, other: "BraidPermutation") -> "BraidPermutation":
        """Permutation of ``self`` followed by ``other``."""
        if self.strands != other.strands:
            raise BraidDomainError("strand mismatch")
        return BraidPermutation(self.strands, tuple(other.images[i] for i in self.images))

    def is_identity(self) -> bool:
        return all(i == p for p, i in enumerate(self.images))

    def cycle_count(self) -> int:
        seen = [False] * self.strands
        cycles = 0
        for start in range(self.strands):
            if seen[start]:
                continue
            cycles += 1
            p = start
            while not seen[p]:
                seen[p] = True
                p = self.images[p]
        return cycles


def identity(strands: int) -> BraidWord:
    return BraidWord(strands, ())


def parse_braid(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices, e.g. ``"1 2 -1"``."""
    letters = []
    for token in text.split():
        try:
            k = int(token)
        except ValueError:
            raise MalformedWordError(f"not an integer: {token!r}") from None
        if k == 0:
            raise MalformedWordError("zero is not a braid generator")
        if abs(k) >= strands:
            raise MalformedWordError(f"generator {k} out of range for {strands} strands")
        letters.append(k)
    return BraidWord(strands, tuple(letters))


def _check_index(i: int, n: int):
    if not 1 <= i <= n - 1:
        raise BraidDomainError(f"generator index {i} out of range for B_{n}")


def w_word(i: int, j: int, n: int, inverted: bool = False) -> BraidWord:
    """The wrap word sigma_i ... sigma_j sigma_j ... sigma_i (pure braid).

    For ``i > j`` the indices run downward first.  ``inverted`` negates
    every letter.
    """
    _check_index(i, n)
    _check_index(j, n)
    if i == j:
        raise BraidDomainError("w_word needs distinct indices")
    step = 1 if i < j else -1
    run = list(range(i, j + step, step))
    letters = run + run[::-1]
    if inverted:
        letters = [-k for k in letters]
    return BraidWord(n, tuple(letters))


def torus_word(p: int, q: int) -> BraidWord:
    """(sigma_1 ... sigma_{p-1})^q on p strands; closes to T(p, q)."""
    if p < 1 or q < 0:
        raise BraidDomainError(f"bad torus parameters ({p}, {q})")
    return BraidWord(p, tuple(range(1, p)) * q)


def concat(w1: BraidWord, w2: BraidWord) -> BraidWord:
    if w1.strands != w2.strands:
        raise BraidDomainError(f"cannot concatenate B_{w1.strands} and B_{w2.strands} words")
    return BraidWord(w1.strands, w1.letters + w2.letters)


def power(w: BraidWord, k: int) -> BraidWord:
    """``w`` repeated ``k`` times; negative ``k`` repeats the inverse."""
    if k < 0:
        return power(w.inverse(), -k)
    return BraidWord(w.strands, w.letters * k)


def embed(w: BraidWord, strands: int) -> BraidWord:
    """Same letters, viewed on ``strands >= w.strands`` strands."""
    if strands < w.strands:
        raise BraidDomainError(f"cannot embed B_{w.strands} into B_{strands}")
    return BraidWord(strands, w.letters)


def shift(w: BraidWord, offset: int, new_strands: int) -> BraidWord:
    if offset < 0:
        raise BraidDomainError("offset must be nonnegative")
    if w.strands + offset > new_strands:
        raise BraidDomainError(
            f"shifting B_{w.strands} by {offset} overflows {new_strands} strands")
    return BraidWord(new_strands, tuple(k + offset if k > 0 else k - offset for k in w.letters))


def connected_sum(w1: BraidWord, w2: BraidWord) -> BraidWord:
    """Join the last strand of ``w1`` to the first strand of ``w2``.

    For knot closures this is the knot connected sum.  Summands whose
    closure has several components are composed anyway, with a
    :class:`SplitSummandWarning`.
    """
    if w1.components() > 1 or w2.components() > 1:
        warnings.warn("connected sum of a multi-component closure; the joined "
                      "components depend on strand placement", SplitSummandWarning,
                      stacklevel=2)
    n = w1.strands + w2.strands - 1
    return concat(embed(w1, n), shift(w2, w1.strands - 1, n))


def overlapping_sum(block_strands: int, block_power: int, copies: int) -> BraidWord:
    """Chain of ``copies`` torus blocks that share one generator index.

    Block k uses generators s..s+p-2 with s = 1 + k(p-2), so
    ``overlapping_sum(5, 6, 3)`` is
    (s1 s2 s3 s4)^6 (s4 s5 s6 s7)^6 (s7 s8 s9 s10)^6 on 11 strands.
    """
    p, q, c = block_strands, block_power, copies
    if p < 2 or q < 0 or c < 1:
        raise BraidDomainError(f"bad overlapping-sum parameters ({p}, {q}, {c})")
    strands = 1 + (p - 1) + (c - 1) * (p - 2)
    letters: list[int] = []
    for k in range(c):
        start = 1 + k * (p - 2)
        letters.extend(list(range(start, start + p - 1)) * q)
    return BraidWord(strands, tuple(letters))


def full_twist(n: int) -> BraidWord:
    return torus_word(n, n)


def expansion_identity(n: int) -> tuple[BraidWord, BraidWord]:
    """``(w_{1,n-1}, (s1..s_{n-1})^n (s1..s_{n-2})^{-(n-1)})`` in B_n.

    The second word is the full twist on n strands times the inverse full
    twist on the first n-1 strands.  It equals w_{n-1,1}, a conjugate of
    w_{1,n-1} by the half twist, so the two closures are the same link.
    """
    if n < 3:
        raise BraidDomainError("expansion identity needs n >= 3")
    expanded = concat(full_twist(n), embed(power(full_twist(n - 1), -1), n))
    return w_word(1, n - 1, n), expanded


def alternating_expansion(n: int) -> BraidWord:
    """Product over k = n-1..1 of (s1..s_k)^{(-1)^(n-1-k) (k+1)}.

    Agrees with the second word of :func:`expansion_identity` for n = 3
    only; for larger n it carries extra full twists.
    """
    if n < 3:
        raise BraidDomainError("expansion needs n >= 3")
    word = identity(n)
    for k in range(n - 1, 0, -1):
        block = BraidWord(n, tuple(range(1, k + 1)))
        word = concat(word, power(block, (-1) ** (n - 1 - k) * (k + 1)))
    return word


def closure(w: BraidWord):
    from .diagram import LinkDiagram
    return LinkDiagram.from_braid(w)


def words(strands: int, length: int) -> Iterable[BraidWord]:
    """All braid words of exactly ``length`` letters on ``strands`` strands."""
    alphabet = [k for g in range(1, strands) for k in (g, -g)]

    def rec(prefix: list[int], left: int):
        if left == 0:
            yield BraidWord(strands, tuple(prefix))
            return
        for k in alphabet:
            prefix.append(k)
            yield from rec(prefix, left - 1)
            prefix.pop()

    yield from rec([], length)


def is_cyclically_reduced(letters: Sequence[int]) -> bool:
    if any(a == -b for a, b in zip(letters, letters[1:])):
        return False
    return len(letters) < 2 or letters[0] != -letters[-1]


def rotation_class_rep(letters: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least cyclic rotation; rotations are conjugations."""
    t = tuple(letters)
    if not t:
        return t
    return min(t[i:] + t[:i] for i in range(len(t)))
