"""Word arithmetic in a free group over a fixed symmetric basis.

Letters are nonzero integers: ``i`` stands for the i-th basis element and
``-i`` for its inverse.  A word is a tuple of letters.  The ASCII form uses
``a..z`` for the basis and ``A..Z`` for inverses, so ``"abA"`` is a*b*a^-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Tuple

from relcurr.errors import InputError

Word = Tuple[int, ...]

MAX_RANK = 26
_LOWER = "abcdefghijklmnopqrstuvwxyz"


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse an ASCII word and freely reduce it.

    >>> format_word(parse_word("abBa"))
    'aa'
    """
    letters = []
    for ch in text.strip():
        if ch in _LOWER:
            letter = _LOWER.index(ch) + 1
        elif ch.lower() in _LOWER and ch.isupper():
            letter = -(_LOWER.index(ch.lower()) + 1)
        else:
            raise InputError(f"unknown letter symbol {ch!r} in {text!r}")
        if rank is not None and abs(letter) > rank:
            raise InputError(f"letter {ch!r} outside the rank-{rank} alphabet")
        letters.append(letter)
    return reduce(letters)


def format_word(w: Iterable[int]) -> str:
    out = []
    for letter in w:
        ch = _LOWER[abs(letter) - 1]
        out.append(ch if letter > 0 else ch.upper())
    return "".join(out)


def reduce(raw: Iterable[int]) -> Word:
    """Free reduction by a single left-to-right stack pass."""
    stack: list[int] = []
    for letter in raw:
        if not isinstance(letter, int) or letter == 0 or abs(letter) > MAX_RANK:
            raise InputError(f"not a letter: {letter!r}")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Word) -> Word:
    return reduce(itertools.chain.from_iterable(words))


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def letter_key(letter: int) -> tuple[int, int]:
    # a < A < b < B < ...
    return (abs(letter), 0 if letter > 0 else 1)


def word_key(w: Sequence[int]) -> tuple:
    return tuple(letter_key(x) for x in w)


def canonical(w: Word) -> Word:
    """The lexicographically smaller of ``w`` and its inverse."""
    inv = invert(w)
    return w if word_key(w) <= word_key(inv) else inv


@dataclass(frozen=True)
class Alphabet:
    """The 2n letters of a free basis together with their inverses."""

    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise InputError(f"rank must lie in 1..{MAX_RANK}, got {self.rank}")

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(sorted(
            [i for i in range(1, self.rank + 1)] + [-i for i in range(1, self.rank + 1)],
            key=letter_key,
        ))

    @staticmethod
    def inverse(letter: int) -> int:
        return -letter

    def contains(self, w: Sequence[int]) -> bool:
        return all(0 < abs(x) <= self.rank for x in w)

    def extensions(self, w: Word) -> Iterator[Word]:
        """Length-one extensions ``w*b`` with ``b`` not cancelling."""
        for b in self.letters:
            if not w or w[-1] != -b:
                yield w + (b,)

    def reduced_words(self, length: int) -> list[Word]:
        """All reduced words of the given length, in ``word_key`` order."""
        level: list[Word] = [()]
        for _ in range(length):
            level = [v for w in level for v in self.extensions(w)]
        return level

    def words_up_to(self, length: int) -> Iterator[Word]:
        for m in range(length + 1):
            yield from self.reduced_words(m)

    def cyclically_reduced_words(self, length: int) -> list[Word]:
        return [w for w in self.reduced_words(length) if is_cyclically_reduced(w)]


@dataclass(frozen=True, eq=False)
class CyclicWord:
    """A conjugacy class with a cyclically reduced representative.

    Equality and hashing are by class: two cyclic words are equal when their
    representatives are rotations of one another.  ``least`` is the least
    rotation under ``word_key``.
    """

    word: Word
    least: Word = field(init=False, repr=False)

    def __post_init__(self):
        w = tuple(self.word)
        if not w:
            raise InputError("a cyclic word must be nonempty")
        if not is_cyclically_reduced(w):
            raise InputError(f"{format_word(w)!r} is not cyclically reduced")
        object.__setattr__(self, "word", w)
        object.__setattr__(self, "least", min((w[i:] + w[:i] for i in range(len(w))), key=word_key))

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.least == other.least

    def __hash__(self):
        return hash(self.least)

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> "CyclicWord":
        core, _ = cyclic_reduce(parse_word(text, rank))
        if core is None:
            raise InputError(f"{text!r} is trivial")
        return core

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return format_word(self.word)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(invert(self.word))

    def power(self, k: int) -> "CyclicWord":
        return CyclicWord(self.word * k)

    def periodic(self, start: int, length: int) -> Word:
        """``length`` letters of the bi-infinite word g^inf read from ``start``."""
        m = len(self.word)
        return tuple(self.word[(start + j) % m] for j in range(length))


def cyclic_reduce(w: Word) -> tuple[CyclicWord | None, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1``.

    Returns ``(None, conjugator)`` when ``w`` is the identity.
    """
    w = reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    if i > j:
        # only reachable for the empty word
        return None, ()
    return CyclicWord(w[i:j + 1]), w[:i]


def primitive_root(g: CyclicWord) -> tuple[CyclicWord, int]:
    """``g = root**exponent`` with ``root`` not a proper power."""
    w = g.word
    m = len(w)
    for d in range(1, m + 1):
        if m % d == 0 and w[:d] * (m // d) == w:
            return CyclicWord(w[:d]), m // d
    raise AssertionError("unreachable")


def occurrences(u: Word, g: CyclicWord) -> int:
    """Start positions in one period of g^inf at which ``u`` can be read."""
    if not u:
        raise InputError("occurrences needs a nonempty word")
    m = len(g.word)
    return sum(1 for i in range(m) if g.periodic(i, len(u)) == tuple(u))


class Automorphism:
    """An automorphism given by the images of the positive letters.

    The caller supplies the inverse images as well; the constructor checks
    that the two maps compose to the identity in both orders.
    """

    def __init__(self, rank: int, images: Mapping[int, Word], inverse_images: Mapping[int, Word]):
        self.rank = rank
        self.images = {i: reduce(images.get(i, (i,))) for i in range(1, rank + 1)}
        self.inverse_images = {i: reduce(inverse_images.get(i, (i,))) for i in range(1, rank + 1)}
        alphabet = Alphabet(rank)
        for table in (self.images, self.inverse_images):
            for img in table.values():
                if not alphabet.contains(img):
                    raise InputError("automorphism image uses letters outside the alphabet")
        for i in range(1, rank + 1):
            if _substitute(self.images, self.inverse_images[i]) != (i,) or \
                    _substitute(self.inverse_images, self.images[i]) != (i,):
                raise InputError(
                    f"supplied inverse does not invert the map on letter {format_word((i,))!r}")

    @classmethod
    def parse(cls, rank: int, images: str, inverse_images: str) -> "Automorphism":
        """Parse ``"a:ab,b:b"`` style maps; unlisted letters are fixed."""
        return cls(rank, _parse_map(images, rank), _parse_map(inverse_images, rank))

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        return cls(rank, {}, {})

    def __call__(self, w: Word) -> Word:
        return apply_automorphism(self, w)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.rank, self.inverse_images, self.images)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``: apply ``other`` first."""
        images = {i: _substitute(self.images, other.images[i]) for i in other.images}
        inverse = {i: _substitute(other.inverse_images, self.inverse_images[i])
                   for i in self.inverse_images}
        return Automorphism(self.rank, images, inverse)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __repr__(self):
        body = ", ".join(f"{format_word((i,))}->{format_word(w)}" for i, w in self.images.items())
        return f"Automorphism({body})"


def _substitute(images: Mapping[int, Word], w: Word) -> Word:
    out: list[int] = []
    for letter in w:
        img = images[abs(letter)]
        out.extend(img if letter > 0 else invert(img))
    return reduce(out)


def _parse_map(text: str, rank: int) -> dict[int, Word]:
    table = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        src, sep, dst = item.partition(":")
        if not sep:
            raise InputError(f"bad automorphism entry {item!r}, expected 'x:word'")
        letter = parse_word(src, rank)
        if len(letter) != 1 or letter[0] < 0:
            raise InputError(f"automorphism source must be a positive letter, got {src!r}")
        table[letter[0]] = parse_word(dst, rank)
    return table


def apply_automorphism(phi: Automorphism, w: Word) -> Word:
    """Letterwise substitution followed by free reduction."""
    return _substitute(phi.images, w)
