"""Finite presentations, free-group words and triangularization.

A letter is a small integer ``2 * generator + (0 if positive else 1)`` so
that the inverse letter is ``letter ^ 1``.  A word is a tuple of letters.
In text, a generator is a lowercase letter and its inverse the matching
uppercase letter.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple  # tuple[int, ...]

_NEW_GENERATOR_NAMES = "tuvwxyz" + "srqponmlkjihgfedcba"


class PresentationError(ValueError):
    """Malformed presentation text or word."""


class ParseError(PresentationError):
    def __init__(self, message, position=None, line=None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


def letter(gen: int, sign: int = 1) -> int:
    return 2 * gen + (0 if sign > 0 else 1)


def gen_of(x: int) -> int:
    return x >> 1


def sign_of(x: int) -> int:
    return -1 if x & 1 else 1


def inverse(w: Sequence[int]) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


def free_reduce(w: Sequence[int]) -> Word:
    """Cancel adjacent inverse pairs.  The word is not cyclically reduced."""
    out = []
    for x in w:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


def cyclic_permutations(w: Sequence[int]) -> list:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] if w else [()]


def reduced_words(n_letters: int, length: int):
    """Yield every freely reduced word of exactly ``length`` letters."""
    if length == 0:
        yield ()
        return

    def extend(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in range(n_letters):
            if prefix and prefix[-1] == x ^ 1:
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


@dataclass(frozen=True)
class Presentation:
    """``<generators | relators>``; relators are stored exactly as given."""

    generators: tuple
    relators: tuple = field(default=())

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator names in {gens}")
        for g in gens:
            if len(g) != 1 or g not in string.ascii_lowercase:
                raise PresentationError(f"generator name must be one lowercase letter, got {g!r}")
        for r in self.relators:
            if not r:
                raise PresentationError("empty relator")
            for x in r:
                if not 0 <= gen_of(x) < len(gens):
                    raise PresentationError(f"relator letter {x} outside alphabet")

    @property
    def n_letters(self) -> int:
        return 2 * len(self.generators)

    @property
    def max_relator_length(self) -> int:
        """The constant K (longest relator); 0 for a free group."""
        return max((len(r) for r in self.relators), default=0)

    def is_triangular(self) -> bool:
        return self.max_relator_length <= 3

    def letter_name(self, x: int) -> str:
        name = self.generators[gen_of(x)]
        return name if sign_of(x) > 0 else name.upper()

    def render_word(self, w: Sequence[int]) -> str:
        return "".join(self.letter_name(x) for x in w)

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def face_words(self) -> frozenset:
        """Cyclic permutations of every relator and its inverse."""
        out = set()
        for r in self.relators:
            out.update(cyclic_permutations(r))
            out.update(cyclic_permutations(inverse(r)))
        return frozenset(out)

    def is_face_word(self, w: Sequence[int]) -> bool:
        return tuple(w) in self.face_words()

    def render(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines += ["rel: " + self.render_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    def __str__(self):
        rels = ", ".join(self.render_word(r) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    index = {g: i for i, g in enumerate(alphabet)}
    out = []
    for pos, ch in enumerate(text):
        if ch in index:
            out.append(letter(index[ch], 1))
        elif ch.lower() in index and ch.isupper():
            out.append(letter(index[ch.lower()], -1))
        else:
            raise ParseError(f"unknown letter {ch!r}", position=pos)
    return tuple(out)


def parse_presentation(text: str) -> Presentation:
    gens = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'gens:' or 'rel:', got {line!r}", line=lineno)
        key = key.strip()
        if key == "gens":
            if gens is not None:
                raise ParseError("second 'gens:' line", line=lineno)
            gens = tuple(value.split())
        elif key == "rel":
            if gens is None:
                raise ParseError("'rel:' before 'gens:'", line=lineno)
            word = value.strip()
            try:
                rels.append(parse_word(word, gens))
            except ParseError as exc:
                raise ParseError(f"bad relator {word!r}: unknown letter",
                                 position=exc.position, line=lineno) from None
        else:
            raise ParseError(f"unknown key {key!r}", line=lineno)
    if gens is None:
        raise ParseError("missing 'gens:' line")
    try:
        return Presentation(gens, rels)
    except PresentationError as exc:
        raise ParseError(str(exc)) from None


def read_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def triangularize(p: Presentation) -> Presentation:
    """Split long relators until every relator has length at most 3.

    A relator ``r = w1 w2`` with ``|w1| = 2`` becomes ``T w1`` and ``t w2``
    for a fresh generator ``t``; the second piece is split again while it
    is longer than 3.  A relator of length L contributes L - 3 generators.
    """
    gens = list(p.generators)
    free_names = [c for c in _NEW_GENERATOR_NAMES if c not in gens]
    rels = []
    for r in p.relators:
        while len(r) > 3:
            if not free_names:
                raise PresentationError("ran out of single-letter generator names")
            gens.append(free_names.pop(0))
            t = letter(len(gens) - 1, 1)
            rels.append((t ^ 1,) + r[:2])
            r = (t,) + r[2:]
        rels.append(r)
    return Presentation(tuple(gens), rels)


def is_null_homotopic_bounded(p: Presentation, w: Sequence[int], area_budget: int):
    """Return a witness diagram of area at most ``area_budget``, or None.

    None means only that no diagram exists within the budget.
    """
    from .enumerate import minimal_diagram

    return minimal_diagram(p, tuple(w), area_budget)


def abelian_lattice(p: Presentation):
    """Row basis (Hermite-style echelon form) of the relator exponent lattice."""
    n = len(p.generators)
    rows = [exponent_vector(r, n) for r in p.relators]
    return _echelon(rows, n)


def exponent_vector(w: Iterable[int], n_gens: int) -> list:
    v = [0] * n_gens
    for x in w:
        v[gen_of(x)] += sign_of(x)
    return v


def _echelon(rows, n):
    rows = [list(r) for r in rows if any(r)]
    basis = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            col += 1
            continue
        # Euclid on column entries
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            nxt = [pivot]
            for r in live[1:]:
                q = r[col] // pivot[col]
                r = [a - q * b for a, b in zip(r, pivot)]
                (nxt if r[col] != 0 else rest).append(r)
            live = nxt
        pivot = live[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append((col, pivot))
        rows = [r for r in rest if any(r)]
        col += 1
    return basis


def in_lattice(v, basis) -> bool:
    v = list(v)
    for col, row in basis:
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)
