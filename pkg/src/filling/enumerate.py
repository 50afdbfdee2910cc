"""Exhaustive construction of van Kampen diagrams for short words.

Diagrams are grown inward from the boundary.  The unfilled part of the
diagram is a stack of regions, each a closed walk of open darts (darts
whose twin is not yet fixed).  The first open dart of the top region is
either glued to another open dart of the same region, which splits the
region in two, or it becomes the twin of a dart of a new face whose other
darts join the region.  Gluing only inside a region keeps the map planar,
and because each decision is forced by the finished diagram, every diagram
is produced exactly once.
"""

from __future__ import annotations

from .diagram import VanKampenDiagram
from .presentation import Presentation, abelian_lattice, exponent_vector, free_reduce, in_lattice

INFEASIBLE = 10 ** 9


class EnumerationLimit(RuntimeError):
    """Refusal when the number of diagrams exceeds the caller's limit."""

    def __init__(self, message, count):
        super().__init__(message)
        self.count = count


class AreaOracle:
    """Memoized minimal filling area of cyclic words, up to a cap.

    ``min_area(word, cap)`` returns the exact minimum when it is at most
    ``cap`` and ``INFEASIBLE`` otherwise.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.faces_by_first = {}
        for u in sorted(presentation.face_words()):
            self.faces_by_first.setdefault(u[0], []).append(u)
        self._lattice = abelian_lattice(presentation)
        self._n_gens = len(presentation.generators)
        self._memo = {}

    def _key(self, word):
        n = len(word)
        return min(word[i:] + word[:i] for i in range(n))

    def abelian_ok(self, word) -> bool:
        return in_lattice(exponent_vector(word, self._n_gens), self._lattice)

    def min_area(self, word, cap: int) -> int:
        if not word:
            return 0
        if cap < 0:
            return INFEASIBLE
        key = self._key(tuple(word))
        got = self._memo.get(key)
        if got is not None:
            value, known_cap = got
            if value <= known_cap or cap <= known_cap:
                return value if value <= cap else INFEASIBLE
        value = self._solve(key, cap)
        self._memo[key] = (value, cap)
        return value

    def _solve(self, word, cap):
        if len(word) % 2 and not any(len(u) % 2 for u in self.presentation.face_words()):
            return INFEASIBLE
        if not self.abelian_ok(word):
            return INFEASIBLE
        if not free_reduce(word):
            # freely trivial words still need 0 faces only if the reduction is planar,
            # which it always is: the reduction tree is a planar filling
            return 0
        if cap == 0:
            return INFEASIBLE
        best = INFEASIBLE
        x = word[0]
        n = len(word)
        for j in range(1, n):
            if word[j] != x ^ 1:
                continue
            a = self.min_area(word[1:j], min(cap, best - 1))
            if a >= best:
                continue
            b = self.min_area(word[j + 1:], min(cap, best - 1) - a)
            if a + b < best:
                best = a + b
        for u in self.faces_by_first.get(x ^ 1, ()):
            if best <= 1:
                break
            a = self.min_area(u[1:] + word[1:], min(cap, best - 1) - 1)
            if a + 1 < best:
                best = a + 1
        return best if best <= cap else INFEASIBLE


def enumerate_diagrams(presentation: Presentation, word, max_area: int,
                       limit: int | None = None, oracle: AreaOracle | None = None):
    """Every van Kampen diagram with boundary ``word`` and area at most ``max_area``."""
    return list(iter_diagrams(presentation, word, max_area, limit, oracle))


def iter_diagrams(presentation: Presentation, word, max_area: int,
                  limit: int | None = None, oracle: AreaOracle | None = None):
    word = tuple(word)
    if oracle is None:
        oracle = AreaOracle(presentation)
    if not word:
        yield VanKampenDiagram.trivial(presentation)
        return
    if oracle.min_area(word, max_area) > max_area:
        return

    label = list(word)
    twin = [-1] * len(word)
    faces = []
    boundary = tuple(range(len(word)))
    count = 0

    def need(regions):
        total = 0
        for r in regions:
            total += oracle.min_area(tuple(label[d] for d in r), max_area)
            if total >= INFEASIBLE:
                break
        return total

    def grow(regions, area_left):
        nonlocal count
        if not regions:
            count += 1
            if limit is not None and count > limit:
                raise EnumerationLimit(f"more than {limit} diagrams", count - 1)
            yield VanKampenDiagram.from_gluing(presentation, list(label), list(twin),
                                               [list(f) for f in faces], boundary)
            return
        region = regions[-1]
        rest = regions[:-1]
        b0 = region[0]
        x = label[b0]
        for j in range(1, len(region)):
            bj = region[j]
            if label[bj] != x ^ 1:
                continue
            parts = [r for r in (region[j + 1:], region[1:j]) if r]
            nxt = rest + tuple(parts)
            if need(nxt) > area_left:
                continue
            twin[b0], twin[bj] = bj, b0
            yield from grow(nxt, area_left)
            twin[b0] = twin[bj] = -1
        if area_left == 0:
            return
        for u in oracle.faces_by_first.get(x ^ 1, ()):
            k = len(label)
            darts = list(range(k, k + len(u)))
            label.extend(u)
            twin.extend([-1] * len(u))
            twin[b0], twin[k] = k, b0
            faces.append(darts)
            new_region = tuple(darts[1:]) + region[1:]
            nxt = rest + ((new_region,) if new_region else ())
            if need(nxt) <= area_left - 1:
                yield from grow(nxt, area_left - 1)
            faces.pop()
            del label[k:]
            del twin[k:]
            twin[b0] = -1

    yield from grow((boundary,), max_area)


def minimal_area(presentation: Presentation, word, cap: int, oracle: AreaOracle | None = None):
    """Minimal area of a diagram for ``word`` if at most ``cap``, else None."""
    oracle = oracle or AreaOracle(presentation)
    a = oracle.min_area(tuple(word), cap)
    return None if a > cap else a


def minimal_diagram(presentation: Presentation, word, cap: int, oracle: AreaOracle | None = None):
    """A minimal-area diagram for ``word`` with area at most ``cap``, or None."""
    oracle = oracle or AreaOracle(presentation)
    a = minimal_area(presentation, word, cap, oracle)
    if a is None:
        return None
    return next(iter_diagrams(presentation, word, a, oracle=oracle))
