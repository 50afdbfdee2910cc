"""Shelling of finite rooted binary forests.

Every node of a tree has either no children or exactly two.  The visible
nodes of a forest are its roots; an elementary shelling removes one root,
exposing its children.  The visibility number of a shelling is the largest
number of simultaneously visible nodes, counting the initial roots.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field


class ShellingError(ValueError):
    pass


class TooLargeError(ShellingError):
    """Refusal of the exhaustive search."""


@dataclass
class RootedTree:
    """Arena of nodes; ``children[i]`` is ``None`` or a ``(left, right)`` pair."""

    children: list
    root: int = 0

    def __post_init__(self):
        seen = set()
        stack = [self.root]
        while stack:
            v = stack.pop()
            if v in seen:
                raise ShellingError(f"node {v} reached twice")
            seen.add(v)
            kids = self.children[v]
            if kids is not None:
                if len(kids) != 2:
                    raise ShellingError(f"node {v} must have 0 or 2 children")
                stack.extend(kids)
        if len(seen) != len(self.children):
            raise ShellingError("tree has unreachable nodes")

    def __len__(self):
        return len(self.children)

    def subtree_sizes(self) -> list:
        size = [1] * len(self.children)
        for v in reversed(self.preorder()):
            kids = self.children[v]
            if kids is not None:
                size[v] += size[kids[0]] + size[kids[1]]
        return size

    def preorder(self) -> list:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            kids = self.children[v]
            if kids is not None:
                stack.append(kids[1])
                stack.append(kids[0])
        return out

    def to_text(self) -> str:
        def render(v):
            kids = self.children[v]
            if kids is None:
                return "()"
            return f"({render(kids[0])} {render(kids[1])})"

        return render(self.root)

    @classmethod
    def leaf(cls):
        return cls([None])

    @classmethod
    def join(cls, left: "RootedTree", right: "RootedTree") -> "RootedTree":
        """New root over copies of ``left`` and ``right``."""
        children = [None]
        offs = []
        for t in (left, right):
            base = len(children)
            offs.append(base + t.root)
            for kids in t.children:
                children.append(None if kids is None else (kids[0] + base, kids[1] + base))
        children[0] = tuple(offs)
        return cls(children, 0)


@dataclass
class ShellingSchedule:
    steps: list  # (tree index, node) in removal order
    trace: list = field(default_factory=list)  # visible count after each step
    initial: int = 0

    @property
    def visibility(self) -> int:
        return max([self.initial] + self.trace)


def complete_tree(depth: int) -> RootedTree:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = 2 ** (depth + 1) - 1
    children = [None] * n
    for v in range(n // 2):
        children[v] = (2 * v + 1, 2 * v + 2)
    return RootedTree(children, 0)


def random_tree(n_nodes: int, rng: random.Random) -> RootedTree:
    """Grow a full binary tree by splitting uniformly chosen leaves."""
    if n_nodes < 1 or n_nodes % 2 == 0:
        raise ValueError("a full binary tree has an odd number of nodes")
    children = [None]
    leaves = [0]
    while len(children) < n_nodes:
        i = rng.randrange(len(leaves))
        v = leaves[i]
        a, b = len(children), len(children) + 1
        children.extend([None, None])
        children[v] = (a, b)
        leaves[i] = a
        leaves.append(b)
    return RootedTree(children, 0)


def all_trees(n_nodes: int) -> list:
    """Every full binary tree shape (ordered) with ``n_nodes`` nodes."""
    if n_nodes % 2 == 0:
        return []
    table = {1: [RootedTree.leaf()]}
    for n in range(3, n_nodes + 1, 2):
        table[n] = [RootedTree.join(l, r)
                    for k in range(1, n - 1, 2)
                    for l in table[k] for r in table[n - 1 - k]]
    return table[n_nodes]


def parse_forest(text: str) -> list:
    """Parse whitespace-separated trees written as ``()`` or ``(L R)``."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node(children):
        nonlocal pos
        skip()
        if pos >= len(text) or text[pos] != "(":
            raise ShellingError(f"expected '(' at position {pos}")
        pos += 1
        me = len(children)
        children.append(None)
        skip()
        if pos < len(text) and text[pos] == ")":
            pos += 1
            return me
        left = node(children)
        right = node(children)
        skip()
        if pos >= len(text) or text[pos] != ")":
            raise ShellingError(f"expected ')' at position {pos}")
        pos += 1
        children[me] = (left, right)
        return me

    trees = []
    skip()
    while pos < len(text):
        children = []
        root = node(children)
        trees.append(RootedTree(children, root))
        skip()
    return trees


def render_forest(forest) -> str:
    return " ".join(t.to_text() for t in forest)


def greedy_shell(forest) -> ShellingSchedule:
    """Always shell a visible tree with the fewest nodes.

    Ties go to the smaller (tree index, node id).
    """
    forest = _as_forest(forest)
    sizes = [t.subtree_sizes() for t in forest]
    heap = [(sizes[i][t.root], i, t.root) for i, t in enumerate(forest)]
    heapq.heapify(heap)
    sched = ShellingSchedule(steps=[], initial=len(heap))
    while heap:
        _, i, v = heapq.heappop(heap)
        sched.steps.append((i, v))
        kids = forest[i].children[v]
        if kids is not None:
            for c in kids:
                heapq.heappush(heap, (sizes[i][c], i, c))
        sched.trace.append(len(heap))
    return sched


def visibility_of_schedule(forest, schedule) -> int:
    """Replay ``schedule`` and return its visibility number."""
    forest = _as_forest(forest)
    steps = schedule.steps if isinstance(schedule, ShellingSchedule) else schedule
    visible = {(i, t.root) for i, t in enumerate(forest)}
    best = len(visible)
    for i, v in steps:
        if (i, v) not in visible:
            raise ShellingError(f"node {v} of tree {i} is not visible")
        visible.remove((i, v))
        kids = forest[i].children[v]
        if kids is not None:
            visible.update((i, c) for c in kids)
        best = max(best, len(visible))
    if visible:
        raise ShellingError("schedule does not end with the empty forest")
    return best


def exact_visibility(forest, max_nodes: int = 17) -> int:
    """Minimum visibility number over all complete shellings.

    Exhaustive: states are multisets of subtree shapes, searched by
    iterative deepening on the allowed peak.  Refuses forests with more
    than ``max_nodes`` nodes.
    """
    forest = _as_forest(forest)
    total = sum(len(t) for t in forest)
    if total > max_nodes:
        raise TooLargeError(f"{total} nodes exceeds the limit of {max_nodes}")
    if total == 0:
        return 0

    shape_ids = {}
    shape_kids = []

    def intern(t, v):
        kids = t.children[v]
        key = () if kids is None else tuple(sorted((intern(t, kids[0]), intern(t, kids[1]))))
        if key not in shape_ids:
            shape_ids[key] = len(shape_kids)
            shape_kids.append(key)
        return shape_ids[key]

    start = tuple(sorted(intern(t, t.root) for t in forest))

    def feasible(state, peak, memo):
        if not state:
            return True
        got = memo.get(state)
        if got is not None:
            return got
        ok = False
        for s in sorted(set(state)):
            nxt = list(state)
            nxt.remove(s)
            nxt.extend(shape_kids[s])
            if len(nxt) > peak:
                continue
            if feasible(tuple(sorted(nxt)), peak, memo):
                ok = True
                break
        memo[state] = ok
        return ok

    peak = len(start)
    while not feasible(start, peak, {}):
        peak += 1
    return peak


def visibility_bound(n_nodes: int) -> int:
    """``d + 1`` for the unique d with ``2**d - 1 < n <= 2**(d+1) - 1``."""
    if n_nodes < 1:
        raise ValueError("node count must be >= 1")
    return n_nodes.bit_length()


def log_visibility_bound(n_nodes: int) -> float:
    return math.log2(n_nodes + 1) + 1


def _as_forest(forest):
    if isinstance(forest, RootedTree):
        return [forest]
    return list(forest)


def forest_bound(forest) -> int:
    """Visibility bound used for forests: the largest per-tree bound plus one per extra tree."""
    forest = _as_forest(forest)
    return max(visibility_bound(len(t)) for t in forest) + len(forest) - 1
