"""Elementary homotopies of van Kampen diagrams.

A state is the set of remaining faces together with the current boundary
walk (a tuple of darts starting at the base point); the remaining edges and
vertices are exactly those touched by either.  A 1-cell collapse removes a
backtrack ``d, twin(d)`` whose tip is not the base point.  A 2-cell collapse
removes a face together with one of its edges on the boundary, replacing
that boundary dart by the rest of the face.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .diagram import VanKampenDiagram
from .tree_shelling import RootedTree, greedy_shell


class IllegalMoveError(ValueError):
    pass


class NotTriangularError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Move:
    kind: str  # "1cell" or "2cell"
    dart: int  # 1cell: dart pointing at the removed vertex; 2cell: boundary dart of the removed edge
    face: int = -1

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dart": self.dart}
        if self.kind == "2cell":
            out["face"] = self.face
        return out


@dataclass(frozen=True)
class HomotopyState:
    diagram: VanKampenDiagram
    faces: frozenset
    boundary: tuple

    @classmethod
    def initial(cls, d: VanKampenDiagram) -> "HomotopyState":
        return cls(d, frozenset(range(d.area)), d.boundary)

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def word(self) -> tuple:
        return tuple(self.diagram.label[d] for d in self.boundary)

    def is_trivial(self) -> bool:
        return not self.boundary and not self.faces

    def darts(self) -> set:
        d = self.diagram
        out = set(self.boundary)
        for f in self.faces:
            out.update(d.faces[f])
        return out

    def vertices(self) -> set:
        d = self.diagram
        return {d.origin[x] for x in self.darts()} | {d.base}

    def edges(self) -> set:
        return {self.diagram.edge(x) for x in self.darts()}

    def key(self):
        return (self.faces, self.boundary)


def legal_moves(s: HomotopyState) -> list:
    d = s.diagram
    b = s.boundary
    moves = []
    for i in range(len(b) - 1):
        if b[i + 1] == d.twin[b[i]] and d.head(b[i]) != d.base:
            moves.append(Move("1cell", b[i]))
    for x in b:
        f = d.face_of[d.twin[x]]
        if f >= 0 and f in s.faces:
            moves.append(Move("2cell", x, f))
    return moves


def apply_move(s: HomotopyState, m: Move) -> HomotopyState:
    d = s.diagram
    b = s.boundary
    if m.kind == "1cell":
        t = d.twin[m.dart]
        for i in range(len(b) - 1):
            if b[i] == m.dart and b[i + 1] == t:
                break
        else:
            raise IllegalMoveError("1-cell collapse: edge does not dangle from the boundary")
        if d.head(m.dart) == d.base:
            raise IllegalMoveError("1-cell collapse: cannot remove the base point")
        return HomotopyState(d, s.faces, b[:i] + b[i + 2:])
    if m.kind == "2cell":
        if m.face not in s.faces:
            raise IllegalMoveError(f"2-cell collapse: face {m.face} is not present")
        if m.dart not in b:
            raise IllegalMoveError("2-cell collapse: edge is not on the boundary")
        t = d.twin[m.dart]
        if d.face_of[t] != m.face:
            raise IllegalMoveError("2-cell collapse: edge is not on the face")
        cyc = d.faces[m.face]
        k = cyc.index(t)
        path = cyc[k + 1:] + cyc[:k]
        i = b.index(m.dart)
        return HomotopyState(d, s.faces - {m.face}, b[:i] + path + b[i + 1:])
    raise IllegalMoveError(f"unknown move kind {m.kind!r}")


@dataclass
class HomotopyTrace:
    moves: list = field(default_factory=list)
    profile: list = field(default_factory=list)  # boundary length, initial included
    steps: list = field(default_factory=list)  # scheduler step 1..4 per move (0 = clean-up)
    tags: list = field(default_factory=list)  # move classification per move
    loop_profile: list = field(default_factory=list)  # job loop length after each move
    step4: list = field(default_factory=list)  # (move index, job loop length before it)
    windows: list = field(default_factory=list)  # (loop length at a step-4 instant, peak until the next)
    fallback: bool = False  # dual tree needed the non-binary fallback
    notes: dict = field(default_factory=dict)

    @property
    def realized_fl(self) -> int:
        return max(self.profile) if self.profile else 0

    def to_dict(self, d: Optional[VanKampenDiagram] = None) -> dict:
        out = {
            "moves": [
                dict(m.to_dict(), step=(self.steps[i] if i < len(self.steps) else None),
                     tag=(self.tags[i] if i < len(self.tags) else None))
                for i, m in enumerate(self.moves)
            ],
            "profile": list(self.profile),
            "realized_fl": self.realized_fl,
            "loop_profile": list(self.loop_profile),
            "step4": [list(x) for x in self.step4],
            "windows": [list(x) for x in self.windows],
            "fallback": self.fallback,
        }
        out.update(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def trace_from_dict(raw: dict) -> HomotopyTrace:
    t = HomotopyTrace()
    for rec in raw["moves"]:
        t.moves.append(Move(rec["kind"], rec["dart"], rec.get("face", -1)))
        t.steps.append(rec.get("step"))
        t.tags.append(rec.get("tag"))
    t.profile = list(raw["profile"])
    t.loop_profile = list(raw.get("loop_profile", []))
    t.step4 = [tuple(x) for x in raw.get("step4", [])]
    t.windows = [tuple(x) for x in raw.get("windows", [])]
    t.fallback = raw.get("fallback", False)
    return t


def replay(d: VanKampenDiagram, moves) -> HomotopyTrace:
    """Apply ``moves`` from the full diagram, recording the length profile."""
    s = HomotopyState.initial(d)
    trace = HomotopyTrace(profile=[s.length])
    for m in moves:
        s = apply_move(s, m)
        trace.moves.append(m)
        trace.profile.append(s.length)
    if not s.is_trivial():
        raise IllegalMoveError("moves do not end at the trivial diagram")
    return trace


def filling_length_bound(area: int, diam: int, n: int) -> float:
    """``(2D+1)(log2(A+1)+1) + 4D + 1 + n``."""
    return (2 * diam + 1) * (math.log2(area + 1) + 1) + 4 * diam + 1 + n


def shelling_loop_bound(area: int, diam: int) -> float:
    return (2 * diam + 1) * (math.log2(area + 1) + 1)


def fl_exact(d: VanKampenDiagram, node_budget: int = 200_000) -> int:
    """Minimum over complete move sequences of the peak boundary length.

    Available 1-cell collapses are taken first without branching: they
    commute with every other move and only shorten later boundaries.
    Raises ``SearchBudgetExceeded`` after ``node_budget`` distinct states.
    """
    memo = {}

    def value(s: HomotopyState) -> int:
        key = s.key()
        got = memo.get(key)
        if got is not None:
            return got
        if len(memo) >= node_budget:
            raise SearchBudgetExceeded(f"more than {node_budget} states")
        moves = legal_moves(s)
        if not moves:
            if not s.is_trivial():
                raise IllegalMoveError("stuck before reaching the trivial diagram")
            memo[key] = s.length
            return s.length
        if moves[0].kind == "1cell":
            best = value(apply_move(s, moves[0]))
        else:
            best = min(value(apply_move(s, m)) for m in moves)
        best = max(best, s.length)
        memo[key] = best
        return best

    return value(HomotopyState.initial(d))


def fl_exact_full(d: VanKampenDiagram, node_budget: int = 200_000) -> int:
    """Same as :func:`fl_exact` but branching on every move."""
    memo = {}

    def value(s):
        key = s.key()
        if key in memo:
            return memo[key]
        if len(memo) >= node_budget:
            raise SearchBudgetExceeded(f"more than {node_budget} states")
        moves = legal_moves(s)
        best = s.length if not moves else max(s.length, min(value(apply_move(s, m)) for m in moves))
        memo[key] = best
        return best

    return value(HomotopyState.initial(d))


# --- the logarithmic-shelling scheduler ---------------------------------------


@dataclass
class _DualTree:
    parent_dart: dict  # face -> its dart on the parent edge
    children: dict  # face -> child faces in face-cycle order
    jobs: list  # root face of each job, in boundary order


def _dual_tree(d: VanKampenDiagram, tree_edges) -> _DualTree:
    parent_dart, children, jobs = {}, {}, []
    stack = []
    for x in d.boundary:
        if d.edge(x) in tree_edges:
            continue
        f = d.face_of[d.twin[x]]
        if f < 0 or f in parent_dart:
            raise AssertionError("non-tree boundary edge without a fresh face")
        parent_dart[f] = d.twin[x]
        jobs.append(f)
        stack.append(f)
    while stack:
        f = stack.pop()
        cyc = d.faces[f]
        k = cyc.index(parent_dart[f])
        kids = []
        for g in cyc[k + 1:] + cyc[:k]:
            if d.edge(g) in tree_edges:
                continue
            c = d.face_of[d.twin[g]]
            if c < 0 or c in parent_dart:
                raise AssertionError("non-tree edges do not form a dual tree")
            parent_dart[c] = d.twin[g]
            kids.append(c)
            stack.append(c)
        children[f] = kids
    if len(parent_dart) != d.area:
        raise AssertionError("dual tree does not reach every face")
    return _DualTree(parent_dart, children, jobs)


def _contracted(dual: _DualTree, root: int):
    """Full binary tree on the faces with 0 or 2 dual children."""

    def skip(f):
        while len(dual.children[f]) == 1:
            f = dual.children[f][0]
        return f

    faces, arena = [], []
    index = {}

    def build(f):
        f = skip(f)
        me = len(arena)
        index[f] = me
        faces.append(f)
        arena.append(None)
        kids = dual.children[f]
        if len(kids) == 2:
            arena[me] = (build(kids[0]), build(kids[1]))
        elif len(kids) > 2:
            raise ValueError("dual tree is not binary")
        return me

    build(root)
    return RootedTree(arena, 0), faces, skip


def fl_schedule(d: VanKampenDiagram) -> HomotopyTrace:
    """Collapse ``d`` with the four-step policy driven by logarithmic shelling.

    The geodesic spanning tree splits the faces into jobs, one per
    non-tree boundary edge (the faces behind it in the dual tree).  Within
    a job the first available step is taken: (1) a 1-cell collapse
    anywhere, (2) a visible dual leaf, (3) a visible face with one dual
    child, (4) the next branching face in greedy-shelling order.
    """
    p = d.presentation
    if not p.is_triangular():
        raise NotTriangularError("presentation has relators longer than 3; "
                                 "triangularize it first (filling triangulate)")
    tree = d.geodesic_spanning_tree()
    tree_edges = {d.edge(x) for x in tree.edges}
    dist = tree.distance
    dual = _dual_tree(d, tree_edges)
    m = d.metrics
    s = HomotopyState.initial(d)
    trace = HomotopyTrace(profile=[s.length])
    loop_len = 0

    def path_up(v):
        out = []
        while v != d.base:
            out.append(d.twin[tree.parent_dart[v]])
            v = d.origin[tree.parent_dart[v]]
        return out

    def reduce_darts(seq):
        out = []
        for x in seq:
            if out and out[-1] == d.twin[x]:
                out.pop()
            else:
                out.append(x)
        return out

    def record(move, step, tag, loop):
        nonlocal s
        s = apply_move(s, move)
        trace.moves.append(move)
        trace.steps.append(step)
        trace.tags.append(tag)
        trace.profile.append(s.length)
        trace.loop_profile.append(loop)

    def one_cell(step):
        for mv in legal_moves(s):
            if mv.kind == "1cell":
                record(mv, step, "1", loop_len)
                return True
        return False

    for root in dual.jobs:
        ctree, cfaces, _ = _contracted(dual, root)
        binary_order = [cfaces[v] for _, v in greedy_shell(ctree).steps
                        if ctree.children[v] is not None]
        csize = dict(zip(cfaces, ctree.subtree_sizes()))
        job = set()
        stack = [root]
        while stack:
            f = stack.pop()
            job.add(f)
            stack.extend(dual.children[f])
        e = d.twin[dual.parent_dart[root]]
        down = [d.twin[x] for x in reversed(path_up(d.origin[e]))]
        loop = reduce_darts(down + [e] + path_up(d.head(e)))
        loop_len = len(loop)
        window = None

        while True:
            if one_cell(1):
                if window is not None:
                    window[1] = max(window[1], loop_len)
                continue
            visible = [f for f in sorted(job, key=lambda f: s.boundary.index(d.twin[dual.parent_dart[f]])
                                          if d.twin[dual.parent_dart[f]] in s.boundary else 10 ** 9)
                       if f in s.faces and d.twin[dual.parent_dart[f]] in s.boundary]
            if not visible:
                break
            pick = step = None
            for f in visible:
                if not dual.children[f]:
                    pick, step = f, 2
                    break
            if pick is None:
                for f in visible:
                    if len(dual.children[f]) == 1:
                        pick, step = f, 3
                        break
            if pick is None:
                step = 4
                nxt = next((f for f in binary_order if f in s.faces), None)
                if nxt is not None and nxt in visible:
                    pick = nxt
                else:
                    trace.fallback = True
                    pick = min(visible, key=lambda f: (csize.get(f, 0), visible.index(f)))
            tag = _classify(d, dual, tree, dist, pick, step, csize)
            outer = d.twin[dual.parent_dart[pick]]
            if step == 4:
                if window is not None:
                    trace.windows.append(tuple(window))
                trace.step4.append((len(trace.moves), loop_len))
                window = [loop_len, loop_len]
            cyc = d.faces[pick]
            k = cyc.index(dual.parent_dart[pick])
            i = loop.index(outer)
            loop = loop[:i] + list(cyc[k + 1:] + cyc[:k]) + loop[i + 1:]
            pre = len(loop)
            loop = reduce_darts(loop)
            loop_len = len(loop)
            if window is not None:
                window[1] = max(window[1], pre)
            record(Move("2cell", outer, pick), step, tag, pre)
        if window is not None:
            trace.windows.append(tuple(window))
        job.clear()

    while one_cell(0):
        pass
    if not s.is_trivial():
        raise AssertionError("scheduler stopped before the trivial diagram")
    trace.notes = {
        "area": m.area, "diameter": m.diameter, "boundary_length": m.boundary_length,
        "bound": filling_length_bound(m.area, m.diameter, m.boundary_length),
        "jobs": len(dual.jobs),
    }
    return trace


def _classify(d, dual, tree, dist, f, step, csize):
    cyc = d.faces[f]
    k = cyc.index(dual.parent_dart[f])
    rest = cyc[k + 1:] + cyc[:k]
    if step == 2:
        ends = (d.origin[cyc[k]], d.head(cyc[k]))
        apex = [d.head(x) for x in rest[:-1]]
        if apex and all(dist[a] < min(dist[v] for v in ends) for a in apex):
            return "i"
        return "ii"
    if step == 3:
        child = d.twin[dual.parent_dart[dual.children[f][0]]]
        return "iii" if rest.index(child) == 0 else "iv"
    kids = dual.children[f]
    if len(kids) == 2 and all(not dual.children[c]
                              or len(dual.children[c]) == 1 and _chain_ends_in_leaf(dual, c)
                              for c in kids):
        return "v"
    return "vi"


def _chain_ends_in_leaf(dual, f):
    while len(dual.children[f]) == 1:
        f = dual.children[f][0]
    return not dual.children[f]
