"""Filling functions at desk scale and checks of the known inequalities.

All quantities are exact relative to an area budget: a word counts as
null-homotopic only when a diagram within the budget exists, and Diam(w)
and FL(w) minimise over the diagrams within the budget.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .diagram import VanKampenDiagram
from .enumerate import INFEASIBLE, AreaOracle, EnumerationLimit, enumerate_diagrams, iter_diagrams
from .homotopy import (SearchBudgetExceeded, fl_exact, fl_schedule, filling_length_bound,
                       shelling_loop_bound)
from .presentation import Presentation, reduced_words

__all__ = [
    "enumerate_diagrams", "EnumerationLimit", "WordRecord", "FillingTable", "Check",
    "VerificationReport", "filling_functions", "word_invariants", "verify_inequalities",
    "diagram_checks", "fl_word_search", "corpus",
]


@dataclass
class WordRecord:
    word: str
    area: int
    diam: int
    fl: int
    fl_exact: bool = True
    n_diagrams: int = 0


@dataclass
class FillingTable:
    n_max: int
    max_area: int
    f0: list = field(default_factory=list)
    g0: list = field(default_factory=list)
    h0: list = field(default_factory=list)
    budget_limited: list = field(default_factory=list)
    words: list = field(default_factory=list)
    words_tried: list = field(default_factory=list)
    words_certified: list = field(default_factory=list)

    def rows(self):
        for n in range(self.n_max + 1):
            yield n, self.f0[n], self.g0[n], self.h0[n], self.budget_limited[n]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "f0", "g0", "h0", "budget_flag"])
        for n, f, g, h, flag in self.rows():
            w.writerow([n, f, g, h, int(flag)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max, "max_area": self.max_area,
            "f0": self.f0, "g0": self.g0, "h0": self.h0,
            "budget_limited": self.budget_limited,
            "words_tried": self.words_tried, "words_certified": self.words_certified,
            "words": [vars(r) for r in self.words],
        }

    def m_estimate(self, r: int = 2) -> float:
        """Smallest M with f0(n) <= M n^r on the table."""
        return max((self.f0[n] / n ** r for n in range(1, self.n_max + 1)), default=0.0)


def word_invariants(p: Presentation, word, max_area: int, node_budget: int = 200_000,
                    oracle: Optional[AreaOracle] = None) -> Optional[WordRecord]:
    """Area, Diam and FL of ``word`` over diagrams of area at most ``max_area``."""
    oracle = oracle or AreaOracle(p)
    word = tuple(word)
    area = oracle.min_area(word, max_area)
    if area >= INFEASIBLE:
        return None
    diam = INFEASIBLE
    fl = INFEASIBLE
    exact = True
    count = 0
    for d in iter_diagrams(p, word, max_area, oracle=oracle):
        count += 1
        diam = min(diam, d.diameter)
        if fl <= len(word):
            continue
        try:
            fl = min(fl, fl_exact(d, node_budget))
        except SearchBudgetExceeded:
            exact = False
            fl = min(fl, fl_schedule(d).realized_fl)
    return WordRecord(p.render_word(word), area, diam, fl, exact, count)


def filling_functions(p: Presentation, n_max: int, max_area: int,
                      node_budget: int = 200_000) -> FillingTable:
    """Tabulate f0, g0 and h0 over all reduced words of length at most ``n_max``."""
    oracle = AreaOracle(p)
    table = FillingTable(n_max, max_area)
    f = g = h = 0
    limited = False
    for n in range(n_max + 1):
        tried = certified = 0
        for w in reduced_words(p.n_letters, n):
            tried += 1
            if not oracle.abelian_ok(w):
                continue
            rec = word_invariants(p, w, max_area, node_budget, oracle)
            if rec is None:
                limited = True
                continue
            certified += 1
            table.words.append(rec)
            limited = limited or not rec.fl_exact
            f, g, h = max(f, rec.area), max(g, rec.diam), max(h, rec.fl)
        table.f0.append(f)
        table.g0.append(g)
        table.h0.append(h)
        table.budget_limited.append(limited)
        table.words_tried.append(tried)
        table.words_certified.append(certified)
    return table


def fl_word_search(p: Presentation, word, max_area: int, max_length: int = 64) -> Optional[int]:
    """FL(w) over diagrams of area at most ``max_area``, computed on words alone.

    A homotopy is a sequence of words ending at the empty word; a step
    deletes an adjacent inverse pair or replaces a letter ``x`` by ``v``
    where ``x^-1 v`` is a face word (one unit of area).  Any such sequence
    with k replacements traces a diagram of area k, so the least possible
    peak length is FL(w) restricted to the budget.
    """
    faces = {}
    for u in p.face_words():
        faces.setdefault(u[0] ^ 1, set()).add(u[1:])
    word = tuple(word)

    def reachable(limit):
        seen = set()
        stack = [(word, max_area)]
        while stack:
            w, left = stack.pop()
            if not w:
                return True
            if (w, left) in seen:
                continue
            seen.add((w, left))
            for i in range(len(w) - 1):
                if w[i] == w[i + 1] ^ 1:
                    stack.append((w[:i] + w[i + 2:], left))
            if left:
                for i, x in enumerate(w):
                    for v in faces.get(x, ()):
                        if len(w) - 1 + len(v) <= limit:
                            stack.append((w[:i] + v + w[i + 1:], left - 1))
        return False

    for limit in range(len(word), max_length + 1):
        if reachable(limit):
            return limit
    return None


# --- verification -------------------------------------------------------------


@dataclass
class Check:
    name: str
    instance: str
    lhs: float
    rhs: float
    passed: bool
    gating: bool = True
    count: int = 1
    counterexample: Optional[dict] = None
    active: Optional[int] = None  # instances with a nonzero left side

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        gate = "" if self.gating else " (reported)"
        return (f"{status} {self.name}{gate}: {self.instance} lhs={_fmt(self.lhs)} "
                f"rhs={_fmt(self.rhs)} n={self.count}"
                + ("" if self.active is None else f" nonzero={self.active}"))


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def add(self, check: Check):
        self.checks.append(check)

    def to_text(self) -> str:
        return "\n".join(c.line() for c in self.checks) + "\n"

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [vars(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, default=str)


def _fmt(x):
    if isinstance(x, float) and not x.is_integer():
        return f"{x:.4f}"
    return str(int(x)) if isinstance(x, (float, Fraction)) and x == int(x) else str(x)


class _Aggregate:
    """Keeps the tightest instance of a per-diagram check and its first failure."""

    def __init__(self, name, gating=True):
        self.name = name
        self.gating = gating
        self.count = 0
        self.active = 0
        self.worst = None
        self.failure = None

    def add(self, instance, lhs, rhs, ok, counterexample=None):
        self.count += 1
        self.active += lhs > 0
        # tightness is the ratio lhs / rhs; ties keep the first instance
        tight = lhs / rhs if rhs > 0 else (math.inf if lhs > 0 else 0)
        if self.worst is None or tight > self.worst[3]:
            self.worst = (instance, lhs, rhs, tight)
        if not ok and self.failure is None:
            self.failure = (instance, lhs, rhs, counterexample() if counterexample else None)

    def check(self) -> Check:
        if self.failure is not None:
            inst, lhs, rhs, cx = self.failure
            return Check(self.name, inst, lhs, rhs, False, self.gating, self.count, cx,
                         self.active)
        if self.worst is None:
            return Check(self.name, "no instances", 0, 0, True, self.gating, 0, active=0)
        inst, lhs, rhs, _ = self.worst
        return Check(self.name, f"tightest {inst}", lhs, rhs, True, self.gating, self.count,
                     active=self.active)


def valence_n(d: VanKampenDiagram) -> int:
    """Valence bound N for the valence inequalities; the statement needs N >= 3."""
    return max(3, d.metrics.max_valence)


def diagram_checks(d: VanKampenDiagram, node_budget: Optional[int] = None,
                   oracle_area: int = 3) -> dict:
    """Evaluate every per-diagram inequality; returns name -> (lhs, rhs, ok)."""
    m = d.metrics
    A, D, n = m.area, m.diameter, m.boundary_length
    out = {}
    trace = fl_schedule(d)
    fl = trace.realized_fl
    bound = filling_length_bound(A, D, n)
    out["schedule_fl_bound"] = (fl, bound, fl <= bound)
    lb = shelling_loop_bound(A, D)
    peak = max((l for _, l in trace.step4), default=0)
    out["shelling_loop_length"] = (peak, lb, peak <= lb)
    growth = max((hi - lo for lo, hi in trace.windows), default=0)
    out["shelling_loop_growth"] = (growth, 1 + 4 * D, growth <= 1 + 4 * D)
    N = valence_n(d)
    out["valence_area"] = (A, N ** (D + 1) - 1, A <= N ** (D + 1) - 1)
    vfl = (2 * D + 1) * (D + 1) * math.log2(N) + 4 * D + 1 + n
    out["valence_fl"] = (fl, vfl, fl <= vfl)
    if d.presentation.is_triangular():
        worst = None
        for lhs, rhs in star_growth_steps(d):
            ok = 3 * lhs >= rhs
            if not ok:
                worst = (lhs, rhs)
                break
            if rhs and (worst is None or 3 * lhs - rhs < 3 * worst[0] - worst[1]):
                worst = (lhs, rhs)
        if worst is None:
            out["star_area_growth"] = (0, 0, True)
        else:
            out["star_area_growth"] = (Fraction(worst[1], 3), worst[0], 3 * worst[0] >= worst[1])
    if node_budget is not None and A <= oracle_area:
        ex = fl_exact(d, node_budget)
        out["oracle_sandwich"] = (ex, fl, ex <= fl <= bound)
    return out


def star_growth_steps(d: VanKampenDiagram):
    """Yield ``(Area(N_{i+1}) - Area(N_i), l(c_i))`` until the stars stabilise."""
    k = d.boundary_subcomplex()
    i = 0
    while True:
        nxt = d.star(k)
        curves = d.boundary_curves(i)
        yield len(nxt.faces) - len(k.faces), sum(c.length for c in curves)
        if nxt == k:
            return
        k = nxt
        i += 1


def corpus(p: Presentation, n_max: int, max_area: int, oracle: Optional[AreaOracle] = None):
    """Every diagram of area at most ``max_area`` for every reduced word of length at most ``n_max``."""
    oracle = oracle or AreaOracle(p)
    for n in range(n_max + 1):
        for w in reduced_words(p.n_letters, n):
            if oracle.min_area(w, max_area) >= INFEASIBLE:
                continue
            yield from iter_diagrams(p, w, max_area, oracle=oracle)


def verify_inequalities(p: Presentation, table: Optional[FillingTable],
                              fixtures: Iterable[VanKampenDiagram],
                              node_budget: int = 200_000, oracle_area: int = 3,
                              r: int = 2) -> VerificationReport:
    report = VerificationReport()
    if table is not None:
        K = p.max_relator_length
        for n, f, g, h, _ in table.rows():
            report.add(Check("diam_le_fl", f"n={n}", g, h, g <= h))
            report.add(Check("fl_le_skeleton", f"n={n}", h, 2 * K * f + n, h <= 2 * K * f + n))
        for n in range(1, table.n_max + 1):
            mono = (table.f0[n - 1] <= table.f0[n] and table.g0[n - 1] <= table.g0[n]
                    and table.h0[n - 1] <= table.h0[n])
            report.add(Check("monotone", f"n={n - 1}->{n}", 0, 0, mono))
        for n in range(table.n_max + 1):
            if table.words_certified[n]:
                report.add(Check("h0_at_least_n", f"n={n}", n, table.h0[n], table.h0[n] >= n))
        m_est = table.m_estimate(r)
    else:
        m_est = None

    aggs = {}
    radius = _Aggregate("radius_estimate", gating=False)

    def agg(name):
        if name not in aggs:
            aggs[name] = _Aggregate(name)
        return aggs[name]

    minimal = {}
    if table is not None:
        minimal = {rec.word: rec.area for rec in table.words}

    for d in fixtures:
        w = p.render_word(d.boundary_word)
        inst = f"{w or '1'}[A={d.area}]"
        res = diagram_checks(d, node_budget, oracle_area)
        for name, (lhs, rhs, ok) in res.items():
            agg(name).add(inst, lhs, rhs, ok, lambda d=d: counterexample(d))
        if m_est is not None and minimal.get(w) == d.area and d.boundary:
            n = len(d.boundary)
            rhs = 12 * m_est * n ** (r - 1)
            rad = d.metrics.radius
            radius.add(inst, rad, rhs, rad <= rhs)
    for a in aggs.values():
        report.add(a.check())
    if radius.count:
        report.add(radius.check())
    return report


def counterexample(d: VanKampenDiagram) -> dict:
    return {
        "word": d.presentation.render_word(d.boundary_word),
        "diagram": d.to_dict(),
        "trace": fl_schedule(d).to_dict(),
    }
