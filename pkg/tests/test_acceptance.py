"""Acceptance criteria.  Each test prints one PASS/FAIL line; the lines are
repeated in the terminal summary."""

import random
import time

import pytest

from filling.enumerate import AreaOracle
from filling.invariants import corpus, filling_functions, star_growth_steps, verify_inequalities
from filling.presentation import Presentation, is_null_homotopic_bounded, triangularize
from filling.tree_shelling import (all_trees, complete_tree, exact_visibility, greedy_shell,
                                   visibility_bound, random_tree)

from conftest import grid_diagram, tri_z2, z2

RESULTS = []


def report(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def sweep():
    """One pass over every diagram of area <= 6 with boundary length <= 8."""
    p = tri_z2()
    start = time.time()
    rep = verify_inequalities(p, None, corpus(p, 8, 6, AreaOracle(p)),
                              node_budget=1_000_000, oracle_area=3)
    return {c.name: c for c in rep.checks}, time.time() - start


def test_criterion_1_greedy_shelling_bound():
    start = time.time()
    worst, count = 0, 0
    for n in range(1, 16, 2):
        for t in all_trees(n):
            worst = max(worst, greedy_shell(t).visibility - visibility_bound(n))
            count += 1
    rng = random.Random(20260915)
    for _ in range(1000):
        n = rng.randrange(1, 2002, 2)
        t = random_tree(n, rng)
        worst = max(worst, greedy_shell(t).visibility - visibility_bound(n))
        count += 1
    elapsed = time.time() - start
    report(1, "greedy visibility <= d+1", worst <= 0 and elapsed < 10,
           f"{count} trees, max(greedy - bound) = {worst}, {elapsed:.1f}s")


def test_criterion_2_complete_trees_are_sharp():
    start = time.time()
    rows = []
    for d in range(7):
        t = complete_tree(d)
        rows.append((exact_visibility(t, max_nodes=len(t)), greedy_shell(t).visibility, d + 1))
    elapsed = time.time() - start
    ok = all(e == g == want for e, g, want in rows) and elapsed < 60
    report(2, "complete trees need d+1", ok,
           f"exact/greedy for d=0..6: {[r[:2] for r in rows]}, {elapsed:.1f}s")


def test_criterion_3_scheduler_bound(sweep):
    checks, elapsed = sweep
    parts = [checks[k] for k in ("schedule_fl_bound", "shelling_loop_length", "shelling_loop_growth")]
    ok = all(c.passed for c in parts)
    detail = "; ".join(f"{c.name} {'ok' if c.passed else 'violated'} on {c.count} diagrams "
                       f"({c.instance} lhs={c.lhs} rhs={float(c.rhs):.4f})" for c in parts)
    report(3, "scheduler FL bound and step-4 profile", ok, f"{detail}; sweep {elapsed:.0f}s")


def test_criterion_4_oracle_sandwich(sweep):
    c = sweep[0]["oracle_sandwich"]
    report(4, "exact FL <= scheduler FL <= bound", c.passed and c.count > 0,
           f"{c.count} diagrams of area <= 3, {c.instance} exact={c.lhs} sched={c.rhs}")


def test_criterion_5_filling_function_chain():
    p = tri_z2()
    assert p.max_relator_length == 3
    t = filling_functions(p, 6, 6)
    bad = [n for n, f, g, h, _ in t.rows() if not g <= h <= 6 * f + n]
    report(5, "g0 <= h0 <= 2K f0 + n", not bad,
           f"f0={t.f0} g0={t.g0} h0={t.h0} budget_limited={any(t.budget_limited)}")


def test_criterion_6_valence_bounds(sweep):
    checks = sweep[0]
    a, f = checks["valence_area"], checks["valence_fl"]
    report(6, "valence bounds on area and FL", a.passed and f.passed,
           f"area: {a.count} diagrams, {a.instance} {a.lhs} <= {a.rhs}; "
           f"FL: {f.instance} {f.lhs} <= {float(f.rhs):.4f}")


def test_criterion_7_star_growth(sweep):
    c = sweep[0]["star_area_growth"]
    # c_i is empty on every diagram of area <= 6, so larger grids exercise the inequality
    p = tri_z2()
    grids = [grid_diagram(p, w, h) for w in range(1, 7) for h in range(1, 7)]
    steps = [s for d in grids for s in star_growth_steps(d)]
    bad = [s for s in steps if 3 * s[0] < s[1]]
    nonempty = sum(1 for _, length in steps if length)
    report(7, "3 * area growth >= l(c_i)", c.passed and not bad and nonempty > 0,
           f"{c.count} corpus diagrams ({c.active} with nonempty c_i), {c.instance}; "
           f"{len(grids)} grids up to 6x6: {len(steps)} steps, {nonempty} with nonempty c_i, "
           f"{len(bad)} violations")


def test_criterion_8_triangularization():
    rng = random.Random(8)
    presentations = [z2(), tri_z2(), Presentation(("a",), ((0,) * 9,))]
    for _ in range(200):
        k = rng.randint(1, 4)
        rels = [tuple(rng.randrange(2 * k) for _ in range(rng.randint(1, 12)))
                for _ in range(rng.randint(1, 3))]
        presentations.append(Presentation(tuple("abcd"[:k]), rels))
    longest = max(triangularize(p).max_relator_length for p in presentations)
    t = triangularize(z2())
    d = is_null_homotopic_bounded(t, t.parse_word("abAB"), 2)
    ok = longest <= 3 and d is not None and d.area <= 2
    report(8, "triangularization", ok,
           f"{len(presentations)} presentations, longest relator {longest}; "
           f"abAB area {None if d is None else d.area}")
