"""Command-line front end: ``filling <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 when
the input is refused (parse errors, invalid diagrams, budget refusals).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from dataclasses import dataclass, field

from .diagram import DiagramError, load_diagram
from .homotopy import NotTriangularError, SearchBudgetExceeded, fl_exact, fl_schedule, filling_length_bound
from .invariants import corpus, filling_functions, verify_inequalities
from .presentation import PresentationError, read_presentation, triangularize
from .tree_shelling import (ShellingError, TooLargeError, complete_tree, exact_visibility,
                            forest_bound, greedy_shell, parse_forest, random_tree)

log = logging.getLogger("filling")

EXIT_OK, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    n_max: int = 6
    max_area: int = 6
    node_budget: int = 200_000
    format: str = "text"
    seed: int = 0

    def __post_init__(self):
        for name in ("n_max", "max_area", "node_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def header(self) -> str:
        ins = ",".join(self.inputs) or "-"
        return (f"filling {self.subcommand} seed={self.seed} n_max={self.n_max} "
                f"max_area={self.max_area} node_budget={self.node_budget} inputs={ins}")

    def to_dict(self) -> dict:
        return dict(vars(self))


class Refusal(Exception):
    pass


def _emit(cfg: RunConfig, payload: dict, text: str, csv_text: str | None = None) -> str:
    if cfg.format == "json":
        return json.dumps({"config": cfg.to_dict(), **payload}, indent=1, default=str) + "\n"
    body = csv_text if cfg.format == "csv" and csv_text is not None else text
    return f"# {cfg.header()}\n{body}"


def cmd_triangulate(cfg: RunConfig, args) -> tuple:
    p = triangularize(read_presentation(args.presentation))
    if cfg.format == "json":
        return EXIT_OK, _emit(cfg, {"generators": list(p.generators),
                                    "relators": [p.render_word(r) for r in p.relators]}, "")
    return EXIT_OK, f"# {cfg.header()}\n{p.render()}"


def cmd_shell(cfg: RunConfig, args) -> tuple:
    if args.complete is not None:
        forest = [complete_tree(args.complete)]
    elif args.random is not None:
        forest = [random_tree(args.random, random.Random(cfg.seed))]
    elif args.tree:
        with open(args.tree, encoding="utf-8") as fh:
            forest = parse_forest(fh.read())
    else:
        raise Refusal("give a tree file, --complete D or --random N")
    n = sum(len(t) for t in forest)
    schedule = greedy_shell(forest)
    greedy = schedule.visibility
    bound = forest_bound(forest)
    try:
        exact = exact_visibility(forest, max_nodes=args.exact_max)
    except TooLargeError:
        exact = None
    ok = greedy <= bound and (exact is None or exact <= greedy)
    payload = {"nodes": n, "trees": len(forest), "greedy": greedy, "bound": bound,
               "exact": exact, "passed": ok}
    text = (f"nodes {n}\ngreedy {greedy}\nbound {bound}\n"
            f"exact {'skipped' if exact is None else exact}\n{'PASS' if ok else 'FAIL'}\n")
    return (EXIT_OK if ok else EXIT_FAIL), _emit(cfg, payload, text)


def cmd_analyze(cfg: RunConfig, args) -> tuple:
    d = load_diagram(args.diagram)
    if not d.presentation.is_triangular():
        raise Refusal("diagram is not triangular; triangulate the presentation first "
                      "(filling triangulate PRESENTATION)")
    m = d.metrics
    trace = fl_schedule(d)
    bound = filling_length_bound(m.area, m.diameter, m.boundary_length)
    try:
        exact = fl_exact(d, cfg.node_budget)
    except SearchBudgetExceeded:
        exact = None
    fl = trace.realized_fl
    ok = fl <= bound and (exact is None or exact <= fl)
    payload = {"metrics": vars(m), "fl_sched": fl, "fl_exact": exact, "bound": bound,
               "passed": ok, "trace": trace.to_dict()}
    text = (f"area {m.area}\ndiameter {m.diameter}\nradius {m.radius}\n"
            f"max_valence {m.max_valence}\nboundary_length {m.boundary_length}\n"
            f"fl_sched {fl}\nfl_exact {'budget' if exact is None else exact}\n"
            f"bound {bound:.4f}\nprofile {' '.join(map(str, trace.profile))}\n"
            f"{'PASS' if ok else 'FAIL'}\n")
    return (EXIT_OK if ok else EXIT_FAIL), _emit(cfg, payload, text)


def cmd_functions(cfg: RunConfig, args) -> tuple:
    p = read_presentation(args.presentation)
    table = filling_functions(p, cfg.n_max, cfg.max_area, cfg.node_budget)
    lines = [f"{'n':>3} {'f0':>4} {'g0':>4} {'h0':>4} {'words':>8} {'certified':>9} budget"]
    for (n, f, g, h, flag), tried, cert in zip(table.rows(), table.words_tried,
                                              table.words_certified):
        lines.append(f"{n:>3} {f:>4} {g:>4} {h:>4} {tried:>8} {cert:>9} {'yes' if flag else 'no'}")
    return EXIT_OK, _emit(cfg, table.to_dict(), "\n".join(lines) + "\n", table.to_csv())


def cmd_verify(cfg: RunConfig, args) -> tuple:
    p = read_presentation(args.presentation)
    table = filling_functions(p, cfg.n_max, cfg.max_area, cfg.node_budget)
    if p.is_triangular():
        fixtures = corpus(p, cfg.n_max, cfg.max_area)
    else:
        log.warning("presentation is not triangular; per-diagram checks skipped")
        fixtures = ()
    report = verify_inequalities(p, table, fixtures, cfg.node_budget)
    status = EXIT_OK if report.passed else EXIT_FAIL
    return status, _emit(cfg, report.to_dict(), report.to_text())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, default=6)
    common.add_argument("--max-area", type=int, default=6)
    common.add_argument("--node-budget", type=int, default=200_000)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="filling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    s = sub.add_parser("triangulate", parents=[common], help="split relators to length <= 3")
    s.add_argument("presentation")
    s = sub.add_parser("shell", parents=[common], help="greedy shelling of a binary forest")
    s.add_argument("tree", nargs="?")
    s.add_argument("--complete", type=int, metavar="D")
    s.add_argument("--random", type=int, metavar="N")
    s.add_argument("--exact-max", type=int, default=17,
                   help="largest forest given to the exhaustive search")
    s = sub.add_parser("analyze", parents=[common], help="metrics and homotopy schedule of a diagram")
    s.add_argument("diagram")
    s = sub.add_parser("functions", parents=[common], help="tabulate f0, g0, h0")
    s.add_argument("presentation")
    s = sub.add_parser("verify", parents=[common], help="check the inequalities on all small diagrams")
    s.add_argument("presentation")
    return parser


COMMANDS = {
    "triangulate": cmd_triangulate,
    "shell": cmd_shell,
    "analyze": cmd_analyze,
    "functions": cmd_functions,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("FILLING_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, k) for k in ("presentation", "diagram", "tree")
              if getattr(args, k, None)]
    fmt = args.format or ("csv" if args.subcommand == "functions" else "text")
    try:
        cfg = RunConfig(args.subcommand, inputs, args.n_max, args.max_area,
                        args.node_budget, fmt, args.seed)
        log.info("running %s", cfg.header())
        status, out = COMMANDS[args.subcommand](cfg, args)
    except (Refusal, PresentationError, DiagramError, ShellingError, NotTriangularError,
            ValueError, OSError) as exc:
        print(f"filling: error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
