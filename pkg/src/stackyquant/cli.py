"""Command-line front end: ``stackyquant {build,verify,example-gm}``.

Output is canonical JSON (sorted keys, fixed separators), so identical
arguments and seed give byte-identical output.  Exit codes: 0 all checks
pass, 1 some check fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from . import suites as S
from .algebra import AlgebraError, Element
from .graph import DirectedGraph, GaugeTheory, GraphError, catalog
from .hopf import HopfError, group_from_spec

WORKERS_ENV = "STACKYQUANT_WORKERS"
DEFAULT_GROUPS = ("torus:1", "sl2")
HOPF_GROUPS = ("torus:1", "torus:2", "torus:3", "sl2")


class InputError(Exception):
    """Bad configuration; reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    graph_path: Optional[str] = None
    graph: Optional[DirectedGraph] = None
    group: Optional[str] = None
    level: int = 2
    bound: int = 2
    suites: list = field(default_factory=lambda: list(S.SUITES))
    out: Optional[str] = None
    seed: int = 0
    timings: bool = False

    def groups(self, defaults=DEFAULT_GROUPS) -> list:
        return [self.group] if self.group else list(defaults)

    def graphs(self) -> list:
        if self.graph is not None:
            return [(graph_label(self.graph_path), self.graph)]
        return list(catalog().items())

    def to_json(self) -> dict:
        return {"graph": self.graph_path, "group": self.group, "level": self.level, "bound": self.bound,
                "suites": list(self.suites), "seed": self.seed}


def graph_label(path: Optional[str]) -> str:
    if path is None:
        return "graph"
    if path.startswith("catalog:"):
        return path[len("catalog:"):]
    return os.path.splitext(os.path.basename(path))[0]


# parsing and validation


def _locate(text: str, token: str) -> Optional[int]:
    """1-based line of the first quoted occurrence of token."""
    needle = json.dumps(token)
    for k, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return k
    return None


def load_graph(path: str) -> DirectedGraph:
    if path.startswith("catalog:"):
        name = path[len("catalog:"):]
        cat = catalog()
        if name not in cat:
            raise InputError(f"{path}: no catalog graph named {name!r} (known: {', '.join(sorted(cat))})")
        return cat[name]
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return DirectedGraph.from_json(data)
    except (GraphError, TypeError) as exc:
        msg = str(exc)
        quoted = re.findall(r"'([^']*)'", msg)
        line = _locate(text, quoted[-1]) if quoted else None
        where = f"{path}:{line}" if line else path
        raise InputError(f"{where}: {msg}") from None


def check_group(spec: str) -> str:
    m = re.fullmatch(r"torus:([1-9][0-9]*)|sl2", spec)
    if not m:
        raise InputError(f"--group: expected torus:k (k >= 1) or sl2, got {spec!r}")
    return spec


def workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{WORKERS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise InputError(f"{WORKERS_ENV} must be at least 1")
    return n


def make_config(args) -> RunConfig:
    cfg = RunConfig(graph_path=args.graph, level=args.level, bound=args.bound, out=args.out,
                    seed=args.seed, timings=args.timings)
    if args.level < 0:
        raise InputError("--level must be non-negative")
    if args.bound < 0:
        raise InputError("--bound must be non-negative")
    if args.level > args.bound:
        raise InputError(f"--level {args.level} exceeds --bound {args.bound}")
    if args.group is not None:
        cfg.group = check_group(args.group)
    if args.graph is not None:
        cfg.graph = load_graph(args.graph)
    if args.suite is not None:
        names = [s.strip() for s in args.suite.split(",") if s.strip()]
        unknown = [s for s in names if s not in S.SUITES]
        if unknown:
            raise InputError(f"--suite: unknown suite {unknown[0]!r} (known: {', '.join(S.SUITES)})")
        cfg.suites = names
    return cfg


# commands


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _gen_record(g) -> dict:
    rec = {"name": g.name, "kind": g.kind, "bidegree": list(g.bideg)}
    if g.loc is not None:
        rec["location"] = f"{g.loc[0]}:{g.loc[1]}"
    if g.slot is not None:
        rec["slot"] = g.slot
    if g.inv:
        rec["invertible"] = True
    return rec


def _table(d, gens) -> dict:
    return {g.name: d.on_gen(g).to_json() for g in gens if d.on_gen(g)}


def cmd_build(cfg: RunConfig) -> tuple:
    if cfg.graph is None:
        raise InputError("build needs --graph")
    group = cfg.group or "torus:1"
    T = GaugeTheory(cfg.graph, group_from_spec(group))
    levels = []
    for n in range(cfg.level + 1):
        L = T.level(n)
        P = T.bracket(n)
        gens = list(L.alg.gens)
        brackets = []
        for i, x in enumerate(gens):
            for y in gens[i:]:
                v = P.gen_bracket(x, y)
                if v:
                    brackets.append({"x": x.name, "y": y.name, "value": Element(P.alg, v.terms).to_json()})
        levels.append({
            "level": n,
            "generators": [_gen_record(g) for g in gens],
            "del": _table(L.d_chain, gens),
            "delta": _table(L.delta, gens),
            "bracket": brackets,
        })
    moment = {t.name: v.to_json() for t, v in sorted(T.B.moment.items(), key=lambda kv: kv[0].key)}
    summary = {
        "version": __version__,
        "graph": cfg.graph.to_json(),
        "group": group,
        "unit algebra": not any(lv["generators"] for lv in levels),
        "moment map": moment,
        "levels": levels,
    }
    return summary, 0


def _tasks(cfg: RunConfig) -> list:
    tasks = []
    faults = dict(S.FAULTS)
    for suite in cfg.suites:
        if suite == "hopf":
            for grp in cfg.groups(HOPF_GROUPS):
                tasks.append((suite, S.Instance(grp, seed=cfg.seed, level=cfg.level, bound=cfg.bound), cfg.timings, faults))
            continue
        if suite == "prefactorization":
            for grp in cfg.groups():
                name = graph_label(cfg.graph_path) if cfg.graph is not None else None
                tasks.append((suite, S.Instance(grp, name, cfg.graph, cfg.level, cfg.bound, cfg.seed), cfg.timings, faults))
            continue
        if suite == "ce" and cfg.group in (None, "sl2"):
            tasks.append((suite, S.Instance("sl2", seed=cfg.seed), cfg.timings, faults))
        for grp in cfg.groups():
            for name, U in cfg.graphs():
                tasks.append((suite, S.Instance(grp, name, U, cfg.level, cfg.bound, cfg.seed), cfg.timings, faults))
    return tasks


def run_task(task: tuple) -> list:
    suite, inst = task[0], task[1]
    try:
        return S.run_task(task)
    except (AlgebraError, GraphError, HopfError, ValueError) as exc:
        return [{"name": f"{inst.label}: {suite} raised", "status": "fail",
                 "witness": f"{type(exc).__name__}: {exc}"}]


def cmd_verify(cfg: RunConfig) -> tuple:
    tasks = _tasks(cfg)
    n = workers()
    if n > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]
    by_suite: dict = {s: {} for s in cfg.suites}
    for (suite, *_), checks in zip(tasks, results):
        for rec in checks:
            by_suite[suite][rec["name"]] = rec
    report_suites = [{"suite": s, "checks": [by_suite[s][k] for k in sorted(by_suite[s])]} for s in cfg.suites]
    failed = sum(1 for s in report_suites for c in s["checks"] if c["status"] != "pass")
    report = {
        "version": __version__,
        "config": cfg.to_json(),
        "suites": report_suites,
        "status": "pass" if not failed else "fail",
        "failures": failed,
    }
    return report, 1 if failed else 0


def cmd_example_gm(weights: Sequence[int], cfg: RunConfig) -> tuple:
    checks, table = S.gm_example(list(weights), cfg.timings, cfg.seed)
    failed = sum(1 for c in checks if c["status"] != "pass")
    report = {
        "version": __version__,
        "weights": list(weights),
        "checks": checks,
        "homology": table,
        "status": "pass" if not failed else "fail",
    }
    return report, 1 if failed else 0


# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH",
                        help="graph JSON {vertices: [...], edges: [{id, src, tgt}]}, or catalog:NAME")
    common.add_argument("--group", metavar="{torus:k|sl2}", help="gauge group (default: torus:1 and sl2)")
    common.add_argument("--level", type=int, default=2, metavar="N", help="top cosimplicial level (default 2)")
    common.add_argument("--bound", type=int, default=2, metavar="N", help="momentum-degree bound (default 2)")
    common.add_argument("--suite", metavar="NAME[,NAME...]", help=f"suites to run (default all: {','.join(S.SUITES)})")
    common.add_argument("--seed", type=int, default=0, metavar="N", help="seed for random checks (default 0)")
    common.add_argument("--out", metavar="PATH", help="write JSON here instead of stdout")
    common.add_argument("--timings", action="store_true", help="add per-check wall times (breaks byte-stability)")
    p = argparse.ArgumentParser(prog="stackyquant", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="emit generator, differential and bracket tables")
    sub.add_parser("verify", parents=[common], help="run verification suites and emit a report")
    gm = sub.add_parser("example-gm", parents=[common], help="G_m weight objects on a point")
    gm.add_argument("weights", nargs="*", type=int, help="integer weights")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = make_config(args)
        if args.command == "build":
            obj, code = cmd_build(cfg)
        elif args.command == "verify":
            obj, code = cmd_verify(cfg)
        else:
            obj, code = cmd_example_gm(args.weights, cfg)
    except InputError as exc:
        print(f"stackyquant: error: {exc}", file=sys.stderr)
        return 2
    text = dump(obj)
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"stackyquant: error: {cfg.out}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
