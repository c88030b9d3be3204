"""Command-line front end: ``flowfoot footprint | laws | bench``.

Exit codes: 0 success, 1 no footprint (TOP), 2 errors or failed checks,
64 usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import io
import json
import os
import random
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from .errors import FlowError
from .footprint import Method, compute_footprint, verify_footprint
from .generate import random_triple
from .monoid import Monoid
from .oracle import LAWS, check_separation_laws
from .serialize import GraphSet, load_instance, serialize_graph_set

EXIT_OK, EXIT_TOP, EXIT_ERROR, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


def _seed(args) -> int:
    env = os.environ.get("FLOWFOOT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"FLOWFOOT_SEED must be an integer, got {env!r}") from None
    return args.seed


def _fmt_set(nodes, name) -> str:
    return "{" + ",".join(name(x) for x in sorted(nodes)) + "}"


def cmd_footprint(args) -> int:
    inst = load_instance(args.input)
    t0 = time.perf_counter_ns()
    res = compute_footprint(inst.before, inst.after, args.method)
    res = dataclasses.replace(res, micros=round((time.perf_counter_ns() - t0) / 1000))
    verified = None
    if args.verify and not res.is_top:
        verified = verify_footprint(inst.before, inst.after, res.footprint, mode=args.verify)
    if args.json:
        doc = {
            "footprint": "TOP" if res.is_top else sorted(res.footprint),
            "trace": [sorted(z) for z in res.trace],
            "method": res.method.value,
            "micros": res.micros,
        }
        if verified is not None:
            doc["verified"] = verified
        print(json.dumps(doc))
    else:
        print("footprint: " + ("TOP" if res.is_top else _fmt_set(res.footprint, inst.name)))
        print("trace: " + " -> ".join(_fmt_set(z, inst.name) for z in res.trace))
        if verified is not None:
            print(f"verify ({args.verify}): {'PASS' if verified else 'FAIL'}")
    if verified is False:
        return EXIT_ERROR
    return EXIT_TOP if res.is_top else EXIT_OK


def cmd_laws(args) -> int:
    seed = _seed(args)
    monoids = list(Monoid) if args.monoid == "all" else [Monoid(args.monoid)]
    failed = False
    for m in monoids:
        triples = [random_triple(random.Random(f"{seed}:{m}:{i}"), m) for i in range(args.iters)]
        report = check_separation_laws(triples)
        files = {}
        for law in LAWS:
            if report.failures[law]:
                failed = True
                path = Path(args.witness_dir) / f"law-{m}-{law}.json"
                wit = report.failures[law][0]
                gs = GraphSet(m, {f"h{i + 1}": h for i, h in enumerate(wit)}, f"{law} witness")
                path.write_text(serialize_graph_set(gs))
                files[law] = str(path)
        for line in report.lines(files):
            print(line if len(monoids) == 1 else f"{line} [{m}]")
    return EXIT_ERROR if failed else EXIT_OK


def cmd_bench(args) -> int:
    seed = _seed(args)
    methods = [Method(m.strip()) for m in args.methods.split(",") if m.strip()]
    instances = bench_mod.suite_instances(args.suite, args.count, seed)
    rows = bench_mod.run_bench(instances, methods, args.reps, args.verify)
    if args.csv:
        bench_mod.write_csv(rows, args.csv)
    for method, total in bench_mod.totals(rows).items():
        done = sum(1 for r in rows if r.method == method and r.status in ("ok", "top"))
        refused = sum(1 for r in rows if r.method == method and r.status.startswith("refused"))
        print(f"{method}: total {total} us over {done} instances, {refused} refused")
    if any(r.status == "verify-failed" for r in rows):
        return EXIT_ERROR
    return EXIT_OK


def _methods_arg(text: str) -> str:
    for m in text.split(","):
        if m.strip() and m.strip() not in {x.value for x in Method}:
            raise argparse.ArgumentTypeError(f"unknown method {m.strip()!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flowfoot", description="Footprints of flow-graph updates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fp = sub.add_parser("footprint", help="compute the footprint of one instance")
    fp.add_argument("--input", required=True, help="instance file (JSON)")
    fp.add_argument("--method", choices=[m.value for m in Method], default="new")
    fp.add_argument("--verify", choices=("oracle", "algebraic"))
    fp.add_argument("--json", action="store_true", help="machine-readable output")
    fp.set_defaults(func=cmd_footprint)

    laws = sub.add_parser("laws", help="randomised composition-law check")
    laws.add_argument("--monoid", choices=[*(m.value for m in Monoid), "all"], required=True)
    laws.add_argument("--iters", type=int, default=1000)
    laws.add_argument("--seed", type=int, default=0)
    laws.add_argument("--witness-dir", default=".", help="where failing witnesses are written")
    laws.set_defaults(func=cmd_laws)

    b = sub.add_parser("bench", help="time the methods on a generated suite")
    b.add_argument("--suite", choices=bench_mod.SUITES, default="list-updates")
    b.add_argument("--count", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", type=_methods_arg, default="naive,dist,new")
    b.add_argument("--reps", type=int, default=bench_mod.DEFAULT_REPS)
    b.add_argument("--csv", help="write rows here")
    b.add_argument("--verify", choices=("oracle", "algebraic"))
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError:
        return EXIT_USAGE
    except (FlowError, OSError) as e:
        print(f"flowfoot: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


def run_cli(argv) -> tuple:
    """Run in-process; returns ``(exit_code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as e:  # --help
            code = e.code if isinstance(e.code, int) else EXIT_OK
    return code, out.getvalue(), err.getvalue()


def entry() -> None:
    sys.exit(main())
