"""Command line: gen, solve, oracle, verify, campaign, scale, reach.

Exit status 0 on success, 1 on usage or input errors, 2 on internal errors.
"""

from __future__ import annotations

import argparse
import sys

from .botmarch import DOCK_POLICIES, solve
from .graph import InstanceFormatError, read_instance, read_path, validate_path, write_instance, write_path
from .harness import Budget, CampaignConfig, campaign, dumps_report, format_reach_log, make_instance, reachability_check, scale_study
from .oracles import OracleCapacityError, backtrack, held_karp

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _instance(path: str):
    try:
        return read_instance(_read(path))
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_gen(a) -> int:
    try:
        inst = make_instance(a.kind, a.n, a.delta if a.kind == "planted" else None, a.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(write_instance(inst), a.output)
    if a.path_out and inst.planted is not None:
        _emit(write_path(inst.planted), a.path_out)
    return EXIT_OK


def cmd_solve(a) -> int:
    inst = _instance(a.instance)
    res = solve(
        inst,
        max_seconds=a.max_seconds,
        max_colors=a.max_colors,
        trace=a.trace is not None,
        dock_policy=a.dock,
    )
    if a.trace is not None:
        lines = next(f.detail["lines"] for f in res.findings if f.kind == "trace")
        _emit("".join(line + "\n" for line in lines), None if a.trace == "-" else a.trace)
    _emit(write_path(res.path) if res.path is not None else res.outcome.value + "\n", a.output)
    return EXIT_OK


def cmd_oracle(a) -> int:
    inst = _instance(a.instance)
    try:
        ans = held_karp(inst) if a.method == "held-karp" else backtrack(inst)
    except OracleCapacityError as exc:
        raise UsageError(str(exc)) from None
    lines = ["true" if ans.exists else "false"]
    if ans.witness is not None:
        lines.append(" ".join(map(str, ans.witness)))
    if ans.count is not None:
        lines.append(f"count {ans.count}")
    _emit("\n".join(lines) + "\n", a.output)
    return EXIT_OK


def cmd_verify(a) -> int:
    inst = _instance(a.instance)
    try:
        path = read_path(_read(a.path))
    except ValueError:
        raise UsageError(f"{a.path}: path must be space-separated integers") from None
    sys.stdout.write("true\n" if validate_path(inst.graph, inst.s, inst.e, path) else "false\n")
    return EXIT_OK


def cmd_campaign(a) -> int:
    cfg = CampaignConfig(
        count=a.count,
        n=a.n,
        n_max=a.n_max,
        delta=a.delta,
        seed_base=a.seed_base,
        kind=a.kind,
        dock_policy=a.dock,
        jobs=a.jobs,
        budget_seconds=a.budget_seconds,
        instance_seconds=a.instance_seconds,
        instance_colors=a.instance_colors,
        cross_check=a.cross_check,
        timings=a.timings,
    )
    if cfg.n_max is not None and cfg.n_max < cfg.n:
        raise UsageError("--n-max must be at least --n")
    if cfg.n < 2 or (cfg.kind != "random" and not 1 <= cfg.delta):
        raise UsageError("need n >= 2 and delta >= 1")
    report = campaign(cfg)
    _emit(dumps_report(report), a.output)
    return EXIT_OK


def cmd_scale(a) -> int:
    if not a.ns or min(a.ns) < 2:
        raise UsageError("--ns needs node counts >= 2")
    table = scale_study(
        a.ns, a.reps, a.delta, seed_base=a.seed_base, budget=Budget(max_seconds=a.instance_seconds), dock_policy=a.dock
    )
    _emit(dumps_report(table), a.output)
    return EXIT_OK


def cmd_reach(a) -> int:
    rows = []
    if a.instance:
        rows = reachability_check(_instance(a.instance), 0, a.dock)
    else:
        cfg = CampaignConfig(count=a.count, n=a.n, n_max=a.n_max, delta=a.delta, seed_base=a.seed_base, kind=a.kind)
        for i in range(a.count):
            kind, n, delta, seed = cfg.spec_for(i)
            rows += reachability_check(make_instance(kind, n, delta, seed), i, a.dock)
    _emit(format_reach_log(rows), a.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hampath", description="Colored-hierarchy Hamiltonian path solver with exact oracles.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=int, default=3)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--kind", choices=("planted", "random"), default="planted")
    g.add_argument("-o", "--output")
    g.add_argument("--path-out", help="also write the planted path here")
    g.set_defaults(fn=cmd_gen)

    def dock(sp):
        sp.add_argument("--dock", choices=DOCK_POLICIES, default="exclusive", help="dock policy (default exclusive)")

    s = sub.add_parser("solve", help="run the colored-hierarchy solver")
    s.add_argument("instance")
    s.add_argument("-o", "--output")
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--max-colors", type=int)
    s.add_argument("--trace", metavar="FILE", help="write the march trace here ('-' for stdout)")
    dock(s)
    s.set_defaults(fn=cmd_solve)

    o = sub.add_parser("oracle", help="decide existence exactly")
    o.add_argument("instance")
    o.add_argument("--method", choices=("held-karp", "backtrack"), default="held-karp")
    o.add_argument("-o", "--output")
    o.set_defaults(fn=cmd_oracle)

    v = sub.add_parser("verify", help="check a path file against an instance")
    v.add_argument("instance")
    v.add_argument("path")
    v.set_defaults(fn=cmd_verify)

    def batch(sp, count, n, kind):
        sp.add_argument("--count", type=int, default=count)
        sp.add_argument("--n", type=int, default=n)
        sp.add_argument("--n-max", type=int, help="draw n from [--n, --n-max] by seed")
        sp.add_argument("--delta", type=int, default=3)
        sp.add_argument("--seed-base", type=int, default=0)
        sp.add_argument("--kind", choices=("planted", "random", "mixed"), default=kind)
        sp.add_argument("-o", "--output")
        dock(sp)

    c = sub.add_parser("campaign", help="run a seeded batch and write a JSON report")
    batch(c, 500, 17, "planted")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--budget-seconds", type=float, default=1800.0)
    c.add_argument("--instance-seconds", type=float)
    c.add_argument("--instance-colors", type=int)
    c.add_argument("--cross-check", action="store_true", help="also count paths by backtracking (n <= 12)")
    c.add_argument("--timings", action="store_true", help="include wall times (makes reports machine-dependent)")
    c.set_defaults(fn=cmd_campaign)

    sc = sub.add_parser("scale", help="measure runtime scaling")
    sc.add_argument("--ns", type=_ints, default=[8, 10, 12, 14, 16])
    sc.add_argument("--reps", type=int, default=20)
    sc.add_argument("--delta", type=int, default=3)
    sc.add_argument("--seed-base", type=int, default=0)
    sc.add_argument("--instance-seconds", type=float)
    sc.add_argument("-o", "--output")
    dock(sc)
    sc.set_defaults(fn=cmd_scale)

    r = sub.add_parser("reach", help="compare slack anchor sets with brute-force enumeration (JSON lines)")
    r.add_argument("instance", nargs="?")
    batch(r, 200, 2, "mixed")
    r.set_defaults(fn=cmd_reach)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "output", None) == "-":
        a.output = None
    try:
        return a.fn(a)
    except UsageError as exc:
        sys.stderr.write(f"hampath {a.command}: error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"hampath {a.command}: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
