"""Run records, verdict classification, campaigns, scaling fits and the reachability check."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np
from scipy import stats

from .botmarch import COLOR_BUDGET_K, CN_BUDGET_K, Outcome, new_state, run_march, solve
from .graph import Instance, gen_graph, random_instance, validate_path
from .oracles import HELD_KARP_MAX_N, BACKTRACK_COUNT_MAX_N, backtrack, held_karp, simple_path_lengths

PAPER_TIME_EXPONENT = 8
PAPER_SPACE_EXPONENT = 5
REPORT_VERSION = 1


class Verdict(str, Enum):
    AGREE_YES = "AGREE_YES"
    AGREE_NO = "AGREE_NO"
    COMPLETENESS_GAP = "COMPLETENESS_GAP"
    SOUNDNESS_BREACH = "SOUNDNESS_BREACH"
    UNDECIDED = "UNDECIDED"


def classify(outcome: Outcome, oracle_exists: bool | None) -> Verdict:
    """Verdict for one (solver outcome, oracle answer) cell.

    A bad extraction is a breach whatever the oracle says. A verified path
    with a NO oracle cannot both be right, so it stays undecided and the
    run is flagged as an oracle contradiction.
    """
    outcome = Outcome(outcome)
    if outcome is Outcome.EXTRACTION_INVALID:
        return Verdict.SOUNDNESS_BREACH
    if oracle_exists is None:
        return Verdict.UNDECIDED
    if outcome is Outcome.VALID_PATH:
        return Verdict.AGREE_YES if oracle_exists else Verdict.UNDECIDED
    if oracle_exists:
        return Verdict.COMPLETENESS_GAP
    if outcome is Outcome.BUDGET_EXCEEDED:
        return Verdict.UNDECIDED
    return Verdict.AGREE_NO


@dataclass
class Budget:
    max_seconds: float | None = None
    max_colors: int | None = None
    max_steps: int | None = None

    def kwargs(self) -> dict:
        return {"max_seconds": self.max_seconds, "max_colors": self.max_colors, "max_steps": self.max_steps}


@dataclass
class RunRecord:
    instance_id: int
    seed: int | None
    kind: str
    n: int
    delta: int | None
    outcome: str
    oracle_exists: bool | None
    verdict: str
    path: list[int] | None
    counters: dict
    color_bound_ok: bool
    cn_bound_ok: bool
    findings: list[dict] = field(default_factory=list)
    backtrack_count: int | None = None
    wall_time: float | None = None

    def as_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("wall_time")
        return d


def make_instance(kind: str, n: int, delta: int | None, seed: int) -> Instance:
    if kind == "planted":
        return gen_graph(n, delta, seed)
    if kind == "random":
        return random_instance(n, seed)
    raise ValueError(f"unknown instance kind {kind!r}")


def run_one(
    inst: Instance,
    budget: Budget | None = None,
    *,
    instance_id: int = 0,
    seed: int | None = None,
    kind: str = "given",
    delta: int | None = None,
    dock_policy: str = "exclusive",
    cross_check: bool = False,
    debug: bool = False,
) -> RunRecord:
    """Solve, consult the oracle, classify. Never raises for solver or oracle trouble."""
    budget = budget or Budget()
    t0 = time.perf_counter()
    res = solve(inst, dock_policy=dock_policy, debug=debug, **budget.kwargs())
    wall = time.perf_counter() - t0
    findings = [f.as_dict() for f in res.findings]
    if res.path is not None and not validate_path(inst.graph, inst.s, inst.e, res.path):
        # solve validates before returning, so this is a firewall breach
        findings.append({"kind": "returned_invalid_path", "path": list(res.path)})
    exists = None
    if inst.n <= HELD_KARP_MAX_N:
        exists = held_karp(inst).exists
    bt = None
    if cross_check and inst.n <= BACKTRACK_COUNT_MAX_N:
        bt = backtrack(inst).count
        if exists is not None and (bt > 0) != exists:
            findings.append({"kind": "oracle_disagreement", "held_karp": exists, "backtrack_count": bt})
    verdict = classify(res.outcome, exists)
    if res.outcome is Outcome.VALID_PATH and exists is False:
        findings.append({"kind": "oracle_contradiction"})
    n = inst.n
    counters = res.counters.as_dict()
    counters["space_proxy"] = counters["peak_live_colors"] + counters["peak_live_arcs"]
    return RunRecord(
        instance_id=instance_id,
        seed=seed,
        kind=kind,
        n=n,
        delta=delta,
        outcome=res.outcome.value,
        oracle_exists=exists,
        verdict=verdict.value,
        path=None if res.path is None else [int(v) for v in res.path],
        counters=counters,
        color_bound_ok=counters["colors_allocated"] <= COLOR_BUDGET_K * n**3,
        cn_bound_ok=counters["max_cn"] <= CN_BUDGET_K * n,
        findings=findings,
        backtrack_count=bt,
        wall_time=wall,
    )


@dataclass
class CampaignConfig:
    count: int = 500
    n: int = 17
    n_max: int | None = None
    delta: int = 3
    seed_base: int = 0
    kind: str = "planted"
    dock_policy: str = "exclusive"
    jobs: int = 1
    budget_seconds: float | None = 1800.0
    instance_seconds: float | None = None
    instance_colors: int | None = None
    cross_check: bool = False
    timings: bool = False

    def spec_for(self, i: int) -> tuple[str, int, int | None, int]:
        """(kind, n, delta, seed) of the i-th instance; "mixed" alternates planted and random."""
        seed = self.seed_base + i
        top = self.n if self.n_max is None else self.n_max
        n = self.n + seed % (top - self.n + 1)
        kind = self.kind
        if kind == "mixed":
            kind = "planted" if seed % 2 == 0 else "random"
        delta = min(self.delta, n - 1) if kind == "planted" else None
        return kind, n, delta, seed

    def echo(self) -> dict:
        d = asdict(self)
        # parallelism and wall-clock caps must not change the report bytes
        for k in ("jobs", "budget_seconds"):
            d.pop(k)
        if not self.timings:
            d.pop("timings")
        return d


def _campaign_task(args) -> dict:
    cfg, i = args
    kind, n, delta, seed = cfg.spec_for(i)
    inst = make_instance(kind, n, delta, seed)
    budget = Budget(max_seconds=cfg.instance_seconds, max_colors=cfg.instance_colors)
    rec = run_one(
        inst,
        budget,
        instance_id=i,
        seed=seed,
        kind=kind,
        delta=delta,
        dock_policy=cfg.dock_policy,
        cross_check=cfg.cross_check,
    )
    return rec.as_dict(cfg.timings)


def _quantiles(xs: list[float]) -> dict:
    if not xs:
        return {"min": None, "median": None, "max": None}
    a = np.asarray(xs, dtype=float)
    return {"min": float(a.min()), "median": float(np.median(a)), "max": float(a.max())}


def aggregate(records: list[dict]) -> dict:
    """Summary numbers; a pure function of the records."""
    total = len(records)
    verdicts = {v.value: 0 for v in Verdict}
    outcomes = {o.value: 0 for o in Outcome}
    for r in records:
        verdicts[r["verdict"]] += 1
        outcomes[r["outcome"]] += 1
    yes = sum(1 for r in records if r["oracle_exists"])
    keys = ("colors_allocated", "max_cn", "steps", "peak_live_colors", "space_proxy")
    findings: dict[str, int] = {}
    for r in records:
        for f in r["findings"]:
            findings[f["kind"]] = findings.get(f["kind"], 0) + 1
    return {
        "total": total,
        "verdicts": verdicts,
        "verdict_rates": {k: (v / total if total else None) for k, v in verdicts.items()},
        "outcomes": outcomes,
        "oracle_yes": yes,
        "agree_yes_rate": verdicts["AGREE_YES"] / yes if yes else None,
        "counters": {k: _quantiles([r["counters"][k] for r in records]) for k in keys},
        "color_bound_violations": sum(1 for r in records if not r["color_bound_ok"]),
        "cn_bound_violations": sum(1 for r in records if not r["cn_bound_ok"]),
        "threshold_checks": sum(1 for r in records if "color_bound_ok" in r and "cn_bound_ok" in r),
        "findings": dict(sorted(findings.items())),
        "oracle_disagreements": findings.get("oracle_disagreement", 0),
    }


def campaign(cfg: CampaignConfig, *, progress=None) -> dict:
    """Run ``cfg.count`` instances and assemble the report.

    Records are reduced in seed order, so the report does not depend on
    ``jobs``. When ``budget_seconds`` runs out the finished prefix is kept and
    ``complete`` is false.
    """
    deadline = None if cfg.budget_seconds is None else time.monotonic() + cfg.budget_seconds
    tasks = [(cfg, i) for i in range(cfg.count)]
    records: list[dict] = []
    complete = True
    if cfg.jobs <= 1:
        for t in tasks:
            if deadline is not None and time.monotonic() > deadline:
                complete = False
                break
            records.append(_campaign_task(t))
            if progress:
                progress(len(records), cfg.count)
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_campaign_task, t) for t in tasks]
            try:
                for fut in futures:
                    left = None if deadline is None else max(0.0, deadline - time.monotonic())
                    records.append(fut.result(timeout=left))
                    if progress:
                        progress(len(records), cfg.count)
            except FutureTimeout:
                complete = False
                for fut in futures:
                    fut.cancel()
    return {
        "config": {**cfg.echo(), "version": REPORT_VERSION},
        "records": records,
        "aggregates": {**aggregate(records), "complete": complete},
        "scaling": campaign_scaling(records),
    }


def campaign_scaling(records: list[dict]) -> dict:
    """Per-n medians drawn from the records. Times only appear when records carry them."""
    by_n: dict[int, list[dict]] = {}
    for r in records:
        by_n.setdefault(r["n"], []).append(r)
    timed = bool(records) and all("wall_time" in r for r in records)
    rows = []
    for n in sorted(by_n):
        rs = by_n[n]
        row = {
            "n": n,
            "runs": len(rs),
            "agree_yes": sum(r["verdict"] == Verdict.AGREE_YES.value for r in rs),
            "median_colors": float(np.median([r["counters"]["colors_allocated"] for r in rs])),
            "median_space_proxy": float(np.median([r["counters"]["space_proxy"] for r in rs])),
        }
        if timed:
            row["median_time"] = float(np.median([r["wall_time"] for r in rs]))
        rows.append(row)
    ok = [r for r in records if r["verdict"] == Verdict.AGREE_YES.value]
    return {
        "table": rows,
        "time_fit": _fit([r["n"] for r in ok], [max(r["wall_time"], 1e-9) for r in ok]) if timed else None,
        "space_fit": _fit([r["n"] for r in records], [max(r["counters"]["space_proxy"], 1) for r in records]),
        "reference_exponents": {"time": PAPER_TIME_EXPONENT, "space": PAPER_SPACE_EXPONENT},
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def recheck_report(report: dict) -> list[dict]:
    """Regenerate each instance from its seed and revalidate stored paths; returns problems."""
    problems = []
    for r in report["records"]:
        if r["outcome"] != Outcome.VALID_PATH.value:
            continue
        inst = make_instance(r["kind"], r["n"], r["delta"], r["seed"])
        if r["path"] is None or not validate_path(inst.graph, inst.s, inst.e, r["path"]):
            problems.append({"instance_id": r["instance_id"], "path": r["path"]})
    return problems


def _fit(xs: Iterable[float], ys: Iterable[float]) -> dict | None:
    x = np.log(np.asarray(list(xs), dtype=float))
    y = np.log(np.asarray(list(ys), dtype=float))
    if len(x) < 3 or np.ptp(x) == 0:
        return None
    fit = stats.linregress(x, y)
    t = stats.t.ppf(0.975, len(x) - 2)
    return {
        "slope": float(fit.slope),
        "intercept": float(fit.intercept),
        "ci95": [float(fit.slope - t * fit.stderr), float(fit.slope + t * fit.stderr)],
        "points": int(len(x)),
    }


def scale_study(
    ns: list[int],
    reps: int = 20,
    delta: int = 3,
    *,
    seed_base: int = 0,
    budget: Budget | None = None,
    dock_policy: str = "exclusive",
    min_successes: int = 3,
) -> dict:
    """Time the solver over planted instances and fit log-log exponents.

    The time fit uses the individual AGREE_YES runs. When an n has fewer than
    ``min_successes`` of them it is marked sparse and left out of that fit. The
    space proxy (peak live colors plus hierarchy arcs) is fitted over all runs,
    since it does not depend on success. Nothing here is pass/fail.
    """
    rows, tx, ty, sx, sy = [], [], [], [], []
    for n in ns:
        recs = []
        for r in range(reps):
            seed = seed_base + r
            inst = gen_graph(n, min(delta, n - 1), seed)
            recs.append(run_one(inst, budget, instance_id=r, seed=seed, kind="planted", delta=delta, dock_policy=dock_policy))
        ok = [x for x in recs if x.verdict == Verdict.AGREE_YES.value]
        sparse = len(ok) < min_successes
        if not sparse:
            tx += [n] * len(ok)
            ty += [max(x.wall_time, 1e-9) for x in ok]
        for x in recs:
            sx.append(n)
            sy.append(max(x.counters["space_proxy"], 1))
        rows.append(
            {
                "n": n,
                "runs": len(recs),
                "agree_yes": len(ok),
                "sparse": sparse,
                "median_time": float(np.median([x.wall_time for x in recs])),
                "median_time_agree_yes": float(np.median([x.wall_time for x in ok])) if ok else None,
                "median_colors": float(np.median([x.counters["colors_allocated"] for x in recs])),
                "median_space_proxy": float(np.median([x.counters["space_proxy"] for x in recs])),
                "color_bound_violations": sum(not x.color_bound_ok for x in recs),
                "cn_bound_violations": sum(not x.cn_bound_ok for x in recs),
            }
        )
    return {
        "config": {"ns": list(ns), "reps": reps, "delta": delta, "seed_base": seed_base, "dock_policy": dock_policy},
        "table": rows,
        "time_fit": _fit(tx, ty),
        "space_fit": _fit(sx, sy),
        "reference_exponents": {"time": PAPER_TIME_EXPONENT, "space": PAPER_SPACE_EXPONENT},
        "space_proxy": "peak live colors + peak live hierarchy arcs, summed over all path graphs",
    }


# reachability log: one JSON object per (instance, slack) mismatch or match
REACH_LOG_KEYS = {"instance", "n", "s", "slack", "status", "pipeline", "oracle", "missing", "extra", "dock_policy"}


def pipeline_reach(inst: Instance, dock_policy: str = "exclusive") -> dict[int, set[int]]:
    """Map ``j -> {v : slacks(v) holds a live path graph at slack j}`` after a full march."""
    st = new_state(inst, dock_policy=dock_policy)
    run_march(st, stop_at_target=False)
    out: dict[int, set[int]] = {}
    for v, ss in st.slacks.items():
        for j in ss.slacks():
            out.setdefault(j, set()).add(v)
    return out


def reachability_check(inst: Instance, instance_id: int = 0, dock_policy: str = "exclusive") -> list[dict]:
    """Compare the pipeline's anchor sets with brute-force simple-path enumeration, per slack."""
    got = pipeline_reach(inst, dock_policy)
    want = simple_path_lengths(inst)
    rows = []
    for j in range(inst.n):
        p, o = got.get(j, set()), want.get(j, set())
        rows.append(
            {
                "instance": instance_id,
                "n": inst.n,
                "s": inst.s,
                "slack": j,
                "status": "match" if p == o else "mismatch",
                "pipeline": sorted(p),
                "oracle": sorted(o),
                "missing": sorted(o - p),
                "extra": sorted(p - o),
                "dock_policy": dock_policy,
            }
        )
    return rows


def validate_reach_line(line: str) -> dict:
    """Parse and check one reachability log line; raises ValueError when malformed."""
    row = json.loads(line)
    if not isinstance(row, dict) or set(row) != REACH_LOG_KEYS:
        raise ValueError("wrong key set")
    for k in ("instance", "n", "s", "slack"):
        if not isinstance(row[k], int) or isinstance(row[k], bool) or row[k] < 0:
            raise ValueError(f"{k} must be a non-negative int")
    if row["status"] not in ("match", "mismatch"):
        raise ValueError("bad status")
    if row["dock_policy"] not in ("exclusive", "mutex"):
        raise ValueError("bad dock policy")
    for k in ("pipeline", "oracle", "missing", "extra"):
        v = row[k]
        if not isinstance(v, list) or v != sorted(set(v)) or any(not 0 <= x < row["n"] for x in v):
            raise ValueError(f"{k} must be a sorted list of node ids")
    p, o = set(row["pipeline"]), set(row["oracle"])
    if sorted(o - p) != row["missing"] or sorted(p - o) != row["extra"]:
        raise ValueError("missing/extra inconsistent with sets")
    if (row["status"] == "match") != (p == o):
        raise ValueError("status inconsistent with sets")
    return row


def format_reach_log(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
