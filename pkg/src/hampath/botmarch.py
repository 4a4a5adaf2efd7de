"""Lockstep bot traversal driving the path-graph updates, and H-path extraction."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .chroma import cn_sizes, suco_dfs, top
from .graph import Instance, dup, is_path_in, validate_path
from .pagra import PathGraph, RunContext, SlackSet, init_at_start

COLOR_BUDGET_K = 8
CN_BUDGET_K = 4


class Outcome(str, Enum):
    VALID_PATH = "VALID_PATH"
    NO_CANDIDATE = "NO_CANDIDATE"
    EXTRACTION_EMPTY = "EXTRACTION_EMPTY"
    EXTRACTION_INVALID = "EXTRACTION_INVALID"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


class BudgetExceeded(Exception):
    pass


@dataclass
class Bot:
    at: int
    born_step: int
    hist: tuple[int, ...] | None = None


@dataclass
class BotMaster:
    bots: list[Bot]
    march_step: int = 1
    dock: set[tuple[int, int]] = field(default_factory=set)


@dataclass
class Counters:
    colors_allocated: int = 0
    max_cn: int = 0
    steps: int = 0
    peak_pathgraphs: int = 0
    peak_live_colors: int = 0
    peak_live_arcs: int = 0
    bot_visits: list[int] = field(default_factory=list)
    extraction_checks: int = 0

    def as_dict(self) -> dict:
        return {
            "colors_allocated": self.colors_allocated,
            "max_cn": self.max_cn,
            "steps": self.steps,
            "peak_pathgraphs": self.peak_pathgraphs,
            "peak_live_colors": self.peak_live_colors,
            "peak_live_arcs": self.peak_live_arcs,
            "max_bot_visits": max(self.bot_visits, default=0),
            "extraction_checks": self.extraction_checks,
        }


@dataclass
class Finding:
    kind: str
    detail: dict

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.detail}


@dataclass
class SolveOutcome:
    outcome: Outcome
    path: tuple[int, ...] | None
    counters: Counters
    findings: list[Finding] = field(default_factory=list)
    invalid_sequence: tuple[int, ...] | None = None


@dataclass
class SolverState:
    inst: Instance
    ctx: RunContext
    master: BotMaster
    slacks: dict[int, SlackSet]
    counters: Counters
    debug: bool = False
    findings: list[Finding] = field(default_factory=list)
    trace: list[str] | None = None
    dock_policy: str = "exclusive"


def extract(p: PathGraph, ctx: RunContext) -> list[tuple[int, ...]]:
    """Node sequences read off the down-traversal from each top color, ascending id.

    Empty traversals are skipped; sequences run from the base node to the anchor.
    """
    out = []
    if not len(p.h):
        return out
    for t in sorted(top(p.h)):
        colors = suco_dfs(p.h, t, (), ctx.suco, "down")
        if colors:
            out.append(tuple(p.h.cono[c] for c in reversed(colors)))
    return out


def _check_extractions(state: SolverState, p: PathGraph) -> None:
    # prefix paths must be real simple s->anchor paths with slack arcs
    inst = state.inst
    for seq in extract(p, state.ctx):
        state.counters.extraction_checks += 1
        ok = (
            len(seq) == p.slack + 1
            and not dup(seq)
            and seq[0] == inst.s
            and seq[-1] == p.anchor
            and is_path_in(inst.graph, seq)
        )
        if not ok:
            state.findings.append(
                Finding("extraction_invariant", {"anchor": p.anchor, "slack": p.slack, "sequence": list(seq)})
            )


def add_delete(state: SolverState, a: int, b: int, source: SlackSet | None) -> None:
    """Propagate a's path graphs across arc a->b: reno b, extend, merge into slacks(b)."""
    if not state.inst.graph.has_arc(a, b):
        raise ValueError(f"no arc {a}->{b}")
    if source is None or not len(source):
        return
    ctx = state.ctx
    work = source.copy().reno(b, ctx)
    moved = work.add_slack(b, ctx)
    target = state.slacks.get(b)
    if target is None:
        state.slacks[b] = moved
    else:
        target.merge(moved)
    if state.debug:
        for k, p in state.slacks[b].members.items():
            assert k <= state.master.march_step, "slack ahead of march step"
            p.check()
            _check_extractions(state, p)


def _record(state: SolverState) -> None:
    c = state.counters
    c.colors_allocated = state.ctx.allocator.allocated + 1
    n_pg = n_col = n_arc = 0
    for ss in state.slacks.values():
        for p in ss.members.values():
            n_pg += 1
            n_col += len(p.h)
            n_arc += p.h.n_arcs()
            sizes = cn_sizes(p.h)
            if sizes:
                c.max_cn = max(c.max_cn, max(sizes.values()))
    c.peak_pathgraphs = max(c.peak_pathgraphs, n_pg)
    c.peak_live_colors = max(c.peak_live_colors, n_col)
    c.peak_live_arcs = max(c.peak_live_arcs, n_arc)


def march(state: SolverState) -> None:
    """One lockstep round: every live bot advances along all undocked successors."""
    m, g = state.master, state.inst.graph
    step = m.march_step
    if step >= state.inst.n:
        raise ValueError("march step exhausted")
    # sources are read as they stood at the start of the round
    snapshot = {bot.at: state.slacks.get(bot.at) for bot in m.bots}
    snapshot = {a: None if ss is None else SlackSet(a, ss.members) for a, ss in snapshot.items()}
    new_bots: list[Bot] = []
    transitions: list[tuple[int, int]] = []
    for bot in sorted(m.bots, key=lambda x: x.at):
        a = bot.at
        moved = False
        for b in g.successors(a):
            if (b, step) in m.dock:
                if state.dock_policy == "exclusive":
                    continue
                # mutex: the update still happens, only the bot is not duplicated
                add_delete(state, a, b, snapshot[a])
                transitions.append((a, b))
                moved = True
                continue
            m.dock.add((b, step))
            add_delete(state, a, b, snapshot[a])
            born = bot.born_step if not moved else step + 1
            hist = None if bot.hist is None else bot.hist + (b,)
            new_bots.append(Bot(b, born, hist))
            state.counters.bot_visits[b] += 1
            transitions.append((a, b))
            moved = True
        if moved:
            m.dock.add((a, step - 1))
    m.bots = sorted(new_bots, key=lambda x: x.at)
    assert len(m.bots) <= state.inst.n, "more live bots than nodes"
    assert max(state.counters.bot_visits, default=0) <= state.inst.n, "node visited more than n times"
    if state.trace is not None:
        state.trace.append(
            f"step {step}: bots=[{' '.join(str(x.at) for x in m.bots)}] "
            f"docks=[{' '.join(f'{v}@{k}' for v, k in sorted(d for d in m.dock if d[1] == step))}] "
            f"transitions=[{' '.join(f'{u}->{v}' for u, v in transitions)}]"
        )
    m.march_step += 1
    state.counters.steps += 1


DOCK_POLICIES = ("exclusive", "mutex")


def new_state(
    inst: Instance, *, debug: bool = False, trace: bool = False, hist: bool = False, dock_policy: str = "exclusive"
) -> SolverState:
    if dock_policy not in DOCK_POLICIES:
        raise ValueError(f"unknown dock policy {dock_policy!r}")
    return SolverState(
        inst=inst,
        ctx=RunContext(),
        master=BotMaster([Bot(inst.s, 1, (inst.s,) if hist else None)]),
        slacks={inst.s: init_at_start(inst.s)},
        counters=Counters(bot_visits=[1 if v == inst.s else 0 for v in range(inst.n)]),
        debug=debug,
        trace=[] if trace else None,
        dock_policy=dock_policy,
    )


def run_march(
    state: SolverState,
    *,
    stop_at_target: bool = True,
    max_steps: int | None = None,
    max_seconds: float | None = None,
    max_colors: int | None = None,
) -> None:
    """March until the target path graph exists, no bots remain, or steps run out.

    Raises :class:`BudgetExceeded` when a cap other than the natural ``n - 1``
    step limit cuts the run short.
    """
    inst = state.inst
    t0 = time.perf_counter()
    limit = inst.n - 1 if max_steps is None else min(max_steps, inst.n - 1)
    while state.master.march_step <= inst.n - 1 and state.master.bots:
        if stop_at_target and _target(state) is not None:
            break
        if state.counters.steps >= limit:
            raise BudgetExceeded("step budget")
        march(state)
        _record(state)
        if max_seconds is not None and time.perf_counter() - t0 > max_seconds:
            if not (stop_at_target and _target(state) is not None):
                raise BudgetExceeded("wall-clock budget")
        if max_colors is not None and state.ctx.allocator.allocated > max_colors:
            raise BudgetExceeded("color budget")


def _target(state: SolverState) -> PathGraph | None:
    ss = state.slacks.get(state.inst.e)
    return None if ss is None else ss.get(state.inst.n - 1)


def _threshold_findings(state: SolverState) -> None:
    n, c = state.inst.n, state.counters
    if c.colors_allocated > COLOR_BUDGET_K * n**3:
        state.findings.append(Finding("color_bound", {"colors": c.colors_allocated, "limit": COLOR_BUDGET_K * n**3}))
    if c.max_cn > CN_BUDGET_K * n:
        state.findings.append(Finding("cn_bound", {"max_cn": c.max_cn, "limit": CN_BUDGET_K * n}))


def solve(
    inst: Instance,
    *,
    max_steps: int | None = None,
    max_seconds: float | None = None,
    max_colors: int | None = None,
    debug: bool = False,
    trace: bool = False,
    dock_policy: str = "exclusive",
) -> SolveOutcome:
    """Search for an s->e Hamiltonian path with the colored-hierarchy march.

    A returned path has always been checked against the instance; sequences
    that fail the check are reported as ``EXTRACTION_INVALID`` instead.

    ``dock_policy="exclusive"`` skips successors already docked in the round;
    ``"mutex"`` still propagates along them and only refuses a second bot.
    """
    state = new_state(inst, debug=debug, trace=trace, dock_policy=dock_policy)
    result = _solve(state, max_steps=max_steps, max_seconds=max_seconds, max_colors=max_colors)
    if trace:
        result.findings.append(Finding("trace", {"lines": state.trace}))
    return result


def _solve(state: SolverState, **budget) -> SolveOutcome:
    inst = state.inst
    if inst.n == 1:
        return SolveOutcome(Outcome.VALID_PATH, (inst.s,), state.counters)
    _record(state)
    try:
        run_march(state, **budget)
    except BudgetExceeded as exc:
        state.findings.append(Finding("budget", {"reason": str(exc)}))
        _threshold_findings(state)
        return SolveOutcome(Outcome.BUDGET_EXCEEDED, None, state.counters, state.findings)
    _threshold_findings(state)
    p = _target(state)
    if p is None:
        return SolveOutcome(Outcome.NO_CANDIDATE, None, state.counters, state.findings)
    invalid = None
    for seq in extract(p, state.ctx):
        if validate_path(inst.graph, inst.s, inst.e, seq):
            return SolveOutcome(Outcome.VALID_PATH, seq, state.counters, state.findings)
        if invalid is None:
            invalid = seq
    if invalid is None:
        return SolveOutcome(Outcome.EXTRACTION_EMPTY, None, state.counters, state.findings)
    state.findings.append(Finding("extraction_invalid", {"sequence": list(invalid)}))
    return SolveOutcome(Outcome.EXTRACTION_INVALID, None, state.counters, state.findings, invalid)
