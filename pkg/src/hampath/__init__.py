"""Colored-hierarchy Hamiltonian path solver, exact oracles and a verification harness."""

from .botmarch import DOCK_POLICIES, Outcome, SolveOutcome, solve
from .graph import DiGraph, Instance, InstanceFormatError, gen_graph, random_instance, read_instance, validate_path, write_instance
from .harness import Budget, CampaignConfig, RunRecord, Verdict, campaign, classify, run_one, scale_study
from .oracles import OracleAnswer, backtrack, held_karp, simple_path_lengths

__all__ = [
    "DOCK_POLICIES",
    "Budget",
    "CampaignConfig",
    "DiGraph",
    "Instance",
    "InstanceFormatError",
    "OracleAnswer",
    "Outcome",
    "RunRecord",
    "SolveOutcome",
    "Verdict",
    "backtrack",
    "campaign",
    "classify",
    "gen_graph",
    "held_karp",
    "random_instance",
    "read_instance",
    "run_one",
    "scale_study",
    "simple_path_lengths",
    "solve",
    "validate_path",
    "write_instance",
]
