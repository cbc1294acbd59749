"""Robust aggregation of binary expert votes when some experts lie.

n experts observe conditionally informative binary signals about a hidden
state; up to k of them may collude and report anything.  This package
computes aggregators (maps from the H-report count to a forecast) that
minimize worst-case regret against the omniscient benchmark, along with the
matching worst-case instances, brute-force verification oracles, bounds for
a general report-space model, and a seeded simulation harness.
"""

from .closed_form import (
    ClosedFormResult,
    k_ignorance_dictator,
    l1_adversarial_regret,
    l1_optimal,
    l1_threshold,
    l2_adversarial_aggregator,
    l2_adversarial_regret,
    l2_threshold,
    uninformed_optimal,
)
from .core import (
    AdversaryStrategy,
    Aggregator,
    BenchmarkResult,
    CondDist,
    DomainError,
    InfoStructure,
    LossKind,
    Params,
    ResourceError,
    benchmark,
    expected_loss,
    induced_conditionals,
    loss,
    regret,
)
from .general_model import (
    FoolingScenario,
    OptTable,
    ReportHistogram,
    SensitivityReport,
    TableEntry,
    TableMinimax,
    brute_force_table_minimax,
    ci_informative_table,
    confusion_padding,
    fooling_scenario,
    linear_family_table,
    naive_aggregator,
    naive_forecast,
    regret_lower_bound_instance,
    report_distance,
    sensitive_parameter,
    sensitivity_ratio_check,
)
from .oracle import (
    OracleGrid,
    brute_force_max_regret,
    brute_force_minimax,
    build_grid,
    enumerate_structures,
    verify_interior_lemma,
)
from .simulation import (
    EstimatedParams,
    EvaluationRow,
    VoteDataset,
    apply_adversaries,
    averaging_aggregator,
    estimate_params,
    evaluate,
    ingest_csv,
    majority_aggregator,
    synthesize,
    write_csv,
)
from .solver import (
    ExtremeFamily,
    SolverResult,
    enumerate_extreme,
    regret_sequence,
    solve_l2_nonadversarial,
)
from .worst_case import (
    WorstCase,
    check_feasible,
    clamp_to_interior,
    worst_structure_l1,
    worst_structure_l2,
)

__version__ = "0.1.0"

__all__ = [
    "AdversaryStrategy",
    "Aggregator",
    "BenchmarkResult",
    "ClosedFormResult",
    "CondDist",
    "DomainError",
    "EstimatedParams",
    "EvaluationRow",
    "ExtremeFamily",
    "FoolingScenario",
    "InfoStructure",
    "LossKind",
    "OptTable",
    "OracleGrid",
    "Params",
    "ReportHistogram",
    "ResourceError",
    "SensitivityReport",
    "SolverResult",
    "TableEntry",
    "TableMinimax",
    "VoteDataset",
    "WorstCase",
    "apply_adversaries",
    "averaging_aggregator",
    "benchmark",
    "brute_force_max_regret",
    "brute_force_minimax",
    "brute_force_table_minimax",
    "build_grid",
    "check_feasible",
    "ci_informative_table",
    "clamp_to_interior",
    "confusion_padding",
    "enumerate_extreme",
    "enumerate_structures",
    "estimate_params",
    "evaluate",
    "expected_loss",
    "fooling_scenario",
    "induced_conditionals",
    "ingest_csv",
    "k_ignorance_dictator",
    "l1_adversarial_regret",
    "l1_optimal",
    "l1_threshold",
    "l2_adversarial_aggregator",
    "l2_adversarial_regret",
    "l2_threshold",
    "linear_family_table",
    "loss",
    "majority_aggregator",
    "naive_aggregator",
    "naive_forecast",
    "regret",
    "regret_lower_bound_instance",
    "regret_sequence",
    "report_distance",
    "sensitive_parameter",
    "sensitivity_ratio_check",
    "solve_l2_nonadversarial",
    "synthesize",
    "uninformed_optimal",
    "verify_interior_lemma",
    "worst_structure_l1",
    "worst_structure_l2",
    "write_csv",
]
