"""obsthermo: a qubit probed by binary questions, the memories observers keep
about it, and the dissipation lower bound those memories imply.

Pipeline: build the exact (question, answer) chain for a scenario, take its
long-run window joint, apply a memory strategy, and read off memory
information, predictive information, nostalgia, and the bound.  An optimizer
minimizes the bound over strategies; a brute-force oracle and Monte Carlo
certify every exact number.
"""

from .bound import BOLTZMANN_J_PER_K, CapCheckResult, InfoReport, evaluate, predictive_cap_check
from .chain import (
    ChainKernel,
    LongRunResult,
    Trajectory,
    build_chain,
    long_run_distribution,
    sample_trajectory,
    trajectory_window_indices,
    window_joint,
    window_names,
)
from .config import (
    BUNDLED_SCENARIOS,
    Scenario,
    bundled_scenario,
    bundled_scenario_path,
    load_scenario,
    parse_scenario,
    scenario_to_json,
    serialize_scenario,
)
from .errors import SizeCapError, ValidationError
from .info import (
    conditional_mutual_information,
    entropy,
    mutual_information,
    plugin_from_samples,
)
from .joint import JointDistribution, max_abs_deviation
from .optimize import (
    FrontierPoint,
    HistoryFutureJoint,
    OptimizerSettings,
    degeneracy_report,
    exhaustive_best,
    history_future_joint,
    optimize_soft,
    sweep_beta,
)
from .oracle import (
    EnumerationResult,
    MonteCarloReport,
    brute_force_joint,
    converged_tail,
    cross_validate,
    monte_carlo_check,
    tail_window_joint,
)
from .process import (
    IIDProcess,
    MarkovProcess,
    PeriodicProcess,
    next_question_distribution,
    sample_questions,
)
from .qubit import (
    ANSWERS,
    BlochVector,
    MIXED_STATE,
    Question,
    born_probability,
    collapse,
    outcome_probability,
    repeat_measurement_check,
)
from .strategy import (
    KernelStrategy,
    NothingStrategy,
    WindowStrategy,
    apply_strategy,
    enumerate_deterministic,
    memory_capacity_bits,
    strategy_summary,
)
from .workflows import AnalysisResult, OptimizeResult, analyze, optimize, sample, verify

__version__ = "0.1.0"

__all__ = [
    "ANSWERS",
    "AnalysisResult",
    "BOLTZMANN_J_PER_K",
    "BUNDLED_SCENARIOS",
    "BlochVector",
    "CapCheckResult",
    "ChainKernel",
    "EnumerationResult",
    "FrontierPoint",
    "HistoryFutureJoint",
    "IIDProcess",
    "InfoReport",
    "JointDistribution",
    "KernelStrategy",
    "LongRunResult",
    "MIXED_STATE",
    "MarkovProcess",
    "MonteCarloReport",
    "NothingStrategy",
    "OptimizeResult",
    "OptimizerSettings",
    "PeriodicProcess",
    "Question",
    "Scenario",
    "SizeCapError",
    "Trajectory",
    "ValidationError",
    "WindowStrategy",
    "analyze",
    "apply_strategy",
    "born_probability",
    "brute_force_joint",
    "build_chain",
    "bundled_scenario",
    "bundled_scenario_path",
    "collapse",
    "conditional_mutual_information",
    "converged_tail",
    "cross_validate",
    "degeneracy_report",
    "entropy",
    "enumerate_deterministic",
    "evaluate",
    "exhaustive_best",
    "history_future_joint",
    "load_scenario",
    "long_run_distribution",
    "max_abs_deviation",
    "memory_capacity_bits",
    "monte_carlo_check",
    "mutual_information",
    "next_question_distribution",
    "optimize",
    "optimize_soft",
    "outcome_probability",
    "parse_scenario",
    "plugin_from_samples",
    "predictive_cap_check",
    "repeat_measurement_check",
    "sample",
    "sample_questions",
    "sample_trajectory",
    "scenario_to_json",
    "serialize_scenario",
    "strategy_summary",
    "sweep_beta",
    "tail_window_joint",
    "trajectory_window_indices",
    "verify",
    "window_joint",
    "window_names",
]
