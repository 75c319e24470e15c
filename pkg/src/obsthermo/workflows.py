"""End-to-end workflows over a Scenario: analyze, optimize, sample, verify.

These are the library-level operations behind the CLI; demos and tests call
them directly.
"""

from dataclasses import dataclass

from . import bound as boundmod
from . import chain as chainmod
from . import info
from . import oracle as oraclemod
from . import process as procmod
from .config import Scenario
from .errors import ValidationError
from .joint import JointDistribution
from .optimize import (
    FrontierPoint,
    OptimizerSettings,
    degeneracy_report,
    exhaustive_best,
    history_future_joint,
    sweep_beta,
)
from .strategy import MEMORY_VAR, apply_strategy, deterministic_count, memory_capacity_bits

WINDOW_ORACLE_TOL = 1e-10
CONSISTENCY_TOL = 1e-10
MARKOV_PROPERTY_TOL = 1e-10
DEFAULT_MC_SAMPLES = 10_000


def scenario_kernel(scenario: Scenario) -> chainmod.ChainKernel:
    return chainmod.build_chain(scenario.questions, scenario.process)


def scenario_window(scenario: Scenario):
    """(kernel, long-run result, window joint) for a scenario."""
    kernel = scenario_kernel(scenario)
    long_run = chainmod.long_run_distribution(kernel, scenario.initial_state)
    window = chainmod.window_joint(kernel, long_run, scenario.window)
    return kernel, long_run, window


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    report: boundmod.InfoReport
    window: JointDistribution
    applied: JointDistribution
    long_run: chainmod.LongRunResult


def analyze(scenario: Scenario) -> AnalysisResult:
    """Exact InfoReport for the scenario's strategy at its window."""
    if scenario.strategy is None:
        raise ValidationError("scenario.strategy: required for analyze")
    _, long_run, window = scenario_window(scenario)
    applied = apply_strategy(scenario.strategy, window)
    report = boundmod.evaluate(applied, temperature_kelvin=scenario.temperature_kelvin)
    return AnalysisResult(report=report, window=window, applied=applied, long_run=long_run)


@dataclass(frozen=True, eq=False)
class OptimizeResult:
    points: tuple
    best: FrontierPoint
    degeneracy: tuple | None
    exhaustive_reference: FrontierPoint | None


def optimize(scenario: Scenario) -> OptimizeResult:
    """Sweep beta over the scenario's optimizer settings.

    When the deterministic-map space fits the enumeration cap, the degeneracy
    report and an exhaustive reference at the largest beta come along for free.
    """
    settings = scenario.optimizer
    if settings is None:
        raise ValidationError("scenario.optimizer: required for optimize")
    _, _, window = scenario_window(scenario)
    hf = history_future_joint(window, k=settings.history_k, labeled=settings.history_labeled)
    points = tuple(sweep_beta(hf, settings))
    best = min(points, key=lambda p: p.objective)
    degeneracy = None
    reference = None
    if deterministic_count(hf.num_histories, settings.memory_size) <= 10**6:
        degeneracy = tuple(degeneracy_report(hf, settings.memory_size))
        reference = exhaustive_best(
            hf, settings.memory_size, objective="beta", beta=float(settings.betas()[-1])
        )
    return OptimizeResult(
        points=points, best=best, degeneracy=degeneracy, exhaustive_reference=reference
    )


def sample(scenario: Scenario, length: int, seed: int) -> chainmod.Trajectory:
    """One reproducible trajectory of question/answer pairs."""
    return chainmod.sample_trajectory(
        scenario.questions, scenario.process, scenario.initial_state, length, seed
    )


def verify(
    scenario: Scenario, mc_samples: int = DEFAULT_MC_SAMPLES, seed: int = 0
) -> list:
    """Run every oracle check against the chain pipeline; returns verdict dicts."""
    verdicts = []
    kernel, long_run, window = scenario_window(scenario)
    name = scenario.name

    row_dev = float(abs(kernel.matrix.sum(axis=1) - 1.0).max())
    verdicts.append(oraclemod.verdict("kernel_rows_stochastic", name, row_dev, 1e-12))

    mass_dev = float(abs(long_run.distribution.sum() - 1.0))
    verdicts.append(oraclemod.verdict("long_run_mass", name, mass_dev, 1e-10))

    tail, _horizon = oraclemod.converged_tail(
        scenario.questions, scenario.process, scenario.initial_state, scenario.window
    )
    dev = oraclemod.cross_validate(window, tail)
    verdicts.append(oraclemod.verdict("window_vs_oracle", name, dev, WINDOW_ORACLE_TOL))

    if scenario.window >= 2:
        # dropping the oldest pair of a w-window leaves exactly the (w-1)-window names
        smaller = chainmod.window_joint(kernel, long_run, scenario.window - 1)
        dropped = window.marginal(chainmod.window_names(scenario.window)[2:])
        dev = oraclemod.cross_validate(dropped, smaller)
        verdicts.append(oraclemod.verdict("window_consistency", name, dev, CONSISTENCY_TOL))

    future = window.marginal(chainmod.FUTURE_PAIR)
    future_flat = future.table.reshape(-1)
    dev = float(abs(future_flat - long_run.distribution).max())
    verdicts.append(oraclemod.verdict("future_marginal_is_long_run", name, dev, 1e-10))

    if isinstance(scenario.process, procmod.IIDProcess):
        history = [n for n in window.names if n not in chainmod.FUTURE_PAIR]
        dev = info.mutual_information(window, [chainmod.FUTURE_PAIR[0]], history)
        verdicts.append(oraclemod.verdict("exogeneity", name, dev, 1e-10))

    if scenario.strategy is not None:
        applied = apply_strategy(scenario.strategy, window)
        history = [n for n in window.names if n not in chainmod.FUTURE_PAIR]
        dev = info.conditional_mutual_information(
            applied, [MEMORY_VAR], chainmod.FUTURE_PAIR, history
        )
        verdicts.append(oraclemod.verdict("strategy_markov_property", name, dev, MARKOV_PROPERTY_TOL))

        report = boundmod.evaluate(applied)
        dev = max(0.0, report.i_pred - report.i_mem)
        verdicts.append(oraclemod.verdict("data_processing", name, dev, 1e-10))

        mc = oraclemod.monte_carlo_check(
            scenario.questions,
            scenario.process,
            scenario.initial_state,
            scenario.window,
            scenario.strategy,
            n=mc_samples,
            seed=seed,
        )
        dev = abs(mc.i_pred - report.i_pred)
        verdicts.append(oraclemod.verdict("monte_carlo_i_pred", name, dev, 3.0 * mc.se_i_pred))
    return verdicts


def capacity_report(scenario: Scenario) -> float:
    """log2 of the strategy's memory capacity (number of distinct states)."""
    if scenario.strategy is None:
        raise ValidationError("scenario.strategy: required")
    return memory_capacity_bits(scenario.strategy, scenario.labels)
