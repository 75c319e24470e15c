"""Scenario configuration: JSON schema, validation with path-to-field messages,
and canonical serialization.

A scenario names its questions (labels and axes), the question schedule, the
initial Bloch state, the analysis window, the memory strategy, and optional
optimizer settings and temperature.  Unknown keys are rejected.
"""

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ValidationError
from .optimize import OptimizerSettings
from .process import IIDProcess, MarkovProcess, PeriodicProcess, QuestionProcess
from .qubit import BlochVector, Question
from .strategy import KernelStrategy, NothingStrategy, Strategy, WindowStrategy

_SCENARIO_KEYS = {
    "name",
    "questions",
    "process",
    "initial_state",
    "window",
    "strategy",
    "optimizer",
    "temperature_kelvin",
    "output",
}
_OPTIMIZER_KEYS = {
    "memory_size",
    "beta_min",
    "beta_max",
    "beta_steps",
    "tolerance",
    "max_iterations",
    "restarts",
    "seed",
    "history",
}


@dataclass(frozen=True, eq=False)
class Scenario:
    """A fully validated scenario, ready to run."""

    name: str
    questions: tuple
    process: QuestionProcess
    initial_state: BlochVector
    window: int
    strategy: Strategy | None
    optimizer: OptimizerSettings | None
    temperature_kelvin: float | None
    output: str | None

    @property
    def labels(self) -> tuple:
        return tuple(q.label for q in self.questions)


def _reject_unknown(data: dict, allowed: set, where: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown keys {sorted(unknown)}")


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ValidationError(f"{where}.{key}: required key missing")
    return data[key]


def _parse_questions(items, where: str) -> tuple:
    if not isinstance(items, list) or not items:
        raise ValidationError(f"{where}: needs a non-empty list of questions")
    out = []
    for i, item in enumerate(items):
        spot = f"{where}[{i}]"
        if not isinstance(item, dict):
            raise ValidationError(f"{spot}: expected an object with label and axis")
        _reject_unknown(item, {"label", "axis"}, spot)
        label = _require(item, "label", spot)
        axis = _require(item, "axis", spot)
        try:
            out.append(Question(label=str(label), axis=np.asarray(axis, dtype=float)))
        except ValidationError as exc:
            raise ValidationError(f"{spot}: {exc}") from None
    labels = [q.label for q in out]
    if len(set(labels)) != len(labels):
        raise ValidationError(f"{where}: duplicate labels {labels}")
    return tuple(out)


def _parse_process(data, labels, where: str) -> QuestionProcess:
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: expected an object")
    kind = _require(data, "type", where)
    try:
        if kind == "iid":
            _reject_unknown(data, {"type", "weights"}, where)
            return IIDProcess(labels=labels, weights=_require(data, "weights", where))
        if kind == "markov":
            _reject_unknown(data, {"type", "transition", "initial"}, where)
            return MarkovProcess(
                labels=labels,
                transition=_require(data, "transition", where),
                initial=_require(data, "initial", where),
            )
        if kind == "periodic":
            _reject_unknown(data, {"type", "sequence"}, where)
            return PeriodicProcess(labels=labels, sequence=_require(data, "sequence", where))
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}.type: must be iid, markov or periodic, got {kind!r}")


def _parse_strategy(data, where: str) -> Strategy:
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: expected an object")
    kind = _require(data, "type", where)
    try:
        if kind == "window":
            _reject_unknown(data, {"type", "k", "labeled"}, where)
            return WindowStrategy(k=int(_require(data, "k", where)), labeled=bool(data.get("labeled", True)))
        if kind == "nothing":
            _reject_unknown(data, {"type"}, where)
            return NothingStrategy()
        if kind == "kernel":
            _reject_unknown(data, {"type", "assignment", "k", "labeled"}, where)
            return KernelStrategy(
                assignment=np.asarray(_require(data, "assignment", where), dtype=float),
                k=int(data["k"]) if data.get("k") is not None else None,
                labeled=bool(data.get("labeled", True)),
            )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}.type: must be window, kernel or nothing, got {kind!r}")


def _parse_optimizer(data, where: str) -> OptimizerSettings:
    if not isinstance(data, dict):
        raise ValidationError(f"{where}: expected an object")
    _reject_unknown(data, _OPTIMIZER_KEYS, where)
    history = data.get("history")
    history_k, history_labeled = None, True
    if history is not None:
        _reject_unknown(history, {"k", "labeled"}, f"{where}.history")
        history_k = int(history["k"]) if history.get("k") is not None else None
        history_labeled = bool(history.get("labeled", True))
    try:
        return OptimizerSettings(
            memory_size=int(_require(data, "memory_size", where)),
            beta_min=float(data.get("beta_min", 1.0)),
            beta_max=float(data.get("beta_max", 8.0)),
            beta_steps=int(data.get("beta_steps", 7)),
            tolerance=float(data.get("tolerance", 1e-9)),
            max_iterations=int(data.get("max_iterations", 10_000)),
            restarts=int(data.get("restarts", 8)),
            seed=int(data.get("seed", 0)),
            history_k=history_k,
            history_labeled=history_labeled,
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def parse_scenario(data: dict) -> Scenario:
    """Validate a config dict into a Scenario; messages name the failing field."""
    if not isinstance(data, dict):
        raise ValidationError("scenario: expected a JSON object")
    _reject_unknown(data, _SCENARIO_KEYS, "scenario")
    name = str(_require(data, "name", "scenario"))
    questions = _parse_questions(_require(data, "questions", "scenario"), "scenario.questions")
    labels = tuple(q.label for q in questions)
    process = _parse_process(_require(data, "process", "scenario"), labels, "scenario.process")
    initial_raw = data.get("initial_state", [0.0, 0.0, 0.0])
    try:
        initial = BlochVector.from_array(np.asarray(initial_raw, dtype=float))
    except ValidationError as exc:
        raise ValidationError(f"scenario.initial_state: {exc}") from None
    window = int(_require(data, "window", "scenario"))
    if window < 1:
        raise ValidationError(f"scenario.window: must be >= 1, got {window}")
    strategy = None
    if data.get("strategy") is not None:
        strategy = _parse_strategy(data["strategy"], "scenario.strategy")
    optimizer = None
    if data.get("optimizer") is not None:
        optimizer = _parse_optimizer(data["optimizer"], "scenario.optimizer")
    temperature = data.get("temperature_kelvin")
    if temperature is not None:
        temperature = float(temperature)
        if temperature <= 0:
            raise ValidationError(f"scenario.temperature_kelvin: must be > 0, got {temperature}")
    output = data.get("output")
    if output is not None:
        output = str(output)
    return Scenario(
        name=name,
        questions=questions,
        process=process,
        initial_state=initial,
        window=window,
        strategy=strategy,
        optimizer=optimizer,
        temperature_kelvin=temperature,
        output=output,
    )


def serialize_scenario(scenario: Scenario) -> dict:
    """Canonical dict form; serialize(parse(x)) is a fixed point of parse."""
    out = {
        "name": scenario.name,
        "questions": [
            {"label": q.label, "axis": [float(v) for v in q.axis]} for q in scenario.questions
        ],
        "process": _serialize_process(scenario.process),
        "initial_state": [float(v) for v in scenario.initial_state.as_array()],
        "window": scenario.window,
    }
    if scenario.strategy is not None:
        out["strategy"] = _serialize_strategy(scenario.strategy)
    if scenario.optimizer is not None:
        out["optimizer"] = _serialize_optimizer(scenario.optimizer)
    if scenario.temperature_kelvin is not None:
        out["temperature_kelvin"] = scenario.temperature_kelvin
    if scenario.output is not None:
        out["output"] = scenario.output
    return out


def _serialize_process(process: QuestionProcess) -> dict:
    if isinstance(process, IIDProcess):
        return {"type": "iid", "weights": [float(v) for v in process.weights]}
    if isinstance(process, MarkovProcess):
        return {
            "type": "markov",
            "transition": [[float(v) for v in row] for row in process.transition],
            "initial": [float(v) for v in process.initial],
        }
    return {"type": "periodic", "sequence": list(process.sequence)}


def _serialize_strategy(strategy: Strategy) -> dict:
    if isinstance(strategy, WindowStrategy):
        return {"type": "window", "k": strategy.k, "labeled": strategy.labeled}
    if isinstance(strategy, NothingStrategy):
        return {"type": "nothing"}
    return {
        "type": "kernel",
        "assignment": [[float(v) for v in row] for row in strategy.assignment],
        "k": strategy.k,
        "labeled": strategy.labeled,
    }


def _serialize_optimizer(settings: OptimizerSettings) -> dict:
    out = {
        "memory_size": settings.memory_size,
        "beta_min": settings.beta_min,
        "beta_max": settings.beta_max,
        "beta_steps": settings.beta_steps,
        "tolerance": settings.tolerance,
        "max_iterations": settings.max_iterations,
        "restarts": settings.restarts,
        "seed": settings.seed,
    }
    if settings.history_k is not None or not settings.history_labeled:
        out["history"] = {"k": settings.history_k, "labeled": settings.history_labeled}
    return out


def scenario_to_json(scenario: Scenario) -> str:
    return json.dumps(serialize_scenario(scenario), sort_keys=True, indent=2) + "\n"


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read config ({exc})") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return parse_scenario(data)


BUNDLED_SCENARIOS = (
    "case_a",
    "case_b_labeled",
    "case_b_unlabeled",
    "case_b_bestcase",
    "angle_sweep",
)


def bundled_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped with the package."""
    if name not in BUNDLED_SCENARIOS:
        raise ValidationError(f"unknown bundled scenario {name!r}; have {BUNDLED_SCENARIOS}")
    ref = resources.files("obsthermo").joinpath(f"scenarios/{name}.json")
    return parse_scenario(json.loads(ref.read_text(encoding="utf-8")))


def bundled_scenario_path(name: str) -> str:
    """Filesystem path of a bundled scenario JSON (for CLI-level tests)."""
    if name not in BUNDLED_SCENARIOS:
        raise ValidationError(f"unknown bundled scenario {name!r}; have {BUNDLED_SCENARIOS}")
    ref = resources.files("obsthermo").joinpath(f"scenarios/{name}.json")
    return str(ref)
