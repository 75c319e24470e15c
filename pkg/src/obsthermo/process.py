"""Exogenous question schedules: i.i.d., Markov, or periodic over a finite question set.

The observer never influences the schedule.  Sampling uses numpy's Philox
counter-based generator so that parallel sweeps with distinct seeds stay
reproducible and decorrelated.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

PROB_TOL = 1e-12


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _check_prob_vector(vec, size: int, where: str) -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    if arr.shape != (size,):
        raise ValidationError(f"{where}: expected {size} entries, got shape {arr.shape}")
    if np.any(arr < 0):
        raise ValidationError(f"{where}: entries must be >= 0")
    if abs(arr.sum() - 1.0) > PROB_TOL:
        raise ValidationError(f"{where}: entries sum to {arr.sum()!r}, not 1 within {PROB_TOL}")
    arr.flags.writeable = False
    return arr


def _check_labels(labels) -> tuple:
    labels = tuple(labels)
    if not labels:
        raise ValidationError("question label set must be non-empty")
    if len(set(labels)) != len(labels):
        raise ValidationError(f"question labels must be unique, got {labels}")
    return labels


@dataclass(frozen=True, eq=False)
class IIDProcess:
    """Each question drawn independently with fixed weights."""

    labels: tuple
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", _check_labels(self.labels))
        object.__setattr__(
            self, "weights", _check_prob_vector(self.weights, len(self.labels), "weights")
        )


@dataclass(frozen=True, eq=False)
class MarkovProcess:
    """Next question depends on the previous one through a row-stochastic matrix."""

    labels: tuple
    transition: np.ndarray
    initial: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels)
        object.__setattr__(self, "labels", labels)
        k = len(labels)
        mat = np.asarray(self.transition, dtype=float)
        if mat.shape != (k, k):
            raise ValidationError(f"transition: expected shape ({k}, {k}), got {mat.shape}")
        for i in range(k):
            _check_prob_vector(mat[i], k, f"transition row {i}")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "transition", mat)
        object.__setattr__(self, "initial", _check_prob_vector(self.initial, k, "initial"))


@dataclass(frozen=True, eq=False)
class PeriodicProcess:
    """Questions follow a fixed repeating sequence of labels."""

    labels: tuple
    sequence: tuple

    def __post_init__(self):
        labels = _check_labels(self.labels)
        object.__setattr__(self, "labels", labels)
        seq = tuple(self.sequence)
        if not seq:
            raise ValidationError("periodic sequence must be non-empty")
        for s in seq:
            if s not in labels:
                raise ValidationError(f"periodic sequence entry {s!r} not in labels {labels}")
        object.__setattr__(self, "sequence", seq)


QuestionProcess = IIDProcess | MarkovProcess | PeriodicProcess


def _label_index(process: QuestionProcess, label: str) -> int:
    try:
        return process.labels.index(label)
    except ValueError:
        raise ValidationError(f"unknown question label {label!r}; known: {process.labels}") from None


def next_question_distribution(
    process: QuestionProcess, previous_label: str | None = None, time_index: int = 0
) -> np.ndarray:
    """Law of the next question, as a probability vector over process.labels.

    IID ignores history and time; Markov needs `previous_label` after step 0;
    Periodic is deterministic in `time_index` (one-hot).
    """
    k = len(process.labels)
    if previous_label is not None:
        _label_index(process, previous_label)
    if isinstance(process, IIDProcess):
        return process.weights.copy()
    if isinstance(process, MarkovProcess):
        if previous_label is None:
            if time_index != 0:
                raise ValidationError("Markov process needs previous_label after step 0")
            return process.initial.copy()
        return process.transition[_label_index(process, previous_label)].copy()
    if isinstance(process, PeriodicProcess):
        vec = np.zeros(k)
        label = process.sequence[time_index % len(process.sequence)]
        vec[_label_index(process, label)] = 1.0
        return vec
    raise ValidationError(f"unknown process type {type(process).__name__}")


def first_question_distribution(process: QuestionProcess) -> np.ndarray:
    """Law of the first question (time index 0)."""
    return next_question_distribution(process, previous_label=None, time_index=0)


def sample_questions(process: QuestionProcess, length: int, seed: int) -> list:
    """Draw a reproducible question-label sequence of the given length."""
    if length < 1:
        raise ValidationError(f"length must be >= 1, got {length}")
    if isinstance(process, PeriodicProcess):
        reps = -(-length // len(process.sequence))
        return list(process.sequence * reps)[:length]
    rng = _rng(seed)
    if isinstance(process, IIDProcess):
        idx = rng.choice(len(process.labels), size=length, p=process.weights)
        return [process.labels[i] for i in idx]
    # Markov: cumulative rows let each step be a single searchsorted draw
    cum = np.cumsum(process.transition, axis=1)
    cum_init = np.cumsum(process.initial)
    u = rng.random(length)
    out = np.empty(length, dtype=int)
    out[0] = np.searchsorted(cum_init, u[0], side="right")
    for t in range(1, length):
        out[t] = np.searchsorted(cum[out[t - 1]], u[t], side="right")
    out = np.minimum(out, len(process.labels) - 1)
    return [process.labels[i] for i in out]
