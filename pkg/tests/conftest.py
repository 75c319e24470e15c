import numpy as np
import pytest

from obsthermo import (
    IIDProcess,
    MarkovProcess,
    Question,
    bundled_scenario,
)


@pytest.fixture(scope="session")
def case_a():
    return bundled_scenario("case_a")


@pytest.fixture(scope="session")
def case_b_labeled():
    return bundled_scenario("case_b_labeled")


@pytest.fixture(scope="session")
def case_b_unlabeled():
    return bundled_scenario("case_b_unlabeled")


@pytest.fixture(scope="session")
def case_b_bestcase():
    return bundled_scenario("case_b_bestcase")


@pytest.fixture(scope="session")
def angle_sweep():
    return bundled_scenario("angle_sweep")


@pytest.fixture(scope="session")
def all_bundled(case_a, case_b_labeled, case_b_unlabeled, case_b_bestcase, angle_sweep):
    return (case_a, case_b_labeled, case_b_unlabeled, case_b_bestcase, angle_sweep)


def two_questions_at_angle(theta: float):
    """Axes z and (sin theta, 0, cos theta), IID with equal weights."""
    questions = (
        Question(label="QA", axis=np.array([0.0, 0.0, 1.0])),
        Question(label="QB", axis=np.array([np.sin(theta), 0.0, np.cos(theta)])),
    )
    process = IIDProcess(labels=("QA", "QB"), weights=np.array([0.5, 0.5]))
    return questions, process


def case_b_questions():
    questions = (
        Question(label="Qz", axis=np.array([0.0, 0.0, 1.0])),
        Question(label="Qx", axis=np.array([1.0, 0.0, 0.0])),
    )
    process = IIDProcess(labels=("Qz", "Qx"), weights=np.array([0.5, 0.5]))
    return questions, process


def markov_identity_questions():
    questions = (
        Question(label="Qz", axis=np.array([0.0, 0.0, 1.0])),
        Question(label="Qx", axis=np.array([1.0, 0.0, 0.0])),
    )
    process = MarkovProcess(
        labels=("Qz", "Qx"), transition=np.eye(2), initial=np.array([0.5, 0.5])
    )
    return questions, process
