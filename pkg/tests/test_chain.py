import math

import numpy as np
import pytest

from obsthermo import (
    IIDProcess,
    MarkovProcess,
    PeriodicProcess,
    MIXED_STATE,
    Question,
    SizeCapError,
    ValidationError,
    BlochVector,
    build_chain,
    long_run_distribution,
    max_abs_deviation,
    mutual_information,
    plugin_from_samples,
    sample_trajectory,
    trajectory_window_indices,
    window_joint,
    window_names,
)
from obsthermo.chain import state_index, write_trajectory_csv

from conftest import case_b_questions, markov_identity_questions, two_questions_at_angle


def single_question():
    q = (Question(label="Qz", axis=np.array([0.0, 0.0, 1.0])),)
    proc = IIDProcess(labels=("Qz",), weights=np.array([1.0]))
    return q, proc


def test_single_question_kernel_is_identity_on_outcome():
    questions, proc = single_question()
    kernel = build_chain(questions, proc)
    assert np.allclose(kernel.matrix, np.eye(2))


def test_two_orthogonal_kernel_entries():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    same = state_index(0, +1)
    assert kernel.matrix[same, same] == pytest.approx(0.5)  # 1/2 * 1 repeat
    cross = state_index(1, +1)
    assert kernel.matrix[same, cross] == pytest.approx(0.25)  # 1/2 * cos^2(45deg)
    assert np.allclose(kernel.matrix.sum(axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 3, math.pi / 2, 2.2])
def test_cross_question_repeat_probability(theta):
    questions, proc = two_questions_at_angle(theta)
    kernel = build_chain(questions, proc)
    # from (QA, +) to (QB, +): 1/2 * cos^2(theta/2)
    p = kernel.matrix[state_index(0, +1), state_index(1, +1)]
    assert p == pytest.approx(0.5 * math.cos(theta / 2) ** 2, abs=1e-12)


def test_periodic_process_refused_with_pointer_to_enumeration():
    questions, _ = single_question()
    proc = PeriodicProcess(labels=("Qz",), sequence=("Qz",))
    with pytest.raises(ValidationError, match="enumeration"):
        build_chain(questions, proc)


def test_long_run_single_question_mixed_start():
    questions, proc = single_question()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    assert np.allclose(lr.distribution, [0.5, 0.5])
    assert not lr.cesaro


def test_long_run_single_question_eigenstate_start():
    questions, proc = single_question()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, BlochVector(0, 0, 1))
    assert np.allclose(lr.distribution, [1.0, 0.0])


def test_long_run_two_orthogonal_uniform():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    assert np.allclose(lr.distribution, 0.25)
    assert not lr.cesaro


def test_long_run_periodic_chain_gets_cesaro_flag():
    # deterministic question alternation makes the chain periodic
    questions, _ = case_b_questions()
    proc = MarkovProcess(
        labels=("Qz", "Qx"),
        transition=np.array([[0.0, 1.0], [1.0, 0.0]]),
        initial=np.array([1.0, 0.0]),
    )
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, BlochVector(0, 0, 1))
    assert lr.cesaro
    assert lr.distribution.sum() == pytest.approx(1.0, abs=1e-12)
    # question marginal averages to 1/2 each
    assert lr.distribution[:2].sum() == pytest.approx(0.5, abs=1e-9)


def test_window_case_a_fully_predictive():
    questions, proc = single_question()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    w = window_joint(kernel, lr, 1)
    marg = w.marginal(("a0", "a+1"))
    assert marg.table[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert marg.table[1, 1] == pytest.approx(0.5, abs=1e-12)
    assert marg.table[0, 1] == 0.0 and marg.table[1, 0] == 0.0


def test_window_case_b_consecutive_answer_marginal():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    w = window_joint(kernel, lr, 2)
    marg = w.marginal(("a-1", "a0")).table
    assert marg[0, 0] == pytest.approx(3 / 8, abs=1e-12)
    assert marg[1, 1] == pytest.approx(3 / 8, abs=1e-12)
    assert marg[0, 1] == pytest.approx(1 / 8, abs=1e-12)
    assert marg[1, 0] == pytest.approx(1 / 8, abs=1e-12)


def test_window_future_question_matches_process_law():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    w = window_joint(kernel, lr, 1)
    assert np.allclose(w.marginal(("q+1",)).table, [0.5, 0.5], atol=1e-12)


def test_window_one_step_consistency():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    w2 = window_joint(kernel, lr, 2)
    w1 = window_joint(kernel, lr, 1)
    dropped = w2.marginal(window_names(2)[2:])
    assert max_abs_deviation(dropped, w1) < 1e-10


def test_window_exogeneity_for_iid():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    w = window_joint(kernel, lr, 2)
    history = [n for n in w.names if n not in ("q+1", "a+1")]
    assert mutual_information(w, ["q+1"], history) < 1e-10


def test_window_size_cap_names_requirement():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    lr = long_run_distribution(kernel, MIXED_STATE)
    with pytest.raises(SizeCapError, match="256"):
        window_joint(kernel, lr, 3, entry_cap=100)


def test_trajectory_case_a_eigenstate_start_constant():
    questions, proc = single_question()
    traj = sample_trajectory(questions, proc, BlochVector(0, 0, 1), 5, seed=7)
    assert list(traj.answers()) == [1, 1, 1, 1, 1]


def test_trajectory_case_b_repeat_rate():
    questions, proc = case_b_questions()
    traj = sample_trajectory(questions, proc, MIXED_STATE, 10**6, seed=123)
    a = traj.answers()
    repeat = (a[1:] == a[:-1]).mean()
    assert abs(repeat - 0.75) < 0.002  # 1/2 * 1 + 1/2 * 1/2


def test_plugin_i_pred_from_trajectory_windows():
    # sliding-window plug-in estimate of the labeled two-pair record's
    # predictive information lands on the exact half bit
    from obsthermo import WindowStrategy, apply_strategy, evaluate

    questions, proc = case_b_questions()
    traj = sample_trajectory(questions, proc, MIXED_STATE, 2 * 10**5, seed=31)
    idx = trajectory_window_indices(traj, questions, 2)
    emp = plugin_from_samples(
        idx,
        names=window_names(2),
        alphabets=(("Qz", "Qx"), (1, -1)) * 3,
    )
    report = evaluate(apply_strategy(WindowStrategy(k=2, labeled=True), emp))
    assert abs(report.i_pred - 0.5) < 0.01


def test_trajectory_conditionals_match_kernel():
    questions, proc = case_b_questions()
    kernel = build_chain(questions, proc)
    traj = sample_trajectory(questions, proc, MIXED_STATE, 2 * 10**5, seed=9)
    idx = trajectory_window_indices(traj, questions, 1)
    emp = plugin_from_samples(
        idx,
        names=window_names(1),
        alphabets=(("Qz", "Qx"), (1, -1), ("Qz", "Qx"), (1, -1)),
    )
    # empirical transition from (Qz, +): compare against the kernel row
    cond = emp.table[0, 0] / emp.table[0, 0].sum()
    assert np.max(np.abs(cond.reshape(-1) - kernel.matrix[0])) < 0.01


def test_periodic_single_question_matches_degenerate_iid():
    questions, _ = case_b_questions()
    periodic = PeriodicProcess(labels=("Qz", "Qx"), sequence=("Qz",))
    degenerate = IIDProcess(labels=("Qz", "Qx"), weights=np.array([1.0, 0.0]))
    t1 = sample_trajectory(questions, periodic, MIXED_STATE, 100, seed=5)
    t2 = sample_trajectory(questions, degenerate, MIXED_STATE, 100, seed=5)
    assert t1.labels() == t2.labels()
    # within a trajectory the answer repeats, so the law only shows across
    # trajectories: the first answer is a fair coin under both schedules
    n = 2000
    f1 = np.mean(
        [sample_trajectory(questions, periodic, MIXED_STATE, 2, seed=s).answers()[0] == 1 for s in range(n)]
    )
    f2 = np.mean(
        [sample_trajectory(questions, degenerate, MIXED_STATE, 2, seed=s).answers()[0] == 1 for s in range(n)]
    )
    assert abs(f1 - 0.5) < 0.04 and abs(f2 - 0.5) < 0.04


def test_trajectory_csv_deterministic(tmp_path):
    questions, proc = case_b_questions()
    for name in ("one.csv", "two.csv"):
        traj = sample_trajectory(questions, proc, MIXED_STATE, 50, seed=21)
        write_trajectory_csv(traj, tmp_path / name)
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()
    header = (tmp_path / "one.csv").read_text().splitlines()[0]
    assert header == "t,question,answer"


def test_markov_identity_long_run_uniform(case_b_bestcase):
    questions, proc = markov_identity_questions()
    kernel = build_chain(questions, proc)
    assert np.allclose(kernel.matrix, np.eye(4))
    lr = long_run_distribution(kernel, MIXED_STATE)
    assert np.allclose(lr.distribution, 0.25)
