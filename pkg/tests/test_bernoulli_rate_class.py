"""Label-budget solver: feasibility gate, candidate table, frozen optima."""

import numpy as np
import pytest

from ratemec import (
    DomainError,
    InfeasibleError,
    RateClassProblem,
    RateProblem,
    binary_entropy,
    candidate_solutions,
    feasibility,
    label_params,
    mutual_information,
    solve_mecbr,
    solve_mecbrc,
)

# Frozen references computed with 50-digit arithmetic and rounded to double.
HB_M_03_001 = 0.8861256474645222         # H_b of the blended label marginal
LABEL_FLOOR_03_04 = 0.6036334563442075   # (H_b(m) - 0.4) / (H_b(m) - H_b(0.01))
RATE_ONSET_03_04 = 0.5319766715473178    # floor * H_b(0.3)
VALUE_FIG5_R06 = 0.3098632041640273
VALUE_FIG5_PLATEAU = 0.5567796494470395
CLASS_SAT_RATE = 0.7553921993405937      # H_b(0.3) * 6/7
VALUE_R02_NOCLASS_FLIP = 0.03392933079845359
VALUE_R02_NOCLASS_IDENT = 0.0321444387532773


def test_problem_validation():
    RateClassProblem(0.3, 0.4, 0.5, 0.5, 0.5)
    with pytest.raises(DomainError):
        RateClassProblem(0.3, 0.4, 0.6, 0.5, 0.5)
    with pytest.raises(DomainError):
        RateClassProblem(0.3, 0.4, 0.0, 0.5, 0.5)
    with pytest.raises(DomainError):
        RateClassProblem(0.3, 0.4, 0.1, 0.5, -0.1)


def test_label_params_frozen_values():
    lp = label_params(RateClassProblem(0.3, 0.4, 0.01, 0.5, 0.4))
    assert lp.q_s == pytest.approx(0.304, abs=1e-15)
    assert lp.m == pytest.approx(0.696, abs=1e-15)
    assert lp.h_b_m == pytest.approx(HB_M_03_001, abs=2e-15)
    assert lp.h_b_qs1 == pytest.approx(binary_entropy(0.01), abs=1e-15)


def test_label_params_blend_ordering_holds_on_random_draws():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        q_x = rng.uniform(0.01, 0.5)
        q_s1 = rng.uniform(0.01, 0.49)
        lp = label_params(RateClassProblem(q_x, 0.4, q_s1, 0.5, 1.0))
        assert lp.h_b_m >= lp.h_b_qs1 - 1e-12


def test_feasibility_gate_threshold():
    hb1 = binary_entropy(0.1)
    assert feasibility(RateClassProblem(0.3, 0.4, 0.1, 0.5, hb1))
    assert feasibility(RateClassProblem(0.3, 0.4, 0.1, 0.5, hb1 + 0.2))
    assert not feasibility(RateClassProblem(0.3, 0.4, 0.1, 0.5, hb1 - 1e-6))


def test_gate_failure_raises_with_threshold_in_message():
    with pytest.raises(InfeasibleError, match="H_b\\(q_S1\\)"):
        solve_mecbrc(RateClassProblem(0.3, 0.4, 0.1, 1.0, 0.05))
    with pytest.raises(InfeasibleError):
        candidate_solutions(RateClassProblem(0.3, 0.4, 0.1, 1.0, 0.05))


def test_candidate_table_structure():
    cands = candidate_solutions(RateClassProblem(0.3, 0.4, 0.01, 0.6, 0.4))
    branches = [c.branch for c in cands]
    assert "PartI-Case1" in branches
    assert "PartII-Case1" in branches
    assert "PartI-Case4" in branches
    assert len(cands) <= 10
    for c in cands:
        assert set(c.slacks) == {"nonneg", "simplex", "marginal", "rate", "classification"}
        if c.feasible:
            assert all(s >= -1e-9 for s in c.slacks.values())
            assert np.isfinite(c.value)


def test_candidate_table_shrinks_when_label_is_uninformative():
    # q_s1 = 0.5 collapses the label side; only the budget-step family
    # and the two marginal-cap candidates remain.
    cands = candidate_solutions(RateClassProblem(0.3, 0.4, 0.5, 0.6, 1.0))
    assert {c.branch for c in cands} == {
        "PartI-Case1", "PartII-Case1", "PartI-Case4", "PartII-Case4",
    }


def test_flip_side_marginal_cap_candidate_can_win():
    # Mid-rate window where the flip family hits its marginal cap just
    # below the rate cap and still beats every identity-side point.
    p = RateClassProblem(0.38, 0.43, 0.41, 0.67, 1.9)
    res = solve_mecbrc(p)
    assert res.case_label == "PartII-Case4"
    winner = max(
        (c for c in candidate_solutions(p) if c.feasible), key=lambda c: c.value
    )
    assert winner.branch == "PartII-Case4"
    assert winner.value == pytest.approx(res.value, abs=1e-12)
    assert res.mixture.p2 == pytest.approx(0.43 / 0.62, abs=1e-9)


def test_floor_cap_candidate_can_be_the_only_feasible_one():
    # A label floor above the one-sided marginal cap leaves no feasible
    # one-sided candidate, yet the instance is feasible: the optimum
    # pairs the floor with the p3 = 0 row at p1 > 0 and p2 > 0.
    p = RateClassProblem(0.1, 0.45, 0.3, 0.6, binary_entropy(0.3) + 0.001)
    res = solve_mecbrc(p)
    cands = candidate_solutions(p)
    feasible = [c for c in cands if c.feasible]
    assert {c.branch for c in feasible} <= {"PartI-FloorCap", "PartII-FloorCap"}
    winner = max(feasible, key=lambda c: c.value)
    assert winner.branch == "PartI-FloorCap"
    assert winner.value == pytest.approx(res.value, abs=1e-12)
    assert res.mixture.p1 > 0.5 and res.mixture.p2 > 0.4


def test_best_feasible_candidate_matches_solver():
    rng = np.random.default_rng(32)
    for _ in range(200):
        q_x = rng.uniform(0.01, 0.5)
        q_y = rng.uniform(0.01, 0.5)
        q_s1 = rng.uniform(0.01, 0.5)
        rate = rng.uniform(0.0, 1.2)
        cclass = binary_entropy(q_s1) + rng.uniform(0.0, 1.0)
        p = RateClassProblem(q_x, q_y, q_s1, rate, cclass)
        try:
            res = solve_mecbrc(p)
        except InfeasibleError:
            continue
        best = max(
            (c.value for c in candidate_solutions(p) if c.feasible), default=None
        )
        assert best is not None
        assert res.value == pytest.approx(best, abs=1e-9)


def test_solver_frozen_rate_bound_point():
    res = solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, 0.6, 0.4))
    assert res.value == pytest.approx(VALUE_FIG5_R06, abs=1e-12)
    assert res.case_label == "PartI-Case1"
    assert res.alpha == pytest.approx(0.6 / binary_entropy(0.3), abs=1e-12)


def test_solver_frozen_plateau_point():
    res = solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, 2.0, 0.4))
    assert res.value == pytest.approx(VALUE_FIG5_PLATEAU, abs=1e-12)
    assert res.case_label == "PartI-Case4"
    beyond = solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, CLASS_SAT_RATE + 0.01, 0.4))
    assert beyond.value == pytest.approx(VALUE_FIG5_PLATEAU, abs=1e-10)


def test_solver_prefers_flip_family_when_it_wins():
    # With a loose label budget the problem reduces to the rate-only one,
    # whose optimum at this point sits on the flip side (p1 = 0).
    res = solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, 0.2, 10.0))
    assert res.value == pytest.approx(VALUE_R02_NOCLASS_FLIP, abs=1e-12)
    assert res.case_label == "PartII-Case1"
    assert res.value > VALUE_R02_NOCLASS_IDENT


def test_joint_infeasibility_onset_is_sharp():
    with pytest.raises(InfeasibleError):
        solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, RATE_ONSET_03_04 - 1e-6, 0.4))
    res = solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, RATE_ONSET_03_04 + 1e-6, 0.4))
    informative = res.mixture.p1 + res.mixture.p2
    assert informative == pytest.approx(LABEL_FLOOR_03_04, abs=1e-5)


def test_joint_infeasibility_message_names_both_budgets():
    with pytest.raises(InfeasibleError, match="jointly unsatisfiable"):
        solve_mecbrc(RateClassProblem(0.3, 0.4, 0.01, 0.3, 0.4))


def test_loose_label_budget_reduces_to_rate_only():
    rng = np.random.default_rng(33)
    for _ in range(100):
        q_x = rng.uniform(0.01, 0.5)
        q_y = rng.uniform(0.01, 0.5)
        q_s1 = rng.uniform(0.01, 0.5)
        rate = rng.uniform(0.0, 1.2)
        with_label = solve_mecbrc(RateClassProblem(q_x, q_y, q_s1, rate, 2.0))
        rate_only = solve_mecbr(RateProblem(q_x, q_y, rate))
        assert with_label.value == pytest.approx(rate_only.value, abs=1e-10)


def test_solution_satisfies_every_constraint_row():
    rng = np.random.default_rng(34)
    for _ in range(300):
        q_x = rng.uniform(0.01, 0.5)
        q_y = rng.uniform(0.01, 0.5)
        q_s1 = rng.uniform(0.01, 0.5)
        rate = rng.uniform(0.0, 1.2)
        cclass = binary_entropy(q_s1) + rng.uniform(0.0, 1.0)
        p = RateClassProblem(q_x, q_y, q_s1, rate, cclass)
        try:
            res = solve_mecbrc(p)
        except InfeasibleError:
            continue
        m = res.mixture
        lp = label_params(p)
        assert m.marginal_residual(q_x, q_y) < 1e-8
        assert (m.p1 + m.p2) * binary_entropy(q_x) <= rate + 1e-8
        label_row = (m.p1 + m.p2) * lp.h_b_qs1 + (m.p3 + m.p4) * lp.h_b_m
        assert label_row <= cclass + 1e-8
        direct = mutual_information(m.induced_joint(q_x))
        assert res.value == pytest.approx(direct, abs=1e-9)


def test_nondecreasing_in_both_budgets():
    rng = np.random.default_rng(35)
    for _ in range(60):
        q_x = rng.uniform(0.05, 0.5)
        q_y = rng.uniform(0.05, 0.5)
        q_s1 = rng.uniform(0.05, 0.45)
        base_c = binary_entropy(q_s1) + 0.05
        rates = np.sort(rng.uniform(0.0, 1.2, size=5))
        values = []
        for r in rates:
            try:
                values.append(solve_mecbrc(RateClassProblem(q_x, q_y, q_s1, r, base_c)).value)
            except InfeasibleError:
                continue
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-12

        ccs = np.sort(rng.uniform(base_c, 2.0, size=5))
        fixed_rate = rng.uniform(0.3, 1.2)
        values = []
        for c in ccs:
            try:
                values.append(solve_mecbrc(RateClassProblem(q_x, q_y, q_s1, fixed_rate, c)).value)
            except InfeasibleError:
                continue
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-12
