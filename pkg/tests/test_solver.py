import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concept_interference import (
    Classification,
    DegeneracyError,
    InfeasibilityError,
    ProjectorLayout,
    ValidationError,
    assign_signs,
    build_state_vectors,
    classify_exemplars,
    compute_cm,
    compute_deviations,
    compute_lambda_magnitudes,
    compute_phases,
    measure_residuals,
    sign_assignment_trace,
    solve,
    verify_solution,
)

from conftest import feasible_tables, make_table, solve_feasible
from reference_values import (
    MOST_STRENGTHENING,
    MOST_WEAKENING,
    ORACLE_C_M,
    ORACLE_M,
    ORACLE_PHI,
    ORACLE_SIGNS,
    ORACLE_VISIT_ORDER,
    REF_C_M,
    REF_LAMBDA,
    REF_M,
    REF_PHI,
    REF_VECTOR_A,
    REF_VECTOR_B_COORD_19_CONSISTENT,
    REF_VECTOR_B_MODULI,
    SIGNS_IN_VISIT_ORDER,
    STRENGTHENING_NAMES,
    VISIT_ORDER,
    WEAKENING_NAMES,
)


class TestDeviations:
    def test_reference_spot_values(self, reference_table):
        deviations = compute_deviations(reference_table)
        assert deviations[0] == pytest.approx(0.0023, abs=1e-4)    # Almond
        assert deviations[18] == pytest.approx(-0.0092, abs=1e-4)  # Tomato

    def test_classical_row_is_zero(self):
        table = make_table([0.5, 0.5], [0.3, 0.7], [0.4, 0.6])
        assert compute_deviations(table)[0] == 0.0
        assert compute_deviations(table)[1] == 0.0


class TestLambdaMagnitudes:
    def test_reference_spot_values(self, reference_table):
        magnitudes, report = compute_lambda_magnitudes(reference_table)
        assert report.constructible
        assert magnitudes[0] == pytest.approx(0.0218, abs=5e-4)   # Almond
        assert magnitudes[13] == pytest.approx(0.0088, abs=5e-4)  # Mushroom

    def test_negative_radicand_reported_not_raised(self):
        table = make_table(
            [0.01, 0.5, 0.49], [0.01, 0.5, 0.49], [0.5, 0.3, 0.2]
        )
        magnitudes, report = compute_lambda_magnitudes(table)
        assert not report.constructible
        assert len(report.infeasible_exemplars) == 1
        index, radicand = report.infeasible_exemplars[0]
        assert index == 1
        assert radicand == pytest.approx(0.01 * 0.01 - 0.49**2)
        assert math.isnan(magnitudes[0])
        assert not math.isnan(magnitudes[1])


class TestSignAssignment:
    def test_hand_trace_three_entries(self):
        # 0.5 first; 0.5 - 0.3 = 0.2 >= 0 so minus; 0.2 - 0.2 = 0 >= 0 so minus
        signs, m = assign_signs([0.5, 0.3, 0.2])
        assert m == 1
        assert signs.tolist() == [1, -1, -1]
        trace = sign_assignment_trace([0.5, 0.3, 0.2])
        assert [step.running_sum for step in trace] == [0.5, 0.2, 0.0]

    def test_hand_trace_with_tie(self):
        # equal maxima tie-break low: m = 1, visit 1, 3, 2; the third entry
        # zeroes the running sum, forcing a plus on the last visit
        signs, m = assign_signs([0.31623, 0.3, 0.31623])
        assert m == 1
        assert signs.tolist() == [1, 1, -1]
        trace = sign_assignment_trace([0.31623, 0.3, 0.31623])
        assert [step.index for step in trace] == [1, 3, 2]
        assert trace[-1].running_sum == pytest.approx(0.3)

    def test_reference_trace_matches_published_narrative(self, reference_table):
        magnitudes, _ = compute_lambda_magnitudes(reference_table)
        trace = sign_assignment_trace(magnitudes)
        visited = [reference_table.names[s.index - 1] for s in trace]
        assert visited == VISIT_ORDER
        signs = "".join("+" if s.sign > 0 else "-" for s in trace)
        assert signs == SIGNS_IN_VISIT_ORDER
        assert trace[0].index == REF_M

    def test_running_sum_nonnegative_after_minus(self, reference_table):
        magnitudes, _ = compute_lambda_magnitudes(reference_table)
        for step in sign_assignment_trace(magnitudes):
            if step.sign < 0:
                assert step.running_sum >= 0.0

    def test_too_few_entries(self):
        with pytest.raises(ValidationError):
            assign_signs([1.0])

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            assign_signs([1.0, float("nan")])


class TestClosingCoefficient:
    def test_reference_value(self, reference_table, reference_solution):
        assert reference_solution.c_m == pytest.approx(REF_C_M, abs=5e-3)

    def test_oracle_value(self, oracle_table):
        magnitudes, _ = compute_lambda_magnitudes(oracle_table)
        signs, m = assign_signs(magnitudes)
        assert m == ORACLE_M
        c_m = compute_cm(oracle_table, signs * magnitudes, m)
        assert c_m == pytest.approx(ORACLE_C_M, abs=1e-6)
        assert c_m == pytest.approx(0.0513, abs=1e-4)

    def test_cm_above_one_rejected(self):
        # force it by handing compute_cm a huge off-m lambda sum
        table = make_table([0.5, 0.5], [0.5, 0.5], [0.5, 0.5])
        with pytest.raises(InfeasibilityError) as excinfo:
            compute_cm(table, np.array([0.1, 2.0]), 1)
        assert excinfo.value.report.cm_violation > 1.0

    def test_cm_zero_is_degenerate(self):
        # both deviations zero and the off-m lambda exactly zero
        table = make_table([0.5, 0.5], [0.5, 0.5], [0.5, 0.5])
        with pytest.raises(DegeneracyError, match="classically additive"):
            compute_cm(table, np.array([0.5, 0.0]), 1)


class TestPhases:
    def test_reference_spot_values(self, reference_solution):
        phi = reference_solution.phi_deg
        assert phi[0] == pytest.approx(83.96, abs=0.05)
        assert abs(phi[0] - 83.8854) <= 0.5          # Almond
        assert phi[6] == pytest.approx(-113.31, abs=0.05)
        assert abs(phi[6] - -113.2431) <= 0.5        # Elderberry

    def test_zero_deviation_gives_exact_right_angle(self):
        table = make_table([0.5, 0.5], [0.3, 0.7], [0.4, 0.6])
        lambdas = np.array([math.sqrt(0.15), -math.sqrt(0.35)])
        phi, beta = compute_phases(table, lambdas, 1, 1.0)
        assert phi[0] == 90.0
        assert phi[1] == -90.0
        assert beta[0] == 90.0

    def test_sign_follows_lambda(self, reference_solution):
        nonzero = reference_solution.lambdas != 0.0
        assert np.all(
            np.sign(reference_solution.phi_deg[nonzero])
            == np.sign(reference_solution.lambdas[nonzero])
        )

    def test_beta_equals_phi_except_m(self, reference_solution):
        m = reference_solution.m
        phi, beta = reference_solution.phi_deg, reference_solution.beta_deg
        assert np.array_equal(np.delete(phi, m - 1), np.delete(beta, m - 1))
        assert beta[m - 1] == abs(phi[m - 1])


class TestStateVectors:
    def test_vector_a_matches_reference(self, reference_solution):
        for got, expected in zip(reference_solution.vector_a, REF_VECTOR_A):
            assert got.imag == 0.0
            assert got.real == pytest.approx(expected, abs=1e-3)

    def test_vector_b_moduli_match_reference(self, reference_solution):
        moduli = np.abs(reference_solution.vector_b)
        for k, (got, expected) in enumerate(
            zip(moduli, REF_VECTOR_B_MODULI), start=1
        ):
            if k == REF_M:
                continue
            assert got == pytest.approx(expected, abs=2e-3)
        assert moduli[24] == pytest.approx(0.1565, abs=2e-3)

    def test_vector_b_coordinate_m_carries_closing_coefficient(
        self, reference_table, reference_solution
    ):
        # the reference listing prints sqrt(mu_b_19) = 0.2606 for this
        # coordinate, dropping the closing coefficient its own definition
        # applies; the consistent value (and the one that keeps the vector
        # normalized) is c_m * sqrt(mu_b_19)
        modulus = abs(reference_solution.vector_b[REF_M - 1])
        expected = reference_solution.c_m * math.sqrt(
            reference_table.mu_b[REF_M - 1]
        )
        assert modulus == pytest.approx(expected, rel=1e-12)
        assert modulus == pytest.approx(
            REF_VECTOR_B_COORD_19_CONSISTENT, abs=2e-3
        )

    def test_plane_coordinate_real_nonnegative(self, reference_solution):
        plane = reference_solution.vector_b[24]
        assert plane.imag == 0.0
        assert plane.real >= 0.0

    def test_both_vectors_normalized(self, reference_solution):
        assert np.linalg.norm(reference_solution.vector_a) == pytest.approx(
            1.0, abs=1e-9
        )
        assert np.linalg.norm(reference_solution.vector_b) == pytest.approx(
            1.0, abs=1e-9
        )


class TestVerification:
    def test_reference_residuals_tiny(self, reference_solution):
        residuals = reference_solution.residuals
        assert residuals.orthogonality_modulus < 1e-9
        assert residuals.norm_a_error < 1e-9
        assert residuals.norm_b_error < 1e-9
        assert residuals.max_reconstruction_error < 1e-9

    def test_oracle_residuals_tiny(self, oracle_table):
        solution = solve(oracle_table)
        assert solution.residuals.orthogonality_modulus < 1e-9
        assert solution.residuals.max_reconstruction_error < 1e-9

    def test_verify_solution_recomputes(self, reference_table, reference_solution):
        report = verify_solution(reference_solution, reference_table)
        assert report == reference_solution.residuals

    def test_detects_perturbed_phase(self, reference_table, reference_solution):
        beta = reference_solution.beta_deg.copy()
        beta[4] += 10.0
        vector_a, vector_b = build_state_vectors(
            reference_table,
            reference_solution.m,
            reference_solution.c_m,
            beta,
        )
        report = measure_residuals(
            vector_a,
            vector_b,
            reference_table,
            ProjectorLayout(reference_table.n, reference_solution.m),
        )
        assert report.orthogonality_modulus > 1e-4


class TestClassification:
    def test_reference_sets(self, reference_table, reference_solution):
        labels = dict(classify_exemplars(reference_solution))
        weakening = {
            reference_table.names[k - 1]
            for k, label in labels.items()
            if label is Classification.WEAKENING
        }
        strengthening = {
            reference_table.names[k - 1]
            for k, label in labels.items()
            if label is Classification.STRENGTHENING
        }
        assert weakening == WEAKENING_NAMES
        assert strengthening == STRENGTHENING_NAMES

    def test_extremes_by_phase(self, reference_table, reference_solution):
        cos_phi = np.cos(np.radians(reference_solution.phi_deg))
        names = reference_table.names
        assert names[int(np.argmin(cos_phi))] == MOST_WEAKENING
        assert names[int(np.argmax(cos_phi))] == MOST_STRENGTHENING

    def test_zero_deviation_is_classical(self):
        table = make_table([0.5, 0.5], [0.3, 0.7], [0.4, 0.6])
        solution = solve(table)
        assert all(
            label is Classification.CLASSICAL
            for _, label in classify_exemplars(solution)
        )


class TestOracleSolution:
    def test_full_oracle_solve(self, oracle_table):
        solution = solve(oracle_table)
        assert solution.m == ORACLE_M
        assert np.sign(solution.lambdas).tolist() == ORACLE_SIGNS
        magnitudes, _ = compute_lambda_magnitudes(oracle_table)
        trace = sign_assignment_trace(magnitudes)
        assert [step.index for step in trace] == ORACLE_VISIT_ORDER
        assert solution.c_m == pytest.approx(ORACLE_C_M, abs=1e-6)
        assert solution.phi_deg.tolist() == ORACLE_PHI


class TestSolvePipeline:
    def test_lambda_regression_full(self, reference_solution):
        for got, expected in zip(reference_solution.lambdas, REF_LAMBDA):
            assert abs(got - expected) <= 5e-4
            assert math.copysign(1, got) == math.copysign(1, expected)

    def test_phi_regression_off_m(self, reference_solution):
        for k, (got, expected) in enumerate(
            zip(reference_solution.phi_deg, REF_PHI), start=1
        ):
            if k == REF_M:
                continue
            assert abs(got - expected) <= 0.5

    def test_reconstruction_identity_at_m(
        self, reference_table, reference_solution
    ):
        # the published phi at m is not reproduced by the phase formula
        # (see the erratum notes); the reconstruction identity is what the
        # construction guarantees there
        m = reference_solution.m
        record = reference_table.records[m - 1]
        reconstructed = 0.5 * (record.mu_a + record.mu_b) + (
            reference_solution.c_m
            * math.sqrt(record.mu_a * record.mu_b)
            * math.cos(math.radians(reference_solution.phi_deg[m - 1]))
        )
        assert abs(reconstructed - record.mu_ab) <= 1e-12

    def test_infeasible_table_raises_with_report(self):
        table = make_table(
            [0.01, 0.5, 0.49], [0.01, 0.5, 0.49], [0.5, 0.3, 0.2]
        )
        with pytest.raises(InfeasibilityError) as excinfo:
            solve(table)
        assert excinfo.value.report is not None
        assert excinfo.value.report.infeasible_exemplars[0][0] == 1
        assert "E1" in str(excinfo.value)

    def test_determinism_bit_identical(self, reference_table):
        first = solve(reference_table)
        second = solve(reference_table)
        assert np.array_equal(first.lambdas, second.lambdas)
        assert np.array_equal(first.phi_deg, second.phi_deg)
        assert np.array_equal(first.vector_a, second.vector_a)
        assert np.array_equal(first.vector_b, second.vector_b)
        assert first.c_m == second.c_m
        assert first.m == second.m
        assert first.residuals == second.residuals


# ---------------------------------------------------------------------------
# property suite over random feasible tables
# ---------------------------------------------------------------------------


@given(feasible_tables())
@settings(max_examples=60, deadline=None)
def test_pythagorean_identity(table):
    solution = solve_feasible(table)
    lhs = solution.lambdas**2 + solution.deviations**2
    rhs = table.mu_a * table.mu_b
    assert np.all(np.abs(lhs - rhs) <= 1e-12)


@given(feasible_tables())
@settings(max_examples=60, deadline=None)
def test_model_exactness(table):
    solution = solve_feasible(table)
    residuals = solution.residuals
    assert residuals.orthogonality_modulus < 1e-9
    assert residuals.norm_a_error < 1e-9
    assert residuals.norm_b_error < 1e-9
    assert residuals.max_reconstruction_error < 1e-9
    # the closed-form reconstruction is even tighter
    reconstructed = 0.5 * (table.mu_a + table.mu_b) + solution.c * np.sqrt(
        table.mu_a * table.mu_b
    ) * np.cos(np.radians(solution.phi_deg))
    assert np.all(np.abs(reconstructed - table.mu_ab) <= 1e-12)


@given(feasible_tables())
@settings(max_examples=60, deadline=None)
def test_sign_sum_invariant(table):
    solution = solve_feasible(table)
    total = solution.lambdas.sum()
    assert total >= -1e-15
    assert 0.0 < solution.c_m <= 1.0
    # the trace's own running sums never go negative, and the visit order
    # is strictly nonincreasing in magnitude
    magnitudes, _ = compute_lambda_magnitudes(table)
    trace = sign_assignment_trace(magnitudes)
    assert trace[-1].running_sum >= 0.0
    for step in trace:
        if step.sign < 0:
            assert step.running_sum >= 0.0
    visited = [step.magnitude for step in trace]
    assert all(a >= b for a, b in zip(visited, visited[1:]))
    # the leftover sum never exceeds the largest magnitude, which is what
    # keeps the closing coefficient inside (0, 1]
    assert trace[-1].running_sum <= trace[0].magnitude + 1e-15


@given(feasible_tables())
@settings(max_examples=60, deadline=None)
def test_phase_signs_follow_lambdas(table):
    solution = solve_feasible(table)
    nonzero = solution.lambdas != 0.0
    assert np.all(
        np.sign(solution.phi_deg[nonzero]) == np.sign(solution.lambdas[nonzero])
    )
    assert np.all(solution.c[np.arange(table.n) != solution.m - 1] == 1.0)


@given(feasible_tables())
@settings(max_examples=60, deadline=None)
def test_classification_consistent_with_phase(table):
    solution = solve_feasible(table)
    for (k, label), phi in zip(classify_exemplars(solution), solution.phi_deg):
        if k == solution.m:
            continue
        if label is Classification.WEAKENING:
            assert abs(phi) > 90.0
        elif label is Classification.STRENGTHENING:
            assert abs(phi) < 90.0
        else:
            assert abs(phi) == pytest.approx(90.0, abs=1e-6)


@given(feasible_tables(min_n=3, max_n=7), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_permutation_equivariance(table, rng):
    solution = solve_feasible(table)
    magnitudes = np.abs(solution.lambdas)
    if len(np.unique(magnitudes)) != len(magnitudes):
        return  # ties make the visit order depend on labels
    order = list(range(table.n))
    rng.shuffle(order)
    permuted = make_table(
        [table.mu_a[i] for i in order],
        [table.mu_b[i] for i in order],
        [table.mu_ab[i] for i in order],
    )
    permuted_solution = solve_feasible(permuted)
    assert permuted_solution.m == order.index(solution.m - 1) + 1
    assert permuted_solution.c_m == pytest.approx(solution.c_m, abs=1e-12)
    for position, original in enumerate(order):
        assert permuted_solution.lambdas[position] == solution.lambdas[original]
        assert permuted_solution.phi_deg[position] == pytest.approx(
            solution.phi_deg[original], abs=1e-9
        )
    original_labels = dict(classify_exemplars(solution))
    permuted_labels = dict(classify_exemplars(permuted_solution))
    for position, original in enumerate(order):
        assert permuted_labels[position + 1] == original_labels[original + 1]
