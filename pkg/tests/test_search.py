"""Search iteration tests: predictions vs dense linear algebra oracles."""

import math

import numpy as np
import pytest

from gqsearch.linalg import DimensionError, unitarity_defect
from gqsearch.search import (
    predict_spectrum,
    run_iterations,
    save_run_report,
    search_operator,
    selective_phase,
    verify_relevant_pair,
)
from gqsearch.spectra import (
    EigenSpectrum,
    SearchInstance,
    build_diffusion,
    grover_spectrum,
    symmetric_spectrum,
)


def householder_with_first_row(row):
    # symmetric orthogonal matrix whose first row is the given unit vector
    u = np.array(row, dtype=float)
    u[0] -= 1.0
    norm2 = float(u @ u)
    if norm2 < 1e-30:
        return np.eye(len(row))
    return np.eye(len(row)) - (2.0 / norm2) * np.outer(u, u)


def double_pair_toy():
    """5-dim instance: alpha = 0.1, two conjugate pairs at +/- pi/2.

    Every pair member carries weight (1 - alpha^2)/4, so b^2 = 1.98.
    """
    alpha = 0.1
    w = (1.0 - alpha**2) / 4.0
    frame = householder_with_first_row([alpha] + [math.sqrt(w)] * 4)
    v0, a1, b1, a2, b2 = frame.T.astype(np.complex128)
    half = 1.0 / math.sqrt(2.0)
    vectors = np.column_stack(
        [
            v0,
            (a1 + 1j * b1) * half,
            (a1 - 1j * b1) * half,
            (a2 + 1j * b2) * half,
            (a2 - 1j * b2) * half,
        ]
    )
    phases = np.array(
        [0.0, 0.5 * math.pi, -0.5 * math.pi, 0.5 * math.pi, -0.5 * math.pi]
    )
    return SearchInstance.build(EigenSpectrum(phases, vectors, source_index=0))


def skewed_toy(alpha=0.05):
    # unbalanced weights at unequal phases: nonzero first moment, but mild
    # enough that the source still spreads visibly over both pair vectors
    w1 = 0.45 * (1.0 - alpha**2)
    w2 = 0.55 * (1.0 - alpha**2)
    frame = householder_with_first_row([alpha, math.sqrt(w1), math.sqrt(w2)])
    vectors = frame.astype(np.complex128)
    phases = np.array([0.0, 2.0, -2.6])
    return SearchInstance.build(EigenSpectrum(phases, vectors, source_index=0))


def test_selective_phase_pi_is_target_flip():
    gate = selective_phase(4, 2, math.pi)
    expected = np.diag([1.0, 1.0, -1.0, 1.0]).astype(np.complex128)
    assert np.allclose(gate, expected, atol=1e-15)
    assert unitarity_defect(gate) < 1e-12


def test_selective_phase_rejects_bad_index():
    with pytest.raises(DimensionError):
        selective_phase(4, 4, math.pi)


def test_search_operator_is_diffusion_after_flip():
    inst = double_pair_toy()
    flip = selective_phase(5, 0, math.pi)
    expected = build_diffusion(inst.spectrum) @ flip
    assert np.allclose(search_operator(inst), expected, atol=1e-12)
    assert unitarity_defect(search_operator(inst)) < 1e-10


class TestPrediction:
    def test_double_pair_values_frozen(self):
        # b = sqrt(1.98), rate = 2 alpha / b, q_m = round(pi b / 4 alpha - 1/2)
        pred = predict_spectrum(double_pair_toy())
        assert np.isclose(pred.lambda_plus, 0.1421338109037403, rtol=1e-12)
        assert pred.lambda_minus == -pred.lambda_plus
        assert pred.eta == 0.25 * np.pi
        assert pred.q_m == 11
        assert np.isclose(pred.peak_overlap, 1.0 / math.sqrt(1.98), rtol=1e-12)

    def test_balanced_pair_phases_match_dense(self):
        inst = double_pair_toy()
        pred = predict_spectrum(inst)
        plus, minus, residual = verify_relevant_pair(inst)
        assert abs(plus - pred.lambda_plus) <= 0.05 * abs(pred.lambda_plus)
        assert abs(minus - pred.lambda_minus) <= 0.05 * abs(pred.lambda_minus)
        assert residual <= 0.02

    def test_skewed_pair_phases_match_dense(self):
        inst = skewed_toy()
        pred = predict_spectrum(inst)
        assert inst.lambda1 > 0.1  # genuinely unbalanced
        assert pred.eta < 0.25 * np.pi
        plus, minus, residual = verify_relevant_pair(inst)
        assert abs(plus - pred.lambda_plus) <= 0.05 * abs(pred.lambda_plus)
        assert abs(minus - pred.lambda_minus) <= 0.05 * abs(pred.lambda_minus)
        assert residual <= 0.02

    def test_skewed_product_rule(self):
        # tan(eta) * (1 / tan(eta)) structure: lambda_+ lambda_- = -(2a/b)^2
        inst = skewed_toy()
        pred = predict_spectrum(inst)
        rate = 2.0 * inst.alpha / inst.b_factor
        assert np.isclose(pred.lambda_plus * pred.lambda_minus, -(rate**2), rtol=1e-12)


class TestRunIterations:
    def test_initial_row(self):
        inst = double_pair_toy()
        report = run_iterations(inst, 0)
        assert len(report.records) == 1
        first = report.records[0]
        assert first.q == 0
        assert np.isclose(first.target_probability, inst.alpha**2, atol=1e-15)
        assert np.isclose(first.source_overlap, 1.0, atol=1e-15)
        assert first.oracle_queries == 0
        assert report.peak_q == 0

    def test_matches_dense_matrix_powers(self):
        # oracle: explicit operator applied q times to the source
        inst = double_pair_toy()
        report = run_iterations(inst, 25)
        matrix = search_operator(inst)
        state = inst.spectrum.source_state.copy()
        for rec in report.records:
            assert np.isclose(
                rec.target_probability,
                abs(state[inst.target_index]) ** 2,
                rtol=0.0,
                atol=1e-12,
            )
            state = matrix @ state
        assert 10 <= report.peak_q <= 12

    def test_query_ledger_counts_iterations(self):
        report = run_iterations(double_pair_toy(), 7)
        for rec in report.records:
            assert rec.oracle_queries == rec.q
            assert rec.ds_applications == rec.q

    def test_peak_ignores_initial_row(self):
        # strong source-target overlap: the q = 0 probability already beats
        # early iterations, but the peak must come from q >= 1
        n = 4
        uniform = np.full(n, 0.5, dtype=np.complex128)
        inst = SearchInstance.build(grover_spectrum(n, uniform))
        report = run_iterations(inst, 3)
        assert report.peak_q >= 1

    def test_negative_q_max_rejected(self):
        with pytest.raises(ValueError):
            run_iterations(double_pair_toy(), -1)

    def test_global_phase_invariance(self):
        spec = symmetric_spectrum(16, 6, 0.9, 1.9, alpha=0.05)
        rotated = EigenSpectrum(
            spec.phases.copy(), spec.vectors * np.exp(0.3j), source_index=0
        )
        base = run_iterations(SearchInstance.build(spec), 20)
        turned = run_iterations(SearchInstance.build(rotated), 20)
        for left, right in zip(base.records, turned.records):
            assert np.isclose(
                left.target_probability, right.target_probability, atol=1e-13
            )
            assert np.isclose(left.source_overlap, right.source_overlap, atol=1e-13)


def test_grover_curve_is_exact_rotation():
    # uniform source: probability follows sin^2((2q+1) arcsin alpha) exactly
    n = 64
    uniform = np.full(n, 1.0 / 8.0, dtype=np.complex128)
    inst = SearchInstance.build(grover_spectrum(n, uniform))
    report = run_iterations(inst, 10)
    angle = math.asin(inst.alpha)
    for rec in report.records:
        expected = math.sin((2 * rec.q + 1) * angle) ** 2
        assert np.isclose(rec.target_probability, expected, rtol=0.0, atol=1e-12)


def test_save_run_report_format(tmp_path):
    inst = double_pair_toy()
    report = run_iterations(inst, 4)
    path = tmp_path / "run.csv"
    save_run_report(report, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "q,p_target,s_overlap,oracle_queries,ds_applications"
    assert len(lines) == 6
    row = lines[2].split(",")
    assert row[0] == "1"
    assert np.isclose(float(row[1]), report.records[1].target_probability, rtol=1e-11)
    assert np.isclose(float(row[2]), report.records[1].source_overlap, rtol=1e-11)
    # identical report, identical bytes
    twin = tmp_path / "twin.csv"
    save_run_report(report, twin)
    assert path.read_bytes() == twin.read_bytes()
