"""Search iteration driven by an arbitrary diffusion operator.

One iteration flips the sign of the target amplitude and then applies the
diffusion operator.  Starting from the diffusion fixed point, the dynamics
live almost entirely in a two dimensional rotating subspace whose rotation
rate, and therefore the peak iteration count and peak success probability,
follow from the cotangent moments cached on the instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DimensionError, round_half_up
from .spectra import SearchInstance, build_diffusion


class RelevantPairError(RuntimeError):
    """Could not isolate the two eigenvectors carrying the source."""


@dataclass(frozen=True)
class PredictedSpectrum:
    """Closed-form prediction for the rotating pair of the search operator.

    ``lambda_plus``/``lambda_minus`` are the predicted eigenphases of the
    two eigenvectors overlapping the source, ``eta`` the mixing angle,
    ``q_m`` the iteration count maximizing target probability, and
    ``peak_overlap`` the predicted peak target amplitude magnitude.
    """

    lambda_plus: float
    lambda_minus: float
    eta: float
    q_m: int
    peak_overlap: float


@dataclass(frozen=True)
class IterationRecord:
    q: int
    target_probability: float
    source_overlap: float
    oracle_queries: int
    ds_applications: int


@dataclass(frozen=True)
class RunReport:
    """Trace of an instrumented run plus its peak summary."""

    records: tuple[IterationRecord, ...]
    peak_q: int
    peak_probability: float


def selective_phase(dimension: int, target_index: int, phi: float) -> np.ndarray:
    """Diagonal unitary applying e^{i phi} to one basis state."""
    if not 0 <= target_index < dimension:
        raise DimensionError(
            f"target_index {target_index} out of range for dimension {dimension}"
        )
    diag = np.ones(dimension, dtype=np.complex128)
    diag[target_index] = np.exp(1j * phi)
    return np.diag(diag)


def search_operator(inst: SearchInstance) -> np.ndarray:
    """Dense search operator: target sign flip followed by diffusion."""
    matrix = build_diffusion(inst.spectrum)
    matrix[:, inst.target_index] = -matrix[:, inst.target_index]
    return matrix


def predict_spectrum(inst: SearchInstance) -> PredictedSpectrum:
    """Rotating-pair eigenphases, mixing angle, and peak location.

    The two phases are +/-(2 alpha / b) scaled by tan(eta)^{+/-1}, where
    cot(2 eta) is the first moment over 2*alpha*b.  A vanishing first
    moment gives eta = pi/4 and the symmetric pair exactly.
    """
    alpha = inst.alpha
    b = inst.b_factor
    rate = 2.0 * alpha / b
    skew = inst.lambda1 / (2.0 * alpha * b)
    if abs(skew) < 1e-12:
        eta = 0.25 * np.pi
        lam_plus, lam_minus = rate, -rate
    else:
        eta = 0.5 * math.atan2(1.0, skew)  # arccot on (0, pi)
        tan_eta = math.tan(eta)
        lam_plus = rate * tan_eta
        lam_minus = -rate / tan_eta
    q_m = max(1, round_half_up(np.pi * b / (4.0 * alpha) - 0.5))
    return PredictedSpectrum(
        lambda_plus=lam_plus,
        lambda_minus=lam_minus,
        eta=eta,
        q_m=q_m,
        peak_overlap=1.0 / b,
    )


def run_iterations(inst: SearchInstance, q_max: int) -> RunReport:
    """Iterate the search operator from the source, recording every step.

    Row q holds the exact target probability and source overlap magnitude
    after q iterations; q = 0 is the initial state.  The peak fields ignore
    the q = 0 row.  Applications are matrix free: the diffusion acts in its
    eigenbasis, so cost scales with N^2 per iteration rather than N^3 once.
    """
    if q_max < 0:
        raise ValueError(f"q_max must be nonnegative, got {q_max}")
    spectrum = inst.spectrum
    vectors = spectrum.vectors
    eigenphase = np.exp(1j * spectrum.phases)
    source = spectrum.source_state
    target = inst.target_index

    state = source.astype(np.complex128).copy()
    records = [_record(0, state, source, target, ds_per_step=1)]
    for q in range(1, q_max + 1):
        state[target] = -state[target]
        coeff = vectors.conj().T @ state
        coeff *= eigenphase
        state = vectors @ coeff
        records.append(_record(q, state, source, target, ds_per_step=1))

    peak_q, peak_probability = _peak_of(records)
    return RunReport(
        records=tuple(records), peak_q=peak_q, peak_probability=peak_probability
    )


def _record(q, state, source, target, ds_per_step):
    return IterationRecord(
        q=q,
        target_probability=float(np.abs(state[target]) ** 2),
        source_overlap=float(np.abs(np.vdot(source, state))),
        oracle_queries=q,
        ds_applications=q * ds_per_step,
    )


def _peak_of(records) -> tuple[int, float]:
    if len(records) == 1:
        return records[0].q, records[0].target_probability
    probs = np.array([rec.target_probability for rec in records[1:]])
    best = int(np.argmax(probs))
    return records[1 + best].q, float(probs[best])


def verify_relevant_pair(inst: SearchInstance) -> tuple[float, float, float]:
    """Measure the rotating pair from the dense search operator.

    Returns (phase_plus, phase_minus, residual) where the phases belong to
    the two eigenvectors with the largest squared source overlap and the
    residual is the source weight leaking outside that pair.
    """
    from .linalg import unitary_eigensystem

    matrix = search_operator(inst)
    eig = unitary_eigensystem(matrix)
    overlaps = np.abs(eig.vectors.conj().T @ inst.spectrum.source_state) ** 2
    order = np.argsort(overlaps)[::-1]
    first, second = int(order[0]), int(order[1])
    if overlaps[second] <= 0.01:
        raise RelevantPairError(
            "source concentrates on fewer than two eigenvectors: "
            f"second overlap {overlaps[second]:.3e} is below 0.01"
        )
    pair = sorted((first, second), key=lambda k: eig.phases[k], reverse=True)
    residual = float(1.0 - overlaps[first] - overlaps[second])
    return float(eig.phases[pair[0]]), float(eig.phases[pair[1]]), residual


def save_run_report(report: RunReport, path) -> None:
    """Write one CSV row per iteration: q, p_target, s_overlap, queries, cost."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("q,p_target,s_overlap,oracle_queries,ds_applications\n")
        for rec in report.records:
            fh.write(
                f"{rec.q},{rec.target_probability:.12g},"
                f"{rec.source_overlap:.12g},{rec.oracle_queries},"
                f"{rec.ds_applications}\n"
            )
