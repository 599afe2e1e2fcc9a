"""Phase-estimation boosted diffusion on an ancilla x main joint space.

The ancilla register estimates the diffusion eigenphase, a conditional
operator rewrites the spectrum (good eigenvectors keep a powered phase,
everything else is flipped to -1), and undoing the estimation yields a new
diffusion operator whose b factor stays O(1) no matter how large the main
space b factor is.  All joint operators are matrix free; dense joint
matrices exist only as small-scale verification oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DenseCapError, DimensionError, round_half_up, wrap_phase
from .search import IterationRecord, RunReport, _peak_of
from .spectra import EigenSpectrum, ResonanceError, SearchInstance

JOINT_DENSE_CAP = 1024
JOINT_NORM_ATOL = 1e-12

MAX_ANCILLA_QUBITS = 8


@dataclass
class JointState:
    """State on the ancilla (x) main space, ancilla-major layout.

    ``amplitudes[j * main_dimension + i]`` is the amplitude of ancilla basis
    value j with main basis value i.  Every operator in this module reads
    and writes this layout.
    """

    m: int
    main_dimension: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.m <= MAX_ANCILLA_QUBITS:
            raise ValueError(
                f"ancilla qubit count must lie in [1, {MAX_ANCILLA_QUBITS}], "
                f"got {self.m}"
            )
        expected = 2**self.m * self.main_dimension
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (expected,):
            raise DimensionError(
                f"joint state needs {expected} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > JOINT_NORM_ATOL:
            raise ValueError(f"joint state must be normalized, got norm {norm!r}")

    @classmethod
    def from_product(
        cls, m: int, main_state: np.ndarray, ancilla_index: int = 0
    ) -> "JointState":
        main_state = np.asarray(main_state, dtype=np.complex128)
        n = main_state.shape[0]
        if not 0 <= ancilla_index < 2**m:
            raise ValueError(f"ancilla index {ancilla_index} out of range")
        amplitudes = np.zeros(2**m * n, dtype=np.complex128)
        amplitudes[ancilla_index * n : (ancilla_index + 1) * n] = main_state
        return cls(m=m, main_dimension=n, amplitudes=amplitudes)

    def blocks(self) -> np.ndarray:
        """(2^m, N) view: row j is the main-space block of ancilla value j."""
        return self.amplitudes.reshape(2**self.m, self.main_dimension)

    def copy(self) -> "JointState":
        return JointState(
            m=self.m,
            main_dimension=self.main_dimension,
            amplitudes=self.amplitudes.copy(),
        )


@dataclass(frozen=True)
class BoostedOperator:
    """Bookkeeping for the boosted diffusion at a given ancilla size."""

    m: int
    r: int
    spectrum: EigenSpectrum
    cost_per_application: int

    @classmethod
    def build(cls, spectrum: EigenSpectrum, m: int) -> "BoostedOperator":
        if not 1 <= m <= MAX_ANCILLA_QUBITS:
            raise ValueError(
                f"ancilla qubit count must lie in [1, {MAX_ANCILLA_QUBITS}], got {m}"
            )
        # ledger: 2^m - 1 for the controlled power ladder, 2^m for the
        # conditional block power, 2^m - 1 for undoing the estimation
        return cls(
            m=m, r=2**m, spectrum=spectrum, cost_per_application=3 * 2**m - 2
        )


@dataclass(frozen=True)
class BPrimeBreakdown:
    """Split of the boosted b factor into bad-branch and powered parts."""

    sigma1: float
    sigma2: float
    b_prime: float


def walsh_hadamard(m: int) -> np.ndarray:
    """Dense 2^m Walsh-Hadamard transform (real, symmetric, involutive)."""
    if not 1 <= m <= MAX_ANCILLA_QUBITS:
        raise ValueError(f"m must lie in [1, {MAX_ANCILLA_QUBITS}], got {m}")
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    out = h1
    for _ in range(m - 1):
        out = np.kron(out, h1)
    return out.astype(np.complex128)


def qft(m: int) -> np.ndarray:
    """Fourier transform on 2^m values, exponent -2*pi*i*k*j/2^m.

    The negative exponent makes the ancilla comb produced by the controlled
    powers land at +theta, so the k = 0 amplitude matches pea_amplitude
    with no sign gymnastics.  Only magnitudes at k = 0 matter downstream,
    so nothing algorithmic depends on this choice.
    """
    if not 1 <= m <= MAX_ANCILLA_QUBITS:
        raise ValueError(f"m must lie in [1, {MAX_ANCILLA_QUBITS}], got {m}")
    size = 2**m
    grid = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(grid, grid) / size) / math.sqrt(size)


def _check_layout(spec: EigenSpectrum, m: int, state: JointState) -> None:
    if state.m != m:
        raise DimensionError(f"state has {state.m} ancilla qubits, expected {m}")
    if state.main_dimension != spec.dimension:
        raise DimensionError(
            f"state main dimension {state.main_dimension} does not match "
            f"spectrum dimension {spec.dimension}"
        )


def _apply_ancilla(matrix: np.ndarray, state: JointState) -> JointState:
    blocks = matrix @ state.blocks()
    return JointState(
        m=state.m, main_dimension=state.main_dimension, amplitudes=blocks.ravel()
    )


def _apply_block_powers(
    spec: EigenSpectrum, state: JointState, exponents: np.ndarray
) -> JointState:
    """Apply Ds^exponents[j] to ancilla block j, working in the eigenbasis."""
    coeff = state.blocks() @ spec.vectors.conj()
    coeff *= np.exp(1j * np.outer(exponents, spec.phases))
    blocks = coeff @ spec.vectors.T
    return JointState(
        m=state.m, main_dimension=state.main_dimension, amplitudes=blocks.ravel()
    )


def controlled_powers(spec: EigenSpectrum, m: int, state: JointState) -> JointState:
    """Ancilla value j applies the j-th power of the diffusion operator.

    Simulation cost is two basis changes; the circuit cost ledger charges
    2^m - 1 diffusion applications (binary power ladder), independent of
    this shortcut.
    """
    _check_layout(spec, m, state)
    return _apply_block_powers(spec, state, np.arange(2**m))


def pea_operator(spec: EigenSpectrum, m: int, state: JointState) -> JointState:
    """Phase estimation: Walsh-Hadamard, controlled powers, then Fourier."""
    _check_layout(spec, m, state)
    state = _apply_ancilla(walsh_hadamard(m), state)
    state = _apply_block_powers(spec, state, np.arange(2**m))
    return _apply_ancilla(qft(m), state)


def pea_adjoint(spec: EigenSpectrum, m: int, state: JointState) -> JointState:
    """Inverse of pea_operator (undoes the estimation)."""
    _check_layout(spec, m, state)
    state = _apply_ancilla(qft(m).conj().T, state)
    state = _apply_block_powers(spec, state, -np.arange(2**m))
    return _apply_ancilla(walsh_hadamard(m), state)


def pea_amplitude(theta, m: int, k: int):
    """Magnitude of the ancilla-k amplitude after estimating phase theta.

    Evaluates |sin(x) / (2^m sin(x / 2^m))| at x = pi*k - 2^(m-1)*theta,
    with the removable singularity at x = 0 taken as its limit 1.  Accepts
    a scalar or an array of phases in (-pi, pi].
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    theta = np.asarray(theta, dtype=np.float64)
    if np.any(theta <= -np.pi) or np.any(theta > np.pi):
        raise ValueError("theta must lie in (-pi, pi]")
    x = np.pi * k - 2.0 ** (m - 1) * theta
    denominator = 2**m * np.sin(x / 2**m)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.abs(np.sin(x) / denominator)
    result = np.where(denominator == 0.0, 1.0, ratio)
    return float(result) if result.ndim == 0 else result


def c_operator(spec: EigenSpectrum, m: int, state: JointState) -> JointState:
    """Conditional rewrite: block 0 gets Ds^(2^m), all other blocks flip sign.

    Circuit cost ledger: 2^m diffusion applications.
    """
    _check_layout(spec, m, state)
    blocks = state.blocks().copy()
    coeff = blocks[0] @ spec.vectors.conj()
    coeff *= np.exp(1j * 2**m * spec.phases)
    blocks[0] = coeff @ spec.vectors.T
    blocks[1:] = -blocks[1:]
    return JointState(
        m=state.m, main_dimension=state.main_dimension, amplitudes=blocks.ravel()
    )


def boosted_diffusion(spec: EigenSpectrum, m: int, state: JointState) -> JointState:
    """The boosted diffusion: undo estimation, condition, re-estimate.

    Fixes the joint source; eigenvectors built from main eigenvector l keep
    phase 2^m * theta_l, the rest of the space sits at phase pi.  Cost per
    application: 3 * 2^m - 2 diffusion applications.
    """
    state = pea_adjoint(spec, m, state)
    state = c_operator(spec, m, state)
    return pea_operator(spec, m, state)


def controlled_oracle(
    n: int, target_index: int, m: int, state: JointState
) -> JointState:
    """Flip the amplitude of |ancilla 0, target>; exactly one oracle query."""
    if state.main_dimension != n:
        raise DimensionError(
            f"state main dimension {state.main_dimension} does not match {n}"
        )
    if not 0 <= target_index < n:
        raise DimensionError(f"target_index {target_index} out of range for {n}")
    out = state.copy()
    out.amplitudes[target_index] = -out.amplitudes[target_index]
    return out


def b_prime(inst: SearchInstance, m: int) -> BPrimeBreakdown:
    """Analytic b factor of the boosted diffusion, split into its two parts.

    sigma1 is the target weight stranded on the flipped (-1) branch, one
    minus the weight surviving phase estimation; it never exceeds 1.
    sigma2 is the powered-branch sum, which telescopes exactly to
    (b^2) / 4^m because the estimation amplitude's numerator cancels the
    powered phase's sine.
    """
    if not 1 <= m <= MAX_ANCILLA_QUBITS:
        raise ValueError(f"m must lie in [1, {MAX_ANCILLA_QUBITS}], got {m}")
    spectrum = inst.spectrum
    weights = np.abs(spectrum.vectors[inst.target_index, :]) ** 2
    survival = np.minimum(pea_amplitude(spectrum.phases, m, 0) ** 2, 1.0)
    sigma1 = float(np.sum(weights * (1.0 - survival)))
    sigma2 = inst.b_factor**2 / 4**m
    return BPrimeBreakdown(
        sigma1=sigma1, sigma2=sigma2, b_prime=math.sqrt(sigma1 + sigma2)
    )


def boosted_lambda1(inst: SearchInstance, m: int) -> float:
    """First cotangent moment of the boosted diffusion at the joint target.

    The flipped branch sits at phase pi where the cotangent vanishes, so
    only the powered branch contributes.  Exact +/- phase pairs with
    matched weights make this vanish to rounding.
    """
    if not 1 <= m <= MAX_ANCILLA_QUBITS:
        raise ValueError(f"m must lie in [1, {MAX_ANCILLA_QUBITS}], got {m}")
    phases = inst.nonsource_phases()
    weights = inst.nonsource_weights()
    live = weights > 0.0
    phases, weights = phases[live], weights[live]
    boosted = wrap_phase(2**m * phases)
    if np.any(boosted == 0.0):
        raise ResonanceError(
            f"power 2**{m} drives a weighted phase onto a multiple of 2*pi"
        )
    survival = np.minimum(pea_amplitude(phases, m, 0) ** 2, 1.0)
    half = 0.5 * boosted
    return float(np.sum(weights * survival * np.cos(half) / np.sin(half)))


def default_ancilla_count(b_factor: float) -> int:
    """Ancilla size matching the main-space b factor: round(log2 b), clamped."""
    if b_factor <= 0.0:
        raise ValueError(f"b_factor must be positive, got {b_factor}")
    return max(1, min(MAX_ANCILLA_QUBITS, round_half_up(math.log2(b_factor))))


def boosted_search_run(
    inst: SearchInstance, m: int | None = None, q_max: int | None = None
) -> RunReport:
    """Iterate controlled oracle + boosted diffusion from the joint source.

    ``m`` defaults to round(log2 b); ``q_max`` defaults to twice the
    predicted peak pi * b_prime / (4 alpha), so the scan covers the first
    probability crest with margin but stops before later crests that
    leakage can push marginally higher.  Row q records the joint target
    probability |<ancilla 0, target | state>|^2, q oracle queries, and
    q * (3 * 2^m - 2) diffusion applications.
    """
    if m is None:
        m = default_ancilla_count(inst.b_factor)
    if q_max is None:
        boost = b_prime(inst, m).b_prime
        q_max = max(1, round_half_up(math.pi * boost / (2.0 * inst.alpha)))
    if q_max < 0:
        raise ValueError(f"q_max must be nonnegative, got {q_max}")
    operator = BoostedOperator.build(inst.spectrum, m)
    spectrum = inst.spectrum
    n = spectrum.dimension
    source = spectrum.source_state
    target = inst.target_index

    state = JointState.from_product(m, source)
    records = [_boosted_record(0, state, source, target, operator)]
    for q in range(1, q_max + 1):
        state = controlled_oracle(n, target, m, state)
        state = boosted_diffusion(spectrum, m, state)
        records.append(_boosted_record(q, state, source, target, operator))

    peak_q, peak_probability = _peak_of(records)
    return RunReport(
        records=tuple(records), peak_q=peak_q, peak_probability=peak_probability
    )


def _boosted_record(q, state, source, target, operator):
    block0 = state.blocks()[0]
    return IterationRecord(
        q=q,
        target_probability=float(np.abs(block0[target]) ** 2),
        source_overlap=float(np.abs(np.vdot(source, block0))),
        oracle_queries=q,
        ds_applications=q * operator.cost_per_application,
    )


def dense_boosted_matrix(spec: EigenSpectrum, m: int) -> np.ndarray:
    """Materialize the boosted diffusion column by column (small scale only)."""
    joint_dim = 2**m * spec.dimension
    if joint_dim > JOINT_DENSE_CAP:
        raise DenseCapError(
            f"joint dimension {joint_dim} exceeds dense joint cap {JOINT_DENSE_CAP}"
        )
    matrix = np.zeros((joint_dim, joint_dim), dtype=np.complex128)
    for col in range(joint_dim):
        amplitudes = np.zeros(joint_dim, dtype=np.complex128)
        amplitudes[col] = 1.0
        state = JointState(m=m, main_dimension=spec.dimension, amplitudes=amplitudes)
        matrix[:, col] = boosted_diffusion(spec, m, state).amplitudes
    return matrix


def dense_b_prime_check(inst: SearchInstance, m: int) -> float:
    """Recompute the boosted b factor from the dense joint eigensystem.

    The near-zero-phase eigenspace is treated as one block: after removing
    the joint source's alpha^2, no target weight may remain there (any
    leftover would be a genuine divergence).  All other eigenvectors
    contribute weight over sin^2(phase / 2).
    """
    from .linalg import unitary_eigensystem

    matrix = dense_boosted_matrix(inst.spectrum, m)
    eig = unitary_eigensystem(matrix)
    # joint index of |ancilla 0, target> is just the main target index
    weights = np.abs(eig.vectors[inst.target_index, :]) ** 2
    zero_block = np.abs(eig.phases) < 1e-9
    leftover = float(np.sum(weights[zero_block])) - inst.alpha**2
    if abs(leftover) > 1e-8:
        raise RuntimeError(
            "zero-phase eigenspace holds unexplained target weight "
            f"{leftover:.3e}; boosted b factor is not finite here"
        )
    live = ~zero_block
    total = float(
        np.sum(weights[live] / np.sin(0.5 * eig.phases[live]) ** 2)
    )
    return math.sqrt(total)


def save_boosted_report(report: RunReport, m: int, path) -> None:
    """CSV per iteration: q, p_target_joint, oracle_queries, cost, m, r."""
    r = 2**m
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("q,p_target_joint,oracle_queries,ds_applications,m,r\n")
        for rec in report.records:
            fh.write(
                f"{rec.q},{rec.target_probability:.12g},{rec.oracle_queries},"
                f"{rec.ds_applications},{m},{r}\n"
            )
