"""Diffusion spectra and search instances.

A diffusion operator is specified by its eigendecomposition: one eigenvector
(the source) with phase exactly zero, and the remaining eigenvectors with
phases bounded away from zero.  A search instance pairs such a spectrum with
a computational-basis target and caches the overlap moments that drive every
downstream prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .linalg import DENSE_CAP, DenseCapError, wrap_phase

ORTHONORMALITY_ATOL = 1e-10
FULL_VALIDATION_MAX = 1024
SAMPLED_VALIDATION_COLUMNS = 128

# scaling_family targets b = SCALING_COEFF * sqrt(ln N)
SCALING_COEFF = 2.0


class SpectrumValidationError(ValueError):
    """The eigenspectrum violates a structural invariant."""


class ResonanceError(ValueError):
    """A powered phase lands exactly on a multiple of 2*pi."""


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigendecomposition defining a diffusion operator.

    Attributes
    ----------
    phases : numpy.ndarray
        Shape (N,), eigenphases in (-pi, pi].  The source phase is exactly 0.
    vectors : numpy.ndarray
        Shape (N, N); column k is the unit eigenvector for ``phases[k]``.
    source_index : int
        Column of the fixed-point eigenvector.
    """

    phases: np.ndarray
    vectors: np.ndarray
    source_index: int

    def __post_init__(self):
        phases = np.array(self.phases, dtype=np.float64)
        vectors = np.array(self.vectors, dtype=np.complex128)
        phases.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "vectors", vectors)
        _validate_spectrum(self)

    @property
    def dimension(self) -> int:
        return int(self.phases.shape[0])

    @property
    def theta_min(self) -> float:
        """Smallest nonsource |phase|; the gap protecting the fixed point."""
        mask = np.arange(self.dimension) != self.source_index
        return float(np.min(np.abs(self.phases[mask])))

    @property
    def source_state(self) -> np.ndarray:
        return self.vectors[:, self.source_index]


def _validate_spectrum(spec: EigenSpectrum) -> None:
    n = spec.phases.shape[0]
    if spec.vectors.shape != (n, n):
        raise SpectrumValidationError(
            f"eigenbasis shape {spec.vectors.shape} does not match {n} phases"
        )
    if not 0 <= spec.source_index < n:
        raise SpectrumValidationError(
            f"source_index {spec.source_index} out of range for dimension {n}"
        )
    if np.any(spec.phases <= -np.pi) or np.any(spec.phases > np.pi):
        raise SpectrumValidationError("phases must lie in (-pi, pi]")
    if spec.phases[spec.source_index] != 0.0:
        raise SpectrumValidationError(
            f"source phase must be exactly 0, got {spec.phases[spec.source_index]!r}"
        )
    mask = np.arange(n) != spec.source_index
    if n > 1 and np.min(np.abs(spec.phases[mask])) == 0.0:
        offender = int(np.where(mask & (spec.phases == 0.0))[0][0])
        raise SpectrumValidationError(
            f"eigenvector {offender} shares phase 0 with the source; "
            "the fixed point must be non-degenerate"
        )
    _validate_eigenbasis(spec.vectors)


def _validate_eigenbasis(vectors: np.ndarray) -> None:
    n = vectors.shape[0]
    if n <= FULL_VALIDATION_MAX:
        gram = vectors.conj().T @ vectors
        defect = np.abs(gram - np.eye(n))
        worst = float(defect.max())
        if worst > ORTHONORMALITY_ATOL:
            i, j = np.unravel_index(int(defect.argmax()), defect.shape)
            raise SpectrumValidationError(
                f"eigenbasis not orthonormal: columns ({i}, {j}) have "
                f"gram defect {worst:.3e}"
            )
        return
    # large basis: exact norms plus a sampled gram block
    norms = np.abs(np.einsum("ij,ij->j", vectors.conj(), vectors).real - 1.0)
    if norms.max() > ORTHONORMALITY_ATOL:
        j = int(norms.argmax())
        raise SpectrumValidationError(
            f"eigenbasis not orthonormal: column ({j}, {j}) has "
            f"norm defect {norms.max():.3e}"
        )
    count = min(SAMPLED_VALIDATION_COLUMNS, n)
    idx = np.unique(np.linspace(0, n - 1, count).astype(int))
    sub = vectors[:, idx]
    gram = sub.conj().T @ sub
    defect = np.abs(gram - np.eye(idx.size))
    worst = float(defect.max())
    if worst > ORTHONORMALITY_ATOL:
        a, b = np.unravel_index(int(defect.argmax()), defect.shape)
        raise SpectrumValidationError(
            f"eigenbasis not orthonormal: columns ({int(idx[a])}, {int(idx[b])}) "
            f"have gram defect {worst:.3e}"
        )


def build_diffusion(spec: EigenSpectrum) -> np.ndarray:
    """Dense diffusion matrix with exactly the given eigensystem."""
    if spec.dimension > DENSE_CAP:
        raise DenseCapError(
            f"dimension {spec.dimension} exceeds dense cap {DENSE_CAP}"
        )
    return (spec.vectors * np.exp(1j * spec.phases)) @ spec.vectors.conj().T


@dataclass(frozen=True)
class SearchInstance:
    """A diffusion spectrum paired with a computational-basis target.

    ``alpha`` is the source-target overlap magnitude; ``lambda1``/``lambda2``
    are the first two cotangent moments of the nonsource phases weighted by
    target overlap; ``b_factor`` is the inverse-sine-weighted norm that sets
    both the peak success probability (~1/b_factor**2) and the iteration
    count of the search.
    """

    spectrum: EigenSpectrum
    target_index: int
    alpha: float
    lambda1: float
    lambda2: float
    b_factor: float

    @classmethod
    def build(cls, spectrum: EigenSpectrum, target_index: int = 0) -> "SearchInstance":
        n = spectrum.dimension
        if not 0 <= target_index < n:
            raise ValueError(f"target_index {target_index} out of range for {n}")
        alpha = float(np.abs(spectrum.vectors[target_index, spectrum.source_index]))
        if not 0.0 < alpha < 1.0:
            raise ValueError(
                f"source-target overlap must lie strictly in (0, 1), got {alpha}"
            )
        lam1 = _moment_sum(spectrum, target_index, 1)
        lam2 = _moment_sum(spectrum, target_index, 2)
        b2 = _powered_b_squared(spectrum, target_index, 1)
        # exact identity: b^2 = 1 + lambda2 - alpha^2 up to basis rounding
        expected = 1.0 + lam2 - alpha**2
        if abs(b2 - expected) > 1e-9 * max(1.0, abs(expected)):
            raise SpectrumValidationError(
                f"b_factor inconsistency: direct {b2:.12e} vs "
                f"moment identity {expected:.12e}"
            )
        return cls(
            spectrum=spectrum,
            target_index=target_index,
            alpha=alpha,
            lambda1=lam1,
            lambda2=lam2,
            b_factor=math.sqrt(b2),
        )

    @property
    def dimension(self) -> int:
        return self.spectrum.dimension

    @property
    def theta_min(self) -> float:
        return self.spectrum.theta_min

    def target_state(self) -> np.ndarray:
        state = np.zeros(self.dimension, dtype=np.complex128)
        state[self.target_index] = 1.0
        return state

    def nonsource_phases(self) -> np.ndarray:
        mask = np.arange(self.dimension) != self.spectrum.source_index
        return self.spectrum.phases[mask].copy()

    def nonsource_weights(self) -> np.ndarray:
        """Squared target overlaps of the nonsource eigenvectors, in order."""
        mask = np.arange(self.dimension) != self.spectrum.source_index
        amps = self.spectrum.vectors[self.target_index, mask]
        return np.abs(amps) ** 2


def _nonsource_arrays(spec: EigenSpectrum, target_index: int):
    mask = np.arange(spec.dimension) != spec.source_index
    phases = spec.phases[mask]
    weights = np.abs(spec.vectors[target_index, mask]) ** 2
    return phases, weights, np.where(mask)[0]


def _moment_sum(spec: EigenSpectrum, target_index: int, p: int) -> float:
    phases, weights, _ = _nonsource_arrays(spec, target_index)
    half = 0.5 * phases
    cot = np.cos(half) / np.sin(half)
    return float(np.sum(weights * cot**p))


def _powered_b_squared(spec: EigenSpectrum, target_index: int, r: int) -> float:
    phases, weights, labels = _nonsource_arrays(spec, target_index)
    live = weights > 0.0
    resonant = live & (np.remainder(r * phases, 2.0 * np.pi) == 0.0)
    if np.any(resonant):
        offender = int(labels[resonant][0])
        raise ResonanceError(
            f"power {r} drives eigenvector {offender} "
            f"(phase {phases[resonant][0]!r}) onto a multiple of 2*pi"
        )
    sines = np.sin(0.5 * r * phases[live])
    return float(np.sum(weights[live] / sines**2))


def moments(inst: SearchInstance, p: int) -> float:
    """p-th cotangent moment of the nonsource phases, target weighted."""
    if p not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {p}")
    return _moment_sum(inst.spectrum, inst.target_index, p)


def b_factor_direct(inst: SearchInstance) -> float:
    """Inverse-sine form of the b factor; canonical everywhere downstream."""
    return math.sqrt(_powered_b_squared(inst.spectrum, inst.target_index, 1))


def naive_power_b(inst: SearchInstance, r: int) -> float:
    """b factor of the r-th power of the diffusion operator.

    Each nonsource phase is multiplied by r before the inverse-sine sum, so
    a phase near a multiple of 2*pi/r makes the result blow up.  Exact
    resonance raises ResonanceError naming the offending eigenvector;
    eigenvectors with exactly zero target weight cannot contribute and are
    exempt from the resonance scan.
    """
    if r < 1:
        raise ValueError(f"power must be a positive integer, got {r}")
    return math.sqrt(_powered_b_squared(inst.spectrum, inst.target_index, r))


def _complete_orthonormal(source: np.ndarray) -> np.ndarray:
    """Unitary matrix whose column 0 is ``source`` (deterministic)."""
    n = source.shape[0]
    k = int(np.argmax(np.abs(source)))
    pivot = source[k]
    phase = pivot / abs(pivot)
    v = source.astype(np.complex128).copy()
    v[k] -= phase
    vv = float(np.real(np.vdot(v, v)))
    if vv < 1e-30:
        basis = np.eye(n, dtype=np.complex128)
        basis[:, k] = source
    else:
        basis = np.eye(n, dtype=np.complex128) - (2.0 / vv) * np.outer(v, v.conj())
        basis[:, k] = source  # replace the phase-rotated copy exactly
    order = [k] + [j for j in range(n) if j != k]
    return basis[:, order]


def grover_spectrum(n: int, source: np.ndarray) -> EigenSpectrum:
    """Spectrum of the familiar reflection about ``source``.

    The source keeps phase 0 and every orthogonal direction gets phase pi,
    which makes both cotangent moments vanish and b_factor = sqrt(1-alpha^2).
    """
    source = np.asarray(source, dtype=np.complex128)
    if source.ndim != 1 or source.shape[0] != n:
        raise ValueError(f"source must be a vector of length {n}")
    norm = float(np.linalg.norm(source))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"source must be normalized, got norm {norm!r}")
    vectors = _complete_orthonormal(source)
    phases = np.full(n, np.pi)
    phases[0] = 0.0
    return EigenSpectrum(phases=phases, vectors=vectors, source_index=0)


def _paired_spectrum(
    n: int,
    seed: int,
    alpha: float,
    pair_phases: np.ndarray,
    lone_phase: float,
) -> EigenSpectrum:
    """Assemble a spectrum with exact +/- phase pairs and matched weights.

    The target is basis state 0.  Construction guarantees, bit for bit, that
    the two members of each pair carry equal target weight (so the first
    cotangent moment cancels term by term) and that the lone leftover
    eigenvector carries exactly zero target weight.
    """
    if n % 2 != 0 or n < 4:
        raise ValueError(f"dimension must be even and at least 4, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly in (0, 1), got {alpha}")
    pairs = (n - 2) // 2
    if pair_phases.shape != (pairs,):
        raise ValueError(f"expected {pairs} pair phases, got {pair_phases.shape}")

    rng = np.random.default_rng(seed)
    beta = math.sqrt(1.0 - alpha**2)

    # unit vector in the coordinates orthogonal to the target
    w_sub = rng.standard_normal(n - 1)
    w_sub /= np.linalg.norm(w_sub)
    source = np.concatenate(([alpha], beta * w_sub))

    # complement frame: column 0 holds the whole residual target weight,
    # the rest have exactly zero target component by construction
    block = np.column_stack([w_sub, rng.standard_normal((n - 1, n - 2))])
    q_sub, r_sub = np.linalg.qr(block)
    q_sub = q_sub * np.sign(np.diag(r_sub))
    frame = np.zeros((n, n - 1))
    frame[0, 0] = beta
    frame[1:, 0] = -alpha * w_sub
    frame[1:, 1:] = q_sub[:, 1:]

    # rotate the frame so the target amplitudes follow a drawn profile;
    # the lone slot is pinned to exactly zero weight
    profile = np.concatenate([rng.uniform(0.5, 1.5, size=n - 2), [0.0]])
    unit = profile / np.linalg.norm(profile)
    v = -unit
    v[0] += 1.0
    vv = float(v @ v)
    if vv < 1e-30:
        rotation = np.eye(n - 1)
    else:
        rotation = np.eye(n - 1) - (2.0 / vv) * np.outer(v, v)
    columns = frame @ rotation

    vectors = np.zeros((n, n), dtype=np.complex128)
    phases = np.zeros(n)
    vectors[:, 0] = source
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for j in range(pairs):
        a = columns[:, 2 * j]
        b = columns[:, 2 * j + 1]
        vectors[:, 1 + 2 * j] = (a + 1j * b) * inv_sqrt2
        vectors[:, 2 + 2 * j] = (a - 1j * b) * inv_sqrt2
        phases[1 + 2 * j] = pair_phases[j]
        phases[2 + 2 * j] = -pair_phases[j]
    vectors[:, n - 1] = columns[:, n - 2]
    phases[n - 1] = lone_phase
    return EigenSpectrum(phases=phases, vectors=vectors, source_index=0)


def symmetric_spectrum(
    n: int,
    seed: int,
    theta_min: float,
    theta_max: float,
    alpha: float | None = None,
    b_target: float | None = None,
) -> EigenSpectrum:
    """Random spectrum with exact +/- phase pairs (first moment is zero).

    Pair phases are drawn uniformly from [theta_min, theta_max].  If
    ``b_target`` is given, all pair phases are rescaled by one common factor
    so the assembled instance's b factor lands on the target.  ``alpha``
    defaults to 1/sqrt(n); the target is basis state 0.
    """
    if not 0.0 < theta_min <= theta_max <= np.pi:
        raise ValueError(
            f"need 0 < theta_min <= theta_max <= pi, got [{theta_min}, {theta_max}]"
        )
    if alpha is None:
        alpha = 1.0 / math.sqrt(n)
    pairs = (n - 2) // 2
    rng = np.random.default_rng(seed)
    rng = np.random.default_rng(rng.integers(2**63))  # phase stream decoupled
    drawn = rng.uniform(theta_min, theta_max, size=pairs)
    if b_target is not None:
        drawn = _rescale_for_b_target(drawn, n, seed, alpha, b_target)
    return _paired_spectrum(n, seed, alpha, drawn, lone_phase=np.pi)


def _rescale_for_b_target(
    drawn: np.ndarray, n: int, seed: int, alpha: float, b_target: float
) -> np.ndarray:
    """One common scale factor sending the pair phases onto a requested b."""
    if not np.isfinite(b_target) or b_target <= 0.0:
        raise ValueError(f"b_target must be positive and finite, got {b_target}")
    # pair weights depend only on the profile draw, replayed here
    probe = _paired_spectrum(n, seed, alpha, drawn, lone_phase=np.pi)
    member = np.abs(probe.vectors[0, 1 : n - 1]) ** 2
    pair_weights = member[0::2] + member[1::2]

    def b_squared(scale: float) -> float:
        return float(np.sum(pair_weights / np.sin(0.5 * scale * drawn) ** 2))

    hi = np.pi / float(np.max(drawn))
    target2 = b_target**2
    if b_squared(hi) >= target2:
        raise ValueError(
            f"b_target {b_target} is below the floor {math.sqrt(b_squared(hi)):.6g} "
            "reachable by stretching these phases"
        )
    lo = hi
    for _ in range(200):
        lo *= 0.5
        if b_squared(lo) >= target2:
            break
    else:  # pragma: no cover - 2**-200 scale never insufficient
        raise ValueError(f"could not bracket b_target {b_target}")
    scale = scipy.optimize.brentq(
        lambda c: b_squared(c) - target2, lo, hi, xtol=1e-15, rtol=1e-15
    )
    return drawn * scale


def resonant_spectrum(
    n: int, m: int, epsilon: float, seed: int, alpha: float | None = None
) -> EigenSpectrum:
    """Spectrum whose phases cluster just off the 2*pi/2**m resonance.

    Powering the diffusion operator by r = 2**m drives every pair phase to
    within r*epsilon of a full turn, so the naively powered b factor blows
    up like 1/epsilon while the r = 1 value stays moderate.  Detunings are
    spread over [0.1, 1.0]*epsilon so the blow-up ratio scales cleanly.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if alpha is None:
        alpha = 1.0 / math.sqrt(n)
    base = 2.0 * np.pi / 2**m
    pairs = (n - 2) // 2
    detunings = epsilon * np.linspace(0.1, 1.0, pairs)
    pair_phases = np.abs(wrap_phase(base + detunings))
    lone = float(np.abs(wrap_phase(base + epsilon)))
    return _paired_spectrum(n, seed, alpha, pair_phases, lone_phase=lone)


def scaling_family(log2n: int, seed: int) -> EigenSpectrum:
    """Symmetric spectrum tuned so b grows like sqrt(ln N) with dimension."""
    if not 6 <= log2n <= 12:
        raise ValueError(f"log2n must lie in [6, 12], got {log2n}")
    n = 2**log2n
    b_target = SCALING_COEFF * math.sqrt(math.log(n))
    return symmetric_spectrum(n, seed, 0.5, 1.5, b_target=b_target)


def save_spectrum(spec: EigenSpectrum, path) -> None:
    """Write a spectrum as flat text, lossless for float64 round trips.

    Line 1 holds ``N source_index``; each following line holds one
    eigenvector as ``phase re_0 im_0 ... re_{N-1} im_{N-1}`` with every
    number printed to 17 significant digits.
    """
    n = spec.dimension
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{n} {spec.source_index}\n")
        for k in range(n):
            column = spec.vectors[:, k]
            parts = [f"{spec.phases[k]:.17g}"]
            for amp in column:
                parts.append(f"{amp.real:.17g}")
                parts.append(f"{amp.imag:.17g}")
            fh.write(" ".join(parts))
            fh.write("\n")


def load_spectrum(path) -> EigenSpectrum:
    """Read a spectrum written by save_spectrum and revalidate it."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [line for line in (raw.strip() for raw in fh) if line]
    if not lines:
        raise SpectrumValidationError(f"{path}: empty spectrum file")
    head = lines[0].split()
    if len(head) != 2:
        raise SpectrumValidationError(f"{path}: header must be 'N source_index'")
    try:
        n, source_index = int(head[0]), int(head[1])
    except ValueError as exc:
        raise SpectrumValidationError(f"{path}: bad header: {exc}") from exc
    if len(lines) - 1 != n:
        raise SpectrumValidationError(
            f"{path}: expected {n} eigenvector lines, found {len(lines) - 1}"
        )
    phases = np.zeros(n)
    vectors = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        fields = lines[1 + k].split()
        if len(fields) != 1 + 2 * n:
            raise SpectrumValidationError(
                f"{path}: line {k + 2} has {len(fields)} fields, "
                f"expected {1 + 2 * n}"
            )
        try:
            values = np.array([float(x) for x in fields])
        except ValueError as exc:
            raise SpectrumValidationError(
                f"{path}: line {k + 2}: {exc}"
            ) from exc
        phases[k] = values[0]
        vectors[:, k] = values[1::2] + 1j * values[2::2]
    return EigenSpectrum(phases=phases, vectors=vectors, source_index=source_index)
