"""
Two-Level Hilbert Space Module
Exact complex linear algebra on span{|w>, |r>}: states, Hermitian operators,
spectral decomposition, closed-form unitary propagation and energy dispersion.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import DegeneracyError, NormalizationError

logger = logging.getLogger(__name__)

# Construction guard for states; closed forms land well inside it
NORM_TOLERANCE = 1e-10
RADICAND_FLOOR = -1e-12
DEGENERATE_GAP = 1e-14


@dataclass(frozen=True)
class PureState:
    """
    Normalized amplitude pair in the {|w>, |r>} basis.

    Equality of physical states is projective: use phase_equal(), never ==.
    """
    a_w: complex
    a_r: complex

    def __post_init__(self):
        object.__setattr__(self, 'a_w', complex(self.a_w))
        object.__setattr__(self, 'a_r', complex(self.a_r))
        norm_sq = abs(self.a_w) ** 2 + abs(self.a_r) ** 2
        if not np.isfinite(norm_sq) or abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise NormalizationError(
                f"state ({self.a_w}, {self.a_r}) has squared norm {norm_sq}, expected 1"
            )

    @classmethod
    def from_vector(cls, vec, normalize: bool = True) -> 'PureState':
        """
        Build a state from a length-2 complex vector.

        Args:
            vec: Amplitudes (a_w, a_r)
            normalize: Rescale to unit norm before validation

        Returns:
            PureState
        """
        arr = np.asarray(vec, dtype=complex).reshape(2)
        if normalize:
            norm = np.linalg.norm(arr)
            if norm == 0.0 or not np.isfinite(norm):
                raise NormalizationError(f"cannot normalize vector {arr}")
            arr = arr / norm
        return cls(arr[0], arr[1])

    @classmethod
    def basis_w(cls) -> 'PureState':
        return cls(1.0, 0.0)

    @classmethod
    def basis_r(cls) -> 'PureState':
        return cls(0.0, 1.0)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a_w, self.a_r], dtype=complex)

    def with_phase(self, beta: float) -> 'PureState':
        """Multiply by the global phase e^{i beta}"""
        return PureState.from_vector(np.exp(1j * beta) * self.vector)

    def phase_equal(self, other: 'PureState', tol: float = 1e-12) -> bool:
        """True when the two states define the same ray (d^2 <= tol)"""
        overlap = abs(np.vdot(self.vector, other.vector))
        return 4.0 * (1.0 - min(overlap, 1.0) ** 2) <= tol


@dataclass(frozen=True)
class HermitianOperator:
    """
    2x2 Hermitian operator in energy units.

    Only the independent entries are stored, so the operator equals its
    conjugate transpose by construction.
    """
    h_ww: float
    h_rr: float
    h_wr: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'h_ww', float(self.h_ww))
        object.__setattr__(self, 'h_rr', float(self.h_rr))
        object.__setattr__(self, 'h_wr', complex(self.h_wr))

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-12) -> 'HermitianOperator':
        arr = np.asarray(m, dtype=complex).reshape(2, 2)
        scale = max(1.0, float(np.max(np.abs(arr))))
        if np.max(np.abs(arr - arr.conj().T)) > tol * scale:
            raise NormalizationError(f"matrix is not Hermitian:\n{arr}")
        return cls(arr[0, 0].real, arr[1, 1].real, arr[0, 1])

    @classmethod
    def identity(cls, c: float = 1.0) -> 'HermitianOperator':
        return cls(c, c, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.h_ww, self.h_wr], [np.conj(self.h_wr), self.h_rr]],
            dtype=complex,
        )

    @property
    def norm(self) -> float:
        """Spectral norm"""
        return float(np.linalg.norm(self.matrix, 2))

    @property
    def trace(self) -> float:
        return self.h_ww + self.h_rr

    def apply(self, psi: PureState) -> np.ndarray:
        return self.matrix @ psi.vector


@dataclass(frozen=True)
class Spectrum2:
    """Ordered eigenpairs of a 2x2 Hermitian operator (e_minus <= e_plus)"""
    e_minus: float
    e_plus: float
    v_minus: PureState
    v_plus: PureState

    @property
    def gap(self) -> float:
        return self.e_plus - self.e_minus

    def projectors(self) -> Tuple[np.ndarray, np.ndarray]:
        vm = self.v_minus.vector
        vp = self.v_plus.vector
        return np.outer(vm, vm.conj()), np.outer(vp, vp.conj())


# ==================== STATE ALGEBRA ====================

def inner(a: PureState, b: PureState) -> complex:
    """<a|b>, antilinear in the first argument"""
    return complex(np.vdot(a.vector, b.vector))


def expectation(op: HermitianOperator, psi: PureState) -> float:
    """<psi|H|psi>; the imaginary residue is discarded"""
    value = np.vdot(psi.vector, op.apply(psi))
    if abs(value.imag) > 1e-12 * max(1.0, op.norm):
        logger.debug("expectation has imaginary residue %.3e", value.imag)
    return float(value.real)


def _sqrt_radicand(radicand: float) -> float:
    """Square root with round-off clamping; genuinely negative input is an error"""
    if radicand < RADICAND_FLOOR:
        raise DegeneracyError(f"negative dispersion radicand {radicand:.3e}")
    return float(np.sqrt(max(radicand, 0.0)))


def energy_dispersion(op: HermitianOperator, psi: PureState) -> float:
    """
    Energy uncertainty sqrt(<H^2> - <H>^2).

    The radicand is evaluated as ||(H - <H>)psi||^2, which equals the
    textbook difference but keeps eigenstates at zero to machine precision.
    """
    mean = expectation(op, psi)
    centred = op.apply(psi) - mean * psi.vector
    return _sqrt_radicand(float(np.vdot(centred, centred).real))


# ==================== SPECTRAL TOOLS ====================

def spectrum(op: HermitianOperator) -> Spectrum2:
    """
    Eigen-decomposition with deterministic ordering and phase.

    Degenerate operators (gap below DEGENERATE_GAP relative to the largest
    eigenvalue) return the canonical basis.
    """
    evals, evecs = np.linalg.eigh(op.matrix)
    e_minus, e_plus = float(evals[0]), float(evals[1])
    scale = max(abs(e_minus), abs(e_plus))
    if e_plus - e_minus <= DEGENERATE_GAP * scale or scale == 0.0:
        mean = 0.5 * (e_minus + e_plus)
        return Spectrum2(mean, mean, PureState.basis_w(), PureState.basis_r())

    vectors = []
    for k in range(2):
        v = evecs[:, k]
        # Fix the phase: largest-magnitude component real and positive
        pivot = v[np.argmax(np.abs(v))]
        vectors.append(PureState.from_vector(v * np.conj(pivot) / abs(pivot)))
    return Spectrum2(e_minus, e_plus, vectors[0], vectors[1])


def spectral_reconstruction(spec: Spectrum2) -> np.ndarray:
    """e_minus P_minus + e_plus P_plus"""
    p_minus, p_plus = spec.projectors()
    return spec.e_minus * p_minus + spec.e_plus * p_plus


def propagator(op: HermitianOperator, t: float, hbar: float = 1.0) -> np.ndarray:
    """exp(-i H t / hbar) assembled from the spectral projectors"""
    spec = spectrum(op)
    p_minus, p_plus = spec.projectors()
    return (np.exp(-1j * spec.e_minus * t / hbar) * p_minus
            + np.exp(-1j * spec.e_plus * t / hbar) * p_plus)


def propagate(op: HermitianOperator, psi0: PureState, t: float, hbar: float = 1.0) -> PureState:
    """
    Evolve psi0 under a time-independent Hamiltonian.

    Args:
        op: Hamiltonian
        psi0: Initial state
        t: Elapsed time
        hbar: Reduced Planck constant

    Returns:
        exp(-i H t / hbar) psi0
    """
    if t == 0.0:
        return psi0
    return PureState.from_vector(propagator(op, t, hbar) @ psi0.vector)
