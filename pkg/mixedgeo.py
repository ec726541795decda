"""
Mixed-State Geometry Module
Qubit density states, Uhlmann-Jozsa fidelity, Bures angle and distance,
SLD quantum Fisher information along sampled trajectories and the
generalized efficiency and uncertainty measures built from them.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import simpson

from errors import DegeneracyError, EndpointMismatchError, NormalizationError, PreconditionError
from geometry import Trajectory
from hilbert import HermitianOperator, PureState, propagator

logger = logging.getLogger(__name__)

DENSITY_TOLERANCE = 1e-12
SLD_PAIR_FLOOR = 1e-12
DERIVATIVE_AGREEMENT = 1e-6
ENDPOINT_FIDELITY = 1.0 - 1e-9


@dataclass(frozen=True)
class DensityState:
    """
    Qubit density matrix in the {|w>, |r>} basis.

    Stored as the independent entries, so Hermiticity holds by construction.
    """
    rho_ww: float
    rho_rr: float
    rho_wr: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'rho_ww', float(self.rho_ww))
        object.__setattr__(self, 'rho_rr', float(self.rho_rr))
        object.__setattr__(self, 'rho_wr', complex(self.rho_wr))
        trace = self.rho_ww + self.rho_rr
        if not math.isfinite(trace) or abs(trace - 1.0) > DENSITY_TOLERANCE:
            raise NormalizationError(f"density trace {trace} differs from 1")
        if np.linalg.norm(self.bloch_vector) > 1.0 + 2.0 * DENSITY_TOLERANCE:
            raise NormalizationError(f"density matrix has a negative eigenvalue:\n{self.matrix}")

    @classmethod
    def from_matrix(cls, m, tol: float = DENSITY_TOLERANCE) -> 'DensityState':
        arr = np.asarray(m, dtype=complex).reshape(2, 2)
        if np.max(np.abs(arr - arr.conj().T)) > tol:
            raise NormalizationError(f"density matrix is not Hermitian:\n{arr}")
        return cls(arr[0, 0].real, arr[1, 1].real, arr[0, 1])

    @classmethod
    def from_pure(cls, psi: PureState) -> 'DensityState':
        """|psi><psi|, rescaled to unit trace"""
        vec = psi.vector
        m = np.outer(vec, vec.conj())
        return cls.from_matrix(m / np.trace(m).real)

    @classmethod
    def from_bloch(cls, r) -> 'DensityState':
        """(I + r . sigma) / 2 with |r| <= 1"""
        rx, ry, rz = (float(c) for c in r)
        return cls(0.5 * (1.0 + rz), 0.5 * (1.0 - rz), 0.5 * complex(rx, -ry))

    @classmethod
    def maximally_mixed(cls) -> 'DensityState':
        return cls(0.5, 0.5, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho_ww, self.rho_wr], [np.conj(self.rho_wr), self.rho_rr]],
            dtype=complex,
        )

    @property
    def bloch_vector(self) -> np.ndarray:
        return np.array([2.0 * self.rho_wr.real, -2.0 * self.rho_wr.imag, self.rho_ww - self.rho_rr])

    @property
    def determinant(self) -> float:
        return self.rho_ww * self.rho_rr - abs(self.rho_wr) ** 2

    @property
    def purity(self) -> float:
        """tr(rho^2), in [1/2, 1]"""
        return 0.5 * (1.0 + float(np.dot(self.bloch_vector, self.bloch_vector)))


@dataclass(frozen=True, eq=False)
class MixedTrajectory:
    """Density states on a strictly increasing time grid"""
    times: np.ndarray
    states: tuple
    generator: Optional[HermitianOperator] = None
    hbar: float = 1.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        states = tuple(self.states)
        if times.size < 2 or len(states) != times.size:
            raise PreconditionError(f"{len(states)} states for {times.size} grid points")
        if not np.all(np.diff(times) > 0.0):
            raise PreconditionError("trajectory times must be strictly increasing")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class TildeEfficiencyReport:
    """Both orientations of the integrated-QFI ratio between a path and its geodesic"""
    path_integral: float
    geodesic_integral: float
    printed_ratio: float
    reciprocal: float
    sqrt_fidelity: float
    bures_length: float
    at_most_one: str

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class UncertaintyBoundReport:
    """dxi against (h/2) F_Q^{-1/2}"""
    dxi: float
    bound: float
    fisher_information: float
    satisfied: bool


# ==================== FIDELITY AND BURES ====================

def uhlmann_fidelity(r1: DensityState, r2: DensityState) -> float:
    """
    [tr sqrt(sqrt(r1) r2 sqrt(r1))]^2 through the qubit closed form
    tr(r1 r2) + 2 sqrt(det r1 det r2), clipped to [0, 1].
    """
    overlap = float(np.trace(r1.matrix @ r2.matrix).real)
    dets = max(r1.determinant, 0.0) * max(r2.determinant, 0.0)
    return min(max(overlap + 2.0 * math.sqrt(dets), 0.0), 1.0)


def bures_angle(r1: DensityState, r2: DensityState) -> float:
    """arccos sqrt(F), in [0, pi/2]"""
    return math.acos(math.sqrt(uhlmann_fidelity(r1, r2)))


def bures_distance_sq(r1: DensityState, r2: DensityState) -> float:
    """2 (1 - sqrt(F)), in [0, 2]"""
    return 2.0 * (1.0 - math.sqrt(uhlmann_fidelity(r1, r2)))


# ==================== TRAJECTORIES ====================

def mixed_unitary_trajectory(op: HermitianOperator, rho0: DensityState, times: Sequence[float],
                             hbar: float = 1.0) -> MixedTrajectory:
    """rho(t) = U rho0 U^dagger with U = exp(-iHt/hbar)"""
    states = []
    for t in times:
        u = propagator(op, float(t), hbar)
        states.append(DensityState.from_matrix(u @ rho0.matrix @ u.conj().T))
    return MixedTrajectory(times=np.asarray(times, dtype=float), states=states, generator=op, hbar=hbar)


def pure_to_mixed(traj: Trajectory) -> MixedTrajectory:
    """Rank-1 densities of a pure-state trajectory"""
    return MixedTrajectory(
        times=traj.times,
        states=[DensityState.from_pure(psi) for psi in traj.states],
        generator=traj.generator,
        hbar=traj.hbar,
    )


# ==================== QUANTUM FISHER INFORMATION ====================

def _fourth_order(v: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order stencils on a uniform grid of at least five samples"""
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h)
    out[-1] = (25.0 * v[-1] - 48.0 * v[-2] + 36.0 * v[-3] - 16.0 * v[-4] + 3.0 * v[-5]) / (12.0 * h)
    out[-2] = (3.0 * v[-1] + 10.0 * v[-2] - 18.0 * v[-3] + 6.0 * v[-4] - v[-5]) / (12.0 * h)
    return out


def _time_derivative(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """
    d/dt along axis 0. Uniform grids of five or more points use fourth-order
    stencils; from nine points on they are checked against the same stencils
    on every other sample.
    """
    steps = np.diff(times)
    if len(times) < 5 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        return np.gradient(values, times, axis=0, edge_order=2)

    fine = _fourth_order(values, steps[0])
    if len(times) >= 9:
        coarse = _fourth_order(values[::2], 2.0 * steps[0])
        scale = max(1.0, float(np.max(np.abs(fine))))
        disagreement = float(np.max(np.abs(fine[::2] - coarse)))
        if disagreement > DERIVATIVE_AGREEMENT * scale:
            logger.warning("d(rho)/dt estimates disagree by %.3e between resolutions; refine the grid",
                           disagreement)
    return fine


def _density_derivatives(traj: MixedTrajectory) -> np.ndarray:
    stack = np.array([rho.matrix for rho in traj.states])
    return _time_derivative(stack, traj.times)


def _qfi(rho: np.ndarray, rho_dot: np.ndarray) -> float:
    """tr(rho L^2) with L solved in the eigenbasis of rho"""
    populations, basis = np.linalg.eigh(rho)
    d = basis.conj().T @ rho_dot @ basis
    total = 0.0
    for j in range(2):
        for k in range(2):
            pair = populations[j] + populations[k]
            if pair < SLD_PAIR_FLOOR:
                if abs(d[j, k]) > DERIVATIVE_AGREEMENT:
                    logger.warning("SLD: dropping eigenvalue pair (%d, %d) with sum %.3e but "
                                   "|d rho/dt| = %.3e", j, k, pair, abs(d[j, k]))
                continue
            # sum_j p_j sum_k |L_jk|^2
            total += populations[j] * abs(2.0 * d[j, k] / pair) ** 2
    return max(float(total), 0.0)


def sld_qfi(traj: MixedTrajectory, t_index: int) -> float:
    """
    Quantum Fisher information F_Q = tr(rho L^2) at one grid point, with the
    SLD L solving d(rho)/dt = (rho L + L rho) / 2.
    """
    if not -len(traj) <= t_index < len(traj):
        raise PreconditionError(f"time index {t_index} outside a {len(traj)}-point trajectory")
    derivatives = _density_derivatives(traj)
    return _qfi(traj.states[t_index].matrix, derivatives[t_index])


def qfi_profile(traj: MixedTrajectory) -> np.ndarray:
    derivatives = _density_derivatives(traj)
    return np.array([_qfi(rho.matrix, d) for rho, d in zip(traj.states, derivatives)])


def integrated_qfi_length(traj: MixedTrajectory) -> float:
    """Simpson integral of sqrt(F_Q) over the grid"""
    return float(simpson(np.sqrt(qfi_profile(traj)), x=traj.times))


def variance_bound(op: HermitianOperator, rho: DensityState, hbar: float = 1.0) -> float:
    """4 Delta E^2 / hbar^2 with Delta E^2 = tr(rho H^2) - tr(rho H)^2"""
    h = op.matrix
    mean = float(np.trace(rho.matrix @ h).real)
    second = float(np.trace(rho.matrix @ h @ h).real)
    return 4.0 * max(second - mean ** 2, 0.0) / hbar ** 2


def fidelity_expansion_coefficient(op: HermitianOperator, rho: DensityState,
                                   dt: float = 1e-2, hbar: float = 1.0) -> float:
    """
    Richardson estimate of (1 - F(rho(t), rho(t + dt))) / dt^2, which tends
    to F_Q / 4.
    """
    def coefficient(step: float) -> float:
        u = propagator(op, step, hbar)
        moved = DensityState.from_matrix(u @ rho.matrix @ u.conj().T)
        return (1.0 - uhlmann_fidelity(rho, moved)) / step ** 2

    return (4.0 * coefficient(dt / 2.0) - coefficient(dt)) / 3.0


# ==================== EFFICIENCY AND UNCERTAINTY ====================

def efficiency_mixed(traj: MixedTrajectory) -> float:
    """
    2 arccos sqrt(F[rho(0), rho(t_end)]) divided by the integrated sqrt(F_Q).

    Raises:
        DegeneracyError: integrated QFI length below 1e-12
    """
    denominator = integrated_qfi_length(traj)
    if denominator < 1e-12:
        raise DegeneracyError(f"integrated QFI length {denominator:.3e} is too small")
    return 2.0 * bures_angle(traj.states[0], traj.states[-1]) / denominator


def _require_shared_endpoints(a: MixedTrajectory, b: MixedTrajectory) -> None:
    for label, ra, rb in (('initial', a.states[0], b.states[0]), ('final', a.states[-1], b.states[-1])):
        fidelity = uhlmann_fidelity(ra, rb)
        if fidelity < ENDPOINT_FIDELITY:
            raise EndpointMismatchError(f"{label} states differ: fidelity {fidelity:.12f}")


def efficiency_tilde(traj_h: MixedTrajectory, traj_geo: MixedTrajectory) -> TildeEfficiencyReport:
    """
    Integrated sqrt(F_Q) along a path against the same integral along the
    geodesic joining its endpoints, in both orientations.

    Raises:
        EndpointMismatchError: the two trajectories do not share endpoints
    """
    _require_shared_endpoints(traj_h, traj_geo)
    path = integrated_qfi_length(traj_h)
    geodesic = integrated_qfi_length(traj_geo)
    if path < 1e-12 or geodesic < 1e-12:
        raise DegeneracyError("integrated QFI length vanishes")
    first, last = traj_h.states[0], traj_h.states[-1]
    printed, reciprocal = path / geodesic, geodesic / path
    return TildeEfficiencyReport(
        path_integral=path,
        geodesic_integral=geodesic,
        printed_ratio=printed,
        reciprocal=reciprocal,
        sqrt_fidelity=math.sqrt(uhlmann_fidelity(first, last)),
        bures_length=2.0 * bures_angle(first, last),
        at_most_one='printed' if printed <= 1.0 + 1e-9 else 'reciprocal',
    )


def generalized_uncertainty_bound(traj: MixedTrajectory, dxi: float, t_index: int = 0) -> UncertaintyBoundReport:
    """
    Cramer-Rao style check dxi >= (h/2) F_Q^{-1/2} at one grid point.
    A vanishing F_Q makes the bound infinite.
    """
    fisher = sld_qfi(traj, t_index)
    planck = 2.0 * math.pi * traj.hbar
    bound = math.inf if fisher <= 0.0 else 0.5 * planck / math.sqrt(fisher)
    return UncertaintyBoundReport(dxi=dxi, bound=bound, fisher_information=fisher, satisfied=dxi >= bound)
