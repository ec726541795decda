"""
Projective Geometry Module
Fubini-Study geometry on the two-level projective space (factor-4 convention,
orthogonal states sit at distance pi): Wootters distance, geodesic arcs,
projective distance d^2, the metric tensor and trajectory arc length.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from errors import DegeneracyError, PreconditionError
from hilbert import HermitianOperator, PureState, energy_dispersion, inner, propagate

logger = logging.getLogger(__name__)

# |<psi_B|psi_A>| below this counts as orthogonal and fixes phi = 0
ORTHOGONAL_OVERLAP = 1e-12
COARSE_GRID_OVERLAP = 0.99
HARMONIC_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Sampled state curve psi(t_k).

    Attributes:
        times: Strictly increasing grid, at least two points
        states: One PureState per grid point
        generator: Hamiltonian that produced the curve, if known
        hbar: Reduced Planck constant used with the generator
    """
    times: np.ndarray
    states: tuple
    generator: Optional[HermitianOperator] = None
    hbar: float = 1.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        states = tuple(self.states)
        if times.size < 2:
            raise PreconditionError(f"trajectory needs at least 2 points, got {times.size}")
        if len(states) != times.size:
            raise PreconditionError(f"{len(states)} states for {times.size} grid points")
        if not np.all(np.diff(times) > 0.0):
            raise PreconditionError("trajectory times must be strictly increasing")
        times.setflags(write=False)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def first(self) -> PureState:
        return self.states[0]

    @property
    def last(self) -> PureState:
        return self.states[-1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])


@dataclass(frozen=True)
class GeodesicArc:
    """Endpoints of a geodesic and the relative phase <psi_B|psi_A> = |.|e^{i phi}"""
    endpoint_a: PureState
    endpoint_b: PureState
    phi: float = 0.0

    @classmethod
    def between(cls, a: PureState, b: PureState) -> 'GeodesicArc':
        overlap = inner(b, a)
        phi = 0.0 if abs(overlap) < ORTHOGONAL_OVERLAP else math.atan2(overlap.imag, overlap.real)
        return cls(a, b, phi)

    @property
    def overlap(self) -> float:
        """|<psi_B|psi_A>|"""
        return min(abs(inner(self.endpoint_b, self.endpoint_a)), 1.0)


# ==================== DISTANCES ====================

def _half_angle(a: PureState, b: PureState) -> float:
    """
    arccos|<a|b>| evaluated through the chord between phase-aligned vectors,
    which stays accurate for nearly equal states.
    """
    overlap = inner(a, b)
    vb = b.vector
    if abs(overlap) > 0.0:
        vb = vb * (overlap.conjugate() / abs(overlap))
    chord = float(np.linalg.norm(vb - a.vector))
    return 2.0 * math.asin(min(chord / 2.0, 1.0))


def wootters_distance(a: PureState, b: PureState) -> float:
    """
    Wootters distance 2 arccos|<a|b>|.

    Returns:
        Value in [0, pi]
    """
    return min(2.0 * _half_angle(a, b), math.pi)


def projective_distance_sq(a: PureState, b: PureState) -> float:
    """4 [1 - |<a|b>|^2], in [0, 4]"""
    overlap = min(abs(inner(a, b)), 1.0)
    return 4.0 * (1.0 - overlap) * (1.0 + overlap)


# ==================== GEODESICS ====================

def geodesic_point_lambda(arc: GeodesicArc, lam: float) -> PureState:
    """
    Point of the geodesic through arc's endpoints, 0 <= lam <= 1.

    [(1 - lam)|A> + e^{i phi} lam |B>] / sqrt(1 - 2 lam (1 - lam)(1 - |<B|A>|))
    """
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError(f"lambda must lie in [0, 1], got {lam}")
    norm_sq = 1.0 - 2.0 * lam * (1.0 - lam) * (1.0 - arc.overlap)
    vec = ((1.0 - lam) * arc.endpoint_a.vector
           + np.exp(1j * arc.phi) * lam * arc.endpoint_b.vector) / math.sqrt(norm_sq)
    return PureState.from_vector(vec)


def lambda_of_theta(theta: float) -> float:
    """tan(theta/2) / (1 + tan(theta/2)), written without the pole at theta = pi"""
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    return s / (s + c)


def geodesic_point_theta(arc: GeodesicArc, theta: float) -> PureState:
    """Same geodesic with cos(theta/2), sin(theta/2) weights, 0 <= theta <= pi"""
    if not 0.0 <= theta <= math.pi:
        raise PreconditionError(f"theta must lie in [0, pi], got {theta}")
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    norm_sq = 1.0 + math.sin(theta) * arc.overlap
    vec = (c * arc.endpoint_a.vector
           + np.exp(1j * arc.phi) * s * arc.endpoint_b.vector) / math.sqrt(norm_sq)
    return PureState.from_vector(vec)


def geodesic_trajectory(arc: GeodesicArc, points: int = 1001) -> Trajectory:
    """The arc sampled uniformly in theta over [0, pi]"""
    thetas = np.linspace(0.0, math.pi, points)
    return Trajectory(times=thetas, states=[geodesic_point_theta(arc, float(th)) for th in thetas])


def harmonic_geodesic(psi0: PureState, dpsi0, omega: float, s: float) -> PureState:
    """
    Horizontal geodesic cos(omega s) psi0 + sin(omega s)/omega dpsi0.

    Args:
        psi0: Starting point
        dpsi0: Initial tangent, orthogonal to psi0 with squared norm omega^2
        omega: Angular rate
        s: Arc parameter

    Raises:
        PreconditionError: tangent not horizontal or of the wrong length
    """
    if omega <= 0.0:
        raise PreconditionError(f"omega must be positive, got {omega}")
    tangent = np.asarray(dpsi0, dtype=complex).reshape(2)
    horizontal = complex(np.vdot(psi0.vector, tangent))
    if abs(horizontal) > HARMONIC_TOLERANCE:
        raise PreconditionError(f"<psi0|dpsi0> = {horizontal} is not zero")
    speed_sq = float(np.vdot(tangent, tangent).real)
    if abs(speed_sq - omega ** 2) > HARMONIC_TOLERANCE * max(1.0, omega ** 2):
        raise PreconditionError(f"<dpsi0|dpsi0> = {speed_sq} differs from omega^2 = {omega ** 2}")
    vec = math.cos(omega * s) * psi0.vector + (math.sin(omega * s) / omega) * tangent
    return PureState.from_vector(vec)


# ==================== METRIC AND SPEED ====================

def fs_metric_tensor(family: Callable[[np.ndarray], PureState], xi, step: float = 1e-5) -> np.ndarray:
    """
    Fubini-Study metric g_ab = 4 Re[<d_a psi|d_b psi> - <d_a psi|psi><psi|d_b psi>]
    by central differences.

    Args:
        family: Map from a parameter vector to a state
        xi: Parameter point (scalar or sequence)
        step: Finite-difference step

    Returns:
        Symmetric (k, k) matrix for k parameters
    """
    if step <= 0.0:
        raise PreconditionError(f"finite-difference step must be positive, got {step}")
    point = np.atleast_1d(np.asarray(xi, dtype=float))
    psi = family(point).vector
    derivatives = []
    for a in range(point.size):
        shift = np.zeros_like(point)
        shift[a] = step
        derivatives.append((family(point + shift).vector - family(point - shift).vector) / (2.0 * step))

    k = point.size
    g = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            value = np.vdot(derivatives[a], derivatives[b]) \
                - np.vdot(derivatives[a], psi) * np.vdot(psi, derivatives[b])
            g[a, b] = g[b, a] = 4.0 * value.real
    return g


def fs_speed(op: HermitianOperator, psi: PureState, hbar: float = 1.0) -> float:
    """ds/dt = 2 Delta E / hbar"""
    return 2.0 * energy_dispersion(op, psi) / hbar


def overlap_expansion_coefficient(op: HermitianOperator, psi: PureState,
                                  dt: float = 1e-2, hbar: float = 1.0) -> float:
    """
    dt^2 coefficient of 1 - |<psi(t)|psi(t + dt)>|^2, Richardson-extrapolated
    from steps dt and dt/2. Approaches Delta E^2 / hbar^2.
    """
    def coefficient(h: float) -> float:
        overlap = min(abs(inner(psi, propagate(op, psi, h, hbar))), 1.0)
        return (1.0 - overlap) * (1.0 + overlap) / h ** 2

    return (4.0 * coefficient(dt / 2.0) - coefficient(dt)) / 3.0


# ==================== ARC LENGTH ====================

def _warn_if_coarse(traj: Trajectory) -> None:
    worst = min(abs(inner(a, b)) for a, b in zip(traj.states[:-1], traj.states[1:]))
    if worst < COARSE_GRID_OVERLAP:
        logger.warning("trajectory grid too coarse: adjacent overlap drops to %.4f", worst)


def chord_length(traj: Trajectory) -> float:
    """Sum of Wootters distances between consecutive samples"""
    return float(sum(wootters_distance(a, b) for a, b in zip(traj.states[:-1], traj.states[1:])))


def quadrature_length(traj: Trajectory) -> float:
    """Composite Simpson integral of 2 Delta E(t) / hbar over the grid"""
    if traj.generator is None:
        raise PreconditionError("quadrature length needs the generating Hamiltonian")
    speeds = np.array([fs_speed(traj.generator, psi, traj.hbar) for psi in traj.states])
    return float(simpson(speeds, x=traj.times))


def trajectory_length(traj: Trajectory) -> float:
    """
    Fubini-Study length of a sampled trajectory.

    Uses quadrature of 2 Delta E / hbar when the generator is known and the
    chord sum otherwise.
    """
    _warn_if_coarse(traj)
    if traj.generator is not None:
        return quadrature_length(traj)
    return chord_length(traj)


def require_nondegenerate(length: float, what: str = "trajectory") -> float:
    if length < 1e-12:
        raise DegeneracyError(f"{what} length {length:.3e} is too small")
    return length


def endpoint_arc(traj: Trajectory) -> GeodesicArc:
    """Geodesic arc joining the trajectory's first and last states"""
    return GeodesicArc.between(traj.first, traj.last)
