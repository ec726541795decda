"""
Numerical Oracle Module
Independent brute-force numerics used to cross-check the closed forms:
fixed-step RK4 Schrodinger integration and golden-section minimization of
the projective distance between a trajectory and a geodesic arc.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from config import default_steps
from errors import ConvergenceError, PreconditionError
from geometry import GeodesicArc, Trajectory
from hilbert import HermitianOperator, PureState, propagator

logger = logging.getLogger(__name__)

MIN_STEPS = 100
# Largest ||H|| dt / hbar accepted per RK4 step
MAX_STEP_PHASE = 1.0
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class IntegratorSpec:
    """Fixed-step integrator resolution: steps over the whole interval"""
    steps: int
    method: str = 'rk4'

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < MIN_STEPS:
            raise ConvergenceError(f"integrator needs at least {MIN_STEPS} steps, got {self.steps}")
        if self.method != 'rk4':
            raise PreconditionError(f"unknown integration method {self.method!r}")

    def doubled(self) -> 'IntegratorSpec':
        return IntegratorSpec(2 * self.steps, self.method)


def default_integrator_spec() -> IntegratorSpec:
    """Resolution from QSG_DEFAULT_STEPS (default 10000)"""
    return IntegratorSpec(default_steps())


# ==================== SCHRODINGER INTEGRATION ====================

def _rk4_run(h: HermitianOperator, psi0: PureState, t_end: float, steps: int, hbar: float) -> np.ndarray:
    """All RK4 iterates of i hbar dpsi/dt = H psi, renormalized after each step"""
    dt = t_end / steps
    if h.norm * dt / hbar > MAX_STEP_PHASE:
        raise ConvergenceError(
            f"{steps} steps are too few: ||H|| dt / hbar = {h.norm * dt / hbar:.3f} exceeds {MAX_STEP_PHASE}"
        )
    generator = -1j * h.matrix / hbar
    out = np.empty((steps + 1, 2), dtype=complex)
    psi = psi0.vector
    out[0] = psi
    drift = 0.0
    for k in range(steps):
        k1 = generator @ psi
        k2 = generator @ (psi + 0.5 * dt * k1)
        k3 = generator @ (psi + 0.5 * dt * k2)
        k4 = generator @ (psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norm = np.linalg.norm(psi)
        drift = max(drift, abs(norm - 1.0))
        psi = psi / norm
        out[k + 1] = psi
    logger.debug("rk4: %d steps, max renormalization %.3e", steps, drift)
    return out


def integrate_schrodinger(h: HermitianOperator, psi0: PureState, t_end: float,
                          spec: IntegratorSpec = None, hbar: float = 1.0) -> Trajectory:
    """
    Integrate the Schrodinger equation from psi0 over [0, t_end].

    Args:
        h: Time-independent Hamiltonian
        psi0: Initial state
        t_end: Final time (> 0)
        spec: Resolution; defaults to default_integrator_spec()
        hbar: Reduced Planck constant

    Returns:
        Trajectory with steps + 1 samples carrying h as generator
    """
    if t_end <= 0.0:
        raise PreconditionError(f"t_end must be positive, got {t_end}")
    spec = spec or default_integrator_spec()
    iterates = _rk4_run(h, psi0, t_end, spec.steps, hbar)
    times = np.linspace(0.0, t_end, spec.steps + 1)
    states = [PureState.from_vector(v) for v in iterates]
    return Trajectory(times=times, states=states, generator=h, hbar=hbar)


def terminal_state(h: HermitianOperator, psi0: PureState, t_end: float,
                   spec: IntegratorSpec = None, hbar: float = 1.0) -> PureState:
    """RK4 state at t_end, without building the full Trajectory"""
    if t_end <= 0.0:
        raise PreconditionError(f"t_end must be positive, got {t_end}")
    spec = spec or default_integrator_spec()
    return PureState.from_vector(_rk4_run(h, psi0, t_end, spec.steps, hbar)[-1])


def terminal_error(h: HermitianOperator, psi0: PureState, t_end: float, steps: int, hbar: float = 1.0) -> float:
    """||psi_rk4(t_end) - exp(-iHt_end/hbar) psi0||"""
    final = _rk4_run(h, psi0, t_end, steps, hbar)[-1]
    exact = propagator(h, t_end, hbar) @ psi0.vector
    return float(np.linalg.norm(final - exact))


def convergence_ratio(h: HermitianOperator, psi0: PureState, t_end: float, steps: int, hbar: float = 1.0) -> float:
    """
    error(steps) / error(2 steps) against spectral propagation; about 16 for
    a fourth-order method.
    """
    coarse = terminal_error(h, psi0, t_end, steps, hbar)
    fine = terminal_error(h, psi0, t_end, 2 * steps, hbar)
    if fine == 0.0:
        raise ConvergenceError("error vanished at the finer resolution; ratio undefined")
    return coarse / fine


def oracle_transition_probability(kind, cfg, t: float, spec: IntegratorSpec = None) -> float:
    """|<w|psi(t)>|^2 with psi integrated from the source state"""
    from search import hamiltonian, source_state

    if t == 0.0:
        return cfg.x ** 2
    traj = integrate_schrodinger(hamiltonian(kind, cfg), source_state(cfg), t, spec, cfg.hbar)
    return abs(traj.last.a_w) ** 2


# ==================== LAMBDA MINIMIZATION ====================

def golden_section_minimize(f: Callable[[float], float], lo: float, hi: float,
                            tol: float = 1e-12, max_iterations: int = 200) -> Tuple[float, float]:
    """
    Golden-section search on [lo, hi], comparing against both endpoints so
    boundary minima are returned exactly.

    Returns:
        (argmin, minimum)
    """
    if hi < lo:
        raise PreconditionError(f"empty bracket [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    iteration = 0
    while iteration < max_iterations and abs(b - a) > tol:
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        iteration += 1

    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    if f_lo <= best_f:
        best_x, best_f = lo, f_lo
    if f_hi < best_f:
        best_x, best_f = hi, f_hi
    return best_x, best_f


@dataclass(frozen=True, eq=False)
class D2Profile:
    """Per-sample argmin lambda and minimum of d^2(t, lambda)"""
    times: np.ndarray
    lambdas: np.ndarray
    d2: np.ndarray

    @property
    def residual_sup(self) -> float:
        return float(np.max(self.d2))


def _d2_along_arc(psi: PureState, arc: GeodesicArc) -> Callable[[float], float]:
    """lambda -> d^2(psi, geodesic point) from two precomputed overlaps"""
    with_a = complex(np.vdot(psi.vector, arc.endpoint_a.vector))
    with_b = complex(np.vdot(psi.vector, np.exp(1j * arc.phi) * arc.endpoint_b.vector))
    loss = 1.0 - arc.overlap

    def d2(lam: float) -> float:
        norm_sq = 1.0 - 2.0 * lam * (1.0 - lam) * loss
        overlap_sq = abs((1.0 - lam) * with_a + lam * with_b) ** 2 / norm_sq
        return 4.0 * max(1.0 - overlap_sq, 0.0)

    return d2


def min_d2_profile(traj: Trajectory, arc: GeodesicArc, grid: int = 64, tol: float = 1e-12) -> D2Profile:
    """
    Minimize lambda -> d^2(psi(t), psi_geo(lambda)) on [0, 1] for every sample.

    A uniform scan over grid + 1 lambda values picks the bracket, golden
    section refines it.
    """
    if grid < 64:
        raise PreconditionError(f"lambda scan grid must be at least 64, got {grid}")
    scan = np.linspace(0.0, 1.0, grid + 1)
    lambdas = np.empty(len(traj))
    values = np.empty(len(traj))
    for k, psi in enumerate(traj.states):
        d2 = _d2_along_arc(psi, arc)
        scanned = np.array([d2(float(lam)) for lam in scan])
        j = int(np.argmin(scanned))
        lo, hi = scan[max(j - 1, 0)], scan[min(j + 1, grid)]
        lam, value = golden_section_minimize(d2, float(lo), float(hi), tol)
        if scanned[j] < value:
            lam, value = float(scan[j]), float(scanned[j])
        lambdas[k], values[k] = lam, value
    return D2Profile(times=traj.times, lambdas=lambdas, d2=values)
