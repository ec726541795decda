"""
Search Geometry Analysis Module
Efficiency and time-energy uncertainty of the search trajectories, the
geodesicity verdicts of both schemes, the closed-form MFG efficiency and
uncertainty, and the small-energy-difference feasibility analysis.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.integrate import simpson

from config import trajectory_points
from errors import ConvergenceError, DegeneracyError, DomainError
from geometry import (
    Trajectory,
    endpoint_arc,
    require_nondegenerate,
    trajectory_length,
    wootters_distance,
)
from hilbert import energy_dispersion, inner
from oracle import IntegratorSpec, default_integrator_spec, min_d2_profile, terminal_state
from search import (
    SchemeKind,
    SearchConfig,
    geometric_initial_state,
    geometric_state,
    geometric_trajectory,
    hamiltonian,
    optimal_time,
)

logger = logging.getLogger(__name__)

GEODESIC_THRESHOLD = 1e-9
NON_GEODESIC_THRESHOLD = 1e-3
MONOTONE_TOLERANCE = 1e-7
ENDPOINT_LAMBDA_TOLERANCE = 1e-6
SOLVABLE_X_TOLERANCE = 1e-9
LAMBDA_SCAN_GRID = 64
# 1 - |<closed|rk4>|^2 accepted at t*
ORACLE_INFIDELITY_TOLERANCE = 1e-8
# gamma samples for the window sign-pattern check
WINDOW_CHECK_GAMMAS = np.linspace(0.05, 3.0, 591)


class Verdict(str, Enum):
    GEODESIC = 'geodesic'
    NON_GEODESIC = 'non-geodesic'
    INDETERMINATE = 'indeterminate'


@dataclass(frozen=True)
class EfficiencyReport:
    """
    Definitional efficiency of a trajectory.

    Attributes:
        s0: Wootters distance between the endpoints
        s: Fubini-Study length of the trajectory
        eta: s0 / s
        delta_over_h: (1/h) * integral of Delta E dt, None without a generator
        endpoint_overlap: |<psi(0)|psi(t_end)>|
    """
    s0: float
    s: float
    eta: float
    delta_over_h: Optional[float]
    endpoint_overlap: float

    def to_dict(self) -> Dict:
        return {
            's0': self.s0,
            's': self.s,
            'eta': self.eta,
            'delta_over_h': self.delta_over_h,
            'endpoint_overlap': self.endpoint_overlap,
        }


@dataclass(frozen=True, eq=False)
class GeodesicityReport:
    """Outcome of minimizing d^2(t, lambda) against the endpoint geodesic"""
    scheme: SchemeKind
    x: float
    gamma: float
    residual_sup: float
    monotone_ok: bool
    verdict: Verdict
    lambda_profile: np.ndarray = field(repr=False, default=None)
    mapping_deviation: Optional[float] = None
    mapping_parity: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            'scheme': self.scheme.value,
            'x': self.x,
            'gamma': self.gamma,
            'residual_sup': self.residual_sup,
            'monotone_ok': self.monotone_ok,
            'verdict': self.verdict.value,
            'mapping_deviation': self.mapping_deviation,
            'mapping_parity': self.mapping_parity,
        }


@dataclass(frozen=True)
class ConditionSolution:
    """x^2 solving the MFG geodesic condition for a given n"""
    n: int
    gamma: float
    x_sq_exact: float
    x_sq_large_gamma: float

    @property
    def feasible(self) -> bool:
        return 0.0 < self.x_sq_exact < 1.0


@dataclass(frozen=True, eq=False)
class FeasibilityWindow:
    """
    Interval (i_minus, i_plus) of gamma on which x^2(n, gamma) > 0.

    The *_exact fields hold the rational values.
    """
    n: int
    i_minus: float
    i_plus: float
    measure: float
    i_minus_exact: Fraction
    i_plus_exact: Fraction
    measure_exact: Fraction
    x_sq_at: Callable[[float], float] = field(repr=False, default=None)

    def contains(self, gamma: float) -> bool:
        return self.i_minus < gamma < self.i_plus

    def sign_pattern_holds(self, gammas: Sequence[float], margin: float = 1e-9) -> bool:
        """x^2 > 0 exactly inside the window, ignoring points within margin of an endpoint"""
        for gamma in gammas:
            if min(abs(gamma - self.i_minus), abs(gamma - self.i_plus)) <= margin:
                continue
            if (self.x_sq_at(gamma) > 0.0) != self.contains(gamma):
                return False
        return True


# ==================== EFFICIENCY AND UNCERTAINTY ====================

def efficiency_from_definitions(traj: Trajectory) -> EfficiencyReport:
    """
    eta = s0 / s and Delta / h with Delta t_perp taken as the full duration.

    Raises:
        DegeneracyError: trajectory length below 1e-12
    """
    s0 = wootters_distance(traj.first, traj.last)
    s = require_nondegenerate(trajectory_length(traj))
    delta_over_h = None
    if traj.generator is not None:
        dispersions = np.array([energy_dispersion(traj.generator, psi) for psi in traj.states])
        delta_over_h = float(simpson(dispersions, x=traj.times)) / (2.0 * math.pi * traj.hbar)
    return EfficiencyReport(
        s0=s0,
        s=s,
        eta=s0 / s,
        delta_over_h=delta_over_h,
        endpoint_overlap=abs(inner(traj.first, traj.last)),
    )


def _energy_terms(cfg: SearchConfig):
    ep, e = cfg.e_prime, cfg.E
    return (ep - e) ** 2, cfg.x ** 2 * ep * e


def eta_mfg_closed(cfg: SearchConfig) -> float:
    """(1/sqrt 2) sqrt[((E'-E)^2 + 4x^2E'E) / ((E'-E)^2 + 2x^2E'E)]; exactly 1 at gamma = 1"""
    if cfg.gamma == 1.0:
        return 1.0
    split, mix = _energy_terms(cfg)
    return math.sqrt((split + 4.0 * mix) / (split + 2.0 * mix)) / math.sqrt(2.0)


def delta_mfg_closed(cfg: SearchConfig) -> float:
    """Delta_MFG in units of h; exactly 1/4 at gamma = 1"""
    if cfg.gamma == 1.0:
        return 0.25
    split, mix = _energy_terms(cfg)
    return math.sqrt((split + 2.0 * mix) / (split + 4.0 * mix)) / (2.0 * math.sqrt(2.0))


def oracle_cross_check(kind: SchemeKind, cfg: SearchConfig, spec: IntegratorSpec = None) -> float:
    """
    Evolve the geometric initial state with RK4 to t* and compare it with
    the closed-form state there.

    Returns:
        Infidelity 1 - |<psi_closed(t*)|psi_rk4(t*)>|^2

    Raises:
        ConvergenceError: infidelity above ORACLE_INFIDELITY_TOLERANCE
    """
    kind = SchemeKind(kind)
    cfg = cfg.for_scheme(kind)
    spec = spec or default_integrator_spec()
    t_star = optimal_time(kind, cfg)
    numeric = terminal_state(hamiltonian(kind, cfg), geometric_initial_state(kind, cfg), t_star, spec, cfg.hbar)
    infidelity = max(1.0 - abs(inner(geometric_state(kind, cfg, t_star), numeric)) ** 2, 0.0)
    if infidelity > ORACLE_INFIDELITY_TOLERANCE:
        raise ConvergenceError(
            f"{kind.value} x={cfg.x} gamma={cfg.gamma}: closed form and RK4 ({spec.steps} steps) "
            f"differ at t* by infidelity {infidelity:.3e}"
        )
    return infidelity


# ==================== GEODESICITY ====================

def solvable_index(x: float) -> Optional[int]:
    """n with x = 1/(4n) within tolerance, else None"""
    n = round(1.0 / (4.0 * x))
    if n >= 1 and abs(x - 1.0 / (4.0 * n)) <= SOLVABLE_X_TOLERANCE:
        return int(n)
    return None


def fg_mapping_lambda(cfg: SearchConfig, t: float) -> float:
    """
    Closed-form FG mapping [sin^2(Et/4hbar) + sin(Et/2hbar)/2] / [1 + sin(Et/2hbar)].

    Raises:
        DomainError: x is not 1/(4n) or t is outside [0, t_FG]
        DegeneracyError: the denominator vanishes
    """
    if solvable_index(cfg.x) is None:
        raise DomainError(f"x = {cfg.x} is not of the solvable form 1/(4n)")
    t_fg = optimal_time(SchemeKind.FG, cfg)
    if not 0.0 <= t <= t_fg * (1.0 + 1e-12):
        raise DomainError(f"t = {t} outside [0, t_FG = {t_fg}]")
    phase = cfg.E * t / cfg.hbar
    denominator = 1.0 + math.sin(phase / 2.0)
    if abs(denominator) < 1e-12:
        raise DegeneracyError(f"mapping denominator vanishes at t = {t}")
    return (math.sin(phase / 4.0) ** 2 + 0.5 * math.sin(phase / 2.0)) / denominator


def _mapping_deviation(cfg: SearchConfig, times: np.ndarray, lambdas: np.ndarray) -> Optional[float]:
    worst = 0.0
    for t, lam in zip(times, lambdas):
        try:
            worst = max(worst, abs(lam - fg_mapping_lambda(cfg, float(t))))
        except DegeneracyError:
            continue
    return worst


def _classify(residual_sup: float, monotone_ok: bool) -> Verdict:
    if residual_sup <= GEODESIC_THRESHOLD and monotone_ok:
        return Verdict.GEODESIC
    if residual_sup > NON_GEODESIC_THRESHOLD:
        return Verdict.NON_GEODESIC
    return Verdict.INDETERMINATE


def geodesicity_test(kind: SchemeKind, cfg: SearchConfig, points: int = None) -> GeodesicityReport:
    """
    Compare the geometric trajectory with the geodesic through its endpoints.

    For every grid time d^2(t, lambda) is minimized over lambda in [0, 1];
    the verdict needs a vanishing sup residual and a monotone argmin mapping
    running from 0 to 1.
    """
    kind = SchemeKind(kind)
    cfg = cfg.for_scheme(kind)
    traj = geometric_trajectory(kind, cfg, points or trajectory_points())
    profile = min_d2_profile(traj, endpoint_arc(traj), LAMBDA_SCAN_GRID)
    lambdas = profile.lambdas
    monotone_ok = bool(
        np.all(np.diff(lambdas) >= -MONOTONE_TOLERANCE)
        and abs(lambdas[0]) <= ENDPOINT_LAMBDA_TOLERANCE
        and abs(lambdas[-1] - 1.0) <= ENDPOINT_LAMBDA_TOLERANCE
    )
    residual_sup = profile.residual_sup

    deviation, parity = None, None
    n = solvable_index(cfg.x)
    if kind is SchemeKind.FG and n is not None:
        deviation = _mapping_deviation(cfg, profile.times, lambdas)
        parity = 'odd' if n % 2 else 'even'

    verdict = _classify(residual_sup, monotone_ok)
    logger.debug("%s x=%s gamma=%s: residual %.3e, monotone %s -> %s",
                 kind.value, cfg.x, cfg.gamma, residual_sup, monotone_ok, verdict.value)
    return GeodesicityReport(
        scheme=kind,
        x=cfg.x,
        gamma=cfg.gamma,
        residual_sup=residual_sup,
        monotone_ok=monotone_ok,
        verdict=verdict,
        lambda_profile=lambdas,
        mapping_deviation=deviation,
        mapping_parity=parity,
    )


# ==================== FEASIBILITY (SMALL ENERGY DIFFERENCE) ====================

def _require_index(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")


def x_sq(n: int, gamma: float) -> float:
    """(1/64 gamma n^2) [(1 - 16n^2) gamma^2 + (2 + 32n^2) gamma + (1 - 16n^2)]"""
    _require_index(n)
    if gamma <= 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    a = 1.0 - 16.0 * n ** 2
    return (a * gamma ** 2 + (2.0 + 32.0 * n ** 2) * gamma + a) / (64.0 * gamma * n ** 2)


def mfg_condition_gamma_large(cfg: SearchConfig, n: int) -> ConditionSolution:
    """
    Solve (E' + E) / sqrt(4x^2E'E + (E' - E)^2) = 4n for x^2.

    A negative x_sq_exact signals that no overlap satisfies the condition.
    """
    _require_index(n)
    return ConditionSolution(
        n=int(n),
        gamma=cfg.gamma,
        x_sq_exact=x_sq(n, cfg.gamma),
        x_sq_large_gamma=(1.0 - 16.0 * n ** 2) / (64.0 * n ** 2) * cfg.gamma,
    )


def feasible_overlaps(n: int, gamma: float) -> Optional[float]:
    """Overlap x in (0, 1) making the MFG evolution geodesic, if one exists"""
    value = x_sq(n, gamma)
    if 0.0 < value < 1.0:
        return math.sqrt(value)
    return None


def feasibility_window(n: int) -> FeasibilityWindow:
    """
    Window endpoints i_pm(n) = (32n^2 pm 16n + 2) / (32n^2 - 2) and its
    measure 16n / (16n^2 - 1).

    Raises:
        DegeneracyError: the window fails its measure, ordering or sign-pattern checks
    """
    _require_index(n)
    n = int(n)
    denominator = 32 * n * n - 2
    i_minus = Fraction(32 * n * n - 16 * n + 2, denominator)
    i_plus = Fraction(32 * n * n + 16 * n + 2, denominator)
    measure = Fraction(16 * n, 16 * n * n - 1)
    if i_plus - i_minus != measure:
        raise DegeneracyError(f"window measure mismatch for n = {n}")
    if not i_minus <= 1 <= i_plus:
        raise DegeneracyError(f"window ({i_minus}, {i_plus}) for n = {n} does not contain gamma = 1")
    window = FeasibilityWindow(
        n=n,
        i_minus=float(i_minus),
        i_plus=float(i_plus),
        measure=float(measure),
        i_minus_exact=i_minus,
        i_plus_exact=i_plus,
        measure_exact=measure,
        x_sq_at=lambda gamma: x_sq(n, gamma),
    )
    if not window.sign_pattern_holds(WINDOW_CHECK_GAMMAS):
        raise DegeneracyError(f"x^2({n}, gamma) is not positive exactly inside the window for n = {n}")
    return window


# ==================== SWEEPS AND TABLES ====================

def sweep(gammas: Sequence[float], x_grid: Sequence[float], numeric: bool = False,
          points: int = None) -> pd.DataFrame:
    """
    Closed-form eta and Delta/h over a (gamma, x) grid, gamma-major.

    Args:
        gammas: Energy ratios, each >= 1
        x_grid: Overlaps in (0, 1)
        numeric: Also evaluate the definitional values on MFG geometric trajectories,
            each first cross-checked against the RK4 oracle
        points: Trajectory grid size for the numeric columns

    Returns:
        DataFrame with columns gamma, x, eta_closed, delta_over_h_closed
        (and eta_numeric, delta_over_h_numeric)

    Raises:
        ConvergenceError: a closed-form trajectory disagrees with RK4
    """
    if not len(gammas) or not len(x_grid):
        raise DomainError("sweep grids must be non-empty")
    points = points or trajectory_points()
    spec = default_integrator_spec() if numeric else None
    worst = 0.0
    rows = []
    for gamma in gammas:
        for x in x_grid:
            cfg = SearchConfig(x=float(x), gamma=float(gamma))
            row = {
                'gamma': cfg.gamma,
                'x': cfg.x,
                'eta_closed': eta_mfg_closed(cfg),
                'delta_over_h_closed': delta_mfg_closed(cfg),
            }
            if numeric:
                worst = max(worst, oracle_cross_check(SchemeKind.MFG, cfg, spec))
                report = efficiency_from_definitions(geometric_trajectory(SchemeKind.MFG, cfg, points))
                row['eta_numeric'] = report.eta
                row['delta_over_h_numeric'] = report.delta_over_h
            rows.append(row)
    if numeric:
        logger.info("sweep: %d scenarios agree with RK4 (%d steps), worst infidelity %.3e",
                    len(rows), spec.steps, worst)
    return pd.DataFrame(rows)


def _cell_labels(eta: float, delta_over_h: float) -> Dict[str, str]:
    return {
        'eta_cell': 'maximal' if eta >= 1.0 - GEODESIC_THRESHOLD else 'non-maximal',
        'delta_cell': 'minimal' if abs(delta_over_h - 0.25) <= GEODESIC_THRESHOLD else 'non-minimal',
    }


def table1_row(kind: SchemeKind, cfg: SearchConfig, points: int = None) -> Dict:
    """
    One row of the motion-type table.

    The eta and Delta cells come from the closed forms (gamma = 1 for FG);
    the definitional values ride along for comparison.
    """
    kind = SchemeKind(kind)
    cfg = cfg.for_scheme(kind)
    points = points or trajectory_points()
    geodesicity = geodesicity_test(kind, cfg, points)
    definitional = efficiency_from_definitions(geometric_trajectory(kind, cfg, points))
    eta, delta = eta_mfg_closed(cfg), delta_mfg_closed(cfg)
    row = {
        'scheme': kind.value,
        'x': cfg.x,
        'gamma': cfg.gamma,
        'motion': geodesicity.verdict.value,
        'residual_sup': geodesicity.residual_sup,
        'eta_closed': eta,
        'delta_over_h_closed': delta,
        'eta_definitional': definitional.eta,
        'delta_over_h_definitional': definitional.delta_over_h,
    }
    row.update(_cell_labels(eta, delta))
    return row


def table1_rows(scenarios: Dict[str, Dict] = None, points: int = None) -> List[Dict]:
    """
    Both table rows, FG first.

    Args:
        scenarios: {'fg': {...}, 'mfg': {...}} SearchConfig keyword sets;
            defaults to the reference scenarios
    """
    if scenarios is None:
        from reference_tables import get_scenario
        scenarios = {kind.value: get_scenario(kind.value) for kind in SchemeKind}
    return [table1_row(kind, SearchConfig(**scenarios[kind.value]), points) for kind in SchemeKind]
