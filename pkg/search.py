"""
Analog Quantum Search Module
Original (FG) and modified (MFG) continuous-time search Hamiltonians on
span{|w>, |r>}: transition probabilities, optimal search times, and the
closed-form evolved states used by the geometric analysis.

The energy ratio gamma = E'/E is the primary knob, so the original scheme
is exactly the gamma = 1 slice of the modified one.
"""
import logging
import math
import numbers
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Tuple

import numpy as np

from errors import DegeneracyError, DomainError
from hilbert import HermitianOperator, PureState, inner, propagate

logger = logging.getLogger(__name__)

# A and B divide by x E' sqrt(1 - x^2)
GEOMETRIC_X_GUARD = 1e-6


class SchemeKind(str, Enum):
    """Search scheme tag"""
    FG = 'fg'
    MFG = 'mfg'


@dataclass(frozen=True)
class SearchConfig:
    """
    One search scenario.

    Attributes:
        x: Quantum overlap <w|s>, strictly inside (0, 1)
        E: Oracle energy
        gamma: E'/E, at least 1 (ignored by the original scheme)
        hbar: Reduced Planck constant
    """
    x: float
    E: float = 1.0
    gamma: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ('x', 'E', 'gamma', 'hbar'):
            value = getattr(self, name)
            if not isinstance(value, numbers.Real) or isinstance(value, bool) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not 0.0 < self.x < 1.0:
            raise DomainError(f"overlap x must lie strictly inside (0, 1), got {self.x}")
        if self.gamma < 1.0:
            raise DomainError(f"gamma = E'/E must be >= 1, got {self.gamma}")
        if self.E <= 0.0:
            raise DomainError(f"oracle energy E must be positive, got {self.E}")
        if self.hbar <= 0.0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    @property
    def e_prime(self) -> float:
        return self.gamma * self.E

    @property
    def h(self) -> float:
        """Planck constant h = 2 pi hbar"""
        return 2.0 * math.pi * self.hbar

    def for_scheme(self, kind: SchemeKind) -> 'SearchConfig':
        """The original scheme treats gamma as 1"""
        if SchemeKind(kind) is SchemeKind.FG and self.gamma != 1.0:
            return replace(self, gamma=1.0)
        return self


def _gap(cfg: SearchConfig) -> float:
    """sqrt(4 x^2 E' E + (E' - E)^2), the eigen-gap of H_MFG"""
    ep, e = cfg.e_prime, cfg.E
    return math.sqrt(4.0 * cfg.x ** 2 * ep * e + (ep - e) ** 2)


# ==================== HAMILTONIANS AND PROBABILITIES ====================

def source_state(cfg: SearchConfig) -> PureState:
    """|s> = x|w> + sqrt(1 - x^2)|r>"""
    return PureState(cfg.x, math.sqrt(1.0 - cfg.x ** 2))


def target_state() -> PureState:
    """|w>"""
    return PureState.basis_w()


def hamiltonian(kind: SchemeKind, cfg: SearchConfig) -> HermitianOperator:
    """
    E|w><w| + E'|s><s| in the {|w>, |r>} basis (E' = E for FG).
    """
    cfg = cfg.for_scheme(kind)
    x, ep = cfg.x, cfg.e_prime
    c = math.sqrt(1.0 - x ** 2)
    return HermitianOperator(
        h_ww=cfg.E + ep * x ** 2,
        h_rr=ep * (1.0 - x ** 2),
        h_wr=ep * x * c,
    )


def transition_probability(kind: SchemeKind, cfg: SearchConfig, t: float) -> float:
    """
    Closed-form |<w|exp(-iHt/hbar)|s>|^2.

    FG: sin^2(Ext/hbar) + x^2 cos^2(Ext/hbar)
    MFG: P_max sin^2(gap t / 2hbar) + x^2 cos^2(gap t / 2hbar)
    """
    if t < 0.0:
        raise DomainError(f"time must be non-negative, got {t}")
    cfg = cfg.for_scheme(kind)
    x = cfg.x
    if SchemeKind(kind) is SchemeKind.FG:
        phase = cfg.E * x * t / cfg.hbar
        return math.sin(phase) ** 2 + x ** 2 * math.cos(phase) ** 2
    phase = _gap(cfg) * t / (2.0 * cfg.hbar)
    return max_probability(kind, cfg) * math.sin(phase) ** 2 + x ** 2 * math.cos(phase) ** 2


def transition_probability_oracle(kind: SchemeKind, cfg: SearchConfig, t: float) -> float:
    """Same quantity by spectral propagation of |s>"""
    evolved = propagate(hamiltonian(kind, cfg), source_state(cfg), t, cfg.hbar)
    return abs(inner(target_state(), evolved)) ** 2


def optimal_time(kind: SchemeKind, cfg: SearchConfig) -> float:
    """
    Smallest time of maximal success probability.

    FG: pi hbar / (2 E x); MFG: pi hbar / gap
    """
    cfg = cfg.for_scheme(kind)
    if SchemeKind(kind) is SchemeKind.FG:
        return math.pi * cfg.hbar / (2.0 * cfg.E * cfg.x)
    return math.pi * cfg.hbar / _gap(cfg)


def max_probability(kind: SchemeKind, cfg: SearchConfig) -> float:
    """FG: 1; MFG: x^2 (E' + E)^2 / (4 x^2 E' E + (E' - E)^2)"""
    if SchemeKind(kind) is SchemeKind.FG:
        return 1.0
    ep, e = cfg.e_prime, cfg.E
    return cfg.x ** 2 * (ep + e) ** 2 / _gap(cfg) ** 2


def search_time_scaling(n_values: List[int], E: float = 1.0, hbar: float = 1.0) -> List[Tuple[int, float, float]]:
    """
    t_FG for the equal-superposition source over N items (x = 1/sqrt(N)).

    Returns:
        List of (N, x, t_FG)
    """
    rows = []
    for n_items in n_values:
        if n_items < 2:
            raise DomainError(f"need at least two items, got N = {n_items}")
        cfg = SearchConfig(x=1.0 / math.sqrt(n_items), E=E, hbar=hbar)
        rows.append((n_items, cfg.x, optimal_time(SchemeKind.FG, cfg)))
    return rows


# ==================== GEOMETRIC (CLOSED-FORM) STATES ====================

def fg_geometric_state(cfg: SearchConfig, t: float) -> PureState:
    """
    Closed-form FG state of the geometric analysis.

    At t = 0 this is the equal-weight superposition of the H_FG eigenstates,
    not the source state |s>.
    """
    cfg = cfg.for_scheme(SchemeKind.FG)
    x, e, hbar = cfg.x, cfg.E, cfg.hbar
    one_minus_c = x ** 2 / (1.0 + math.sqrt(1.0 - x ** 2))
    theta = e * x * t / hbar
    prefactor = np.exp(-1j * e * t / hbar) / (math.sqrt(2.0) * math.sqrt(one_minus_c))
    vec = prefactor * np.array([
        one_minus_c * math.cos(theta) - 1j * x * math.sin(theta),
        x * math.cos(theta) + 1j * one_minus_c * math.sin(theta),
    ])
    return PureState.from_vector(vec)


def _check_geometric_domain(cfg: SearchConfig) -> None:
    if not GEOMETRIC_X_GUARD < cfg.x < 1.0 - GEOMETRIC_X_GUARD:
        raise DomainError(
            f"x = {cfg.x} outside ({GEOMETRIC_X_GUARD}, {1.0 - GEOMETRIC_X_GUARD}) "
            "required by the A, B coefficients"
        )


def ab_coefficients(cfg: SearchConfig) -> Tuple[float, float, float]:
    """
    Coefficients A <= B and the half-gap lam of the MFG closed form.

    (A, 1) and (B, 1) are the unnormalized eigenvectors of H_MFG, so A B = -1;
    the member without cancellation is evaluated directly and the other
    through that identity.

    Returns:
        (A, B, lam)
    """
    _check_geometric_domain(cfg)
    x, e, ep = cfg.x, cfg.E, cfg.e_prime
    root = _gap(cfg)
    denom = 2.0 * x * ep * math.sqrt(1.0 - x ** 2)
    base = e - ep + 2.0 * x ** 2 * ep
    if base < 0.0:
        a = (base - root) / denom
        b = -1.0 / a
    else:
        b = (base + root) / denom
        a = -1.0 / b
    return a, b, 0.5 * root


def mfg_initial_state(cfg: SearchConfig) -> PureState:
    """
    Closed-form MFG initial state built from A and B.

    Components (s / (root + q), 1) with s = A + B, q = 1 - AB; finite at
    A + B = 0 (x^2 = (gamma - 1) / 2 gamma), where the state is |r>.
    """
    a, b, _ = ab_coefficients(cfg)
    s = a + b
    q = 1.0 - a * b
    root = math.sqrt(q ** 2 + s ** 2)
    return PureState.from_vector(np.array([s / (root + q), 1.0]))


def mfg_geometric_state(cfg: SearchConfig, t: float) -> PureState:
    """
    Closed-form MFG state: the 2x2 propagation matrix in terms of A, B and
    lam applied to mfg_initial_state.
    """
    a, b, lam = ab_coefficients(cfg)
    if abs(a - b) < 1e-12:
        raise DegeneracyError(f"|A - B| = {abs(a - b):.3e} too small for the MFG propagator")
    hbar = cfg.hbar
    cos_t = math.cos(lam * t / hbar)
    sin_t = math.sin(lam * t / hbar)
    ratio = (a + b) / (a - b)
    matrix = np.array([
        [cos_t + 1j * ratio * sin_t, -2j * a * b / (a - b) * sin_t],
        [2j / (a - b) * sin_t, cos_t - 1j * ratio * sin_t],
    ])
    phase = np.exp(-1j * (cfg.e_prime + cfg.E) * t / (2.0 * hbar))
    return PureState.from_vector(phase * matrix @ mfg_initial_state(cfg).vector)


def geometric_initial_state(kind: SchemeKind, cfg: SearchConfig) -> PureState:
    if SchemeKind(kind) is SchemeKind.FG:
        return fg_geometric_state(cfg, 0.0)
    return mfg_initial_state(cfg)


def geometric_state(kind: SchemeKind, cfg: SearchConfig, t: float) -> PureState:
    if SchemeKind(kind) is SchemeKind.FG:
        return fg_geometric_state(cfg, t)
    return mfg_geometric_state(cfg, t)


def endpoint_overlap(kind: SchemeKind, cfg: SearchConfig) -> float:
    """|<psi(0)|psi(t*)>| of the geometric states, measured rather than assumed"""
    t_star = optimal_time(kind, cfg)
    return abs(inner(geometric_initial_state(kind, cfg), geometric_state(kind, cfg, t_star)))


def geometric_trajectory(kind: SchemeKind, cfg: SearchConfig, points: int = 1001):
    """
    Sample the closed-form geometric state on a uniform grid over [0, t*].

    Returns:
        geometry.Trajectory carrying the scheme Hamiltonian as generator
    """
    from geometry import Trajectory

    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    times = np.linspace(0.0, optimal_time(kind, cfg), points)
    states = [geometric_state(kind, cfg, float(t)) for t in times]
    return Trajectory(times=times, states=states, generator=hamiltonian(kind, cfg), hbar=cfg.hbar)
