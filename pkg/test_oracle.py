"""
Tests for the brute-force numerical oracle
"""
import math

import numpy as np
import pytest

from analysis import fg_mapping_lambda
from errors import ConfigurationError, ConvergenceError, PreconditionError
from geometry import GeodesicArc, endpoint_arc, geodesic_trajectory
from hilbert import HermitianOperator, PureState, inner, propagate
from oracle import (
    IntegratorSpec,
    convergence_ratio,
    default_integrator_spec,
    golden_section_minimize,
    integrate_schrodinger,
    min_d2_profile,
    oracle_transition_probability,
    terminal_state,
)
from search import (
    SchemeKind,
    SearchConfig,
    fg_geometric_state,
    geometric_trajectory,
    hamiltonian,
    optimal_time,
    source_state,
    transition_probability,
)


def test_integrator_spec_validation():
    with pytest.raises(ConvergenceError):
        IntegratorSpec(99)
    with pytest.raises(PreconditionError):
        IntegratorSpec(1000, method='euler')
    assert IntegratorSpec(150).doubled().steps == 300


def test_default_spec_follows_environment(monkeypatch):
    monkeypatch.setenv('QSG_DEFAULT_STEPS', '500')
    assert default_integrator_spec().steps == 500
    monkeypatch.setenv('QSG_DEFAULT_STEPS', 'many')
    with pytest.raises(ConfigurationError):
        default_integrator_spec()
    monkeypatch.setenv('QSG_DEFAULT_STEPS', '50')
    with pytest.raises(ConfigurationError):
        default_integrator_spec()


def test_zero_hamiltonian_leaves_state_fixed():
    psi0 = PureState.from_vector([1.0, 2.0j])
    traj = integrate_schrodinger(HermitianOperator(0.0, 0.0), psi0, 3.0, IntegratorSpec(100))
    assert len(traj) == 101
    assert all(np.allclose(psi.vector, psi0.vector, atol=1e-15) for psi in traj.states)


def test_rk4_matches_spectral_propagation():
    """FG at x = 0.5 over [0, t_FG]"""
    cfg = SearchConfig(x=0.5)
    h = hamiltonian(SchemeKind.FG, cfg)
    t_end = optimal_time(SchemeKind.FG, cfg)
    traj = integrate_schrodinger(h, source_state(cfg), t_end, IntegratorSpec(10000))
    exact = propagate(h, source_state(cfg), t_end)
    assert abs(inner(exact, traj.last)) ** 2 >= 1.0 - 1e-10
    assert np.linalg.norm(traj.last.vector - exact.vector) <= 1e-10
    assert traj.generator == h


def test_rk4_reaches_the_closed_form_fg_state():
    cfg = SearchConfig(x=0.5)
    h = hamiltonian(SchemeKind.FG, cfg)
    t_end = optimal_time(SchemeKind.FG, cfg)
    traj = integrate_schrodinger(h, fg_geometric_state(cfg, 0.0), t_end, IntegratorSpec(10000))
    assert abs(inner(fg_geometric_state(cfg, t_end), traj.last)) ** 2 >= 1.0 - 1e-10
    last = terminal_state(h, fg_geometric_state(cfg, 0.0), t_end, IntegratorSpec(10000))
    assert np.allclose(last.vector, traj.last.vector, atol=1e-15)
    with pytest.raises(PreconditionError):
        terminal_state(h, fg_geometric_state(cfg, 0.0), 0.0)


def test_rk4_is_fourth_order():
    """Halving the step shrinks the terminal error about sixteenfold"""
    cfg = SearchConfig(x=0.5)
    t_end = 10.0 * optimal_time(SchemeKind.FG, cfg)
    ratio = convergence_ratio(hamiltonian(SchemeKind.FG, cfg), source_state(cfg), t_end, 200)
    assert 8.0 <= ratio <= 32.0


def test_too_coarse_step_is_rejected():
    cfg = SearchConfig(x=0.5)
    with pytest.raises(ConvergenceError):
        integrate_schrodinger(hamiltonian(SchemeKind.FG, cfg), source_state(cfg), 1000.0, IntegratorSpec(100))
    with pytest.raises(PreconditionError):
        integrate_schrodinger(hamiltonian(SchemeKind.FG, cfg), source_state(cfg), 0.0)


@pytest.mark.parametrize('kind,x,gamma', [
    (SchemeKind.FG, 0.3, 1.0),
    (SchemeKind.MFG, 0.3, 2.0),
    (SchemeKind.MFG, 0.7, 1.4),
])
def test_oracle_probability_matches_closed_form(kind, x, gamma):
    cfg = SearchConfig(x=x, gamma=gamma)
    t = 0.8 * optimal_time(kind, cfg)
    numeric = oracle_transition_probability(kind, cfg, t, IntegratorSpec(10000))
    assert numeric == pytest.approx(transition_probability(kind, cfg, t), abs=1e-10)
    assert oracle_transition_probability(kind, cfg, 0.0) == pytest.approx(x ** 2)


# ==================== MINIMIZATION ====================

def test_golden_section_interior_minimum():
    x, value = golden_section_minimize(lambda v: (v - 0.3) ** 2 + 1.0, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert value == pytest.approx(1.0, abs=1e-14)


def test_golden_section_boundary_minimum():
    x, value = golden_section_minimize(lambda v: v, 0.0, 1.0)
    assert x == 0.0
    assert value == 0.0
    x, value = golden_section_minimize(lambda v: -v, 0.0, 1.0)
    assert x == 1.0
    with pytest.raises(PreconditionError):
        golden_section_minimize(lambda v: v, 1.0, 0.0)


def test_geodesic_against_itself():
    """Residual vanishes and the argmin runs monotonically from 0 to 1"""
    rng = np.random.default_rng(3)
    a = PureState.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
    b = PureState.from_vector(rng.normal(size=2) + 1j * rng.normal(size=2))
    arc = GeodesicArc.between(a, b)
    profile = min_d2_profile(geodesic_trajectory(arc, points=201), arc)
    assert profile.residual_sup <= 1e-12
    assert np.all(np.diff(profile.lambdas) >= -1e-7)
    assert profile.lambdas[0] == pytest.approx(0.0, abs=1e-6)
    assert profile.lambdas[-1] == pytest.approx(1.0, abs=1e-6)


def test_fg_profile_follows_closed_form_mapping():
    cfg = SearchConfig(x=0.25)
    traj = geometric_trajectory(SchemeKind.FG, cfg, points=201)
    profile = min_d2_profile(traj, endpoint_arc(traj))
    assert profile.residual_sup <= 1e-9
    expected = np.array([fg_mapping_lambda(cfg, float(t)) for t in traj.times])
    assert np.max(np.abs(profile.lambdas - expected)) <= 1e-6


def test_mfg_profile_leaves_the_geodesic():
    traj = geometric_trajectory(SchemeKind.MFG, SearchConfig(x=0.3, gamma=2.0), points=201)
    assert min_d2_profile(traj, endpoint_arc(traj)).residual_sup > 1e-3


def test_scan_grid_floor():
    traj = geometric_trajectory(SchemeKind.FG, SearchConfig(x=0.25), points=11)
    with pytest.raises(PreconditionError):
        min_d2_profile(traj, endpoint_arc(traj), grid=32)
    assert math.isfinite(min_d2_profile(traj, endpoint_arc(traj), grid=64).residual_sup)
