"""
Tests for the FG and MFG search dynamics
"""
import math

import numpy as np
import pytest

from errors import DomainError
from hilbert import PureState, inner, propagate, spectrum
from search import (
    SchemeKind,
    SearchConfig,
    ab_coefficients,
    endpoint_overlap,
    fg_geometric_state,
    geometric_initial_state,
    geometric_state,
    geometric_trajectory,
    hamiltonian,
    max_probability,
    mfg_geometric_state,
    mfg_initial_state,
    optimal_time,
    search_time_scaling,
    source_state,
    transition_probability,
    transition_probability_oracle,
)

FG, MFG = SchemeKind.FG, SchemeKind.MFG


def random_configs(seed: int, count: int):
    rng = np.random.default_rng(seed)
    return [
        SearchConfig(x=rng.uniform(0.01, 0.99), E=rng.uniform(0.5, 2.0),
                     gamma=rng.uniform(1.0, 5.0), hbar=rng.uniform(0.5, 2.0))
        for _ in range(count)
    ]


@pytest.mark.parametrize('kwargs', [
    {'x': 0.0}, {'x': 1.0}, {'x': -0.2}, {'x': 0.5, 'gamma': 0.9},
    {'x': 0.5, 'E': 0.0}, {'x': 0.5, 'hbar': -1.0}, {'x': float('nan')},
])
def test_config_rejects_out_of_domain(kwargs):
    with pytest.raises(DomainError):
        SearchConfig(**kwargs)


def test_fg_ignores_gamma():
    cfg = SearchConfig(x=0.3, gamma=2.0)
    assert hamiltonian(FG, cfg) == hamiltonian(FG, SearchConfig(x=0.3))
    assert optimal_time(FG, cfg) == optimal_time(FG, SearchConfig(x=0.3))


def test_hamiltonian_is_oracle_plus_driver():
    """E|w><w| + E'|s><s|"""
    cfg = SearchConfig(x=0.4, E=1.3, gamma=1.7)
    s = source_state(cfg).vector
    expected = cfg.E * np.diag([1.0, 0.0]) + cfg.e_prime * np.outer(s, s.conj())
    assert np.allclose(hamiltonian(MFG, cfg).matrix, expected, atol=1e-14)


def test_fg_reaches_target_at_optimal_time():
    cfg = SearchConfig(x=0.2, E=1.5)
    assert transition_probability(FG, cfg, 0.0) == pytest.approx(cfg.x ** 2)
    assert transition_probability(FG, cfg, optimal_time(FG, cfg)) == pytest.approx(1.0, abs=1e-14)
    assert max_probability(FG, cfg) == 1.0


def test_mfg_peak_probability():
    """x = 0.5, gamma = 2: x^2 (E'+E)^2 / (4x^2E'E + (E'-E)^2) = 3/4"""
    cfg = SearchConfig(x=0.5, gamma=2.0)
    assert max_probability(MFG, cfg) == pytest.approx(0.75, abs=1e-14)
    assert transition_probability(MFG, cfg, optimal_time(MFG, cfg)) == pytest.approx(0.75, abs=1e-14)


def test_mfg_optimal_time_never_exceeds_fg():
    for cfg in random_configs(11, 50):
        assert optimal_time(MFG, cfg) <= optimal_time(FG, cfg) * (1.0 + 1e-14)
    cfg = SearchConfig(x=0.37, E=0.8)
    assert optimal_time(MFG, cfg) == pytest.approx(optimal_time(FG, cfg), rel=1e-14)


def test_mfg_reduces_to_fg_at_unit_gamma():
    cfg = SearchConfig(x=0.31)
    for t in np.linspace(0.0, 10.0, 17):
        assert transition_probability(MFG, cfg, t) == pytest.approx(transition_probability(FG, cfg, t), abs=1e-14)


def test_closed_forms_match_spectral_propagation():
    """50 random scenarios, random times in [0, 2 t*]"""
    rng = np.random.default_rng(5)
    for cfg in random_configs(5, 50):
        for kind in SchemeKind:
            t = rng.uniform(0.0, 2.0 * optimal_time(kind, cfg))
            closed = transition_probability(kind, cfg, t)
            assert closed == pytest.approx(transition_probability_oracle(kind, cfg, t), abs=1e-10)


def test_negative_time_is_rejected():
    with pytest.raises(DomainError):
        transition_probability(FG, SearchConfig(x=0.5), -1.0)


def test_search_time_scales_with_square_root_of_items():
    rows = search_time_scaling([4, 16, 64, 256])
    for n_items, x, t_fg in rows:
        assert x == pytest.approx(1.0 / math.sqrt(n_items))
        assert t_fg / math.sqrt(n_items) == pytest.approx(math.pi / 2.0)
    with pytest.raises(DomainError):
        search_time_scaling([1])


def test_ab_coefficients_are_eigenvector_ratios():
    """(A, 1) and (B, 1) are eigenvectors of H_MFG with A B = -1"""
    for cfg in random_configs(17, 30):
        a, b, lam = ab_coefficients(cfg)
        assert a < b
        assert a * b == pytest.approx(-1.0, rel=1e-12)
        h = hamiltonian(MFG, cfg)
        spec = spectrum(h)
        assert lam == pytest.approx(0.5 * spec.gap, rel=1e-10)
        for ratio, energy in ((a, spec.e_minus), (b, spec.e_plus)):
            vec = np.array([ratio, 1.0])
            assert np.allclose(h.matrix @ vec, energy * vec, rtol=1e-10, atol=1e-9)


def test_ab_coefficients_guard_band():
    with pytest.raises(DomainError):
        ab_coefficients(SearchConfig(x=1e-7, gamma=2.0))
    with pytest.raises(DomainError):
        mfg_initial_state(SearchConfig(x=1.0 - 1e-7, gamma=2.0))


def test_geometric_states_evolve_under_their_hamiltonian():
    """Closed-form states equal exp(-iHt/hbar) psi(0), phase included"""
    rng = np.random.default_rng(23)
    for cfg in random_configs(23, 20):
        for kind in SchemeKind:
            psi0 = geometric_initial_state(kind, cfg)
            t = rng.uniform(0.0, optimal_time(kind, cfg))
            evolved = propagate(hamiltonian(kind, cfg), psi0, t, cfg.hbar)
            assert np.allclose(geometric_state(kind, cfg, t).vector, evolved.vector, atol=1e-10)


def test_geometric_initial_state_is_balanced_superposition():
    """Equal weight on both eigenstates"""
    for cfg in random_configs(29, 20):
        for kind in SchemeKind:
            spec = spectrum(hamiltonian(kind, cfg))
            psi0 = geometric_initial_state(kind, cfg)
            assert abs(inner(spec.v_minus, psi0)) ** 2 == pytest.approx(0.5, abs=1e-12)


def test_mfg_state_reduces_to_fg_state():
    cfg = SearchConfig(x=0.25)
    for t in np.linspace(0.0, optimal_time(FG, cfg), 9):
        assert np.allclose(mfg_geometric_state(cfg, t).vector, fg_geometric_state(cfg, t).vector, atol=1e-12)


def test_geometric_endpoints_are_orthogonal():
    """|<psi(0)|psi(t*)>| vanishes for every scenario"""
    for cfg in random_configs(31, 30):
        for kind in SchemeKind:
            assert endpoint_overlap(kind, cfg) <= 1e-10


def test_geometric_trajectory_grid():
    cfg = SearchConfig(x=0.25)
    traj = geometric_trajectory(FG, cfg, points=11)
    assert len(traj) == 11
    assert traj.times[-1] == pytest.approx(optimal_time(FG, cfg))
    assert traj.generator == hamiltonian(FG, cfg)
    with pytest.raises(DomainError):
        geometric_trajectory(FG, cfg, points=1)


def test_config_accepts_numpy_scalars():
    cfg = SearchConfig(x=np.float32(0.25), E=np.float64(1.5), gamma=np.int64(2))
    assert type(cfg.x) is float and type(cfg.gamma) is float
    assert cfg.x == 0.25
    assert cfg == SearchConfig(x=0.25, E=1.5, gamma=2.0)
    for x in np.linspace(0.1, 0.9, 5):
        assert optimal_time(MFG, SearchConfig(x=x, gamma=2.0)) > 0.0
    with pytest.raises(DomainError):
        SearchConfig(x='0.5')
    with pytest.raises(DomainError):
        SearchConfig(x=0.5, gamma=True)


def test_mfg_time_and_peak_probability_fall_with_gamma():
    gammas = np.linspace(1.0, 10.0, 50)
    for x in (0.05, 0.3, 0.7):
        times = [optimal_time(MFG, SearchConfig(x=x, gamma=g)) for g in gammas]
        peaks = [max_probability(MFG, SearchConfig(x=x, gamma=g)) for g in gammas]
        assert np.all(np.diff(times) < 0.0)
        assert np.all(np.diff(peaks) < 0.0)
        assert peaks[0] == pytest.approx(1.0)


def test_mfg_states_where_a_plus_b_vanishes():
    """x^2 = (gamma - 1) / (2 gamma): A = -1, B = 1 and psi(0) = |r>"""
    cfg = SearchConfig(x=0.5, gamma=2.0)
    a, b, _ = ab_coefficients(cfg)
    assert a + b == pytest.approx(0.0, abs=1e-12)
    psi0 = mfg_initial_state(cfg)
    assert psi0.phase_equal(PureState.basis_r(), tol=1e-12)
    h = hamiltonian(MFG, cfg)
    for t in np.linspace(0.0, optimal_time(MFG, cfg), 7):
        expected = propagate(h, psi0, float(t))
        assert np.allclose(mfg_geometric_state(cfg, float(t)).vector, expected.vector, atol=1e-10)
    assert endpoint_overlap(MFG, cfg) <= 1e-10
    assert len(geometric_trajectory(MFG, cfg, points=11)) == 11
