import math

import numpy as np
import pytest

from rydramsey import oracle
from rydramsey.errors import CapacityError, ParameterError
from rydramsey.ising_core import RamseyProtocol, f_kernel, sigma_plus_couplings


def rand_couplings(n, rng, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    v = (a + a.T) / 2.0
    np.fill_diagonal(v, 0.0)
    return v


def test_two_spin_hamiltonian_spectrum():
    # V/4 zz + (V/4)(z_1 + z_2): uu pays 3V/4, all others -V/4
    v = 1.6
    h = oracle.build_hamiltonian(np.array([[0.0, v], [v, 0.0]]))
    # basis order: bit k set <=> spin k up; index 0 = dd, 3 = uu
    assert h == pytest.approx(np.array([-v / 4, -v / 4, -v / 4, 3 * v / 4]))


def test_interaction_only_hamiltonian():
    v = 2.0
    h = oracle.build_hamiltonian(np.array([[0.0, v], [v, 0.0]]), include_fields=False)
    assert h == pytest.approx(np.array([v / 4, -v / 4, -v / 4, v / 4]))


def test_capacity_limit():
    with pytest.raises(CapacityError):
        oracle.build_hamiltonian(np.zeros((9, 9)))


def test_asymmetric_couplings_rejected():
    with pytest.raises(ParameterError):
        oracle.build_hamiltonian(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_initial_pulse_product_state():
    # theta pulse on |down...down>: <sz> = -cos(theta) on every site
    theta = 0.8
    rho = oracle.initial_density_matrix(3)
    seq = oracle.PulseSequence(steps=(oracle.Pulse(theta),))
    rho_t = oracle.evolve_master(rho, np.zeros((3, 3)), seq)
    for k in range(3):
        sz = oracle.expectation(rho_t, oracle.site_operator("z", k, 3))
        assert sz.real == pytest.approx(-math.cos(theta), abs=1e-12)
        sx = oracle.expectation(rho_t, oracle.site_operator("x", k, 3))
        assert sx.real == pytest.approx(math.sin(theta), abs=1e-12)


def test_density_matrix_invariants_along_evolution():
    rng = np.random.default_rng(17)
    v = rand_couplings(4, rng)
    proto = RamseyProtocol(math.pi / 3, False, 0.25, 0.1)
    times = np.linspace(0.0, 4.0, 5)
    rho = oracle.initial_density_matrix(4)
    seq = oracle.ramsey_sequence(proto.theta, times[-1])
    rho_t = oracle.evolve_master(
        rho, v, seq, gamma=proto.gamma, gamma_d=proto.gamma_d
    )
    diag = oracle.validate_density_matrix(rho_t)
    assert diag["hermiticity_deviation"] <= 1e-12
    assert diag["trace_deviation"] <= 1e-10
    assert diag["min_eigenvalue"] >= -1e-8


def test_unitary_purity_preserved():
    rng = np.random.default_rng(4)
    v = rand_couplings(5, rng)
    rho = oracle.initial_density_matrix(5)
    seq = oracle.ramsey_sequence(math.pi / 2, 3.0)
    rho_t = oracle.evolve_master(rho, v, seq)
    purity = oracle.expectation(rho_t, rho_t).real
    assert purity == pytest.approx(1.0, abs=1e-10)


def test_single_spin_decay_rate_pins_prefactor():
    """Coherence of one decaying spin falls as e^{-gamma t/2}.

    This is the measurement that fixes the closed form's global decay
    exponent; it must stay in lockstep with coherence_decay.
    """
    gamma = 0.3
    theta = math.pi / 2
    v = np.zeros((1, 1))
    times = np.array([0.0, 1.0, 3.0, 6.0])
    vals = oracle.ramsey_sigma_plus(v, RamseyProtocol(theta, False, gamma, 0.0), times)
    want = math.sin(theta) * np.exp(-gamma * times / 2.0)
    assert np.max(np.abs(vals - want)) < 1e-9


def test_single_spin_dephasing_rate():
    gamma_d = 0.4
    v = np.zeros((1, 1))
    times = np.array([0.0, 0.7, 2.5])
    vals = oracle.ramsey_sigma_plus(
        v, RamseyProtocol(math.pi / 2, False, 0.0, gamma_d), times
    )
    assert np.max(np.abs(vals - np.exp(-gamma_d * times))) < 1e-9


def test_dephasing_leaves_populations():
    rho = oracle.initial_density_matrix(2)
    seq = oracle.ramsey_sequence(math.pi / 3, 2.0)
    rng = np.random.default_rng(2)
    v = rand_couplings(2, rng)
    free = oracle.evolve_master(rho, v, seq)
    deph = oracle.evolve_master(rho, v, seq, gamma_d=0.5)
    assert np.max(np.abs(np.diag(free) - np.diag(deph))) < 1e-10


def test_closed_form_agreement_all_sizes():
    rng = np.random.default_rng(100)
    for n in range(2, 7):
        v = rand_couplings(n, rng)
        for echo in (True, False):
            proto = RamseyProtocol(math.pi / 4, echo, 0.0, 0.0)
            times = np.linspace(0.0, 5.0, 6)
            ref = oracle.ramsey_sigma_plus(v, proto, times)
            got = np.array([sigma_plus_couplings(v, proto, t) for t in times])
            assert np.max(np.abs(got - ref)) < 1e-12


def test_two_spin_kernel_reproduction():
    # N = 2 oracle reduces to a single pair kernel evaluation
    v = 0.9
    couplings = np.array([[0.0, v], [v, 0.0]])
    gamma = 0.2
    theta = 1.1
    times = np.array([0.5, 1.5, 4.0])
    for echo, beta in ((True, 0), (False, 1)):
        proto = RamseyProtocol(theta, echo, gamma, 0.0)
        vals = oracle.ramsey_sigma_plus(couplings, proto, times)
        want = np.array(
            [
                math.sin(theta)
                * math.exp(-gamma * t / 2.0)
                * f_kernel(v * t, gamma * t, theta, beta)
                for t in times
            ]
        )
        assert np.max(np.abs(vals - want)) < 1e-6


def test_permutation_covariance():
    rng = np.random.default_rng(8)
    n = 4
    v = rand_couplings(n, rng)
    perm = np.array([2, 0, 3, 1])
    vp = v[np.ix_(perm, perm)]
    proto = RamseyProtocol(math.pi / 2, False, 0.15, 0.0)
    t = np.array([1.3])
    a = oracle.ramsey_sigma_plus(v, proto, t, per_spin=False)

    rho = oracle.initial_density_matrix(n)
    seq = oracle.ramsey_sequence(proto.theta, 1.3)
    rho_p = oracle.evolve_master(rho, vp, seq, gamma=proto.gamma)
    # site k of the permuted system is site perm[k] of the original
    per_site = [
        oracle.expectation(rho_p, oracle.site_operator("plus", k, n))
        for k in range(n)
    ]
    assert sum(per_site) == pytest.approx(complex(a[0]), abs=1e-10)


def test_echo_equivalence_unitary_and_dissipative():
    rng = np.random.default_rng(55)
    v = rand_couplings(5, rng)
    clean = oracle.echo_equivalence_check(v, math.pi / 2, 2.0)
    assert clean["max_observable_deviation"] < 1e-12
    assert abs(clean["fidelity_gap"]) < 1e-10
    lossy = oracle.echo_equivalence_check(v, math.pi / 2, 2.0, gamma=0.2)
    # the pulse-reordering identity genuinely fails under dissipation
    assert lossy["max_observable_deviation"] > 1e-3


def test_echo_semantics_differ_dissipatively():
    rng = np.random.default_rng(77)
    v = rand_couplings(3, rng)
    proto = RamseyProtocol(math.pi / 2, True, 0.3, 0.0)
    times = np.array([2.0])
    model = oracle.ramsey_sigma_plus(v, proto, times, semantics="model")
    phys = oracle.ramsey_sigma_plus(v, proto, times, semantics="physical")
    assert abs(model[0] - phys[0]) > 1e-6  # distinct observables
    unit = RamseyProtocol(math.pi / 2, True, 0.0, 0.0)
    m0 = oracle.ramsey_sigma_plus(v, unit, times, semantics="model")
    p0 = oracle.ramsey_sigma_plus(v, unit, times, semantics="physical")
    assert abs(m0[0] - p0[0]) < 1e-12


def test_reported_frame_matches_tipping_amplitude():
    # after [theta, pi] the reported coherence starts at sin(theta), not
    # at -sin(theta) as in the lab frame
    v = np.zeros((2, 2))
    proto = RamseyProtocol(0.6, True, 0.0, 0.0)
    vals = oracle.ramsey_sigma_plus(v, proto, np.array([0.0]))
    assert vals[0] == pytest.approx(math.sin(0.6), abs=1e-12)
    lab = oracle.ramsey_sigma_plus(v, proto, np.array([0.0]), frame="lab")
    assert lab[0] == pytest.approx(-math.sin(0.6), abs=1e-12)


def test_fidelity_pure_states():
    up = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    down = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    plus = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    assert oracle.fidelity(up, up) == pytest.approx(1.0, abs=1e-12)
    assert oracle.fidelity(up, down) == pytest.approx(0.0, abs=1e-12)
    assert oracle.fidelity(up, plus) == pytest.approx(0.5, abs=1e-12)


def test_pulse_sequence_dark_time():
    seq = oracle.echo_physical_sequence(math.pi / 2, 4.0)
    assert seq.dark_time == pytest.approx(4.0)
    model = oracle.echo_model_sequence(math.pi / 2, 4.0)
    assert model.dark_time == pytest.approx(4.0)
