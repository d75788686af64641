import numpy as np
import pytest

from qproc import gallery
from qproc.fidelity import (
    best_basis_program,
    epsilon_g,
    m_matrix,
    optimal_program,
    process_fidelity,
    process_fidelity_unitary,
)
from qproc.gallery import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z
from qproc.linalg import DimensionError, ValidationError, matrix_exp_skew
from qproc.processor import Channel, mixed_program_channel, program_kraus
from qproc.sampling import random_density, random_processor, random_state, random_unitary

from conftest import ket, proj


def test_process_fidelity_self_is_one(rng):
    c = program_kraus(random_processor(2, 3, rng), random_state(3, rng))
    assert process_fidelity(c, c) == pytest.approx(1, abs=1e-8)


def test_rotation_pair_fidelity():
    for t1, t2 in [(0.0, np.pi / 2), (0.4, 1.3), (2.5, 2.5)]:
        expected = np.cos(t1 - t2) ** 2
        c2 = Channel.unitary(gallery.u_theta(t2))
        assert process_fidelity(Channel.unitary(gallery.u_theta(t1)), c2) == pytest.approx(expected, abs=1e-8)
        assert process_fidelity_unitary(gallery.u_theta(t1), c2) == pytest.approx(expected, abs=1e-12)


def test_swap_channel_fidelity_quarter(rng):
    p = gallery.swap_processor(2)
    c = program_kraus(p, random_state(2, rng))
    u = random_unitary(2, rng)
    assert process_fidelity(Channel.unitary(u), c) == pytest.approx(0.25, abs=1e-8)


def test_process_fidelity_dimension_mismatch():
    with pytest.raises(DimensionError):
        process_fidelity(Channel(np.eye(2)), Channel(np.eye(3)))
    with pytest.raises(ValidationError):
        process_fidelity_unitary(2 * np.eye(2), Channel(np.eye(2)))


def test_closed_form_matches_choi_route(rng):
    for _ in range(30):
        d, n = rng.integers(1, 5), rng.integers(1, 9)
        c = program_kraus(random_processor(d, n, rng), random_state(n, rng))
        u = random_unitary(d, rng)
        assert abs(process_fidelity_unitary(u, c) - process_fidelity(Channel.unitary(u), c)) <= 1e-8


def test_global_phase_invariance(rng):
    c = program_kraus(random_processor(3, 2, rng), random_state(2, rng))
    u = random_unitary(3, rng)
    for phi in rng.uniform(0, 2 * np.pi, 5):
        assert abs(process_fidelity_unitary(u, c) - process_fidelity_unitary(np.exp(1j * phi) * u, c)) <= 1e-10


def test_quadratic_form_convention(rng):
    """<Xi|M|Xi> with the program amplitudes themselves (not conjugated)
    reproduces the Kraus-trace fidelity; the conjugated vector does not."""
    p = random_processor(2, 4, rng)
    u = random_unitary(2, rng)
    m = m_matrix(p, u)
    xi = random_state(4, rng)
    direct = process_fidelity_unitary(u, program_kraus(p, xi))
    assert m.fidelity(xi) == pytest.approx(direct, abs=1e-12)
    assert abs(m.fidelity(xi.conj()) - direct) > 1e-6
    best = optimal_program(p, u)
    assert process_fidelity_unitary(u, program_kraus(p, best.program)) == pytest.approx(best.fidelity, abs=1e-12)


def test_m_matrix_invariants(rng):
    for _ in range(20):
        d, n = rng.integers(1, 5), rng.integers(1, 9)
        m = m_matrix(random_processor(d, n, rng), random_unitary(d, rng))
        assert np.linalg.norm(m.entries - m.entries.conj().T) <= 1e-10
        w = m.spectrum
        assert w[-1] >= -1e-10 and w[0] <= 1 + 1e-10


def test_u_processor_m_is_diagonal(rng):
    ops = [random_unitary(3, rng) for _ in range(4)]
    u = random_unitary(3, rng)
    m = m_matrix(gallery.controlled_u_processor(ops), u).entries
    expected = [abs(np.trace(u.conj().T @ op)) ** 2 / 9 for op in ops]
    np.testing.assert_allclose(m, np.diag(expected), atol=1e-14)


def test_swap_m_matrix_is_scaled_identity(rng):
    # SWAP blocks are A_jk = |k><j|, so Tr(U^+ A_jk) = <j|U^+|k> and
    # M = (U^+)^+ (U^+) / D^2 = I / D^2 for every unitary U
    for d in (2, 3):
        m = m_matrix(gallery.swap_processor(d), random_unitary(d, rng)).entries
        np.testing.assert_allclose(m, np.eye(d) / d**2, atol=1e-14)


def test_identity_processor_m():
    m = m_matrix(gallery.identity_processor(3, 1), np.eye(3)).entries
    np.testing.assert_allclose(m, [[1]])


def test_optimal_program_examples(rng):
    ops = [random_unitary(2, rng) for _ in range(3)]
    res = optimal_program(gallery.controlled_u_processor(ops), ops[1])
    assert res.fidelity == pytest.approx(1, abs=1e-10)
    assert abs(res.program[1]) == pytest.approx(1, abs=1e-10)
    res = optimal_program(gallery.swap_processor(2), random_unitary(2, rng))
    assert res.fidelity == pytest.approx(0.25, abs=1e-12)
    for n in (4, 8):
        res = optimal_program(gallery.rotation_processor(n), gallery.u_theta(0.3))
        assert res.fidelity >= np.cos(np.pi / n) ** 2 - 1e-12


def test_optimum_beats_sampled_programs(rng):
    p = random_processor(2, 5, rng)
    u = random_unitary(2, rng)
    best = optimal_program(p, u).fidelity
    m = m_matrix(p, u)
    samples = [m.fidelity(random_state(5, rng)) for _ in range(1000)]
    assert max(samples) <= best + 1e-10


def test_mixed_programs_never_beat_pure_optimum(rng):
    p = random_processor(2, 4, rng)
    u = random_unitary(2, rng)
    best = optimal_program(p, u).fidelity
    m = m_matrix(p, u)
    for _ in range(50):
        xi = random_density(4, seed=rng)
        f = process_fidelity_unitary(u, mixed_program_channel(p, xi))
        assert f == pytest.approx(m.fidelity_mixed(xi), abs=1e-12)
        assert f <= best + 1e-10


def test_schwarz_ceiling(rng):
    for _ in range(50):
        d, n = rng.integers(1, 5), rng.integers(1, 7)
        c = program_kraus(random_processor(d, n, rng), random_state(n, rng))
        assert process_fidelity_unitary(random_unitary(d, rng), c) <= 1 + 1e-10


def test_perfect_targets_have_orthogonal_programs(rng):
    ops = [random_unitary(2, rng) for _ in range(4)]
    p = gallery.controlled_u_processor(ops)
    progs = []
    for u in ops:
        res = optimal_program(p, u)
        assert res.fidelity == pytest.approx(1, abs=1e-10)
        progs.append(res.program)
    gram = np.abs(np.array(progs).conj() @ np.array(progs).T)
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)


def test_best_basis_program():
    n = 4
    ops = [gallery.u_theta(t) for t in gallery.theta_grid(n)]
    # cos^2(theta_m - 0.1) over theta_m = 0, pi/2, pi, 3pi/2 peaks at m = 0 and m = 2
    scores = np.cos(gallery.theta_grid(n) - 0.1) ** 2
    k, f = best_basis_program(ops, gallery.u_theta(0.1))
    assert k == 0 and f == pytest.approx(scores.max(), abs=1e-12)
    # U(theta + pi) = -U(theta): ops[1] and ops[3] tie, lowest index wins
    k, f = best_basis_program(ops, ops[3])
    assert k == 1 and f == pytest.approx(1)
    k, f = best_basis_program(ops[1:], ops[2])
    assert k == 1 and f == pytest.approx(1)
    target = matrix_exp_skew(1j * np.pi / 8 * PAULI_Z)
    k, f = best_basis_program([PAULI_I, PAULI_X, PAULI_Y, PAULI_Z], target)
    assert k == 0 and f == pytest.approx(np.cos(np.pi / 8) ** 2, abs=1e-12)
    with pytest.raises(ValueError):
        best_basis_program([], PAULI_X)


def test_epsilon_g(rng):
    ops = [random_unitary(2, rng) for _ in range(3)]
    assert epsilon_g(gallery.controlled_u_processor(ops), ops) == pytest.approx(0, abs=1e-10)
    targets = [random_unitary(2, rng) for _ in range(10)]
    assert epsilon_g(gallery.swap_processor(2), targets) == pytest.approx(0.75, abs=1e-12)
    targets = [random_unitary(3, rng) for _ in range(10)]
    assert epsilon_g(gallery.swap_processor(3), targets) == pytest.approx(1 - 1 / 9, abs=1e-12)


def test_epsilon_g_over_candidates(rng):
    ops = [PAULI_I, PAULI_X]
    p = gallery.controlled_u_processor(ops)
    assert epsilon_g(p, ops, [ket(2, 0), ket(2, 1)]) == pytest.approx(0)
    assert epsilon_g(p, ops, [ket(2, 0)]) == pytest.approx(1)
    assert epsilon_g(p, ops, [np.eye(2) / 2]) == pytest.approx(0.5)
