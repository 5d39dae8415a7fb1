"""Checks for the factorization pipeline: small-group solvers, Cartan
decompositions, and the public synthesize/state-transfer entry points."""

import numpy as np
import pytest

from symspin.synthesis import (
    k_factor_plan,
    kak_aiii_su4,
    kak_su3,
    plan_from_json,
    plan_to_json,
    plan_unitary,
    state_transfer_plan,
    su2_two_axis,
    synthesize,
    torus_factor_plan,
)
from symspin import synthesis as syn
from symspin.spin_model import ghz_state, ket, w_state
from symspin.tensor_core import mat_exp


def _haar_su(d, rng):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.exp(-1j * np.angle(np.diag(r))))
    return q * np.exp(-1j * np.angle(np.linalg.det(q)) / d)


def _replay(steps, n=3):
    u = np.eye(4 if n == 3 else 3, dtype=complex)
    for tag, t in steps:
        u = mat_exp(syn._GENERATORS[n][tag] * t) @ u
    return u


def _z_replay(steps):
    u = np.eye(2, dtype=complex)
    for tag, t in steps:
        gen = syn.Z1 if tag == "Z1" else syn.Z2
        u = mat_exp(gen * t) @ u
    return u


# --- two-axis SU(2) solver ---------------------------------------------------


def test_su2_two_axis_random_ensemble():
    rng = np.random.default_rng(7)
    for _ in range(200):
        v = _haar_su(2, rng)
        steps = su2_two_axis(v)
        assert len(steps) <= 4
        assert all(0.0 <= t < np.pi + 1e-12 for _, t in steps)
        assert np.abs(_z_replay(steps) - v).max() < 1e-10


def test_su2_two_axis_identity_and_diagonal():
    assert su2_two_axis(np.eye(2, dtype=complex)) == []
    v = np.diag(np.exp([0.9j, -0.9j]))
    steps = su2_two_axis(v)
    assert len(steps) == 1
    assert np.abs(_z_replay(steps) - v).max() < 1e-12


def test_su2_two_axis_near_diagonal_noise_floor():
    # A target that is diagonal up to floating-point dust used to trip the
    # solver into emitting a spurious middle factor.
    v = np.diag(np.exp([2.3271j, -2.3271j]))
    v[0, 1] = 3e-16
    v[1, 0] = -3e-16
    steps = su2_two_axis(v)
    assert np.abs(_z_replay(steps) - v).max() < 1e-10


def test_su2_two_axis_branch_boundary():
    # |v00| = 1/2 sits exactly on the three-vs-four factor branch point.
    s2b = np.sqrt((4.0 / 3.0) * (1 - 0.25))
    b = np.arcsin(min(1.0, s2b)) / 2
    v = _z_replay([("Z1", 0.3), ("Z2", b), ("Z1", 1.2)])
    steps = su2_two_axis(v)
    assert np.abs(_z_replay(steps) - v).max() < 1e-10


def test_su2_two_axis_rejects_non_unitary():
    with pytest.raises(ValueError):
        su2_two_axis(np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))


# --- Cartan decompositions ---------------------------------------------------


def test_kak_su3_reconstructs_with_real_orthogonal_factors():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = _haar_su(3, rng)
        f = kak_su3(x)
        assert np.abs(f.k1 @ f.a @ f.k2 - x).max() < 1e-8
        for q in (f.k1, f.k2):
            assert np.abs(q.imag).max() < 1e-8
            assert np.abs(q @ q.T - np.eye(3)).max() < 1e-8
            assert np.linalg.det(q) == pytest.approx(1.0, abs=1e-8)
        assert np.abs(f.a - np.diag(np.diag(f.a))).max() < 1e-12
        assert np.abs(np.abs(np.diag(f.a)) - 1.0).max() < 1e-10


def test_kak_su3_handles_degenerate_torus_angles():
    # Real orthogonal input makes every torus angle coincide at zero.
    th = 0.4
    x = np.array(
        [
            [np.cos(th), -np.sin(th), 0],
            [np.sin(th), np.cos(th), 0],
            [0, 0, 1.0],
        ],
        dtype=complex,
    )
    f = kak_su3(x)
    assert np.abs(f.k1 @ f.a @ f.k2 - x).max() < 1e-10


def test_kak_aiii_su4_reconstructs():
    rng = np.random.default_rng(13)
    for _ in range(50):
        x = _haar_su(4, rng)
        f = kak_aiii_su4(x)
        assert np.abs(f.k1 @ f.a @ f.k2 - x).max() < 1e-8


def test_kak_aiii_factors_stabilize_planes():
    rng = np.random.default_rng(17)
    x = _haar_su(4, rng)
    f = kak_aiii_su4(x)
    for k in (f.k1, f.k2):
        for p, q in ((syn._PLANES[0], syn._PLANES[1]), (syn._PLANES[1], syn._PLANES[0])):
            assert np.abs(k[np.ix_(p, q)]).max() < 1e-8


def test_kak_rejects_bad_inputs():
    with pytest.raises(ValueError):
        kak_su3(np.eye(4, dtype=complex))
    with pytest.raises(ValueError):
        kak_aiii_su4(2.0 * np.eye(4, dtype=complex))


# --- structured plan builders ------------------------------------------------


def test_k_factor_plan_replays_plane_block_elements():
    rng = np.random.default_rng(19)
    for _ in range(10):
        v1, v2 = _haar_su(2, rng), _haar_su(2, rng)
        k = np.zeros((4, 4), dtype=complex)
        k[np.ix_(syn._PLANES[0], syn._PLANES[0])] = v1
        k[np.ix_(syn._PLANES[1], syn._PLANES[1])] = v2
        plan = k_factor_plan(k)
        u = np.exp(1j * plan.phase) * _replay(plan.steps)
        assert np.abs(u - k).max() < 1e-8
        assert plan.reconstruction_error < 1e-8


def test_torus_factor_plan_replays_torus_elements():
    rng = np.random.default_rng(23)
    from scipy.linalg import expm

    for _ in range(10):
        s, r = rng.uniform(-4, 4, size=2)
        a = expm(s * syn.A3 + r * syn.C3)
        plan = torus_factor_plan(a)
        u = np.exp(1j * plan.phase) * _replay(plan.steps)
        assert np.abs(u - a).max() < 1e-8


def test_free_durations_are_canonical():
    rng = np.random.default_rng(29)
    plan = synthesize(3, _haar_su(4, rng), rng=rng)
    for tag, t in plan.steps:
        if tag in ("AZZ", "BZZ"):
            assert 0.0 <= t < 2 * np.pi


# --- public entry points -----------------------------------------------------


def test_synthesize_two_spin_targets():
    rng = np.random.default_rng(31)
    for _ in range(10):
        target = _haar_su(3, rng)
        plan = synthesize(2, target, rng=rng)
        u = np.exp(1j * plan.phase) * plan_unitary(plan)
        assert np.abs(u - target).max() < 1e-8
        assert len(plan.steps) <= 30
        assert plan.reconstruction_error < 1e-8


def test_synthesize_three_spin_targets():
    rng = np.random.default_rng(37)
    for _ in range(5):
        target = _haar_su(4, rng)
        plan = synthesize(3, target, rng=rng)
        u = np.exp(1j * plan.phase) * plan_unitary(plan)
        assert np.abs(u - target).max() < 1e-8
        assert len(plan.steps) <= 30


def test_synthesize_is_deterministic_for_fixed_seed():
    target = _haar_su(4, np.random.default_rng(41))
    p1 = synthesize(3, target, rng=np.random.default_rng(5))
    p2 = synthesize(3, target, rng=np.random.default_rng(5))
    assert [s for s in p1.steps] == [s for s in p2.steps]
    assert p1.phase == p2.phase


def test_synthesize_rejects_unsupported_size():
    with pytest.raises(ValueError):
        synthesize(4, np.eye(5, dtype=complex))


def test_plan_json_round_trip():
    rng = np.random.default_rng(43)
    plan = synthesize(2, _haar_su(3, rng), rng=rng)
    doc = plan_to_json(plan)
    assert set(doc) == {"n", "steps", "phase", "reconstruction_error"}
    back = plan_from_json(doc)
    assert back.n == plan.n
    assert back.steps == plan.steps
    assert back.phase == plan.phase


def test_state_transfer_reaches_named_targets():
    cases = [
        (2, ket(2, "00"), ghz_state(2)),
        (3, ket(3, "000"), ghz_state(3)),
        (3, ket(3, "000"), w_state(3)),
    ]
    for n, init, target in cases:
        plan = state_transfer_plan(n, init.amplitudes, target.amplitudes)
        ci = syn._symmetric_coords(n, init.amplitudes)
        ct = syn._symmetric_coords(n, target.amplitudes)
        out = np.exp(1j * plan.phase) * (plan_unitary(plan) @ ci)
        assert abs(np.vdot(ct, out)) ** 2 > 1 - 1e-10


def test_state_transfer_rejects_states_outside_symmetric_sector():
    bad = np.zeros(8, dtype=complex)
    bad[1] = 1.0  # |001> alone is not permutation invariant
    with pytest.raises(ValueError):
        state_transfer_plan(3, ket(3, "000").amplitudes, bad)
