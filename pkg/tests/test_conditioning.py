import numpy as np
import pytest

from gaussloc.conditioning import (
    GaussianProjector, Homodyne, condition_gaussian, condition_sequence, spec_from_json, spec_to_json,
)
from gaussloc.errors import DimensionError, DomainError, NumericalRankError
from gaussloc.gaussian_core import (
    GaussianState, ModePartition, apply, random_pure_state, reduce, rotation,
    symplectic_eigenvalues, two_mode_squeezed,
)
from gaussloc.localize import SymmetricStateSpec, optimize_symmetric, random_symmetric_spec


def _ch_sh(lam):
    return (1 + lam ** 2) / (1 - lam ** 2), 2 * lam / (1 - lam ** 2)


def test_homodyne_x_on_tmsv():
    lam = 0.5
    ch, _ = _ch_sh(lam)
    out = condition_gaussian(two_mode_squeezed(lam), ModePartition((0,), (1,)), [Homodyne(0.0)])
    np.testing.assert_allclose(out.cm, np.diag([1 / ch, ch]), atol=1e-14)
    # variance of the anti-squeezed quadrature is e^{2 s_max}
    assert out.cm[1, 1] == pytest.approx((1 + lam ** 2) / (1 - lam ** 2))
    np.testing.assert_allclose(symplectic_eigenvalues(out), [1.0], atol=1e-12)


def test_vacuum_projection_on_tmsv():
    lam = 0.5
    ch, sh = _ch_sh(lam)
    out = condition_gaussian(two_mode_squeezed(lam), ModePartition((0,), (1,)), [GaussianProjector(0.3, 0.0)])
    # 2x2 Schur complement evaluated by hand: ch - sh^2 / (1 + ch)
    np.testing.assert_allclose(out.cm, (ch - sh ** 2 / (1 + ch)) * np.eye(2), atol=1e-14)


def test_empty_measured_set_is_reduce(rng):
    state = random_pure_state(3, rng)
    out = condition_gaussian(state, ModePartition((2, 0), ()), [])
    np.testing.assert_array_equal(out.cm, reduce(state, (2, 0)).cm)


def test_projector_cm_squeezes_x_theta():
    th, r = 0.4, 0.8
    g = GaussianProjector(th, r).cm()
    u = np.array([np.cos(th), np.sin(th)])
    assert u @ g @ u == pytest.approx(np.exp(-2 * r))
    assert np.linalg.det(g) == pytest.approx(1.0)


def test_projector_rejects_negative_r():
    with pytest.raises(DomainError):
        GaussianProjector(0.0, -1.0)


def test_spec_count_mismatch(rng):
    with pytest.raises(DimensionError):
        condition_gaussian(random_pure_state(3, rng), ModePartition((0, 1), (2,)), [])


def test_singular_projector_rejected():
    # an unphysical measured block can make B + gamma_M singular
    cm = np.diag([1.0, 1.0, -1.0, -1.0])
    state = GaussianState(cm)
    with pytest.raises(NumericalRankError):
        condition_gaussian(state, ModePartition((0,), (1,)), [GaussianProjector(0.0, 0.0)])


def test_joint_equals_sequential(rng):
    for _ in range(10):
        state = random_pure_state(4, rng)
        specs = [GaussianProjector(rng.uniform(0, np.pi), rng.uniform(0, 2)), Homodyne(rng.uniform(0, np.pi))]
        joint = condition_gaussian(state, ModePartition((0, 1), (2, 3)), specs)
        seq = condition_sequence(state, [(2, specs[0]), (3, specs[1])])
        np.testing.assert_allclose(seq.cm, joint.cm, atol=1e-10)
        seq_rev = condition_sequence(state, [(3, specs[1]), (2, specs[0])])
        np.testing.assert_allclose(seq_rev.cm, joint.cm, atol=1e-10)


def test_sequence_single_mode_matches(rng):
    state = random_pure_state(3, rng)
    a = condition_sequence(state, [(2, Homodyne(0.2))])
    b = condition_gaussian(state, ModePartition((0, 1), (2,)), [Homodyne(0.2)])
    np.testing.assert_array_equal(a.cm, b.cm)


@pytest.mark.parametrize("n", [3, 5])
def test_sequential_homodyne_on_symmetric_matches_reduced_model(n, rng):
    spec = random_symmetric_spec(n, rng)
    res = optimize_symmetric(spec)
    seq = condition_sequence(spec.assemble(), res.optimal_specs)
    np.testing.assert_allclose(seq.cm, res.conditional_cm, atol=1e-9)


def test_purity_preserved(rng):
    for _ in range(50):
        state = random_pure_state(4, rng)
        specs = [GaussianProjector(rng.uniform(0, np.pi), rng.uniform(0, 3)), Homodyne(rng.uniform(0, np.pi))]
        out = condition_gaussian(state, ModePartition((0, 1), (2, 3)), specs)
        np.testing.assert_allclose(symplectic_eigenvalues(out), 1.0, atol=1e-8)


def test_homodyne_is_large_r_limit(rng):
    for _ in range(10):
        state = random_pure_state(3, rng, max_squeeze=0.5)
        assert np.abs(state.cm).max() <= 10
        th = rng.uniform(0, np.pi)
        part = ModePartition((0, 1), (2,))
        hom = condition_gaussian(state, part, [Homodyne(th)]).cm
        errs = [np.abs(condition_gaussian(state, part, [GaussianProjector(th, r)]).cm - hom).max()
                for r in (2, 4, 6, 8)]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-5


def test_output_is_physical_for_mixed_input(rng):
    for _ in range(20):
        spec = random_symmetric_spec(4, rng)
        out = condition_gaussian(spec.assemble(), ModePartition((0, 1), (2, 3)),
                                 [GaussianProjector(rng.uniform(0, np.pi), rng.uniform(0, 3)), Homodyne(0.3)])
        assert out.is_physical()


def test_homodyne_phase_covariance(rng):
    # rotating the measured mode by phi is undone by measuring x_{theta - phi}
    state = random_pure_state(3, rng)
    phi, th = 0.6, 1.1
    rotated = apply(rotation(phi, 2, 3), state)
    part = ModePartition((0, 1), (2,))
    a = condition_gaussian(state, part, [Homodyne(th)]).cm
    b = condition_gaussian(rotated, part, [Homodyne(th - phi)]).cm
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_spec_json_roundtrip():
    for spec in (Homodyne(0.25), GaussianProjector(1.0, 2.5)):
        d = spec_to_json(3, spec)
        assert spec_from_json(d) == (3, spec)
    assert spec_to_json(1, Homodyne(0.5)) == {"mode": 1, "kind": "homodyne", "theta": 0.5}
    with pytest.raises(ValueError):
        spec_from_json({"mode": 0, "kind": "heterodyne", "theta": 0})
