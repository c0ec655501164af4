import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussloc.errors import DimensionError, DomainError
from gaussloc.gaussian_core import (
    R2, GaussianState, ModePartition, SymplecticTransform, apply, beamsplitter, direct_sum,
    embed, omega, random_pure_state, random_symplectic, reduce, rotation, squeezer,
    symplectic_eigenvalues, thermal, tmsv_split_state, two_mode_squeezed, vacuum, williamson,
)

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)
squeezes = st.floats(-2.0, 2.0, allow_nan=False)


def test_vacuum_spectrum():
    np.testing.assert_allclose(symplectic_eigenvalues(vacuum(3)), [1, 1, 1], atol=1e-12)


def test_thermal_spectrum_is_sqrt_det():
    assert symplectic_eigenvalues(thermal(3.0))[0] == pytest.approx(3.0, abs=1e-12)
    g = np.array([[2.0, 0.3], [0.3, 1.5]])
    assert symplectic_eigenvalues(GaussianState(g))[0] == pytest.approx(np.sqrt(np.linalg.det(g)))


def test_spectrum_descending_and_deduplicated():
    st_ = direct_sum(thermal(2.0), thermal(5.0), vacuum(1))
    np.testing.assert_allclose(symplectic_eigenvalues(st_), [5, 2, 1], atol=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 0.9])
def test_tmsv_is_pure(lam):
    np.testing.assert_allclose(symplectic_eigenvalues(two_mode_squeezed(lam)), [1, 1], atol=1e-9)


def test_tmsv_zero_is_vacuum():
    np.testing.assert_array_equal(two_mode_squeezed(0.0).cm, np.eye(4))


def test_tmsv_blocks():
    lam = 0.5
    r = np.arctanh(lam)
    cm = two_mode_squeezed(lam).cm
    np.testing.assert_allclose(cm[:2, :2], np.cosh(2 * r) * np.eye(2), atol=1e-14)
    np.testing.assert_allclose(cm[:2, 2:], np.sinh(2 * r) * np.diag([1, -1]), atol=1e-14)


@pytest.mark.parametrize("lam", np.round(np.arange(0.1, 1.0, 0.1), 1))
def test_lambda_det_relation(lam):
    c = reduce(two_mode_squeezed(lam), [1]).cm
    root = np.sqrt(np.linalg.det(c))
    assert lam ** 2 == pytest.approx((root - 1) / (root + 1), abs=1e-12)


@pytest.mark.parametrize("lam", [1.0, -0.1, 1.5])
def test_tmsv_domain(lam):
    with pytest.raises(DomainError):
        two_mode_squeezed(lam)


def test_rotation_zero_identity():
    np.testing.assert_array_equal(rotation(0.0).s, np.eye(2))


def test_rotation_matches_w():
    th = 0.7
    np.testing.assert_allclose(rotation(th).s, [[np.cos(th), np.sin(th)], [-np.sin(th), np.cos(th)]])


def test_squeezer_on_vacuum():
    r = 0.4
    np.testing.assert_allclose(apply(squeezer(r), vacuum(1)).cm, np.diag([np.exp(2 * r), np.exp(-2 * r)]))


def test_balanced_beamsplitter_convention():
    s = beamsplitter(0.5).s
    x = np.array([1.0, 0.0, 0.0, 0.0])  # unit x1
    np.testing.assert_allclose(s @ x, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])
    x2 = np.array([0.0, 0.0, 1.0, 0.0])
    np.testing.assert_allclose(s @ x2, [1 / np.sqrt(2), 0, -1 / np.sqrt(2), 0])
    np.testing.assert_allclose(s @ s, np.eye(4), atol=1e-15)


def test_beamsplitter_mixing_matrix_oracle():
    # vacuum on A, TMSV half on B: explicit 2x2 mixing of the block matrix
    lam = 0.6
    half = reduce(two_mode_squeezed(lam), [0]).cm
    out = apply(beamsplitter(0.5), direct_sum(vacuum(1), GaussianState(half))).cm
    ch = half[0, 0]
    np.testing.assert_allclose(out[:2, :2], 0.5 * (1 + ch) * np.eye(2))
    np.testing.assert_allclose(out[:2, 2:], 0.5 * (1 - ch) * np.eye(2))


def test_beamsplitter_errors():
    with pytest.raises(DomainError):
        beamsplitter(1.2)
    with pytest.raises(DimensionError):
        beamsplitter(0.5, (0, 3), 3)


def test_apply_identity_and_inverse(rng):
    state = random_pure_state(2, rng)
    assert np.array_equal(apply(SymplecticTransform(np.eye(4)), state).cm, state.cm)
    w = rotation(0.3, 1, 2) @ rotation(-0.3, 1, 2)
    np.testing.assert_allclose(apply(w, state).cm, state.cm, atol=1e-14)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(rotation(0.1), vacuum(2))


def test_random_circuit_keeps_purity(rng):
    for _ in range(20):
        state = random_pure_state(3, rng)
        np.testing.assert_allclose(symplectic_eigenvalues(state), 1.0, atol=1e-9)


def test_reduce():
    lam = 0.5
    ch = (1 + lam ** 2) / (1 - lam ** 2)
    np.testing.assert_allclose(reduce(two_mode_squeezed(lam), [0]).cm, ch * np.eye(2))
    np.testing.assert_array_equal(reduce(vacuum(4), [3, 1]).cm, np.eye(4))


def test_reduce_composes(rng):
    state = random_pure_state(4, rng)
    np.testing.assert_array_equal(reduce(reduce(state, [3, 0, 2]), [2, 0]).cm, reduce(state, [2, 3]).cm)


def test_reduce_out_of_range():
    with pytest.raises(DimensionError):
        reduce(vacuum(2), [2])


def test_state_validation():
    with pytest.raises(DimensionError):
        GaussianState(np.eye(3))
    with pytest.raises(DimensionError):
        GaussianState(np.array([[1.0, 0.1], [0.0, 1.0]]))
    assert not GaussianState(0.5 * np.eye(2)).is_physical()
    assert GaussianState(2 * np.eye(2)).is_physical()
    assert not GaussianState(2 * np.eye(2)).is_pure()


def test_state_is_immutable():
    s = vacuum(1)
    with pytest.raises(ValueError):
        s.cm[0, 0] = 2.0


def test_partition_rejects_duplicates():
    with pytest.raises(DimensionError):
        ModePartition((0, 1), (1,))


def test_non_symplectic_rejected():
    with pytest.raises(DimensionError):
        SymplecticTransform(np.diag([2.0, 2.0]))


def test_williamson_roundtrip(rng):
    for _ in range(10):
        s = random_symplectic(3, rng).s
        nu_in = np.sort(rng.uniform(1, 3, 3))[::-1]
        cm = s @ np.diag(np.repeat(nu_in, 2)) @ s.T
        nu, sw = williamson(cm)
        np.testing.assert_allclose(nu, nu_in, rtol=1e-10)
        np.testing.assert_allclose(sw @ omega(3) @ sw.T, omega(3), atol=1e-9)
        np.testing.assert_allclose(sw @ np.diag(np.repeat(nu, 2)) @ sw.T, cm, atol=1e-9)


def test_tmsv_split_state_is_pure():
    np.testing.assert_allclose(symplectic_eigenvalues(tmsv_split_state(0.7)), 1.0, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(angles, squeezes, st.floats(0, 1), angles)
def test_constructors_are_symplectic(theta, r, t, phi):
    om = omega(2)
    for s in (embed(rotation(theta).s, (0,), 2), squeezer(r, 1, 2), beamsplitter(t),
              rotation(phi, 1, 2) @ beamsplitter(t) @ squeezer(r, 0, 2)):
        np.testing.assert_allclose(s.s @ om @ s.s.T, om, atol=1e-10 * max(1, np.abs(s.s).max()) ** 2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_det_of_sum_identity(v):
    x = np.array([[v[0], v[1]], [v[1], v[2]]])
    y = np.array([[v[3], v[4]], [v[4], v[5]]])
    lhs = np.linalg.det(x + y)
    rhs = np.linalg.det(x) + np.linalg.det(y) + np.trace(x @ R2 @ y @ R2.T)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)
