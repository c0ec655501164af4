"""Conditional covariance matrices after Gaussian measurements.

Measuring modes ``M`` of a state with covariance ``[[A, C], [C.T, B]]``
(kept | measured) by projecting onto a pure Gaussian state with covariance
``g`` leaves the kept modes with ``A - C (B + g)^{-1} C.T`` regardless of the
outcome. Homodyne detection is the infinitely squeezed limit and is handled
exactly by restricting ``B`` and ``C`` to the measured quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError, NumericalRankError
from .gaussian_core import GaussianState, ModePartition, quadrature_indices, reduce

#: relative singular-value cutoff for the homodyne pseudo-inverse
RANK_RTOL = 1e-12


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class GaussianProjector:
    """Projection onto a pure squeezed vacuum whose squeezed quadrature is ``x_theta``.

    ``x_theta = cos(theta) x + sin(theta) p``; the variance of ``x_theta`` in
    the projected state is ``e^{-2r}`` and that of the conjugate quadrature
    ``e^{2r}``. ``r = 0`` is the vacuum (heterodyne-like) projection and
    ``r -> inf`` converges to ``Homodyne(theta)``.
    """

    theta: float
    r: float

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0:
            raise DomainError(f"projector squeezing must be finite and >= 0, got {self.r}")

    def cm(self) -> np.ndarray:
        w = _rot(self.theta)
        return w @ np.diag([np.exp(-2 * self.r), np.exp(2 * self.r)]) @ w.T


@dataclass(frozen=True)
class Homodyne:
    """Homodyne detection of ``x_theta = cos(theta) x + sin(theta) p``."""

    theta: float

    def direction(self) -> np.ndarray:
        return np.array([np.cos(self.theta), np.sin(self.theta)])


MeasurementSpec = Union[GaussianProjector, Homodyne]


def spec_to_json(mode: int, spec: MeasurementSpec) -> dict:
    if isinstance(spec, Homodyne):
        return {"mode": int(mode), "kind": "homodyne", "theta": float(spec.theta)}
    return {"mode": int(mode), "kind": "projector", "theta": float(spec.theta), "r": float(spec.r)}


def spec_from_json(d: dict) -> tuple[int, MeasurementSpec]:
    kind = d.get("kind")
    if kind == "homodyne":
        return int(d["mode"]), Homodyne(float(d["theta"]))
    if kind == "projector":
        return int(d["mode"]), GaussianProjector(float(d["theta"]), float(d["r"]))
    raise ValueError(f"unknown measurement kind {kind!r}")


def _schur_gain(b: np.ndarray, specs: Sequence[MeasurementSpec]) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(P, G)`` with the conditional update ``C P.T G^+ P C.T``.

    ``P`` selects the quadratures that carry information: both for a finite
    projector, only ``x_theta`` for a homodyne.
    """
    k = len(specs)
    rows = []
    extra = []
    for j, spec in enumerate(specs):
        if isinstance(spec, Homodyne):
            row = np.zeros(2 * k)
            row[2 * j:2 * j + 2] = spec.direction()
            rows.append(row[None, :])
            extra.append(np.zeros((1, 1)))
        elif isinstance(spec, GaussianProjector):
            row = np.zeros((2, 2 * k))
            row[:, 2 * j:2 * j + 2] = np.eye(2)
            rows.append(row)
            extra.append(spec.cm())
        else:
            raise TypeError(f"not a measurement spec: {spec!r}")
    from scipy.linalg import block_diag

    p = np.vstack(rows)
    g = p @ b @ p.T + block_diag(*extra)
    return p, 0.5 * (g + g.T)


def _pinv(g: np.ndarray, strict: bool) -> np.ndarray:
    u, sv, vt = np.linalg.svd(g)
    cut = RANK_RTOL * sv[0] if sv.size else 0.0
    if np.any(sv <= cut):
        if strict:
            raise NumericalRankError(
                "B + gamma_M is numerically singular; the input state is unphysical"
            )
    inv_sv = np.where(sv > cut, 1.0 / np.where(sv > cut, sv, 1.0), 0.0)
    return (vt.T * inv_sv) @ u.T


def condition_gaussian(state: GaussianState, partition: ModePartition,
                       specs: Sequence[MeasurementSpec]) -> GaussianState:
    """Covariance matrix of ``partition.kept`` after measuring ``partition.measured``.

    ``specs[j]`` is applied to ``partition.measured[j]``. Modes in neither list
    are traced out.
    """
    partition.validate(state.n_modes)
    specs = list(specs)
    if len(specs) != len(partition.measured):
        raise DimensionError(
            f"{len(partition.measured)} measured modes but {len(specs)} measurement specs"
        )
    if not partition.measured:
        return reduce(state, partition.kept)
    ik = quadrature_indices(partition.kept)
    im = quadrature_indices(partition.measured)
    cm = state.cm
    a = cm[np.ix_(ik, ik)]
    c = cm[np.ix_(ik, im)]
    b = cm[np.ix_(im, im)]
    p, g = _schur_gain(b, specs)
    strict = any(isinstance(s, GaussianProjector) for s in specs)
    cp = c @ p.T
    out = a - cp @ _pinv(g, strict) @ cp.T
    return GaussianState(0.5 * (out + out.T))


def condition_sequence(state: GaussianState,
                       measurements: Sequence[tuple[int, MeasurementSpec]]) -> GaussianState:
    """Measure modes one at a time, in the given order.

    Returns the state of every unmeasured mode, in original index order. Gives
    the same result as a single joint :func:`condition_gaussian` call.
    """
    remaining = list(range(state.n_modes))
    seen = set()
    for mode, spec in measurements:
        if mode in seen or mode not in remaining:
            raise DimensionError(f"mode {mode} measured twice or out of range")
        seen.add(mode)
        local = remaining.index(mode)
        kept_local = [i for i in range(len(remaining)) if i != local]
        state = condition_gaussian(state, ModePartition(kept_local, (local,)), [spec])
        remaining.pop(local)
    return state
