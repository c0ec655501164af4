"""Entanglement measures for two-mode Gaussian states (base-2 logarithms)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, PhysicalityError, PurityError
from .gaussian_core import R2, GaussianState, symplectic_eigenvalues

#: purity tolerance for the entropy precondition
ENTROPY_PURITY_TOL = 1e-6

_PT = np.diag([1.0, 1.0, 1.0, -1.0])


class Measure(str, enum.Enum):
    ENTROPY = "EntropyOfEntanglement"
    LOG_NEGATIVITY = "LogNegativity"


@dataclass(frozen=True)
class EntanglementResult:
    value: float
    measure: Measure
    mu: Optional[float] = None
    n_a: Optional[float] = None

    def to_json(self) -> dict:
        out = {"measure": self.measure.value, "value": float(self.value)}
        if self.mu is not None:
            out["mu"] = float(self.mu)
        if self.n_a is not None:
            out["n_a"] = float(self.n_a)
        return out


def thermal_entropy(n):
    """Von Neumann entropy in bits of a thermal state with mean photon number ``n``.

    Vectorised; ``n <= 0`` maps to 0.
    """
    n = np.maximum(np.asarray(n, dtype=float), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (n + 1) * np.log2(n + 1) - np.where(n > 0, n * np.log2(np.where(n > 0, n, 1.0)), 0.0)
    return val if val.ndim else float(val)


def n_from_det(det_a):
    """Thermal invariant ``(sqrt(det) - 1) / 2`` of a single-mode CM."""
    return 0.5 * (np.sqrt(np.maximum(det_a, 1.0)) - 1.0)


def _require_two_modes(state: GaussianState) -> None:
    if state.n_modes != 2:
        raise DimensionError(f"expected a two-mode state, got {state.n_modes} modes")


def entropy_of_entanglement(state: GaussianState, mode: int = 0,
                            tol: float = ENTROPY_PURITY_TOL) -> EntanglementResult:
    """Entropy of the reduced state of ``mode`` for a pure two-mode state."""
    _require_two_modes(state)
    nu = symplectic_eigenvalues(state)
    if np.max(np.abs(nu - 1.0)) > tol:
        raise PurityError(
            f"entropy of entanglement needs a pure state; symplectic eigenvalues {nu}"
        )
    n_a = float(n_from_det(np.linalg.det(state.block(mode))))
    return EntanglementResult(float(thermal_entropy(n_a)), Measure.ENTROPY, n_a=n_a)


def partial_transpose(state: GaussianState) -> GaussianState:
    """Time reversal of the second mode, ``p_2 -> -p_2``."""
    _require_two_modes(state)
    return GaussianState(_PT @ state.cm @ _PT)


def _pt_min_symplectic_fast(cm: np.ndarray) -> float:
    """Smallest PT symplectic eigenvalue from the two-mode invariants."""
    a, b, c = cm[:2, :2], cm[2:, 2:], cm[:2, 2:]
    delta = np.linalg.det(a) + np.linalg.det(b) - 2.0 * np.linalg.det(c)
    disc = max(delta * delta - 4.0 * np.linalg.det(cm), 0.0)
    return float(np.sqrt(max((delta - np.sqrt(disc)) / 2.0, 0.0)))


def log_negativity(state: GaussianState, fast: bool = False) -> EntanglementResult:
    """Logarithmic negativity ``max(0, -log2 mu)``.

    ``mu`` is the smallest symplectic eigenvalue of the partially transposed
    covariance matrix. ``fast=True`` uses the closed-form two-mode invariant
    instead of an eigensolver.
    """
    _require_two_modes(state)
    if not state.is_physical():
        raise PhysicalityError("log-negativity needs a physical state")
    if fast:
        mu = _pt_min_symplectic_fast(state.cm)
    else:
        mu = float(symplectic_eigenvalues(partial_transpose(state))[-1])
    return EntanglementResult(max(0.0, -float(np.log2(mu))), Measure.LOG_NEGATIVITY, mu=mu)


def pt_min_eig_product(gamma_a, gamma_b) -> float:
    """``min eig(gamma_a R gamma_b R.T)`` for two single-mode CMs.

    Equals ``mu**2`` of the state obtained by mixing the two modes on a
    balanced beam splitter.
    """
    ga = np.asarray(gamma_a, dtype=float)
    gb = np.asarray(gamma_b, dtype=float)
    for g in (ga, gb):
        if g.shape != (2, 2) or abs(g[0, 1] - g[1, 0]) > 1e-12 * max(1.0, np.abs(g).max()):
            raise DimensionError("expected symmetric 2x2 matrices")
        if np.min(np.linalg.eigvalsh(g)) <= 0:
            raise DimensionError("covariance matrices must be positive definite")
    ev = np.linalg.eigvals(ga @ R2 @ gb @ R2.T)
    return float(np.min(ev.real))


def entanglement(state: GaussianState, measure: Measure) -> EntanglementResult:
    if Measure(measure) is Measure.ENTROPY:
        return entropy_of_entanglement(state)
    return log_negativity(state)
