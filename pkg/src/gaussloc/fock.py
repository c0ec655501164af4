"""Photon-number series for the beam-splitter example state.

A two-mode squeezed vacuum on (B, C) has Schmidt weights
``p_n = (1 - lam^2) lam^(2n)``. Counting ``n`` photons on C leaves ``|n>`` on
B, which a balanced beam splitter with vacuum A turns into a binomial
superposition with entanglement entropy ``S_n``. The average ``sum p_n S_n``
is the entanglement localized by photon counting; the Gaussian optimum for the
same state has a closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .entanglement import thermal_entropy
from .errors import DomainError

#: tail target for the photon-counting average
NG_TAIL_TOL = 1e-8
#: tail target for the Schmidt-series entropy oracle
SERIES_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class FockCutoff:
    n_max: int
    tail_bound: float


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    return lam


def tail_mass(lam: float, n_max: int) -> float:
    """Probability beyond ``n_max``: ``lam^(2 (n_max + 1))``."""
    return float(lam ** (2 * (n_max + 1)))


def _entropy_bound(n: int) -> float:
    return 0.5 * np.log2(np.pi * np.e * max(n, 1) / 2.0) + 1.0


def auto_cutoff(lam: float, tol: float = NG_TAIL_TOL, weighted: bool = True) -> FockCutoff:
    """Smallest ``n_max`` whose neglected contribution is below ``tol``.

    With ``weighted`` the tail mass is multiplied by an upper estimate of
    ``S_n`` just past the cutoff, bounding the error of ``sum p_n S_n``;
    otherwise only the tail mass itself is bounded.
    """
    lam = _check_lambda(lam)
    if lam == 0.0:
        return FockCutoff(0, 0.0)
    n = max(0, int(np.floor(np.log(tol) / (2 * np.log(lam)))) - 2)
    while True:
        bound = tail_mass(lam, n) * (_entropy_bound(n + 1) if weighted else 1.0)
        if bound < tol:
            return FockCutoff(n, bound)
        n += 1


def _resolve(lam: float, cutoff, tol: float, weighted: bool) -> FockCutoff:
    if cutoff is None:
        return auto_cutoff(lam, tol, weighted)
    if isinstance(cutoff, FockCutoff):
        return cutoff
    n = int(cutoff)
    if n < 0:
        raise DomainError("cutoff must be non-negative")
    return FockCutoff(n, tail_mass(lam, n))


def photon_number_probabilities(lam: float, cutoff=None) -> tuple[np.ndarray, float]:
    """``(p_0 .. p_nmax, tail)`` for the Schmidt weights of ``TMSV(lam)``."""
    lam = _check_lambda(lam)
    cut = _resolve(lam, cutoff, NG_TAIL_TOL, weighted=False)
    n = np.arange(cut.n_max + 1)
    p = (1.0 - lam * lam) * lam ** (2 * n)
    return p, tail_mass(lam, cut.n_max)


def binomial_state_entropy(n: int) -> float:
    """Entropy in bits of the binomial distribution ``C(n, k) / 2^n``."""
    n = int(n)
    if n < 0:
        raise DomainError("photon number must be non-negative")
    return _binomial_entropy(n)


@lru_cache(maxsize=None)
def _binomial_entropy(n: int) -> float:
    k = np.arange(n + 1)
    logp = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) - n * np.log(2.0)
    val = float(-np.sum(np.exp(logp) * logp) / np.log(2.0))
    return val if val > 0.0 else 0.0


def binomial_state_entropies(n_max: int) -> np.ndarray:
    return np.array([binomial_state_entropy(n) for n in range(n_max + 1)])


def localizable_non_gaussian(lam: float, cutoff=None) -> float:
    """Average entanglement left on (A, B) after counting photons on C."""
    lam = _check_lambda(lam)
    cut = _resolve(lam, cutoff, NG_TAIL_TOL, weighted=True)
    p, _ = photon_number_probabilities(lam, cut.n_max)
    return float(np.dot(p, binomial_state_entropies(cut.n_max)))


def localizable_gaussian_fig3(lam: float) -> float:
    """Gaussian optimum for the same state (homodyne on C)."""
    lam = _check_lambda(lam)
    n_a = 0.5 / np.sqrt(1.0 - lam ** 4) - 0.5
    return float(thermal_entropy(n_a))


def tmsv_entropy_series(lam: float, cutoff=None) -> float:
    """Entanglement entropy of ``TMSV(lam)`` summed over its Schmidt weights."""
    lam = _check_lambda(lam)
    if lam == 0.0:
        return 0.0
    cut = _resolve(lam, cutoff, SERIES_TAIL_TOL, weighted=False)
    n = np.arange(cut.n_max + 1)
    logp = np.log1p(-lam * lam) + 2 * n * np.log(lam)
    val = float(-np.sum(np.exp(logp) * logp) / np.log(2.0))
    return val if val > 0.0 else 0.0


def curve_fig3(lambdas, cutoff: Optional[int] = None) -> np.ndarray:
    """Rows ``(lam, E_gaussian, E_photon_counting)``."""
    return np.array([
        (lam, localizable_gaussian_fig3(lam), localizable_non_gaussian(lam, cutoff))
        for lam in lambdas
    ])
