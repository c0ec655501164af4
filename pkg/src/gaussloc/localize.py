"""Gaussian localizable entanglement.

Four routes to the optimum over local Gaussian measurements on all modes but
a kept pair:

* :func:`optimize_three_mode` -- analytic optimum for pure three-mode states.
* :func:`optimize_multimode_pure` -- coordinate ascent over homodyne phases
  for pure states, each coordinate solved by the three-mode optimum.
* :func:`optimize_symmetric` -- permutation-symmetric mixed states, reduced to
  one effective measured mode.
* :func:`grid_oracle` -- exhaustive search over squeezed-state projections and
  homodynes, used to verify the other three.
"""

from __future__ import annotations

import enum
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .conditioning import GaussianProjector, Homodyne, MeasurementSpec, condition_gaussian, spec_to_json
from .entanglement import (
    Measure, entanglement, log_negativity, n_from_det, pt_min_eig_product, thermal_entropy,
)
from .errors import DimensionError, DomainError, GridSizeError, PhysicalityError, PurityError
from .gaussian_core import (
    GaussianState, ModePartition, beamsplitter, omega, quadrature_indices, reduce, rotation_matrix,
    symplectic_eigenvalues, williamson,
)

PURITY_TOL = 1e-8
_Z = np.diag([1.0, -1.0])

DEFAULT_THETA_STEPS = 180
DEFAULT_R_VALUES = tuple(np.arange(0.0, 6.0 + 1e-12, 0.5))
DEFAULT_MAX_EVALUATIONS = 20_000_000


class Method(str, enum.Enum):
    ANALYTIC_THREE_MODE = "AnalyticThreeMode"
    MULTIMODE_PHASE_SEARCH = "MultimodePhaseSearch"
    SYMMETRIC_REDUCTION = "SymmetricReduction"
    GRID_ORACLE = "GridOracle"


@dataclass(frozen=True, eq=False)
class LocalizationResult:
    value: float
    measure: Measure
    method: Method
    kept: tuple
    optimal_specs: list  # [(mode, MeasurementSpec)], one per measured mode
    conditional_cm: np.ndarray
    mu: Optional[float] = None
    n_a: Optional[float] = None

    def to_json(self) -> dict:
        out = {
            "method": self.method.value,
            "measure": self.measure.value,
            "value": float(self.value),
            "kept": [int(k) for k in self.kept],
            "optimal_measurements": [spec_to_json(m, s) for m, s in self.optimal_specs],
            "conditional_cm": np.asarray(self.conditional_cm).tolist(),
        }
        if self.mu is not None:
            out["mu"] = float(self.mu)
        if self.n_a is not None:
            out["n_a"] = float(self.n_a)
        return out


def _require_pure(state: GaussianState, tol: float = PURITY_TOL) -> None:
    nu = symplectic_eigenvalues(state)
    if np.max(np.abs(nu - 1.0)) > tol:
        raise PurityError(f"method requires a pure state; symplectic eigenvalues {nu}")


def _measured(kept: Sequence[int], n_modes: int) -> tuple:
    return tuple(k for k in range(n_modes) if k not in kept)


def _wrap(theta: float) -> float:
    t = float(np.mod(theta, np.pi))
    return 0.0 if np.isclose(t, np.pi, atol=1e-15, rtol=0) else t


# --- pure three-mode states ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class ThreeModeReduction:
    """Pure three-mode state written as ``(S_AB + S_C)(TMSV_AC + vac_B)(...)^T``."""

    lam: float
    s_max: float
    s_ab: np.ndarray
    s_c: np.ndarray
    m_matrix: np.ndarray
    theta0: float
    m_xx: float
    m_pp: float
    state: GaussianState = field(repr=False)
    kept: tuple = (0, 1)
    measured: tuple = (2,)

    @property
    def s_aa(self):
        return self.s_ab[:2, :2]

    @property
    def t_ab(self):
        return self.s_ab[:2, 2:]

    @property
    def t_ba(self):
        return self.s_ab[2:, :2]

    @property
    def s_bb(self):
        return self.s_ab[2:, 2:]

    def canonical_cm(self) -> np.ndarray:
        """``TMSV(lam)`` on (A, C) and vacuum on B, ordered (A, B, C)."""
        l2 = self.lam ** 2
        ch, sh = (1 + l2) / (1 - l2), 2 * self.lam / (1 - l2)
        cm = np.eye(6)
        cm[:2, :2] = ch * np.eye(2)
        cm[4:, 4:] = ch * np.eye(2)
        cm[:2, 4:] = cm[4:, :2] = sh * _Z
        return cm

    def reconstruct(self) -> np.ndarray:
        """Covariance matrix rebuilt from the decomposition, ordered (A, B, C)."""
        from scipy.linalg import block_diag

        s = block_diag(self.s_ab, self.s_c)
        return s @ self.canonical_cm() @ s.T


def decompose_three_mode(state: GaussianState, kept: Sequence[int] = (0, 1),
                         measured: Optional[Sequence[int]] = None) -> ThreeModeReduction:
    """Split a pure three-mode state into a TMSV on (A, C), vacuum on B and local maps."""
    if state.n_modes != 3:
        raise DimensionError(f"three-mode decomposition needs 3 modes, got {state.n_modes}")
    kept = tuple(kept)
    measured = tuple(measured) if measured is not None else _measured(kept, 3)
    ModePartition(kept, measured).validate(3)
    if len(kept) != 2 or len(measured) != 1:
        raise DimensionError("need two kept modes and one measured mode")
    _require_pure(state)
    from scipy.linalg import block_diag, sqrtm

    cm = reduce(state, kept + measured).cm
    gamma_c = cm[4:, 4:]
    nu = float(np.sqrt(max(np.linalg.det(gamma_c), 1.0)))
    lam = float(np.sqrt((nu - 1.0) / (nu + 1.0)))
    s_c = np.real(sqrtm(gamma_c / np.sqrt(np.linalg.det(gamma_c))))
    s_c = 0.5 * (s_c + s_c.T)
    s_c_inv = np.linalg.inv(s_c)

    t1 = block_diag(np.eye(4), s_c_inv)
    cm1 = t1 @ cm @ t1.T
    _, s_w = williamson(cm1[:4, :4])
    t2 = block_diag(np.linalg.inv(s_w), np.eye(2))
    cm2 = t2 @ cm1 @ t2.T
    sh = 2 * lam / (1 - lam ** 2)
    if sh > 1e-12:
        # cross block of mode A with C is sh * (reflection); rotate A so it becomes sh * Z
        w_a = _Z @ cm2[:2, 4:].T / sh
        u, _, vt = np.linalg.svd(w_a)
        w_a = u @ vt
    else:
        w_a = np.eye(2)
    s_ab = s_w @ block_diag(w_a.T, np.eye(2))

    s_aa, t_ab = s_ab[:2, :2], s_ab[:2, 2:]
    r = np.array([[0.0, 1.0], [-1.0, 0.0]])
    m = s_aa.T @ r @ t_ab @ t_ab.T @ r.T @ s_aa
    m = 0.5 * (m + m.T)
    w, v = np.linalg.eigh(m)
    theta0 = _wrap(np.arctan2(v[1, 1], v[0, 1]))
    s_max = 0.5 * np.log((1 + lam ** 2) / (1 - lam ** 2))
    return ThreeModeReduction(
        lam=lam, s_max=float(s_max), s_ab=s_ab, s_c=s_c, m_matrix=m, theta0=theta0,
        m_xx=float(w[1]), m_pp=float(w[0]), state=state, kept=kept, measured=measured,
    )


def three_mode_objective(s, theta, m_xx, m_pp):
    """Measurement-dependent part of ``det gamma_A`` in the frame where ``M`` is diagonal."""
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return np.exp(2 * s) * (m_xx * c2 + m_pp * s2) + np.exp(-2 * s) * (m_xx * s2 + m_pp * c2)


def optimize_three_mode(reduction: ThreeModeReduction) -> LocalizationResult:
    red = reduction
    candidates = [(s, th) for s in (red.s_max, -red.s_max) for th in (0.0, np.pi / 2)]
    scores = [three_mode_objective(s, th, red.m_xx, red.m_pp) for s, th in candidates]
    best = int(np.argmax(scores))
    s_best, th_best = candidates[best]
    det_a = np.linalg.det(red.s_aa) ** 2 + np.linalg.det(red.t_ab) ** 2 + scores[best]

    scale = max(1.0, float(np.abs(red.s_ab).max()) ** 4)
    if red.s_max < 1e-12 or red.m_xx <= 1e-13 * scale:
        theta_opt = 0.0
    else:
        # conditional CM of A before S_AB, back in the original A frame
        w0 = rotation_matrix(red.theta0)
        wm = rotation_matrix(-th_best)
        vs = np.diag([np.exp(2 * s_best), np.exp(-2 * s_best)])
        g_a = w0.T @ wm @ vs @ wm.T @ w0
        _, vecs = np.linalg.eigh(g_a)
        # homodyne of x_phi on the TMSV partner squeezes A along Z (cos phi, sin phi)
        v = _Z @ vecs[:, 0]
        u = np.linalg.solve(red.s_c.T, v)
        theta_opt = _wrap(np.arctan2(u[1], u[0]))

    spec = Homodyne(theta_opt)
    cond = condition_gaussian(red.state, ModePartition(red.kept, red.measured), [spec])
    n_a = float(n_from_det(det_a))
    return LocalizationResult(
        value=float(thermal_entropy(n_a)), measure=Measure.ENTROPY,
        method=Method.ANALYTIC_THREE_MODE, kept=red.kept,
        optimal_specs=[(red.measured[0], spec)], conditional_cm=cond.cm, n_a=n_a,
    )


# --- pure multimode states ----------------------------------------------------

def _phase_objective(state, kept, measured, thetas) -> float:
    cond = condition_gaussian(state, ModePartition(kept, measured), [Homodyne(t) for t in thetas])
    return float(thermal_entropy(n_from_det(np.linalg.det(cond.cm[:2, :2]))))


def optimize_multimode_pure(state: GaussianState, kept: Sequence[int] = (0, 1),
                            restarts: int = 8, seed: int = 0, tol: float = 1e-10,
                            max_sweeps: int = 100) -> LocalizationResult:
    """Best homodyne phases on all measured modes of a pure state.

    Coordinate ascent: with the other phases fixed, the remaining measured
    mode sees an effective pure three-mode state whose optimum is exact, so no
    step can lower the objective.
    """
    n = state.n_modes
    if n < 3:
        raise DimensionError("need at least three modes")
    kept = tuple(kept)
    measured = _measured(kept, n)
    ModePartition(kept, measured).validate(n)
    _require_pure(state)
    if n == 3:
        res = optimize_three_mode(decompose_three_mode(state, kept, measured))
        return LocalizationResult(res.value, res.measure, Method.MULTIMODE_PHASE_SEARCH, kept,
                                  res.optimal_specs, res.conditional_cm, n_a=res.n_a)

    rng = np.random.default_rng(seed)
    best_val, best_thetas = -np.inf, None
    for _ in range(restarts):
        thetas = list(rng.uniform(0, np.pi, size=len(measured)))
        current = _phase_objective(state, kept, measured, thetas)
        for _sweep in range(max_sweeps):
            start = current
            for j, mode in enumerate(measured):
                others = [m for m in measured if m != mode]
                sub = condition_gaussian(
                    state, ModePartition(kept + (mode,), tuple(others)),
                    [Homodyne(thetas[measured.index(m)]) for m in others],
                )
                res = optimize_three_mode(decompose_three_mode(sub, (0, 1), (2,)))
                if res.value >= current:
                    thetas[j] = res.optimal_specs[0][1].theta
                    current = res.value
            if current - start < tol:
                break
        if current > best_val:
            best_val, best_thetas = current, list(thetas)

    specs = [(m, Homodyne(t)) for m, t in zip(measured, best_thetas)]
    cond = condition_gaussian(state, ModePartition(kept, measured), [s for _, s in specs])
    ent = entanglement(cond, Measure.ENTROPY)
    return LocalizationResult(ent.value, Measure.ENTROPY, Method.MULTIMODE_PHASE_SEARCH, kept,
                              specs, cond.cm, n_a=ent.n_a)


# --- permutation-symmetric mixed states --------------------------------------

@dataclass(frozen=True)
class SymmetricStateSpec:
    """Symmetric state with ``beta = diag(b, b)`` and ``eps = diag(eps1, eps2)``."""

    n: int
    b: float
    eps1: float
    eps2: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"symmetric state needs N >= 3 modes, got {self.n}")
        if not self.assemble().is_physical():
            raise PhysicalityError(
                f"symmetric spec (N={self.n}, b={self.b}, eps=({self.eps1}, {self.eps2})) is unphysical"
            )

    def assemble(self) -> GaussianState:
        beta = self.b * np.eye(2)
        eps = np.diag([self.eps1, self.eps2])
        n = int(self.n)
        cm = np.kron(np.ones((n, n)), eps) + np.kron(np.eye(n), beta - eps)
        return GaussianState(cm)

    def to_json(self) -> dict:
        return {"n": int(self.n), "b": float(self.b), "eps1": float(self.eps1), "eps2": float(self.eps2)}


def reduce_symmetric(spec: SymmetricStateSpec) -> tuple[np.ndarray, np.ndarray]:
    """Effective (A, C1) covariance and the decoupled B covariance.

    Mixing A with B on a balanced beam splitter and the measured modes on an
    interferometer leaves A correlated with the single collective mode C1.
    """
    beta = spec.b * np.eye(2)
    eps = np.diag([spec.eps1, spec.eps2])
    n = int(spec.n)
    g_ac = np.block([
        [beta + eps, np.sqrt(2 * (n - 2)) * eps],
        [np.sqrt(2 * (n - 2)) * eps, beta + (n - 3) * eps],
    ])
    return g_ac, beta - eps


def symmetric_reduced_state(spec: SymmetricStateSpec) -> GaussianState:
    """Three-mode (A, B, C1) model equivalent to the full symmetric state."""
    g_ac, g_b = reduce_symmetric(spec)
    cm = np.zeros((6, 6))
    ia, ic = np.array([0, 1]), np.array([4, 5])
    idx = np.concatenate([ia, ic])
    cm[np.ix_(idx, idx)] = g_ac
    cm[2:4, 2:4] = g_b
    s = beamsplitter(0.5, (0, 1), 3).s
    return GaussianState(s @ cm @ s.T)


def optimize_symmetric(spec: SymmetricStateSpec, kept: Sequence[int] = (0, 1)) -> LocalizationResult:
    """Log-negativity optimum: homodyne ``x`` or ``p`` on every measured mode.

    Both quadratures are evaluated and the one giving the smaller partially
    transposed symplectic eigenvalue is returned.
    """
    kept = tuple(kept)
    n = int(spec.n)
    measured = _measured(kept, n)
    ModePartition(kept, measured).validate(n)
    g_ac, g_b = reduce_symmetric(spec)
    best = None
    for theta in (0.0, np.pi / 2):
        g_a = condition_gaussian(GaussianState(g_ac), ModePartition((0,), (1,)), [Homodyne(theta)]).cm
        mu2 = pt_min_eig_product(g_a, g_b)
        if best is None or mu2 < best[0]:
            best = (mu2, theta, g_a)
    mu2, theta, g_a = best
    mu = float(np.sqrt(mu2))
    from scipy.linalg import block_diag

    bs = beamsplitter(0.5).s
    cond = bs @ block_diag(g_a, g_b) @ bs.T
    return LocalizationResult(
        value=max(0.0, -0.5 * float(np.log2(mu2))), measure=Measure.LOG_NEGATIVITY,
        method=Method.SYMMETRIC_REDUCTION, kept=kept,
        optimal_specs=[(m, Homodyne(theta)) for m in measured],
        conditional_cm=0.5 * (cond + cond.T), mu=mu,
    )


# --- brute-force oracle ------------------------------------------------------

def _thread_count() -> int:
    env = os.environ.get("GLE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def oracle_candidates(theta_steps: int = DEFAULT_THETA_STEPS, r_values=DEFAULT_R_VALUES,
                      include_homodyne: bool = True) -> list:
    """Per-mode candidate measurements: finite projections first, then homodynes."""
    if theta_steps < 1:
        raise DomainError("theta_steps must be positive")
    thetas = np.arange(theta_steps) * (np.pi / theta_steps)
    cands = []
    for r in r_values:
        if r < 0:
            raise DomainError("r values must be >= 0")
        if r == 0:
            cands.append(GaussianProjector(0.0, 0.0))
        else:
            cands.extend(GaussianProjector(float(t), float(r)) for t in thetas)
    if include_homodyne:
        cands.extend(Homodyne(float(t)) for t in thetas)
    return cands


def _projector_cms(proj) -> np.ndarray:
    th = np.array([p.theta for p in proj], dtype=float)
    r = np.array([p.r for p in proj], dtype=float)
    c, s = np.cos(th), np.sin(th)
    lo, hi = np.exp(-2 * r), np.exp(2 * r)
    out = np.empty((len(proj), 2, 2))
    out[:, 0, 0] = lo * c * c + hi * s * s
    out[:, 1, 1] = lo * s * s + hi * c * c
    out[:, 0, 1] = out[:, 1, 0] = (lo - hi) * c * s
    return out


def random_symmetric_spec(n: int, rng: np.random.Generator, max_squeeze: float = 1.0,
                          max_noise: float = 2.0) -> SymmetricStateSpec:
    """Random physical symmetric spec.

    Samples the collective modes: the symmetric mode has variances ``(s1, s2)``
    and each of the ``n - 1`` orthogonal modes ``(d1, d2)``; both pairs must
    satisfy the uncertainty relation and ``b`` must agree between ``x`` and ``p``.
    """
    while True:
        tau = rng.uniform(1.0, max_noise)
        u = rng.uniform(-max_squeeze, max_squeeze)
        d1, d2 = tau * np.exp(2 * u), tau * np.exp(-2 * u)
        s1 = rng.uniform(0.05, 4.0) * rng.uniform(1.0, max_noise)
        s2 = s1 + (n - 1) * (d1 - d2)
        if s2 <= 0 or s1 * s2 < 1.0:
            continue
        b = (s1 + (n - 1) * d1) / n
        try:
            return SymmetricStateSpec(n, b, (s1 - d1) / n, (s2 - d2) / n)
        except PhysicalityError:
            continue


def grid_oracle(state: GaussianState, kept: Sequence[int] = (0, 1),
                measure: Optional[Measure] = None, theta_steps: int = DEFAULT_THETA_STEPS,
                r_values=DEFAULT_R_VALUES, include_homodyne: bool = True,
                max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
                threads: Optional[int] = None) -> LocalizationResult:
    """Exhaustive product-grid search over per-mode Gaussian measurements.

    The last measured mode is scored in bulk by the compiled kernel; earlier
    modes (at most two) are enumerated and conditioned explicitly.
    """
    n = state.n_modes
    kept = tuple(kept)
    measured = _measured(kept, n)
    ModePartition(kept, measured).validate(n)
    if len(kept) != 2:
        raise DimensionError("grid oracle needs exactly two kept modes")
    if not measured:
        raise DimensionError("nothing to measure")
    if len(measured) > 3:
        raise GridSizeError(f"grid oracle supports at most 3 measured modes, got {len(measured)}")
    if measure is None:
        measure = Measure.ENTROPY if state.is_pure(PURITY_TOL) else Measure.LOG_NEGATIVITY
    measure = Measure(measure)
    if measure is Measure.ENTROPY:
        _require_pure(state)

    cands = oracle_candidates(theta_steps, r_values, include_homodyne)
    total = len(cands) ** len(measured)
    if total > max_evaluations:
        raise GridSizeError(
            f"grid of {total} evaluations exceeds the limit of {max_evaluations}; "
            "reduce theta steps or r values"
        )
    proj = [c for c in cands if isinstance(c, GaussianProjector)]
    hom = [c for c in cands if isinstance(c, Homodyne)]
    proj_cms = _projector_cms(proj)
    hom_dirs = np.array([c.direction() for c in hom]).reshape(-1, 2)
    code = kernels.ENTROPY if measure is Measure.ENTROPY else kernels.LOG_NEGATIVITY

    ordered = reduce(state, kept + measured)
    k = len(measured)

    def score(prefix):
        if prefix:
            sub = condition_gaussian(
                ordered, ModePartition((0, 1, 1 + k), tuple(range(2, 1 + k))), list(prefix))
        else:
            sub = ordered
        cm = sub.cm
        vals = kernels.score_single_mode(cm[:4, :4], cm[:4, 4:], cm[4:, 4:], proj_cms, hom_dirs, code)
        j = int(np.argmax(vals))
        return float(vals[j]), j

    prefixes = list(itertools.product(cands, repeat=k - 1))
    nthreads = threads or _thread_count()
    if nthreads > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(score, prefixes))
    else:
        results = [score(p) for p in prefixes]
    best_i = int(np.argmax([v for v, _ in results]))
    _, j = results[best_i]
    last = (proj + hom)[j]
    specs = list(zip(measured, list(prefixes[best_i]) + [last]))

    cond = condition_gaussian(state, ModePartition(kept, measured), [s for _, s in specs])
    ent = entanglement(cond, measure)
    return LocalizationResult(ent.value, measure, Method.GRID_ORACLE, kept, specs, cond.cm,
                              mu=ent.mu, n_a=ent.n_a)


def recondition(state: GaussianState, result: LocalizationResult) -> GaussianState:
    """Apply ``result.optimal_specs`` to ``state`` again (self-consistency check)."""
    modes = tuple(m for m, _ in result.optimal_specs)
    return condition_gaussian(state, ModePartition(result.kept, modes),
                              [s for _, s in result.optimal_specs])
