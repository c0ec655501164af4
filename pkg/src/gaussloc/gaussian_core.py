"""Covariance-matrix representation of Gaussian states and symplectic maps.

Conventions
-----------
* Quadratures are interleaved, ``(x_1, p_1, ..., x_N, p_N)``, so the 2x2
  block of mode ``k`` sits at rows/columns ``2k:2k+2``.
* The vacuum has covariance matrix equal to the identity.
* A transform ``S`` acts on a covariance matrix as ``S @ cm @ S.T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, PhysicalityError

#: absolute tolerance on ``nu_k >= 1`` and on purity
PHYS_TOL = 1e-9
SYMMETRY_RTOL = 1e-12
SYMPLECTIC_TOL = 1e-10

#: the constant 2x2 antisymmetric matrix used in two-mode determinant identities
R2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n: int) -> np.ndarray:
    """Standard symplectic form for ``n`` modes in interleaved ordering."""
    return np.kron(np.eye(n), R2)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_symmetric(m: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.T), initial=0.0) > SYMMETRY_RTOL * scale:
        raise DimensionError("covariance matrix is not symmetric")


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean Gaussian state described by its covariance matrix.

    Construction validates shape and symmetry only; physicality is checked by
    :meth:`check_physical` so that invalid files can still be inspected.
    """

    cm: np.ndarray

    def __post_init__(self):
        cm = np.asarray(self.cm, dtype=float)
        if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] % 2 or cm.shape[0] == 0:
            raise DimensionError(f"covariance matrix must be 2N x 2N, got shape {cm.shape}")
        if not np.all(np.isfinite(cm)):
            raise DimensionError("covariance matrix has non-finite entries")
        _check_symmetric(cm)
        object.__setattr__(self, "cm", _frozen(0.5 * (cm + cm.T)))

    @property
    def n_modes(self) -> int:
        return self.cm.shape[0] // 2

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self)

    def is_physical(self, tol: float = PHYS_TOL) -> bool:
        if np.min(np.linalg.eigvalsh(self.cm)) <= 0:
            return False
        return bool(self.symplectic_eigenvalues()[-1] >= 1.0 - tol)

    def is_pure(self, tol: float = PHYS_TOL) -> bool:
        nu = self.symplectic_eigenvalues()
        return bool(np.all(np.abs(nu - 1.0) <= tol))

    def check_physical(self, tol: float = PHYS_TOL) -> "GaussianState":
        if not self.is_physical(tol):
            nu = self.symplectic_eigenvalues()
            raise PhysicalityError(
                f"unphysical covariance matrix: smallest symplectic eigenvalue {nu[-1]:.6g} < 1"
            )
        return self

    def block(self, i: int, j: int | None = None) -> np.ndarray:
        """2x2 block between modes ``i`` and ``j`` (``j`` defaults to ``i``)."""
        j = i if j is None else j
        return self.cm[2 * i:2 * i + 2, 2 * j:2 * j + 2]

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Linear phase-space map ``S`` with ``S @ Omega @ S.T == Omega``."""

    s: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2 or s.shape[0] == 0:
            raise DimensionError(f"symplectic matrix must be 2N x 2N, got shape {s.shape}")
        om = omega(s.shape[0] // 2)
        if np.max(np.abs(s @ om @ s.T - om)) > SYMPLECTIC_TOL * max(1.0, np.max(np.abs(s))) ** 2:
            raise DimensionError("matrix does not preserve the symplectic form")
        object.__setattr__(self, "s", _frozen(s))

    @property
    def n_modes(self) -> int:
        return self.s.shape[0] // 2

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        if not isinstance(other, SymplecticTransform):
            return NotImplemented
        if other.n_modes != self.n_modes:
            raise DimensionError("cannot compose transforms on different mode counts")
        return SymplecticTransform(self.s @ other.s)

    def inverse(self) -> "SymplecticTransform":
        om = omega(self.n_modes)
        return SymplecticTransform(-om @ self.s.T @ om)

    def __repr__(self):
        return f"SymplecticTransform(n_modes={self.n_modes})"


@dataclass(frozen=True)
class ModePartition:
    """Split of mode indices into the kept pair and the measured modes."""

    kept: tuple
    measured: tuple

    def __post_init__(self):
        kept = tuple(int(k) for k in self.kept)
        measured = tuple(int(k) for k in self.measured)
        allm = kept + measured
        if len(set(allm)) != len(allm):
            raise DimensionError(f"duplicate mode indices in partition {allm}")
        if any(k < 0 for k in allm):
            raise DimensionError("mode indices must be non-negative")
        object.__setattr__(self, "kept", kept)
        object.__setattr__(self, "measured", measured)

    @classmethod
    def from_kept(cls, kept: Sequence[int], n_modes: int) -> "ModePartition":
        kept = tuple(int(k) for k in kept)
        _check_indices(kept, n_modes)
        return cls(kept, tuple(k for k in range(n_modes) if k not in kept))

    def validate(self, n_modes: int) -> None:
        _check_indices(self.kept + self.measured, n_modes)


def _check_indices(modes: Sequence[int], n_modes: int) -> None:
    for k in modes:
        if not 0 <= k < n_modes:
            raise DimensionError(f"mode index {k} out of range for {n_modes} modes")
    if len(set(modes)) != len(modes):
        raise DimensionError(f"duplicate mode indices {tuple(modes)}")


def quadrature_indices(modes: Sequence[int]) -> np.ndarray:
    return np.array([2 * k + q for k in modes for q in (0, 1)], dtype=int)


def symplectic_eigenvalues(state) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, descending.

    Accepts a :class:`GaussianState` or a raw symmetric matrix. For positive
    definite input the spectrum comes from the Hermitian matrix
    ``i L.T Omega L`` (``cm = L L.T``), which is accurate near ``nu = 1``.
    """
    cm = state.cm if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] % 2:
        raise DimensionError(f"expected a 2N x 2N matrix, got shape {cm.shape}")
    _check_symmetric(cm)
    n = cm.shape[0] // 2
    om = omega(n)
    try:
        low = np.linalg.cholesky(cm)
    except np.linalg.LinAlgError:
        ev = np.abs(np.linalg.eigvals(om @ cm))
        return np.sort(ev)[::-1][::2].copy()
    ev = np.linalg.eigvalsh(1j * (low.T @ om @ low))
    return np.sort(ev[n:])[::-1]


def williamson(cm) -> tuple[np.ndarray, np.ndarray]:
    """Williamson normal form ``cm = S @ diag(nu_1, nu_1, ..., nu_N, nu_N) @ S.T``.

    Returns ``(nu, S)`` with ``nu`` descending and ``S`` symplectic. Requires a
    positive definite input.
    """
    from scipy.linalg import schur, sqrtm

    cm = np.asarray(cm.cm if isinstance(cm, GaussianState) else cm, dtype=float)
    n = cm.shape[0] // 2
    half = np.real(sqrtm(cm))
    half = 0.5 * (half + half.T)
    ihalf = np.linalg.inv(half)
    k = ihalf @ omega(n) @ ihalf
    k = 0.5 * (k - k.T)
    t, o = schur(k, output="real")
    d = np.empty(n)
    cols = []
    for j in range(n):
        a = t[2 * j, 2 * j + 1]
        c0, c1 = o[:, 2 * j], o[:, 2 * j + 1]
        if a < 0:
            c0, c1, a = c1, c0, -a
        cols.append((c0, c1))
        d[j] = a
    nu = 1.0 / d
    order = np.argsort(-nu, kind="stable")
    o_sorted = np.column_stack([c for j in order for c in cols[j]])
    nu = nu[order]
    s = half @ o_sorted @ np.diag(np.repeat(nu, 2) ** -0.5)
    # the real Schur form of an antisymmetric matrix is block diagonal, so S is
    # exactly symplectic up to rounding
    return nu, s


# --- constructors -----------------------------------------------------------

def vacuum(n_modes: int) -> GaussianState:
    if n_modes < 1:
        raise DomainError("n_modes must be positive")
    return GaussianState(np.eye(2 * n_modes))


def thermal(nbar_or_var: float, n_modes: int = 1) -> GaussianState:
    """Product thermal state with per-quadrature variance ``nbar_or_var`` (>= 1)."""
    return GaussianState(nbar_or_var * np.eye(2 * n_modes))


def tmsv_blocks(lam: float) -> tuple[float, float]:
    """``(cosh 2r, sinh 2r)`` for ``lam = tanh r``, evaluated rationally in ``lam``."""
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    l2 = lam * lam
    return (1.0 + l2) / (1.0 - l2), 2.0 * lam / (1.0 - l2)


def two_mode_squeezed(lam: float) -> GaussianState:
    """Two-mode squeezed vacuum with Schmidt parameter ``lam = tanh r``."""
    ch, sh = tmsv_blocks(lam)
    z = np.diag([1.0, -1.0])
    cm = np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
    return GaussianState(cm)


def direct_sum(*states: GaussianState) -> GaussianState:
    from scipy.linalg import block_diag

    return GaussianState(block_diag(*[s.cm for s in states]))


def embed(local: np.ndarray, modes: Sequence[int], n_modes: int) -> SymplecticTransform:
    """Lift a ``2k x 2k`` symplectic matrix acting on ``modes`` to ``n_modes``."""
    modes = tuple(modes)
    _check_indices(modes, n_modes)
    local = np.asarray(local, dtype=float)
    if local.shape != (2 * len(modes), 2 * len(modes)):
        raise DimensionError("local matrix does not match number of modes")
    s = np.eye(2 * n_modes)
    idx = quadrature_indices(modes)
    s[np.ix_(idx, idx)] = local
    return SymplecticTransform(s)


def rotation_matrix(theta: float) -> np.ndarray:
    """The 2x2 matrix ``[[cos, sin], [-sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def rotation(theta: float, mode: int = 0, n_modes: int = 1) -> SymplecticTransform:
    """Phase rotation; with ``n_modes=1`` the matrix is exactly ``W(theta)``."""
    return embed(rotation_matrix(theta), (mode,), n_modes)


def squeezer(r: float, mode: int = 0, n_modes: int = 1) -> SymplecticTransform:
    """Single-mode squeezer ``x -> e^r x``, ``p -> e^-r p``.

    Acting on the vacuum it produces ``diag(e^{2r}, e^{-2r})``.
    """
    return embed(np.diag([np.exp(r), np.exp(-r)]), (mode,), n_modes)


def beamsplitter(transmittance: float, modes: Sequence[int] = (0, 1),
                 n_modes: int = 2) -> SymplecticTransform:
    """Real beam splitter ``(q1, q2) -> (t q1 + r q2, r q1 - t q2)`` for ``q = x, p``.

    ``t = sqrt(transmittance)``, ``r = sqrt(1 - transmittance)``. At
    transmittance 1/2 this is the even convention
    ``((x1 + x2)/sqrt 2, (x1 - x2)/sqrt 2)``; the matrix is its own inverse.
    """
    if not 0.0 <= transmittance <= 1.0:
        raise DomainError(f"transmittance must lie in [0, 1], got {transmittance}")
    t, r = np.sqrt(transmittance), np.sqrt(1.0 - transmittance)
    return embed(np.kron(np.array([[t, r], [r, -t]]), np.eye(2)), tuple(modes), n_modes)


def passive(unitary: np.ndarray) -> SymplecticTransform:
    """Passive linear-optics transform from an ``N x N`` unitary on annihilation operators."""
    u = np.asarray(unitary)
    n = u.shape[0]
    re, im = u.real, u.imag
    s = np.zeros((2 * n, 2 * n))
    s[0::2, 0::2] = re
    s[0::2, 1::2] = -im
    s[1::2, 0::2] = im
    s[1::2, 1::2] = re
    return SymplecticTransform(s)


def apply(transform: SymplecticTransform, state: GaussianState) -> GaussianState:
    if transform.n_modes != state.n_modes:
        raise DimensionError(
            f"transform acts on {transform.n_modes} modes, state has {state.n_modes}"
        )
    s = transform.s
    return GaussianState(s @ state.cm @ s.T)


def reduce(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal state on ``modes``, in the listed order."""
    modes = tuple(int(m) for m in modes)
    _check_indices(modes, state.n_modes)
    idx = quadrature_indices(modes)
    return GaussianState(state.cm[np.ix_(idx, idx)])


def permute(state: GaussianState, order: Sequence[int]) -> GaussianState:
    """Reorder all modes; ``order`` must be a permutation."""
    if sorted(order) != list(range(state.n_modes)):
        raise DimensionError("order must be a permutation of all modes")
    return reduce(state, order)


# --- random sampling ----------------------------------------------------------

def random_symplectic(n_modes: int, rng: np.random.Generator,
                      max_squeeze: float = 0.8) -> SymplecticTransform:
    """Bloch-Messiah sample: interferometer, squeezers, interferometer."""
    from scipy.stats import unitary_group

    u1 = unitary_group.rvs(n_modes, random_state=rng) if n_modes > 1 else np.exp(
        2j * np.pi * rng.random()) * np.ones((1, 1))
    u2 = unitary_group.rvs(n_modes, random_state=rng) if n_modes > 1 else np.exp(
        2j * np.pi * rng.random()) * np.ones((1, 1))
    r = rng.uniform(-max_squeeze, max_squeeze, size=n_modes)
    sq = np.diag(np.exp(np.column_stack([r, -r]).ravel()))
    return passive(u1) @ SymplecticTransform(sq) @ passive(u2)


def random_pure_state(n_modes: int, rng: np.random.Generator,
                      max_squeeze: float = 0.8) -> GaussianState:
    """Random pure state: a random circuit applied to the vacuum."""
    return apply(random_symplectic(n_modes, rng, max_squeeze), vacuum(n_modes))


def tmsv_split_state(lam: float) -> GaussianState:
    """Modes (A, B, C): ``TMSV(lam)`` on (B, C), then B mixed with vacuum A on a balanced splitter."""
    state = direct_sum(vacuum(1), two_mode_squeezed(lam))
    return apply(beamsplitter(0.5, (0, 1), 3), state)
