"""Pure numpy implementation of the oracle scoring kernel.

Mirrors ``_kernels.pyx`` formula for formula; used when the compiled
extension is unavailable or ``GLE_PURE_PYTHON`` is set.
"""

import numpy as np

ENTROPY = 0
LOG_NEGATIVITY = 1


def _thermal_entropy_from_det(det_a):
    n = 0.5 * (np.sqrt(np.maximum(det_a, 1.0)) - 1.0)
    out = (n + 1.0) * np.log2(n + 1.0)
    pos = n > 0
    out[pos] -= n[pos] * np.log2(n[pos])
    return out


def _det2(m):
    return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]


def _score(cond, measure):
    if measure == ENTROPY:
        return _thermal_entropy_from_det(_det2(cond[:, :2, :2]))
    delta = _det2(cond[:, :2, :2]) + _det2(cond[:, 2:, 2:]) - 2.0 * _det2(cond[:, :2, 2:])
    disc = np.maximum(delta * delta - 4.0 * np.linalg.det(cond), 0.0)
    mu2 = np.maximum(0.5 * (delta - np.sqrt(disc)), 1e-300)
    return np.maximum(0.0, -0.5 * np.log2(mu2))


def score_single_mode(a, c, b, proj_cms, hom_dirs, measure):
    """Entanglement of the kept pair for each candidate measurement of one mode.

    Parameters
    ----------
    a, c, b : ndarray
        Kept 4x4 block, 4x2 cross block and measured 2x2 block.
    proj_cms : ndarray, shape (P, 2, 2)
        Covariance matrices of pure projection states.
    hom_dirs : ndarray, shape (H, 2)
        Unit vectors of homodyne quadratures.
    measure : int
        ``ENTROPY`` or ``LOG_NEGATIVITY``.

    Returns
    -------
    ndarray, shape (P + H,)
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    proj_cms = np.asarray(proj_cms, dtype=float).reshape(-1, 2, 2)
    hom_dirs = np.asarray(hom_dirs, dtype=float).reshape(-1, 2)

    g = b[None] + proj_cms
    det = _det2(g)
    ginv = np.empty_like(g)
    ginv[:, 0, 0] = g[:, 1, 1] / det
    ginv[:, 1, 1] = g[:, 0, 0] / det
    ginv[:, 0, 1] = -g[:, 0, 1] / det
    ginv[:, 1, 0] = -g[:, 1, 0] / det
    cond_p = a[None] - np.einsum("ij,njk,lk->nil", c, ginv, c)

    cu = hom_dirs @ c.T
    denom = np.einsum("ni,ij,nj->n", hom_dirs, b, hom_dirs)
    cond_h = a[None] - cu[:, :, None] * cu[:, None, :] / denom[:, None, None]

    return np.concatenate([_score(cond_p, measure), _score(cond_h, measure)])
