"""Dense complex-matrix primitives used by the rest of the package.

All rank decisions go through :func:`numerical_rank`, which counts singular
values above ``max(eps_rel * sigma_max, eps_abs)``.  The relative threshold can
be overridden for a block of code with :func:`rank_tolerance`; the override is
held in a context variable, so concurrent callers do not see each other's
setting.
"""
from __future__ import annotations

import contextlib
import contextvars

import numpy as np

from .errors import InvalidInput, SamplingError, ShapeError

EPS_REL = 1e-9
EPS_ABS = 1e-12

_eps_rel = contextvars.ContextVar("slocc224_eps_rel", default=EPS_REL)


def current_eps_rel() -> float:
    return _eps_rel.get()


@contextlib.contextmanager
def rank_tolerance(eps_rel: float):
    """Temporarily replace the relative rank threshold."""
    if not eps_rel > 0:
        raise InvalidInput(f"relative tolerance must be positive, got {eps_rel!r}")
    token = _eps_rel.set(float(eps_rel))
    try:
        yield
    finally:
        _eps_rel.reset(token)


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array, raising :class:`InvalidInput` otherwise."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of shape {a.shape}")
    if a.size and not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return a


def svd(m):
    """Singular value decomposition ``m = left @ diag(s) @ right^H``.

    Returns
    -------
    s : ndarray
        Singular values, descending.
    left, right : ndarray
        Thin bases (``full_matrices=False``).
    """
    a = as_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return s, u, vh.conj().T


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def rank_threshold(s, eps_rel: float | None = None, scale: float | None = None) -> float:
    """Threshold applied to a descending singular-value vector.

    ``scale`` replaces the largest singular value as the reference magnitude.
    Products such as ``R^T R`` need it: their own top singular value can be
    pure cancellation noise while the rounding error is set by ``||R||^2``.
    """
    if eps_rel is None:
        eps_rel = _eps_rel.get()
    smax = float(s[0]) if len(s) else 0.0
    if scale is not None:
        smax = max(smax, float(scale))
    return max(eps_rel * smax, EPS_ABS)


def numerical_rank(m, eps_rel: float | None = None, scale: float | None = None) -> int:
    s = singular_values(m)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > rank_threshold(s, eps_rel, scale)))


def rank_with_margin(m, eps_rel: float | None = None, scale: float | None = None):
    """Numerical rank plus the distance (in decades) of the closest singular value to the threshold.

    The margin is ``min(log10(s_above / t), log10(t / s_below))`` where
    ``s_above`` is the smallest kept singular value and ``s_below`` the largest
    discarded one.  It is ``inf`` when nothing sits on one side, e.g. an exact
    zero matrix or a full-rank matrix.
    """
    s = singular_values(m)
    if s.size == 0:
        return 0, float("inf")
    t = rank_threshold(s, eps_rel, scale)
    keep = s > t
    r = int(np.count_nonzero(keep))
    margin = float("inf")
    if r:
        margin = min(margin, float(np.log10(s[r - 1] / t)))
    if r < s.size:
        below = float(s[r])
        if below > 0:
            margin = min(margin, float(np.log10(t / below)))
    return r, margin


def det(m) -> complex:
    """Determinant through LAPACK's partially pivoted LU."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"determinant of a non-square {a.shape} matrix")
    return complex(np.linalg.det(a))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def condition_number(m) -> float:
    s = singular_values(m)
    if s[-1] == 0:
        return float("inf")
    return float(s[0] / s[-1])


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_sl(k: int, seed=None, condition_cap: float = 100.0, max_tries: int = 10_000) -> np.ndarray:
    """Draw a k x k complex matrix with unit determinant and bounded condition number.

    Entries are i.i.d. standard complex normal; the draw is rescaled by the
    principal k-th root of its determinant and rejected while its condition
    number exceeds ``condition_cap``.  ``seed`` may be an integer or a
    ``numpy.random.Generator`` (which is advanced in place).
    """
    if k < 2:
        raise InvalidInput(f"k must be >= 2, got {k}")
    if not condition_cap > 1:
        raise InvalidInput(f"condition_cap must exceed 1, got {condition_cap}")
    rng = _rng(seed)
    for _ in range(max_tries):
        g = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
        s = np.linalg.svd(g, compute_uv=False)
        if s[-1] == 0 or s[0] / s[-1] > condition_cap:
            continue
        d = np.linalg.det(g)
        return g / d ** (1.0 / k)
    raise SamplingError(f"no SL({k}) draw with condition <= {condition_cap} after {max_tries} tries")


def random_unitary(k: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    rng = _rng(seed)
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
