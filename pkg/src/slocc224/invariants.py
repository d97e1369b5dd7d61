"""SLOCC invariants of 2x2xn states.

The two qubits of Alice and Bob are conjugated into SO(4, C) by the fixed
unitary ``magic_T``: if ``O = T (M1 (x) M2) T^H`` then the matrix
``R = T Psi`` transforms as ``R -> O R M3^T``.  Because ``O^T O = 1`` the rank
of ``R^T R`` (plain transpose, no conjugation) is invariant alongside the rank
of ``R``.

The hyperdeterminants of the 2x2x3 and 2x2x2 formats are evaluated after
rotating Clare's basis so her support occupies the leading columns.  That
rotation carries a phase convention, so only their moduli are canonical.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from . import _kernels, linalg
from .errors import PreconditionError
from .states import LocalRanks, PureState, clare_normal_support, flatten, local_ranks, support_basis

ZERO_RTOL = 1e-8

DEGREE = {"det224": 4, "hdet223": 6, "hdet222": 4}

_SQ2 = np.sqrt(2.0)
_T = np.array(
    [
        [1, 0, 0, 1],
        [0, 1j, 1j, 0],
        [0, -1, 1, 0],
        [1j, 0, 0, -1j],
    ],
    dtype=np.complex128,
) / _SQ2
_T.setflags(write=False)


def magic_T() -> np.ndarray:
    return _T.copy()


def r_matrix(state: PureState) -> np.ndarray:
    """``T @ Psi`` for the state brought to four Clare columns."""
    return _T @ flatten(clare_normal_support(state))


def rank_pair_with_margins(r: np.ndarray) -> tuple[int, float, int, float]:
    """Ranks of ``R`` and ``R^T R`` with their margins.

    ``R^T R`` is thresholded against ``||R||_2^2``, never against its own top
    singular value: when R is isotropic (``R^T R = 0`` exactly) the computed
    product is rounding noise of that size, and self-relative thresholding
    would count the noise as rank.
    """
    rank_R, m_R = linalg.rank_with_margin(r)
    smax = float(linalg.singular_values(r)[0])
    rank_RTR, m_RTR = linalg.rank_with_margin(r.T @ r, scale=smax**2)
    return rank_R, m_R, rank_RTR, m_RTR


def rank_pair(state: PureState) -> tuple[int, int]:
    """``(rank R, rank R^T R)``; transpose is the plain, non-conjugating one."""
    rank_R, _, rank_RTR, _ = rank_pair_with_margins(r_matrix(state))
    return rank_R, rank_RTR


def so4_from_sl2_pair(m1, m2, atol: float = 1e-8) -> np.ndarray:
    m1 = linalg.as_matrix(m1)
    m2 = linalg.as_matrix(m2)
    if m1.shape != (2, 2) or m2.shape != (2, 2):
        raise PreconditionError("both factors must be 2x2")
    for name, m in (("M1", m1), ("M2", m2)):
        d = linalg.det(m)
        if abs(d - 1) > atol:
            raise PreconditionError(f"{name} has determinant {d:.6g}, not 1")
    return _T @ np.kron(m1, m2) @ _T.conj().T


def is_zero(value: complex, norm: float, degree: int, rtol: float = ZERO_RTOL) -> bool:
    """Zero test for a homogeneous polynomial of the given degree."""
    return abs(value) <= rtol * norm**degree


def det224(state: PureState) -> complex:
    """Determinant of the 4x4 flattening; vanishes off the generic class."""
    return linalg.det(flatten(clare_normal_support(state)))


def clare_restricted(state: PureState, width: int) -> np.ndarray:
    """Amplitude tensor of shape (2, 2, width) carrying all of Clare's support.

    If the columns beyond ``width`` already vanish the leading block is taken
    verbatim; otherwise Clare's basis is first rotated onto the right singular
    vectors of the flattening.  Callers must ensure Clare's rank is at most
    ``width``.
    """
    s = clare_normal_support(state)
    m = flatten(s)
    tail = np.linalg.norm(m[:, width:])
    if tail > linalg.EPS_ABS * max(1.0, np.linalg.norm(m)):
        m = m @ support_basis(s)
    return m[:, :width].reshape(2, 2, width)


def _clare_rank(state: PureState) -> int:
    return linalg.numerical_rank(flatten(state))


def hdet223(state: PureState) -> complex:
    """Degree-6 hyperdeterminant of the 2x2x3 format.

    Raises
    ------
    PreconditionError
        If Clare's local rank is 4, where no 2x2x3 restriction exists.
    """
    if _clare_rank(state) > 3:
        raise PreconditionError("hdet223 needs Clare's local rank <= 3")
    return complex(_kernels.hdet223_batch(clare_restricted(state, 3))[0])


def hdet222(state: PureState) -> complex:
    """Cayley hyperdeterminant of the 2x2x2 format (its modulus is the 3-tangle)."""
    if _clare_rank(state) > 2:
        raise PreconditionError("hdet222 needs Clare's local rank <= 2")
    return complex(_kernels.hdet222_batch(clare_restricted(state, 2))[0])


def admits_hyperdeterminant(dims) -> bool:
    """Whether a hyperdeterminant exists for the format ``k1 x ... x kl``.

    The condition is ``k_i - 1 <= sum_{j != i} (k_j - 1)`` for every i.
    """
    dims = [int(k) for k in dims]
    if any(k < 1 for k in dims):
        raise PreconditionError(f"dimensions must be positive, got {dims}")
    total = sum(k - 1 for k in dims)
    return all(2 * (k - 1) <= total for k in dims)


@dataclass(frozen=True)
class InvariantSignature:
    rank_R: int
    rank_RTR: int
    local_ranks: LocalRanks
    det224: complex
    hdet223: complex | None
    hdet222: complex | None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["local_ranks"] = list(self.local_ranks)
        for key in ("det224", "hdet223", "hdet222"):
            v = getattr(self, key)
            d[key] = None if v is None else {"abs": abs(v), "re": v.real, "im": v.imag}
        return d


def invariant_signature(state: PureState) -> InvariantSignature:
    """All invariants of the state, hyperdeterminants only where defined.

    Determinants are evaluated on the normalized state so their moduli are
    comparable across inputs of different scale.
    """
    s = clare_normal_support(state.normalized())
    rank_R, rank_RTR = rank_pair(s)
    lr = local_ranks(s)
    return InvariantSignature(
        rank_R=rank_R,
        rank_RTR=rank_RTR,
        local_ranks=lr,
        det224=det224(s),
        hdet223=hdet223(s) if lr.r3 <= 3 else None,
        hdet222=hdet222(s) if lr.r3 <= 2 else None,
    )
