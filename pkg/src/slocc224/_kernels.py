"""Hot numeric kernels, compiled with numba when available.

Every kernel exists twice: a ``*_numpy`` reference written with vectorised
numpy, and a ``*_numba`` loop version compiled with ``@njit``.  The public
names (``hdet222_batch`` and friends) point at the numba versions unless numba
is missing or the environment variable ``SLOCC224_DISABLE_NUMBA`` is set to a
non-empty value other than ``0``.

Batched inputs are stacks of amplitude tensors ``psi[k, i1, i2, i3]``.
"""
from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("SLOCC224_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not DISABLED_BY_ENV
BACKEND = "numba" if USE_NUMBA else "numpy"

# 16 two-qubit Paulis sigma^mu (x) sigma^nu, mu slow.
PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
PAULI_PAIRS = np.array([np.kron(PAULIS[m], PAULIS[n]) for m in range(4) for n in range(4)])


# ---------------------------------------------------------------- numpy paths


def hdet222_numpy(psi: np.ndarray) -> np.ndarray:
    p = np.asarray(psi, dtype=np.complex128)
    a000, a001 = p[:, 0, 0, 0], p[:, 0, 0, 1]
    a010, a011 = p[:, 0, 1, 0], p[:, 0, 1, 1]
    a100, a101 = p[:, 1, 0, 0], p[:, 1, 0, 1]
    a110, a111 = p[:, 1, 1, 0], p[:, 1, 1, 1]
    return (
        a000**2 * a111**2
        + a001**2 * a110**2
        + a010**2 * a101**2
        + a100**2 * a011**2
        - 2
        * (
            a000 * a001 * a110 * a111
            + a000 * a010 * a101 * a111
            + a000 * a100 * a011 * a111
            + a001 * a010 * a101 * a110
            + a001 * a100 * a011 * a110
            + a010 * a100 * a011 * a101
        )
        + 4 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111)
    )


def hdet223_numpy(psi: np.ndarray) -> np.ndarray:
    p = np.asarray(psi, dtype=np.complex128)
    r00, r01, r10, r11 = p[:, 0, 0, :], p[:, 0, 1, :], p[:, 1, 0, :], p[:, 1, 1, :]

    def minor(x, y, z):
        return np.linalg.det(np.stack([x, y, z], axis=1))

    return minor(r00, r01, r10) * minor(r01, r10, r11) - minor(r00, r01, r11) * minor(r00, r10, r11)


def det_batch_numpy(mats: np.ndarray) -> np.ndarray:
    return np.linalg.det(np.asarray(mats, dtype=np.complex128))


def pauli_twirl_numpy(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    p = PAULI_PAIRS
    return np.einsum("kji,jl,klm->im", p.conj(), x, p) / 16.0


# ---------------------------------------------------------------- numba paths

if HAS_NUMBA:

    @njit(cache=True)
    def hdet222_numba(psi):
        n = psi.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for k in range(n):
            a000 = psi[k, 0, 0, 0]
            a001 = psi[k, 0, 0, 1]
            a010 = psi[k, 0, 1, 0]
            a011 = psi[k, 0, 1, 1]
            a100 = psi[k, 1, 0, 0]
            a101 = psi[k, 1, 0, 1]
            a110 = psi[k, 1, 1, 0]
            a111 = psi[k, 1, 1, 1]
            sq = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110
            sq += a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011
            mixed = a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111
            mixed += a000 * a100 * a011 * a111 + a001 * a010 * a101 * a110
            mixed += a001 * a100 * a011 * a110 + a010 * a100 * a011 * a101
            quad = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111
            out[k] = sq - 2.0 * mixed + 4.0 * quad
        return out

    @njit(cache=True, inline="always")
    def _triple(x0, x1, x2, y0, y1, y2, z0, z1, z2):
        return x0 * (y1 * z2 - y2 * z1) - x1 * (y0 * z2 - y2 * z0) + x2 * (y0 * z1 - y1 * z0)

    @njit(cache=True)
    def hdet223_numba(psi):
        n = psi.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for k in range(n):
            a0, a1, a2 = psi[k, 0, 0, 0], psi[k, 0, 0, 1], psi[k, 0, 0, 2]
            b0, b1, b2 = psi[k, 0, 1, 0], psi[k, 0, 1, 1], psi[k, 0, 1, 2]
            c0, c1, c2 = psi[k, 1, 0, 0], psi[k, 1, 0, 1], psi[k, 1, 0, 2]
            d0, d1, d2 = psi[k, 1, 1, 0], psi[k, 1, 1, 1], psi[k, 1, 1, 2]
            abc = _triple(a0, a1, a2, b0, b1, b2, c0, c1, c2)
            bcd = _triple(b0, b1, b2, c0, c1, c2, d0, d1, d2)
            abd = _triple(a0, a1, a2, b0, b1, b2, d0, d1, d2)
            acd = _triple(a0, a1, a2, c0, c1, c2, d0, d1, d2)
            out[k] = abc * bcd - abd * acd
        return out

    @njit(cache=True)
    def det_batch_numba(mats):
        n, m = mats.shape[0], mats.shape[1]
        out = np.empty(n, dtype=np.complex128)
        work = np.empty((m, m), dtype=np.complex128)
        for k in range(n):
            for i in range(m):
                for j in range(m):
                    work[i, j] = mats[k, i, j]
            d = 1.0 + 0.0j
            for col in range(m):
                piv = col
                best = abs(work[col, col])
                for r in range(col + 1, m):
                    v = abs(work[r, col])
                    if v > best:
                        best = v
                        piv = r
                if best == 0.0:
                    d = 0.0 + 0.0j
                    break
                if piv != col:
                    for j in range(m):
                        tmp = work[col, j]
                        work[col, j] = work[piv, j]
                        work[piv, j] = tmp
                    d = -d
                pv = work[col, col]
                d *= pv
                for r in range(col + 1, m):
                    f = work[r, col] / pv
                    for j in range(col, m):
                        work[r, j] -= f * work[col, j]
            out[k] = d
        return out

    @njit(cache=True)
    def pauli_twirl_numba(x, paulis):
        # sum_k P_k^H x P_k / 16 with P_k unitary
        out = np.zeros((4, 4), dtype=np.complex128)
        tmp = np.empty((4, 4), dtype=np.complex128)
        for k in range(paulis.shape[0]):
            for i in range(4):
                for j in range(4):
                    acc = 0.0 + 0.0j
                    for l in range(4):
                        acc += x[i, l] * paulis[k, l, j]
                    tmp[i, j] = acc
            for i in range(4):
                for j in range(4):
                    acc = 0.0 + 0.0j
                    for l in range(4):
                        acc += np.conj(paulis[k, l, i]) * tmp[l, j]
                    out[i, j] += acc
        return out / 16.0


def _stack(psi, last):
    a = np.ascontiguousarray(psi, dtype=np.complex128)
    if a.ndim == 3:
        a = a[None]
    if a.ndim != 4 or a.shape[1:] != (2, 2, last):
        raise ValueError(f"expected (N, 2, 2, {last}) amplitudes, got {a.shape}")
    return a


def hdet222_batch(psi) -> np.ndarray:
    """Cayley hyperdeterminant of each 2x2x2 tensor in a stack."""
    a = _stack(psi, 2)
    return hdet222_numba(a) if USE_NUMBA else hdet222_numpy(a)


def hdet223_batch(psi) -> np.ndarray:
    """Degree-6 hyperdeterminant of each 2x2x3 tensor in a stack."""
    a = _stack(psi, 3)
    return hdet223_numba(a) if USE_NUMBA else hdet223_numpy(a)


def det_batch(mats) -> np.ndarray:
    a = np.ascontiguousarray(mats, dtype=np.complex128)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a stack of square matrices, got {a.shape}")
    return det_batch_numba(a) if USE_NUMBA else det_batch_numpy(a)


def pauli_twirl(x) -> np.ndarray:
    """Average of ``P^H x P`` over the 16 two-qubit Pauli products."""
    a = np.ascontiguousarray(x, dtype=np.complex128)
    if a.shape != (4, 4):
        raise ValueError(f"twirl acts on 4x4 operators, got {a.shape}")
    return pauli_twirl_numba(a, PAULI_PAIRS) if USE_NUMBA else pauli_twirl_numpy(a)
