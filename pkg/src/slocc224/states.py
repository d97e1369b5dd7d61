"""Pure states of C^2 (x) C^2 (x) C^n.

Amplitudes are stored as a read-only ``(2, 2, n)`` complex array indexed
``psi[i1, i2, i3]`` (Alice, Bob, Clare), i.e. row-major with Alice slowest,
matching ket labels ``|i1 i2 i3>``.  States are rays: nothing here normalizes
implicitly, and each function says how it scales with the norm.
"""
from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np

from . import linalg
from .errors import InvalidInput, ShapeError


class PureState:
    """Unnormalized amplitude tensor of a 2x2xn pure state."""

    __slots__ = ("_psi",)

    def __init__(self, amplitudes, n: int | None = None):
        a = np.array(amplitudes, dtype=np.complex128)
        if a.ndim == 1:
            if n is None:
                if a.size % 4:
                    raise ShapeError(f"{a.size} amplitudes cannot fill a 2x2xn tensor")
                n = a.size // 4
            if a.size != 4 * n:
                raise ShapeError(f"expected {4 * n} amplitudes for n={n}, got {a.size}")
            a = a.reshape(2, 2, n)
        if a.ndim != 3 or a.shape[:2] != (2, 2) or a.shape[2] < 1:
            raise ShapeError(f"amplitude tensor must have shape (2, 2, n), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("amplitudes must be finite")
        if not np.any(a):
            raise InvalidInput("the zero vector is not a state")
        a.setflags(write=False)
        self._psi = a

    @classmethod
    def from_terms(cls, terms: Mapping[str, complex], n: int | None = None) -> "PureState":
        """Build a state from ket labels, e.g. ``{"000": 1, "111": 1}``.

        Labels are three digits ``i1 i2 i3``; Clare's digit may run past 1.
        ``n`` defaults to the smallest dimension holding every label.
        """
        parsed = []
        for label, amp in terms.items():
            if len(label) != 3 or not label.isdigit():
                raise InvalidInput(f"bad ket label {label!r}")
            i1, i2, i3 = (int(c) for c in label)
            if i1 > 1 or i2 > 1:
                raise InvalidInput(f"Alice and Bob are qubits; got {label!r}")
            parsed.append((i1, i2, i3, complex(amp)))
        need = 1 + max(p[2] for p in parsed)
        n = need if n is None else n
        if n < need:
            raise ShapeError(f"label needs n >= {need}, got n={n}")
        psi = np.zeros((2, 2, n), dtype=np.complex128)
        for i1, i2, i3, amp in parsed:
            psi[i1, i2, i3] += amp
        return cls(psi)

    @property
    def tensor(self) -> np.ndarray:
        return self._psi

    @property
    def n(self) -> int:
        return self._psi.shape[2]

    @property
    def amplitudes(self) -> np.ndarray:
        """Flat row-major amplitude vector of length 4n."""
        return self._psi.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self._psi))

    def normalized(self) -> "PureState":
        return PureState(self._psi / self.norm())

    def scaled(self, c: complex) -> "PureState":
        return PureState(self._psi * c)

    def __repr__(self) -> str:
        terms = []
        for (i1, i2, i3), amp in np.ndenumerate(self._psi):
            if amp != 0:
                terms.append(f"{amp:.4g}|{i1}{i2}{i3}>")
        body = " + ".join(terms[:8]) + (" + ..." if len(terms) > 8 else "")
        return f"PureState(n={self.n}: {body})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PureState) and np.array_equal(self._psi, other._psi)

    def __hash__(self) -> int:
        return hash(self._psi.tobytes())


class LocalRanks(NamedTuple):
    r1: int
    r2: int
    r3: int


def flatten(state: PureState) -> np.ndarray:
    """The 4 x n matrix with rows indexed by (i1 i2) in order 00, 01, 10, 11."""
    return state.tensor.reshape(4, state.n).copy()


def unflatten(mat) -> PureState:
    m = linalg.as_matrix(mat)
    if m.shape[0] != 4:
        raise ShapeError(f"flattened state must have 4 rows, got {m.shape}")
    return PureState(m.reshape(2, 2, m.shape[1]))


def reduced_density(state: PureState, party: int) -> np.ndarray:
    """Partial trace over the other two parties; trace equals the squared norm."""
    psi = state.tensor
    if party == 1:
        m = psi.reshape(2, -1)
    elif party == 2:
        m = psi.transpose(1, 0, 2).reshape(2, -1)
    elif party == 3:
        m = psi.reshape(4, -1).T
    else:
        raise InvalidInput(f"party must be 1, 2 or 3, got {party!r}")
    return m @ m.conj().T


def local_ranks(state: PureState) -> LocalRanks:
    # rank(rho_i) equals rank of the matching flattening; the flattening's
    # singular values are the square roots of rho's eigenvalues, which keeps
    # the rank threshold on the amplitude scale.
    psi = state.tensor
    return LocalRanks(
        linalg.numerical_rank(psi.reshape(2, -1)),
        linalg.numerical_rank(psi.transpose(1, 0, 2).reshape(2, -1)),
        linalg.numerical_rank(psi.reshape(4, -1)),
    )


def support_basis(state: PureState) -> np.ndarray:
    """Unitary n x n matrix whose leading columns span Clare's support.

    Columns are the right singular vectors of the flattened state, ordered by
    decreasing singular value.
    """
    m = flatten(state)
    _, _, vh = np.linalg.svd(m, full_matrices=True)
    return vh.conj().T


def clare_normal_support(state: PureState) -> PureState:
    """Return an equivalent state with n = 4.

    For n > 4 Clare's basis is rotated onto her support (right singular
    vectors of the flattening) and truncated to four columns; for n < 4 the
    tensor is zero-padded; n = 4 is returned as is.
    """
    n = state.n
    if n == 4:
        return state
    m = flatten(state)
    if n < 4:
        out = np.zeros((4, 4), dtype=np.complex128)
        out[:, :n] = m
        return unflatten(out)
    rotated = m @ support_basis(state)
    return unflatten(rotated[:, :4])


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>, conjugate-linear in ``a``."""
    if a.n != b.n:
        raise ShapeError(f"states live in different spaces (n={a.n} vs n={b.n})")
    return complex(np.vdot(a.tensor, b.tensor))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 / (<a|a><b|b>), the overlap of the two rays."""
    return abs(overlap(a, b)) ** 2 / (a.norm() ** 2 * b.norm() ** 2)


def random_state(n: int = 4, seed=None) -> PureState:
    """Normalized state with i.i.d. complex Gaussian amplitudes."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal((2, 2, n)) + 1j * rng.standard_normal((2, 2, n))
    return PureState(z / np.linalg.norm(z))
