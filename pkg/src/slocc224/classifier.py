"""Assigning a state to one of the nine SLOCC classes.

Two procedures are implemented and cross-checked by :func:`classify`:

* :func:`classify_by_ranks` looks up ``(rank R, rank R^T R, r1)`` in the
  class table;
* :func:`classify_by_hyperdets` dispatches on the local-rank triple and, for
  the (2,2,3) and (2,2,2) patterns, on whether the matching hyperdeterminant
  vanishes.

Both normalize the input first, so verdicts do not depend on global scale.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, linalg
from .errors import AmbiguousClassification, ClassifierDisagreement, InvalidState
from .invariants import (
    ZERO_RTOL,
    InvariantSignature,
    clare_restricted,
    invariant_signature,
    magic_T,
    rank_pair_with_margins,
)
from .states import PureState, clare_normal_support, flatten


class SloccClass(str, enum.Enum):
    GENERIC = "Generic"
    MAJOR = "MajorRank3"
    MINOR = "MinorRank3"
    GHZ = "GHZ"
    W = "W"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    S = "S"

    @classmethod
    def parse(cls, text: str) -> "SloccClass":
        key = text.strip().lower()
        for c in cls:
            if key in (c.value.lower(), c.name.lower()):
                return c
        aliases = {"major": cls.MAJOR, "minor": cls.MINOR, "separable": cls.S, "2bell": cls.GENERIC}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown class {text!r}; expected one of {[c.value for c in cls]}")

    def __str__(self) -> str:
        return self.value


# (rank R, rank R^T R, r1) -> class
RANK_TABLE = {
    (4, 4, 2): SloccClass.GENERIC,
    (3, 3, 2): SloccClass.MAJOR,
    (3, 2, 2): SloccClass.MINOR,
    (2, 2, 2): SloccClass.GHZ,
    (2, 1, 2): SloccClass.W,
    (2, 0, 2): SloccClass.B2,
    (2, 0, 1): SloccClass.B1,
    (1, 1, 2): SloccClass.B3,
    (1, 0, 1): SloccClass.S,
}
SIGNATURES = {c: key for key, c in RANK_TABLE.items()}

# (r1, r2, r3) -> class, for the patterns that need no hyperdeterminant
_LOCAL_RANK_TABLE = {
    (2, 2, 4): SloccClass.GENERIC,
    (1, 2, 2): SloccClass.B1,
    (2, 1, 2): SloccClass.B2,
    (2, 2, 1): SloccClass.B3,
    (1, 1, 1): SloccClass.S,
}


@dataclass
class ClassificationReport:
    """Verdict plus the margins of every decision that led to it.

    The full :class:`InvariantSignature` is computed on first access; the
    classifiers themselves only need the ranks and the one hyperdeterminant
    their decision path visits.
    """

    label: SloccClass
    state: PureState = field(repr=False)
    method: str
    margins: dict = field(default_factory=dict)

    @functools.cached_property
    def signature(self) -> InvariantSignature:
        return invariant_signature(self.state)

    @property
    def min_margin(self) -> float:
        return min(self.margins.values()) if self.margins else float("inf")

    @property
    def confident(self) -> bool:
        return self.min_margin > 0

    def as_dict(self) -> dict:
        return {
            "class": self.label.value,
            "method": self.method,
            "signature": self.signature.as_dict(),
            "margins": {k: (None if not np.isfinite(v) else v) for k, v in self.margins.items()},
        }


def classify_by_ranks(state: PureState) -> ClassificationReport:
    s = clare_normal_support(state.normalized())
    r = magic_T() @ flatten(s)
    rank_R, m_R, rank_RTR, m_RTR = rank_pair_with_margins(r)
    r1, m_r1 = linalg.rank_with_margin(s.tensor.reshape(2, -1))
    margins = {"rank_R": m_R, "rank_RTR": m_RTR, "r1": m_r1}
    key = (rank_R, rank_RTR, r1)
    label = RANK_TABLE.get(key)
    if label is None:
        raise AmbiguousClassification(
            f"rank triple {key} is not a row of the class table", ranks=key, margins=margins
        )
    return ClassificationReport(label, s, "rank-table", margins)


def balance(psi: np.ndarray, sweeps: int = 5, tol: float = 1e-9, max_cond: float = 1e12) -> np.ndarray:
    """Local filtering towards maximally mixed marginals.

    Each sweep replaces ``psi`` by ``rho_i^{-1/2}`` acting on party ``i`` for
    every party in turn, then renormalizes.  All factors are invertible, so
    the SLOCC class and the vanishing of every hyperdeterminant are preserved
    while the tensor is driven towards a well-conditioned representative.

    States with a vanishing hyperdeterminant never converge: the filter keeps
    shrinking them and roughly multiplies the rounding noise in the
    hyperdeterminant by ten per sweep.  Five sweeps lift every nonvanishing
    orbit sample (condition number <= 100 per factor) far above the zero
    tolerance while keeping that noise below 1e-11.

    A marginal with eigenvalue ratio above ``max_cond`` (1e6 on the amplitude
    scale) stops the filtering: beyond it the amplified noise can lift a
    W-class hyperdeterminant over the zero tolerance.  States that lopsided,
    e.g. ``|000> + 1e-7 |111>``, are left to the cross-check in
    :func:`classify`, which reports the disagreement instead of guessing.
    """
    t = np.array(psi, dtype=np.complex128)
    t /= np.linalg.norm(t)
    for _ in range(sweeps):
        worst = 0.0
        for axis in range(t.ndim):
            moved = np.moveaxis(t, axis, 0)
            d = moved.shape[0]
            m = moved.reshape(d, -1)
            rho = m @ m.conj().T
            w, v = np.linalg.eigh(rho)
            if w[0] <= 0 or w[-1] / w[0] > max_cond:
                return t
            worst = max(worst, float(np.max(np.abs(w * d - 1.0))))
            f = (v / np.sqrt(w * d)) @ v.conj().T
            moved = np.tensordot(f, moved, axes=(1, 0))
            t = np.moveaxis(moved, 0, axis)
            t /= np.linalg.norm(t)
        if worst < tol:
            break
    return t


def _hyperdet_test(s: PureState, width: int) -> tuple[bool, float]:
    t = balance(clare_restricted(s, width))
    if width == 3:
        h = _kernels.hdet223_batch(t)[0]
    else:
        h = _kernels.hdet222_batch(t)[0]
    # t has unit norm, so the homogeneous tolerance is rtol itself
    ratio = abs(h) / ZERO_RTOL
    margin = float(abs(np.log10(ratio))) if ratio > 0 else float("inf")
    return abs(h) > ZERO_RTOL, margin


def classify_by_hyperdets(state: PureState) -> ClassificationReport:
    s = clare_normal_support(state.normalized())
    psi = s.tensor
    r1, m1 = linalg.rank_with_margin(psi.reshape(2, -1))
    r2, m2 = linalg.rank_with_margin(psi.transpose(1, 0, 2).reshape(2, -1))
    r3, m3 = linalg.rank_with_margin(psi.reshape(4, -1))
    margins = {"r1": m1, "r2": m2, "r3": m3}
    key = (r1, r2, r3)
    if key in _LOCAL_RANK_TABLE:
        label = _LOCAL_RANK_TABLE[key]
    elif key == (2, 2, 3):
        nonzero, margins["hdet223"] = _hyperdet_test(s, 3)
        label = SloccClass.MAJOR if nonzero else SloccClass.MINOR
    elif key == (2, 2, 2):
        nonzero, margins["hdet222"] = _hyperdet_test(s, 2)
        label = SloccClass.GHZ if nonzero else SloccClass.W
    else:
        raise InvalidState(f"local ranks {key} are impossible for a 2x2xn pure state")
    return ClassificationReport(label, s, "hyperdet-recursive", margins)


def classify(state: PureState) -> ClassificationReport:
    """Run both classifiers and return the common verdict.

    Raises
    ------
    AmbiguousClassification
        From the rank-table method, when the ranks match no table row.
    ClassifierDisagreement
        When the two methods return different labels.
    """
    a = classify_by_ranks(state)
    b = classify_by_hyperdets(state)
    if a.label != b.label:
        raise ClassifierDisagreement(
            f"rank table says {a.label}, hyperdeterminants say {b.label}", a, b
        )
    margins = {**{f"table.{k}": v for k, v in a.margins.items()},
               **{f"hyperdet.{k}": v for k, v in b.margins.items()}}
    return ClassificationReport(a.label, a.state, "cross-checked", margins)
