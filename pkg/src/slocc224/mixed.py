"""Mixed states given as explicit pure-state ensembles.

The class of a density matrix is the smallest level reachable over all of its
decompositions; that minimization is not attempted.  What is computed is the
level of one given decomposition, an upper bound on the true class.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .classifier import SIGNATURES, SloccClass, classify
from .errors import InvalidInput, PreconditionError, ShapeError
from .invariants import r_matrix
from .orbits import random_orbit_sample


class MixedClass(enum.IntEnum):
    S = 0
    BISEPARABLE = 1
    W = 2
    GHZ = 3
    MINOR = 4
    MAJOR = 5
    GENERIC = 6

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    MixedClass.S: "S",
    MixedClass.BISEPARABLE: "Biseparable",
    MixedClass.W: "W",
    MixedClass.GHZ: "GHZ",
    MixedClass.MINOR: "MinorRank3",
    MixedClass.MAJOR: "MajorRank3",
    MixedClass.GENERIC: "Generic",
}

_LEVEL = {
    SloccClass.S: MixedClass.S,
    SloccClass.B1: MixedClass.BISEPARABLE,
    SloccClass.B2: MixedClass.BISEPARABLE,
    SloccClass.B3: MixedClass.BISEPARABLE,
    SloccClass.W: MixedClass.W,
    SloccClass.GHZ: MixedClass.GHZ,
    SloccClass.MINOR: MixedClass.MINOR,
    SloccClass.MAJOR: MixedClass.MAJOR,
    SloccClass.GENERIC: MixedClass.GENERIC,
}


def level(cls: SloccClass) -> MixedClass:
    return _LEVEL[SloccClass(cls)]


@dataclass(frozen=True)
class MixedEnsemble:
    weights: tuple[float, ...]
    states: tuple

    def __post_init__(self):
        if not self.states:
            raise InvalidInput("an ensemble needs at least one component")
        if len(self.weights) != len(self.states):
            raise ShapeError("one weight per component state")
        if any(not w > 0 for w in self.weights):
            raise InvalidInput("weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-10:
            raise InvalidInput(f"weights sum to {sum(self.weights)!r}, not 1")
        if len({s.n for s in self.states}) != 1:
            raise ShapeError("all components must share Clare's dimension")

    def density_matrix(self) -> np.ndarray:
        rho = 0
        for w, s in zip(self.weights, self.states):
            v = s.normalized().amplitudes
            rho = rho + w * np.outer(v, v.conj())
        return rho


def mixed_class_of_decomposition(ensemble: MixedEnsemble) -> MixedClass:
    """Highest level among the components' classes (B1, B2, B3 merged)."""
    return max(level(classify(s).label) for s in ensemble.states)


@dataclass(frozen=True)
class LemmaReport:
    distance: float
    bound_sv: float
    bound_tau: float
    holds: bool


def lemma_bounds(a, b, slack: float = 1e-9) -> LemmaReport:
    """Two lower bounds on the Hilbert-Schmidt distance ``||A - B||_2``.

    ``bound_sv`` compares the singular values of A and B; ``bound_tau``
    compares those of ``A^T A`` and ``B^T B`` (plain transpose) with prefactor
    ``||A|| / (2 (1 + ||A||))`` where A is the operand of larger norm.  The
    second bound is proven for ``||A||_2 <= 1``, the regime of normalized
    states; above that it can fail and ``holds`` reports it honestly.
    """
    a = linalg.as_matrix(a)
    b = linalg.as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shapes differ: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if nb > na:
        a, b, na = b, a, nb
    distance = float(np.linalg.norm(a - b))
    sa = np.linalg.svd(a, compute_uv=False)
    sb = np.linalg.svd(b, compute_uv=False)
    bound_sv = float(np.linalg.norm(sa - sb))
    ta = np.linalg.svd(a.T @ a, compute_uv=False)
    tb = np.linalg.svd(b.T @ b, compute_uv=False)
    bound_tau = float(na / (2 * (1 + na)) * np.linalg.norm(ta - tb))
    holds = distance >= bound_sv - slack and distance >= bound_tau - slack
    return LemmaReport(distance, bound_sv, bound_tau, bool(holds))


def class_separation_evidence(ca: SloccClass, cb: SloccClass, samples: int = 200, seed=0) -> float:
    """Smallest Lemma lower bound on the R-matrix distance between sampled members of two classes.

    Raises
    ------
    PreconditionError
        When the classes share ``(rank R, rank R^T R)``; the Lemma on R then
        gives nothing and the classes are told apart by r1 alone.
    """
    ca, cb = SloccClass(ca), SloccClass(cb)
    sa, sb = SIGNATURES[ca], SIGNATURES[cb]
    if sa[:2] == sb[:2]:
        raise PreconditionError(
            f"{ca} and {cb} share (rank R, rank R^T R) = {sa[:2]}; "
            f"they differ only in r1 ({sa[2]} vs {sb[2]}), which the R-matrix bounds cannot see"
        )
    rng = np.random.default_rng(seed)
    best = float("inf")
    for _ in range(samples):
        ra = r_matrix(random_orbit_sample(ca, rng))
        rb = r_matrix(random_orbit_sample(cb, rng))
        rep = lemma_bounds(ra, rb)
        best = min(best, max(rep.bound_sv, rep.bound_tau))
    return best
