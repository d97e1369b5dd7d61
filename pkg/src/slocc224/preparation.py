"""Deterministic preparation of any 2x2x4 state from two Bell pairs.

Clare measures a 16-outcome POVM; on outcome ``(mu, nu)`` Alice and Bob apply
the Paulis ``sigma^mu`` and ``sigma^nu``.  With ``U = sigma^mu (x) sigma^nu`` and
target flattening ``Psi`` (unit Frobenius norm) the outcome operator is

    M = (U^H Psi)^T / 2,

so that ``(U (x) M)`` maps the Bell-pair flattening ``1`` to ``Psi / 2``.
Completeness ``sum M^H M = 1`` follows from the Pauli twirl
``sum_k P_k^H X P_k = 4 tr(X) 1`` applied to ``X = Psi Psi^H``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError, ShapeError
from .states import PureState, clare_normal_support, flatten, unflatten

NORM_ATOL = 1e-10


def two_bell_pairs() -> PureState:
    """``(|00>+|11>)_{A C1} (x) (|00>+|11>)_{B C2}``, normalized; its flattening is ``1/2``."""
    return unflatten(np.eye(4) / 2)


@dataclass(frozen=True)
class PovmBranch:
    mu: int
    nu: int
    m3: np.ndarray
    ua: np.ndarray
    ub: np.ndarray
    probability: float


@dataclass(frozen=True)
class PovmEnsemble:
    branches: tuple[PovmBranch, ...]

    def completeness(self) -> np.ndarray:
        return sum(b.m3.conj().T @ b.m3 for b in self.branches)


@dataclass(frozen=True)
class PovmReport:
    completeness_residual: float
    min_branch_fidelity: float
    probability_sum: float
    probabilities: tuple[float, ...]
    fidelities: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "completeness_residual": self.completeness_residual,
            "min_branch_fidelity": self.min_branch_fidelity,
            "probability_sum": self.probability_sum,
            "probabilities": list(self.probabilities),
            "fidelities": list(self.fidelities),
        }


def build_povm(target: PureState) -> PovmEnsemble:
    """Clare's POVM and the outcome-dependent Pauli corrections for ``target``.

    Raises
    ------
    PreconditionError
        If the target is not normalized to within 1e-10.
    """
    if abs(target.norm() - 1.0) > NORM_ATOL:
        raise PreconditionError(f"target must be normalized, norm is {target.norm():.12g}")
    psi = flatten(clare_normal_support(target))
    branches = []
    for k, u in enumerate(_kernels.PAULI_PAIRS):
        mu, nu = divmod(k, 4)
        m3 = (u.conj().T @ psi).T / 2.0
        # branch state is (U (x) M)|2 Bell>; its flattening is U (1/2) M^T = psi / 4
        branch = u @ (np.eye(4) / 2) @ m3.T
        p = float(np.linalg.norm(branch) ** 2)
        branches.append(PovmBranch(mu, nu, m3, _kernels.PAULIS[mu].copy(), _kernels.PAULIS[nu].copy(), p))
    return PovmEnsemble(tuple(branches))


def verify_povm(ensemble: PovmEnsemble, target: PureState) -> PovmReport:
    """Recompute completeness, branch probabilities and branch fidelities from scratch."""
    tgt = flatten(clare_normal_support(target))
    tgt = tgt / np.linalg.norm(tgt)
    bell = np.eye(4) / 2
    residual = float(np.linalg.norm(ensemble.completeness() - np.eye(4)))
    probs, fids = [], []
    for b in ensemble.branches:
        if b.m3.shape != (4, 4) or b.ua.shape != (2, 2) or b.ub.shape != (2, 2):
            raise ShapeError("branch operators have the wrong shape")
        out = np.kron(b.ua, b.ub) @ bell @ b.m3.T
        p = float(np.linalg.norm(out) ** 2)
        probs.append(p)
        fids.append(float(abs(np.vdot(tgt, out)) ** 2 / p) if p > 0 else 0.0)
    return PovmReport(
        completeness_residual=residual,
        min_branch_fidelity=min(fids),
        probability_sum=float(sum(probs)),
        probabilities=tuple(probs),
        fidelities=tuple(fids),
    )


def twirl_residual(x) -> float:
    """``|| twirl(x) - tr(x)/4 * 1 ||_F``; vanishes for every 4x4 ``x``."""
    x = np.asarray(x, dtype=np.complex128)
    return float(np.linalg.norm(_kernels.pauli_twirl(x) - np.trace(x) / 4 * np.eye(4)))
