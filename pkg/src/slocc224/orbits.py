"""Representatives, local operations and the partial order of the nine classes.

Every cataloged conversion is stored as three local operations applied in
sequence: an invertible ``pre`` step that moves the source representative into
the frame where the filter is stated, the noninvertible ``filter`` itself, and
an invertible ``post`` step that relabels the image onto the target
representative.  The composite :attr:`OrderEdge.witness` therefore maps
``representative(source)`` onto a scalar multiple of
``representative(target)``, which is what lets multi-step witnesses be formed
by plain composition.
"""
from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import linalg
from .classifier import SloccClass
from .errors import PreconditionError, ShapeError
from .invariants import rank_pair
from .states import PureState, flatten, local_ranks, reduced_density

C = SloccClass
_S2 = np.sqrt(2.0)


@dataclass(frozen=True)
class LocalOp:
    """Product operator ``M1 (x) M2 (x) M3``; M3 maps C^n_in to C^n_out."""

    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray

    def __post_init__(self):
        for name, shape in (("m1", (2, 2)), ("m2", (2, 2))):
            m = linalg.as_matrix(getattr(self, name))
            if m.shape != shape:
                raise ShapeError(f"{name} must be 2x2, got {m.shape}")
            object.__setattr__(self, name, m)
        object.__setattr__(self, "m3", linalg.as_matrix(self.m3))

    @classmethod
    def identity(cls, n: int = 4) -> "LocalOp":
        return cls(np.eye(2), np.eye(2), np.eye(n))

    @classmethod
    def on(cls, party: int, m, n: int = 4) -> "LocalOp":
        """Operator acting as ``m`` on one party and as the identity elsewhere."""
        ms = [np.eye(2), np.eye(2), np.eye(n)]
        ms[party - 1] = m
        return cls(*ms)

    @property
    def invertible(self) -> tuple[bool, bool, bool]:
        out = []
        for m in (self.m1, self.m2, self.m3):
            out.append(m.shape[0] == m.shape[1] and linalg.numerical_rank(m) == m.shape[0])
        return tuple(out)

    def then(self, other: "LocalOp") -> "LocalOp":
        """The operation ``self`` followed by ``other``."""
        return LocalOp(other.m1 @ self.m1, other.m2 @ self.m2, other.m3 @ self.m3)


def apply_local(state: PureState, op: LocalOp) -> PureState:
    """``(M1 (x) M2 (x) M3)|psi>``; the flattening becomes ``(M1 (x) M2) Psi M3^T``."""
    if op.m3.shape[1] != state.n:
        raise ShapeError(f"M3 acts on C^{op.m3.shape[1]} but the state has n={state.n}")
    psi = np.einsum("ai,bj,ck,ijk->abc", op.m1, op.m2, op.m3, state.tensor, optimize=True)
    return PureState(psi)


# ---------------------------------------------------------------- representatives

_REP_TERMS = {
    C.GENERIC: {"000": 1, "011": 1, "102": 1, "113": 1},
    C.MAJOR: {"000": 1, "011": 1 / _S2, "101": 1 / _S2, "112": 1},
    C.MINOR: {"000": 1, "011": 1, "112": 1},
    C.GHZ: {"000": 1, "111": 1},
    C.W: {"001": 1, "010": 1, "100": 1},
    C.B1: {"000": 1, "011": 1},
    C.B2: {"000": 1, "101": 1},
    C.B3: {"000": 1, "110": 1},
    C.S: {"000": 1},
}


def representative(cls: SloccClass, normalized: bool = True) -> PureState:
    """Canonical ket of a class, with n = 4."""
    s = PureState.from_terms(_REP_TERMS[SloccClass(cls)], n=4)
    return s.normalized() if normalized else s


def random_local_op(seed=None, n: int = 4, condition_cap: float = 100.0, clare_blocks=None) -> LocalOp:
    """Random invertible triple from SL(2) x SL(2) x SL(n).

    ``clare_blocks``, e.g. ``(3, 1)``, draws Clare's factor block-diagonally so
    that it preserves the span of her leading basis vectors; size-1 blocks are
    set to 1.
    """
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    m1 = linalg.random_sl(2, rng, condition_cap)
    m2 = linalg.random_sl(2, rng, condition_cap)
    if clare_blocks is None:
        m3 = linalg.random_sl(n, rng, condition_cap)
    else:
        if sum(clare_blocks) != n:
            raise ShapeError(f"blocks {clare_blocks} do not sum to n={n}")
        m3 = np.zeros((n, n), dtype=np.complex128)
        i = 0
        for b in clare_blocks:
            m3[i : i + b, i : i + b] = linalg.random_sl(b, rng, condition_cap) if b > 1 else 1.0
            i += b
    return LocalOp(m1, m2, m3)


def random_noninvertible_op(seed=None, n: int = 4) -> LocalOp:
    """Random triple in which at least one factor is rank deficient."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    dims = (2, 2, n)
    deficient = rng.random(3) < 0.5
    if not deficient.any():
        deficient[rng.integers(3)] = True
    ms = []
    for d, low in zip(dims, deficient):
        rank = rng.integers(1, d) if low else d
        a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
        b = rng.standard_normal((rank, d)) + 1j * rng.standard_normal((rank, d))
        ms.append(a @ b)
    return LocalOp(*ms)


def random_orbit_sample(cls: SloccClass, seed=None, condition_cap: float = 100.0) -> PureState:
    """Normalized image of the representative under a random invertible triple."""
    op = random_local_op(seed, 4, condition_cap)
    return apply_local(representative(cls), op).normalized()


# ---------------------------------------------------------------- witness catalog

_I2 = np.eye(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P_PLUS = np.array([[1, 1], [0, 0]], dtype=complex)  # |0>(<0| + <1|)


def _m4(rows) -> np.ndarray:
    return np.array(rows, dtype=np.complex128)


_I4 = np.eye(4, dtype=np.complex128)
_SWAP01 = _m4([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
_SWAP12 = _m4([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
_E00 = _m4([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
_E0_PLUS = _m4([[1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])

# Clare's filters
_TO_MAJOR = _m4([[1, 0, 0, 0], [0, 1 / _S2, 1 / _S2, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
_TO_MINOR = _m4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
_PROJ_02 = _m4([[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
_POVM_W = _m4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 1j, 0, 0], [0, 0, 0, 0]])
_PROJ_12 = _m4([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
_PROJ_0_1P2 = _m4([[1, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 0]])

# Minor representative -> normal form with R rows (1,0,0,0),(0,1,0,0),(0,0,1,0),(i,0,0,0):
# flip Bob, then recombine Clare's first three basis vectors.
_TO_MINOR_NF = (_I2, _X, _m4([[0, 2, 0, 0], [-1j, 0, -1j, 0], [-1, 0, 1, 0], [0, 0, 0, 1]]))

_MAJOR_W_RELABEL = _m4([[0, _S2, 0, 0], [1, 0, 0, 0], [0, -1j, 1, 0], [0, 0, 0, 1]])
_MINOR_GHZ_RELABEL = _m4([[0, 0.5j, -0.5, 0], [0, 0.5j, 0.5, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
_MINOR_W_RELABEL = _m4([[0, 1, 0, 0], [0.5, 0, 0, 0], [0, -1, 1, 0], [0, 0, 0, 1]])


@dataclass(frozen=True)
class OrderEdge:
    source: SloccClass
    target: SloccClass
    kind: str
    filter: LocalOp
    pre: LocalOp = LocalOp.identity()
    post: LocalOp = LocalOp.identity()

    @property
    def witness(self) -> LocalOp:
        return self.pre.then(self.filter).then(self.post)


def _edge(src, dst, kind, filt, pre=None, post=None) -> OrderEdge:
    ident = LocalOp.identity()
    return OrderEdge(src, dst, kind, LocalOp(*filt), LocalOp(*pre) if pre else ident,
                     LocalOp(*post) if post else ident)


CATALOG: tuple[OrderEdge, ...] = (
    _edge(C.GENERIC, C.MAJOR, "rank-3 filter on Clare", (_I2, _I2, _TO_MAJOR)),
    _edge(C.GENERIC, C.MINOR, "rank-3 filter on Clare", (_I2, _I2, _TO_MINOR)),
    _edge(C.MAJOR, C.GHZ, "Clare projects on span{|0>,|2>}", (_I2, _I2, _PROJ_02),
          post=(_I2, _I2, _SWAP12)),
    _edge(C.MAJOR, C.W, "Clare POVM element [[1,0,0,0],[0,1,0,0],[0,i,0,0],[0,0,0,0]]",
          (_I2, _I2, _POVM_W), post=(_I2, _I2, _MAJOR_W_RELABEL)),
    _edge(C.MINOR, C.GHZ, "Clare projects on span{|1>,|2>} (normal-form frame)",
          (_I2, _I2, _PROJ_12), pre=_TO_MINOR_NF, post=(_I2, _X, _MINOR_GHZ_RELABEL)),
    _edge(C.MINOR, C.W, "Clare projects on span{|0>,|1>+|2>} (normal-form frame)",
          (_I2, _I2, _PROJ_0_1P2), pre=_TO_MINOR_NF,
          post=(np.diag([1, 1 + 1j]), np.diag([1, -1 + 1j]), _MINOR_W_RELABEL)),
    _edge(C.GHZ, C.B1, "Alice projects on |0>(<0|+<1|)", (_P_PLUS, _I2, _I4)),
    _edge(C.GHZ, C.B2, "Bob projects on |0>(<0|+<1|)", (_I2, _P_PLUS, _I4)),
    _edge(C.GHZ, C.B3, "Clare projects on |0>(<0|+<1|)", (_I2, _I2, _E0_PLUS)),
    _edge(C.W, C.B1, "Alice projects on |0>", (_P0, _I2, _I4), post=(_I2, _I2, _SWAP01)),
    _edge(C.W, C.B2, "Bob projects on |0>", (_I2, _P0, _I4), post=(_I2, _I2, _SWAP01)),
    _edge(C.W, C.B3, "Clare projects on |0>", (_I2, _I2, _E00), post=(_X, _I2, _I4)),
    _edge(C.B1, C.S, "Bob projects on |0>", (_I2, _P0, _I4)),
    _edge(C.B2, C.S, "Alice projects on |0>", (_P0, _I2, _I4)),
    _edge(C.B3, C.S, "Alice projects on |0>", (_P0, _I2, _I4)),
)

_DIRECT = {(e.source, e.target): e for e in CATALOG}


def _successors(c: SloccClass):
    return [e.target for e in CATALOG if e.source == c]


def _path(a: SloccClass, b: SloccClass):
    prev = {a: None}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        if cur == b:
            break
        for nxt in _successors(cur):
            if nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    if b not in prev:
        return None
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def conversion_witness(source: SloccClass, target: SloccClass) -> OrderEdge | None:
    """A proven conversion ``source -> target``, composed along the catalog if needed.

    Returns ``None`` when the catalog offers no descent.  ``source == target``
    yields the identity.
    """
    source, target = SloccClass(source), SloccClass(target)
    if (source, target) in _DIRECT:
        return _DIRECT[(source, target)]
    path = _path(source, target)
    if path is None:
        return None
    if len(path) == 1:
        return OrderEdge(source, target, "identity", LocalOp.identity())
    op = LocalOp.identity()
    for u, v in zip(path, path[1:]):
        op = op.then(_DIRECT[(u, v)].witness)
    kind = "composed: " + " -> ".join(c.value for c in path)
    return OrderEdge(source, target, kind, op)


def dominates(a: SloccClass, b: SloccClass) -> bool:
    return _path(SloccClass(a), SloccClass(b)) is not None


@functools.lru_cache(maxsize=None)
def invariant_tuple(cls: SloccClass) -> tuple[int, int, int, int]:
    """``(rank R, rank R^T R, r1, r2)`` of the class representative."""
    s = representative(cls)
    rank_R, rank_RTR = rank_pair(s)
    lr = local_ranks(s)
    return rank_R, rank_RTR, lr.r1, lr.r2


def necessary_condition(a: SloccClass, b: SloccClass) -> bool:
    """Whether no monotone invariant forbids ``a -> b`` (component-wise dominance)."""
    ta, tb = invariant_tuple(SloccClass(a)), invariant_tuple(SloccClass(b))
    return all(x >= y for x, y in zip(ta, tb))


@functools.lru_cache(maxsize=None)
def grade(cls: SloccClass) -> int:
    """Length of the longest cataloged descent from ``cls`` down to S."""
    succ = _successors(SloccClass(cls))
    return 1 + max(grade(c) for c in succ) if succ else 0


def is_maximally_entangled_rep(state: PureState, atol: float = 1e-8) -> bool:
    """All marginals proportional to projectors: rho1 = rho2 = 1/2, rho3 = P_support / r3."""
    s = state.normalized()
    for party in (1, 2):
        if np.max(np.abs(reduced_density(s, party) - np.eye(2) / 2)) > atol:
            return False
    rho3 = reduced_density(s, 3)
    r3 = linalg.numerical_rank(flatten(s))
    w, v = np.linalg.eigh(rho3)
    top = v[:, -r3:]
    target = top @ top.conj().T / r3
    return bool(np.max(np.abs(rho3 - target)) <= atol)


def dual_tangency_at_origin(state: PureState, rtol: float = 1e-10) -> bool:
    """Whether the state lies on the hyperplane tangent to the product state |000>.

    That is ``psi_000 = psi_100 = psi_010 = 0`` and ``psi_00k = 0`` for every k.
    """
    psi = state.tensor
    tol = rtol * state.norm()
    coords = [psi[1, 0, 0], psi[0, 1, 0], *psi[0, 0, :]]
    return bool(max(abs(c) for c in coords) <= tol)


def order_dot() -> str:
    """The proven partial order as a Graphviz digraph, one rank per grade."""
    lines = ["digraph slocc_order {", "  rankdir=TB;", '  node [shape=box, fontname="Helvetica"];']
    by_grade: dict[int, list[SloccClass]] = {}
    for c in SloccClass:
        by_grade.setdefault(grade(c), []).append(c)
        t = invariant_tuple(c)
        label = f"{c.value}\\nr(R)={t[0]} r(RtR)={t[1]} r1={t[2]} r2={t[3]}"
        lines.append(f'  "{c.value}" [label="{label}"];')
    for g in sorted(by_grade, reverse=True):
        names = " ".join(f'"{c.value}";' for c in by_grade[g])
        lines.append(f"  {{ rank=same; {names} }}")
    for e in CATALOG:
        kind = e.kind.replace('"', "'")
        lines.append(f'  "{e.source.value}" -> "{e.target.value}" [style=dashed, label="{kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def check_edge(edge: OrderEdge, atol: float = 1e-10) -> float:
    """Fidelity between the witness image of the source representative and the target representative."""
    image = apply_local(representative(edge.source), edge.witness)
    if image.norm() < atol:
        raise PreconditionError(f"witness {edge.kind} annihilates {edge.source}")
    rep = representative(edge.target)
    return abs(np.vdot(rep.tensor, image.tensor)) ** 2 / image.norm() ** 2
