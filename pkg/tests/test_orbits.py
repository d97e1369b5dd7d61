import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slocc224.classifier import SloccClass, classify
from slocc224.errors import InvalidInput, ShapeError
from slocc224.invariants import rank_pair
from slocc224.orbits import (
    CATALOG,
    LocalOp,
    apply_local,
    check_edge,
    conversion_witness,
    dominates,
    dual_tangency_at_origin,
    grade,
    invariant_tuple,
    is_maximally_entangled_rep,
    necessary_condition,
    order_dot,
    random_local_op,
    random_noninvertible_op,
    random_orbit_sample,
    representative,
)
from slocc224.states import PureState, flatten, local_ranks, random_state

from conftest import seeds

C = SloccClass
ALL = list(C)
S2 = np.sqrt(2)


def test_representative_examples():
    np.testing.assert_allclose(flatten(representative(C.GENERIC)), np.eye(4) / 2)
    major = representative(C.MAJOR, normalized=False)
    assert major.tensor[0, 1, 1] == pytest.approx(1 / S2)
    assert major.norm() == pytest.approx(np.sqrt(3))
    w = representative(C.W)
    for k in ("001", "010", "100"):
        i, j, l = map(int, k)
        assert w.tensor[i, j, l] == pytest.approx(1 / np.sqrt(3))
    assert all(representative(c).norm() == pytest.approx(1) for c in ALL)
    assert all(representative(c).n == 4 for c in ALL)


def test_apply_local_flattening_law(rng):
    for n in (1, 3, 4, 6):
        s = random_state(n, rng)
        op = LocalOp(*(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for d in (2, 2, n)))
        expected = np.kron(op.m1, op.m2) @ flatten(s) @ op.m3.T
        np.testing.assert_allclose(flatten(apply_local(s, op)), expected, atol=1e-10 * np.linalg.norm(expected))


def test_apply_local_shape_errors():
    with pytest.raises(ShapeError):
        apply_local(representative(C.GHZ), LocalOp.identity(3))
    with pytest.raises(ShapeError):
        LocalOp(np.eye(3), np.eye(2), np.eye(4))


def test_apply_local_rectangular_clare_factor():
    # M3 may change Clare's dimension, e.g. embed a qubit into C^4
    embed = np.eye(4, 2)
    s = apply_local(PureState.from_terms({"000": 1, "111": 1}), LocalOp(np.eye(2), np.eye(2), embed))
    assert s.n == 4
    assert classify(s).label == C.GHZ


def test_annihilating_filter_is_rejected():
    p1 = np.diag([0, 1])
    with pytest.raises(InvalidInput):
        apply_local(representative(C.S), LocalOp.on(1, p1))


def test_generic_with_rank3_clare_filter():
    img = apply_local(representative(C.GENERIC), LocalOp.on(3, np.diag([1, 1, 1, 0])))
    assert classify(img).label in (C.MAJOR, C.MINOR)
    assert local_ranks(img).r3 == 3


def test_invertible_flags():
    op = LocalOp(np.eye(2), np.diag([1, 0]), np.eye(4))
    assert op.invertible == (True, False, True)
    assert random_local_op(0).invertible == (True, True, True)
    assert not all(random_noninvertible_op(0).invertible)


def test_then_composes_in_order(rng):
    a, b = random_local_op(rng), random_local_op(rng)
    s = random_state(4, rng)
    np.testing.assert_allclose(apply_local(s, a.then(b)).tensor, apply_local(apply_local(s, a), b).tensor, atol=1e-10)


@pytest.mark.parametrize("cls", ALL)
def test_orbit_samples_stay_in_class(cls):
    for seed in range(30):
        assert classify(random_orbit_sample(cls, seed)).label == cls


def test_orbit_sample_determinism():
    a = random_orbit_sample(C.W, 5)
    assert a == random_orbit_sample(C.W, 5)
    assert not a == random_orbit_sample(C.W, 6)


def test_separable_samples_are_products():
    for seed in range(10):
        assert tuple(local_ranks(random_orbit_sample(C.S, seed))) == (1, 1, 1)


@pytest.mark.parametrize("edge", CATALOG, ids=lambda e: f"{e.source.value}->{e.target.value}")
def test_catalog_edges(edge):
    img = apply_local(representative(edge.source), edge.witness)
    assert classify(img).label == edge.target
    # stronger than the class: the witness lands on the target representative itself
    assert check_edge(edge) == pytest.approx(1.0, abs=1e-12)
    assert not all(edge.filter.invertible)


def test_major_to_w_uses_printed_povm_element():
    edge = conversion_witness(C.MAJOR, C.W)
    printed = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 1j, 0, 0], [0, 0, 0, 0]])
    np.testing.assert_array_equal(edge.filter.m3, printed)
    np.testing.assert_array_equal(edge.filter.m1, np.eye(2))
    bare = apply_local(representative(C.MAJOR), edge.filter)
    assert classify(bare).label == C.W


@pytest.mark.parametrize(
    "source, target, keep",
    [(C.MAJOR, C.GHZ, [[1, 0, 0, 0], [0, 0, 1, 0]]),
     (C.MINOR, C.GHZ, [[0, 1, 0, 0], [0, 0, 1, 0]]),
     (C.MINOR, C.W, [[1, 0, 0, 0], [0, 1 / S2, 1 / S2, 0]])],
)
def test_clare_projections_as_printed(source, target, keep):
    edge = conversion_witness(source, target)
    v = np.array(keep, dtype=complex)
    projector = v.T @ v.conj()
    # the stored filter is the projector onto the named subspace
    assert np.allclose(edge.filter.m3, projector) or np.allclose(edge.filter.m3, projector.T)
    bare = apply_local(apply_local(representative(source), edge.pre), edge.filter)
    assert classify(bare).label == target


def test_minor_projection_needs_normal_frame():
    # on the representative ket itself {|1>,|2>} leaves a biseparable state, not GHZ
    edge = conversion_witness(C.MINOR, C.GHZ)
    assert classify(apply_local(representative(C.MINOR), edge.filter)).label == C.B2


def test_composed_witnesses():
    for a, b in itertools.product(ALL, ALL):
        e = conversion_witness(a, b)
        if e is None:
            assert not dominates(a, b)
            continue
        img = apply_local(representative(a), e.witness)
        assert classify(img).label == b
        assert check_edge(e) == pytest.approx(1.0, abs=1e-10)


def test_conversion_examples():
    assert conversion_witness(C.W, C.GENERIC) is None
    assert conversion_witness(C.MAJOR, C.MINOR) is None
    assert conversion_witness(C.GHZ, C.GHZ).kind == "identity"
    assert "->" in conversion_witness(C.GENERIC, C.S).kind


def test_dominates_examples():
    assert dominates(C.GENERIC, C.S)
    assert not dominates(C.GHZ, C.W)
    assert not dominates(C.W, C.GHZ)
    assert all(dominates(c, c) for c in ALL)


def test_dominance_is_antisymmetric_and_implies_necessary_condition():
    for a, b in itertools.product(ALL, ALL):
        if dominates(a, b) and dominates(b, a):
            assert a == b
        if dominates(a, b):
            assert necessary_condition(a, b)


def test_necessary_condition_examples():
    assert invariant_tuple(C.GENERIC) == (4, 4, 2, 2)
    assert necessary_condition(C.GENERIC, C.MINOR)
    assert not necessary_condition(C.W, C.GHZ)
    assert not necessary_condition(C.B1, C.B2)
    assert not necessary_condition(C.B2, C.B1)
    # the open pair: invariants allow it, no witness is known
    assert necessary_condition(C.MAJOR, C.MINOR) and not dominates(C.MAJOR, C.MINOR)


def test_five_grades():
    levels = {}
    for c in ALL:
        levels.setdefault(grade(c), set()).add(c)
    assert levels == {
        4: {C.GENERIC}, 3: {C.MAJOR, C.MINOR}, 2: {C.GHZ, C.W}, 1: {C.B1, C.B2, C.B3}, 0: {C.S},
    }


def test_order_dot():
    dot = order_dot()
    assert dot.startswith("digraph")
    nodes = [l for l in dot.splitlines() if "[label=" in l and "->" not in l]
    assert len(nodes) == 9
    assert dot.count("rank=same") == 5
    assert dot.count("->") == len(CATALOG)
    assert order_dot() == dot


@given(seeds)
def test_noninvertible_ops_never_raise_invariants(seed):
    rng = np.random.default_rng(seed)
    s = random_orbit_sample(ALL[seed % 9], rng)
    try:
        img = apply_local(s, random_noninvertible_op(rng))
    except InvalidInput:
        return
    before = (*rank_pair(s), *local_ranks(s)[:2])
    after = (*rank_pair(img), *local_ranks(img)[:2])
    assert all(x <= y for x, y in zip(after, before))


@pytest.mark.parametrize(
    "state, expected",
    [
        (PureState.from_terms({"000": 1, "011": 1, "102": 1, "113": 1}), True),
        (PureState.from_terms({"000": 1, "111": 1}), True),
        (PureState.from_terms({"000": 1, "111": 2}), False),
        (PureState.from_terms({"001": 1, "010": 1, "100": 1}), False),
    ],
)
def test_maximally_entangled_rep(state, expected):
    assert is_maximally_entangled_rep(state) is expected


def test_dual_tangency_examples():
    assert dual_tangency_at_origin(PureState.from_terms({"011": 1, "102": 1, "113": 1}))
    assert not dual_tangency_at_origin(PureState.from_terms({"000": 1}, n=4))
    assert classify(PureState.from_terms({"011": 1, "102": 1, "113": 1})).label == C.MINOR


@given(seeds)
def test_random_tangent_states_are_minor(seed):
    from slocc224.suite import dual_pattern_state

    s = dual_pattern_state(np.random.default_rng(seed))
    assert dual_tangency_at_origin(s)
    assert classify(s).label == C.MINOR
