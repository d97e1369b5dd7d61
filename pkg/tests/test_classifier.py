import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slocc224.classifier import (
    RANK_TABLE,
    SIGNATURES,
    ClassificationReport,
    SloccClass,
    balance,
    classify,
    classify_by_hyperdets,
    classify_by_ranks,
)
from slocc224.errors import AmbiguousClassification, ClassifierDisagreement
from slocc224.invariants import hdet222
from slocc224.orbits import apply_local, random_local_op, random_orbit_sample, representative
from slocc224.states import PureState, random_state

from conftest import seeds

ALL = list(SloccClass)


def test_table_is_a_bijection():
    assert len(RANK_TABLE) == 9
    assert set(RANK_TABLE.values()) == set(ALL)


@pytest.mark.parametrize("cls", ALL)
def test_representatives(cls):
    rep = representative(cls)
    a, b, c = classify_by_ranks(rep), classify_by_hyperdets(rep), classify(rep)
    assert a.label == b.label == c.label == cls
    assert c.method == "cross-checked"
    assert c.confident


@pytest.mark.parametrize(
    "terms, cls, sig",
    [
        ({"000": 1, "011": 1, "102": 1, "113": 1}, SloccClass.GENERIC, (4, 4, 2)),
        ({"000": 1, "110": 1}, SloccClass.B3, (1, 1, 2)),
        ({"000": 1}, SloccClass.S, (1, 0, 1)),
        ({"000": 1, "101": 1}, SloccClass.B2, (2, 0, 2)),
        ({"000": 1, "011": 1}, SloccClass.B1, (2, 0, 1)),
    ],
)
def test_rank_table_examples(terms, cls, sig):
    rep = classify_by_ranks(PureState.from_terms(terms))
    assert rep.label == cls
    s = rep.signature
    assert (s.rank_R, s.rank_RTR, s.local_ranks.r1) == sig
    assert rep.method == "rank-table"


def test_hyperdet_branches():
    major = representative(SloccClass.MAJOR)
    assert classify_by_hyperdets(major).label == SloccClass.MAJOR
    assert "hdet223" in classify_by_hyperdets(major).margins
    w = PureState.from_terms({"001": 1, "010": 1, "100": 1})
    assert hdet222(w) == 0
    assert classify_by_hyperdets(w).label == SloccClass.W
    assert classify_by_hyperdets(w).method == "hyperdet-recursive"


def test_qubit_inputs_are_padded():
    # n = 2 and n = 3 states go through the same 2x2x4 machinery
    assert classify(PureState.from_terms({"000": 1, "111": 1})).label == SloccClass.GHZ
    assert classify(PureState.from_terms({"000": 1, "011": 1, "112": 1})).label == SloccClass.MINOR


def test_large_clare_dimension():
    rng = np.random.default_rng(2)
    t = np.zeros((2, 2, 9), dtype=complex)
    t[:, :, [1, 4, 6, 8]] = rng.standard_normal((2, 2, 4))
    assert classify(PureState(t)).label == SloccClass.GENERIC


@pytest.mark.parametrize("cls", ALL)
def test_orbit_invariance(cls):
    rng = np.random.default_rng(hash(cls.value) % 2**32)
    rep = representative(cls)
    for _ in range(1000 if cls in (SloccClass.MAJOR, SloccClass.MINOR, SloccClass.W) else 200):
        assert classify(apply_local(rep, random_local_op(rng))).label == cls


@given(seeds, st.sampled_from(ALL), st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e6, allow_nan=False,
                                                        allow_infinity=False))
def test_scale_invariance(seed, cls, c):
    s = random_orbit_sample(cls, seed)
    assert classify(s.scaled(c)).label == cls


def test_dense_gaussians_are_generic():
    rng = np.random.default_rng(99)
    assert all(classify(random_state(4, rng)).label == SloccClass.GENERIC for _ in range(500))


def test_near_boundary_never_silently_wrong():
    rng = np.random.default_rng(0)
    rep = representative(SloccClass.GENERIC)
    for _ in range(50):
        p = rng.standard_normal((2, 2, 4)) * 1e-13
        try:
            assert classify(PureState(rep.tensor + p)).label == SloccClass.GENERIC
        except (AmbiguousClassification, ClassifierDisagreement):
            pass
    # a rank-3 state with a 1e-13 generic perturbation sits below the rank threshold
    major = representative(SloccClass.MAJOR)
    for _ in range(50):
        p = rng.standard_normal((2, 2, 4)) * 1e-13
        try:
            assert classify(PureState(major.tensor + p)).label == SloccClass.MAJOR
        except (AmbiguousClassification, ClassifierDisagreement):
            pass


def test_ambiguous_rank_triple_raises(monkeypatch):
    # genuine states always land on a table row; force an off-table triple (2, 1, 1)
    import slocc224.classifier as c

    monkeypatch.setattr(c, "rank_pair_with_margins", lambda r: (2, 0.1, 1, 0.05))
    with pytest.raises(AmbiguousClassification) as info:
        c.classify_by_ranks(PureState.from_terms({"000": 1, "011": 1}))
    assert info.value.ranks == (2, 1, 1)
    assert info.value.margins["rank_RTR"] == 0.05


def test_tolerance_override_moves_verdict():
    from slocc224 import linalg

    s = PureState.from_terms({"000": 1, "111": 1e-5})
    assert classify(s).label == SloccClass.GHZ
    with linalg.rank_tolerance(1e-4):
        assert classify(s).label == SloccClass.S


@pytest.mark.parametrize("eps", [1e-7, 1e-8])
def test_lopsided_ghz_is_flagged_not_misread(eps):
    # rank 2 by the table, hyperdet eps^2 too small to certify: the cross-check must object
    s = PureState.from_terms({"000": 1, "111": eps})
    assert classify_by_ranks(s).label == SloccClass.GHZ
    with pytest.raises(ClassifierDisagreement):
        classify(s)


@pytest.mark.parametrize("eps", [1e-3, 1e-5, 1e-8])
def test_lopsided_null_cone_states_stay_put(eps):
    rng = np.random.default_rng(1)
    from slocc224.linalg import random_unitary
    from slocc224.orbits import LocalOp

    for terms, cls in (({"001": 1, "010": 1, "100": eps}, SloccClass.W),
                       ({"000": 1, "011": 1, "112": eps}, SloccClass.MINOR)):
        for _ in range(10):
            op = LocalOp(random_unitary(2, rng), random_unitary(2, rng), random_unitary(4, rng))
            s = apply_local(PureState.from_terms(terms, n=4), op)
            assert classify(s).label == cls


def test_disagreement_is_reported(monkeypatch):
    import slocc224.classifier as c

    def fake(state):
        return ClassificationReport(SloccClass.W, state, "hyperdet-recursive", {})

    monkeypatch.setattr(c, "classify_by_hyperdets", fake)
    with pytest.raises(ClassifierDisagreement) as info:
        c.classify(representative(SloccClass.GHZ))
    assert info.value.by_ranks.label == SloccClass.GHZ
    assert info.value.by_hyperdets.label == SloccClass.W


def test_balance_preserves_class_and_equalizes_marginals():
    from slocc224.invariants import clare_restricted

    s = random_orbit_sample(SloccClass.GHZ, 4)
    t = balance(clare_restricted(s, 2), sweeps=50)
    rho1 = t.reshape(2, -1) @ t.reshape(2, -1).conj().T
    np.testing.assert_allclose(rho1, np.eye(2) / 2, atol=1e-8)
    assert classify(PureState(t)).label == SloccClass.GHZ


def test_report_dict():
    d = classify(representative(SloccClass.W)).as_dict()
    assert d["class"] == "W"
    assert d["signature"]["rank_RTR"] == 1
    assert all(v is None or v > 0 for v in d["margins"].values())


@pytest.mark.parametrize("text, cls", [("major", SloccClass.MAJOR), ("MinorRank3", SloccClass.MINOR),
                                       ("ghz", SloccClass.GHZ), ("b2", SloccClass.B2)])
def test_parse(text, cls):
    assert SloccClass.parse(text) is cls


def test_parse_unknown():
    with pytest.raises(ValueError):
        SloccClass.parse("tetrahedral")


def test_signatures_inverse_of_table():
    for key, cls in RANK_TABLE.items():
        assert SIGNATURES[cls] == key
