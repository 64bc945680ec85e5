from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crystal_codon.distance import (
    ModelParams,
    classify_change,
    distance,
    eigenvalue,
    is_nearest,
    r_value,
    r_vector,
    sense_adjacency,
    sense_neighbors,
)
from crystal_codon.tables import SENSE_CODONS, ChargeSource, InvalidCodonError

h = Fraction(1, 2)
P = ModelParams(1, 1, 1, 2)


def hand_eigenvalue(q, j3v_root, j_h, j_v, j3_h, j3_v, a, b, g, eta):
    """Direct transcription of the eigenvalue with values typed from the tables."""
    cas = lambda j: j * (j + 1)  # noqa: E731
    bracket = a * q - b * j3v_root * (j3v_root - 1) + 4 * g * (cas(j_h) + cas(j_v))
    return bracket * 2 * (j3_h + eta * j3_v)


def test_spot_values_exact():
    # CC: Q=7, J3V=1; CCC in (3/2,3/2) at (3/2,3/2); CCU in (1/2,3/2) at (1/2,3/2)
    ccc = hand_eigenvalue(7, 1, 3 * h, 3 * h, 3 * h, 3 * h, 1, 1, 1, 2)
    ccu = hand_eigenvalue(7, 1, h, 3 * h, h, 3 * h, 1, 1, 1, 2)
    assert (ccc, ccu) == (333, 175)
    assert r_value("CCC", P) == 333 and isinstance(r_value("CCC", P), (int, Fraction))
    assert r_value("CCU", P) == 175
    assert distance("CCC", "CCU", P) == 158


def test_eta_one_singlet_zero():
    assert eigenvalue("CGA", 1, 1, 1, 1) == 0


def test_formula_charges_change_cu_codons_only():
    pf = ModelParams(1, 1, 1, 2, ChargeSource.FORMULA)
    changed = {c for c in SENSE_CODONS if r_value(c, pf) != r_value(c, P)}
    assert changed and all(c.startswith("CU") for c in changed)


def test_vector_matches_exact():
    exact = np.array([float(r_value(c, P)) for c in SENSE_CODONS])
    assert np.array_equal(r_vector(P), exact)


@pytest.mark.parametrize("bad", [dict(alpha=0), dict(beta=-1), dict(eta=1), dict(gamma=float("nan"))])
def test_params_validation(bad):
    kw = dict(alpha=1, beta=1, gamma=1, eta=2)
    kw.update(bad)
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_strict_eta():
    with pytest.raises(ValueError):
        ModelParams(1, 1, 1, 2, strict=True)
    ModelParams(1, 1, 1, Fraction(5, 2), strict=True)


pos = st.fractions(min_value=Fraction(1, 100), max_value=100, max_denominator=1000)
etas = st.fractions(min_value=Fraction(101, 100), max_value=10, max_denominator=1000)
codons = st.sampled_from(SENSE_CODONS)


@settings(max_examples=50)
@given(codons, pos, pos, pos, etas, pos)
def test_linear_in_alpha_beta_gamma(c, a, b, g, eta, k):
    base = eigenvalue(c, a, b, g, eta)
    assert eigenvalue(c, k * a, k * b, k * g, eta) == k * base
    e = [eigenvalue(c, *v, eta) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert base == a * e[0] + b * e[1] + g * e[2]


@settings(max_examples=50)
@given(codons, codons, codons, pos, pos, pos, etas)
def test_pseudometric(x, y, z, a, b, g, eta):
    p = ModelParams(a, b, g, eta)
    assert distance(x, x, p) == 0
    assert distance(x, y, p) == distance(y, x, p) >= 0
    assert distance(x, z, p) <= distance(x, y, p) + distance(y, z, p)


def test_adjacency_brute_force():
    pairs = {
        (i, j)
        for i, a in enumerate(SENSE_CODONS)
        for j, b in enumerate(SENSE_CODONS)
        if sum(x != y for x, y in zip(a, b)) == 1
    }
    src, dst = sense_adjacency()
    assert len(pairs) == 526
    assert set(zip(src.tolist(), dst.tolist())) == pairs
    assert len(src) == 526


@pytest.mark.parametrize("codon, n", [("CCC", 9), ("UGG", 7), ("UAC", 7)])
def test_neighbor_counts(codon, n):
    assert len(sense_neighbors(codon)) == n


def test_neighbors_reject_stop():
    with pytest.raises(InvalidCodonError):
        sense_neighbors("UAA")


def test_is_nearest():
    assert is_nearest("CCC", "CCU")
    assert not is_nearest("CCC", "CCC")
    assert not is_nearest("CCC", "CUU")


@pytest.mark.parametrize(
    "a, b, pos, transition",
    [("CCC", "CCU", 3, True), ("CCC", "GCC", 1, False), ("CAC", "CGC", 2, True), ("ACC", "CCC", 1, False)],
)
def test_classify_change(a, b, pos, transition):
    ch = classify_change(a, b)
    assert ch.position == pos
    assert ch.is_transition is transition
    assert ch.is_transversion is (not transition)


def test_classify_change_all_pairs_of_nucleotides():
    pyr, pur = set("CU"), set("GA")
    for x, y in product("CUGA", repeat=2):
        if x == y:
            continue
        ch = classify_change(x + "CC", y + "CC")
        same_class = {x, y} <= pyr or {x, y} <= pur
        assert ch.is_transition is same_class


def test_classify_change_requires_neighbors():
    with pytest.raises(ValueError):
        classify_change("CCC", "GGG")
