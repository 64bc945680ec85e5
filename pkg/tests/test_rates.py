import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from crystal_codon.distance import ModelParams, r_vector, sense_adjacency
from crystal_codon.rates import (
    Constant,
    Exponential,
    MatrixKind,
    PowerLaw,
    build_generator,
    discrete_step,
    evolve,
    expm,
    pam_matrix,
    parse_strength,
)

P = ModelParams(1, 1, 1, 2)
logu = st.floats(math.log(0.01), math.log(100)).map(math.exp)
params = st.builds(ModelParams, logu, logu, logu, st.floats(1.01, 10))


def test_strength_functions():
    assert Exponential(0.5)(0.0) == 1.0
    assert PowerLaw(2, 10)(10) == pytest.approx(0.25)
    assert np.all(Constant(3)(np.array([0.0, 5.0])) == 3)


@pytest.mark.parametrize(
    "text, obj",
    [
        ("exp:lambda=0.05", Exponential(0.05)),
        ("power:p=2,scale=10", PowerLaw(2, 10)),
        ("const:c=1", Constant(1)),
        ("exp", Exponential()),
    ],
)
def test_parse_strength(text, obj):
    assert parse_strength(text) == obj
    assert parse_strength(obj.spec()) == obj


@pytest.mark.parametrize("text", ["gauss:s=1", "exp:mu=1", "exp:lambda=x", "const:c=-1"])
def test_parse_strength_errors(text):
    with pytest.raises(ValueError):
        parse_strength(text)


def test_generator_entry():
    q = build_generator(P, Exponential(0.01))
    assert q["CCU", "CCC"] == pytest.approx(math.exp(-1.58), rel=1e-15)
    assert q.kind is MatrixKind.GENERATOR
    assert q.metadata["strength"] == "exp:lambda=0.01"


@settings(max_examples=20, deadline=None)
@given(params, st.floats(1e-3, 0.1))
def test_generator_properties(p, lam):
    q = build_generator(p, Exponential(lam)).entries
    assert np.all(np.abs(q.sum(axis=0)) <= 1e-12)
    off = q - np.diag(np.diag(q))
    assert np.array_equal(off, off.T)
    assert np.all(off >= 0)
    src, dst = sense_adjacency()
    pattern = np.zeros_like(off, dtype=bool)
    pattern[dst, src] = True
    assert not np.any(off[~pattern])
    r = r_vector(p)
    if Exponential(lam)(np.abs(r[dst] - r[src]).max()) > 0:
        assert np.count_nonzero(off) == len(src)


def test_far_pairs_underflow_to_structural_zero():
    # exp(-lambda d) below the smallest subnormal is stored as 0.0
    p = ModelParams(0.01, 0.01, 100, 10)
    off = build_generator(p, Exponential(0.0625)).entries
    off = off - np.diag(np.diag(off))
    assert np.count_nonzero(off) < 526


def test_constant_strength_equal_rates():
    q = build_generator(P, Constant(2.5)).entries
    off = q[~np.eye(61, dtype=bool)]
    assert set(off[off != 0].tolist()) == {2.5}


def test_generator_is_read_only():
    q = build_generator(P, Exponential())
    with pytest.raises(ValueError):
        q.entries[0, 0] = 1


def test_expm_against_scipy():
    rng = np.random.default_rng(0)
    for scale in (0.01, 1, 30):
        a = rng.normal(size=(8, 8)) * scale
        ours, ref = expm(a), scipy.linalg.expm(a)
        assert np.allclose(ours, ref, rtol=1e-10, atol=1e-12 * np.abs(ref).max())
    q = build_generator(P, Exponential()).entries
    assert np.allclose(expm(q * 3.7), scipy.linalg.expm(q * 3.7), rtol=0, atol=1e-12)


def test_expm_zero_and_shape():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))
    with pytest.raises(ValueError):
        expm(np.zeros((2, 3)))


@settings(max_examples=20, deadline=None)
@given(params, st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_evolution_properties(p, s, t):
    q = build_generator(p, Exponential())
    assert np.array_equal(evolve(q, 0).entries, np.eye(61))
    ps, pt, pst = (evolve(q, x).entries for x in (s, t, s + t))
    assert np.all(np.abs(pst.sum(axis=0) - 1) <= 1e-10)
    assert np.all(pst >= -1e-12)
    assert np.all(np.abs(pst - ps @ pt) <= 1e-9)


def test_evolve_metadata_and_errors():
    q = build_generator(P, Exponential())
    p = evolve(q, 0.5)
    assert p.kind is MatrixKind.EVOLUTION and p.metadata["time"] == 0.5
    with pytest.raises(ValueError):
        evolve(q, -1)
    with pytest.raises(ValueError):
        evolve(p, 1)


def test_discrete_step_bound():
    c = 2.0
    q = build_generator(P, Constant(c))
    # CCC has the maximal 9 sense neighbours
    tau = 1 / (9 * c)
    m = discrete_step(q, tau).entries
    assert np.all(m >= 0)
    assert np.allclose(m.sum(axis=0), 1, atol=1e-12)
    with pytest.raises(ValueError):
        discrete_step(q, 1.01 * tau)


def test_pam_is_first_order_evolution():
    q = build_generator(P, Exponential())
    pam = pam_matrix(q)
    assert pam.kind is MatrixKind.STOCHASTIC
    assert np.array_equal(pam.entries, np.eye(61) + 0.1 * q.entries)
    err = np.abs(pam.entries - evolve(q, 0.1).entries).max()
    assert err <= 0.01 * 0.5 * np.abs(q.entries).max() ** 2 * 61


def test_long_time_mixes_toward_uniform():
    q = build_generator(P, Constant(1))
    p = evolve(q, 200).entries
    assert np.allclose(p, 1 / 61, atol=1e-6)
