import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixconc.bar import (
    BarFunction,
    ExtremalityWarning,
    bar_count,
    build_bar,
    enumerate_bars,
    sign_sequence,
    verify_extremal,
)
from mixconc.errors import ValidationError
from mixconc.functions import hamming, parse_functional
from mixconc.generators import random_markov_spec
from mixconc.norms import inner, kappa_prefix, phi_norm, psi
from mixconc.process import Alphabet, MarkovSpec, build_markov_joint

seeds = st.integers(0, 2**32 - 1)
FLAT = [[0.3, 0.7], [0.3, 0.7]]


def flat_chain(n=3):
    return MarkovSpec.homogeneous_chain(Alphabet(("a", "b")), n, [0.5, 0.5], FLAT)


def test_sign_sequence_f1(f1):
    sig = sign_sequence(f1, 0)
    np.testing.assert_allclose(sig, [[0.5, -0.5], [0.25, -0.25], [0.125, -0.125]], atol=1e-15)


def test_sign_sequence_flat_chain():
    sig = sign_sequence(flat_chain(), 0)
    assert np.all(sig[1] == 0) and np.all(sig[2] == 0)


@given(seeds, st.integers(1, 4), st.integers(1, 3))
def test_sign_levels_sum_to_zero(seed, n, s):
    spec = random_markov_spec(np.random.default_rng(seed), n, s)
    for z in range(s):
        for sig in sign_sequence(spec, z):
            assert abs(sig.sum()) <= 1e-12


def test_sign_sequence_warns_without_full_support():
    spec = MarkovSpec.homogeneous_chain(Alphabet.of_size(2), 3, [0.5, 0.5], np.eye(2))
    with pytest.warns(ExtremalityWarning):
        sign_sequence(spec, 0)


def test_sign_sequence_errors(f1):
    with pytest.raises(ValidationError):
        sign_sequence(f1, 2)
    with pytest.raises(ValidationError):
        sign_sequence(f1, 0, i=4)
    with pytest.raises(ValidationError):
        sign_sequence(f1, 0, i=2)  # missing prefix


def test_build_bar_examples(f1):
    bar = build_bar(f1, 0)
    assert bar.rows() == ["10", "10", "10"]
    assert bar((0, 0, 1)) == 2
    flat = build_bar(flat_chain(), 0)
    assert np.all(flat.bits[1:] == 0)
    assert build_bar(f1, 0, sign=-1).rows() == ["01", "01", "01"]
    with pytest.raises(ValidationError):
        build_bar(f1, 0, sign=2)


def test_threshold_tolerance(f1):
    assert build_bar(f1, 0, tol=0.3).rows() == ["10", "00", "00"]


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_bar_attains_psi(seed, n, s):
    spec = random_markov_spec(np.random.default_rng(seed), n, s, full_support=True)
    joint = build_markov_joint(spec)
    for z in range(s):
        kappa = kappa_prefix(joint, (z,))
        assert inner(kappa, build_bar(spec, z).table()) == pytest.approx(psi(kappa), abs=1e-10)
        assert inner(-kappa, build_bar(spec, z, sign=-1).table()) == pytest.approx(psi(-kappa), abs=1e-10)


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_sign_functions_are_projection_marginals(seed, n, s):
    spec = random_markov_spec(np.random.default_rng(seed), n, s, full_support=True)
    joint = build_markov_joint(spec)
    for z in range(s):
        values = kappa_prefix(joint, (z,)).values
        for sig in sign_sequence(spec, z):
            np.testing.assert_allclose(values.reshape(s, -1).sum(axis=1), sig, atol=1e-12)
            values = values.sum(axis=0)


def test_verify_extremal_f1(f1):
    report = verify_extremal(f1, 1)
    assert report.lhs == pytest.approx(0.875, abs=1e-12)
    assert report.rhs == pytest.approx(0.875, abs=1e-12)
    assert report.gap <= 1e-12 and report.dominates
    d = report.to_dict()
    assert d["bar"] == ["10", "10", "10"]


def test_verify_extremal_degenerate_cases():
    one = MarkovSpec.homogeneous_chain(Alphabet.of_size(1), 3, [1.0], [[1.0]])
    r = verify_extremal(one, 1)
    assert r.lhs == 0.0 and r.rhs == 0.0
    r = verify_extremal(flat_chain(), 1)
    # the first coordinate still moves phi by one unit at most
    assert r.lhs == pytest.approx(r.rhs, abs=1e-12)
    r = verify_extremal(MarkovSpec.homogeneous_chain(Alphabet.of_size(2), 3, [0.5, 0.5], FLAT), 2)
    assert r.dominates


def test_verify_extremal_warns_without_full_support():
    spec = MarkovSpec.homogeneous_chain(Alphabet.of_size(2), 3, [0.5, 0.5], np.eye(2))
    with pytest.warns(ExtremalityWarning):
        verify_extremal(spec, 1)


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_extremal_chain_all_coordinates(seed, n, s):
    spec = random_markov_spec(np.random.default_rng(seed), n, s, full_support=True)
    for i in range(1, n + 1):
        r = verify_extremal(spec, i, phi_method="auto")
        assert r.dominates
        assert r.lhs >= r.phi_max - 1e-9
        assert r.lhs <= r.rhs + 1e-9
        if i == 1:
            assert r.gap <= 1e-10


def test_bar_functions_are_lipschitz_with_bounded_range():
    for bar in enumerate_bars(2, 3):
        table = bar.table()
        assert 0 <= table.min() and table.max() <= 2
        cells = list(itertools.product(range(3), repeat=2))
        for x in cells:
            for y in cells:
                assert abs(table[x] - table[y]) <= hamming(x, y)


def test_bar_count_examples():
    assert bar_count(3, 2) == 64
    assert bar_count(1, 1) == 2
    assert bar_count(2, 2) == 16 == sum(1 for _ in enumerate_bars(2, 2))
    for n in range(1, 9):
        for s in range(1, 9 // n + 1):
            if n * s <= 8:
                assert bar_count(n, s) == sum(1 for _ in enumerate_bars(n, s))
    assert bar_count(31, 2) == 2**62
    with pytest.raises(ValidationError):
        bar_count(21, 3)
    with pytest.raises(ValidationError):
        bar_count(0, 2)


def test_bar_text_round_trip():
    bar = BarFunction(np.array([[1, 0, 1], [0, 0, 1]]))
    assert BarFunction.from_text(bar.to_text()).rows() == bar.rows()
    for bad in ("", "10\n1", "12"):
        with pytest.raises(ValidationError):
            BarFunction.from_text(bad)
    with pytest.raises(ValidationError):
        BarFunction(np.array([[2, 0]]))


def test_bar_functional_parsing():
    ab = Alphabet(("a", "b"))
    phi = parse_functional("bar:10,01,11", ab, 3)
    assert phi((0, 1, 0)) == 3 and phi.lipschitz_const == 1.0
    with pytest.raises(ValidationError):
        parse_functional("bar:10,01", ab, 3)


def test_general_i_uses_reduced_kernel(f1):
    r = verify_extremal(f1, 2)
    # full-length Psi counts the fixed coordinates again; the reduced one does not
    assert r.psi_full_max > r.rhs
    assert r.lhs == pytest.approx(r.rhs, abs=1e-12)
    assert r.phi_max == pytest.approx(r.rhs, abs=1e-12)


def test_no_warning_on_full_support(f1):
    with warnings.catch_warnings():
        warnings.simplefilter("error", ExtremalityWarning)
        verify_extremal(f1, 1)
        assert phi_norm(kappa_prefix(build_markov_joint(f1), (0,))).value == pytest.approx(0.875)
