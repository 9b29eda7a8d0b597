import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixconc import fixtures
from mixconc.certificates import Certificate, general_certificate, markov_certificate
from mixconc.errors import ConventionError, ValidationError
from mixconc.functions import LipschitzFn
from mixconc.generators import random_markov_spec
from mixconc.mixing import contraction_profile, mixing_profile
from mixconc.montecarlo import (
    clopper_pearson_upper,
    compare,
    count_distribution,
    empirical_tail,
    exact_mean,
    exact_tail,
    sample_paths,
    uniforms,
)
from mixconc.process import Alphabet, MarkovSpec, build_markov_joint

seeds = st.integers(0, 2**32 - 1)


def count_a(n):
    return LipschitzFn.hamming_weight(n, 2, 0)


def test_uniforms_are_keyed_and_in_range():
    idx = np.arange(1000, dtype=np.uint64)
    u = uniforms(7, idx, 0)
    assert u.min() >= 0.0 and u.max() < 1.0
    np.testing.assert_array_equal(u, uniforms(7, idx, 0))
    assert not np.array_equal(u, uniforms(8, idx, 0))
    assert not np.array_equal(u, uniforms(7, idx, 1))
    assert not np.array_equal(u, uniforms(7, idx, 0, stream=1))
    np.testing.assert_array_equal(u[500:], uniforms(7, idx[500:], 0))


def test_sampling_independent_of_workers_and_chunks():
    spec = fixtures.f1(5)
    one = sample_paths(spec, 42, 150_000, workers=1)
    four = sample_paths(spec, 42, 150_000, workers=4)
    np.testing.assert_array_equal(one, four)
    np.testing.assert_array_equal(one[70_000:70_100], sample_paths(spec, 42, 100, start=70_000))
    assert one.shape == (150_000, 5) and one.dtype.kind in "iu"


def test_deterministic_chain_samples():
    spec = MarkovSpec.homogeneous_chain(Alphabet.of_size(2), 4, [1.0, 0.0], np.eye(2))
    assert np.all(sample_paths(spec, 1, 1000) == 0)


def test_f1_first_marginal(f1):
    paths = sample_paths(f1, 42, 100_000)
    assert abs((paths[:, 0] == 0).mean() - 0.5) <= 3 * math.sqrt(0.25 / 100_000)


def test_sampled_law_matches_joint(rng):
    spec = random_markov_spec(rng, 3, 3, full_support=False)
    joint = build_markov_joint(spec)
    paths = sample_paths(spec, 3, 200_000)
    codes = np.ravel_multi_index(paths.T, (3, 3, 3))
    freq = np.bincount(codes, minlength=27) / len(paths)
    p = joint.mass.ravel()
    assert np.all(np.abs(freq - p) <= 5 * np.sqrt(p * (1 - p) / len(paths)) + 1e-12)
    assert np.all(freq[p == 0] == 0)


def test_hmm_sampling_matches_observed_law():
    spec = fixtures.f4()
    paths = sample_paths(spec, 5, 200_000)
    assert abs((paths[:, 0] == 0).mean() - 0.5) <= 5 * math.sqrt(0.25 / 200_000)
    from mixconc.process import build_hmm_joint
    p = build_hmm_joint(spec)[1].mass.ravel()
    freq = np.bincount(np.ravel_multi_index(paths.T, (2, 2, 2)), minlength=8) / len(paths)
    assert np.all(np.abs(freq - p) <= 5 * np.sqrt(p * (1 - p) / len(paths)))


def test_sample_validation(f1):
    with pytest.raises(ValidationError):
        sample_paths(f1, 1, 0)
    with pytest.raises(ValidationError):
        sample_paths(f1, 1, 10, workers=0)
    with pytest.raises(ValidationError):
        sample_paths(build_markov_joint(f1), 1, 10)


def test_clopper_pearson():
    assert clopper_pearson_upper(10, 10) == 1.0
    assert clopper_pearson_upper(0, 100) == pytest.approx(1 - 0.05 ** (1 / 100), rel=1e-10)
    ks = np.arange(0, 50)
    up = clopper_pearson_upper(ks, 50)
    assert np.all(np.diff(up) > 0) and np.all(up >= ks / 50)


def test_exact_mean_paths(f1, f1_joint):
    phi = count_a(3)
    assert exact_mean(f1, phi) == pytest.approx(1.5, abs=1e-15)
    assert exact_mean(f1_joint, phi) == pytest.approx(1.5, abs=1e-15)
    table = LipschitzFn.from_table(phi.dense())
    assert exact_mean(f1, table) == pytest.approx(1.5, abs=1e-15)
    assert exact_mean(fixtures.f4(), phi) == pytest.approx(1.5, abs=1e-14)


def test_exact_tail_f1(f1):
    est = exact_tail(f1, count_a(3), [0.0, 1.5, 2.0])
    # |count - 1.5| >= 1.5 happens on aaa and bbb
    assert est.tail[1] == pytest.approx(0.5625, abs=1e-15)
    assert est.tail[0] == 1.0 and est.tail[2] == 0.0
    dense = exact_tail(build_markov_joint(f1), count_a(3), [1.5])
    assert dense.tail[0] == pytest.approx(0.5625, abs=1e-15)


def test_constant_function_tail(f1):
    phi = LipschitzFn.from_table(np.full((2, 2, 2), 3.0))
    paths = sample_paths(f1, 1, 1000)
    est = empirical_tail(paths, phi, [0.0, 0.1], mean_mode="exact", process=f1)
    assert est.tail.tolist() == [1.0, 0.0]
    est = empirical_tail(paths, phi, [0.0, 0.1])
    assert est.mean_slack == 0.0 and est.tail.tolist() == [1.0, 0.0]


def test_tail_beyond_range_is_zero(f1):
    paths = sample_paths(f1, 1, 5000)
    est = empirical_tail(paths, count_a(3), [3.5], mean_mode="exact", process=f1)
    assert est.tail[0] == 0.0 and est.upper[0] < 1e-3


def test_plug_in_upper_is_conservative(f1):
    paths = sample_paths(f1, 9, 20_000)
    phi = count_a(3)
    t = np.linspace(0, 3, 13)
    plug = empirical_tail(paths, phi, t)
    exact = empirical_tail(paths, phi, t, mean_mode="exact", process=f1)
    assert plug.mean_slack == pytest.approx(3 * math.sqrt(math.log(80) / 40_000))
    assert np.all(plug.upper >= plug.tail) and np.all(exact.upper >= exact.tail)
    truth = exact_tail(f1, phi, t).tail
    assert np.all(plug.upper >= truth - 1e-12)


def test_empirical_tail_validation(f1):
    paths = sample_paths(f1, 1, 100)
    with pytest.raises(ValidationError):
        empirical_tail(paths, count_a(3), [-1.0])
    with pytest.raises(ValidationError):
        empirical_tail(paths, count_a(3), [1.0], mean_mode="guess")
    with pytest.raises(ValidationError):
        empirical_tail(paths, count_a(3), [1.0], mean_mode="exact")
    with pytest.raises(ValidationError):
        empirical_tail(paths, count_a(3), [1.0], mean=1.5)


def test_compare_and_tsv(f1, f1_joint):
    est = exact_tail(f1, count_a(3), [0.0, 1.0, 2.0])
    report = compare(est, general_certificate(mixing_profile(f1_joint), 1.0))
    assert report.passed and report.failing_t() == []
    assert report.effective_bound[0] == 1.0 and report.bound[0] == 2.0
    lines = report.to_tsv().splitlines()
    assert lines[0].split("\t") == ["t", "empirical", "upper_conf", "bound", "effective_bound", "verdict"]
    assert len(lines) == 4 and all(l.endswith("pass") for l in lines[1:])
    assert report.to_dict()["rows"][0]["verdict"] == "pass"


def test_compare_convention_errors(f1, f1_joint):
    est = exact_tail(f1, count_a(3), [1.0])
    with pytest.raises(ConventionError):
        compare(est, Certificate(4, 1.0))
    with pytest.raises(ConventionError):
        compare(est, Certificate(3, 1.0, metric="normalized-hamming"))
    with pytest.raises(ConventionError):
        compare(est, Certificate(3, 0.5))


def test_normalized_metric_consistency(f1):
    phi = count_a(3)
    ham = exact_tail(f1, phi, [1.5])
    norm = exact_tail(f1, phi, [0.5], metric="normalized-hamming")
    assert ham.tail[0] == pytest.approx(norm.tail[0])
    cert = markov_certificate(contraction_profile(f1), 1.0, "normalized-hamming")
    assert compare(norm, cert).passed


@given(seeds, st.integers(1, 5), st.integers(1, 3))
def test_count_distribution_matches_enumeration(seed, n, s):
    rng = np.random.default_rng(seed)
    spec = random_markov_spec(rng, n, s, full_support=False)
    bits = rng.integers(0, 2, size=(n, s))
    law = count_distribution(spec, bits)
    joint = build_markov_joint(spec)
    ref = np.zeros(n + 1)
    for x in itertools.product(range(s), repeat=n):
        ref[sum(bits[l, x[l]] for l in range(n))] += joint.mass[x]
    np.testing.assert_allclose(law, ref, atol=1e-13)


def test_exact_tail_long_chain_uses_dp():
    spec = fixtures.f1(100)
    est = exact_tail(spec, count_a(100), [0.0, 10.0, 200.0])
    assert est.mean == pytest.approx(50.0, abs=1e-9)
    assert est.tail[0] == pytest.approx(1.0) and est.tail[2] == 0.0
    assert 0 < est.tail[1] < 1


def test_empirical_converges_to_exact(f1):
    phi = count_a(3)
    truth = exact_tail(f1, phi, [1.5]).tail[0]
    for seed in range(3):
        est = empirical_tail(sample_paths(f1, seed, 50_000), phi, [1.5], mean_mode="exact", process=f1)
        assert abs(est.tail[0] - truth) <= 5 * math.sqrt(truth * (1 - truth) / 50_000)


def test_dependence_blind_certificate_is_flagged():
    spec = fixtures.sticky()
    phi = count_a(spec.n)
    est = exact_tail(spec, phi, np.linspace(0, 10, 41))
    blind = Certificate(spec.n, 1.0, constant_kind="explicit", constant=1.0)
    assert not compare(est, blind).passed
    honest = markov_certificate(contraction_profile(spec), 1.0)
    assert compare(est, honest).passed
