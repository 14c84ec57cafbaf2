import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revmarkov.errors import InputError, StartMismatchError
from revmarkov.errw import (
    RandomSource,
    _simulate_block,
    empirical_cdf,
    errw_path_log_prob,
    errw_sample_path,
    estimate_stationary,
    posterior_edge_frequency_samples,
    simulate_edge_counts,
    stationary_samples,
)
from revmarkov.graph import complete_graph
from revmarkov.inference import log_marginal_reversible
from revmarkov.logvalue import log_sum
from revmarkov.paths import Path, enumerate_paths, make_path, transition_counts
from revmarkov.prior import PriorParams, log_density_many, sample_uniform_simplex

from helpers import priors, triangle, walks


def test_first_steps_by_hand():
    g = complete_graph("ab")  # edges a-a, a-b, b-b
    params = PriorParams(g, 0, [1.0, 1.0, 1.0])
    # a->a: 1/2; loop now weighs 3, vertex a totals 4; a->b: 1/4
    assert errw_path_log_prob(params, make_path(g, "aab")).log == pytest.approx(math.log(1 / 8))
    # a->b: 1/2; at b the edge weighs 2 and the loop 1: b->b 1/3
    assert errw_path_log_prob(params, make_path(g, "abb")).log == pytest.approx(math.log(1 / 6))


def test_start_mismatch():
    params = PriorParams.uniform(triangle(), 0)
    with pytest.raises(StartMismatchError):
        errw_path_log_prob(params, Path(params.graph, (1, 2)))


@settings(max_examples=30)
@given(priors(max_vertices=4), st.integers(0, 4))
def test_path_probabilities_sum_to_one(params, n):
    g = params.graph
    logs = [errw_path_log_prob(params, Path(g, v)) for v in enumerate_paths(g, params.v0, n)]
    assert float(log_sum(logs).log) == pytest.approx(0.0, abs=1e-12)


@given(walks(max_steps=10))
def test_walk_equals_prior_mixture(case):
    params, p = case
    assert errw_path_log_prob(params, p).log == pytest.approx(
        log_marginal_reversible(params, transition_counts(p)).log, abs=1e-10
    )


def test_sample_path_frequencies():
    g = complete_graph(range(3))
    params = PriorParams(g, 0, np.linspace(0.5, 2.0, g.num_edges))
    gen = np.random.default_rng(3)
    trials = 20_000
    seen = {}
    for _ in range(trials):
        v = errw_sample_path(params, 2, gen).vertices
        seen[v] = seen.get(v, 0) + 1
    for v in enumerate_paths(g, 0, 2):
        p = errw_path_log_prob(params, Path(g, v)).value()
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(seen.get(v, 0) / trials - p) < 5 * se


class TestSimulation:
    def test_kernels_agree(self):
        g = complete_graph(range(4))
        params = PriorParams(g, 1, np.linspace(0.5, 3.0, g.num_edges))
        job = (params, 700, 50, RandomSource(5).substream(0))
        np.testing.assert_array_equal(_simulate_block(job, use_numba=True), _simulate_block(job, use_numba=False))

    def test_seed_determinism_and_workers(self):
        params = PriorParams.uniform(triangle(), 0)
        a = simulate_edge_counts(params, 50, 5000, RandomSource(9))
        b = simulate_edge_counts(params, 50, 5000, 9, workers=2)
        c = simulate_edge_counts(params, 50, 5000, RandomSource(10))
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    @given(priors(max_vertices=4), st.integers(1, 40), st.integers(0, 1000))
    def test_counts_are_consistent(self, params, n, seed):
        g = params.graph
        counts = simulate_edge_counts(params, n, 7, seed)
        steps = sum(counts[:, e] // 2 if g.is_loop(e) else counts[:, e] for e in range(g.num_edges))
        np.testing.assert_array_equal(steps, n)
        for e in g.loops:
            assert not np.any(counts[:, e] % 2)
        nu = stationary_samples(g, counts, n)
        np.testing.assert_allclose(nu.sum(axis=1), 1.0, rtol=0, atol=1e-15)

    def test_bad_sizes(self):
        params = PriorParams.uniform(triangle(), 0)
        with pytest.raises(InputError):
            simulate_edge_counts(params, 0, 3, 1)

    def test_frequencies_match_prior_mean(self):
        # the prior mean of x, by importance sampling from the uniform simplex,
        # against the long-run ERRW edge frequencies
        g = triangle()
        params = PriorParams(g, 0, [1.0, 2.0, 0.5])
        xs = sample_uniform_simplex(np.random.default_rng(1), 400_000, 3)
        w = np.exp(log_density_many(params, xs))
        prior_mean = (w[:, None] * xs).sum(axis=0) / w.sum()
        freq = posterior_edge_frequency_samples(params, 2000, 20_000, RandomSource(4))
        se = freq.std(axis=0, ddof=1) / math.sqrt(len(freq))
        assert np.all(np.abs(freq.mean(axis=0) - prior_mean) < 4 * se + 3e-3)

    def test_symmetric_triangle_mean_is_not_uniform(self):
        # with the walk started at vertex 1 the two edges at vertex 1 carry
        # more weight than the opposite edge; the prior mean is not 1/3 each
        g = triangle()
        params = PriorParams.uniform(g, 0)
        xs = sample_uniform_simplex(np.random.default_rng(2), 400_000, 3)
        w = np.exp(log_density_many(params, xs))
        prior_mean = (w[:, None] * xs).sum(axis=0) / w.sum()
        assert prior_mean[1] < 0.3 < 0.34 < prior_mean[0]
        freq = posterior_edge_frequency_samples(params, 2000, 20_000, RandomSource(6))
        se = freq.std(axis=0, ddof=1) / math.sqrt(len(freq))
        assert np.all(np.abs(freq.mean(axis=0) - prior_mean) < 4 * se + 3e-3)

    def test_estimate_stationary(self):
        g = complete_graph(range(3))
        mean, samples = estimate_stationary(PriorParams.uniform(g, 0), 100, 300, RandomSource(0))
        assert samples.shape == (300, 3)
        assert mean.sum() == pytest.approx(1.0, abs=1e-14)


def test_empirical_cdf():
    cdf = empirical_cdf(np.array([0.3, 0.1, 0.2, 0.2]))
    np.testing.assert_allclose(cdf(np.array([0.0, 0.1, 0.2, 0.25, 1.0])), [0, 0.25, 0.75, 0.75, 1.0])


def test_random_source_substreams():
    s = RandomSource(1)
    assert s.substream(0).generator().random() != s.substream(1).generator().random()
    assert s.substream(2).generator().random() == RandomSource(1, (2,)).generator().random()
