"""Sampling layer: reproducibility, convergence to the exact lumped law,
order-2 diagnostics."""

import math

from lumpwalk import (
    AlgebraElement,
    Xoshiro256StarStar,
    empirical_lumped_matrix,
    eta,
    lumping_function,
    markov_diagnostic,
    simulate_walk,
    walk_lumped_matrix,
)
from lumpwalk.shuffles import random_to_top
from lumpwalk.simulate import simulate_ensemble


def test_prng_is_stable():
    rng = Xoshiro256StarStar(1)
    first = [rng.next_uint64() for _ in range(4)]
    rng2 = Xoshiro256StarStar(1)
    assert [rng2.next_uint64() for _ in range(4)] == first
    assert Xoshiro256StarStar(2).next_uint64() != first[0]
    u = Xoshiro256StarStar(3).next_unit_fraction()
    assert 0 <= u < 1


def test_reproducible_trajectories(sym4, top_prob, frustrator, mid_swap_T):
    alpha = eta(sym4, mid_swap_T)
    a = simulate_walk(top_prob, frustrator, alpha, seed=9, length=500)
    b = simulate_walk(top_prob, frustrator, alpha, seed=9, length=500)
    assert a == b
    c = simulate_walk(top_prob, frustrator, alpha, seed=10, length=500)
    assert a.states != c.states


def test_length_zero_and_deterministic_weight(sym4, top_prob):
    alpha = AlgebraElement.basis(sym4, 5)
    t = simulate_walk(top_prob, random_to_top(sym4), alpha, seed=1, length=0)
    assert t.states == (5,)
    delta = AlgebraElement.basis(sym4, 0)
    t2 = simulate_walk(top_prob, delta, alpha, seed=1, length=50)
    assert set(t2.states) == {5}


def test_empirical_matches_exact_lumped(sym4, top_prob, frustrator, mid_swap_T):
    alpha = eta(sym4, mid_swap_T)
    n = 100_000
    trajectory = simulate_walk(top_prob, frustrator, alpha, seed=7, length=n)
    f = lumping_function(top_prob)
    empirical = empirical_lumped_matrix(trajectory.lumps, f.n_lumps)
    exact = walk_lumped_matrix(top_prob, frustrator)
    visits = [0] * f.n_lumps
    for b in trajectory.lumps[:-1]:
        visits[b] += 1
    for i in range(f.n_lumps):
        bound = 4 / math.sqrt(visits[i])
        for j in range(f.n_lumps):
            assert abs(empirical[i][j] - exact[i][j]) <= bound
    # marginal top-card frequencies are near uniform (3 sigma)
    counts = [0] * f.n_lumps
    for b in trajectory.lumps:
        counts[b] += 1
    sigma = math.sqrt(0.25 * 0.75 * (n + 1))
    assert all(abs(c - (n + 1) / 4) <= 3 * sigma for c in counts)


def test_diagnostic_clean_for_stationary_start(sym4, top_prob, frustrator):
    alpha = eta(sym4, range(24))
    trajectory = simulate_walk(top_prob, frustrator, alpha, seed=21, length=60_000)
    report = markov_diagnostic(trajectory.lumps, 4)
    assert report.clean and report.warning is None


def test_diagnostic_flags_transient_start(sym4, top_prob, frustrator):
    delta = AlgebraElement.basis(sym4, 0)
    batch = simulate_ensemble(top_prob, frustrator, delta, seed=3, replicas=8000, length=3)
    report = markov_diagnostic([t.lumps for t in batch], 4)
    f = lumping_function(top_prob)
    top_lump = f.lump_of[0]
    assert (top_lump, top_lump) in [tuple(item["context"]) for item in report.flagged]


def test_diagnostic_iid_sequence_clean():
    rng = Xoshiro256StarStar(19)
    lumps = [rng.next_uint64() % 4 for _ in range(50_000)]
    report = markov_diagnostic(lumps, 4)
    assert report.clean


def test_diagnostic_short_sequence_warns():
    report = markov_diagnostic([0, 1, 0, 1], 2)
    assert report.warning is not None and report.clean
