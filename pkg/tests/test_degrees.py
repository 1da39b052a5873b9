import math

import mpmath
import numpy as np
import pytest

from probcore.degrees import (
    degree_pmf,
    eta_degree_bruteforce,
    eta_degree_clt_bound,
    eta_degree_exact,
    eta_degree_safe_floor,
    normal_quantile,
)

from oracles import enum_eta_degree, enum_pmf, enum_tail

ETAS = (0.1, 0.3, 0.5, 0.7, 0.9)


def test_pmf_worked_example():
    dist = degree_pmf([0.3, 0.4, 0.6])
    assert abs(dist.tail[3] - 0.072) < 1e-12
    assert abs(dist.tail[2] - 0.396) < 1e-12
    want = (0.168, 0.436, 0.324, 0.072)
    assert np.allclose(dist.pmf, want, atol=1e-12)


def test_pmf_empty_and_certain():
    dist = degree_pmf([])
    assert dist.pmf.tolist() == [1.0]
    assert dist.tail.tolist() == [1.0]
    dist = degree_pmf([1.0, 1.0])
    assert np.allclose(dist.pmf, [0.0, 0.0, 1.0], atol=0)


def test_pmf_matches_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(200):
        d = int(rng.integers(0, 13))
        p = 1.0 - rng.random(d)  # (0, 1]
        dist = degree_pmf(p)
        assert np.allclose(dist.pmf, enum_pmf(p), atol=1e-12)
        assert np.allclose(dist.tail, enum_tail(p), atol=1e-12)


def test_tail_is_monotone_and_starts_at_one():
    rng = np.random.default_rng(8)
    for _ in range(50):
        p = 1.0 - rng.random(int(rng.integers(1, 20)))
        tail = degree_pmf(p).tail
        assert tail[0] == 1.0
        assert np.all(np.diff(tail) <= 1e-15)


def test_probability_validation():
    for bad in ([0.0], [1.2], [-0.1], [0.5, 0.0]):
        with pytest.raises(ValueError):
            degree_pmf(bad)
    with pytest.raises(ValueError):
        eta_degree_exact([0.5], -0.1)
    with pytest.raises(ValueError):
        eta_degree_exact([0.5], 1.1)


def test_eta_degree_worked_examples():
    assert eta_degree_exact([0.3, 0.4, 0.6], 0.2) == 2
    assert eta_degree_exact([0.4, 0.6], 0.2) == 2  # Pr[deg >= 2] = 0.24
    assert eta_degree_exact([0.5], 0.5) == 1
    assert eta_degree_exact([0.5], 0.6) == 0
    assert eta_degree_exact([0.9, 0.9, 0.9], 0.5) == 3  # 0.729 >= 0.5
    assert eta_degree_exact([], 0.7) == 0


def test_eta_degree_eta_zero_gives_degree():
    rng = np.random.default_rng(11)
    for _ in range(30):
        p = 1.0 - rng.random(int(rng.integers(0, 15)))
        assert eta_degree_exact(p, 0.0) == p.shape[0]


def test_eta_degree_matches_bruteforce():
    rng = np.random.default_rng(12)
    for trial in range(300):
        p = 1.0 - rng.random(int(rng.integers(0, 16)))
        eta = ETAS[trial % len(ETAS)]
        assert eta_degree_exact(p, eta) == eta_degree_bruteforce(p, eta)
        assert eta_degree_exact(p, eta) == enum_eta_degree(p, eta)


def test_bruteforce_rejects_large_inputs():
    with pytest.raises(ValueError):
        eta_degree_bruteforce([0.5] * 21, 0.5)


def test_eta_degree_monotone_in_eta():
    rng = np.random.default_rng(13)
    for _ in range(50):
        p = 1.0 - rng.random(int(rng.integers(1, 18)))
        vals = [eta_degree_exact(p, e) for e in np.linspace(0.0, 1.0, 11)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_eta_degree_monotone_in_edges():
    rng = np.random.default_rng(14)
    for trial in range(50):
        p = 1.0 - rng.random(int(rng.integers(2, 15)))
        eta = ETAS[trial % len(ETAS)]
        full = eta_degree_exact(p, eta)
        drop = int(rng.integers(p.shape[0]))
        reduced = eta_degree_exact(np.delete(p, drop), eta)
        assert reduced <= full


def test_normal_quantile_known_points():
    assert normal_quantile(0.5) == 0.0
    assert abs(normal_quantile(0.975) - 1.959964) < 1e-6
    assert abs(normal_quantile(0.1) - (-1.281552)) < 1e-6


def test_normal_quantile_against_mpmath():
    # Phi(z) = q inverted at high precision via the inverse error function
    for q in (1e-6, 0.001, 0.02, 0.1, 0.25, 0.5, 0.77, 0.9, 0.99, 0.9999, 1 - 1e-7):
        want = float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(q) - 1))
        assert abs(normal_quantile(q) - want) < 1e-9


def test_normal_quantile_domain():
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            normal_quantile(bad)


def test_clt_bound_worked_examples():
    assert eta_degree_clt_bound([0.5] * 100, 0.5) == 50
    assert eta_degree_clt_bound([0.5] * 100, 0.9) == 43
    assert eta_degree_clt_bound([1.0, 1.0, 1.0], 0.9) == 3
    assert eta_degree_clt_bound([], 0.4) == 0


def test_clt_bound_clamped_to_range():
    rng = np.random.default_rng(15)
    for trial in range(100):
        p = 1.0 - rng.random(int(rng.integers(0, 25)))
        eta = (0.01, 0.5, 0.99)[trial % 3]
        b = eta_degree_clt_bound(p, eta)
        assert 0 <= b <= p.shape[0]


def test_safe_floor_never_exceeds_exact():
    rng = np.random.default_rng(16)
    etas = (0.0, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999, 1.0)
    for trial in range(500):
        d = int(rng.integers(0, 25))
        p = 1.0 - rng.random(d)
        if d and rng.random() < 0.4:
            hits = rng.random(d) < 0.3
            p = np.where(hits, 1.0, p)
        eta = etas[trial % len(etas)]
        assert eta_degree_safe_floor(p, eta) <= eta_degree_exact(p, eta)


def test_safe_floor_special_cases():
    assert eta_degree_safe_floor([0.5, 0.7], 0.0) == 2
    assert eta_degree_safe_floor([1.0, 1.0], 0.9) == 2
    assert eta_degree_safe_floor([1.0, 1.0], 1.0) == 2
    # mixed certainty at eta=1: the computed tail never reaches 1.0 exactly
    assert eta_degree_safe_floor([1.0, 0.5], 1.0) == 0
    # certain edges hold the floor up where the tail bound alone is weak
    assert eta_degree_safe_floor([1.0] * 9 + [0.01] * 11, 0.9) >= 9


def test_pmf_result_is_immutable():
    dist = degree_pmf([0.5, 0.5])
    with pytest.raises(ValueError):
        dist.pmf[0] = 2.0


def test_degree_distribution_sums_to_one():
    rng = np.random.default_rng(17)
    for _ in range(30):
        p = 1.0 - rng.random(int(rng.integers(1, 30)))
        dist = degree_pmf(p)
        assert abs(float(dist.pmf.sum()) - 1.0) < 1e-12
        assert math.isclose(float(dist.tail[0]), 1.0)
