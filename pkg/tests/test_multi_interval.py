import math
from fractions import Fraction

import pytest

from cmlat.errors import DomainViolation
from cmlat.randset import power_exists
from cmlat.scan import construct_multi_interval


def test_parameter_validation():
    with pytest.raises(DomainViolation):
        construct_multi_interval(3, 2)
    with pytest.raises(DomainViolation):
        construct_multi_interval(5, 4)  # k > n - 2
    with pytest.raises(DomainViolation):
        construct_multi_interval(5, 1)


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (5, 3)])
def test_certificates(n, k):
    cert = construct_multi_interval(n, k)
    assert cert.n == n and cert.k == k
    assert len(cert.epsilons) == k - 1
    assert cert.delta > 0

    # item 1: the mass pattern is exact (zero iff empty or 1 < |A| <= n-k+1)
    assert cert.items["item1_pattern_exact"]
    for s, mass in enumerate(cert.size_masses):
        if s == 1 or s >= n - k + 2:
            assert mass > 0
        else:
            assert mass == 0
    assert sum(math.comb(n, s) * m for s, m in enumerate(cert.size_masses)) == 1

    # the emitted distribution is exchangeable and matches the size masses
    for mask in range(1 << n):
        assert cert.x.probs[mask] == cert.size_masses[bin(mask).count("1")]

    # item 2: no existence at non-integer alpha <= n-k-1
    for w in cert.items["item2_midpoint_negatives"]:
        assert w["value"] < -1e-6
        assert not power_exists(cert.x, w["alpha"]).exists

    # item 3: existence on [j, j+delta)
    for w in cert.items["item3_existence_windows"]:
        assert w["min_q"] >= -1e-9
        j = w["j"]
        for frac in (0.0, 0.5, 0.99):
            alpha = j + frac * cert.delta
            assert power_exists(cert.x, alpha, tol=1e-8).exists, (j, alpha)

    # item 4: a genuine dip inside every required (j, j+1)
    js = [w["j"] for w in cert.items["item4_interior_negatives"]]
    assert js == list(range(n - k, n - 1))
    for w in cert.items["item4_interior_negatives"]:
        assert w["value"] < -1e-6
        assert w["j"] < w["alpha"] < w["j"] + 1
        verdict = power_exists(cert.x, w["alpha"])
        assert not verdict.exists
        assert verdict.min_q == pytest.approx(w["value"], rel=1e-9, abs=1e-12)

    # item 5: large sets stay positive near every integer
    for w in cert.items["item5_positivity_near_integers"]:
        assert w["min_r"] > 1e-6


def test_epsilons_are_exact_halvings():
    cert = construct_multi_interval(4, 2)
    for eps in cert.epsilons:
        assert isinstance(eps, Fraction)
        assert eps.numerator == 1 and (eps.denominator & (eps.denominator - 1)) == 0


def test_power_structure_beyond_threshold():
    cert = construct_multi_interval(4, 2)
    for alpha in (3.0, 3.5, 4.0, 7.3):
        assert power_exists(cert.x, alpha).exists


def test_wide_deltas_preferred_when_available():
    assert construct_multi_interval(4, 2).delta >= 0.02
    assert construct_multi_interval(5, 3).delta >= 0.001


def test_larger_ground_sets():
    for n, k in ((6, 3), (6, 4), (7, 3)):
        cert = construct_multi_interval(n, k)
        assert cert.items["item1_pattern_exact"]
        assert all(w["value"] < -1e-6 for w in cert.items["item4_interior_negatives"])
