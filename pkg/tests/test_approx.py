import math
import random
from fractions import Fraction

import pytest

from cmlat.approx import (
    LIMIT_M_TIMES_GAP,
    LOWER_BOUND_CONSTANT,
    lattice_square_witness,
    lower_bound_witness,
    scalar_gap,
    separation_threshold,
    sup_gap,
    sup_gap_argmax,
    two_point_set,
    upper_bound_witness,
)
from cmlat.cm import is_cm, power
from cmlat.errors import ChainLattice
from cmlat.lattice import boolean_lattice, chain_lattice, diamond_lattice, materialize
from cmlat.randset import RandomSubset, union_iid, void_functional


def residual(m, t):
    return abs(-math.log(t) / (1.0 - t) - m / (m - 1.0))


def random_subset(n, rng, denom=64):
    cuts = sorted(rng.randint(0, denom) for _ in range((1 << n) - 1))
    masses = []
    prev = 0
    for c in cuts:
        masses.append(Fraction(c - prev, denom))
        prev = c
    masses.append(Fraction(denom - prev, denom))
    return RandomSubset(n, masses)


# --- critical point and gap -----------------------------------------------------


def test_t2_value():
    t = sup_gap_argmax(2)
    assert t == pytest.approx(0.2032, abs=5e-4)
    assert residual(2, t) <= 1e-12


def test_residuals_small_across_m():
    for m in (2, 3, 10, 100, 1000, 10000):
        assert residual(m, sup_gap_argmax(m)) <= 1e-12, m


def test_asymptotic_t_m():
    assert abs(sup_gap_argmax(1000) - (1 - 2 / 1000)) <= 5e-6
    # m (1 - t_m) -> 2
    seq = [m * (1 - sup_gap_argmax(m)) for m in (100, 1000, 10000, 100000)]
    assert seq[-1] == pytest.approx(2.0, abs=1e-3)
    assert all(abs(a - 2.0) >= abs(b - 2.0) - 1e-12 for a, b in zip(seq, seq[1:]))


def test_sup_gap_m1_is_1_over_e():
    assert sup_gap(1) == pytest.approx(1.0 / math.e, abs=1e-9)
    assert scalar_gap(0.0, 1) == pytest.approx(1.0 / math.e)


def test_sup_gap_closed_form_matches_direct_max():
    for m in (2, 3, 7, 50, 400):
        gap = sup_gap(m)  # cross-check against golden section is built in
        grid = max(scalar_gap(i / 20000, m) for i in range(20001))
        assert gap == pytest.approx(grid, abs=1e-7)


def test_m_times_gap_limit():
    assert 10000 * sup_gap(10000) == pytest.approx(LIMIT_M_TIMES_GAP, rel=0.01)
    values = [m * sup_gap(m) for m in (1, 2, 5, 10, 100, 1000, 10000)]
    assert all(0 < v < 1 for v in values)
    # decreasing toward 2/e^2 in the scanned range (reported, asserted here)
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
    assert values[-1] >= LIMIT_M_TIMES_GAP


# --- accompaniment upper bound -----------------------------------------------------


def test_upper_bound_witness_two_point():
    for m in (1, 2, 10, 100):
        rep = upper_bound_witness(two_point_set(max(m, 1)), m)
        assert rep.within_bound
        assert rep.distance <= rep.bound + 1e-12


def test_upper_bound_witness_random():
    rng = random.Random(41)
    for _ in range(25):
        x = random_subset(4, rng)
        for m in (2, 10, 50):
            rep = upper_bound_witness(x, m)
            assert rep.within_bound


def test_upper_bound_distance_zero_for_sure_empty():
    x = RandomSubset(2, [1, 0, 0, 0])
    rep = upper_bound_witness(x, 5)
    assert rep.distance == pytest.approx(0.0, abs=1e-15)


# --- lower bound ingredients ---------------------------------------------------------


def test_lower_constant_value():
    assert LOWER_BOUND_CONSTANT == pytest.approx(0.041557755081, abs=1e-12)
    assert LOWER_BOUND_CONSTANT == pytest.approx(
        1 / (4 * math.sqrt(math.e) * (2 + math.sqrt(math.e))), abs=0
    )


def test_two_point_union_violates_necessary_condition():
    for m in (1, 2, 7, 100):
        rep = lower_bound_witness(m)
        assert rep.necessary_condition_slack < 0
        want = (1 - 1 / m) ** m - (1 - 1 / (2 * m)) ** (2 * m)
        assert rep.necessary_condition_slack == pytest.approx(want, abs=1e-12)


def test_separation_holds_from_m0():
    m0 = separation_threshold()
    assert m0 is not None and m0 <= 200
    for m in (m0, m0 + 1, 50, 1000):
        rep = lower_bound_witness(m)
        assert rep.separation_holds
        assert rep.separation >= rep.separation_bound


def test_separation_scaled_limit():
    # m * separation decreases to 1/(4e)
    vals = [m * ((1 - 1 / (2 * m)) ** (2 * m) - (1 - 1 / m) ** m) for m in (10, 100, 1000, 10000)]
    assert vals[-1] == pytest.approx(1 / (4 * math.e), rel=1e-3)
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_report_invariants():
    rep = lower_bound_witness(1000)
    assert rep.sup_gap == pytest.approx(rep.t_m ** 999 - rep.t_m ** 1000, abs=1e-12)
    assert 0 < rep.m_times_gap < 1
    # sandwich at m = 1000: C <= (witnessed lower scale) and upper within limit + slack
    assert rep.m_times_gap <= LIMIT_M_TIMES_GAP + 0.05
    assert 1000 * abs(rep.necessary_condition_slack) >= LOWER_BOUND_CONSTANT * (1 - 0.1)


# --- lattice square witness ------------------------------------------------------------


def test_square_witness_on_boolean2():
    lat = materialize(boolean_lattice(2))
    rep = lattice_square_witness(lat, 10)
    assert rep.square == (0, 1, 2, 3)
    assert rep.within_bound
    # matches the random-set computation on n = 2 exactly
    xm = union_iid(two_point_set(10), 10)
    v = void_functional(xm)
    assert float(rep.divisible_power.values[1]) == pytest.approx(float(v(0b01)))
    assert float(rep.divisible_power.values[3]) == pytest.approx(float(v(0b11)))


def test_square_witness_on_diamond():
    rep = lattice_square_witness(diamond_lattice(3), 5)
    assert rep.distance <= sup_gap(5) + 1e-12
    assert is_cm(rep.base).is_cm
    assert rep.necessary_condition_slack < 0
    # the extension really is m-divisible: its m-th root is the c.m. base
    assert is_cm(power(rep.divisible_power, 1 / 5)).is_cm


def test_square_witness_rejects_chains():
    with pytest.raises(ChainLattice):
        lattice_square_witness(chain_lattice(6), 3)
