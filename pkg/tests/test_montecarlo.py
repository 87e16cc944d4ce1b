import pytest

from ftqec.counting import GadgetAnalysis
from ftqec.gadgets import build_ec, build_exrec
from ftqec.montecarlo import monte_carlo, scaling_exponent, wilson_interval


@pytest.fixture(scope="module")
def exrec():
    g = build_exrec("CNOT", 1)
    return g, GadgetAnalysis(g)


def test_zero_rate_never_fails(exrec):
    g, an = exrec
    r = monte_carlo(g, 0.0, 10_000, seed=0, analysis=an)
    assert r.failures == 0 and r.p_fail == 0.0


def test_same_seed_is_bit_reproducible(exrec):
    g, an = exrec
    r1 = monte_carlo(g, 1e-3, 20_000, seed=42, analysis=an)
    r2 = monte_carlo(g, 1e-3, 20_000, seed=42, analysis=an)
    assert r1.failures == r2.failures


def test_different_seeds_differ(exrec):
    g, an = exrec
    r1 = monte_carlo(g, 1e-3, 20_000, seed=1, analysis=an)
    r2 = monte_carlo(g, 1e-3, 20_000, seed=2, analysis=an)
    assert r1.failures != r2.failures or r1.p_fail == r2.p_fail


def test_rejects_bad_arguments(exrec):
    g, an = exrec
    with pytest.raises(ValueError):
        monte_carlo(g, 0.5, 10_000, analysis=an)
    with pytest.raises(ValueError):
        monte_carlo(g, 1e-3, 100, analysis=an)


def test_wilson_interval_sane():
    lo, hi = wilson_interval(5, 100)
    assert 0 < lo < 0.05 < hi < 0.15
    lo, hi = wilson_interval(0, 100)
    assert lo < 1e-12 and hi < 0.05


def test_scaling_exponent_on_synthetic_quadratic():
    pts = [(1e-4, 3e-5), (3e-4, 2.7e-4), (1e-3, 3e-3)]
    assert abs(scaling_exponent(pts) - 2.0) < 0.05


def test_ec_gadget_mc_small(exrec):
    # single faults never fail a fault-tolerant gadget, so failures at
    # tiny p are quadratically suppressed
    g = build_ec("full")
    r = monte_carlo(g, 1e-4, 50_000, seed=0)
    assert r.p_fail < 5e-4
