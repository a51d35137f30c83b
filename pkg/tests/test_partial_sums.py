import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mp_renyi
from revpinsker.divergence import renyi_array
from revpinsker.errors import EmptyVectorError, LengthMismatchError, ParamOutOfRangeError, QTooLargeError
from revpinsker.partial_sums import (
    binary_renyi_terms,
    partial_sum_pmf,
    partial_sum_pmf_bruteforce,
    product_distribution,
    renyi_chain_check,
    summability_caps,
)

ORDERS = (0.5, 1.0, 1.5, 2.0, 3.0, math.inf)


@pytest.mark.parametrize(
    "params, expected",
    [((0.5,), (0.5, 0.5)), ((0.5, 0.5), (0.25, 0.5, 0.25)), ((0.2, 0.7), (0.24, 0.62, 0.14))],
)
def test_pmf_examples(params, expected):
    np.testing.assert_allclose(partial_sum_pmf(params).probs, expected, rtol=0, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.001, 0.999), min_size=1, max_size=10))
def test_pmf_matches_enumeration(params):
    pmf = partial_sum_pmf(params).probs
    assert abs(pmf.sum() - 1) <= 1e-12
    np.testing.assert_allclose(pmf, partial_sum_pmf_bruteforce(params), rtol=0, atol=1e-14)


def test_pmf_errors():
    with pytest.raises(EmptyVectorError):
        partial_sum_pmf([])
    with pytest.raises(ParamOutOfRangeError):
        partial_sum_pmf([0.5, 1.0])


def test_chain_identical():
    c = renyi_chain_check([0.3, 0.2], [0.3, 0.2], 2.0)
    assert (c.lhs, c.additivity_sum, c.bound_sum, c.holds) == (0.0, 0.0, 0.0, True)


def test_chain_example():
    c = renyi_chain_check([0.3, 0.4], [0.25, 0.35], 1.0)
    assert c.lhs <= c.additivity_sum <= c.bound_sum and c.holds
    pm = partial_sum_pmf([0.3, 0.4]).probs
    qm = partial_sum_pmf([0.25, 0.35]).probs
    assert c.lhs == pytest.approx(mp_renyi(pm, qm, 1), rel=1e-12)


def test_chain_errors():
    with pytest.raises(LengthMismatchError):
        renyi_chain_check([0.1, 0.2], [0.1], 1.0)
    with pytest.raises(QTooLargeError):
        renyi_chain_check([0.1], [0.6], 1.0)


@pytest.mark.parametrize("alpha", ORDERS)
def test_additivity_against_product_space(alpha):
    rng = np.random.default_rng(31)
    for n in range(1, 7):
        p = rng.uniform(0.01, 0.99, n)
        q = rng.uniform(0.01, 0.5, n)
        direct = float(renyi_array(product_distribution(p), product_distribution(q), alpha))
        summed = float(np.sum(binary_renyi_terms(p, q, alpha)))
        assert summed == pytest.approx(direct, rel=1e-10, abs=1e-12)


def test_chain_random_sweep():
    rng = np.random.default_rng(99)
    for _ in range(200):
        n = int(rng.integers(1, 13))
        p = rng.uniform(0.01, 0.99, n)
        q = rng.uniform(0.01, 0.5, n)
        for a in ORDERS:
            assert renyi_chain_check(p, q, a).holds


def test_caps_example():
    caps = summability_caps([0.275, 0.33], [0.25, 0.3])
    np.testing.assert_allclose(caps.eps, [0.1, 0.1], rtol=1e-13)
    assert caps.k1 == pytest.approx(2 * math.log(1.01), rel=1e-12)
    assert caps.k2 == pytest.approx(2 * math.log(1.2), rel=1e-12)


def test_caps_identical():
    caps = summability_caps([0.2, 0.4], [0.2, 0.4])
    assert caps.k1 == caps.k2 == 0.0


def test_caps_dominate_chain():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        q = rng.uniform(0.05, 0.5, n)
        p = np.clip(q * rng.uniform(0.5, 1.5, n), 1e-3, 0.999)
        caps = summability_caps(p, q)
        for a in ORDERS:
            lhs = renyi_chain_check(p, q, a).lhs
            assert lhs <= (caps.k1 if a <= 2 else caps.k2) + 1e-10
