import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mp_kl, mp_renyi, random_simplex
from revpinsker import bounds as B
from revpinsker.divergence import kl_array, renyi_array, tv_array
from revpinsker.errors import (
    BadBetaError,
    NonPositiveEtaError,
    NotMutuallyACError,
    OrderOutOfRangeError,
    TVOutOfRangeError,
    ZeroQMinError,
)
from revpinsker.measure import PairSampler, balance_coefficient_batch, pair_from_arrays, sample_pair

PAIR = pair_from_arrays([0.5, 0.5], [0.25, 0.75])
LN2, LN15 = math.log(2), math.log(1.5)


# ---------------------------------------------------------------- scalar forms


def test_pinsker():
    assert B.pinsker_lower(0.5).value == 0.125
    assert B.pinsker_lower(0.0).value == 0.0


def test_ow_refined():
    assert B.ow_refined_pinsker_lower(0.5, 0.25).value == pytest.approx(math.log(3) / 2 * 0.25, rel=1e-15)
    assert B.ow_refined_pinsker_lower(0.5, 0.5).value == pytest.approx(0.125, rel=1e-15)
    # continuity at the symmetric split
    assert B.ow_refined_pinsker_lower(1.0, 0.4999).value == pytest.approx(0.5, abs=1e-3)


def test_gilardoni():
    expected = -math.log(0.75) - 0.75 * math.log(1.25)
    assert B.gilardoni_dual_lower(0.5).value == pytest.approx(expected, rel=1e-14)
    # not uniformly tighter than Pinsker, yet both stay below D(Q||P)
    assert expected < B.pinsker_lower(0.5).value < mp_kl(PAIR.q, PAIR.p)


def test_renyi_pinsker():
    assert B.renyi_pinsker_lower(0.5, 0.5).value == pytest.approx(0.0625)
    assert B.renyi_pinsker_lower(0.5, 0.25).value == pytest.approx(0.03125)
    assert 0.03125 <= mp_renyi(PAIR.p, PAIR.q, 0.25)
    with pytest.raises(OrderOutOfRangeError):
        B.renyi_pinsker_lower(0.5, 1.5)


def test_verdu_and_thm1():
    assert B.verdu_upper(0.5, 0.5).value == pytest.approx(2 * LN2 * 0.25, rel=1e-15)
    thm1 = B.thm1_upper(0.5, 0.5, 2 / 3).value
    assert thm1 == pytest.approx((2 * LN2 - 2 / 3) * 0.25, rel=1e-14)
    assert thm1 >= mp_kl(PAIR.p, PAIR.q)
    # the beta1 = 1 corner uses the limit of ln(1/b)/(1-b)
    assert B.verdu_upper(0.0, 1.0).value == 0.0
    assert B.thm1_upper(0.1, 1.0, 1.0).value == pytest.approx(0.0, abs=1e-15)


def test_upper_bounds_with_q_min():
    assert B.csiszar_talata_upper(0.5, 0.25).value == pytest.approx(1.0)
    assert B.corollary_upper(0.5, 0.25).value == pytest.approx(LN15, rel=1e-15)
    assert B.thm3_upper(0.5, 0.25, 2 / 3).value == pytest.approx(LN15 - 0.25 / 3, rel=1e-14)
    with pytest.raises(ZeroQMinError):
        B.csiszar_talata_upper(0.5, 0.0)


def test_tv_range():
    with pytest.raises(TVOutOfRangeError):
        B.pinsker_lower(2.5)


def test_euclidean():
    assert B.euclidean_upper(math.sqrt(0.125), 0.25).value == pytest.approx(LN15, rel=1e-15)
    # equality on a uniform reference
    pair = pair_from_arrays([0.9, 0.1], [0.5, 0.5])
    l2 = float(np.linalg.norm(pair.p - pair.q))
    assert B.euclidean_upper(l2, 0.5).value == pytest.approx(math.log(1.64), rel=1e-14)
    assert B.euclidean_upper(l2, 0.5).value == pytest.approx(float(renyi_array(pair.p, pair.q, 2)), rel=1e-14)


def test_beta2_floor():
    assert B.beta2_floor(0.25, 0.75, 0.1) == pytest.approx(0.2, rel=1e-14)
    assert B.beta2_floor(0.25, 0.75, 0.5) == 0.0


def test_general_chain():
    c = B.general_measure_chain(0.5, 0.5, 2 / 3)
    assert c.chi2_upper == pytest.approx(0.5)
    assert c.kl_upper == pytest.approx(LN15, rel=1e-14)
    assert c.kl_upper >= B.thm1_upper(0.5, 0.5, 2 / 3).value


@pytest.mark.parametrize(
    "alpha, expected",
    [(3.0, LN2), (math.inf, LN2), (1.5, LN15), (0.25, 0.06396451710473658), (0.75, 0.3429651081081644)],
)
def test_renyi_reverse_examples(alpha, expected):
    v = B.renyi_reverse_upper(alpha, 0.5, 0.5, 0.25).value
    assert v == pytest.approx(expected, rel=1e-12)
    assert v >= mp_renyi(PAIR.p, PAIR.q, alpha)


def test_renyi_reverse_quarter_is_min_of_candidates():
    f0 = -2 * math.log(0.75)
    f1 = (0.25 / 0.75) * (math.log(1 + 0.25 / 1.0) - 0.5 * 0.25 * 0.25)
    f2 = math.log(1 + 0.25 / 0.5) - 0.5 * 0.5 * 0.25
    assert f0 == pytest.approx(0.575364, abs=1e-6)
    assert f2 == pytest.approx(0.342965, abs=1e-6)
    assert B.renyi_reverse_upper(0.25, 0.5, 0.5, 0.25).value == pytest.approx(min(f0, f1, f2), rel=1e-14)


def test_tv_upper_from_kl():
    assert B.tv_upper_from_kl(0.0).value == 0.0
    assert B.tv_upper_from_kl(LN2).value == pytest.approx(math.sqrt(2), rel=1e-15)
    assert B.tv_upper_from_kl(mp_kl(PAIR.p, PAIR.q)).value == pytest.approx(0.7320508075688773, rel=1e-13)


# ---------------------------------------------------------------- TV lower bounds


def test_tv_lower_relinfo_running_example():
    value, eta = B.tv_lower_relinfo(PAIR)
    assert value == pytest.approx(5 / 12, rel=1e-14)
    assert eta == pytest.approx(LN15, rel=1e-14)


def test_tv_lower_two_param_running_example():
    value, e1, e2 = B.tv_lower_two_param(PAIR)
    assert value == pytest.approx(0.5, rel=1e-14)
    assert (e1, e2) == pytest.approx((LN2, LN15), rel=1e-14)


def test_tv_lower_identical():
    pair = pair_from_arrays([0.2, 0.8], [0.2, 0.8])
    assert B.tv_lower_relinfo(pair)[0] == 0.0
    assert B.tv_lower_two_param(pair)[0] == 0.0


def test_tv_lower_requires_mutual_continuity():
    with pytest.raises(NotMutuallyACError):
        B.tv_lower_relinfo(pair_from_arrays([1.0, 0.0], [0.5, 0.5]))


def test_attainment_construction_examples():
    pair = B.attainment_construction(LN2)
    np.testing.assert_allclose(pair.p, [2 / 3, 1 / 3], rtol=1e-15)
    np.testing.assert_allclose(pair.q, [1 / 3, 2 / 3], rtol=1e-15)
    assert B.tv_lower_relinfo(pair)[0] == pytest.approx(2 / 3, rel=1e-14)
    pair = B.attainment_construction(LN2, LN15)
    np.testing.assert_allclose(pair.p, [0.5, 0.5], rtol=1e-15)
    np.testing.assert_allclose(pair.q, [0.25, 0.75], rtol=1e-15)
    with pytest.raises(NonPositiveEtaError):
        B.attainment_construction(0.0)


def test_attainment_sinh_form():
    for eta in (0.1, 1.0, 4.0):
        pair = B.attainment_construction(eta)
        assert pair.p[0] == pytest.approx(math.expm1(eta) / (2 * math.sinh(eta)), rel=1e-14)
        assert pair.q[0] == pytest.approx(-math.expm1(-eta) / (2 * math.sinh(eta)), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 8.0), st.floats(0.01, 8.0))
def test_attainment_rel_info_and_tightness(e1, e2):
    pair = B.attainment_construction(e1, e2)
    np.testing.assert_allclose(pair.rel_info, [e1, -e2], rtol=1e-12)
    tv = float(tv_array(pair.p, pair.q))
    assert B.tv_lower_two_param(pair)[0] == pytest.approx(tv, rel=1e-12)


def test_two_param_dominates_one_param():
    rng = np.random.default_rng(4)
    for n in (2, 3, 8, 64):
        p = random_simplex(rng, n, 2000)
        q = random_simplex(rng, n, 2000)
        one, _ = B.tv_lower_relinfo_array(p, q)
        two, _, _ = B.tv_lower_two_param_array(p, q)
        tv = tv_array(p, q)
        assert np.all(two >= one - 1e-12)
        assert np.all(two <= tv * (1 + 1e-12))


# ---------------------------------------------------------------- equiprobable example


def test_equiprobable_golden():
    eb = B.equiprobable_example(1024, 0.5)
    assert eb.lower == pytest.approx(0.24606274606286909, rel=1e-13)
    assert eb.looser_lower == pytest.approx(0.05817652204779741, rel=1e-13)


def test_equiprobable_edges():
    eb = B.equiprobable_example(1024, 1.0)
    assert eb.lower == eb.upper == 0.0
    eb = B.equiprobable_example(1024, 1e-6)
    assert eb.upper / eb.lower == pytest.approx(math.sqrt(2), abs=1e-3)
    with pytest.raises(BadBetaError):
        B.equiprobable_example(8, 1.5)


# ---------------------------------------------------------------- table and report


def test_bound_table_matches_scalar_api():
    sampler = PairSampler(21, 3)
    p, q = sampler.draw_arrays(50)
    t = B.bound_table(p, q, balance_coefficient_batch(q))
    by = {(name, order): v for name, _, _, order, v in t.bounds}
    for i in range(50):
        pair = pair_from_arrays(p[i], q[i])
        tv = float(tv_array(p[i], q[i]))
        assert by[("thm1", None)][i] == pytest.approx(B.thm1_upper(tv, pair.beta1, pair.beta2).value, rel=1e-14)
        assert by[("thm3", None)][i] == pytest.approx(B.thm3_upper(tv, pair.q_min, pair.beta2).value, rel=1e-14)


def test_report_running_example():
    r = B.bound_report(PAIR)
    kl = r.exact["kl_pq"]
    assert kl == pytest.approx(0.14384103622589046, rel=1e-15)
    assert r.all_hold
    for b in r.bounds:
        if b.direction == B.UPPER and b.target == "KL":
            assert b.value >= kl
        if b.direction == B.LOWER and b.target == "TV":
            assert b.value <= 0.5 + 1e-15
    assert all(v for k, v in r.orderings.items())
    assert r.find("thm1").value == pytest.approx(0.179906923613306, rel=1e-13)
    assert r.find("renyi_reverse", 0.5).value == pytest.approx(0.19189355131420976, rel=1e-13)


def test_report_identical_pair():
    r = B.bound_report(pair_from_arrays([0.3, 0.7], [0.3, 0.7]))
    assert r.all_hold
    for b in r.bounds:
        if b.applicable:
            assert b.value == pytest.approx(0.0, abs=1e-15)


def test_report_null_p_atom():
    r = B.bound_report(pair_from_arrays([1.0, 0.0], [0.5, 0.5]))
    assert r.exact["kl_pq"] == pytest.approx(LN2, rel=1e-15)
    for name in ("verdu", "thm1"):
        b = r.find(name)
        assert b.applicable and b.value >= LN2
    assert not r.find("tv_lower_relinfo").applicable
    assert r.find("tv_lower_relinfo").reason
    assert r.all_hold


def test_report_json_schema_and_round_trip():
    pair = sample_pair(PairSampler(77, 5))
    d = json.loads(B.bound_report(pair).to_json())
    assert set(d) >= {"pair", "exact", "bounds", "orderings"}
    assert set(d["exact"]["renyi"]) == {"0.5", "2", "inf"}
    assert {"name", "direction", "target", "value", "applicable"} <= set(d["bounds"][0])
    np.testing.assert_array_equal(d["pair"]["P"], pair.p)
    np.testing.assert_array_equal(d["pair"]["Q"], pair.q)


def test_report_bits_scaling():
    r = B.bound_report(PAIR)
    nats, bits = r.to_dict("nats"), r.to_dict("bits")
    assert bits["exact"]["kl_pq"] == pytest.approx(nats["exact"]["kl_pq"] / LN2, rel=1e-15)
    assert bits["exact"]["tv"] == nats["exact"]["tv"]
    for bn, bb in zip(nats["bounds"], bits["bounds"]):
        scale = 1 / LN2 if bn["target"] in B.LOG_TARGETS else 1.0
        assert bb["value"] == pytest.approx(bn["value"] * scale, rel=1e-15)


def test_dumps_non_finite():
    assert json.loads(B.dumps({"x": math.inf, "y": -math.inf, "z": math.nan})) == {
        "x": "inf", "y": "-inf", "z": "nan"}


def test_soundness_small_sweep():
    for n in (2, 3, 8, 64):
        p, q = PairSampler(100 + n, n).draw_arrays(2000)
        t = B.bound_table(p, q, balance_coefficient_batch(q) if n <= 12 else np.full(2000, 0.5))
        for name, direction, target, order, values in t.bounds:
            assert np.all(B.bound_holds(direction, values, t.target_values(target, order))), name
        for key in B.PROVEN_ORDERINGS:
            assert np.all(t.orderings[key]), key
        kl = kl_array(p, q)
        assert np.all(kl >= 0)
