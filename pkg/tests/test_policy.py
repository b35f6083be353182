import json

import pytest

from schreierkit.ordinal import DEFAULT_POLICY, PLUS_ONE_POLICY, add, finite, fund_seq, parse_ordinal
from schreierkit.ordtree import f_value
from schreierkit.policy import (
    BoostPolicy,
    GrowthFn,
    boost_policy,
    check_chain_inclusion,
    check_inclusion,
    f_growth,
    interval_gap_scan,
    policy_from_json,
    shift_policy,
    uniform_bound_check,
)
from schreierkit.schreier import BoundExceededError, SchreierHandle, enumerate_family, g_value, member

from conftest import definitional_member, subsets

P = parse_ordinal
LIMITS = [P(s) for s in ("w", "w*2", "w*3", "w^2", "w^2+w", "w^2*2", "w^3")]


def test_growth_fn_basics():
    g = GrowthFn((1, 2, 2, 5))
    assert [g(n) for n in range(1, 8)] == [1, 2, 2, 5, 5, 5, 5]
    assert len(g) == 4
    assert GrowthFn.from_json("[0, 3]") == GrowthFn((0, 3))
    assert GrowthFn.from_function(lambda n: n * n, 3).values == (1, 4, 9)


@pytest.mark.parametrize("bad", [(), (2, 1), (-1, 0)])
def test_growth_fn_rejects(bad):
    with pytest.raises(ValueError):
        GrowthFn(bad)


@pytest.mark.parametrize("text", ['{"a": 1}', "[1, 2.5]", "[true]"])
def test_growth_fn_literal_rejects(text):
    with pytest.raises(ValueError):
        GrowthFn.from_json(text)


def test_growth_fn_domain():
    with pytest.raises(ValueError):
        GrowthFn((1,))(0)


def test_shift_zero_is_base():
    pol = shift_policy(DEFAULT_POLICY, GrowthFn((0,)))
    for beta in LIMITS:
        for m in range(1, 30):
            assert fund_seq(pol, beta, m) == fund_seq(DEFAULT_POLICY, beta, m)


def test_shift_examples():
    pol = shift_policy(DEFAULT_POLICY, GrowthFn.from_function(lambda m: m, 10))
    assert fund_seq(pol, P("w"), 3) == P("6")
    assert fund_seq(pol, P("w*2"), 2) == P("w+4")


@pytest.mark.parametrize("base", [DEFAULT_POLICY, PLUS_ONE_POLICY], ids=lambda p: p.name)
def test_shifted_policy_stays_a_fundamental_sequence(base):
    pol = shift_policy(base, GrowthFn.from_function(lambda m: m // 2, 40))
    for beta in LIMITS:
        prev = None
        for m in range(1, 40):
            t = fund_seq(pol, beta, m)
            assert t.is_successor and t < beta
            assert prev is None or prev < t
            prev = t


def test_boost_examples():
    assert boost_policy(DEFAULT_POLICY, {}) is DEFAULT_POLICY
    pol = boost_policy(DEFAULT_POLICY, {P("w"): GrowthFn.from_function(lambda m: 2 * m, 10)})
    assert isinstance(pol, BoostPolicy)
    assert fund_seq(pol, P("w"), 4) == P("12")
    assert fund_seq(pol, P("w*2"), 4) == P("w+4")
    for n in range(1, 11):
        assert f_value(n, P("w"), pol) >= 2 * n
    sq = boost_policy(DEFAULT_POLICY, {P("w"): GrowthFn.from_function(lambda m: m * m, 10)})
    assert f_value(4, P("w"), sq) >= 16


def test_boost_rejects_non_limit_keys():
    with pytest.raises(ValueError):
        boost_policy(DEFAULT_POLICY, {P("w+1"): GrowthFn((1,))})


def test_boost_conclusion_nested():
    h = {P("w"): GrowthFn.from_function(lambda m: 2 * m, 8), P("w*2"): GrowthFn.from_function(lambda m: m * m, 8)}
    pol = boost_policy(DEFAULT_POLICY, h)
    for beta, hb in h.items():
        for n in range(1, 9):
            assert f_value(n, beta, pol) >= hb(n)


def test_policy_from_json():
    assert policy_from_json({}) is DEFAULT_POLICY
    assert policy_from_json({"base": "plus_one"}) is PLUS_ONE_POLICY
    pol = policy_from_json({"shift": [1, 2, 3], "boost": {"w": [5, 5]}})
    # boost wraps shift: w_2 = (2 + 2) + 5
    assert fund_seq(pol, P("w"), 2) == P("9")
    for bad in ({"base": "nope"}, {"extra": 1}, {"boost": {"w+1": [1]}}):
        with pytest.raises(ValueError):
            policy_from_json(bad)


def test_custom_policy_membership_matches_definition():
    pol = policy_from_json(json.loads('{"shift": [1, 1, 2, 3], "boost": {"w^2": [2]}}'))
    for alpha in (P("w"), P("w*2"), P("w^2")):
        h = SchreierHandle(alpha, pol)
        for e in subsets(9):
            assert member(e, h) == definitional_member(e, alpha, pol)


def test_check_inclusion():
    assert check_inclusion(P("1"), P("2"), 10) == []
    missing = check_inclusion(P("2"), P("1"), 6)
    assert (2, 3, 4) in missing
    assert missing == sorted(enumerate_family(P("2"), 6) - enumerate_family(P("1"), 6), key=lambda s: (len(s), s))
    with pytest.raises(BoundExceededError):
        check_inclusion(P("1"), P("2"), 15)


def test_chain_inclusion_examples():
    rep = check_chain_inclusion(DEFAULT_POLICY, P("w"), 3, 8)
    assert rep["all_hold"] and [s["m"] for s in rep["steps"]] == [1, 2]
    rep = check_chain_inclusion(PLUS_ONE_POLICY, P("w^3"), 1, 8)
    assert rep["all_hold"] and rep["steps"] == []
    with pytest.raises(ValueError):
        check_chain_inclusion(DEFAULT_POLICY, P("w+1"), 3, 8)


@pytest.mark.parametrize("policy", [DEFAULT_POLICY, PLUS_ONE_POLICY], ids=lambda p: p.name)
def test_chain_inclusion_recorded_against_oracle(policy):
    rep = check_chain_inclusion(policy, P("w^2"), 3, 10)
    for s in rep["steps"]:
        lo, hi = P(s["beta_m"]), P(s["beta_m_plus_1"])
        fresh = {e for e in subsets(10) if definitional_member(e, lo, policy)} - \
                {e for e in subsets(10) if definitional_member(e, hi, policy)}
        assert s["holds"] == (not fresh)
        assert s["counterexample_count"] == len(fresh)


def test_uniform_bound_examples():
    L = 12
    rep = uniform_bound_check([GrowthFn((1,) * L)], GrowthFn.from_function(lambda n: n + 1, L))
    assert rep["rows"][0]["N_h"] == 0 and rep["all_bounded"]
    ident = GrowthFn.from_function(lambda n: n, L)
    rep = uniform_bound_check([ident], ident)
    assert rep["rows"][0]["bounded"] is False and rep["rows"][0]["N_h"] is None


def test_uniform_bound_tabulated_f():
    L = 10
    A = [P(s) for s in ("3", "w", "w+2", "w*2", "w^2")]
    H = [f_growth(a, L) for a in A]
    g = GrowthFn.from_function(lambda n: max(h(n) for h in H) + 1, L)
    rep = uniform_bound_check(H, g)
    assert rep["all_bounded"] and all(r["N_h"] == 0 for r in rep["rows"])


def test_uniform_bound_last_crossing():
    # h < g at n = 2 and n = 4 only, so the last failure is n = 3
    h = GrowthFn((2, 3, 5, 5))
    g = GrowthFn((1, 4, 4, 9))
    assert uniform_bound_check([h], g)["rows"][0]["N_h"] == 3
    with pytest.raises(ValueError):
        uniform_bound_check([GrowthFn((1, 2))], GrowthFn((1, 2, 3)))


def test_interval_gap_examples():
    row = interval_gap_scan([P("0")], n_max=5)[4]
    assert row == {"n": 5, "max_G": 5, "gap": [5, 6], "certified": True}
    row = interval_gap_scan([P("1"), P("2")], n_max=2)[1]
    assert row["max_G"] == 7 and row["gap"] == [2, 8] and row["certified"] is True
    row = interval_gap_scan([P("w")], n_max=3)[2]
    assert row["max_G"] == "Overflow"
    assert g_value(3, SchreierHandle(P("w"))) is g_value(3, SchreierHandle(P("3")))


def test_interval_gap_is_certified_by_the_definition():
    for row in interval_gap_scan([P("1"), P("2"), P("w")], n_max=2):
        e = tuple(range(row["gap"][0], row["gap"][1] + 1))
        for a in (P("1"), P("2"), P("w")):
            assert not definitional_member(e, a)


def test_inclusion_propagates_to_successors():
    pairs = [(P("0"), P("1")), (P("1"), P("2")), (P("w"), P("w+1")), (P("w"), P("w*2")), (P("2"), P("w"))]
    for a, b in pairs:
        if check_inclusion(a, b, 10):
            continue
        for k in (1, 2):
            assert check_inclusion(add(a, finite(k)), add(b, finite(k)), 10) == []
