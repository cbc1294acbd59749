"""Arbitrary-report-space sensitivity: distances, pads, bounds, minimax.

The case-study values (midpoints, floors, ratios) are small enough to
compute by hand from the definitions; the table-minimax runs are certified
by their own dual gap and checked against the sensitivity sandwich.
"""

from collections import Counter

import pytest
from hypothesis import given, strategies as st

from robustagg import (
    DomainError,
    OptTable,
    TableEntry,
    brute_force_table_minimax,
    ci_informative_table,
    confusion_padding,
    fooling_scenario,
    linear_family_table,
    naive_aggregator,
    naive_forecast,
    regret_lower_bound_instance,
    report_distance,
    sensitive_parameter,
    sensitivity_ratio_check,
)
from robustagg.general_model import ReportHistogram, _as_multiset


# --------------------------------------------------------------- distance

def test_distance_examples():
    assert report_distance([0, 0, 1], [0, 1, 1]) == 1
    assert report_distance("ab", "ba") == 0
    assert report_distance(["H", "H"], ["L", "L"]) == 2
    with pytest.raises(DomainError):
        report_distance([0], [0, 1])


@given(st.lists(st.sampled_from("abc"), min_size=4, max_size=4),
       st.lists(st.sampled_from("abc"), min_size=4, max_size=4),
       st.lists(st.sampled_from("abc"), min_size=4, max_size=4))
def test_distance_is_a_metric(x, y, z):
    assert report_distance(x, y) == report_distance(y, x)
    assert (report_distance(x, y) == 0) == (sorted(x) == sorted(y))
    assert report_distance(x, z) <= report_distance(x, y) + \
        report_distance(y, z)


# ---------------------------------------------------------------- padding

def test_padding_single_swap():
    pads = confusion_padding(("L",), ("H",), 1)
    assert pads == (("H",), ("L",))


def test_padding_merges_histograms():
    x1, x2 = ["a", "a", "b"], ["a", "b", "b"]
    pads = confusion_padding(x1, x2, 2)
    assert pads is not None
    merged1 = ReportHistogram.of(tuple(x1) + pads[0])
    merged2 = ReportHistogram.of(tuple(x2) + pads[1])
    assert merged1 == merged2


def test_padding_insufficient_budget():
    assert confusion_padding(["H", "H"], ["L", "L"], 1) is None


def test_padding_zero_budget_identical():
    pads = confusion_padding(["a", "b"], ["b", "a"], 0)
    assert pads == ((), ())


# ------------------------------------------------------------- sensitivity

def test_sensitivity_insensitive_family():
    t = OptTable((TableEntry("s", ("a", "a"), 0.5, 1.0),))
    rep = sensitive_parameter(t, 2)
    assert rep.S == 0.0 and rep.witness is None
    assert rep.lower_bound == 0.0 and rep.upper_bound == 0.0


def test_sensitivity_informative_expert():
    rep = sensitive_parameter(ci_informative_table(2, 0.5), 1)
    assert rep.S == 1.0
    assert rep.alpha == 0.5
    assert rep.lower_bound == 0.125 and rep.upper_bound == 1.0


def test_sensitivity_linear_family():
    for n, beta, k in [(5, 0.0, 1), (5, 0.5, 2), (8, 0.3, 3)]:
        rep = sensitive_parameter(linear_family_table(n, beta, 0.5), k)
        assert abs(rep.S - (1 - beta) * k / n) < 1e-12


# ------------------------------------------------------------------ naive

def test_naive_no_adversaries_reproduces_benchmark():
    t = linear_family_table(5, 0.5, 0.5)
    f = naive_aggregator(t, 0)
    for e in t.entries:
        assert abs(f[e.x] - e.opt) < 1e-12


def test_naive_midpoint_example():
    t = OptTable((TableEntry("s1", ("x", "y"), 0.2, 1.0),
                  TableEntry("s2", ("x", "x"), 0.6, 1.0)))
    # both truthful multisets fit inside the observation: hull midpoint
    assert abs(naive_forecast(t, 1, ("x", "x", "y")) - 0.4) < 1e-12


def test_naive_within_sensitivity_of_benchmark():
    for t, k in [(linear_family_table(5, 0.5, 0.5), 2),
                 (ci_informative_table(3, 0.4), 1)]:
        s = sensitive_parameter(t, k).S
        f = naive_aggregator(t, k)
        for obs, val in f.items():
            for e in t.entries:
                big, small = Counter(obs), Counter(e.x)
                if all(big[v] >= c for v, c in small.items()):
                    assert abs(val - e.opt) <= s + 1e-12


def test_naive_rejects_inconsistent_observation():
    t = ci_informative_table(2, 0.5)
    with pytest.raises(DomainError):
        naive_forecast(t, 1, ("zzz", "zzz", "zzz"))
    with pytest.raises(DomainError):
        naive_forecast(t, 1, ("u",))      # wrong size


# ------------------------------------------------------------ lower bound

def test_lower_bound_equal_weight_witness():
    desc, floor = regret_lower_bound_instance(ci_informative_table(2, 0.5), 1)
    assert abs(floor - 0.125) < 1e-12
    # witness events have equal probability, so the closed-form best
    # response to the padded pair hits the (alpha/4) S^2 floor exactly
    assert abs(desc["exact_pair_min"] - floor) < 1e-12
    assert sorted(desc["weights"]) == [0.5, 0.5]


def test_lower_bound_degenerate():
    t = OptTable((TableEntry("s", ("a",), 0.5, 1.0),))
    desc, floor = regret_lower_bound_instance(t, 1)
    assert floor == 0.0 and "note" in desc


# -------------------------------------------------------------- ratio check

def test_ratio_linear_family():
    ratio, floor = sensitivity_ratio_check(linear_family_table(5, 0.0, 0.5), 1)
    assert abs(ratio - 0.2) < 1e-12
    assert abs(floor - 1 / 6) < 1e-12
    assert ratio >= floor


def test_ratio_full_budget():
    t = linear_family_table(4, 0.5, 0.5)
    ratio, floor = sensitivity_ratio_check(t, 4)
    assert ratio == 1.0 and abs(floor - 0.5) < 1e-12


def test_ratio_informative_expert():
    ratio, floor = sensitivity_ratio_check(ci_informative_table(2, 0.5), 1)
    assert ratio == 1.0 and abs(floor - 1 / 3) < 1e-12


def test_ratio_chaining_floor_on_count_tables():
    for n in (4, 5, 8):
        t = linear_family_table(n, 0.25, 0.5)
        for k in range(1, n + 1):
            ratio, floor = sensitivity_ratio_check(t, k)
            assert ratio >= floor - 1e-12


def test_ratio_errors():
    with pytest.raises(DomainError):
        sensitivity_ratio_check(linear_family_table(4, 0.5, 0.5), 0)
    flat = OptTable((TableEntry("s", ("a", "b"), 0.5, 0.6),
                     TableEntry("s", ("b", "b"), 0.5, 0.4)))
    with pytest.raises(DomainError):
        sensitivity_ratio_check(flat, 1)


# ---------------------------------------------------------------- fooling

def test_fooling_two_states():
    sc = fooling_scenario(2, 1)
    assert abs(sc.floor - 0.25) < 1e-15
    assert sc.per_state_observed[0] == sc.per_state_observed[1]
    assert abs(sc.regret_of_forecast([0.5, 0.5]) - 0.25) < 1e-15
    assert sc.regret_of_forecast([1.0, 0.0]) >= sc.floor
    assert sc.regret_of_forecast([0.3, 0.7]) >= sc.floor


def test_fooling_four_states():
    sc = fooling_scenario(4, 3)
    hists = [ReportHistogram.of(x) for x in sc.per_state_observed]
    assert all(h == hists[0] for h in hists)
    assert abs(sc.floor - 0.5625) < 1e-15
    assert abs(sc.regret_of_forecast([0.25] * 4) - sc.floor) < 1e-15


def test_fooling_errors():
    with pytest.raises(DomainError):
        fooling_scenario(4, 2)
    with pytest.raises(DomainError):
        fooling_scenario(1, 3)
    sc = fooling_scenario(2, 1)
    with pytest.raises(DomainError):
        sc.regret_of_forecast([0.7, 0.7])


# ------------------------------------------------------------------ tables

def test_table_json_round_trip():
    t = linear_family_table(4, 0.3, 0.6)
    again = OptTable.from_json(t.to_json())
    assert again.entries == t.entries


def test_table_properties():
    t = ci_informative_table(2, 0.4)
    assert t.report_size == 2
    assert t.alphabet == ("e0", "e1", "u")
    assert t.structures == ("ci",)
    assert abs(t.alpha() - 0.4) < 1e-15


def test_table_validation():
    e = TableEntry("s", ("a",), 0.5, 0.5)
    with pytest.raises(DomainError):
        OptTable((e, e))                           # duplicate event
    with pytest.raises(DomainError):
        OptTable(())                               # empty
    with pytest.raises(DomainError):
        OptTable((TableEntry("s", ("a",), 1.5, 1.0),))
    with pytest.raises(DomainError):
        OptTable((TableEntry("s", ("a",), 0.5, 0.7),))
    with pytest.raises(DomainError):
        OptTable((TableEntry("s", ("a",), 0.5, 1.0),
                  TableEntry("r", ("a", "b"), 0.5, 1.0)))


# ---------------------------------------------------------------- minimax

def test_table_minimax_informative_expert():
    # merging the two witness events forces the prior forecast there
    res = brute_force_table_minimax(ci_informative_table(2, 0.5), 1)
    assert abs(res.value - 0.25) < 1e-4
    assert res.gap <= 1e-4
    merged = _as_multiset(("e0", "e1", "u"))
    assert abs(res.forecasts[merged] - 0.5) < 1e-3


def test_table_minimax_sandwich():
    for t, k in [(linear_family_table(4, 0.5, 0.5), 1),
                 (ci_informative_table(2, 0.5), 1)]:
        rep = sensitive_parameter(t, k)
        res = brute_force_table_minimax(t, k)
        assert res.value >= rep.lower_bound - 1e-6
        assert res.value <= rep.upper_bound + 1e-6
        assert res.value >= res.lower_bound - 1e-9
