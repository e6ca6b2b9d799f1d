"""The check registry: names, statuses, and honest degradation under budgets."""

from fractions import Fraction

import pytest

from toeplitzlab import (
    REGISTRY_NAMES,
    UnknownCheck,
    registry_self_test,
    run_all,
    run_check,
    zero_mass_closed_form,
    zero_mass_lower_bound,
)
from toeplitzlab.cells import mu_zero_set
from toeplitzlab.verify import good_bound, good_set


def test_registry_names_are_stable():
    assert REGISTRY_NAMES == (
        "decom", "j-recursion", "per-eq", "good-relation", "good-patches",
        "t1t2", "partitions-c", "linking", "good-ds", "u-in-y", "containings",
        "z-identity", "an-det", "uns-bound", "measure-1-trend")
    assert registry_self_test().status == "Pass"


def test_unknown_check_is_rejected(threeadic5):
    with pytest.raises(UnknownCheck):
        run_check(threeadic5, "nope")


def test_alias_keeps_requested_name(threeadic5):
    res = run_check(threeadic5, "j-sub")
    assert res.name == "j-sub"
    assert res.status == "Pass"


def test_suite_threeadic_depth5(threeadic5):
    report = run_all(threeadic5)
    assert report.all_ok
    by_name = {r.name: r for r in report.results}
    assert by_name["linking"].status == "Inconclusive"  # blocks 0 and 1 fail
    assert by_name["u-in-y"].status == "Vacated"
    for w in by_name["u-in-y"].witnesses:
        assert w["contained"] is True  # scanned anyway, no violation found
    for name in ("decom", "j-recursion", "per-eq", "good-relation",
                 "good-patches", "t1t2", "partitions-c", "good-ds",
                 "containings", "z-identity", "an-det", "uns-bound"):
        assert by_name[name].status == "Pass", name
    assert by_name["measure-1-trend"].status in ("Pass", "Inconclusive")


def test_suite_irregular_all_pass(irregular):
    report = run_all(irregular)
    assert report.all_ok
    by_name = {r.name: r for r in report.results}
    assert all(r.status == "Pass" for r in report.results), [
        (r.name, r.status) for r in report.results if r.status != "Pass"]
    # the block is still open, so the patch checks pass vacuously
    assert "vacuous" in by_name["t1t2"].scope or by_name["t1t2"].witnesses == []
    assert by_name["linking"].status == "Pass"
    assert by_name["measure-1-trend"].status == "Pass"


def test_good_set_matches_reference(threeadic, oracle3):
    assert set(good_set(threeadic, 1, 4)) == set(oracle3.good_set(1, 4)) \
        == {36, 45, 63, 72}
    assert set(good_set(threeadic, 1, 3)) == {9, 18}
    assert len(good_set(threeadic, 1, 9)) == 128
    assert len(good_set(threeadic, 4, 9)) == 16


def test_good_bound(threeadic, oracle3):
    for n, m in ((1, 4), (1, 9), (4, 9)):
        b = good_bound(threeadic.tower, n, m)
        assert b == oracle3.good_bound(n, m)
        assert len(good_set(threeadic, n, m)) >= b


def test_zero_mass_closed_form(threeadic):
    # the step-(m+1) plant is already visible inside D_m
    for n, m in ((1, 3), (1, 4), (2, 4), (1, 9), (4, 9)):
        assert zero_mass_closed_form(threeadic, n, m) == \
            mu_zero_set(threeadic, n, m)
    assert zero_mass_closed_form(threeadic, 1, 3) == Fraction(7, 9)
    assert zero_mass_closed_form(threeadic, 1, 4) == Fraction(23, 27)


def test_zero_mass_lower_bounds(threeadic, irregular):
    # trend bounds must sit below the exact masses they certify
    lb = zero_mass_lower_bound(threeadic, 1)
    assert lb <= mu_zero_set(threeadic, 1, 9)
    assert lb == Fraction(16646, 19683)
    lbi = zero_mass_lower_bound(irregular, 1)
    assert lbi > Fraction(99, 100)


def test_containings_degrades_honestly(threeadic):
    res = run_check(threeadic, "containings", {"budget": 100})
    assert res.status == "Inconclusive"
    assert res.witnesses == [] or all(
        w.get("mode") != "exhaustive" for w in res.witnesses)


def test_uns_bound_witnesses_strict(threeadic):
    res = run_check(threeadic, "uns-bound")
    assert res.status == "Pass"
    masses = {(w["n"], w["m"]): w["mu"] for w in res.witnesses}
    assert masses[(1, 4)] == Fraction(5, 27)
    assert masses[(1, 9)] == Fraction(1175, 6561)
    assert masses[(4, 9)] == Fraction(41, 6561)
    assert all(w["mu"] >= w["bound"] for w in res.witnesses)
    assert all(w["strict"] for w in res.witnesses)


def test_good_ds_first_witnesses(threeadic, oracle3):
    res = run_check(threeadic, "good-ds")
    assert res.status == "Pass"
    by_nk = {w["n_k"]: w for w in res.witnesses}
    assert by_nk[4]["witnesses"] == 26
    assert by_nk[9]["witnesses"] == 6560
    assert by_nk[4]["sample"] == [(1, 0), (2, 0), (3, 4)]
    ref = oracle3.good_ds_witnesses(4)
    assert all(g is not None for g in ref.values())
    for w, g_w in by_nk[4]["sample"]:
        assert ref[w] is not None


def test_result_json_shapes(threeadic5):
    report = run_all(threeadic5)
    data = report.to_json()
    assert data["all_ok"] is True
    names = [r["name"] for r in data["results"]]
    assert names[0] == "registry"
    assert set(REGISTRY_NAMES) <= set(names)
    text = report.render()
    assert "linking" in text and "Inconclusive" in text
