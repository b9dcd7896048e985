from __future__ import annotations

import pytest

from artifact import families
from artifact.families import FamilySpec
from artifact.verify import (
    Check,
    cover_checks,
    family_check,
    forward_checks,
    gamma12_check,
    known_property_specs,
    ledger,
    probe_checks,
)


def test_check_line_format():
    assert Check("x/1", True, "fine").line() == "PASS x/1 fine"
    assert Check("x/2", False).line() == "FAIL x/2"


def test_ledger_header_and_order():
    checks = [Check("b", True, "ok"), Check("a", False, "bad")]
    text = ledger(sorted(checks, key=lambda c: c.check_id), seed=3, max_order=40, max_m=6)
    lines = text.splitlines()
    assert lines[0] == "# verify-all seed=3 max_order=40 max_m=6"
    assert lines[1] == "# 2 checks, 1 failed"
    assert lines[2:] == ["FAIL a bad", "PASS b ok"]


def test_cover_checks_pass_and_are_seeded():
    a = cover_checks(seed=5, n_data=10, n_walks=100)
    b = cover_checks(seed=5, n_data=10, n_walks=100)
    assert [c.line() for c in a] == [c.line() for c in b]
    assert all(c.ok for c in a), [c.line() for c in a if not c.ok]


@pytest.mark.parametrize("spec", known_property_specs()[:12], ids=str)
def test_family_checks_pass(spec):
    assert family_check(spec).ok


def test_broken_constructor_is_reported(monkeypatch):
    def broken(m):
        raise RuntimeError("boom")

    monkeypatch.setitem(families._BUILDERS, "Prism", (1, broken))
    check = family_check(FamilySpec("Prism", (5,)))
    assert not check.ok and "boom" in check.details


def test_wrong_graph_is_reported(monkeypatch):
    monkeypatch.setitem(families._BUILDERS, "Moeb", (1, lambda n: families.prism(n // 2)))
    check = family_check(FamilySpec("Moeb", (8,)))
    assert not check.ok and check.line().startswith("FAIL 2-family/Moeb(8)")


def test_gamma12_check():
    assert gamma12_check(5).ok


def test_forward_and_probe_checks():
    fw = forward_checks(max_order=40)
    assert fw and all(c.ok for c in fw)
    assert {c.check_id for c in fw} >= {"5-forward/n=022", "5-forward/n=040"}
    pr = probe_checks()
    assert len(pr) == 20 and all(c.ok for c in pr)
