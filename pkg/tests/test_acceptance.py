"""Acceptance gate: every criterion at its pinned tolerance.

Each test prints one pass/fail line.  The comparison of the rotation action
with the Kronecker-block monodromy model for (2, 3, 5) is asserted exactly
as stated and fails: with an odd number of exponents the block model differs
from the rotation action on homology by an overall sign (the computed
rotation polynomial is the Coxeter polynomial of E8), so neither the model's
characteristic polynomial nor its reciprocal can match.  The failure is
deliberate and documented; do not loosen it.
"""

import json

import pytest

from brieskorn_lab import acceptance
from brieskorn_lab.cli import main

SEED = 42


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {result.number:02d} {result.name}: {status}")
    for row in result.rows:
        if not row["pass"]:
            print(f"    failing row: {row['name']} -> {row['value']}")


def test_criterion_01_calibration():
    result = acceptance.run_criterion(1, SEED)
    _report(result)
    assert result.passed


def test_criterion_02_interpolation_family():
    result = acceptance.run_criterion(2, SEED)
    _report(result)
    assert result.passed


def test_criterion_03_wedge_identity():
    result = acceptance.run_criterion(3, SEED)
    _report(result)
    assert result.passed


def test_criterion_04_level_contact():
    result = acceptance.run_criterion(4, SEED)
    _report(result)
    assert result.passed


def test_criterion_05_covering():
    result = acceptance.run_criterion(5, SEED)
    _report(result)
    assert result.passed


def test_criterion_06_reeb_suite():
    result = acceptance.run_criterion(6, SEED)
    _report(result)
    assert result.passed


def test_criterion_07_epsilon_search():
    result = acceptance.run_criterion(7, SEED)
    _report(result)
    assert result.passed


def test_criterion_08_isotopy_solver():
    result = acceptance.run_criterion(8, SEED)
    _report(result)
    assert result.passed


def test_criterion_09_monodromy_exact():
    result = acceptance.run_criterion(9, SEED)
    _report(result)
    assert result.passed


def test_criterion_10_homology_ranks_and_planar_rotation():
    result = acceptance.run_criterion(10, SEED)
    _report(result)
    ranks_rows = [r for r in result.rows if r["name"].startswith("homology")]
    assert ranks_rows and all(r["pass"] for r in ranks_rows)
    even = next(r for r in result.rows if r["name"] == "rotation_char_match[(3, 2)]")
    assert even["pass"]


def test_criterion_10_rotation_match_for_2_3_5():
    result = acceptance.run_criterion(10, SEED)
    row = next(r for r in result.rows if r["name"] == "rotation_char_match[(2, 3, 5)]")
    print(f"ACCEPTANCE 10 rotation relation for (2,3,5): {row['value']['relation']}")
    # Stated criterion: the rotation char poly equals the model's or its
    # reciprocal.  The computed relation is "negated" (odd factor count), so
    # this assertion fails by design; see the module docstring.
    assert row["pass"], (
        "rotation char poly for (2,3,5) is the negated model "
        f"({row['value']['rotation']} vs {row['value']['model']}); "
        "equal-or-reciprocal comparison cannot hold for an odd number of exponents"
    )


def test_criterion_11_binding_components():
    result = acceptance.run_criterion(11, SEED)
    _report(result)
    assert result.passed


def test_criterion_12_negative_weight():
    result = acceptance.run_criterion(12, SEED)
    _report(result)
    assert result.passed


def test_criterion_13_determinism(tmp_path):
    first = tmp_path / "all1.json"
    second = tmp_path / "all2.json"
    code1 = main(["all", "--seed", str(SEED), "--out", str(first)])
    code2 = main(["all", "--seed", str(SEED), "--out", str(second)])
    identical = first.read_bytes() == second.read_bytes()
    print(f"ACCEPTANCE 13 determinism: {'PASS' if identical else 'FAIL'}")
    assert identical
    assert code1 == code2
    payload = json.loads(first.read_text())
    assert payload["seed"] == SEED
    assert payload["config"]["seed"] == SEED
    criterion_rows = [r for r in payload["results"] if r["name"].startswith("criterion_") and "[" in r["name"] and "." not in r["name"]]
    assert len(criterion_rows) == 12
