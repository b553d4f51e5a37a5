"""CLI surface: schemas, exit codes, determinism, config files."""

import json

import pytest

from brieskorn_lab import __version__
from brieskorn_lab.cli import main, read_config_file, thread_cap

FAST = ["--samples", "30", "--seed", "42"]


def run_cli(args, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, out


class TestSubcommands:
    def test_verify_contact(self, tmp_path):
        code, out = run_cli(["verify-contact", "--exponents", "2,2,2", "--s", "1.0"] + FAST, tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["check"] == "verify-contact"
        assert payload["pass"] is True
        assert payload["tool"] == "brieskorn-lab"
        assert payload["version"] == __version__
        assert payload["config"]["exponents"] == [2, 2, 2]
        assert payload["seed"] == 42
        names = {row["name"] for row in payload["results"]}
        assert {"min_value", "max_residual", "sign_consistent"} <= names

    def test_verify_family_both_kinds(self, tmp_path):
        code, _ = run_cli(
            ["verify-family", "--exponents", "2,3,4", "--family", "interpolation",
             "--t-grid", "0,0.5,1"] + FAST,
            tmp_path,
        )
        assert code == 0
        code, _ = run_cli(
            ["verify-family", "--exponents", "2,2,2", "--family", "level",
             "--t-grid", "0.5,1"] + FAST,
            tmp_path,
        )
        assert code == 0

    def test_wedge_identity(self, tmp_path):
        code, out = run_cli(["wedge-identity", "--exponents", "2,2,2", "--samples", "15",
                             "--seed", "42"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        assert any(row["name"] == "degenerate_locus" for row in payload["results"])

    def test_epsilon_search(self, tmp_path):
        code, out = run_cli(["epsilon-search", "--exponents", "2,2,2"] + FAST, tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        star = next(r for r in payload["results"] if r["name"] == "eps_star")
        assert star["value"] == 1.0

    def test_pullback_and_s_derivative(self, tmp_path):
        code, _ = run_cli(["pullback", "--exponents", "2,2,2"] + FAST, tmp_path)
        assert code == 0
        code, out = run_cli(["s-derivative", "--exponents", "2,2,2", "--samples", "8",
                             "--seed", "42"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        names = {row["name"] for row in payload["results"]}
        assert "max_deviation_from_first_variation" in names
        assert "max_deviation_from_angular_form" in names

    def test_negative_weight_with_exploration(self, tmp_path):
        code, out = run_cli(
            ["negative-weight", "--exponents", "3,2,2", "--big-c", "100",
             "--explore", "2,3,4;3,4,5", "--c-grid", "10,100"] + FAST,
            tmp_path,
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert any(row["name"] == "exploratory_witnesses" for row in payload["results"])

    def test_openbook_checks(self, tmp_path):
        code, out = run_cli(["openbook-checks", "--exponents", "3,2,2", "--samples", "40",
                             "--seed", "42"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        names = {row["name"] for row in payload["results"]}
        assert {"reeb_pairing_dev", "page_pfaffian_min", "cover_phase_power_dev",
                "binding", "radial_profile_monotone"} <= names

    def test_monodromy_report(self, tmp_path):
        code, out = run_cli(["monodromy", "--exponents", "3,2"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        rows = {row["name"]: row for row in payload["results"]}
        assert rows["milnor_number"]["value"] == 2
        assert rows["matrix"]["value"] == [["1", "1"], ["-1", "0"]]
        assert rows["char_poly"]["value"] == ["1", "-1", "1"]

    def test_join_homology_report(self, tmp_path):
        code, out = run_cli(["join-homology", "--exponents", "2,2,2"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        rows = {row["name"]: row for row in payload["results"]}
        assert rows["ranks"]["value"] == [0, 0, 1]
        assert rows["torsion_free"]["value"] is True

    def test_rotation_map_even_tuple_passes(self, tmp_path):
        code, out = run_cli(["rotation-map", "--exponents", "3,2"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        row = next(r for r in payload["results"] if r["name"] == "model_comparison")
        assert row["value"]["relation"] == "equal"

    def test_rotation_map_records_sign_defect(self, tmp_path):
        # the asserted equal-or-reciprocal comparison fails for an odd number
        # of exponents; the run exits 1 and records the negated relation
        code, out = run_cli(["rotation-map", "--exponents", "2,3,5"], tmp_path)
        assert code == 1
        payload = json.loads(out.read_text())
        row = next(r for r in payload["results"] if r["name"] == "model_comparison")
        assert row["value"]["relation"] == "negated"
        assert payload["pass"] is False

    def test_rotation_map_non_coprime_is_informational(self, tmp_path):
        code, out = run_cli(["rotation-map", "--exponents", "2,2,2"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        row = next(r for r in payload["results"] if r["name"] == "model_comparison")
        assert row["value"]["asserted"] is False


class TestReportFormats:
    def test_json_complex_encoding(self, tmp_path):
        code, out = run_cli(["verify-contact", "--exponents", "2,2", "--samples", "10",
                             "--seed", "1"], tmp_path)
        assert code == 0
        payload = json.loads(out.read_text())
        witness = next(r for r in payload["results"] if r["name"] == "min_value")["witness"]
        point = witness[0]["point"]
        assert all(isinstance(c, list) and len(c) == 2 for c in point)

    def test_csv_format(self, tmp_path):
        out = tmp_path / "report.csv"
        code = main(["monodromy", "--exponents", "3,2", "--out", str(out), "--format", "csv"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "check,name,value,threshold,pass,witness"
        assert any(line.startswith("monodromy,milnor_number") for line in lines)

    def test_stdout_when_no_out(self, capsys):
        code = main(["monodromy", "--exponents", "3,2"])
        assert code == 0
        captured = capsys.readouterr()
        assert '"check": "monodromy"' in captured.out


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ["verify-contact", "--exponents", "2,2,2", "--samples", "40", "--seed", "42"],
            ["epsilon-search", "--exponents", "3,2,2", "--samples", "30", "--seed", "7"],
            ["monodromy", "--exponents", "2,3,5"],
        ],
    )
    def test_reruns_are_byte_identical(self, args, tmp_path):
        _, first = run_cli(args, tmp_path, "a.json")
        _, second = run_cli(args, tmp_path, "b.json")
        assert first.read_bytes() == second.read_bytes()


class TestConfigHandling:
    def test_invalid_exponent_list_exits_two(self):
        with pytest.raises(SystemExit) as err:
            main(["verify-contact", "--exponents", "banana"])
        assert err.value.code == 2

    def test_missing_exponents_is_config_error(self, capsys):
        assert main(["verify-contact"]) == 2
        assert "exponents" in capsys.readouterr().err

    def test_negative_seed_rejected(self):
        assert main(["monodromy", "--exponents", "3,2", "--seed", "-1"]) == 2

    def test_config_file_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("exponents = 3,2\nseed = 9  # inline comment\n")
        out = tmp_path / "r.json"
        code = main(["monodromy", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["exponents"] == [3, 2]
        assert payload["seed"] == 9

    def test_cli_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("exponents = 3,2\nseed = 9\n")
        out = tmp_path / "r.json"
        code = main(["monodromy", "--config", str(cfg), "--seed", "4", "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["seed"] == 4

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mystery = 1\n")
        with pytest.raises(ValueError):
            read_config_file(str(cfg))

    def test_thread_cap(self, monkeypatch):
        monkeypatch.delenv("BRIESKORN_LAB_THREADS", raising=False)
        assert thread_cap() == 1
        monkeypatch.setenv("BRIESKORN_LAB_THREADS", "4")
        assert thread_cap() == 4
        monkeypatch.setenv("BRIESKORN_LAB_THREADS", "zero")
        assert thread_cap() == 1
        monkeypatch.setenv("BRIESKORN_LAB_THREADS", "-2")
        assert thread_cap() == 1
