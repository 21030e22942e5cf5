"""Tests for the command line interface."""
import json

import orjson
import pytest

from app import cli
from app.exceptions import NoConvergence
from app.models.report import CertifyRequest
from tests.conftest import BUNDLED_RULES


@pytest.fixture
def rule_file(tmp_path):
    def write(name: str):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(BUNDLED_RULES[name]))
        return path

    return write


class TestCertifyRequestParsing:
    def test_all_fields(self):
        request = CertifyRequest.parse("k=0,eps=1e-3,c=1.2")
        assert (request.k, request.eps, request.c) == (0, 1e-3, 1.2)

    def test_defaults_and_spaces(self):
        request = CertifyRequest.parse(" k = -2 , validate_samples=10")
        assert request.k == -2
        assert request.c is None
        assert request.validate_samples == 10


class TestAnalyze:
    def test_writes_report(self, rule_file, tmp_path):
        out = tmp_path / "report.json"
        code = cli.main(
            [
                "analyze", str(rule_file("two_sided_step")),
                "--horizon-n", "128", "--horizon-k", "128",
                "--certify", "k=0,eps=1e-3,c=1.2", "--witness",
                "--out", str(out), "--csv", str(tmp_path / "seq"),
            ]
        )
        assert code == cli.EXIT_OK
        payload = orjson.loads(out.read_bytes())
        assert payload["certificates"][0]["n1"] == 15
        assert (tmp_path / "seq" / "r3_plus.csv").exists()

    def test_stdout_report(self, rule_file, capsys):
        assert cli.main(["analyze", str(rule_file("constant")), "--horizon-n", "32", "--horizon-k", "32"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema"] == "shift-compactness-report/1"

    def test_invalid_rule_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"kind": "constant", "value": 0}))
        assert cli.main(["analyze", str(path)]) == cli.EXIT_CONTRACT

    def test_malformed_json_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.main(["analyze", str(path)]) == cli.EXIT_CONTRACT

    def test_missing_file_exits_2(self, tmp_path):
        assert cli.main(["analyze", str(tmp_path / "missing.json")]) == cli.EXIT_CONTRACT

    def test_bad_certify_option_exits_2(self, rule_file):
        code = cli.main(["analyze", str(rule_file("constant")), "--certify", "eps=-1"])
        assert code == cli.EXIT_CONTRACT

    def test_forward_witness_flag(self, rule_file, tmp_path):
        out = tmp_path / "unweighted.json"
        args = ["analyze", str(rule_file("constant")), "--horizon-n", "64", "--horizon-k", "64", "--witness"]
        assert cli.main([*args, "--forward-witness", "--out", str(out)]) == cli.EXIT_OK
        payload = orjson.loads(out.read_bytes())
        assert payload["options"]["forward_witness"] is True
        subjects = {v["subject"]: v["conclusion"] for v in payload["verdicts"]}
        assert subjects["W"] == "not_strongly_compact"

    def test_component_failure_exits_3(self, rule_file, monkeypatch):
        def fail(*args, **kwargs):
            raise NoConvergence("budget exhausted")

        monkeypatch.setattr("app.services.spectral_estimator.SpectralEstimator.spectral_profile", fail)
        assert cli.main(["analyze", str(rule_file("constant"))]) == cli.EXIT_COMPONENT


class TestDemoAndCover:
    def test_demo_to_file(self, tmp_path):
        out = tmp_path / "unweighted.json"
        assert cli.main(["demo", "unweighted", "--out", str(out)]) == 0
        payload = orjson.loads(out.read_bytes())
        subjects = {v["subject"]: v["conclusion"] for v in payload["verdicts"]}
        assert subjects["W"] == "inconclusive"
        assert subjects["W_inverse"] == "not_strongly_compact"
        assert payload["notes"]

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["paper-example", "lacunary-blocks"])
    def test_lacunary_demo_by_either_name(self, tmp_path, name):
        out = tmp_path / "lacunary.json"
        assert cli.main(["demo", name, "--out", str(out)]) == cli.EXIT_OK
        payload = orjson.loads(out.read_bytes())
        subjects = {v["subject"]: v for v in payload["verdicts"]}
        assert subjects["W"]["conclusion"] == "strongly_compact"
        assert subjects["W"]["rule"] == "R1_thm_shift"
        assert subjects["W_inverse"]["rule"] == "R5_orbit_witness"

    def test_unknown_demo_is_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            cli.main(["demo", "nope"])

    def test_cover(self, rule_file, capsys):
        code = cli.main(
            ["cover", str(rule_file("two_sided_step")), "--eps", "0.05", "--samples", "40",
             "--max-degree", "8", "--sum-set"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["covering"]["num_points"] == 40
        assert payload["sum_set"]["bound_holds"] is True

    def test_cover_full_degree(self, rule_file, capsys):
        code = cli.main(
            ["cover", str(rule_file("two_sided_step")), "--eps", "1e-2", "--samples", "500",
             "--max-degree", "60", "--seed", "42", "--full-degree"]
        )
        assert code == cli.EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["covering"]["net_size"] <= 61
