"""Tests for the analysis workflow and report serialization."""
import orjson
import pandas as pd
import pytest

from app.exceptions import InvalidRule, PreconditionViolated
from app.models.report import AnalysisOptions, CertifyRequest, CoverRequest
from app.models.spectral import QuantityName
from app.models.verdict import Conclusion, Rule, Subject
from app.services.report_writer import ReportWriter
from app.workflows.analysis_workflow import DEMO_ALIASES, DEMOS, AnalysisWorkflow
from tests.conftest import BUNDLED_RULES


@pytest.fixture
def workflow(estimator, covering, engine, certifier) -> AnalysisWorkflow:
    return AnalysisWorkflow(estimator=estimator, covering=covering, engine=engine, certifier=certifier)


@pytest.fixture
def writer() -> ReportWriter:
    return ReportWriter()


def small_options(**overrides) -> AnalysisOptions:
    return AnalysisOptions(**{"horizon_n": 256, "horizon_k": 256, "witness_horizon": 64, **overrides})


class TestRun:
    @pytest.mark.slow
    def test_lacunary_demo(self, workflow):
        report = workflow.demo("paper-example")
        verdicts = {v.subject: v for v in report.verdicts}
        assert verdicts[Subject.W].conclusion == Conclusion.STRONGLY_COMPACT
        assert verdicts[Subject.W_INVERSE].rule == Rule.R5_ORBIT_WITNESS
        assert report.certificates[0].n1 == 24
        assert report.profile.r_plus.estimate == pytest.approx(2.0)

    def test_two_sided_certificate_and_validation(self, workflow):
        options = small_options(
            certify=[CertifyRequest(k=0, eps=1e-3, c=1.2, validate_samples=50, max_degree=40)],
            inverse_relations=True,
        )
        report = workflow.run(BUNDLED_RULES["two_sided_step"], options)
        assert report.certificates[0].n1 == 15
        assert report.validations[0].max_residual < 1e-3
        assert report.inverse_relations.r3_plus_of_V == pytest.approx(0.5)
        assert report.notes == []

    def test_blocked_certificate_is_noted(self, workflow):
        report = workflow.run(BUNDLED_RULES["constant"], small_options(certify=[CertifyRequest()]))
        assert report.certificates == []
        assert any("no certificate attempted" in note for note in report.notes)

    def test_witnesses_are_attached(self, workflow):
        report = workflow.run(BUNDLED_RULES["constant"], small_options(witness=True))
        assert {w.direction for w in report.witnesses} == {"inverse", "forward"}
        verdicts = {v.subject: v for v in report.verdicts}
        assert all(w.found for w in report.witnesses)
        # only the inverse orbit decides by default
        assert verdicts[Subject.W].conclusion == Conclusion.INCONCLUSIVE
        assert verdicts[Subject.W_INVERSE].rule == Rule.R5_ORBIT_WITNESS
        assert verdicts[Subject.ALGEBRA].conclusion == Conclusion.NOT_STRONGLY_COMPACT
        assert any("forward_witness" in note for note in report.notes)

    def test_forward_witness_decides_when_requested(self, workflow):
        report = workflow.run(BUNDLED_RULES["constant"], small_options(witness=True, forward_witness=True))
        verdicts = {v.subject: v for v in report.verdicts}
        assert verdicts[Subject.W].conclusion == Conclusion.NOT_STRONGLY_COMPACT
        assert verdicts[Subject.W].rule == Rule.R5_ORBIT_WITNESS
        assert verdicts[Subject.W].witness.direction == "forward"
        assert not any("forward_witness" in note for note in report.notes)

    def test_demo_aliases(self):
        assert DEMO_ALIASES["lacunary-blocks"] in DEMOS
        assert "lacunary-blocks" not in DEMOS
        assert DEMOS["paper-example"]["rule"] == {"kind": "lacunary_blocks", "hi": 2, "lo": 1}

    def test_options_from_dict(self, workflow):
        report = workflow.run({"kind": "constant", "value": 3}, {"horizon_n": 32, "horizon_k": 32})
        assert report.options.horizon_n == 32
        assert report.profile.r == pytest.approx(3.0)

    def test_invalid_rule(self, workflow):
        with pytest.raises(InvalidRule):
            workflow.run({"kind": "periodic", "values": []}, small_options())

    def test_unknown_demo(self, workflow):
        with pytest.raises(PreconditionViolated):
            workflow.demo("nope")

    def test_cover(self, workflow):
        request = CoverRequest(rule=BUNDLED_RULES["two_sided_step"], eps=0.05, samples=60, max_degree=10, sum_set=True)
        result = workflow.cover(request)
        assert result.covering.num_points == 60
        assert result.sum_set.bound_holds

    def test_cover_with_full_degree(self, workflow):
        request = CoverRequest(
            rule=BUNDLED_RULES["two_sided_step"], eps=1e-2, samples=500, max_degree=60, seed=42, full_degree=True
        )
        assert workflow.cover(request).covering.net_size <= 61


class TestReportWriter:
    def test_json_is_deterministic(self, workflow, writer):
        options = small_options(witness=True, certify=[CertifyRequest(k=0, eps=1e-3, c=1.2, validate_samples=20)])
        first = writer.to_json_bytes(workflow.run(BUNDLED_RULES["two_sided_step"], options))
        second = writer.to_json_bytes(workflow.run(BUNDLED_RULES["two_sided_step"], options))
        assert first == second

    def test_json_layout(self, workflow, writer):
        payload = orjson.loads(writer.to_json_bytes(workflow.run(BUNDLED_RULES["periodic"], small_options())))
        assert payload["schema"] == "shift-compactness-report/1"
        assert "schema_" not in payload
        assert payload["rule"] == {"kind": "periodic", "values": [2.0, 1.0]}
        assert [v["subject"] for v in payload["verdicts"]] == [s.value for s in Subject]

    def test_write_json(self, workflow, writer, tmp_path):
        report = workflow.run(BUNDLED_RULES["constant"], small_options())
        path = writer.write_json(report, tmp_path / "out" / "report.json")
        assert path.read_bytes() == writer.to_json_bytes(report)

    @pytest.mark.parametrize("fmt", ["csv", "parquet"])
    def test_write_sequences(self, workflow, writer, tmp_path, fmt):
        report = workflow.run(BUNDLED_RULES["two_sided_step"], small_options())
        paths = writer.write_sequences(report.profile, tmp_path, fmt)
        assert len(paths) == 8
        lengths = {}
        for path in paths:
            frame = pd.read_csv(path) if fmt == "csv" else pd.read_parquet(path)
            assert list(frame.columns) == ["n", "value"]
            lengths[path.stem] = len(frame)
        assert lengths["r3_plus"] == 256
        # sup/inf-over-k quantities stop at the sliding horizon
        assert lengths["r_minus"] == 16

    def test_long_format(self, workflow, writer):
        report = workflow.run(BUNDLED_RULES["two_sided_step"], small_options())
        frame = writer.sequences_frame(report.profile)
        assert set(frame["quantity"]) == {name.value for name in QuantityName}
        assert writer.sequences_bytes(report.profile, "csv").startswith(b"quantity,n,value")

    def test_unsupported_format(self, workflow, writer, tmp_path):
        report = workflow.run(BUNDLED_RULES["constant"], small_options())
        with pytest.raises(PreconditionViolated):
            writer.write_sequences(report.profile, tmp_path, "xlsx")
