"""Tests for the verdict rules."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exceptions import VerdictConflict
from app.models.certificate import WitnessReport, WitnessSubject
from app.models.verdict import Conclusion, Rule, Subject, Verdict
from app.models.weights import TableRule
from app.services.spectral_estimator import SpectralEstimator
from app.services.verdict_engine import VerdictEngine
from app.services.weight_sequence import WeightSequence


def by_subject(verdicts: list[Verdict]) -> dict[Subject, Verdict]:
    return {verdict.subject: verdict for verdict in verdicts}


def found_witness(subject: WitnessSubject) -> WitnessReport:
    return WitnessReport(
        subject=subject, direction="inverse", found=True, horizon=16, delta=0.5,
        min_distance=math.sqrt(2), explanation="fabricated",
    )


class TestDecide:
    def test_two_sided_step_fires_every_rule(self, estimator, engine, covering, two_sided):
        profile = estimator.spectral_profile(two_sided, 1024, 1024)
        witnesses = [
            covering.orbit_witness_noncompact(two_sided, 256, "inverse"),
            covering.orbit_witness_noncompact(two_sided, 256, "forward"),
        ]
        verdicts = by_subject(engine.decide(profile, witnesses))
        expected = {
            Subject.W: Rule.R1_THM_SHIFT,
            Subject.W_INVERSE: Rule.R2_COR_INVERSE,
            Subject.ALGEBRA: Rule.R3_THM_RATIONAL,
            Subject.COMMUTANT: Rule.R4_COMMUTANT_QUOTED,
        }
        for subject, rule in expected.items():
            assert verdicts[subject].conclusion == Conclusion.STRONGLY_COMPACT
            assert verdicts[subject].rule == rule
        assert verdicts[Subject.W].margin == pytest.approx(1.0, abs=1e-12)
        assert verdicts[Subject.W_INVERSE].margin == pytest.approx(1.0, abs=1e-12)

    def test_subjects_in_fixed_order(self, estimator, engine, two_sided):
        verdicts = engine.decide(estimator.spectral_profile(two_sided, 64, 64))
        assert [v.subject for v in verdicts] == list(Subject)

    def test_unweighted_without_witnesses(self, estimator, engine, unweighted):
        verdicts = engine.decide(estimator.spectral_profile(unweighted, 256, 256))
        assert all(v.conclusion == Conclusion.INCONCLUSIVE for v in verdicts)
        assert all(v.rule == Rule.NONE for v in verdicts)
        assert any("blocked" in caveat for caveat in verdicts[0].caveats)

    def test_unweighted_with_witnesses(self, estimator, engine, covering, unweighted):
        profile = estimator.spectral_profile(unweighted, 256, 256)
        witnesses = [covering.orbit_witness_noncompact(unweighted, 64, d) for d in ("inverse", "forward")]
        verdicts = by_subject(engine.decide(profile, witnesses))
        for subject in (Subject.W, Subject.W_INVERSE, Subject.ALGEBRA):
            assert verdicts[subject].conclusion == Conclusion.NOT_STRONGLY_COMPACT
            assert verdicts[subject].rule == Rule.R5_ORBIT_WITNESS
        assert verdicts[Subject.COMMUTANT].conclusion == Conclusion.INCONCLUSIVE

    def test_lacunary_example(self, engine, covering, lacunary, lacunary_profile):
        witness = covering.orbit_witness_noncompact(lacunary, 1024, "inverse")
        verdicts = by_subject(engine.decide(lacunary_profile, [witness]))
        assert verdicts[Subject.W].conclusion == Conclusion.STRONGLY_COMPACT
        assert verdicts[Subject.W].margin >= 0.98
        assert verdicts[Subject.W_INVERSE].rule == Rule.R5_ORBIT_WITNESS
        assert verdicts[Subject.ALGEBRA].rule == Rule.R5_ORBIT_WITNESS
        assert verdicts[Subject.ALGEBRA].witness == witness
        assert verdicts[Subject.COMMUTANT].conclusion == Conclusion.INCONCLUSIVE

    def test_rule_and_witness_disagree(self, estimator, engine, two_sided):
        profile = estimator.spectral_profile(two_sided, 256, 256)
        with pytest.raises(VerdictConflict):
            engine.decide(profile, [found_witness(WitnessSubject.W)])

    def test_periodic_is_inconclusive(self, estimator, engine, periodic):
        verdicts = engine.decide(estimator.spectral_profile(periodic, 2**12, 2**12))
        assert all(v.conclusion == Conclusion.INCONCLUSIVE for v in verdicts)

    def test_tau_scales_with_r(self, estimator, two_sided):
        profile = estimator.spectral_profile(two_sided, 64, 64)
        # τ = 0.6·r = 1.2 exceeds the unit margins
        verdicts = VerdictEngine(relative_tau=0.6).decide(profile)
        assert all(v.conclusion == Conclusion.INCONCLUSIVE for v in verdicts)


class TestVerdictModel:
    def test_negative_verdict_needs_a_witness(self):
        with pytest.raises(ValueError):
            Verdict(subject=Subject.W, conclusion=Conclusion.NOT_STRONGLY_COMPACT, rule=Rule.R5_ORBIT_WITNESS)

    def test_negative_verdict_with_witness(self):
        verdict = Verdict(
            subject=Subject.W_INVERSE,
            conclusion=Conclusion.NOT_STRONGLY_COMPACT,
            rule=Rule.R5_ORBIT_WITNESS,
            witness=found_witness(WitnessSubject.W_INVERSE),
        )
        assert verdict.witness.found


class TestRuleImplications:
    @settings(max_examples=60, deadline=None)
    @given(
        logs=st.lists(st.floats(min_value=-1.5, max_value=1.5), min_size=1, max_size=32),
        fills=st.tuples(st.floats(min_value=-1.5, max_value=1.5), st.floats(min_value=-1.5, max_value=1.5)),
    )
    def test_commutant_rule_implies_shift_rule(self, logs, fills):
        w = WeightSequence(
            TableRule(entries=np.exp(logs).tolist(), left_fill=math.exp(fills[0]), right_fill=math.exp(fills[1]))
        )
        profile = SpectralEstimator(tail_fraction=0.25, chain_tolerance=1e-10, sliding_horizon_n=16).spectral_profile(
            w, 256, 64
        )
        verdicts = by_subject(VerdictEngine(relative_tau=1e-6).decide(profile))
        if verdicts[Subject.COMMUTANT].conclusion == Conclusion.STRONGLY_COMPACT:
            assert verdicts[Subject.W].conclusion == Conclusion.STRONGLY_COMPACT
        if verdicts[Subject.ALGEBRA].conclusion == Conclusion.STRONGLY_COMPACT:
            assert verdicts[Subject.W].conclusion == Conclusion.STRONGLY_COMPACT
            assert verdicts[Subject.W_INVERSE].conclusion == Conclusion.STRONGLY_COMPACT
