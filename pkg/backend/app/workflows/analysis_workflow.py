"""Analysis pipeline: profile, witnesses, verdicts, certificates and report assembly."""
import logging
from typing import Any

from app import __version__
from app.exceptions import PreconditionViolated
from app.models.certificate import WitnessReport
from app.models.report import AnalysisOptions, AnalysisReport, CoverRequest, CoverResult
from app.models.verdict import Conclusion, Subject
from app.models.weights import WeightRule
from app.services.certifier import CompactnessCertifier
from app.services.covering import CoveringAnalyzer
from app.services.spectral_estimator import SpectralEstimator
from app.services.verdict_engine import VerdictEngine
from app.services.weight_sequence import WeightSequence

logger = logging.getLogger(__name__)

DEMOS: dict[str, dict[str, Any]] = {
    "paper-example": {
        "rule": {"kind": "lacunary_blocks", "hi": 2, "lo": 1},
        "options": {
            "horizon_n": 2**16,
            "horizon_k": 2**16,
            "witness": True,
            "certify": [{"k": 0, "eps": 1e-2, "c": 1.5}],
        },
    },
    "two-sided-step": {
        "rule": {"kind": "two_sided_step", "negative_value": 2, "nonnegative_value": 1},
        "options": {
            "horizon_n": 2**12,
            "horizon_k": 2**12,
            "witness": True,
            "inverse_relations": True,
            "certify": [{"k": 0, "eps": 1e-3, "c": 1.2, "validate_samples": 200, "max_degree": 60}],
        },
    },
    "unweighted": {
        "rule": {"kind": "constant", "value": 1},
        "options": {"horizon_n": 2**10, "horizon_k": 2**10, "witness": True, "certify": [{"k": 0}]},
    },
}
DEMO_ALIASES = {"lacunary-blocks": "paper-example"}


class AnalysisWorkflow:
    """Composes the estimator, covering analyzer, verdict engine and certifier into one report."""

    def __init__(
        self,
        estimator: SpectralEstimator | None = None,
        covering: CoveringAnalyzer | None = None,
        engine: VerdictEngine | None = None,
        certifier: CompactnessCertifier | None = None,
    ):
        self.estimator = estimator or SpectralEstimator()
        self.covering = covering or CoveringAnalyzer()
        self.engine = engine or VerdictEngine()
        self.certifier = certifier or CompactnessCertifier(estimator=self.estimator)

    def run(self, rule_config: dict[str, Any] | WeightRule, options: AnalysisOptions | dict | None = None) -> AnalysisReport:
        """
        Analyze one weight rule.

        Args:
            rule_config: Rule model or its JSON form
            options: Horizons, seeds and optional stages

        Returns:
            AnalysisReport

        Raises:
            ContractViolation: For invalid configurations
            ComponentError: Propagated from the components
        """
        w = WeightSequence.from_config(rule_config)
        rule = w.rule
        if not isinstance(options, AnalysisOptions):
            options = AnalysisOptions.model_validate(options or {})
        logger.info(f"Analyzing {rule.kind} (N={options.horizon_n}, K={options.horizon_k})")

        profile = self.estimator.spectral_profile(w, options.horizon_n, options.horizon_k, options.sliding_horizon_n)
        witnesses = self._witnesses(w, options) if options.witness else []
        # the forward orbit of a contraction is not part of the W verdict unless requested
        decisive = [r for r in witnesses if r.direction == "inverse" or options.forward_witness]
        verdicts = self.engine.decide(profile, decisive)

        notes: list[str] = []
        if not options.forward_witness and any(r.found and r.direction == "forward" for r in witnesses):
            notes.append("forward orbit witness found but not applied to W (set forward_witness)")
        certificates, validations = [], []
        shift_verdict = next(v for v in verdicts if v.subject == Subject.W)
        if options.certify and shift_verdict.conclusion != Conclusion.STRONGLY_COMPACT:
            notes.append(f"R1 blocked (margin {shift_verdict.margin:.6g}), no certificate attempted")
            logger.warning(notes[-1])
        elif options.certify:
            for request in options.certify:
                certificate = self.certifier.certify(
                    w, profile, request.k, request.eps, c=request.c, horizon=options.horizon_n
                )
                certificates.append(certificate)
                if request.validate_samples:
                    validations.append(
                        self.certifier.validate_certificate(
                            w,
                            certificate,
                            num_samples=request.validate_samples,
                            max_degree=request.max_degree or max(2 * certificate.n1, certificate.n1 + 1),
                            seed=options.seed,
                        )
                    )

        inverse_relations = None
        if options.inverse_relations:
            if w.invertible:
                inverse_relations = self.estimator.inverse_relations(w, profile)
            else:
                notes.append("inverse relations skipped: W is not invertible")

        return AnalysisReport(
            version=__version__,
            rule=rule,
            options=options,
            profile=profile,
            verdicts=verdicts,
            certificates=certificates,
            validations=validations,
            witnesses=witnesses,
            inverse_relations=inverse_relations,
            notes=notes,
        )

    def demo(self, name: str) -> AnalysisReport:
        """Run one of the bundled demos, by name or alias."""
        name = DEMO_ALIASES.get(name, name)
        if name not in DEMOS:
            raise PreconditionViolated(f"Unknown demo: {name}")
        return self.run(DEMOS[name]["rule"], DEMOS[name]["options"])

    def cover(self, request: CoverRequest) -> CoverResult:
        """Greedy net of sampled orbit points p(W)e_k, optionally with the sum-set comparison."""
        w = WeightSequence(request.rule)
        points = self.covering.sample_orbit(
            w, request.k, request.samples, request.max_degree, request.seed, full_degree=request.full_degree
        )
        covering = self.covering.greedy_net(points, request.eps, request.seed)
        sum_set = None
        if request.sum_set:
            sum_set = self.covering.sum_set_covering(
                w, request.k, request.eps, request.samples, request.max_degree, request.seed
            )
        logger.info(f"Covering of {request.samples} points at eps={request.eps}: {covering.net_size} centers")
        return CoverResult(covering=covering, sum_set=sum_set)

    def _witnesses(self, w: WeightSequence, options: AnalysisOptions) -> list[WitnessReport]:
        reports = []
        if w.invertible:
            reports.append(self.covering.orbit_witness_noncompact(w, options.witness_horizon, "inverse"))
        reports.append(self.covering.orbit_witness_noncompact(w, options.witness_horizon, "forward"))
        return reports


def analyze(rule_config: dict[str, Any] | WeightRule, options: AnalysisOptions | dict | None = None) -> AnalysisReport:
    """Module-level shortcut for AnalysisWorkflow().run."""
    return AnalysisWorkflow().run(rule_config, options)
