"""Shared fixtures: the bundled weight rules and service instances."""
import pytest

from app.services.certifier import CompactnessCertifier
from app.services.covering import CoveringAnalyzer
from app.services.shift_calculus import ShiftCalculus
from app.services.spectral_estimator import SpectralEstimator
from app.services.verdict_engine import VerdictEngine
from app.services.weight_sequence import WeightSequence

BUNDLED_RULES = {
    "constant": {"kind": "constant", "value": 1},
    "constant_half": {"kind": "constant", "value": 0.5},
    "periodic": {"kind": "periodic", "values": [2, 1]},
    "two_sided_step": {"kind": "two_sided_step", "negative_value": 2, "nonnegative_value": 1},
    "lacunary_blocks": {"kind": "lacunary_blocks", "hi": 2, "lo": 1},
    "table": {"kind": "table", "offset": -3, "entries": [3, 0.5, [0, 2], 1.5], "left_fill": 1, "right_fill": 2},
}


@pytest.fixture
def lacunary() -> WeightSequence:
    return WeightSequence.from_config(BUNDLED_RULES["lacunary_blocks"])


@pytest.fixture
def two_sided() -> WeightSequence:
    return WeightSequence.from_config(BUNDLED_RULES["two_sided_step"])


@pytest.fixture
def unweighted() -> WeightSequence:
    return WeightSequence.from_config(BUNDLED_RULES["constant"])


@pytest.fixture
def periodic() -> WeightSequence:
    return WeightSequence.from_config(BUNDLED_RULES["periodic"])


@pytest.fixture
def estimator() -> SpectralEstimator:
    return SpectralEstimator(tail_fraction=0.25, chain_tolerance=1e-10, sliding_horizon_n=16)


@pytest.fixture
def calculus() -> ShiftCalculus:
    return ShiftCalculus(norm_tolerance=1e-10)


@pytest.fixture
def certifier(calculus, estimator) -> CompactnessCertifier:
    return CompactnessCertifier(calculus=calculus, estimator=estimator, cauchy_tolerance=1e-9)


@pytest.fixture
def covering(calculus) -> CoveringAnalyzer:
    return CoveringAnalyzer(calculus=calculus, witness_delta=0.5)


@pytest.fixture
def engine() -> VerdictEngine:
    return VerdictEngine(relative_tau=1e-6)


@pytest.fixture(scope="session")
def lacunary_profile():
    """Full-horizon profile of the lacunary example (2^16 positions and lengths)."""
    w = WeightSequence.from_config(BUNDLED_RULES["lacunary_blocks"])
    return SpectralEstimator(tail_fraction=0.25, chain_tolerance=1e-10, sliding_horizon_n=16).spectral_profile(
        w, 2**16, 2**16
    )
