"""Tests for the finite-horizon spectral estimator."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exceptions import PreconditionViolated
from app.models.spectral import BoundDirection, QuantityName
from app.models.weights import TableRule
from app.services.spectral_estimator import SpectralEstimator
from app.services.weight_sequence import WeightSequence
from tests.conftest import BUNDLED_RULES

MINUS_FAMILY = [QuantityName.R_MINUS, QuantityName.R1_MINUS, QuantityName.R2_MINUS, QuantityName.R3_MINUS]
PLUS_FAMILY = [QuantityName.R_PLUS, QuantityName.R1_PLUS, QuantityName.R2_PLUS, QuantityName.R3_PLUS]


class TestTrivialProfiles:
    @pytest.mark.parametrize("value, modulus", [(3, 3.0), ([0, 2], 2.0), (0.25, 0.25)])
    def test_constant(self, estimator, value, modulus):
        w = WeightSequence.from_config({"kind": "constant", "value": value})
        profile = estimator.spectral_profile(w, 64, 64)
        for estimate in profile.estimates().values():
            assert estimate == pytest.approx(modulus, abs=1e-10)
        assert profile.r == pytest.approx(modulus, abs=1e-10)
        assert profile.r1 == pytest.approx(modulus, abs=1e-10)

    def test_two_sided_step(self, estimator, two_sided):
        profile = estimator.spectral_profile(two_sided, 512, 512)
        for name in MINUS_FAMILY:
            assert profile.quantity(name).estimate == pytest.approx(2.0, abs=1e-12)
        for name in PLUS_FAMILY:
            assert profile.quantity(name).estimate == pytest.approx(1.0, abs=1e-12)
        assert profile.r == pytest.approx(2.0, abs=1e-12)
        assert profile.r1 == pytest.approx(1.0, abs=1e-12)

    def test_periodic(self, estimator, periodic):
        # the anchored tails alternate in parity, which biases them by about 2^(1/(2n))
        profile = estimator.spectral_profile(periodic, 2**12, 2**12)
        for estimate in profile.estimates().values():
            assert estimate == pytest.approx(math.sqrt(2), rel=1e-3)
        assert profile.r_minus.estimate == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_bound_directions(self, estimator, two_sided):
        profile = estimator.spectral_profile(two_sided, 64, 64)
        assert profile.r_plus.bound_direction == BoundDirection.LOWER
        assert profile.r1_minus.bound_direction == BoundDirection.UPPER
        assert profile.r3_plus.bound_direction == BoundDirection.HEURISTIC


class TestScaling:
    @pytest.mark.parametrize("name", ["two_sided_step", "periodic", "table", "lacunary_blocks"])
    @pytest.mark.parametrize("factor", [3.0, 0.5j])
    def test_estimates_scale_with_the_modulus(self, estimator, name, factor):
        w = WeightSequence.from_config(BUNDLED_RULES[name])
        original = estimator.spectral_profile(w, 256, 256).estimates()
        scaled = estimator.spectral_profile(w.scaled(factor), 256, 256).estimates()
        for quantity, estimate in original.items():
            assert scaled[quantity] == pytest.approx(abs(factor) * estimate, rel=1e-12)


class TestLacunaryExample:
    def test_r_plus_attained_on_a_block(self, lacunary_profile):
        assert lacunary_profile.r_plus.estimate == pytest.approx(2.0, abs=1e-12)
        assert lacunary_profile.r == pytest.approx(2.0, abs=1e-12)

    def test_r3_plus_counts_block_weights(self, lacunary_profile):
        # 135 block weights lie below 2^16 and the tail starts at n = 49153
        assert lacunary_profile.r3_plus.estimate == pytest.approx(2 ** (135 / 49153), rel=1e-9)
        assert 1.0 <= lacunary_profile.r3_plus.estimate <= 1.01
        assert lacunary_profile.r3_plus.sequence[-1] == pytest.approx(2 ** (135 / 65536), rel=1e-9)

    def test_minus_side_is_unweighted(self, lacunary_profile):
        for name in MINUS_FAMILY:
            assert lacunary_profile.quantity(name).estimate == pytest.approx(1.0, abs=1e-12)


class TestOrderingChain:
    @settings(max_examples=100, deadline=None)
    @given(
        logs=st.lists(st.floats(min_value=-math.log(4), max_value=math.log(4)), min_size=1, max_size=64),
        fills=st.tuples(
            st.floats(min_value=-math.log(4), max_value=math.log(4)),
            st.floats(min_value=-math.log(4), max_value=math.log(4)),
        ),
        offset=st.integers(min_value=-64, max_value=64),
    )
    def test_per_n_chain_and_aggregation(self, logs, fills, offset):
        estimator = SpectralEstimator(tail_fraction=0.25, chain_tolerance=1e-10, sliding_horizon_n=16)
        w = WeightSequence(
            TableRule(offset=offset, entries=np.exp(logs).tolist(), left_fill=math.exp(fills[0]), right_fill=math.exp(fills[1]))
        )
        for side in ("minus", "plus"):
            anchored = estimator.anchored_logs(w, side, 256)
            sup_logs, inf_logs = estimator.sliding_logs(w, side, 256, 64)
            assert np.all(inf_logs <= anchored + 1e-10)
            assert np.all(anchored <= sup_logs + 1e-10)

        profile = estimator.spectral_profile(w, 256, 64)
        assert profile.r == max(profile.r_minus.estimate, profile.r_plus.estimate)
        assert profile.r1 == min(profile.r1_minus.estimate, profile.r1_plus.estimate)
        for side in ("minus", "plus"):
            r, r1, r2, r3 = (profile.quantity(f"{prefix}_{side}").estimate for prefix in ("r", "r1", "r2", "r3"))
            assert r1 <= r2 + 1e-12
            assert r2 <= r3 + 1e-10
            assert r3 <= r + 1e-12


class TestLocalRadius:
    @pytest.mark.parametrize("name", sorted(BUNDLED_RULES))
    @pytest.mark.parametrize("k", [k for k in range(-5, 6) if k != 0])
    def test_regrouping_identities(self, estimator, name, k):
        w = WeightSequence.from_config(BUNDLED_RULES[name])
        report = estimator.check_local_radius_identities(w, k, 512)
        assert report.checked > 0
        assert report.max_deviation < 1e-9

    def test_identity_needs_nonzero_index(self, estimator, lacunary):
        with pytest.raises(PreconditionViolated):
            estimator.check_local_radius_identities(lacunary, 0, 64)

    def test_local_radius_of_e0_is_r3_plus(self, estimator, two_sided):
        local = estimator.local_radius(two_sided, 0, 256)
        assert local.estimate == pytest.approx(1.0, abs=1e-12)
        assert len(local.sequence) == 256

    def test_agreement_across_basis_vectors(self, estimator, two_sided):
        deviations = estimator.local_radius_agreement(two_sided, [-5, -2, 3, 5], 4096)
        # ‖Wⁿe_k‖ differs from ‖Wⁿe_0‖ by at most a factor 2^5 here
        assert all(deviation <= 2 ** (5 / 3072) - 1 + 1e-12 for deviation in deviations.values())

    @pytest.mark.parametrize("name", sorted(BUNDLED_RULES))
    def test_agreement_for_every_rule(self, estimator, name):
        w = WeightSequence.from_config(BUNDLED_RULES[name])
        deviations = estimator.local_radius_agreement(w, [-5, -2, 3, 5], 2**12)
        assert max(deviations.values()) <= 0.05

    def test_orbit_log_norms_start_at_zero(self, estimator, lacunary):
        logs = estimator.orbit_log_norms(lacunary, 0, 6)
        assert logs[0] == 0.0
        assert logs[5] == pytest.approx(3 * math.log(2))


class TestInverseRelations:
    def test_two_sided_step(self, estimator, two_sided):
        profile = estimator.spectral_profile(two_sided, 256, 256)
        relations = estimator.inverse_relations(two_sided, profile)
        assert relations.r3_plus_of_V == pytest.approx(0.5, abs=1e-12)
        assert relations.r3_deviation < 1e-12
        assert relations.r_of_V == pytest.approx(1.0, abs=1e-12)
        assert relations.r_deviation < 1e-12
        assert relations.inverse_norm == 1.0

    def test_lacunary_reflection(self, estimator, lacunary):
        profile = estimator.spectral_profile(lacunary, 1024, 1024)
        relations = estimator.inverse_relations(lacunary, profile)
        assert relations.r_deviation < 1e-9


class TestPreconditions:
    def test_horizon_too_short(self, estimator, lacunary):
        with pytest.raises(PreconditionViolated):
            estimator.estimate_quantity(lacunary, "r3_plus", 1)

    def test_single_quantity_matches_profile(self, estimator, two_sided):
        single = estimator.estimate_quantity(two_sided, QuantityName.R2_MINUS, 128)
        assert single.estimate == pytest.approx(2.0, abs=1e-12)
