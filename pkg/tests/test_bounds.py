import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blindnet import bounds


class TestBoundM:
    def test_frozen_example(self):
        assert bounds.bound_M(1000, 0.05, 200.0) == pytest.approx(
            1.2345527766537818, rel=1e-12
        )

    def test_filter_coefficients_scale_the_bound(self):
        base = bounds.bound_M(500, 0.05, 100.0)
        # factor sum(l * c_l) for coeffs (0.5, 0.5) is 0.5 + 2*0.5 = 1.5
        filtered = bounds.bound_M(500, 0.05, 100.0, coeffs=(0.5, 0.5))
        assert filtered == pytest.approx(1.5 * base, rel=1e-12)

    def test_identity_filter_changes_nothing(self):
        assert bounds.bound_M(500, 0.05, 100.0, coeffs=(1.0,)) == bounds.bound_M(
            500, 0.05, 100.0
        )

    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(10, 10_000),
        eps=st.floats(0.001, 0.5),
        delta=st.floats(1.0, 1e4),
    )
    def test_quadruple_degree_halves_bound(self, n, eps, delta):
        assert bounds.bound_M(n, eps, 4.0 * delta) == pytest.approx(
            bounds.bound_M(n, eps, delta) / 2.0, rel=1e-9
        )

    def test_validation(self):
        with pytest.raises(ValueError, match="eps"):
            bounds.bound_M(100, 1.0, 50.0)
        with pytest.raises(ValueError, match="eps"):
            bounds.bound_M(100, 0.0, 50.0)
        with pytest.raises(ValueError, match="delta_min"):
            bounds.bound_M(100, 0.05, 0.0)
        with pytest.raises(ValueError, match="non-negative"):
            bounds.bound_M(100, 0.05, 50.0, coeffs=(1.0, -0.5))


class TestEffectiveRankBound:
    def test_frozen_example(self):
        # 1 + 0.6^4 + 98 * 0.1^4
        value = bounds.bound_effective_rank(100, 2, [1.0, 0.5], 0.1, 2)
        assert value == pytest.approx(1.1394, rel=1e-12)

    def test_zero_horizon_counts_everything(self):
        # every factor is 1 at T=0, so the expression totals n
        assert bounds.bound_effective_rank(10, 3, [1.0, 0.5, 0.2], 0.3, 0) == 10.0

    def test_deviation_one_saturates_to_n(self):
        # every clamp hits 1, so the expression totals n at any horizon
        assert bounds.bound_effective_rank(50, 2, [1.0, 0.4], 1.0, 5) == 50.0

    def test_zero_deviation_keeps_exact_spectrum(self):
        value = bounds.bound_effective_rank(100, 3, [1.0, 0.5, 0.25], 0.0, 2)
        assert value == pytest.approx(1.0 + 0.5**4 + 0.25**4, rel=1e-12)

    def test_spike_terms_capped_at_one(self):
        # mu + deviation above 1 contributes 1 per spike, not more
        value = bounds.bound_effective_rank(6, 2, [1.0, 0.95], 0.5, 3)
        assert value == pytest.approx(1.0 + 1.0 + 4 * 0.5**6, rel=1e-12)

    def test_large_horizon_collapses_to_one_spike(self):
        value = bounds.bound_effective_rank(1000, 2, [1.0, 0.3], 0.1, 50)
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_mu_length_checked(self):
        with pytest.raises(ValueError, match="expected 2 eigenvalues"):
            bounds.bound_effective_rank(10, 2, [1.0, 0.5, 0.1], 0.1, 1)

    def test_statistical_domination(self):
        # the bound should dominate the realized effective rank on nearly
        # all draws from a dense in-class model
        from blindnet.dynamics import normalized_adjacency
        from blindnet.model import build_planted, in_concentration_class, sample_graph
        from blindnet.spectral import effective_rank

        n, a, b, horizon = 300, 290.0, 280.0, 2
        model = build_planted(n, 2, a, b)
        check = in_concentration_class(model, eps=0.05)
        assert check.passes
        dev = bounds.bound_M(n, 0.05, check.delta_min)
        theta = (a - b) / (a + b)
        cap = bounds.bound_effective_rank(n, 2, [1.0, theta], dev, horizon)
        hits = 0
        draws = 40
        for i in range(draws):
            graph = sample_graph(model, seed=900 + i)
            realized = normalized_adjacency(graph).toarray()
            sigma = np.linalg.matrix_power(realized, 2 * horizon)
            hits += effective_rank(sigma) <= cap
        assert hits >= draws - 1


class TestBoundB:
    def test_frozen_example(self):
        value = bounds.bound_B(1, 100, 4, 2, [1.0, 1.0 / 3.0], 0.1)
        assert value == pytest.approx(0.2591850078418356, rel=1e-12)

    def test_constant_scales_linearly(self):
        base = bounds.bound_B(2, 50, 10, 2, [1.0, 0.5], 0.1)
        assert bounds.bound_B(2, 50, 10, 2, [1.0, 0.5], 0.1, C=3.0) == pytest.approx(
            3.0 * base
        )

    @settings(max_examples=40, deadline=None)
    @given(s=st.integers(3, 100_000))
    def test_decreasing_in_s(self, s):
        smaller = bounds.bound_B(1, s + 1, 10, 2, [1.0, 0.5], 0.1)
        larger = bounds.bound_B(1, s, 10, 2, [1.0, 0.5], 0.1)
        assert smaller <= larger + 1e-15

    def test_validation(self):
        with pytest.raises(ValueError, match="s must be >= 2"):
            bounds.bound_B(1, 1, 10, 2, [1.0, 0.5], 0.1)
        with pytest.raises(ValueError, match="horizon"):
            bounds.bound_B(0, 10, 10, 2, [1.0, 0.5], 0.1)
        with pytest.raises(ValueError, match="C"):
            bounds.bound_B(1, 10, 10, 2, [1.0, 0.5], 0.1, C=0.0)


class TestMisclassificationBound:
    def test_frozen_example(self):
        # 128 / (1000 * 0.81 * 0.0625) * 0.0025
        value = bounds.bound_misclassification(2, 1000, 0.9, 0.25, 0.05)
        assert value == pytest.approx(0.006320987654320989, rel=1e-12)

    def test_zero_bracket_gives_zero(self):
        assert bounds.bound_misclassification(2, 100, 0.1, 0.5, 0.0) == 0.0

    def test_quadratic_in_bracket(self):
        base = bounds.bound_misclassification(2, 100, 0.1, 0.5, 0.01)
        doubled = bounds.bound_misclassification(2, 100, 0.1, 0.5, 0.02)
        assert doubled == pytest.approx(4.0 * base)

    def test_validation(self):
        with pytest.raises(ValueError, match="positive"):
            bounds.bound_misclassification(0, 100, 0.1, 0.5, 0.01)
        with pytest.raises(ValueError, match="tau and xi_k"):
            bounds.bound_misclassification(2, 100, 0.0, 0.5, 0.01)
        with pytest.raises(ValueError, match="bracket"):
            bounds.bound_misclassification(2, 100, 0.1, 0.5, -0.01)


class TestEtaBound:
    def test_frozen_example(self):
        # bracket 2*2*0.04 + 0.04 = 0.2, then 0.2^(1/4) / 1.5
        value = bounds.bound_eta(2, 0.04, 0.04, 0.5)
        assert value == pytest.approx(0.44582686998428134, rel=1e-12)

    def test_unit_bracket_leaves_only_denominator(self):
        # 2TM + B = 1 makes the root 1 at any horizon
        assert bounds.bound_eta(3, 1.0 / 6.0, 0.0, 0.5) == pytest.approx(1.0 / 1.5)
        assert bounds.bound_eta(3, 1.0 / 6.0, 0.0, 0.0) == pytest.approx(1.0)
        assert bounds.bound_eta(3, 1.0 / 6.0, 0.0, 1.0) == pytest.approx(0.5)

    def test_monotone_in_error_terms(self):
        base = bounds.bound_eta(2, 0.01, 0.01, 0.5)
        assert bounds.bound_eta(2, 0.02, 0.01, 0.5) > base
        assert bounds.bound_eta(2, 0.01, 0.02, 0.5) > base
        assert bounds.bound_eta(2, 0.01, 0.01, 0.9) < base

    def test_validation(self):
        with pytest.raises(ValueError, match="horizon"):
            bounds.bound_eta(0, 0.1, 0.1, 0.5)
        with pytest.raises(ValueError, match="non-negative"):
            bounds.bound_eta(1, -0.1, 0.1, 0.5)
        with pytest.raises(ValueError, match="lambda2"):
            bounds.bound_eta(1, 0.1, 0.1, -1.0)
