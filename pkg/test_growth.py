import logging
import math

import numpy as np
import pytest

from errors import GraphError, ParityError, PreconditionError
from graph_core import RadialProfile, VertexFunction, generate_tree_ball
from growth import (GrowthEstimate, METHODS, check_walk_lower_bound, cogrowth_biregular, cogrowth_regular,
                    cogrowth_summary, cogrowth_threshold, default_window, estimate_growth_rate,
                    inverse_cogrowth_biregular, inverse_cogrowth_regular, predict_alpha, predict_beta)
from walk_engine import CountSeries, radial_nbw_counts, radial_walk_counts, walk_counts

SQ2, SQ3 = math.sqrt(2), math.sqrt(3)


def geometric_series(c, length=50):
    return CountSeries('b', 0, [r * math.log(c) for r in range(length)])


class TestEstimators:
    @pytest.mark.parametrize("method", METHODS)
    def test_exact_geometric(self, method):
        estimate = estimate_growth_rate(geometric_series(2.5), method)
        assert estimate.value == pytest.approx(2.5, rel=1e-12)
        assert estimate.residual < 1e-9

    def test_default_window(self):
        assert default_window(100) == (90, 99)
        assert default_window(10) == (6, 9)
        assert default_window(3) == (0, 2)

    def test_subcritical_delta_walks(self):
        b = radial_walk_counts(3, 3, RadialProfile.explicit([1]), 2000, exact=False)
        estimate = estimate_growth_rate(b, 'ratio2', (1800, 2000))
        assert abs(estimate.value / (2 * SQ2) - 1) < 0.01

    def test_geometric_nbw_ratio(self):
        a = radial_nbw_counts(3, 3, RadialProfile.geometric("1.2"), 50, exact=False)
        assert estimate_growth_rate(a, 'ratio', (2, 50)).value == pytest.approx(2.4, rel=1e-12)

    def test_supercritical_regular_walks(self):
        b = radial_walk_counts(3, 3, RadialProfile.geometric("1.2"), 4000, exact=False)
        assert abs(estimate_growth_rate(b, 'ratio2').value - 3.233333) < 1e-3

    def test_constant_function_on_biregular_tree(self):
        b = radial_walk_counts(3, 4, RadialProfile.geometric(1), 400, exact=False)
        assert estimate_growth_rate(b, 'ratio2').value == pytest.approx(math.sqrt(12), rel=1e-10)

    def test_supercritical_biregular(self):
        profile = RadialProfile.geometric("1.3")
        a = radial_nbw_counts(3, 4, profile, 4000, exact=False)
        b = radial_walk_counts(3, 4, profile, 4000, exact=False)
        alpha = estimate_growth_rate(a, 'ratio2')
        assert alpha.value == pytest.approx(1.3 * math.sqrt(6), rel=1e-10)
        beta = estimate_growth_rate(b, 'ratio2')
        assert abs(beta.value - cogrowth_biregular(1.3 * math.sqrt(6), 3, 4)) < 1e-3
        summary = cogrowth_summary(a, b, 3, 4, 'ratio2')
        assert summary['gap'] < 1e-3
        assert summary['above_floor']

    def test_subcritical_biregular(self):
        b = radial_walk_counts(3, 4, RadialProfile.explicit([1]), 2000, exact=False)
        assert abs(estimate_growth_rate(b, 'ratio2').value / (SQ2 + SQ3) - 1) < 0.01

    def test_independent_of_base_vertex(self):
        ball = generate_tree_ball(3, 3, 12)
        f = VertexFunction.constant(ball.vertex_count)
        estimates = [estimate_growth_rate(walk_counts(ball, e, f, 10), 'ratio') for e in (0, 1)]
        assert estimates[0].value == pytest.approx(estimates[1].value,
                                                   abs=estimates[0].residual + estimates[1].residual + 1e-12)

    def test_ratio_on_bipartite_zeros(self):
        b = radial_walk_counts(3, 3, RadialProfile.explicit([1]), 40)
        with pytest.raises(ParityError):
            estimate_growth_rate(b, 'ratio')
        assert estimate_growth_rate(b, 'ratio2').value > 2.0

    def test_vanishing_nbw_series(self):
        a = radial_nbw_counts(3, 3, RadialProfile.explicit([1]), 20)
        assert estimate_growth_rate(a).value == 0.0

    def test_zero_series_without_support_info(self):
        s = CountSeries('b', 0, [-math.inf] * 20)
        with pytest.raises(PreconditionError):
            estimate_growth_rate(s)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            estimate_growth_rate(geometric_series(2.0), 'median')

    def test_bad_window(self):
        with pytest.raises(PreconditionError):
            estimate_growth_rate(geometric_series(2.0), 'ratio', (10, 80))

    def test_walk_lower_bound(self):
        assert check_walk_lower_bound(GrowthEstimate(3.2, 'ratio2', (0, 1), 0.0), 3, 4)
        assert not check_walk_lower_bound(GrowthEstimate(2.0, 'ratio2', (0, 1), 0.0), 3, 4)


class TestForwardMaps:
    def test_regular_examples(self):
        assert cogrowth_regular(2.0, 3) == pytest.approx(3.0)
        assert cogrowth_regular(1.0, 3) == pytest.approx(2 * SQ2)
        assert cogrowth_regular(0.0, 3) == pytest.approx(2 * SQ2)

    def test_regular_continuous_at_threshold(self):
        d = 5
        t = math.sqrt(d - 1)
        assert cogrowth_regular(t * (1 + 1e-9), d) == pytest.approx(cogrowth_regular(t, d), rel=1e-8)

    def test_regular_degree_checks(self):
        with pytest.raises(GraphError):
            cogrowth_regular(1.0, 2)
        with pytest.raises(GraphError):
            cogrowth_regular(1.0, 1)
        assert cogrowth_regular(3.0, 2, allow_degenerate=True) == pytest.approx(3.0 + 1 / 3)

    def test_biregular_examples(self):
        assert cogrowth_biregular(1.0, 3, 4) == pytest.approx(SQ2 + SQ3)
        assert cogrowth_biregular(math.sqrt(6), 3, 4) == pytest.approx(math.sqrt(12))

    @pytest.mark.parametrize("d", [3, 4])
    @pytest.mark.parametrize("alpha", [0.5, 2.0, 5.0])
    def test_biregular_reduces_to_regular(self, alpha, d):
        assert cogrowth_biregular(alpha, d, d) == pytest.approx(cogrowth_regular(alpha, d), rel=1e-14)

    @pytest.mark.parametrize("k,l", [(3, 3), (3, 4), (2, 5), (4, 6)])
    def test_biregular_monotone(self, k, l):
        grid = np.linspace(0.0, 20.0, 401)
        values = [cogrowth_biregular(x, k, l) for x in grid]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert values[0] == pytest.approx(math.sqrt(k - 1) + math.sqrt(l - 1))

    def test_negative_alpha(self):
        with pytest.raises(PreconditionError):
            cogrowth_regular(-1.0, 3)

    def test_threshold(self):
        assert cogrowth_threshold(3, 3) == pytest.approx(SQ2)
        assert cogrowth_threshold(3, 4) == pytest.approx(6 ** 0.25)


class TestInverseMaps:
    def test_regular_examples(self):
        assert inverse_cogrowth_regular(3.0, 3) == pytest.approx(2.0, abs=1e-12)
        assert inverse_cogrowth_regular(2 * SQ2, 3) == pytest.approx(SQ2, abs=1e-7)
        assert inverse_cogrowth_regular(4.0, 4) == pytest.approx(3.0)

    def test_biregular_examples(self):
        assert inverse_cogrowth_biregular(math.sqrt(12), 3, 4) == pytest.approx(math.sqrt(6), abs=1e-10)
        assert inverse_cogrowth_biregular(SQ2 + SQ3, 3, 4) == pytest.approx(6 ** 0.25)

    def test_biregular_at_full_degrees(self):
        k, l = 4, 5
        assert inverse_cogrowth_biregular(math.sqrt(k * l), k, l) == \
            pytest.approx(math.sqrt((k - 1) * (l - 1)), abs=1e-10)

    def test_line_warns_once(self, caplog):
        with caplog.at_level(logging.WARNING, logger='growth'):
            alpha = inverse_cogrowth_biregular(3.0, 2, 2)
        assert alpha == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-9)
        assert len([r for r in caplog.records if '(2,2)' in r.getMessage()]) == 1

    def test_below_floor(self):
        with pytest.raises(PreconditionError):
            inverse_cogrowth_regular(2.0, 3)
        with pytest.raises(PreconditionError):
            inverse_cogrowth_biregular(3.0, 3, 4)

    @pytest.mark.parametrize("k,l", [(3, 3), (3, 4), (4, 7)])
    def test_round_trip(self, k, l):
        threshold = cogrowth_threshold(k, l)
        for alpha in np.geomspace(threshold * 1.05, 1e3, 25):
            beta = cogrowth_biregular(alpha, k, l)
            assert inverse_cogrowth_biregular(beta, k, l) == pytest.approx(alpha, abs=1e-10 * max(1.0, alpha))
            if k == l:
                assert inverse_cogrowth_regular(beta, k) == pytest.approx(alpha, abs=1e-10 * max(1.0, alpha))

    def test_predict_dispatch(self):
        assert predict_beta(2.0, d=3) == pytest.approx(3.0)
        assert predict_beta(math.sqrt(6), k=3, l=4) == pytest.approx(math.sqrt(12))
        assert predict_alpha(3.0, d=3) == pytest.approx(2.0)
        with pytest.raises(GraphError):
            predict_beta(2.0, k=3)
