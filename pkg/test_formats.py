import json
import math
from fractions import Fraction

import pytest

from errors import GraphError
from formats import (FunctionSpec, dump_series, function_from_dict, graph_from_dict, graph_to_dict, load_graph,
                     load_series, parse_function_spec, save_graph, series_from_csv, series_from_dict,
                     series_plot_data, series_to_csv, series_to_dict)
from graph_core import RadialProfile, VertexFunction
from walk_engine import nbw_counts, radial_walk_counts, walk_counts


class TestGraphFiles:
    def test_dict_round_trip(self, k34):
        assert graph_from_dict(graph_to_dict(k34)) == k34

    def test_file_round_trip(self, sub_k4, tmp_path):
        path = tmp_path / "g.json"
        save_graph(sub_k4, str(path))
        loaded = load_graph(str(path))
        assert loaded == sub_k4
        assert loaded.name == sub_k4.name

    def test_missing_edges(self):
        with pytest.raises(GraphError):
            graph_from_dict({'vertex_count': 3})


class TestFunctionSpecs:
    def test_geometric(self):
        spec = parse_function_spec("geometric:1.2")
        assert spec.kind == 'geometric'
        assert spec.payload == Fraction(6, 5)
        assert spec.radial() == RadialProfile.geometric("1.2")

    def test_indicator(self, k23):
        f = parse_function_spec("indicator:1,2").realize(k23)
        assert f == VertexFunction.indicator(5, [1, 2])

    def test_radial_realized_about_center(self, c6):
        f = parse_function_spec("radial:0,0,1").realize(c6, center=0)
        assert f.support == (2, 4)

    def test_bare_constant(self):
        assert parse_function_spec("constant") == FunctionSpec('constant', Fraction(1))

    def test_delta_at_root_is_radial(self):
        assert parse_function_spec("delta:0").radial() == RadialProfile.shell(0)

    def test_non_radial_kind(self):
        with pytest.raises(GraphError):
            parse_function_spec("indicator:1,2").radial()

    @pytest.mark.parametrize("text", ["wave:1", "geometric", "delta:x"])
    def test_invalid(self, text):
        with pytest.raises(GraphError):
            parse_function_spec(text)

    @pytest.mark.parametrize("text", ["geometric:0.5", "radial:1,1/2,0", "dense:1,0,2", "delta:3",
                                      "indicator:0,4", "constant:2"])
    def test_dict_round_trip(self, text):
        spec = parse_function_spec(text)
        assert function_from_dict(json.loads(json.dumps(spec.to_dict()))) == spec

    def test_missing_field(self):
        with pytest.raises(GraphError):
            function_from_dict({'kind': 'delta'})


class TestSeriesFiles:
    def test_exact_series_through_json_and_csv(self, k34):
        series = nbw_counts(k34, 0, VertexFunction(["1/2", "0", "1", "0", "3", "0", "1"]), 10)
        assert series_from_dict(json.loads(dump_series(series))) == series
        assert series_from_csv(series_to_csv(series)) == series

    def test_float_series_with_zero_entries(self):
        series = radial_walk_counts(3, 4, RadialProfile.explicit([1]), 30, exact=False)
        assert series.logvals[1] == -math.inf
        data = series_to_dict(series)
        assert data['entries'][1]['log_value'] is None
        assert data['has_exact'] is False
        assert series_from_dict(json.loads(json.dumps(data))) == series
        assert series_from_csv(series_to_csv(series)) == series

    def test_truncated_flags_survive(self, ball33, tmp_path):
        f = VertexFunction.constant(ball33.vertex_count)
        series = walk_counts(ball33, ball33.vertex_count - 1, f, 3, allow_truncated=True)
        path = tmp_path / "s.csv"
        path.write_text(series_to_csv(series))
        loaded = load_series(str(path))
        assert loaded.exact_flags == (True, False, False, False)
        assert loaded == series

    def test_json_is_deterministic(self, k4):
        series = walk_counts(k4, 0, VertexFunction.constant(4), 8)
        assert dump_series(series) == dump_series(series)
        assert json.loads(dump_series(series))['entries'][8]['value'] == str(3 ** 8)

    def test_infinite_mass(self):
        series = radial_walk_counts(3, 3, RadialProfile.geometric("1.2"), 5)
        assert series_from_csv(series_to_csv(series)).mass == math.inf

    def test_plot_data_skips_zeros(self):
        series = radial_walk_counts(3, 3, RadialProfile.explicit([1]), 4)
        lines = series_plot_data(series).splitlines()
        assert lines[0] == 'r,log_value'
        assert [line.split(',')[0] for line in lines[1:]] == ['0', '2', '4']

    def test_unknown_format(self, k4):
        with pytest.raises(ValueError):
            dump_series(walk_counts(k4, 0, VertexFunction.constant(4), 2), 'xml')
