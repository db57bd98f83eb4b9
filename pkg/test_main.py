import argparse
import json

import pytest

from formats import load_graph, load_series
from main import build_parser, parse_int_tuple, parse_window, run


def run_json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


class TestArgumentParsing:
    def test_int_tuple(self):
        assert parse_int_tuple(3)("3,4,6") == (3, 4, 6)

    @pytest.mark.parametrize("text", ["3,4", "3,x,6", "3,-4,6"])
    def test_int_tuple_rejects(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_int_tuple(3)(text)

    def test_window_order(self):
        assert parse_window("5,9") == (5, 9)
        with pytest.raises(argparse.ArgumentTypeError):
            parse_window("9,5")

    def test_bad_value_exits_with_two(self, capsys):
        assert run(['predict', '--alpha', 'x', '--d', '3']) == 2
        assert run(['frobnicate']) == 2
        assert run(['counts', '--ball', '3,3', '--function', 'delta:0', '--rmax', '2']) == 2

    def test_verify_defaults(self):
        args = build_parser().parse_args(['verify', '--identity', 'regular-scalar', '--d', '3', '--rho', '2'])
        assert args.length == 400
        assert args.function.kind == 'delta'
        assert not args.lenient_tail


class TestPredict:
    def test_forward_regular(self, capsys):
        code, data = run_json(capsys, ['predict', '--alpha', '2', '--d', '3'])
        assert code == 0
        assert data == {'alpha': 2.0, 'beta': 3.0}

    def test_inverse_biregular(self, capsys):
        code, data = run_json(capsys, ['predict', '--beta', str(12 ** 0.5), '--k', '3', '--l', '4', '--inverse'])
        assert code == 0
        assert data['alpha'] == pytest.approx(6 ** 0.5, abs=1e-10)

    def test_library_error_exits_with_one(self, capsys):
        assert run(['predict', '--alpha', '1', '--d', '1']) == 1
        assert capsys.readouterr().err.startswith('error:')

    def test_missing_degree(self, capsys):
        assert run(['predict', '--alpha', '1', '--k', '3']) == 2
        assert '--k and --l' in capsys.readouterr().err

    def test_inverse_needs_beta(self):
        assert run(['predict', '--alpha', '2', '--d', '3', '--inverse']) == 2


class TestCountsAndEstimate:
    def test_constant_function_on_ball(self, capsys):
        code, data = run_json(capsys, ['counts', '--ball', '3,3,6', '--function', 'geometric:1.0',
                                       '--kind', 'b', '--rmax', '6'])
        assert code == 0
        assert [e['value'] for e in data['entries']] == [str(3 ** r) for r in range(7)]

    def test_truncation_needs_flag(self, capsys):
        argv = ['counts', '--ball', '3,3,3', '--function', 'constant:1', '--rmax', '5']
        assert run(argv) == 1
        capsys.readouterr()
        code, data = run_json(capsys, argv + ['--allow-truncated'])
        assert code == 0
        assert [e['exact_flag'] for e in data['entries']] == [True] * 4 + [False] * 2

    def test_series_to_estimate(self, tmp_path, capsys):
        series_path = str(tmp_path / 'a.json')
        assert run(['counts', '--radial', '3,3', '--function', 'geometric:1.2', '--kind', 'a',
                    '--rmax', '60', '--output', series_path]) == 0
        assert load_series(series_path).kind == 'a'
        code, data = run_json(capsys, ['estimate', '--series', series_path, '--method', 'ratio'])
        assert code == 0
        assert data['alpha'] == pytest.approx(2.4, rel=1e-10)

    def test_csv_and_plot_data(self, tmp_path):
        csv_path = tmp_path / 'b.csv'
        plot_path = tmp_path / 'plot.csv'
        assert run(['counts', '--radial', '3,4', '--function', 'delta:0', '--rmax', '200', '--float',
                    '--format', 'csv', '--output', str(csv_path), '--plot-data', str(plot_path)]) == 0
        assert load_series(str(csv_path)).r_max == 200
        assert plot_path.read_text().splitlines()[0] == 'r,log_value'

    def test_function_file(self, tmp_path, capsys):
        function_path = tmp_path / 'f.json'
        function_path.write_text(json.dumps({'kind': 'radial', 'profile': ['0', '0', '1']}))
        code, data = run_json(capsys, ['counts', '--radial', '3,4', '--function-file', str(function_path),
                                       '--kind', 'a', '--rmax', '3'])
        assert code == 0
        assert [e['value'] for e in data['entries']] == ['0', '0', '9', '0']

    def test_missing_series_file(self, tmp_path, capsys):
        assert run(['estimate', '--series', str(tmp_path / 'nope.json')]) == 1


class TestGenVerifyLift:
    def test_gen_and_biresolvent(self, tmp_path, capsys):
        graph_path = str(tmp_path / 'K34.json')
        assert run(['gen', '--complete-bipartite', '3,4', '--output', graph_path]) == 0
        assert load_graph(graph_path).edge_count == 12
        code, reports = run_json(capsys, ['verify', '--identity', 'biresolvent', '--graph', graph_path,
                                          '--z1', '6', '--z2', '5', '--terms', '80', '--json'])
        assert code == 0
        assert reports[0]['abs_gap'] <= 1e-8

    def test_gen_subdivision_to_stdout(self, capsys):
        code, data = run_json(capsys, ['gen', '--complete', '4', '--subdivide'])
        assert code == 0
        assert data['vertex_count'] == 10
        assert data['side'].count('U') == 6

    def test_scalar_identity_table(self, capsys):
        code = run(['--no-color', 'verify', '--identity', 'biregular-scalar', '--k', '3', '--l', '4',
                    '--rho', '2.5', '--function', 'radial:0,0,1'])
        assert code == 0
        out = capsys.readouterr().out
        assert 'biregular-scalar' in out and 'PASS' in out

    def test_parity_reports(self, capsys):
        code, reports = run_json(capsys, ['verify', '--identity', 'parity', '--d', '3', '--rho', '2', '--json'])
        assert code == 0
        assert [r['name'] for r in reports] == ['parity-even', 'parity-odd']

    def test_short_series_fails_unless_lenient(self, capsys):
        argv = ['verify', '--identity', 'regular-scalar', '--d', '3', '--rho', '2', '--length', '20']
        assert run(argv) == 1
        assert 'tail bound' in capsys.readouterr().err
        assert run(argv + ['--lenient-tail']) == 0

    def test_missing_identity_parameter(self, capsys):
        assert run(['verify', '--identity', 'regular-scalar', '--d', '3']) == 2
        assert '--rho' in capsys.readouterr().err
        assert run(['verify', '--identity', 'biresolvent', '--z1', '6', '--z2', '5']) == 2
        assert '--graph' in capsys.readouterr().err

    def test_scalar_identity_needs_finite_support(self, capsys):
        assert run(['verify', '--identity', 'parity', '--d', '3', '--rho', '2',
                    '--function', 'geometric:0.5']) == 2
        assert run(['verify', '--identity', 'parity', '--d', '3', '--rho', '2',
                    '--function', 'indicator:0,1']) == 2

    def test_graph_source_needs_subdivide(self, tmp_path):
        assert run(['gen', '--graph', str(tmp_path / 'K4.json')]) == 2

    def test_lift(self, tmp_path, capsys):
        graph_path = str(tmp_path / 'K4.json')
        assert run(['gen', '--complete', '4', '--output', graph_path]) == 0
        out_path = tmp_path / 'lift.json'
        code, data = run_json(capsys, ['lift', '--graph', graph_path, '--radius', '6', '--function', 'delta:1',
                                       '--output', str(out_path), '--json'])
        assert code == 0
        assert data['matched']
        saved = json.loads(out_path.read_text())
        assert saved['cover']['vertex_count'] == 1 + 3 * (2 ** 6 - 1)

    def test_missing_config(self, tmp_path, capsys):
        assert run(['--config', str(tmp_path / 'none.yaml'), 'predict', '--alpha', '2', '--d', '3']) == 1
