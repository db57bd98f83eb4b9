#!/usr/bin/env python3
"""
Co-growth toolkit
Command-line entry point: generate graphs, count walks, estimate growth, predict and verify
"""

import sys
import argparse
import logging
from typing import List, Optional, Sequence

from config import GROWTH_CONFIG, IDENTITY_CONFIG, load_config
from errors import CogrowthError, GraphError
from formats import (FunctionSpec, dump_json, dump_series, graph_to_dict, load_function, load_graph,
                     load_series, parse_function_spec, save_graph, series_plot_data)
from graph_core import (generate_complete, generate_complete_bipartite, generate_cycle,
                        generate_subdivision, generate_tree_ball, lift_function, universal_cover_ball)
from growth import METHODS, estimate_growth_rate, predict_alpha, predict_beta
from report_renderer import ReportRenderer
from series_identities import (eval_biregular_scalar_identity, eval_parity_identities,
                               eval_regular_scalar_identity, verify_biresolvent,
                               verify_nbw_generating, verify_resolvent_series)
from walk_engine import (KIND_NBW, nbw_counts, radial_nbw_counts, radial_walk_counts, walk_counts)

# Configure logging
logging.basicConfig(
    level=logging.WARNING,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

IDENTITIES = ('resolvent', 'nbw-gen', 'biresolvent', 'regular-scalar', 'parity', 'biregular-scalar')

IDENTITY_PARAMETERS = {
    'resolvent': ('graph', 'z'),
    'nbw-gen': ('graph', 't'),
    'biresolvent': ('graph', 'z1', 'z2'),
    'regular-scalar': ('d', 'rho'),
    'parity': ('d', 'rho'),
    'biregular-scalar': ('k', 'l', 'rho'),
}
SCALAR_IDENTITIES = ('regular-scalar', 'parity', 'biregular-scalar')


def parse_int_tuple(count: int):
    """Build a parser for 'a,b,...' with exactly count non-negative integers"""
    def parse(text: str):
        try:
            parts = [int(p) for p in text.split(',')]
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"Expected {count} comma-separated integers: {e}")
        if len(parts) != count:
            raise argparse.ArgumentTypeError(f"Expected {count} comma-separated integers, got {len(parts)}")
        if any(p < 0 for p in parts):
            raise argparse.ArgumentTypeError("Values must be non-negative")
        return tuple(parts)
    return parse


def parse_window(text: str):
    """Parse an inclusive index window 'start,end'"""
    start, end = parse_int_tuple(2)(text)
    if start > end:
        raise argparse.ArgumentTypeError("Window start must not exceed its end")
    return start, end


def parse_function_arg(text: str) -> FunctionSpec:
    try:
        return parse_function_spec(text)
    except GraphError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='cogrowth',
        description="Walk counts, co-growth maps and generating-function identities on (bi-)regular trees",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py gen --complete-bipartite 3,4 --output K34.json
  python main.py counts --ball 3,3,6 --function geometric:1.0 --kind b --rmax 6
  python main.py counts --radial 3,4 --function delta:0 --rmax 2000 --float --output b.json
  python main.py estimate --series b.json --method ratio2
  python main.py predict --alpha 2 --d 3
  python main.py verify --identity biresolvent --graph K34.json --z1 6 --z2 5 --terms 80
  python main.py lift --graph K34.json --base 0 --radius 6 --function delta:0
        """
    )
    parser.add_argument('--config', type=str, help='YAML file overriding config.yaml')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    parser.add_argument('--no-color', action='store_true', help='Disable colored output')
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', help='Generate a graph or tree ball as Graph JSON')
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument('--complete-bipartite', type=parse_int_tuple(2), metavar='M,N')
    source.add_argument('--complete', type=int, metavar='N')
    source.add_argument('--cycle', type=int, metavar='N')
    source.add_argument('--ball', type=parse_int_tuple(3), metavar='K,L,R')
    source.add_argument('--graph', type=str, metavar='FILE', help='Existing graph (with --subdivide)')
    gen.add_argument('--subdivide', action='store_true', help='Subdivide every edge once')
    gen.add_argument('--output', type=str, help='Output file (default: stdout)')

    counts = commands.add_parser('counts', help='Compute a walk or non-backtracking count series')
    source = counts.add_mutually_exclusive_group(required=True)
    source.add_argument('--graph', type=str, metavar='FILE')
    source.add_argument('--ball', type=parse_int_tuple(3), metavar='K,L,R')
    source.add_argument('--radial', type=parse_int_tuple(2), metavar='K,L',
                        help='Radial fast path on the (k,l) tree, rooted at side U')
    function = counts.add_mutually_exclusive_group(required=True)
    function.add_argument('--function', type=parse_function_arg, metavar='SPEC',
                          help='geometric:C, delta:V, constant:C, indicator:V1,V2, radial:P0,P1,...')
    function.add_argument('--function-file', type=str, metavar='FILE')
    counts.add_argument('--base', type=int, default=0, help='Base vertex (default: 0)')
    counts.add_argument('--kind', choices=['a', 'b'], default='b',
                        help='a: non-backtracking walks, b: walks (default: b)')
    counts.add_argument('--rmax', type=int, required=True)
    counts.add_argument('--exact', dest='exact', action='store_const', const=True, default=None,
                        help='Require exact rational values')
    counts.add_argument('--float', dest='exact', action='store_const', const=False,
                        help='Log-space values only')
    counts.add_argument('--allow-truncated', action='store_true',
                        help='Allow lengths past the exactness horizon of a ball')
    counts.add_argument('--format', choices=['json', 'csv'], default='json')
    counts.add_argument('--output', type=str)
    counts.add_argument('--plot-data', type=str, metavar='FILE', help='Write (r, log value) CSV')

    estimate = commands.add_parser('estimate', help='Estimate the growth rate of a count series')
    estimate.add_argument('--series', type=str, required=True, metavar='FILE')
    estimate.add_argument('--method', choices=list(METHODS), default=GROWTH_CONFIG['default_method'])
    estimate.add_argument('--window', type=parse_window, metavar='START,END')
    estimate.add_argument('--output', type=str)

    predict = commands.add_parser('predict', help='Evaluate the co-growth map or its inverse')
    value = predict.add_mutually_exclusive_group(required=True)
    value.add_argument('--alpha', type=float)
    value.add_argument('--beta', type=float)
    predict.add_argument('--inverse', action='store_true', help='Map beta back to alpha')
    predict.add_argument('--d', type=int)
    predict.add_argument('--k', type=int)
    predict.add_argument('--l', type=int)
    predict.add_argument('--allow-degenerate', action='store_true', help='Accept d=2 (the line)')

    verify = commands.add_parser('verify', help='Verify a generating-function identity')
    verify.add_argument('--identity', choices=IDENTITIES, required=True)
    verify.add_argument('--graph', type=str, metavar='FILE')
    verify.add_argument('--z', type=float)
    verify.add_argument('--t', type=float)
    verify.add_argument('--z1', type=float)
    verify.add_argument('--z2', type=float)
    verify.add_argument('--terms', type=int, default=IDENTITY_CONFIG['default_terms'])
    verify.add_argument('--d', type=int)
    verify.add_argument('--k', type=int)
    verify.add_argument('--l', type=int)
    verify.add_argument('--rho', type=float)
    verify.add_argument('--function', type=parse_function_arg, default=parse_function_spec('delta:0'),
                        metavar='SPEC', help='Radial function for scalar identities (default: delta:0)')
    verify.add_argument('--length', type=int, default=400, help='Walk series length for scalar identities')
    verify.add_argument('--rel-tol', type=float, default=1e-6)
    verify.add_argument('--lenient-tail', action='store_true',
                        help='Report instead of failing when the tail bound exceeds the relative tolerance')
    verify.add_argument('--json', action='store_true', help='Print reports as JSON')

    lift = commands.add_parser('lift', help='Compare counts on a graph with counts on its universal cover')
    lift.add_argument('--graph', type=str, required=True, metavar='FILE')
    lift.add_argument('--base', type=int, default=0)
    lift.add_argument('--radius', type=int, required=True)
    lift.add_argument('--function', type=parse_function_arg, default=parse_function_spec('constant:1'),
                      metavar='SPEC')
    lift.add_argument('--rmax', type=int, help='Largest length compared (default: radius)')
    lift.add_argument('--output', type=str, help='Write cover ball, lifted function and rows as JSON')
    lift.add_argument('--json', action='store_true')
    return parser


def validate_args(args) -> Optional[str]:
    """Per-command parameter checks argparse cannot express; returns the problem or None"""
    if args.command == 'predict':
        if args.d is None and (args.k is None or args.l is None):
            return "predict needs --d or both --k and --l"
        if args.inverse and args.beta is None:
            return "--inverse needs --beta"
    elif args.command == 'verify':
        missing = [f"--{name}" for name in IDENTITY_PARAMETERS[args.identity] if getattr(args, name) is None]
        if missing:
            return f"--identity {args.identity} needs {', '.join(missing)}"
        if args.identity in SCALAR_IDENTITIES:
            try:
                support = args.function.radial().support_radius
            except GraphError as e:
                return str(e)
            if support is None:
                return "scalar identities need a finitely supported radial function"
    elif args.command == 'gen':
        if args.graph and not args.subdivide:
            return "--graph needs --subdivide"
    return None


class CogrowthApp:
    """Runs one parsed command and reports through the renderer"""

    def __init__(self, use_colors: Optional[bool] = None):
        self.renderer = ReportRenderer(use_colors=use_colors)

    def emit(self, text: str, output: Optional[str] = None):
        if output:
            with open(output, 'w') as file:
                file.write(text)
            logger.info(f"Wrote {output}")
        else:
            sys.stdout.write(text)

    def cmd_gen(self, args) -> int:
        if args.complete_bipartite:
            g = generate_complete_bipartite(*args.complete_bipartite)
        elif args.complete is not None:
            g = generate_complete(args.complete)
        elif args.cycle is not None:
            g = generate_cycle(args.cycle)
        elif args.ball:
            g = generate_tree_ball(*args.ball).as_graph()
        else:
            g = load_graph(args.graph)
        if args.subdivide:
            g = generate_subdivision(g)
        if args.output:
            save_graph(g, args.output)
        else:
            self.emit(dump_json(graph_to_dict(g)))
        return 0

    def _function_spec(self, args) -> FunctionSpec:
        return args.function if args.function is not None else load_function(args.function_file)

    def cmd_counts(self, args) -> int:
        spec = self._function_spec(args)
        if args.radial:
            k, l = args.radial
            engine = radial_nbw_counts if args.kind == KIND_NBW else radial_walk_counts
            series = engine(k, l, spec.radial(), args.rmax, exact=args.exact)
        else:
            g = generate_tree_ball(*args.ball) if args.ball else load_graph(args.graph)
            f = spec.realize(g, args.base)
            engine = nbw_counts if args.kind == KIND_NBW else walk_counts
            series = engine(g, args.base, f, args.rmax, exact=args.exact,
                            allow_truncated=args.allow_truncated)
        self.emit(dump_series(series, args.format), args.output)
        if args.plot_data:
            self.emit(series_plot_data(series), args.plot_data)
        return 0

    def cmd_estimate(self, args) -> int:
        series = load_series(args.series)
        estimate = estimate_growth_rate(series, args.method, args.window)
        label = 'alpha' if series.kind == KIND_NBW else 'beta'
        payload = {label: estimate.value, 'method': estimate.method,
                   'window': list(estimate.window), 'residual': estimate.residual}
        self.emit(dump_json(payload), args.output)
        logger.info(self.renderer.render_estimate(estimate, label))
        return 0

    def cmd_predict(self, args) -> int:
        if args.beta is not None:
            alpha = predict_alpha(args.beta, args.d, args.k, args.l, args.allow_degenerate)
            self.emit(dump_json({'alpha': alpha, 'beta': args.beta}))
        else:
            beta = predict_beta(args.alpha, args.d, args.k, args.l, args.allow_degenerate)
            self.emit(dump_json({'alpha': args.alpha, 'beta': beta}))
        return 0

    def _tree_series(self, k: int, l: int, args):
        profile = args.function.radial()
        a = radial_nbw_counts(k, l, profile, max(profile.support_radius, 0), exact=False)
        b = radial_walk_counts(k, l, profile, args.length - 1, exact=False)
        return a, b

    def cmd_verify(self, args) -> int:
        identity = args.identity
        if identity in ('resolvent', 'nbw-gen', 'biresolvent'):
            g = load_graph(args.graph)
            if identity == 'resolvent':
                reports = [verify_resolvent_series(g, args.z, args.terms)]
            elif identity == 'nbw-gen':
                reports = [verify_nbw_generating(g, args.t, args.terms)]
            else:
                reports = [verify_biresolvent(g, args.z1, args.z2, args.terms)]
        elif identity == 'biregular-scalar':
            a, b = self._tree_series(args.k, args.l, args)
            reports = [eval_biregular_scalar_identity(a, b, args.k, args.l, args.rho,
                                                      args.rel_tol, not args.lenient_tail)]
        else:
            a, b = self._tree_series(args.d, args.d, args)
            if identity == 'regular-scalar':
                reports = [eval_regular_scalar_identity(a, b, args.d, args.rho, args.rel_tol,
                                                        not args.lenient_tail)]
            else:
                reports = list(eval_parity_identities(a, b, args.d, args.rho, args.rel_tol,
                                                      not args.lenient_tail))

        if args.json:
            self.emit(dump_json([r.to_dict() for r in reports]))
        else:
            self.emit(self.renderer.render_identity_reports(reports) + '\n')
        return 0 if all(r.passed for r in reports) else 1

    def cmd_lift(self, args) -> int:
        g = load_graph(args.graph)
        r_max = args.radius if args.rmax is None else args.rmax
        cover, projection = universal_cover_ball(g, args.base, args.radius)
        f = args.function.realize(g, args.base)
        lifted = lift_function(f, cover)
        a_base = nbw_counts(g, args.base, f, r_max)
        a_cover = nbw_counts(cover, cover.root, lifted, r_max)
        b_base = walk_counts(g, args.base, f, r_max)
        b_cover = walk_counts(cover, cover.root, lifted, r_max)
        rows = [{'r': r, 'a_base': a_base.value(r), 'a_cover': a_cover.value(r),
                 'b_base': b_base.value(r), 'b_cover': b_cover.value(r)} for r in range(r_max + 1)]
        matched = all(row['a_base'] == row['a_cover'] and row['b_base'] == row['b_cover'] for row in rows)
        printable = [{key: value if key == 'r' else str(value) for key, value in row.items()} for row in rows]

        if args.output:
            self.emit(dump_json({
                'cover': graph_to_dict(cover.as_graph()),
                'projection': list(projection),
                'lifted_function': FunctionSpec('dense', lifted.values).to_dict(),
                'rows': printable,
                'matched': matched,
            }), args.output)
        if args.json:
            self.emit(dump_json({'rows': printable, 'matched': matched}))
        else:
            self.emit(self.renderer.render_lift(rows) + '\n')
        return 0 if matched else 1

    def dispatch(self, args) -> int:
        handler = getattr(self, f"cmd_{args.command}")
        return handler(args)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv and run one command; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        problem = validate_args(args)
        if problem:
            parser.error(problem)
    except SystemExit as e:
        return int(e.code or 0)

    # Configure logging level
    if args.verbose:
        logging.getLogger().setLevel(logging.INFO)

    try:
        if args.config and not load_config(args.config):
            raise CogrowthError(f"Config file {args.config} not found")
        app = CogrowthApp(use_colors=False if args.no_color else None)
        return app.dispatch(args)
    except CogrowthError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
