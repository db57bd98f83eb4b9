"""
File formats
Graph, function, count-series and report files in JSON/CSV, plus inline function specs
"""

import io
import csv
import json
import math
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Union

from errors import GraphError
from graph_core import Graph, RadialProfile, VertexFunction, build_graph, parse_weight, radial_function
from walk_engine import CountSeries

logger = logging.getLogger(__name__)

FUNCTION_KINDS = ('dense', 'radial', 'geometric', 'indicator', 'delta', 'constant')


def _weight_text(value) -> str:
    return str(value) if isinstance(value, Fraction) else repr(float(value))


# --- graphs ----------------------------------------------------------------

def graph_to_dict(g: Graph) -> Dict:
    data = {'vertex_count': g.vertex_count, 'edges': [list(e) for e in g.edges()]}
    if g.side is not None:
        data['side'] = list(g.side)
    if g.name:
        data['name'] = g.name
    return data


def graph_from_dict(data: Dict) -> Graph:
    if 'edges' not in data:
        raise GraphError("Graph file needs an 'edges' list")
    return build_graph(data['edges'], data.get('side'), vertex_count=data.get('vertex_count'),
                       name=data.get('name', ''))


def save_graph(g: Graph, path: str):
    with open(path, 'w') as file:
        json.dump(graph_to_dict(g), file, indent=2)
        file.write('\n')


def load_graph(path: str) -> Graph:
    with open(path, 'r') as file:
        return graph_from_dict(json.load(file))


# --- functions -------------------------------------------------------------

class FunctionSpec:
    """
    A vertex function as written in a file or on the command line

    Radial kinds (radial, geometric) need a center to become per-vertex
    values; the rest are already per-vertex.
    """

    def __init__(self, kind: str, payload):
        if kind not in FUNCTION_KINDS:
            raise GraphError(f"Unknown function kind {kind!r}, expected one of {', '.join(FUNCTION_KINDS)}")
        self.kind = kind
        self.payload = payload

    def realize(self, g: Graph, center: int = 0) -> VertexFunction:
        """Per-vertex values on g; radial kinds are measured from center"""
        n = g.vertex_count
        if self.kind == 'dense':
            f = VertexFunction(self.payload)
            f.check_aligned(n)
            return f
        if self.kind in ('radial', 'geometric'):
            return radial_function(g, center, self.radial())
        if self.kind == 'indicator':
            return VertexFunction.indicator(n, self.payload)
        if self.kind == 'delta':
            return VertexFunction.delta(n, self.payload)
        return VertexFunction.constant(n, self.payload)

    def radial(self) -> RadialProfile:
        """The radial profile about the root, for kinds that have one"""
        if self.kind == 'radial':
            return RadialProfile.explicit(self.payload)
        if self.kind == 'geometric':
            return RadialProfile.geometric(self.payload)
        if self.kind == 'delta' and self.payload == 0:
            return RadialProfile.shell(0)
        if self.kind == 'constant' and parse_weight(self.payload) == 1:
            return RadialProfile.geometric(1)
        raise GraphError(f"Function kind {self.kind!r} is not radial about the root")

    def to_dict(self) -> Dict:
        if self.kind == 'dense':
            return {'kind': 'dense', 'values': [_weight_text(x) for x in self.payload]}
        if self.kind == 'radial':
            return {'kind': 'radial', 'profile': [_weight_text(x) for x in self.payload]}
        if self.kind == 'geometric':
            return {'kind': 'geometric', 'base': _weight_text(self.payload)}
        if self.kind == 'indicator':
            return {'kind': 'indicator', 'vertices': list(self.payload)}
        if self.kind == 'delta':
            return {'kind': 'delta', 'vertex': self.payload}
        return {'kind': 'constant', 'value': _weight_text(self.payload)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"<FunctionSpec {self.kind}>"


def function_from_dict(data: Dict) -> FunctionSpec:
    kind = data.get('kind')
    try:
        if kind == 'dense':
            return FunctionSpec(kind, [parse_weight(x) for x in data['values']])
        if kind == 'radial':
            return FunctionSpec(kind, [parse_weight(x) for x in data['profile']])
        if kind == 'geometric':
            return FunctionSpec(kind, parse_weight(data['base']))
        if kind == 'indicator':
            return FunctionSpec(kind, [int(v) for v in data['vertices']])
        if kind == 'delta':
            return FunctionSpec(kind, int(data['vertex']))
        if kind == 'constant':
            return FunctionSpec(kind, parse_weight(data.get('value', '1')))
    except KeyError as e:
        raise GraphError(f"Function of kind {kind!r} is missing field {e}")
    raise GraphError(f"Unknown function kind {kind!r}")


def parse_function_spec(text: str) -> FunctionSpec:
    """
    Inline function: geometric:1.2, delta:v, constant:c, indicator:v1,v2,...,
    radial:p0,p1,... or dense:x0,x1,...
    """
    kind, sep, rest = text.partition(':')
    kind = kind.strip()
    if not sep and kind == 'constant':
        rest = '1'
    elif not sep:
        raise GraphError(f"Function spec {text!r} must look like kind:values")
    items = [x.strip() for x in rest.split(',') if x.strip()]
    try:
        if kind == 'geometric':
            return FunctionSpec(kind, parse_weight(rest))
        if kind == 'delta':
            return FunctionSpec(kind, int(rest))
        if kind == 'constant':
            return FunctionSpec(kind, parse_weight(rest))
        if kind == 'indicator':
            return FunctionSpec(kind, [int(v) for v in items])
        if kind in ('radial', 'dense'):
            return FunctionSpec(kind, [parse_weight(x) for x in items])
    except ValueError as e:
        raise GraphError(f"Invalid function spec {text!r}: {e}")
    raise GraphError(f"Unknown function kind {kind!r}")


def load_function(path: str) -> FunctionSpec:
    with open(path, 'r') as file:
        return function_from_dict(json.load(file))


# --- count series ----------------------------------------------------------

def _log_text(value: float) -> Optional[float]:
    return None if value == -math.inf else value


def series_to_dict(s: CountSeries) -> Dict:
    entries = []
    for r in range(len(s)):
        exact = s.exact_value(r)
        entries.append({
            'r': r,
            'value': str(exact) if exact is not None else None,
            'log_value': _log_text(s.logvals[r]),
            'exact_flag': s.exact_flags[r],
        })
    return {
        'kind': s.kind,
        'base': s.base,
        'provenance': s.provenance,
        'mass': s.mass,
        'base_side': s.base_side,
        'tail_zero_from': s.tail_zero_from,
        'has_exact': s.exact is not None,
        'entries': entries,
    }


def series_from_dict(data: Dict) -> CountSeries:
    entries = sorted(data['entries'], key=lambda e: e['r'])
    logvals = [-math.inf if e['log_value'] is None else float(e['log_value']) for e in entries]
    exact = None
    if data.get('has_exact', False):
        exact = [Fraction(e['value']) if e['value'] is not None else None for e in entries]
    return CountSeries(data['kind'], data['base'], logvals, exact=exact,
                       exact_flags=[bool(e['exact_flag']) for e in entries],
                       mass=data.get('mass'), base_side=data.get('base_side'),
                       tail_zero_from=data.get('tail_zero_from'), provenance=data.get('provenance', ''))


_CSV_META = ('kind', 'base', 'provenance', 'mass', 'base_side', 'tail_zero_from', 'has_exact')


def series_to_csv(s: CountSeries) -> str:
    """CSV with columns r,value,log_value,exact_flag; metadata in leading '#' lines"""
    data = series_to_dict(s)
    out = io.StringIO()
    for key in _CSV_META:
        out.write(f"# {key}={json.dumps(data[key])}\n")
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['r', 'value', 'log_value', 'exact_flag'])
    for e in data['entries']:
        writer.writerow([e['r'], '' if e['value'] is None else e['value'],
                         '' if e['log_value'] is None else repr(e['log_value']),
                         int(e['exact_flag'])])
    return out.getvalue()


def series_from_csv(text: str) -> CountSeries:
    meta: Dict = {}
    rows: List[str] = []
    for line in text.splitlines():
        if line.startswith('#'):
            key, _, value = line[1:].strip().partition('=')
            meta[key] = json.loads(value)
        elif line.strip():
            rows.append(line)
    entries = []
    for row in csv.DictReader(rows):
        entries.append({
            'r': int(row['r']),
            'value': row['value'] or None,
            'log_value': float(row['log_value']) if row['log_value'] else None,
            'exact_flag': row['exact_flag'] == '1',
        })
    meta['entries'] = entries
    meta.setdefault('kind', 'b')
    meta.setdefault('base', 0)
    return series_from_dict(meta)


def series_plot_data(s: CountSeries) -> str:
    """(r, log value) pairs for external plotting; zero entries are skipped"""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['r', 'log_value'])
    for r, value in enumerate(s.logvals):
        if value != -math.inf:
            writer.writerow([r, repr(value)])
    return out.getvalue()


def dump_series(s: CountSeries, fmt: str = 'json') -> str:
    if fmt == 'csv':
        return series_to_csv(s)
    if fmt == 'json':
        return json.dumps(series_to_dict(s), indent=2) + '\n'
    raise ValueError(f"Unknown series format {fmt!r}")


def load_series(path: str) -> CountSeries:
    with open(path, 'r') as file:
        text = file.read()
    if path.endswith('.csv'):
        return series_from_csv(text)
    return series_from_dict(json.loads(text))


def dump_json(data: Union[Dict, List]) -> str:
    return json.dumps(data, indent=2) + '\n'
