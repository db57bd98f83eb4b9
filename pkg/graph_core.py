"""
Graphs, tree balls and vertex functions
Construction, generators, truncation and universal-cover lifting
"""

import math
import logging
from bisect import bisect_left
from collections import deque
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy import sparse

from config import ENGINE_CONFIG
from errors import GraphError, SizeCapExceeded

logger = logging.getLogger(__name__)

SIDE_U = 'U'
SIDE_W = 'W'
SIDES = (SIDE_U, SIDE_W)

Number = Union[Fraction, float]


def parse_weight(value) -> Number:
    """Parse a non-negative weight, keeping it exact unless it arrives as a float"""
    if isinstance(value, bool):
        raise GraphError(f"Invalid weight {value!r}")
    if isinstance(value, float):
        result = value
        if not math.isfinite(result):
            raise GraphError(f"Weight must be finite, got {value!r}")
    elif isinstance(value, (int, Fraction)):
        result = Fraction(value)
    elif isinstance(value, str):
        try:
            result = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise GraphError(f"Invalid weight {value!r}: {e}")
    else:
        raise GraphError(f"Unsupported weight type {type(value).__name__}")
    if result < 0:
        raise GraphError(f"Weight must be non-negative, got {value!r}")
    return result


def log_weight(value: Number) -> float:
    """Natural log of a non-negative weight, -inf for zero; safe for huge rationals"""
    if value == 0:
        return -math.inf
    if isinstance(value, Fraction):
        return math.log(value.numerator) - math.log(value.denominator)
    return math.log(value)


class Graph:
    """Finite simple undirected graph with optional U/W side labels"""

    def __init__(self, adjacency: Sequence[Sequence[int]], side: Optional[Sequence[str]] = None,
                 name: str = '', validate: bool = True):
        self.adjacency: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        self.vertex_count = len(self.adjacency)
        self.side: Optional[Tuple[str, ...]] = tuple(side) if side is not None else None
        self.degrees: Tuple[int, ...] = tuple(len(nbrs) for nbrs in self.adjacency)
        self.name = name
        if validate:
            self._validate()

    def _validate(self):
        n = self.vertex_count
        if self.side is not None:
            if len(self.side) != n:
                raise GraphError(f"Side labels cover {len(self.side)} vertices, graph has {n}")
            for label in self.side:
                if label not in SIDES:
                    raise GraphError(f"Side label must be 'U' or 'W', got {label!r}")
        for u, nbrs in enumerate(self.adjacency):
            for i, v in enumerate(nbrs):
                if not 0 <= v < n:
                    raise GraphError(f"Neighbor {v} of vertex {u} out of range")
                if v == u:
                    raise GraphError(f"Loop edge at vertex {u}")
                if i > 0 and nbrs[i - 1] == v:
                    raise GraphError(f"Repeated edge ({u}, {v})")
                other = self.adjacency[v]
                j = bisect_left(other, u)
                if j == len(other) or other[j] != u:
                    raise GraphError(f"Adjacency not symmetric at edge ({u}, {v})")
                if self.side is not None and self.side[u] == self.side[v]:
                    raise GraphError(f"Edge ({u}, {v}) joins two vertices on side {self.side[u]}")

    # --- basic structure -------------------------------------------------

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def ideal_degrees(self) -> Tuple[int, ...]:
        """Degrees used for the D operator; realized degrees on a plain graph"""
        return self.degrees

    def edges(self) -> List[Tuple[int, int]]:
        """Undirected edges as (u, v) with u < v, in sorted order"""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def check_vertex(self, v: int):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.vertex_count:
            raise GraphError(f"Vertex {v!r} out of range for a graph on {self.vertex_count} vertices")

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        j = bisect_left(nbrs, v)
        return j < len(nbrs) and nbrs[j] == v

    @property
    def biregular_degrees(self) -> Optional[Tuple[int, int]]:
        """(d_U, d_W) when side labels exist and degrees are constant per side"""
        if self.side is None:
            return None
        per_side: Dict[str, set] = {SIDE_U: set(), SIDE_W: set()}
        for label, degree in zip(self.side, self.degrees):
            per_side[label].add(degree)
        if len(per_side[SIDE_U]) != 1 or len(per_side[SIDE_W]) != 1:
            return None
        return per_side[SIDE_U].pop(), per_side[SIDE_W].pop()

    @property
    def regular_degree(self) -> Optional[int]:
        distinct = set(self.degrees)
        return distinct.pop() if len(distinct) == 1 else None

    def side_mask(self, label: str) -> np.ndarray:
        if self.side is None:
            raise GraphError("Graph has no side labels")
        return np.array([s == label for s in self.side], dtype=bool)

    # --- matrices --------------------------------------------------------

    def adjacency_matrix(self, dtype=np.int64) -> sparse.csr_matrix:
        """Adjacency operator A as a CSR matrix"""
        indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        indices = np.fromiter((v for nbrs in self.adjacency for v in nbrs), dtype=np.int64,
                              count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=dtype)
        return sparse.csr_matrix((data, indices, indptr), shape=(self.vertex_count, self.vertex_count))

    def dense_adjacency(self) -> np.ndarray:
        return self.adjacency_matrix(dtype=np.float64).toarray()

    def degree_array(self, ideal: bool = True) -> np.ndarray:
        return np.array(self.ideal_degrees if ideal else self.degrees, dtype=np.int64)

    # --- traversal -------------------------------------------------------

    def distances_from(self, source: int) -> List[int]:
        """BFS distances from source; -1 for unreachable vertices"""
        self.check_vertex(source)
        dist = [-1] * self.vertex_count
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        return min(self.distances_from(0)) >= 0

    def without_edge(self, u: int, v: int) -> 'Graph':
        """Copy of the graph with edge uv removed (plain Graph, realized degrees)"""
        self.check_vertex(u)
        self.check_vertex(v)
        if not self.has_edge(u, v):
            raise GraphError(f"No edge ({u}, {v}) to remove")
        adjacency = [list(nbrs) for nbrs in self.adjacency]
        adjacency[u].remove(v)
        adjacency[v].remove(u)
        return Graph(adjacency, self.side, name=f"{self.name}-({u},{v})", validate=False)

    def as_graph(self) -> 'Graph':
        return Graph(self.adjacency, self.side, name=self.name, validate=False)

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.vertex_count))
        G.add_edges_from(self.edges())
        if self.side is not None:
            nx.set_node_attributes(G, dict(enumerate(self.side)), 'side')
        return G

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adjacency == other.adjacency and self.side == other.side

    def __hash__(self):
        return hash((self.adjacency, self.side))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ''
        return f"<Graph{label}: {self.vertex_count} vertices, {self.edge_count} edges>"


class RootedBall(Graph):
    """Radius-R ball of a tree, indexed breadth-first from its root"""

    def __init__(self, adjacency, side, depth: Sequence[int], parent: Sequence[int], radius: int,
                 ideal_degrees: Sequence[int], name: str = ''):
        super().__init__(adjacency, side, name=name, validate=False)
        self.root = 0
        self.radius = radius
        self.depth: Tuple[int, ...] = tuple(depth)
        self.parent: Tuple[int, ...] = tuple(parent)
        self._ideal_degrees = tuple(ideal_degrees)

    @property
    def ideal_degrees(self) -> Tuple[int, ...]:
        """Degrees of the underlying infinite tree, not of the truncated leaves"""
        return self._ideal_degrees

    def horizon(self, vertex: int) -> int:
        """Largest walk length from vertex that never feels the truncation"""
        self.check_vertex(vertex)
        return self.radius - self.depth[vertex]

    def sphere(self, n: int) -> List[int]:
        return [v for v, d in enumerate(self.depth) if d == n]

    def sphere_counts(self) -> List[int]:
        counts = [0] * (self.radius + 1)
        for d in self.depth:
            counts[d] += 1
        return counts


class TreeBall(RootedBall):
    """Ball of the (k,l)-bi-regular tree, root on side U with degree k"""

    def __init__(self, k: int, l: int, adjacency, side, depth, parent, radius, ideal_degrees):
        super().__init__(adjacency, side, depth, parent, radius, ideal_degrees,
                         name=f"ball({k},{l},{radius})")
        self.k = k
        self.l = l


class CoverBall(RootedBall):
    """Ball of the universal cover of a finite graph, rooted over a base vertex"""

    def __init__(self, base_graph: Graph, base: int, projection: Sequence[int], adjacency, side,
                 depth, parent, radius, ideal_degrees):
        super().__init__(adjacency, side, depth, parent, radius, ideal_degrees,
                         name=f"cover({base_graph.name or 'graph'},{base},{radius})")
        self.base_graph = base_graph
        self.base = base
        self.projection: Tuple[int, ...] = tuple(projection)


# --- construction ----------------------------------------------------------

def build_graph(edge_list: Iterable[Sequence[int]], side: Optional[Sequence[str]] = None,
                vertex_count: Optional[int] = None, name: str = '') -> Graph:
    """
    Build a simple graph from an edge list

    Args:
        edge_list: pairs of vertex indices
        side: optional per-vertex labels in {'U', 'W'}
        vertex_count: number of vertices; defaults to the largest index + 1
            (or the number of side labels)

    Returns:
        Validated Graph
    """
    edges = [tuple(e) for e in edge_list]
    if vertex_count is None:
        largest = max((max(e) for e in edges if e), default=-1)
        vertex_count = max(largest + 1, len(side) if side is not None else 0)
    adjacency: List[List[int]] = [[] for _ in range(vertex_count)]
    seen = set()
    for edge in edges:
        if len(edge) != 2:
            raise GraphError(f"Edge {edge!r} must have exactly two endpoints")
        u, v = (int(x) for x in edge)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphError(f"Edge ({u}, {v}) out of range for {vertex_count} vertices")
        if u == v:
            raise GraphError(f"Loop edge at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"Duplicate edge ({u}, {v})")
        seen.add(key)
        adjacency[u].append(v)
        adjacency[v].append(u)
    return Graph(adjacency, side, name=name)


def graph_from_networkx(G: nx.Graph, side: Optional[Sequence[str]] = None, name: str = '') -> Graph:
    """Convert a networkx graph, relabelling nodes by their sorted order"""
    nodes = sorted(G.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    edges = [(index[u], index[v]) for u, v in G.edges()]
    return build_graph(edges, side, vertex_count=len(nodes), name=name)


def generate_complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}: the first m vertices on side U (degree n), the rest on side W"""
    if m < 1 or n < 1:
        raise GraphError(f"Complete bipartite sides must be non-empty, got ({m}, {n})")
    side = [SIDE_U] * m + [SIDE_W] * n
    return graph_from_networkx(nx.complete_bipartite_graph(m, n), side, name=f"K{m},{n}")


def generate_complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"Complete graph needs at least one vertex, got {n}")
    return graph_from_networkx(nx.complete_graph(n), name=f"K{n}")


def generate_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"A simple cycle needs at least 3 vertices, got {n}")
    return graph_from_networkx(nx.cycle_graph(n), name=f"C{n}")


def generate_subdivision(g: Graph) -> Graph:
    """
    Subdivide every edge once

    Original vertices keep their indices and go to side W; the new vertex
    for the m-th edge (sorted order) gets index |V| + m and side U.
    """
    n = g.vertex_count
    edges = []
    for m, (u, v) in enumerate(g.edges()):
        middle = n + m
        edges.append((u, middle))
        edges.append((middle, v))
    side = [SIDE_W] * n + [SIDE_U] * g.edge_count
    return build_graph(edges, side, vertex_count=n + g.edge_count, name=f"sub({g.name or 'graph'})")


def check_tree_degrees(k: int, l: int):
    if k < 2 or l < 2:
        raise GraphError(f"Tree degrees must be at least 2, got ({k}, {l})")


def sphere_size(k: int, l: int, r: int) -> int:
    """Number of vertices at distance r from a side-U root of the (k,l) tree"""
    check_tree_degrees(k, l)
    if r < 0:
        raise GraphError(f"Radius must be non-negative, got {r}")
    if r == 0:
        return 1
    return k * (l - 1) ** (r // 2) * (k - 1) ** ((r - 1) // 2)


def ball_size(k: int, l: int, radius: int) -> int:
    return sum(sphere_size(k, l, n) for n in range(radius + 1))


def generate_tree_ball(k: int, l: int, radius: int, max_vertices: Optional[int] = None) -> TreeBall:
    """
    Radius-R ball of the (k,l)-bi-regular tree

    Vertices are numbered breadth-first, root 0, children in creation order,
    so the construction is reproducible bit for bit.
    """
    check_tree_degrees(k, l)
    if radius < 0:
        raise GraphError(f"Radius must be non-negative, got {radius}")
    cap = ENGINE_CONFIG['max_vertices'] if max_vertices is None else max_vertices
    total = ball_size(k, l, radius)
    if total > cap:
        raise SizeCapExceeded(f"ball({k},{l},{radius}) has {total} vertices, cap is {cap}")

    adjacency: List[List[int]] = [[] for _ in range(total)]
    depth = [0] * total
    parent = [-1] * total
    side = [SIDE_U] * total
    ideal = [k] * total
    next_index = 1
    start, stop = 0, 1
    for n in range(radius):
        children = k if n == 0 else (k if n % 2 == 0 else l) - 1
        child_side = SIDE_W if n % 2 == 0 else SIDE_U
        child_degree = l if n % 2 == 0 else k
        for v in range(start, stop):
            for _ in range(children):
                c = next_index
                next_index += 1
                adjacency[v].append(c)
                adjacency[c].append(v)
                depth[c] = n + 1
                parent[c] = v
                side[c] = child_side
                ideal[c] = child_degree
        start, stop = stop, next_index

    logger.info(f"Built tree ball ({k},{l},R={radius}) with {total} vertices")
    return TreeBall(k, l, adjacency, side, depth, parent, radius, ideal)


def universal_cover_ball(g: Graph, base: int, radius: int,
                         max_vertices: Optional[int] = None) -> Tuple[CoverBall, Tuple[int, ...]]:
    """
    Radius-R ball of the universal cover of g, rooted over base

    Cover vertices are the non-backtracking paths from base of length at
    most R; each is projected to its final vertex.

    Returns:
        (cover ball, projection) with projection[cover vertex] = base vertex
    """
    g.check_vertex(base)
    if radius < 0:
        raise GraphError(f"Radius must be non-negative, got {radius}")
    if not g.is_connected():
        raise GraphError("Universal cover requires a connected graph")
    cap = ENGINE_CONFIG['max_vertices'] if max_vertices is None else max_vertices

    projection = [base]
    parent = [-1]
    depth = [0]
    adjacency: List[List[int]] = [[]]
    start, stop = 0, 1
    for n in range(radius):
        for x in range(start, stop):
            image = projection[x]
            came_from = projection[parent[x]] if parent[x] >= 0 else None
            for w in g.adjacency[image]:
                if w == came_from:
                    continue
                if len(projection) >= cap:
                    raise SizeCapExceeded(f"Cover ball of radius {radius} exceeds cap {cap}")
                c = len(projection)
                projection.append(w)
                parent.append(x)
                depth.append(n + 1)
                adjacency.append([x])
                adjacency[x].append(c)
        start, stop = stop, len(projection)

    side = [g.side[p] for p in projection] if g.side is not None else None
    ideal = [g.degrees[p] for p in projection]
    ball = CoverBall(g, base, projection, adjacency, side, depth, parent, radius, ideal)
    logger.info(f"Built cover ball over vertex {base} with {ball.vertex_count} vertices")
    return ball, ball.projection


# --- vertex functions ------------------------------------------------------

class VertexFunction:
    """Non-negative weights aligned with a graph's vertex indexing"""

    def __init__(self, values: Iterable):
        self.values: Tuple[Number, ...] = tuple(parse_weight(x) for x in values)

    @classmethod
    def delta(cls, n: int, vertex: int) -> 'VertexFunction':
        if not 0 <= vertex < n:
            raise GraphError(f"Vertex {vertex} out of range for {n} vertices")
        return cls(Fraction(int(i == vertex)) for i in range(n))

    @classmethod
    def indicator(cls, n: int, vertices: Iterable[int]) -> 'VertexFunction':
        chosen = set(vertices)
        for v in chosen:
            if not 0 <= v < n:
                raise GraphError(f"Vertex {v} out of range for {n} vertices")
        return cls(Fraction(int(i in chosen)) for i in range(n))

    @classmethod
    def constant(cls, n: int, value=1) -> 'VertexFunction':
        weight = parse_weight(value)
        return cls([weight] * n)

    @classmethod
    def from_radial(cls, profile: 'RadialProfile', distances: Sequence[int]) -> 'VertexFunction':
        """f(v) = profile(dist(v)); unreachable vertices (distance -1) get 0"""
        return cls(profile.value(d) if d >= 0 else Fraction(0) for d in distances)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, vertex: int) -> Number:
        return self.values[vertex]

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexFunction):
            return NotImplemented
        return self.values == other.values

    def __add__(self, other: 'VertexFunction') -> 'VertexFunction':
        self.check_aligned(len(other))
        return VertexFunction(a + b for a, b in zip(self.values, other.values))

    def scale(self, factor) -> 'VertexFunction':
        c = parse_weight(factor)
        return VertexFunction(c * x for x in self.values)

    def check_aligned(self, vertex_count: int):
        if len(self.values) != vertex_count:
            raise GraphError(f"Function has {len(self.values)} values, graph has {vertex_count} vertices")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.values)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.values) if x > 0)

    @property
    def mass(self) -> Number:
        """Sum of all values"""
        if self.is_exact:
            return sum(self.values, Fraction(0))
        return math.fsum(float(x) for x in self.values)

    @cached_property
    def scaled_integers(self) -> Tuple[Tuple[int, ...], int]:
        """(numerators, common denominator) with f = numerators / denominator"""
        if not self.is_exact:
            raise GraphError("Function is not exact")
        denominator = math.lcm(*(x.denominator for x in self.values)) if self.values else 1
        return tuple(x.numerator * (denominator // x.denominator) for x in self.values), denominator

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.values], dtype=np.float64)

    def __repr__(self) -> str:
        return f"<VertexFunction: {len(self.values)} values, support {len(self.support)}>"


class RadialProfile:
    """Distance-indexed weights: an explicit sequence or a geometric base c with f(n) = c^n"""

    def __init__(self, profile: Optional[Iterable] = None, base=None):
        if (profile is None) == (base is None):
            raise GraphError("Give exactly one of an explicit profile or a geometric base")
        self.profile: Optional[Tuple[Number, ...]] = None
        self.base: Optional[Number] = None
        if profile is not None:
            self.profile = tuple(parse_weight(x) for x in profile)
        else:
            self.base = parse_weight(base)
            if self.base == 0:
                raise GraphError("Geometric base must be positive")

    @classmethod
    def explicit(cls, values: Iterable) -> 'RadialProfile':
        return cls(profile=values)

    @classmethod
    def geometric(cls, base) -> 'RadialProfile':
        return cls(base=base)

    @classmethod
    def shell(cls, radius: int, weight=1) -> 'RadialProfile':
        """Indicator of the sphere at the given radius, scaled by weight"""
        return cls(profile=[0] * radius + [weight])

    @property
    def kind(self) -> str:
        return 'geometric' if self.base is not None else 'radial'

    @property
    def is_exact(self) -> bool:
        if self.base is not None:
            return isinstance(self.base, Fraction)
        return all(isinstance(x, Fraction) for x in self.profile)

    @property
    def support_radius(self) -> Optional[int]:
        """Largest distance carrying weight; None when the support is infinite"""
        if self.base is not None:
            return None
        nonzero = [n for n, x in enumerate(self.profile) if x > 0]
        return nonzero[-1] if nonzero else -1

    def is_zero_at(self, n: int) -> bool:
        if self.base is not None:
            return False
        return n >= len(self.profile) or self.profile[n] == 0

    def value(self, n: int) -> Number:
        if self.base is not None:
            return self.base ** n
        if n < len(self.profile):
            return self.profile[n]
        return Fraction(0) if self.is_exact else 0.0

    def log_value(self, n: int) -> float:
        if self.base is not None:
            return n * log_weight(self.base)
        return log_weight(self.value(n))

    def log_values(self, count: int) -> np.ndarray:
        """log f(n) for n = 0..count-1"""
        if self.base is not None:
            return np.arange(count, dtype=np.float64) * log_weight(self.base)
        out = np.full(count, -np.inf)
        for n, x in enumerate(self.profile[:count]):
            out[n] = log_weight(x)
        return out

    def truncate(self, m: int) -> 'RadialProfile':
        """Explicit profile agreeing with this one up to distance m and zero beyond"""
        if m < 0:
            raise GraphError(f"Truncation radius must be non-negative, got {m}")
        return RadialProfile(profile=[self.value(n) for n in range(m + 1)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return self.profile == other.profile and self.base == other.base

    def __repr__(self) -> str:
        if self.base is not None:
            return f"<RadialProfile geometric base={self.base}>"
        return f"<RadialProfile {list(map(str, self.profile))}>"


def lift_function(f: VertexFunction, cover: CoverBall) -> VertexFunction:
    """Pull f back along the cover projection: f~(x) = f(projection(x))"""
    f.check_aligned(cover.base_graph.vertex_count)
    return VertexFunction(f.values[p] for p in cover.projection)


def truncate_function(f: VertexFunction, g: Graph, center: int, m: int) -> VertexFunction:
    """Finitely supported truncation: keep f within distance m of center, zero elsewhere"""
    f.check_aligned(g.vertex_count)
    if m < 0:
        raise GraphError(f"Truncation radius must be non-negative, got {m}")
    dist = g.distances_from(center)
    zero = Fraction(0) if f.is_exact else 0.0
    return VertexFunction(x if 0 <= d <= m else zero for x, d in zip(f.values, dist))


def radial_function(g: Graph, center: int, profile: RadialProfile) -> VertexFunction:
    """Vertex function f(v) = profile(dist(center, v)) on a finite graph or ball"""
    return VertexFunction.from_radial(profile, g.distances_from(center))
