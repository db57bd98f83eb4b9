"""
Walk and non-backtracking walk counts
b_r(f) = <f, A^r delta_e> and a_r(f) = <f, A_r delta_e> on finite graphs and balls,
brute-force enumerators used as oracles, and radial fast paths on bi-regular trees
"""

import math
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.special import logsumexp

from config import ENGINE_CONFIG
from errors import GraphError, TruncationError, WorkCapExceeded
from graph_core import (Graph, RadialProfile, RootedBall, VertexFunction, check_tree_degrees,
                        log_weight, sphere_size)

logger = logging.getLogger(__name__)

KIND_WALK = 'b'
KIND_NBW = 'a'

_INT64_SAFE = 2 ** 62
_LN2 = math.log(2.0)


def _fraction_bits(value: Fraction) -> int:
    return value.numerator.bit_length() + value.denominator.bit_length()


class CountSeries:
    """
    The sequence a_r(f) or b_r(f) for r = 0..r_max

    Every entry has a natural-log magnitude (-inf for zero); entries small
    enough to keep exactly also carry the exact rational value.
    """

    def __init__(self, kind: str, base: int, logvals: Sequence[float],
                 exact: Optional[Sequence[Optional[Fraction]]] = None,
                 exact_flags: Optional[Sequence[bool]] = None,
                 mass: Optional[float] = None,
                 base_side: Optional[str] = None,
                 tail_zero_from: Optional[int] = None,
                 provenance: str = ''):
        if kind not in (KIND_WALK, KIND_NBW):
            raise ValueError(f"Series kind must be 'a' or 'b', got {kind!r}")
        self.kind = kind
        self.base = base
        self.logvals: Tuple[float, ...] = tuple(float(x) for x in logvals)
        self.exact: Optional[Tuple[Optional[Fraction], ...]] = tuple(exact) if exact is not None else None
        if self.exact is not None and len(self.exact) != len(self.logvals):
            raise ValueError("Exact and log representations differ in length")
        self.exact_flags: Tuple[bool, ...] = (tuple(exact_flags) if exact_flags is not None
                                              else (True,) * len(self.logvals))
        self.mass = mass
        self.base_side = base_side
        self.tail_zero_from = tail_zero_from
        self.provenance = provenance

    @property
    def r_max(self) -> int:
        return len(self.logvals) - 1

    def __len__(self) -> int:
        return len(self.logvals)

    def exact_value(self, r: int) -> Optional[Fraction]:
        if self.exact is None:
            return None
        return self.exact[r]

    def value(self, r: int):
        """Exact value when stored, otherwise the float magnitude (may be inf)"""
        exact = self.exact_value(r)
        if exact is not None:
            return exact
        return self.float_values()[r]

    def log_values(self) -> np.ndarray:
        return np.array(self.logvals, dtype=np.float64)

    def float_values(self) -> np.ndarray:
        with np.errstate(over='ignore'):
            return np.exp(self.log_values())

    def is_truncated(self) -> bool:
        return not all(self.exact_flags)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountSeries):
            return NotImplemented
        return (self.kind, self.base, self.logvals, self.exact, self.exact_flags, self.mass,
                self.base_side, self.tail_zero_from, self.provenance) == \
               (other.kind, other.base, other.logvals, other.exact, other.exact_flags, other.mass,
                other.base_side, other.tail_zero_from, other.provenance)

    def __repr__(self) -> str:
        return f"<CountSeries {self.kind} base={self.base} r_max={self.r_max} {self.provenance}>"


# --- brute-force oracles ---------------------------------------------------

def _check_work(g: Graph, r: int, work_cap: Optional[int]):
    cap = ENGINE_CONFIG['work_cap'] if work_cap is None else work_cap
    work = g.vertex_count * max(g.max_degree, 1) ** r
    if work > cap:
        raise WorkCapExceeded(f"Enumerating length-{r} walks needs ~{work} steps, cap is {cap}")


def enumerate_walks(g: Graph, e: int, r: int, work_cap: Optional[int] = None) -> List[int]:
    """Count length-r walks from e to every vertex by depth-first enumeration"""
    g.check_vertex(e)
    if r < 0:
        raise GraphError(f"Walk length must be non-negative, got {r}")
    _check_work(g, r, work_cap)
    counts = [0] * g.vertex_count
    if r == 0:
        counts[e] = 1
        return counts
    adjacency = g.adjacency
    stack = [(e, 0)]
    while stack:
        v, steps = stack.pop()
        if steps == r - 1:
            for w in adjacency[v]:
                counts[w] += 1
        else:
            stack.extend((w, steps + 1) for w in adjacency[v])
    return counts


def enumerate_nbw(g: Graph, e: int, r: int, work_cap: Optional[int] = None) -> List[int]:
    """Count length-r non-backtracking walks from e to every vertex by depth-first enumeration"""
    g.check_vertex(e)
    if r < 0:
        raise GraphError(f"Walk length must be non-negative, got {r}")
    _check_work(g, r, work_cap)
    counts = [0] * g.vertex_count
    if r == 0:
        counts[e] = 1
        return counts
    adjacency = g.adjacency
    stack = [(e, -1, 0)]
    while stack:
        v, prev, steps = stack.pop()
        if steps == r - 1:
            for w in adjacency[v]:
                if w != prev:
                    counts[w] += 1
        else:
            stack.extend((w, v, steps + 1) for w in adjacency[v] if w != prev)
    return counts


# --- walk vectors ----------------------------------------------------------

class _WalkVector:
    """
    Vector of walk counts: exact (int64, then Python ints) until it outgrows
    the log threshold, afterwards floats times exp(log_scale)
    """

    __slots__ = ('data', 'log_scale')

    def __init__(self, data: np.ndarray, log_scale: float = 0.0):
        self.data = data
        self.log_scale = log_scale

    @property
    def is_exact(self) -> bool:
        return self.data.dtype != np.float64

    def max_bits(self) -> int:
        if self.data.dtype == np.int64:
            return int(np.abs(self.data).max(initial=0)).bit_length()
        return max((abs(int(x)).bit_length() for x in self.data), default=0)

    def to_float(self) -> '_WalkVector':
        if not self.is_exact:
            return self
        shift = max(0, self.max_bits() - 900)
        data = np.array([float(int(x) >> shift) for x in self.data], dtype=np.float64)
        return _WalkVector(data, shift * _LN2).normalized()

    def normalized(self) -> '_WalkVector':
        peak = float(np.max(self.data, initial=0.0))
        if peak <= 0.0:
            return self
        return _WalkVector(self.data / peak, self.log_scale + math.log(peak))

    def rescaled(self, log_scale: float) -> np.ndarray:
        """Float data expressed relative to another scale"""
        with np.errstate(under='ignore'):
            return self.data * math.exp(self.log_scale - log_scale)


class _WalkOperator:
    """Applies A and the degree correction of the non-backtracking recurrence"""

    def __init__(self, g: Graph, threshold_bits: int, ideal_degrees: bool = True):
        self.adjacency = g.adjacency
        self.A_int = g.adjacency_matrix(np.int64)
        self.A_float = self.A_int.astype(np.float64)
        self.max_degree = max(g.max_degree, 1)
        self.degrees = g.degree_array(ideal=ideal_degrees)
        self.max_ideal = int(self.degrees.max(initial=1))
        self.threshold_bits = threshold_bits
        self.switched = False

    def delta(self, e: int) -> _WalkVector:
        data = np.zeros(len(self.adjacency), dtype=np.int64)
        data[e] = 1
        return _WalkVector(data)

    def _settle(self, vec: _WalkVector) -> _WalkVector:
        if vec.data.dtype == object and vec.max_bits() > self.threshold_bits:
            if not self.switched:
                logger.info(f"Walk vector passed {self.threshold_bits} bits, continuing in log space")
                self.switched = True
            return vec.to_float()
        return vec

    def apply(self, vec: _WalkVector) -> _WalkVector:
        """A vec"""
        data = vec.data
        if data.dtype == np.int64:
            if int(np.abs(data).max(initial=0)) * self.max_degree < _INT64_SAFE:
                return _WalkVector(self.A_int @ data)
            data = data.astype(object)
        if data.dtype == object:
            out = np.empty(len(self.adjacency), dtype=object)
            for u, nbrs in enumerate(self.adjacency):
                out[u] = sum((data[v] for v in nbrs), 0)
            return self._settle(_WalkVector(out))
        return _WalkVector(self.A_float @ data, vec.log_scale).normalized()

    def subtract_degree_term(self, head: _WalkVector, tail: _WalkVector, shift: int) -> _WalkVector:
        """head - (D - shift) tail, clamped at zero in float mode"""
        coeff = self.degrees - shift
        if head.is_exact and tail.is_exact:
            if head.data.dtype == np.int64 and tail.data.dtype == np.int64:
                if int(np.abs(tail.data).max(initial=0)) * self.max_ideal < _INT64_SAFE:
                    return _WalkVector(head.data - coeff * tail.data)
            out = head.data.astype(object) - coeff.astype(object) * tail.data.astype(object)
            return self._settle(_WalkVector(out))
        head, tail = head.to_float(), tail.to_float()
        out = head.data - coeff * tail.rescaled(head.log_scale)
        np.maximum(out, 0.0, out=out)
        return _WalkVector(out, head.log_scale).normalized()


def _pair(f: VertexFunction, support: Sequence[int], vec: _WalkVector,
          want_exact: bool, threshold_bits: int) -> Tuple[Optional[Fraction], float]:
    """<f, vec> as (exact value or None, natural log)"""
    if vec.is_exact and want_exact:
        numerators, denominator = f.scaled_integers
        total = sum(numerators[j] * int(vec.data[j]) for j in support)
        value = Fraction(total, denominator)
        if _fraction_bits(value) <= threshold_bits:
            return value, log_weight(value)
        return None, log_weight(value)
    if vec.is_exact:
        vec = vec.to_float()
    weights = np.array([float(f.values[j]) for j in support], dtype=np.float64)
    dot = float(np.dot(weights, vec.data[list(support)])) if support else 0.0
    if dot <= 0.0:
        return None, -math.inf
    return None, math.log(dot) + vec.log_scale


def _horizon(g: Graph, e: int, r_max: int, allow_truncated: bool) -> Optional[int]:
    if not isinstance(g, RootedBall):
        return None
    horizon = g.horizon(e)
    if r_max > horizon and not allow_truncated:
        raise TruncationError(f"r_max={r_max} exceeds the exactness horizon {horizon} of {g.name} "
                              f"at vertex {e}; pass allow_truncated=True for truncated-ball values")
    if r_max > horizon:
        logger.warning(f"Counts beyond r={horizon} on {g.name} are truncated-ball values")
    return horizon


def _is_forest(g: Graph) -> bool:
    components = 0
    seen = [False] * g.vertex_count
    for v in range(g.vertex_count):
        if not seen[v]:
            components += 1
            for u, d in enumerate(g.distances_from(v)):
                if d >= 0:
                    seen[u] = True
    return g.edge_count == g.vertex_count - components


def _nbw_zero_tail(g: Graph, e: int, f: VertexFunction) -> Optional[int]:
    """On a tree a_r(f) vanishes once r passes the farthest support vertex"""
    if not (isinstance(g, RootedBall) or _is_forest(g)):
        return None
    dist = g.distances_from(e)
    reach = [dist[v] for v in f.support if dist[v] >= 0]
    return max(reach, default=-1) + 1


def _prepare(g: Graph, e: int, f: VertexFunction, r_max: int, exact: Optional[bool],
             threshold_bits: Optional[int]) -> Tuple[bool, int, Tuple[int, ...]]:
    g.check_vertex(e)
    f.check_aligned(g.vertex_count)
    if r_max < 0:
        raise GraphError(f"r_max must be non-negative, got {r_max}")
    want_exact = f.is_exact if exact is None else exact
    if want_exact and not f.is_exact:
        raise GraphError("Exact counts requested for a function with floating-point values")
    bits = ENGINE_CONFIG['log_threshold_bits'] if threshold_bits is None else threshold_bits
    return want_exact, bits, f.support


def _finish(kind: str, g: Graph, e: int, f: VertexFunction, pairs, horizon: Optional[int],
            tail_zero_from: Optional[int], want_exact: bool) -> CountSeries:
    exact_values = [p[0] for p in pairs] if want_exact else None
    flags = [horizon is None or r <= horizon for r in range(len(pairs))]
    return CountSeries(kind, e, [p[1] for p in pairs], exact=exact_values, exact_flags=flags,
                       mass=float(f.mass), base_side=g.side[e] if g.side is not None else None,
                       tail_zero_from=tail_zero_from, provenance=g.name)


def walk_counts(g: Graph, e: int, f: VertexFunction, r_max: int, exact: Optional[bool] = None,
                allow_truncated: bool = False, threshold_bits: Optional[int] = None) -> CountSeries:
    """
    b_r(f) for r = 0..r_max by iterated sparse application of A to delta_e

    Args:
        g: finite graph or rooted ball
        e: base vertex
        f: non-negative vertex function aligned with g
        r_max: largest walk length
        exact: keep exact rationals (defaults to whether f is exact)
        allow_truncated: on a ball, accept lengths beyond the exactness horizon
            and flag those entries instead of raising
    """
    want_exact, bits, support = _prepare(g, e, f, r_max, exact, threshold_bits)
    horizon = _horizon(g, e, r_max, allow_truncated)
    op = _WalkOperator(g, bits)
    vec = op.delta(e)
    pairs = []
    for r in range(r_max + 1):
        pairs.append(_pair(f, support, vec, want_exact, bits))
        if r < r_max:
            vec = op.apply(vec)
    return _finish(KIND_WALK, g, e, f, pairs, horizon, None, want_exact)


def nbw_counts(g: Graph, e: int, f: VertexFunction, r_max: int, exact: Optional[bool] = None,
               allow_truncated: bool = False, threshold_bits: Optional[int] = None) -> CountSeries:
    """
    a_r(f) for r = 0..r_max via u_{r+1} = A u_r - (D - I) u_{r-1}

    Starts from u_0 = delta_e, u_1 = A u_0, u_2 = A u_1 - D u_0. On balls D
    holds the degrees of the infinite tree up to the exactness horizon.
    """
    want_exact, bits, support = _prepare(g, e, f, r_max, exact, threshold_bits)
    horizon = _horizon(g, e, r_max, allow_truncated)
    # past the horizon ideal leaf degrees would drive counts negative; use the finite ball instead
    op = _WalkOperator(g, bits, ideal_degrees=horizon is None or r_max <= horizon)
    prev, vec = None, op.delta(e)
    pairs = []
    for r in range(r_max + 1):
        pairs.append(_pair(f, support, vec, want_exact, bits))
        if r == r_max:
            break
        step = op.apply(vec)
        if prev is not None:
            step = op.subtract_degree_term(step, prev, 0 if r == 1 else 1)
        prev, vec = vec, step
    return _finish(KIND_NBW, g, e, f, pairs, horizon, _nbw_zero_tail(g, e, f), want_exact)


# --- matrix level ----------------------------------------------------------

def _fits_int64(g: Graph, r: int) -> bool:
    """Entries of A^r, and of A_r with its intermediate products, stay below max_degree^(r+1)"""
    return max(g.max_degree, 1) ** (r + 1) < _INT64_SAFE


def _object_adjacency_product(g: Graph, M: np.ndarray) -> np.ndarray:
    out = np.zeros_like(M)
    for v, nbrs in enumerate(g.adjacency):
        for u in nbrs:
            out[v] += M[u]
    return out


def walk_matrix(g: Graph, r: int) -> np.ndarray:
    """A^r as an exact integer matrix"""
    if r < 0:
        raise GraphError(f"Walk length must be non-negative, got {r}")
    n = g.vertex_count
    if _fits_int64(g, r):
        A = g.adjacency_matrix(np.int64)
        result = sparse.identity(n, dtype=np.int64, format='csr')
        for _ in range(r):
            result = A @ result
        return np.array(result.toarray(), dtype=object)
    result = np.identity(n, dtype=np.int64).astype(object)
    for _ in range(r):
        result = _object_adjacency_product(g, result)
    return result


def nbw_matrix(g: Graph, r: int, method: str = 'recurrence') -> np.ndarray:
    """
    A_r, the exact matrix of length-r non-backtracking walk counts

    method='recurrence' uses A_2 = A^2 - D and A_{s+1} = A A_s - (D - I) A_{s-1}
    with the realized degrees of g, as sparse int64 products while entries
    stay in range and Python integers beyond; method='enumerate' stacks
    enumerate_nbw rows.
    """
    if r < 0:
        raise GraphError(f"Walk length must be non-negative, got {r}")
    n = g.vertex_count
    if method == 'enumerate':
        return np.array([enumerate_nbw(g, e, r) for e in range(n)], dtype=object).reshape(n, n)
    if method != 'recurrence':
        raise ValueError(f"Unknown method {method!r}")
    degrees = np.array(g.degrees, dtype=np.int64)

    if _fits_int64(g, r):
        A = g.adjacency_matrix(np.int64)
        prev = sparse.identity(n, dtype=np.int64, format='csr')
        if r == 0:
            return np.array(prev.toarray(), dtype=object)
        current = A
        for s in range(1, r):
            scale = sparse.diags(degrees if s == 1 else degrees - 1, format='csr')
            prev, current = current, A @ current - scale @ prev
        return np.array(current.toarray(), dtype=object)

    logger.info(f"A_{r} leaves int64 range, using Python integers")
    prev = np.identity(n, dtype=np.int64).astype(object)
    if r == 0:
        return prev
    current = np.array(g.adjacency_matrix(np.int64).toarray(), dtype=object)
    column = np.array([int(x) for x in degrees], dtype=object)[:, None]
    for s in range(1, r):
        scale = column if s == 1 else column - 1
        prev, current = current, _object_adjacency_product(g, current) - scale * prev
    return current


# --- radial fast path ------------------------------------------------------

def _shell_multipliers(k: int, l: int, count: int) -> List[int]:
    """Number of ways to step outward from depth n: k at the root, degree - 1 elsewhere"""
    return [k if n == 0 else (k if n % 2 == 0 else l) - 1 for n in range(count)]


def _log_pairing(logs: np.ndarray) -> float:
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return -math.inf
    return float(logsumexp(finite))


class _ExactRadialPairing:
    """Exact <f, N_r> for shell walk counts N_r, with f a rational radial profile"""

    def __init__(self, profile: RadialProfile):
        self.profile = profile
        if profile.base is not None:
            self.p = profile.base.numerator
            self.q = profile.base.denominator
            self.step_bits = max(self.p.bit_length(), self.q.bit_length())
            self.p_powers = [1]
            self.q_powers = [1]
        else:
            self.denominator = math.lcm(*(x.denominator for x in profile.profile)) if profile.profile else 1
            self.numerators = [x.numerator * (self.denominator // x.denominator) for x in profile.profile]
            self.step_bits = 0

    def cost_bits(self, shell_bits: int, r: int) -> int:
        return shell_bits + self.step_bits * r

    def _powers(self, r: int):
        while len(self.p_powers) <= r:
            self.p_powers.append(self.p_powers[-1] * self.p)
            self.q_powers.append(self.q_powers[-1] * self.q)
        return self.p_powers, self.q_powers

    def pair(self, shells: List[int], r: int) -> Fraction:
        if self.profile.base is not None:
            pp, qq = self._powers(r)
            total = 0
            for n in range(r % 2, r + 1, 2):
                if shells[n]:
                    total += shells[n] * pp[n] * qq[r - n]
            return Fraction(total, qq[r])
        limit = min(r + 1, len(self.numerators))
        total = sum(shells[n] * self.numerators[n] for n in range(limit))
        return Fraction(total, self.denominator)


def _radial_mass(k: int, l: int, profile: RadialProfile) -> float:
    if profile.base is not None:
        return math.inf
    return math.fsum(sphere_size(k, l, n) * float(x) for n, x in enumerate(profile.profile))


def radial_walk_counts(k: int, l: int, f: RadialProfile, r_max: int, exact: Optional[bool] = None,
                       threshold_bits: Optional[int] = None) -> CountSeries:
    """
    b_r(f) from the root of the (k,l) tree for a radial f, in O(r_max^2)

    Tracks N_r(n), the number of length-r walks from the root ending at
    depth n: N_{r+1}(n) = m_{n-1} N_r(n-1) + N_r(n+1), with m_0 = k and
    m_n = deg(depth n) - 1. Then b_r(f) = sum_n N_r(n) f(n). The log-space
    recursion always runs; exact values are kept while they stay below the
    log threshold.
    """
    check_tree_degrees(k, l)
    if r_max < 0:
        raise GraphError(f"r_max must be non-negative, got {r_max}")
    if not isinstance(f, RadialProfile):
        raise GraphError("Radial walk counts need a RadialProfile")
    want_exact = f.is_exact if exact is None else exact
    if want_exact and not f.is_exact:
        raise GraphError("Exact counts requested for a profile with floating-point values")
    bits = ENGINE_CONFIG['log_threshold_bits'] if threshold_bits is None else threshold_bits

    size = r_max + 1
    multipliers = _shell_multipliers(k, l, size)
    log_mult = np.log(np.array(multipliers, dtype=np.float64))
    log_f = f.log_values(size)
    shell_logs = np.full(size, -np.inf)
    shell_logs[0] = 0.0

    pairing = _ExactRadialPairing(f) if want_exact else None
    shells = [1] + [0] * r_max
    exact_values: List[Optional[Fraction]] = []
    logvals = np.empty(size)
    for r in range(size):
        value = None
        if pairing is not None:
            shell_bits = max(x.bit_length() for x in shells[:r + 1])
            if pairing.cost_bits(shell_bits, r) <= bits:
                value = pairing.pair(shells, r)
            else:
                logger.info(f"Radial series passed {bits} bits at r={r}, continuing in log space")
                pairing = None
        exact_values.append(value)
        logvals[r] = log_weight(value) if value is not None else _log_pairing(shell_logs[:r + 1] + log_f[:r + 1])
        if r == r_max:
            break
        stepped = np.full(size, -np.inf)
        stepped[1:r + 2] = shell_logs[:r + 1] + log_mult[:r + 1]
        stepped[:r] = np.logaddexp(stepped[:r], shell_logs[1:r + 1])
        shell_logs = stepped
        if pairing is not None:
            nxt = [0] * size
            for n in range(r % 2, r + 1, 2):
                count = shells[n]
                if count:
                    nxt[n + 1] += count * multipliers[n]
                    if n > 0:
                        nxt[n - 1] += count
            shells = nxt

    return CountSeries(KIND_WALK, 0, logvals, exact=exact_values if want_exact else None,
                       mass=_radial_mass(k, l, f), base_side='U',
                       provenance=f"radial({k},{l})")


def _log_sphere_size(k: int, l: int, r: int) -> float:
    if r == 0:
        return 0.0
    return math.log(k) + (r // 2) * math.log(l - 1) + ((r - 1) // 2) * math.log(k - 1)


def radial_nbw_counts(k: int, l: int, f: RadialProfile, r_max: int, exact: Optional[bool] = None,
                      threshold_bits: Optional[int] = None) -> CountSeries:
    """a_r(f) = sphere_size(k, l, r) * f(r) from the root of the (k,l) tree"""
    check_tree_degrees(k, l)
    if r_max < 0:
        raise GraphError(f"r_max must be non-negative, got {r_max}")
    if not isinstance(f, RadialProfile):
        raise GraphError("Radial non-backtracking counts need a RadialProfile")
    want_exact = f.is_exact if exact is None else exact
    if want_exact and not f.is_exact:
        raise GraphError("Exact counts requested for a profile with floating-point values")
    bits = ENGINE_CONFIG['log_threshold_bits'] if threshold_bits is None else threshold_bits

    exact_values: List[Optional[Fraction]] = []
    logvals = []
    active = want_exact
    for r in range(r_max + 1):
        log_value = -math.inf if f.is_zero_at(r) else _log_sphere_size(k, l, r) + f.log_value(r)
        value = None
        if active:
            value = sphere_size(k, l, r) * f.value(r)
            if _fraction_bits(value) > bits:
                logger.info(f"Radial non-backtracking series passed {bits} bits at r={r}")
                value, active = None, False
            else:
                log_value = log_weight(value)
        exact_values.append(value)
        logvals.append(log_value)

    support = f.support_radius
    return CountSeries(KIND_NBW, 0, logvals, exact=exact_values if want_exact else None,
                       mass=_radial_mass(k, l, f), base_side='U',
                       tail_zero_from=None if support is None else support + 1,
                       provenance=f"radial({k},{l})")


# --- vertex independence on trees ------------------------------------------

def edge_split_relations(tree: Graph, u: int, v: int, f: VertexFunction, r_max: int) -> Dict[str, list]:
    """
    Both sides of the relations behind vertex independence on a finite tree

    With T' the forest left after deleting edge uv:
        a_r(f; v) = a_r(f|T'; v) + a_{r-1}(f|T'; u)
        b_r(f; v) >= b_{r-1}(f; u)
    All counts use realized degrees, so they hold exactly for every r.
    """
    plain = tree.as_graph()
    forest = plain.without_edge(u, v)
    a_v = nbw_counts(plain, v, f, r_max)
    a_v_split = nbw_counts(forest, v, f, r_max)
    a_u_split = nbw_counts(forest, u, f, r_max)
    b_v = walk_counts(plain, v, f, r_max)
    b_u = walk_counts(plain, u, f, r_max)
    return {
        'a_v': [a_v.value(r) for r in range(r_max + 1)],
        'a_split': [a_v_split.value(r) + (a_u_split.value(r - 1) if r > 0 else 0)
                    for r in range(r_max + 1)],
        'b_v': [b_v.value(r) for r in range(1, r_max + 1)],
        'b_u_shifted': [b_u.value(r - 1) for r in range(1, r_max + 1)],
    }
