"""
Generating-function and resolvent identities
Finite-graph operator identities checked against dense inverses, scalar identities on trees checked through pairings
"""

import math
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from config import IDENTITY_CONFIG
from errors import (GraphError, InsufficientSeriesError, PreconditionError,
                    SingularMatrixError)
from graph_core import SIDE_U, Graph, RadialProfile, check_tree_degrees
from hashimoto import power_iteration
from walk_engine import KIND_NBW, KIND_WALK, CountSeries, radial_nbw_counts, radial_walk_counts

logger = logging.getLogger(__name__)

TAIL_RIGOROUS = 'rigorous'
TAIL_EMPIRICAL = 'empirical'


@dataclass
class IdentityReport:
    """Both sides of one identity, their gap and the truncation tail that bounds it"""
    name: str
    params: Dict[str, float]
    lhs: float
    rhs: float
    abs_gap: float
    rel_gap: float
    terms: int
    tail_bound: float
    tolerance: float
    passed: bool
    aux_gap: Optional[float] = None
    tail_kind: str = TAIL_RIGOROUS
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> 'IdentityReport':
        return cls(**data)


def _report(name: str, params: Dict, lhs: float, rhs: float, gap: float, terms: int,
            tail: float, tolerance: float, **extra) -> IdentityReport:
    scale = abs(rhs)
    rel_gap = gap / scale if scale > 0 else gap
    passed = gap <= tail + tolerance
    aux_gap = extra.get('aux_gap')
    if aux_gap is not None:
        passed = passed and aux_gap <= tolerance
    report = IdentityReport(name, params, lhs, rhs, gap, rel_gap, terms, tail, tolerance, passed, **extra)
    level = logging.INFO if passed else logging.WARNING
    logger.log(level, f"{name}: gap {gap:.3e}, tail bound {tail:.3e}, {'pass' if passed else 'FAIL'}")
    return report


def _geometric_tail(q: float, n: int) -> float:
    """sum_{r >= n} q^r for 0 <= q < 1"""
    if q == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(q)) / (1.0 - q)


# --- finite graphs ---------------------------------------------------------

def adjacency_norm(g: Graph, tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """||A|| of a finite graph, by power iteration on A^2"""
    if g.edge_count == 0:
        return 0.0
    A = g.adjacency_matrix(np.float64)
    value, _ = power_iteration(A @ A, tol, max_iter, lazy=False)
    return math.sqrt(value)


def _dense_inverse(M: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > IDENTITY_CONFIG['singular_cond']:
        raise SingularMatrixError(f"{what} is numerically singular (condition number {cond:.3e})")
    return linalg.inv(M)


def _check_outside_spectrum(value: float, bound: float, what: str):
    if value <= bound * (1.0 + IDENTITY_CONFIG['spectrum_margin']):
        raise PreconditionError(f"{what}: {value:.6g} is not beyond the spectral bound {bound:.6g}")


def verify_resolvent_series(g: Graph, z: float, n_terms: Optional[int] = None) -> IdentityReport:
    """
    (z - A)^{-1} = sum_r z^{-r-1} A^r

    Args:
        g: finite graph
        z: real parameter with |z| > ||A||
        n_terms: number of series terms (r = 0..n_terms-1)
    """
    n_terms = IDENTITY_CONFIG['default_terms'] if n_terms is None else n_terms
    norm = adjacency_norm(g)
    _check_outside_spectrum(abs(z), norm, "Resolvent parameter |z|")
    A = g.dense_adjacency()
    identity = np.eye(g.vertex_count)
    lhs = _dense_inverse(z * identity - A, "z - A")

    rhs = np.zeros_like(lhs)
    term = identity / z
    for _ in range(n_terms):
        rhs += term
        term = term @ A / z

    q = norm / abs(z)
    tail = _geometric_tail(q, n_terms) / abs(z)
    gap = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return _report('resolvent', {'z': z, 'norm_A': norm}, float(np.max(np.abs(lhs), initial=0.0)),
                   float(np.max(np.abs(rhs), initial=0.0)), gap, n_terms, tail,
                   IDENTITY_CONFIG['arithmetic_tol'])


def nbw_matrix_series(g: Graph, count: int) -> List[np.ndarray]:
    """A_0..A_{count-1} in floating point, by A_{r+1} = A A_r - (D - I) A_{r-1}"""
    A = g.dense_adjacency()
    n = g.vertex_count
    identity = np.eye(n)
    D = np.diag(np.array(g.degrees, dtype=np.float64))
    matrices = [identity, A]
    if count >= 3:
        matrices.append(A @ A - D)
    while len(matrices) < count:
        matrices.append(A @ matrices[-1] - (D - identity) @ matrices[-2])
    return matrices[:count]


def _nbw_tail(g: Graph, t: float, n_terms: int, row_sums: List[float]) -> Tuple[float, str]:
    """
    Bound on sum_{r >= n} |t|^r ||A_r||_inf

    Rigorous from ||A_r||_inf <= D(D-1)^(r-1) with D the max degree, when that
    converges; otherwise extrapolated from the computed row sums.
    """
    at = abs(t)
    delta = g.max_degree
    if delta <= 1:
        bounds = [1.0, float(delta)]
        return math.fsum(at ** r * bounds[r] for r in range(n_terms, 2)), TAIL_RIGOROUS
    if at * (delta - 1) < 1.0:
        if n_terms == 0:
            return 1.0 + delta * at / (1.0 - at * (delta - 1)), TAIL_RIGOROUS
        head = delta * at ** n_terms * (delta - 1) ** (n_terms - 1)
        return head / (1.0 - at * (delta - 1)), TAIL_RIGOROUS

    nonzero = [s for s in row_sums[-3:] if s > 0]
    if len(row_sums) < 3 or len(nonzero) < 3:
        raise PreconditionError(f"Cannot establish convergence of the non-backtracking series at t={t}")
    growth = math.sqrt(row_sums[-1] / row_sums[-3])
    if at * growth >= 1.0:
        raise PreconditionError(f"Non-backtracking series diverges at t={t} "
                                f"(empirical growth {growth:.4g})")
    logger.warning(f"Non-backtracking tail bound at t={t} is empirical (growth {growth:.4g})")
    last = row_sums[-1] * at ** (len(row_sums) - 1)
    return last * at * growth / (1.0 - at * growth), TAIL_EMPIRICAL


def verify_nbw_generating(g: Graph, t: float, n_terms: Optional[int] = None) -> IdentityReport:
    """(1 - t^2)(I + t^2 (D - I) - t A)^{-1} = sum_r t^r A_r"""
    n_terms = IDENTITY_CONFIG['default_terms'] if n_terms is None else n_terms
    A = g.dense_adjacency()
    identity = np.eye(g.vertex_count)
    D = np.diag(np.array(g.degrees, dtype=np.float64))
    lhs = (1.0 - t * t) * _dense_inverse(identity + t * t * (D - identity) - t * A,
                                         "I + t^2 (D - I) - t A")

    matrices = nbw_matrix_series(g, n_terms)
    rhs = np.zeros_like(lhs)
    power = 1.0
    for M in matrices:
        rhs += power * M
        power *= t
    row_sums = [float(np.abs(M).sum(axis=1).max(initial=0.0)) for M in matrices]
    tail, kind = _nbw_tail(g, t, n_terms, row_sums)
    gap = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return _report('nbw-generating', {'t': t}, float(np.max(np.abs(lhs), initial=0.0)),
                   float(np.max(np.abs(rhs), initial=0.0)), gap, n_terms, tail,
                   IDENTITY_CONFIG['arithmetic_tol'], tail_kind=kind)


def verify_biresolvent(g: Graph, z1: float, z2: float, n_terms: Optional[int] = None) -> IdentityReport:
    """
    (Z - A)^{-1} = sum_r (z1 z2)^{-r} A^{2r} Z^{-1} + sum_r (z1 z2)^{-(r+1)} A^{2r+1}

    Z = z1 I_U + z2 I_W. Also checks Z^{-1} A Z^{-1} = (z1 z2)^{-1} A, reported
    as the auxiliary gap.
    """
    if g.side is None:
        raise PreconditionError("Bi-resolvent needs side labels on the graph")
    n_terms = IDENTITY_CONFIG['default_terms'] if n_terms is None else n_terms
    norm = adjacency_norm(g)
    w = z1 * z2
    _check_outside_spectrum(abs(w), norm * norm, "Bi-resolvent parameter |z1 z2|")

    A = g.dense_adjacency()
    on_u = g.side_mask(SIDE_U)
    z_diag = np.where(on_u, z1, z2).astype(np.float64)
    Z_inv = np.diag(1.0 / z_diag)
    lhs = _dense_inverse(np.diag(z_diag) - A, "Z - A")

    rhs = np.zeros_like(lhs)
    even = np.eye(g.vertex_count)
    for r in range(n_terms):
        odd = even @ A
        rhs += even @ Z_inv / w ** r + odd / w ** (r + 1)
        even = odd @ A

    q = norm * norm / abs(w)
    tail = _geometric_tail(q, n_terms) * (max(1.0 / abs(z1), 1.0 / abs(z2)) + norm / abs(w))
    aux_gap = float(np.max(np.abs(Z_inv @ A @ Z_inv - A / w), initial=0.0))
    gap = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return _report('biresolvent', {'z1': z1, 'z2': z2, 'norm_A': norm},
                   float(np.max(np.abs(lhs), initial=0.0)), float(np.max(np.abs(rhs), initial=0.0)),
                   gap, n_terms, tail, IDENTITY_CONFIG['arithmetic_tol'], aux_gap=aux_gap)


# --- scalar identities on trees --------------------------------------------

def _check_pair(a: CountSeries, b: CountSeries):
    if a.kind != KIND_NBW or b.kind != KIND_WALK:
        raise PreconditionError("Expected a non-backtracking series and a walk series, in that order")
    if a.is_truncated() or b.is_truncated():
        raise PreconditionError("Scalar identities need series that are exact on the infinite tree")
    if a.tail_zero_from is None or a.tail_zero_from > len(a):
        raise PreconditionError("Non-backtracking series must cover the whole support of f")
    if b.mass is None or not math.isfinite(b.mass):
        raise PreconditionError("Tail bound needs a finitely supported f with known mass")


def _log_sum(log_terms: np.ndarray) -> float:
    finite = log_terms[np.isfinite(log_terms)]
    if finite.size == 0:
        return 0.0
    return float(np.exp(logsumexp(finite)))


def _mask(count: int, parity: Optional[int]) -> np.ndarray:
    index = np.arange(count)
    if parity is None:
        return np.ones(count, dtype=bool)
    return index % 2 == parity


def _nbw_side(a: CountSeries, rho: float, parity: Optional[int]) -> float:
    """(rho - 1/rho)^{-1} sum_r a_r rho^{-r}"""
    logs = a.log_values()
    index = np.arange(len(a))
    terms = np.where(_mask(len(a), parity), logs - index * math.log(rho), -np.inf)
    return _log_sum(terms) / (rho - 1.0 / rho)


def _finish_scalar(name: str, params: Dict, lhs: float, rhs: float, terms: int, tail: float,
                   rel_tol: float, strict_tail: bool) -> IdentityReport:
    if strict_tail and tail > rel_tol * abs(rhs):
        raise InsufficientSeriesError(f"{name}: tail bound {tail:.3e} exceeds {rel_tol:.1e} relative "
                                      f"with {terms} terms; lengthen the walk series")
    tolerance = IDENTITY_CONFIG['arithmetic_tol'] + rel_tol * abs(rhs)
    return _report(name, params, lhs, rhs, abs(lhs - rhs), terms, tail, tolerance)


def _regular_sides(a: CountSeries, b: CountSeries, d: int, rho: float,
                   parity: Optional[int]) -> Tuple[float, float, float]:
    z = rho + (d - 1) / rho
    logs = b.log_values()
    index = np.arange(len(b))
    terms = np.where(_mask(len(b), parity), logs - (index + 1) * math.log(z), -np.inf)
    lhs = _log_sum(terms)
    q = 2.0 * math.sqrt(d - 1) / z
    tail = b.mass / z * _geometric_tail(q, len(b))
    return lhs, _nbw_side(a, rho, parity), tail


def _check_regular(d: int, rho: float):
    if d < 2:
        raise GraphError(f"Degree must be at least 2, got {d}")
    if rho <= math.sqrt(d - 1):
        raise PreconditionError(f"rho={rho} must exceed sqrt(d-1)={math.sqrt(d - 1):.6g}")


def eval_regular_scalar_identity(a: CountSeries, b: CountSeries, d: int, rho: float,
                                 rel_tol: float = 1e-6, strict_tail: bool = True) -> IdentityReport:
    """
    sum_r b_r(f) (rho + (d-1)/rho)^{-r-1} = (rho - 1/rho)^{-1} sum_r a_r(f) rho^{-r}

    The walk side is truncated at len(b) terms; its tail is bounded through
    b_r(f) <= (sum f) (2 sqrt(d-1))^r. The call fails when that bound exceeds
    rel_tol relative to the right-hand side, unless strict_tail is False.
    """
    _check_regular(d, rho)
    _check_pair(a, b)
    lhs, rhs, tail = _regular_sides(a, b, d, rho, None)
    return _finish_scalar('regular-scalar', {'d': d, 'rho': rho, 'z': rho + (d - 1) / rho},
                          lhs, rhs, len(b), tail, rel_tol, strict_tail)


def eval_parity_identities(a: CountSeries, b: CountSeries, d: int, rho: float, rel_tol: float = 1e-6,
                           strict_tail: bool = True) -> Tuple[IdentityReport, IdentityReport]:
    """The scalar identity split into even-index and odd-index sums"""
    _check_regular(d, rho)
    _check_pair(a, b)
    reports = []
    for parity, name in ((0, 'parity-even'), (1, 'parity-odd')):
        lhs, rhs, tail = _regular_sides(a, b, d, rho, parity)
        # an empty parity class (0 = 0) has no relative scale to meet
        reports.append(_finish_scalar(name, {'d': d, 'rho': rho}, lhs, rhs, len(b), tail,
                                      rel_tol, strict_tail and rhs > 0))
    return reports[0], reports[1]


def biregular_threshold(k: int, l: int) -> float:
    return ((k - 1) * (l - 1)) ** 0.25


def eval_biregular_scalar_identity(a: CountSeries, b: CountSeries, k: int, l: int, rho: float,
                                   rel_tol: float = 1e-6, strict_tail: bool = True) -> IdentityReport:
    """
    z1^{-1} sum_r b_{2r} (z1 z2)^{-r} + sum_r b_{2r+1} (z1 z2)^{-(r+1)} = (rho - 1/rho)^{-1} sum_r a_r rho^{-r}

    with z1 = rho + (k-1)/rho and z2 = rho + (l-1)/rho, for series rooted on
    side U. Tail bound from b_r(f) <= (sum f)(sqrt(k-1) + sqrt(l-1))^r.
    """
    check_tree_degrees(k, l)
    threshold = biregular_threshold(k, l)
    if rho <= threshold:
        raise PreconditionError(f"rho={rho} must exceed ((k-1)(l-1))^(1/4)={threshold:.6g}")
    _check_pair(a, b)
    if b.base_side != SIDE_U or a.base_side != SIDE_U:
        raise PreconditionError("Bi-regular identity expects series rooted on side U")

    z1 = rho + (k - 1) / rho
    z2 = rho + (l - 1) / rho
    log_w = math.log(z1 * z2)
    logs = b.log_values()
    index = np.arange(len(b))
    half = index // 2
    weights = np.where(index % 2 == 0, -math.log(z1) - half * log_w, -(half + 1) * log_w)
    lhs = _log_sum(logs + weights)
    rhs = _nbw_side(a, rho, None)

    norm = math.sqrt(k - 1) + math.sqrt(l - 1)
    q = norm / math.sqrt(z1 * z2)
    tail = b.mass * max(1.0 / z1, 1.0 / math.sqrt(z1 * z2)) * _geometric_tail(q, len(b))
    return _finish_scalar('biregular-scalar', {'k': k, 'l': l, 'rho': rho, 'z1': z1, 'z2': z2},
                          lhs, rhs, len(b), tail, rel_tol, strict_tail)


def truncation_sequence(k: int, l: int, profile: RadialProfile, rho: float, length: int,
                        max_radius: Optional[int] = None, rel_tol: float = 1e-6,
                        strict_tail: bool = True) -> List[IdentityReport]:
    """
    Scalar identity sides for the truncations f_m, m = 0..max_radius

    Both sides are non-decreasing in m and converge to the values for f.
    max_radius defaults to the support radius of an explicit profile.
    """
    if max_radius is None:
        max_radius = profile.support_radius
        if max_radius is None:
            raise PreconditionError("Geometric profiles need an explicit max_radius")
    reports = []
    for m in range(max_radius + 1):
        truncated = profile.truncate(m)
        a = radial_nbw_counts(k, l, truncated, m, exact=False)
        b = radial_walk_counts(k, l, truncated, length, exact=False)
        report = eval_biregular_scalar_identity(a, b, k, l, rho, rel_tol, strict_tail)
        report.params['m'] = m
        reports.append(report)
    return reports
