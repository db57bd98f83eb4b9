"""
Growth rates and co-growth maps
Estimates alpha(f), beta(f) from count series; forward and inverse co-growth formulas for regular and bi-regular trees
"""

import math
import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from config import GROWTH_CONFIG
from errors import GraphError, ParityError, PreconditionError
from graph_core import check_tree_degrees
from walk_engine import CountSeries

logger = logging.getLogger(__name__)

METHODS = ('root', 'ratio', 'ratio2', 'logfit')


@dataclass
class GrowthEstimate:
    value: float
    method: str
    window: Tuple[int, int]
    residual: float

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['window'] = list(self.window)
        return data


def default_window(length: int, fraction: Optional[float] = None) -> Tuple[int, int]:
    """Final share of the series, at least four entries (inclusive bounds)"""
    if length < 1:
        raise PreconditionError("Cannot estimate growth of an empty series")
    fraction = GROWTH_CONFIG['window_fraction'] if fraction is None else fraction
    width = min(length, max(4, math.ceil(length * fraction)))
    return length - width, length - 1


def estimate_growth_rate(s: CountSeries, method: Optional[str] = None,
                         window: Optional[Tuple[int, int]] = None) -> GrowthEstimate:
    """
    Estimate the exponential growth rate limsup s_r^(1/r)

    Args:
        s: count series
        method: 'root' (r-th root at the end of the window), 'ratio'
            (mean step ratio), 'ratio2' (mean two-step ratio, safe for
            bipartite zero patterns) or 'logfit' (least-squares slope)
        window: inclusive (start, end) index range, default the final 10%

    Returns:
        GrowthEstimate with residual = spread of the per-index estimates
    """
    method = GROWTH_CONFIG['default_method'] if method is None else method
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}, expected one of {', '.join(METHODS)}")
    start, end = default_window(len(s)) if window is None else window
    if not 0 <= start <= end < len(s):
        raise PreconditionError(f"Window ({start}, {end}) outside series of length {len(s)}")

    logs = s.log_values()[start:end + 1]
    index = np.arange(start, end + 1)
    finite = np.isfinite(logs)
    if not finite.any():
        if s.tail_zero_from is not None and s.tail_zero_from <= start:
            return GrowthEstimate(0.0, method, (start, end), 0.0)
        raise PreconditionError(f"Series is zero throughout the window ({start}, {end})")

    if method == 'root':
        usable = finite & (index > 0)
        if not usable.any():
            raise PreconditionError("Root estimate needs a nonzero entry beyond r=0")
        roots = np.exp(logs[usable] / index[usable])
        return GrowthEstimate(float(roots[-1]), method, (start, end), float(np.ptp(roots)))

    if method in ('ratio', 'ratio2'):
        step = 1 if method == 'ratio' else 2
        both = finite[:-step] & finite[step:] if len(logs) > step else np.zeros(0, dtype=bool)
        if not both.any():
            raise ParityError(f"No pairs of nonzero entries {step} apart in window ({start}, {end}); "
                              f"try ratio2 for bipartite series")
        rates = np.exp((logs[step:][both] - logs[:-step][both]) / step)
        return GrowthEstimate(float(rates.mean()), method, (start, end), float(np.ptp(rates)))

    if finite.sum() < 2:
        raise PreconditionError("Log fit needs at least two nonzero entries")
    slope, intercept = np.polyfit(index[finite], logs[finite], 1)
    residuals = logs[finite] - (slope * index[finite] + intercept)
    return GrowthEstimate(float(math.exp(slope)), method, (start, end), float(np.ptp(residuals)))


# --- co-growth maps --------------------------------------------------------

def _check_regular_degree(d: int, allow_degenerate: bool):
    if d < 2 or (d == 2 and not allow_degenerate):
        raise GraphError(f"Regular co-growth needs d >= 3, got {d}")
    if d == 2:
        logger.warning("d=2 is the line; the co-growth formula is only proved for d >= 3")


def _check_alpha(alpha: float):
    if alpha < 0 or not math.isfinite(alpha):
        raise PreconditionError(f"alpha must be finite and non-negative, got {alpha}")


def cogrowth_threshold(k: int, l: int) -> float:
    """alpha threshold ((k-1)(l-1))^(1/4), sqrt(d-1) when k = l = d"""
    check_tree_degrees(k, l)
    return ((k - 1) * (l - 1)) ** 0.25


def walk_norm(k: int, l: int) -> float:
    """||A|| on the (k,l) tree: sqrt(k-1) + sqrt(l-1)"""
    check_tree_degrees(k, l)
    return math.sqrt(k - 1) + math.sqrt(l - 1)


def cogrowth_regular(alpha: float, d: int, allow_degenerate: bool = False) -> float:
    """beta = 2 sqrt(d-1) when alpha <= sqrt(d-1), otherwise alpha + (d-1)/alpha"""
    _check_regular_degree(d, allow_degenerate)
    _check_alpha(alpha)
    if alpha <= math.sqrt(d - 1):
        return 2.0 * math.sqrt(d - 1)
    return alpha + (d - 1) / alpha


def _warn_if_line(k: int, l: int):
    if k == 2 and l == 2:
        logger.warning("(2,2) is the line; the co-growth formula is only proved above it")


def _biregular_value(alpha: float, k: int, l: int) -> float:
    if alpha <= cogrowth_threshold(k, l):
        return walk_norm(k, l)
    return math.sqrt(alpha + (k - 1) / alpha) * math.sqrt(alpha + (l - 1) / alpha)


def cogrowth_biregular(alpha: float, k: int, l: int) -> float:
    """
    beta = sqrt(k-1) + sqrt(l-1) when alpha <= ((k-1)(l-1))^(1/4),
    otherwise sqrt(alpha + (k-1)/alpha) * sqrt(alpha + (l-1)/alpha)
    """
    check_tree_degrees(k, l)
    _check_alpha(alpha)
    _warn_if_line(k, l)
    return _biregular_value(alpha, k, l)


def inverse_cogrowth_regular(beta: float, d: int, allow_degenerate: bool = False) -> float:
    """The root rho >= sqrt(d-1) of rho + (d-1)/rho = beta"""
    _check_regular_degree(d, allow_degenerate)
    floor = 2.0 * math.sqrt(d - 1)
    if beta < floor * (1.0 - 1e-12):
        raise PreconditionError(f"beta={beta} is below the walk growth floor 2 sqrt(d-1)={floor:.6g}")
    disc = max(beta * beta - 4.0 * (d - 1), 0.0)
    return (beta + math.sqrt(disc)) / 2.0


def inverse_cogrowth_biregular(beta: float, k: int, l: int, tol: Optional[float] = None) -> float:
    """Preimage of beta under the super-threshold branch of cogrowth_biregular, by bisection"""
    floor = walk_norm(k, l)
    _warn_if_line(k, l)
    threshold = cogrowth_threshold(k, l)
    if beta < floor * (1.0 - 1e-12):
        raise PreconditionError(f"beta={beta} is below the walk growth floor "
                                f"sqrt(k-1)+sqrt(l-1)={floor:.6g}")
    if beta <= floor * (1.0 + 1e-15):
        return threshold
    tol = GROWTH_CONFIG['bisection_tol'] if tol is None else tol
    return bisect(lambda rho: _biregular_value(rho, k, l) - beta,
                  threshold, max(threshold, beta), xtol=tol)


def predict_beta(alpha: float, d: Optional[int] = None, k: Optional[int] = None,
                 l: Optional[int] = None, allow_degenerate: bool = False) -> float:
    if d is not None:
        return cogrowth_regular(alpha, d, allow_degenerate)
    if k is None or l is None:
        raise GraphError("Give either d or both k and l")
    return cogrowth_biregular(alpha, k, l)


def predict_alpha(beta: float, d: Optional[int] = None, k: Optional[int] = None,
                  l: Optional[int] = None, allow_degenerate: bool = False) -> float:
    if d is not None:
        return inverse_cogrowth_regular(beta, d, allow_degenerate)
    if k is None or l is None:
        raise GraphError("Give either d or both k and l")
    return inverse_cogrowth_biregular(beta, k, l)


def check_walk_lower_bound(estimate: GrowthEstimate, k: int, l: int, tol: float = 1e-2) -> bool:
    """Walk growth never falls below ||A|| = sqrt(k-1) + sqrt(l-1), up to relative tol"""
    floor = walk_norm(k, l)
    ok = estimate.value >= floor * (1.0 - tol)
    if not ok:
        logger.warning(f"Walk growth estimate {estimate.value:.6g} is below the floor {floor:.6g}")
    return ok


def cogrowth_summary(a: CountSeries, b: CountSeries, k: int, l: int, method: Optional[str] = None,
                     window: Optional[Tuple[int, int]] = None) -> Dict:
    """Estimated alpha and beta next to the beta predicted from the estimated alpha"""
    alpha = estimate_growth_rate(a, method, window)
    beta = estimate_growth_rate(b, method, window)
    predicted = cogrowth_biregular(alpha.value, k, l)
    return {
        'alpha': alpha.to_dict(),
        'beta': beta.to_dict(),
        'predicted_beta': predicted,
        'gap': abs(beta.value - predicted),
        'above_floor': check_walk_lower_bound(beta, k, l),
    }
