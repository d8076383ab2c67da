"""Normalized spacings and pair correlation of zeros against the GUE prediction."""

import logging
import math
from typing import Dict, List, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, MissingZerosError
from .models import CorrelationBin, SpacingSeries, ZeroRecord
from .utils import format_ranges


logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


def normalized_spacings(zeros: Sequence[ZeroRecord], M: int, N: int) -> SpacingSeries:
    """delta_n = (1/2pi) log(y_n/2pi) (y_{n+1} - y_n) for n in [M, N].

    Args:
        zeros: Zero records in any order; every n in [M, N+1] must be present
        M: First index
        N: Last index, N > M

    Returns:
        SpacingSeries of length N - M + 1

    Raises:
        DomainError: If N <= M or the ordinates are not strictly increasing
        MissingZerosError: If any index in [M, N+1] is absent
    """
    if N <= M:
        raise DomainError(f"need N > M, got M={M}, N={N}")
    by_index: Dict[int, ZeroRecord] = {record.n: record for record in zeros}
    missing = [n for n in range(M, N + 2) if n not in by_index]
    if missing:
        raise MissingZerosError(f"missing zeros {format_ranges(missing)}", missing=missing)

    ordinates = np.array([by_index[n].value for n in range(M, N + 2)], dtype=np.float64)
    gaps = np.diff(ordinates)
    if np.any(gaps <= 0):
        bad = int(np.flatnonzero(gaps <= 0)[0]) + M
        raise DomainError(f"ordinates must increase strictly; y_{bad + 1} <= y_{bad}")
    deltas = np.log(ordinates[:-1] / TWO_PI) / TWO_PI * gaps
    return SpacingSeries(M=M, N=N, deltas=deltas)


def spacings_from_ordinates(ordinates: Sequence[float], M: int = 1) -> SpacingSeries:
    """SpacingSeries from a bare ascending array of ordinates starting at index M."""
    ordinates = np.asarray(ordinates, dtype=np.float64)
    if len(ordinates) < 3:
        raise DomainError("need at least three ordinates")
    gaps = np.diff(ordinates)
    if np.any(gaps <= 0):
        raise DomainError("ordinates must increase strictly")
    deltas = np.log(ordinates[:-1] / TWO_PI) / TWO_PI * gaps
    return SpacingSeries(M=M, N=M + len(deltas) - 1, deltas=deltas)


def gue_integrand(u):
    """1 - (sin(pi u)/(pi u))^2, equal to 0 at u = 0."""
    return 1.0 - np.sinc(u) ** 2


def gue_rhs(alpha: float, beta: float) -> float:
    """Bin average of the GUE pair-correlation density over (alpha, beta].

    Raises:
        DomainError: Unless 0 <= alpha < beta
    """
    if not 0 <= alpha < beta:
        raise DomainError(f"need 0 <= alpha < beta, got ({alpha}, {beta})")
    value, _ = integrate.quad(gue_integrand, alpha, beta, epsabs=1e-12, epsrel=1e-10, limit=200)
    return value / (beta - alpha)


def _positions(spacings: SpacingSeries) -> np.ndarray:
    # P_m = delta_{M+1} + ... + delta_m, so P_n - P_m is the distance from zero m to n
    return np.concatenate(([0.0], np.cumsum(spacings.deltas[1:])))


def pair_count(spacings: SpacingSeries, alpha: float, beta: float) -> int:
    """Number of pairs M <= m < n <= N whose normalized distance lies in (alpha, beta]."""
    positions = _positions(spacings)
    upper = np.searchsorted(positions, positions + beta, side="right")
    lower = np.searchsorted(positions, positions + alpha, side="right")
    return int(np.sum(upper - lower))


def pair_correlation(spacings: SpacingSeries, alpha: float, beta: float) -> CorrelationBin:
    """Empirical pair correlation in (alpha, beta] next to the GUE value.

    empirical = #pairs / ((N - M)(beta - alpha)). Positions are cumulative
    sums of the spacings, so each zero's partners in the bin are found by
    binary search instead of scanning every later zero.

    Raises:
        DomainError: Unless beta > alpha >= 0
    """
    if not 0 <= alpha < beta:
        raise DomainError(f"need beta > alpha >= 0, got ({alpha}, {beta})")
    count = pair_count(spacings, alpha, beta)
    empirical = count / ((spacings.N - spacings.M) * (beta - alpha))
    return CorrelationBin(alpha=alpha, beta=beta, empirical=empirical, gue=gue_rhs(alpha, beta))


def correlation_curve(spacings: SpacingSeries, step: float = 0.05, x_max: float = 3.0) -> List[CorrelationBin]:
    """Bins (alpha, alpha + step] for alpha = 0, step, ..., x_max."""
    if step <= 0 or x_max < 0:
        raise DomainError(f"need step > 0 and x_max >= 0, got step={step}, x_max={x_max}")
    count = int(round(x_max / step)) + 1
    bins = []
    for k in range(count):
        alpha = round(k * step, 10)
        bins.append(pair_correlation(spacings, alpha, round(alpha + step, 10)))
    logger.info(f"Computed {len(bins)} correlation bins over {spacings.N - spacings.M + 1} spacings")
    return bins


def montgomery_pair_correlation(ordinates: Sequence[float], T: float, alpha: float, beta: float) -> CorrelationBin:
    """Pair correlation with the single global scale log(T/2pi)/2pi.

    Counts ordered pairs of ordinates y' < y <= T with
    alpha < (y - y') log(T/2pi)/2pi <= beta, divided by the number of
    ordinates up to T and by the bin width.
    """
    if not 0 <= alpha < beta:
        raise DomainError(f"need beta > alpha >= 0, got ({alpha}, {beta})")
    if T <= TWO_PI:
        raise DomainError(f"need T > 2 pi, got {T}")
    ys = np.sort(np.asarray(ordinates, dtype=np.float64))
    ys = ys[ys <= T]
    if len(ys) < 2:
        raise DomainError(f"need at least two ordinates up to T = {T}")
    scaled = ys * math.log(T / TWO_PI) / TWO_PI
    upper = np.searchsorted(scaled, scaled + beta, side="right")
    lower = np.searchsorted(scaled, scaled + alpha, side="right")
    count = int(np.sum(upper - lower))
    empirical = count / (len(ys) * (beta - alpha))
    return CorrelationBin(alpha=alpha, beta=beta, empirical=empirical, gue=gue_rhs(alpha, beta))


def fit_summary(bins: Sequence[CorrelationBin]) -> Dict[str, float]:
    """RMS and maximum absolute deviation of empirical from GUE."""
    if not bins:
        raise DomainError("no bins to summarize")
    deviations = np.array([b.empirical - b.gue for b in bins])
    return {
        "rms": float(np.sqrt(np.mean(deviations ** 2))),
        "max_deviation": float(np.max(np.abs(deviations))),
        "bins": len(bins),
    }
