"""Storage-bandwidth tradeoff: cut-set capacity, extreme points, the (p, theta)
coordinates of a point, exact-repair feasibility and the space-sharing curve.

All arithmetic is exact (``fractions.Fraction``) so that points on region
boundaries classify correctly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import NotOnTradeoffError, UsageError

Number = int | Fraction


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise UsageError(f"use exact integers or Fractions, not float {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    return Fraction(str(x))


def _check_kd(k: int, d: int) -> None:
    if k < 1:
        raise UsageError(f"k must be at least 1, got {k}")
    if d < k:
        raise UsageError(f"d must satisfy d >= k (got k={k}, d={d})")


def cutset_capacity(k: int, d: int, alpha, beta) -> Fraction:
    """Sum over i < k of min(alpha, (d - i) * beta)."""
    _check_kd(k, d)
    alpha, beta = _q(alpha), _q(beta)
    if alpha < 0 or beta < 0:
        raise UsageError("alpha and beta must be non-negative")
    return sum((min(alpha, (d - i) * beta) for i in range(k)), Fraction(0))


def msr_point(k: int, d: int, beta) -> tuple[Fraction, Fraction]:
    _check_kd(k, d)
    alpha = (d - k + 1) * _q(beta)
    return alpha, k * alpha


def mbr_point(k: int, d: int, beta) -> tuple[Fraction, Fraction]:
    _check_kd(k, d)
    beta = _q(beta)
    return d * beta, (k * d - Fraction(k * (k - 1), 2)) * beta


class Region(str, enum.Enum):
    MSR = "MSR"
    MBR = "MBR"
    INTERIOR = "INTERIOR"


@dataclass(frozen=True)
class TradeoffPoint:
    alpha: Fraction
    beta: Fraction
    p: int
    theta: Fraction
    region: Region


def classify_point(k: int, d: int, alpha, beta) -> TradeoffPoint:
    """Write alpha = (d - p) * beta - theta with theta in [0, beta)."""
    _check_kd(k, d)
    if k < 2:
        raise UsageError("classification needs k >= 2")
    alpha, beta = _q(alpha), _q(beta)
    if beta <= 0:
        raise NotOnTradeoffError("beta must be positive")
    lo, hi = (d - k + 1) * beta, d * beta
    if not lo <= alpha <= hi:
        raise NotOnTradeoffError(f"alpha={alpha} outside [{lo}, {hi}] for beta={beta}")
    p = d - math.ceil(alpha / beta)
    theta = (d - p) * beta - alpha
    if p == k - 1:
        region = Region.MSR
    elif p == 0 and theta == 0:
        region = Region.MBR
    else:
        region = Region.INTERIOR
    return TradeoffPoint(alpha, beta, p, theta, region)


def point_from_coordinates(k: int, d: int, beta, p: int, theta) -> TradeoffPoint:
    """Inverse of :func:`classify_point`."""
    beta, theta = _q(beta), _q(theta)
    if not 0 <= p <= k - 1 or not 0 <= theta < beta or (p == k - 1 and theta != 0):
        raise UsageError(f"invalid coordinates p={p}, theta={theta} for k={k}, beta={beta}")
    return classify_point(k, d, (d - p) * beta - theta, beta)


class Verdict(str, enum.Enum):
    ACHIEVABLE_MBR = "ACHIEVABLE_MBR"
    ACHIEVABLE_MSR_KNOWN = "ACHIEVABLE_MSR_KNOWN"
    INFEASIBLE_THM6 = "INFEASIBLE_THM6"
    INFEASIBLE_THM7 = "INFEASIBLE_THM7"
    OPEN_EXCEPTION = "OPEN_EXCEPTION"


@dataclass(frozen=True)
class FeasibilityVerdict:
    status: Verdict
    citation: str


def exact_repair_feasibility(k: int, d: int, point: TradeoffPoint) -> FeasibilityVerdict:
    p, theta, beta = point.p, point.theta, point.beta
    if point.region is Region.MBR:
        return FeasibilityVerdict(
            Verdict.ACHIEVABLE_MBR,
            "exact-MBR codes exist for all [n,k,d] (repair-by-transfer construction when d=n-1)",
        )
    if point.region is Region.MSR:
        if d >= 2 * k - 2:
            return FeasibilityVerdict(
                Verdict.ACHIEVABLE_MSR_KNOWN, "explicit exact-MSR codes exist for d >= 2k-2"
            )
        return FeasibilityVerdict(
            Verdict.OPEN_EXCEPTION,
            "MSR with d < 2k-2: only asymptotic achievability known; no scalar linear codes for d < 2k-3",
        )
    if theta == 0:
        return FeasibilityVerdict(
            Verdict.INFEASIBLE_THM6, "interior point with alpha a multiple of beta (theta=0, 1<=p<=k-2)"
        )
    if p == k - 2 and (theta >= Fraction(d - p - 1, d - p) * beta or k == 2):
        return FeasibilityVerdict(
            Verdict.OPEN_EXCEPTION,
            "p=k-2 with theta >= (d-p-1)/(d-p)*beta or k=2: excluded from the non-achievability result",
        )
    return FeasibilityVerdict(Verdict.INFEASIBLE_THM7, "interior point with theta != 0 outside the p=k-2 exception")


def alpha_range(k: int, d: int, B) -> tuple[Fraction, Fraction]:
    """(alpha_MSR, alpha_MBR) for a file of size B."""
    _check_kd(k, d)
    B = _q(B)
    if B <= 0:
        raise UsageError(f"file size must be positive, got {B}")
    return B / k, d * B / (k * d - Fraction(k * (k - 1), 2))


def beta_for(k: int, d: int, B, alpha) -> Fraction:
    """Smallest beta with cutset_capacity(k, d, alpha, beta) = B."""
    _check_kd(k, d)
    B, alpha = _q(B), _q(alpha)
    lo, hi = alpha_range(k, d, B)
    if not lo <= alpha <= hi:
        raise NotOnTradeoffError(f"alpha={alpha} outside [{lo}, {hi}] for B={B}")
    # j terms saturate at alpha, the remaining ones are (d - i) * beta
    for j in range(k + 1):
        tail = sum(d - i for i in range(j, k))
        if tail == 0:
            continue
        beta = (B - j * alpha) / tail
        if beta > 0 and cutset_capacity(k, d, alpha, beta) == B:
            return beta
    raise NotOnTradeoffError(f"no beta reaches B={B} at alpha={alpha}")  # pragma: no cover


def space_sharing_point(k: int, d: int, B, alpha) -> tuple[Fraction, Fraction]:
    """Split storage between an MSR and an MBR code.

    Returns ``(alpha2, total_repair_bandwidth)`` where ``alpha2`` is the share
    of per-node storage given to the MBR code.
    """
    _check_kd(k, d)
    if d < 2 * k - 2:
        raise UsageError(f"space sharing needs d >= 2k-2 (got k={k}, d={d})")
    B, alpha = _q(B), _q(alpha)
    lo, hi = alpha_range(k, d, B)
    if not lo <= alpha <= hi:
        raise UsageError(f"alpha={alpha} outside [{lo}, {hi}]")
    alpha2 = 2 * d * (k * alpha - B) / (k * (k - 1))
    alpha1 = alpha - alpha2
    beta = alpha1 / (d - k + 1) + alpha2 / d
    return alpha2, d * beta


@dataclass(frozen=True)
class CurveSample:
    alpha: Fraction
    beta: Fraction
    dbeta_cutset: Fraction
    dbeta_spaceshare: Fraction | None


def curve_samples(k: int, d: int, B, count: int) -> list[CurveSample]:
    """Evenly spaced alpha between the MSR and MBR ends of the curve."""
    if count < 2:
        raise UsageError("need at least 2 samples")
    lo, hi = alpha_range(k, d, B)
    out = []
    for i in range(count):
        alpha = lo + (hi - lo) * Fraction(i, count - 1)
        beta = beta_for(k, d, B, alpha)
        share = space_sharing_point(k, d, B, alpha)[1] if d >= 2 * k - 2 else None
        out.append(CurveSample(alpha, beta, d * beta, share))
    return out


def fmt(x) -> str:
    """Integers as-is, other rationals as ``num/den``."""
    if x is None:
        return ""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
