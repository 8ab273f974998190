from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rbtcode.errors import NotOnTradeoffError, UsageError
from rbtcode.tradeoff import (
    Region,
    Verdict,
    alpha_range,
    beta_for,
    classify_point,
    curve_samples,
    cutset_capacity,
    exact_repair_feasibility,
    fmt,
    mbr_point,
    msr_point,
    point_from_coordinates,
    space_sharing_point,
)

LABELLED_POINTS = [
    # alpha, beta, p, theta, region
    (2700, 300, 9, 0, Region.MSR),
    (2786, 250, 6, 214, Region.INTERIOR),
    (3300, 204, 1, 168, Region.INTERIOR),
    (3600, 200, 0, 0, Region.MBR),
]


def test_cutset_examples():
    assert cutset_capacity(10, 18, 2700, 300) == 27000
    assert cutset_capacity(10, 18, 3600, 200) == 27000
    assert cutset_capacity(10, 18, 3600, 0) == 0
    with pytest.raises(UsageError):
        cutset_capacity(10, 9, 1, 1)


def test_extreme_points():
    assert msr_point(10, 18, 300) == (2700, 27000)
    assert mbr_point(10, 18, 200) == (3600, 27000)
    assert mbr_point(3, 4, 1) == (4, 9)
    assert msr_point(1, 7, 2) == (14, 14)
    assert msr_point(5, 5, 1) == (1, 5) and cutset_capacity(5, 5, 1, 1) == 5


@pytest.mark.parametrize("d", range(1, 31))
def test_extremes_meet_cutset(d):
    for k in range(1, d + 1):
        for beta in (1, 7, Fraction(3, 2)):
            a, B = mbr_point(k, d, beta)
            assert cutset_capacity(k, d, a, beta) == B
            a, B = msr_point(k, d, beta)
            assert cutset_capacity(k, d, a, beta) == B


@pytest.mark.parametrize("alpha,beta,p,theta,region", LABELLED_POINTS)
def test_classify_labelled_points(alpha, beta, p, theta, region):
    pt = classify_point(10, 18, alpha, beta)
    assert (pt.p, pt.theta, pt.region) == (p, theta, region)


def test_classify_mbr_and_range():
    assert classify_point(4, 9, 18, 2).region is Region.MBR
    with pytest.raises(NotOnTradeoffError):
        classify_point(10, 18, 3601, 200)
    with pytest.raises(NotOnTradeoffError):
        classify_point(10, 18, 1799, 200)


@given(
    st.integers(2, 12).flatmap(lambda k: st.tuples(st.just(k), st.integers(k, 30), st.integers(0, k - 1))),
    st.fractions(min_value=Fraction(1, 10), max_value=1000),
    st.fractions(min_value=0, max_value=1),
)
def test_classify_inverts_construction(kdp, beta, frac):
    k, d, p = kdp
    theta = 0 if p == k - 1 else frac * beta
    if theta >= beta:
        theta = 0
    pt = point_from_coordinates(k, d, beta, p, theta)
    assert (pt.p, pt.theta) == (p, theta)


def brute_verdict(k, d, alpha, beta):
    """Case analysis written directly from the feasibility conditions."""
    if alpha == d * beta:
        return Verdict.ACHIEVABLE_MBR
    if alpha == (d - k + 1) * beta:
        return Verdict.ACHIEVABLE_MSR_KNOWN if d >= 2 * k - 2 else Verdict.OPEN_EXCEPTION
    # interior: find p, theta by scanning
    for p in range(k - 1):
        theta = (d - p) * beta - alpha
        if 0 <= theta < beta:
            break
    if theta == 0:
        assert 1 <= p <= k - 2
        return Verdict.INFEASIBLE_THM6
    if p == k - 2 and (theta * (d - p) >= (d - p - 1) * beta or k == 2):
        return Verdict.OPEN_EXCEPTION
    return Verdict.INFEASIBLE_THM7


def test_feasibility_truth_table():
    seen = set()
    for k in range(2, 9):
        for d in range(k, 16):
            for beta in (1, 4, 10):
                lo, hi = (d - k + 1) * beta, d * beta
                steps = (hi - lo) * 4
                for i in range(steps + 1):
                    alpha = lo + Fraction(i, 4)
                    pt = classify_point(k, d, alpha, beta)
                    got = exact_repair_feasibility(k, d, pt).status
                    assert got == brute_verdict(k, d, alpha, beta), (k, d, alpha, beta)
                    seen.add(got)
    assert seen == set(Verdict)


def test_feasibility_examples():
    pt = point_from_coordinates(10, 18, 250, 1, 0)
    assert exact_repair_feasibility(10, 18, pt).status is Verdict.INFEASIBLE_THM6
    pt = classify_point(10, 18, 2786, 250)
    assert exact_repair_feasibility(10, 18, pt).status is Verdict.INFEASIBLE_THM7
    # p = k-2 = 8, theta = 230 >= 9/10 * 250 = 225
    pt = point_from_coordinates(10, 18, 250, 8, 230)
    assert exact_repair_feasibility(10, 18, pt).status is Verdict.OPEN_EXCEPTION
    pt = point_from_coordinates(10, 18, 250, 8, 224)
    assert exact_repair_feasibility(10, 18, pt).status is Verdict.INFEASIBLE_THM7
    assert exact_repair_feasibility(10, 17, classify_point(10, 17, 2400, 300)).status is Verdict.OPEN_EXCEPTION


def split_oracle(k, d, B, alpha):
    """Explicit two-code split: solve for the MBR share, then add bandwidths."""

    def stored(alpha2):
        # file size carried when alpha2 goes to MBR and the rest to MSR
        alpha1 = alpha - alpha2
        beta1 = alpha1 / (d - k + 1)
        beta2 = Fraction(alpha2) / d
        return msr_point(k, d, beta1)[1] + mbr_point(k, d, beta2)[1]

    f0, f1 = stored(Fraction(0)), stored(Fraction(1))
    alpha2 = (B - f0) / (f1 - f0)
    assert stored(alpha2) == B
    beta1 = (alpha - alpha2) / (d - k + 1)
    beta2 = alpha2 / d
    assert msr_point(k, d, beta1)[0] + mbr_point(k, d, beta2)[0] == alpha
    return alpha2, d * (beta1 + beta2)


def closed_form(k, d, B, alpha):
    return Fraction(d * (2 * B - k * alpha), k * (d - k + 1))


def test_space_sharing_examples():
    assert space_sharing_point(10, 18, 27000, 2700) == (0, 5400)
    assert space_sharing_point(10, 18, 27000, 3600) == (3600, 3600)
    assert space_sharing_point(10, 18, 27000, 3000) == (1200, 4800)
    assert closed_form(10, 18, 27000, 3000) == 4800
    assert split_oracle(10, 18, 27000, 3000) == (1200, 4800)


def test_space_sharing_preconditions():
    with pytest.raises(UsageError):
        space_sharing_point(10, 17, 27000, 3000)
    with pytest.raises(UsageError):
        space_sharing_point(10, 18, 27000, 2699)


@pytest.mark.parametrize("k,d,B", [(10, 18, 27000), (2, 2, 10), (3, 4, 9), (5, 12, 1000), (4, 6, Fraction(7, 3))])
def test_space_sharing_matches_oracle(k, d, B):
    lo, hi = alpha_range(k, d, B)
    for i in range(25):
        alpha = lo + (hi - lo) * Fraction(i, 24)
        got = space_sharing_point(k, d, B, alpha)
        assert got == split_oracle(k, d, B, alpha)
        assert got[1] == closed_form(k, d, B, alpha)


def test_curve_samples_properties():
    samples = curve_samples(10, 18, 27000, 50)
    assert (samples[0].alpha, samples[0].dbeta_cutset, samples[0].dbeta_spaceshare) == (2700, 5400, 5400)
    assert (samples[-1].alpha, samples[-1].dbeta_cutset, samples[-1].dbeta_spaceshare) == (3600, 3600, 3600)
    for a, b in zip(samples, samples[1:]):
        assert b.dbeta_cutset <= a.dbeta_cutset
        assert b.dbeta_spaceshare <= a.dbeta_spaceshare
    for s in samples:
        assert s.dbeta_spaceshare >= s.dbeta_cutset
        assert cutset_capacity(10, 18, s.alpha, s.beta) == 27000


def test_beta_inversion_is_minimal():
    for alpha in (2700, 2786, 3000, 3300, 3600):
        beta = beta_for(10, 18, 27000, alpha)
        assert cutset_capacity(10, 18, alpha, beta) == 27000
        assert cutset_capacity(10, 18, alpha, beta - Fraction(1, 10**6)) < 27000
    assert beta_for(10, 18, 27000, 3300) == 204


def test_curve_samples_errors():
    with pytest.raises(UsageError):
        curve_samples(10, 18, 27000, 1)
    with pytest.raises(UsageError):
        curve_samples(10, 18, 0, 5)
    assert curve_samples(10, 15, 27000, 3)[1].dbeta_spaceshare is None


def test_fmt():
    assert fmt(Fraction(10, 2)) == "5"
    assert fmt(Fraction(7, 3)) == "7/3"
    assert fmt(None) == ""


def test_floats_rejected():
    with pytest.raises(UsageError):
        cutset_capacity(2, 3, 1.5, 1)
