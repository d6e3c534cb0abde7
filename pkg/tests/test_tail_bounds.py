import math

import numpy as np
import pytest
from scipy import optimize

from missingmass import gfunction as gf
from missingmass import tail_bounds as tb
from missingmass.errors import InvalidInputError, RegimeError
from missingmass.ustar_engine import gamma_const, scale_parameter, u_star

P1 = gf.power(1.0)
P2 = gf.power(2.0)
E64 = gf.entropy_log2(64)

EPS_GRID = np.arange(1, 15) * 0.05


def test_sub_gaussian_oracle():
    for s2, e in [(0.5, 0.1), (0.01, 0.3), (2.0, 1.0)]:
        assert tb.sub_gaussian_tail(s2, e) == pytest.approx(
            min(1.0, math.exp(-e * e / (2.0 * s2))), rel=1e-15
        )


def test_sub_gamma_matches_naive_form():
    # stable h(x) = x^2/(1+x+sqrt(1+2x)) against the textbook 1+x-sqrt(1+2x)
    for v, c, e in [(0.01, 0.1, 0.2), (0.5, 1.0, 0.7), (1e-4, 0.05, 0.02)]:
        x = c * e / v
        naive = (v / c**2) * (1.0 + x - math.sqrt(1.0 + 2.0 * x))
        assert tb.sub_gamma_exponent(v, c, e) == pytest.approx(naive, rel=1e-9)


def test_strongly_sub_gamma_oracle():
    v, c, e = 0.012, 0.07, 0.15
    z = c * e / v
    want = (v / c**2) * (z - math.log1p(z))
    assert tb.strongly_sub_gamma_exponent(v, c, e) == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize("v", [1e-4, 0.01, 0.3])
@pytest.mark.parametrize("c", [0.01, 0.1, 1.0])
def test_ssg_bound_never_above_sub_gamma(v, c):
    # log(1+z) >= z - z^2/2 style comparison: the ssg exponent dominates
    for e in EPS_GRID:
        assert tb.strongly_sub_gamma_tail(v, c, e) <= tb.sub_gamma_tail(v, c, e) + 1e-15


def test_exponents_zero_at_zero_and_increasing():
    v, c = 0.01, 0.1
    assert tb.strongly_sub_gamma_exponent(v, c, 0.0) == 0.0
    assert tb.sub_gamma_exponent(v, c, 0.0) == 0.0
    ssg = [tb.strongly_sub_gamma_exponent(v, c, e) for e in EPS_GRID]
    assert all(b > a for a, b in zip(ssg, ssg[1:]))


def test_tails_clamped_to_one():
    assert tb.sub_gaussian_tail(1.0, 0.0) == 1.0
    assert tb.sub_gamma_tail(0.5, 0.5, 0.0) == 1.0
    assert 0.0 < tb.strongly_sub_gamma_tail(0.5, 0.5, 3.0) <= 1.0


def test_param_validation():
    with pytest.raises(InvalidInputError):
        tb.sub_gaussian_exponent(0.0, 0.1)
    with pytest.raises(InvalidInputError):
        tb.sub_gamma_exponent(0.1, -1.0, 0.1)
    with pytest.raises(InvalidInputError):
        tb.strongly_sub_gamma_exponent(0.1, 0.1, -0.5)


def chernoff_oracle(spec, eps):
    # independent Legendre transform: maximize lam*eps - f(lam) directly
    def f(lam):
        poly = sum(a * lam**r / r for r, a in zip(range(2, spec.R + 1), spec.a))
        tail = (spec.v / spec.c**2) * (-spec.c * lam - math.log1p(-spec.c * lam))
        return poly + tail

    res = optimize.minimize_scalar(
        lambda lam: -(lam * eps - f(lam)),
        bounds=(0.0, (1.0 - 1e-12) / spec.c),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return -res.fun


@pytest.mark.parametrize("n", [20, 100])
@pytest.mark.parametrize("R", [2, 3, 5])
def test_poly_exponent_matches_legendre_oracle(n, R):
    spec = tb.build_spec(n, P1, R)
    for e in (0.02, 0.1, 0.3, 0.6):
        got = tb.poly_filtered_exponent(spec, e)
        assert got == pytest.approx(chernoff_oracle(spec, e), rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("n", [20, 100, 1000])
def test_r2_analytic_equals_numeric_chernoff(n):
    spec = tb.build_spec(n, P1, 2)
    for e in np.arange(1, 29) * 0.025:
        analytic = tb.poly_filtered_r2_exponent(spec.a[0], spec.v, spec.c, float(e))
        numeric = tb.poly_filtered_exponent(spec, float(e))
        assert abs(analytic - numeric) <= 1e-9 * max(1.0, abs(numeric))


@pytest.mark.parametrize("g", [P1, P2, E64], ids=["power1", "power2", "entropy64"])
@pytest.mark.parametrize("n", [10, 50, 200])
@pytest.mark.parametrize("R", [1, 2, 4, 6])
def test_build_spec_coefficients_nonnegative(g, n, R):
    spec = tb.build_spec(n, g, R)
    assert spec.R == R
    assert len(spec.a) == R - 1
    assert all(a >= 0.0 for a in spec.a)
    assert spec.v > 0.0 and spec.c > 0.0


def test_build_spec_r1_is_strongly_sub_gamma():
    n = 30
    spec = tb.build_spec(n, P1, 1)
    v = u_star(n, P1, 2).value
    c = scale_parameter(n, P1)
    assert spec.v == pytest.approx(v, rel=1e-14)
    assert spec.c == pytest.approx(c, rel=1e-14)
    for e in (0.05, 0.2, 0.5):
        assert tb.tail_bound(spec, e) == pytest.approx(
            tb.strongly_sub_gamma_tail(v, c, e), rel=1e-12
        )


def test_higher_order_filter_is_tighter():
    n = 20
    b2 = [tb.tail_bound(tb.build_spec(n, P1, 2), float(e)) for e in EPS_GRID]
    b5 = [tb.tail_bound(tb.build_spec(n, P1, 5), float(e)) for e in EPS_GRID]
    assert all(x5 <= x2 + 1e-12 for x2, x5 in zip(b2, b5))


def test_tail_bound_dispatch_matches_families():
    e = 0.12
    assert tb.tail_bound(tb.SubGaussian(sigma2=0.02), e) == tb.sub_gaussian_tail(0.02, e)
    assert tb.tail_bound(tb.SubGamma(v=0.01, c=0.1), e) == tb.sub_gamma_tail(0.01, 0.1, e)
    assert tb.tail_bound(tb.StronglySubGamma(v=0.01, c=0.1), e) == tb.strongly_sub_gamma_tail(0.01, 0.1, e)


def test_theorem2_right_tail_oracle():
    for n, g in [(10, P1), (40, E64)]:
        ratio = gf.ratio_sup(g)
        s2 = tb.THEOREM2_VARIANCE_FACTOR * ratio**2 / n
        for e in (0.05, 0.3):
            assert tb.theorem2_sub_gaussian_right(n, g, e) == pytest.approx(
                math.exp(-e * e / (2.0 * s2)), rel=1e-14
            )


def test_left_tail_exact_oracle():
    n, e = 20, 0.098
    v = u_star(n, P1, 2).value
    assert tb.left_tail(n, P1, e) == pytest.approx(math.exp(-e * e / (2.0 * v)), rel=1e-13)


@pytest.mark.parametrize("g", [P1, P2, E64], ids=["power1", "power2", "entropy64"])
def test_left_tail_closed_form_never_tighter(g):
    # the closed form replaces u*_2 by an upper bound, so its tail is larger
    for n in (10, 100):
        for e in (0.02, 0.1, 0.3):
            assert tb.left_tail(n, g, e) <= tb.left_tail(n, g, e, closed_form=True) + 1e-15


def test_corollary_left_identity_alpha_one():
    n, e = 50, 0.1
    want = math.exp(-n * e * e / (2.0 * gamma_const()))
    assert tb.corollary_left_tail("m0alpha", n, e, alpha=1.0) == pytest.approx(want, rel=1e-13)


def test_corollary_left_entropy_oracle():
    n, k, e = 50, 64, 0.2
    want = math.exp(-n * e * e / (2.0 * gamma_const() * math.log2(k) ** 2))
    assert tb.corollary_left_tail("entropy", n, e, k=k) == pytest.approx(want, rel=1e-13)


def test_corollary_left_regimes():
    with pytest.raises(RegimeError):
        tb.corollary_left_tail("entropy", 2, 0.1, k=16)
    with pytest.raises(InvalidInputError):
        tb.corollary_left_tail("m0alpha", 50, 0.1, alpha=0.5)
    with pytest.raises(InvalidInputError):
        tb.corollary_left_tail("nope", 50, 0.1, alpha=1.0)


@pytest.mark.parametrize("n", [20, 100])
def test_corollary_right_m0_is_ssg_with_gamma_variance(n):
    # the printed curve coincides with the strongly-sub-gamma template at
    # v = gamma/n, c = 3/(2(n+2))
    v = gamma_const() / n
    c = 3.0 / (2.0 * (n + 2.0))
    for e in (0.01, 0.05, 0.1, 0.3, 0.6):
        assert tb.corollary_right_tail("m0", n, e) == pytest.approx(
            tb.strongly_sub_gamma_tail(v, c, e), rel=1e-12
        )


def test_corollary_right_m0_closed_form_spot():
    # direct transcription evaluated with plain math calls
    n, e = 20, 0.1
    gam_n = gamma_const() * (1.0 + 2.0 / n)
    expo = (2.0 * (n + 2.0) / 3.0) * (e - (2.0 * gam_n / 3.0) * math.log(1.0 + 3.0 * e / (2.0 * gam_n)))
    assert tb.corollary_right_tail("m0", n, e) == pytest.approx(math.exp(-expo), rel=1e-12)


def test_corollary_right_m0alpha_weaker_than_exact_ssg():
    # closed form trades sharpness for readability; the trade must go one way
    alpha, n = 2.0, 100
    g = gf.power(alpha)
    v = u_star(n, g, 2).value
    c = scale_parameter(n, g)
    for e in (1e-4, 1e-3, 1e-2):
        closed = tb.corollary_right_tail("m0alpha", n, e, alpha=alpha)
        exact = tb.strongly_sub_gamma_tail(v, c, e)
        assert closed >= exact - 1e-15


def test_corollary_right_m0alpha_regime():
    with pytest.raises(RegimeError):
        tb.corollary_right_tail("m0alpha", 17, 0.1, alpha=2.0)  # needs n > 17
    tb.corollary_right_tail("m0alpha", 18, 0.1, alpha=2.0)


def test_corollary_right_entropy_clamps_and_decays():
    # deviations of the missing entropy run up to log2(k) bits, and the
    # closed form only bites once eps is an appreciable fraction of that
    n, k = 100, 1024
    small = tb.corollary_right_tail("entropy", n, 0.01, k=k)
    assert small == 1.0
    vals = [tb.corollary_right_tail("entropy", n, e, k=k) for e in (4.0, 5.0, 6.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[0] < 1.0


def test_curve_subgauss_matches_exponential_rate():
    for n in (20, 100, 1000):
        c = tb.curve("subgauss", n, P1, EPS_GRID)
        want = np.minimum(1.0, np.exp(-n * EPS_GRID**2))
        np.testing.assert_allclose(np.asarray(c.bounds), want, rtol=1e-12)


def test_curve_families_consistent():
    n = 50
    eps = EPS_GRID
    ssg = tb.curve("ssg", n, P1, eps)
    sg = tb.curve("subgamma", n, P1, eps)
    p3 = tb.curve("poly:3", n, P1, eps)
    spec3 = tb.build_spec(n, P1, 3)
    for i, e in enumerate(eps):
        assert ssg.bounds[i] <= sg.bounds[i] + 1e-15
        assert p3.bounds[i] == pytest.approx(tb.tail_bound(spec3, float(e)), rel=1e-12)
    assert ssg.family == "ssg" and p3.family == "poly:3"
    assert ssg.g_descriptor == "power:1"


def test_curve_rejects_unknown_family_and_small_power():
    with pytest.raises(InvalidInputError):
        tb.curve("cauchy", 20, P1, [0.1])
    with pytest.raises(InvalidInputError):
        tb.curve("poly:x", 20, P1, [0.1])
    with pytest.raises(InvalidInputError):
        tb.curve("ssg", 20, gf.power(0.5), [0.1])


def test_poly_filtered_validation():
    with pytest.raises(InvalidInputError):
        tb.PolyFiltered(R=3, a=(0.1,), v=0.01, c=0.1)  # needs R-1 coefficients
    with pytest.raises(InvalidInputError):
        tb.PolyFiltered(R=2, a=(-0.1,), v=0.01, c=0.1)
