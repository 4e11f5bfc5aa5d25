import decimal
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from knotdetect.growth import (
    LOWER_CLOSED_FORM,
    UPPER_CLOSED_FORM,
    BivariateSeries,
    CompositionNeedsZeroConstantTerm,
    GrowthError,
    GrowthSandwich,
    LengthMismatch,
    NoStabilization,
    ReciprocalNeedsUnitConstant,
    SlackTooLarge,
    TruncatedSeries,
    bt_series,
    coefficient_ratios,
    compose,
    decay_bound,
    density_curve,
    rt_of,
    rt_series,
    rtp_series,
    sandwich_gamma,
    singularity_constants,
    solve_at,
    sqrt_binomial,
)

z, y = sp.symbols("z y")


def series(coeffs, order):
    return TruncatedSeries(coeffs, order)


# ---------------------------------------------------------------- series arithmetic


def test_geometric_series():
    inv = series([1, -1], 4).reciprocal()
    assert inv.coeffs == [1, 1, 1, 1, 1]
    assert TruncatedSeries.geometric(4) == inv


def test_composition_example():
    zz = TruncatedSeries.z(5)
    out = compose(zz * TruncatedSeries.geometric(5), zz * zz)
    assert out.coeffs == [0, 0, 1, 0, 1, 0]


def test_sqrt_binomial_example():
    assert sqrt_binomial(series([1, -4], 3)).coeffs == [1, -2, -2, -4]


def test_three_halves_power_against_sympy():
    mine = series([1, -4], 12).pow_binomial(Fraction(3, 2))
    ref = sp.series((1 - 4 * z) ** sp.Rational(3, 2), z, 0, 13).removeO()
    assert mine.coeffs == [Fraction(int(ref.coeff(z, k))) for k in range(13)]


def test_domain_errors():
    with pytest.raises(CompositionNeedsZeroConstantTerm):
        series([1, 1], 3).compose(series([1, 1], 3))
    with pytest.raises(ReciprocalNeedsUnitConstant):
        series([0, 1], 3).reciprocal()
    with pytest.raises(ReciprocalNeedsUnitConstant):
        BivariateSeries.from_terms({(1, 0): 1}, (2, 2)).reciprocal()


small = st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=5), min_size=6, max_size=6)


@given(small, small, small)
def test_series_ring_laws(a, b, c):
    p, q, r = series(a, 5), series(b, 5), series(c, 5)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(small)
def test_reciprocal_and_sqrt_invert_multiplication(a):
    a = [Fraction(1)] + a[1:]
    p = series(a, 5)
    assert (p * p.reciprocal()).coeffs == [1, 0, 0, 0, 0, 0]
    s = p.sqrt_binomial()
    assert s * s == p


@given(small, small)
def test_composition_is_a_homomorphism(a, b):
    g = series([0] + b[1:], 5)
    p, q = series(a, 5), series(b, 5)
    assert (p * q).compose(g) == p.compose(g) * q.compose(g)


# ---------------------------------------------------------------- bt


def bt_closed_form():
    return ((1 - 4 * z) ** sp.Rational(3, 2) * (z + 1) - 2 * z**5 - 10 * z**4 - 10 * z**3 + 5 * z - 1) / (
        2 * (z + 1) * (z + 2) ** 3
    )


def test_bt_against_sympy_expansion():
    ref = sp.series(bt_closed_form(), z, 0, 21).removeO()
    assert bt_series(20).coeffs == [Fraction(ref.coeff(z, k)) for k in range(21)]


def test_bt_low_coefficients_vanish():
    b = bt_series(60)
    assert b[0] == 0 and b[1] == 0
    assert bt_closed_form().subs(z, 0) == 0
    assert b.is_counting()


def test_bt_first_values():
    assert bt_series(12).integers() == [0, 0, 0, 0, 0, 1, 0, 4, 6, 24, 66, 214, 676]


# ---------------------------------------------------------------- rt and rtp


def test_rt_against_sympy_expansion():
    r = rt_series((5, 5))
    disc = (1 - z + y) ** 2 - 8 * (z**2 - y * z + y) / (1 - z)
    expr = (1 + z - y - sp.sqrt(disc)) / 2
    ref = sp.expand(sp.series(sp.series(expr, y, 0, 6).removeO(), z, 0, 6).removeO())
    for m in range(6):
        for n in range(6):
            assert r[m, n] == Fraction(ref.coeff(y, m).coeff(z, n))


def test_rt_examples():
    r = rt_series((4, 4))
    assert r[0, 0] == 0
    assert r[0, 1] == 1


def test_rtp_branch_and_comparison():
    r = rt_series((10, 10))
    p = rtp_series((10, 10))
    assert p[0, 0] == 0
    for (m, n), c in p.total_degree_terms(10):
        assert c.denominator == 1 and 0 <= c <= r[m, n]


def test_rtp_solves_its_quadratic():
    p = rtp_series((6, 6))
    yy = BivariateSeries.from_terms({(1, 0): 1}, (6, 6))
    zz = BivariateSeries.from_terms({(0, 1): 1}, (6, 6))
    lhs = -2 * p * p * (yy - 1) + p * (yy - 1) * (3 * yy - zz + 1) - yy * yy * yy + yy * yy * (zz + 1) + yy + zz * zz * (1 - zz).reciprocal()
    assert all(c == 0 for row in lhs.coeffs for c in row)


# ---------------------------------------------------------------- at


def test_at_first_values():
    assert solve_at(12).integers() == [0, 1, 2, 4, 10, 29, 98, 372, 1538, 6755, 30996, 146982, 715120]


def test_at_relaxed_matches_picard_iteration():
    assert solve_at(40, method="picard") == solve_at(40)


def test_at_is_a_fixed_point():
    at = solve_at(30)
    assert rt_of(bt_series(30).compose(at)) == at


def test_at_integrality_to_order_40():
    assert solve_at(40).is_counting()


def test_at_truncation_stability():
    assert solve_at(60).coeffs == solve_at(120).coeffs[:61]


def test_picard_budget():
    with pytest.raises(NoStabilization):
        from knotdetect.growth import _solve_at_picard

        _solve_at_picard(20, max_iter=3)


def test_coefficient_ratios_approach_growth_rate():
    at = solve_at(161)
    for n, ratio in coefficient_ratios(at, 140, 160):
        assert abs(float(ratio) / 6.14793 - 1) < 0.02


def test_order_validation():
    with pytest.raises(GrowthError):
        solve_at(0)
    with pytest.raises(GrowthError):
        bt_series(0)


# ---------------------------------------------------------------- constants


def test_singularity_constants():
    c = singularity_constants()
    g1, g2 = c.growth_lower.decimal(40), c.growth_upper.decimal(40)
    assert decimal.Decimal("6.1479") < g1 < decimal.Decimal("6.1480")
    assert decimal.Decimal("6.1432") < g2 < decimal.Decimal("6.1433")
    assert c.growth_lower == LOWER_CLOSED_FORM
    assert c.growth_upper == UPPER_CLOSED_FORM


def test_surd_identities_are_exact():
    c = singularity_constants()
    g = c.growth_lower
    # (40 / z1 - 101)^2 = 21001 exactly
    assert (g.a, g.b, g.d, g.c) == (101, 1, 21001, 40)
    # z1 and z2 solve their quadratics: check the minimal polynomials
    for s, quad in ((c.z1, c.lower_quadratic), (c.z2, c.upper_quadratic)):
        p, qq, r = s.quadratic()
        k = Fraction(quad[0], p)
        assert (k * p, k * qq, k * r) == quad


def test_surds_match_high_precision_roots():
    c = singularity_constants()
    for surd, (p, qq, r) in ((c.z1, c.lower_quadratic), (c.z2, c.upper_quadratic)):
        root = sp.nsolve(p * z**2 + qq * z + r, z, 0.16, prec=40)
        assert abs(decimal.Decimal(str(root)) / surd.decimal(40) - 1) < decimal.Decimal("1e-12")
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        assert abs(c.growth_lower.decimal(40) * c.z1.decimal(40) - 1) < decimal.Decimal("1e-35")
        assert abs(c.growth_upper.decimal(40) * c.z2.decimal(40) - 1) < decimal.Decimal("1e-35")


# ---------------------------------------------------------------- sandwich and decay


def test_sandwich_examples():
    assert sandwich_gamma(2, 4, Fraction(1, 2)) == Fraction(5, 7)
    assert sandwich_gamma(2, 4, 0.5) == pytest.approx(2.5 / 3.5)
    with pytest.raises(SlackTooLarge):
        sandwich_gamma(1, 1.1, 0.2)
    s = GrowthSandwich.build(2, 4, Fraction(1, 2))
    assert s.gamma == Fraction(5, 7)


@given(
    st.fractions(min_value=1, max_value=20, max_denominator=50),
    st.fractions(min_value=0, max_value=20, max_denominator=50),
    st.fractions(min_value=0, max_value=5, max_denominator=50),
)
def test_gamma_lies_in_unit_interval(alpha, gap, eps):
    if eps <= 0 or gap <= 2 * eps:
        with pytest.raises(GrowthError):
            sandwich_gamma(alpha, alpha + gap, eps)
        return
    g = sandwich_gamma(alpha, alpha + gap, eps)
    assert 0 < g < 1


def test_decay_certificate():
    cert = decay_bound()
    assert cert.delta == Fraction(61433, 61479)
    assert cert.holds and cert.delta < Fraction(9993, 10000)
    c = singularity_constants()
    assert cert.supremum_ratio == c.growth_upper.decimal(40) / c.growth_lower.decimal(40)
    assert cert.supremum_ratio < decimal.Decimal("0.9993")


# ---------------------------------------------------------------- density curves


def test_density_examples():
    xs = [3, 5, 8, 13]
    assert set(density_curve(xs, xs).pointwise) == {1} and set(density_curve(xs, xs).cumulative) == {1}
    assert set(density_curve(xs, [0] * 4).pointwise) == {0}
    with pytest.raises(LengthMismatch):
        density_curve([1, 2], [1])
    with pytest.raises(GrowthError):
        density_curve([0, 2], [0, 1])


def test_geometric_density():
    n = 12
    curve = density_curve([4**k for k in range(n)], [2**k for k in range(n)])
    assert curve.pointwise == [Fraction(1, 2**k) for k in range(n)]
    # cumulative ratio decays at the same rate, with constant 2
    for k, c in enumerate(curve.cumulative):
        assert c <= 2 * Fraction(1, 2**k)
