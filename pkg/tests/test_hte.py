from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ospnlie.errors import AnsatzError, PadeDegeneracyError, PoleError
from ospnlie.hte import (ANSATZ_SHIFTS, BetaSeries, Gauss, LaurentAtPoint, PoleRational,
                         contour_residue_rhs, matched_identity_residual, numeric_rhs_order, pade,
                         run_hte, specific_heat_coefficients, t0_exponent)
from ospnlie.hte.linalg import solve_exact

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gauss = st.builds(Gauss, small, small)
nonzero_gauss = gauss.filter(bool)
pole_points = st.sampled_from([Gauss(0, 1), Gauss(0, -1), Gauss(0, Fraction(3, 2)), Gauss(1, 2), Gauss(-2, 0)])


@st.composite
def pole_rationals(draw):
    poles = {}
    for p in draw(st.lists(pole_points, max_size=3, unique=True)):
        poles[p] = draw(st.lists(gauss, min_size=1, max_size=3))
    return PoleRational(draw(gauss), poles)


# ---------------------------------------------------------------- Gauss

@given(gauss, gauss, gauss)
def test_gauss_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(nonzero_gauss)
def test_gauss_reciprocal(a):
    assert a * a.reciprocal() == Gauss(1)
    assert complex(a.reciprocal()) == pytest.approx(1 / complex(a))


def test_gauss_rejects_float():
    with pytest.raises(TypeError):
        Gauss.coerce(0.5)


def test_solve_exact_matches_numpy():
    m = [[Gauss(2), Gauss(1, 1)], [Gauss(0, 1), Gauss(3)]]
    rhs = [Gauss(1), Gauss(2, -1)]
    x = solve_exact(m, rhs)
    ref = np.linalg.solve(np.array([[complex(c) for c in r] for r in m]), [complex(c) for c in rhs])
    assert np.allclose([complex(c) for c in x], ref, atol=1e-14)
    with pytest.raises(ZeroDivisionError):
        solve_exact([[Gauss(1), Gauss(2)], [Gauss(2), Gauss(4)]], rhs)


# ---------------------------------------------------------------- Laurent

def test_laurent_product_range_and_residue():
    # 1/w (exact to w^2) times 1 + w + w^2 (exact to w^2) is exact through w^1
    a = LaurentAtPoint(0, -1, [1, 0, 0, 0])
    b = LaurentAtPoint(0, 0, [1, 1, 1])
    c = a * b
    assert c.hi == 1
    assert c.residue() == Gauss(1)
    assert c.principal_part() == [Gauss(1)]
    with pytest.raises(IndexError):
        c[2]
    assert (LaurentAtPoint(0, -1, [1]) * b).hi == -1


def test_laurent_mixed_points_rejected():
    with pytest.raises(ValueError):
        LaurentAtPoint(0, 0, [1]) + LaurentAtPoint(Gauss(0, 1), 0, [1])


# ---------------------------------------------------------------- PoleRational

@settings(max_examples=60, deadline=None)
@given(pole_rationals(), pole_rationals())
def test_pole_rational_arithmetic_matches_numeric(f, g):
    v = 0.31 + 0.17j
    assert complex((f + g).evaluate(v)) == pytest.approx(f.evaluate(v) + g.evaluate(v), rel=1e-9, abs=1e-9)
    assert complex((f * g).evaluate(v)) == pytest.approx(f.evaluate(v) * g.evaluate(v), rel=1e-9, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(pole_rationals(), gauss)
def test_pole_rational_shift(f, c):
    v = Gauss(Fraction(1, 3), Fraction(1, 7))
    try:
        expected = f.evaluate(v + c)
    except PoleError:
        return
    assert f.shift(c).evaluate(v) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_even_family_round_trip(n, data):
    fam = {h: data.draw(st.lists(small, min_size=n, max_size=n)) for h in ANSATZ_SHIFTS}
    f = PoleRational.from_even_family(n, fam)
    assert f.is_even() and f.is_real_function()
    assert f.to_even_family(n, ANSATZ_SHIFTS) == {Fraction(h): c for h, c in fam.items()}
    v = Fraction(2, 5)
    direct = sum(sum(e * v ** (2 * j) for j, e in enumerate(c)) / (v * v + h) ** n for h, c in fam.items())
    assert f.evaluate(v) == Gauss(direct)


def test_even_family_rejects_foreign_poles():
    f = PoleRational.simple_pole(Gauss(0, 2)) - PoleRational.simple_pole(Gauss(0, -2))
    with pytest.raises(AnsatzError):
        f.to_even_family(1, ANSATZ_SHIFTS)
    with pytest.raises(AnsatzError):
        PoleRational.simple_pole(Gauss(0, 1)).to_even_family(1, ANSATZ_SHIFTS)


def test_pole_error():
    with pytest.raises(PoleError):
        PoleRational.simple_pole(Gauss(0, 1)).evaluate(Gauss(0, 1))


# ---------------------------------------------------------------- BetaSeries

def _scalar_series(values):
    return BetaSeries([LaurentAtPoint.constant(0, Gauss(x), 0) for x in values])


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=2, max_size=6))
def test_beta_series_exp_log_inverse(cs):
    s = _scalar_series([0] + cs)
    back = s.exp().log()
    assert [c.scalar() for c in back.coeffs] == [c.scalar() for c in s.coeffs]


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=6), nonzero_gauss)
def test_beta_series_reciprocal(cs, c0):
    s = BetaSeries([LaurentAtPoint.constant(0, c0, 0)] + [LaurentAtPoint.constant(0, Gauss(x), 0) for x in cs])
    prod = s * s.reciprocal()
    assert prod.coeffs[0].scalar() == Gauss(1)
    assert all(c.scalar() == 0 for c in prod.coeffs[1:])


# ---------------------------------------------------------------- Pade

def test_pade_reproduces_rational_function():
    # (1 + x) / (1 - 2x) = 1 + 3x + 6x^2 + 12x^3 + ...
    coeffs = [1] + [3 * 2 ** (k - 1) for k in range(1, 8)]
    p = pade(coeffs, 1, 1)
    assert p.numerator == (1, 1) and p.denominator == (1, -2)
    assert p.exact(Fraction(1, 5)) == Fraction(6, 5) / Fraction(3, 5)


def test_pade_fallback_on_degenerate_system():
    coeffs = [1, 0, 0, 0, 0]
    with pytest.raises(PadeDegeneracyError):
        pade(coeffs, 2, 2, fallback=False)
    p = pade(coeffs, 2, 2)
    assert p.requested == (2, 2) and p.degrees != (2, 2)
    assert p(0.3) == pytest.approx(1.0)


def test_pade_needs_enough_terms():
    with pytest.raises(ValueError):
        pade([1, 2, 3], 2, 2)


# ---------------------------------------------------------------- expansion

def test_t0_exponent():
    f = t0_exponent()
    for v in (0.0, 0.7, 1.3 + 0.2j):
        assert complex(f.evaluate(v)) == pytest.approx(1j * (1 / (v - 0.5j) - 1 / (v + 0.5j)))


def test_ansatz_functions_real_even(hte13):
    for n in range(1, 14):
        a = hte13.a[n - 1]
        assert a.is_even() and a.is_real_function()
        assert set(hte13.family(n)) == set(map(Fraction, ANSATZ_SHIFTS))


def test_matched_identity_vanishes(hte13):
    for n in range(1, 7):
        assert matched_identity_residual(hte13.a[:n], n) == PoleRational(0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_residue_rhs_against_quadrature(hte13, n):
    rhs = contour_residue_rhs(hte13.a[: n - 1], n)
    for v in (0.0, 0.8, 2.5 + 0.3j):
        assert complex(rhs.evaluate(v)) == pytest.approx(numeric_rhs_order(hte13.a[: n - 1], n, v), abs=1e-12)


def test_specific_heat_relation(hte13):
    assert hte13.specific_heat == specific_heat_coefficients(hte13.f_over_t)
    assert hte13.specific_heat[0] == 0


def test_series_consistency_with_lower_orders(hte13):
    low = run_hte(5)
    assert low.f_over_t == hte13.f_over_t[:5]
    assert [x == y for x, y in zip(low.a, hte13.a)] == [True] * 5


def test_run_hte_order_bounds():
    with pytest.raises(ValueError):
        run_hte(0)
    with pytest.raises(ValueError):
        run_hte(17)


def test_free_energy_value(hte13):
    T = 10.0
    beta = -1 / T
    direct = T * (-np.log(3) + sum(float(c) * beta ** (k + 1) for k, c in enumerate(hte13.f_over_t[:12])))
    assert hte13.free_energy(T, -1.0, 12) == pytest.approx(direct, rel=1e-15)
