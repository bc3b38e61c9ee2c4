"""Closed-form cubic/quartic root extraction."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from lrlvec import poly_roots


def _cubic_from_roots(r0, r1, r2):
    # y^3 + 3p y + 2q with zero quadratic term requires r0+r1+r2 = 0.
    e2 = r0 * r1 + r0 * r2 + r1 * r2
    e3 = r0 * r1 * r2
    return e2 / 3.0, -e3 / 2.0


def _quartic_from_roots(roots):
    coeffs = [1.0]
    for r in roots:
        coeffs = [coeffs[0]] + [coeffs[i + 1] - r * coeffs[i]
                                for i in range(len(coeffs) - 1)] + [-r * coeffs[-1]]
    return coeffs[1], coeffs[2], coeffs[3], coeffs[4]


def test_cubic_three_real_roots():
    want = sorted([-2.0, 0.5, 1.5])
    p, q = _cubic_from_roots(*want)
    rs = poly_roots.depressed_cubic_roots(p, q)
    assert rs.real_roots == pytest.approx(want, rel=1e-12)
    assert not rs.complex_pairs


def test_cubic_one_real_root_hyperbolic_branches():
    # One real root of each sign exercises the sinh and cosh forms.
    for real_root in (2.0, -2.0):
        # (y - a)(y^2 + a y + b) with b > a^2/4 keeps the pair complex.
        a, b = real_root, 5.0
        # expand: y^3 + (b - a^2) y - a b; zero quadratic term by construction
        p = (b - a * a) / 3.0
        q = -a * b / 2.0
        rs = poly_roots.depressed_cubic_roots(p, q)
        assert len(rs.real_roots) == 1
        assert rs.real_roots[0] == pytest.approx(real_root, rel=1e-12)
        assert len(rs.complex_pairs) == 1


def test_cubic_degenerate_cases():
    rs = poly_roots.depressed_cubic_roots(0.0, 0.0)
    assert rs.real_roots == pytest.approx([0.0, 0.0, 0.0], abs=1e-300)
    # Double root: (y-1)^2 (y+2) = y^3 - 3y + 2.
    rs = poly_roots.depressed_cubic_roots(-1.0, 1.0)
    assert sorted(rs.real_roots) == pytest.approx([-2.0, 1.0, 1.0], rel=1e-7)


@settings(max_examples=80, deadline=None)
@given(st.floats(-50.0, 50.0), st.floats(-50.0, 50.0))
def test_cubic_vieta_property(a, b):
    c = -(a + b)
    p, q = _cubic_from_roots(a, b, c)
    rs = poly_roots.depressed_cubic_roots(p, q)
    res = rs.vieta_residuals()
    assert max(res.values()) < 1e-8


def test_quartic_four_real_roots():
    want = sorted([-3.0, -0.5, 1.25, 4.0])
    rs = poly_roots.quartic_roots_resolvent(*_quartic_from_roots(want))
    assert rs.real_roots == pytest.approx(want, rel=1e-11)


def test_quartic_two_real_two_complex():
    # (r^2 - 4)(r^2 + 2r + 10)
    rs = poly_roots.quartic_roots_resolvent(2.0, 6.0, -8.0, -40.0)
    assert rs.real_roots == pytest.approx([-2.0, 2.0], rel=1e-12)
    assert len(rs.complex_pairs) == 1
    re, im = rs.complex_pairs[0]
    assert re == pytest.approx(-1.0, abs=1e-12)
    assert abs(im) == pytest.approx(3.0, rel=1e-12)


def test_quartic_no_real_roots():
    # (r^2 + 1)(r^2 + 4)
    rs = poly_roots.quartic_roots_resolvent(0.0, 5.0, 0.0, 4.0)
    assert not rs.real_roots
    ims = sorted(abs(im) for _, im in rs.complex_pairs)
    assert ims == pytest.approx([1.0, 2.0], rel=1e-12)


def test_quartic_quadratic_pairing_regression():
    # Asymmetric root sets where the resolvent factorization must match
    # each linear coefficient to the correct quadratic factor; a sign slip
    # in the pairing reproduces the roots of a different polynomial.
    cases = [
        [-15.7, 0.56, 6.9, 8.3],
        [-100.0, 0.01, 0.02, 50.0],
        [-1.0, -0.9, 0.1, 12.0],
    ]
    for want in cases:
        c3, c2, c1, c0 = _quartic_from_roots(want)
        rs = poly_roots.quartic_roots_resolvent(c3, c2, c1, c0)
        assert rs.real_roots == pytest.approx(want, rel=1e-8)
        assert max(rs.vieta_residuals().values()) < 1e-9


def test_quartic_widely_split_scales_high_precision():
    # Roots of order 1 coexisting with a root of order 1e17; the float
    # closed form cancels the small roots away, the mpmath arm must not.
    want = [0.5, 1.0, 2.0, 1.0e17]
    c3, c2, c1, c0 = _quartic_from_roots(want)
    rs = poly_roots.quartic_roots_resolvent(c3, c2, c1, c0, hi_prec=True)
    assert rs.real_roots == pytest.approx(want, rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-20.0, 20.0), min_size=4, max_size=4))
def test_quartic_real_roots_roundtrip_property(roots):
    want = sorted(roots)
    spread = max(want) - min(want)
    rs = poly_roots.quartic_roots_resolvent(*_quartic_from_roots(want))
    got = sorted(rs.real_roots + [re for re, _ in rs.complex_pairs
                                  for _ in range(2)])
    assert len(got) == 4
    tol = 1e-6 * max(1.0, spread) + 1e-9
    # Near-degenerate random draws can legitimately report a tight complex
    # pair instead of a double real root; compare the full multiset.
    for g, w in zip(got, want):
        assert abs(g - w) < max(tol, 2e-4 * max(1.0, abs(w)))


def test_quartic_discriminant_helpers():
    # (p, q, R) form: two sign-definite quantities decide the real-root count.
    d = poly_roots.quartic_delta(-5.0, 0.0, 4.0)
    assert isinstance(d, float)
    assert poly_roots.quartic_two_real_test(2.0, 6.0, -40.0) in (True, False)


def test_rootset_reports_source_and_residuals():
    rs = poly_roots.quartic_roots_resolvent(2.0, 6.0, -8.0, -40.0)
    assert rs.source["kind"].startswith("quartic")
    assert max(rs.residuals()) < 1e-9
