"""Effective-potential landmarks, regime classification, and mappings."""

import math

import pytest

from lrlvec import potentials as pot


K = pot.kepler(1.0)


def test_v_eff_definition():
    ctx = pot.RadialContext(2.0, 0.0)
    for spec, v_at_2 in [
        (pot.kepler(1.0), -0.5),
        (pot.harmonic(1.0), 4.0),
        (pot.oblate(1.0, 1.0), -0.5 - 0.125),
        (pot.cosmological(1.0, 0.06), -0.5 - 0.06 * 4.0),
        (pot.cornell(1.0, 0.5), -0.5 + 1.0),
    ]:
        assert pot.potential(spec, ctx, 2.0) == pytest.approx(v_at_2, rel=1e-15)
        assert pot.v_eff(spec, ctx, 2.0) == pytest.approx(v_at_2 + 0.5, rel=1e-15)


def test_derivatives_are_consistent():
    ctx = pot.RadialContext(1.3, -0.2)
    for spec in (K, pot.harmonic(0.7), pot.oblate(0.5, 0.2),
                 pot.cosmological(1.0, 0.01), pot.cornell(1.0, 0.3)):
        for r in (0.7, 1.5, 3.0):
            h = 1e-6 * r
            num = (pot.v_eff(spec, ctx, r + h) - pot.v_eff(spec, ctx, r - h)) / (2 * h)
            assert pot.dv_eff(spec, ctx, r) == pytest.approx(num, rel=1e-7)
            num2 = (pot.dv_eff(spec, ctx, r + h) - pot.dv_eff(spec, ctx, r - h)) / (2 * h)
            assert pot.d2v_eff(spec, ctx, r) == pytest.approx(num2, rel=1e-6)


def test_kepler_regimes():
    assert pot.classify_regime(K, pot.RadialContext(1.0, -0.3)).regime == "Bounded"
    assert pot.classify_regime(K, pot.RadialContext(1.0, 0.5)).regime == "Unbounded"
    circ = pot.classify_regime(K, pot.RadialContext(1.0, -0.5))
    assert circ.regime == "Circular"
    assert circ.details["r_min"] == pytest.approx(1.0, rel=1e-12)


def test_kepler_turning_points_closed_form():
    ctx = pot.RadialContext(math.sqrt(3.0 / 8.0), -1.0)
    tp = pot.turning_points(K, ctx)
    assert tp.real_roots == pytest.approx([0.25, 0.75], rel=1e-12)
    rep = pot.classify_regime(K, ctx)
    assert rep.details["r_peri"] == pytest.approx(0.25, rel=1e-12)
    assert rep.details["r_apo"] == pytest.approx(0.75, rel=1e-12)


def test_oblate_regime_boundary():
    # alpha = 2E(l^2)^... the shape parameter decides whether V_eff has a
    # max/min pair; crossing the 4/3 boundary flips Monotone to non-Monotone.
    spec = pot.oblate(0.1, 1.0)
    lo = pot.classify_regime(spec, pot.RadialContext(0.5, -1e-3))
    hi = pot.classify_regime(spec, pot.RadialContext(2.0, -1e-3))
    assert lo.regime == "Monotone"
    assert lo.details["alpha"] < 4.0 / 3.0
    assert hi.regime == "Bounded"
    assert hi.details["alpha"] > 4.0 / 3.0


def test_oblate_bounded_root_ordering():
    spec = pot.oblate(0.1, 1.0)
    ctx = pot.RadialContext(2.0, -1e-3)
    tp = pot.turning_points(spec, ctx)
    r0, r1, r2 = tp.real_roots
    assert 0.0 < r0 < r1 < r2
    assert r1 == pytest.approx(26.8206, rel=1e-4)
    assert r2 == pytest.approx(72.6663, rel=1e-4)


def test_cosmological_turning_points_and_extrema():
    spec = pot.cosmological(1.0, 1e-3)
    ctx = pot.RadialContext(1.0, -0.182)
    tp = pot.turning_points(spec, ctx)
    assert len(tp.real_roots) == 4
    assert tp.real_roots[0] < 0.0 < tp.real_roots[1]
    sp = pot.stationary_points(spec, ctx)
    assert sp.labels == ["min", "max"]
    for r, lab in zip(sp.real_roots, sp.labels):
        assert abs(pot.dv_eff(spec, ctx, r)) < 1e-10
        curv = pot.d2v_eff(spec, ctx, r)
        assert (curv > 0.0) == (lab == "min")


def test_cosmological_lambda_bound():
    # Largest positive lambda still admitting a potential barrier.
    bound = pot.desitter_lambda_bound(1.0, 1.0)
    assert bound == pytest.approx(27.0 / 512.0, rel=1e-12)
    below = pot.classify_regime(pot.cosmological(1.0, 0.9 * bound),
                                pot.RadialContext(1.0, -0.45))
    assert "lambda_margin" in below.details
    above = pot.classify_regime(pot.cosmological(1.0, 1.5 * bound),
                                pot.RadialContext(1.0, -0.45))
    assert above.regime == "Monotone"


def test_critical_max_detection():
    spec = pot.cosmological(1.0, 1e-52)
    rep = pot.classify_regime(spec, pot.RadialContext(1.0, -8.773e-18),
                              critical_tol=1e-3)
    assert rep.regime == "CriticalMax"
    plain = pot.classify_regime(spec, pot.RadialContext(1.0, -8.773e-18))
    assert plain.regime != "CriticalMax"


def test_cornell_turning_points():
    tp = pot.turning_points(pot.cornell(1.0, 1.0), pot.RadialContext(1.0, 1.0))
    assert tp.real_roots == pytest.approx([-0.85464, 0.40303, 1.45161],
                                          rel=2e-5)


def test_anti_desitter_always_bounded_at_zero_energy():
    spec = pot.cosmological(1.0, -1e-3)
    rep = pot.classify_regime(spec, pot.RadialContext(1.0, 0.0))
    assert rep.regime == "Bounded"
    assert rep.details["r_peri"] > 0.0


def test_gr_mapping_reduces_to_oblate():
    spec = pot.gr_mapping(1.0, 10.0, 2.0)
    assert spec.family == "oblate"
    assert spec.params["k"] == pytest.approx(1.0)
    # cubic-correction strength GM * ell^2 / c^2
    assert spec.params["B"] == pytest.approx(1.0 * 4.0 / 100.0, rel=1e-14)


def test_relativistic_coulomb_reduction():
    spec = pot.str_coulomb(1.0, 1.0, 2.0, 1.5)
    a, b, eps = pot.str_reduction(spec)
    assert a == pytest.approx(1.5 ** 2 - 1.0, rel=1e-15)
    assert b == pytest.approx(2.0, rel=1e-15)
    assert eps == pytest.approx(1.5, rel=1e-15)


def test_kottler_newtonian_limit():
    # Phi = -r_s/r - r^2/(6 r_lambda^2); barrier top where the two pulls balance.
    r_s, r_lam = 0.01, 100.0
    r = 2.0
    assert pot.kottler_potential(r_s, r_lam, r) == pytest.approx(
        -r_s / r - r * r / (6.0 * r_lam * r_lam), rel=1e-15)
    rmax = pot.kottler_r_max(r_s, r_lam)
    assert rmax == pytest.approx((3.0 * r_s * r_lam * r_lam) ** (1.0 / 3.0),
                                 rel=1e-12)


def test_legendre_values():
    assert pot.legendre_p(2, 0.0) == pytest.approx(-0.5, abs=1e-15)
    assert pot.legendre_p(4, 0.0) == pytest.approx(0.375, abs=1e-15)
    assert pot.legendre_p(3, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert pot.legendre_p_zero(2) == pytest.approx(-0.5, abs=1e-15)


def test_ring_series_coefficients():
    # -GM/r (1 + 1/4 (a/r)^2 + 9/64 (a/r)^4 + ...)
    GM, a = 1.0, 1.0
    for n, want in ((0, 1.0), (1, 0.25), (2, 9.0 / 64.0)):
        coeff = pot.legendre_p_zero(2 * n) ** 2
        assert coeff == pytest.approx(want, abs=1e-15)
    r = 10.0
    two_terms = pot.ring_potential(GM, a, r, 2)
    assert two_terms == pytest.approx(-(1.0 / r) * (1.0 + 0.25 / r ** 2
                                                    + (9.0 / 64.0) / r ** 4),
                                      rel=1e-15)


def test_ring_far_field_is_keplerian():
    assert pot.ring_potential(1.0, 1.0, 1e6, 4) == pytest.approx(-1e-6, rel=1e-11)


def test_spheroid_equatorial_matches_oblate_mapping():
    GM, R, J2 = 1.0, 0.5, 0.04
    spec = pot.spheroid_oblate_mapping(GM, R, J2)
    ctx = pot.RadialContext(1.0, 0.0)
    for r in (0.8, 1.5, 3.0, 10.0):
        want = pot.spheroid_potential(GM, R, J2, r, 0.5 * math.pi)
        assert pot.potential(spec, ctx, r) == pytest.approx(want, rel=1e-13)


def test_planetary_sum_superposes():
    # Interior rings expand in (a/r), exterior rings in (r/a); the constant
    # exterior monopole carries no force and is dropped.
    bodies = [(0.1, 0.5), (0.05, 12.0)]
    r = 2.0
    val = pot.planetary_sum(1.0, bodies, r, n_terms=2)
    want = -1.0 / r
    for k in (1, 2):
        coeff = pot.legendre_p_zero(2 * k) ** 2
        want -= coeff * (0.1 / 0.5 * (0.5 / r) ** (2 * k + 1)
                         + 0.05 / 12.0 * (r / 12.0) ** (2 * k))
    assert val == pytest.approx(want, rel=1e-14)
    with pytest.raises(pot.NonConvergentError):
        pot.planetary_sum(1.0, [(0.1, 2.001)], 2.0)


def test_domain_errors():
    ctx = pot.RadialContext(1.0, 0.0)
    with pytest.raises(pot.PotentialDomainError):
        pot.v_eff(K, ctx, -1.0)
    with pytest.raises(pot.PotentialDomainError):
        pot.str_reduction(K)
