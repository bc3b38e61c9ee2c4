"""Kepler motion with an inverse-square drag force.

The system is rddot + (alpha/r^2) rdot + (mu/r^3) r = 0: Newtonian gravity
plus a friction term that falls off quadratically with distance.  Despite
the dissipation it admits a conserved Hamiltonian vector K = rdot/ell + u
and a conserved vector A = K x ell_hat perpendicular to the angular
momentum, and the trajectory closes in the form

    r(phi) = 1 / (z(phi) + A cos(phi - phi0)),

where z is an explicit combination of sine and cosine integrals.  This
module evaluates the closed forms, detects the infall onto the center, and
rebuilds K and A from numerically integrated orbit samples as an
independent cross-check.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import oracle, specfun


class FrictionError(ValueError):
    """Base class for friction-system domain failures."""


class FrictionDomainError(FrictionError):
    """Angular momentum has decayed through zero (xi <= 0)."""


class TrajectoryUndefinedError(FrictionError):
    """The closed-form denominator is nonpositive at the requested angle."""


@dataclass(frozen=True)
class FrictionSpec:
    """Parameters of the dragged Kepler system.

    alpha scales the friction alpha/r^2, mu the gravity mu/r^3 (so the
    radial pull is mu/r^2), beta is the integration constant of the
    angular-momentum law ell = beta - alpha*phi, A_mag the magnitude of the
    conserved vector, and phi0 its direction.  The closed form normalizes
    r.A to 1 - z r, which ties A_mag to the chosen length scale; here it is
    kept as a free parameter.
    """

    alpha: float
    mu: float
    beta: float
    A_mag: float
    phi0: float = 0.0

    def __post_init__(self):
        if self.alpha < 0.0:
            raise FrictionError("alpha must be >= 0 (alpha = 0 disables drag)")
        if self.alpha > 0.0 and self.beta <= self.alpha * self.phi0:
            raise FrictionError("ell(phi0) = beta - alpha*phi0 must be positive")
        if self.alpha == 0.0 and self.beta <= 0.0:
            raise FrictionError("beta must be positive when alpha = 0")


def ell_of_phi(spec: FrictionSpec, phi: float) -> float:
    """Specific angular momentum ell(phi) = beta - alpha*phi.

    Friction drains ell linearly in the accumulated angle; the motion ends
    where ell reaches zero (phi = beta/alpha).
    """
    ell = spec.beta - spec.alpha * phi
    if ell <= 0.0:
        raise FrictionDomainError(
            "ell(phi) = %.6g <= 0 at phi = %.6g: past the infall angle"
            % (ell, phi))
    return ell


def xi_of_phi(spec: FrictionSpec, phi: float) -> float:
    """Remaining angle budget xi = beta/alpha - phi (requires alpha > 0)."""
    if spec.alpha == 0.0:
        raise FrictionError("xi is undefined for alpha = 0")
    return spec.beta / spec.alpha - phi


def z_of_phi(spec: FrictionSpec, phi: float) -> float:
    """The trajectory offset z(phi) = integral of v(eta) sin(phi - eta)
    from phi0 to phi, with v = mu / (beta - alpha*eta)^2.

    Evaluated in closed form through sine and cosine integrals; the Ci
    difference is kept paired so the logarithmic divergence at xi0 -> 0
    cancels exactly.  z -> +inf as phi approaches beta/alpha, which is the
    infall: r = 1/(z + ...) -> 0.
    """
    if spec.mu == 0.0:
        ell_of_phi(spec, phi)  # still enforce the domain
        return 0.0
    if spec.alpha == 0.0:
        return spec.mu * (1.0 - math.cos(phi - spec.phi0)) / (spec.beta ** 2)
    return _z_at_xi(spec, xi_of_phi(spec, phi), xi_of_phi(spec, spec.phi0),
                    delta=phi - spec.phi0)


def _aux_shifted(x: float):
    """(f(x) - 1/x, g(x)) for the Si/Ci auxiliary pair, x > 4.

    The plain subtraction loses eps*x relative accuracy because
    f ~ 1/x - 2/x^3; past x = 1e4 the alternating factorial series for the
    shifted value reaches machine precision in a few terms.
    """
    if x < 1e4:
        f, g = specfun.sici_auxiliary(x)
        return f - 1.0 / x, g
    x2 = x * x
    fs, gs = 0.0, 1.0
    f_term, g_term = 1.0, 1.0
    n = 0
    while True:
        n += 1
        f_term *= -(2 * n) * (2 * n - 1) / x2
        g_term *= -(2 * n + 1) * (2 * n) / x2
        fs += f_term
        gs += g_term
        if abs(f_term) < 1e-18 * max(abs(fs), 1e-300):
            break
    return fs / x, gs / x2


def _z_at_xi(spec: FrictionSpec, xi: float, xi0: float,
             delta: float = None) -> float:
    # Worker in the remaining-angle variable; callers probing the infall
    # use it directly because phi = beta/alpha - xi loses xi to rounding.
    if xi <= 0.0 or xi0 <= 0.0:
        raise FrictionDomainError(
            "z(phi) needs xi > 0 and xi0 > 0 (got xi = %.6g, xi0 = %.6g)"
            % (xi, xi0))
    scale = spec.mu / spec.alpha ** 2
    if delta is None:
        delta = xi0 - xi
    if min(xi, xi0) > 4.0:
        # Both arguments on the asymptotic side: the Si/Ci differences are
        # tiny against their O(1) values, and the mu/alpha^2 prefactor can
        # be enormous (weak drag).  The auxiliary pair f ~ 1/x, g ~ 1/x^2
        # carries those differences at full relative precision.  The exact
        # swept angle delta = phi - phi0 matters more than xi itself: at
        # xi0 ~ 1e9 the subtraction xi0 - xi has already lost it.
        fs0, g0 = _aux_shifted(xi0)
        _, g1 = _aux_shifted(xi)
        return scale * (fs0 * math.sin(delta) - g0 * math.cos(delta) + g1)
    si = specfun.sine_integral
    ci = specfun.cosine_integral
    return scale * (
        math.sin(xi - xi0) / xi0
        - (si(xi) - si(xi0)) * math.sin(xi)
        - (ci(xi) - ci(xi0)) * math.cos(xi))


def friction_trajectory(spec: FrictionSpec, phi: float) -> float:
    """Radial position r(phi) = 1 / (z(phi) + A cos(phi - phi0)).

    Raises TrajectoryUndefinedError where the denominator is nonpositive
    (the closed form only covers arcs on the physical side of the conic)
    and FrictionDomainError past the infall angle.
    """
    denom = z_of_phi(spec, phi) + spec.A_mag * math.cos(phi - spec.phi0)
    if denom <= 0.0:
        raise TrajectoryUndefinedError(
            "trajectory denominator %.6g <= 0 at phi = %.6g" % (denom, phi))
    return 1.0 / denom


def infall_radius(spec: FrictionSpec, xi: float) -> float:
    """Radius at remaining angle budget xi = beta/alpha - phi.

    Equivalent to friction_trajectory at phi = beta/alpha - xi, but stays
    usable for xi below the rounding granularity of beta/alpha, where the
    logarithmic final plunge lives.
    """
    xi0 = xi_of_phi(spec, spec.phi0)
    denom = _z_at_xi(spec, xi, xi0) + spec.A_mag * math.cos(xi0 - xi)
    if denom <= 0.0:
        raise TrajectoryUndefinedError(
            "trajectory denominator %.6g <= 0 at xi = %.6g" % (denom, xi))
    return 1.0 / denom


def crash_angle(spec: FrictionSpec, phi_start: float,
                floor_factor: float = 1e-8) -> float:
    """Angle at which the particle has fallen to floor_factor times its
    radius at phi_start.

    The denominator diverges only logarithmically as xi -> 0, so the root
    is bracketed by bisection in log(xi).  When the target radius is not
    reached before xi underflows (the log divergence packs the final decay
    into a phi-gap below double resolution), the singular angle beta/alpha
    is itself the correctly rounded crash angle and is returned.
    """
    if spec.alpha <= 0.0:
        raise FrictionError("no infall without drag (alpha = 0)")
    r_start = friction_trajectory(spec, phi_start)
    target = 1.0 / (floor_factor * r_start)  # denominator at the floor radius
    xi0 = xi_of_phi(spec, spec.phi0)

    def denom(log_xi):
        xi = math.exp(log_xi)
        return _z_at_xi(spec, xi, xi0) + spec.A_mag * math.cos(xi0 - xi)

    lo = math.log(1e-290)
    hi = math.log(xi_of_phi(spec, phi_start))
    if denom(lo) < target:
        return spec.beta / spec.alpha
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if denom(mid) >= target:
            lo = mid
        else:
            hi = mid
    return spec.beta / spec.alpha - math.exp(0.5 * (lo + hi))


@dataclass(frozen=True)
class FrictionSample:
    """One integrated state of the dragged system."""

    t: float
    r: float
    rdot: float
    phi: float
    ell: float


def _friction_rhs(spec: FrictionSpec):
    # State y = (r, rdot, phi, ell); phidot = ell/r^2 and the drag removes
    # ell at rate alpha*ell/r^2, consistent with ell = beta - alpha*phi.
    alpha, mu = spec.alpha, spec.mu

    def rhs(t, y):
        r, rdot, phi, ell = y
        inv_r2 = 1.0 / (r * r)
        return (rdot,
                ell * ell * inv_r2 / r - alpha * rdot * inv_r2 - mu * inv_r2,
                ell * inv_r2,
                -alpha * ell * inv_r2)

    return rhs


def integrate_friction_orbit(spec: FrictionSpec, r0: float, rdot0: float,
                             phi_start: float, t_span: float,
                             rel_tol: float = 1e-11, abs_tol: float = 1e-13,
                             max_step: Optional[float] = None,
                             r_floor: float = 0.0) -> List[FrictionSample]:
    """Integrate the dragged equations of motion from (r0, rdot0, phi_start).

    The launch angular momentum is pinned by the decay law, ell0 =
    beta - alpha*phi_start.  Stops early if r drops below r_floor.
    """
    if r0 <= 0.0:
        raise FrictionError("r0 must be positive")
    ell0 = ell_of_phi(spec, phi_start)
    stop = None
    if r_floor > 0.0:
        def stop(t, y):
            return y[0] <= r_floor
    steps = oracle.integrate_ode(_friction_rhs(spec),
                                 (r0, rdot0, phi_start, ell0),
                                 0.0, t_span, rel_tol=rel_tol,
                                 abs_tol=abs_tol, max_step=max_step,
                                 stop_condition=stop)
    return [FrictionSample(t=t, r=y[0], rdot=y[1], phi=y[2], ell=y[3])
            for t, y in steps]


def hamiltonian_vector(spec: FrictionSpec,
                       samples: Sequence[FrictionSample]) -> dict:
    """Rebuild the conserved vectors K = rdot_vec/ell + u and A = K x ell_hat
    from integrated orbit samples.

    u is accumulated over phi rather than t: with v(phi) = mu/(beta -
    alpha*phi)^2 the components are plain quadratures of v cos and v sin,
    which sidesteps the time-grid error of a cumulative trapezoid.  Returns
    the K and A series together with their drift statistics.
    """
    if len(samples) < 2:
        raise FrictionError("need at least two samples")
    k_series: List[Tuple[float, float]] = []
    a_series: List[Tuple[float, float]] = []
    ux = uy = 0.0
    phi_prev = samples[0].phi

    def v_cos(eta):
        return spec.mu / (spec.beta - spec.alpha * eta) ** 2 * math.cos(eta)

    def v_sin(eta):
        return spec.mu / (spec.beta - spec.alpha * eta) ** 2 * math.sin(eta)

    for s in samples:
        if s.phi != phi_prev:
            ux += oracle.quadrature(v_cos, phi_prev, s.phi, tol=1e-13)
            uy += oracle.quadrature(v_sin, phi_prev, s.phi, tol=1e-13)
            phi_prev = s.phi
        phidot = s.ell / (s.r * s.r)
        cosp, sinp = math.cos(s.phi), math.sin(s.phi)
        vx = s.rdot * cosp - s.r * phidot * sinp
        vy = s.rdot * sinp + s.r * phidot * cosp
        kx = vx / s.ell + ux
        ky = vy / s.ell + uy
        k_series.append((kx, ky))
        # ell_hat = +z for ell > 0, so K x ell_hat = (ky, -kx).
        a_series.append((ky, -kx))
    return {"K": k_series, "A": a_series,
            "K_drift": oracle.drift(k_series),
            "A_drift": oracle.drift(a_series)}


def linear_drag_momentum(mu: float, lam: float, r0: float, rdot0: float,
                         phidot0: float, t_span: float,
                         rel_tol: float = 1e-11) -> List[Tuple[float, float]]:
    """Angular momentum history (t, L) for the linear-drag variant
    F = -mu/r^2 r_hat - lam*rdot (unit mass).

    Unlike the 1/r^2 drag, a velocity-proportional drag gives exponential
    decay L = L0 exp(-lam t); the returned series lets callers verify that
    law directly against the integrated motion.
    """
    if r0 <= 0.0:
        raise FrictionError("r0 must be positive")

    def rhs(t, y):
        r, rdot, phi, phidot = y
        return (rdot,
                r * phidot * phidot - mu / (r * r) - lam * rdot,
                phidot,
                -2.0 * rdot * phidot / r - lam * phidot)

    steps = oracle.integrate_ode(rhs, (r0, rdot0, 0.0, phidot0), 0.0, t_span,
                                 rel_tol=rel_tol, abs_tol=1e-13)
    return [(t, y[0] * y[0] * y[3]) for t, y in steps]
