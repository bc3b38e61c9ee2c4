"""Closed-form conserved-vector pairs (h, g) per potential family.

The construction: a radial field pair S(r) = r g(r), P(r) = l rdot h(r)
assembles a plane vector A = S rhat + P rperp that is conserved along the
motion whenever h solves h'' + P1 h' + P2 h = 0 and g is recovered from h.
Every bounded family admits a two-parameter solution expressible through a
single monotone phase Theta(r):

    h = (c1 cos Theta + c2 sin Theta) / sqrt(2(E - V_eff))
    g = sigma (l/r) (c1 sin Theta - c2 cos Theta)

with Theta' = sigma l / (r^2 sqrt(2(E - V_eff))), sigma = +-1 a per-family
orientation.  Kepler and the isotropic oscillator are kept in their familiar
radical forms (see KeplerForm, HarmonicForm) but carry the same phase data,
which makes vector evaluation uniform across apsis crossings: along the
orbit the phase advances monotonically in the polar angle, so the global
vector uses theta = sign(rdot) * Theta(r) + 2 sigma Theta_span * n, where n
counts crossings of the apsis opposite the phase anchor.
"""

import math
from dataclasses import dataclass

from . import oracle, potentials, specfun
from .potentials import (PotentialSpec, RadialContext, UnboundedError,
                         str_reduction)


class EngineError(ValueError):
    """Base class for closed-form construction failures."""


class TurningPointSingularityError(EngineError):
    """Evaluation at (or too close to) a radius where E = V_eff."""


class RealityViolationError(EngineError):
    """Requested radius lies outside the classically allowed interval."""


class RegimeError(EngineError):
    """The (spec, ctx) pair is not in a regime the closed form covers."""


class RootOrderingError(EngineError):
    """Auxiliary roots do not satisfy the ordering the closed form assumes."""


class BranchDomainError(EngineError):
    """Trajectory branch evaluated where its denominator is non-positive."""


class InversionError(EngineError):
    """Phase inversion failed to converge."""


@dataclass(frozen=True)
class LRLVector:
    """Plane components and modulus of the conserved vector."""

    x: float
    y: float
    modulus: float


def _fold(x, span):
    """Triangular fold of |x| into [0, span]."""
    if not math.isfinite(span):
        return abs(x)
    m = math.fmod(abs(x), 2.0 * span)
    return m if m <= span else 2.0 * span - m


def _f_amp(phi, kappa):
    """F with amplitude phi in [0, pi] (quarter-period reflection)."""
    if phi <= 0.5 * math.pi:
        return specfun.ellip_f_sk(math.sin(phi), kappa)
    return 2.0 * specfun.ellip_f_sk(1.0, kappa) \
        - specfun.ellip_f_sk(math.sin(math.pi - phi), kappa)


def _pi_amp(phi, xi, kappa):
    """Pi with amplitude phi in [0, pi]."""
    if phi <= 0.5 * math.pi:
        return specfun.ellip_pi_sk(math.sin(phi), xi, kappa)
    return 2.0 * specfun.ellip_pi_sk(1.0, xi, kappa) \
        - specfun.ellip_pi_sk(math.sin(math.pi - phi), xi, kappa)


def ansatz_coefficients(spec, ctx, r, tol=1e-12):
    """Coefficients (P1, P2) of the h-ODE h'' + P1 h' + P2 h = 0."""
    spec = potentials.reduce_spec(spec, ctx)
    gap = ctx.energy - potentials.v_eff(spec, ctx, r)
    if abs(gap) <= tol * max(1.0, abs(ctx.energy)):
        raise TurningPointSingularityError(
            "E - V_eff = %.3g at r = %.6g" % (gap, r))
    vp = potentials.dv_eff(spec, ctx, r)
    lap = potentials.laplacian_v_eff(spec, ctx, r)
    # centrifugal coefficient recovered from the public API (str carries
    # its own a/m0^2 in place of ell^2)
    ell2 = 2.0 * r * r * (potentials.v_eff(spec, ctx, r)
                          - potentials.potential(spec, ctx, r))
    p1 = (4.0 * gap - 3.0 * r * vp) / (2.0 * r * gap)
    p2 = -(r ** 4 * lap - ell2) / (2.0 * r ** 4 * gap)
    return p1, p2


def g_from_h(spec, ctx, h, dh_dr, r):
    """Recover g from h and its derivative: g = r h V' - 2 r h' (E - V)."""
    spec = potentials.reduce_spec(spec, ctx)
    vp = potentials.dv_eff(spec, ctx, r)
    gap = ctx.energy - potentials.v_eff(spec, ctx, r)
    return r * h * vp - 2.0 * r * dh_dr * gap


class ConservedFieldPair:
    """Family-specific closed-form (h, g) with uniform phase data.

    Attributes populated by subclasses:
      sigma        phase orientation, Theta' = sigma l / (r^2 sqrt(w))
      anchor_upper True when Theta vanishes at the outer turning point
      theta_span   |Theta| swept over one radial half-cycle (may be inf)
    """

    form = "Generic"
    sigma = 1.0
    anchor_upper = False

    def __init__(self, spec, ctx, c1=1.0, c2=0.0):
        spec = potentials.reduce_spec(spec, ctx)
        self.spec = spec
        self.ctx = ctx
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.ell = ctx.ell
        self.energy = ctx.energy
        if self.ell <= 0.0:
            raise RegimeError("closed forms require ell > 0")
        try:
            self.roots = potentials.turning_points(spec, ctx)
        except UnboundedError as exc:
            raise RegimeError(str(exc)) from exc
        self.bracket = self.roots.bracket
        self._setup()

    # -- family hooks -------------------------------------------------

    def _setup(self):
        raise NotImplementedError

    def phase(self, r):
        """Theta(r), zero at the anchor apsis, monotone across the bracket."""
        raise NotImplementedError

    def _trig_coeffs(self):
        """(a1, a2) such that h = (a1 cos Theta + a2 sin Theta)/sqrt(w)."""
        return self.c1, self.c2

    # -- shared evaluation ---------------------------------------------

    def energy_gap(self, r):
        return self.energy - potentials.v_eff(self.spec, self.ctx, r)

    def energy_gap_derivative(self, r):
        return -potentials.dv_eff(self.spec, self.ctx, r)

    def _clamped(self, r):
        lo, hi = self.bracket
        pad = 1e-6 * (hi - lo)
        if r < lo - pad or r > hi + pad:
            raise RealityViolationError(
                "r = %.12g outside the bounded interval [%.12g, %.12g]"
                % (r, lo, hi))
        return min(max(r, lo), hi)

    def h(self, r):
        w = 2.0 * self.energy_gap(r)
        if w <= 0.0:
            raise TurningPointSingularityError(
                "h diverges: E - V_eff <= 0 at r = %.12g" % r)
        a1, a2 = self._trig_coeffs()
        th = self.phase(r)
        return (a1 * math.cos(th) + a2 * math.sin(th)) / math.sqrt(w)

    def g(self, r):
        a1, a2 = self._trig_coeffs()
        th = self.phase(r)
        return self.sigma * self.ell / r \
            * (a1 * math.sin(th) - a2 * math.cos(th))

    def modulus_constant(self):
        """Exact conserved modulus of the vector."""
        a1, a2 = self._trig_coeffs()
        return self.ell * math.hypot(a1, a2)

    def orbit_phase(self, r, sign_rdot, apsis_crossings=0):
        """Phase along the orbit, continued through apsis crossings.

        apsis_crossings counts forward-time crossings of the apsis
        opposite the anchor (where Theta = Theta_span); the phase picks up
        2 sigma Theta_span per crossing, and nothing at the anchor apsis.
        """
        th = self.phase(self._clamped(r))
        s = 1.0 if sign_rdot >= 0 else -1.0
        val = s * th
        if apsis_crossings:
            val += 2.0 * self.sigma * self.theta_span * apsis_crossings
        return val


class KeplerForm(ConservedFieldPair):
    """V = -k/r: h = c1 + c2 (k r - l^2)/sqrt(Q), Q = 2E r^2 + 2k r - l^2."""

    form = "KeplerForm"
    sigma = 1.0
    anchor_upper = False  # phase is the true anomaly, zero at perihelion
    theta_span = math.pi

    def _setup(self):
        if self.spec.family == "str":
            a, b, eps = str_reduction(self.spec)
            m0 = self.spec.params["m0"]
            if a <= 0.0 or b >= 0.0:
                raise RegimeError("relativistic Coulomb reduction is not "
                                  "attractive (a <= 0 or b >= 0)")
            self.k = -b
            self.ell = math.sqrt(a) / m0
            self.energy = eps
        else:
            self.k = self.spec.params["k"]
        ecc2 = 1.0 + 2.0 * self.energy * self.ell ** 2 / self.k ** 2
        if ecc2 < 0.0:
            raise RegimeError("eccentricity^2 < 0")
        self.eccentricity = math.sqrt(ecc2)
        self.semi_latus = self.ell ** 2 / self.k

    def _q(self, r):
        return 2.0 * self.energy * r * r + 2.0 * self.k * r - self.ell ** 2

    def energy_gap(self, r):
        # str reduction included: Q/(2 r^2) is the reduced kinetic term
        return self._q(r) / (2.0 * r * r)

    def energy_gap_derivative(self, r):
        return (2.0 * self.energy * r + self.k) / (r * r) \
            - self._q(r) / r ** 3

    def phase(self, r):
        r = self._clamped(r)
        c = (self.semi_latus / r - 1.0) / self.eccentricity
        return math.acos(min(1.0, max(-1.0, c)))

    def _trig_coeffs(self):
        ek = self.eccentricity * self.k
        return -ek * self.c2, ek * self.c1 / self.ell

    def h(self, r):
        if self.c2 == 0.0:
            return self.c1
        q = self._q(r)
        if q <= 0.0:
            raise TurningPointSingularityError(
                "h diverges: Q(r) <= 0 at r = %.12g" % r)
        return self.c1 + self.c2 * (self.k * r - self.ell ** 2) / math.sqrt(q)

    def g(self, r):
        val = self.c1 * (self.k / r - self.ell ** 2 / r ** 2)
        if self.c2 != 0.0:
            q = max(0.0, self._q(self._clamped(r)))
            val -= self.c2 * self.ell ** 2 * math.sqrt(q) / r ** 2
        return val

    def modulus_constant(self):
        return math.sqrt((self.c1 ** 2 + self.c2 ** 2 * self.ell ** 2)
                         * (self.k ** 2 + 2.0 * self.energy * self.ell ** 2))


class HarmonicForm(ConservedFieldPair):
    """V = k r^2: h = c1/sqrt(r^2 - r1^2) + c2/sqrt(r2^2 - r^2)."""

    form = "HarmonicForm"
    sigma = -1.0
    anchor_upper = True
    theta_span = 0.5 * math.pi

    def _setup(self):
        self.k = self.spec.params["k"]
        self.r1, self.r2 = self.bracket
        # common scale of the two regular trig branches
        self._scale = math.sqrt(2.0 * self.k * (self.r2 ** 2 - self.r1 ** 2))

    def phase(self, r):
        r = self._clamped(r)
        num = self.r1 * math.sqrt(max(0.0, self.r2 ** 2 - r * r))
        den = self.r2 * math.sqrt(max(0.0, r * r - self.r1 ** 2))
        return math.atan2(num, den)

    def _trig_coeffs(self):
        # cos Theta / sqrt(w) = (r2/scale)/sqrt(r2^2-r^2) etc.
        return (self.c2 * self._scale / self.r2,
                self.c1 * self._scale / self.r1)

    def h(self, r):
        val = 0.0
        if self.c1 != 0.0:
            d = r * r - self.r1 ** 2
            if d <= 0.0:
                raise TurningPointSingularityError(
                    "h diverges at the inner apsis r1 = %.12g" % self.r1)
            val += self.c1 / math.sqrt(d)
        if self.c2 != 0.0:
            d = self.r2 ** 2 - r * r
            if d <= 0.0:
                raise TurningPointSingularityError(
                    "h diverges at the outer apsis r2 = %.12g" % self.r2)
            val += self.c2 / math.sqrt(d)
        return val

    def g(self, r):
        rr = self._clamped(r)
        s1 = math.sqrt(max(0.0, rr * rr - self.r1 ** 2))
        s2 = math.sqrt(max(0.0, self.r2 ** 2 - rr * rr))
        return 2.0 * self.k / (r * r) \
            * (self.c1 * self.r2 ** 2 * s1 - self.c2 * self.r1 ** 2 * s2)

    def modulus_constant(self):
        disc = math.sqrt(self.energy ** 2 - 2.0 * self.k * self.ell ** 2)
        return math.sqrt(4.0 * self.k * disc
                         * (self.c1 ** 2 * self.r2 ** 2
                            + self.c2 ** 2 * self.r1 ** 2))


class OblateForm(ConservedFieldPair):
    """V = -k/r - B/r^3, bounded window between the middle and outer roots
    of the reality cubic; phase is an incomplete F anchored at r2."""

    form = "OblateForm"
    sigma = -1.0
    anchor_upper = True

    def _setup(self):
        pos = sorted(r for r in self.roots.real_roots if r > 0.0)
        if len(pos) != 3:
            raise RootOrderingError(
                "expected three positive reality roots, got %d" % len(pos))
        self.r0, self.r1, self.r2 = pos
        if self.bracket != (self.r1, self.r2):
            raise RootOrderingError("bounded interval is not (r1, r2)")
        self.kappa = math.sqrt(self.r0 * (self.r2 - self.r1)
                               / (self.r1 * (self.r2 - self.r0)))
        self._pref = math.sqrt(2.0) * self.ell / math.sqrt(
            abs(self.energy) * self.r1 * (self.r2 - self.r0))
        self.theta_span = self._pref * specfun.ellip_f_sk(1.0, self.kappa)

    def _sin_amp(self, r):
        val = self.r1 * (self.r2 - r) / ((self.r2 - self.r1) * r)
        return math.sqrt(min(1.0, max(0.0, val)))

    def phase(self, r):
        r = self._clamped(r)
        return self._pref * specfun.ellip_f_sk(self._sin_amp(r), self.kappa)


class CornellForm(ConservedFieldPair):
    """V = -a/r + b r; phase is an incomplete Pi anchored at r2."""

    form = "CornellForm"
    sigma = -1.0
    anchor_upper = True

    def _setup(self):
        reals = sorted(self.roots.real_roots)
        if len(reals) != 3 or reals[0] >= 0.0:
            raise RootOrderingError(
                "expected roots r0 < 0 < r1 < r2, got %s" % (reals,))
        self.r0, self.r1, self.r2 = reals
        if self.bracket != (self.r1, self.r2):
            raise RootOrderingError("bounded interval is not (r1, r2)")
        b = self.spec.params["b"]
        self.kappa = math.sqrt((self.r2 - self.r1) / (self.r2 - self.r0))
        self.xi = 1.0 - self.r1 / self.r2
        self._pref = math.sqrt(2.0) * self.ell \
            / (self.r2 * math.sqrt(b * (self.r2 - self.r0)))
        self.theta_span = self._pref * specfun.ellip_pi_sk(
            1.0, self.xi, self.kappa)

    def _sin_amp(self, r):
        val = (self.r2 - r) / (self.r2 - self.r1)
        return math.sqrt(min(1.0, max(0.0, val)))

    def phase(self, r):
        r = self._clamped(r)
        return self._pref * specfun.ellip_pi_sk(
            self._sin_amp(r), self.xi, self.kappa)


class DeSitterForm(ConservedFieldPair):
    """V = -k/r - lam r^2, lam > 0, inner bounded window (r1, r2) of the
    reality quartic with roots r0 < 0 < r1 < r2 < r3; phase anchored at r1.

    At the critical energy (r2 -> r3) the modulus kappa -> 1 and the span
    diverges: the window closes into a homoclinic orbit; F and Pi then
    reduce to their logarithmic kappa = 1 forms automatically.
    """

    form = "DeSitterForm"
    sigma = 1.0
    anchor_upper = False

    def _setup(self):
        lam = self.spec.params["lambda"]
        if lam <= 0.0:
            raise RegimeError("DeSitterForm requires lambda > 0")
        reals = sorted(self.roots.real_roots)
        if len(reals) != 4 or reals[0] >= 0.0:
            raise RootOrderingError(
                "expected roots r0 < 0 < r1 < r2 < r3, got %s" % (reals,))
        self.r0, self.r1, self.r2, self.r3 = reals
        if self.bracket != (self.r1, self.r2):
            raise RegimeError("bounded interval is not the inner window")
        r0, r1, r2, r3 = reals
        self.kappa = math.sqrt((r2 - r1) * (r3 - r0)
                               / ((r3 - r1) * (r2 - r0)))
        self.xi = r0 * (r2 - r1) / (r1 * (r2 - r0))
        self._pref = math.sqrt(2.0) * self.ell / (
            r0 * r1 * math.sqrt(lam * (r3 - r1) * (r2 - r0)))
        if self.kappa >= 1.0 - 1e-12:
            self.kappa = min(self.kappa, 1.0)
            self.theta_span = math.inf
        else:
            f1 = specfun.ellip_f_sk(1.0, self.kappa)
            p1 = specfun.ellip_pi_sk(1.0, self.xi, self.kappa)
            self.theta_span = self._pref * (r1 * f1 - (r1 - r0) * p1)

    def _sin_amp(self, r):
        val = (self.r2 - self.r0) * (r - self.r1) \
            / ((self.r2 - self.r1) * (r - self.r0))
        return math.sqrt(min(1.0, max(0.0, val)))

    def phase(self, r):
        r = self._clamped(r)
        s = self._sin_amp(r)
        f = specfun.ellip_f_sk(s, self.kappa)
        p = specfun.ellip_pi_sk(s, self.xi, self.kappa)
        return self._pref * (self.r1 * f - (self.r1 - self.r0) * p)


class AntiDeSitterForm(ConservedFieldPair):
    """V = -k/r - lam r^2, lam < 0, zero-energy window (rA, rB).

    The reality quartic 2 lam r^4 + 2k r - l^2 has two positive roots and a
    complex pair a +- ib.  The phase integral reduces to F, Pi and an
    arctan through a Moebius substitution t = (r - tau2)/(r - tau1) whose
    parameters tau1, tau2 come from a quadratic eliminating the cross term;
    all derived constants are validated at construction.
    """

    form = "AntiDeSitterForm"
    sigma = -1.0
    anchor_upper = True

    def _setup(self):
        lam = self.spec.params["lambda"]
        if lam >= 0.0:
            raise RegimeError("AntiDeSitterForm requires lambda < 0")
        if abs(self.energy) > 1e-300:
            raise RegimeError(
                "anti-de Sitter closed form is the zero-energy case")
        pos = sorted(r for r in self.roots.real_roots if r > 0.0)
        if len(pos) != 2 or len(self.roots.complex_pairs) != 1:
            raise RootOrderingError(
                "expected two positive roots and one complex pair")
        self.rA, self.rB = pos
        ac, bc = self.roots.complex_pairs[0]
        s = self.rA + self.rB
        prod = self.rA * self.rB
        m2 = ac * ac + bc * bc
        # lamhat solves b^2 x^2 - (m2 + prod - ac s) x + (prod - s^2/4) = 0,
        # the condition that t = (r - tau)/(r - tau') removes odd powers.
        qb = m2 + prod - ac * s
        disc = qb * qb - 4.0 * bc * bc * (prod - 0.25 * s * s)
        if disc <= 0.0:
            raise RootOrderingError("Moebius eliminant has no real roots")
        sq = math.sqrt(disc)
        l1 = (qb + sq) / (2.0 * bc * bc)
        l2 = (qb - sq) / (2.0 * bc * bc)
        if abs(l1 - 1.0) < 1e-14 or abs(l2 - 1.0) < 1e-14:
            raise RootOrderingError("degenerate Moebius parameter")
        tau1 = (2.0 * ac * l1 - s) / (2.0 * (l1 - 1.0))
        tau2 = (2.0 * ac * l2 - s) / (2.0 * (l2 - 1.0))
        den = l1 - l2
        a1c = l2 * (1.0 - l1) / den
        b1c = l1 * (l2 - 1.0) / den
        a2c = (l1 - 1.0) / den
        b2c = (1.0 - l2) / den
        if not (b1c < 0.0 < a1c and a2c > 0.0 and b2c > 0.0):
            raise RootOrderingError(
                "coefficient signs off: A1=%g B1=%g A2=%g B2=%g"
                % (a1c, b1c, a2c, b2c))
        self._tau1, self._tau2 = tau1, tau2
        self._atil = math.sqrt(a2c / b2c)
        self._btil = math.sqrt(a1c / -b1c)
        self._gamma = (tau2 / tau1) ** 2
        if self._gamma <= self._btil ** 2:
            raise RootOrderingError("gamma <= btil^2")
        hyp = math.hypot(self._atil, self._btil)
        self.kappa = self._btil / hyp
        self.xi = self._btil ** 2 / (self._btil ** 2 - self._gamma)
        self._pref = self.ell / math.sqrt(2.0 * abs(lam)) \
            / math.sqrt(-b1c * b2c)
        self._hyp = hyp
        self.theta_span = self._raw_phase(self.rA)
        if self.theta_span <= 0.0:
            raise RootOrderingError("phase span not positive")

    def _t(self, r):
        return (r - self._tau2) / (r - self._tau1)

    def _raw_phase(self, r):
        t = self._t(r)
        x = min(1.0, max(-1.0, t / self._btil))
        amp = math.acos(x)
        fv = _f_amp(amp, self.kappa)
        pv = _pi_amp(amp, self.xi, self.kappa)
        g = self._gamma
        b2 = self._btil ** 2
        a2 = self._atil ** 2
        arc = math.atan(math.sqrt(max(0.0, (a2 + g) * (b2 - t * t))
                                  / ((g - b2) * (t * t + a2))))
        t1, t2 = self._tau1, self._tau2
        val = fv / (t1 * (t2 - t1) * self._hyp) \
            - t2 * pv / (t1 ** 3 * (g - b2) * self._hyp) \
            - arc / (t1 ** 2 * math.sqrt((a2 + g) * (g - b2)))
        return self._pref * val

    def phase(self, r):
        return self._raw_phase(self._clamped(r))


def closed_form_pair(spec, ctx, c1=1.0, c2=0.0):
    """Dispatch to the family's closed-form pair."""
    reduced = potentials.reduce_spec(spec, ctx)
    fam = reduced.family
    if fam in ("kepler", "str"):
        return KeplerForm(reduced, ctx, c1, c2)
    if fam == "harmonic":
        return HarmonicForm(reduced, ctx, c1, c2)
    if fam == "oblate":
        return OblateForm(reduced, ctx, c1, c2)
    if fam == "cornell":
        return CornellForm(reduced, ctx, c1, c2)
    if fam == "cosmological":
        if reduced.params["lambda"] > 0.0:
            return DeSitterForm(reduced, ctx, c1, c2)
        return AntiDeSitterForm(reduced, ctx, c1, c2)
    raise RegimeError("no closed form for family %r" % fam)


def lrl_evaluate(pair, r, phi, sign_rdot=1, apsis_crossings=0):
    """Conserved vector at plane point (r, phi) on the given radial branch.

    sign_rdot selects the branch of rdot = +-sqrt(2(E - V_eff)); it is never
    inferred.  apsis_crossings (see ConservedFieldPair.orbit_phase) keeps the
    phase continuous over multi-period evaluation; 0 restricts to the
    principal half-cycle.
    """
    gap = pair.energy_gap(r)
    if gap < -1e-9 * max(1.0, abs(pair.energy)):
        raise RealityViolationError(
            "E - V_eff = %.3g < 0 at r = %.12g" % (gap, r))
    th = pair.orbit_phase(r, sign_rdot, apsis_crossings)
    a1, a2 = pair._trig_coeffs()
    radial = pair.sigma * pair.ell * (a1 * math.sin(th) - a2 * math.cos(th))
    perp = pair.ell * (a1 * math.cos(th) + a2 * math.sin(th))
    x = radial * math.cos(phi) - perp * math.sin(phi)
    y = radial * math.sin(phi) + perp * math.cos(phi)
    return LRLVector(x, y, math.hypot(x, y))


def lrl_series(pair, samples):
    """Evaluate the vector along oracle orbit samples.

    Tracks rdot sign changes to count crossings of the apsis opposite the
    phase anchor, which is what keeps the evaluation single-valued over
    many radial periods.
    """
    out = []
    prev = 0
    crossings = 0
    far_is_upper = not pair.anchor_upper
    lo, hi = pair.bracket
    w_scale = 2.0 * pair.energy_gap(0.5 * (lo + hi))
    for smp in samples:
        if smp.rdot > 0.0:
            s = 1
        elif smp.rdot < 0.0:
            s = -1
        else:
            s = prev or 1
        if prev and s != prev:
            crossed_upper = prev > 0
            if crossed_upper == far_is_upper:
                crossings += 1
        prev = s
        r = smp.r
        # Near an apsis the phase is hypersensitive to r but insensitive
        # to rdot; project the sample onto the exact energy shell there
        # (Newton on E - V_eff(r) = rdot^2/2; V_eff' != 0 at an apsis).
        if 2.0 * pair.energy_gap(r) < 0.01 * w_scale:
            target = 0.5 * smp.rdot * smp.rdot
            for _ in range(3):
                f = pair.energy_gap(r) - target
                fp = pair.energy_gap_derivative(r)
                if fp == 0.0:
                    break
                r -= f / fp
            r = min(max(r, lo), hi)
        out.append(lrl_evaluate(pair, r, smp.phi, s, crossings))
    return out


def modulus_squared(pair, r):
    """Literal constraint value r^2 g^2 + 2 l^2 h^2 (E - V_eff)."""
    h = pair.h(r)
    g = pair.g(r)
    return (r * g) ** 2 + 2.0 * pair.ell ** 2 * h * h * pair.energy_gap(r)


def apsidal_angle(pair):
    """Polar angle swept between consecutive apsides."""
    return pair.theta_span


def _invert_phase(pair, target):
    """Radius with phase(r) = target, by bisection over the bracket."""
    lo, hi = pair.bracket
    span = pair.theta_span
    if not math.isfinite(span):
        span = None
    if target <= 0.0:
        return hi if pair.anchor_upper else lo
    if span is not None and target >= span:
        return lo if pair.anchor_upper else hi
    f_lo = pair.phase(lo) - target
    a, b = lo, hi
    fa = f_lo
    for _ in range(200):
        mid = 0.5 * (a + b)
        if b - a <= 1e-14 * max(1.0, abs(mid)):
            return mid
        fm = pair.phase(mid) - target
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    raise InversionError("phase inversion did not converge to 1e-14")


def trajectory_r_of_phi(pair, phi, branch=None):
    """Radius of the closed-form trajectory at polar angle phi.

    Explicit families evaluate their conic / radical / elliptic-sine forms;
    implicit families invert the monotone phase.  Branch selectors:
    Kepler "1+", "1-", "2+", "2-" (cosine/sine conics); Harmonic "1", "2".
    """
    if isinstance(pair, KeplerForm):
        branch = branch or "1+"
        e = pair.eccentricity
        p = pair.semi_latus
        trig = math.cos(phi) if branch.startswith("1") else math.sin(phi)
        den = 1.0 + e * trig if branch.endswith("+") else 1.0 - e * trig
        if den <= 0.0:
            raise BranchDomainError(
                "conic denominator %.3g <= 0 at phi = %.6g" % (den, phi))
        return p / den
    if isinstance(pair, HarmonicForm):
        branch = branch or "1"
        disc = pair.r2 ** 2 - pair.r1 ** 2
        c2 = math.cos(phi) ** 2
        if branch == "1":
            bb = disc / pair.r2 ** 2
            den = 1.0 - bb * c2
            if den <= 0.0:
                raise BranchDomainError("denominator <= 0")
            return pair.r1 / math.sqrt(den)
        bb = disc / pair.r1 ** 2
        return pair.r2 / math.sqrt(1.0 + bb * c2)
    if isinstance(pair, OblateForm):
        # elliptic-sine closed form, anchored at r2 when phi = pi/2
        u = math.sqrt(abs(pair.energy) * pair.r1 * (pair.r2 - pair.r0)) \
            * (0.5 * math.pi - phi) / (math.sqrt(2.0) * pair.ell)
        kq = specfun.ellip_f_sk(1.0, pair.kappa)
        v = math.fmod(abs(u), 2.0 * kq)
        if v > kq:
            v = 2.0 * kq - v
        sn2 = specfun.jacobi_sn(v, pair.kappa) ** 2
        return pair.r1 * pair.r2 / (pair.r1 + (pair.r2 - pair.r1) * sn2)
    if isinstance(pair, DeSitterForm):
        # implicit representation: phase = pi/2 + phi, anchor r1 at -pi/2
        return _invert_phase(pair, _fold(phi + 0.5 * math.pi,
                                         pair.theta_span))
    # Cornell / anti-de Sitter: anchor apsis placed at phi = pi/2
    return _invert_phase(pair, _fold(phi - 0.5 * math.pi, pair.theta_span))


def trajectory_anchor_angle(pair, branch=None):
    """Polar angle where the closed-form trajectory sits at its phase
    anchor apsis, per the conventions of trajectory_r_of_phi."""
    if isinstance(pair, KeplerForm):
        branch = branch or "1+"
        return {"1+": 0.0, "1-": math.pi,
                "2+": 0.5 * math.pi, "2-": -0.5 * math.pi}[branch]
    if isinstance(pair, HarmonicForm):
        return 0.0 if (branch or "1") == "1" else 0.5 * math.pi
    if isinstance(pair, DeSitterForm):
        return -0.5 * math.pi
    return 0.5 * math.pi  # oblate, Cornell, anti-de Sitter


def lrl_along_trajectory(pair, phi, branch=None):
    """Conserved vector on the closed-form trajectory at polar angle phi.

    Along the motion the orbit-continued phase advances as sigma * phi,
    zeroed at the anchor apsis, so no turning-point bookkeeping is needed;
    the result is analytically constant in phi and any variation measures
    roundoff.
    """
    th = pair.sigma * (phi - trajectory_anchor_angle(pair, branch))
    a1, a2 = pair._trig_coeffs()
    radial = pair.sigma * pair.ell * (a1 * math.sin(th) - a2 * math.cos(th))
    perp = pair.ell * (a1 * math.cos(th) + a2 * math.sin(th))
    x = radial * math.cos(phi) - perp * math.sin(phi)
    y = radial * math.sin(phi) + perp * math.cos(phi)
    return LRLVector(x, y, math.hypot(x, y))


# ---------------------------------------------------------------------
# Table of further solvable profiles: h = a r^n rows with their g and
# V_eff columns, verified against the defining first-order system.

def _table_row(n, a, c1, c2, ell, mass=1.0, literal_g=False):
    """Callables (h, g, v_eff) for the h = a r^n rows.

    n = 4 (or the string "sqrt") selects the a sqrt(r) row; `mass` scales
    the ambiguous 3 l^2/(2 m r^2) term of that row, and literal_g keeps its
    printed g (with a 1/sqrt(r) second term) instead of the dimensionally
    consistent 1/r^(3/2).
    """
    l2 = ell * ell
    if n == 1:
        return (lambda r: a * r,
                lambda r: c1 / r + a * l2 * math.log(r) / r,
                lambda r: l2 / (2 * r * r) + 0.5 * l2 * math.log(r) ** 2 / r ** 2
                + (c1 / a) * math.log(r) / r ** 2 + c2 / r ** 2)
    if n == 2:
        return (lambda r: a * r * r,
                lambda r: a * l2 + c1 / r,
                lambda r: l2 / (2 * r * r) + c1 / (a * r ** 3) + c2 / r ** 4)
    if n == 3:
        return (lambda r: a * r ** 3,
                lambda r: 0.5 * a * l2 * r + c1 / r,
                lambda r: l2 / (2 * r * r) - 3.0 * l2 / (8.0 * r * r)
                + c1 / (2.0 * a * r ** 4) + c2 / r ** 6)
    # sqrt row
    if literal_g:
        g = lambda r: c1 / r - 2.0 * a * l2 / math.sqrt(r)
    else:
        g = lambda r: c1 / r - 2.0 * a * l2 / r ** 1.5
    return (lambda r: a * math.sqrt(r),
            g,
            lambda r: l2 / (2 * r * r) + 3.0 * l2 / (2.0 * mass * r * r)
            - 2.0 * c1 / (a * r ** 1.5) + c2 / r)


def _row_residuals(h, g, vf, ell, r_grid):
    """Max residuals of the defining system at zero energy.

    System: d(rg)/dr = l^2 h / r^2 and g = r h V' - 2 r h' (E - V), E = 0,
    with derivatives taken numerically.
    """
    e5 = 0.0
    e6 = 0.0
    for r in r_grid:
        d_rg = oracle.finite_diff(lambda x: x * g(x), r, order=1)
        e5 = max(e5, abs(d_rg - ell * ell * h(r) / (r * r)))
        vp = oracle.finite_diff(vf, r, order=1)
        hp = oracle.finite_diff(h, r, order=1)
        rhs = r * h(r) * vp + 2.0 * r * hp * vf(r)
        e6 = max(e6, abs(g(r) - rhs))
    return {"e5_residual": e5, "e6_residual": e6}


def verify_table1_row(n, a, c1, c2, ctx, r_grid, mass=1.0):
    """Residuals of one tabulated (h, g, V_eff) row over r_grid.

    Rows n in {1, 2, 3} are checked as printed (zero-energy convention).
    The sqrt row (n = 4 or "sqrt") is reported under both readings of its
    mass symbol -- absorbed into the units (m = 1) and literal (`mass`) --
    and additionally under its printed g, whose second term appears to be
    missing half a power of r; no reading is asserted here.
    """
    if a == 0.0:
        raise EngineError("row requires a != 0")
    if n in (1, 2, 3):
        h, g, vf = _table_row(n, a, c1, c2, ctx.ell)
        return _row_residuals(h, g, vf, ctx.ell, r_grid)
    if n not in (4, "sqrt"):
        raise EngineError("n must be 1, 2, 3, 4 or 'sqrt'")
    out = {}
    h, g, vf = _table_row(4, a, c1, c2, ctx.ell, mass=1.0)
    out["m_absorbed"] = _row_residuals(h, g, vf, ctx.ell, r_grid)
    h, g, vf = _table_row(4, a, c1, c2, ctx.ell, mass=mass)
    out["m_literal"] = _row_residuals(h, g, vf, ctx.ell, r_grid)
    h, g, vf = _table_row(4, a, c1, c2, ctx.ell, mass=1.0, literal_g=True)
    out["printed_g"] = _row_residuals(h, g, vf, ctx.ell, r_grid)
    return out


# ---------------------------------------------------------------------
# Small-lambda landmark expansions for the de Sitter family and their
# exact counterparts at the critical (maximum) energy.

_CBRT2 = 2.0 ** (1.0 / 3.0)


def desitter_perturbative_landmarks(k, ell, lam, order=3):
    """Landmarks of the critical de Sitter configuration as lam -> 0+.

    Series in lam^(1/3).  Each landmark's terms are ordered by power of
    lam^(1/3) relative to its own leading term; `order` is the highest
    relative power kept (0..3, default all printed terms).  Keys: r_m,
    r_M, r_1, r_0, Veff_rM, ratio (= r_M/r_0), for the energy pinned at
    the local maximum.
    """
    if lam <= 0.0:
        raise EngineError("requires lambda > 0")
    if order not in (0, 1, 2, 3):
        raise EngineError("order must be in 0..3")
    t = lam ** (1.0 / 3.0)
    l2 = ell * ell

    def series(*terms):
        return sum(terms[:order + 1])

    r_M = series((k / (2.0 * lam)) ** (1.0 / 3.0),
                 -l2 / (3.0 * k),
                 -(2.0 ** (4.0 / 3.0)) * l2 * l2 / (9.0 * k ** (7.0 / 3.0)) * t,
                 -(20.0 / 81.0) * _CBRT2 ** 2 * l2 ** 3 / k ** (11.0 / 3.0)
                 * t * t)
    veff = series(-3.0 * (0.5 * k) ** (2.0 / 3.0) * t,
                  0.5 * l2 * (2.0 / k) ** (2.0 / 3.0) * t * t)
    r_1 = series(l2 / (2.0 * k),
                 0.375 * _CBRT2 * l2 * l2 / k ** (7.0 / 3.0) * t,
                 (7.0 / 16.0) * _CBRT2 ** 2 * l2 ** 3 / k ** (11.0 / 3.0)
                 * t * t)
    r_0 = series(-(_CBRT2 ** 2) * (k / lam) ** (1.0 / 3.0),
                 l2 / (6.0 * k),
                 -_CBRT2 * l2 * l2 / (216.0 * k ** (7.0 / 3.0)) * t,
                 -(5.0 / 3888.0) * _CBRT2 ** 2 * l2 ** 3 / k ** (11.0 / 3.0)
                 * t * t)
    ratio = series(-0.5,
                   _CBRT2 * l2 / (8.0 * k ** (4.0 / 3.0)) * t,
                   (53.0 / 432.0) * _CBRT2 ** 2 * l2 * l2 / k ** (8.0 / 3.0)
                   * t * t)
    r_m = series(l2 / k,
                 0.0,
                 0.0,
                 2.0 * lam * ell ** 8 / k ** 5)
    return {"r_m": r_m, "r_M": r_M, "r_1": r_1, "r_0": r_0,
            "Veff_rM": veff, "ratio": ratio}


def desitter_exact_landmarks(k, ell, lam):
    """Same landmark set from exact stationary/reality roots.

    r_1 and r_0 are the finite roots of the critical-energy reality
    quartic, obtained from the double root r_M through the root sum
    (zero) and product (-l^2/2lam), in a cancellation-free arrangement.
    """
    if lam <= 0.0:
        raise EngineError("requires lambda > 0")
    spec = potentials.cosmological(k, lam)
    ctx = RadialContext(ell=ell, energy=0.0)
    st = potentials.stationary_points(spec, ctx)
    r_m, r_M = st.real_roots
    veff = potentials.v_eff(spec, ctx, r_M)
    q = ell * ell / (2.0 * lam * r_M * r_M)
    r_1 = q / (r_M + math.sqrt(r_M * r_M + q))
    r_0 = -2.0 * r_M - r_1
    return {"r_m": r_m, "r_M": r_M, "r_1": r_1, "r_0": r_0,
            "Veff_rM": veff, "ratio": r_M / r_0}
