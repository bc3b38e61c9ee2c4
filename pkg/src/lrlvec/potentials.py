"""Effective-potential layer: family definitions, derivatives, stationary
and turning points, regime classification, and the gravitational scenario
potentials (Kottler Newtonian limit, spheroid, ring, planetary sums).

Families and their radial potentials V(r), in the per-mass convention
(specific energy and specific angular momentum):

    kepler       V = -k/r
    harmonic     V = k r^2
    oblate       V = -k/r - B/r^3
    cosmological V = -k/r - lambda r^2   (lambda > 0 de Sitter,
                                          lambda < 0 anti-de Sitter)
    cornell      V = -a/r + b r
    gr           massive-particle effective potential, a special case of
                 oblate with k = GM, B = GM l^2 / c^2
    str          special-relativistic Coulomb problem reduced to
                 V_eff = a/(2 m0^2 r^2) + b/r with a = L^2 - k^2,
                 b = E_rel k / m0^2

The effective potential is V_eff = l^2/(2 r^2) + V(r) except for `str`,
whose reduction already contains its centrifugal term.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import poly_roots
from .poly_roots import RootSet

_FAMILIES = {
    "kepler": ("k",),
    "harmonic": ("k",),
    "oblate": ("k", "B"),
    "cosmological": ("k", "lambda"),
    "cornell": ("a", "b"),
    "gr": ("GM", "c"),
    "str": ("k", "m0", "E_rel", "L"),
}

# Positivity constraints; "lambda" and str parameters are sign-free.
_POSITIVE = {
    "kepler": ("k",),
    "harmonic": ("k",),
    "oblate": ("k", "B"),
    "cosmological": ("k",),
    "cornell": ("a", "b"),
    "gr": ("GM", "c"),
    "str": ("m0",),
}


class PotentialDomainError(ValueError):
    """Argument outside a potential family's domain."""


class NoExtremumError(PotentialDomainError):
    """The effective potential is monotone; no stationary point exists."""


class UnboundedError(PotentialDomainError):
    """Energy lies outside the bounded-motion window."""


class NonConvergentError(PotentialDomainError):
    """Series evaluation too close to a source radius."""


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged potential family with parameter dictionary."""

    family: str
    params: Dict[str, float]

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise PotentialDomainError("unknown family %r" % (self.family,))
        want = set(_FAMILIES[self.family])
        got = set(self.params)
        if want != got:
            raise PotentialDomainError(
                "family %s expects params %s, got %s"
                % (self.family, sorted(want), sorted(got)))
        for name in _POSITIVE[self.family]:
            if not self.params[name] > 0.0:
                raise PotentialDomainError(
                    "family %s requires %s > 0" % (self.family, name))

    def to_dict(self):
        return {"family": self.family,
                "params": {k: float(v) for k, v in sorted(self.params.items())}}

    @staticmethod
    def from_dict(d):
        return PotentialSpec(d["family"], dict(d["params"]))


def kepler(k):
    return PotentialSpec("kepler", {"k": k})


def harmonic(k):
    return PotentialSpec("harmonic", {"k": k})


def oblate(k, B):
    return PotentialSpec("oblate", {"k": k, "B": B})


def cosmological(k, lam):
    return PotentialSpec("cosmological", {"k": k, "lambda": lam})


def cornell(a, b):
    return PotentialSpec("cornell", {"a": a, "b": b})


def gr_massive(GM, c):
    return PotentialSpec("gr", {"GM": GM, "c": c})


def str_coulomb(k, m0, E_rel, L):
    return PotentialSpec("str", {"k": k, "m0": m0, "E_rel": E_rel, "L": L})


@dataclass(frozen=True)
class RadialContext:
    """Specific angular momentum and specific energy of the orbit."""

    ell: float
    energy: float

    def __post_init__(self):
        if self.ell < 0.0:
            raise PotentialDomainError("ell must be >= 0")


def str_reduction(spec: PotentialSpec) -> Tuple[float, float, float]:
    """Kepler-form constants (a, b, eps) of the relativistic Coulomb problem."""
    if spec.family != "str":
        raise PotentialDomainError("str_reduction expects the str family")
    k = spec.params["k"]
    m0 = spec.params["m0"]
    E_rel = spec.params["E_rel"]
    L = spec.params["L"]
    a = L * L - k * k
    b = E_rel * k / (m0 * m0)
    eps = (E_rel * E_rel / (m0 * m0) - 1.0) / 2.0
    return a, b, eps


def gr_mapping(GM: float, c: float, ell: float) -> PotentialSpec:
    """Oblate spec reproducing the GR massive-particle effective potential."""
    if GM <= 0.0 or c <= 0.0:
        raise PotentialDomainError("gr_mapping requires GM > 0 and c > 0")
    return oblate(GM, GM * ell * ell / (c * c))


def reduce_spec(spec: PotentialSpec, ctx: RadialContext):
    """Resolve gr -> oblate; other families pass through."""
    if spec.family == "gr":
        return gr_mapping(spec.params["GM"], spec.params["c"], ctx.ell)
    return spec


def _check_r(r):
    if r <= 0.0:
        raise PotentialDomainError("r must be > 0")


def potential(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    """Bare central potential V(r) (no centrifugal term)."""
    _check_r(r)
    spec = reduce_spec(spec, ctx)
    p = spec.params
    f = spec.family
    if f == "kepler":
        return -p["k"] / r
    if f == "harmonic":
        return p["k"] * r * r
    if f == "oblate":
        return -p["k"] / r - p["B"] / r ** 3
    if f == "cosmological":
        return -p["k"] / r - p["lambda"] * r * r
    if f == "cornell":
        return -p["a"] / r + p["b"] * r
    # str: the reduction's b/r plays the role of the bare potential.
    _, b, _ = str_reduction(spec)
    return b / r


def d_potential(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    _check_r(r)
    spec = reduce_spec(spec, ctx)
    p = spec.params
    f = spec.family
    if f == "kepler":
        return p["k"] / r ** 2
    if f == "harmonic":
        return 2.0 * p["k"] * r
    if f == "oblate":
        return p["k"] / r ** 2 + 3.0 * p["B"] / r ** 4
    if f == "cosmological":
        return p["k"] / r ** 2 - 2.0 * p["lambda"] * r
    if f == "cornell":
        return p["a"] / r ** 2 + p["b"]
    _, b, _ = str_reduction(spec)
    return -b / r ** 2


def d2_potential(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    _check_r(r)
    spec = reduce_spec(spec, ctx)
    p = spec.params
    f = spec.family
    if f == "kepler":
        return -2.0 * p["k"] / r ** 3
    if f == "harmonic":
        return 2.0 * p["k"]
    if f == "oblate":
        return -2.0 * p["k"] / r ** 3 - 12.0 * p["B"] / r ** 5
    if f == "cosmological":
        return -2.0 * p["k"] / r ** 3 - 2.0 * p["lambda"]
    if f == "cornell":
        return -2.0 * p["a"] / r ** 3
    _, b, _ = str_reduction(spec)
    return 2.0 * b / r ** 3


def _centrifugal_ell2(spec: PotentialSpec, ctx: RadialContext) -> float:
    """Coefficient of the 1/(2 r^2) centrifugal term."""
    if spec.family == "str":
        a, _, _ = str_reduction(spec)
        m0 = spec.params["m0"]
        return a / (m0 * m0)
    return ctx.ell * ctx.ell


def v_eff(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    """Effective potential V_eff(r)."""
    ell2 = _centrifugal_ell2(spec, ctx)
    return ell2 / (2.0 * r * r) + potential(spec, ctx, r)


def dv_eff(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    ell2 = _centrifugal_ell2(spec, ctx)
    return -ell2 / r ** 3 + d_potential(spec, ctx, r)


def d2v_eff(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    ell2 = _centrifugal_ell2(spec, ctx)
    return 3.0 * ell2 / r ** 4 + d2_potential(spec, ctx, r)


def laplacian_v_eff(spec: PotentialSpec, ctx: RadialContext, r: float) -> float:
    """Radial Laplacian of the effective potential, V'' + 2 V'/r."""
    return d2v_eff(spec, ctx, r) + 2.0 * dv_eff(spec, ctx, r) / r


def desitter_lambda_bound(k: float, ell: float) -> float:
    """Largest lambda admitting both stationary points, 27 k^4 / (512 l^6)."""
    return 27.0 * k ** 4 / (512.0 * ell ** 6)


def _cosmo_hi_prec(k, lam, ell):
    """Use the mpmath arm when root magnitudes span too many decades."""
    lam_hat = abs(lam) * ell ** 6 / k ** 4
    if lam_hat >= 1e-6:
        return False, 0
    dps = 30 + int(math.ceil(-math.log10(lam_hat)))
    return True, dps


def stationary_points(spec: PotentialSpec, ctx: RadialContext) -> RootSet:
    """Extremal radii of V_eff with min/max labels."""
    spec = reduce_spec(spec, ctx)
    f = spec.family
    p = spec.params
    ell = ctx.ell
    if f == "kepler":
        if ell == 0.0:
            raise NoExtremumError("kepler with ell = 0 is monotone")
        r = ell * ell / p["k"]
        return RootSet([r], [], {"kind": "kepler-stationary"}, labels=["min"])
    if f == "harmonic":
        if ell == 0.0:
            raise NoExtremumError("harmonic with ell = 0 has no interior minimum")
        r = (ell * ell / (2.0 * p["k"])) ** 0.25
        return RootSet([r], [], {"kind": "harmonic-stationary"}, labels=["min"])
    if f == "oblate":
        k, B = p["k"], p["B"]
        alpha = ell ** 4 / (12.0 * k * B)
        if alpha <= 1.0:
            raise NoExtremumError(
                "oblate alpha = l^4/(12kB) = %.6g <= 1: monotone" % alpha)
        root = math.sqrt(ell ** 4 - 12.0 * k * B)
        r_max = (ell * ell - root) / (2.0 * k)
        r_min = (ell * ell + root) / (2.0 * k)
        return RootSet([r_max, r_min], [],
                       {"kind": "oblate-stationary", "alpha": alpha},
                       labels=["max", "min"])
    if f == "cosmological":
        return _cosmo_stationary(p["k"], p["lambda"], ell)
    if f == "cornell":
        a, b = p["a"], p["b"]
        if ell == 0.0:
            raise NoExtremumError("cornell with ell = 0 is monotone")
        # b r^3 + a r - l^2 = 0, normalized to y^3 + 3p y + 2q.
        rs = poly_roots.depressed_cubic_roots(a / (3.0 * b),
                                              -ell * ell / (2.0 * b))
        pos = [r for r in rs.real_roots if r > 0.0]
        return RootSet([pos[0]], [], {"kind": "cornell-stationary"}, labels=["min"])
    # str
    a, b, _ = str_reduction(spec)
    m0 = spec.params["m0"]
    if a <= 0.0 or b >= 0.0:
        raise NoExtremumError("str reduction has no interior minimum")
    return RootSet([-a / (m0 * m0 * b)], [], {"kind": "str-stationary"},
                   labels=["min"])


def _cosmo_stationary(k, lam, ell):
    if lam == 0.0:
        raise PotentialDomainError("cosmological family requires lambda != 0")
    if ell == 0.0:
        raise NoExtremumError("cosmological with ell = 0 is monotone")
    if lam > 0.0:
        if lam >= desitter_lambda_bound(k, ell):
            raise NoExtremumError(
                "lambda above the stationary-point bound 27 k^4/(512 l^6)")
        # -2 lam r^4 + k r - l^2 = 0, monic form.
        hi, dps = _cosmo_hi_prec(k, lam, ell)
        rs = poly_roots.quartic_roots_resolvent(
            0.0, 0.0, -k / (2.0 * lam), ell * ell / (2.0 * lam),
            hi_prec=hi, dps=dps)
        pos = sorted(r for r in rs.real_roots if r > 0.0)
        if len(pos) != 2:
            raise NoExtremumError("expected two positive stationary radii")
        return RootSet(pos, rs.complex_pairs,
                       {"kind": "cosmological-stationary", **rs.source},
                       labels=["min", "max"], flags=rs.flags)
    # anti-de Sitter: 2|lam| r^4 + k r - l^2 = 0, single positive minimum.
    alam = -lam
    hi, dps = _cosmo_hi_prec(k, lam, ell)
    rs = poly_roots.quartic_roots_resolvent(
        0.0, 0.0, k / (2.0 * alam), -ell * ell / (2.0 * alam),
        hi_prec=hi, dps=dps)
    pos = sorted(r for r in rs.real_roots if r > 0.0)
    if len(pos) != 1:
        raise NoExtremumError("expected one positive stationary radius")
    return RootSet(pos, rs.complex_pairs,
                   {"kind": "cosmological-stationary", **rs.source},
                   labels=["min"], flags=rs.flags)


def _reality_roots(spec: PotentialSpec, ctx: RadialContext) -> RootSet:
    """Roots of the reality polynomial 2 r^n (E - V_eff) for the family."""
    f = spec.family
    p = spec.params
    ell = ctx.ell
    E = ctx.energy
    if f == "kepler":
        # 2E r^2 + 2k r - l^2 = 0
        return _quadratic_rootset(2.0 * E, 2.0 * p["k"], -ell * ell,
                                  {"kind": "kepler-reality"})
    if f == "harmonic":
        k = p["k"]
        disc = E * E - 2.0 * k * ell * ell
        if E <= 0.0 or disc < 0.0:
            raise UnboundedError("harmonic requires E >= sqrt(2k) l")
        s = math.sqrt(disc)
        r1 = math.sqrt(max(0.0, (E - s) / (2.0 * k)))
        r2 = math.sqrt((E + s) / (2.0 * k))
        return RootSet([r1, r2], [], {"kind": "harmonic-reality"})
    if f == "oblate":
        if E == 0.0:
            raise UnboundedError("oblate reality cubic needs E != 0")
        k, B = p["k"], p["B"]
        # 2E r^3 + 2k r^2 - l^2 r + 2B = 0, monic.
        return _cubic_rootset(k / E, -ell * ell / (2.0 * E), B / E,
                              {"kind": "oblate-reality"})
    if f == "cosmological":
        k, lam = p["k"], p["lambda"]
        hi, dps = _cosmo_hi_prec(k, lam, ell)
        rs = poly_roots.quartic_roots_resolvent(
            0.0, E / lam, k / lam, -ell * ell / (2.0 * lam),
            hi_prec=hi, dps=dps)
        rs.source["kind"] = "cosmological-reality"
        return rs
    if f == "cornell":
        a, b = p["a"], p["b"]
        # -2b r^3 + 2E r^2 + 2a r - l^2 = 0, monic.
        return _cubic_rootset(-E / b, -a / b, ell * ell / (2.0 * b),
                              {"kind": "cornell-reality"})
    # str
    a, b, eps = str_reduction(spec)
    m0 = p["m0"]
    return _quadratic_rootset(2.0 * eps, -2.0 * b, -a / (m0 * m0),
                              {"kind": "str-reality"})


def _quadratic_rootset(c2, c1, c0, source):
    if c2 == 0.0:
        if c1 == 0.0:
            raise UnboundedError("degenerate reality polynomial")
        return RootSet([-c0 / c1], [], source)
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return RootSet([], [(-c1 / (2.0 * c2), math.sqrt(-disc) / (2.0 * abs(c2)))],
                       source)
    sq = math.sqrt(disc)
    if c1 >= 0.0:
        t = -(c1 + sq) / 2.0
    else:
        t = -(c1 - sq) / 2.0
    r1 = t / c2
    r2 = c0 / t if t != 0.0 else 0.0
    return RootSet(sorted([r1, r2]), [], source)


def _cubic_rootset(b2, b1, b0, source):
    """Roots of the monic cubic r^3 + b2 r^2 + b1 r + b0."""
    shift = b2 / 3.0
    p = (b1 - b2 * b2 / 3.0) / 3.0
    q = (b0 - b1 * b2 / 3.0 + 2.0 * b2 ** 3 / 27.0) / 2.0
    rs = poly_roots.depressed_cubic_roots(p, q)
    reals = sorted(r - shift for r in rs.real_roots)
    pairs = [(re - shift, im) for re, im in rs.complex_pairs]
    out = RootSet(reals, pairs, dict(source), flags=rs.flags)
    out.source.update({"shifted_p": p, "shifted_q": q, "shift": shift})
    return out


def turning_points(spec: PotentialSpec, ctx: RadialContext) -> RootSet:
    """Real roots of the reality condition plus the bounded bracket (r1, r2)."""
    spec = reduce_spec(spec, ctx)
    rs = _reality_roots(spec, ctx)
    pos = sorted(r for r in rs.real_roots if r > 0.0)
    bracket = None
    for lo, hi in zip(pos, pos[1:]):
        mid = 0.5 * (lo + hi)
        if ctx.energy - v_eff(spec, ctx, mid) > 0.0:
            bracket = (lo, hi)
            break
    if bracket is None and len(pos) == 2 and abs(pos[1] - pos[0]) \
            <= 1e-9 * max(1.0, pos[1]):
        bracket = (pos[0], pos[1])  # circular orbit, coincident pair
    if bracket is None:
        raise UnboundedError(
            "no bounded radial interval for E = %.6g (positive roots: %s)"
            % (ctx.energy, ["%.6g" % r for r in pos]))
    rs.bracket = bracket
    return rs


@dataclass
class RegimeReport:
    """Classification outcome with the governing inequality values."""

    regime: str
    details: Dict[str, float]


def classify_regime(spec: PotentialSpec, ctx: RadialContext,
                    critical_tol: Optional[float] = None) -> RegimeReport:
    """One of Bounded, Circular, Unbounded, Monotone, CriticalMax.

    CriticalMax (energy pinned at the local maximum) is measure-zero, so it
    is only reported when the caller supplies critical_tol explicitly.
    """
    spec = reduce_spec(spec, ctx)
    details: Dict[str, float] = {}
    if spec.family == "oblate":
        p = spec.params
        details["alpha"] = ctx.ell ** 4 / (12.0 * p["k"] * p["B"])
    if spec.family == "cosmological" and spec.params["lambda"] > 0.0:
        bound = desitter_lambda_bound(spec.params["k"], ctx.ell)
        details["lambda_bound"] = bound
        details["lambda_margin"] = bound - spec.params["lambda"]
    try:
        st = stationary_points(spec, ctx)
    except NoExtremumError as exc:
        details["reason"] = 0.0
        return RegimeReport("Monotone", details)
    labels = st.labels or []
    for r, lab in zip(st.real_roots, labels):
        details["r_" + lab] = r
        details["E_" + lab] = v_eff(spec, ctx, r)
    if "E_min" in details:
        e_min = details["E_min"]
        if abs(ctx.energy - e_min) <= 1e-12 * max(1.0, abs(e_min)):
            return RegimeReport("Circular", details)
        details["energy_above_min"] = ctx.energy - e_min
    if critical_tol is not None and "E_max" in details:
        e_max = details["E_max"]
        if abs(ctx.energy - e_max) <= critical_tol * max(1e-300, abs(e_max)):
            return RegimeReport("CriticalMax", details)
    if "E_max" in details:
        details["energy_below_max"] = details["E_max"] - ctx.energy
    try:
        tp = turning_points(spec, ctx)
        details["r_peri"], details["r_apo"] = tp.bracket
        return RegimeReport("Bounded", details)
    except UnboundedError:
        return RegimeReport("Unbounded", details)


# Gravitational scenario potentials (appendix material).

def kottler_potential(r_s: float, r_lambda: float, r: float) -> float:
    """Newtonian limit of the Schwarzschild-de Sitter metric,
    Phi = -r_s/r - (1/6)(r/r_Lambda)^2."""
    if r_s <= 0.0 or r_lambda <= 0.0:
        raise PotentialDomainError("kottler requires r_s > 0 and r_lambda > 0")
    _check_r(r)
    return -r_s / r - (r / r_lambda) ** 2 / 6.0


def kottler_r_max(r_s: float, r_lambda: float) -> float:
    """Location of the l = 0 local maximum, (3 r_s r_Lambda^2)^(1/3)."""
    if r_s <= 0.0 or r_lambda <= 0.0:
        raise PotentialDomainError("kottler requires r_s > 0 and r_lambda > 0")
    return (3.0 * r_s * r_lambda * r_lambda) ** (1.0 / 3.0)


def legendre_p(n: int, x: float) -> float:
    """Legendre polynomial P_n(x) by the three-term recurrence."""
    if n == 0:
        return 1.0
    p_prev, p = 1.0, x
    for m in range(1, n):
        p_prev, p = p, ((2 * m + 1) * x * p - m * p_prev) / (m + 1)
    return p


def legendre_p_zero(n: int) -> float:
    """P_n(0): zero for odd n, (-1)^m (2m-1)!!/(2m)!! for n = 2m."""
    if n % 2:
        return 0.0
    m = n // 2
    val = 1.0
    for j in range(1, m + 1):
        val *= -(2.0 * j - 1.0) / (2.0 * j)
    return val


def spheroid_potential(GM: float, R: float, J2: float, r: float,
                       theta: float) -> float:
    """Weakly deformed sphere: Phi = -GM/r + J2 GM R^2 P2(cos theta)/r^3."""
    _check_r(r)
    c = math.cos(theta)
    return -GM / r + J2 * GM * R * R * legendre_p(2, c) / r ** 3


def spheroid_oblate_mapping(GM: float, R: float, J2: float) -> PotentialSpec:
    """Equatorial-plane spheroid potential as an oblate family spec,
    B = -J2 GM R^2 P2(0) = J2 GM R^2 / 2."""
    return oblate(GM, J2 * GM * R * R / 2.0)


def ring_potential(GM: float, a_ring: float, r: float, n_terms: int) -> float:
    """Ring of radius a: truncated even-Legendre series, branches r > a and
    r < a; coefficients P_{2n}(0)^2 = 1, 1/4, 9/64, ..."""
    _check_r(r)
    if n_terms < 1:
        raise PotentialDomainError("n_terms must be >= 1")
    if abs(r - a_ring) < 0.01 * a_ring:
        raise NonConvergentError("r within 1%% of the ring radius %g" % a_ring)
    if r > a_ring:
        pref, ratio = -GM / r, a_ring / r
    else:
        pref, ratio = -GM / a_ring, r / a_ring
    total = 0.0
    for n in range(n_terms + 1):
        total += legendre_p_zero(2 * n) ** 2 * ratio ** (2 * n)
    return pref * total


def planetary_sum(GM: float, bodies: List[Tuple[float, float]], r: float,
                  n_terms: int = 2) -> float:
    """Ring-averaged perturbation of sibling planets on top of -GM/r.

    bodies: (GM_j, a_j) pairs; a_j < r contributes (a_j/r)^(2k+1) terms,
    a_j > r contributes (r/a_j)^(2k) terms, k = 1..n_terms.
    """
    _check_r(r)
    if n_terms < 1:
        raise PotentialDomainError("n_terms must be >= 1")
    for _, a_j in bodies:
        if abs(r - a_j) < 0.01 * a_j:
            raise NonConvergentError("r within 1%% of body radius %g" % a_j)
    total = -GM / r
    for k in range(1, n_terms + 1):
        coeff = legendre_p_zero(2 * k) ** 2
        inner = sum(gm_j / a_j * (a_j / r) ** (2 * k + 1)
                    for gm_j, a_j in bodies if a_j < r)
        outer = sum(gm_j / a_j * (r / a_j) ** (2 * k)
                    for gm_j, a_j in bodies if a_j > r)
        total -= coeff * (inner + outer)
    return total
