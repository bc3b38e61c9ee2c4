"""Closed-form roots of the reality-condition cubics and quartics.

Cubics are taken in the normalization y^3 + 3p y + 2q = 0 and solved by the
trigonometric (three real roots) or hyperbolic (one real root) formulas.
Quartics are depressed by the quarter-shift, factored into two quadratics
through a resolvent cubic, and re-shifted.  Near-degenerate discriminants
fall back to a companion-matrix eigenvalue solve and are flagged.

A high-precision arm (mpmath) exists because the de Sitter stationary-point
quartic at very small lambda mixes roots of order lambda^(-1/3) with roots
of order 1; the float closed forms lose the small root to cancellation.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath
import numpy as np

_DEGENERACY_RTOL = 1e-12


class DegenerateResolventError(ArithmeticError):
    """Resolvent cubic produced no usable factorization."""


@dataclass
class RootSet:
    """Ordered real roots plus complex pairs of one source polynomial.

    real_roots ascend; complex_pairs store one (re, im > 0) per conjugate
    pair.  source records the originating coefficients and any pre-shift
    bookkeeping; labels (when set) parallel real_roots.
    """

    real_roots: List[float]
    complex_pairs: List[Tuple[float, float]]
    source: dict
    labels: Optional[List[str]] = None
    bracket: Optional[Tuple[float, float]] = None
    flags: List[str] = field(default_factory=list)

    def all_roots(self):
        """Real roots plus both members of each conjugate pair, as complex."""
        out = [complex(r, 0.0) for r in self.real_roots]
        for re, im in self.complex_pairs:
            out.append(complex(re, im))
            out.append(complex(re, -im))
        return out

    def monic_coefficients(self):
        """Monic coefficients [1, a_{n-1}, ..., a_0] of the source polynomial."""
        src = self.source
        if src["kind"] == "cubic_depressed":
            return [1.0, 0.0, 3.0 * src["p"], 2.0 * src["q"]]
        return [1.0, src["c3"], src["c2"], src["c1"], src["c0"]]

    def residuals(self):
        """|polynomial(root)| for each real root."""
        coeffs = self.monic_coefficients()
        out = []
        for r in self.real_roots:
            acc = 0.0
            for c in coeffs:
                acc = acc * r + c
            out.append(abs(acc))
        return out

    def vieta_residuals(self):
        """Relative mismatch of each elementary symmetric function against
        the source coefficients."""
        coeffs = self.monic_coefficients()
        roots = self.all_roots()
        n = len(coeffs) - 1
        if len(roots) != n:
            return {"missing_roots": float("inf")}
        # e_k by expanding prod (x - r_i) incrementally.
        poly = [complex(1.0)]
        for r in roots:
            poly = [complex(0.0)] + poly
            for i in range(len(poly) - 1):
                poly[i] -= r * poly[i + 1]
        poly.reverse()
        out = {}
        for k in range(1, n + 1):
            target = coeffs[k]
            got = poly[k].real
            denom = max(1.0, abs(target))
            out["e%d" % k] = abs(got - target) / denom
        return out


class _FloatCtx:
    """math-module shim so the closed-form algebra runs in floats."""

    number = staticmethod(float)
    sqrt = staticmethod(math.sqrt)
    acos = staticmethod(math.acos)
    cos = staticmethod(math.cos)
    sinh = staticmethod(math.sinh)
    asinh = staticmethod(math.asinh)
    cosh = staticmethod(math.cosh)
    acosh = staticmethod(math.acosh)
    pi = math.pi

    @staticmethod
    def cbrt(x):
        return math.copysign(abs(x) ** (1.0 / 3.0), x)


class _MPCtx:
    """mpmath shim; precision is set by the caller via mpmath.workdps."""

    number = staticmethod(lambda x: mpmath.mpf(x))
    sqrt = staticmethod(mpmath.sqrt)
    acos = staticmethod(mpmath.acos)
    cos = staticmethod(mpmath.cos)
    sinh = staticmethod(mpmath.sinh)
    asinh = staticmethod(mpmath.asinh)
    cosh = staticmethod(mpmath.cosh)
    acosh = staticmethod(mpmath.acosh)
    pi = mpmath.pi
    cbrt = staticmethod(mpmath.cbrt)


def _clamp(x, lo, hi):
    return lo if x < lo else hi if x > hi else x


def _cubic_real_roots(p, q, ctx):
    """Real roots of y^3 + 3p y + 2q = 0 via trig/hyperbolic casework."""
    zero = ctx.number(0)
    if p == zero and q == zero:
        return [zero, zero, zero]
    disc = q * q + p * p * p
    if disc < zero:
        # Three real roots; requires p < 0.
        sp = ctx.sqrt(-p)
        arg = _clamp(-q / (sp * sp * sp), ctx.number(-1), ctx.number(1))
        psi = ctx.acos(arg)
        two_pi = 2 * ctx.pi
        return sorted(2 * sp * ctx.cos((psi - two_pi * k) / 3) for k in range(3))
    if disc == zero:
        # Repeated roots: y^3 + 3p y + 2q = (y - 2u)(y + u)^2 with u^3 = -q.
        u = ctx.cbrt(-q)
        return sorted([2 * u, -u, -u])
    if p == zero:
        return [ctx.cbrt(-2 * q)]
    if p > zero:
        t = ctx.asinh(q / (p * ctx.sqrt(p))) / 3
        return [-2 * ctx.sqrt(p) * ctx.sinh(t)]
    sp = ctx.sqrt(-p)
    sgn_q = 1 if q > zero else -1
    t = ctx.acosh(abs(q) / (sp * sp * sp)) / 3
    return [-2 * sgn_q * sp * ctx.cosh(t)]


def _eigenvalue_roots(coeffs):
    """Companion-matrix root solve; separates real roots from pairs."""
    roots = np.roots(coeffs)
    scale = max(abs(r) for r in roots) if len(roots) else 1.0
    reals, pairs = [], []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        if abs(r.imag) <= 1e-10 * max(1.0, scale):
            reals.append(float(r.real))
            used[i] = True
        else:
            for j in range(i + 1, len(roots)):
                if not used[j] and abs(roots[j].conjugate() - r) <= 1e-8 * max(1.0, scale):
                    used[i] = used[j] = True
                    break
            if used[i]:
                pairs.append((float(r.real), abs(float(r.imag))))
            else:
                reals.append(float(r.real))
                used[i] = True
    return sorted(reals), pairs


def depressed_cubic_roots(p: float, q: float) -> RootSet:
    """Solve y^3 + 3p y + 2q = 0 in closed form."""
    source = {"kind": "cubic_depressed", "p": p, "q": q}
    if p == 0.0 and q == 0.0:
        return RootSet([0.0, 0.0, 0.0], [], source, flags=["triple-root"])
    disc = q * q + p * p * p
    scale = max(q * q, abs(p) ** 3)
    if disc != 0.0 and abs(disc) < _DEGENERACY_RTOL * scale:
        reals, pairs = _eigenvalue_roots([1.0, 0.0, 3.0 * p, 2.0 * q])
        return RootSet(reals, pairs, source, flags=["near-degenerate", "eigenvalue-fallback"])
    reals = [float(r) for r in _cubic_real_roots(p, q, _FloatCtx)]
    flags = []
    pairs = []
    if disc == 0.0 and (p != 0.0 or q != 0.0):
        flags.append("repeated-root")
    if len(reals) == 1:
        # Deflate: remaining quadratic y^2 + y1 y + (3p + y1^2).
        y1 = reals[0]
        s = 3.0 * p + y1 * y1
        quad_disc = y1 * y1 - 4.0 * s
        if quad_disc >= 0.0:
            sq = math.sqrt(quad_disc)
            reals = sorted([y1, (-y1 - sq) / 2.0, (-y1 + sq) / 2.0])
        else:
            pairs = [(-y1 / 2.0, math.sqrt(-quad_disc) / 2.0)]
    return RootSet(sorted(reals), pairs, source, flags=flags)


def quartic_delta(p: float, q: float, R: float) -> float:
    """Discriminant-style quantity whose sign counts the real roots of
    x^4 + p x^2 + q x + R."""
    return (256.0 * R ** 3 - 128.0 * p * p * R * R + 144.0 * p * q * q * R
            + 16.0 * p ** 4 * R - 27.0 * q ** 4 - 4.0 * p ** 3 * q * q)


def quartic_two_real_test(p: float, q: float, R: float) -> bool:
    """True iff x^4 + p x^2 + q x + R has exactly two distinct real roots
    (delta < 0).  delta = 0 (degenerate) returns False."""
    return quartic_delta(p, q, R) < 0.0


def _stable_quadratic(b, c, ctx):
    """Roots of z^2 + b z + c; returns ('real', r1, r2) or ('pair', re, im)."""
    disc = b * b - 4 * c
    zero = ctx.number(0)
    if disc < zero:
        return ("pair", -b / 2, ctx.sqrt(-disc) / 2)
    sq = ctx.sqrt(disc)
    if b >= zero:
        r1 = (-b - sq) / 2
    else:
        r1 = (-b + sq) / 2
    r2 = c / r1 if r1 != zero else -b - r1
    return ("real", r1, r2)


def _quartic_resolvent_core(c3, c2, c1, c0, ctx):
    """Factor the depressed quartic via the resolvent cubic.

    Returns (reals, pairs, flags) in ctx numbers, roots of the original
    (unshifted) quartic.
    """
    zero = ctx.number(0)
    shift = c3 / 4
    p = c2 - 3 * c3 * c3 / 8
    q = c1 - c3 * c2 / 2 + c3 * c3 * c3 / 8
    R = c0 - c3 * c1 / 4 + c3 * c3 * c2 / 16 - 3 * c3 ** 4 / 256
    # scale ~ (root magnitude)^4 so scale**(3/4) has the dimension of q.
    scale = max(abs(p) ** 2, abs(q) ** (ctx.number(4) / 3) if q != zero else zero,
                abs(R), ctx.number(1e-300))
    flags = []
    if abs(q) <= 1e-14 * scale ** ctx.number(0.75):
        # Biquadratic in z.
        kind, u1, u2 = _stable_quadratic(p, R, ctx)
        reals, pairs = [], []
        if kind == "real":
            for u in (u1, u2):
                if u >= zero:
                    su = ctx.sqrt(u)
                    reals += [su - shift, -su - shift]
                else:
                    pairs.append((-shift, ctx.sqrt(-u)))
        else:
            # z^2 is complex: four complex roots, sqrt of u1 +- i u2.
            mod = ctx.sqrt(ctx.sqrt(u1 * u1 + u2 * u2))
            ang = ctx.acos(_clamp(u1 / ctx.sqrt(u1 * u1 + u2 * u2),
                                  ctx.number(-1), ctx.number(1))) / 2
            re, im = mod * ctx.cos(ang), mod * ctx.sqrt(1 - ctx.cos(ang) ** 2)
            pairs = [(re - shift, im), (-re - shift, im)]
        return sorted(reals), pairs, flags + ["biquadratic"]
    # Resolvent cubic m^3 + 2p m^2 + (p^2 - 4R) m - q^2 = 0; m = w - 2p/3.
    b_res = p * p - 4 * R
    c_res = -q * q
    P3 = (b_res - 4 * p * p / 3) / 3
    Q3 = (16 * p ** 3 / 27 - 2 * p * b_res / 3 + c_res) / 2
    ws = _cubic_real_roots(P3, Q3, ctx)
    m = max(w - 2 * p / 3 for w in ws)
    if not m > zero:
        raise DegenerateResolventError("resolvent root not positive")
    alpha = ctx.sqrt(m)
    # (z^2 + a z + b1)(z^2 - a z + b2): b2 - b1 = q/a, b1 + b2 = p + m.
    beta1 = (p + m - q / alpha) / 2
    beta2 = (p + m + q / alpha) / 2
    reals, pairs = [], []
    for bq, cq in ((alpha, beta1), (-alpha, beta2)):
        kind, u1, u2 = _stable_quadratic(bq, cq, ctx)
        if kind == "real":
            reals += [u1 - shift, u2 - shift]
        else:
            pairs.append((u1 - shift, u2))
    return sorted(reals), pairs, flags


def _newton_polish(coeffs, x, iters=3):
    scale = max(1.0, max(abs(c) for c in coeffs))
    for _ in range(iters):
        f = 0.0
        df = 0.0
        for c in coeffs:
            df = df * x + f
            f = f * x + c
        if abs(df) < 1e-12 * scale:
            break
        step = f / df
        if not math.isfinite(step):
            break
        x -= step
    return x


def quartic_roots_resolvent(c3: float, c2: float, c1: float, c0: float,
                            hi_prec: bool = False, dps: int = 60) -> RootSet:
    """All roots of the monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0.

    hi_prec reruns the same resolvent algebra in mpmath working precision
    (needed when root magnitudes span many decades).
    """
    source = {"kind": "quartic", "c3": c3, "c2": c2, "c1": c1, "c0": c0,
              "shift": c3 / 4.0}
    if hi_prec:
        with mpmath.workdps(dps):
            reals, pairs, flags = _quartic_resolvent_core(
                mpmath.mpf(c3), mpmath.mpf(c2), mpmath.mpf(c1), mpmath.mpf(c0), _MPCtx)
            reals = [float(r) for r in reals]
            pairs = [(float(re), float(im)) for re, im in pairs]
        return RootSet(sorted(reals), pairs, source, flags=flags + ["hi-prec"])
    try:
        reals, pairs, flags = _quartic_resolvent_core(
            float(c3), float(c2), float(c1), float(c0), _FloatCtx)
    except (DegenerateResolventError, ValueError, ZeroDivisionError):
        reals, pairs = _eigenvalue_roots([1.0, c3, c2, c1, c0])
        return RootSet(reals, pairs, source,
                       flags=["degenerate-resolvent", "eigenvalue-fallback"])
    coeffs = [1.0, c3, c2, c1, c0]
    reals = sorted(_newton_polish(coeffs, float(r)) for r in reals)
    pairs = [(float(re), float(im)) for re, im in pairs]
    return RootSet(reals, pairs, source, flags=flags)
