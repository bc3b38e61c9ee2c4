"""Pure-Python numeric kernels.

These are the hot scalar routines behind the public special-function API:
Carlson symmetric elliptic integrals, Legendre-form F and Pi built on them,
the Jacobi amplitude via the arithmetic-geometric mean, and the sine/cosine
integrals.  A compiled twin (`_kernels_cy`) with the same signatures is
preferred at import time when available; see `lrlvec.backend`.

All functions are pure and operate on Python floats.
"""

import cmath
import math

_EULER_GAMMA = 0.5772156649015328606

# Convergence knobs for the Carlson duplication loops.  The truncation error
# of the final Taylor tail scales like ERRTOL**6 (RF) / ERRTOL**6 (RJ), so
# these settings keep it below double-precision roundoff.
_RF_ERRTOL = 0.0015
_RC_ERRTOL = 0.001
_RJ_ERRTOL = 0.0015
_MAX_ITER = 200


def carlson_rf(x, y, z):
    """Carlson symmetric integral R_F(x, y, z), arguments nonnegative,
    at most one zero."""
    if min(x, y, z) < 0.0 or (x + y) == 0.0 or (y + z) == 0.0 or (x + z) == 0.0:
        raise ValueError("carlson_rf: invalid arguments (%g, %g, %g)" % (x, y, z))
    for _ in range(_MAX_ITER):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        if ave == 0.0:
            break
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < _RF_ERRTOL:
            e2 = dx * dy - dz * dz
            e3 = dx * dy * dz
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2
                    + e3 / 14.0) / math.sqrt(ave)
    raise ArithmeticError("carlson_rf failed to converge")


def carlson_rc(x, y):
    """Degenerate Carlson integral R_C(x, y) = R_F(x, y, y), y > 0."""
    if x < 0.0 or y <= 0.0:
        raise ValueError("carlson_rc: invalid arguments (%g, %g)" % (x, y))
    for _ in range(_MAX_ITER):
        lam = 2.0 * math.sqrt(x) * math.sqrt(y) + y
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        ave = (x + y + y) / 3.0
        s = (y - ave) / ave
        if abs(s) < _RC_ERRTOL:
            return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) \
                / math.sqrt(ave)
    raise ArithmeticError("carlson_rc failed to converge")


def carlson_rj(x, y, z, p):
    """Carlson symmetric integral R_J(x, y, z, p) for p > 0.

    The negative-p principal value is not needed here: every Legendre Pi
    evaluated by this package has 1 - xi*t^2 > 0 on the integration range.
    """
    if min(x, y, z) < 0.0 or p <= 0.0:
        raise ValueError("carlson_rj: invalid arguments")
    if (x + y) == 0.0 or (y + z) == 0.0 or (x + z) == 0.0:
        raise ValueError("carlson_rj: two arguments vanish")
    total = 0.0
    fac = 1.0
    for _ in range(_MAX_ITER):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        alpha = (p * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = p * (p + lam) ** 2
        total += fac * carlson_rc(alpha, beta)
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        ave = 0.2 * (x + y + z + 2.0 * p)
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        dp = (ave - p) / ave
        if max(abs(dx), abs(dy), abs(dz), abs(dp)) < _RJ_ERRTOL:
            ea = dx * (dy + dz) + dy * dz
            eb = dx * dy * dz
            ec = dp * dp
            ed = ea - 3.0 * ec
            ee = eb + 2.0 * dp * (ea - ec)
            tail = (1.0 + ed * (-3.0 / 14.0 + 0.75 * 3.0 / 14.0 * ed
                                - 1.5 * 3.0 / 26.0 * ee)
                    + eb * (1.0 / 6.0 + dp * (-6.0 / 22.0 + dp * 3.0 / 26.0))
                    + dp * ea * (1.0 / 3.0 - dp * 3.0 / 22.0)
                    - dp * ec / 3.0)
            return 3.0 * total + fac * tail / (ave * math.sqrt(ave))
    raise ArithmeticError("carlson_rj failed to converge")


def ellip_f_kernel(s, kappa):
    """Incomplete elliptic integral of the first kind, F(sin phi = s, kappa).

    Defined as the integral of dt / (sqrt(1-t^2) sqrt(1-kappa^2 t^2)) from 0
    to s.  kappa = 1 dispatches to the logarithmic closed form arctanh(s).
    """
    if abs(s) > 1.0:
        raise ValueError("ellip_f: |sin_phi| > 1")
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("ellip_f: kappa outside [0, 1]")
    if s == 0.0:
        return 0.0
    if kappa == 1.0:
        if abs(s) == 1.0:
            raise ValueError("ellip_f diverges at kappa = 1, |sin_phi| = 1")
        return math.atanh(s)
    if kappa == 0.0:
        return math.asin(s)
    c2 = 1.0 - s * s
    d2 = 1.0 - (kappa * s) * (kappa * s)
    return s * carlson_rf(c2, d2, 1.0)


def ellip_pi_kernel(s, xi, kappa):
    """Incomplete elliptic integral of the third kind, Pi(sin phi = s, xi, kappa).

    Integrand gains the factor 1/(1 - xi t^2).  Requires xi s^2 < 1.  The
    kappa = 1 endpoint uses the standard logarithmic reduction (see tests for
    the verbatim variant quoted in the source material).
    """
    if abs(s) > 1.0:
        raise ValueError("ellip_pi: |sin_phi| > 1")
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("ellip_pi: kappa outside [0, 1]")
    if xi * s * s >= 1.0:
        raise ValueError("ellip_pi: characteristic pole inside range")
    if s == 0.0:
        return 0.0
    if xi == 0.0:
        return ellip_f_kernel(s, kappa)
    if kappa == 1.0:
        return _pi_kappa1(s, xi)
    c2 = 1.0 - s * s
    d2 = 1.0 - (kappa * s) * (kappa * s)
    p = 1.0 - xi * s * s
    return ellip_f_kernel(s, kappa) \
        + (xi / 3.0) * s ** 3 * carlson_rj(c2, d2, 1.0, p)


def _pi_kappa1(s, xi):
    # Partial fractions of 1/((1 - xi t^2)(1 - t^2)).
    if abs(s) == 1.0:
        raise ValueError("ellip_pi diverges at kappa = 1, |sin_phi| = 1")
    if xi < 0.0:
        m = -xi
        rm = math.sqrt(m)
        return (math.atanh(s) + rm * math.atan(rm * s)) / (1.0 + m)
    if xi == 1.0:
        # 1/((1-t^2)^2): standard antiderivative.
        return 0.5 * (s / (1.0 - s * s) + math.atanh(s))
    rx = math.sqrt(xi)
    return (math.atanh(s) - rx * math.atanh(rx * s)) / (1.0 - xi)


def jacobi_am_kernel(u, kappa):
    """Jacobi amplitude am(u, kappa) by the descending AGM recursion."""
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("jacobi_am: kappa outside [0, 1]")
    if kappa == 0.0:
        return u
    if kappa == 1.0:
        # Gudermannian limit: sn = tanh(u).
        return 2.0 * math.atan(math.exp(u)) - 0.5 * math.pi
    a = 1.0
    b = math.sqrt((1.0 - kappa) * (1.0 + kappa))
    # ratios[n] = c_{n+1} / a_{n+1}; the backward Landen step inverts
    # sin(2 phi_n - phi_{n+1}) = ratio * sin(phi_{n+1}).
    ratios = []
    for _ in range(64):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        ratios.append(c / a)
        if abs(c) < 1e-18 * a:
            break
    phi = math.ldexp(a * u, len(ratios))
    for ratio in reversed(ratios):
        arg = ratio * math.sin(phi)
        arg = max(-1.0, min(1.0, arg))
        phi = 0.5 * (phi + math.asin(arg))
    return phi


def jacobi_sn_kernel(u, kappa):
    """Jacobi elliptic sine sn(u, kappa) = sin(am(u, kappa))."""
    if kappa == 1.0:
        return math.tanh(u)
    return math.sin(jacobi_am_kernel(u, kappa))


_SICI_SEAM = 4.0


def _sici_series(x):
    # Power series about 0; used for |x| <= seam where cancellation is mild.
    x2 = x * x
    term = x
    si = x
    n = 0
    while True:
        n += 1
        term *= -x2 / ((2 * n) * (2 * n + 1))
        si += term / (2 * n + 1)
        if abs(term) < 1e-18 * abs(si) + 1e-300:
            break
    cin = 0.0
    term = 1.0
    n = 0
    while True:
        n += 1
        term *= -x2 / ((2 * n - 1) * (2 * n))
        cin += term / (2 * n)
        if abs(term) < 1e-18 * (abs(cin) + 1.0):
            break
    ci = _EULER_GAMMA + math.log(x) + cin
    return si, ci


def _sici_continued_fraction(x):
    # E1(ix) by the modified Lentz continued fraction; resums the divergent
    # large-x expansions to full double precision.  Valid for x >= ~2.
    fpmin = 1e-290
    z = complex(0.0, x)
    b = z + 1.0
    c = complex(1.0 / fpmin, 0.0)
    d = 1.0 / b
    h = d
    for i in range(1, 40000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            e1 = h * cmath.exp(-z)
            return 0.5 * math.pi + e1.imag, -e1.real
    raise ArithmeticError("si/ci continued fraction failed to converge")


def si_kernel(x):
    """Sine integral Si(x) = integral of sin(t)/t from 0 to x.  Odd in x."""
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if ax <= _SICI_SEAM:
        si, _ = _sici_series(ax)
    else:
        si, _ = _sici_continued_fraction(ax)
    return si if x >= 0.0 else -si


def ci_kernel(x):
    """Cosine integral Ci(x) = gamma + ln x + integral of (cos t - 1)/t, x > 0."""
    if x <= 0.0:
        raise ValueError("ci: requires x > 0")
    if x <= _SICI_SEAM:
        _, ci = _sici_series(x)
    else:
        _, ci = _sici_continued_fraction(x)
    return ci


def sici_aux_kernel(x):
    """Auxiliary pair (f, g) with Si(x) = pi/2 - f cos x - g sin x and
    Ci(x) = f sin x - g cos x, for x > 0.

    f ~ 1/x and g ~ 1/x^2 at large x; evaluating them directly keeps
    Si/Ci *differences* fully accurate where the plain values would lose
    everything to the O(1) leading terms.
    """
    if x <= 0.0:
        raise ValueError("sici_aux: requires x > 0")
    if x <= _SICI_SEAM:
        si, ci = _sici_series(x)
        s, c = math.sin(x), math.cos(x)
        half_less = 0.5 * math.pi - si
        return half_less * c + ci * s, half_less * s - ci * c
    # The Lentz recursion already produces h = E1(ix) e^{ix} = g - i f.
    fpmin = 1e-290
    z = complex(0.0, x)
    b = z + 1.0
    c = complex(1.0 / fpmin, 0.0)
    d = 1.0 / b
    h = d
    for i in range(1, 40000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return -h.imag, h.real
    raise ArithmeticError("si/ci continued fraction failed to converge")


BACKEND_NAME = "python"
