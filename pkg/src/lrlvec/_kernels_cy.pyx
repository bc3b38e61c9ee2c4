# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Cython twin of `_kernels_py`: identical signatures and semantics for the
Carlson symmetric elliptic integrals, Legendre-form F and Pi, the Jacobi
amplitude via the arithmetic-geometric mean, and the sine/cosine integrals.
The backend selector prefers this module when it imports cleanly.
"""

from libc.math cimport (asin, atan, atanh, cos, exp, fabs, ldexp, log,
                        sin, sqrt, tanh, M_PI)

cdef double _EULER_GAMMA = 0.5772156649015328606

cdef double _RF_ERRTOL = 0.0015
cdef double _RC_ERRTOL = 0.001
cdef double _RJ_ERRTOL = 0.0015
cdef int _MAX_ITER = 200


cdef double _min3(double x, double y, double z):
    cdef double m = x
    if y < m:
        m = y
    if z < m:
        m = z
    return m


cdef double _max3(double x, double y, double z):
    cdef double m = x
    if y > m:
        m = y
    if z > m:
        m = z
    return m


cdef double _rf(double x, double y, double z) except? -1.0:
    cdef double sx, sy, sz, lam, ave, dx, dy, dz, e2, e3
    cdef int i
    if _min3(x, y, z) < 0.0 or (x + y) == 0.0 or (y + z) == 0.0 or (x + z) == 0.0:
        raise ValueError("carlson_rf: invalid arguments (%g, %g, %g)" % (x, y, z))
    for i in range(_MAX_ITER):
        sx = sqrt(x); sy = sqrt(y); sz = sqrt(z)
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
        if _max3(fabs(dx), fabs(dy), fabs(dz)) < _RF_ERRTOL:
            e2 = dx * dy - dz * dz
            e3 = dx * dy * dz
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2
                    + e3 / 14.0) / sqrt(ave)
    raise ArithmeticError("carlson_rf failed to converge")


cdef double _rc(double x, double y) except? -1.0:
    cdef double lam, ave, s
    cdef int i
    if x < 0.0 or y <= 0.0:
        raise ValueError("carlson_rc: invalid arguments (%g, %g)" % (x, y))
    for i in range(_MAX_ITER):
        lam = 2.0 * sqrt(x) * sqrt(y) + y
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        ave = (x + y + y) / 3.0
        s = (y - ave) / ave
        if fabs(s) < _RC_ERRTOL:
            return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) \
                / sqrt(ave)
    raise ArithmeticError("carlson_rc failed to converge")


cdef double _rj(double x, double y, double z, double p) except? -1.0:
    cdef double total = 0.0
    cdef double fac = 1.0
    cdef double sx, sy, sz, lam, alpha, beta, ave, dx, dy, dz, dp
    cdef double ea, eb, ec, ed, ee, tail
    cdef int i
    if _min3(x, y, z) < 0.0 or p <= 0.0:
        raise ValueError("carlson_rj: invalid arguments")
    if (x + y) == 0.0 or (y + z) == 0.0 or (x + z) == 0.0:
        raise ValueError("carlson_rj: two arguments vanish")
    for i in range(_MAX_ITER):
        sx = sqrt(x); sy = sqrt(y); sz = sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        alpha = (p * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = p * (p + lam) ** 2
        total += fac * _rc(alpha, beta)
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
        if _max3(fabs(dx), fabs(dy), fabs(dz)) < _RJ_ERRTOL and fabs(dp) < _RJ_ERRTOL:
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
            return 3.0 * total + fac * tail / (ave * sqrt(ave))
    raise ArithmeticError("carlson_rj failed to converge")


def carlson_rf(double x, double y, double z):
    """Carlson symmetric integral R_F(x, y, z), arguments nonnegative,
    at most one zero."""
    return _rf(x, y, z)


def carlson_rc(double x, double y):
    """Degenerate Carlson integral R_C(x, y) = R_F(x, y, y), y > 0."""
    return _rc(x, y)


def carlson_rj(double x, double y, double z, double p):
    """Carlson symmetric integral R_J(x, y, z, p) for p > 0.

    The negative-p principal value is not needed here: every Legendre Pi
    evaluated by this package has 1 - xi*t^2 > 0 on the integration range.
    """
    return _rj(x, y, z, p)


def ellip_f_kernel(double s, double kappa):
    """Incomplete elliptic integral of the first kind, F(sin phi = s, kappa).

    Defined as the integral of dt / (sqrt(1-t^2) sqrt(1-kappa^2 t^2)) from 0
    to s.  kappa = 1 dispatches to the logarithmic closed form arctanh(s).
    """
    cdef double c2, d2
    if fabs(s) > 1.0:
        raise ValueError("ellip_f: |sin_phi| > 1")
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("ellip_f: kappa outside [0, 1]")
    if s == 0.0:
        return 0.0
    if kappa == 1.0:
        if fabs(s) == 1.0:
            raise ValueError("ellip_f diverges at kappa = 1, |sin_phi| = 1")
        return atanh(s)
    if kappa == 0.0:
        return asin(s)
    c2 = 1.0 - s * s
    d2 = 1.0 - (kappa * s) * (kappa * s)
    return s * _rf(c2, d2, 1.0)


cdef double _pi_kappa1(double s, double xi) except? -1.0e308:
    # Partial fractions of 1/((1 - xi t^2)(1 - t^2)).
    cdef double m, rm, rx
    if fabs(s) == 1.0:
        raise ValueError("ellip_pi diverges at kappa = 1, |sin_phi| = 1")
    if xi < 0.0:
        m = -xi
        rm = sqrt(m)
        return (atanh(s) + rm * atan(rm * s)) / (1.0 + m)
    if xi == 1.0:
        return 0.5 * (s / (1.0 - s * s) + atanh(s))
    rx = sqrt(xi)
    return (atanh(s) - rx * atanh(rx * s)) / (1.0 - xi)


def ellip_pi_kernel(double s, double xi, double kappa):
    """Incomplete elliptic integral of the third kind, Pi(sin phi = s, xi, kappa).

    Integrand gains the factor 1/(1 - xi t^2).  Requires xi s^2 < 1.  The
    kappa = 1 endpoint uses the standard logarithmic reduction (see tests for
    the verbatim variant quoted in the source material).
    """
    cdef double c2, d2, p
    if fabs(s) > 1.0:
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
    return ellip_f_kernel(s, kappa) + (xi / 3.0) * s * s * s * _rj(c2, d2, 1.0, p)


def jacobi_am_kernel(double u, double kappa):
    """Jacobi amplitude am(u, kappa) by the descending AGM recursion."""
    cdef double a, b, c, phi, arg, anext, ratio
    cdef double ratios[64]
    cdef int n = 0
    cdef int i
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("jacobi_am: kappa outside [0, 1]")
    if kappa == 0.0:
        return u
    if kappa == 1.0:
        # Gudermannian limit: sn = tanh(u).
        return 2.0 * atan(exp(u)) - 0.5 * M_PI
    a = 1.0
    b = sqrt((1.0 - kappa) * (1.0 + kappa))
    # ratios[n] = c_{n+1} / a_{n+1}; the backward Landen step inverts
    # sin(2 phi_n - phi_{n+1}) = ratio * sin(phi_{n+1}).
    while n < 64:
        c = 0.5 * (a - b)
        anext = 0.5 * (a + b)
        b = sqrt(a * b)
        a = anext
        ratios[n] = c / a
        n += 1
        if fabs(c) < 1e-18 * a:
            break
    phi = ldexp(a * u, n)
    for i in range(n - 1, -1, -1):
        arg = ratios[i] * sin(phi)
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        phi = 0.5 * (phi + asin(arg))
    return phi


def jacobi_sn_kernel(double u, double kappa):
    """Jacobi elliptic sine sn(u, kappa) = sin(am(u, kappa))."""
    if kappa == 1.0:
        return tanh(u)
    return sin(jacobi_am_kernel(u, kappa))


cdef double _SICI_SEAM = 4.0


cdef int _sici_series(double x, double *si_out, double *ci_out) except -1:
    # Power series about 0; used for |x| <= seam where cancellation is mild.
    cdef double x2 = x * x
    cdef double term = x
    cdef double si = x
    cdef double cin, ci
    cdef int n = 0
    while True:
        n += 1
        term *= -x2 / ((2 * n) * (2 * n + 1))
        si += term / (2 * n + 1)
        if fabs(term) < 1e-18 * fabs(si) + 1e-300:
            break
    cin = 0.0
    term = 1.0
    n = 0
    while True:
        n += 1
        term *= -x2 / ((2 * n - 1) * (2 * n))
        cin += term / (2 * n)
        if fabs(term) < 1e-18 * (fabs(cin) + 1.0):
            break
    ci = _EULER_GAMMA + log(x) + cin
    si_out[0] = si
    ci_out[0] = ci
    return 0


cdef int _sici_continued_fraction(double x, double *si_out, double *ci_out) except -1:
    # E1(ix) by the modified Lentz continued fraction; resums the divergent
    # large-x expansions to full double precision.  Valid for x >= ~2.
    cdef double fpmin = 1e-290
    cdef double a
    cdef double complex z = 1j * x
    cdef double complex b = z + 1.0
    cdef double complex c = 1.0 / fpmin
    cdef double complex d = 1.0 / b
    cdef double complex h = d
    cdef double complex delta, e1
    cdef int i
    for i in range(1, 40000):
        a = -(<double> i) * (<double> i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if abs(delta - 1.0) < 1e-16:
            # exp(-z) for z = i x: cos(x) - i sin(x)
            e1 = h * (cos(x) - 1j * sin(x))
            si_out[0] = 0.5 * M_PI + e1.imag
            ci_out[0] = -e1.real
            return 0
    raise ArithmeticError("si/ci continued fraction failed to converge")


def si_kernel(double x):
    """Sine integral Si(x) = integral of sin(t)/t from 0 to x.  Odd in x."""
    cdef double ax = fabs(x)
    cdef double si = 0.0
    cdef double ci = 0.0
    if ax == 0.0:
        return 0.0
    if ax <= _SICI_SEAM:
        _sici_series(ax, &si, &ci)
    else:
        _sici_continued_fraction(ax, &si, &ci)
    return si if x >= 0.0 else -si


def ci_kernel(double x):
    """Cosine integral Ci(x) = gamma + ln x + integral of (cos t - 1)/t, x > 0."""
    cdef double si = 0.0
    cdef double ci = 0.0
    if x <= 0.0:
        raise ValueError("ci: requires x > 0")
    if x <= _SICI_SEAM:
        _sici_series(x, &si, &ci)
    else:
        _sici_continued_fraction(x, &si, &ci)
    return ci


def sici_aux_kernel(double x):
    """Auxiliary pair (f, g) with Si(x) = pi/2 - f cos x - g sin x and
    Ci(x) = f sin x - g cos x, for x > 0.

    f ~ 1/x and g ~ 1/x^2 at large x; evaluating them directly keeps
    Si/Ci *differences* fully accurate where the plain values would lose
    everything to the O(1) leading terms.
    """
    cdef double si = 0.0
    cdef double ci = 0.0
    cdef double s, c2, half_less, a
    cdef double fpmin = 1e-290
    cdef double complex z, b, c, d, h, delta
    cdef int i
    if x <= 0.0:
        raise ValueError("sici_aux: requires x > 0")
    if x <= _SICI_SEAM:
        _sici_series(x, &si, &ci)
        s = sin(x)
        c2 = cos(x)
        half_less = 0.5 * M_PI - si
        return half_less * c2 + ci * s, half_less * s - ci * c2
    # The Lentz recursion already produces h = E1(ix) e^{ix} = g - i f.
    z = 1j * x
    b = z + 1.0
    c = 1.0 / fpmin
    d = 1.0 / b
    h = d
    for i in range(1, 40000):
        a = -(<double> i) * (<double> i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if abs(delta - 1.0) < 1e-16:
            return -h.imag, h.real
    raise ArithmeticError("si/ci continued fraction failed to converge")


BACKEND_NAME = "cython"
