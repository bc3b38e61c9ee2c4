"""Independent numerical ground truth.

Everything the closed forms are tested against lives here: a Dormand-Prince
5(4) embedded Runge-Kutta integrator with PI step-size control, an adaptive
Gauss-Kronrod quadrature with declared endpoint-singularity handling, and
Richardson-extrapolated finite differences.  None of these routines share
code with the closed-form evaluation paths.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from . import potentials


class StepUnderflowError(ArithmeticError):
    """Required step fell below the minimum (collision or stiff blow-up)."""


class ToleranceUnachievableError(ArithmeticError):
    """Integrator could not satisfy the requested tolerance."""


class NonConvergenceError(ArithmeticError):
    """Adaptive quadrature exceeded its subdivision budget."""


class ZeroReferenceError(ValueError):
    """Drift requested relative to a vanishing initial value."""


class StencilOutOfDomainError(ValueError):
    """Finite-difference stencil leaves the function's domain."""


@dataclass
class OrbitSample:
    """One state along an integrated orbit."""

    t: float
    r: float
    phi: float
    rdot: float
    energy: float
    ell: float
    lrl_x: Optional[float] = None
    lrl_y: Optional[float] = None


# Dormand-Prince 5(4) tableau.
_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_DP_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
          11.0 / 84.0, 0.0)
_DP_B4 = (5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
          -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0)


def integrate_ode(rhs: Callable[[float, Sequence[float]], Sequence[float]],
                  y0: Sequence[float], t0: float, t1: float,
                  rel_tol: float = 1e-10, abs_tol: float = 1e-12,
                  max_step: Optional[float] = None,
                  stop_condition: Optional[Callable[[float, Sequence[float]], bool]] = None
                  ) -> List[Tuple[float, Tuple[float, ...]]]:
    """Adaptive Dormand-Prince 5(4) integration with PI step control.

    Returns (t, y) at every accepted step, including both endpoints.  An
    optional stop_condition(t, y) terminates the run early (state at the
    last accepted step is still recorded).
    """
    if rel_tol < 1e-13:
        raise ToleranceUnachievableError("rel_tol below 1e-13 is not honest "
                                         "in double precision")
    span = t1 - t0
    if span <= 0.0:
        raise ValueError("t1 must exceed t0")
    n = len(y0)
    t = t0
    y = tuple(float(v) for v in y0)
    out = [(t, y)]
    k = [rhs(t, y)]  # FSAL cache
    h = min(max_step or span, span * 1e-3)
    h = max(h, span * 1e-12)
    err_prev = 1.0
    min_step = 1e-14 * span
    safety, order = 0.9, 5.0
    while t < t1:
        h = min(h, t1 - t)
        if max_step:
            h = min(h, max_step)
        if h < min_step:
            raise StepUnderflowError("step underflow at t = %.6g" % t)
        ks = [k[0]]
        for i in range(1, 7):
            yi = list(y)
            for j, aij in enumerate(_DP_A[i]):
                if aij != 0.0:
                    for m in range(n):
                        yi[m] += h * aij * ks[j][m]
            ks.append(rhs(t + _DP_C[i] * h, tuple(yi)))
        y5 = [y[m] + h * sum(_DP_B5[i] * ks[i][m] for i in range(7))
              for m in range(n)]
        y4 = [y[m] + h * sum(_DP_B4[i] * ks[i][m] for i in range(7))
              for m in range(n)]
        err = 0.0
        for m in range(n):
            sc = abs_tol + rel_tol * max(abs(y[m]), abs(y5[m]))
            e = (y5[m] - y4[m]) / sc
            err += e * e
        err = math.sqrt(err / n)
        if err <= 1.0 or h <= min_step * 2.0:
            t += h
            y = tuple(y5)
            out.append((t, y))
            k = [ks[6]]  # FSAL: k7 of the accepted step is k1 of the next
            if stop_condition is not None and stop_condition(t, y):
                break
            err = max(err, 1e-10)
            fac = safety * err ** (-0.7 / order) * err_prev ** (0.4 / order)
            err_prev = err
        else:
            fac = safety * err ** (-1.0 / order)
        h *= min(5.0, max(0.2, fac))
    return out


def _conservative_rhs(spec, ctx):
    ell = ctx.ell
    if spec.family == "str":
        a, _, _ = potentials.str_reduction(spec)
        ell = math.sqrt(max(0.0, a)) / spec.params["m0"]

    def rhs(_t, y):
        r, rdot, _phi = y
        return (rdot, -potentials.dv_eff(spec, ctx, r), ell / (r * r))
    return rhs


def radial_period(spec: potentials.PotentialSpec, ctx: potentials.RadialContext
                  ) -> float:
    """Radial period T = 2 * integral dr / sqrt(2 (E - V_eff)) between the
    turning points, via singular-endpoint quadrature."""
    tp = potentials.turning_points(spec, ctx)
    r1, r2 = tp.bracket

    def gap(r):
        return ctx.energy - potentials.v_eff(spec, ctx, r)

    # Near a turning point the directly evaluated gap drops into
    # double-precision noise before the root is reached (worst when the root
    # sits near a V_eff extremum, where the slope is small), and the clamped
    # square root turns that noise into spurious spikes.  Fit a local
    # quadratic model gap(d) = A d + B d^2 at each root from samples at
    # d = delta/2 and d = delta, and use the model inside that margin; its
    # relative error is O((delta / width)^3), far below the quadrature
    # tolerance.
    width = r2 - r1
    delta = width * 2.0 ** -22

    def local_model(g_half, g_full):
        a_lin = (4.0 * g_half - g_full) / delta
        if a_lin <= 0.0:
            raise NonConvergenceError(
                "radial_period: turning point bracket inconsistent with gap sign")
        b_quad = (g_full - a_lin * delta) / (delta * delta)
        return a_lin, b_quad

    a1, b1 = local_model(gap(r1 + 0.5 * delta), gap(r1 + delta))
    a2, b2 = local_model(gap(r2 - 0.5 * delta), gap(r2 - delta))

    # Absolute noise of a direct gap evaluation (cancellation between E and
    # V_eff), turned into the integrand's worst relative noise just outside
    # the modelled margin.  Inside the margin the model is noise-free.
    mid = 0.5 * (r1 + r2)
    gap_noise = 8.0 * 2.220446049250313e-16 * (
        abs(ctx.energy) + abs(potentials.v_eff(spec, ctx, mid)))
    seam = min(a1 * delta, a2 * delta)
    integrand_noise = 0.5 * gap_noise / max(seam, 1e-300)

    def integrand(r):
        d1 = r - r1
        d2 = r2 - r
        if d1 < delta:
            val = 2.0 * d1 * (a1 + b1 * d1)
        elif d2 < delta:
            val = 2.0 * d2 * (a2 + b2 * d2)
        else:
            val = 2.0 * gap(r)
        return 1.0 / math.sqrt(max(val, 1e-300))

    return 2.0 * quadrature(integrand, r1, r2, tol=1e-12,
                            singular=(True, True),
                            rel_noise=min(integrand_noise, 1e-7))


def integrate_orbit(spec: potentials.PotentialSpec,
                    ctx: potentials.RadialContext,
                    initial: OrbitSample, t_span: float,
                    rel_tol: float = 1e-10, abs_tol: float = 1e-12,
                    max_step: Optional[float] = None,
                    min_samples_per_period: int = 64) -> List[OrbitSample]:
    """Integrate the reduced planar system (r, rdot, phi) for a conservative
    family and evaluate the conserved quantities per sample.

    The second-order radial equation rddot = -dV_eff/dr is integrated, so
    turning points need no square-root branch bookkeeping.  Sampling density
    of at least min_samples_per_period per radial period is enforced through
    the step-size cap whenever the orbit is bounded.
    """
    spec = potentials.reduce_spec(spec, ctx)
    reality = ctx.energy - potentials.v_eff(spec, ctx, initial.r)
    if reality < -1e-9 * max(1.0, abs(ctx.energy)):
        raise potentials.PotentialDomainError(
            "initial state violates the reality condition")
    if max_step is None:
        try:
            period = radial_period(spec, ctx)
            max_step = period / float(min_samples_per_period)
        except potentials.UnboundedError:
            max_step = t_span / float(min_samples_per_period)
    rhs = _conservative_rhs(spec, ctx)
    path = integrate_ode(rhs, (initial.r, initial.rdot, initial.phi),
                         initial.t, initial.t + t_span,
                         rel_tol=rel_tol, abs_tol=abs_tol, max_step=max_step)
    samples = []
    for t, (r, rdot, phi) in path:
        samples.append(OrbitSample(
            t=t, r=r, phi=phi, rdot=rdot,
            energy=0.5 * rdot * rdot + potentials.v_eff(spec, ctx, r),
            ell=ctx.ell))
    return samples


def drift(values: Sequence, _selector: str = "scalar") -> dict:
    """Max and RMS relative deviation from the first entry.

    values: floats, or (x, y) pairs treated jointly (Euclidean norm).
    """
    if len(values) < 2:
        raise ValueError("drift needs at least 2 samples")
    first = values[0]
    if isinstance(first, (tuple, list)):
        ref = math.hypot(first[0], first[1])
        if ref < 1e-300:
            raise ZeroReferenceError("initial vector magnitude ~ 0")
        devs = [math.hypot(v[0] - first[0], v[1] - first[1]) / ref
                for v in values]
    else:
        ref = abs(first)
        if ref < 1e-300:
            raise ZeroReferenceError("initial magnitude ~ 0")
        devs = [abs(v - first) / ref for v in values]
    rms = math.sqrt(sum(d * d for d in devs) / len(devs))
    return {"max_rel": max(devs), "rms_rel": rms}


# 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK constants).
_KRONROD_NODES = (
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0)
_KRONROD_WEIGHTS = (
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992)
_GAUSS_WEIGHTS = (
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020)


def _gk15(f, a, b):
    """Kronrod value, |K - G| error estimate, and the integral of |f|."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fk = 0.0
    fg = 0.0
    fabs = 0.0
    for i, x in enumerate(_KRONROD_NODES):
        if x == 0.0:
            v = f(mid)
            fk += _KRONROD_WEIGHTS[i] * v
            fg += _GAUSS_WEIGHTS[3] * v
            fabs += _KRONROD_WEIGHTS[i] * abs(v)
        else:
            v1 = f(mid - half * x)
            v2 = f(mid + half * x)
            fk += _KRONROD_WEIGHTS[i] * (v1 + v2)
            fabs += _KRONROD_WEIGHTS[i] * (abs(v1) + abs(v2))
            if i % 2 == 1:
                fg += _GAUSS_WEIGHTS[i // 2] * (v1 + v2)
    return fk * half, abs(fk - fg) * abs(half), fabs * abs(half)


def quadrature(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-12,
               singular: Tuple[bool, bool] = (False, False),
               max_depth: int = 60, return_bound: bool = False,
               rel_noise: float = 0.0):
    """Adaptive Gauss-Kronrod estimate of the integral of f over (a, b).

    Declared integrable endpoint singularities (1/sqrt type) are removed by
    the substitutions x = a + (b-a) sin^2(theta) (both ends) or a quadratic
    stretch (one end) before subdividing; interior nodes never touch the
    endpoints themselves.

    rel_noise is the caller's estimate of the relative evaluation noise of
    the integrand (beyond plain roundoff, e.g. cancellation in the
    integrand's interior).  It widens the acceptance floor: below
    rel_noise * integral(|f|) the Kronrod-Gauss gap measures the noise, not
    the quadrature error, and subdividing cannot improve it.
    """
    if a == b:
        return (0.0, 0.0) if return_bound else 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    left, right = singular
    if left and right:
        width = b - a

        def g(th):
            return f(a + width * math.sin(th) ** 2) * width * math.sin(2.0 * th)
        lo, hi = 0.0, 0.5 * math.pi
    elif left:
        width = b - a

        def g(u):
            return f(a + width * u * u) * 2.0 * width * u
        lo, hi = 0.0, 1.0
    elif right:
        width = b - a

        def g(u):
            return f(b - width * u * u) * 2.0 * width * u
        lo, hi = 0.0, 1.0
    else:
        g, lo, hi = f, a, b

    total = 0.0
    bound = 0.0
    stack = [(lo, hi, 0)]
    budget = 200000
    while stack:
        budget -= 1
        if budget < 0:
            raise NonConvergenceError("quadrature interval budget exhausted")
        x0, x1, depth = stack.pop()
        val, err, resabs = _gk15(g, x0, x1)
        # Proportional-to-length local target, with a roundoff floor tied to
        # the integral of |g| on the interval; below that floor the K-G gap
        # is pure floating-point noise and subdividing cannot reduce it.
        target = tol * max(1.0, abs(val)) * (x1 - x0) / (hi - lo)
        floor = max(50.0 * 2.220446049250313e-16, rel_noise) * resabs
        if err <= max(target, floor) or depth >= max_depth:
            if depth >= max_depth and err > tol * max(1.0, abs(val)):
                raise NonConvergenceError(
                    "quadrature stalled on [%g, %g]" % (x0, x1))
            total += val
            bound += err
        else:
            xm = 0.5 * (x0 + x1)
            stack.append((x0, xm, depth + 1))
            stack.append((xm, x1, depth + 1))
    total *= sign
    return (total, bound) if return_bound else total


def finite_diff(f: Callable[[float], float], r: float, order: int = 1,
                h0: Optional[float] = None, levels: int = 4,
                return_error: bool = False):
    """Central finite difference with Richardson extrapolation.

    order 1 or 2; h0 overrides the default stencil scale.  Returns the
    derivative, optionally with an error estimate.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    eps = 2.2e-16
    if h0 is None:
        h0 = (eps ** (1.0 / 3.0) if order == 1 else eps ** 0.25) * max(abs(r), 1.0)
        h0 *= 64.0  # leave room for the halvings below

    def d_estimate(h):
        try:
            if order == 1:
                return (f(r + h) - f(r - h)) / (2.0 * h)
            return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
        except (ValueError, ZeroDivisionError) as exc:
            raise StencilOutOfDomainError(str(exc)) from exc

    table = [[d_estimate(h0 / 2.0 ** i)] for i in range(levels)]
    for j in range(1, levels):
        for i in range(levels - j):
            fac = 4.0 ** j
            table[i].append((fac * table[i + 1][j - 1] - table[i][j - 1])
                            / (fac - 1.0))
    best = table[0][-1]
    err = abs(table[0][-1] - table[1][-2]) if levels > 1 else float("nan")
    return (best, err) if return_error else best
