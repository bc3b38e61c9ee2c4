"""Special functions required by the closed-form conserved vectors.

Incomplete elliptic integrals of the first (F) and third (Pi) kind in the
sin-amplitude convention, the Jacobi elliptic sine, and the sine/cosine
integrals.  Evaluation uses Carlson symmetric forms and AGM iteration
rather than quadrature; the quadrature route lives in `lrlvec.oracle` and
serves only as an independent check.
"""

from dataclasses import dataclass
from typing import Optional

from .backend import kernels


class SpecFunDomainError(ValueError):
    """Argument outside the documented domain of a special function."""


class SpecFunPoleError(SpecFunDomainError):
    """Evaluation requested at a non-integrable pole."""


@dataclass(frozen=True)
class EllipticArgs:
    """Argument bundle for F and Pi.

    sin_phi: amplitude sine, |sin_phi| <= 1.
    kappa:   elliptic modulus in [0, 1]; kappa = 1 is handled by
             logarithmic closed forms.
    xi:      elliptic characteristic (Pi only); may be large negative.
    """

    sin_phi: float
    kappa: float
    xi: Optional[float] = None

    def __post_init__(self):
        if abs(self.sin_phi) > 1.0:
            raise SpecFunDomainError("|sin_phi| > 1")
        if not 0.0 <= self.kappa <= 1.0:
            raise SpecFunDomainError("kappa outside [0, 1]")
        if self.xi is not None and self.xi * self.sin_phi ** 2 >= 1.0:
            raise SpecFunPoleError("xi * sin_phi^2 >= 1 hits the Pi pole")


def ellip_f(args: EllipticArgs) -> float:
    """First-kind incomplete elliptic integral F(sin phi, kappa)."""
    try:
        return kernels.ellip_f_kernel(args.sin_phi, args.kappa)
    except ValueError as exc:
        raise SpecFunDomainError(str(exc)) from exc


def ellip_pi(args: EllipticArgs) -> float:
    """Third-kind incomplete elliptic integral Pi(sin phi, xi, kappa)."""
    xi = 0.0 if args.xi is None else args.xi
    try:
        return kernels.ellip_pi_kernel(args.sin_phi, xi, args.kappa)
    except ValueError as exc:
        if "pole" in str(exc):
            raise SpecFunPoleError(str(exc)) from exc
        raise SpecFunDomainError(str(exc)) from exc


def jacobi_sn(u: float, kappa: float) -> float:
    """Jacobi elliptic sine sn(u, kappa); inverts F in its first quarter
    period: sn(F(s, kappa), kappa) = s."""
    if not 0.0 <= kappa <= 1.0:
        raise SpecFunDomainError("kappa outside [0, 1]")
    return kernels.jacobi_sn_kernel(u, kappa)


def jacobi_am(u: float, kappa: float) -> float:
    """Jacobi amplitude am(u, kappa)."""
    if not 0.0 <= kappa <= 1.0:
        raise SpecFunDomainError("kappa outside [0, 1]")
    return kernels.jacobi_am_kernel(u, kappa)


def sine_integral(x: float) -> float:
    """Si(x); odd, tends to pi/2 as x -> +inf."""
    return kernels.si_kernel(x)


def cosine_integral(x: float) -> float:
    """Ci(x) for x > 0; diverges logarithmically at the origin."""
    if x <= 0.0:
        raise SpecFunDomainError("cosine_integral requires x > 0")
    return kernels.ci_kernel(x)


def sici_auxiliary(x: float) -> tuple:
    """Auxiliary pair (f, g): Si(x) = pi/2 - f(x) cos x - g(x) sin x,
    Ci(x) = f(x) sin x - g(x) cos x.  Full relative precision at large x."""
    if x <= 0.0:
        raise SpecFunDomainError("sici_auxiliary requires x > 0")
    return kernels.sici_aux_kernel(x)


# Convenience float-argument wrappers used by the orbit engine's hot paths.

def ellip_f_sk(s: float, kappa: float) -> float:
    try:
        return kernels.ellip_f_kernel(s, kappa)
    except ValueError as exc:
        raise SpecFunDomainError(str(exc)) from exc


def ellip_pi_sk(s: float, xi: float, kappa: float) -> float:
    try:
        return kernels.ellip_pi_kernel(s, xi, kappa)
    except ValueError as exc:
        if "pole" in str(exc):
            raise SpecFunPoleError(str(exc)) from exc
        raise SpecFunDomainError(str(exc)) from exc
