"""Compiled and pure-Python kernel backends expose identical behavior."""

import math
import os
import subprocess
import sys

import pytest

from lrlvec import backend
from lrlvec import _kernels_py as kp

cy = backend.available_backends().get("cython")
needs_cython = pytest.mark.skipif(cy is None,
                                  reason="compiled backend not built")


def _grid(lo, hi, n):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


@needs_cython
def test_backend_names():
    assert kp.BACKEND_NAME == "python"
    assert cy.BACKEND_NAME == "cython"
    assert backend.BACKEND_NAME in ("python", "cython")


@needs_cython
def test_carlson_parity():
    for x in (0.0, 0.1, 1.0, 7.0):
        for y in (0.2, 1.5):
            for z in (0.4, 3.0):
                assert cy.carlson_rf(x, y, z) == pytest.approx(
                    kp.carlson_rf(x, y, z), rel=5e-16)
    for x in (0.0, 0.5, 2.0):
        for y in (0.3, 1.7):
            assert cy.carlson_rc(x, y) == pytest.approx(
                kp.carlson_rc(x, y), rel=5e-16)
    for p in (0.2, 1.0, 6.0):
        assert cy.carlson_rj(0.1, 0.7, 2.0, p) == pytest.approx(
            kp.carlson_rj(0.1, 0.7, 2.0, p), rel=5e-15)


@needs_cython
def test_elliptic_parity():
    worst = 0.0
    for s in _grid(-0.99, 0.99, 21):
        for kappa in _grid(0.0, 0.99, 11):
            a = kp.ellip_f_kernel(s, kappa)
            b = cy.ellip_f_kernel(s, kappa)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
            for xi in (-3.0, 0.5):
                if xi * s * s < 1.0:
                    a = kp.ellip_pi_kernel(s, xi, kappa)
                    b = cy.ellip_pi_kernel(s, xi, kappa)
                    worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    assert worst < 1e-14


@needs_cython
def test_jacobi_parity():
    worst = 0.0
    for u in _grid(-9.0, 9.0, 25):
        for kappa in (0.0, 0.3, 0.9, 0.999, 1.0):
            a = kp.jacobi_am_kernel(u, kappa)
            b = cy.jacobi_am_kernel(u, kappa)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
            assert cy.jacobi_sn_kernel(u, kappa) == pytest.approx(
                kp.jacobi_sn_kernel(u, kappa), abs=2e-15)
    assert worst < 1e-14


@needs_cython
def test_sici_parity():
    for x in _grid(0.01, 60.0, 40) + [3.999999, 4.000001]:
        assert cy.si_kernel(x) == pytest.approx(kp.si_kernel(x), abs=1e-15)
        assert cy.ci_kernel(x) == pytest.approx(kp.ci_kernel(x), abs=1e-15)
        fa, ga = kp.sici_aux_kernel(x)
        fb, gb = cy.sici_aux_kernel(x)
        assert fb == pytest.approx(fa, rel=1e-13, abs=1e-18)
        assert gb == pytest.approx(ga, rel=1e-13, abs=1e-18)
    assert cy.si_kernel(-5.0) == kp.si_kernel(-5.0)


@needs_cython
def test_error_behavior_parity():
    for fn, args in [("carlson_rf", (-1.0, 1.0, 1.0)),
                     ("carlson_rc", (1.0, -1.0)),
                     ("carlson_rj", (1.0, 1.0, 1.0, -0.5)),
                     ("ellip_f_kernel", (1.5, 0.5)),
                     ("ellip_pi_kernel", (0.9, 2.0, 0.5)),
                     ("jacobi_am_kernel", (1.0, 2.0)),
                     ("ci_kernel", (-1.0,)),
                     ("sici_aux_kernel", (0.0,))]:
        with pytest.raises(ValueError):
            getattr(kp, fn)(*args)
        with pytest.raises(ValueError):
            getattr(cy, fn)(*args)


def test_pure_python_override_env(tmp_path):
    code = ("import lrlvec.backend as b; "
            "print(b.BACKEND_NAME)")
    env = dict(os.environ, LRLVEC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
