"""Hot kernels with a compiled backend and a numpy / pure-Python fallback.

The compiled module ``plap._kernels`` is used when it imports; setting
``PLAP_PURE_PYTHON=1`` forces the fallback. ``BACKEND`` names the choice.
"""
from __future__ import annotations

import math
import os

import numpy as np


def plap_term_py(x, h, p, eps):
    """Regularized p-Laplacian energy and gradient representative (numpy).

    Parameters
    ----------
    x : ndarray, shape (M, N)
        Nodal values on a uniform periodic grid.
    h : float
        Grid spacing.
    p : float
        Exponent, ``p > 1``.
    eps : float
        Regularization of ``|x'|^{p-2}``.

    Returns
    -------
    E : float
        ``sum_i h/p ((|d_i|^2 + eps^2)^{p/2} - eps^p)`` with forward differences ``d``.
    G : ndarray, shape (M, N)
        ``(1/h) dE/dx_i = -(F_i - F_{i-1})/h`` with ``F = (|d|^2+eps^2)^{(p-2)/2} d``.
    """
    d = (np.roll(x, -1, axis=0) - x) / h
    s = np.einsum("ij,ij->i", d, d) + eps * eps
    e = float(np.sum(s ** (0.5 * p) - eps ** p)) * h / p
    F = (s ** (0.5 * (p - 2.0)))[:, None] * d
    G = -(F - np.roll(F, 1, axis=0)) / h
    return e, G


def _hermite_root(x0, v0, x1, v1, dt):
    a, b = 0.0, 1.0
    for _ in range(60):
        s = 0.5 * (a + b)
        f = ((1 + 2 * s) * (1 - s) ** 2 * x0 + s * (1 - s) ** 2 * dt * v0
             + s * s * (3 - 2 * s) * x1 + s * s * (s - 1) * dt * v1)
        if f < 0.0:
            a = s
        else:
            b = s
    return 0.5 * (a + b) * dt


def rk4_return_time_py(lam, p, eps, dt, max_steps):
    """Pure-Python twin of the compiled RK4 return-time integrator."""
    q = p / (p - 1.0)
    e2 = eps * eps

    def sig_inv(y):
        return (y * y + e2) ** (0.5 * (q - 2.0)) * y

    def force(x):
        if x == 0.0:
            return 0.0
        return -lam * math.copysign(abs(x) ** (p - 1.0), x)

    x, y = 0.0, 1.0
    left = False
    for n in range(int(max_steps)):
        k1x, k1y = sig_inv(y), force(x)
        k2x, k2y = sig_inv(y + 0.5 * dt * k1y), force(x + 0.5 * dt * k1x)
        k3x, k3y = sig_inv(y + 0.5 * dt * k2y), force(x + 0.5 * dt * k2x)
        k4x, k4y = sig_inv(y + dt * k3y), force(x + dt * k3x)
        xn = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        yn = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        if xn < 0.0:
            left = True
        if left and x < 0.0 <= xn:
            return n * dt + _hermite_root(x, sig_inv(y), xn, sig_inv(yn), dt)
        x, y = xn, yn
    return -1.0


def _load():
    if os.environ.get("PLAP_PURE_PYTHON", "") not in ("", "0"):
        return None
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


_ext = _load()

if _ext is not None:
    BACKEND = "compiled"

    def plap_term(x, h, p, eps):
        return _ext.plap_term(np.ascontiguousarray(x, dtype=np.float64), float(h), float(p), float(eps))

    def rk4_return_time(lam, p, eps, dt, max_steps):
        return _ext.rk4_return_time(float(lam), float(p), float(eps), float(dt), int(max_steps))
else:
    BACKEND = "python"
    plap_term = plap_term_py
    rk4_return_time = rk4_return_time_py

plap_term.__doc__ = plap_term_py.__doc__

__all__ = ["BACKEND", "plap_term", "plap_term_py", "rk4_return_time", "rk4_return_time_py"]
