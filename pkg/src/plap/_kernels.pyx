# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: the regularized p-Laplacian term and the RK4 return time."""
import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs, sqrt

cnp.import_array()


def plap_term(const double[:, ::1] x, double h, double p, double eps):
    """Energy and gradient representative of the regularized p-Laplacian term.

    Returns ``(E, G)`` with ``E = sum_i h/p ((|d_i|^2+eps^2)^{p/2} - eps^p)``
    and ``G_i = -(F_i - F_{i-1})/h``, ``F = (|d|^2+eps^2)^{(p-2)/2} d``.
    """
    cdef Py_ssize_t M = x.shape[0], N = x.shape[1]
    cdef Py_ssize_t i, k, ip
    cdef double s, w, e = 0.0, epsp = pow(eps, p), dk
    G_arr = np.zeros((M, N), dtype=np.float64)
    F_arr = np.empty((M, N), dtype=np.float64)
    cdef double[:, ::1] G = G_arr
    cdef double[:, ::1] F = F_arr
    for i in range(M):
        ip = i + 1
        if ip == M:
            ip = 0
        s = eps * eps
        for k in range(N):
            dk = (x[ip, k] - x[i, k]) / h
            F[i, k] = dk
            s += dk * dk
        e += pow(s, 0.5 * p) - epsp
        w = pow(s, 0.5 * (p - 2.0))
        for k in range(N):
            F[i, k] *= w
    for i in range(M):
        ip = i - 1 if i > 0 else M - 1
        for k in range(N):
            G[i, k] = -(F[i, k] - F[ip, k]) / h
    return e * h / p, G_arr


cdef inline double _sig_inv(double y, double q, double eps) nogil:
    return pow(y * y + eps * eps, 0.5 * (q - 2.0)) * y


cdef inline double _force(double x, double lam, double p) nogil:
    if x == 0.0:
        return 0.0
    return -lam * pow(fabs(x), p - 2.0) * x


cdef double _hermite_root(double x0, double v0, double x1, double v1, double dt) nogil:
    # root of the cubic Hermite interpolant on [0, dt], sign change x0 < 0 <= x1
    cdef double a = 0.0, b = 1.0, s, h00, h10, h01, h11, f
    cdef int it
    for it in range(60):
        s = 0.5 * (a + b)
        h00 = (1 + 2 * s) * (1 - s) * (1 - s)
        h10 = s * (1 - s) * (1 - s)
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        f = h00 * x0 + h10 * dt * v0 + h01 * x1 + h11 * dt * v1
        if f < 0.0:
            a = s
        else:
            b = s
    return 0.5 * (a + b) * dt


def rk4_return_time(double lam, double p, double eps, double dt, long max_steps):
    """First time the orbit from ``(x, y) = (0, 1)`` returns upward through x = 0.

    Returns ``-1.0`` when no return happens within ``max_steps``.
    """
    cdef double q = p / (p - 1.0)
    cdef double x = 0.0, y = 1.0, xn, yn
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y
    cdef long n
    cdef bint left = False
    cdef double result = -1.0
    with nogil:
        for n in range(max_steps):
            k1x = _sig_inv(y, q, eps)
            k1y = _force(x, lam, p)
            k2x = _sig_inv(y + 0.5 * dt * k1y, q, eps)
            k2y = _force(x + 0.5 * dt * k1x, lam, p)
            k3x = _sig_inv(y + 0.5 * dt * k2y, q, eps)
            k3y = _force(x + 0.5 * dt * k2x, lam, p)
            k4x = _sig_inv(y + dt * k3y, q, eps)
            k4y = _force(x + dt * k3x, lam, p)
            xn = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
            yn = y + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
            if xn < 0.0:
                left = True
            if left and x < 0.0 and xn >= 0.0:
                result = n * dt + _hermite_root(x, _sig_inv(y, q, eps), xn, _sig_inv(yn, q, eps), dt)
                break
            x = xn
            y = yn
    return result
