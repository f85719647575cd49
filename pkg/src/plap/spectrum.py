"""Eigenvalues of the periodic scalar p-Laplacian: closed form and shooting.

The closed form is ``lambda_n = (2 n pi_p / b)^p``. The shooting route
integrates ``x' = sigma^{-1}(y)``, ``y' = -lam |x|^{p-2} x`` from ``(0, 1)``
with fixed-step RK4, measures the return time and root-finds lam so that
``n`` full oscillations fit in ``b``. The two routes share no code.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from . import kernels
from .errors import DomainError, NonConvergenceError


def pi_p(p: float) -> float:
    """``2 (p-1)^{1/p} (pi/p) / sin(pi/p)``; equals pi at p = 2."""
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    return 2.0 * (p - 1.0) ** (1.0 / p) * (math.pi / p) / math.sin(math.pi / p)


def eigenvalue_formula(n: int, p: float, b: float) -> float:
    """``(2 n pi_p / b)^p``; ``n = 0`` gives 0."""
    if n < 0 or int(n) != n:
        raise DomainError("n must be a nonnegative integer")
    if n == 0:
        return 0.0
    return (2.0 * n * pi_p(p) / b) ** p


def return_time(lam: float, p: float, steps: int = 2 ** 14, eps: float = 1e-10) -> float:
    """Period of the orbit through ``(0, 1)`` using ``steps`` RK4 steps per period.

    A coarse pass with step ``0.01 lam^{-1/p}`` estimates the period first.
    """
    dt = 0.01 * lam ** (-1.0 / p)
    T = -1.0
    for _ in range(8):
        T = kernels.rk4_return_time(lam, p, eps, dt, 2_000_000)
        if T > 0:
            break
        dt *= 10.0
    if T <= 0:
        raise NonConvergenceError(f"orbit did not return (lam={lam}, p={p})")
    return kernels.rk4_return_time(lam, p, eps, T / steps, 4 * steps)


def _solve_lambda(target, p, steps, eps, rtol):
    def f(lam):
        return return_time(lam, p, steps, eps) - target

    lo = hi = 1.0
    flo = fhi = f(1.0)
    k = 0
    while flo < 0:
        lo /= 2.0
        flo = f(lo)
        k += 1
        if k > 200:
            raise NonConvergenceError("no lower bracket for the shooting root")
    while fhi > 0:
        hi *= 2.0
        fhi = f(hi)
        k += 1
        if k > 200:
            raise NonConvergenceError("no upper bracket for the shooting root")
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-300, rtol=max(rtol, 4.5e-16), maxiter=500)


def shooting_eigenvalue(n: int, p: float, b: float, tol: float = 1e-9, eps: float = 1e-10,
                        steps: int = 2 ** 14, max_doublings: int = 6) -> float:
    """Eigenvalue ``lam`` whose eigenfunction has minimal period ``b / n``.

    The step count per period starts at ``steps`` and doubles until the
    root changes by less than ``tol / 10`` (relative).
    """
    if n < 1 or int(n) != n:
        raise DomainError("shooting needs n >= 1")
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if tol < 1e-10:
        raise DomainError("tol must be at least 1e-10")
    target = b / n
    lam = _solve_lambda(target, p, steps, eps, tol / 10)
    for _ in range(max_doublings):
        steps *= 2
        new = _solve_lambda(target, p, steps, eps, tol / 10)
        if abs(new - lam) <= 0.1 * tol * abs(new):
            return new
        lam = new
    raise NonConvergenceError(f"shooting did not settle within {max_doublings} step doublings", best=lam)


@dataclass
class SpectrumResult:
    """Formula and shooting eigenvalues side by side."""

    p: float
    b: float
    rows: list = field(default_factory=list)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("n,lambda_formula,lambda_shooting,rel_err\n")
        for r in self.rows:
            buf.write(f"{r['n']},{r['lambda_formula']!r},{r['lambda_shooting']!r},{r['rel_err']!r}\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def max_rel_err(self) -> float:
        return max((r["rel_err"] for r in self.rows), default=0.0)


def verify_table(p: float, b: float, n_max: int, tol: float = 1e-9) -> SpectrumResult:
    """Rows ``n = 0..n_max`` comparing both routes.

    Raises
    ------
    NonConvergenceError
        If a relative error exceeds 1e-6 or the ladder is not increasing.
    """
    if n_max > 8 or n_max < 0:
        raise DomainError("n_max must lie in 0..8")
    res = SpectrumResult(float(p), float(b))
    for n in range(n_max + 1):
        lf = eigenvalue_formula(n, p, b)
        ls = 0.0 if n == 0 else shooting_eigenvalue(n, p, b, tol)
        rel = abs(lf - ls) / max(lf, 1e-300)
        res.rows.append({"n": n, "lambda_formula": lf, "lambda_shooting": ls, "rel_err": rel})
    lam = [r["lambda_formula"] for r in res.rows]
    if any(v < 0 for v in lam) or any(b2 <= a for a, b2 in zip(lam, lam[1:])):
        raise NonConvergenceError("eigenvalue ladder is not nonnegative and increasing", best=res)
    if res.max_rel_err() > 1e-6:
        raise NonConvergenceError(f"shooting disagrees with the closed form (max rel err {res.max_rel_err():.2e})", best=res)
    return res


__all__ = ["pi_p", "eigenvalue_formula", "return_time", "shooting_eigenvalue", "SpectrumResult", "verify_table"]
