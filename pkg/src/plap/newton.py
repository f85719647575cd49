"""Active-set Newton polish for piecewise smooth critical-point equations.

Nodes on a point-like kink (the origin, or any kink when N = 1) can be
*active*: pinned to the kink, with the multiplier ``S_i / w`` required to lie
in the Clarke set there. Free nodes follow Newton steps on their smooth
branch. A step that would carry a free node across a kink is cut at the
first crossing and that node is pinned; an active node whose multiplier
leaves its set is released to the side where the linearized equation has a
root.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .energy import Assembler


@dataclass
class PolishResult:
    x: np.ndarray
    residual: float
    converged: bool
    iterations: int
    active: np.ndarray


def _crossing(x0, x1, xs, dist, pinnable, N):
    """Fraction of the step at which a node first meets its nearest kink, or inf."""
    if N == 1:
        a, b, k = x0[:, 0], x1[:, 0], xs[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (k - a) / (b - a)
        hit = pinnable & np.isfinite(dist) & (s > 0) & (s <= 1) & ((a - k) * (b - k) <= 0)
        return np.where(hit, s, np.inf)
    # origin kinks in N > 1: pass closest to 0 along the segment
    d = x1 - x0
    dd = np.einsum("ij,ij->i", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = -np.einsum("ij,ij->i", x0, d) / dd
    closest = np.linalg.norm(x0 + np.clip(s, 0, 1)[:, None] * d, axis=1)
    at_origin = pinnable & (np.linalg.norm(xs, axis=1) == 0)
    scale = np.maximum(np.linalg.norm(x0, axis=1), 1e-300)
    hit = at_origin & (s > 0) & (s <= 1) & (closest <= 1e-6 * scale)
    return np.where(hit, s, np.inf)


def _solve(J, rhs):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            dx = spla.spsolve(J.tocsc(), rhs)
            if np.all(np.isfinite(dx)):
                return dx
        except Exception:
            pass
    # damped normal equations as fallback
    JT = J.T.tocsr()
    A = (JT @ J).tocsc()
    mu = 1e-10 * max(1.0, abs(A.diagonal()).max())
    dx = spla.spsolve(A + mu * sp.identity(A.shape[0], format="csc"), JT @ rhs)
    return np.where(np.isfinite(dx), dx, 0.0)


def _release(asm: Assembler, X, i, S_i, xk):
    """New position for an active node whose multiplier is infeasible, or None."""
    N = asm.N
    w = asm.w
    t = asm.t[i:i + 1]
    scale = max(1.0, float(np.linalg.norm(xk)))
    tau = 1e-9 * scale
    if N == 1:
        dirs = [np.array([1.0]), np.array([-1.0])]
    else:
        n = float(np.linalg.norm(S_i))
        if n == 0:
            return None
        dirs = [S_i / n, -S_i / n]
    best = None
    for e in dirs:
        probe = X.copy()
        probe[i] = xk + tau * e
        Sp = asm.smooth_grad(probe)[i]
        gp = asm.model.subgrad(t, probe[i:i + 1])[0]
        Gp = Sp - w * gp
        Hj = asm.model.hess(t, probe[i:i + 1])[0]
        # diagonal block of the Jacobian along e
        J = asm.jacobian(probe, H=None)
        blk = J[i * N:(i + 1) * N, i * N:(i + 1) * N].toarray()
        D = float(e @ blk @ e)
        del Hj
        if D == 0:
            continue
        delta = -float(e @ Gp) / D
        if delta > 0 and (best is None or delta < best[0]):
            best = (delta, e)
    if best is None:
        return None
    delta, e = best
    return xk + max(delta, 2 * tau) * e


def polish(asm: Assembler, X0, tol: float = 1e-6, max_iter: int = 100, snap_tol: float = 1e-9,
           callback=None) -> PolishResult:
    """Drive the minimal-norm residual of ``asm`` to ``tol`` from ``X0``."""
    X = np.array(X0, dtype=float, copy=True)
    M, N = X.shape
    h = asm.h
    w = asm.w
    active = np.zeros(M, dtype=bool)
    if w != 0.0:
        xs, dist, pin = asm.model.kink_snap(asm.t, X)
        near = pin & (dist <= snap_tol * np.maximum(1.0, np.linalg.norm(X, axis=1)))
        X[near] = xs[near]
        active |= near
    res = np.inf
    stall = 0
    for it in range(max_iter):
        S = asm.smooth_grad(X)
        G = asm.min_grad(X, S) if w != 0.0 else S
        res = float(np.sqrt(np.sum(G * G) * h))
        if callback is not None:
            callback(it, X, res)
        if res <= tol:
            return PolishResult(X, res, True, it, active)
        # release active nodes whose multiplier left the set
        gnorm = np.linalg.norm(G, axis=1)
        rel_thresh = max(1e-12, 1e-3 * tol / np.sqrt(max(h * M, 1e-300)))
        released = False
        for i in np.flatnonzero(active & (gnorm > rel_thresh)):
            new = _release(asm, X, i, S[i], X[i].copy())
            if new is not None:
                X[i] = new
                active[i] = False
                released = True
        if released:
            continue
        free = ~active
        if not np.any(free):
            break
        Gb = asm.grad(X)
        J = asm.jacobian(X)
        idx = (np.flatnonzero(free)[:, None] * N + np.arange(N)[None, :]).ravel()
        Jf = J[idx][:, idx]
        dx = np.zeros(M * N)
        dx[idx] = _solve(Jf, -Gb.ravel()[idx])
        D = dx.reshape(M, N)
        if not np.any(D):
            break
        cap = 10.0 * (1.0 + float(np.max(np.abs(X))))
        big = float(np.max(np.abs(D)))
        if big > cap:
            D *= cap / big
        # first kink crossing among free nodes
        X1 = X + D
        alpha, hit = 1.0, -1
        if w != 0.0:
            xs, dist, pin = asm.model.kink_snap(asm.t, X)
            xs1, _, pin1 = asm.model.kink_snap(asm.t, X1)
            s = np.full(M, np.inf)
            for cand, pinc in ((xs, pin), (xs1, pin1)):
                dc = np.linalg.norm(X - cand, axis=1)
                s = np.minimum(s, _crossing(X, X1, cand, np.where(np.isfinite(dist), dc, np.inf), pinc, N))
            s[active] = np.inf
            if np.isfinite(s).any():
                hit = int(np.argmin(s))
                alpha = float(s[hit])
        # backtracking on the residual merit
        accepted = False
        a = alpha
        for _ in range(30):
            Xt = X + a * D
            if hit >= 0 and a == alpha:
                xs1, _, _ = asm.model.kink_snap(asm.t[hit:hit + 1], Xt[hit:hit + 1])
                Xt[hit] = xs1[0]
            at = active.copy()
            if hit >= 0 and a == alpha:
                at[hit] = True
            Gt = asm.min_grad(Xt) if w != 0.0 else asm.smooth_grad(Xt)
            rt = float(np.sqrt(np.sum(Gt * Gt) * h))
            if rt < res * (1 - 1e-4 * a) or (hit >= 0 and a == alpha and rt <= res * 1.5):
                X, active = Xt, at
                accepted = True
                break
            a *= 0.5
        if not accepted:
            stall += 1
            X = X + a * D
            if stall > 3:
                break
        else:
            stall = 0
    S = asm.smooth_grad(X)
    G = asm.min_grad(X, S) if w != 0.0 else S
    res = float(np.sqrt(np.sum(G * G) * h))
    return PolishResult(X, res, res <= tol, max_iter, active)


__all__ = ["PolishResult", "polish"]
