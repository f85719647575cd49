"""Discrete energies, gradient representatives and residuals.

All five variants share one assembly on a periodic mesh: rectangle-rule
quadrature and forward differences, so the gradient representative is the
exact gradient of the discrete energy divided by ``h``.

=========  ===============================================================
variant    energy
=========  ===============================================================
Base       ``1/p |x'|_p^p + 1/p int g |x|^p - int j(t, x)``
Eigen      as Base with ``-lam int j``
Window     as Base on a window mesh ``[-nb, nb]``
Scalar     ``1/p |x'|_p^p - int j`` (N = 1)
Resonant   ``1/2 |x'|_2^2 - lam_m/2 |x|_2^2 - int j + int h x`` (p = 2, N = 1)
=========  ===============================================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import DomainError, MeshMismatchError
from .grid import GridFn, Mesh
from .potential import PotentialModel

VARIANTS = ("Base", "Eigen", "Window", "Scalar", "Resonant")


@dataclass(frozen=True)
class ProblemSpec:
    """Which energy is assembled and with which data.

    Parameters
    ----------
    variant : str
        One of ``Base``, ``Eigen``, ``Window``, ``Scalar``, ``Resonant``.
    p : float
        Exponent of the p-Laplacian.
    g : float, callable, GridFn or ndarray
        Coefficient of the zero-order term (Base, Eigen, Window).
    c_lower : float, optional
        Lower bound ``g >= c_lower > 0``; defaults to the sampled minimum.
    lam : float
        Weight of the potential in the Eigen variant.
    m : int
        Resonant mode index.
    forcing : float, callable, GridFn or None
        ``h(t)`` in the Resonant variant.
    n : int
        Window index; the window mesh covers ``[-n b, n b]``.
    eps_reg : float
        Regularization of ``|x'|^{p-2}``.
    """

    variant: str = "Base"
    p: float = 2.0
    g: Any = 1.0
    c_lower: float | None = None
    lam: float = 1.0
    m: int = 0
    forcing: Any = None
    n: int = 1
    eps_reg: float = 1e-10

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}")
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if self.variant == "Resonant" and self.p != 2:
            raise DomainError("the Resonant variant needs p = 2")
        if self.m < 0 or self.n < 1:
            raise DomainError("need m >= 0 and n >= 1")
        if not self.eps_reg > 0:
            raise DomainError("eps_reg must be positive")

    @property
    def potential_weight(self) -> float:
        return float(self.lam) if self.variant == "Eigen" else 1.0

    def replace(self, **kw) -> "ProblemSpec":
        from dataclasses import replace
        return replace(self, **kw)


def window_mesh(b: float, n: int, M_base: int) -> Mesh:
    """Mesh on ``[-n b, n b]`` with ``n * M_base`` nodes (fixed spacing ``2b/M_base``)."""
    return Mesh(2.0 * n * b, n * M_base, -n * b)


def _sample(f, mesh: Mesh, name: str) -> np.ndarray:
    if f is None:
        return np.zeros(mesh.M)
    if isinstance(f, GridFn):
        if not f.mesh.same_as(mesh):
            raise MeshMismatchError(f"{name} lives on a different mesh")
        return f.values[:, 0].copy()
    if isinstance(f, np.ndarray):
        if f.shape[0] != mesh.M:
            raise MeshMismatchError(f"{name} has {f.shape[0]} samples, mesh has {mesh.M}")
        return np.asarray(f, dtype=float).reshape(mesh.M).copy()
    if callable(f):
        return np.broadcast_to(np.asarray(f(mesh.nodes), dtype=float), (mesh.M,)).copy()
    return np.full(mesh.M, float(f))


def discrete_lambda(m: int, mesh: Mesh) -> float:
    """Discrete eigenvalue ``(2 - 2 cos(m w h))/h^2`` of ``-x''`` on mode m.

    Tends to ``m^2 w^2`` as ``h -> 0``; using it makes the quadratic form
    vanish exactly on the resonant modes of the grid.
    """
    h = mesh.h
    return (2.0 - 2.0 * math.cos(m * mesh.omega * h)) / h ** 2


class Assembler:
    """Energy, gradient and Jacobian of one variant on a fixed mesh.

    Works on raw ``(M, N)`` arrays; the public functions wrap it for GridFns.
    """

    def __init__(self, spec: ProblemSpec, model: PotentialModel, mesh: Mesh, N: int | None = None):
        self.spec, self.model, self.mesh = spec, model, mesh
        self.N = int(N if N is not None else model.N)
        if self.N != model.N:
            raise MeshMismatchError(f"x has N={self.N} components, potential expects {model.N}")
        if spec.variant in ("Scalar", "Resonant") and self.N != 1:
            raise DomainError(f"{spec.variant} variant is scalar (N = 1)")
        self.t = mesh.nodes
        self.h = mesh.h
        self.p = float(spec.p)
        self.w = spec.potential_weight
        v = spec.variant
        if v in ("Base", "Eigen", "Window"):
            self.g = _sample(spec.g, mesh, "g")
            self._check_g()
        else:
            self.g = np.zeros(mesh.M)
        if v == "Resonant":
            self.lam_m = discrete_lambda(spec.m, mesh)
            self.hf = _sample(spec.forcing, mesh, "forcing")
        else:
            self.lam_m = 0.0
            self.hf = None
        self.has_zero_order = bool(np.any(self.g))

    def _check_g(self):
        spec, g = self.spec, self.g
        if spec.variant in ("Base", "Window"):
            c = spec.c_lower if spec.c_lower is not None else float(np.min(g))
            if not (c > 0 and np.min(g) >= c - 1e-14):
                raise DomainError(f"coefficient g must satisfy g >= c > 0 (min g = {np.min(g):.3g})")
        if callable(spec.g) and not isinstance(spec.g, GridFn):
            m = self.mesh
            per = m.b if spec.variant != "Window" else m.b / spec.n
            a = np.asarray(spec.g(np.array([m.t0, m.t0 + per])), dtype=float).ravel()
            if a.size == 2 and abs(a[0] - a[1]) > 1e-10:
                kind = "2b-periodic" if spec.variant == "Window" else "periodic"
                raise DomainError(f"coefficient g must be {kind}")

    # energy -------------------------------------------------------------
    def energy(self, X) -> float:
        X = np.asarray(X, dtype=float)
        h, p = self.h, self.p
        e, _ = kernels.plap_term(X, h, p, self.spec.eps_reg)
        r2 = np.einsum("ij,ij->i", X, X)
        if self.has_zero_order:
            e += float(np.sum(self.g * r2 ** (0.5 * p))) * h / p
        if self.hf is not None:
            e += -0.5 * self.lam_m * float(np.sum(r2)) * h + float(np.sum(self.hf * X[:, 0])) * h
        if self.w != 0.0:
            e -= self.w * float(np.sum(self.model.eval(self.t, X))) * h
        return e

    def smooth_grad(self, X, eps=None) -> np.ndarray:
        """Gradient of every term except the potential."""
        X = np.asarray(X, dtype=float)
        p = self.p
        eps = self.spec.eps_reg if eps is None else eps
        if eps == 0.0:
            G = self._plap_grad_unreg(X)
        else:
            _, G = kernels.plap_term(X, self.h, p, eps)
        if self.has_zero_order:
            r = np.sqrt(np.einsum("ij,ij->i", X, X))
            with np.errstate(divide="ignore", invalid="ignore"):
                fac = np.where(r > 0, r ** (p - 2.0), 0.0)
            G = G + (self.g * fac)[:, None] * X
        if self.hf is not None:
            G = G - self.lam_m * X + self.hf[:, None]
        return G

    def _plap_grad_unreg(self, X):
        p = self.p
        d = (np.roll(X, -1, axis=0) - X) / self.h
        r = np.sqrt(np.einsum("ij,ij->i", d, d))
        with np.errstate(divide="ignore", invalid="ignore"):
            fac = np.where(r > 0, r ** (p - 2.0), 0.0)
        F = fac[:, None] * d
        return -(F - np.roll(F, 1, axis=0)) / self.h

    def grad(self, X) -> np.ndarray:
        """Gradient representative with the midpoint selection at kinks."""
        G = self.smooth_grad(X)
        if self.w != 0.0:
            G = G - self.w * self.model.subgrad(self.t, X)
        return G

    def min_grad(self, X, S=None) -> np.ndarray:
        """Gradient representative with the nodewise minimal-norm selection."""
        S = self.smooth_grad(X) if S is None else S
        if self.w == 0.0:
            return S
        U = self.model.project_batch(self.t, X, S / self.w)
        return S - self.w * U

    def residual(self, X) -> float:
        G = self.min_grad(X)
        return float(np.sqrt(np.sum(G * G) * self.h))

    # batches of states (K, M, N) ----------------------------------------
    def energy_many(self, P) -> np.ndarray:
        """Energies of a stack of states, shape (K,)."""
        P = np.asarray(P, dtype=float)
        K, M, N = P.shape
        h, p, eps = self.h, self.p, self.spec.eps_reg
        d = (np.roll(P, -1, axis=1) - P) / h
        s = np.einsum("kij,kij->ki", d, d) + eps * eps
        e = np.sum(s ** (0.5 * p) - eps ** p, axis=1) * h / p
        r2 = np.einsum("kij,kij->ki", P, P)
        if self.has_zero_order:
            e = e + np.sum(self.g[None] * r2 ** (0.5 * p), axis=1) * h / p
        if self.hf is not None:
            e = e - 0.5 * self.lam_m * np.sum(r2, axis=1) * h + np.sum(self.hf[None] * P[:, :, 0], axis=1) * h
        if self.w != 0.0:
            jv = self.model.eval(np.tile(self.t, K), P.reshape(K * M, N)).reshape(K, M)
            e = e - self.w * np.sum(jv, axis=1) * h
        return e

    def min_grad_many(self, P) -> np.ndarray:
        """Minimal-norm gradient representatives of a stack of states."""
        P = np.asarray(P, dtype=float)
        K, M, N = P.shape
        h, p, eps = self.h, self.p, self.spec.eps_reg
        d = (np.roll(P, -1, axis=1) - P) / h
        s = np.einsum("kij,kij->ki", d, d) + eps * eps
        F = (s ** (0.5 * (p - 2.0)))[:, :, None] * d
        G = -(F - np.roll(F, 1, axis=1)) / h
        if self.has_zero_order:
            r = np.sqrt(np.einsum("kij,kij->ki", P, P))
            with np.errstate(divide="ignore", invalid="ignore"):
                fac = np.where(r > 0, r ** (p - 2.0), 0.0)
            G = G + (self.g[None] * fac)[:, :, None] * P
        if self.hf is not None:
            G = G - self.lam_m * P + self.hf[None, :, None]
        if self.w != 0.0:
            tt = np.tile(self.t, K)
            U = self.model.project_batch(tt, P.reshape(K * M, N), G.reshape(K * M, N) / self.w)
            G = G - self.w * U.reshape(K, M, N)
        return G

    # Jacobian -----------------------------------------------------------
    def jacobian(self, X, H=None) -> sp.csr_matrix:
        """Sparse Jacobian of :meth:`grad` using branch Hessians of j."""
        X = np.asarray(X, dtype=float)
        M, N = X.shape
        h, p, eps = self.h, self.p, self.spec.eps_reg
        d = (np.roll(X, -1, axis=0) - X) / h
        s = np.einsum("ij,ij->i", d, d) + eps * eps
        eye = np.eye(N)
        B = (s ** (0.5 * (p - 2.0)))[:, None, None] * (eye[None] + (p - 2.0) * d[:, :, None] * d[:, None, :] / s[:, None, None])
        Bm = np.roll(B, 1, axis=0)
        diag = (B + Bm) / h ** 2
        if self.has_zero_order:
            r2 = np.einsum("ij,ij->i", X, X) + 1e-16
            Z = (r2 ** (0.5 * (p - 2.0)))[:, None, None] * (eye[None] + (p - 2.0) * X[:, :, None] * X[:, None, :] / r2[:, None, None])
            diag = diag + self.g[:, None, None] * Z
        if self.hf is not None:
            diag = diag - self.lam_m * eye[None]
        if self.w != 0.0:
            Hj = self.model.hess(self.t, X) if H is None else H
            diag = diag - self.w * Hj
        upper = -B / h ** 2
        lower = -Bm / h ** 2
        idx = np.arange(M)
        rows, cols, vals = [], [], []
        for blocks, shift in ((diag, 0), (upper, 1), (lower, -1)):
            cj = (idx + shift) % M
            for a in range(N):
                for c in range(N):
                    rows.append(idx * N + a)
                    cols.append(cj * N + c)
                    vals.append(blocks[:, a, c])
        J = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(M * N, M * N))
        return J.tocsr()

    # preconditioner ------------------------------------------------------
    def sobolev_solve(self, G, shift=1.0) -> np.ndarray:
        """Apply ``(shift I - Delta_h)^{-1}`` along the node axis via FFT.

        ``G`` has shape (M, N) or (K, M, N).
        """
        ax = G.ndim - 2
        M = G.shape[ax]
        k = np.arange(M // 2 + 1)
        sym = shift + (2.0 - 2.0 * np.cos(2.0 * np.pi * k / M)) / self.h ** 2
        sym = sym.reshape((-1, 1) if ax == 0 else (1, -1, 1))
        return np.fft.irfft(np.fft.rfft(G, axis=ax) / sym, n=M, axis=ax)


def _assembler(spec, model, x: GridFn) -> Assembler:
    if spec.variant == "Window":
        want = 2.0 * spec.n
        if x.mesh.t0 >= 0 or abs(-2.0 * x.mesh.t0 - x.mesh.b) > 1e-9 * x.mesh.b:
            raise MeshMismatchError(f"Window variant needs a mesh on [-nb, nb], got t0={x.mesh.t0}, b={x.mesh.b} (n={spec.n}, {want}b)")
    return Assembler(spec, model, x.mesh, x.N)


def energy(spec: ProblemSpec, model: PotentialModel, x: GridFn) -> float:
    """Discrete energy of the variant at ``x``."""
    return _assembler(spec, model, x).energy(x.values)


def gradient_selection(spec: ProblemSpec, model: PotentialModel, x: GridFn) -> GridFn:
    """Gradient representative ``(1/h) dE/dx_i`` with the midpoint kink selection."""
    return GridFn(x.mesh, _assembler(spec, model, x).grad(x.values))


def residual_weak(spec: ProblemSpec, model: PotentialModel, x: GridFn) -> float:
    """``h^{1/2}`` times the Euclidean norm of the minimal-norm gradient representative."""
    return _assembler(spec, model, x).residual(x.values)


@dataclass(frozen=True)
class StrongResidual:
    """Pointwise residuals of the strong form.

    ``inclusion_dist`` uses the unregularized p-Laplacian stencil and
    ``inclusion_dist_reg`` the regularized one; ``node`` is the worst node.
    """

    inclusion_dist: float
    inclusion_dist_reg: float
    bc_primal: float
    bc_deriv: float
    node: int = 0

    def as_dict(self):
        return {"inclusion_dist": self.inclusion_dist, "inclusion_dist_reg": self.inclusion_dist_reg,
                "bc_primal": self.bc_primal, "bc_deriv": self.bc_deriv, "node": self.node}


def _inclusion(asm: Assembler, X, S) -> np.ndarray:
    w = asm.w
    if w == 0.0:
        return np.linalg.norm(S, axis=1)
    U = asm.model.project_batch(asm.t, X, S / w)
    return np.linalg.norm(S - w * U, axis=1)


def residual_strong(spec: ProblemSpec, model: PotentialModel, x: GridFn) -> StrongResidual:
    """Distance of the discrete strong-form left side to the (weighted) subdifferential.

    At node i the left side ``w_i = -(|x'|^{p-2} x')'_i + g_i |x_i|^{p-2} x_i``
    (plus the variant terms) must lie in ``weight * dj(t_i, x_i)``. Raises
    :class:`UnsupportedPotentialError` when a kink node has no descriptor.
    """
    asm = _assembler(spec, model, x)
    X = x.values
    d_un = _inclusion(asm, X, asm.smooth_grad(X, eps=0.0))
    d_re = _inclusion(asm, X, asm.smooth_grad(X))
    h = x.mesh.h
    bc_deriv = float(np.linalg.norm((X[1] - X[0]) / h - (X[0] - X[-1]) / h))
    i = int(np.argmax(d_un))
    return StrongResidual(float(d_un[i]), float(np.max(d_re)), 0.0, bc_deriv, i)


__all__ = [
    "VARIANTS", "ProblemSpec", "Assembler", "StrongResidual", "window_mesh", "discrete_lambda",
    "energy", "gradient_selection", "residual_weak", "residual_strong",
]
