"""Uniform periodic meshes and nodal functions on them.

A :class:`Mesh` stores ``M`` nodes ``t_i = t0 + i h`` with ``h = b/M``; the
node ``t0 + b`` is identified with ``t0`` and never stored.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MeshMismatchError


@dataclass(frozen=True)
class Mesh:
    """Uniform periodic mesh on ``[t0, t0 + b)``.

    Parameters
    ----------
    b : float
        Period length.
    M : int
        Node count, at least 8.
    t0 : float, optional
        Left end of the period cell. Windows ``[-nb, nb]`` use ``t0 = -nb``.
    """

    b: float
    M: int
    t0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"period must be positive, got b={self.b}")
        if int(self.M) != self.M or self.M < 8:
            raise DomainError(f"node count must be an integer >= 8, got M={self.M}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def h(self) -> float:
        return self.b / self.M

    @property
    def nodes(self) -> np.ndarray:
        return self.t0 + np.arange(self.M) * self.h

    @property
    def omega(self) -> float:
        """Base angular frequency ``2 pi / b``."""
        return 2.0 * math.pi / self.b

    def same_as(self, other: "Mesh") -> bool:
        return self.M == other.M and self.b == other.b and self.t0 == other.t0


def make_mesh(b: float, M: int, t0: float = 0.0) -> Mesh:
    """Build a uniform periodic mesh; raises :class:`DomainError` on bad input."""
    return Mesh(b, M, t0)


@dataclass(frozen=True, eq=False)
class GridFn:
    """An R^N-valued function sampled on a mesh; ``values[i]`` is ``x(t_i)``."""

    mesh: Mesh
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.mesh.M or v.shape[1] < 1:
            raise DomainError(f"values must have shape ({self.mesh.M}, N), got {np.shape(self.values)}")
        if not np.all(np.isfinite(v)):
            raise DomainError("grid function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.shape[1]

    @property
    def t(self) -> np.ndarray:
        return self.mesh.nodes

    @classmethod
    def from_callable(cls, mesh: Mesh, f, N: int | None = None) -> "GridFn":
        """Sample ``f(t)`` on the mesh nodes; ``f`` may return shape (M,) or (M, N)."""
        v = np.asarray(f(mesh.nodes), dtype=np.float64)
        if v.ndim == 0:
            v = np.full((mesh.M, N or 1), float(v))
        return cls(mesh, v)

    @classmethod
    def constant(cls, mesh: Mesh, value) -> "GridFn":
        value = np.atleast_1d(np.asarray(value, dtype=np.float64))
        return cls(mesh, np.tile(value, (mesh.M, 1)))

    @classmethod
    def zeros(cls, mesh: Mesh, N: int = 1) -> "GridFn":
        return cls(mesh, np.zeros((mesh.M, N)))

    def _check(self, other: "GridFn"):
        if not self.mesh.same_as(other.mesh) or self.N != other.N:
            raise MeshMismatchError("grid functions live on different meshes or dimensions")

    def __add__(self, other):
        if isinstance(other, GridFn):
            self._check(other)
            return GridFn(self.mesh, self.values + other.values)
        return GridFn(self.mesh, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFn):
            self._check(other)
            return GridFn(self.mesh, self.values - other.values)
        return GridFn(self.mesh, self.values - other)

    def __neg__(self):
        return GridFn(self.mesh, -self.values)

    def __mul__(self, alpha):
        if isinstance(alpha, GridFn):
            raise TypeError("pointwise products of grid functions are not supported")
        return GridFn(self.mesh, self.values * float(alpha))

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def to_csv(self, path=None) -> str:
        """Write ``t,x1,...,xN`` rows with round-trip float formatting."""
        buf = io.StringIO()
        buf.write(",".join(["t"] + [f"x{k + 1}" for k in range(self.N)]) + "\n")
        for ti, row in zip(self.t, self.values):
            buf.write(",".join(repr(float(v)) for v in (ti, *row)) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path, b: float | None = None) -> "GridFn":
        """Read a CSV written by :meth:`to_csv`.

        The period defaults to ``M * (t_1 - t_0)``, which is exact for files
        produced by :meth:`to_csv` up to rounding; pass ``b`` to pin it.
        """
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        t = data[:, 0]
        M = data.shape[0]
        if b is None:
            b = float(M * (t[-1] - t[0]) / (M - 1))
        return cls(Mesh(b, M, float(t[0])), data[:, 1:])


def diff(x: GridFn) -> GridFn:
    """Periodic forward difference ``(x_{i+1 mod M} - x_i)/h``."""
    v = x.values
    return GridFn(x.mesh, (np.roll(v, -1, axis=0) - v) / x.mesh.h)


def _check_p(p):
    if not p > 1:
        raise DomainError(f"exponent must exceed 1, got p={p}")


def lp_norm(x: GridFn, p: float) -> float:
    """Rectangle-rule norm ``(sum_i |x_i|^p h)^{1/p}``."""
    _check_p(p)
    r = np.linalg.norm(x.values, axis=1)
    return float(np.sum(r ** p) * x.mesh.h) ** (1.0 / p)


def w1p_norm(x: GridFn, p: float) -> float:
    """Discrete Sobolev norm ``(|x|_p^p + |x'|_p^p)^{1/p}``."""
    _check_p(p)
    return (lp_norm(x, p) ** p + lp_norm(diff(x), p) ** p) ** (1.0 / p)


def inner(x: GridFn, y: GridFn) -> float:
    """Discrete L2 inner product ``sum_i (x_i, y_i) h``."""
    x._check(y)
    return float(np.sum(x.values * y.values) * x.mesh.h)


def mean_zero_project(x: GridFn):
    """Split ``x`` into its mean vector and the zero-mean remainder."""
    mean = x.values.mean(axis=0)
    return mean, GridFn(x.mesh, x.values - mean)


def _check_modes(M: int, modes) -> list[int]:
    if M % 2:
        raise DomainError("Fourier projections need an even node count")
    ks = sorted({int(k) for k in modes})
    if any(k < 0 for k in ks):
        raise DomainError("mode indices must be nonnegative")
    if ks and ks[-1] > M // 2 - 1:
        raise DomainError(f"mode {ks[-1]} aliases on a mesh with M={M} (max {M // 2 - 1})")
    return ks


def fourier_project(x: GridFn, mode_set) -> GridFn:
    """Orthogonal projection onto ``span{sin k w t, cos k w t : k in mode_set}``.

    Parameters
    ----------
    x : GridFn
        Scalar grid function on a mesh with even ``M``.
    mode_set : iterable of int
        Mode indices ``0 <= k <= M/2 - 1``.
    """
    if x.N != 1:
        raise DomainError("Fourier projections act on scalar grid functions")
    ks = _check_modes(x.mesh.M, mode_set)
    c = np.fft.rfft(x.values[:, 0])
    keep = np.zeros(c.shape, dtype=bool)
    keep[ks] = True
    c[~keep] = 0.0
    return GridFn(x.mesh, np.fft.irfft(c, n=x.mesh.M))


def poincare_constant(mesh: Mesh) -> float:
    """Sharp discrete Poincare-Wirtinger constant for p = 2.

    For zero-mean ``v`` one has ``|v|_2 <= C |diff v|_2`` with
    ``C = 1/sqrt(mu_1)`` and ``mu_1 = (2 - 2 cos(w h))/h^2`` the lowest nonzero
    eigenvalue of the periodic difference Laplacian.
    """
    h = mesh.h
    mu1 = (2.0 - 2.0 * math.cos(mesh.omega * h)) / h ** 2
    return 1.0 / math.sqrt(mu1)


__all__ = [
    "Mesh", "GridFn", "make_mesh", "diff", "lp_norm", "w1p_norm", "inner",
    "mean_zero_project", "fourier_project", "poincare_constant",
]
