"""Locally Lipschitz potentials j(t, x) with Clarke subgradient data.

Every model evaluates on node batches: ``t`` has shape (M,) and ``x`` has
shape (M, N). The single-point helpers :func:`eval_j`, :func:`select_subgrad`,
:func:`j0_estimate` and :func:`subgrad_distance` wrap the batch methods.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedPotentialError


@dataclass(frozen=True)
class Growth:
    """Growth metadata: ``|u| <= a1 + c1 |x|^{r-1}``, ``mu j <= -j0(x;-x)`` for ``|x| >= M_thresh``."""

    a1: float
    c1: float
    r: float
    mu: float | None = None
    M_thresh: float = 0.0

    def bound(self, rho):
        return self.a1 + self.c1 * np.asarray(rho, dtype=float) ** (self.r - 1.0)


@dataclass(frozen=True, eq=False)
class SubgradSet:
    """Exact convex subdifferential: a point, segment, ball or scalar interval.

    Parameters
    ----------
    kind : {"point", "segment", "ball", "interval"}
    a : ndarray
        The point, first segment end, ball center, or ``[lo]``.
    b : ndarray, optional
        Second segment end, or ``[hi]`` for intervals.
    radius : float
        Ball radius.
    """

    kind: str
    a: np.ndarray
    b: np.ndarray | None = None
    radius: float = 0.0

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        object.__setattr__(self, "a", a)
        if self.b is not None:
            object.__setattr__(self, "b", np.atleast_1d(np.asarray(self.b, dtype=float)))
        if self.kind not in ("point", "segment", "ball", "interval"):
            raise DomainError(f"unknown set kind {self.kind!r}")
        if self.radius < 0:
            raise DomainError("ball radius must be nonnegative")
        if self.kind == "interval" and self.b[0] < a[0]:
            object.__setattr__(self, "a", self.b)
            object.__setattr__(self, "b", a)

    @classmethod
    def point(cls, u):
        return cls("point", u)

    @classmethod
    def segment(cls, u, v):
        u, v = np.atleast_1d(np.asarray(u, float)), np.atleast_1d(np.asarray(v, float))
        if np.array_equal(u, v):
            return cls("point", u)
        if u.size == 1:
            return cls("interval", u, v)
        return cls("segment", u, v)

    @classmethod
    def ball(cls, center, radius):
        center = np.atleast_1d(np.asarray(center, float))
        if radius == 0:
            return cls("point", center)
        if center.size == 1:
            return cls("interval", center - radius, center + radius)
        return cls("ball", center, radius=float(radius))

    @classmethod
    def interval(cls, lo, hi):
        return cls("interval", [lo], [hi])

    def midpoint(self) -> np.ndarray:
        """Center of the set; unbounded intervals fall back to the point nearest 0."""
        if self.kind in ("point", "ball"):
            return self.a.copy()
        if self.kind == "interval" and not (np.isfinite(self.a[0]) and np.isfinite(self.b[0])):
            return self.project(np.zeros(1))
        return 0.5 * (self.a + self.b)

    def project(self, w) -> np.ndarray:
        """Nearest point of the set to ``w``."""
        w = np.atleast_1d(np.asarray(w, dtype=float))
        if self.kind == "point":
            return self.a.copy()
        if self.kind == "interval":
            return np.clip(w, self.a, self.b)
        if self.kind == "ball":
            d = w - self.a
            n = np.linalg.norm(d)
            return w.copy() if n <= self.radius else self.a + d * (self.radius / n)
        e = self.b - self.a
        s = float(np.clip(np.dot(w - self.a, e) / np.dot(e, e), 0.0, 1.0))
        return self.a + s * e

    def distance(self, w) -> float:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        return float(np.linalg.norm(w - self.project(w)))

    def contains(self, w, tol: float = 1e-12) -> bool:
        return self.distance(w) <= tol

    def support(self, d) -> float:
        """Support function ``max_{u in set} (u, d)``, i.e. the exact j0 in direction ``d``."""
        d = np.atleast_1d(np.asarray(d, dtype=float))
        if self.kind == "point":
            return float(self.a @ d)
        if self.kind == "ball":
            return float(self.a @ d + self.radius * np.linalg.norm(d))
        vals = [float(self.a @ d), float(self.b @ d)]
        if self.kind == "interval" and d[0] == 0.0:
            return 0.0
        return max(vals)

    def lo_hi(self):
        """Scalar extremes ``(min u, max u)``; only for scalar sets."""
        if self.a.size != 1:
            raise DomainError("lo/hi only defined for scalar sets")
        if self.kind == "point":
            return float(self.a[0]), float(self.a[0])
        return float(self.a[0]), float(self.b[0])


class PotentialModel:
    """Base class for potentials. Subclasses implement the batch methods.

    Attributes
    ----------
    name : str
    N : int
        Component dimension of x.
    growth : Growth
    has_descriptor : bool
        Whether :meth:`set_descriptor` gives the exact Clarke set everywhere.
    """

    name = "model"
    N = 1
    growth = Growth(0.0, 0.0, 1.0)
    has_descriptor = False
    params: dict = {}

    def eval(self, t, x):
        raise NotImplementedError

    def subgrad(self, t, x):
        raise NotImplementedError

    def hess(self, t, x):
        """Branch Hessian of j in x, shape (M, N, N); default central differences."""
        x = np.asarray(x, dtype=float)
        M, N = x.shape
        H = np.empty((M, N, N))
        for k in range(N):
            step = 1e-6 * np.maximum(1.0, np.abs(x[:, k]))
            e = np.zeros_like(x)
            e[:, k] = step
            H[:, :, k] = (self.subgrad(t, x + e) - self.subgrad(t, x - e)) / (2 * step[:, None])
        return H

    def kink_mask(self, t, x):
        """Nodes lying exactly on the nonsmooth locus."""
        return np.zeros(np.shape(x)[0], dtype=bool)

    def kink_snap(self, t, x):
        """Nearest kink point per node and its distance (inf when smooth).

        Returns
        -------
        xs : ndarray (M, N)
        dist : ndarray (M,)
        pinnable : ndarray (M,) of bool
            Whether the kink locus is a single point so a node can be fixed on it.
        """
        M = np.shape(x)[0]
        return np.array(x, dtype=float), np.full(M, np.inf), np.zeros(M, dtype=bool)

    def set_descriptor(self, t, x) -> SubgradSet | None:
        """Exact Clarke set at one point, or None when unknown."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.kink_mask(np.atleast_1d(t), x[None, :])[0]:
            return None
        return SubgradSet.point(self.subgrad(np.atleast_1d(t), x[None, :])[0])

    def j0_exact(self, t, x, d):
        """Exact generalized directional derivative when a descriptor exists."""
        s = self.set_descriptor(t, x)
        return None if s is None else s.support(d)

    def project_batch(self, t, x, w):
        """Nodewise nearest point of ``dj(t_i, x_i)`` to ``w_i``."""
        t = np.asarray(t, dtype=float)
        u = self.subgrad(t, x)
        mask = self.kink_mask(t, x)
        for i in np.flatnonzero(mask):
            s = self.set_descriptor(t[i], x[i])
            if s is None:
                raise UnsupportedPotentialError(f"{self.name}: no subdifferential descriptor at a kink")
            u[i] = s.project(w[i])
        return u

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _rownorm(x):
    return np.sqrt(np.einsum("ij,ij->i", x, x))


class RadialModel(PotentialModel):
    """Autonomous potential ``j(x) = f(|x|)`` with kinks on spheres.

    Subclasses define ``f``, ``df``, ``d2f`` (vectorized in rho) and
    ``kinks``: a tuple of ``(radius, left_slope, right_slope)``. A kink at
    radius 0 uses ``left_slope = -right_slope`` and yields a ball.
    """

    kinks: tuple = ()
    has_descriptor = True

    def f(self, rho):
        raise NotImplementedError

    def df(self, rho):
        raise NotImplementedError

    def d2f(self, rho):
        raise NotImplementedError

    def eval(self, t, x):
        return self.f(_rownorm(np.asarray(x, dtype=float)))

    def _kink_at(self, rho):
        """Index into ``kinks`` for nodes exactly on a kink, else -1."""
        idx = np.full(rho.shape, -1)
        for k, (rk, _, _) in enumerate(self.kinks):
            idx[rho == rk] = k
        return idx

    def subgrad(self, t, x):
        x = np.asarray(x, dtype=float)
        rho = _rownorm(x)
        pos = rho > 0
        slope = np.zeros_like(rho)
        slope[pos] = self.df(rho[pos])
        kidx = self._kink_at(rho)
        for k, (rk, sl, sr) in enumerate(self.kinks):
            if rk > 0:
                slope[kidx == k] = 0.5 * (sl + sr)
        u = np.zeros_like(x)
        u[pos] = (slope[pos] / rho[pos])[:, None] * x[pos]
        return u

    def hess(self, t, x):
        x = np.asarray(x, dtype=float)
        M, N = x.shape
        rho = _rownorm(x)
        H = np.zeros((M, N, N))
        eye = np.eye(N)
        pos = rho > 0
        if np.any(pos):
            r = rho[pos]
            xh = x[pos] / r[:, None]
            P = xh[:, :, None] * xh[:, None, :]
            H[pos] = self.d2f(r)[:, None, None] * P + (self.df(r) / r)[:, None, None] * (eye - P)
        if np.any(~pos) and not any(rk == 0 for rk, _, _ in self.kinks):
            H[~pos] = float(self.d2f(np.array([1e-12]))[0]) * eye
        return H

    def kink_mask(self, t, x):
        return self._kink_at(_rownorm(np.asarray(x, dtype=float))) >= 0

    def kink_snap(self, t, x):
        x = np.asarray(x, dtype=float)
        M = x.shape[0]
        rho = _rownorm(x)
        if not self.kinks:
            return x.copy(), np.full(M, np.inf), np.zeros(M, dtype=bool)
        radii = np.array([k[0] for k in self.kinks])
        j = np.argmin(np.abs(rho[:, None] - radii[None, :]), axis=1)
        rk = radii[j]
        dist = np.abs(rho - rk)
        xs = np.zeros_like(x)
        pos = rho > 0
        xs[pos] = x[pos] * (rk[pos] / rho[pos])[:, None]
        if self.N == 1:
            xs[~pos] = rk[~pos, None]
        elif np.any(~pos & (rk > 0)):
            dist[~pos & (rk > 0)] = np.inf
        pinnable = (rk == 0) | (self.N == 1)
        return xs, dist, pinnable

    def set_descriptor(self, t, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        rho = float(np.linalg.norm(x))
        for rk, sl, sr in self.kinks:
            if rho == rk:
                if rk == 0:
                    return SubgradSet.ball(np.zeros(self.N), abs(sr))
                xh = x / rho
                return SubgradSet.segment(sl * xh, sr * xh)
        return SubgradSet.point(self.subgrad(None, x[None, :])[0])


class Thm1Example(RadialModel):
    """``j = -|x|`` inside the unit ball, ``|x|^mu/mu - |x| ln|x| + c`` outside, ``c = -(mu+1)/mu``."""

    def __init__(self, mu=3.0, p=2.0, N=1):
        if not mu > p:
            raise DomainError(f"thm1_example needs mu > p, got mu={mu}, p={p}")
        if not p > 1:
            raise DomainError("p must exceed 1")
        self.mu, self.p, self.N = float(mu), float(p), int(N)
        self.c = -(self.mu + 1.0) / self.mu
        self.name = "thm1_example"
        self.params = {"mu": self.mu, "p": self.p, "N": self.N}
        self.kinks = ((0.0, 1.0, -1.0), (1.0, -1.0, 0.0))
        self.growth = Growth(a1=1.0, c1=1.0, r=self.mu, mu=self.mu, M_thresh=1.0)

    def f(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = -rho.copy()
        o = rho > 1
        r = rho[o]
        out[o] = r ** self.mu / self.mu - r * np.log(r) + self.c
        return out

    def df(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = -np.ones_like(rho)
        o = rho > 1
        r = rho[o]
        out[o] = r ** (self.mu - 1.0) - np.log(r) - 1.0
        return out

    def d2f(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        o = rho > 1
        r = rho[o]
        out[o] = (self.mu - 1.0) * r ** (self.mu - 2.0) - 1.0 / r
        return out

    def neg_j0_minus_x(self, x):
        """Closed form of ``-j0(x; -x)``: ``|x|`` inside, ``|x|^mu - |x|ln|x| - |x|`` outside."""
        rho = _rownorm(np.atleast_2d(x))
        return np.where(rho <= 1, np.where(rho == 1, 0.0, rho), rho ** self.mu - rho * np.log(np.maximum(rho, 1e-300)) - rho)


class Thm2Example(RadialModel):
    """``j = -|x|^p/p`` inside the unit ball, ``|x|^r/r + cos|x| + c`` outside.

    The default ``c = -1/p - 1/r - cos 1`` makes j continuous on ``|x| = 1``;
    ``c = 1/p - 1/r - cos 1`` (``continuous=False``) leaves a jump of ``2/p``
    there. The subdifferential on the unit sphere is ``conv{-x, x - sin(1) x}``.
    """

    def __init__(self, r=2.0, p=3.0, N=1, continuous=True):
        if not (1 <= r < p):
            raise DomainError(f"thm2_example needs 1 <= r < p, got r={r}, p={p}")
        self.r, self.p, self.N = float(r), float(p), int(N)
        sgn = -1.0 if continuous else 1.0
        self.c = sgn / self.p - 1.0 / self.r - math.cos(1.0)
        self.name = "thm2_example"
        self.params = {"r": self.r, "p": self.p, "N": self.N}
        if not continuous:
            self.params["continuous"] = False
        self.kinks = ((1.0, -1.0, 1.0 - math.sin(1.0)),)
        self.growth = Growth(a1=1.0, c1=1.0, r=self.r, mu=None, M_thresh=0.0)

    def f(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = -rho ** self.p / self.p
        o = rho >= 1
        r = rho[o]
        out[o] = r ** self.r / self.r + np.cos(r) + self.c
        return out

    def df(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = -rho ** (self.p - 1.0)
        o = rho > 1
        r = rho[o]
        out[o] = r ** (self.r - 1.0) - np.sin(r)
        return out

    def d2f(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = -(self.p - 1.0) * rho ** (self.p - 2.0)
        o = rho > 1
        r = rho[o]
        out[o] = (self.r - 1.0) * r ** (self.r - 2.0) - np.cos(r)
        return out


class Quartic(RadialModel):
    """``j = |x|^4 / 4``."""

    def __init__(self, N=1):
        self.N = int(N)
        self.name = "quartic"
        self.params = {"N": self.N}
        self.growth = Growth(a1=0.0, c1=1.0, r=4.0, mu=4.0, M_thresh=0.0)

    def f(self, rho):
        return np.asarray(rho, dtype=float) ** 4 / 4.0

    def df(self, rho):
        return np.asarray(rho, dtype=float) ** 3

    def d2f(self, rho):
        return 3.0 * np.asarray(rho, dtype=float) ** 2


class Power(RadialModel):
    """``j = coef |x|^q`` with ``q > 1``."""

    def __init__(self, q=2.0, coef=1.0, N=1):
        if not q > 1:
            raise DomainError("power potential needs q > 1")
        self.q, self.coef, self.N = float(q), float(coef), int(N)
        self.name = "power"
        self.params = {"q": self.q, "coef": self.coef, "N": self.N}
        self.growth = Growth(a1=0.0, c1=abs(self.coef) * self.q, r=self.q, mu=self.q, M_thresh=0.0)

    def f(self, rho):
        return self.coef * np.asarray(rho, dtype=float) ** self.q

    def df(self, rho):
        return self.coef * self.q * np.asarray(rho, dtype=float) ** (self.q - 1.0)

    def d2f(self, rho):
        return self.coef * self.q * (self.q - 1.0) * np.asarray(rho, dtype=float) ** (self.q - 2.0)


class Abs(RadialModel):
    """Scalar ``j = |x|``; the subdifferential at 0 is ``[-1, 1]``."""

    def __init__(self):
        self.N = 1
        self.name = "abs"
        self.params = {}
        self.kinks = ((0.0, -1.0, 1.0),)
        self.growth = Growth(a1=1.0, c1=0.0, r=1.0, mu=None, M_thresh=0.0)

    def f(self, rho):
        return np.asarray(rho, dtype=float).copy()

    def df(self, rho):
        return np.ones_like(np.asarray(rho, dtype=float))

    def d2f(self, rho):
        return np.zeros_like(np.asarray(rho, dtype=float))


class Zero(RadialModel):
    """``j = 0``."""

    def __init__(self, N=1):
        self.N = int(N)
        self.name = "zero"
        self.params = {"N": self.N}
        self.growth = Growth(a1=0.0, c1=0.0, r=1.0, mu=None, M_thresh=0.0)

    def f(self, rho):
        return np.zeros_like(np.asarray(rho, dtype=float))

    df = f
    d2f = f


class LinearForced(PotentialModel):
    """Scalar ``j(t, x) = h(t) x``.

    ``h`` may be a number, a vectorized callable of t, or a :class:`GridFn`
    (looked up at the nearest node).
    """

    has_descriptor = True

    def __init__(self, h=1.0):
        self.N = 1
        self.name = "linear_forced"
        self._h = h
        self.params = {"h": h if isinstance(h, (int, float)) else getattr(h, "__name__", "callable")}
        hmax = self._hmax()
        self.growth = Growth(a1=hmax, c1=0.0, r=1.0, mu=None, M_thresh=0.0)

    def _hmax(self):
        from .grid import GridFn
        h = self._h
        if isinstance(h, (int, float)):
            return abs(float(h))
        if isinstance(h, GridFn):
            return float(np.max(np.abs(h.values)))
        tt = np.linspace(0.0, 100.0, 20001)
        return float(np.max(np.abs(np.broadcast_to(h(tt), tt.shape))))

    def h_at(self, t):
        from .grid import GridFn
        t = np.atleast_1d(np.asarray(t, dtype=float))
        h = self._h
        if isinstance(h, (int, float)):
            return np.full(t.shape, float(h))
        if isinstance(h, GridFn):
            m = h.mesh
            idx = np.rint((t - m.t0) / m.h).astype(int) % m.M
            return h.values[idx, 0]
        return np.broadcast_to(np.asarray(h(t), dtype=float), t.shape).copy()

    def eval(self, t, x):
        return self.h_at(t) * np.asarray(x, dtype=float)[:, 0]

    def subgrad(self, t, x):
        return self.h_at(t)[:, None] * np.ones((np.shape(x)[0], 1))

    def hess(self, t, x):
        return np.zeros((np.shape(x)[0], 1, 1))

    def set_descriptor(self, t, x):
        return SubgradSet.point(self.h_at(t))


def _cbrt_sqrt_max(x):
    # max{x^(1/3), x^(1/2)} for x >= 0, odd cube root for x < 0
    x = np.asarray(x, dtype=float)
    out = np.cbrt(x)
    big = x > 1
    out[big] = np.sqrt(x[big])
    return out


class Prop8Example(PotentialModel):
    """Scalar ``j(x) = max{x^(1/3), x^(1/2)} + ln(1 + |x|) + cos x + |x|``.

    For ``x < 0`` the max reduces to the real cube root. The ``|x|`` term
    makes ``j(x)/x -> 1`` at ``+inf`` and ``-1`` at ``-inf``. Kinks sit at
    ``x = 1`` (switch of the max) and ``x = 0``, where the cube root has an
    infinite slope and j is not Lipschitz; there the descriptor is the
    unbounded interval ``[-2, inf)`` and the selection is 0.
    """

    has_descriptor = True

    def __init__(self):
        self.N = 1
        self.name = "prop8_example"
        self.params = {}
        self.growth = Growth(a1=math.inf, c1=0.0, r=1.0, mu=None, M_thresh=0.0)

    def eval(self, t, x):
        x = np.asarray(x, dtype=float)[:, 0]
        return _cbrt_sqrt_max(x) + np.log1p(np.abs(x)) + np.cos(x) + np.abs(x)

    @staticmethod
    def _dmax(x):
        ax = np.abs(x)
        with np.errstate(divide="ignore"):
            out = np.where(x > 1, 0.5 / np.sqrt(np.maximum(x, 1e-300)), (1.0 / 3.0) * np.maximum(ax, 1e-300) ** (-2.0 / 3.0))
        return out

    def subgrad(self, t, x):
        x = np.asarray(x, dtype=float)[:, 0]
        s = np.sign(x)
        u = self._dmax(x) + s / (1.0 + np.abs(x)) - np.sin(x) + s
        u[x == 1.0] = (5.0 / 12.0) + 0.5 - math.sin(1.0) + 1.0
        u[x == 0.0] = 0.0
        return u[:, None]

    def hess(self, t, x):
        x = np.asarray(x, dtype=float)[:, 0]
        ax = np.maximum(np.abs(x), 1e-300)
        s = np.sign(x)
        d2m = np.where(x > 1, -0.25 * ax ** -1.5, -(2.0 / 9.0) * s * ax ** (-5.0 / 3.0))
        H = d2m - 1.0 / (1.0 + ax) ** 2 - np.cos(x)
        return H[:, None, None]

    def kink_mask(self, t, x):
        x = np.asarray(x, dtype=float)[:, 0]
        return (x == 0.0) | (x == 1.0)

    def kink_snap(self, t, x):
        x = np.asarray(x, dtype=float)
        xs = np.where(np.abs(x - 1.0) < np.abs(x), 1.0, 0.0)
        return xs, np.abs(x - xs)[:, 0], np.ones(x.shape[0], dtype=bool)

    def set_descriptor(self, t, x):
        x = float(np.atleast_1d(x)[0])
        if x == 1.0:
            base = 0.5 - math.sin(1.0) + 1.0
            return SubgradSet.interval(base + 1.0 / 3.0, base + 0.5)
        if x == 0.0:
            return SubgradSet.interval(-2.0, math.inf)
        return SubgradSet.point(self.subgrad(None, np.array([[x]]))[0])


class CallableModel(PotentialModel):
    """User potential from vectorized callables ``eval_fn(t, x)`` and ``subgrad_fn(t, x)``.

    Without ``set_fn`` the model is treated as smooth everywhere.
    """

    def __init__(self, eval_fn, subgrad_fn, N=1, growth=None, name="user", set_fn=None, hess_fn=None):
        self._eval, self._sub, self._set, self._hess = eval_fn, subgrad_fn, set_fn, hess_fn
        self.N, self.name = int(N), name
        self.growth = growth or Growth(0.0, 0.0, 1.0)
        self.has_descriptor = set_fn is not None
        self.params = {}

    def eval(self, t, x):
        return np.asarray(self._eval(t, x), dtype=float)

    def subgrad(self, t, x):
        return np.asarray(self._sub(t, x), dtype=float).reshape(np.shape(x))

    def hess(self, t, x):
        if self._hess is not None:
            return np.asarray(self._hess(t, x), dtype=float)
        return super().hess(t, x)

    def set_descriptor(self, t, x):
        if self._set is not None:
            return self._set(t, x)
        return super().set_descriptor(t, x)


_BUILTINS = {
    "thm1_example": Thm1Example,
    "thm2_example": Thm2Example,
    "prop8_example": Prop8Example,
    "quartic": Quartic,
    "abs": Abs,
    "linear_forced": LinearForced,
    "power": Power,
    "zero": Zero,
}


def builtin(name: str, **params) -> PotentialModel:
    """Construct a built-in potential by name.

    Parameters
    ----------
    name : str
        One of ``thm1_example(mu, p, N)``, ``thm2_example(r, p, N)``,
        ``prop8_example()``, ``quartic(N)``, ``abs()``, ``linear_forced(h)``,
        ``power(q, coef, N)``, ``zero(N)``.
    """
    try:
        cls = _BUILTINS[name]
    except KeyError:
        raise DomainError(f"unknown potential {name!r}; choose from {sorted(_BUILTINS)}") from None
    return cls(**params)


def builtin_names():
    return sorted(_BUILTINS)


# single-point API

def _pt(t, x):
    return np.atleast_1d(np.asarray(t, dtype=float)), np.atleast_1d(np.asarray(x, dtype=float))[None, :]


def eval_j(model: PotentialModel, t, x) -> float:
    tt, xx = _pt(t, x)
    return float(model.eval(tt, xx)[0])


def select_subgrad(model: PotentialModel, t, x) -> np.ndarray:
    tt, xx = _pt(t, x)
    return model.subgrad(tt, xx)[0]


def j0_estimate(model, t, x, dir, scales=(1e-2, 1e-3, 1e-4, 1e-5), n_base=16, radius=1e-4,
                seed=0, return_trace=False):
    """Sampled generalized directional derivative ``j0(t, x; dir)``.

    For each step ``lam`` in ``scales`` the difference quotient
    ``(j(t, x' + lam dir) - j(t, x'))/lam`` is maximized over ``x`` and
    ``n_base`` base points ``x' = x + radius * xi`` with fixed random unit
    vectors ``xi``. The estimate is the maximum at the finest step; the
    coarser maxima are returned as a trend when ``return_trace`` is set.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = np.atleast_1d(np.asarray(dir, dtype=float))
    scales = [float(s) for s in scales]
    if not scales or any(s <= 0 for s in scales):
        raise DomainError("scales must be positive")
    if not np.any(d):
        return (0.0, [0.0] * len(scales)) if return_trace else 0.0
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal((n_base, x.size))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    base = np.vstack([x[None, :], x[None, :] + radius * xi])
    tt = np.full(base.shape[0], float(t))
    j_base = model.eval(tt, base)
    trace = []
    for lam in scales:
        q = (model.eval(tt, base + lam * d[None, :]) - j_base) / lam
        trace.append(float(np.max(q)))
    est = trace[int(np.argmin(scales))]
    return (est, trace) if return_trace else est


def subgrad_distance(model: PotentialModel, t, x, w) -> float:
    """Distance from ``w`` to ``dj(t, x)``; raises on kinks without a descriptor."""
    s = model.set_descriptor(t, np.atleast_1d(np.asarray(x, dtype=float)))
    if s is None:
        raise UnsupportedPotentialError(f"{model.name}: no subdifferential descriptor at x={x}")
    return s.distance(w)


__all__ = [
    "Growth", "SubgradSet", "PotentialModel", "RadialModel", "Thm1Example", "Thm2Example",
    "Quartic", "Power", "Abs", "Zero", "LinearForced", "Prop8Example", "CallableModel",
    "builtin", "builtin_names", "eval_j", "select_subgrad", "j0_estimate", "subgrad_distance",
]
