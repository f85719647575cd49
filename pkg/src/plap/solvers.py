"""Critical-point solvers: descent, mountain pass, saddle search, lambda sweep.

Every solver ends with the active-set Newton polish of :mod:`plap.newton`
and reports a :class:`CriticalPoint` only when the weak residual meets
``tol_residual``; otherwise :class:`NonConvergenceError` carries the best
iterate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .energy import Assembler, ProblemSpec, StrongResidual, residual_strong
from .errors import DomainError, GeometryError, NoDescentDirectionError, NonConvergenceError
from .grid import GridFn, Mesh, fourier_project, w1p_norm
from .newton import polish
from .potential import PotentialModel


@dataclass(frozen=True)
class SolveOptions:
    """Solver controls; a fixed ``seed`` makes every run bitwise reproducible."""

    tol_residual: float = 1e-6
    max_iter: int = 20000
    path_points: int = 64
    deform_step: float = 1e-2
    rho: float = 0.1
    seed: int = 0
    rim_samples: int = 8
    rim_iter: int = 300
    polish_every: int = 25
    newton_iter: int = 100
    eta0: float = 0.5
    polish_switch: float = 1e-2

    def __post_init__(self):
        for k in ("tol_residual", "deform_step", "rho", "eta0", "polish_switch"):
            if not getattr(self, k) > 0:
                raise DomainError(f"{k} must be positive")
        for k in ("max_iter", "rim_samples", "rim_iter", "polish_every", "newton_iter"):
            if getattr(self, k) < 1:
                raise DomainError(f"{k} must be at least 1")
        if self.path_points < 16:
            raise DomainError("path_points must be at least 16")

    def as_dict(self):
        return asdict(self)


@dataclass
class CriticalPoint:
    """A computed critical point and its certificates."""

    x: GridFn
    energy: float
    residual_weak: float
    residual_strong: StrongResidual
    kind: str
    rim: dict | None = None
    level: float | None = None
    iterations: int = 0
    history: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "energy": self.energy,
            "residual_weak": self.residual_weak,
            "residual_strong": self.residual_strong.as_dict(),
            "rim": self.rim,
            "level": self.level,
            "iterations": self.iterations,
            "sup_norm": self.x.sup_norm(),
        }


def _finish(spec, model, asm, X, kind, iterations, **extra) -> CriticalPoint:
    x = GridFn(asm.mesh, X)
    return CriticalPoint(x, asm.energy(X), asm.residual(X), residual_strong(spec, model, x), kind,
                         iterations=iterations, **extra)


def _dot(asm, A, B):
    return float(np.sum(A * B) * asm.h)


def _smooth_random(rng, mesh: Mesh, N: int, modes: int = 4) -> np.ndarray:
    t = (mesh.nodes - mesh.t0) * mesh.omega
    X = np.tile(rng.standard_normal(N), (mesh.M, 1))
    for k in range(1, modes + 1):
        a, b = rng.standard_normal((2, N)) / k
        X += np.cos(k * t)[:, None] * a + np.sin(k * t)[:, None] * b
    return X


# ---------------------------------------------------------------- minimize

def _descend(asm: Assembler, X, opts: SolveOptions, max_iter=None):
    """Preconditioned descent with Armijo backtracking and periodic Newton polish."""
    E = asm.energy(X)
    alpha = 1.0
    tol = opts.tol_residual
    max_iter = opts.max_iter if max_iter is None else max_iter
    for k in range(max_iter):
        G = asm.min_grad(X)
        r = float(np.sqrt(np.sum(G * G) * asm.h))
        if r <= tol:
            return X, E, k, True
        if k % opts.polish_every == opts.polish_every - 1:
            pr = polish(asm, X, tol, opts.newton_iter)
            if pr.converged:
                Ep = asm.energy(pr.x)
                if Ep <= E + 1e-12 * (1 + abs(E)):
                    return pr.x, Ep, k, True
        D = -asm.sobolev_solve(G)
        slope = _dot(asm, G, D)
        if slope >= 0:
            break
        alpha = min(alpha * 2.0, 1e6)
        while alpha > 1e-18:
            Xt = X + alpha * D
            Et = asm.energy(Xt)
            if Et <= E + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        else:
            break
        X, E = Xt, Et
    pr = polish(asm, X, tol, opts.newton_iter)
    if pr.converged and asm.energy(pr.x) <= E + 1e-12 * (1 + abs(E)):
        return pr.x, asm.energy(pr.x), max_iter, True
    return X, E, max_iter, False


def minimize(spec: ProblemSpec, model: PotentialModel, x0: GridFn, opts: SolveOptions = SolveOptions()) -> CriticalPoint:
    """Descend from ``x0`` to a critical point with ``energy <= energy(x0)``."""
    asm = Assembler(spec, model, x0.mesh, x0.N)
    X, E, it, ok = _descend(asm, x0.values.copy(), opts)
    if not ok:
        raise NonConvergenceError("minimize: iteration budget exhausted", best=GridFn(asm.mesh, X),
                                  diagnostics={"residual": asm.residual(X), "energy": E})
    return _finish(spec, model, asm, X, "minimizer", it)


def perturbed_zero(mesh: Mesh, N: int, seed: int, scale: float = 1e-3) -> GridFn:
    """Fixed pseudo-random smooth perturbation of 0."""
    rng = np.random.default_rng(seed)
    return GridFn(mesh, scale * _smooth_random(rng, mesh, N))


# ------------------------------------------------------------ rim estimate

def _w1p(X, h, p):
    d = (np.roll(X, -1, axis=0) - X) / h
    r = np.sqrt(np.einsum("ij,ij->i", X, X))
    rd = np.sqrt(np.einsum("ij,ij->i", d, d))
    return float((np.sum(r ** p) * h + np.sum(rd ** p) * h) ** (1.0 / p))


def rim_estimate(spec: ProblemSpec, model: PotentialModel, rho: float, samples: int,
                 opts: SolveOptions = SolveOptions(), mesh: Mesh | None = None, N: int | None = None) -> float:
    """Least energy found on the sphere ``|x|_{W^{1,p}} = rho`` (an upper bound for its infimum).

    Projected descent from ``samples`` seeded smooth random starts.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    if mesh is None:
        raise DomainError("rim_estimate needs a mesh")
    asm = Assembler(spec, model, mesh, N)
    p, h = spec.p, mesh.h
    rng = np.random.default_rng(opts.seed)
    best = math.inf

    def proj(X):
        n = _w1p(X, h, p)
        return X * (rho / n)

    for _ in range(samples):
        X = proj(_smooth_random(rng, mesh, asm.N))
        E = asm.energy(X)
        alpha = 1.0
        for _ in range(opts.rim_iter):
            D = -asm.sobolev_solve(asm.min_grad(X))
            # drop the radial component in the L2 sense
            D -= X * (_dot(asm, D, X) / max(_dot(asm, X, X), 1e-300))
            if not np.any(D):
                break
            alpha = min(alpha * 2.0, 1e3)
            improved = False
            while alpha > 1e-14:
                Xt = proj(X + alpha * D)
                Et = asm.energy(Xt)
                if Et < E:
                    improved = True
                    break
                alpha *= 0.5
            if not improved:
                break
            if E - Et <= 1e-13 * (1 + abs(E)):
                X, E = Xt, Et
                break
            X, E = Xt, Et
        best = min(best, E)
    return float(best)


# ---------------------------------------------------------- far endpoint

def find_far_endpoint(spec: ProblemSpec, model: PotentialModel, direction: GridFn,
                      opts: SolveOptions = SolveOptions()) -> dict:
    """Double ``lam`` until ``energy(lam d) < -1`` and ``|lam d| > rho``."""
    if not np.any(direction.values):
        raise DomainError("direction must be nonzero")
    asm = Assembler(spec, model, direction.mesh, direction.N)
    lam = 1.0
    for _ in range(61):
        X = lam * direction.values
        if asm.energy(X) < min(0.0, -1.0) and _w1p(X, asm.h, spec.p) > opts.rho:
            return {"lambda_scale": lam, "e": GridFn(direction.mesh, X)}
        lam *= 2.0
    raise NoDescentDirectionError("energy stayed above -1 along the ray; superlinear growth of j not detected")


# ----------------------------------------------------------- mountain pass

def _reparametrize(path, h):
    """Redistribute path nodes at equal arc length (discrete H1 metric)."""
    K = path.shape[0]
    dif = np.diff(path, axis=0)
    dd = (np.roll(dif, -1, axis=1) - dif) / h
    seg = np.sqrt((np.sum(dif * dif, axis=(1, 2)) + np.sum(dd * dd, axis=(1, 2))) * h)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] <= 0:
        return path
    target = np.linspace(0.0, s[-1], K)
    out = np.empty_like(path)
    j = np.clip(np.searchsorted(s, target, side="right") - 1, 0, K - 2)
    w = np.where(seg[j] > 0, (target - s[j]) / np.where(seg[j] > 0, seg[j], 1.0), 0.0)
    out[:] = (1 - w)[:, None, None] * path[j] + w[:, None, None] * path[j + 1]
    out[0], out[-1] = path[0], path[-1]
    return out


def _peak_guess(path, energies, k):
    """Interpolated state at the vertex of the parabola through the three nodes around k."""
    if k <= 0 or k >= len(energies) - 1:
        return path[k]
    e0, e1, e2 = energies[k - 1], energies[k], energies[k + 1]
    den = e0 - 2 * e1 + e2
    if den >= 0:
        return path[k]
    s = float(np.clip(0.5 * (e0 - e2) / den, -1.0, 1.0))
    if s >= 0:
        return (1 - s) * path[k] + s * path[k + 1]
    return (1 + s) * path[k] + (-s) * path[k - 1]


def mountain_pass(spec: ProblemSpec, model: PotentialModel, endpoint: GridFn,
                  opts: SolveOptions = SolveOptions(), rim: float | None = None,
                  start_path: np.ndarray | None = None) -> CriticalPoint:
    """Mountain-pass critical point between 0 and ``endpoint`` by path deformation.

    The path has ``opts.path_points`` nodes, starts as the straight segment,
    flows along the preconditioned negative gradient with backtracking that
    keeps the path maximum nonincreasing, and is re-equidistributed after
    every step. The highest node is periodically polished by Newton.

    Raises
    ------
    GeometryError
        If ``energy(0) > 0``, ``|endpoint| <= rho``, ``energy(endpoint)`` is
        not below the rim estimate, or the path collapses toward 0.
    NonConvergenceError
        If the budget runs out; ``diagnostics`` holds the path-max history.
    """
    mesh = endpoint.mesh
    asm = Assembler(spec, model, mesh, endpoint.N)
    tol = opts.tol_residual
    h, p = asm.h, spec.p
    Z = np.zeros_like(endpoint.values)
    E0 = asm.energy(Z)
    if E0 > 0:
        raise GeometryError(f"energy(0) = {E0} > 0")
    Xe = endpoint.values.copy()
    ne = _w1p(Xe, h, p)
    if not ne > opts.rho:
        raise GeometryError(f"endpoint norm {ne:.3g} does not exceed rho = {opts.rho}")
    xi = rim_estimate(spec, model, opts.rho, opts.rim_samples, opts, mesh, endpoint.N) if rim is None else rim
    Ee = asm.energy(Xe)
    if not Ee < xi:
        raise GeometryError(f"endpoint energy {Ee:.6g} is not below the rim estimate {xi:.6g}")
    K = opts.path_points
    if start_path is None:
        s = np.linspace(0.0, 1.0, K)
        path = s[:, None, None] * Xe[None]
    else:
        path = np.array(start_path, dtype=float)
        K = path.shape[0]
    en = asm.energy_many(path)
    history = [float(en[1:-1].max())]
    alpha = opts.deform_step
    rim_info = {"rho": opts.rho, "xi": xi}
    tried = []

    def try_polish(k):
        for cand in (_peak_guess(path, en, k), path[k]):
            pr = polish(asm, cand, tol, opts.newton_iter)
            if not pr.converged:
                continue
            Ec = asm.energy(pr.x)
            sup = float(np.max(np.linalg.norm(pr.x, axis=1)))
            tried.append((Ec, sup))
            if sup >= 1e-3 and Ec >= xi - tol:
                return pr.x
        return None

    stalled = 0
    last_polish = -opts.polish_every
    for it in range(opts.max_iter):
        k = int(np.argmax(en[1:-1])) + 1
        if _w1p(path[k], h, p) < 1e-3 * ne:
            raise GeometryError("path collapsed toward 0")
        G = asm.min_grad_many(path)
        rk = float(np.sqrt(np.sum(G[k] ** 2) * h))
        n_hist = len(history)
        stagnant = (n_hist > opts.polish_every
                    and history[-opts.polish_every] - history[-1] <= 1e-7 * (1 + abs(history[-1])))
        if rk <= opts.polish_switch or stalled or (stagnant and it - last_polish >= opts.polish_every):
            last_polish = it
            Xc = try_polish(k)
            if Xc is not None:
                return _finish(spec, model, asm, Xc, "mountain_pass", it, rim=rim_info,
                               level=asm.energy(Xc), history={"path_max": history, "path": path})
            if stalled > 3:
                break
        D = -asm.sobolev_solve(G)
        D[0] = 0.0
        D[-1] = 0.0
        cur = en[1:-1].max()
        alpha = min(alpha * 1.5, 1.0)
        accepted = False
        while alpha > 1e-14:
            trial = _reparametrize(path + alpha * D, h)
            with np.errstate(all="ignore"):
                et = asm.energy_many(trial)
            top = et[1:-1].max()
            # any continuous path from 0 to the endpoint crosses the rim, so a
            # node maximum below it means the discrete path lost resolution
            if np.isfinite(top) and xi - tol <= top <= cur + 1e-12 * (1 + abs(cur)):
                path, en = trial, et
                accepted = True
                break
            alpha *= 0.5
        if accepted:
            stalled = 0
            history.append(float(en[1:-1].max()))
        else:
            stalled += 1
            alpha = opts.deform_step
    raise NonConvergenceError("mountain pass: no critical point certified", best=GridFn(mesh, path[int(np.argmax(en))]),
                              diagnostics={"path_max": history, "polish_attempts": tried})


# ----------------------------------------------------------- saddle search

@dataclass(frozen=True)
class MeanZero:
    """Split ``R + V``: maximize over constants, minimize over zero-mean functions."""


@dataclass(frozen=True)
class FourierUpTo:
    """Split ``H1 + H2``: maximize over modes ``0..m``, minimize over modes ``> m``."""

    m: int


def _ascent_projector(split, mesh):
    if isinstance(split, MeanZero):
        return lambda X: np.broadcast_to(X.mean(axis=0), X.shape).copy()
    if isinstance(split, FourierUpTo):
        modes = range(split.m + 1)
        return lambda X: fourier_project(GridFn(mesh, X), modes).values.copy()
    raise DomainError(f"unknown split {split!r}")


def saddle_search(spec: ProblemSpec, model: PotentialModel, split, opts: SolveOptions = SolveOptions(),
                  mesh: Mesh | None = None, x0: GridFn | None = None) -> CriticalPoint:
    """Saddle point over a splitting by extragradient with steps ``eta0/sqrt(k)``.

    Ascent acts on the finite block (constants, or modes ``0..m``) and
    descent on its complement; the step direction is the preconditioned
    gradient. The iterate is periodically polished by Newton.
    """
    if isinstance(split, MeanZero) and spec.variant != "Scalar":
        raise DomainError("the MeanZero split pairs with the Scalar variant")
    if isinstance(split, FourierUpTo):
        if spec.variant != "Resonant" or spec.p != 2:
            raise DomainError("the FourierUpTo split needs the Resonant variant with p = 2")
    if mesh is None:
        mesh = x0.mesh if x0 is not None else None
    if mesh is None:
        raise DomainError("saddle_search needs a mesh or a start point")
    asm = Assembler(spec, model, mesh, 1)
    Pa = _ascent_projector(split, mesh)
    tol = opts.tol_residual
    signatures = coercivity_signatures(asm, Pa, opts.seed)
    if not signatures["anticoercive"] or not signatures["coercive"]:
        warnings.warn(f"saddle geometry not confirmed by sampling: {signatures}", RuntimeWarning, stacklevel=2)
    X = perturbed_zero(mesh, 1, opts.seed).values if x0 is None else x0.values.copy()

    def direction(Y):
        D = asm.sobolev_solve(asm.min_grad(Y))
        A = Pa(D)
        return A - (D - A)

    bound = None
    for k in range(1, opts.max_iter + 1):
        if (k - 1) % opts.polish_every == 0:
            pr = polish(asm, X, tol, opts.newton_iter)
            if pr.converged:
                return _finish(spec, model, asm, pr.x, "saddle", k, history={"signatures": signatures})
        eta = opts.eta0 / math.sqrt(k)
        Xh = X + eta * direction(X)
        X = X + eta * direction(Xh)
        na = float(np.max(np.abs(Pa(X))))
        bound = na if bound is None else bound
        if not np.all(np.isfinite(X)) or na > 1e8 * max(1.0, bound):
            raise GeometryError("anticoercivity not detected: the ascent block diverged")
    raise NonConvergenceError("saddle search: iteration budget exhausted", best=GridFn(mesh, X),
                              diagnostics={"residual": asm.residual(X), "signatures": signatures})


def coercivity_signatures(asm: Assembler, Pa, seed: int = 0, scales=(1e1, 1e2, 1e3, 1e4)) -> dict:
    """Sample the energy along random rays in both blocks.

    ``anticoercive``: energy decreases along every sampled ascent-block ray as
    the scale grows. ``coercive``: it increases along every descent-block ray.
    """
    rng = np.random.default_rng(seed + 7919)
    anti, coer = True, True
    rates = []
    for _ in range(4):
        Y = _smooth_random(rng, asm.mesh, asm.N, modes=6)
        A = Pa(Y)
        B = Y - A
        A /= max(np.max(np.abs(A)), 1e-300)
        B /= max(np.max(np.abs(B)), 1e-300)
        ea = [asm.energy(s * A) for s in scales]
        eb = [asm.energy(s * B) for s in scales]
        anti &= all(b2 < a for a, b2 in zip(ea, ea[1:]))
        coer &= all(b2 > a for a, b2 in zip(eb, eb[1:]))
        nb = _dot(asm, B, B) + _dot(asm, *(2 * [(np.roll(B, -1, 0) - B) / asm.h]))
        rates.append(eb[-1] / (scales[-1] ** 2 * nb))
    return {"anticoercive": bool(anti), "coercive": bool(coer), "descent_rate": float(min(rates))}


# ------------------------------------------------------------- lambda sweep

def positive_direction(spec, model, mesh: Mesh, N: int, radii=None) -> np.ndarray | None:
    """A constant state ``y`` with ``int j(t, y) dt > 0``, scanning growing radii."""
    t = mesh.nodes
    radii = np.geomspace(0.5, 1e3, 60) if radii is None else radii
    e = np.zeros(N)
    e[0] = 1.0
    for r in radii:
        for sgn in (1.0, -1.0):
            Y = np.tile(sgn * r * e, (mesh.M, 1))
            if np.sum(model.eval(t, Y)) * mesh.h > 0:
                return Y
    return None


def lambda_star_sweep(spec_base: ProblemSpec, model: PotentialModel, lambdas, opts: SolveOptions = SolveOptions(),
                      mesh: Mesh | None = None, jobs: int = 1) -> dict:
    """Minimizer and mountain-pass solution for each lambda in an ascending grid.

    The minimizer is the lowest of descents started from a seeded
    perturbation of 0 and from ``y`` with ``int j(y) > 0``. The mountain
    pass runs from 0 to the minimizer when its energy is negative.
    """
    if spec_base.variant != "Eigen":
        raise DomainError("lambda sweeps need the Eigen variant")
    if mesh is None:
        raise DomainError("lambda_star_sweep needs a mesh")
    lambdas = [float(v) for v in lambdas]
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise DomainError("lambda grid must be ascending")
    tasks = [(spec_base.replace(lam=lam), model, opts, mesh) for lam in lambdas]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    star = next((r["lambda"] for r in rows if r["multiple"]), None)
    return {"rows": rows, "lambda_star": star}


def _sweep_row(task):
    spec, model, opts, mesh = task
    N = model.N
    row = {"lambda": spec.lam, "phi1": None, "phi2": None, "dist": None, "res1": None, "res2": None,
           "multiple": False, "error": None, "x1": None, "x2": None}
    try:
        asm = Assembler(spec, model, mesh, N)
        starts = [perturbed_zero(mesh, N, opts.seed)]
        y = positive_direction(spec, model, mesh, N)
        if y is not None:
            starts.append(GridFn(mesh, y))
        best = None
        for x0 in starts:
            try:
                cp = minimize(spec, model, x0, opts)
            except NonConvergenceError:
                continue
            if best is None or cp.energy < best.energy - 1e-12:
                best = cp
        if best is None:
            raise NonConvergenceError("no minimizer converged")
        row.update(phi1=best.energy, res1=best.residual_weak, x1=best.x)
        if not best.energy < 0:
            row["error"] = "minimizer energy is not negative; no mountain-pass endpoint"
            return row
        mp = mountain_pass(spec, model, best.x, opts)
        row.update(phi2=mp.energy, res2=mp.residual_weak, x2=mp.x,
                   dist=float(np.max(np.linalg.norm(best.x.values - mp.x.values, axis=1))))
        row["multiple"] = bool(row["phi1"] < 0 < row["phi2"] and row["dist"] >= 1e-3
                               and row["res1"] <= opts.tol_residual and row["res2"] <= opts.tol_residual)
        del asm
    except (NonConvergenceError, GeometryError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


__all__ = [
    "SolveOptions", "CriticalPoint", "minimize", "perturbed_zero", "rim_estimate", "find_far_endpoint",
    "mountain_pass", "MeanZero", "FourierUpTo", "saddle_search", "coercivity_signatures",
    "positive_direction", "lambda_star_sweep",
]
