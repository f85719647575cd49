"""Homoclinic candidates from mountain-pass solutions on growing periodic windows.

Window n is the periodic problem on ``[-n b, n b]`` at fixed spacing. The
path for window n + 1 is the zero extension of the final path of window n.
The extension keeps the energy only where the path vanishes at the window
edges, so the levels ``c_n`` follow the periodic solutions and may rise
slightly toward the homoclinic level.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .energy import Assembler, ProblemSpec, window_mesh
from .errors import DomainError, GeometryError, MeshMismatchError, NonConvergenceError
from .grid import GridFn, diff, w1p_norm
from .solvers import CriticalPoint, SolveOptions, find_far_endpoint, mountain_pass


def _bump(mesh, N):
    t = mesh.nodes
    v = np.zeros((mesh.M, N))
    v[:, 0] = np.exp(-0.5 * t ** 2)
    return GridFn(mesh, v)


def extend_guess(x_n: GridFn, n: int, n_next: int) -> GridFn:
    """Zero extension of a window-``n`` function to window ``n_next``.

    Nodes stay aligned because both windows share the spacing ``h``.
    """
    m = x_n.mesh
    if m.t0 >= 0:
        raise MeshMismatchError("expected a window mesh on [-nb, nb]")
    if n_next <= n:
        raise DomainError("n_next must exceed the current window index")
    half = -m.t0
    b = half / n
    shift = (n_next - n) * b / m.h
    if abs(shift - round(shift)) > 1e-8:
        raise MeshMismatchError("window spacing does not align with the base period")
    shift = int(round(shift))
    M_next = m.M + 2 * shift
    mesh_next = window_mesh(b, n_next, M_next // n_next)
    if mesh_next.M != M_next or abs(mesh_next.h - m.h) > 1e-12 * m.h:
        raise MeshMismatchError("incompatible spacing between windows")
    V = np.zeros((M_next, x_n.N))
    V[shift:shift + m.M] = x_n.values
    return GridFn(mesh_next, V)


def _extend_path(path, shift):
    K, M, N = path.shape
    out = np.zeros((K, M + 2 * shift, N))
    out[:, shift:shift + M] = path
    return out


def solve_window(model, g, n: int, p: float, b: float, opts: SolveOptions = SolveOptions(),
                 M_base: int = 256, direction: GridFn | None = None, start_path=None) -> CriticalPoint:
    """Mountain-pass solution on the window ``[-n b, n b]`` with ``n * M_base`` nodes."""
    mesh = window_mesh(b, n, M_base)
    spec = ProblemSpec("Window", p, g=g, n=n)
    if start_path is not None:
        endpoint = GridFn(mesh, start_path[-1])
    else:
        d = _bump(mesh, model.N) if direction is None else direction
        endpoint = find_far_endpoint(spec, model, d, opts)["e"]
    return mountain_pass(spec, model, endpoint, opts, start_path=start_path)


@dataclass
class HomoclinicRun:
    """Monitors of a window continuation and the final candidate."""

    entries: list = field(default_factory=list)
    candidate: GridFn | None = None
    converged: bool = False
    profiles: list = field(default_factory=list, repr=False)
    agreement: list = field(default_factory=list)

    def levels(self):
        return [e["c_n"] for e in self.entries]

    def to_json(self, candidate_csv: str | None = None) -> str:
        return json.dumps({"entries": self.entries, "converged": self.converged, "agreement": self.agreement,
                           "candidate_csv": candidate_csv}, indent=2, sort_keys=True)


def _monitors(cp: CriticalPoint, p: float, n: int, b: float) -> dict:
    x = cp.x
    t = x.mesh.nodes
    outer = np.abs(t) >= 0.9 * n * b
    r = np.linalg.norm(x.values, axis=1)
    dr = np.linalg.norm(diff(x).values, axis=1)
    return {
        "n": n,
        "c_n": cp.energy,
        "w_norm": w1p_norm(x, p),
        "sup_norm": float(r.max()),
        "endpoint_primal": float(r[outer].max()),
        "endpoint_deriv": float(dr[outer].max()),
        "residual": cp.residual_weak,
        "iterations": cp.iterations,
    }


def _inner_agreement(prev: GridFn, cur: GridFn, n_prev: int, b: float) -> float:
    """Sup distance on the inner half of the previous window."""
    shift = int(round(b / cur.mesh.h))
    a = prev.values
    c = cur.values[shift:shift + prev.mesh.M]
    t = prev.mesh.nodes
    inner = np.abs(t) <= 0.5 * n_prev * b
    return float(np.max(np.linalg.norm(a[inner] - c[inner], axis=1)))


def continuation(model, g, p: float, b: float, n_max: int, opts: SolveOptions = SolveOptions(),
                 M_base: int = 256, tol_decay: float = 1e-3, direction: GridFn | None = None) -> HomoclinicRun:
    """Solve windows ``n = 1..n_max`` with warm starts and record the monitors.

    Raises
    ------
    NonConvergenceError
        When a window fails; ``best`` is the partial run.
    """
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    run = HomoclinicRun()
    path = None
    prev = None
    for n in range(1, n_max + 1):
        try:
            cp = solve_window(model, g, n, p, b, opts, M_base, direction if n == 1 else None, start_path=path)
        except (NonConvergenceError, GeometryError) as exc:
            raise NonConvergenceError(f"window n={n} failed: {exc}", best=run) from exc
        run.entries.append(_monitors(cp, p, n, b))
        run.profiles.append(cp.x)
        if prev is not None:
            run.agreement.append(_inner_agreement(prev, cp.x, n - 1, b))
        prev = cp.x
        shift = int(round(b / cp.x.mesh.h))
        path = _extend_path(cp.history["path"], shift)
    run.candidate = prev
    last = run.entries[-1]
    run.converged = bool(last["endpoint_primal"] <= tol_decay and last["endpoint_deriv"] <= tol_decay
                         and run.agreement and run.agreement[-1] <= 1e-3)
    return run


def center_at_peak(x: GridFn) -> GridFn:
    """Translate the nodes so the largest |x| sits at t = 0."""
    k = int(np.argmax(np.linalg.norm(x.values, axis=1)))
    m = x.mesh
    from .grid import Mesh
    return GridFn(Mesh(m.b, m.M, m.t0 - m.nodes[k]), x.values)


def nontriviality_guard(model, run: HomoclinicRun, c_lower: float = 1.0, p: float = 2.0, tol: float = 1e-8) -> dict:
    """Discrete ess sup of ``h(t) = (u, x)/|x|^p`` on the final window.

    ``ok`` is False when the sup falls below ``c_lower - tol``, the signature
    of a collapse to the trivial solution. ``hypotheses_verified`` reports
    whether the origin condition ``lim sup p j/|x|^p <= 0`` holds for the model.
    """
    if not run.entries:
        raise DomainError("run has no entries")
    from .auditor import origin_limit
    x = run.candidate if run.candidate is not None else run.profiles[-1]
    X = x.values
    r = np.linalg.norm(X, axis=1)
    nz = r > 0
    if np.any(nz):
        U = model.subgrad(x.mesh.nodes[nz], X[nz])
        hv = np.einsum("ij,ij->i", U, X[nz]) / r[nz] ** p
        ess = float(np.max(hv))
    else:
        ess = 0.0
    lim = origin_limit(model, p)
    return {"ok": bool(ess >= c_lower - tol), "ess_sup_h": ess, "c_lower": float(c_lower),
            "hypotheses_verified": bool(lim["verdict"] == "pass")}


__all__ = ["extend_guess", "solve_window", "HomoclinicRun", "continuation", "center_at_peak", "nontriviality_guard"]
