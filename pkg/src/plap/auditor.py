"""Sampled numerical checks of the hypothesis families on g and j.

Each check returns a verdict ``pass``, ``fail`` or ``inconclusive``. A
``pass`` requires the inequality at every sample, so sampling gaps can only
miss violations of adversarial models; a ``fail`` always carries a witness.
Limits are estimated along a sequence of radii and reported with the
sequence so slow convergence stays visible.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .grid import GridFn
from .potential import PotentialModel, j0_estimate

PROFILES = ("Hg", "Hg1", "Hj1", "Hj2", "Hj3", "Hj4", "Hj5")
NOISE = 1e-6
ORIGIN_NOTE = "limit (v) evaluated at the origin"


@dataclass
class AuditReport:
    """Verdicts of one hypothesis profile."""

    profile: str
    checks: list = field(default_factory=list)
    sampling: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def verdicts(self):
        return {c["label"]: c["verdict"] for c in self.checks}

    @property
    def passed(self) -> bool:
        return all(c["verdict"] == "pass" for c in self.checks)

    def check(self, label):
        for c in self.checks:
            if c["label"] == label:
                return c
        raise KeyError(label)

    def as_dict(self):
        return {"profile": self.profile, "checks": self.checks, "sampling": self.sampling, "notes": self.notes}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, default=_jsonable)


@dataclass
class AsymptoticsEstimate:
    j_plus: float
    j_minus: float
    G1_minus: float
    G2_plus: float
    radii: list
    trend: float
    consistent: bool
    history: dict = field(default_factory=dict, repr=False)


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(type(o))


def _check(label, margin, witness=None, note=None, verdict=None):
    """Build a check record; ``margin >= 0`` means the inequality holds."""
    margin = float(margin)
    if verdict is None:
        if math.isnan(margin):
            verdict = "inconclusive"
        elif abs(margin) < NOISE:
            verdict = "inconclusive"
        else:
            verdict = "pass" if margin > 0 else "fail"
    rec = {"label": label, "verdict": verdict, "margin": margin, "witness": witness}
    if note:
        rec["note"] = note
    return rec


def _witness(t, x, lhs, rhs):
    return {"t": float(t), "x": np.atleast_1d(np.asarray(x, dtype=float)).tolist(), "lhs": float(lhs), "rhs": float(rhs)}


# sampling ---------------------------------------------------------------

def _directions(N, samples, rng):
    if N == 1:
        return np.array([[1.0], [-1.0]])
    d = rng.standard_normal((samples, N))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return np.vstack([np.eye(N), -np.eye(N), d])


def _points(model, radii, samples, rng, t_range):
    """All (t, x) sample pairs: radii x directions x a t-grid."""
    D = _directions(model.N, samples, rng)
    ts = np.linspace(t_range[0], t_range[1], max(int(samples), 2), endpoint=False)
    R = np.asarray(radii, dtype=float)
    X = (R[:, None, None] * D[None, :, :]).reshape(-1, model.N)
    T = np.repeat(ts, X.shape[0])
    X = np.tile(X, (ts.size, 1))
    return T, X


def _neg_j0_minus_x(model, t, x, seed):
    """``-j0(t, x; -x)`` per sample, exact when the model provides it."""
    if hasattr(model, "neg_j0_minus_x"):
        return np.asarray(model.neg_j0_minus_x(x), dtype=float)
    out = np.empty(x.shape[0])
    kinks = model.kink_mask(t, x)
    u = model.subgrad(t, x)
    for i in range(x.shape[0]):
        if not kinks[i]:
            out[i] = float(np.dot(u[i], x[i]))
            continue
        v = model.j0_exact(t[i], x[i], -x[i])
        if v is None:
            v = j0_estimate(model, t[i], x[i], -x[i], seed=seed)
        out[i] = -float(v)
    return out


def _selections(model, t, x):
    """Extreme values of ``(u, x)`` over ``u`` in the Clarke set per sample."""
    u = model.subgrad(t, x)
    hi = np.einsum("ij,ij->i", u, x)
    for i in np.flatnonzero(model.kink_mask(t, x)):
        s = model.set_descriptor(t[i], x[i])
        if s is not None:
            hi[i] = s.support(x[i])
    return hi


def _default_radii(lo, hi, k=12):
    return np.geomspace(lo, hi, k)


# limit helpers -----------------------------------------------------------

def _seq_verdict(values, strict=False):
    """Verdict for ``lim <= 0`` (or ``< 0`` when strict) from values at shrinking scales."""
    v = np.asarray(values, dtype=float)
    last = v[-1]
    prev = v[-2] if v.size > 1 else last
    if last <= -NOISE:
        if strict and prev < last and abs(last) < 1e-3:
            return "inconclusive", last
        return "pass", last
    if last >= NOISE:
        return "fail", last
    # within noise of zero: decide from the trend
    if abs(last) < abs(prev):
        return ("fail" if strict else "pass"), last
    return "inconclusive", last


def origin_limit(model: PotentialModel, p: float, radii=None, samples: int = 8, seed: int = 0,
                 t_range=(0.0, 1.0), strict=False) -> dict:
    """Estimate ``lim sup_{|x| -> 0} p j(t, x)/|x|^p`` and its sign verdict."""
    radii = np.sort(np.asarray(radii if radii is not None else _default_radii(1e-1, 1e-6, 6), dtype=float))[::-1]
    rng = np.random.default_rng(seed)
    vals, wit = [], None
    for r in radii:
        T, X = _points(model, [r], samples, rng, t_range)
        q = p * (model.eval(T, X) - model.eval(T, np.zeros_like(X))) / r ** p
        k = int(np.argmax(q))
        vals.append(float(q[k]))
        wit = _witness(T[k], X[k], q[k], 0.0)
    verdict, last = _seq_verdict(vals, strict)
    return {"verdict": verdict, "estimate": last, "values": vals, "radii": radii.tolist(), "witness": wit}


# profiles ----------------------------------------------------------------

def _g_values(g, t):
    if isinstance(g, GridFn):
        m = g.mesh
        idx = np.floor((np.asarray(t) - m.t0) / m.h).astype(int) % m.M
        return g.values[idx, 0]
    if callable(g):
        return np.broadcast_to(np.asarray(g(np.asarray(t, dtype=float)), dtype=float), np.shape(t)).astype(float)
    return np.full(np.shape(t), float(g))


def _audit_g(profile, params, samples):
    if "g" not in params:
        raise ConfigError(f"profile {profile} needs param 'g'")
    g, b = params["g"], float(params.get("b", 1.0))
    if profile == "Hg":
        t = np.linspace(0.0, b, 64 * samples + 1)
        per_label, per_t = "g(0) = g(b)", (0.0, b)
    else:
        t = np.linspace(-b, b, 64 * samples + 1)
        per_label, per_t = "g 2b-periodic", (t, t + 2 * b)
    gv = _g_values(g, t)
    c = float(params.get("c_lower", np.min(gv)))
    checks = []
    fin = bool(np.all(np.isfinite(gv)))
    checks.append(_check("g finite", 1.0 if fin else -1.0,
                         None if fin else _witness(t[~np.isfinite(gv)][0], [0.0], np.nan, 0.0)))
    k = int(np.argmin(gv - c))
    checks.append(_check("c > 0", c, None if c > 0 else _witness(0.0, [0.0], c, 0.0)))
    m = float(gv[k] - c)
    checks.append(_check("g >= c", 1.0 if m >= -1e-14 else m, None if m >= -1e-14 else _witness(t[k], [0.0], gv[k], c)))
    if isinstance(g, GridFn):
        checks.append(_check(per_label, 1.0, note="grid functions are periodic by construction"))
    else:
        a, bb = _g_values(g, np.atleast_1d(per_t[0])), _g_values(g, np.atleast_1d(per_t[1]))
        d = np.abs(a - bb)
        i = int(np.argmax(d))
        ok = d[i] <= 1e-10
        checks.append(_check(per_label, 1.0 if ok else -d[i],
                             None if ok else _witness(np.atleast_1d(per_t[0])[i], [0.0], a[i], bb[i])))
    return checks, {"t_samples": int(t.size)}


def _need(params, model, key):
    v = params.get(key)
    if v is None:
        v = getattr(model.growth, key, None)
    if v is None:
        raise ConfigError(f"missing param {key!r}")
    return float(v)


def _growth_check(model, T, X, exponent_r, mode):
    gr = model.growth
    rho = np.linalg.norm(X, axis=1)
    u = np.linalg.norm(model.subgrad(T, X), axis=1)
    if mode == "sum":
        bound = gr.a1 + gr.c1 * rho ** (exponent_r - 1.0)
    else:
        bound = max(gr.a1, gr.c1) * (1.0 + rho ** (exponent_r - 1.0))
    if not np.all(np.isfinite(bound)):
        return _check("(iii) growth", np.nan, note="no finite growth constants for this model", verdict="inconclusive")
    slack = bound - u
    k = int(np.argmin(slack))
    ok = slack[k] >= -1e-12 * max(1.0, bound[k])
    return _check("(iii) growth", 1.0 if ok else slack[k], None if ok else _witness(T[k], X[k], u[k], bound[k]),
                  note=f"|u| <= bound with r = {exponent_r:g}")


def _mu_check(model, T, X, mu, M, seed, label="(iv) mu-condition"):
    rho = np.linalg.norm(X, axis=1)
    sel = rho >= M
    T, X = T[sel], X[sel]
    if X.shape[0] == 0:
        return _check(label, np.nan, note="no samples beyond M", verdict="inconclusive")
    lhs = mu * model.eval(T, X)
    rhs = _neg_j0_minus_x(model, T, X, seed)
    slack = rhs - lhs
    k = int(np.argmin(slack))
    scale = max(1.0, abs(lhs[k]), abs(rhs[k]))
    if slack[k] >= -1e-10 * scale:
        return _check(label, 1.0, note=f"min slack {slack[k]:.3e} over |x| >= {M:g}")
    return _check(label, slack[k], _witness(T[k], X[k], lhs[k], rhs[k]))


def _integral_positive(model, x, t_range, n=512, label="(vi) positive integral"):
    if x is None:
        raise ConfigError(f"missing param 'x_star' for {label}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != model.N:
        raise ConfigError(f"x_star must have {model.N} components")
    t = np.linspace(t_range[0], t_range[1], n, endpoint=False)
    val = float(np.sum(model.eval(t, np.tile(x, (n, 1))))) * (t_range[1] - t_range[0]) / n
    return _check(label, val, None if val > 0 else _witness(t[0], x, val, 0.0)), val


def _search_x0(model, radii, t_range, min_norm=0.0):
    """Constant state along the first axis with the largest ``int j``; ``|x| >= min_norm``."""
    best = None
    for r in np.concatenate([[min_norm] if min_norm > 0 else [], radii[radii >= min_norm]]):
        for s in (1.0, -1.0):
            cand = np.zeros(model.N)
            cand[0] = s * r
            val = _integral_positive(model, cand, t_range)[1]
            if best is None or val > best[1]:
                best = (cand, val)
    return best[0]


def _j_at_zero(model, t_range, n=512):
    t = np.linspace(t_range[0], t_range[1], n, endpoint=False)
    v = model.eval(t, np.zeros((n, model.N)))
    return t, v, float(np.sum(v)) * (t_range[1] - t_range[0]) / n


def _u_over_x(model, radii, samples, rng, t_range):
    vals, wit = [], None
    for r in radii:
        T, X = _points(model, [r], samples, rng, t_range)
        q = np.abs(model.subgrad(T, X)[:, 0] / X[:, 0])
        k = int(np.argmax(q))
        vals.append(float(q[k]))
        wit = _witness(T[k], X[k], q[k], 0.0)
    last, prev = vals[-1], vals[-2] if len(vals) > 1 else vals[-1]
    if last < NOISE and last <= prev:
        v = "pass"
    elif last >= NOISE and last >= 0.5 * prev:
        v = "fail"
    else:
        v = "inconclusive"
    return _check("(iv) u/x -> 0", -last if v == "fail" else 1.0, wit if v == "fail" else None,
                  note=f"max |u/x| at radius {radii[-1]:.1e}: {last:.3e}", verdict=v)


def audit_hypotheses(model: PotentialModel | None, profile: str, params: dict | None = None) -> AuditReport:
    """Run the sampled checks of one hypothesis profile.

    Parameters
    ----------
    model : PotentialModel or None
        Unused for the g profiles.
    profile : {"Hg", "Hg1", "Hj1", "Hj2", "Hj3", "Hj4", "Hj5"}
    params : dict
        ``p``, ``mu``, ``M_thresh`` (defaulting to the model's growth data),
        ``x_star``, ``radii`` (max radius for growth sampling), ``samples``,
        ``seed``, ``b``; ``g`` and ``c_lower`` for the g profiles; ``h`` and
        ``m`` for Hj5.
    """
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}; choose from {PROFILES}")
    params = dict(params or {})
    samples = int(params.get("samples", 16))
    seed = int(params.get("seed", 0))
    rep = AuditReport(profile, sampling={"samples": samples, "seed": seed})
    if profile in ("Hg", "Hg1"):
        checks, info = _audit_g(profile, params, samples)
        rep.checks = checks
        rep.sampling.update(info)
        return rep
    if model is None:
        raise ConfigError(f"profile {profile} needs a potential")
    rng = np.random.default_rng(seed)
    b = float(params.get("b", 1.0))
    t_range = (-b, b) if profile == "Hj3" else (0.0, b)
    rmax = float(params.get("radii", params.get("r_max", 100.0)))
    if np.ndim(params.get("radii")) == 1:
        rmax = float(np.max(params["radii"]))
    radii = _default_radii(1e-3, rmax, 12)
    rep.sampling.update({"radii": radii.tolist(), "t_range": list(t_range)})
    T, X = _points(model, radii, samples, rng, t_range)
    checks = []
    if profile in ("Hj4", "Hj5") and model.N != 1:
        raise DomainError(f"profile {profile} is scalar")

    if profile == "Hj1":
        p = float(params.get("p", 2.0))
        mu, M = _need(params, model, "mu"), _need(params, model, "M_thresh")
        if not mu > p:
            checks.append(_check("mu > p", mu - p, _witness(0.0, np.zeros(model.N), mu, p)))
        t0, j0v, ij0 = _j_at_zero(model, t_range)
        checks.append(_check("int j(t,0) >= 0", 1.0 if ij0 >= -1e-12 else ij0,
                             None if ij0 >= -1e-12 else _witness(t0[0], np.zeros(model.N), ij0, 0.0)))
        checks.append(_growth_check(model, T, X, model.growth.r, "sum"))
        checks.append(_mu_check(model, T, X, mu, M, seed))
        lim = origin_limit(model, p, samples=samples, seed=seed, t_range=t_range)
        checks.append(_check("(v) origin limit", -lim["estimate"], lim["witness"] if lim["verdict"] == "fail" else None,
                             note=ORIGIN_NOTE, verdict=lim["verdict"]))
        xs = params.get("x_star")
        if xs is None:
            xs = _search_x0(model, radii, t_range, M)
        c, _ = _integral_positive(model, xs, t_range)
        c["witness"] = c["witness"] or {"x_star": np.atleast_1d(xs).tolist()}
        if xs is not None and np.linalg.norm(np.atleast_1d(xs)) < M:
            c = _check(c["label"], -(M - np.linalg.norm(np.atleast_1d(xs))), _witness(0.0, xs, np.linalg.norm(xs), M),
                       note="|x_star| must be >= M")
        checks.append(c)
        rep.notes.append(ORIGIN_NOTE)

    elif profile == "Hj2":
        p = float(params.get("p", 2.0))
        r = model.growth.r
        checks.append(_check("r < p", p - r, None if r < p else _witness(0.0, np.zeros(model.N), r, p)))
        checks.append(_growth_check(model, T, X, r, "one_plus"))
        t0, j0v, ij0 = _j_at_zero(model, t_range)
        ok = abs(ij0) <= 1e-10
        checks.append(_check("int j(t,0) = 0", 1.0 if ok else -abs(ij0), None if ok else _witness(t0[0], np.zeros(model.N), ij0, 0.0)))
        xs = params.get("x_star")
        if xs is None:
            xs = _search_x0(model, radii, t_range)
        c, _ = _integral_positive(model, xs, t_range, label="(iv) exists x0 with int j > 0")
        c["witness"] = c["witness"] or {"x0": np.atleast_1d(xs).tolist()}
        checks.append(c)
        lim = origin_limit(model, p, samples=samples, seed=seed, t_range=t_range, strict=True)
        checks.append(_check("(v) origin limit < 0", -lim["estimate"], lim["witness"] if lim["verdict"] == "fail" else None,
                             note=ORIGIN_NOTE, verdict=lim["verdict"]))
        rep.notes.append(ORIGIN_NOTE)

    elif profile == "Hj3":
        p = float(params.get("p", 2.0))
        mu, M = _need(params, model, "mu"), _need(params, model, "M_thresh")
        if not mu > p:
            checks.append(_check("mu > p", mu - p, _witness(0.0, np.zeros(model.N), mu, p)))
        t0, j0v, _ = _j_at_zero(model, t_range)
        k = int(np.argmax(np.abs(j0v)))
        ok = abs(j0v[k]) <= 1e-14
        checks.append(_check("j(t,0) = 0", 1.0 if ok else -abs(j0v[k]), None if ok else _witness(t0[k], np.zeros(model.N), j0v[k], 0.0)))
        checks.append(_growth_check(model, T, X, max(model.growth.r, p), "one_plus"))
        checks.append(_mu_check(model, T, X, mu, M, seed))
        lim = origin_limit(model, p, samples=samples, seed=seed, t_range=t_range)
        checks.append(_check("(v) origin limit", -lim["estimate"], lim["witness"] if lim["verdict"] == "fail" else None,
                             verdict=lim["verdict"]))
        xs = params.get("x_star")
        if xs is None:
            xs = _search_x0(model, radii, t_range)
        c, _ = _integral_positive(model, xs, t_range)
        c["witness"] = c["witness"] or {"x_star": np.atleast_1d(xs).tolist()}
        checks.append(c)

    else:
        checks.append(_growth_check(model, T, X, model.growth.r, "sum" if profile == "Hj4" else "one_plus"))
        big = _default_radii(1e2, float(params.get("r_inf", 1e8)), 7)
        checks.append(_u_over_x(model, big, samples, rng, t_range))
        est = estimate_asymptotics(model, big, samples=samples, b=b, seed=seed)
        if profile == "Hj4":
            lo, hi = est.j_minus * b, est.j_plus * b
            m_ = min(-lo, hi)
            checks.append(_check("(v) int j_- < 0 < int j_+", m_, None if m_ > 0 else _witness(0.0, [big[-1]], lo, hi),
                                 note=f"trend {est.trend:.2e}"))
        else:
            if "h" not in params or "m" not in params:
                raise ConfigError("profile Hj5 needs params 'h' and 'm'")
            res = resonance_LL_check(model, params["h"], int(params["m"]), b, radius=big[-1])
            checks.append(_check("(v) Landesman-Lazer", res["margin"],
                                 None if res["ok"] else _witness(res["worst_theta"], [big[-1]], res["lhs"], res["rhs"]),
                                 verdict="pass" if res["ok"] else "fail"))
        rep.sampling["asymptotic_radii"] = big.tolist()
    rep.checks = checks
    return rep


# asymptotics -------------------------------------------------------------

def _scalar(model):
    if model.N != 1:
        raise DomainError("scalar model required")


def _g_extremes(model, t, x):
    """``g1 = min dj``, ``g2 = max dj`` per sample (scalar)."""
    X = x[:, None]
    u = model.subgrad(t, X)[:, 0]
    g1, g2 = u.copy(), u.copy()
    for i in np.flatnonzero(model.kink_mask(t, X)):
        s = model.set_descriptor(t[i], X[i])
        if s is not None:
            g1[i], g2[i] = s.lo_hi()
        else:
            lo = model.subgrad(t[i:i + 1], X[i:i + 1] * (1 - 1e-9))[0, 0]
            hi = model.subgrad(t[i:i + 1], X[i:i + 1] * (1 + 1e-9))[0, 0]
            g1[i], g2[i] = min(lo, hi), max(lo, hi)
    return g1, g2


def _tail_stats(model, R, samples, rng, b):
    """lim inf / lim sup proxies over ``x`` in ``[R, 2R]`` and ``t`` in a grid."""
    n = max(64, 32 * samples)
    ts = np.linspace(0.0, b, max(samples, 2), endpoint=False)
    xs = R * (1.0 + rng.random(n))
    xs[0] = R
    T = np.repeat(ts, n)
    xp = np.tile(xs, ts.size)
    jp = model.eval(T, xp[:, None]) / xp
    jm = model.eval(T, -xp[:, None]) / (-xp)
    g1m, _ = _g_extremes(model, T, -xp)
    _, g2p = _g_extremes(model, T, xp)
    G1 = 2.0 * jm - g1m
    G2 = 2.0 * jp - g2p
    return float(np.min(jp)), float(np.max(jm)), float(np.max(G1)), float(np.min(G2))


def estimate_asymptotics(model: PotentialModel, radii, samples: int = 16, b: float = 1.0, seed: int = 0,
                         tol: float = 0.1) -> AsymptoticsEstimate:
    """Estimate ``j_+``, ``j_-``, ``G1^-`` and ``G2^+`` at the largest radius.

    The lim inf / lim sup in x are approximated by the min / max over a
    seeded sample of ``x`` in ``[R, 2R]``; the ``t`` direction by a grid on
    ``[0, b)``. ``trend`` is the largest change between the last two radii.
    """
    _scalar(model)
    radii = np.sort(np.asarray(radii, dtype=float))
    if radii[0] <= 0:
        raise DomainError("radii must be positive")
    rng = np.random.default_rng(seed)
    rows = np.array([_tail_stats(model, R, samples, rng, b) for R in radii])
    last = rows[-1]
    trend = float(np.max(np.abs(rows[-1] - rows[-2]))) if len(rows) > 1 else math.nan
    jp, jm, G1m, G2p = (float(v) for v in last)
    consistent = bool(G2p <= jp + tol and jm <= G1m + tol)
    hist = {"j_plus": rows[:, 0].tolist(), "j_minus": rows[:, 1].tolist(),
            "G1_minus": rows[:, 2].tolist(), "G2_plus": rows[:, 3].tolist()}
    return AsymptoticsEstimate(jp, jm, G1m, G2p, radii.tolist(), trend, consistent, hist)


def _pos_sin_primitive(u):
    """``int_0^u max(sin s, 0) ds`` in closed form."""
    u = np.asarray(u, dtype=float)
    k = np.floor(u / (2 * math.pi))
    r = u - 2 * math.pi * k
    return 2.0 * k + 1.0 - np.cos(np.minimum(r, math.pi))


def resonance_LL_check(model: PotentialModel, h, m: int, b: float, theta_grid=None, radius: float = 1e8,
                       samples: int = 16, seed: int = 0) -> dict:
    """Landesman-Lazer inequality on a theta grid.

    ``h`` and the pointwise ``j_+(t)``, ``j_-(t)`` are taken piecewise
    constant on the cells of ``h``'s mesh (or 256 cells when ``h`` is a
    number or callable); the sine integrals over each cell are exact.
    """
    _scalar(model)
    if theta_grid is None:
        theta_grid = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
    theta_grid = np.asarray(theta_grid, dtype=float)
    if isinstance(h, GridFn):
        t, hv, dt = h.mesh.nodes, h.values[:, 0], h.mesh.h
    else:
        n = 256
        dt = b / n
        t = np.arange(n) * dt
        hv = _g_values(h, t)
    rng = np.random.default_rng(seed)
    n_x = max(64, 16 * samples)
    xs = radius * (1.0 + rng.random(n_x))
    T = np.repeat(t, n_x)
    X = np.tile(xs, t.size)
    jp = np.min((model.eval(T, X[:, None]) / X).reshape(t.size, n_x), axis=1)
    jm = np.max((model.eval(T, -X[:, None]) / (-X)).reshape(t.size, n_x), axis=1)
    w = 2 * math.pi / b * m
    lhs_all, rhs_all = [], []
    for th in theta_grid:
        a, c = w * t + th, w * (t + dt) + th
        if m == 0:
            s = math.sin(th)
            Is, Ip = np.full(t.size, s * dt), np.full(t.size, max(s, 0.0) * dt)
        else:
            Is = (np.cos(a) - np.cos(c)) / w
            Ip = (_pos_sin_primitive(c) - _pos_sin_primitive(a)) / w
        In = Ip - Is
        lhs_all.append(float(np.sum(hv * Is)))
        rhs_all.append(float(np.sum(jp * Ip - jm * In)))
    lhs, rhs = np.array(lhs_all), np.array(rhs_all)
    marg = rhs - lhs
    k = int(np.argmin(marg))
    return {"ok": bool(np.all(marg >= 1e-9)), "worst_theta": float(theta_grid[k]), "margin": float(marg[k]),
            "lhs": float(lhs[k]), "rhs": float(rhs[k])}


def gap_constant(m: int, b: float, k_max: int) -> float:
    """Smallest per-mode ratio ``(k^2 - m^2) w^2 / (1 + k^2 w^2)`` over ``m < k <= k_max``."""
    if k_max < m + 2:
        raise DomainError("k_max must be at least m + 2")
    w = 2 * math.pi / b
    k = np.arange(m + 1, k_max + 1, dtype=float)
    return float(np.min((k ** 2 - m ** 2) * w ** 2 / (1.0 + k ** 2 * w ** 2)))


def equivalence_check(model: PotentialModel, radii, p: float = 2.0, samples: int = 16, seed: int = 0) -> dict:
    """Compare the origin limits of ``p j/|x|^p`` and ``(u, x)/|x|^p``."""
    radii = np.sort(np.asarray(radii, dtype=float))[::-1]
    if radii[-1] > 1e-6:
        raise DomainError("radii must descend to 1e-6 or below")
    rng = np.random.default_rng(seed)
    v, vp = [], []
    for r in radii:
        T, X = _points(model, [r], samples, rng, (0.0, 1.0))
        j = model.eval(T, X) - model.eval(T, np.zeros_like(X))
        v.append(float(np.max(p * j / r ** p)))
        vp.append(float(np.max(_selections(model, T, X) / r ** p)))
    s1, _ = _seq_verdict(v)
    s2, _ = _seq_verdict(vp)
    return {"limit_v": v[-1], "limit_v_prime": vp[-1], "agree": bool(s1 == s2), "verdicts": (s1, s2),
            "values_v": v, "values_v_prime": vp}


__all__ = ["AuditReport", "AsymptoticsEstimate", "audit_hypotheses", "estimate_asymptotics", "resonance_LL_check",
           "gap_constant", "equivalence_check", "origin_limit", "PROFILES"]
