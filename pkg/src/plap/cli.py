"""Command-line front end: ``plap <command> [flags]``.

Configuration comes from an INI or JSON file (``--config``) and flags, with
flags winning. ``PLAP_SEED`` overrides the file seed. Each run writes
``report.json``, ``config.json`` (the resolved configuration, usable as
``--config``), ``timing.json`` and command-specific CSV/SVG files.

Exit codes: 0 success, 1 configuration error, 2 nonconvergence.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import time
from dataclasses import fields

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, GeometryError, NonConvergenceError
from .grid import GridFn, make_mesh

COMMANDS = ("solve", "multiplicity", "homoclinic", "spectrum", "audit", "resonant")

# section -> key -> (type, default)
_SCHEMA = {
    "problem": {
        "variant": (str, None), "p": (float, 2.0), "b": (float, 2 * math.pi), "M": (int, 256),
        "g": (str, "const:1"), "c_lower": (float, None), "lam": (float, None), "m": (int, 1),
        "h": (str, "const:0"), "n": (int, 1), "eps_reg": (float, 1e-10),
    },
    "potential": {"name": (str, "quartic"), "params": (dict, {})},
    "solver": {},
    "run": {
        "method": (str, None), "direction": (str, "const:1"), "lambdas": (list, None),
        "n_max": (int, None), "M_base": (int, 256), "tol_decay": (float, 1e-3), "profile": (str, None),
        "mu": (float, None), "M_thresh": (float, None), "x_star": (list, None), "r_max": (float, 100.0),
        "samples": (int, 16), "jobs": (int, 1), "tol": (float, 1e-9), "theta_points": (int, 64),
    },
    "output": {"dir": (str, "plap_out"), "formats": (list, ["json", "csv"])},
}


def _solver_schema():
    from .solvers import SolveOptions
    d = SolveOptions()
    return {f.name: (type(getattr(d, f.name)), getattr(d, f.name)) for f in fields(SolveOptions)}


_SCHEMA["solver"] = _solver_schema()


# parsing helpers --------------------------------------------------------

def _coerce(typ, value, key):
    if value is None:
        return None
    try:
        if typ is list:
            if isinstance(value, str):
                return [v.strip() for v in value.split(",") if v.strip()]
            return list(value)
        if typ is dict:
            if isinstance(value, str):
                return _parse_kv(value)
            return dict(value)
        if typ is int:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if typ is float:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None


def _num(s):
    try:
        f = float(s)
    except ValueError:
        return s
    return int(f) if f.is_integer() and "." not in s and "e" not in s.lower() else f


def _parse_kv(text):
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise ConfigError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = _num(v.strip())
    return out


def parse_potential(text):
    """``name`` or ``name:k=v,k=v`` to ``(name, params)``."""
    name, _, rest = text.partition(":")
    return name.strip(), _parse_kv(rest) if rest else {}


def parse_function(text, period):
    """``const:v``, ``cos:a,c`` (``a + c cos(2 pi t/period)``), ``sin:a,c`` or a CSV path."""
    kind, _, rest = text.partition(":")
    if kind in ("const", "cos", "sin") and rest:
        try:
            vals = [float(v) for v in rest.split(",")]
        except ValueError:
            raise ConfigError(f"bad function spec {text!r}") from None
        if kind == "const":
            if len(vals) != 1:
                raise ConfigError(f"const takes one value: {text!r}")
            return vals[0]
        if len(vals) != 2:
            raise ConfigError(f"{kind} takes two values a,c: {text!r}")
        a, c = vals
        w = 2 * math.pi / period
        trig = np.cos if kind == "cos" else np.sin
        return lambda t: a + c * trig(w * np.asarray(t, dtype=float))
    if os.path.isfile(text):
        src = GridFn.from_csv(text)
        tt = np.append(src.mesh.nodes, src.mesh.t0 + src.mesh.b)
        vv = np.append(src.values[:, 0], src.values[0, 0])
        t0, L = src.mesh.t0, src.mesh.b
        return lambda t: np.interp((np.asarray(t, dtype=float) - t0) % L + t0, tt, vv)
    raise ConfigError(f"cannot read function {text!r}: use const:v, cos:a,c, sin:a,c or a CSV path")


def _read_config(path):
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from None
        return data
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    data = {}
    for sec in cp.sections():
        data[sec] = dict(cp.items(sec))
    if cp.defaults():
        data.update(dict(cp.defaults()))
    return data


def resolve_config(command, file_data, overrides, env=None):
    """Merge defaults, file values, ``PLAP_SEED`` and flag overrides; reject unknown keys."""
    env = os.environ if env is None else env
    file_data = dict(file_data or {})
    fcmd = file_data.pop("command", None)
    if fcmd is not None and fcmd != command:
        raise ConfigError(f"config is for command {fcmd!r}, not {command!r}")
    cfg = {"command": command}
    for sec, keys in _SCHEMA.items():
        cfg[sec] = {k: (v[1].copy() if isinstance(v[1], (dict, list)) else v[1]) for k, v in keys.items()}
    if command == "resonant":
        cfg["potential"]["name"] = "abs"
    for sec, vals in file_data.items():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown config section {sec!r}")
        if not isinstance(vals, dict):
            raise ConfigError(f"section {sec!r} must be a table")
        for k, v in vals.items():
            if sec == "potential" and k not in _SCHEMA["potential"]:
                # INI form: extra keys in [potential] are model parameters
                cfg["potential"]["params"][k] = _num(str(v)) if isinstance(v, str) else v
                continue
            if k not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key {sec}.{k}")
            cfg[sec][k] = _coerce(_SCHEMA[sec][k][0], v, f"{sec}.{k}")
    if env.get("PLAP_SEED") not in (None, ""):
        cfg["solver"]["seed"] = _coerce(int, env["PLAP_SEED"], "PLAP_SEED")
    for (sec, k), v in overrides.items():
        if v is None:
            continue
        if sec == "potential" and k == "spec":
            name, params = parse_potential(v)
            cfg["potential"] = {"name": name, "params": params}
            continue
        cfg[sec][k] = _coerce(_SCHEMA[sec][k][0], v, f"{sec}.{k}")
    fm = set(cfg["output"]["formats"]) - {"json", "csv", "svg"}
    if fm:
        raise ConfigError(f"unknown output formats {sorted(fm)}")
    return cfg


# building blocks ---------------------------------------------------------

def _model(cfg):
    from .potential import builtin
    pot = cfg["potential"]
    try:
        return builtin(pot["name"], **pot["params"])
    except TypeError as exc:
        raise ConfigError(f"bad potential parameters: {exc}") from None


def _options(cfg):
    from .solvers import SolveOptions
    return SolveOptions(**cfg["solver"])


def _spec(cfg, variant, **extra):
    from .energy import ProblemSpec
    pr = cfg["problem"]
    g = parse_function(pr["g"], pr["b"]) if variant in ("Base", "Eigen", "Window") else None
    kw = dict(p=pr["p"], g=g, c_lower=pr["c_lower"], eps_reg=pr["eps_reg"])
    if variant == "Eigen":
        kw["lam"] = pr["lam"] if pr["lam"] is not None else 1.0
    if variant == "Resonant":
        kw["m"] = pr["m"]
        kw["forcing"] = parse_function(pr["h"], pr["b"])
    if variant == "Window":
        kw["n"] = pr["n"]
    kw.update(extra)
    return ProblemSpec(variant, **kw)


def _mesh(cfg, spec):
    from .energy import window_mesh
    pr = cfg["problem"]
    if spec.variant == "Window":
        return window_mesh(pr["b"], spec.n, pr["M"])
    return make_mesh(pr["b"], pr["M"])


def _vector_fn(text, mesh, N, period):
    f = parse_function(text, period)
    v = np.zeros((mesh.M, N))
    v[:, 0] = f(mesh.nodes) if callable(f) else f
    return GridFn(mesh, v)


def _cp_dict(cp):
    return cp.summary()


# commands ----------------------------------------------------------------

def _cmd_solve(cfg, out):
    from .solvers import MeanZero, find_far_endpoint, minimize, mountain_pass, perturbed_zero, saddle_search, FourierUpTo
    variant = cfg["problem"]["variant"] or "Base"
    model = _model(cfg)
    opts = _options(cfg)
    spec = _spec(cfg, variant)
    mesh = _mesh(cfg, spec)
    method = cfg["run"]["method"] or {"Base": "mountain_pass", "Window": "mountain_pass", "Eigen": "minimize",
                                      "Scalar": "saddle", "Resonant": "saddle"}[variant]
    if method == "minimize":
        cp = minimize(spec, model, perturbed_zero(mesh, model.N, opts.seed), opts)
    elif method == "mountain_pass":
        d = _vector_fn(cfg["run"]["direction"], mesh, model.N, cfg["problem"]["b"])
        e = find_far_endpoint(spec, model, d, opts)["e"]
        cp = mountain_pass(spec, model, e, opts)
    elif method == "saddle":
        split = MeanZero() if variant == "Scalar" else FourierUpTo(spec.m)
        cp = saddle_search(spec, model, split, opts, mesh=mesh)
    else:
        raise ConfigError(f"unknown method {method!r}")
    out["csv"]["solution.csv"] = cp.x.to_csv()
    out["svg"] = _svg_trajectory(cp.x)
    return {"critical_point": _cp_dict(cp), "method": method}


def _cmd_multiplicity(cfg, out):
    from .solvers import lambda_star_sweep
    model = _model(cfg)
    opts = _options(cfg)
    spec = _spec(cfg, "Eigen", lam=1.0)
    mesh = make_mesh(cfg["problem"]["b"], cfg["problem"]["M"])
    lams = cfg["run"]["lambdas"] or [2.0 ** k for k in range(9)]
    lams = [_coerce(float, v, "run.lambdas") for v in lams]
    res = lambda_star_sweep(spec, model, lams, opts, mesh, jobs=cfg["run"]["jobs"])
    rows = []
    for r in res["rows"]:
        rows.append({k: v for k, v in r.items() if k not in ("x1", "x2")})
        if r["multiple"] and r["lambda"] == res["lambda_star"]:
            out["csv"]["solution.csv"] = r["x1"].to_csv()
            out["csv"]["solution_2.csv"] = r["x2"].to_csv()
            out["svg"] = _svg_trajectory(r["x1"], r["x2"])
    result = {"rows": rows, "lambda_star": res["lambda_star"]}
    if res["lambda_star"] is None:
        raise NonConvergenceError("no grid lambda produced two solutions", best=None, diagnostics=result)
    return result


def _cmd_homoclinic(cfg, out):
    from .homoclinic import continuation, nontriviality_guard
    model = _model(cfg)
    opts = _options(cfg)
    pr, rn = cfg["problem"], cfg["run"]
    g = parse_function(pr["g"], pr["b"])
    n_max = rn["n_max"] or 8
    try:
        run = continuation(model, g, pr["p"], pr["b"], n_max, opts, M_base=rn["M_base"], tol_decay=rn["tol_decay"])
    except NonConvergenceError as exc:
        part = exc.best
        if part is not None and part.profiles:
            out["csv"]["solution.csv"] = part.profiles[-1].to_csv()
        raise NonConvergenceError(str(exc), best=None, diagnostics={"entries": part.entries if part else []}) from exc
    t = run.candidate.mesh.nodes
    gv = g(t) if callable(g) else np.full(t.size, float(g))
    c_lower = pr["c_lower"] if pr["c_lower"] is not None else float(np.min(gv))
    guard = nontriviality_guard(model, run, c_lower=c_lower, p=pr["p"])
    out["csv"]["solution.csv"] = run.candidate.to_csv()
    out["svg"] = _svg_lines([("c_n", [e["n"] for e in run.entries], run.levels())], "c_n")
    result = {"entries": run.entries, "agreement": run.agreement, "converged": run.converged, "guard": guard}
    if not run.converged:
        raise NonConvergenceError("continuation did not meet the decay/agreement criteria", diagnostics=result)
    return result


def _cmd_spectrum(cfg, out):
    from .spectrum import verify_table
    pr = cfg["problem"]
    n_max = cfg["run"]["n_max"] or 4
    res = verify_table(pr["p"], pr["b"], n_max, tol=cfg["run"]["tol"])
    out["csv"]["spectrum.csv"] = res.to_csv()
    out["svg"] = _svg_lines([("formula", [r["n"] for r in res.rows], [r["lambda_formula"] for r in res.rows]),
                             ("shooting", [r["n"] for r in res.rows], [r["lambda_shooting"] for r in res.rows])], "lambda_n")
    return {"rows": res.rows, "max_rel_err": res.max_rel_err()}


def _cmd_audit(cfg, out):
    from .auditor import audit_hypotheses
    rn, pr = cfg["run"], cfg["problem"]
    profile = rn["profile"]
    if profile is None:
        raise ConfigError("audit needs --profile")
    params = {"p": pr["p"], "b": pr["b"], "samples": rn["samples"], "seed": cfg["solver"]["seed"], "radii": rn["r_max"]}
    for k in ("mu", "M_thresh"):
        if rn[k] is not None:
            params[k] = rn[k]
    if rn["x_star"] is not None:
        params["x_star"] = [_coerce(float, v, "run.x_star") for v in rn["x_star"]]
    if profile in ("Hg", "Hg1"):
        params["g"] = parse_function(pr["g"], pr["b"])
        if pr["c_lower"] is not None:
            params["c_lower"] = pr["c_lower"]
        model = None
    else:
        model = _model(cfg)
    if profile == "Hj5":
        params["h"] = parse_function(pr["h"], pr["b"])
        params["m"] = pr["m"]
    rep = audit_hypotheses(model, profile, params)
    return {"report": rep.as_dict(), "all_pass": rep.passed}


def _cmd_resonant(cfg, out):
    from .auditor import resonance_LL_check
    from .solvers import FourierUpTo, saddle_search
    model = _model(cfg)
    opts = _options(cfg)
    spec = _spec(cfg, "Resonant")
    mesh = make_mesh(cfg["problem"]["b"], cfg["problem"]["M"])
    h = GridFn(mesh, np.broadcast_to(np.asarray(
        spec.forcing(mesh.nodes) if callable(spec.forcing) else spec.forcing, dtype=float), (mesh.M,))[:, None].copy())
    theta = np.linspace(0.0, 2 * math.pi, cfg["run"]["theta_points"], endpoint=False)
    ll = resonance_LL_check(model, h, spec.m, cfg["problem"]["b"], theta)
    result = {"landesman_lazer": ll}
    cp = saddle_search(spec, model, FourierUpTo(spec.m), opts, mesh=mesh)
    out["csv"]["solution.csv"] = cp.x.to_csv()
    out["svg"] = _svg_trajectory(cp.x)
    result["critical_point"] = _cp_dict(cp)
    return result


_DISPATCH = {
    "solve": _cmd_solve, "multiplicity": _cmd_multiplicity, "homoclinic": _cmd_homoclinic,
    "spectrum": _cmd_spectrum, "audit": _cmd_audit, "resonant": _cmd_resonant,
}


# svg -----------------------------------------------------------------------

def _svg_lines(series, title, width=640, height=360):
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    pad = 40
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{pad}" y="20" font-size="14">{title}</text>',
             f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" fill="none" stroke="#888"/>']
    for i, (label, sx, sy) in enumerate(series):
        px = pad + (np.asarray(sx, dtype=float) - x0) / (x1 - x0) * (width - 2 * pad)
        py = height - pad - (np.asarray(sy, dtype=float) - y0) / (y1 - y0) * (height - 2 * pad)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        c = colors[i % len(colors)]
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - pad - 120}" y="{pad + 16 * (i + 1)}" font-size="12" fill="{c}">{label}</text>')
    parts.append(f'<text x="{pad}" y="{height - 10}" font-size="11">[{x0:.4g}, {x1:.4g}] x [{y0:.4g}, {y1:.4g}]</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_trajectory(*xs):
    series = []
    for k, x in enumerate(xs):
        for i in range(x.N):
            series.append((f"x{k + 1}_{i + 1}" if len(xs) > 1 else f"x{i + 1}", x.mesh.nodes, x.values[:, i]))
    return _svg_lines(series, "trajectory")


# entry points --------------------------------------------------------------

def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable, allow_nan=True) + "\n"


_SOLVER_FLAGS = [f for f in _SCHEMA["solver"]]


def _parser():
    ap = argparse.ArgumentParser(prog="plap", description="Critical points of nonsmooth p-Laplacian energies.")
    ap.add_argument("--version", action="version", version=f"plap {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, grid=True, solver=True):
        sp.add_argument("--config", help="INI or JSON configuration file")
        sp.add_argument("--out", dest="output.dir", help="output directory")
        sp.add_argument("--formats", dest="output.formats", help="comma list from json,csv,svg")
        sp.add_argument("--seed", dest="solver.seed", type=int)
        sp.add_argument("--p", dest="problem.p", type=float)
        sp.add_argument("--b", dest="problem.b", type=float)
        sp.add_argument("--potential", dest="potential.spec", help="name or name:k=v,...")
        if grid:
            sp.add_argument("--M", dest="problem.M", type=int, help="grid points per period")
        if solver:
            for name in _SOLVER_FLAGS:
                if name == "seed":
                    continue
                typ = _SCHEMA["solver"][name][0]
                sp.add_argument("--" + name.replace("_", "-"), dest="solver." + name, type=typ)

    sp = sub.add_parser("solve", help="one critical point of a chosen variant")
    common(sp)
    sp.add_argument("--variant", dest="problem.variant", choices=["Base", "Eigen", "Window", "Scalar", "Resonant"])
    sp.add_argument("--method", dest="run.method", choices=["minimize", "mountain_pass", "saddle"])
    sp.add_argument("--g", dest="problem.g")
    sp.add_argument("--c-lower", dest="problem.c_lower", type=float)
    sp.add_argument("--lam", dest="problem.lam", type=float)
    sp.add_argument("--m", dest="problem.m", type=int)
    sp.add_argument("--h", dest="problem.h")
    sp.add_argument("--n", dest="problem.n", type=int)
    sp.add_argument("--direction", dest="run.direction")

    sp = sub.add_parser("multiplicity", help="lambda sweep for two solutions")
    common(sp)
    sp.add_argument("--lambdas", dest="run.lambdas", help="comma list, ascending")
    sp.add_argument("--jobs", dest="run.jobs", type=int)

    sp = sub.add_parser("homoclinic", help="window continuation to a homoclinic candidate")
    common(sp, grid=False)
    sp.add_argument("--g", dest="problem.g")
    sp.add_argument("--c-lower", dest="problem.c_lower", type=float)
    sp.add_argument("--n-max", dest="run.n_max", type=int)
    sp.add_argument("--M-base", dest="run.M_base", type=int)
    sp.add_argument("--tol-decay", dest="run.tol_decay", type=float)

    sp = sub.add_parser("spectrum", help="scalar periodic p-Laplacian eigenvalues")
    common(sp, grid=False, solver=False)
    sp.add_argument("--n-max", dest="run.n_max", type=int)
    sp.add_argument("--tol", dest="run.tol", type=float)

    sp = sub.add_parser("audit", help="sampled hypothesis checks")
    common(sp, grid=False, solver=False)
    sp.add_argument("--profile", dest="run.profile", choices=["Hg", "Hg1", "Hj1", "Hj2", "Hj3", "Hj4", "Hj5"])
    sp.add_argument("--mu", dest="run.mu", type=float)
    sp.add_argument("--M", dest="run.M_thresh", type=float, help="threshold M of the mu-condition")
    sp.add_argument("--x-star", dest="run.x_star", help="comma list")
    sp.add_argument("--r-max", dest="run.r_max", type=float)
    sp.add_argument("--samples", dest="run.samples", type=int)
    sp.add_argument("--g", dest="problem.g")
    sp.add_argument("--c-lower", dest="problem.c_lower", type=float)
    sp.add_argument("--h", dest="problem.h")
    sp.add_argument("--m", dest="problem.m", type=int)

    sp = sub.add_parser("resonant", help="resonant problem: Landesman-Lazer check and saddle search")
    common(sp)
    sp.add_argument("--m", dest="problem.m", type=int)
    sp.add_argument("--h", dest="problem.h")
    sp.add_argument("--theta-points", dest="run.theta_points", type=int)
    return ap


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def run(argv=None) -> int:
    """Run one command; returns the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = _parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    t_start = time.perf_counter()
    try:
        file_data = _read_config(ns.config) if ns.config else {}
        over = {}
        for k, v in vars(ns).items():
            if "." in k:
                sec, key = k.split(".", 1)
                over[(sec, key)] = v
        cfg = resolve_config(ns.command, file_data, over)
    except ConfigError as exc:
        print(f"plap: config error: {exc}", file=sys.stderr)
        return 1
    outdir = cfg["output"]["dir"]
    formats = cfg["output"]["formats"]
    os.makedirs(outdir, exist_ok=True)
    _write(os.path.join(outdir, "config.json"), _dumps(cfg))
    echo = json.loads(json.dumps(cfg))
    echo["output"].pop("dir", None)
    report = {"command": ns.command, "config": echo, "version": __version__}
    out = {"csv": {}, "svg": None}
    code = 0
    try:
        report["result"] = _DISPATCH[ns.command](cfg, out)
        report["status"] = "ok"
    except (ConfigError, DomainError) as exc:
        print(f"plap: config error: {exc}", file=sys.stderr)
        return 1
    except (NonConvergenceError, GeometryError) as exc:
        report["status"] = "nonconvergence"
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["diagnostics"] = getattr(exc, "diagnostics", None)
        best = getattr(exc, "best", None)
        if isinstance(best, GridFn):
            out["csv"].setdefault("solution.csv", best.to_csv())
        print(f"plap: {report['error']}", file=sys.stderr)
        code = 2
    if "json" in formats:
        _write(os.path.join(outdir, "report.json"), _dumps(report))
    if "csv" in formats:
        for name, text in out["csv"].items():
            _write(os.path.join(outdir, name), text)
    if "svg" in formats and out["svg"]:
        _write(os.path.join(outdir, "run.svg"), out["svg"])
    _write(os.path.join(outdir, "timing.json"), _dumps({"command": ns.command, "wall_time_s": time.perf_counter() - t_start}))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
