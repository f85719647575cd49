import math

import numpy as np
import pytest

from plap.energy import ProblemSpec, energy
from plap.errors import DomainError, GeometryError, NoDescentDirectionError
from plap.grid import GridFn, make_mesh
from plap.potential import builtin
from plap.solvers import (FourierUpTo, MeanZero, SolveOptions, find_far_endpoint, lambda_star_sweep, minimize,
                          mountain_pass, perturbed_zero, positive_direction, rim_estimate, saddle_search)

OPTS = SolveOptions()
BASE = ProblemSpec("Base", p=2.0, g=1.0)


def test_minimize_linear_oracle():
    m = make_mesh(2 * math.pi, 256)
    cp = minimize(BASE, builtin("linear_forced", h=np.sin), GridFn.zeros(m), OPTS)
    assert np.max(np.abs(cp.x.values[:, 0] - np.sin(m.nodes) / 2)) <= 1e-4
    assert cp.kind == "minimizer"


def test_minimize_zero_potential():
    m = make_mesh(1.0, 64)
    x0 = GridFn.from_callable(m, lambda t: 1 + np.cos(2 * math.pi * t))
    cp = minimize(BASE, builtin("zero"), x0, OPTS)
    assert cp.x.sup_norm() <= 1e-6
    assert abs(cp.energy) <= 1e-12


def test_minimize_eigen_negative_level():
    m = make_mesh(1.0, 64)
    spec, model = ProblemSpec("Eigen", p=3.0, g=1.0, lam=256.0), builtin("thm2_example", r=2, p=3)
    y = positive_direction(spec, model, m, 1)
    cp = minimize(spec, model, GridFn(m, y), OPTS)
    assert cp.energy < 0 and cp.residual_weak <= 1e-6


def test_rim_quartic_positive():
    m = make_mesh(2 * math.pi, 128)
    assert rim_estimate(BASE, builtin("quartic"), 0.1, 4, OPTS, m) > 0


def test_rim_zero_potential_is_convex_part():
    m = make_mesh(2 * math.pi, 64)
    # on the W^{1,2} sphere the convex part is rho^2/2 at every point
    assert rim_estimate(BASE, builtin("zero"), 0.1, 2, OPTS, m) == pytest.approx(0.005, rel=1e-9)


def test_rim_shrinks_with_rho():
    m = make_mesh(2 * math.pi, 64)
    vals = [rim_estimate(BASE, builtin("quartic"), r, 2, OPTS, m) for r in (0.1, 0.01, 0.001)]
    assert vals[0] > vals[1] > vals[2] > 0 and vals[2] < 1e-5


def test_rim_rejects_rho():
    with pytest.raises(DomainError):
        rim_estimate(BASE, builtin("quartic"), 0.0, 2, OPTS, make_mesh(1.0, 16))


def test_far_endpoint_quartic():
    m = make_mesh(2 * math.pi, 64)
    out = find_far_endpoint(BASE, builtin("quartic"), GridFn.constant(m, 1.0), OPTS)
    xi = out["lambda_scale"]
    assert xi ** 2 > 2 and energy(BASE, builtin("quartic"), out["e"]) < 0


def test_far_endpoint_thm1_positive_direction():
    m = make_mesh(1.0, 64)
    model = builtin("thm1_example", mu=3, p=2)
    y = positive_direction(BASE, model, m, 1)
    assert np.sum(model.eval(m.nodes, y)) * m.h > 0
    out = find_far_endpoint(BASE, model, GridFn(m, y), OPTS)
    assert energy(BASE, model, out["e"]) < 0


def test_far_endpoint_zero_fails():
    m = make_mesh(1.0, 32)
    with pytest.raises(NoDescentDirectionError):
        find_far_endpoint(BASE, builtin("zero"), GridFn.constant(m, 1.0), OPTS)


def test_mountain_pass_quartic():
    m = make_mesh(2 * math.pi, 128)
    model = builtin("quartic")
    d = GridFn.from_callable(m, lambda t: 1 + 0.3 * np.cos(t))
    e = find_far_endpoint(BASE, model, d, OPTS)["e"]
    cp = mountain_pass(BASE, model, e, OPTS)
    assert cp.kind == "mountain_pass"
    assert cp.residual_weak <= 1e-6 and cp.x.sup_norm() >= 1e-3
    assert 0 < cp.level <= math.pi / 2 + 1e-6
    assert cp.energy >= cp.rim["xi"] - 1e-6
    hist = np.asarray(cp.history["path_max"])
    assert np.all(np.diff(hist) <= 1e-12)


def test_mountain_pass_thm1():
    m = make_mesh(1.0, 128)
    model = builtin("thm1_example", mu=3, p=2)
    y = positive_direction(BASE, model, m, 1)
    e = find_far_endpoint(BASE, model, GridFn(m, y), OPTS)["e"]
    cp = mountain_pass(BASE, model, e, OPTS)
    assert cp.x.sup_norm() >= 1e-3
    assert cp.residual_strong.inclusion_dist <= 5 * m.h


def test_mountain_pass_endpoint_above_rim():
    m = make_mesh(2 * math.pi, 64)
    small = GridFn.constant(m, 0.5)
    # energy(0.5) = b (0.125 - 0.015625) > 0 > any rim guess we hand in
    with pytest.raises(GeometryError):
        mountain_pass(BASE, builtin("quartic"), small, OPTS, rim=0.01)
    with pytest.raises(GeometryError):
        mountain_pass(BASE, builtin("quartic"), GridFn.constant(m, 1e-3), OPTS)


def test_saddle_abs_scalar():
    m = make_mesh(2 * math.pi, 128)
    cp = saddle_search(ProblemSpec("Scalar", p=2.0), builtin("abs"), MeanZero(), OPTS, mesh=m)
    assert cp.residual_weak <= 1e-6
    assert cp.residual_strong.inclusion_dist <= 5 * m.h


def test_saddle_zero_scalar():
    m = make_mesh(2 * math.pi, 64)
    # energy is flat along constants, so the anticoercivity sampler warns
    with pytest.warns(RuntimeWarning, match="saddle geometry"):
        cp = saddle_search(ProblemSpec("Scalar", p=2.0), builtin("zero"), MeanZero(), OPTS, mesh=m)
    assert cp.residual_weak <= 1e-6
    assert np.ptp(cp.x.values) <= 1e-6


def test_saddle_resonant_abs():
    m = make_mesh(2 * math.pi, 128)
    spec = ProblemSpec("Resonant", p=2.0, m=1, forcing=0.0)
    cp = saddle_search(spec, builtin("abs"), FourierUpTo(1), OPTS, mesh=m)
    assert cp.residual_weak <= 1e-6


def test_saddle_split_mismatch():
    m = make_mesh(1.0, 32)
    with pytest.raises(DomainError):
        saddle_search(BASE, builtin("abs"), MeanZero(), OPTS, mesh=m)
    with pytest.raises(DomainError):
        saddle_search(ProblemSpec("Scalar", p=2.0), builtin("abs"), FourierUpTo(1), OPTS, mesh=m)


def test_sweep_empty_and_zero_lambda():
    m = make_mesh(1.0, 64)
    spec, model = ProblemSpec("Eigen", p=3.0, g=1.0), builtin("thm2_example", r=2, p=3)
    out = lambda_star_sweep(spec, model, [], OPTS, m)
    assert out == {"rows": [], "lambda_star": None}
    out = lambda_star_sweep(spec, model, [0.0], OPTS, m)
    row = out["rows"][0]
    assert not row["multiple"] and row["x2"] is None
    # p = 3 makes the energy flat to third order at 0, so check the level, not the iterate
    assert 0 <= row["phi1"] <= 1e-9
    assert "not negative" in row["error"]
    with pytest.raises(DomainError):
        lambda_star_sweep(spec, model, [2.0, 1.0], OPTS, m)


def test_perturbed_zero_deterministic():
    m = make_mesh(1.0, 32)
    a, b = perturbed_zero(m, 2, 7), perturbed_zero(m, 2, 7)
    assert np.array_equal(a.values, b.values)
    assert 0 < a.sup_norm() <= 1e-2


def test_mountain_pass_deterministic():
    m = make_mesh(2 * math.pi, 64)
    model = builtin("quartic")
    e = find_far_endpoint(BASE, model, GridFn.from_callable(m, lambda t: 1 + 0.3 * np.cos(t)), OPTS)["e"]
    a = mountain_pass(BASE, model, e, OPTS)
    b = mountain_pass(BASE, model, e, OPTS)
    assert a.x.values.tobytes() == b.x.values.tobytes()
    assert a.energy == b.energy


def test_options_validation():
    with pytest.raises(DomainError):
        SolveOptions(tol_residual=0.0)
    with pytest.raises(DomainError):
        SolveOptions(path_points=4)
