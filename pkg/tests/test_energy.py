import math

import numpy as np
import pytest

from _oracles import BUILTINS, VECTOR_CAPABLE, fd_relative_error, smooth_point, variant_setup
from plap.energy import (Assembler, ProblemSpec, discrete_lambda, energy, gradient_selection, residual_strong,
                         residual_weak, window_mesh)
from plap.errors import DomainError, MeshMismatchError
from plap.grid import GridFn, make_mesh
from plap.potential import builtin


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("xi", [-1.3, 0.0, 0.8])
def test_energy_of_constant(p, xi):
    m = make_mesh(3.0, 32)
    e = energy(ProblemSpec("Base", p=p, g=1.0), builtin("zero"), GridFn.constant(m, xi))
    assert e == pytest.approx(3.0 / p * abs(xi) ** p, abs=1e-12)


def test_eigen_energy_at_zero():
    m = make_mesh(1.0, 64)
    spec = ProblemSpec("Eigen", p=3.0, g=1.0, lam=17.0)
    assert energy(spec, builtin("thm2_example", r=2, p=3), GridFn.zeros(m)) == 0.0


def test_resonant_vanishes_on_kernel():
    m = make_mesh(2 * math.pi, 128)
    spec = ProblemSpec("Resonant", p=2.0, m=1, forcing=0.0)
    x = GridFn.from_callable(m, lambda t: np.sin(m.omega * t))
    assert abs(energy(spec, builtin("zero"), x)) <= 1e-10


def test_discrete_lambda_limit():
    assert discrete_lambda(1, make_mesh(2 * math.pi, 4096)) == pytest.approx(1.0, rel=1e-6)
    assert discrete_lambda(0, make_mesh(1.0, 16)) == 0.0


def test_gradient_linear_operator():
    m = make_mesh(2 * math.pi, 256)
    x = GridFn.from_callable(m, np.sin)
    G = gradient_selection(ProblemSpec("Base", p=2.0, g=1.0), builtin("zero"), x)
    assert np.max(np.abs(G.values[:, 0] - 2 * np.sin(m.nodes))) <= 5e-3


def test_gradient_abs_at_zero():
    m = make_mesh(1.0, 32)
    G = gradient_selection(ProblemSpec("Scalar", p=2.0), builtin("abs"), GridFn.zeros(m))
    assert np.all(G.values == 0)


@pytest.mark.parametrize("variant", ["Base", "Eigen", "Window", "Scalar", "Resonant"])
@pytest.mark.parametrize("name, params", BUILTINS)
def test_gradient_matches_finite_differences(variant, name, params, rng):
    spec, model, mesh = variant_setup(variant, name, params)
    asm = Assembler(spec, model, mesh)
    worst = 0.0
    for _ in range(10):
        X = smooth_point(model, mesh, 1, rng)
        V = rng.standard_normal(X.shape)
        worst = max(worst, fd_relative_error(asm, X, V))
    assert worst <= 1e-5


@pytest.mark.parametrize("variant", ["Base", "Eigen", "Window"])
@pytest.mark.parametrize("name", sorted(VECTOR_CAPABLE))
def test_gradient_fd_vector(variant, name, rng):
    params = dict(BUILTINS)[name]
    spec, model, mesh = variant_setup(variant, name, params, N=2)
    asm = Assembler(spec, model, mesh)
    for _ in range(5):
        X = smooth_point(model, mesh, 2, rng)
        assert fd_relative_error(asm, X, rng.standard_normal(X.shape)) <= 1e-5


def test_residual_weak_examples():
    m = make_mesh(2 * math.pi, 256)
    base = ProblemSpec("Base", p=2.0, g=1.0)
    assert residual_weak(base, builtin("thm1_example", mu=3, p=2), GridFn.zeros(m)) == 0.0
    r = residual_weak(base, builtin("zero"), GridFn.from_callable(m, np.sin))
    # |2 sin|_2 = 2 sqrt(pi)
    assert r > 0.1
    assert r == pytest.approx(2 * math.sqrt(math.pi), rel=1e-3)


def test_residual_weak_on_constant_critical_point():
    m = make_mesh(2 * math.pi, 64)
    assert residual_weak(ProblemSpec("Base", p=2.0, g=1.0), builtin("quartic"), GridFn.constant(m, 1.0)) <= 1e-10


def test_residual_strong_examples():
    m = make_mesh(1.0, 64)
    rs = residual_strong(ProblemSpec("Base", p=2.0, g=1.0), builtin("thm1_example", mu=3, p=2), GridFn.zeros(m))
    assert rs.inclusion_dist == 0.0 and rs.bc_primal == 0.0 and rs.bc_deriv == 0.0
    x = GridFn.from_callable(m, lambda t: np.sin(2 * math.pi * t))
    rs = residual_strong(ProblemSpec("Base", p=2.0, g=1.0), builtin("quartic"), x)
    assert rs.bc_primal == 0.0 and rs.inclusion_dist > 0


def test_mountain_geometry_quartic():
    m = make_mesh(2 * math.pi, 128)
    spec, model = ProblemSpec("Base", p=2.0, g=1.0), builtin("quartic")
    rng = np.random.default_rng(3)
    for _ in range(20):
        X = rng.standard_normal((m.M, 1))
        X *= 0.05 / np.max(np.abs(X))
        assert energy(spec, model, GridFn(m, X)) > 0
    one = GridFn.constant(m, 1.0)
    levels = [energy(spec, model, s * one) for s in (2.0, 4.0, 8.0)]
    assert levels[0] > levels[1] > levels[2] and levels[2] < -1e3


def test_eigen_coercive_for_thm2():
    m = make_mesh(1.0, 64)
    spec, model = ProblemSpec("Eigen", p=3.0, g=1.0, lam=4.0), builtin("thm2_example", r=2, p=3)
    rng = np.random.default_rng(5)
    X = rng.standard_normal((m.M, 1))
    levels = [energy(spec, model, GridFn(m, s * X)) for s in (10.0, 100.0, 1000.0)]
    assert levels[0] < levels[1] < levels[2]


def test_errors():
    m = make_mesh(1.0, 16)
    with pytest.raises(DomainError):
        ProblemSpec("Other")
    with pytest.raises(DomainError):
        ProblemSpec("Resonant", p=3.0)
    with pytest.raises(DomainError):
        energy(ProblemSpec("Base", p=2.0, g=-1.0), builtin("zero"), GridFn.zeros(m))
    with pytest.raises(DomainError):
        energy(ProblemSpec("Base", p=2.0, g=lambda t: 1 + t), builtin("zero"), GridFn.zeros(m))
    with pytest.raises(MeshMismatchError):
        energy(ProblemSpec("Window", p=2.0, g=1.0), builtin("zero"), GridFn.zeros(m))
    with pytest.raises(MeshMismatchError):
        energy(ProblemSpec("Base", p=2.0, g=1.0), builtin("quartic", N=2), GridFn.zeros(m))
    with pytest.raises(DomainError):
        energy(ProblemSpec("Scalar", p=2.0), builtin("quartic", N=2), GridFn.zeros(m, 2))


def test_window_mesh_spacing():
    for n in (1, 2, 5):
        wm = window_mesh(5.0, n, 256)
        assert wm.h == pytest.approx(10.0 / 256) and wm.t0 == -5.0 * n
