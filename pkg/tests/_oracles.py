"""Shared oracles and frozen reference values for the test suite."""
import math

import numpy as np

from plap.energy import Assembler, ProblemSpec, window_mesh
from plap.grid import make_mesh
from plap.potential import builtin

# Level of the periodic mountain-pass solution of -x'' + x = x^3 on a
# window of length 10, computed once by shooting the continuum ODE
# (energy integral of the dnoidal orbit whose period is 10) with scipy
# solve_ivp at rtol 1e-12. Frozen here; independent of the grid code.
CONTINUUM_LEVEL_L10 = 1.3326055101656624
CONTINUUM_LEVEL_L20 = 1.3333333003548566
# energy of sqrt(2) sech on the whole line: int (x'^2/2 + x^2/2 - x^4/4) = 4/3
HOMOCLINIC_LEVEL = 4.0 / 3.0

BUILTINS = [
    ("thm1_example", {"mu": 3, "p": 2}),
    ("thm2_example", {"r": 2, "p": 3}),
    ("prop8_example", {}),
    ("quartic", {}),
    ("abs", {}),
    ("linear_forced", {"h": 0.7}),
    ("power", {"q": 3}),
    ("zero", {}),
]

VECTOR_CAPABLE = {"thm1_example", "thm2_example", "quartic", "power", "zero"}


def variant_setup(variant, name, params, N=1, M=64):
    """Spec, model and mesh for one variant/potential pair."""
    model = builtin(name, **({**params, "N": N} if N > 1 else params))
    b = 2.0
    if variant == "Base":
        spec = ProblemSpec("Base", p=2.0, g=lambda t: 1 + 0.5 * np.cos(math.pi * t))
        mesh = make_mesh(b, M)
    elif variant == "Eigen":
        spec = ProblemSpec("Eigen", p=3.0, g=lambda t: 1 + 0.5 * np.cos(math.pi * t), lam=2.5)
        mesh = make_mesh(b, M)
    elif variant == "Window":
        spec = ProblemSpec("Window", p=2.0, g=lambda t: 1 + 0.5 * np.cos(math.pi * t / b), n=2)
        mesh = window_mesh(b, 2, M // 2)
    elif variant == "Scalar":
        spec = ProblemSpec("Scalar", p=2.5)
        mesh = make_mesh(b, M)
    else:
        spec = ProblemSpec("Resonant", p=2.0, m=1, forcing=lambda t: 0.3 * np.sin(math.pi * t))
        mesh = make_mesh(b, M)
    return spec, model, mesh


def smooth_point(model, mesh, N, rng, min_dist=1e-2):
    """Random trigonometric x whose nodes all keep ``min_dist`` from the kink locus."""
    t = (mesh.nodes - mesh.t0) * 2 * math.pi / mesh.b
    for _ in range(1000):
        X = np.empty((mesh.M, N))
        for k in range(N):
            a = rng.uniform(-1, 1, 3)
            c = rng.uniform(-2.5, 2.5)
            X[:, k] = c + a[0] * np.sin(t + a[1]) + 0.3 * a[2] * np.cos(2 * t)
        _, dist, _ = model.kink_snap(mesh.nodes, X)
        if np.all(dist >= min_dist):
            return X
    raise RuntimeError("no smooth point found")


def fd_relative_error(asm: Assembler, X, V, eps=1e-6):
    """Relative mismatch between <grad, V> h and the central difference of the energy."""
    G = asm.grad(X)
    exact = float(np.sum(G * V) * asm.h)
    fd = (asm.energy(X + eps * V) - asm.energy(X - eps * V)) / (2 * eps)
    # guard the quotient when the directional derivative is accidentally tiny
    scale = max(abs(fd), 1e-6 * math.sqrt(np.sum(G * G) * asm.h) * math.sqrt(np.sum(V * V) * asm.h), 1e-300)
    return abs(exact - fd) / scale


def sech_oracle(t):
    return math.sqrt(2.0) / np.cosh(t)
