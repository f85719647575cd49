"""Critical points of nonsmooth periodic p-Laplacian energies.

Discrete energies on uniform periodic grids, Clarke subgradient data for
locally Lipschitz potentials, minimization, mountain-pass and saddle
searches, homoclinic window continuation, a hypothesis auditor and the
scalar p-Laplacian spectrum.
"""
__version__ = "0.1.0"

from .errors import (ConfigError, DomainError, GeometryError, MeshMismatchError, NoDescentDirectionError,
                     NonConvergenceError, UnsupportedPotentialError)
from .grid import GridFn, Mesh, fourier_project, lp_norm, make_mesh, mean_zero_project, w1p_norm
from .potential import builtin, builtin_names, eval_j, j0_estimate, select_subgrad, subgrad_distance
from .energy import ProblemSpec, energy, gradient_selection, residual_strong, residual_weak, window_mesh
from .solvers import (CriticalPoint, FourierUpTo, MeanZero, SolveOptions, lambda_star_sweep, minimize,
                      mountain_pass, rim_estimate, saddle_search)
from .homoclinic import HomoclinicRun, continuation, extend_guess, nontriviality_guard, solve_window
from .auditor import audit_hypotheses, equivalence_check, estimate_asymptotics, gap_constant, resonance_LL_check
from .spectrum import eigenvalue_formula, pi_p, shooting_eigenvalue, verify_table
from .kernels import BACKEND

__all__ = [
    "ConfigError", "DomainError", "GeometryError", "MeshMismatchError", "NoDescentDirectionError",
    "NonConvergenceError", "UnsupportedPotentialError", "GridFn", "Mesh", "fourier_project", "lp_norm",
    "make_mesh", "mean_zero_project", "w1p_norm", "builtin", "builtin_names", "eval_j", "j0_estimate",
    "select_subgrad", "subgrad_distance", "ProblemSpec", "energy", "gradient_selection", "residual_strong",
    "residual_weak", "window_mesh", "CriticalPoint", "FourierUpTo", "MeanZero", "SolveOptions",
    "lambda_star_sweep", "minimize", "mountain_pass", "rim_estimate", "saddle_search", "HomoclinicRun",
    "continuation", "extend_guess", "nontriviality_guard", "solve_window", "audit_hypotheses",
    "equivalence_check", "estimate_asymptotics", "gap_constant", "resonance_LL_check", "eigenvalue_formula",
    "pi_p", "shooting_eigenvalue", "verify_table", "BACKEND", "__version__",
]
