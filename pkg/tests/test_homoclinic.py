import math

import numpy as np
import pytest

from _oracles import CONTINUUM_LEVEL_L10, sech_oracle
from plap.energy import ProblemSpec, energy, window_mesh
from plap.errors import DomainError, MeshMismatchError, NonConvergenceError
from plap.grid import GridFn, make_mesh
from plap.homoclinic import (HomoclinicRun, center_at_peak, continuation, extend_guess, nontriviality_guard,
                             solve_window)
from plap.potential import builtin

QUARTIC = builtin("quartic")


@pytest.fixture(scope="module")
def short_run():
    return continuation(QUARTIC, 1.0, 2.0, 5.0, 4, M_base=128)


def test_window_level_matches_continuum():
    cp = solve_window(QUARTIC, 1.0, 1, 2.0, 5.0, M_base=256)
    assert cp.residual_weak <= 1e-6 and cp.x.sup_norm() > 1.0
    assert abs(cp.energy - CONTINUUM_LEVEL_L10) <= 2e-4


def test_window_level_second_order():
    errs = [abs(solve_window(QUARTIC, 1.0, 1, 2.0, 5.0, M_base=M).energy - CONTINUUM_LEVEL_L10) for M in (128, 256)]
    assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_window_zero_potential():
    with pytest.raises(Exception) as exc:
        solve_window(builtin("zero"), 1.0, 1, 2.0, 5.0, M_base=64)
    assert type(exc.value).__name__ in ("NoDescentDirectionError", "GeometryError")


def test_extend_guess_zero():
    z = GridFn.zeros(window_mesh(5.0, 1, 64))
    y = extend_guess(z, 1, 2)
    assert y.mesh.M == 128 and y.mesh.t0 == -10.0 and y.mesh.h == z.mesh.h
    assert np.all(y.values == 0)


def test_extend_guess_keeps_values_and_energy():
    m = window_mesh(5.0, 1, 128)
    # compact support inside the window, so the extension adds no energy
    x = GridFn.from_callable(m, lambda t: np.where(np.abs(t) < 3, np.cos(np.pi * t / 6) ** 4, 0.0))
    y = extend_guess(x, 1, 3)
    shift = (y.mesh.M - m.M) // 2
    assert np.array_equal(y.values[shift:shift + m.M], x.values)
    assert np.all(y.values[:shift] == 0) and np.all(y.values[shift + m.M:] == 0)
    np.testing.assert_allclose(y.t[shift:shift + m.M], x.t, atol=1e-12)
    e1 = energy(ProblemSpec("Window", 2.0, g=1.0, n=1), QUARTIC, x)
    e3 = energy(ProblemSpec("Window", 2.0, g=1.0, n=3), QUARTIC, y)
    assert e3 == pytest.approx(e1, rel=1e-13)


def test_extend_guess_errors():
    m = window_mesh(5.0, 2, 64)
    with pytest.raises(DomainError):
        extend_guess(GridFn.zeros(m), 2, 2)
    with pytest.raises(MeshMismatchError):
        extend_guess(GridFn.zeros(make_mesh(10.0, 64)), 1, 2)


def test_continuation_monitors(short_run):
    run = short_run
    assert [e["n"] for e in run.entries] == [1, 2, 3, 4]
    assert all(e["residual"] <= 1e-6 for e in run.entries)
    c = run.levels()
    # levels settle near the whole-line value 4/3
    assert abs(c[-1] - c[-2]) <= 1e-6
    assert abs(c[-1] - 4 / 3) <= 2e-3
    assert run.converged
    sups = [e["sup_norm"] for e in run.entries]
    assert (max(sups) - min(sups)) / max(sups) <= 0.2


def test_candidate_near_sech(short_run):
    x = center_at_peak(short_run.candidate)
    err = np.max(np.abs(np.abs(x.values[:, 0]) - sech_oracle(x.t)))
    assert err <= 1e-2


def test_run_json(short_run):
    text = short_run.to_json("candidate.csv")
    assert '"converged": true' in text and "candidate.csv" in text


def test_continuation_needs_two_windows():
    with pytest.raises(DomainError):
        continuation(QUARTIC, 1.0, 2.0, 5.0, 1)


def test_continuation_failure_carries_partial_run():
    with pytest.raises(NonConvergenceError) as exc:
        continuation(builtin("zero"), 1.0, 2.0, 5.0, 2, M_base=64)
    assert isinstance(exc.value.best, HomoclinicRun)


def test_guard_on_quartic(short_run):
    out = nontriviality_guard(QUARTIC, short_run, c_lower=1.0, p=2.0)
    assert out["ok"] and out["hypotheses_verified"]
    assert out["ess_sup_h"] == pytest.approx(2.0, abs=1e-2)


def test_guard_on_zero():
    m = window_mesh(5.0, 2, 64)
    run = HomoclinicRun(entries=[{"n": 2}], candidate=GridFn.zeros(m))
    out = nontriviality_guard(QUARTIC, run, c_lower=1.0)
    assert not out["ok"] and out["ess_sup_h"] == 0.0


def test_guard_flags_abs():
    m = window_mesh(5.0, 2, 64)
    run = HomoclinicRun(entries=[{"n": 2}], candidate=GridFn.from_callable(m, lambda t: np.exp(-t * t)))
    out = nontriviality_guard(builtin("abs"), run, c_lower=1.0, p=2.0)
    assert not out["hypotheses_verified"]


def test_guard_needs_entries():
    with pytest.raises(DomainError):
        nontriviality_guard(QUARTIC, HomoclinicRun())


def test_center_at_peak():
    m = window_mesh(5.0, 1, 64)
    x = GridFn.from_callable(m, lambda t: np.exp(-(t - 1.25) ** 2))
    c = center_at_peak(x)
    k = int(np.argmax(c.values[:, 0]))
    assert c.t[k] == pytest.approx(0.0, abs=1e-12)
