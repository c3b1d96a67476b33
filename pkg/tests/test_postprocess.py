import numpy as np
import pytest

from galerkin_time.errors import ConfigError
from galerkin_time.mesh import uniform
from galerkin_time.polybasis import radau_zeros
from galerkin_time.postprocess import (
    check_continuity,
    check_galerkin_identity,
    postprocess,
    stabilization_functional,
    stabilization_integral,
)
from galerkin_time.problem import get_problem, make_problem
from galerkin_time.solvers import PiecewiseSolution, SolverConfig, solve_dg

CORPUS = ["cubic", "cosine", "decay", "riccati"]


def manual_dg_solution(coeffs, traces, k, T=1.0):
    N = coeffs.shape[0]
    return PiecewiseSolution(
        mesh=uniform(N, T),
        kind="DG",
        k=k,
        coeffs=np.asarray(coeffs, dtype=float),
        traces=np.asarray(traces, dtype=float),
    )


def test_lift_worked_example_k0():
    # one element (0, 1), constant value 2, incoming trace 1:
    # u*(t) = 2 + (1 - 2)(1 - t) = 1 + t
    dg = manual_dg_solution(np.array([[[2.0]]]), np.array([[1.0], [2.0]]), k=0)
    star = postprocess(dg)
    taus = np.linspace(-1, 1, 9)
    t = np.asarray(dg.mesh.from_reference(0, taus))
    np.testing.assert_allclose(star.eval_element(0, taus)[:, 0], 1 + t, atol=1e-15)
    assert star.eval_element(0, np.array([-1.0]))[0, 0] == 1.0
    assert star.eval_element(0, np.array([1.0]))[0, 0] == 2.0


def test_zero_jump_leaves_element_unchanged():
    p = get_problem("cubic")
    dg = solve_dg(p, uniform(1, 1.0), SolverConfig(k=3))  # exact: zero jumps
    star = postprocess(dg)
    np.testing.assert_allclose(star.coeffs[0, :4], dg.coeffs[0], atol=1e-14)
    np.testing.assert_allclose(star.coeffs[0, 4], 0.0, atol=1e-14)


def test_lift_requires_dg_kind():
    p = get_problem("decay")
    dg = solve_dg(p, uniform(2, 1.0), SolverConfig(k=1))
    star = postprocess(dg)
    with pytest.raises(ConfigError):
        postprocess(star)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("k", range(7))
@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_lift_is_continuous_with_trace_values(name, k, N):
    p = get_problem(name)
    dg = solve_dg(p, uniform(N, 1.0), SolverConfig(k=k))
    star = postprocess(dg)
    report = check_continuity(star, dg)
    assert report.passed, (report.failed_clause, report.element)
    # endpoint values equal the traces on every element
    rights = star.right_limits()
    lefts = star.left_limits()
    bound = 1e-12 * dg.scale()
    assert np.abs(rights - star.traces[:-1]).max() <= bound
    assert np.abs(lefts - star.traces[1:]).max() <= bound


def test_corrupted_lift_fails_with_element_index():
    p = get_problem("riccati")
    dg = solve_dg(p, uniform(6, 1.0), SolverConfig(k=2))
    star = postprocess(dg)
    star.coeffs[3, 1, 0] += 1e-6
    report = check_continuity(star, dg)
    assert not report.passed
    assert report.failed_clause in ("continuity", "traces")
    assert report.element is not None


def test_wrong_shape_fails_degree_clause():
    p = get_problem("decay")
    dg = solve_dg(p, uniform(2, 1.0), SolverConfig(k=1))
    report = check_continuity(dg, dg)  # raw DG is not a lift
    assert not report.passed
    assert report.failed_clause == "degree"


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("k", range(7))
@pytest.mark.parametrize("N", [4, 16, 64])
def test_lift_satisfies_galerkin_equations(name, k, N):
    # the lifted solution solves the continuous-method equations with the
    # right-hand side still evaluated on the DG solution
    p = get_problem(name)
    cfg = SolverConfig(k=k)
    dg = solve_dg(p, uniform(N, 1.0), cfg)
    star = postprocess(dg)
    report = check_galerkin_identity(star, dg, p, cfg)
    scale = dg.scale()
    assert report.max_residual <= 1e-10 * scale
    assert report.max_gap <= 1e-12 * scale


def test_identity_zero_rhs_tight():
    p = make_problem("zero", "polynomial", {"coeffs": [0.0]}, [1.3], 1.0)
    cfg = SolverConfig(k=2)
    dg = solve_dg(p, uniform(4, 1.0), cfg)
    star = postprocess(dg)
    report = check_galerkin_identity(star, dg, p, cfg)
    assert report.max_residual <= 1e-14
    assert report.max_gap <= 1e-14


def test_identity_radau_mode():
    # same identity when the solve interpolates f at the Radau points
    p = get_problem("riccati")
    cfg = SolverConfig(k=3, rhs_mode="radau_interpolated")
    dg = solve_dg(p, uniform(8, 1.0), cfg)
    star = postprocess(dg)
    report = check_galerkin_identity(star, dg, p, cfg)
    assert report.max_residual <= 1e-10 * dg.scale()


def test_raw_dg_has_visible_jumps():
    # negative control: the unlifted solution fails the continuity bound
    p = get_problem("riccati")
    dg = solve_dg(p, uniform(4, 1.0), SolverConfig(k=1))
    jumps = np.abs(dg.right_limits()[1:] - dg.left_limits()[:-1]).max()
    assert jumps > 1e-8 * dg.scale()


def test_initial_value_gap_detected():
    dg = manual_dg_solution(np.array([[[2.0]]]), np.array([[1.5], [2.0]]), k=0)
    star = postprocess(dg)
    p = make_problem("zero", "polynomial", {"coeffs": [0.0]}, [1.0], 1.0)
    report = check_galerkin_identity(star, dg, p, SolverConfig(k=0))
    assert report.gaps[0] == pytest.approx(0.5)  # u*(0+) = 1.5 but u0 = 1


# --- stabilization functional ----------------------------------------------


def unit_jump_solution(k):
    # constant zero on one element with incoming trace 1: jump exactly 1
    coeffs = np.zeros((1, k + 1, 1))
    traces = np.array([[1.0], [0.0]])
    return manual_dg_solution(coeffs, traces, k=k)


def test_stabilization_zero_jump():
    p = get_problem("cubic")
    dg = solve_dg(p, uniform(1, 1.0), SolverConfig(k=3))  # exact, zero jump
    for j in range(4):
        v = np.zeros(j + 1)
        v[j] = 1.0
        assert abs(stabilization_functional(dg, 0, v)) <= 1e-13


def test_stabilization_unit_jump_constant_test_function():
    dg = unit_jump_solution(k=2)
    s = stabilization_functional(dg, 0, [1.0])
    assert s == pytest.approx(-1.0, abs=1e-15)
    assert stabilization_integral(dg, 0, [1.0]) == pytest.approx(-1.0, abs=1e-14)


@pytest.mark.parametrize("k", range(9))
def test_stabilization_unit_jump_all_test_functions(k):
    dg = unit_jump_solution(k=k)
    for j in range(k + 1):
        v = np.zeros(j + 1)
        v[j] = 1.0
        s = stabilization_functional(dg, 0, v)
        assert s == pytest.approx(-((-1.0) ** j), abs=1e-14)
        assert stabilization_integral(dg, 0, v) == pytest.approx(s, abs=1e-13)


def test_stabilization_forms_agree_on_solved_problems():
    rng = np.random.default_rng(18)
    p = get_problem("riccati")
    dg = solve_dg(p, uniform(5, 1.0), SolverConfig(k=3))
    scale = dg.scale()
    for n in range(5):
        for _ in range(4):
            v = rng.standard_normal(rng.integers(1, 5))
            a = stabilization_functional(dg, n, v)
            b = stabilization_integral(dg, n, v)
            assert abs(a - b) <= 1e-13 * scale * (1 + np.abs(v).sum())


def test_stabilization_rejects_high_degree_test_function():
    dg = unit_jump_solution(k=1)
    with pytest.raises(ConfigError):
        stabilization_functional(dg, 0, np.ones(4))


def test_lift_agrees_with_dg_at_radau_zeros():
    p = get_problem("decay")
    for k in (0, 1, 2, 4):
        dg = solve_dg(p, uniform(6, 1.0), SolverConfig(k=k))
        star = postprocess(dg)
        z = radau_zeros(k)
        for n in range(6):
            np.testing.assert_allclose(
                star.eval_element(n, z),
                dg.eval_element(n, z),
                atol=1e-12 * dg.scale(),
            )
