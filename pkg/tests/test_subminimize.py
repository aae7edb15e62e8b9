import math

import numpy as np
import pytest

import minsection as ms
from minsection.subminimize import SliceProblem


def test_probe_sine_valley_positive(entries, split01):
    cert = ms.probe_y_convexity(entries["SINE_VALLEY"].merit, split01, grid_density=9)
    assert cert.positive
    assert cert.verdict == "positive_definite_everywhere_sampled"
    assert cert.min_eig_over_samples == pytest.approx(2.0, abs=1e-3)


def test_probe_degen_line_positive_in_y(entries, split01):
    # hand differentiation: d^2/dy^2 (x + y - 2)^2 = 2; the degeneracy lives
    # in the full Hessian, not the eliminated block
    cert = ms.probe_y_convexity(entries["DEGEN_LINE"].merit, split01, grid_density=9)
    assert cert.positive
    assert cert.min_eig_over_samples == pytest.approx(2.0, abs=1e-3)


def test_probe_neg_y_violated(entries, split01):
    cert = ms.probe_y_convexity(entries["NEG_Y"].merit, split01, grid_density=5)
    assert not cert.positive
    assert cert.verdict == "violated"
    assert cert.witness is not None
    assert cert.witness_min_eig <= 0.0
    assert cert.witness_min_eig == pytest.approx(-2.0, abs=1e-3)


def test_probe_full_convexity(aniso3, entries):
    merit, _ = aniso3
    assert ms.probe_full_convexity(merit, grid_density=5).positive
    assert not ms.probe_full_convexity(entries["TWO_WELLS"].merit, grid_density=7).positive


def test_linear_elimination_exact(entries, split01):
    sub = ms.subminimize_linear(SliceProblem(entries["EXP_FIT"].merit, split01, [-0.5]))
    assert sub.method == "linear_elimination"
    assert sub.y_star[0] == pytest.approx(2.0, abs=1e-12)
    assert sub.value == pytest.approx(0.0, abs=1e-20)
    assert sub.grad_y_norm <= 1e-8
    assert sub.y_hessian_min_eig > 0.0


def test_linear_elimination_constant_basis_is_mean(entries, split01):
    # at x = 0 the single basis map is identically 1, so the optimal
    # coefficient is the sample mean
    from minsection.problems import EXP_FIT_DATA

    sub = ms.subminimize_linear(SliceProblem(entries["EXP_FIT"].merit, split01, [0.0]))
    assert sub.y_star[0] == pytest.approx(float(np.mean(EXP_FIT_DATA)), rel=1e-12)


def test_linear_elimination_wrong_structure(entries, split01):
    with pytest.raises(ValueError, match="linear elimination"):
        ms.subminimize_linear(SliceProblem(entries["QUAD"].merit, split01, [1.0]))


def test_linear_elimination_collinear_basis_at_x():
    # two exponential basis maps coincide at x = 0: the design matrix is
    # rank one there and the solve must report the numerical rank
    model = ms.PartiallyLinearModel(
        basis=(
            lambda t, x: math.exp(x[0] * t),
            lambda t, x: math.exp(2.0 * x[0] * t),
        ),
        t=np.arange(6.0),
        d=np.ones(6),
        nonlinear_dim=1,
    )
    merit = ms.build_partially_linear(model)
    split = ms.ParameterSplit((0,), (1, 2))
    with pytest.raises(ms.RankDeficiencyError) as excinfo:
        ms.subminimize_linear(SliceProblem(merit, split, [0.0]))
    assert excinfo.value.rank == 1
    assert "x = [0.]" in str(excinfo.value)
    # away from the collinear point the same model solves fine
    sub = ms.subminimize_linear(SliceProblem(merit, split, [0.4]))
    assert sub.y_hessian_min_eig > 0.0


def test_newton_sine_valley(entries, split01):
    sub = ms.subminimize_newton(
        SliceProblem(entries["SINE_VALLEY"].merit, split01, [1.0]), y0=[0.0]
    )
    assert sub.y_star[0] == pytest.approx(math.sin(1.0), abs=1e-8)
    assert sub.method == "newton"
    assert sub.grad_y_norm <= sub.inner_tol


def test_newton_quad(entries, split01):
    sub = ms.subminimize_newton(SliceProblem(entries["QUAD"].merit, split01, [3.0]), y0=[5.0])
    assert sub.y_star[0] == pytest.approx(0.0, abs=1e-9)
    assert sub.value == pytest.approx(9.0, rel=1e-12)


def test_newton_two_wells(entries, split01):
    sub = ms.subminimize_newton(
        SliceProblem(entries["TWO_WELLS"].merit, split01, [0.5]), y0=[-2.0]
    )
    assert sub.y_star[0] == pytest.approx(0.5, abs=1e-9)
    assert sub.value == pytest.approx(0.5625, rel=1e-10)


def test_newton_refuses_concave_block(entries, split01):
    with pytest.raises(ms.ConvexityError):
        ms.subminimize_newton(SliceProblem(entries["NEG_Y"].merit, split01, [1.0]), y0=[1.0])


def test_newton_max_iter_carries_best(entries, split01):
    with pytest.raises(ms.SubMinimizeError) as excinfo:
        ms.subminimize_newton(
            SliceProblem(entries["SINE_VALLEY"].merit, split01, [1.0]),
            y0=[8.0],
            max_iter=0,
        )
    assert excinfo.value.best_y is not None
    assert excinfo.value.grad_norm is not None


def test_slice_problem_validates_x(entries, split01):
    with pytest.raises(ValueError, match="outside"):
        SliceProblem(entries["QUAD"].merit, split01, [11.0])


def test_conditional_minimality(entries, split01):
    # F(x, y*) <= F(x, y) for random y, strictly unless y == y*
    rng = np.random.default_rng(2)
    for name in ("SINE_VALLEY", "QUAD", "EXP_FIT"):
        merit = entries[name].merit
        xbox = split01.x_box(merit.domain_box)
        ybox = split01.y_box(merit.domain_box)
        x = rng.uniform(xbox[0, 0], xbox[0, 1])
        sub = ms.solve_slice(merit, split01, [x])
        for _ in range(200):
            y = rng.uniform(ybox[0, 0], ybox[0, 1])
            value = merit(split01.embed([x], [y]))
            if abs(y - sub.y_star[0]) > 1e-6:
                assert value > sub.value, name
            else:
                assert value >= sub.value - 1e-12


def test_certificate_soundness(entries, split01):
    # independent FD recomputation agrees with the stored derivative norm
    for name in ("SINE_VALLEY", "EXP_FIT", "TWO_WELLS"):
        merit = entries[name].merit
        sub = ms.solve_slice(merit, split01, [0.3])
        problem = SliceProblem(merit, split01, [0.3])
        recomputed = np.linalg.norm(
            ms.fd_gradient(problem.value, sub.y_star, box=problem.y_box())
        )
        assert abs(recomputed - sub.grad_y_norm) <= 10.0 * sub.inner_tol, name


def test_linear_vs_newton_equivalence(entries, split01):
    merit = entries["EXP_FIT"].merit
    rng = np.random.default_rng(9)
    for x in (-0.5, -0.2, 0.3):
        problem = SliceProblem(merit, split01, [x])
        exact = ms.subminimize_linear(problem)
        for _ in range(10):
            y0 = rng.uniform(-5.0, 5.0, size=1)
            newton = ms.subminimize_newton(problem, y0=y0)
            assert abs(newton.y_star[0] - exact.y_star[0]) <= 1e-6


def test_probe_density_validation(entries, split01):
    with pytest.raises(ValueError, match="density"):
        ms.probe_y_convexity(entries["QUAD"].merit, split01, grid_density=2)


def test_probe_density_defaults():
    from minsection.subminimize import default_probe_density

    assert default_probe_density(2) == 21
    assert default_probe_density(4) == 21
    assert default_probe_density(5) == 7
    assert default_probe_density(8) == 7


def test_slice_solves_order_independent(entries, split01):
    # pure solves: sweeping in either order gives bitwise-equal results
    merit = entries["SINE_VALLEY"].merit
    xs = [-1.0, 0.3, 2.0]
    forward = [ms.solve_slice(merit, split01, [x]).y_star[0] for x in xs]
    backward = [ms.solve_slice(merit, split01, [x]).y_star[0] for x in reversed(xs)]
    assert forward == list(reversed(backward))
