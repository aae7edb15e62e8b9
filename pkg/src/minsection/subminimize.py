"""Inner minimization over the eliminated block at fixed retained
coordinates: exact linear elimination for partially linear models, a
safeguarded Newton iteration for objectives convex in the eliminated block,
and grid-based convexity certificates that guard both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import numerics
from .numerics import EPS, _second_diff_block, fd_hessian, fd_y_block, linear_lsq_solve
from .problems import (
    STRUCTURE_PARTIALLY_LINEAR,
    MeritFunction,
    ParameterSplit,
    model_split,
)

__all__ = [
    "ConvexityCertificate",
    "ConvexityError",
    "SliceProblem",
    "SubMinimizeError",
    "SubMinimum",
    "default_inner_tol",
    "default_probe_density",
    "linear_elimination_applies",
    "probe_full_convexity",
    "probe_y_convexity",
    "solve_slice",
    "subminimize_linear",
    "subminimize_newton",
]

#: Default inner tolerance is INNER_TOL_FACTOR * max(1, F(x, y0)). The factor
#: sits above the central-difference noise floor eps^(2/3) * |F| (with
#: headroom for evaluation rounding) so the zero-derivative certificate is
#: achievable even when warm starts make F(x, y0) equal the slice optimum.
INNER_TOL_FACTOR = max(1e-10, 32.0 * EPS ** (2.0 / 3.0))

#: Relative threshold below which a smallest eigenvalue counts as a
#: positive-definiteness violation.
PD_TOL = 1e-8

ARMIJO_C1 = 1e-4
MAX_HALVINGS = 40


class ConvexityError(RuntimeError):
    """The eliminated-block Hessian is not positive definite where required."""

    def __init__(self, message, point=None, min_eig=None, certificate=None):
        super().__init__(message)
        self.point = None if point is None else np.asarray(point, dtype=float)
        self.min_eig = min_eig
        self.certificate = certificate


class SubMinimizeError(RuntimeError):
    """Inner minimization failed; carries the best iterate found."""

    def __init__(self, message, best_y=None, grad_norm=None, iterations=0):
        super().__init__(message)
        self.best_y = None if best_y is None else np.asarray(best_y, dtype=float)
        self.grad_norm = grad_norm
        self.iterations = iterations


@dataclass(frozen=True)
class SliceProblem:
    """The objective restricted to fixed retained coordinates.

    ``value(y)`` evaluates F at the assembled point; the slice varies only
    the eliminated block.
    """

    merit: MeritFunction
    split: ParameterSplit
    x_fixed: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x_fixed, dtype=float))
        object.__setattr__(self, "x_fixed", x)
        if x.size != self.split.n:
            raise ValueError(f"x_fixed must have {self.split.n} entries, got {x.size}")
        xb = self.split.x_box(self.merit.domain_box)
        pad = 1e-12 * np.maximum(1.0, np.abs(xb).max(axis=1))
        if np.any(x < xb[:, 0] - pad) or np.any(x > xb[:, 1] + pad):
            raise ValueError("x_fixed lies outside the retained-coordinate box")

    def point(self, y) -> np.ndarray:
        return self.split.embed(self.x_fixed, y)

    def value(self, y) -> float:
        return self.merit(self.point(y))

    def y_box(self) -> np.ndarray:
        return self.split.y_box(self.merit.domain_box)


@dataclass(frozen=True)
class SubMinimum:
    """Certified conditional minimum over the eliminated block.

    ``grad_y_norm <= inner_tol`` certifies the zero-derivative condition;
    ``y_hessian_min_eig > 0`` certifies a non-degenerate minimum (index 0).
    """

    y_star: np.ndarray
    value: float
    grad_y_norm: float
    y_hessian_min_eig: float
    method: str
    iterations: int
    inner_tol: float
    y_index: int = 0


@dataclass(frozen=True)
class ConvexityCertificate:
    """Sampled positive-definiteness verdict for a Hessian block.

    ``split is None`` means the full Hessian was probed. When violated, the
    worst sampled point is stored as the witness together with its smallest
    block eigenvalue.
    """

    split: ParameterSplit | None
    sampled_points: int
    min_eig_over_samples: float
    positive: bool
    witness: np.ndarray | None
    witness_min_eig: float | None
    grid_density: int

    @property
    def verdict(self) -> str:
        return "positive_definite_everywhere_sampled" if self.positive else "violated"


def default_probe_density(dimension: int) -> int:
    """Grid density per axis for convexity probes (coarser in higher dims)."""
    if dimension <= 4:
        return 21
    if dimension <= 8:
        return 7
    return 5


def default_inner_tol(f0: float) -> float:
    return INNER_TOL_FACTOR * max(1.0, abs(f0))


def linear_elimination_applies(merit: MeritFunction, split: ParameterSplit) -> bool:
    """True when the split matches the model's nonlinear/linear layout."""
    if merit.structure != STRUCTURE_PARTIALLY_LINEAR or merit.model is None:
        return False
    return model_split(merit) == split


def _grid_axes(box, density):
    return [np.linspace(lo, hi, density) for lo, hi in box]


def _probe_block(merit, split, axes_indices, density):
    """Scan a coordinate grid, tracking the worst block min-eigenvalue."""
    box = merit.domain_box
    center = box.mean(axis=1)
    axes = [np.linspace(box[i, 0], box[i, 1], density) for i in axes_indices]
    worst = np.inf
    worst_point = None
    violated = False
    count = 0
    p = center.copy()
    all_indices = tuple(range(merit.dimension))
    for combo in itertools.product(*axes):
        for i, v in zip(axes_indices, combo):
            p[i] = v
        if split is None:
            raw, _, _ = _second_diff_block(merit, p, all_indices, box)
            block = 0.5 * (raw + raw.T)
        else:
            block = fd_y_block(merit, p, split)
        w = np.linalg.eigvalsh(block)
        scale = max(1.0, float(np.max(np.abs(w))))
        if w[0] <= PD_TOL * scale:
            violated = True
        if w[0] < worst:
            worst = float(w[0])
            worst_point = p.copy()
        count += 1
    return count, worst, worst_point, violated


def probe_y_convexity(
    merit: MeritFunction, split: ParameterSplit, grid_density: int | None = None
) -> ConvexityCertificate:
    """Sample the eliminated-block Hessian over the domain box.

    For partially linear merits with the matching split, the block is
    independent of the linear coordinates, so only the retained-coordinate
    grid is scanned (one point per x grid node). Violations are a verdict,
    never an error.
    """
    density = grid_density or default_probe_density(merit.dimension)
    if density < 3:
        raise ValueError("grid density must be at least 3 points per axis")
    if linear_elimination_applies(merit, split):
        axes_indices = list(split.x_indices)
    else:
        axes_indices = list(range(merit.dimension))
    count, worst, worst_point, violated = _probe_block(merit, split, axes_indices, density)
    return ConvexityCertificate(
        split=split,
        sampled_points=count,
        min_eig_over_samples=worst,
        positive=not violated,
        witness=worst_point if violated else None,
        witness_min_eig=worst if violated else None,
        grid_density=density,
    )


def probe_full_convexity(merit: MeritFunction, grid_density: int | None = None) -> ConvexityCertificate:
    """Sample the full Hessian over the domain box (strict-convexity probe)."""
    density = grid_density or 7
    if density < 3:
        raise ValueError("grid density must be at least 3 points per axis")
    axes_indices = list(range(merit.dimension))
    count, worst, worst_point, violated = _probe_block(merit, None, axes_indices, density)
    return ConvexityCertificate(
        split=None,
        sampled_points=count,
        min_eig_over_samples=worst,
        positive=not violated,
        witness=worst_point if violated else None,
        witness_min_eig=worst if violated else None,
        grid_density=density,
    )


def subminimize_linear(problem: SliceProblem) -> SubMinimum:
    """Exact elimination of the linear coefficients at fixed x.

    Solves ``min_y ||Phi y - (d - psi)||`` by an orthogonal decomposition;
    the stored derivative certificate uses the exact quadratic gradient
    ``2 Phi^T (Phi y - b)``.
    """
    merit = problem.merit
    if not linear_elimination_applies(merit, problem.split):
        raise ValueError(
            "linear elimination requires a partially linear merit with the "
            "matching nonlinear/linear split"
        )
    model = merit.model
    phi = model.design_matrix(problem.x_fixed)
    b = model.d - model.offsets(problem.x_fixed)
    try:
        y_star = linear_lsq_solve(phi, b)
    except numerics.RankDeficiencyError as err:
        raise numerics.RankDeficiencyError(
            f"basis collinearity at x = {problem.x_fixed}: {err} ",
            rank=err.rank,
            required=err.required,
        ) from err
    grad = 2.0 * phi.T @ (phi @ y_star - b)
    y_hess = 2.0 * phi.T @ phi
    w = np.linalg.eigvalsh(0.5 * (y_hess + y_hess.T))
    value = problem.value(y_star)
    return SubMinimum(
        y_star=y_star,
        value=value,
        grad_y_norm=float(np.linalg.norm(grad)),
        y_hessian_min_eig=float(w[0]),
        method="linear_elimination",
        iterations=0,
        inner_tol=default_inner_tol(value),
        y_index=int(np.count_nonzero(w < -PD_TOL * max(1.0, abs(w[-1])))),
    )


def subminimize_newton(
    problem: SliceProblem,
    y0=None,
    inner_tol: float | None = None,
    max_iter: int = 50,
) -> SubMinimum:
    """Damped Newton on the slice with Armijo backtracking.

    Requires the slice to be convex along the iterates: a non-positive-
    definite block Hessian raises :class:`ConvexityError`. Iterates are kept
    inside the eliminated-coordinate box. Exceeding ``max_iter`` raises
    :class:`SubMinimizeError` carrying the best iterate and gradient norm.
    """
    ybox = problem.y_box()
    if y0 is None:
        y = ybox.mean(axis=1)
    else:
        y = np.clip(np.atleast_1d(np.asarray(y0, dtype=float)), ybox[:, 0], ybox[:, 1])
    fval = problem.value(y)
    tol = default_inner_tol(fval) if inner_tol is None else float(inner_tol)

    best_y, best_gn = y.copy(), np.inf
    for iteration in range(max_iter + 1):
        report = fd_hessian(problem.value, y, box=ybox)
        g, hess = report.gradient, report.hessian
        gn = float(np.linalg.norm(g))
        if gn < best_gn:
            best_y, best_gn = y.copy(), gn
        w = np.linalg.eigvalsh(hess)
        min_eig = float(w[0])
        if gn <= tol:
            if min_eig <= PD_TOL * max(1.0, float(np.max(np.abs(w)))):
                raise ConvexityError(
                    "eliminated-block Hessian is not positive definite at the "
                    f"sub-minimum (min eigenvalue {min_eig:.3e})",
                    point=problem.point(y),
                    min_eig=min_eig,
                )
            return SubMinimum(
                y_star=y,
                value=fval,
                grad_y_norm=gn,
                y_hessian_min_eig=min_eig,
                method="newton",
                iterations=iteration,
                inner_tol=tol,
                y_index=int(np.count_nonzero(w < -PD_TOL * max(1.0, abs(w[-1])))),
            )
        if min_eig <= PD_TOL * max(1.0, float(np.max(np.abs(w)))):
            raise ConvexityError(
                "eliminated-block Hessian is not positive definite at an "
                f"iterate (min eigenvalue {min_eig:.3e}); the convexity "
                "assumption is violated for this split",
                point=problem.point(y),
                min_eig=min_eig,
            )
        step = np.linalg.solve(hess, -g)
        slope = float(g @ step)
        # Allow one-ulp increases: near the minimum the Armijo decrease is
        # far below float resolution of the objective.
        f_slack = 4.0 * EPS * max(1.0, abs(fval))
        t = 1.0
        for _ in range(MAX_HALVINGS):
            y_new = np.clip(y + t * step, ybox[:, 0], ybox[:, 1])
            f_new = problem.value(y_new)
            if f_new <= fval + ARMIJO_C1 * t * slope + f_slack:
                break
            t *= 0.5
        else:
            raise SubMinimizeError(
                "backtracking line search failed on the slice; the objective "
                "may not be convex in the eliminated block here",
                best_y=best_y,
                grad_norm=best_gn,
                iterations=iteration,
            )
        y, fval = y_new, f_new
    raise SubMinimizeError(
        f"no convergence within {max_iter} Newton iterations "
        f"(best gradient norm {best_gn:.3e}, tolerance {tol:.3e})",
        best_y=best_y,
        grad_norm=best_gn,
        iterations=max_iter,
    )


def solve_slice(
    merit: MeritFunction,
    split: ParameterSplit,
    x_fixed,
    y0=None,
    inner_tol: float | None = None,
) -> SubMinimum:
    """Dispatch one slice solve: linear elimination when available, else Newton."""
    problem = SliceProblem(merit, split, x_fixed)
    if linear_elimination_applies(merit, split):
        return subminimize_linear(problem)
    return subminimize_newton(problem, y0=y0, inner_tol=inner_tol)
