"""Implicit-function traces and minimal sections.

A trace samples the graph of the conditional-minimum map y = g(x), defined
by the zero set of the derivative in the eliminated block; the minimal
section is the objective composed with that graph. One-dimensional sections
per parameter support local-minimum extraction, sub-level projection
intervals, and the nesting check for iterated splits.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .problems import MeritFunction, ParameterSplit
from .solver import BracketTriplet, golden_refine, line_minimize
from .subminimize import (
    ConvexityCertificate,
    ConvexityError,
    SliceProblem,
    SubMinimizeError,
    SubMinimum,
    linear_elimination_applies,
    probe_full_convexity,
    probe_y_convexity,
    subminimize_linear,
    subminimize_newton,
)

__all__ = [
    "ImplicitTrace",
    "MinimalSection1D",
    "NestingReport",
    "SubLevelInterval",
    "TraceError",
    "TraceIndexWarning",
    "minimal_section_1d",
    "nesting_check",
    "section_csv_text",
    "sublevel_interval",
    "trace_implicit",
    "write_section_csv",
]

#: Scan density for the robust fallback slice solver (one eliminated
#: coordinate, no convexity certificate).
FALLBACK_SCAN_DENSITY = 41

PLATEAU_TOL = 1e-12
POLISH_X_TOL = 1e-10


class TraceError(RuntimeError):
    """A slice solve failed while tracing; carries the failing x."""

    def __init__(self, message, x_failed=None):
        super().__init__(message)
        self.x_failed = x_failed


class TraceIndexWarning(UserWarning):
    """The eliminated-block index varied along a trace."""


@dataclass(frozen=True)
class ImplicitTrace:
    """Sampled graph of the conditional-minimum map with residual certificates.

    ``residual_norms[j]`` is the derivative norm in the eliminated block at
    the j-th sample and is bounded by ``inner_tols[j]``;
    ``y_index_along_trace`` holds the eliminated-block index (negative
    eigenvalue count) at each sample, identically zero on certified splits.
    """

    split: ParameterSplit
    x_samples: np.ndarray
    g_values: np.ndarray
    values: np.ndarray
    residual_norms: np.ndarray
    y_index_along_trace: np.ndarray
    inner_tols: np.ndarray

    @property
    def index_constant(self) -> bool:
        return bool(np.all(self.y_index_along_trace == self.y_index_along_trace[0]))

    def points(self) -> np.ndarray:
        """Full parameter vectors (G, M) along the trace."""
        out = np.empty((self.x_samples.shape[0], self.split.dimension))
        for j in range(self.x_samples.shape[0]):
            out[j] = self.split.embed(self.x_samples[j], self.g_values[j])
        return out


@dataclass(frozen=True)
class MinimalSection1D:
    """One-dimensional minimal section for a single parameter.

    ``companions[j]`` holds the eliminated coordinates (ascending index
    order) at ``grid[j]``; ``values[j]`` is the objective evaluated exactly
    at that assembled point. ``local_minima`` are interior grid indices with
    ``values[j] <= values[j +- 1]``; strict ones are golden-polished into
    ``minima_x``/``minima_values``/``minima_companions``, non-strict ones
    are flagged as plateau points. ``section_fn`` evaluates the continuous
    section anywhere via an on-demand slice solve.
    """

    parameter_index: int
    grid: np.ndarray
    values: np.ndarray
    companions: np.ndarray
    residual_norms: np.ndarray
    local_minima: tuple[int, ...]
    plateau: tuple[bool, ...]
    minima_x: tuple[float, ...]
    minima_values: tuple[float, ...]
    minima_companions: tuple[np.ndarray, ...]
    non_monotone_companions: tuple[int, ...]
    split: ParameterSplit
    certificate: ConvexityCertificate
    section_fn: Callable[[float], SubMinimum]

    @property
    def has_unique_strict_minimum(self) -> bool:
        return len(self.minima_x) == 1 and not any(self.plateau)


@dataclass(frozen=True)
class SubLevelInterval:
    """Projection of a sub-level set onto one parameter axis.

    ``lo``/``hi`` are the abscissas where the 1-D minimal section crosses
    the level; they coincide at the section minimum.
    """

    parameter_index: int
    level_z: float
    lo: float
    hi: float


@dataclass(frozen=True)
class NestingReport:
    """Pointwise comparison of iterated versus direct partial minimization."""

    inner_indices: tuple[int, ...]
    outer_indices: tuple[int, ...]
    grid: np.ndarray
    inner_values: np.ndarray
    iterated_values: np.ndarray
    max_gap: float
    tolerance: float
    passed: bool
    certificate: ConvexityCertificate


def _normalize_x_grid(x_grid, n):
    arr = np.asarray(x_grid, dtype=float)
    if arr.ndim == 1:
        if n != 1:
            raise ValueError(f"grid of scalars requires n = 1, split has n = {n}")
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != n:
        raise ValueError(f"x grid must have shape (G, {n})")
    if arr.shape[0] < 1:
        raise ValueError("x grid must contain at least one point")
    return arr


def trace_implicit(
    merit: MeritFunction,
    split: ParameterSplit,
    x_grid,
    inner_tol: float | None = None,
) -> ImplicitTrace:
    """Trace the conditional-minimum graph over a grid of retained values.

    Each grid point is solved by linear elimination when available,
    otherwise by Newton warm-started from the neighboring solution. The
    sweep runs left-to-right and then right-to-left, keeping whichever
    solution certifies the smaller derivative residual; this guards the
    continuation against losing the graph where it is steep. Requires a
    positive convexity certificate for the split (caller responsibility):
    a slice failure raises :class:`TraceError` naming the failing x.
    """
    grid = _normalize_x_grid(x_grid, split.n)
    g_count = grid.shape[0]
    use_linear = linear_elimination_applies(merit, split)

    def solve_at(x, warm_y):
        problem = SliceProblem(merit, split, x)
        if use_linear:
            return subminimize_linear(problem)
        return subminimize_newton(problem, y0=warm_y, inner_tol=inner_tol)

    solutions: list[SubMinimum | None] = [None] * g_count
    warm = None
    for j in range(g_count):
        try:
            solutions[j] = solve_at(grid[j], warm)
        except (ConvexityError, SubMinimizeError) as err:
            raise TraceError(
                f"slice solve failed at x = {grid[j]} (the conditional-minimum "
                f"graph does not extend there): {err}",
                x_failed=grid[j],
            ) from err
        warm = solutions[j].y_star
    if not use_linear:
        warm = solutions[-1].y_star
        for j in range(g_count - 2, -1, -1):
            try:
                second = solve_at(grid[j], warm)
            except (ConvexityError, SubMinimizeError) as err:
                raise TraceError(
                    f"slice solve failed at x = {grid[j]} on the return sweep: {err}",
                    x_failed=grid[j],
                ) from err
            if second.grad_y_norm < solutions[j].grad_y_norm:
                solutions[j] = second
            warm = solutions[j].y_star

    g_values = np.array([s.y_star for s in solutions])
    values = np.array([s.value for s in solutions])
    residuals = np.array([s.grad_y_norm for s in solutions])
    indices = np.array([s.y_index for s in solutions], dtype=int)
    tols = np.array([s.inner_tol for s in solutions])
    if np.any(indices != indices[0]):
        warnings.warn(
            "eliminated-block index varies along the trace; the split is not "
            "uniformly convex over this grid",
            TraceIndexWarning,
            stacklevel=2,
        )
    return ImplicitTrace(
        split=split,
        x_samples=grid,
        g_values=g_values,
        values=values,
        residual_norms=residuals,
        y_index_along_trace=indices,
        inner_tols=tols,
    )


def _fallback_slice(merit, split, u, inner_tol):
    """Robust single-eliminated-coordinate solve: grid scan, then Newton.

    Used when the complementary split holds no convexity certificate; the
    scan locates the global basin of the slice so the Newton polish starts
    inside a locally convex neighborhood.
    """
    problem = SliceProblem(merit, split, np.array([u]))
    ybox = problem.y_box()
    scan = np.linspace(ybox[0, 0], ybox[0, 1], FALLBACK_SCAN_DENSITY)
    scan_values = [problem.value(np.array([y])) for y in scan]
    best = int(np.argmin(scan_values))
    return subminimize_newton(problem, y0=np.array([scan[best]]), inner_tol=inner_tol)


def minimal_section_1d(
    merit: MeritFunction,
    parameter_index: int,
    grid,
    inner_tol: float | None = None,
    probe_density: int | None = None,
) -> MinimalSection1D:
    """One-dimensional minimal section for a single parameter.

    Eliminates every other coordinate per grid point. When the
    complementary split holds a positive convexity certificate (or admits
    linear elimination), the section is the continuation trace; otherwise,
    with a single eliminated coordinate, each slice falls back to a grid
    scan plus Newton polish so deep sections of nonconvex slices are still
    reachable. Several eliminated coordinates without a certificate are
    refused.

    Grid-local minima are polished by golden section on the continuous
    section (on-demand slice solves), tolerance 1e-10 in the abscissa.
    """
    if not 0 <= parameter_index < merit.dimension:
        raise ValueError(f"parameter index {parameter_index} out of range")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ValueError("section grid must be 1-D with at least 3 points")
    split = ParameterSplit.single(parameter_index, merit.dimension)
    certificate = probe_y_convexity(merit, split, probe_density)
    certified = certificate.positive or linear_elimination_applies(merit, split)
    if not certified and split.m > 1:
        raise ConvexityError(
            "no convexity certificate for the complementary split and more "
            "than one eliminated coordinate; cannot build the section",
            point=certificate.witness,
            min_eig=certificate.witness_min_eig,
            certificate=certificate,
        )

    if certified:
        trace = trace_implicit(merit, split, grid, inner_tol=inner_tol)
        solutions = [
            SubMinimum(
                y_star=trace.g_values[j],
                value=float(trace.values[j]),
                grad_y_norm=float(trace.residual_norms[j]),
                y_hessian_min_eig=np.nan,
                method="trace",
                iterations=0,
                inner_tol=float(trace.inner_tols[j]),
                y_index=int(trace.y_index_along_trace[j]),
            )
            for j in range(grid.size)
        ]

        warm = {"y": None}

        def section_fn(u: float) -> SubMinimum:
            problem = SliceProblem(merit, split, np.array([u]))
            if linear_elimination_applies(merit, split):
                sub = subminimize_linear(problem)
            else:
                sub = subminimize_newton(problem, y0=warm["y"], inner_tol=inner_tol)
            warm["y"] = sub.y_star
            return sub

    else:
        def section_fn(u: float) -> SubMinimum:
            return _fallback_slice(merit, split, u, inner_tol)

        try:
            solutions = [section_fn(u) for u in grid]
        except (ConvexityError, SubMinimizeError) as err:
            raise TraceError(
                f"fallback slice solve failed while sampling the section: {err}"
            ) from err

    values = np.array([s.value for s in solutions])
    companions = np.array([s.y_star for s in solutions])
    residuals = np.array([s.grad_y_norm for s in solutions])

    local, plateau_flags = [], []
    scale = max(1.0, float(np.max(np.abs(values))))
    tie = PLATEAU_TOL * scale
    for j in range(1, grid.size - 1):
        left, mid, right = values[j - 1], values[j], values[j + 1]
        if mid <= left + tie and mid <= right + tie:
            strict = mid < left - tie and mid < right - tie
            local.append(j)
            plateau_flags.append(not strict)

    minima_x, minima_values, minima_companions = [], [], []
    for j, is_plateau in zip(local, plateau_flags):
        if is_plateau:
            continue
        triplet = BracketTriplet(
            grid[j - 1], grid[j], grid[j + 1], values[j - 1], values[j], values[j + 1]
        )
        u_star, _ = golden_refine(lambda u: section_fn(u).value, triplet, POLISH_X_TOL)
        sub = section_fn(u_star)
        if any(abs(u_star - prev) <= 1e-8 for prev in minima_x):
            continue
        minima_x.append(float(u_star))
        minima_values.append(float(sub.value))
        minima_companions.append(sub.y_star)

    non_monotone = []
    if grid.size >= 3:
        comp_scale = np.maximum(1.0, np.max(np.abs(companions), axis=0))
        diffs = np.diff(companions, axis=0)
        for c in range(companions.shape[1]):
            signs = np.sign(np.where(np.abs(diffs[:, c]) <= 1e-10 * comp_scale[c], 0.0, diffs[:, c]))
            nonzero = signs[signs != 0.0]
            if nonzero.size and np.any(nonzero != nonzero[0]):
                non_monotone.append(int(split.y_indices[c]))

    return MinimalSection1D(
        parameter_index=parameter_index,
        grid=grid,
        values=values,
        companions=companions,
        residual_norms=residuals,
        local_minima=tuple(local),
        plateau=tuple(plateau_flags),
        minima_x=tuple(minima_x),
        minima_values=tuple(minima_values),
        minima_companions=tuple(minima_companions),
        non_monotone_companions=tuple(non_monotone),
        split=split,
        certificate=certificate,
        section_fn=section_fn,
    )


def sublevel_interval(
    section: MinimalSection1D, level_z: float, x_tol: float | None = None
) -> SubLevelInterval:
    """Projection interval of the sub-level set onto the section's axis.

    The endpoints are located by bisection on the continuous section left
    and right of its unique minimum; at the minimum level the endpoints
    coincide. Sections with several local minima (or plateau points) are
    refused: analyze each basin separately in that case.
    """
    if len(section.minima_x) != 1 or any(section.plateau):
        raise ValueError(
            "sub-level projection requires a section with a unique strict "
            "local minimum; analyze each basin separately"
        )
    x_star = section.minima_x[0]
    v_min = section.minima_values[0]
    level_z = float(level_z)
    val_tol = 1e-10 * max(1.0, abs(level_z), abs(v_min))
    if level_z < v_min - val_tol:
        raise ValueError(
            f"level {level_z!r} lies below the section minimum {v_min!r}"
        )
    if level_z <= v_min + val_tol:
        return SubLevelInterval(section.parameter_index, level_z, x_star, x_star)
    width = float(section.grid[-1] - section.grid[0])
    tol = x_tol if x_tol is not None else 1e-10 * width

    def crossing(a: float, b: float) -> float:
        # section(a) >= z >= section(b); bisect the monotone flank.
        fa = section.section_fn(a).value - level_z
        for _ in range(200):
            if abs(b - a) <= tol:
                break
            mid = 0.5 * (a + b)
            fm = section.section_fn(mid).value - level_z
            if (fm > 0.0) == (fa > 0.0):
                a, fa = mid, fm
            else:
                b = mid
        return 0.5 * (a + b)

    left_edge = float(section.grid[0])
    right_edge = float(section.grid[-1])
    if section.section_fn(left_edge).value < level_z:
        raise ValueError(
            f"section stays below level {level_z!r} at the left grid edge; "
            "enlarge the grid to bracket the crossing"
        )
    if section.section_fn(right_edge).value < level_z:
        raise ValueError(
            f"section stays below level {level_z!r} at the right grid edge; "
            "enlarge the grid to bracket the crossing"
        )
    lo = crossing(left_edge, x_star)
    hi = crossing(right_edge, x_star)
    return SubLevelInterval(section.parameter_index, level_z, float(lo), float(hi))


def _minimize_over(merit, split, fixed_inner, grids, x_tol, warm):
    """Minimize the outer minimal-section over the remaining retained
    coordinates by cyclic line searches (convex by assumption)."""
    x = np.array([0.5 * (g[0] + g[-1]) for g in grids])

    def outer_value(xvec):
        full_x = fixed_inner(xvec)
        problem = SliceProblem(merit, split, full_x)
        sub = subminimize_newton(problem, y0=warm["y"])
        warm["y"] = sub.y_star
        return sub.value

    if len(grids) == 1:
        u, value, _ = line_minimize(lambda v: outer_value(np.array([v])), grids[0], x_tol)
        return value
    for _ in range(60):
        x_prev = x.copy()
        value = None
        for i in range(len(grids)):
            def line(v, _i=i):
                trial = x.copy()
                trial[_i] = v
                return outer_value(trial)

            u, value, _ = line_minimize(line, grids[i], x_tol)
            x[i] = u
        if float(np.max(np.abs(x - x_prev))) <= x_tol:
            return value
    raise SubMinimizeError("iterated minimization did not converge")


def nesting_check(
    merit: MeritFunction,
    outer_split: ParameterSplit,
    inner_x_subset,
    grid,
    probe_density: int | None = None,
    tolerance: float = 1e-6,
    x_tol: float | None = None,
) -> NestingReport:
    """Verify that iterated minimization reproduces direct partial
    minimization: minimizing the outer minimal-section over the retained
    coordinates absent from the inner subset must equal the inner
    minimal-section value, pointwise on the grid.

    Only claimed for strictly convex objectives, so the full Hessian is
    probed first and a violation is a refusal. The inner subset must be a
    single coordinate strictly contained in the outer retained set.
    """
    inner = tuple(int(i) for i in inner_x_subset)
    outer = tuple(outer_split.x_indices)
    if not set(inner) < set(outer):
        raise ValueError("inner subset must be strictly contained in the outer x set")
    if len(inner) != 1:
        raise ValueError("only one-dimensional inner subsets are supported")
    certificate = probe_full_convexity(merit, probe_density)
    if not certificate.positive:
        raise ConvexityError(
            "nesting requires a strictly convex objective on the box; probe "
            f"found min eigenvalue {certificate.witness_min_eig:.3e} at "
            f"{certificate.witness}",
            point=certificate.witness,
            min_eig=certificate.witness_min_eig,
            certificate=certificate,
        )
    grid = np.asarray(grid, dtype=float)
    inner_split = ParameterSplit.single(inner[0], merit.dimension)
    rest = tuple(i for i in outer if i not in inner)
    box = merit.domain_box
    rest_grids = [np.linspace(box[i, 0], box[i, 1], max(9, grid.size)) for i in rest]
    width = max(float(g[-1] - g[0]) for g in rest_grids)
    xt = x_tol if x_tol is not None else 1e-8 * width
    pos_in_outer = {coord: k for k, coord in enumerate(outer)}

    inner_values = np.empty(grid.size)
    iterated_values = np.empty(grid.size)
    warm_direct = {"y": None}
    warm_outer = {"y": None}
    for j, u in enumerate(grid):
        problem = SliceProblem(merit, inner_split, np.array([u]))
        sub = subminimize_newton(problem, y0=warm_direct["y"])
        warm_direct["y"] = sub.y_star
        inner_values[j] = sub.value

        def fixed_inner(rest_vec, _u=u):
            full = np.empty(len(outer))
            full[pos_in_outer[inner[0]]] = _u
            for val, coord in zip(rest_vec, rest):
                full[pos_in_outer[coord]] = val
            return full

        iterated_values[j] = _minimize_over(
            merit, outer_split, fixed_inner, rest_grids, xt, warm_outer
        )
    max_gap = float(np.max(np.abs(inner_values - iterated_values)))
    return NestingReport(
        inner_indices=inner,
        outer_indices=outer,
        grid=grid,
        inner_values=inner_values,
        iterated_values=iterated_values,
        max_gap=max_gap,
        tolerance=tolerance,
        passed=max_gap <= tolerance,
        certificate=certificate,
    )


def section_csv_text(section: MinimalSection1D, intervals=()) -> str:
    """Render a section as CSV: ``x_i,F,comp_0,...,comp_{M-2},residual``.

    Sub-level intervals are appended as comment lines
    ``# sublevel z=<z> lo=<lo> hi=<hi>``. Numbers use full round-trip
    precision.
    """
    m = section.companions.shape[1]
    header = "x_i,F," + ",".join(f"comp_{c}" for c in range(m)) + ",residual"
    lines = [header]
    for j in range(section.grid.size):
        cells = [repr(float(section.grid[j])), repr(float(section.values[j]))]
        cells += [repr(float(v)) for v in section.companions[j]]
        cells.append(repr(float(section.residual_norms[j])))
        lines.append(",".join(cells))
    for iv in intervals:
        lines.append(
            f"# sublevel z={repr(float(iv.level_z))} lo={repr(float(iv.lo))} "
            f"hi={repr(float(iv.hi))}"
        )
    return "\n".join(lines) + "\n"


def write_section_csv(section: MinimalSection1D, path, intervals=()) -> None:
    """Write :func:`section_csv_text` to ``path``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(section_csv_text(section, intervals))
