"""Outer minimization: coordinate-grid triplet bracketing, golden-section
refinement, the two-level hierarchical solve, a direct damped-Newton
baseline, hierarchical-vs-direct comparison, and anchor-based recovery of
quasi-degenerate minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import EPS, fd_gradient, fd_hessian
from .problems import MeritFunction, ParameterSplit
from .subminimize import (
    ConvexityCertificate,
    ConvexityError,
    SliceProblem,
    linear_elimination_applies,
    probe_y_convexity,
    subminimize_linear,
    subminimize_newton,
)

__all__ = [
    "BracketError",
    "BracketTriplet",
    "EquivalenceReport",
    "RegularizationRecovery",
    "SolveError",
    "SolveReport",
    "Tolerances",
    "bracket_on_grid",
    "equivalence_report",
    "format_solve_report",
    "golden_refine",
    "line_minimize",
    "recover_from_anchor",
    "solve_direct",
    "solve_hierarchical",
    "solve_report_dict",
]

#: Golden ratio contraction constant, (sqrt(5) - 1) / 2.
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

FLAT_TOL = 1e-12
ARMIJO_C1_DIRECT = 1e-4
MAX_BACKTRACKS = 40


class BracketError(RuntimeError):
    """No valid bracketing triplet exists on the grid.

    ``reason`` is one of ``"boundary"`` (an endpoint holds the smallest
    value: the minimum is not interior), ``"flat"`` (all values equal within
    1e-12) or ``"plateau"`` (an interior tie prevents a strict triplet).
    """

    def __init__(self, message, reason):
        super().__init__(message)
        self.reason = reason


class SolveError(RuntimeError):
    """Outer minimization failed; carries the best point found."""

    def __init__(self, message, best_point=None, best_value=None, grad_norm=None):
        super().__init__(message)
        self.best_point = best_point
        self.best_value = best_value
        self.grad_norm = grad_norm


@dataclass(frozen=True)
class BracketTriplet:
    """Certificate a < b < c with f(b) strictly below f(a) and f(c)."""

    a: float
    b: float
    c: float
    fa: float
    fb: float
    fc: float

    def __post_init__(self):
        if not (self.a < self.b < self.c):
            raise ValueError("bracket abscissas must satisfy a < b < c")
        if not (self.fb < self.fa and self.fb < self.fc):
            raise ValueError("bracket requires f(b) < f(a) and f(b) < f(c)")


@dataclass(frozen=True)
class Tolerances:
    """Solver tolerances; ``None`` selects the scaled defaults.

    ``inner_tol``: zero-derivative certificate for slice solves (default
    ``INNER_TOL_FACTOR * max(1, F(x, y0))`` per slice). ``x_tol``: golden
    contraction width (default ``1e-8 * grid width`` per coordinate).
    ``outer_tol``: gradient-norm bound at the reported minimizer (default
    derived from the final bracket curvature, i.e. what the contraction
    actually guarantees).
    """

    inner_tol: float | None = None
    outer_tol: float | None = None
    x_tol: float | None = None
    max_cycles: int = 60
    probe_density: int | None = None


@dataclass(frozen=True)
class SolveCertificates:
    convexity: ConvexityCertificate | None
    brackets: tuple[BracketTriplet, ...]
    gradient_norm: float


@dataclass(frozen=True)
class SolveReport:
    """Result of an outer minimization with auditable counters.

    ``inner_solves`` counts slice sub-minimizations; for the hierarchical
    method it equals the number of section evaluations performed.
    """

    minimizer: np.ndarray
    value: float
    method: str
    inner_solves: int
    outer_evaluations: int
    certificates: SolveCertificates
    split: ParameterSplit | None = None
    outer_coordinates: tuple[int, ...] = ()
    inner_method: str = ""
    iterations: int = 0
    outer_tol: float = float("nan")
    x_tol: float = float("nan")


@dataclass(frozen=True)
class RegularizationRecovery:
    """Point recovered from one anchored coordinate via a single slice solve.

    ``recovered[anchor_index] == anchor_value`` exactly; ``section_residual``
    is the zero-derivative certificate of the slice solve.
    """

    anchor_index: int
    anchor_value: float
    recovered: np.ndarray
    section_residual: float
    value: float
    certificate: ConvexityCertificate


@dataclass(frozen=True)
class EquivalenceReport:
    """Hierarchical-vs-direct comparison across multiple starts."""

    hierarchical: SolveReport
    candidates: tuple[tuple[np.ndarray, float], ...]
    direct_reports: tuple[SolveReport, ...]
    max_distance: float
    max_value_gap: float


def _bracket_from_values(grid, values) -> BracketTriplet:
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise SolveError(f"non-finite section value at u = {grid[bad]!r}")
    for j in range(1, grid.size - 1):
        if values[j] < values[j - 1] and values[j] < values[j + 1]:
            return BracketTriplet(
                grid[j - 1], grid[j], grid[j + 1], values[j - 1], values[j], values[j + 1]
            )
    spread = float(values.max() - values.min())
    if spread <= FLAT_TOL * max(1.0, float(np.abs(values).max())):
        raise BracketError("section is flat on the grid (all values equal)", "flat")
    k = int(np.argmin(values))
    if k == 0 or k == grid.size - 1:
        raise BracketError(
            f"smallest section value sits at the grid boundary u = {grid[k]!r}; "
            "the minimum is not bracketed (domain box may be mis-specified)",
            "boundary",
        )
    raise BracketError(
        "interior plateau prevents a strict bracketing triplet", "plateau"
    )


def bracket_on_grid(section_eval, grid) -> BracketTriplet:
    """First consecutive grid triplet whose middle value is strictly smallest.

    Ties are broken toward the leftmost qualifying triplet. Raises
    :class:`BracketError` when no triplet qualifies, distinguishing a
    boundary minimum from a flat section.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        raise ValueError("bracketing needs a grid of at least 3 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    values = np.array([float(section_eval(u)) for u in grid])
    return _bracket_from_values(grid, values)


def golden_refine(section_eval, triplet: BracketTriplet, x_tol: float):
    """Golden-section contraction of a bracketed minimum to width ``x_tol``.

    Returns ``(u, value)`` for the best interior point found.
    """
    x0, x3 = triplet.a, triplet.c
    b = triplet.b
    if abs(x3 - b) > abs(b - x0):
        x1, x2 = b, b + (1.0 - GOLDEN) * (x3 - b)
        f1, f2 = triplet.fb, float(section_eval(x2))
        if not math.isfinite(f2):
            raise SolveError(f"non-finite section value at u = {x2!r}")
    else:
        x1, x2 = b - (1.0 - GOLDEN) * (b - x0), b
        f1, f2 = float(section_eval(x1)), triplet.fb
        if not math.isfinite(f1):
            raise SolveError(f"non-finite section value at u = {x1!r}")
    while abs(x3 - x0) > x_tol:
        if f2 < f1:
            x0, x1, f1 = x1, x2, f2
            x2 = GOLDEN * x1 + (1.0 - GOLDEN) * x3
            f2 = float(section_eval(x2))
            if not math.isfinite(f2):
                raise SolveError(f"non-finite section value at u = {x2!r}")
        else:
            x3, x2, f2 = x2, x1, f1
            x1 = GOLDEN * x2 + (1.0 - GOLDEN) * x0
            f1 = float(section_eval(x1))
            if not math.isfinite(f1):
                raise SolveError(f"non-finite section value at u = {x1!r}")
    return (x1, f1) if f1 < f2 else (x2, f2)


def _plateau_midpoint_bracket(section_eval, grid, values) -> BracketTriplet:
    """Recover a strict bracket when adjacent minimal grid values tie.

    A convex section whose minimum falls exactly midway between two nodes
    produces bitwise-equal neighbors and no strict triplet; probing the
    midpoint of the tied run resolves it. Genuinely flat runs re-raise.
    """
    vmin = float(values.min())
    tie = values <= vmin + FLAT_TOL * max(1.0, abs(vmin))
    run = np.flatnonzero(tie)
    j0, j1 = int(run[0]), int(run[-1])
    if j0 == 0 or j1 == grid.size - 1:
        raise BracketError(
            "tied minimal values reach the grid boundary; the minimum is not "
            "bracketed",
            "boundary",
        )
    mid = 0.5 * (grid[j0] + grid[j1])
    v_mid = float(section_eval(mid))
    if v_mid < values[j0] and v_mid < values[j1]:
        return BracketTriplet(grid[j0], mid, grid[j1], values[j0], v_mid, values[j1])
    raise BracketError(
        "interior plateau prevents a strict bracketing triplet", "plateau"
    )


def line_minimize(section_eval, grid, x_tol: float):
    """Bracket on the grid, then refine: ``(u, value, triplet)``.

    Exact ties between the two smallest neighboring grid values (a convex
    minimum exactly midway between nodes) are recovered via a midpoint
    probe; other bracket failures propagate.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        raise ValueError("bracketing needs a grid of at least 3 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    values = np.array([float(section_eval(u)) for u in grid])
    try:
        triplet = _bracket_from_values(grid, values)
    except BracketError as err:
        if err.reason != "plateau":
            raise
        triplet = _plateau_midpoint_bracket(section_eval, grid, values)
    u, value = golden_refine(section_eval, triplet, x_tol)
    return u, value, triplet


def enumerate_section_minima(section_eval, grid, x_tol: float):
    """Golden-polish every strict interior grid minimum of a 1-D section.

    Returns a list of ``(u, value)`` sorted by abscissa; used when a section
    may carry several local minima.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.array([float(section_eval(u)) for u in grid])
    out = []
    for j in range(1, grid.size - 1):
        if values[j] < values[j - 1] and values[j] < values[j + 1]:
            triplet = BracketTriplet(
                grid[j - 1], grid[j], grid[j + 1], values[j - 1], values[j], values[j + 1]
            )
            out.append(golden_refine(section_eval, triplet, x_tol))
    return out


class _CountingSection:
    """Wrap a section evaluator with an auditable call counter."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, u):
        self.calls += 1
        return self.fn(u)


def _derived_outer_tol(brackets, x_tols, value):
    """Gradient bound the golden contraction actually guarantees.

    Curvature is estimated from the final bracket second differences; the
    noise term covers finite-difference roundoff at the solution.
    """
    curv_terms = []
    for tri, xt in zip(brackets, x_tols):
        h = 0.5 * (tri.c - tri.a)
        curv = abs(tri.fa - 2.0 * tri.fb + tri.fc) / (h * h) if h > 0 else 0.0
        curv_terms.append(max(curv, 1.0) * xt)
    spread = math.sqrt(max(1, len(curv_terms))) * max(curv_terms) if curv_terms else 0.0
    noise = EPS ** (2.0 / 3.0) * max(1.0, abs(value))
    return max(1e-8, 10.0 * spread + 100.0 * noise)


def _resolve_grids(grid, box, split):
    """Per-retained-coordinate grids from a density, an array, or a list."""
    xbox = split.x_box(box)
    if grid is None:
        grid = 21
    if np.isscalar(grid):
        density = int(grid)
        if density < 3:
            raise ValueError("grid density must be at least 3")
        return [np.linspace(lo, hi, density) for lo, hi in xbox]
    grid = list(grid) if isinstance(grid, (list, tuple)) else [np.asarray(grid, dtype=float)]
    if len(grid) == 1 and split.n > 1:
        grid = [np.asarray(grid[0], dtype=float) for _ in range(split.n)]
    if len(grid) != split.n:
        raise ValueError(f"expected {split.n} coordinate grids, got {len(grid)}")
    return [np.asarray(g, dtype=float) for g in grid]


def solve_hierarchical(
    merit: MeritFunction,
    split: ParameterSplit,
    grid=None,
    tolerances: Tolerances | None = None,
) -> SolveReport:
    """Two-level minimization: eliminate the y block per slice, then bracket
    and golden-refine the resulting section over the retained coordinates.

    The split must hold a positive convexity certificate, which is probed
    up front; a violation is a refusal (:class:`ConvexityError` carrying the
    witness point). With one retained coordinate the outer stage is a single
    bracket-plus-refine; with several it cycles coordinate line searches on
    the section until the outer step norm drops below ``x_tol``. Boundary
    minima are errors, not silent clamps. No evaluation leaves the domain
    box.
    """
    tol = tolerances or Tolerances()
    certificate = probe_y_convexity(merit, split, tol.probe_density)
    if not certificate.positive:
        raise ConvexityError(
            "refusing hierarchical solve: eliminated-block Hessian has "
            f"min eigenvalue {certificate.witness_min_eig:.3e} at "
            f"{certificate.witness}",
            point=certificate.witness,
            min_eig=certificate.witness_min_eig,
            certificate=certificate,
        )
    grids = _resolve_grids(grid, merit.domain_box, split)
    x_tols = [
        tol.x_tol if tol.x_tol is not None else 1e-8 * (g[-1] - g[0]) for g in grids
    ]
    use_linear = linear_elimination_applies(merit, split)
    counter = {"solves": 0}
    warm = {"y": None}

    def slice_solve(xvec):
        counter["solves"] += 1
        problem = SliceProblem(merit, split, xvec)
        if use_linear:
            sub = subminimize_linear(problem)
        else:
            sub = subminimize_newton(problem, y0=warm["y"], inner_tol=tol.inner_tol)
        warm["y"] = sub.y_star
        return sub

    brackets: list[BracketTriplet] = []
    cycles = 0
    if split.n == 1:
        section = _CountingSection(lambda u: slice_solve(np.array([u])).value)
        u_star, _, triplet = line_minimize(section, grids[0], x_tols[0])
        brackets.append(triplet)
        x_star = np.array([u_star])
        outer_evaluations = section.calls
    else:
        x_star = np.array([0.5 * (g[0] + g[-1]) for g in grids])
        outer_evaluations = 0
        for cycles in range(1, tol.max_cycles + 1):
            x_prev = x_star.copy()
            brackets = []
            for i in range(split.n):
                def section_fn(u, _i=i):
                    trial = x_star.copy()
                    trial[_i] = u
                    return slice_solve(trial).value

                section = _CountingSection(section_fn)
                u_star, _, triplet = line_minimize(section, grids[i], x_tols[i])
                x_star[i] = u_star
                brackets.append(triplet)
                outer_evaluations += section.calls
            step = float(np.max(np.abs(x_star - x_prev)))
            if step <= max(x_tols):
                break
        else:
            raise SolveError(
                f"coordinate cycling did not converge within {tol.max_cycles} cycles",
                best_point=x_star,
            )

    final = slice_solve(x_star)
    outer_evaluations += 1
    minimizer = split.embed(x_star, final.y_star)
    value = final.value
    grad = fd_gradient(merit, minimizer)
    grad_norm = float(np.linalg.norm(grad))
    outer_tol = (
        tol.outer_tol
        if tol.outer_tol is not None
        else _derived_outer_tol(brackets, x_tols, value)
    )
    if grad_norm > outer_tol:
        raise SolveError(
            f"gradient norm {grad_norm:.3e} at the refined minimizer exceeds "
            f"the outer tolerance {outer_tol:.3e}",
            best_point=minimizer,
            best_value=value,
            grad_norm=grad_norm,
        )
    return SolveReport(
        minimizer=minimizer,
        value=value,
        method="hierarchical",
        inner_solves=counter["solves"],
        outer_evaluations=outer_evaluations,
        certificates=SolveCertificates(
            convexity=certificate, brackets=tuple(brackets), gradient_norm=grad_norm
        ),
        split=split,
        outer_coordinates=split.x_indices,
        inner_method=final.method,
        iterations=cycles,
        outer_tol=outer_tol,
        x_tol=max(x_tols),
    )


def solve_direct(
    merit: MeritFunction,
    p0,
    tolerances: Tolerances | None = None,
    max_iter: int = 200,
) -> SolveReport:
    """Damped Newton on the full gradient with Armijo backtracking.

    Baseline for comparing against the hierarchical route. Falls back to a
    steepest-descent direction whenever the Newton step is not a descent
    direction; iterates are kept inside the domain box.
    """
    tol = tolerances or Tolerances()
    box = merit.domain_box
    p = np.asarray(p0, dtype=float)
    if not merit.contains(p):
        raise ValueError("starting point lies outside the domain box")
    evals = {"count": 0}

    def feval(q):
        evals["count"] += 1
        return merit(q)

    fval = feval(p)
    outer_tol = (
        tol.outer_tol
        if tol.outer_tol is not None
        else max(1e-8, 10.0 * EPS ** (2.0 / 3.0) * max(1.0, abs(fval)))
    )
    best = (p.copy(), fval, np.inf)
    for iteration in range(max_iter + 1):
        report = fd_hessian(feval, p, box=box)
        g, hess = report.gradient, report.hessian
        grad_norm = float(np.linalg.norm(g))
        if grad_norm < best[2]:
            best = (p.copy(), fval, grad_norm)
        if grad_norm <= outer_tol:
            return SolveReport(
                minimizer=p,
                value=fval,
                method="direct",
                inner_solves=0,
                outer_evaluations=evals["count"],
                certificates=SolveCertificates(
                    convexity=None, brackets=(), gradient_norm=grad_norm
                ),
                iterations=iteration,
                outer_tol=outer_tol,
                x_tol=float("nan"),
            )
        try:
            step = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, -g, rcond=None)[0]
        if g @ step >= 0.0:
            step = -g
        slope = float(g @ step)
        # One-ulp slack: the Armijo decrease vanishes below float resolution
        # near the minimum.
        f_slack = 4.0 * EPS * max(1.0, abs(fval))
        t = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            trial = np.clip(p + t * step, box[:, 0], box[:, 1])
            f_trial = feval(trial)
            if f_trial <= fval + ARMIJO_C1_DIRECT * t * slope + f_slack:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            raise SolveError(
                "direct line search stalled",
                best_point=best[0],
                best_value=best[1],
                grad_norm=best[2],
            )
        p, fval = trial, f_trial
    raise SolveError(
        f"direct solve did not converge within {max_iter} iterations "
        f"(best gradient norm {best[2]:.3e})",
        best_point=best[0],
        best_value=best[1],
        grad_norm=best[2],
    )


def equivalence_report(
    merit: MeritFunction,
    split: ParameterSplit,
    starts,
    grid=None,
    tolerances: Tolerances | None = None,
) -> EquivalenceReport:
    """Run the hierarchical solve once and the direct baseline from each
    start; report the worst distance between each converged direct answer
    and its nearest hierarchical candidate.

    With one retained coordinate, every polished local minimum of the
    section is listed as a candidate, so sections crossing several minima
    cover all the direct answers. Disagreements are findings, not errors.
    """
    tol = tolerances or Tolerances()
    hier = solve_hierarchical(merit, split, grid=grid, tolerances=tolerances)
    candidates = [(hier.minimizer, hier.value)]
    if split.n == 1:
        grids = _resolve_grids(grid, merit.domain_box, split)
        use_linear = linear_elimination_applies(merit, split)
        warm = {"y": None}

        def solve_at(u):
            problem = SliceProblem(merit, split, np.array([u]))
            if use_linear:
                sub = subminimize_linear(problem)
            else:
                sub = subminimize_newton(problem, y0=warm["y"], inner_tol=tol.inner_tol)
            warm["y"] = sub.y_star
            return sub

        x_tol = tol.x_tol if tol.x_tol is not None else 1e-8 * (grids[0][-1] - grids[0][0])
        for u, value in enumerate_section_minima(lambda v: solve_at(v).value, grids[0], x_tol):
            sub = solve_at(u)
            point = split.embed(np.array([u]), sub.y_star)
            if all(np.max(np.abs(point - c)) > 1e-6 for c, _ in candidates):
                candidates.append((point, sub.value))
    directs = tuple(solve_direct(merit, p0, tolerances=tolerances) for p0 in starts)
    max_distance = 0.0
    max_gap = 0.0
    for rep in directs:
        dists = [float(np.max(np.abs(rep.minimizer - c))) for c, _ in candidates]
        j = int(np.argmin(dists))
        max_distance = max(max_distance, dists[j])
        max_gap = max(max_gap, abs(rep.value - candidates[j][1]))
    return EquivalenceReport(
        hierarchical=hier,
        candidates=tuple(candidates),
        direct_reports=directs,
        max_distance=max_distance,
        max_value_gap=max_gap,
    )


def recover_from_anchor(
    merit: MeritFunction,
    anchor_index: int,
    anchor_value: float,
    inner_tol: float | None = None,
    probe_density: int | None = None,
) -> RegularizationRecovery:
    """Recover a point on the conditional-minimum graph from one known
    coordinate: a single slice solve at the anchored value.

    Works even when the full minimum is quasi-degenerate (flat valley),
    because only convexity in the eliminated block is required; that is
    probed and refused when violated.
    """
    if not 0 <= anchor_index < merit.dimension:
        raise ValueError(f"anchor index {anchor_index} out of range")
    split = ParameterSplit.single(anchor_index, merit.dimension)
    certificate = probe_y_convexity(merit, split, probe_density)
    if not certificate.positive:
        raise ConvexityError(
            "refusing anchor recovery: eliminated-block Hessian has min "
            f"eigenvalue {certificate.witness_min_eig:.3e} at {certificate.witness}",
            point=certificate.witness,
            min_eig=certificate.witness_min_eig,
            certificate=certificate,
        )
    problem = SliceProblem(merit, split, np.array([float(anchor_value)]))
    if linear_elimination_applies(merit, split):
        sub = subminimize_linear(problem)
    else:
        sub = subminimize_newton(problem, inner_tol=inner_tol)
    recovered = split.embed(np.array([float(anchor_value)]), sub.y_star)
    recovered[anchor_index] = float(anchor_value)
    return RegularizationRecovery(
        anchor_index=anchor_index,
        anchor_value=float(anchor_value),
        recovered=recovered,
        section_residual=sub.grad_y_norm,
        value=sub.value,
        certificate=certificate,
    )


def _fmt(x) -> str:
    return repr(float(x))


def format_solve_report(report: SolveReport) -> str:
    """Human-readable solve report (full round-trip float precision)."""
    lines = [f"method: {report.method}"]
    lines.append("minimizer: [" + ", ".join(_fmt(v) for v in report.minimizer) + "]")
    lines.append(f"value: {_fmt(report.value)}")
    lines.append(
        f"gradient norm: {_fmt(report.certificates.gradient_norm)}"
        f" (outer tolerance {_fmt(report.outer_tol)})"
    )
    lines.append(f"inner sub-minimizations: {report.inner_solves}")
    lines.append(f"outer evaluations: {report.outer_evaluations}")
    if report.split is not None:
        lines.append(
            f"split: x={list(report.split.x_indices)} y={list(report.split.y_indices)}"
        )
    if report.inner_method:
        lines.append(f"inner method: {report.inner_method}")
    cert = report.certificates.convexity
    if cert is not None:
        lines.append(
            f"convexity: {cert.verdict} (min eigenvalue {_fmt(cert.min_eig_over_samples)} "
            f"over {cert.sampled_points} samples)"
        )
    for tri in report.certificates.brackets:
        lines.append(
            f"bracket: a={_fmt(tri.a)} b={_fmt(tri.b)} c={_fmt(tri.c)} "
            f"fa={_fmt(tri.fa)} fb={_fmt(tri.fb)} fc={_fmt(tri.fc)}"
        )
    return "\n".join(lines) + "\n"


def solve_report_dict(report: SolveReport) -> dict:
    """Machine-readable mirror of :func:`format_solve_report`."""
    cert = report.certificates.convexity
    return {
        "method": report.method,
        "minimizer": [float(v) for v in report.minimizer],
        "value": float(report.value),
        "gradient_norm": float(report.certificates.gradient_norm),
        "outer_tolerance": float(report.outer_tol),
        "inner_solves": report.inner_solves,
        "outer_evaluations": report.outer_evaluations,
        "split": None
        if report.split is None
        else {
            "x_indices": list(report.split.x_indices),
            "y_indices": list(report.split.y_indices),
        },
        "inner_method": report.inner_method,
        "convexity": None
        if cert is None
        else {
            "verdict": cert.verdict,
            "min_eigenvalue": float(cert.min_eig_over_samples),
            "sampled_points": cert.sampled_points,
        },
        "brackets": [
            {
                "a": tri.a,
                "b": tri.b,
                "c": tri.c,
                "fa": tri.fa,
                "fb": tri.fb,
                "fc": tri.fc,
            }
            for tri in report.certificates.brackets
        ],
    }
