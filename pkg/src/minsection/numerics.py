"""Finite-difference derivatives, symmetric eigen-analysis, and stable
linear least-squares solves.

Everything here is a pure function of its inputs and safe to call
concurrently. Derivatives are obtained by finite differences only; callers
are responsible for supplying objectives that are smooth (C^2) on their
domain box.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AUTO",
    "BoundaryStepWarning",
    "DerivativeReport",
    "EigenSummary",
    "RankDeficiencyError",
    "eigen_index",
    "fd_gradient",
    "fd_hessian",
    "fd_y_block",
    "is_positive_definite",
    "linear_lsq_solve",
]

EPS = float(np.finfo(float).eps)
#: Relative step for central first differences (balances truncation/roundoff).
GRADIENT_STEP = EPS ** (1.0 / 3.0)
#: Relative step for central second differences.
HESSIAN_STEP = EPS ** 0.25

#: Sentinel: resolve the domain box from the objective's ``domain_box`` attribute.
AUTO = object()


class BoundaryStepWarning(UserWarning):
    """A finite-difference stencil was clamped at the domain boundary."""


class RankDeficiencyError(ValueError):
    """A least-squares matrix is numerically rank deficient."""

    def __init__(self, message: str, rank: int, required: int):
        super().__init__(message)
        self.rank = rank
        self.required = required


@dataclass(frozen=True)
class DerivativeReport:
    """Finite-difference gradient and Hessian at a point.

    ``hessian`` is the symmetrized matrix (H_raw + H_raw^T)/2; ``asymmetry``
    is the relative asymmetry of the raw estimate, flagged above 1e-4 as a
    data-quality warning (never an error). ``y_block`` is the exact
    sub-matrix of ``hessian`` on the eliminated-coordinate block when a
    split was supplied.
    """

    gradient: np.ndarray
    hessian: np.ndarray
    y_block: np.ndarray | None
    fd_step: np.ndarray
    asymmetry: float
    asymmetry_flagged: bool
    boundary_clamped: bool


@dataclass(frozen=True)
class EigenSummary:
    """Signature of a symmetric matrix: sorted spectrum and sign counts.

    The three counts partition the spectrum: eigenvalues below
    -degeneracy_tol are negative, those within +-degeneracy_tol are near
    zero, the rest are positive.
    """

    eigenvalues: np.ndarray
    min_abs: float
    negative_count: int
    near_zero_count: int
    positive_count: int
    degeneracy_tol: float


def _resolve_box(f, box):
    if box is AUTO:
        box = getattr(f, "domain_box", None)
    if box is None:
        return None
    box = np.asarray(box, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2:
        raise ValueError("domain box must have shape (M, 2)")
    return box


def _exact_step(value: float, step: float) -> float:
    # Round the step so value +- step are exactly representable offsets.
    probe = value + step
    return probe - value


def fd_gradient(f, p, box=AUTO) -> np.ndarray:
    """Central-difference gradient with per-coordinate steps
    ``h_i = cbrt(eps) * max(1, |p_i|)``.

    Points too close to the domain box boundary fall back to one-sided
    (three-point) differences toward the interior and raise
    :class:`BoundaryStepWarning`. Pass ``box=None`` to disable clamping.
    """
    p = np.asarray(p, dtype=float)
    box = _resolve_box(f, box)
    m = p.size
    grad = np.empty(m)
    clamped = False
    work = p.copy()
    for i in range(m):
        h = _exact_step(p[i], GRADIENT_STEP * max(1.0, abs(p[i])))
        lo, hi = (-np.inf, np.inf) if box is None else box[i]
        if p[i] + h <= hi and p[i] - h >= lo:
            work[i] = p[i] + h
            f_plus = f(work)
            work[i] = p[i] - h
            f_minus = f(work)
            grad[i] = (f_plus - f_minus) / (2.0 * h)
        else:
            clamped = True
            sign = 1.0 if p[i] + 2.0 * h <= hi else -1.0
            if sign < 0 and p[i] - 2.0 * h < lo:
                raise ValueError(
                    f"domain box is thinner than the FD stencil along coordinate {i}"
                )
            f0 = f(p)
            work[i] = p[i] + sign * h
            f1 = f(work)
            work[i] = p[i] + sign * 2.0 * h
            f2 = f(work)
            grad[i] = sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
        work[i] = p[i]
    if clamped:
        warnings.warn(
            "gradient stencil clamped at the domain boundary; one-sided "
            "differences were used",
            BoundaryStepWarning,
            stacklevel=2,
        )
    if not np.all(np.isfinite(grad)):
        bad = int(np.flatnonzero(~np.isfinite(grad))[0])
        raise ValueError(f"non-finite gradient entry at coordinate {bad}")
    return grad


def _second_diff_block(f, p, indices, box):
    """Raw central second differences of ``f`` on the given coordinates.

    Near-boundary points are shifted inward by one step so the full stencil
    stays inside the box (second derivatives are continuous, so the shifted
    estimate is reported with a ``boundary_clamped`` flag rather than a
    lower-order formula).
    """
    p = np.asarray(p, dtype=float)
    k = len(indices)
    steps = np.empty(k)
    q = p.copy()
    shifted = False
    for a, i in enumerate(indices):
        h = _exact_step(p[i], HESSIAN_STEP * max(1.0, abs(p[i])))
        steps[a] = h
        if box is not None:
            lo, hi = box[i]
            if hi - lo < 4.0 * h:
                raise ValueError(
                    f"domain box is thinner than the FD stencil along coordinate {i}"
                )
            moved = min(max(p[i], lo + h), hi - h)
            if moved != p[i]:
                shifted = True
                q[i] = moved
    block = np.empty((k, k))
    f0 = f(q)
    work = q.copy()
    for a, i in enumerate(indices):
        h = steps[a]
        work[i] = q[i] + h
        f_plus = f(work)
        work[i] = q[i] - h
        f_minus = f(work)
        work[i] = q[i]
        block[a, a] = (f_plus - 2.0 * f0 + f_minus) / (h * h)
    for a, i in enumerate(indices):
        for b, j in enumerate(indices):
            if a == b:
                continue
            ha, hb = steps[a], steps[b]
            work[i] = q[i] + ha
            work[j] = q[j] + hb
            fpp = f(work)
            work[j] = q[j] - hb
            fpm = f(work)
            work[i] = q[i] - ha
            fmm = f(work)
            work[j] = q[j] + hb
            fmp = f(work)
            work[i] = q[i]
            work[j] = q[j]
            block[a, b] = (fpp - fpm - fmp + fmm) / (4.0 * ha * hb)
    if not np.all(np.isfinite(block)):
        a, b = np.argwhere(~np.isfinite(block))[0]
        raise ValueError(
            f"non-finite Hessian entry at coordinate pair ({indices[a]}, {indices[b]})"
        )
    return block, steps, shifted


#: Relative asymmetry of the raw Hessian above which a data-quality flag is set.
ASYMMETRY_TOL = 1e-4


def fd_hessian(f, p, split=None, box=AUTO) -> DerivativeReport:
    """Symmetric central-difference Hessian (with gradient) at ``p``.

    Parameters
    ----------
    f : callable
        Scalar objective.
    p : array_like
        Evaluation point.
    split : ParameterSplit, optional
        When given, the report carries the (y_indices x y_indices) sub-block
        of the symmetrized Hessian.
    box : array_like or None
        Domain box; ``AUTO`` reads ``f.domain_box`` when present.
    """
    p = np.asarray(p, dtype=float)
    box = _resolve_box(f, box)
    grad = fd_gradient(f, p, box=box)
    indices = tuple(range(p.size))
    raw, steps, shifted = _second_diff_block(f, p, indices, box)
    scale = max(1.0, float(np.max(np.abs(raw))))
    asymmetry = float(np.max(np.abs(raw - raw.T))) / scale
    hessian = 0.5 * (raw + raw.T)
    flagged = asymmetry > ASYMMETRY_TOL
    if flagged:
        warnings.warn(
            f"raw Hessian asymmetry {asymmetry:.3e} exceeds {ASYMMETRY_TOL:.0e}; "
            "the objective may not be C^2 at this point",
            UserWarning,
            stacklevel=2,
        )
    y_block = None
    if split is not None:
        yi = np.asarray(split.y_indices, dtype=int)
        y_block = hessian[np.ix_(yi, yi)]
    return DerivativeReport(
        gradient=grad,
        hessian=hessian,
        y_block=y_block,
        fd_step=steps,
        asymmetry=asymmetry,
        asymmetry_flagged=flagged,
        boundary_clamped=shifted,
    )


def fd_y_block(f, p, split, box=AUTO) -> np.ndarray:
    """Symmetrized second-derivative block on the eliminated coordinates only.

    Cheaper than :func:`fd_hessian` when only the y-block is needed (m^2
    stencil instead of M^2). Objectives built from a partially linear model
    whose layout matches the split carry an exactly constant block
    ``2 Phi^T Phi``; that closed form is used directly, which keeps the
    block bitwise independent of the linear coordinates.
    """
    model = getattr(f, "model", None)
    if model is not None and getattr(f, "structure", "") == "partially_linear":
        n = model.nonlinear_dim
        if tuple(split.x_indices) == tuple(range(n)) and tuple(
            split.y_indices
        ) == tuple(range(n, n + model.linear_dim)):
            x = np.asarray(p, dtype=float)[:n]
            phi = model.design_matrix(x)
            block = 2.0 * phi.T @ phi
            return 0.5 * (block + block.T)
    box = _resolve_box(f, box)
    raw, _, _ = _second_diff_block(f, p, tuple(split.y_indices), box)
    return 0.5 * (raw + raw.T)


SYMMETRY_TOL = 1e-8


def _check_symmetric(H) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if float(np.max(np.abs(H - H.T))) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return 0.5 * (H + H.T)


def eigen_index(H, degeneracy_tol: float | None = None) -> EigenSummary:
    """Full symmetric eigendecomposition with sign counts.

    ``negative_count`` is the candidate Morse index; ``near_zero_count > 0``
    signals a degenerate (numerically singular) matrix. The default
    degeneracy tolerance is ``1e-6 * max(1, max |eigenvalue|)``.
    """
    H = _check_symmetric(H)
    w = np.linalg.eigvalsh(H)
    if degeneracy_tol is None:
        degeneracy_tol = 1e-6 * max(1.0, float(np.max(np.abs(w))))
    near_zero = int(np.count_nonzero(np.abs(w) <= degeneracy_tol))
    negative = int(np.count_nonzero(w < -degeneracy_tol))
    positive = int(np.count_nonzero(w > degeneracy_tol))
    return EigenSummary(
        eigenvalues=w,
        min_abs=float(np.min(np.abs(w))),
        negative_count=negative,
        near_zero_count=near_zero,
        positive_count=positive,
        degeneracy_tol=float(degeneracy_tol),
    )


def is_positive_definite(H, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue exceeds ``tol``
    (default ``1e-8 * max(1, ||H||_2)``)."""
    H = _check_symmetric(H)
    w = np.linalg.eigvalsh(H)
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(w))))
    return bool(w[0] > tol)


def linear_lsq_solve(A, b) -> np.ndarray:
    """Minimize ``||A y - b||_2`` through an orthogonal (SVD) decomposition.

    Normal equations are never formed. Raises :class:`RankDeficiencyError`
    carrying the numerical rank when A has deficient column rank.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be a 2-D matrix")
    k, j = A.shape
    if k < j:
        raise ValueError(f"underdetermined system: {k} rows for {j} unknowns")
    y, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < j:
        raise RankDeficiencyError(
            f"matrix has numerical rank {rank}, expected full column rank {j}",
            rank=int(rank),
            required=j,
        )
    return y
