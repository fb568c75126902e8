"""Tests whether evolved frame states are mixtures of spin coherent states.

Azimuthally averaged mixtures of tilted coherent states are diagonal in m,
with populations that are integrals of the single-angle population vectors.
Since the measurement channel never creates coherences, decomposability of
an evolved frame state over the whole coherent family reduces to a
non-negative least-squares fit of its population vector against a discrete
grid of those columns.  A residual that stays large as the grid is refined
certifies that no such mixture exists; the residual threshold and the
grid-doubling stability check are this package's operational criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular_momentum import SpinLabel, as_spin, coherent_populations
from .errors import ConvergenceError, DomainError
from .quantum_drf import FrameState, apply_map, build_kraus
from .tolerances import KKT_TOL, STRUCTURE_TOL

__all__ = [
    "CoherentGrid",
    "DecompositionResult",
    "build_grid",
    "nnls_solve",
    "convexity_test",
]

_B_SUM_TOL = 1e-10


@dataclass(frozen=True)
class CoherentGrid:
    """Candidate family: population columns of coherent states on a theta grid."""

    j: SpinLabel
    thetas: np.ndarray
    columns: np.ndarray  # shape (2j+1, n_nodes)

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float)
        columns = np.asarray(self.columns, dtype=float)
        if np.any(np.diff(thetas) <= 0):
            raise DomainError("grid angles must be strictly increasing")
        if abs(thetas[0]) > 1e-15 or abs(thetas[-1] - math.pi) > 1e-12:
            raise DomainError("grid must include theta = 0 and theta = pi")
        if columns.shape != (self.j.dim, len(thetas)):
            raise DomainError("column block does not match grid size")
        sums = columns.sum(axis=0)
        if np.max(np.abs(sums - 1.0)) > STRUCTURE_TOL:
            raise DomainError("every column must sum to 1")
        thetas.setflags(write=False)
        columns.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "columns", columns)

    @property
    def n_nodes(self) -> int:
        return len(self.thetas)


def build_grid(j, n_nodes: int) -> CoherentGrid:
    """Place nodes uniformly in cos(theta), endpoints included.

    Requires at least as many candidates as population entries (2j + 1).
    """
    j = as_spin(j)
    if n_nodes < j.dim:
        raise DomainError(
            f"n_nodes={n_nodes} is too small for {j} (need at least {j.dim})"
        )
    thetas = np.arccos(np.linspace(1.0, -1.0, n_nodes))
    columns = np.column_stack([coherent_populations(j, t) for t in thetas])
    return CoherentGrid(j, thetas, columns)


@dataclass(frozen=True)
class DecompositionResult:
    """Outcome of a non-negative fit: weights, residual, and weight-sum gap."""

    weights: np.ndarray
    residual: float
    weight_sum_gap: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.size and w.min() < 0:
            raise DomainError("weights must be non-negative")
        if self.residual < 0:
            raise DomainError("residual must be non-negative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _result(A: np.ndarray, b: np.ndarray, x: np.ndarray) -> DecompositionResult:
    return DecompositionResult(
        weights=x,
        residual=float(np.linalg.norm(A @ x - b)),
        weight_sum_gap=float(abs(x.sum() - 1.0)),
    )


def nnls_solve(A, b, kkt_tol: float = KKT_TOL,
               max_iter: int | None = None) -> DecompositionResult:
    """Minimise ||A w - b||_2 subject to w >= 0 (Lawson-Hanson active set).

    Variables move between the bound set (pinned at zero) and the free set;
    each outer iteration admits the bound variable with the largest positive
    dual A^T(b - Aw) (ties broken by lowest index) and re-solves the
    unconstrained least-squares problem on the free set, stepping back along
    the segment to the first zero crossing whenever a free variable would go
    negative.  Terminates when every bound dual is <= ``kkt_tol``, i.e. all
    bound-set reduced gradients are >= -kkt_tol.

    Raises
    ------
    ConvergenceError
        If more than ``max_iter`` (default 10 x n_columns) variables are
        admitted; the error carries the best iterate as ``result``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise DomainError(
            f"incompatible shapes: A is {A.shape}, b is {b.shape}"
        )
    if abs(b.sum() - 1.0) > _B_SUM_TOL:
        raise DomainError(f"target must sum to 1 (got {b.sum()!r})")
    n = A.shape[1]
    if max_iter is None:
        max_iter = 10 * n

    x = np.zeros(n)
    free = np.zeros(n, dtype=bool)
    admitted = 0
    while True:
        dual = A.T @ (b - A @ x)
        candidates = np.where(free, -np.inf, dual)
        entering = int(np.argmax(candidates))  # argmax takes the lowest index on ties
        if candidates[entering] <= kkt_tol:
            return _result(A, b, x)
        admitted += 1
        if admitted > max_iter:
            raise ConvergenceError(
                f"coherent_analysis.nnls_solve: iteration cap {max_iter} "
                "exceeded",
                result=_result(A, b, x),
            )
        free[entering] = True
        while True:
            trial = np.zeros(n)
            solution = np.linalg.lstsq(A[:, free], b, rcond=None)[0]
            trial[free] = solution
            if solution.size == 0 or solution.min() > 0.0:
                x = trial
                break
            blocking = free & (trial <= 0.0)
            steps = x[blocking] / (x[blocking] - trial[blocking])
            x = x + steps.min() * (trial - x)
            free &= x > 0.0
            x[~free] = 0.0


def convexity_test(j, n: int, n_nodes: int) -> DecompositionResult:
    """Fit the n-step evolved frame populations against the coherent family.

    Evolves the aligned state through n measurements (the state stays
    diagonal), then runs :func:`nnls_solve` of its population vector against
    :func:`build_grid`.  At n = 0 the state is itself a grid column, so the
    residual vanishes; a residual that stays above threshold as n_nodes
    doubles signals genuine non-decomposability rather than grid error.
    """
    j = as_spin(j)
    if n < 0:
        raise DomainError("step count must be non-negative")
    state = FrameState.stretched(j)
    kraus = build_kraus(j)
    for _ in range(n):
        state = apply_map(state, kraus)
    grid = build_grid(j, n_nodes)
    return nnls_solve(grid.columns, state.populations)
