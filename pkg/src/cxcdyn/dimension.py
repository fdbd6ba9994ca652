"""Spectral radius machinery and dimension-equation solvers.

For a weighted digraph and snowflake parameter alpha > 0, the weight matrix
has entries sum_e d(e)^(-1/alpha) over parallel edges i -> j.  Its spectral
radius is strictly increasing in alpha, which makes bisection on the two
dimension equations (radius at 1/s equal to 1, and radius at alpha/delta
equal to 1) well posed.  Radii come from power iteration on the matrix plus
the identity; the shift makes irreducible nonnegative matrices primitive, so
periodicity cannot stall the iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graphs import WeightedDigraph, validate_graph


class ConvergenceError(RuntimeError):
    pass


def weight_matrix(g: WeightedDigraph, alpha: float) -> np.ndarray:
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n = g.vertex_count
    a = np.zeros((n, n))
    for e in g.edges:
        a[e.src - 1, e.dst - 1] += float(e.degree) ** (-1.0 / alpha)
    return a


@dataclass(frozen=True)
class SpectralResult:
    radius: float
    vector: np.ndarray
    iterations: int


def spectral_radius(matrix: np.ndarray, tol: float = 1e-12, max_iter: int = 10**5) -> SpectralResult:
    """Dominant eigenvalue and positive eigenvector of a nonnegative matrix.

    Power iteration on the matrix plus a diagonal shift, with sup-norm
    normalization; the radius is recovered by subtracting the shift.  The
    shift removes periodicity (irreducible plus positive diagonal means
    primitive) and is scaled to the max row sum: a unit shift would crush
    the relative spectral gap of matrices with tiny entries and stall far
    from convergence.  Stops when successive radius estimates differ by
    less than tol/10.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if (a < 0).any():
        raise ValueError("matrix must be nonnegative")
    n = a.shape[0]
    shift = float(a.sum(axis=1).max())
    if shift == 0.0:
        return SpectralResult(radius=0.0, vector=np.ones(n), iterations=0)
    shifted = a + shift * np.eye(n)
    x = np.ones(n)
    estimate = np.inf
    for it in range(1, max_iter + 1):
        y = shifted @ x
        norm = float(y.max())
        new_estimate = norm - shift
        x = y / norm
        if abs(new_estimate - estimate) < tol / 10.0:
            return SpectralResult(radius=new_estimate, vector=x, iterations=it)
        estimate = new_estimate
    residual = float(np.max(np.abs(shifted @ x - (estimate + shift) * x)))
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps "
                           f"(last residual {residual:.3e})")


def graph_spectral_radius(g: WeightedDigraph, alpha: float, tol: float = 1e-12) -> SpectralResult:
    """Spectral radius of the weight matrix at the given alpha.

    Requires an irreducible graph; the positive-eigenvector guarantees used
    downstream come from Perron theory and fail otherwise.
    """
    if not validate_graph(g).irreducible:
        raise ValueError("graph is not irreducible; spectral data undefined")
    return spectral_radius(weight_matrix(g, alpha), tol=tol)


@dataclass(frozen=True)
class DimensionResult:
    """Solution of one of the two dimension equations.

    ``bracket`` is the final bisection interval (lo, hi) in the exponent;
    the radius at the reciprocal-exponent of hi is <= 1 <= the radius at the
    reciprocal-exponent of lo, by monotonicity.
    """

    exponent: float
    bracket: tuple[float, float]
    tolerance: float
    evaluations: int
    mode: str
    alpha: Optional[float] = None
    radius_trace: Optional[tuple[tuple[float, float], ...]] = None


_BRACKET_LIMIT = float(2**20)


def solve_exponent(g: WeightedDigraph, mode: str = "conformal",
                   alpha: Optional[float] = None, tol: float = 1e-10,
                   radius_tol: float = 1e-12, keep_trace: bool = False) -> DimensionResult:
    """Solve for the exponent making the relevant spectral radius equal 1.

    mode "conformal": the exponent s with radius(1/s) = 1, the Hausdorff
    dimension of the repellor in the snowflaked metric (independent of alpha).
    mode "hausdorff": requires alpha; the exponent delta with
    radius(alpha/delta) = 1, the dimension in the unsnowflaked metric.
    The solver brackets by doubling and bisects, exploiting that the radius
    is strictly decreasing in the exponent.
    """
    report = validate_graph(g)
    if not report.irreducible:
        raise ValueError("graph is not irreducible")
    if report.levy_witness is not None:
        raise ValueError(f"graph fails the No Levy Cycle condition; "
                         f"witness cycle (edge indices): {list(report.levy_witness)}")
    if mode == "conformal":
        if alpha is not None:
            raise ValueError("alpha is only meaningful in hausdorff mode")
        def radius_at(exponent: float) -> float:
            return graph_spectral_radius(g, 1.0 / exponent, tol=radius_tol).radius
    elif mode == "hausdorff":
        if alpha is None or alpha <= 0:
            raise ValueError("hausdorff mode needs a positive alpha")
        def radius_at(exponent: float) -> float:
            return graph_spectral_radius(g, alpha / exponent, tol=radius_tol).radius
    else:
        raise ValueError(f"unknown mode {mode!r}")

    trace: list[tuple[float, float]] = []
    evaluations = 0

    def evaluate(exponent: float) -> float:
        nonlocal evaluations
        evaluations += 1
        r = radius_at(exponent)
        if keep_trace:
            trace.append((exponent, r))
        return r

    lo, hi = 1e-3, 1.0
    if evaluate(lo) < 1.0:
        raise ValueError("no bracket: spectral radius below 1 even at exponent 1e-3")
    while evaluate(hi) > 1.0:
        lo = hi
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise ValueError("no bracket found below exponent 2^20")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if evaluate(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    exponent = 0.5 * (lo + hi)
    if mode == "hausdorff" and exponent > 1.0 + 2.0 * tol:
        raise ValueError(f"delta = {exponent:.6f} > 1: the chosen alpha has spectral "
                         "radius >= 1; pick alpha with radius below 1")
    return DimensionResult(exponent=exponent, bracket=(lo, hi), tolerance=tol,
                           evaluations=evaluations, mode=mode, alpha=alpha,
                           radius_trace=tuple(trace) if keep_trace else None)


@dataclass(frozen=True)
class PerronData:
    """A positive vector strictly contracted by the weight matrix."""

    alpha: float
    radius: float
    vector: np.ndarray


def perron_vector(g: WeightedDigraph, alpha: float, tol: float = 1e-12) -> PerronData:
    """Positive eigenvector w (sup-norm 1) with matrix @ w < w componentwise.

    Only exists when the spectral radius at alpha is below 1; callers choose
    alpha accordingly.
    """
    result = graph_spectral_radius(g, alpha, tol=tol)
    if result.radius >= 1.0:
        raise ValueError(f"no strictly contracted vector exists: spectral radius "
                         f"{result.radius:.6f} >= 1 at alpha {alpha}")
    w = result.vector
    if (w <= 0).any():
        raise ConvergenceError("power iteration returned a non-positive vector")
    contracted = weight_matrix(g, alpha) @ w
    if not (contracted < w).all():
        raise ConvergenceError("eigenvector failed the strict contraction check")
    return PerronData(alpha=alpha, radius=result.radius, vector=w)
