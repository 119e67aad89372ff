"""Certified fixed-point iteration for contractive holomorphic self-maps.

A holomorphic self-map of a domain whose image sits strictly inside a nested
inner domain contracts the ambient Caratheodory distance by the certificate
constant k < 1 on every step.  Iterating therefore converges geometrically to
the unique fixed point, and the recorded step sizes yield certified error
bounds: after stopping, the returned point is within
``last_step * k / (1 - k)`` of the true fixed point (a posteriori), and
within ``k^n * d0 / (1 - k)`` after n steps from the start (a priori).

Distances along the iteration are measured in the ambient metric, which is
the metric the contraction statement lives in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .contraction import ContractionCertificate, _derived_stream, _SEED_SALT
from .domains import Domain, Point, PointLike, SampleStream, as_point
from .errors import (
    DomainError,
    HypothesisError,
    NonConvergenceError,
    StructuralError,
)
from .holomaps import HoloMap

__all__ = [
    "FixedPointProblem",
    "FixedPointResult",
    "required_iterations",
    "step_contraction_check",
    "solve",
    "uniqueness_probe",
    "MAX_ITER_GUARD",
]

# Extra steps granted beyond the theoretical count when max_iter is derived
# automatically; absorbs rounding in the stopping rule.
MAX_ITER_GUARD = 16


@dataclass(frozen=True)
class FixedPointProblem:
    """A contractive iteration setup.

    ``mapping`` must be a self-map of ``ambient`` whose image lies in
    ``inner`` (guaranteed by construction for generated maps); ``tolerance``
    is the target bound, in ambient-metric units, on the distance between the
    returned point and the true fixed point.  ``max_iter=None`` derives the
    budget from the certificate: the theoretical step count plus a guard.
    """

    ambient: Domain
    inner: Domain
    mapping: HoloMap
    start: PointLike
    tolerance: float
    max_iter: int | None = None

    def __post_init__(self):
        if self.mapping.in_dim != self.ambient.dim or self.mapping.out_dim != self.ambient.dim:
            raise StructuralError(
                f"mapping must be a self-map of the ambient domain (dimension {self.ambient.dim})"
            )
        if self.inner.dim != self.ambient.dim:
            raise StructuralError("inner and ambient domains must share a dimension")
        tol = float(self.tolerance)
        if math.isnan(tol) or not tol > 0.0 or math.isinf(tol):
            raise StructuralError(f"tolerance must be finite and > 0: {self.tolerance!r}")
        object.__setattr__(self, "tolerance", tol)
        object.__setattr__(self, "start", as_point(self.start, self.ambient.dim, what="start"))
        if self.max_iter is not None and int(self.max_iter) < 1:
            raise StructuralError(f"max_iter must be >= 1: {self.max_iter!r}")


@dataclass(frozen=True)
class FixedPointResult:
    """Outcome of a converged iteration.

    ``point`` is the final iterate (never an extrapolation, so every reported
    bound follows from recorded quantities).  ``trace[n]`` is the ambient
    distance between iterates n and n+1; ``iterations == len(trace)`` is the
    number of map applications performed.  ``certified_bound`` bounds the
    ambient distance from ``point`` to the true fixed point.
    """

    point: Point
    iterations: int
    last_step: float
    certified_bound: float
    apriori_bound: float
    k_used: float
    trace: tuple[float, ...]


def required_iterations(k: float, d0: float, tol: float) -> int:
    """Smallest n with k^n * d0 / (1 - k) <= tol.

    Returns 0 when the bound already holds with no step; k = 0 returns 1
    (a single step lands exactly on the fixed point in the degenerate case).
    """
    k = float(k)
    d0 = float(d0)
    tol = float(tol)
    if math.isnan(k) or k < 0.0 or k >= 1.0:
        raise DomainError(f"contraction constant must lie in [0, 1): {k!r}")
    if math.isnan(d0) or not d0 > 0.0 or math.isinf(d0):
        raise DomainError(f"initial step must be finite and > 0: {d0!r}")
    if math.isnan(tol) or not tol > 0.0:
        raise DomainError(f"tolerance must be > 0: {tol!r}")
    if tol * (1.0 - k) >= d0:
        return 0
    if k == 0.0:
        return 1
    ratio = math.log(tol * (1.0 - k) / d0) / math.log(k)
    # back off one ulp-scale before ceiling so exact powers don't round up
    return max(0, math.ceil(ratio - 1e-12))


def step_contraction_check(
    mapping: HoloMap,
    ambient: Domain,
    inner: Domain,
    cert: ContractionCertificate,
    stream: SampleStream,
) -> float:
    """Max over sampled pairs of c(f(x), f(y)) - k * c(x, y) in the ambient metric.

    Nonpositive up to rounding for a valid setup.  Image points leaving the
    inner domain raise :class:`HypothesisError`.
    """
    if mapping.in_dim != ambient.dim or mapping.out_dim != ambient.dim:
        raise StructuralError("contraction check needs a self-map of the ambient domain")
    xs = ambient.sample(stream)
    ys = ambient.sample(_derived_stream(stream, _SEED_SALT))
    fxs = mapping.evaluate_many(xs)
    fys = mapping.evaluate_many(ys)
    for arr in (fxs, fys):
        ok = inner.contains_many(arr, 0.0)
        if not ok.all():
            i = int(np.argmin(ok))
            raise HypothesisError(
                f"image point {tuple(arr[i])!r} escapes the inner domain; "
                "the containment hypothesis fails"
            )
    gaps = ambient.caratheodory_many(fxs, fys) - cert.k * ambient.caratheodory_many(xs, ys)
    return float(gaps.max())


def solve(problem: FixedPointProblem, cert: ContractionCertificate) -> FixedPointResult:
    """Iterate to the unique fixed point with certified error control.

    Stops once ``step * k / (1 - k) <= tolerance`` (the a posteriori tail
    bound of the geometric series) and returns the next iterate.  The
    certificate must be closed-form for the problem's (ambient, inner) pair.
    Raises :class:`NonConvergenceError` with the recorded trace when the
    budget runs out, and :class:`HypothesisError` when an iterate escapes.
    """
    if cert.method != "closed_form":
        raise HypothesisError("fixed-point certification requires a closed-form certificate")
    ambient, inner, f = problem.ambient, problem.inner, problem.mapping
    x = problem.start
    if not ambient.contains(x, 0.0):
        raise DomainError(f"start {x!r} is not inside the ambient domain")
    k = cert.k
    factor = k / (1.0 - k)
    tol = problem.tolerance
    trace: list[float] = []
    max_iter = problem.max_iter
    result_point: Point | None = None
    while True:
        x_next = f.evaluate(x)
        if not ambient.contains(x_next, 0.0):
            raise HypothesisError(
                f"iterate {x_next!r} escaped the ambient domain at step {len(trace)}"
            )
        if not inner.contains(x_next, 0.0):
            raise HypothesisError(
                f"iterate {x_next!r} left the inner domain at step {len(trace)}; "
                "the image containment hypothesis fails"
            )
        step = ambient.caratheodory(x, x_next)
        trace.append(step)
        if max_iter is None:
            # theory fixes the count from the first step; the guard absorbs rounding
            max_iter = required_iterations(k, step, tol) + MAX_ITER_GUARD if step > 0.0 else 1
        if step * factor <= tol:
            result_point = x_next
            break
        if len(trace) >= max_iter:
            raise NonConvergenceError(
                f"no convergence within {max_iter} iterations "
                f"(last step {step!r}, required bound {tol * (1.0 - k) / k if k else tol!r})",
                trace,
            )
        x = x_next
    residual = ambient.caratheodory(result_point, f.evaluate(result_point))
    if residual > tol:
        raise HypothesisError(
            f"fixed-point residual {residual!r} exceeds the tolerance {tol!r}; "
            "the contraction hypothesis fails for this setup"
        )
    n = len(trace)
    return FixedPointResult(
        point=result_point,
        iterations=n,
        last_step=trace[-1],
        certified_bound=trace[-1] * factor,
        apriori_bound=k**n * trace[0] / (1.0 - k),
        k_used=k,
        trace=tuple(trace),
    )


def uniqueness_probe(
    problem: FixedPointProblem,
    cert: ContractionCertificate,
    starts,
) -> float:
    """Max pairwise ambient distance between fixed points from several starts.

    All starts must converge to the same point up to the certified slack
    (2 * tolerance * k / (1 - k) plus rounding); a single start returns 0.
    """
    points = [
        solve(replace(problem, start=as_point(s, problem.ambient.dim, what="start")), cert).point
        for s in starts
    ]
    spread = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            spread = max(spread, problem.ambient.caratheodory(points[i], points[j]))
    return spread
