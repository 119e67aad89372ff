"""Concrete open domains in C^n with exact Caratheodory distances.

Every supported kind is an affine image of the open unit polydisk, so a single
"model pullback" underlies membership tests, reproducible sampling, boundary
proximity and the distance itself:

* unit disk               model coordinate  m = z
* scaled disk (radius r)  m = z / r
* affine disk image       m = (z - center) / radius
* polydisk (radii r_i)    m_i = z_i / r_i
* affine image            m = model coordinates of the base at A^-1 (z - b)

In model coordinates the Caratheodory distance is the coordinatewise maximum
of Poincare distances; for an invertible affine change of variables this is
exact because biholomorphisms preserve the distance.  Domains are immutable
and all operations are pure, so values are safe to share across threads.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import CapabilityError, DomainError, StructuralError
from .metric_core import poincare_distance_many

__all__ = [
    "Point",
    "as_point",
    "SampleStream",
    "Domain",
    "UnitDisk",
    "ScaledDisk",
    "AffineDiskImage",
    "Polydisk",
    "AffineImage",
    "pullback_isometry_check",
    "DEFAULT_BOUNDARY_MARGIN",
    "PRECOMPACT_MARGIN",
]

#: A point of C^n: one complex number per coordinate.
Point = tuple[complex, ...]

PointLike = Union[complex, float, int, Sequence[complex], np.ndarray]

# Sampling keeps this fraction of the radius away from the boundary by
# default, so distances of sampled pairs stay finite and sups well-behaved.
DEFAULT_BOUNDARY_MARGIN = 1e-3

# Default membership margin used when asserting that one domain sits strictly
# inside another (the checkable surrogate for relative compactness).
PRECOMPACT_MARGIN = 1e-6


def as_point(value: PointLike, dim: int | None = None, *, what: str = "point") -> Point:
    """Coerce ``value`` to a tuple of finite complex coordinates.

    Scalars are accepted as 1-dimensional points.  If ``dim`` is given, the
    coordinate count must match.
    """
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        coords = (complex(value),)
    else:
        try:
            coords = tuple(complex(c) for c in value)
        except TypeError:
            raise StructuralError(f"{what} is not a scalar or coordinate sequence: {value!r}")
    if not coords:
        raise StructuralError(f"{what} has no coordinates")
    for c in coords:
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise DomainError(f"{what} has a non-finite coordinate: {c!r}")
    if dim is not None and len(coords) != dim:
        raise StructuralError(f"{what} has dimension {len(coords)}, expected {dim}")
    return coords


@dataclass(frozen=True)
class SampleStream:
    """Reproducible sampling request: seed, point count and boundary margin.

    Identical (seed, domain, count, margin) always yields the identical point
    sequence, and the first ``m`` points of a count-n stream equal the
    count-m stream (draws are laid out one row per point).
    """

    seed: int
    count: int
    boundary_margin: float = DEFAULT_BOUNDARY_MARGIN

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise StructuralError(f"seed must be a 64-bit unsigned integer: {self.seed!r}")
        if int(self.count) < 1:
            raise StructuralError(f"sample count must be >= 1: {self.count!r}")
        if not 0.0 < float(self.boundary_margin) < 1.0:
            raise StructuralError(
                f"boundary margin must lie in (0, 1): {self.boundary_margin!r}"
            )


def _points_array(pts, dim: int, what: str) -> np.ndarray:
    arr = np.asarray(pts, dtype=complex)
    if arr.ndim == 1:
        arr = arr[:, None] if dim == 1 else arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise StructuralError(f"{what}: expected an array of points of dimension {dim}")
    if not np.isfinite(arr.view(float)).all():
        raise DomainError(f"{what}: non-finite coordinate in point array")
    return arr


class Domain(abc.ABC):
    """Open subset of C^n with membership, sampling and exact distance."""

    @property
    @abc.abstractmethod
    def dim(self) -> int:
        """Complex dimension of the ambient space."""

    @property
    def closed_form_capable(self) -> bool:
        """True when :meth:`caratheodory` is exact for this kind.

        All built-in kinds carry an exact formula; the flag exists so callers
        can probe before requesting a distance.
        """
        return True

    @abc.abstractmethod
    def _pull_model_many(self, pts: np.ndarray) -> np.ndarray:
        """Map an (n, dim) array of ambient points to model coordinates."""

    @abc.abstractmethod
    def _push_model_many(self, model: np.ndarray) -> np.ndarray:
        """Map an (n, dim) array of model coordinates to ambient points."""

    # -- membership ---------------------------------------------------------

    def contains(self, p: PointLike, margin: float = 0.0) -> bool:
        """True iff ``p`` lies inside with boundary-proximity margin ``margin``.

        The proximity proxy is the max modulus of the model coordinates; the
        test is ``max_i |m_i| < 1 - margin`` (strict: domains are open).
        """
        pt = as_point(p, self.dim)
        return bool(self.contains_many([pt], margin)[0])

    def contains_many(self, pts, margin: float = 0.0) -> np.ndarray:
        margin = float(margin)
        if math.isnan(margin) or margin < 0.0:
            raise DomainError(f"membership margin must be >= 0: {margin!r}")
        prox = self.boundary_proximity_many(pts)
        return prox < 1.0 - margin

    def boundary_proximity(self, p: PointLike) -> float:
        """0 at the center, approaching 1 at the boundary, >= 1 outside."""
        pt = as_point(p, self.dim)
        return float(self.boundary_proximity_many([pt])[0])

    def boundary_proximity_many(self, pts) -> np.ndarray:
        arr = _points_array(pts, self.dim, "points")
        model = self._pull_model_many(arr)
        return np.abs(model).max(axis=1)

    # -- sampling ------------------------------------------------------------

    def sample(self, stream: SampleStream) -> np.ndarray:
        """Draw ``stream.count`` points, returned as an (count, dim) array.

        Direct polar sampling in model coordinates: for each point and each
        coordinate, modulus sqrt(u) * (1 - margin) and uniform angle, pushed
        forward through the domain's affine chart.  Deterministic in the seed
        and prefix-stable across counts.
        """
        rng = np.random.default_rng(stream.seed)
        draws = rng.random((stream.count, 2, self.dim))
        radial = np.sqrt(draws[:, 0, :]) * (1.0 - stream.boundary_margin)
        angle = 2.0 * np.pi * draws[:, 1, :]
        return self._push_model_many(radial * np.exp(1j * angle))

    # -- distance ------------------------------------------------------------

    def caratheodory(self, x: PointLike, y: PointLike) -> float:
        """Exact Caratheodory distance between two interior points.

        Unit disk: the Poincare distance.  Scaled/affine disk images: the
        Poincare distance of the model coordinates.  Polydisks: the maximum
        over coordinates.  Affine images: the distance of the base domain at
        the pulled-back points.
        """
        xs = _points_array([as_point(x, self.dim, what="x")], self.dim, "x")
        ys = _points_array([as_point(y, self.dim, what="y")], self.dim, "y")
        self._require_member(xs, "x")
        self._require_member(ys, "y")
        return float(self._distance_arrays(xs, ys)[0])

    def caratheodory_many(self, xs, ys) -> np.ndarray:
        """Vectorized :meth:`caratheodory` over two (n, dim) point arrays."""
        xa = _points_array(xs, self.dim, "xs")
        ya = _points_array(ys, self.dim, "ys")
        if xa.shape[0] != ya.shape[0]:
            raise StructuralError("point arrays must have matching lengths")
        self._require_member(xa, "xs")
        self._require_member(ya, "ys")
        return self._distance_arrays(xa, ya)

    def _require_member(self, arr: np.ndarray, what: str) -> None:
        if not self.closed_form_capable:
            raise CapabilityError(
                f"{type(self).__name__} has no exact distance; use a witness-based "
                "lower bound (contraction.witness_lower_bound) instead"
            )
        inside = self.contains_many(arr, 0.0)
        if not inside.all():
            i = int(np.argmin(inside))
            raise DomainError(
                f"{what}[{i}] = {tuple(arr[i])!r} is not inside {self.describe()}"
            )

    def _distance_arrays(self, xa: np.ndarray, ya: np.ndarray) -> np.ndarray:
        mx = self._pull_model_many(xa)
        my = self._pull_model_many(ya)
        return poincare_distance_many(mx, my).max(axis=1)

    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class UnitDisk(Domain):
    """The open unit disk in C."""

    @property
    def dim(self) -> int:
        return 1

    def _pull_model_many(self, pts):
        return pts

    def _push_model_many(self, model):
        return model


@dataclass(frozen=True)
class ScaledDisk(Domain):
    """Open disk of radius ``radius`` in (0, 1), centered at the origin."""

    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if math.isnan(r) or not 0.0 < r < 1.0:
            raise StructuralError(f"scaled disk radius must lie in (0, 1): {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return 1

    def _pull_model_many(self, pts):
        return pts / self.radius

    def _push_model_many(self, model):
        return model * self.radius


@dataclass(frozen=True)
class AffineDiskImage(Domain):
    """Open disk of arbitrary center and positive radius in C.

    The image of the unit disk under z -> center + radius * z.
    """

    center: complex
    radius: float

    def __post_init__(self):
        c = complex(self.center)
        r = float(self.radius)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise StructuralError(f"disk center must be finite: {self.center!r}")
        if math.isnan(r) or not r > 0.0 or math.isinf(r):
            raise StructuralError(f"disk radius must be finite and > 0: {self.radius!r}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return 1

    def _pull_model_many(self, pts):
        return (pts - self.center) / self.radius

    def _push_model_many(self, model):
        return self.center + model * self.radius


@dataclass(frozen=True)
class Polydisk(Domain):
    """Product of origin-centered disks with the given positive radii."""

    radii: tuple[float, ...]

    def __post_init__(self):
        try:
            radii = tuple(float(r) for r in self.radii)
        except TypeError:
            raise StructuralError(f"polydisk radii must be a sequence: {self.radii!r}")
        if not radii:
            raise StructuralError("polydisk needs at least one radius")
        for r in radii:
            if math.isnan(r) or not r > 0.0 or math.isinf(r):
                raise StructuralError(f"polydisk radii must be finite and > 0: {r!r}")
        object.__setattr__(self, "radii", radii)

    @property
    def dim(self) -> int:
        return len(self.radii)

    @cached_property
    def _radii_row(self) -> np.ndarray:
        return np.asarray(self.radii, dtype=float)[None, :]

    def _pull_model_many(self, pts):
        return pts / self._radii_row

    def _push_model_many(self, model):
        return model * self._radii_row


@dataclass(frozen=True)
class AffineImage(Domain):
    """Image of a base domain under an invertible affine map z -> A z + b."""

    base: Domain
    matrix: tuple[tuple[complex, ...], ...]
    offset: tuple[complex, ...]

    _MAX_CONDITION = 1e12

    def __post_init__(self):
        n = self.base.dim
        try:
            rows = tuple(tuple(complex(v) for v in row) for row in self.matrix)
            offset = tuple(complex(v) for v in self.offset)
        except TypeError:
            raise StructuralError("affine image needs a matrix of rows and an offset sequence")
        if len(rows) != n or any(len(row) != n for row in rows):
            raise StructuralError(
                f"affine matrix must be {n}x{n} to match the base domain dimension"
            )
        if len(offset) != n:
            raise StructuralError(f"affine offset must have dimension {n}")
        flat = [v for row in rows for v in row] + list(offset)
        for v in flat:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise StructuralError("affine image has a non-finite matrix/offset entry")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "offset", offset)
        cond = np.linalg.cond(np.asarray(rows, dtype=complex))
        if not np.isfinite(cond) or cond > self._MAX_CONDITION:
            raise StructuralError(
                f"affine matrix is singular or too ill-conditioned (cond={cond:.3g})"
            )

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def closed_form_capable(self) -> bool:
        return self.base.closed_form_capable

    @cached_property
    def _mat(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=complex)

    @cached_property
    def _inv(self) -> np.ndarray:
        return np.linalg.inv(self._mat)

    @cached_property
    def _off(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=complex)[None, :]

    def _pull_model_many(self, pts):
        return self.base._pull_model_many((pts - self._off) @ self._inv.T)

    def _push_model_many(self, model):
        return self.base._push_model_many(model) @ self._mat.T + self._off

    def pullback(self, p: PointLike) -> Point:
        """Preimage of ``p`` in the base domain."""
        arr = _points_array([as_point(p, self.dim)], self.dim, "point")
        return tuple(((arr - self._off) @ self._inv.T)[0])


def pullback_isometry_check(domain: Domain, x: PointLike, y: PointLike) -> float:
    """|c_image(x, y) - c_base(pullback x, pullback y)| for affine image kinds.

    Both sides are computed through their own public distance paths; the
    discrepancy should sit at rounding level (<= 1e-12) because invertible
    affine maps are isometries for the Caratheodory distance.
    """
    if isinstance(domain, AffineDiskImage):
        base: Domain = UnitDisk()
        arr = _points_array(
            [as_point(x, 1, what="x"), as_point(y, 1, what="y")], 1, "points"
        )
        pulled = domain._pull_model_many(arr)
        bx, by = tuple(pulled[0]), tuple(pulled[1])
    elif isinstance(domain, AffineImage):
        base = domain.base
        bx, by = domain.pullback(x), domain.pullback(y)
    else:
        raise CapabilityError(
            f"pullback isometry check applies to affine image kinds, not {type(domain).__name__}"
        )
    direct = domain.caratheodory(x, y)
    pulled_dist = base.caratheodory(bx, by)
    return abs(direct - pulled_dist)
