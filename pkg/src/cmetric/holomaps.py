"""Structural representation of holomorphic maps between domains.

Maps are closed syntax trees over a fixed constructor set (Mobius transforms,
per-coordinate polynomials, affine maps, diagonal products, compositions,
positive scalar scalings).  Every constructor produces a holomorphic map by
construction, so holomorphy is a structural guarantee of the value rather
than a runtime property to be checked.  Map values are immutable and
evaluation is pure.

Scalar evaluation (:meth:`HoloMap.evaluate`) works on points; bulk evaluation
(:meth:`HoloMap.evaluate_many`) works on (n, dim) complex arrays and is used
by the sampling-based checks.
"""

from __future__ import annotations

import abc
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    Domain,
    Point,
    PointLike,
    Polydisk,
    SampleStream,
    UnitDisk,
    as_point,
    _points_array,
)
from .errors import CapabilityError, DomainError, NumericError, StructuralError
from .metric_core import poincare_distance

__all__ = [
    "HoloMap",
    "Identity",
    "Mobius",
    "Polynomial",
    "Affine",
    "DiagonalProduct",
    "Compose",
    "ScalarScale",
    "ImageBoundReport",
    "schwarz_pick_gap",
    "image_bound",
    "random_selfmap",
    "MAX_POLY_DEGREE",
]

# Coefficient lists beyond this degree are rejected: high-degree monomials are
# badly conditioned near the disk boundary.
MAX_POLY_DEGREE = 16


class HoloMap(abc.ABC):
    """A holomorphic map C^in_dim -> C^out_dim, represented structurally."""

    @property
    @abc.abstractmethod
    def in_dim(self) -> int: ...

    @property
    @abc.abstractmethod
    def out_dim(self) -> int: ...

    def evaluate(self, p: PointLike) -> Point:
        """Evaluate at a single point; raises NumericError on non-finite output."""
        pt = as_point(p, self.in_dim)
        try:
            out = self._eval_point(pt)
        except (ZeroDivisionError, OverflowError) as exc:
            raise NumericError(f"{type(self).__name__} node blew up at {pt!r}: {exc}") from None
        for c in out:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise NumericError(
                    f"non-finite value produced by {type(self).__name__} node at {pt!r}"
                )
        return out

    def evaluate_many(self, pts) -> np.ndarray:
        """Evaluate over an (n, in_dim) array, returning (n, out_dim)."""
        arr = _points_array(pts, self.in_dim, "points")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._eval_array(arr)
        if not np.isfinite(out.view(float)).all():
            raise NumericError(f"non-finite value produced by {type(self).__name__} node")
        return out

    __call__ = evaluate

    @abc.abstractmethod
    def _eval_point(self, pt: Point) -> Point: ...

    @abc.abstractmethod
    def _eval_array(self, arr: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Identity(HoloMap):
    """z -> z in the given dimension."""

    dim: int = 1

    def __post_init__(self):
        if int(self.dim) < 1:
            raise StructuralError(f"identity dimension must be >= 1: {self.dim!r}")

    @property
    def in_dim(self):
        return self.dim

    @property
    def out_dim(self):
        return self.dim

    def _eval_point(self, pt):
        return pt

    def _eval_array(self, arr):
        return arr


@dataclass(frozen=True)
class Mobius(HoloMap):
    """Disk automorphism z -> (z - a) / (1 - conj(a) z), with |a| < 1."""

    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)) or abs(a) >= 1.0:
            raise DomainError(f"Mobius parameter must lie strictly inside the unit disk: {self.a!r}")
        object.__setattr__(self, "a", a)

    @property
    def in_dim(self):
        return 1

    @property
    def out_dim(self):
        return 1

    def inverse(self) -> "Mobius":
        """The inverse automorphism, which is the centering at -a."""
        return Mobius(-self.a)

    def _eval_point(self, pt):
        z = pt[0]
        den = 1.0 - self.a.conjugate() * z
        try:
            return ((z - self.a) / den,)
        except ZeroDivisionError:
            raise NumericError(f"Mobius denominator vanished at z={z!r}") from None

    def _eval_array(self, arr):
        z = arr[:, 0]
        return ((z - self.a) / (1.0 - np.conj(self.a) * z))[:, None]


@dataclass(frozen=True)
class Polynomial(HoloMap):
    """Per-coordinate univariate polynomials.

    ``coeffs[i]`` lists the coefficients of output coordinate i in ascending
    powers of input coordinate i; the map acts diagonally.
    """

    coeffs: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        try:
            rows = tuple(tuple(complex(c) for c in row) for row in self.coeffs)
        except TypeError:
            raise StructuralError(f"polynomial coefficients must be nested sequences: {self.coeffs!r}")
        if not rows or any(not row for row in rows):
            raise StructuralError("polynomial needs at least one coefficient per coordinate")
        for row in rows:
            if len(row) - 1 > MAX_POLY_DEGREE:
                raise StructuralError(
                    f"polynomial degree {len(row) - 1} exceeds the cap {MAX_POLY_DEGREE}"
                )
            for c in row:
                if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                    raise StructuralError(f"non-finite polynomial coefficient: {c!r}")
        object.__setattr__(self, "coeffs", rows)

    @property
    def in_dim(self):
        return len(self.coeffs)

    @property
    def out_dim(self):
        return len(self.coeffs)

    def _eval_point(self, pt):
        out = []
        for z, row in zip(pt, self.coeffs):
            acc = row[-1]
            for c in reversed(row[:-1]):  # Horner
                acc = acc * z + c
            out.append(acc)
        return tuple(out)

    def _eval_array(self, arr):
        out = np.empty_like(arr)
        for i, row in enumerate(self.coeffs):
            z = arr[:, i]
            acc = np.full_like(z, row[-1])
            for c in reversed(row[:-1]):
                acc = acc * z + c
            out[:, i] = acc
        return out


@dataclass(frozen=True)
class Affine(HoloMap):
    """z -> A z + b for a complex matrix A (rows) and offset b."""

    matrix: tuple[tuple[complex, ...], ...]
    offset: tuple[complex, ...]

    def __post_init__(self):
        try:
            rows = tuple(tuple(complex(v) for v in row) for row in self.matrix)
            offset = tuple(complex(v) for v in self.offset)
        except TypeError:
            raise StructuralError("affine map needs a matrix of rows and an offset sequence")
        if not rows or not offset or len(rows) != len(offset):
            raise StructuralError("affine map: offset length must equal the matrix row count")
        width = len(rows[0])
        if width < 1 or any(len(row) != width for row in rows):
            raise StructuralError("affine map: matrix rows must share a positive width")
        for v in [c for row in rows for c in row] + list(offset):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise StructuralError("affine map has a non-finite matrix/offset entry")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "offset", offset)

    @property
    def in_dim(self):
        return len(self.matrix[0])

    @property
    def out_dim(self):
        return len(self.offset)

    def _eval_point(self, pt):
        return tuple(
            sum(a * z for a, z in zip(row, pt)) + b
            for row, b in zip(self.matrix, self.offset)
        )

    def _eval_array(self, arr):
        mat = np.asarray(self.matrix, dtype=complex)
        off = np.asarray(self.offset, dtype=complex)
        return arr @ mat.T + off[None, :]


@dataclass(frozen=True)
class DiagonalProduct(HoloMap):
    """(z_1, ..., z_n) -> (f_1(z_1), ..., f_n(z_n)) for 1-dim factors."""

    factors: tuple[HoloMap, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise StructuralError("diagonal product needs at least one factor")
        for f in factors:
            if f.in_dim != 1 or f.out_dim != 1:
                raise StructuralError("diagonal product factors must be 1-dimensional maps")
        object.__setattr__(self, "factors", factors)

    @property
    def in_dim(self):
        return len(self.factors)

    @property
    def out_dim(self):
        return len(self.factors)

    def _eval_point(self, pt):
        return tuple(f._eval_point((z,))[0] for f, z in zip(self.factors, pt))

    def _eval_array(self, arr):
        cols = [f._eval_array(arr[:, i : i + 1])[:, 0] for i, f in enumerate(self.factors)]
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class Compose(HoloMap):
    """outer after inner: p -> outer(inner(p))."""

    outer: HoloMap
    inner: HoloMap

    def __post_init__(self):
        if self.inner.out_dim != self.outer.in_dim:
            raise StructuralError(
                f"cannot compose: inner produces dimension {self.inner.out_dim}, "
                f"outer consumes {self.outer.in_dim}"
            )

    @property
    def in_dim(self):
        return self.inner.in_dim

    @property
    def out_dim(self):
        return self.outer.out_dim

    def _eval_point(self, pt):
        return self.outer._eval_point(self.inner._eval_point(pt))

    def _eval_array(self, arr):
        return self.outer._eval_array(self.inner._eval_array(arr))


@dataclass(frozen=True)
class ScalarScale(HoloMap):
    """z -> factor * z coordinatewise, for a real factor > 0."""

    factor: float
    dim: int = 1

    def __post_init__(self):
        f = float(self.factor)
        if math.isnan(f) or not f > 0.0 or math.isinf(f):
            raise StructuralError(f"scale factor must be finite and > 0: {self.factor!r}")
        if int(self.dim) < 1:
            raise StructuralError(f"scale dimension must be >= 1: {self.dim!r}")
        object.__setattr__(self, "factor", f)

    @property
    def in_dim(self):
        return self.dim

    @property
    def out_dim(self):
        return self.dim

    def _eval_point(self, pt):
        return tuple(self.factor * z for z in pt)

    def _eval_array(self, arr):
        return self.factor * arr


@dataclass(frozen=True)
class ImageBoundReport:
    """Sampling estimate of how deep a map's image sits inside a target.

    ``sup_modulus_estimate`` is the max boundary proximity of the image over
    exactly ``sample_count`` evaluated points (an under-estimate of the true
    sup), and ``margin_to_target = 1 - sup_modulus_estimate``.  A positive
    margin is evidence, not proof, that the image is relatively compact in
    the target; structural containment comes from map construction.
    """

    sup_modulus_estimate: float
    sample_count: int
    margin_to_target: float
    seed: int


def schwarz_pick_gap(f: HoloMap, z: complex, w: complex) -> float:
    """omega(z, w) - omega(f(z), f(w)) for a holomorphic self-map of the disk.

    Nonnegative up to rounding: holomorphic maps never increase the Poincare
    distance, with equality exactly for disk automorphisms.
    """
    if f.in_dim != 1 or f.out_dim != 1:
        raise StructuralError("Schwarz-Pick gap is defined for 1-dimensional self-maps")
    base = poincare_distance(z, w)
    fz = f.evaluate((z,))[0]
    fw = f.evaluate((w,))[0]
    for name, img in (("z", fz), ("w", fw)):
        if abs(img) >= 1.0:
            raise DomainError(
                f"image escapes the closed unit disk at {name}: |f({name})| = {abs(img)!r}"
            )
    return base - poincare_distance(fz, fw)


def image_bound(
    f: HoloMap, source: Domain, target: Domain, stream: SampleStream
) -> ImageBoundReport:
    """Estimate sup boundary-proximity of f(source) inside target by sampling.

    Image points falling outside the target produce a report with
    ``margin_to_target <= 0`` rather than an exception: callers decide how to
    treat the failed containment.
    """
    if f.in_dim != source.dim:
        raise StructuralError(
            f"map consumes dimension {f.in_dim}, source domain has {source.dim}"
        )
    if f.out_dim != target.dim:
        raise StructuralError(
            f"map produces dimension {f.out_dim}, target domain has {target.dim}"
        )
    images = f.evaluate_many(source.sample(stream))
    sup = float(target.boundary_proximity_many(images).max())
    return ImageBoundReport(
        sup_modulus_estimate=sup,
        sample_count=stream.count,
        margin_to_target=1.0 - sup,
        seed=stream.seed,
    )


def _random_disk_selfmap(rng: np.random.Generator) -> HoloMap:
    """A structurally holomorphic self-map of the unit disk with sup|f| <= 1."""
    kind = int(rng.integers(3))
    if kind == 1:
        return Mobius(_random_disk_param(rng))
    degree = int(rng.integers(1, 5))
    weights = rng.dirichlet(np.ones(degree + 1))
    phases = np.exp(2j * np.pi * rng.random(degree + 1))
    coeffs = weights * phases
    coeffs[0] *= 0.9  # keep sup strictly below 1 even for constant-heavy draws
    poly = Polynomial((tuple(complex(c) for c in coeffs),))
    if kind == 2:
        return Compose(Mobius(_random_disk_param(rng)), poly)
    return poly


def _random_disk_param(rng: np.random.Generator) -> complex:
    return 0.8 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


def random_selfmap(domain: Domain, seed: int, contraction_bias: float) -> HoloMap:
    """Deterministic random self-map whose image lies in ``contraction_bias * domain``.

    The construction post-scales a convex-type combination of Mobius and
    polynomial disk self-maps by ``contraction_bias``, so the containment is
    guaranteed structurally, not just sampled.  Identical seeds produce
    structurally identical maps.
    """
    bias = float(contraction_bias)
    if math.isnan(bias) or not 0.0 < bias < 1.0:
        raise DomainError(f"contraction bias must lie in (0, 1): {contraction_bias!r}")
    rng = np.random.default_rng(seed)
    if isinstance(domain, UnitDisk):
        return Compose(ScalarScale(bias), _random_disk_selfmap(rng))
    if isinstance(domain, Polydisk):
        n = domain.dim
        factors = tuple(_random_disk_selfmap(rng) for _ in range(n))
        shrink = Affine(
            tuple(
                tuple(1.0 / domain.radii[i] if i == j else 0.0 for j in range(n))
                for i in range(n)
            ),
            (0.0,) * n,
        )
        expand = Affine(
            tuple(
                tuple(bias * domain.radii[i] if i == j else 0.0 for j in range(n))
                for i in range(n)
            ),
            (0.0,) * n,
        )
        return Compose(expand, Compose(DiagonalProduct(factors), shrink))
    raise CapabilityError(
        f"random self-maps are generated for unit disks and polydisks, not {type(domain).__name__}"
    )
