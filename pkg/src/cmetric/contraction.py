"""Contraction certificates for nested domains.

For an inner domain sitting strictly inside an ambient one, the diameter M of
the inner domain measured in the ambient Caratheodory metric is finite, and
k = tanh(M) < 1 improves the trivial comparison between the two metrics to

    c_ambient(x, y) <= k * c_inner(x, y)    for all x, y in the inner domain.

:func:`diameter` produces a certificate (M, k) either from a closed form
(disk-in-disk and concentric polydisk nestings) or from boundary-biased
sampling; :func:`verify_nesting` then checks the strengthened inequality and
the intermediate bound atanh(k * tanh(c_inner)) >= c_ambient pair by pair.
Only closed-form certificates certify: a sampled M under-estimates the sup,
so a sampled k could make the inequality fail spuriously.

:func:`witness_lower_bound` evaluates the rescaled-witness lower bound
atanh(|g(y)| / k) <= c_inner(x, y), where g is any holomorphic map of the
ambient domain into the unit disk normalized so that g(x) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import (
    PRECOMPACT_MARGIN,
    AffineDiskImage,
    Domain,
    Point,
    PointLike,
    Polydisk,
    SampleStream,
    ScaledDisk,
    UnitDisk,
    as_point,
)
from .errors import (
    BoundednessError,
    CapabilityError,
    DomainError,
    HypothesisError,
    StructuralError,
)
from .holomaps import HoloMap
from .metric_core import ATANH_GUARD, atanh_stable

__all__ = [
    "ContractionCertificate",
    "NestingReport",
    "diameter",
    "contraction_constant",
    "witness_lower_bound",
    "verify_nesting",
    "DIAMETER_CAP",
    "BOUNDARY_BIAS",
]

# Diameters beyond this are declared numerically unbounded: k = tanh(M) is
# then within 1e-17 of 1 and the strengthened inequality carries no content
# at double precision.
DIAMETER_CAP = 20.0

# Exponent biasing sampled pair moduli toward the rim (u -> u**(1/BIAS)); the
# sup of the distance is approached at antipodal near-boundary points, and
# uniform sampling converges far too slowly to the diameter.
BOUNDARY_BIAS = 2000.0

_SEED_SALT = 0x9E3779B97F4A7C15  # splits one stream seed into independent batches


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ContractionCertificate:
    """Diameter M, contraction constant k = tanh(M), and their provenance.

    ``method`` is ``"closed_form"`` for exactly derived diameters (these are
    the only certifying ones) or ``"sampled"`` for sup-estimates from
    boundary-biased pairs; ``sample_count`` is 0 for closed forms.
    """

    M: float
    k: float
    method: str
    sample_count: int
    seed: int

    def __post_init__(self):
        if self.method not in ("closed_form", "sampled"):
            raise StructuralError(f"unknown certificate method: {self.method!r}")
        if not (math.isfinite(self.M) and self.M >= 0.0):
            raise StructuralError(f"certificate diameter must be finite and >= 0: {self.M!r}")
        if not 0.0 <= self.k < 1.0:
            raise StructuralError(f"contraction constant must lie in [0, 1): {self.k!r}")
        if abs(self.k - math.tanh(self.M)) > 1e-15:
            raise StructuralError(
                f"certificate is inconsistent: k={self.k!r} but tanh(M)={math.tanh(self.M)!r}"
            )
        if (self.method == "closed_form") != (self.sample_count == 0):
            raise StructuralError("sample_count must be 0 exactly for closed-form certificates")

    def to_json_dict(self) -> dict:
        """JSON form; reals as 17-significant-digit strings (bit-exact round trip)."""
        return {
            "M": _fmt17(self.M),
            "k": _fmt17(self.k),
            "method": self.method,
            "sample_count": self.sample_count,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ContractionCertificate":
        return cls(
            M=float(data["M"]),
            k=float(data["k"]),
            method=str(data["method"]),
            sample_count=int(data["sample_count"]),
            seed=int(data["seed"]),
        )


@dataclass(frozen=True)
class NestingReport:
    """Result of checking c_ambient <= k * c_inner over sampled pairs.

    ``max_violation`` is the largest value of both residuals
    ``c_ambient - k * c_inner`` and ``c_ambient - atanh(k * tanh(c_inner))``
    over all checked pairs (ties broken by first index); the theory predicts
    it is <= 0 up to rounding whenever k comes from a true (or over-)
    estimate of the diameter.  ``max_ratio`` records the observed sup of
    c_ambient / c_inner as an empirical sharpness indicator.
    """

    pairs_checked: int
    max_violation: float
    worst_pair: tuple[Point, Point]
    k_used: float
    max_ratio: float

    def to_json_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "max_violation": _fmt17(self.max_violation),
            "worst_pair": [_point_json(self.worst_pair[0]), _point_json(self.worst_pair[1])],
            "k_used": _fmt17(self.k_used),
            "max_ratio": None if math.isnan(self.max_ratio) else _fmt17(self.max_ratio),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "NestingReport":
        ratio = data.get("max_ratio")
        return cls(
            pairs_checked=int(data["pairs_checked"]),
            max_violation=float(data["max_violation"]),
            worst_pair=(
                _point_from_json(data["worst_pair"][0]),
                _point_from_json(data["worst_pair"][1]),
            ),
            k_used=float(data["k_used"]),
            max_ratio=float("nan") if ratio is None else float(ratio),
        )


def _point_json(p: Point) -> list:
    return [[_fmt17(c.real), _fmt17(c.imag)] for c in p]


def _point_from_json(data) -> Point:
    return tuple(complex(float(re), float(im)) for re, im in data)


def contraction_constant(M: float) -> float:
    """tanh of a finite nonnegative diameter; lies in [0, 1), zero iff M = 0."""
    M = float(M)
    if math.isnan(M) or math.isinf(M) or M < 0.0:
        raise DomainError(f"diameter must be finite and >= 0: {M!r}")
    return math.tanh(M)


# -- closed-form diameters ---------------------------------------------------


def _disk_data(domain: Domain) -> tuple[complex, float] | None:
    """(center, radius) for 1-dimensional disk-shaped kinds, else None."""
    if isinstance(domain, UnitDisk):
        return 0j, 1.0
    if isinstance(domain, ScaledDisk):
        return 0j, domain.radius
    if isinstance(domain, AffineDiskImage):
        return domain.center, domain.radius
    if isinstance(domain, Polydisk) and domain.dim == 1:
        return 0j, domain.radii[0]
    return None


def _nested_tanh_halfdiameter(offset: float, rho: float, margin: float) -> float:
    """tanh(M) for a disk of normalized center offset and radius inside the unit disk.

    The inner disk is a hyperbolic ball; its hyperbolic diameter is realized
    along the diameter line through the origin, giving
    tanh(M) = 2 rho / (1 - offset^2 + rho^2).  Concentric nesting reduces to
    tanh(2 atanh rho) = 2 rho / (1 + rho^2), the double-angle identity.
    """
    reach = offset + rho
    if reach > 1.0:
        raise HypothesisError(
            f"inner domain is not contained in the ambient one (normalized reach {reach:.6g} > 1)"
        )
    if reach >= 1.0:
        raise BoundednessError(
            "inner domain touches the ambient boundary; its diameter is infinite"
        )
    if reach > 1.0 - margin:
        raise HypothesisError(
            f"inner domain is nested with margin {1.0 - reach:.3g}, below the "
            f"required precompactness margin {margin:.3g}"
        )
    return 2.0 * rho / (1.0 - offset * offset + rho * rho)


def _closed_form_tanh_diameter(ambient: Domain, inner: Domain, margin: float) -> float:
    ambient_disk = _disk_data(ambient)
    inner_disk = _disk_data(inner)
    if ambient_disk is not None and inner_disk is not None:
        (ca, ra), (ci, ri) = ambient_disk, inner_disk
        return _nested_tanh_halfdiameter(abs(ci - ca) / ra, ri / ra, margin)
    if (
        isinstance(ambient, Polydisk)
        and isinstance(inner, Polydisk)
        and ambient.dim == inner.dim
    ):
        # concentric polydisks: coordinatewise maximum of the 1-dim diameters
        return max(
            _nested_tanh_halfdiameter(0.0, ri / ra, margin)
            for ri, ra in zip(inner.radii, ambient.radii)
        )
    if ambient.dim != inner.dim:
        raise StructuralError(
            f"dimension mismatch: ambient has {ambient.dim}, inner has {inner.dim}"
        )
    raise CapabilityError(
        f"no closed-form diameter for {type(inner).__name__} inside "
        f"{type(ambient).__name__}; pass a SampleStream for a sampled estimate"
    )


# -- sampled diameters --------------------------------------------------------


def _boundary_biased_pairs(
    domain: Domain, stream: SampleStream
) -> tuple[np.ndarray, np.ndarray]:
    """Pairs of points with moduli biased toward (1 - margin) of the boundary.

    Draws are laid out one row per pair, so prefixes agree across counts and
    the running maximum of pair distances is reproducible and nondecreasing.
    """
    rng = np.random.default_rng(stream.seed)
    draws = rng.random((stream.count, 2, 2, domain.dim))
    radial = draws[:, :, 0, :] ** (1.0 / BOUNDARY_BIAS) * (1.0 - stream.boundary_margin)
    angle = 2.0 * np.pi * draws[:, :, 1, :]
    model = radial * np.exp(1j * angle)
    xs = domain._push_model_many(model[:, 0, :])
    ys = domain._push_model_many(model[:, 1, :])
    return xs, ys


def _sampled_diameters(
    ambient: Domain, inner: Domain, stream: SampleStream, margin: float
) -> np.ndarray:
    if ambient.dim != inner.dim:
        raise StructuralError(
            f"dimension mismatch: ambient has {ambient.dim}, inner has {inner.dim}"
        )
    if not ambient.closed_form_capable:
        raise CapabilityError(
            "sampled diameters need an exact ambient distance; "
            f"{type(ambient).__name__} does not provide one"
        )
    xs, ys = _boundary_biased_pairs(inner, stream)
    for arr, what in ((xs, "inner samples"), (ys, "inner samples")):
        ok = ambient.contains_many(arr, margin)
        if not ok.all():
            i = int(np.argmin(ok))
            raise HypothesisError(
                f"{what}[{i}] = {tuple(arr[i])!r} does not lie in the ambient domain "
                f"with margin {margin:g}; the nesting hypothesis fails"
            )
    return ambient.caratheodory_many(xs, ys)


def diameter(
    ambient: Domain,
    inner: Domain,
    stream: SampleStream | None = None,
    *,
    precompact_margin: float = PRECOMPACT_MARGIN,
    cap: float = DIAMETER_CAP,
) -> ContractionCertificate:
    """Diameter of ``inner`` in the ambient Caratheodory metric, as a certificate.

    With ``stream=None`` the exact closed form is used (disk-shaped kinds
    nested in disk-shaped kinds, and concentric polydisks); otherwise the
    maximum distance over ``stream.count`` boundary-biased sampled pairs is
    reported with ``method="sampled"``.  Sampled estimates approach the true
    diameter from below and never certify the nesting inequality.

    Raises :class:`HypothesisError` when the inner domain is not nested with
    at least ``precompact_margin``, and :class:`BoundednessError` when the
    diameter is infinite, exceeds ``cap``, or is so large that tanh(M)
    rounds to 1.
    """
    if stream is None:
        q = _closed_form_tanh_diameter(ambient, inner, precompact_margin)
        if q >= 1.0 - ATANH_GUARD:
            raise BoundednessError(
                "contraction constant is indistinguishable from 1 at double precision"
            )
        M = atanh_stable(q)
        method, count, seed = "closed_form", 0, 0
    else:
        dists = _sampled_diameters(ambient, inner, stream, precompact_margin)
        M = float(dists.max())
        method, count, seed = "sampled", stream.count, stream.seed
    if M > cap:
        raise BoundednessError(
            f"diameter {M:.6g} exceeds the boundedness cap {cap:g}; the nesting is "
            "numerically unbounded"
        )
    k = math.tanh(M)
    if k >= 1.0:
        raise BoundednessError(
            "contraction constant is indistinguishable from 1 at double precision"
        )
    return ContractionCertificate(M=M, k=k, method=method, sample_count=count, seed=seed)


# -- the witness lower bound ---------------------------------------------------


def witness_lower_bound(f: HoloMap, x: PointLike, y: PointLike, k: float) -> float:
    """Lower bound atanh(|g(y)| / k) for the inner-domain distance c(x, y).

    ``f`` is a holomorphic map of the ambient domain into the unit disk; it is
    normalized to vanish at ``x`` by post-composing with the Mobius centering
    at f(x).  A valid certificate constant k bounds |g(y)| for every such
    witness; a larger value indicates a bad certificate and raises
    :class:`HypothesisError`.
    """
    k = float(k)
    if math.isnan(k) or not 0.0 < k < 1.0:
        raise DomainError(f"contraction constant must lie in (0, 1): {k!r}")
    if f.out_dim != 1:
        raise StructuralError("witness maps must take values in the unit disk (out_dim 1)")
    fx = f.evaluate(as_point(x, f.in_dim, what="x"))[0]
    fy = f.evaluate(as_point(y, f.in_dim, what="y"))[0]
    for name, img in (("x", fx), ("y", fy)):
        if abs(img) >= 1.0:
            raise HypothesisError(
                f"witness map leaves the unit disk at {name}: |f({name})| = {abs(img)!r}"
            )
    t = abs((fy - fx) / (1.0 - fx.conjugate() * fy))
    if t > k:
        raise HypothesisError(
            f"witness value {t!r} exceeds the certificate constant k={k!r}; "
            "the certificate does not bound this configuration"
        )
    return atanh_stable(t / k)


# -- verification ----------------------------------------------------------------


def _derived_stream(stream: SampleStream, salt: int) -> SampleStream:
    return SampleStream(
        seed=(stream.seed ^ salt) % 2**64,
        count=stream.count,
        boundary_margin=stream.boundary_margin,
    )


def verify_nesting(
    ambient: Domain,
    inner: Domain,
    cert: ContractionCertificate,
    stream: SampleStream,
) -> NestingReport:
    """Check the strengthened inequality pair by pair over sampled points.

    For every sampled pair (x, y) in the inner domain this evaluates both
    residuals ``c_ambient - k * c_inner`` and
    ``c_ambient - atanh(k * tanh(c_inner))`` and reports the maximum over all
    pairs and both forms, together with the worst pair (first index wins on
    ties).  Requires a closed-form certificate: a sampled k under-estimates
    the true constant and would produce false violations.
    """
    if not (ambient.closed_form_capable and inner.closed_form_capable):
        raise CapabilityError("nesting verification needs exact distances on both domains")
    if cert.method != "closed_form":
        raise HypothesisError(
            "only closed-form certificates certify the nesting inequality; "
            "sampled diameters under-estimate k"
        )
    xs = inner.sample(stream)
    ys = inner.sample(_derived_stream(stream, _SEED_SALT))
    c_ambient = ambient.caratheodory_many(xs, ys)
    c_inner = inner.caratheodory_many(xs, ys)
    k = cert.k
    linear = c_ambient - k * c_inner
    chained = c_ambient - np.arctanh(k * np.tanh(c_inner))
    per_pair = np.maximum(linear, chained)
    worst = int(np.argmax(per_pair))
    positive = c_inner > 0.0
    if positive.any():
        max_ratio = float((c_ambient[positive] / c_inner[positive]).max())
    else:
        max_ratio = float("nan")
    return NestingReport(
        pairs_checked=stream.count,
        max_violation=float(per_pair[worst]),
        worst_pair=(tuple(xs[worst]), tuple(ys[worst])),
        k_used=k,
        max_ratio=max_ratio,
    )
