"""Scalar hyperbolic-geometry kernel for the open unit disk.

Everything downstream reduces to three ingredients: a numerically stable
inverse hyperbolic tangent on [0, 1), the Poincare distance

    omega(z, w) = atanh( |z - w| / |1 - conj(w) * z| ),

and the disk automorphisms z -> (z - a) / (1 - conj(a) * z), which are
isometries for omega.  The convexity margin r*x - atanh(r * tanh(x)) >= 0
is the scalar inequality that turns a distance bound tanh(c) <= k into the
linear bound c' <= k * c; it is exposed here so it can be checked directly.

All functions are pure; invalid inputs raise :class:`DomainError` rather than
returning non-finite values.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "ATANH_GUARD",
    "atanh_stable",
    "atanh_derivative",
    "atanh_second_derivative",
    "poincare_distance",
    "poincare_distance_many",
    "mobius_centering",
    "convexity_margin",
]

# Arguments within this distance of 1 are rejected rather than saturated:
# atanh blows up at 1 and a silent inf would poison downstream sup-estimates.
ATANH_GUARD = 1e-15

_ATANH_CEILING = 1.0 - ATANH_GUARD


def atanh_stable(x: float) -> float:
    """Inverse hyperbolic tangent of x in [0, 1).

    Computed as 0.5 * log1p(2x / (1 - x)), which keeps full relative accuracy
    both near 0 (log1p) and near 1 (1 - x is exact for x >= 0.5).  Arguments
    at or beyond ``1 - ATANH_GUARD``, negative arguments and NaN are rejected.
    """
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"atanh argument must lie in [0, 1): got {x!r}")
    if x >= _ATANH_CEILING:
        raise DomainError(
            f"atanh argument {x!r} is within {ATANH_GUARD:g} of the singularity at 1"
        )
    # np.log1p: correctly rounded at the rational anchors the closed forms hit
    # (this platform's libm log1p is an ulp low at e.g. 2.0)
    return float(0.5 * np.log1p(2.0 * x / (1.0 - x)))


def atanh_derivative(x: float) -> float:
    """First derivative of atanh: 1 / (1 - x^2), for x in [0, 1)."""
    x = float(x)
    if math.isnan(x) or not 0.0 <= x < 1.0:
        raise DomainError(f"derivative of atanh evaluated outside [0, 1): {x!r}")
    return 1.0 / (1.0 - x * x)


def atanh_second_derivative(x: float) -> float:
    """Second derivative of atanh: 2x / (1 - x^2)^2, for x in (0, 1).

    Strictly positive on (0, 1), which is the convexity that drives
    :func:`convexity_margin`.
    """
    x = float(x)
    if math.isnan(x) or not 0.0 < x < 1.0:
        raise DomainError(f"second derivative of atanh evaluated outside (0, 1): {x!r}")
    u = 1.0 - x * x
    return 2.0 * x / (u * u)


def _require_in_disk(z: complex, name: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name}={z!r} has a non-finite coordinate")
    if abs(z) >= 1.0:
        raise DomainError(f"{name}={z!r} is not strictly inside the unit disk")
    return z


def poincare_distance(z: complex, w: complex) -> float:
    """Poincare distance between two points of the open unit disk.

    Symmetric bit-for-bit under argument swap (the quotient of the two moduli
    is formed the same way in either order), zero exactly when ``z == w``.
    """
    z = _require_in_disk(z, "z")
    w = _require_in_disk(w, "w")
    if z == w:
        # short-circuit before the quotient: avoids 0/eps noise on the diagonal
        return 0.0
    num = abs(z - w)
    den = abs(1.0 - w.conjugate() * z)
    return atanh_stable(num / den)


def poincare_distance_many(z, w) -> np.ndarray:
    """Elementwise Poincare distance over arrays of disk points.

    Membership is not re-validated here; callers are expected to feed points
    strictly inside the disk (as produced by domain sampling).  Uses the same
    single-log1p formula as :func:`atanh_stable`; scalar and array paths agree
    to rounding level (SIMD transcendentals may differ in the last ulp).

    The modulus quotient is assembled from real components: products commute
    exactly and hypot ignores signs, so the result is bit-identical under
    argument swap (numpy's complex multiply is not, due to FMA contraction).
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zr, zi = z.real, z.imag
    wr, wi = w.real, w.imag
    cross_re = wr * zr + wi * zi  # Re(conj(w) z); symmetric under swap
    cross_im = wr * zi - wi * zr  # Im(conj(w) z); negates exactly under swap
    num = np.hypot(zr - wr, zi - wi)
    den = np.hypot(1.0 - cross_re, cross_im)
    t = num / den
    if np.any(t >= _ATANH_CEILING):
        raise DomainError(
            "a pair of points is too close to the disk boundary for a finite distance"
        )
    return 0.5 * np.log1p(2.0 * t / (1.0 - t))


def mobius_centering(a: complex):
    """Disk automorphism z -> (z - a) / (1 - conj(a) z) sending ``a`` to 0.

    Returns a :class:`~cmetric.holomaps.Mobius` map node, so the result can be
    composed, evaluated and serialized like any other holomorphic map.
    """
    a = _require_in_disk(a, "a")
    from .holomaps import Mobius  # deferred: holomaps depends on this module

    return Mobius(a)


def convexity_margin(r: float, x: float) -> float:
    """Slack ``r*x - atanh(r * tanh(x))`` of the convexity inequality.

    Nonnegative for every r in [0, 1) and x >= 0, and zero exactly on the
    axes r = 0 and x = 0: atanh is convex on [0, 1) and vanishes at 0, so its
    chord from 0 to tanh(x) lies above its graph at r*tanh(x), and
    atanh(tanh(x)) = x closes the bound.
    """
    r = float(r)
    x = float(x)
    if math.isnan(r) or not 0.0 <= r < 1.0:
        raise DomainError(f"convexity margin needs r in [0, 1): got {r!r}")
    if math.isnan(x) or x < 0.0 or math.isinf(x):
        raise DomainError(f"convexity margin needs finite x >= 0: got {x!r}")
    if r == 0.0 or x == 0.0:
        return 0.0
    return r * x - atanh_stable(r * math.tanh(x))
