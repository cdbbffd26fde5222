"""Geodesic and horocycle flows on the Poincare half-plane via SL(2,R).

The geodesic flow acts by right multiplication with diag(e^{-t/2}, e^{t/2}),
the two horocycle flows by the upper/lower unipotent one-parameter groups,
and the hyperbolicity conjugation identity becomes an exact 2x2 matrix
identity with rates +1 (expanding, upper) and -1 (contracting, lower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MoebiusMatrix",
    "HalfPlanePoint",
    "LAMBDA",
    "moebius_apply",
    "geodesic_flow",
    "geodesic_matrix",
    "horocycle_matrix",
    "conjugation_defect",
    "horocycle_differential_defect",
    "hyperbolic_distance",
    "measure_invariance_defect",
    "rotation_matrix",
    "random_element",
]

#: Expansion rates of the two horocycle directions under the geodesic flow
#: (right-action convention).
LAMBDA = {1: 1.0, 2: -1.0}


class MoebiusMatrix:
    """Real 2x2 matrix with unit determinant (an element of SL(2,R)).

    Products renormalize by 1/sqrt(det) so the determinant stays 1 to
    rounding under long compositions.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float, b: float, c: float, d: float):
        det = a * d - b * c
        if not det > 0.0:
            raise ValueError(f"determinant must be positive, got {det!r}")
        # The check is relative to the entry scale: evaluating ad - bc
        # itself carries rounding of that order for large entries.
        tol = 1e-12 * max(1.0, abs(a * d) + abs(b * c))
        if abs(det - 1.0) > tol:
            raise ValueError(f"determinant must be 1 within 1e-12, got {det!r}")
        self.a, self.b, self.c, self.d = float(a), float(b), float(c), float(d)

    @classmethod
    def _renormalized(cls, a, b, c, d):
        det = a * d - b * c
        if not det > 0.0:
            raise ValueError("product left SL(2,R): non-positive determinant")
        r = math.sqrt(det)
        return cls(a / r, b / r, c / r, d / r)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    def __matmul__(self, other: "MoebiusMatrix") -> "MoebiusMatrix":
        return MoebiusMatrix._renormalized(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMatrix":
        return MoebiusMatrix(self.d, -self.b, -self.c, self.a)

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __repr__(self):
        return f"MoebiusMatrix({self.a}, {self.b}, {self.c}, {self.d})"


@dataclass(frozen=True)
class HalfPlanePoint:
    """Point x + i*y of the upper half-plane, y > 0 strictly."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise ValueError(f"half-plane point needs y > 0, got y = {self.y!r}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def moebius_apply(g: MoebiusMatrix, z: HalfPlanePoint) -> HalfPlanePoint:
    """(a*z + b) / (c*z + d); preserves the upper half-plane."""
    denom = g.c * z.z + g.d
    if abs(denom) < 1e-300:
        raise ValueError("Moebius denominator underflow")
    w = (g.a * z.z + g.b) / denom
    return HalfPlanePoint(w.real, w.imag)


def geodesic_matrix(t: float) -> MoebiusMatrix:
    """diag(e^{-t/2}, e^{t/2})."""
    return MoebiusMatrix(math.exp(-t / 2.0), 0.0, 0.0, math.exp(t / 2.0))


def geodesic_flow(m: MoebiusMatrix, t: float) -> MoebiusMatrix:
    """Right-multiply the frame m by the geodesic one-parameter group."""
    return m @ geodesic_matrix(t)


def horocycle_matrix(j: int, s: float) -> MoebiusMatrix:
    """Upper (j=1) or lower (j=2) unipotent shear by s."""
    if j == 1:
        return MoebiusMatrix(1.0, float(s), 0.0, 1.0)
    if j == 2:
        return MoebiusMatrix(1.0, 0.0, float(s), 1.0)
    raise ValueError("horocycle index must be 1 or 2")


def _frobenius(m: MoebiusMatrix, n: MoebiusMatrix) -> float:
    return math.sqrt(
        (m.a - n.a) ** 2 + (m.b - n.b) ** 2 + (m.c - n.c) ** 2 + (m.d - n.d) ** 2
    )


def conjugation_defect(j: int, t: float, s: float) -> float:
    """Frobenius norm of xi(-t) xi_j(s) xi(t) - xi_j(s * e^{lambda_j t}).

    Under the right-action convention the composite flow acts by this
    matrix conjugation, and the identity holds exactly; the returned
    defect is pure rounding.
    """
    lhs = geodesic_matrix(-t) @ horocycle_matrix(j, s) @ geodesic_matrix(t)
    rhs = horocycle_matrix(j, s * math.exp(LAMBDA[j] * t))
    return _frobenius(lhs, rhs)


def _composite(j: int, t: float, s: float, m: MoebiusMatrix) -> MoebiusMatrix:
    return m @ geodesic_matrix(-t) @ horocycle_matrix(j, s) @ geodesic_matrix(t)


def horocycle_differential_defect(
    j: int, t: float, m: MoebiusMatrix, h: float, rate: float | None = None
) -> float:
    """Central-difference check of the differential form of hyperbolicity.

    Compares d/ds of the conjugated horocycle orbit at s=0 against
    e^{lambda_j t} times d/ds of the plain horocycle orbit, entrywise.
    `rate` overrides e^{lambda_j t} to show a wrong exponent is detected.
    """
    if not 1e-8 <= h <= 1e-3:
        raise ValueError("step h must lie in [1e-8, 1e-3]")
    if rate is None:
        rate = math.exp(LAMBDA[j] * t)
    lhs = (_composite(j, t, h, m).as_array() - _composite(j, t, -h, m).as_array()) / (
        2.0 * h
    )
    rhs = ((m @ horocycle_matrix(j, h)).as_array() - (m @ horocycle_matrix(j, -h)).as_array()) / (
        2.0 * h
    )
    return float(np.max(np.abs(lhs - rate * rhs)))


def hyperbolic_distance(z1: HalfPlanePoint, z2: HalfPlanePoint) -> float:
    """Distance in the metric ds^2 = y^{-2}(dx^2 + dy^2).

    Closed form arcosh(1 + |z1 - z2|^2 / (2 y1 y2)); invariant under
    every unit-determinant Moebius map.
    """
    q = ((z1.x - z2.x) ** 2 + (z1.y - z2.y) ** 2) / (2.0 * z1.y * z2.y)
    return math.acosh(1.0 + q)


def rotation_matrix(theta: float) -> MoebiusMatrix:
    return MoebiusMatrix(
        math.cos(theta), -math.sin(theta), math.sin(theta), math.cos(theta)
    )


def random_element(rng, spread: float = 1.5) -> MoebiusMatrix:
    """Well-conditioned random SL(2,R) element (shear * boost * rotation)."""
    u = spread * (2.0 * rng.random() - 1.0)
    v = spread * (2.0 * rng.random() - 1.0)
    theta = math.pi * rng.random()
    return horocycle_matrix(1, u) @ geodesic_matrix(v) @ rotation_matrix(theta)


def measure_invariance_defect(g: MoebiusMatrix, z: HalfPlanePoint, h: float) -> float:
    """Relative defect of invariance of the measure y^{-2} dx dy.

    Computes the finite-difference area Jacobian of z -> gz as a planar
    map and compares Jac * y(gz)^{-2} with y(z)^{-2}; O(h) small for a
    true isometry.
    """
    if not h > 0:
        raise ValueError("step h must be positive")

    def image(x, y):
        w = moebius_apply(g, HalfPlanePoint(x, y))
        return w.x, w.y

    ux_p, vx_p = image(z.x + h, z.y)
    ux_m, vx_m = image(z.x - h, z.y)
    uy_p, vy_p = image(z.x, z.y + h)
    uy_m, vy_m = image(z.x, z.y - h)
    du_dx = (ux_p - ux_m) / (2.0 * h)
    dv_dx = (vx_p - vx_m) / (2.0 * h)
    du_dy = (uy_p - uy_m) / (2.0 * h)
    dv_dy = (vy_p - vy_m) / (2.0 * h)
    jac = abs(du_dx * dv_dy - du_dy * dv_dx)

    y_img = moebius_apply(g, z).y
    density_in = z.y ** -2.0
    density_out = jac * y_img ** -2.0
    return abs(density_out - density_in) / density_in
