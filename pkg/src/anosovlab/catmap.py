"""Arnold-cat dynamics on the unit torus.

Exact integer iteration of a hyperbolic toral automorphism, its
eigensystem (expanding/contracting directions and Lyapunov exponents),
horocycle shifts along those directions, and the two equivalent
numerical forms of the hyperbolicity condition (differential form and
conjugation form), plus orbit-separation and Birkhoff-average
diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import birkhoff_sum

__all__ = [
    "IntegerSymplecticMap",
    "TorusPoint",
    "EigenSystem",
    "CAT_MAP",
    "cat_apply",
    "cat_apply_samples",
    "eigen_system",
    "stretch_factor",
    "horocycle_shift",
    "torus_distance",
    "conjugation_defect",
    "differential_defect",
    "separation_growth",
    "fit_growth_rate",
    "birkhoff_average",
]


def _mat_mul(m, n):
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


@dataclass(frozen=True)
class IntegerSymplecticMap:
    """2x2 integer matrix (a, b; c, d) with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for entry in (self.a, self.b, self.c, self.d):
            if not isinstance(entry, int):
                raise TypeError("entries must be integers")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be exactly 1")

    @property
    def trace(self) -> int:
        return self.a + self.d

    def inverse(self) -> "IntegerSymplecticMap":
        return IntegerSymplecticMap(self.d, -self.b, -self.c, self.a)

    def matvec(self, v):
        """Apply to an integer (or exact) 2-vector."""
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def power(self, t: int) -> "IntegerSymplecticMap":
        """Exact integer power, negative exponents via the integer inverse."""
        t = int(t)
        base = self if t >= 0 else self.inverse()
        acc = (1, 0, 0, 1)
        sq = (base.a, base.b, base.c, base.d)
        n = abs(t)
        while n:
            if n & 1:
                acc = _mat_mul(acc, sq)
            n >>= 1
            if n:
                sq = _mat_mul(sq, sq)
        return IntegerSymplecticMap(*acc)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)


#: The canonical cat map.
CAT_MAP = IntegerSymplecticMap(1, 1, 1, 2)


def _mod1(v: float) -> float:
    v = v % 1.0
    if v >= 1.0:  # v % 1.0 can round up to 1.0 for tiny negative v
        v = 0.0
    return v


@dataclass(frozen=True)
class TorusPoint:
    """Point of [0,1)^2; coordinates are reduced mod 1 on construction."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _mod1(float(self.x)))
        object.__setattr__(self, "y", _mod1(float(self.y)))


@dataclass(frozen=True)
class EigenSystem:
    """Expanding/contracting unit directions, eigenvalues, Lyapunov exponents."""

    V1: np.ndarray
    V2: np.ndarray
    k1: float
    k2: float
    lambda1: float
    lambda2: float

    def direction(self, j: int) -> np.ndarray:
        if j == 1:
            return self.V1
        if j == 2:
            return self.V2
        raise ValueError("direction index must be 1 or 2")

    def eigenvalue(self, j: int) -> float:
        return self.k1 if j == 1 else self.k2


def eigen_system(phi: IntegerSymplecticMap) -> EigenSystem:
    """Eigensystem of a hyperbolic integer symplectic matrix.

    Eigenvalues are sorted k1 > 1 > k2 > 0, eigenvectors are unit length
    with positive first component, and lambda_j = ln k_j (so lambda2 is
    exactly -lambda1 since the determinant is one).
    """
    tr = phi.trace
    if tr * tr <= 4:
        raise ValueError(f"matrix is not hyperbolic: |trace| = {abs(tr)} <= 2")
    if tr < 0:
        raise ValueError(
            "trace < -2: eigenvalues are negative, Lyapunov exponents undefined"
        )
    disc = math.sqrt(tr * tr - 4)
    k1 = (tr + disc) / 2.0
    k2 = (tr - disc) / 2.0
    lambda1 = math.log(k1)

    def unit_eigvec(k_minus_a: float) -> np.ndarray:
        # b is never 0 for a hyperbolic integer matrix with det 1
        # (b = 0 forces a*d = 1, hence |trace| = 2), so (b, k - a) works.
        v = np.array([float(phi.b), k_minus_a])
        v /= np.hypot(v[0], v[1])
        if v[0] < 0 or (v[0] == 0 and v[1] < 0):
            v = -v
        return v

    v1 = unit_eigvec((phi.d - phi.a + disc) / 2.0)
    v2 = unit_eigvec((phi.d - phi.a - disc) / 2.0)
    v1.flags.writeable = False
    v2.flags.writeable = False
    return EigenSystem(V1=v1, V2=v2, k1=k1, k2=k2, lambda1=lambda1, lambda2=-lambda1)


def stretch_factor(system: EigenSystem, j: int, t: int) -> float:
    """exp(lambda_j * t) as k_j**t by repeated multiplication.

    Keeps phase arguments consistent across modules: every consumer of
    the growth factor multiplies the same double k_j rather than mixing
    exp/log round trips.
    """
    k = system.eigenvalue(j)
    acc = 1.0
    for _ in range(abs(int(t))):
        acc *= k
    return acc if t >= 0 else 1.0 / acc


def cat_apply(phi: IntegerSymplecticMap, m: TorusPoint, t: int) -> TorusPoint:
    """phi**t applied to m, mod (1,1).

    The matrix power is exact integer arithmetic and the point is carried
    as an exact dyadic rational, so there is no drift for large |t|; real
    rounding enters only in the final division.
    """
    mat = phi.power(t)
    num_x, den_x = m.x.as_integer_ratio()
    num_y, den_y = m.y.as_integer_ratio()
    den = max(den_x, den_y)  # both are powers of two
    num_x *= den // den_x
    num_y *= den // den_y
    nx = (mat.a * num_x + mat.b * num_y) % den
    ny = (mat.c * num_x + mat.d * num_y) % den
    return TorusPoint(nx / den, ny / den)


def cat_apply_samples(phi: IntegerSymplecticMap, xy: np.ndarray, t: int) -> np.ndarray:
    """Vectorized float iteration of phi on an (n, 2) sample array, mod 1.

    One matrix application per step keeps every intermediate in [0, 3)
    so batched double arithmetic stays accurate; use `cat_apply` when a
    single point needs the exact path.
    """
    xy = np.asarray(xy, dtype=float) % 1.0
    step = phi if t >= 0 else phi.inverse()
    mat = step.as_array()
    for _ in range(abs(int(t))):
        xy = (xy @ mat.T) % 1.0
    return xy


def horocycle_shift(m: TorusPoint, direction, s: float) -> TorusPoint:
    """m + direction * s, mod (1,1)."""
    return TorusPoint(m.x + direction[0] * s, m.y + direction[1] * s)


def torus_distance(p: TorusPoint, q: TorusPoint) -> float:
    """Euclidean distance on the torus (minimum over mod-1 wraps)."""
    dx = abs(p.x - q.x)
    dy = abs(p.y - q.y)
    dx = min(dx, 1.0 - dx)
    dy = min(dy, 1.0 - dy)
    return math.hypot(dx, dy)


def conjugation_defect(
    phi: IntegerSymplecticMap,
    j: int,
    t: int,
    s: float,
    m: TorusPoint,
    direction=None,
) -> float:
    """Torus distance between phi_t theta_j(s) phi_{-t} m and theta_j(s*e^{lambda_j t}) m.

    Zero (up to rounding) exactly when `direction` is the j-th eigenvector;
    passing a non-eigenvector shows the check has teeth.
    """
    system = eigen_system(phi)
    v = system.direction(j) if direction is None else np.asarray(direction, dtype=float)
    rate = stretch_factor(system, j, t)
    left = cat_apply(phi, horocycle_shift(cat_apply(phi, m, -t), v, s), t)
    right = horocycle_shift(m, v, s * rate)
    return torus_distance(left, right)


def differential_defect(
    phi: IntegerSymplecticMap, j: int, t: int, direction=None
) -> float:
    """Euclidean norm of phi**t V_j - e^{lambda_j t} V_j.

    For a linear torus map the differential is the matrix itself, so this
    is the eigenrelation residual; it vanishes together with
    `conjugation_defect` and both blow up for a non-eigenvector.
    """
    system = eigen_system(phi)
    v = system.direction(j) if direction is None else np.asarray(direction, dtype=float)
    mat = phi.power(t)
    mapped = np.array(
        [mat.a * v[0] + mat.b * v[1], mat.c * v[0] + mat.d * v[1]]
    )
    rate = stretch_factor(system, j, t)
    return float(np.hypot(*(mapped - rate * v)))


def separation_growth(
    phi: IntegerSymplecticMap,
    m: TorusPoint,
    a,
    eps: float,
    T: int,
):
    """Distances between the orbits of m and m + eps*(a1*V1 + a2*V2).

    Returns [(t, distance)] for t = 0..T. When the displacement has an
    expanding component (a1 != 0) the horizon is checked against the
    wrap-ambiguity bound eps*|a1|*e^{lambda1*T} < 1/2.
    """
    if T < 0:
        raise ValueError("horizon T must be >= 0")
    system = eigen_system(phi)
    a1, a2 = float(a[0]), float(a[1])
    if a1 != 0.0 and eps != 0.0:
        growth = abs(eps * a1) * stretch_factor(system, 1, T)
        if growth >= 0.5:
            t_max = int(math.floor(math.log(0.5 / abs(eps * a1)) / system.lambda1))
            raise ValueError(
                f"horizon too long: eps*|a1|*e^(lambda1*T) = {growth:.3g} >= 0.5; "
                f"max valid T is {t_max}"
            )
    offset = a1 * system.V1 + a2 * system.V2
    m2 = horocycle_shift(m, offset, eps)
    out = []
    for t in range(T + 1):
        out.append((t, torus_distance(cat_apply(phi, m, t), cat_apply(phi, m2, t))))
    return out


def fit_growth_rate(pairs) -> float:
    """Least-squares slope of log(distance) against t."""
    ts = np.array([p[0] for p in pairs], dtype=float)
    ds = np.array([p[1] for p in pairs], dtype=float)
    if np.any(ds <= 0):
        raise ValueError("distances must be positive for a log-linear fit")
    slope, _ = np.polyfit(ts, np.log(ds), 1)
    return float(slope)


def birkhoff_average(nu, m: TorusPoint, N: int, phi: IntegerSymplecticMap = CAT_MAP) -> complex:
    """(1/N) * sum_{t=0}^{N-1} exp(2*pi*i * nu . phi_t m).

    Exactly 1 for nu = (0,0); decays like N^{-1/2} for nu != 0 and a
    generic starting point (rational points sit on periodic orbits, so
    genericity matters).
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    n1, n2 = int(nu[0]), int(nu[1])
    return birkhoff_sum(phi.a, phi.b, phi.c, phi.d, m.x, m.y, n1, n2, N)
