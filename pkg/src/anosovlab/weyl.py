"""Twisted torus algebra of the quantized cat map.

Elements are finite complex combinations of unitary generators W(nu),
nu in Z^2, multiplying by the twisted rule

    W(nu) W(nu') = W(nu + nu') * exp(i * gamma * kappa(nu, nu')),

with kappa the integer symplectic pairing and gamma a free deformation
parameter. The tracial state picks out the W(0) coefficient, making the
generators orthonormal in the induced GNS inner product, so the GNS norm
of any element is the l2 norm of its coefficients. The cat-map
automorphism permutes generators along the lattice, the horocycle
automorphisms twist coefficients by phases along the expanding and
contracting directions, and together they satisfy the same conjugation
identity as the classical flow. State functionals (normal states
restricted to the generators) carry the dual actions and exhibit the
exponential divergence law.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .catmap import CAT_MAP, IntegerSymplecticMap, eigen_system, stretch_factor
from .kernels import combine_terms, weyl_product

__all__ = [
    "DEFAULT_GAMMA",
    "PRUNE_TOL",
    "CAT_SYSTEM",
    "WeylPolynomial",
    "StateFunctional",
    "weyl_mul",
    "adjoint",
    "trace_state",
    "gns_norm",
    "evolve",
    "horocycle_twist",
    "hyperbolicity_defect",
    "vector_state",
    "evolve_state",
    "horocycle_generator_norm",
    "divergence_ratio",
    "clock_shift_rep",
    "rep_normalized_trace",
]

#: Default deformation parameter; at pi/16 the N=16 clock-shift matrices
#: reproduce the product rule exactly, giving a concrete cross-check.
DEFAULT_GAMMA = math.pi / 16.0

#: Coefficients at or below this magnitude are dropped after arithmetic.
PRUNE_TOL = 1e-15

#: Eigen data of the canonical cat map, shared by all automorphisms.
CAT_SYSTEM = eigen_system(CAT_MAP)

# Lattice indices are capped so the symplectic pairing of any two valid
# indices stays inside int64.
_MAX_INDEX = 2 ** 30

TWO_PI = 2.0 * math.pi


def _as_term_arrays(nu, coeff):
    nu = np.ascontiguousarray(nu, dtype=np.int64).reshape(-1, 2)
    coeff = np.ascontiguousarray(coeff, dtype=np.complex128).reshape(-1)
    if nu.shape[0] != coeff.shape[0]:
        raise ValueError("index and coefficient arrays disagree in length")
    return nu, coeff


def _check_index_range(nu):
    if len(nu) and int(np.abs(nu).max()) > _MAX_INDEX:
        raise OverflowError(f"lattice index exceeds the supported range |nu| <= {_MAX_INDEX}")


def _check_gamma(g1: float, g2: float):
    if g1 != g2:
        raise ValueError(f"deformation parameters differ: {g1!r} vs {g2!r}")


def _map_indices(nu, mat: IntegerSymplecticMap):
    """Exact integer matrix action on an (n, 2) index array."""
    if len(nu) == 0:
        return nu.copy()
    max_abs = int(np.abs(nu).max())
    bound = (max(abs(mat.a), abs(mat.c)) + max(abs(mat.b), abs(mat.d))) * max_abs
    if bound >= 2 ** 62:
        raise OverflowError("mapped lattice index would overflow int64")
    out = np.empty_like(nu)
    out[:, 0] = mat.a * nu[:, 0] + mat.b * nu[:, 1]
    out[:, 1] = mat.c * nu[:, 0] + mat.d * nu[:, 1]
    return out


class WeylPolynomial:
    """Finite combination sum_nu c_nu W(nu) at a fixed gamma.

    Instances are immutable; `nu` is an (n, 2) int64 array in canonical
    (lexicographic) order and `coeff` the matching complex coefficients.
    Arithmetic requires bit-identical gamma values.
    """

    __slots__ = ("nu", "coeff", "gamma")

    def __init__(self, nu, coeff, gamma: float = DEFAULT_GAMMA, *, _canonical=False):
        gamma = float(gamma)
        if math.isnan(gamma):
            raise ValueError("gamma must not be NaN")
        nu, coeff = _as_term_arrays(nu, coeff)
        if not _canonical:
            nu, coeff = combine_terms(nu, coeff, PRUNE_TOL)
        _check_index_range(nu)
        nu.flags.writeable = False
        coeff.flags.writeable = False
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "gamma", gamma)

    def __setattr__(self, name, value):
        raise AttributeError("WeylPolynomial is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, gamma: float = DEFAULT_GAMMA):
        return cls(np.empty((0, 2), np.int64), np.empty(0, np.complex128), gamma,
                   _canonical=True)

    @classmethod
    def identity(cls, gamma: float = DEFAULT_GAMMA):
        return cls.generator((0, 0), gamma)

    @classmethod
    def generator(cls, nu, gamma: float = DEFAULT_GAMMA):
        """The single unitary W(nu)."""
        return cls([[int(nu[0]), int(nu[1])]], [1.0 + 0.0j], gamma)

    @classmethod
    def from_terms(cls, terms, gamma: float = DEFAULT_GAMMA):
        """Build from a {(n1, n2): coefficient} mapping."""
        items = list(terms.items())
        nu = [[int(k[0]), int(k[1])] for k, _ in items]
        coeff = [complex(v) for _, v in items]
        if not items:
            return cls.zero(gamma)
        return cls(nu, coeff, gamma)

    # -- inspection --------------------------------------------------

    def terms(self) -> dict:
        return {(int(n1), int(n2)): complex(c)
                for (n1, n2), c in zip(self.nu, self.coeff)}

    def coefficient(self, nu) -> complex:
        hit = (self.nu[:, 0] == int(nu[0])) & (self.nu[:, 1] == int(nu[1]))
        sel = self.coeff[hit]
        return complex(sel[0]) if len(sel) else 0.0 + 0.0j

    def support_size(self) -> int:
        return len(self.coeff)

    def __repr__(self):
        return f"WeylPolynomial({self.terms()!r}, gamma={self.gamma!r})"

    # -- arithmetic --------------------------------------------------

    def _combined_with(self, other, scale):
        _check_gamma(self.gamma, other.gamma)
        nu = np.concatenate([self.nu, other.nu])
        coeff = np.concatenate([self.coeff, scale * other.coeff])
        return WeylPolynomial(
            *combine_terms(nu, coeff, PRUNE_TOL), self.gamma, _canonical=True
        )

    def __add__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        return self._combined_with(other, 1.0)

    def __sub__(self, other):
        if not isinstance(other, WeylPolynomial):
            return NotImplemented
        return self._combined_with(other, -1.0)

    def __neg__(self):
        return WeylPolynomial(self.nu, -self.coeff, self.gamma)

    def __mul__(self, other):
        if isinstance(other, WeylPolynomial):
            return weyl_mul(self, other)
        return WeylPolynomial(self.nu, self.coeff * complex(other), self.gamma)

    def __rmul__(self, other):
        return WeylPolynomial(self.nu, complex(other) * self.coeff, self.gamma)

    def adjoint(self) -> "WeylPolynomial":
        return adjoint(self)

    # -- serialization -----------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"gamma": self.gamma, "terms": _records(self.nu, self.coeff)}
        )

    @classmethod
    def from_json(cls, text: str) -> "WeylPolynomial":
        data = json.loads(text)
        nu, coeff = _from_records(data["terms"])
        return cls(nu, coeff, float(data["gamma"]))


def _records(nu, coeff):
    return [
        {"nu": [int(a), int(b)], "re": float(c.real), "im": float(c.imag)}
        for (a, b), c in zip(nu, coeff)
    ]


def _from_records(records):
    nu = np.array([r["nu"] for r in records], dtype=np.int64).reshape(-1, 2)
    coeff = np.array(
        [complex(r["re"], r["im"]) for r in records], dtype=np.complex128
    )
    return nu, coeff


def weyl_mul(a: WeylPolynomial, b: WeylPolynomial) -> WeylPolynomial:
    """Bilinear extension of the twisted generator product."""
    _check_gamma(a.gamma, b.gamma)
    nu, coeff = weyl_product(a.nu, a.coeff, b.nu, b.coeff, a.gamma, PRUNE_TOL)
    return WeylPolynomial(nu, coeff, a.gamma, _canonical=True)


def adjoint(a: WeylPolynomial) -> WeylPolynomial:
    """Antilinear involution: c W(nu) -> conj(c) W(-nu)."""
    return WeylPolynomial(-a.nu, np.conj(a.coeff), a.gamma)


def trace_state(a: WeylPolynomial) -> complex:
    """The tracial state: the coefficient of W(0)."""
    return a.coefficient((0, 0))


def gns_norm(a: WeylPolynomial) -> float:
    """sqrt(trace_state(a* a)); equals the l2 norm of the coefficients."""
    return float(np.linalg.norm(a.coeff))


def evolve(a: WeylPolynomial, t: int) -> WeylPolynomial:
    """Cat-map automorphism: W(nu) -> W(phi^{-t} nu).

    The index map is an exact integer lattice bijection, so traces,
    GNS norms and products are preserved.
    """
    mat = CAT_MAP.power(-int(t))
    nu = _map_indices(a.nu, mat)
    return WeylPolynomial(
        *combine_terms(nu, a.coeff.copy(), PRUNE_TOL), a.gamma, _canonical=True
    )


def horocycle_twist(a: WeylPolynomial, j: int, s: float) -> WeylPolynomial:
    """Horocycle automorphism: multiply c_nu by exp(2*pi*i*(nu.V_j)*s)."""
    v = CAT_SYSTEM.direction(j)
    dots = a.nu[:, 0] * v[0] + a.nu[:, 1] * v[1]
    coeff = a.coeff * np.exp(1j * (TWO_PI * s) * dots)
    return WeylPolynomial(a.nu, coeff, a.gamma, _canonical=True)


def hyperbolicity_defect(
    a: WeylPolynomial, j: int, t: int, s: float, rate: float | None = None
) -> float:
    """GNS norm of the conjugation identity residual.

    Measures alpha_t sigma_j(s) alpha_{-t} a - sigma_j(s * e^{lambda_j t}) a,
    which vanishes (up to rounding) for the quantized cat map. `rate`
    overrides e^{lambda_j t}, e.g. to show a wrong rate is detected.
    """
    if rate is None:
        rate = stretch_factor(CAT_SYSTEM, j, t)
    lhs = evolve(horocycle_twist(evolve(a, -t), j, s), t)
    rhs = horocycle_twist(a, j, s * rate)
    return gns_norm(lhs - rhs)


class StateFunctional:
    """Normal-state restriction to the generators: nu -> F(W(nu)).

    Finitely many nonzero values, with F(W(0)) = 1 and the Hermiticity
    F(W(-nu)) = conj(F(W(nu))).
    """

    __slots__ = ("nu", "coeff", "gamma")

    def __init__(self, nu, coeff, gamma: float = DEFAULT_GAMMA, *, _canonical=False):
        gamma = float(gamma)
        nu, coeff = _as_term_arrays(nu, coeff)
        if not _canonical:
            nu, coeff = combine_terms(nu, coeff, PRUNE_TOL)
        _check_index_range(nu)
        _validate_state_terms(nu, coeff)
        nu.flags.writeable = False
        coeff.flags.writeable = False
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "gamma", gamma)

    def __setattr__(self, name, value):
        raise AttributeError("StateFunctional is immutable")

    @classmethod
    def from_coeffs(cls, coeffs, gamma: float = DEFAULT_GAMMA):
        """Build from a {(n1, n2): value} mapping (must include (0,0): 1)."""
        items = list(coeffs.items())
        nu = [[int(k[0]), int(k[1])] for k, _ in items]
        c = [complex(v) for _, v in items]
        return cls(nu, c, gamma)

    @classmethod
    def tracial(cls, gamma: float = DEFAULT_GAMMA):
        return cls([[0, 0]], [1.0 + 0.0j], gamma)

    def value(self, nu) -> complex:
        hit = (self.nu[:, 0] == int(nu[0])) & (self.nu[:, 1] == int(nu[1]))
        sel = self.coeff[hit]
        return complex(sel[0]) if len(sel) else 0.0 + 0.0j

    def coeffs(self) -> dict:
        return {(int(a), int(b)): complex(c)
                for (a, b), c in zip(self.nu, self.coeff)}

    def __repr__(self):
        return f"StateFunctional({self.coeffs()!r}, gamma={self.gamma!r})"

    def to_json(self) -> str:
        return json.dumps(
            {"gamma": self.gamma, "terms": _records(self.nu, self.coeff)}
        )

    @classmethod
    def from_json(cls, text: str) -> "StateFunctional":
        data = json.loads(text)
        nu, coeff = _from_records(data["terms"])
        return cls(nu, coeff, float(data["gamma"]))


def _validate_state_terms(nu, coeff):
    values = {(int(a), int(b)): c for (a, b), c in zip(nu, coeff)}
    t0 = values.get((0, 0), 0.0)
    if abs(t0 - 1.0) > 1e-12:
        raise ValueError(f"state normalization violated: F(W(0)) = {t0!r}")
    for (a, b), c in values.items():
        mirror = values.get((-a, -b), 0.0)
        if abs(mirror - c.conjugate()) > 1e-12:
            raise ValueError(f"state Hermiticity violated at nu = {(a, b)}")


def vector_state(b: WeylPolynomial) -> StateFunctional:
    """The state a -> trace_state(b* a b) / trace_state(b* b).

    Its generator values are accumulated in closed form: the pair
    (mu, mu') of support indices contributes conj(c_mu) c_mu'
    exp(i gamma kappa(mu, mu')) at nu = mu - mu'.
    """
    if len(b.coeff) == 0:
        raise ValueError("cannot form a state from the zero element")
    mu = b.nu
    nu_pairs = (mu[:, None, :] - mu[None, :, :]).reshape(-1, 2)
    kappa = np.outer(mu[:, 0], mu[:, 1]) - np.outer(mu[:, 1], mu[:, 0])
    contrib = (
        np.conj(b.coeff)[:, None] * b.coeff[None, :] * np.exp(1j * (b.gamma * kappa))
    )
    nu, coeff = combine_terms(nu_pairs, contrib.reshape(-1), PRUNE_TOL)
    zero_hit = (nu[:, 0] == 0) & (nu[:, 1] == 0)
    norm_sq = coeff[zero_hit][0].real
    return StateFunctional(nu, coeff / norm_sq, b.gamma, _canonical=True)


def evolve_state(f: StateFunctional, t: int) -> StateFunctional:
    """Dual of the cat-map automorphism: the value at nu moves to phi^t nu."""
    mat = CAT_MAP.power(int(t))
    nu = _map_indices(f.nu, mat)
    nu, coeff = combine_terms(nu, f.coeff.copy(), PRUNE_TOL)
    return StateFunctional(nu, coeff, f.gamma, _canonical=True)


def _generator_norm(nu, coeff, j: int) -> float:
    v = CAT_SYSTEM.direction(j)
    dots = nu[:, 0] * v[0] + nu[:, 1] * v[1]
    return float(np.linalg.norm(TWO_PI * dots * np.abs(coeff)))


def horocycle_generator_norm(f: StateFunctional, j: int) -> float:
    """l2 norm of the infinitesimal horocycle action on the state values.

    The dual generator multiplies the value at nu by 2*pi*i*(nu.V_j);
    this returns sqrt(sum |2*pi*(nu.V_j)|^2 |F(W(nu))|^2).
    """
    return _generator_norm(f.nu, f.coeff, j)


def divergence_ratio(f1: StateFunctional, f2: StateFunctional, j: int, t: int) -> float:
    """Growth factor of the horocycle speed of the evolved state difference.

    Equals e^{lambda_j t} up to rounding: the quantum Lyapunov law.
    """
    _check_gamma(f1.gamma, f2.gamma)
    nu = np.concatenate([f1.nu, f2.nu])
    coeff = np.concatenate([f1.coeff, -f2.coeff])
    nu, coeff = combine_terms(nu, coeff, PRUNE_TOL)
    denom = _generator_norm(nu, coeff, j)
    if denom == 0.0:
        raise ValueError("degenerate state pair: horocycle generator norm vanishes")
    mapped = _map_indices(nu, CAT_MAP.power(int(t)))
    return _generator_norm(mapped, coeff, j) / denom


def clock_shift_rep(nu, N: int) -> np.ndarray:
    """Clock-and-shift matrices realizing the product rule at gamma = pi/N.

    rep(nu) = omega^{-nu1*nu2/2} U^{nu1} V^{nu2} with U = diag(omega^k),
    V the cyclic up-shift and omega = exp(2*pi*i/N); then
    rep(nu) rep(nu') = exp(i*(pi/N)*kappa(nu, nu')) rep(nu + nu') exactly.
    """
    N = int(N)
    if N < 2:
        raise ValueError("dimension N must be >= 2")
    n1, n2 = int(nu[0]), int(nu[1])
    rows = np.arange(N)
    cols = (rows - n2) % N
    diag = np.exp(2j * np.pi * ((rows * n1) % N) / N)
    phase = np.exp(-1j * np.pi * ((n1 * n2) % (2 * N)) / N)
    rep = np.zeros((N, N), dtype=np.complex128)
    rep[rows, cols] = phase * diag
    return rep


def rep_normalized_trace(nu, N: int) -> complex:
    """tr(rep(nu))/N; equals the tracial state inside the index window."""
    n1, n2 = int(nu[0]), int(nu[1])
    if not (abs(n1) < N / 2 and abs(n2) < N / 2):
        raise ValueError(
            f"trace cross-check needs |nu_i| < N/2, got nu = {(n1, n2)} at N = {N}"
        )
    return complex(np.trace(clock_shift_rep(nu, N)) / N)
