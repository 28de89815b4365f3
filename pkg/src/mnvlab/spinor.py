"""Holomorphic polynomial spinor pairs and their exact time evolution.

A pair stores two holomorphic polynomials (p, q); the physical spinor
components are psi1 = p(z) and psi2 = conj(q(z)), so that psi1 and
conj(psi2) are both holomorphic.  Conjugation happens only at evaluation,
which keeps all coefficient arithmetic holomorphic.

Under the flow d/dt p = p''' the solution is the finite nilpotent series
p(., t) = sum_m t^m/m! (d/dz)^{3m} p0, exact for polynomials.  q follows the
identical rule (the conjugated flow for psi2 becomes d/dt q = q''').
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

#: Hard cap on spinor polynomial degree; keeps the evolution series short.
MAX_DEGREE = 16


def _as_coeffs(values) -> np.ndarray:
    c = np.atleast_1d(np.asarray(values, dtype=complex))
    if c.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    if not np.all(np.isfinite(c.view(float))):
        raise ValueError("coefficients must be finite")
    # trim exact trailing zeros; keep one coefficient for the zero polynomial
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1].copy() if nz.size else np.zeros(1, dtype=complex)


@dataclass(frozen=True, eq=False)
class HoloPoly:
    """Polynomial sum c_k z^k with complex coefficients c_0..c_n."""

    coeffs: np.ndarray
    max_degree: int = field(default=MAX_DEGREE, repr=False)

    def __post_init__(self):
        c = _as_coeffs(self.coeffs)
        if c.size - 1 > self.max_degree:
            raise ValueError(
                f"degree {c.size - 1} exceeds the cap {self.max_degree}"
            )
        object.__setattr__(self, "coeffs", c)
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def derivative(self, order: int = 1) -> "HoloPoly":
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if order == 0:
            return self
        return HoloPoly(npoly.polyder(self.coeffs, order), self.max_degree)

    def evolve(self, t: float) -> "HoloPoly":
        out = self.coeffs.copy()
        d = self.coeffs
        fact = 1.0
        m = 0
        while True:
            d = npoly.polyder(d, 3)
            if d.size == 0 or not d.any():
                break
            m += 1
            fact *= m
            out = npoly.polyadd(out, d * (float(t) ** m / fact))
        return HoloPoly(out, self.max_degree)

    def coeffs_equal(self, other: "HoloPoly", tol: float = 0.0) -> bool:
        a, b = self.coeffs, other.coeffs
        if len(a) != len(b):
            return False
        return bool(np.all(np.abs(a - b) <= tol))


@dataclass(frozen=True)
class SpinorPair:
    """psi1 = p(z), psi2 = conj(q(z)); not both identically zero."""

    p: HoloPoly
    q: HoloPoly

    def __post_init__(self):
        if self.p.is_zero and self.q.is_zero:
            raise ValueError("spinor pair must not be identically zero")

    @classmethod
    def from_coeffs(cls, p_coeffs, q_coeffs) -> "SpinorPair":
        return cls(HoloPoly(p_coeffs), HoloPoly(q_coeffs))

    @classmethod
    def enneper(cls, order: int = 1) -> "SpinorPair":
        """The degree-k family (z^k, 1); k=1 is the classical surface."""
        if order < 1:
            raise ValueError("order must be >= 1")
        p = np.zeros(order + 1, dtype=complex)
        p[order] = 1.0
        return cls.from_coeffs(p, [1.0])


ENNEPER = SpinorPair.from_coeffs([0.0, 1.0], [1.0])


def poly_derivative(p: HoloPoly, order: int = 1) -> HoloPoly:
    """Exact coefficient differentiation."""
    return p.derivative(order)


def spinor_evolve(s: SpinorPair, t: float) -> SpinorPair:
    """Exact polynomial solution at time t of the third-derivative flow."""
    return SpinorPair(s.p.evolve(t), s.q.evolve(t))


def spinor_eval(s: SpinorPair, z: complex, t: float = 0.0):
    """(psi1, psi2) at z after evolving to time t."""
    st = spinor_evolve(s, t)
    return st.p(z), np.conjugate(st.q(z))
