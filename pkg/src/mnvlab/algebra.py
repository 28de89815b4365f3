"""Quaternionic 2x2 complex matrices.

The space H of matrices ((alpha, beta), (-conj(beta), conj(alpha))) is closed
under products and carries det = |alpha|^2 + |beta|^2 >= 0.  A matrix is
stored as the pair (alpha, beta); the H-form is structural, never checked at
runtime.  Gamma = ((0, 1), (-1, 0)) is HMatrix(0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateMatrix

#: Default determinant threshold below which inversion refuses to proceed.
#: Deliberately tiny: the degeneracy locus of the deformed surfaces is a
#: single space-time point, and evaluation arbitrarily close to it must work.
EPS_DET = 1e-300


def _require_finite(z: complex, name: str) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must have finite components, got {z!r}")


@dataclass(frozen=True)
class HMatrix:
    """((alpha, beta), (-conj(beta), conj(alpha))) stored as (alpha, beta)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        _require_finite(self.alpha, "alpha")
        _require_finite(self.beta, "beta")

    @property
    def det(self) -> float:
        a, b = self.alpha, self.beta
        return a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta],
             [-self.beta.conjugate(), self.alpha.conjugate()]],
            dtype=complex,
        )

    def transpose(self) -> "HMatrix":
        # ((alpha, -conj(beta)), (beta, conj(alpha))) is again in H
        return HMatrix(self.alpha, -self.beta.conjugate())

    def adjugate(self) -> "HMatrix":
        # A @ adj(A) = det(A) * I; equals Gamma A^T Gamma^{-1}
        return HMatrix(self.alpha.conjugate(), -self.beta)

    def __add__(self, other: "HMatrix") -> "HMatrix":
        return HMatrix(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other: "HMatrix") -> "HMatrix":
        return HMatrix(self.alpha - other.alpha, self.beta - other.beta)

    def __neg__(self) -> "HMatrix":
        return HMatrix(-self.alpha, -self.beta)

    def __matmul__(self, other: "HMatrix") -> "HMatrix":
        return hmat_mul(self, other)

    def max_abs(self) -> float:
        return max(abs(self.alpha), abs(self.beta))

    def isclose(self, other: "HMatrix", tol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= tol


IDENTITY = HMatrix(1.0, 0.0)
GAMMA = HMatrix(0.0, 1.0)
GAMMA_INV = HMatrix(0.0, -1.0)


class PauliTag(Enum):
    """Constant matrices appearing in the one-form assembly."""

    SIGMA2 = "sigma2"
    SIGMA3 = "sigma3"
    IDENTITY = "identity"

    @property
    def matrix(self) -> np.ndarray:
        if self is PauliTag.SIGMA2:
            return np.array([[0.0, -1.0j], [1.0j, 0.0]])
        if self is PauliTag.SIGMA3:
            return np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
        return np.eye(2, dtype=complex)


def hmat_mul(a: HMatrix, b: HMatrix) -> HMatrix:
    """Matrix product; H is closed under it."""
    return HMatrix(
        a.alpha * b.alpha - a.beta * b.beta.conjugate(),
        a.alpha * b.beta + a.beta * b.alpha.conjugate(),
    )


def hmat_inv(a: HMatrix, eps_det: float = EPS_DET) -> HMatrix:
    """Inverse within H.

    Raises DegenerateMatrix when det <= eps_det; with the default threshold
    this only triggers on the exact degeneracy locus.
    """
    d = a.det
    if d <= eps_det:
        raise DegenerateMatrix(f"determinant {d!r} <= {eps_det!r}")
    return HMatrix(a.alpha.conjugate() / d, -a.beta / d)


def from_array(m: np.ndarray, tol: float = 0.0) -> HMatrix:
    """Build an HMatrix from a 2x2 array, verifying the H-pattern.

    Only used at trust boundaries (tests, I/O); internal code never leaves H.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected 2x2 matrix, got shape {m.shape}")
    a, b = complex(m[0, 0]), complex(m[0, 1])
    if abs(m[1, 0] + b.conjugate()) > tol or abs(m[1, 1] - a.conjugate()) > tol:
        raise ValueError("matrix is not of the (alpha, beta; -conj beta, conj alpha) form")
    return HMatrix(a, b)
