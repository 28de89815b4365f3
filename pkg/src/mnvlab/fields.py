"""Vectorized field evaluation and rectangular grid sampling.

A FieldEvaluator binds a spinor pair, the blow-up parameter C and the base
offset u0 (default (0, -C, 0), which places the single degenerate point of
the first-order pair at x = y = 0, t = C).  It evaluates U~, V~ and the
deformed-matrix determinant on arrays of points.

Two evaluation routes exist and must agree:

* the first-order pair with the default offset dispatches to the compiled
  kernels (closed gamma/delta expressions);
* any other seed goes through the generic route, which expands the matrix
  assemblies of the transformation into componentwise array formulas.

Degenerate points come out as nan (never raised): grids keep their shape
and callers decide how to flag the hole.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import kernels
from .moutard import s_tilde_entries
from .spinor import ENNEPER, SpinorPair, spinor_evolve


def default_u0(C: float) -> tuple:
    """Base offset placing the blow-up of the first-order pair at t = C."""
    return (0.0, -float(C), 0.0)


class FieldEvaluator:
    """Vectorized (U~, V~, det) evaluation for one seed."""

    def __init__(self, spinor: SpinorPair = ENNEPER, C: float = 0.0,
                 u0: Optional[Sequence[float]] = None,
                 use_kernels: Optional[bool] = None):
        self.spinor = spinor
        self.C = float(C)
        self.u0 = tuple(float(v) for v in (default_u0(C) if u0 is None else u0))
        eligible = (
            spinor.p.coeffs_equal(ENNEPER.p)
            and spinor.q.coeffs_equal(ENNEPER.q)
            and self.u0 == default_u0(C)
        )
        if use_kernels and not eligible:
            raise ValueError("compiled kernels only cover the first-order pair "
                             "with the default base offset")
        self._fast = eligible if use_kernels is None else bool(use_kernels)

    @property
    def is_fast_path(self) -> bool:
        return self._fast

    @property
    def blowup(self) -> Optional[tuple]:
        """(x, y, t) of the known degenerate point, if any."""
        return (0.0, 0.0, self.C) if self._fast else None

    def sample(self, x, y, t: float):
        """(U, V, det) arrays over broadcast (x, y) at a single time."""
        if self._fast:
            return kernels.enneper_fields(x, y, self.C - float(t))
        return self._generic(x, y, float(t))

    def u(self, x, y, t: float):
        return self.sample(x, y, t)[0]

    def v(self, x, y, t: float):
        return self.sample(x, y, t)[1]

    def det(self, x, y, t: float):
        if self._fast:
            return kernels.enneper_det(x, y, self.C - float(t))
        return self.sample(x, y, t)[2]

    def quadrature_hint(self, t: float):
        """Location hint (radius, angle, width) of the near-degenerate
        concentration for the plane quadrature, when one is known."""
        if not self._fast:
            return None
        ct = self.C - float(t)
        if ct == 0.0 or abs(ct) >= 1.0:
            return None
        return (abs(ct), 0.0 if ct > 0 else np.pi, ct * ct)

    # -- generic route -----------------------------------------------------

    def _generic(self, x, y, t: float):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        z = x + 1j * y

        g, d = s_tilde_entries(self.spinor, z, t, self.u0)
        st = spinor_evolve(self.spinor, t)
        P = npoly.polyval(z, st.p.coeffs)
        Q = npoly.polyval(z, st.q.coeffs)
        P1 = npoly.polyval(z, npoly.polyder(st.p.coeffs))
        Q1 = npoly.polyval(z, npoly.polyder(st.q.coeffs))

        det = (g * np.conj(g)).real + (d * np.conj(d)).real
        frame_det = (P * np.conj(P)).real + (Q * np.conj(Q)).real
        with np.errstate(divide="ignore", invalid="ignore"):
            # componentwise expansion of Psi S^{-1} Gamma Psi^T Gamma^{-1}
            k00 = ((P * np.conj(P)) * np.conj(g) + g * (Q * np.conj(Q))
                   + P * np.conj(Q) * d - np.conj(P) * Q * np.conj(d)) / det
            a = (P * Q * (np.conj(g) - g) - Q * Q * np.conj(d) - P * P * d) / det
            # componentwise expansion of Gamma Psi_y Psi^{-1} Gamma^{-1}
            b = -1j * (np.conj(P1) * P + np.conj(Q1) * Q) / frame_det
            c = -1j * (np.conj(P1) * np.conj(Q) - np.conj(Q1) * np.conj(P)) / frame_det
            u = k00.imag
            v = a * a + 2.0 * (a * np.conj(b) - 1j * np.conj(c) * u)
        return u, v, det


@dataclass(frozen=True)
class FieldGrid:
    """Row-major rectangular sampling: index [iy, ix]."""

    xs: np.ndarray
    ys: np.ndarray
    t: float
    C: float
    u: np.ndarray
    v: np.ndarray
    det: np.ndarray

    @property
    def degenerate_mask(self) -> np.ndarray:
        return ~np.isfinite(self.u)

    @classmethod
    def sample(cls, evaluator: FieldEvaluator, xs, ys, t: float) -> "FieldGrid":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        X, Y = np.meshgrid(xs, ys)
        u, v, det = evaluator.sample(X, Y, t)
        return cls(xs=xs, ys=ys, t=float(t), C=evaluator.C, u=u, v=v, det=det)


def linspace_grid(xmin, xmax, ymin, ymax, nx, ny):
    """Axis vectors for a bounds/count grid specification."""
    if nx < 1 or ny < 1:
        raise ValueError("grid counts must be positive")
    xs = np.linspace(xmin, xmax, int(nx)) if nx > 1 else np.array([0.5 * (xmin + xmax)])
    ys = np.linspace(ymin, ymax, int(ny)) if ny > 1 else np.array([0.5 * (ymin + ymax)])
    return xs, ys
