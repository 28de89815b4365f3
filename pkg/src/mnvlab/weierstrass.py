"""Surfaces from spinor pairs: the induced representation in R^3.

For a holomorphic pair the three coordinate 1-forms integrate in closed form:
with F, G, H antiderivatives of p^2 + q^2, q^2 - p^2 and p q (normalized to
vanish at 0), the surface through u0 is

    u1 = -Im F(z) + u0_1,   u2 = Re G(z) + u0_2,   u3 = 2 Re H(z) + u0_3.

The base point is always z = 0; translations enter only through u0.  The
su(2) dictionary identifies a point (u1, u2, u3) with the trace-free
anti-Hermitian matrix ((i u3, -u1 - i u2), (u1 - i u2, -i u3)), whose
determinant is the squared Euclidean norm.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import HMatrix
from .errors import BranchPoint
from .spinor import SpinorPair, spinor_evolve

#: Spinor-norm threshold below which the immersion is treated as branched.
BRANCH_EPS = 1e-14


class SurfacePoint(NamedTuple):
    u1: float
    u2: float
    u3: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.u1 ** 2 + self.u2 ** 2 + self.u3 ** 2))


ORIGIN = SurfacePoint(0.0, 0.0, 0.0)


def surface_antiderivatives(s: SpinorPair, t: float = 0.0):
    """Coefficient arrays (F, G, H) for the evolved pair at time t."""
    st = spinor_evolve(s, t)
    p, q = st.p.coeffs, st.q.coeffs
    pp = npoly.polymul(p, p)
    qq = npoly.polymul(q, q)
    F = npoly.polyint(npoly.polyadd(pp, qq))
    G = npoly.polyint(npoly.polysub(qq, pp))
    H = npoly.polyint(npoly.polymul(p, q))
    return F, G, H


def surface_coords(s: SpinorPair, z, t: float = 0.0, u0: Sequence[float] = ORIGIN):
    """Vectorized (u1, u2, u3) arrays over an array of z values."""
    F, G, H = surface_antiderivatives(s, t)
    z = np.asarray(z, dtype=complex)
    u1 = -np.imag(npoly.polyval(z, F)) + u0[0]
    u2 = np.real(npoly.polyval(z, G)) + u0[1]
    u3 = 2.0 * np.real(npoly.polyval(z, H)) + u0[2]
    return u1, u2, u3


def surface_point(s: SpinorPair, z: complex, t: float = 0.0,
                  u0: Sequence[float] = ORIGIN) -> SurfacePoint:
    u1, u2, u3 = surface_coords(s, complex(z), t, u0)
    return SurfacePoint(float(u1), float(u2), float(u3))


def induced_metric(s: SpinorPair, z: complex, t: float = 0.0) -> float:
    """Conformal factor e^{2 alpha} = (|psi1|^2 + |psi2|^2)^2."""
    st = spinor_evolve(s, t)
    e_alpha = abs(st.p(complex(z))) ** 2 + abs(st.q(complex(z))) ** 2
    return float(e_alpha ** 2)


def normal_vector(s: SpinorPair, z: complex, t: float = 0.0) -> SurfacePoint:
    """Unit normal; raises BranchPoint where the spinor norm vanishes."""
    st = spinor_evolve(s, t)
    z = complex(z)
    p = st.p(z)
    qc = np.conjugate(st.q(z))  # psi2
    norm = abs(p) ** 2 + abs(qc) ** 2
    if norm <= BRANCH_EPS:
        raise BranchPoint(f"spinor norm {norm!r} at z={z!r}")
    cross = p * qc
    return SurfacePoint(
        float(-2.0 * cross.imag / norm),
        float(-2.0 * cross.real / norm),
        float((abs(qc) ** 2 - abs(p) ** 2) / norm),
    )


def surface_matrix(p: Sequence[float]) -> HMatrix:
    """Encode a Euclidean point in su(2) form; det equals |p|^2."""
    u1, u2, u3 = float(p[0]), float(p[1]), float(p[2])
    return HMatrix(1j * u3, -u1 - 1j * u2)


def decode_surface_matrix(m: HMatrix) -> SurfacePoint:
    """Inverse of surface_matrix under the same dictionary."""
    return SurfacePoint(-m.beta.real, -m.beta.imag, m.alpha.imag)


# ---------------------------------------------------------------------------
# parametric grid meshes and OBJ export
# ---------------------------------------------------------------------------

def grid_vertices(s: SpinorPair, xs: np.ndarray, ys: np.ndarray, t: float = 0.0,
                  u0: Sequence[float] = ORIGIN) -> np.ndarray:
    """(nx*ny, 3) vertex array, row-major: y varies over rows, x within a row."""
    X, Y = np.meshgrid(xs, ys)  # shape (ny, nx)
    u1, u2, u3 = surface_coords(s, X + 1j * Y, t, u0)
    return np.column_stack([u1.ravel(), u2.ravel(), u3.ravel()])


def grid_faces(nx: int, ny: int, valid=None):
    """Triangle index triples (1-based) for a quad grid split into triangles.

    valid: optional flat boolean mask over vertices; faces touching an
    invalid vertex are omitted.
    """
    faces = []
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            v00 = iy * nx + ix
            v10 = v00 + 1
            v01 = v00 + nx
            v11 = v01 + 1
            for tri in ((v00, v10, v11), (v00, v11, v01)):
                if valid is not None and not all(valid[k] for k in tri):
                    continue
                faces.append(tuple(k + 1 for k in tri))
    return faces


def write_obj(stream, vertices: np.ndarray, faces, degenerate=None) -> None:
    """Write a Wavefront OBJ mesh with 17-significant-digit vertices.

    degenerate: optional flat boolean mask; flagged vertices are emitted as
    a zero placeholder preceded by a comment (their faces are expected to be
    absent from `faces`).
    """
    for idx, v in enumerate(vertices):
        if degenerate is not None and degenerate[idx]:
            stream.write(f"# vertex {idx + 1} degenerate (maps to infinity)\n")
            stream.write("v 0 0 0\n")
        else:
            stream.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
    for f in faces:
        stream.write(f"f {f[0]} {f[1]} {f[2]}\n")
