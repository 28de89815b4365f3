"""Inversion of surfaces in su(2) coordinates.

The sphere inversion of R^3 plus the point at infinity acts on encoded
surface points simply as S -> S^{-1}.  Decoding S^{-1} through the same
dictionary gives the Euclidean point -p / |p|^2; the global sign is a
convention of the dictionary, and the geometric invariants (|inverted| =
1/|p|, double inversion = identity) hold regardless.

If Psi defines a surface, the inverted surface is carried by the frame
Psi . S^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import EPS_DET, HMatrix, hmat_inv, hmat_mul
from .moutard import s_tilde_entries
from .spinor import SpinorPair
from .weierstrass import (ORIGIN, SurfacePoint, decode_surface_matrix,
                          grid_faces, surface_matrix, write_obj)


def invert_surface_matrix(S: HMatrix, eps_det: float = EPS_DET) -> HMatrix:
    """S -> S^{-1}; DegenerateMatrix marks the point that maps to infinity."""
    return hmat_inv(S, eps_det)


def inverted_spinor(psi0: HMatrix, S: HMatrix, eps_det: float = EPS_DET) -> HMatrix:
    """Frame of the inverted surface: Psi . S^{-1}."""
    return hmat_mul(psi0, hmat_inv(S, eps_det))


def invert_point(p: Sequence[float], eps_det: float = EPS_DET) -> SurfacePoint:
    """Euclidean form of the matrix inversion (encode, invert, decode)."""
    return decode_surface_matrix(invert_surface_matrix(surface_matrix(p), eps_det))


@dataclass(frozen=True)
class InvertedSample:
    z: complex
    t: float
    point: SurfacePoint
    degenerate: bool


def sample_inverted_surface(s: SpinorPair, xs, ys, t: float = 0.0,
                            u0: Sequence[float] = ORIGIN,
                            eps_det: float = EPS_DET):
    """Per-vertex inversion of the deformed surface over a parameter grid.

    Row-major over the grid (y varies over rows).  Degenerate vertices are
    flagged and carry nan coordinates rather than fabricated values.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    X, Y = np.meshgrid(xs, ys)
    z = (X + 1j * Y).ravel()
    g, d = s_tilde_entries(s, z, t, u0)
    det = (g * np.conj(g)).real + (d * np.conj(d)).real
    degenerate = det <= eps_det
    with np.errstate(divide="ignore", invalid="ignore"):
        # decode(S^{-1}) written out: (Re delta, Im delta, -Im gamma) / det
        u1 = np.where(degenerate, np.nan, d.real / det)
        u2 = np.where(degenerate, np.nan, d.imag / det)
        u3 = np.where(degenerate, np.nan, -g.imag / det)
    return [
        InvertedSample(complex(z[k]), float(t),
                       SurfacePoint(float(u1[k]), float(u2[k]), float(u3[k])),
                       bool(degenerate[k]))
        for k in range(z.size)
    ]


def write_inverted_obj(stream, samples, nx: int, ny: int) -> None:
    """OBJ mesh of inverted samples; faces touching degenerate vertices are
    dropped and the vertices themselves emitted as flagged placeholders."""
    if len(samples) != nx * ny:
        raise ValueError("sample count does not match grid shape")
    vertices = np.array([s.point for s in samples], dtype=float)
    degenerate = np.array([s.degenerate for s in samples], dtype=bool)
    vertices = np.where(degenerate[:, None], 0.0, vertices)
    faces = grid_faces(nx, ny, valid=~degenerate)
    write_obj(stream, vertices, faces, degenerate=degenerate)
