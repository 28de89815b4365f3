import io

import numpy as np
import pytest

from mnvlab.errors import BranchPoint
from mnvlab.spinor import ENNEPER, SpinorPair, spinor_evolve
from mnvlab.weierstrass import (SurfacePoint, decode_surface_matrix,
                                grid_faces, grid_vertices, induced_metric,
                                normal_vector, surface_matrix, surface_point,
                                write_obj)

C = 0.9


def enneper_oracle(x, y, u0=(0.0, 0.0, 0.0)):
    """Independent coordinate formulas for the first-order pair."""
    return (
        y * (y * y / 3.0 - x * x - 1.0) + u0[0],
        x * (1.0 + y * y - x * x / 3.0) + u0[1],
        x * x - y * y + u0[2],
    )


def test_surface_point_examples():
    p = surface_point(ENNEPER, 1.0, 0.0, (0.0, C, 0.0))
    assert np.allclose(p, (0.0, 2.0 / 3.0 + C, 1.0), atol=1e-15)
    p = surface_point(ENNEPER, 1j, 0.0, (0.0, C, 0.0))
    assert np.allclose(p, (-2.0 / 3.0, C, -1.0), atol=1e-15)
    u0 = (0.3, -0.4, 2.0)
    assert surface_point(SpinorPair.from_coeffs([0, 0, 1], [1, 2j]), 0.0, 1.5, u0) == u0


def test_surface_point_matches_oracle(rng):
    for _ in range(100):
        x, y = rng.uniform(-4, 4, 2)
        got = surface_point(ENNEPER, complex(x, y), 0.0, (0.1, 0.2, -0.3))
        want = enneper_oracle(x, y, (0.1, 0.2, -0.3))
        assert np.max(np.abs(np.subtract(got, want))) <= 1e-12 * max(1.0, np.abs(want).max())


def _polyline_integrals(s, path, t, n=80):
    """Quadrature oracle for the three coordinate integrals along a polyline."""
    st = spinor_evolve(s, t)
    nodes, weights = np.polynomial.legendre.leggauss(n)
    I1 = I2 = I3 = 0.0 + 0.0j
    for a, b in zip(path[:-1], path[1:]):
        dz = b - a
        zs = a + (nodes + 1.0) / 2.0 * dz
        p = st.p(zs)
        q = st.q(zs)
        I1 += weights @ (p * p + q * q) * dz / 2.0
        I2 += weights @ (q * q - p * p) * dz / 2.0
        I3 += weights @ (p * q) * dz / 2.0
    return -np.imag(I1), np.real(I2), 2.0 * np.real(I3)


@pytest.mark.parametrize("seed_pair, t", [
    (ENNEPER, 0.0),
    (SpinorPair.from_coeffs([0.0, 0.0, 0.0, 1.0], [1.0, -0.5j]), 0.8),
])
def test_path_independence(seed_pair, t, rng):
    for _ in range(5):
        z = complex(*rng.uniform(-2, 2, 2))
        direct = _polyline_integrals(seed_pair, [0.0, z], t)
        corner = _polyline_integrals(seed_pair, [0.0, z.real, z], t)
        closed = surface_point(seed_pair, z, t)
        for oracle in (direct, corner):
            assert np.max(np.abs(np.subtract(closed, oracle))) <= 1e-10


def test_induced_metric_values():
    assert induced_metric(ENNEPER, 0.0) == 1.0
    for phi in (0.0, 1.1, 3.9):
        assert abs(induced_metric(ENNEPER, np.exp(1j * phi)) - 4.0) <= 1e-12
    branched = SpinorPair.from_coeffs([0.0, 1.0], [0.0])
    assert induced_metric(branched, 0.0) == 0.0


def test_normal_examples():
    assert np.allclose(normal_vector(ENNEPER, 0.0), (0.0, 0.0, 1.0), atol=0.0)
    assert np.allclose(normal_vector(ENNEPER, 1.0), (0.0, -1.0, 0.0), atol=1e-15)
    far = normal_vector(ENNEPER, 1e6)
    assert abs(far.u3 + 1.0) <= 1e-11


def test_normal_unit_norm(rng):
    for _ in range(50):
        z = complex(*rng.uniform(-3, 3, 2))
        assert abs(normal_vector(ENNEPER, z).norm - 1.0) <= 1e-12


def test_normal_branch_point():
    branched = SpinorPair.from_coeffs([0.0, 1.0], [0.0])
    with pytest.raises(BranchPoint):
        normal_vector(branched, 0.0)


def test_surface_matrix_examples():
    zero = surface_matrix((0.0, 0.0, 0.0))
    assert zero.alpha == 0 and zero.beta == 0
    unit = surface_matrix((0.0, 0.0, 1.0))
    assert unit.alpha == 1j and unit.beta == 0 and unit.det == 1.0
    m = surface_matrix((1.0, 2.0, 3.0))
    assert m.alpha == 3j and m.beta == -1 - 2j and m.det == 14.0


def test_surface_matrix_isometry(rng):
    for _ in range(50):
        p = SurfacePoint(*rng.normal(0, 10, 3))
        m = surface_matrix(p)
        assert abs(m.det - p.norm ** 2) <= 1e-12 * max(1.0, p.norm ** 2)
        assert decode_surface_matrix(m) == p


def test_discrete_mean_curvature_small():
    """For a conformal minimal immersion the coordinate Laplacian vanishes;
    the discrete estimate must stay below 2e-2 at interior nodes."""
    h = 1e-2
    xs = np.arange(-1.0, 1.0 + h / 2, h)
    for x in xs[1:-1:20]:
        for y in xs[1:-1:20]:
            z = complex(x, y)
            lap = (np.array(surface_point(ENNEPER, z + h))
                   + np.array(surface_point(ENNEPER, z - h))
                   + np.array(surface_point(ENNEPER, z + 1j * h))
                   + np.array(surface_point(ENNEPER, z - 1j * h))
                   - 4.0 * np.array(surface_point(ENNEPER, z))) / h ** 2
            n = np.array(normal_vector(ENNEPER, z))
            mean_curv = float(lap @ n) / (2.0 * induced_metric(ENNEPER, z))
            assert abs(mean_curv) <= 2e-2


def test_zero_seed_potential_is_zero():
    """U = e^alpha H / 2 vanishes identically for minimal immersions; the
    discrete H estimate above certifies it at the sampled points."""
    z = 0.4 + 0.2j
    h = 1e-2
    lap = (np.array(surface_point(ENNEPER, z + h))
           + np.array(surface_point(ENNEPER, z - h))
           + np.array(surface_point(ENNEPER, z + 1j * h))
           + np.array(surface_point(ENNEPER, z - 1j * h))
           - 4.0 * np.array(surface_point(ENNEPER, z))) / h ** 2
    n = np.array(normal_vector(ENNEPER, z))
    e2a = induced_metric(ENNEPER, z)
    u_seed = np.sqrt(e2a) * (float(lap @ n) / (2.0 * e2a)) / 2.0
    assert abs(u_seed) <= 1e-2


def test_obj_mesh_combinatorics():
    xs = np.linspace(-1, 1, 32)
    ys = np.linspace(-1, 1, 32)
    verts = grid_vertices(ENNEPER, xs, ys)
    faces = grid_faces(32, 32)
    assert verts.shape == (1024, 3)
    assert len(faces) == 1922
    buf = io.StringIO()
    write_obj(buf, verts, faces)
    lines = buf.getvalue().splitlines()
    assert sum(1 for ln in lines if ln.startswith("v ")) == 1024
    assert sum(1 for ln in lines if ln.startswith("f ")) == 1922
    # row-major ordering: second vertex advances along x
    x0, y0 = xs[0], ys[0]
    assert float(lines[0].split()[1]) == pytest.approx(enneper_oracle(x0, y0)[0], abs=1e-14)
    assert float(lines[1].split()[2]) == pytest.approx(enneper_oracle(xs[1], y0)[1], abs=1e-14)
    # 17 significant digits round-trip doubles exactly
    assert float(lines[0].split()[1]) == verts[0, 0]
