import numpy as np
import pytest

from mnvlab.errors import BlowUpPoint, DegenerateMatrix, SingularFrame
from mnvlab.fields import FieldEvaluator, default_u0
from mnvlab.moutard import (enneper_closed_form, enneper_closed_form_polar,
                            enneper_scalars, moutard_frame, moutard_scalars,
                            one_form_integral, potential_u, potential_v,
                            s_tilde, tau_matrix, vw_coefficients)
from mnvlab.spinor import ENNEPER, SpinorPair

C = 0.7
U0 = default_u0(C)
CUBIC = SpinorPair.from_coeffs([0.0, 0.0, 0.0, 1.0], [1.0])


def gamma_delta_oracle(x, y, t):
    """Entries of the deformed matrix for the first-order pair, written out."""
    g = 1j * (x * x - y * y)
    d = -y * (y * y / 3.0 - x * x - 1.0) - 1j * (x * (1.0 + y * y - x * x / 3.0) - (C - t))
    return g, d


# ---------------------------------------------------------------------------
# deformation coefficients
# ---------------------------------------------------------------------------

def test_vw_enneper(rng):
    for _ in range(10):
        z = complex(*rng.uniform(-3, 3, 2))
        v, w = vw_coefficients(ENNEPER, z, t=rng.uniform(-2, 2))
        assert v == 1.0 and w == 0.0


def test_vw_quadratic_pair():
    v, w = vw_coefficients(SpinorPair.from_coeffs([0, 0, 1.0], [1.0]), 0.7 - 0.2j, 1.3)
    assert v == 0.0
    assert w == -4.0


def test_vw_half_zero_pair():
    v, w = vw_coefficients(SpinorPair.from_coeffs([0.0], [1.0]), 1.0 + 1.0j, 0.5)
    assert v == 0.0 and w == 0.0


def test_tau_matrix_enneper():
    tau = tau_matrix(ENNEPER, 2.5)
    assert tau.alpha == 0.0
    assert tau.beta == -2.5j
    assert tau_matrix(ENNEPER, 0.0).max_abs() == 0.0


# ---------------------------------------------------------------------------
# the deformed matrix
# ---------------------------------------------------------------------------

def test_s_tilde_matches_entry_formulas(rng):
    for _ in range(50):
        x, y = rng.uniform(-3, 3, 2)
        t = C + rng.uniform(-2, 2)
        m = s_tilde(ENNEPER, complex(x, y), t, U0)
        g, d = gamma_delta_oracle(x, y, t)
        assert abs(m.alpha - g) <= 1e-13 * max(1.0, abs(g))
        assert abs(m.beta - d) <= 1e-13 * max(1.0, abs(d))


def test_s_tilde_origin():
    for t in (C - 1.0, C + 0.4):
        m = s_tilde(ENNEPER, 0.0, t, U0)
        assert m.alpha == 0.0
        assert m.beta == 1j * (C - t)
        assert m.det == (C - t) ** 2
    assert s_tilde(ENNEPER, 0.0, C, U0).det == 0.0


def test_degeneracy_only_at_blowup(rng):
    for _ in range(200):
        x, y = rng.uniform(-5, 5, 2)
        t = C + rng.uniform(-3, 3)
        if (x, y, t) == (0.0, 0.0, C):
            continue
        assert s_tilde(ENNEPER, complex(x, y), t, U0).det > 0.0


# ---------------------------------------------------------------------------
# transformation scalars: assembly vs closed forms
# ---------------------------------------------------------------------------

def test_scalars_at_origin():
    frame = moutard_frame(ENNEPER, 0.0, C - 1.0, U0)
    sc = moutard_scalars(frame)
    assert sc.b == 0.0
    assert sc.c == -1j
    assert abs(sc.a - 1j / (C - (C - 1.0))) <= 1e-15
    assert sc.W == 0.0


def test_assembly_matches_closed_scalars(rng):
    for _ in range(60):
        x, y = rng.uniform(-4, 4, 2)
        t = C + rng.uniform(-2, 2)
        frame = moutard_frame(ENNEPER, complex(x, y), t, U0)
        got = moutard_scalars(frame)
        want = enneper_scalars(complex(x, y), frame.s_tilde)
        assert abs(got.W - want.W) <= 1e-11
        assert abs(got.a - want.a) <= 1e-11
        assert abs(got.b - want.b) <= 1e-11
        assert abs(got.c - want.c) <= 1e-11


def test_scalars_errors():
    with pytest.raises(DegenerateMatrix):
        moutard_scalars(moutard_frame(ENNEPER, 0.0, C, U0))
    # frame matrix degenerates where both spinor components vanish
    pair = SpinorPair.from_coeffs([0.0, 1.0], [0.0, 1.0])
    frame = moutard_frame(pair, 0.0, 0.0, (0.0, 0.3, 0.0))
    with pytest.raises(SingularFrame):
        moutard_scalars(frame)


def test_w_reality(rng):
    for _ in range(100):
        x, y = rng.uniform(-5, 5, 2)
        t = C + rng.uniform(-3, 3)
        sc = moutard_scalars(moutard_frame(ENNEPER, complex(x, y), t, U0))
        assert abs(sc.w_imag) <= 1e-12


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def test_potential_u_examples():
    assert abs(potential_u(ENNEPER, 1.0, C, U0) - (-12.0 / 13.0)) <= 1e-15
    assert abs(potential_u(ENNEPER, 1j, C, U0) - (12.0 / 13.0)) <= 1e-15
    assert potential_u(ENNEPER, 0.0, C + 2.0, U0) == 0.0
    with pytest.raises(BlowUpPoint):
        potential_u(ENNEPER, 0.0, C, U0)


def test_potential_v_examples():
    for t in (C - 1.0, C + 0.5):
        v = potential_v(ENNEPER, 0.0, t, U0)
        assert abs(v - (-1.0 / (C - t) ** 2)) <= 1e-12 / (C - t) ** 2
    with pytest.raises(BlowUpPoint):
        potential_v(ENNEPER, 0.0, C, U0)


def test_potential_v_decay(rng):
    for t in (C - 1.0, C, C + 1.0):
        for r in (1e2, 1e4):
            phi = rng.uniform(0, 2 * np.pi)
            v = potential_v(ENNEPER, r * np.exp(1j * phi), t, U0)
            assert r * r * abs(v) <= 10.0


def test_closed_form_examples():
    u, q = enneper_closed_form(1.0, 0.0, C, C)
    assert u == -12.0 / 13.0 and q == 13.0
    u, q = enneper_closed_form(0.0, 0.0, C - 0.5, C)
    assert u == 0.0 and q == 9.0 * 0.25
    with pytest.raises(BlowUpPoint):
        enneper_closed_form(0.0, 0.0, C, C)


def test_closed_form_polar_identity(rng):
    for _ in range(200):
        r = rng.uniform(1e-3, 8.0)
        phi = rng.uniform(0.0, 2 * np.pi)
        u, _ = enneper_closed_form(r * np.cos(phi), r * np.sin(phi), C, C)
        assert abs(u - enneper_closed_form_polar(r, phi)) <= 1e-12


def test_pipeline_matches_closed_form(rng):
    worst = 0.0
    for _ in range(300):
        x, y = rng.uniform(-5, 5, 2)
        t = C + rng.uniform(-3, 3)
        got = potential_u(ENNEPER, complex(x, y), t, U0)
        want, _ = enneper_closed_form(x, y, t, C)
        worst = max(worst, abs(got - want))
    assert worst <= 1e-11


def test_far_field_limit():
    """r^2 U at the blow-up time approaches -3 cos(2 phi) like 1/r^2."""
    for r in (1e2, 1e3):
        for phi in np.linspace(0, 2 * np.pi, 12, endpoint=False):
            u, _ = enneper_closed_form(r * np.cos(phi), r * np.sin(phi), C, C)
            assert abs(r * r * u + 3.0 * np.cos(2 * phi)) <= 50.0 / (r * r)


def test_singular_limit_rate():
    for r in (0.1, 0.02):
        for phi in np.linspace(0, 2 * np.pi, 16, endpoint=False):
            u, _ = enneper_closed_form(r * np.cos(phi), r * np.sin(phi), C, C)
            assert abs(u + np.cos(2 * phi)) <= 2.0 * r * r


# ---------------------------------------------------------------------------
# consistency of the vectorized field route
# ---------------------------------------------------------------------------

def test_field_evaluator_routes_agree(rng):
    fast = FieldEvaluator(ENNEPER, C=C)
    generic = FieldEvaluator(ENNEPER, C=C, use_kernels=False)
    assert fast.is_fast_path and not generic.is_fast_path
    for _ in range(40):
        x, y = rng.uniform(-4, 4, 2)
        t = C + rng.uniform(-2, 2)
        uf, vf, df = fast.sample(x, y, t)
        ug, vg, dg = generic.sample(x, y, t)
        assert abs(uf - ug) <= 1e-12
        assert abs(vf - vg) <= 1e-12
        assert abs(df - dg) <= 1e-11 * max(1.0, df)
        assert abs(float(uf) - potential_u(ENNEPER, complex(x, y), t, U0)) <= 1e-12
        assert abs(complex(vf) - potential_v(ENNEPER, complex(x, y), t, U0)) <= 1e-12


def test_generic_seed_consistency(rng):
    ev = FieldEvaluator(CUBIC, C=0.0, u0=(0.0, 0.4, 0.1))
    for _ in range(20):
        x, y = rng.uniform(-1.5, 1.5, 2)
        t = rng.uniform(-0.6, 0.6)
        frame = moutard_frame(CUBIC, complex(x, y), t, (0.0, 0.4, 0.1))
        if frame.s_tilde.det < 1e-3:
            continue
        u, v, det = ev.sample(x, y, t)
        assert abs(float(u) - potential_u(CUBIC, complex(x, y), t, (0.0, 0.4, 0.1))) <= 1e-11
        assert abs(complex(v) - potential_v(CUBIC, complex(x, y), t, (0.0, 0.4, 0.1))) <= 1e-11
        assert abs(float(det) - frame.s_tilde.det) <= 1e-11 * max(1.0, frame.s_tilde.det)


# ---------------------------------------------------------------------------
# the one-form: closedness and primitives
# ---------------------------------------------------------------------------

def _rect_loop(p0, dx, dy):
    a = np.array(p0, dtype=float)
    return [a, a + dx, a + dx + dy, a + dy, a]


@pytest.mark.parametrize("pair", [ENNEPER, CUBIC])
def test_one_form_closed_loops(pair, rng):
    for _ in range(4):
        base = np.array([*rng.uniform(-1.5, 1.5, 2), rng.uniform(-0.5, 0.5)])
        spatial = _rect_loop(base, np.array([0.8, 0.0, 0.0]), np.array([0.0, -0.6, 0.0]))
        spacetime = _rect_loop(base, np.array([0.5, 0.2, 0.0]), np.array([0.0, 0.0, 0.7]))
        for loop in (spatial, spacetime):
            assert one_form_integral(pair, loop).max_abs() <= 1e-8


@pytest.mark.parametrize("pair", [ENNEPER, CUBIC])
def test_one_form_open_path(pair, rng):
    u0 = (0.0, 0.25, 0.0)
    for _ in range(4):
        z0 = complex(*rng.uniform(-1.5, 1.5, 2))
        z1 = complex(*rng.uniform(-1.5, 1.5, 2))
        t0, t1 = rng.uniform(-0.7, 0.7, 2)
        mid = np.array([z1.real, z0.imag, t0])
        path = [np.array([z0.real, z0.imag, t0]), mid, np.array([z1.real, z1.imag, t1])]
        got = one_form_integral(pair, path)
        want = s_tilde(pair, z1, t1, u0) - s_tilde(pair, z0, t0, u0)
        assert (got - want).max_abs() <= 1e-8


def test_one_form_segment_example():
    got = one_form_integral(ENNEPER, [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])
    want = s_tilde(ENNEPER, 1.0, 0.0, U0) - s_tilde(ENNEPER, 0.0, 0.0, U0)
    assert (got - want).max_abs() <= 1e-8


def test_one_form_single_point():
    res = one_form_integral(ENNEPER, [(0.3, -0.2, 0.1), (0.3, -0.2, 0.1)])
    assert res.max_abs() == 0.0


def test_one_form_zero_seed_branch_matches_default(rng):
    """Passing explicit zero potentials must reproduce the default branch."""
    path = [(0.0, 0.0, 0.0), (0.7, -0.3, 0.4)]
    a = one_form_integral(CUBIC, path)
    b = one_form_integral(CUBIC, path, seed_u=lambda x, y, t: 0.0,
                          seed_v=lambda x, y, t: 0.0)
    assert (a - b).max_abs() <= 1e-12


# ---------------------------------------------------------------------------
# symmetries forced by the construction
# ---------------------------------------------------------------------------

def test_even_in_y(rng):
    for _ in range(50):
        x, y = rng.uniform(-4, 4, 2)
        t = C + rng.uniform(-2, 2)
        up = potential_u(ENNEPER, complex(x, y), t, U0)
        um = potential_u(ENNEPER, complex(x, -y), t, U0)
        assert abs(up - um) <= 1e-14


def test_joint_time_translation(rng):
    for _ in range(30):
        x, y = rng.uniform(-4, 4, 2)
        t = C + rng.uniform(-2, 2)
        s = rng.uniform(-3, 3)
        ev1 = FieldEvaluator(ENNEPER, C=C)
        ev2 = FieldEvaluator(ENNEPER, C=C + s)
        u1, v1, d1 = ev1.sample(x, y, t)
        u2, v2, d2 = ev2.sample(x, y, t + s)
        assert abs(u1 - u2) <= 1e-14
        assert abs(v1 - v2) <= 1e-13
        assert abs(d1 - d2) <= 1e-13 * max(1.0, d1)


def test_general_seed_satisfies_evolution_equation():
    """Spot check that the construction transforms any admissible seed into
    a solution: finite-difference residual at truncation level."""
    from mnvlab.verify import SpaceTimePoint, Stencil, mnv_residual

    ev = FieldEvaluator(CUBIC, C=0.0, u0=(0.0, 0.3, 0.1))
    for (x, y, t) in [(0.9, -0.4, 0.3), (-0.7, 0.6, -0.2)]:
        assert ev.det(x, y, t) > 0.3
        res = mnv_residual(ev, SpaceTimePoint(x, y, t), Stencil(1e-3, 1e-4))
        assert res <= 1e-3
