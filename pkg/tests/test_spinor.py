import numpy as np
import pytest

from mnvlab.spinor import (ENNEPER, HoloPoly, SpinorPair, poly_derivative,
                           spinor_eval, spinor_evolve)


def test_degree_cap():
    HoloPoly(np.ones(17))  # degree 16 is allowed
    with pytest.raises(ValueError):
        HoloPoly(np.ones(18))


def test_trailing_zeros_trimmed():
    p = HoloPoly([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    assert HoloPoly([0.0, 0.0]).is_zero


def test_zero_pair_rejected():
    with pytest.raises(ValueError):
        SpinorPair.from_coeffs([0.0], [0.0])


def test_poly_derivative_examples():
    assert poly_derivative(HoloPoly([0.0, 1.0])).coeffs.tolist() == [1.0]
    d3 = poly_derivative(HoloPoly([0.0, 0.0, 0.0, 1.0]), 3)
    assert d3.coeffs.tolist() == [6.0]
    # z^4 + 24 t z at fixed t: second derivative is 12 z^2
    t = 0.37
    p = HoloPoly([0.0, 24.0 * t, 0.0, 0.0, 1.0])
    assert np.allclose(poly_derivative(p, 2).coeffs, [0.0, 0.0, 12.0])


def test_low_degree_evolution_is_identity():
    s = spinor_evolve(ENNEPER, 5.0)
    assert s.p.coeffs_equal(ENNEPER.p) and s.q.coeffs_equal(ENNEPER.q)
    quad = SpinorPair.from_coeffs([1.0, 2.0j, -0.5], [0.25, 1.0])
    evolved = spinor_evolve(quad, -3.2)
    assert evolved.p.coeffs_equal(quad.p) and evolved.q.coeffs_equal(quad.q)


def test_cubic_and_quartic_evolution():
    s = SpinorPair.from_coeffs([0.0, 0.0, 0.0, 1.0], [1.0])
    t = 1.7
    st = spinor_evolve(s, t)
    assert np.allclose(st.p.coeffs, [6.0 * t, 0.0, 0.0, 1.0])
    s4 = SpinorPair.from_coeffs([0.0, 0.0, 0.0, 0.0, 1.0], [1.0])
    st4 = spinor_evolve(s4, t)
    assert np.allclose(st4.p.coeffs, [0.0, 24.0 * t, 0.0, 0.0, 1.0])


def test_evolution_semigroup(rng):
    coeffs = rng.normal(size=8) + 1j * rng.normal(size=8)
    s = SpinorPair.from_coeffs(coeffs, [1.0, 0.5j, 0.0, 1.0])
    a, b = 0.83, -1.41
    left = spinor_evolve(spinor_evolve(s, a), b)
    right = spinor_evolve(s, a + b)
    assert np.max(np.abs(left.p.coeffs - right.p.coeffs)) <= 1e-14 * np.max(np.abs(right.p.coeffs))
    assert np.max(np.abs(left.q.coeffs - right.q.coeffs)) <= 1e-14 * np.max(np.abs(right.q.coeffs))


def test_evolution_satisfies_flow_equation(rng):
    """Central differences in t converge at second order to p'''."""
    coeffs = np.zeros(13, dtype=complex)
    coeffs[[0, 3, 7, 12]] = [0.4, -1.0, 0.9j, 1.0]
    p = HoloPoly(coeffs)
    z = 0.6 - 0.3j
    t = 0.21
    exact = p.evolve(t).derivative(3)(z)
    errs = []
    for h in (1e-3, 5e-4):
        fd = (p.evolve(t + h)(z) - p.evolve(t - h)(z)) / (2.0 * h)
        errs.append(abs(fd - exact))
    ratio = errs[0] / errs[1]
    assert 3.5 <= ratio <= 4.5
    assert errs[0] <= 1e-4 * max(1.0, abs(exact))


def test_spinor_eval_examples():
    psi1, psi2 = spinor_eval(ENNEPER, 1 + 1j, t=4.0)
    assert psi1 == 1 + 1j and psi2 == 1.0
    cubic = SpinorPair.from_coeffs([0.0, 0.0, 0.0, 1.0], [1.0])
    psi1, psi2 = spinor_eval(cubic, 0.0, t=2.0)
    assert psi1 == 12.0 and psi2 == 1.0


def test_psi2_is_conjugated():
    s = SpinorPair.from_coeffs([1.0], [0.0, 1j])  # q(z) = i z
    _, psi2 = spinor_eval(s, 2.0 + 1.0j)
    assert psi2 == np.conjugate(1j * (2.0 + 1.0j))
