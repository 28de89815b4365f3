"""Hot numeric kernels for the first-order-pair fields.

Grid sampling, the plane quadrature and the degeneracy scans all reduce to
evaluating a handful of rational expressions at large batches of points;
these inner loops are JIT-compiled with numba when it is available.  Set

    MNVLAB_DISABLE_NUMBA=1

to force the pure-numpy fallback (same expressions, vectorized).  The two
backends are compared by tests/test_kernels.py and timed against each other
by benchmarks/bench_kernels.py.

All kernels take flat float64 coordinate arrays plus the scalar dt = C - t
and return flat arrays; at the blow-up point the division yields nan, which
callers treat as the degenerate marker.
"""

import os

import numpy as np

_flag = os.environ.get("MNVLAB_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _flag not in ("1", "true", "yes", "on")

if NUMBA_REQUESTED:
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False

#: Selected backend, "numba" or "numpy".
BACKEND = "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _enneper_u_q_numpy(x, y, dt):
    x2 = x * x
    y2 = y * y
    r2 = x2 + y2
    q = (r2 * r2 * r2 + 3.0 * (x2 * x2 + y2 * y2) + 18.0 * x2 * y2
         + 9.0 * r2 + 9.0 * dt * dt + (6.0 * x2 * x - 18.0 * x * y2 - 18.0 * x) * dt)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = -3.0 * ((r2 + 3.0) * (x2 - y2) - 6.0 * x * dt) / q
    return u, q


def _enneper_fields_numpy(x, y, dt):
    x2 = x * x
    y2 = y * y
    zz = x2 + y2
    z = x + 1j * y
    g = 1j * (x2 - y2)
    d = -y * (y2 / 3.0 - x2 - 1.0) - 1j * (x * (1.0 + y2 - x2 / 3.0) - dt)
    det = (g * np.conj(g)).real + (d * np.conj(d)).real
    with np.errstate(divide="ignore", invalid="ignore"):
        n = zz * np.conj(g) + g + d * z - np.conj(d) * np.conj(z)
        u = n.imag / det
        a = (z * (np.conj(g) - g) - d * z * z - np.conj(d)) / det
        b = -1j * z / (1.0 + zz)
        c = -1j / (1.0 + zz)
        v = a * a + 2.0 * (a * np.conj(b) - 1j * np.conj(c) * u)
    return u, v, det


def _enneper_det_numpy(x, y, dt):
    x2 = x * x
    y2 = y * y
    dre = -y * (y2 / 3.0 - x2 - 1.0)
    dim = -(x * (1.0 + y2 - x2 / 3.0) - dt)
    return (x2 - y2) * (x2 - y2) + dre * dre + dim * dim


# ---------------------------------------------------------------------------
# numba implementations (same arithmetic, explicit loops)
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True, error_model="numpy")
    def _enneper_u_q_jit(x, y, dt):
        n = x.shape[0]
        u = np.empty(n)
        q = np.empty(n)
        for i in range(n):
            xi = x[i]
            yi = y[i]
            x2 = xi * xi
            y2 = yi * yi
            r2 = x2 + y2
            qi = (r2 * r2 * r2 + 3.0 * (x2 * x2 + y2 * y2) + 18.0 * x2 * y2
                  + 9.0 * r2 + 9.0 * dt * dt
                  + (6.0 * x2 * xi - 18.0 * xi * y2 - 18.0 * xi) * dt)
            u[i] = -3.0 * ((r2 + 3.0) * (x2 - y2) - 6.0 * xi * dt) / qi
            q[i] = qi
        return u, q

    @njit(cache=True, error_model="numpy")
    def _enneper_fields_jit(x, y, dt):
        n = x.shape[0]
        u = np.empty(n)
        v = np.empty(n, np.complex128)
        det = np.empty(n)
        for i in range(n):
            xi = x[i]
            yi = y[i]
            x2 = xi * xi
            y2 = yi * yi
            zz = x2 + y2
            z = complex(xi, yi)
            g = 1j * (x2 - y2)
            d = complex(-yi * (y2 / 3.0 - x2 - 1.0),
                        -(xi * (1.0 + y2 - x2 / 3.0) - dt))
            di = (g * np.conj(g)).real + (d * np.conj(d)).real
            nn = zz * np.conj(g) + g + d * z - np.conj(d) * np.conj(z)
            ui = nn.imag / di
            a = (z * (np.conj(g) - g) - d * z * z - np.conj(d)) / di
            b = -1j * z / (1.0 + zz)
            c = -1j / (1.0 + zz)
            u[i] = ui
            v[i] = a * a + 2.0 * (a * np.conj(b) - 1j * np.conj(c) * ui)
            det[i] = di
        return u, v, det

    @njit(cache=True, error_model="numpy")
    def _enneper_det_jit(x, y, dt):
        n = x.shape[0]
        out = np.empty(n)
        for i in range(n):
            xi = x[i]
            yi = y[i]
            x2 = xi * xi
            y2 = yi * yi
            dre = -yi * (y2 / 3.0 - x2 - 1.0)
            dim = -(xi * (1.0 + y2 - x2 / 3.0) - dt)
            out[i] = (x2 - y2) * (x2 - y2) + dre * dre + dim * dim
        return out

    _u_q_impl = _enneper_u_q_jit
    _fields_impl = _enneper_fields_jit
    _det_impl = _enneper_det_jit
else:
    _u_q_impl = _enneper_u_q_numpy
    _fields_impl = _enneper_fields_numpy
    _det_impl = _enneper_det_numpy


# ---------------------------------------------------------------------------
# shape-preserving wrappers
# ---------------------------------------------------------------------------

def _flatten(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    return x.reshape(-1).astype(float, copy=False), y.reshape(-1), x.shape


def enneper_u_q(x, y, dt):
    """(U, Q) of the rational closed form at dt = C - t."""
    xf, yf, shape = _flatten(x, y)
    u, q = _u_q_impl(np.ascontiguousarray(xf), np.ascontiguousarray(yf), float(dt))
    return u.reshape(shape), q.reshape(shape)


def enneper_fields(x, y, dt):
    """(U, V, det) via the deformed-matrix route specialized to the
    first-order pair with base offset (0, -C, 0)."""
    xf, yf, shape = _flatten(x, y)
    u, v, det = _fields_impl(np.ascontiguousarray(xf), np.ascontiguousarray(yf), float(dt))
    return u.reshape(shape), v.reshape(shape), det.reshape(shape)


def enneper_det(x, y, dt):
    """Determinant of the deformed matrix (degeneracy scan helper)."""
    xf, yf, shape = _flatten(x, y)
    det = _det_impl(np.ascontiguousarray(xf), np.ascontiguousarray(yf), float(dt))
    return det.reshape(shape)
