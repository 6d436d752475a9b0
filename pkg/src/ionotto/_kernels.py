"""Hot numeric kernels: cyclic Jacobi diagonalization and ramp propagators.

Two implementations of each kernel live here. The loop versions run the
cyclic row-by-row Jacobi order and are compiled by numba's nopython mode;
the ``*_numpy`` versions use the parallel (round-robin) ordering, where each
round of disjoint rotations is a single matrix product, and need nothing
beyond numpy. Both converge to the same tolerance.

Set ``IONOTTO_NO_JIT=1`` in the environment to force the numpy path. It is
also used automatically when numba cannot be imported.
"""
import os

import numpy as np

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# off-diagonal magnitudes below this are treated as zero (keeps clear of subnormals)
TINY = 1e-280

_DISABLED = os.environ.get("IONOTTO_NO_JIT", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by IONOTTO_NO_JIT")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _rotation(app, aqq, apq):
    # Returns (c, s, phase) zeroing apq; phase is apq/|apq|.
    mag = abs(apq)
    phase = apq.real / mag + 1j * (apq.imag / mag)
    theta = (aqq - app) / (2.0 * mag)
    if theta >= 0.0:
        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c, phase


def _jacobi_loops(a, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = np.sqrt(fro)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) <= tol * fro:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= TINY:
                    continue
                c, s, phase = _rotation(a[p, p].real, a[q, q].real, apq)
                cph = np.conj(phase)
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * cph * aiq
                    a[i, q] = s * aip + c * cph * aiq
                for j in range(n):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = c * apj - s * phase * aqj
                    a[q, j] = s * apj + c * phase * aqj
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * cph * viq
                    v[i, q] = s * vip + c * cph * viq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order], sweeps


def _expi_loops(h, t, tol, max_sweeps):
    w, v, _ = _jacobi_loops(h, tol, max_sweeps)
    n = h.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        ph = np.exp(-1j * w[k] * t)
        for i in range(n):
            vik = v[i, k] * ph
            for j in range(n):
                out[i, j] += vik * np.conj(v[j, k])
    return out


def _ramp_loops(h0, zdiag, b_start, b_end, tau, steps, tol, max_sweeps):
    n = h0.shape[0]
    u = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        u[i, i] = 1.0
    h = np.empty((n, n), dtype=np.complex128)
    tmp = np.empty((n, n), dtype=np.complex128)
    dt = tau / steps
    for m in range(steps):
        b = b_start + (b_end - b_start) * (m + 0.5) / steps
        for i in range(n):
            for j in range(n):
                h[i, j] = h0[i, j]
            h[i, i] += b * zdiag[i]
        step = _expi_loops(h, dt, tol, max_sweeps)
        for i in range(n):
            for j in range(n):
                acc = 0.0j
                for k in range(n):
                    acc += step[i, k] * u[k, j]
                tmp[i, j] = acc
        for i in range(n):
            for j in range(n):
                u[i, j] = tmp[i, j]
    return u


def _round_robin(n):
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        rounds.append((np.array([a for a, _ in pairs], dtype=int),
                       np.array([b for _, b in pairs], dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh_numpy(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Parallel-order Jacobi: each round applies all disjoint rotations as one product.

    Returns ``(values, vectors, sweeps)`` with values ascending.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = np.linalg.norm(a)
    offmask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n) if n > 1 else []
    sweeps = 0
    while sweeps < max_sweeps:
        if np.sqrt(np.sum(np.abs(a[offmask]) ** 2)) <= tol * fro:
            break
        sweeps += 1
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            live = mag > TINY
            if not live.any():
                continue
            p, q, apq, mag = p[live], q[live], apq[live], mag[live]
            phase = apq.real / mag + 1j * (apq.imag / mag)
            theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            g = np.eye(n, dtype=np.complex128)
            g[p, p] = c
            g[p, q] = s
            g[q, p] = -s * np.conj(phase)
            g[q, q] = c * np.conj(phase)
            a = g.conj().T @ a @ g
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ g
        a = 0.5 * (a + a.conj().T)
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order], sweeps


def expi_numpy(h, t, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    w, v, _ = jacobi_eigh_numpy(h, tol, max_sweeps)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def ramp_propagator_numpy(h0, zdiag, b_start, b_end, tau, steps,
                          tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    h0 = np.asarray(h0, dtype=np.complex128)
    zdiag = np.asarray(zdiag, dtype=np.float64)
    u = np.eye(h0.shape[0], dtype=np.complex128)
    dt = tau / steps
    for m in range(steps):
        b = b_start + (b_end - b_start) * (m + 0.5) / steps
        h = h0 + np.diag(b * zdiag)
        u = expi_numpy(h, dt, tol, max_sweeps) @ u
    return u


if HAVE_NUMBA:
    # rebinding the module globals lets the jitted kernels call each other
    _rotation = njit(cache=True)(_rotation)
    _jacobi_loops = njit(cache=True)(_jacobi_loops)
    _expi_loops = njit(cache=True)(_expi_loops)
    _ramp_loops = njit(cache=True)(_ramp_loops)

    def jacobi_eigh_jit(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
        return _jacobi_loops(np.ascontiguousarray(a, dtype=np.complex128), tol, max_sweeps)

    def ramp_propagator_jit(h0, zdiag, b_start, b_end, tau, steps,
                            tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
        return _ramp_loops(np.ascontiguousarray(h0, dtype=np.complex128),
                         np.ascontiguousarray(zdiag, dtype=np.float64),
                         float(b_start), float(b_end), float(tau), int(steps),
                         tol, max_sweeps)

    jacobi_eigh = jacobi_eigh_jit
    ramp_propagator = ramp_propagator_jit
else:
    jacobi_eigh_jit = ramp_propagator_jit = None
    jacobi_eigh = jacobi_eigh_numpy
    ramp_propagator = ramp_propagator_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
