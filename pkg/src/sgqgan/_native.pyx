# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric hot kernels.

Contract-identical to sgqgan._purepy; selected by sgqgan.kernels when built.
The fused SPSA loops release the GIL.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, fabs, floor, sqrt

from .errors import ZeroVector

cnp.import_array()

cdef double NORM_FLOOR = 1e-12
cdef double TWO_PI = 2.0 * M_PI


cdef inline double _wrap1(double x) nogil:
    cdef double y = (x + M_PI) - TWO_PI * floor((x + M_PI) / TWO_PI) - M_PI
    if y == -M_PI:
        y = M_PI
    return y


cdef double _norm(const double complex[::1] v) nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(v.shape[0]):
        acc += v[i].real * v[i].real + v[i].imag * v[i].imag
    return sqrt(acc)


cdef int _canonicalize(double complex[::1] v) nogil:
    """Normalize in place and fix the gauge. Returns 0, or 1 on zero norm."""
    cdef double norm = _norm(v)
    cdef Py_ssize_t i, idx = -1
    cdef double complex pivot, phase
    cdef double mag
    if norm <= NORM_FLOOR:
        return 1
    for i in range(v.shape[0]):
        v[i] = v[i] / norm
        if idx < 0:
            mag = sqrt(v[i].real * v[i].real + v[i].imag * v[i].imag)
            if mag > NORM_FLOOR:
                idx = i
                pivot = v[i]
    phase = pivot.conjugate() / sqrt(pivot.real * pivot.real + pivot.imag * pivot.imag)
    for i in range(v.shape[0]):
        v[i] = v[i] * phase
    return 0


def canonical_normalize(amps):
    """Return a unit-norm copy with the first significant entry real >= 0."""
    cdef cnp.ndarray out = np.array(amps, dtype=np.complex128).reshape(-1)
    cdef double complex[::1] v = out
    if _canonicalize(v):
        raise ZeroVector(f"vector norm <= {NORM_FLOOR:.0e}")
    return out


cdef double _overlap_abs2(const double complex[::1] a, const double complex[::1] b) nogil:
    cdef Py_ssize_t i
    cdef double complex inner = 0.0
    cdef double value
    for i in range(a.shape[0]):
        inner = inner + a[i].conjugate() * b[i]
    value = inner.real * inner.real + inner.imag * inner.imag
    if value < 0.0:
        value = 0.0
    elif value > 1.0:
        value = 1.0
    return value


def overlap_abs2(a, b):
    """|<a|b>|^2 for complex vectors, clamped into [0, 1]."""
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    return _overlap_abs2(av, bv)


def multiphase_prob(weights, psi, phi, double sigma, double tau):
    """P(tau) = sum_k w_k/2 * (1 - cos(psi_k - phi_k) * exp(-sigma^2 tau^2))."""
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] p = np.ascontiguousarray(psi, dtype=np.float64)
    cdef const double[::1] q = np.ascontiguousarray(phi, dtype=np.float64)
    cdef double damp = np.exp(-(sigma * sigma) * (tau * tau))
    cdef Py_ssize_t j
    cdef double total = 0.0
    for j in range(w.shape[0]):
        total += 0.5 * w[j] * (1.0 - cos(p[j] - q[j]) * damp)
    return total


def phase_accuracy(psi, phi):
    """Mean cosine similarity of two phase vectors, mapped onto [0, 1]."""
    cdef const double[::1] p = np.ascontiguousarray(psi, dtype=np.float64)
    cdef const double[::1] q = np.ascontiguousarray(phi, dtype=np.float64)
    cdef Py_ssize_t j
    cdef double total = 0.0
    for j in range(p.shape[0]):
        total += (1.0 + cos(p[j] - q[j])) / 2.0
    return total / p.shape[0]


def wrap_phases(x):
    """Wrap angles into (-pi, pi]."""
    if np.ndim(x) == 0:
        return np.float64(_wrap1(float(x)))
    cdef cnp.ndarray out = np.array(x, dtype=np.float64).reshape(-1)
    cdef double[::1] v = out
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        v[i] = _wrap1(v[i])
    return out


def spsa_phase_run(weights, psi, phi0, directions, alphas, betas):
    """Analytic SPSA ascent over a real phase vector (objective 1 - P(0))."""
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] target = np.ascontiguousarray(psi, dtype=np.float64)
    cdef cnp.ndarray phi_arr = np.array(phi0, dtype=np.float64).reshape(-1)
    cdef double[::1] phi = phi_arr
    cdef const double[:, ::1] dirs = np.ascontiguousarray(directions, dtype=np.float64)
    cdef const double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] be = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t iterations = dirs.shape[0], n = target.shape[0]
    cdef cnp.ndarray acc_arr = np.empty(iterations)
    cdef cnp.ndarray fp_arr = np.empty(iterations)
    cdef cnp.ndarray fm_arr = np.empty(iterations)
    cdef double[::1] acc = acc_arr, fp = fp_arr, fm = fm_arr
    cdef Py_ssize_t k, j
    cdef double pp, pm, step, gain, total
    with nogil:
        for k in range(iterations):
            pp = 0.0
            pm = 0.0
            for j in range(n):
                step = be[k] * dirs[k, j]
                pp += 0.5 * w[j] * (1.0 - cos(target[j] - (phi[j] + step)))
                pm += 0.5 * w[j] * (1.0 - cos(target[j] - (phi[j] - step)))
            fp[k] = 1.0 - pp
            fm[k] = 1.0 - pm
            gain = (fp[k] - fm[k]) / (2.0 * be[k]) * al[k]
            total = 0.0
            for j in range(n):
                phi[j] = _wrap1(phi[j] + gain * dirs[k, j])
                total += (1.0 + cos(target[j] - phi[j])) / 2.0
            acc[k] = total / n
    return phi_arr, acc_arr, fp_arr, fm_arr


def spsa_amp_run(target, initial, directions, alphas, betas):
    """Analytic SPSA ascent over complex amplitudes (objective |<phi|psi>|^2)."""
    cdef const double complex[::1] tgt = np.ascontiguousarray(target, dtype=np.complex128)
    cdef cnp.ndarray phi_arr = np.array(initial, dtype=np.complex128).reshape(-1)
    cdef double complex[::1] phi = phi_arr
    cdef const double complex[:, ::1] dirs = np.ascontiguousarray(directions, dtype=np.complex128)
    cdef const double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] be = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t iterations = dirs.shape[0], d = tgt.shape[0]
    cdef cnp.ndarray fid_arr = np.empty(iterations)
    cdef cnp.ndarray fp_arr = np.empty(iterations)
    cdef cnp.ndarray fm_arr = np.empty(iterations)
    cdef double[::1] fid = fid_arr, fp = fp_arr, fm = fm_arr
    cdef cnp.ndarray work_arr = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] work = work_arr
    cdef Py_ssize_t k, j
    cdef double gain
    cdef int status = 0
    with nogil:
        if _canonicalize(phi):
            status = 1
        else:
            for k in range(iterations):
                for j in range(d):
                    work[j] = phi[j] + be[k] * dirs[k, j]
                if _canonicalize(work):
                    status = 1
                    break
                fp[k] = _overlap_abs2(work, tgt)
                for j in range(d):
                    work[j] = phi[j] - be[k] * dirs[k, j]
                if _canonicalize(work):
                    status = 1
                    break
                fm[k] = _overlap_abs2(work, tgt)
                gain = (fp[k] - fm[k]) / (2.0 * be[k]) * al[k]
                for j in range(d):
                    phi[j] = phi[j] + gain * dirs[k, j]
                if _canonicalize(phi):
                    status = 1
                    break
                fid[k] = sqrt(_overlap_abs2(phi, tgt))
    if status:
        raise ZeroVector(f"vector norm <= {NORM_FLOOR:.0e}")
    return phi_arr, fid_arr, fp_arr, fm_arr
