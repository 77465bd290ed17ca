# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled numerical kernels.

Per-seed mirror of fallback.py: same residual systems and the same
iteration policy (freeze on convergence, kill on blowup, capped steps),
written as scalar loops that release the GIL. Linear solves use
partial-pivot Gaussian elimination with a damped retry when a pivot
vanishes.
"""

import numpy as np

from libc.math cimport fabs, isfinite, sqrt

BACKEND = "native"

ctypedef double complex cplx

cdef cplx I_UNIT = 1j
cdef double STEP_CAP = 1e3
cdef double BLOWUP = 1e9


def eval_slot(exps, coeffs, offs, slot, z, w):
    from . import fallback
    return fallback.eval_slot(exps, coeffs, offs, slot, z, w)


cdef inline double _cabs(cplx v) nogil:
    return sqrt(v.real * v.real + v.imag * v.imag)


cdef void _eval_slots(int[:, ::1] e, cplx[::1] co, int[::1] o,
                      int base, int nslots, int amax,
                      cplx z, cplx w, cplx* out) nogil:
    cdef cplx zp[65]
    cdef cplx wp[65]
    cdef int i, k, s
    zp[0] = 1.0
    wp[0] = 1.0
    for i in range(1, amax + 1):
        zp[i] = zp[i - 1] * z
        wp[i] = wp[i - 1] * w
    for s in range(nslots):
        out[s] = 0.0
        for k in range(o[base + s], o[base + s + 1]):
            out[s] = out[s] + co[k] * zp[e[k, 0]] * wp[e[k, 1]]


cdef inline void _crow(double* J, int n, int row,
                       cplx vz, cplx vzb, cplx vw, cplx vwb) nogil:
    cdef cplx dx1 = vz + vzb
    cdef cplx dy1 = I_UNIT * (vz - vzb)
    cdef cplx dx2 = vw + vwb
    cdef cplx dy2 = I_UNIT * (vw - vwb)
    J[row * n + 0] = dx1.real
    J[row * n + 1] = dy1.real
    J[row * n + 2] = dx2.real
    J[row * n + 3] = dy2.real
    J[(row + 1) * n + 0] = dx1.imag
    J[(row + 1) * n + 1] = dy1.imag
    J[(row + 1) * n + 2] = dx2.imag
    J[(row + 1) * n + 3] = dy2.imag


cdef void _dep_sys(int[:, ::1] e, cplx[::1] co, int[::1] o, int amax,
                   double r, double* x, double* F, double* J) nogil:
    cdef cplx v[12]
    cdef cplx z = x[0] + I_UNIT * x[1]
    cdef cplx w = x[2] + I_UNIT * x[3]
    cdef double t = x[4]
    _eval_slots(e, co, o, 0, 12, amax, z, w, v)
    cdef cplx P = v[0], Pz = v[1], Pw = v[2], Pzz = v[3], Pzw = v[4], Pww = v[5]
    cdef cplx Q = v[6], Qz = v[7], Qw = v[8], Qzz = v[9], Qzw = v[10], Qww = v[11]

    cdef cplx c = (P * Q).conjugate()
    cdef cplx G1 = Pz * Q - P * Qz
    cdef cplx G2 = Pw * Q - P * Qw
    cdef cplx G1z = Pzz * Q - P * Qzz
    cdef cplx G1w = Pzw * Q + Pz * Qw - Pw * Qz - P * Qzw
    cdef cplx G2z = Pzw * Q + Pw * Qz - Pz * Qw - P * Qzw
    cdef cplx G2w = Pww * Q - P * Qww
    cdef cplx czb = (Pz * Q + P * Qz).conjugate()
    cdef cplx cwb = (Pw * Q + P * Qw).conjugate()
    cdef cplx Qc = Q.conjugate()
    cdef double S = (Q * Qc).real * (Q * Qc).real
    cdef cplx Sz = 2.0 * Q * Qz * Qc * Qc
    cdef cplx Sw = 2.0 * Q * Qw * Qc * Qc
    cdef cplx Szb = Sz.conjugate()
    cdef cplx Swb = Sw.conjugate()
    cdef cplx zb = z.conjugate()
    cdef cplx wb = w.conjugate()

    cdef cplx A = -I_UNIT * c * G1 - t * S * zb
    cdef cplx B = -I_UNIT * c * G2 - t * S * wb
    F[0] = A.real
    F[1] = A.imag
    F[2] = B.real
    F[3] = B.imag
    F[4] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - r * r

    cdef cplx Az = -I_UNIT * c * G1z - t * Sz * zb
    cdef cplx Azb = -I_UNIT * czb * G1 - t * Szb * zb - t * S
    cdef cplx Aw = -I_UNIT * c * G1w - t * Sw * zb
    cdef cplx Awb = -I_UNIT * cwb * G1 - t * Swb * zb
    cdef cplx At = -S * zb
    _crow(J, 5, 0, Az, Azb, Aw, Awb)
    J[0 * 5 + 4] = At.real
    J[1 * 5 + 4] = At.imag

    cdef cplx Bz = -I_UNIT * c * G2z - t * Sz * wb
    cdef cplx Bzb = -I_UNIT * czb * G2 - t * Szb * wb
    cdef cplx Bw = -I_UNIT * c * G2w - t * Sw * wb
    cdef cplx Bwb = -I_UNIT * cwb * G2 - t * Swb * wb - t * S
    cdef cplx Bt = -S * wb
    _crow(J, 5, 2, Bz, Bzb, Bw, Bwb)
    J[2 * 5 + 4] = Bt.real
    J[3 * 5 + 4] = Bt.imag

    J[4 * 5 + 0] = 2.0 * x[0]
    J[4 * 5 + 1] = 2.0 * x[1]
    J[4 * 5 + 2] = 2.0 * x[2]
    J[4 * 5 + 3] = 2.0 * x[3]
    J[4 * 5 + 4] = 0.0


cdef void _tang_sys(int[:, ::1] e, cplx[::1] co, int[::1] o, int amax,
                    int base, double* x, double* F, double* J) nogil:
    cdef cplx v[6]
    cdef cplx z = x[0] + I_UNIT * x[1]
    cdef cplx w = x[2] + I_UNIT * x[3]
    _eval_slots(e, co, o, base, 6, amax, z, w, v)
    cdef cplx f = v[0], fz = v[1], fw = v[2], fzz = v[3], fzw = v[4], fww = v[5]
    cdef cplx zb = z.conjugate()
    cdef cplx wb = w.conjugate()
    cdef cplx T = zb * fw - wb * fz
    cdef cplx zero = 0.0
    F[0] = f.real
    F[1] = f.imag
    F[2] = T.real
    F[3] = T.imag
    _crow(J, 4, 0, fz, zero, fw, zero)
    _crow(J, 4, 2, zb * fzw - wb * fzz, fw, zb * fww - wb * fzw, -fz)


cdef void _common_sys(int[:, ::1] e, cplx[::1] co, int[::1] o, int amax,
                      double* x, double* F, double* J) nogil:
    cdef cplx v[6]
    cdef cplx z = x[0] + I_UNIT * x[1]
    cdef cplx w = x[2] + I_UNIT * x[3]
    _eval_slots(e, co, o, 0, 3, amax, z, w, v)
    _eval_slots(e, co, o, 6, 3, amax, z, w, v + 3)
    cdef cplx P = v[0], Pz = v[1], Pw = v[2]
    cdef cplx Q = v[3], Qz = v[4], Qw = v[5]
    cdef cplx zero = 0.0
    F[0] = P.real
    F[1] = P.imag
    F[2] = Q.real
    F[3] = Q.imag
    _crow(J, 4, 0, Pz, zero, Pw, zero)
    _crow(J, 4, 2, Qz, zero, Qw, zero)


cdef void _assemble(int kind, int[:, ::1] e, cplx[::1] co, int[::1] o, int amax,
                    double r, double* x, double* F, double* J) nogil:
    if kind == 0:
        _dep_sys(e, co, o, amax, r, x, F, J)
    elif kind == 1:
        _tang_sys(e, co, o, amax, 0, x, F, J)
    elif kind == 2:
        _tang_sys(e, co, o, amax, 6, x, F, J)
    else:
        _common_sys(e, co, o, amax, x, F, J)


cdef int _solve_inplace(double* A, double* b, int n) nogil:
    cdef int i, j, k, piv
    cdef double amax, tmp, f
    for k in range(n):
        piv = k
        amax = fabs(A[k * n + k])
        for i in range(k + 1, n):
            if fabs(A[i * n + k]) > amax:
                amax = fabs(A[i * n + k])
                piv = i
        if amax < 1e-300:
            return 1
        if piv != k:
            for j in range(n):
                tmp = A[k * n + j]
                A[k * n + j] = A[piv * n + j]
                A[piv * n + j] = tmp
            tmp = b[k]
            b[k] = b[piv]
            b[piv] = tmp
        for i in range(k + 1, n):
            f = A[i * n + k] / A[k * n + k]
            if f != 0.0:
                for j in range(k + 1, n):
                    A[i * n + j] -= f * A[k * n + j]
                b[i] -= f * b[k]
    for k in range(n - 1, -1, -1):
        tmp = b[k]
        for j in range(k + 1, n):
            tmp -= A[k * n + j] * b[j]
        b[k] = tmp / A[k * n + k]
    return 0


cdef void _newton_seed(int kind, int[:, ::1] e, cplx[::1] co, int[::1] o,
                       int amax, double r, int dim, double* x,
                       double* res_out, unsigned char* conv_out,
                       double tol, int maxit) nogil:
    cdef double F[5]
    cdef double J[25]
    cdef double A[25]
    cdef double b[5]
    cdef double rn, dn, lam, amx
    cdef int it, i, ok, attempt
    conv_out[0] = 0
    lam = 0.0
    for it in range(maxit):
        _assemble(kind, e, co, o, amax, r, x, F, J)
        rn = 0.0
        for i in range(dim):
            rn += F[i] * F[i]
        rn = sqrt(rn)
        res_out[0] = rn
        if rn < tol:
            conv_out[0] = 1
            return
        ok = 0
        for attempt in range(4):
            for i in range(dim * dim):
                A[i] = J[i]
            for i in range(dim):
                b[i] = F[i]
            if attempt == 1:
                amx = 0.0
                for i in range(dim * dim):
                    if fabs(J[i]) > amx:
                        amx = fabs(J[i])
                lam = 1e-10 * (1.0 + amx)
            elif attempt > 1:
                lam *= 1e3
            if attempt > 0:
                for i in range(dim):
                    A[i * dim + i] += lam
            if _solve_inplace(A, b, dim) == 0:
                ok = 1
                break
        if ok == 0:
            return
        dn = 0.0
        for i in range(dim):
            dn += b[i] * b[i]
        dn = sqrt(dn)
        if dn > STEP_CAP:
            for i in range(dim):
                b[i] *= STEP_CAP / dn
        for i in range(dim):
            x[i] -= b[i]
        for i in range(dim):
            if (not isfinite(x[i])) or fabs(x[i]) > BLOWUP:
                return
    _assemble(kind, e, co, o, amax, r, x, F, J)
    rn = 0.0
    for i in range(dim):
        rn += F[i] * F[i]
    rn = sqrt(rn)
    res_out[0] = rn
    if rn < tol:
        conv_out[0] = 1


def _pack_arrays(pack):
    exps, coeffs, offs = pack
    e_arr = np.ascontiguousarray(exps, dtype=np.int32)
    c_arr = np.ascontiguousarray(coeffs, dtype=np.complex128)
    o_arr = np.ascontiguousarray(offs, dtype=np.int32)
    if e_arr.ndim != 2 or e_arr.shape[1] != 2:
        raise ValueError("exponent table must have shape (M, 2)")
    if e_arr.shape[0] and int(e_arr.max()) > 64:
        raise ValueError("exponent exceeds supported range")
    return e_arr, c_arr, o_arr


def _run(int kind, pack, double r, x0, double tol, int maxit, int dim):
    e_arr, c_arr, o_arr = _pack_arrays(pack)
    cdef int amax = 0
    if e_arr.shape[0]:
        amax = int(e_arr.max())
    x = np.array(x0, dtype=np.float64, order="C")
    if x.ndim != 2 or x.shape[1] != dim:
        raise ValueError("seed array must have shape (N, %d)" % dim)
    cdef Py_ssize_t n = x.shape[0]
    res = np.full(n, np.inf)
    conv = np.zeros(n, dtype=np.uint8)
    cdef int[:, ::1] ev = e_arr
    cdef cplx[::1] cv = c_arr
    cdef int[::1] ov = o_arr
    cdef double[:, ::1] xv = x
    cdef double[::1] rv = res
    cdef unsigned char[::1] qv = conv
    cdef Py_ssize_t s
    with nogil:
        for s in range(n):
            _newton_seed(kind, ev, cv, ov, amax, r, dim,
                         &xv[s, 0], &rv[s], &qv[s], tol, maxit)
    return x, res, conv.astype(bool)


def newton_dependence(pack, double r, x0, double tol, int maxit):
    return _run(0, pack, r, x0, tol, maxit, 5)


def newton_tangency(pack, int base, x0, double tol, int maxit):
    if base == 0:
        kind = 1
    elif base == 6:
        kind = 2
    else:
        raise ValueError("base must be 0 or 6")
    return _run(kind, pack, 0.0, x0, tol, maxit, 4)


def newton_common_zero(pack, x0, double tol, int maxit):
    return _run(3, pack, 0.0, x0, tol, maxit, 4)


def oracle_residual(pack, z, w, double guard):
    e_arr, c_arr, o_arr = _pack_arrays(pack)
    cdef int amax = 0
    if e_arr.shape[0]:
        amax = int(e_arr.max())
    za, wa = np.broadcast_arrays(
        np.asarray(z, dtype=np.complex128), np.asarray(w, dtype=np.complex128)
    )
    shape = za.shape
    za = np.ascontiguousarray(za.ravel())
    wa = np.ascontiguousarray(wa.ravel())
    out = np.empty(za.shape[0])
    cdef int[:, ::1] ev = e_arr
    cdef cplx[::1] cv = c_arr
    cdef int[::1] ov = o_arr
    cdef cplx[::1] zv = za
    cdef cplx[::1] wv = wa
    cdef double[::1] rv = out
    cdef Py_ssize_t i, n = za.shape[0]
    cdef cplx v[6]
    cdef cplx zi, wi, G1, G2, denom, b1, b2, a1, a2, r1, r2
    cdef double aa, tstar, bn, rho
    with nogil:
        for i in range(n):
            zi = zv[i]
            wi = wv[i]
            _eval_slots(ev, cv, ov, 0, 3, amax, zi, wi, v)
            _eval_slots(ev, cv, ov, 6, 3, amax, zi, wi, v + 3)
            if _cabs(v[0]) < guard or _cabs(v[3]) < guard:
                rv[i] = 2.0
                continue
            G1 = v[1] * v[3] - v[0] * v[4]
            G2 = v[2] * v[3] - v[0] * v[5]
            denom = I_UNIT * v[0] * v[3]
            b1 = G1 / denom
            b2 = G2 / denom
            a1 = zi.conjugate()
            a2 = wi.conjugate()
            aa = _cabs(a1) * _cabs(a1) + _cabs(a2) * _cabs(a2)
            if aa == 0.0:
                rv[i] = 2.0
                continue
            tstar = (b1 * a1.conjugate() + b2 * a2.conjugate()).real / aa
            r1 = b1 - tstar * a1
            r2 = b2 - tstar * a2
            bn = sqrt(_cabs(b1) * _cabs(b1) + _cabs(b2) * _cabs(b2))
            rho = sqrt(_cabs(r1) * _cabs(r1) + _cabs(r2) * _cabs(r2)) / (1.0 + bn)
            if not isfinite(rho):
                rho = 2.0
            rv[i] = rho
    return out.reshape(shape)
