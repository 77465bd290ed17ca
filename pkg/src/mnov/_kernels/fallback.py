"""Numpy implementation of the numerical kernels.

This is the reference backend; the compiled backend in native.pyx mirrors
the same per-seed semantics. A "pack" is the flattened term table of one or
two polynomials and their Wirtinger derivatives:

    exps   int32 (M, 2)     exponent pairs
    coeffs complex128 (M,)  matching coefficients
    offs   int32 (k+1,)     slot boundaries

Slot layout for a rational map F = P/Q (12 slots):
    0..5  P, Pz, Pw, Pzz, Pzw, Pww
    6..11 Q, Qz, Qw, Qzz, Qzw, Qww
A single-polynomial pack uses slots 0..5 only.
"""

from __future__ import annotations

import numpy as np

BACKEND = "fallback"

_STEP_CAP = 1e3
_BLOWUP = 1e9


def eval_slot(exps, coeffs, offs, slot, z, w):
    """Evaluate one packed polynomial at complex arrays z, w."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    acc = np.zeros(np.broadcast(z, w).shape, dtype=np.complex128)
    for idx in range(int(offs[slot]), int(offs[slot + 1])):
        a, b = int(exps[idx, 0]), int(exps[idx, 1])
        acc += coeffs[idx] * z**a * w**b
    return acc


def _eval_slots(pack, slots, z, w):
    exps, coeffs, offs = pack
    return [eval_slot(exps, coeffs, offs, s, z, w) for s in slots]


def _complex_rows(jac, row, vz, vzb, vw, vwb, vt=None):
    """Fill the two real rows of jac for a complex residual with the given
    Wirtinger derivatives (d/dx = Vz+Vzb, d/dy = i(Vz-Vzb))."""
    dx1 = vz + vzb
    dy1 = 1j * (vz - vzb)
    dx2 = vw + vwb
    dy2 = 1j * (vw - vwb)
    jac[:, row, 0] = dx1.real
    jac[:, row, 1] = dy1.real
    jac[:, row, 2] = dx2.real
    jac[:, row, 3] = dy2.real
    jac[:, row + 1, 0] = dx1.imag
    jac[:, row + 1, 1] = dy1.imag
    jac[:, row + 1, 2] = dx2.imag
    jac[:, row + 1, 3] = dy2.imag
    if vt is not None:
        jac[:, row, 4] = vt.real
        jac[:, row + 1, 4] = vt.imag


def dependence_system(pack, r, x):
    """Residual and Jacobian of the cleared dependence system.

    Unknowns x = (Re z, Im z, Re w, Im w, t). Residual rows:
    Re A, Im A, Re B, Im B, |z|^2+|w|^2-r^2 with
    A = -i*conj(PQ)*G1 - t*|Q|^4*conj(z), B likewise with G2 and conj(w),
    G = (Pz*Q - P*Qz, Pw*Q - P*Qw).
    """
    x = np.asarray(x, dtype=float)
    z = x[:, 0] + 1j * x[:, 1]
    w = x[:, 2] + 1j * x[:, 3]
    t = x[:, 4]
    (P, Pz, Pw, Pzz, Pzw, Pww, Q, Qz, Qw, Qzz, Qzw, Qww) = _eval_slots(
        pack, range(12), z, w
    )
    c = np.conj(P * Q)
    G1 = Pz * Q - P * Qz
    G2 = Pw * Q - P * Qw
    G1z = Pzz * Q - P * Qzz
    G1w = Pzw * Q + Pz * Qw - Pw * Qz - P * Qzw
    G2z = Pzw * Q + Pw * Qz - Pz * Qw - P * Qzw
    G2w = Pww * Q - P * Qww
    czb = np.conj(Pz * Q + P * Qz)
    cwb = np.conj(Pw * Q + P * Qw)
    Qc = np.conj(Q)
    S = (Q * Qc).real ** 2
    Sz = 2.0 * Q * Qz * Qc**2
    Sw = 2.0 * Q * Qw * Qc**2
    Szb = np.conj(Sz)
    Swb = np.conj(Sw)
    zb = np.conj(z)
    wb = np.conj(w)

    A = -1j * c * G1 - t * S * zb
    B = -1j * c * G2 - t * S * wb

    n = x.shape[0]
    res = np.empty((n, 5))
    res[:, 0] = A.real
    res[:, 1] = A.imag
    res[:, 2] = B.real
    res[:, 3] = B.imag
    res[:, 4] = x[:, 0] ** 2 + x[:, 1] ** 2 + x[:, 2] ** 2 + x[:, 3] ** 2 - r * r

    jac = np.zeros((n, 5, 5))
    Az = -1j * c * G1z - t * Sz * zb
    Azb = -1j * czb * G1 - t * Szb * zb - t * S
    Aw = -1j * c * G1w - t * Sw * zb
    Awb = -1j * cwb * G1 - t * Swb * zb
    At = -S * zb
    _complex_rows(jac, 0, Az, Azb, Aw, Awb, At)
    Bz = -1j * c * G2z - t * Sz * wb
    Bzb = -1j * czb * G2 - t * Szb * wb
    Bw = -1j * c * G2w - t * Sw * wb
    Bwb = -1j * cwb * G2 - t * Swb * wb - t * S
    Bt = -S * wb
    _complex_rows(jac, 2, Bz, Bzb, Bw, Bwb, Bt)
    jac[:, 4, 0] = 2.0 * x[:, 0]
    jac[:, 4, 1] = 2.0 * x[:, 1]
    jac[:, 4, 2] = 2.0 * x[:, 2]
    jac[:, 4, 3] = 2.0 * x[:, 3]
    return res, jac


def tangency_system(pack, base, x):
    """Residual and Jacobian of the sphere-tangency system for one polynomial.

    Unknowns x = (Re z, Im z, Re w, Im w). Rows: Re f, Im f, Re T, Im T with
    T = conj(z)*fw - conj(w)*fz.
    """
    x = np.asarray(x, dtype=float)
    z = x[:, 0] + 1j * x[:, 1]
    w = x[:, 2] + 1j * x[:, 3]
    f, fz, fw, fzz, fzw, fww = _eval_slots(
        pack, range(base, base + 6), z, w
    )
    zb = np.conj(z)
    wb = np.conj(w)
    T = zb * fw - wb * fz

    n = x.shape[0]
    res = np.empty((n, 4))
    res[:, 0] = f.real
    res[:, 1] = f.imag
    res[:, 2] = T.real
    res[:, 3] = T.imag

    jac = np.zeros((n, 4, 4))
    zero = np.zeros_like(f)
    _complex_rows(jac, 0, fz, zero, fw, zero)
    Tz = zb * fzw - wb * fzz
    Tw = zb * fww - wb * fzw
    Tzb = fw
    Twb = -fz
    _complex_rows(jac, 2, Tz, Tzb, Tw, Twb)
    return res, jac


def common_zero_system(pack, x):
    """Residual and Jacobian of {P = 0, Q = 0} in real coordinates."""
    x = np.asarray(x, dtype=float)
    z = x[:, 0] + 1j * x[:, 1]
    w = x[:, 2] + 1j * x[:, 3]
    P, Pz, Pw = _eval_slots(pack, (0, 1, 2), z, w)
    Q, Qz, Qw = _eval_slots(pack, (6, 7, 8), z, w)

    n = x.shape[0]
    res = np.empty((n, 4))
    res[:, 0] = P.real
    res[:, 1] = P.imag
    res[:, 2] = Q.real
    res[:, 3] = Q.imag

    jac = np.zeros((n, 4, 4))
    zero = np.zeros_like(P)
    _complex_rows(jac, 0, Pz, zero, Pw, zero)
    _complex_rows(jac, 2, Qz, zero, Qw, zero)
    return res, jac


def _newton(system, x0, tol, maxit):
    """Damped Newton iteration over a batch of seeds.

    Each row iterates independently: rows are frozen once their residual
    norm drops below tol, killed if they blow up. Returns (x, residual,
    converged). Results do not depend on how the batch is split.
    """
    x = np.array(x0, dtype=float)
    n = x.shape[0]
    res = np.full(n, np.inf)
    conv = np.zeros(n, dtype=bool)
    alive = np.ones(n, dtype=bool)
    for _ in range(maxit):
        act = alive & ~conv
        if not act.any():
            break
        idx = np.where(act)[0]
        F, J = system(x[idx])
        rn = np.linalg.norm(F, axis=1)
        res[idx] = rn
        hit = rn < tol
        conv[idx[hit]] = True
        go = ~hit
        if not go.any():
            continue
        Fg, Jg, ig = F[go], J[go], idx[go]
        try:
            delta = np.linalg.solve(Jg, Fg[..., None])[..., 0]
        except np.linalg.LinAlgError:
            delta = np.empty_like(Fg)
            for m in range(len(ig)):
                try:
                    delta[m] = np.linalg.solve(Jg[m], Fg[m])
                except np.linalg.LinAlgError:
                    delta[m] = np.linalg.lstsq(Jg[m], Fg[m], rcond=None)[0]
        dn = np.linalg.norm(delta, axis=1)
        big = dn > _STEP_CAP
        if big.any():
            delta[big] *= (_STEP_CAP / dn[big])[:, None]
        x[ig] -= delta
        bad = ~np.isfinite(x[ig]).all(axis=1)
        bad |= np.abs(x[ig]).max(axis=1) > _BLOWUP
        if bad.any():
            alive[ig[bad]] = False
    act = alive & ~conv
    if act.any():
        idx = np.where(act)[0]
        F, _ = system(x[idx])
        rn = np.linalg.norm(F, axis=1)
        res[idx] = rn
        conv[idx] = rn < tol
    return x, res, conv


def newton_dependence(pack, r, x0, tol, maxit):
    return _newton(lambda x: dependence_system(pack, r, x), x0, tol, maxit)


def newton_tangency(pack, base, x0, tol, maxit):
    return _newton(lambda x: tangency_system(pack, base, x), x0, tol, maxit)


def newton_common_zero(pack, x0, tol, maxit):
    return _newton(lambda x: common_zero_system(pack, x), x0, tol, maxit)


def oracle_residual(pack, z, w, guard):
    """Normalized distance of b = grad F / (i F) from the real line through
    (conj z, conj w); the quantity the grid oracle scans."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    P, Pz, Pw = _eval_slots(pack, (0, 1, 2), z, w)
    Q, Qz, Qw = _eval_slots(pack, (6, 7, 8), z, w)
    G1 = Pz * Q - P * Qz
    G2 = Pw * Q - P * Qw
    denom = 1j * P * Q
    with np.errstate(divide="ignore", invalid="ignore"):
        b1 = G1 / denom
        b2 = G2 / denom
        a1 = np.conj(z)
        a2 = np.conj(w)
        aa = np.abs(a1) ** 2 + np.abs(a2) ** 2
        tstar = (b1 * np.conj(a1) + b2 * np.conj(a2)).real / aa
        r1 = b1 - tstar * a1
        r2 = b2 - tstar * a2
        bn = np.sqrt(np.abs(b1) ** 2 + np.abs(b2) ** 2)
        rho = np.sqrt(np.abs(r1) ** 2 + np.abs(r2) ** 2) / (1.0 + bn)
    bad = (np.abs(P) < guard) | (np.abs(Q) < guard) | ~np.isfinite(rho)
    rho = np.where(bad, 2.0, rho)
    return rho
