"""Morse classification of critical points and degenerate-circle fitting."""

from __future__ import annotations

import numpy as np

from .. import _kernels as kernels
from ..errors import PoleError, PreconditionError
from ..poly import EVAL_ZERO_TOL
from .config import SolverConfig
from .types import DegenerateCircle
from . import systems


class _DivisorHit(Exception):
    pass


def dependence_residual(pack, x4, r):
    """Best dependence factor and residual of the cleared system at a point.

    The first four residual rows are affine in t, so the minimizing t is a
    one-dimensional least-squares solution; the sphere row is t-independent.
    """
    x0 = np.array([[x4[0], x4[1], x4[2], x4[3], 0.0]])
    x1 = np.array([[x4[0], x4[1], x4[2], x4[3], 1.0]])
    f0, _ = kernels.dependence_system(pack, r, x0)
    f1, _ = kernels.dependence_system(pack, r, x1)
    v = f0[0, :4]
    u = v - f1[0, :4]
    uu = float(u @ u)
    t = float(v @ u) / uu if uu > 0 else 0.0
    rows = v - t * u
    sphere = float(f0[0, 4])
    return t, float(np.sqrt(rows @ rows + sphere * sphere))


def _tangent_basis(x4):
    """Deterministic orthonormal basis of the sphere tangent space at x4."""
    normal = x4 / np.linalg.norm(x4)
    order = np.argsort(np.abs(normal), kind="stable")
    vecs = [normal]
    for k in order[:3]:
        axis = np.zeros(4)
        axis[k] = 1.0
        vecs.append(axis)
    basis = []
    for v in vecs:
        for b in basis:
            v = v - (v @ b) * b
        basis.append(v / np.linalg.norm(v))
    return np.array(basis[1:])


def _value(F, y):
    z = complex(y[0], y[1])
    w = complex(y[2], y[3])
    p = complex(F.num.eval(z, w))
    q = complex(F.den.eval(z, w))
    p_tol = EVAL_ZERO_TOL * max(1e-300, F.num.max_coeff_magnitude())
    q_tol = EVAL_ZERO_TOL * max(1e-300, F.den.max_coeff_magnitude())
    if abs(p) <= p_tol or abs(q) <= q_tol:
        raise _DivisorHit()
    return p / q


def _hessian_once(F, x4, r, basis, delta):
    ref = _value(F, x4)
    refc = ref.conjugate() / abs(ref)

    def h(s):
        y = x4 + basis.T @ s
        y = y * (r / np.linalg.norm(y))
        return float(np.angle(_value(F, y) * refc))

    hess = np.empty((3, 3))
    for i in range(3):
        step = np.zeros(3)
        step[i] = delta
        hess[i, i] = (h(step) + h(-step)) / delta**2
    for i in range(3):
        for j in range(i + 1, 3):
            si = np.zeros(3)
            sj = np.zeros(3)
            si[i] = delta
            sj[j] = delta
            val = (
                h(si + sj) - h(si - sj) - h(-si + sj) + h(-si - sj)
            ) / (4.0 * delta**2)
            hess[i, j] = val
            hess[j, i] = val
    return hess


def _angle_hessian(F, x4, r, basis):
    delta = 1e-4 * r
    for _ in range(7):
        try:
            return _hessian_once(F, x4, r, basis, delta)
        except _DivisorHit:
            delta *= 0.5
    raise PoleError(
        "Milnor map hits the divisor within the classifier stencil"
    )


def classify_with_pack(F, pack, z, w, r, cfg):
    x4 = np.array([z.real, z.imag, w.real, w.imag])
    _, residual = dependence_residual(pack, x4, r)
    if residual >= 1e-8:
        raise PreconditionError(
            f"point is not critical: dependence residual {residual:.3g}"
            " is not below 1e-08"
        )
    basis = _tangent_basis(x4)
    hess = _angle_hessian(F, x4, r, basis)
    eigs = tuple(float(e) for e in np.linalg.eigvalsh(hess))
    amax = max(abs(e) for e in eigs)
    amin = min(abs(e) for e in eigs)
    degenerate = amax == 0.0 or amin < cfg.degeneracy_rel_tol * amax
    index = None if degenerate else sum(1 for e in eigs if e < 0)
    return index, degenerate, eigs


def classify_critical_point(F, p, r, cfg=None):
    """Morse data (index, degenerate flag, Hessian eigenvalues) at a point.

    The point must satisfy the dependence system for some real factor to
    residual below 1e-8; the index is the number of negative eigenvalues of
    the central-difference Hessian of the local angle function, and None
    when the spectrum is degenerate at the configured relative tolerance.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    pack = systems.build_pack(F)
    z, w = complex(p[0]), complex(p[1])
    return classify_with_pack(F, pack, z, w, r, cfg)


def _single_linkage(points, threshold):
    """Single-linkage clusters (index lists) at the given merge distance."""
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        if i + 1 < n:
            dists = np.linalg.norm(points[i + 1:] - points[i], axis=1)
            for off in np.nonzero(dists <= threshold)[0]:
                ra, rb = find(i), find(i + 1 + int(off))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def _fit_circle(pts):
    """Least-squares circle through points in R^4.

    Fits the best plane by SVD, then a 2-d algebraic circle in that plane.
    Returns (center4, radius, rms residual, plane basis) or None.
    """
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    _, _, vt = np.linalg.svd(rel, full_matrices=True)
    u, v = vt[0], vt[1]
    xi = rel @ u
    eta = rel @ v
    design = np.column_stack([2.0 * xi, 2.0 * eta, np.ones(len(pts))])
    rhs = xi**2 + eta**2
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    a, b, c = (float(s) for s in sol)
    rad2 = c + a * a + b * b
    if rad2 <= 0.0:
        return None
    radius = float(np.sqrt(rad2))
    center4 = centroid + a * u + b * v
    rel_c = pts - center4
    in_x = rel_c @ u
    in_y = rel_c @ v
    radial_dev = np.sqrt(in_x**2 + in_y**2) - radius
    off = rel_c - np.outer(in_x, u) - np.outer(in_y, v)
    off_norm = np.linalg.norm(off, axis=1)
    residual = float(np.sqrt(np.mean(radial_dev**2 + off_norm**2)))
    return center4, radius, residual, (u.copy(), v.copy())


def _distance_to_circle(q4, center4, radius, basis):
    u, v = basis
    rel = q4 - center4
    in_x = float(rel @ u)
    in_y = float(rel @ v)
    off2 = max(float(rel @ rel) - in_x * in_x - in_y * in_y, 0.0)
    radial = np.hypot(in_x, in_y) - radius
    return float(np.sqrt(radial * radial + off2))


def fit_degenerate_circles(points, r, cfg):
    """Circles fitted through clusters of degenerate critical points.

    Clusters within 0.2r seed the fits; a fitted circle then absorbs every
    remaining degenerate point lying on it, so sparsely sampled circles are
    not reported as separate arcs. A circle qualifies with at least 8
    distinct members and rms residual below 1e-4 times the sphere radius.
    """
    degs = [p for p in points if p.degenerate]
    if not degs:
        return []
    arr = np.array([[p.z.real, p.z.imag, p.w.real, p.w.imag] for p in degs])
    clusters = _single_linkage(arr, 0.2 * r)
    clusters.sort(key=lambda members: (-len(members), members[0]))
    unused = np.ones(len(arr), dtype=bool)
    absorb_tol = 1e-3 * r
    circles = []
    for members in clusters:
        members = [i for i in members if unused[i]]
        if len(members) < 8:
            continue
        fit = _fit_circle(arr[members])
        if fit is None:
            continue
        center4, radius, residual, basis = fit
        if residual >= 1e-4 * r:
            continue
        extra = [
            i
            for i in range(len(arr))
            if unused[i]
            and i not in members
            and _distance_to_circle(arr[i], center4, radius, basis)
            < absorb_tol
        ]
        if extra:
            members = sorted(members + extra)
            fit = _fit_circle(arr[members])
            if fit is None:
                continue
            center4, radius, residual, basis = fit
            if residual >= 1e-4 * r:
                continue
        for i in members:
            unused[i] = False
        circles.append(
            DegenerateCircle(
                center_z=complex(center4[0], center4[1]),
                center_w=complex(center4[2], center4[3]),
                radius=radius,
                residual=residual,
                point_count=len(members),
                basis=basis,
            )
        )
    circles.sort(
        key=lambda c: (
            c.center_z.real,
            c.center_z.imag,
            c.center_w.real,
            c.center_w.imag,
        )
    )
    return circles


def circle_distance(q4, circle):
    """Euclidean distance from a point in R^4 to a fitted circle."""
    center4 = np.array(
        [
            circle.center_z.real,
            circle.center_z.imag,
            circle.center_w.real,
            circle.center_w.imag,
        ]
    )
    return _distance_to_circle(q4, center4, circle.radius, circle.basis)
