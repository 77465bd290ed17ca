"""Divisor-link tracing on the sphere by predictor-corrector continuation.

Each component of {P=0} (and {Q=0}) intersected with the radius-r sphere is
a smooth closed curve when r clears the divisor distance and the critical
radii. Random seeds are projected onto the curve by Gauss-Newton, then each
unvisited start is continued along the curve tangent until it returns to
its starting point.
"""

from __future__ import annotations

import numpy as np

from .. import _kernels as kernels
from .config import SolverConfig
from .ops import (
    critical_radii_ex,
    divisor_min_norm_ex,
    require_squarefree,
    validate_radius,
)
from .types import LinkTrace
from . import systems

STEP_FACTOR = 0.015
MAX_TRACE_STEPS = 20000
_CAP = 1e3


def _curve_system(pack, base, r, x):
    """Rows (Re f, Im f, |x|^2 - r^2) and the 3x4 Jacobian at each row of x."""
    exps, coeffs, offs = pack
    z = x[:, 0] + 1j * x[:, 1]
    w = x[:, 2] + 1j * x[:, 3]
    f = kernels.eval_slot(exps, coeffs, offs, base, z, w)
    fz = kernels.eval_slot(exps, coeffs, offs, base + 1, z, w)
    fw = kernels.eval_slot(exps, coeffs, offs, base + 2, z, w)
    n = x.shape[0]
    res = np.empty((n, 3))
    res[:, 0] = f.real
    res[:, 1] = f.imag
    res[:, 2] = (x * x).sum(axis=1) - r * r
    jac = np.empty((n, 3, 4))
    jac[:, 0, 0] = fz.real
    jac[:, 0, 1] = -fz.imag
    jac[:, 0, 2] = fw.real
    jac[:, 0, 3] = -fw.imag
    jac[:, 1, 0] = fz.imag
    jac[:, 1, 1] = fz.real
    jac[:, 1, 2] = fw.imag
    jac[:, 1, 3] = fw.real
    jac[:, 2, :] = 2.0 * x
    return res, jac


def _project(pack, base, r, x0, tol, maxit):
    """Gauss-Newton projection onto the curve (minimum-norm steps)."""
    x = np.array(x0, dtype=float)
    for _ in range(maxit):
        res, jac = _curve_system(pack, base, r, x)
        norms = np.linalg.norm(res, axis=1)
        if (norms < tol).all():
            break
        jjt = jac @ jac.transpose(0, 2, 1)
        try:
            s = np.linalg.solve(jjt, res[..., None])[..., 0]
        except np.linalg.LinAlgError:
            s = np.empty_like(res)
            for i in range(len(res)):
                try:
                    s[i] = np.linalg.solve(jjt[i], res[i])
                except np.linalg.LinAlgError:
                    s[i] = np.linalg.lstsq(jjt[i], res[i], rcond=None)[0]
        delta = (jac.transpose(0, 2, 1) @ s[..., None])[..., 0]
        dn = np.linalg.norm(delta, axis=1)
        big = dn > _CAP
        if big.any():
            delta[big] *= (_CAP / dn[big])[:, None]
        x = x - delta
        bad = ~np.isfinite(x).all(axis=1)
        if bad.any():
            x[bad] = 0.0
    res, _ = _curve_system(pack, base, r, x)
    return x, np.linalg.norm(res, axis=1) < tol


def _tangent(pack, base, r, x):
    """Unit tangent of the curve at x: the null direction of the Jacobian."""
    _, jac = _curve_system(pack, base, r, x[None, :])
    _, _, vt = np.linalg.svd(jac[0])
    return vt[-1]


def _fix_sign(v):
    k = int(np.argmax(np.abs(v)))
    return v if v[k] > 0 else -v


def _near_any_loop(point, loops, tol):
    for loop in loops:
        if np.linalg.norm(loop - point, axis=1).min() < tol:
            return True
    return False


def _loops_touch(a, b, tol):
    for row in a:
        if np.linalg.norm(b - row, axis=1).min() < tol:
            return True
    return False


def _trace_loop(pack, base, r, start, step, cfg):
    x = start.copy()
    samples = [x.copy()]
    tan = _fix_sign(_tangent(pack, base, r, x))
    steps = 0
    while steps < MAX_TRACE_STEPS:
        pred = x + step * tan
        cor, ok = _project(pack, base, r, pred[None, :], cfg.newton_tol, 30)
        if not ok[0]:
            return np.array(samples), False
        x = cor[0]
        new_tan = _tangent(pack, base, r, x)
        if float(new_tan @ tan) < 0.0:
            new_tan = -new_tan
        tan = new_tan
        samples.append(x.copy())
        steps += 1
        if steps >= 5 and np.linalg.norm(x - start) < step:
            samples.append(start.copy())
            return np.array(samples), True
    return np.array(samples), False


def trace_link(F, r, cfg=None, assume_squarefree=False):
    """Count and sample the closed curves of the divisor on the sphere."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, _ = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    radii, _ = critical_radii_ex(F, cfg, assume_squarefree=True)
    validate_radius(r, m, radii)
    pack = systems.build_pack(F)
    rng = np.random.default_rng(cfg.rng_seed)
    step = STEP_FACTOR * r
    loops = []
    incomplete = False
    for base, poly in ((0, F.num), (6, F.den)):
        if poly.is_constant():
            continue
        seeds = systems.sphere_seeds(rng, cfg.seed_count, r)
        proj, conv = _project(
            pack, base, r, seeds, cfg.newton_tol, cfg.max_newton_iters
        )
        starts = proj[conv]
        if not len(starts):
            continue
        order = np.lexsort(
            (starts[:, 3], starts[:, 2], starts[:, 1], starts[:, 0])
        )
        for start in starts[order]:
            if _near_any_loop(start, loops, 0.5 * step):
                continue
            loop, closed = _trace_loop(pack, base, r, start, step, cfg)
            if any(_loops_touch(loop, known, 0.5 * step) for known in loops):
                continue
            loops.append(loop)
            if not closed:
                incomplete = True
    loops.sort(key=lambda loop: min(map(tuple, loop)))
    return LinkTrace(
        components=len(loops), loops=tuple(loops), incomplete=incomplete
    )
