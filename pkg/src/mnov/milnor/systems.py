"""Packed polynomial tables, random seeds, and threaded kernel wrappers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import _kernels as kernels


def _jet(poly):
    dz = poly.dz()
    dw = poly.dw()
    return [poly, dz, dw, dz.dz(), dz.dw(), dw.dw()]


def build_pack(F):
    """Flatten numerator and denominator jets into the 12-slot kernel pack."""
    polys = _jet(F.num) + _jet(F.den)
    exps, coeffs, offs = [], [], [0]
    for p in polys:
        for (a, b), c in sorted(p.terms.items()):
            exps.append((a, b))
            coeffs.append(complex(c))
        offs.append(len(exps))
    exp_arr = (
        np.array(exps, dtype=np.int32)
        if exps
        else np.zeros((0, 2), dtype=np.int32)
    )
    return (
        exp_arr.reshape(-1, 2),
        np.array(coeffs, dtype=np.complex128),
        np.array(offs, dtype=np.int32),
    )


def eval_pair(pack, z, w):
    """Numerator and denominator values at complex points."""
    exps, coeffs, offs = pack
    num = kernels.eval_slot(exps, coeffs, offs, 0, z, w)
    den = kernels.eval_slot(exps, coeffs, offs, 6, z, w)
    return num, den


def sphere_seeds(rng, count, radius):
    """Uniform points on the radius-r sphere via normalized 4-d Gaussians."""
    g = rng.normal(size=(count, 4))
    norm = np.linalg.norm(g, axis=1, keepdims=True)
    norm[norm == 0.0] = 1.0
    return g * (radius / norm)


def ball_seeds(rng, count, radius=4.0):
    """Uniform points in the radius-4 ball (volume-weighted radii)."""
    g = rng.normal(size=(count, 4))
    norm = np.linalg.norm(g, axis=1, keepdims=True)
    norm[norm == 0.0] = 1.0
    u = rng.uniform(size=(count, 1)) ** 0.25
    return g * (radius * u / norm)


def dependence_seeds(rng, count, radius):
    """Sphere seeds with the dependence factor drawn uniform in [-10, 10]."""
    x = np.empty((count, 5))
    x[:, :4] = sphere_seeds(rng, count, radius)
    x[:, 4] = rng.uniform(-10.0, 10.0, size=count)
    return x


def _thread_count(cfg):
    if cfg.threads is not None:
        return cfg.threads
    return os.cpu_count() or 1


def _chunk_bounds(n, workers):
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _run_chunked(fn, x0, cfg):
    """Run a batched Newton kernel over seed chunks on a thread pool.

    Every seed iterates independently, so splitting the batch and
    reassembling in input order returns exactly the single-call result.
    """
    n = x0.shape[0]
    workers = min(_thread_count(cfg), max(1, n // 32))
    if workers <= 1:
        return fn(x0)
    chunks = _chunk_bounds(n, workers)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda ab: fn(x0[ab[0]:ab[1]]), chunks))
    return (
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
    )


def run_dependence(pack, r, x0, cfg):
    return _run_chunked(
        lambda c: kernels.newton_dependence(
            pack, r, c, cfg.newton_tol, cfg.max_newton_iters
        ),
        x0,
        cfg,
    )


def run_tangency(pack, base, x0, cfg):
    return _run_chunked(
        lambda c: kernels.newton_tangency(
            pack, base, c, cfg.newton_tol, cfg.max_newton_iters
        ),
        x0,
        cfg,
    )


def run_common_zero(pack, x0, cfg):
    return _run_chunked(
        lambda c: kernels.newton_common_zero(
            pack, c, cfg.newton_tol, cfg.max_newton_iters
        ),
        x0,
        cfg,
    )


def grid_residuals(pack, z, w, guard, cfg):
    """Oracle residuals over flat coordinate arrays, chunked across threads."""
    n = z.shape[0]
    workers = min(_thread_count(cfg), max(1, n // 4096))
    if workers <= 1:
        return kernels.oracle_residual(pack, z, w, guard)
    chunks = _chunk_bounds(n, workers)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(
            pool.map(
                lambda ab: kernels.oracle_residual(
                    pack, z[ab[0]:ab[1]], w[ab[0]:ab[1]], guard
                ),
                chunks,
            )
        )
    return np.concatenate(parts)


def point_residual(pack, z, w, guard):
    """Oracle residual at a single complex point."""
    out = kernels.oracle_residual(
        pack, np.array([z], dtype=complex), np.array([w], dtype=complex), guard
    )
    return float(out[0])
