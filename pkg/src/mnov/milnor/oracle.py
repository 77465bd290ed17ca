"""Brute-force completeness check for the critical-point search.

Scans a Hopf-coordinate grid on the sphere, finds local minima of the
normalized dependence residual, polishes each with Nelder-Mead, keeps
refined minima below 1e-2, and clusters them. Every real critical point or
degenerate circle should own one cluster within ten cell diameters.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from ..errors import InvalidRadiusError
from .classify import _single_linkage
from .config import DIVISOR_GUARD, SolverConfig
from .ops import divisor_min_norm_ex, require_squarefree
from .types import OracleCluster
from . import systems

RESIDUAL_THRESHOLD = 1e-2
PRESCREEN_THRESHOLD = 0.5


def cell_diameter(r, cfg):
    return r * 2.0 * np.pi / cfg.grid_resolution


def _hopf_point(r, v):
    z = r * np.cos(v[0]) * np.exp(1j * v[1])
    w = r * np.sin(v[0]) * np.exp(1j * v[2])
    return z, w


def _local_minima(rho):
    """Strict 6-neighbor local minima; angles wrap, the polar index clamps."""
    up = np.empty_like(rho)
    up[1:] = rho[:-1]
    up[0] = np.inf
    down = np.empty_like(rho)
    down[:-1] = rho[1:]
    down[-1] = np.inf
    mask = (rho < up) & (rho < down)
    for axis in (1, 2):
        mask &= rho < np.roll(rho, 1, axis=axis)
        mask &= rho < np.roll(rho, -1, axis=axis)
    return mask


def _grid_coords(r, n):
    """Cell-centered polar angles, equatorial phases, and the point grids."""
    eta = (np.arange(n) + 0.5) * (0.5 * np.pi / n)
    xi = np.arange(n) * (2.0 * np.pi / n)
    phase = np.exp(1j * xi)
    z_grid = np.broadcast_to(
        (r * np.cos(eta))[:, None, None] * phase[None, :, None], (n, n, n)
    )
    w_grid = np.broadcast_to(
        (r * np.sin(eta))[:, None, None] * phase[None, None, :], (n, n, n)
    )
    return eta, xi, z_grid, w_grid


def _grid_rho(pack, r, cfg):
    n = cfg.grid_resolution
    eta, xi, z_grid, w_grid = _grid_coords(r, n)
    rho = systems.grid_residuals(
        pack,
        np.ascontiguousarray(z_grid.reshape(-1)),
        np.ascontiguousarray(w_grid.reshape(-1)),
        DIVISOR_GUARD,
        cfg,
    ).reshape(n, n, n)
    return eta, xi, rho


def grid_residual_table(F, r, cfg=None, assume_squarefree=False):
    """Raw residual grid as rows (eta, xi1, xi2, residual), one per cell."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    pack = systems.build_pack(F)
    eta, xi, rho = _grid_rho(pack, r, cfg)
    eta3, xi13, xi23 = np.meshgrid(eta, xi, xi, indexing="ij")
    return np.column_stack(
        [eta3.reshape(-1), xi13.reshape(-1), xi23.reshape(-1), rho.reshape(-1)]
    )


def oracle_core(pack, r, cfg):
    n = cfg.grid_resolution
    eta, xi, rho = _grid_rho(pack, r, cfg)

    candidates = np.argwhere(
        _local_minima(rho) & (rho < PRESCREEN_THRESHOLD)
    )
    half = np.array([0.25 * np.pi / n, np.pi / n, np.pi / n])

    def objective(v):
        z, w = _hopf_point(r, v)
        return systems.point_residual(pack, z, w, DIVISOR_GUARD)

    refined = []
    for ie, j1, j2 in candidates:
        x0 = np.array([eta[ie], xi[j1], xi[j2]])
        simplex = np.vstack([x0, x0 + np.diag(half)])
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxiter": 300,
                "maxfev": 600,
                "xatol": 1e-10,
                "fatol": 1e-14,
            },
        )
        value = float(result.fun)
        if value < RESIDUAL_THRESHOLD:
            z, w = _hopf_point(r, result.x)
            refined.append((z, w, value))
    if not refined:
        return []

    arr = np.array([[z.real, z.imag, w.real, w.imag] for z, w, _ in refined])
    values = np.array([v for _, _, v in refined])
    clusters = []
    for members in _single_linkage(arr, 2.0 * cell_diameter(r, cfg)):
        best = min(members, key=lambda i: (values[i], i))
        z, w, value = refined[best]
        clusters.append(
            OracleCluster(z=z, w=w, residual=value, cell_count=len(members))
        )
    clusters.sort(key=lambda c: (c.z.real, c.z.imag, c.w.real, c.w.imag))
    return clusters


def brute_force_oracle(F, r, cfg=None, assume_squarefree=False):
    """Grid-scan clusters of low dependence residual on the radius-r sphere."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, _ = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    if not (r > m):
        raise InvalidRadiusError(
            f"radius {r:.12g} violates r > m(F) = {m:.12g}:"
            " the sphere does not clear the divisor"
        )
    return oracle_core(systems.build_pack(F), r, cfg)
