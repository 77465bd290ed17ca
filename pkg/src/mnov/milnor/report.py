"""Aggregated Milnor-map analysis at one radius."""

from __future__ import annotations

import numpy as np

from .classify import circle_distance, fit_degenerate_circles
from .config import SolverConfig
from .oracle import cell_diameter, oracle_core
from .ops import (
    _critical_points_core,
    critical_radii_ex,
    divisor_min_norm_ex,
    require_squarefree,
    validate_radius,
)
from .types import MilnorReport
from . import systems

WARN_DIVISOR_DISTANCE = (
    "incomplete divisor-distance search: no tangency seed converged"
)
WARN_CRITICAL_RADII = (
    "incomplete critical-radius search:"
    " under a quarter of the seeds converged"
)
WARN_CRITICAL_POINTS = (
    "incomplete critical-point search:"
    " nothing found and under a quarter of the seeds converged"
)


def _matched(cluster, points, circles, tol):
    q4 = np.array(
        [cluster.z.real, cluster.z.imag, cluster.w.real, cluster.w.imag]
    )
    for p in points:
        p4 = np.array([p.z.real, p.z.imag, p.w.real, p.w.imag])
        if np.linalg.norm(q4 - p4) <= tol:
            return True
    return any(circle_distance(q4, c) <= tol for c in circles)


def morse_report(F, r, cfg=None, oracle=False, assume_squarefree=False):
    """Full analysis: divisor distance, critical radii, classified critical
    points, fitted degenerate circles, optional grid-oracle cross-check, and
    a verdict in {fibration, morse, degenerate, incomplete}."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, m_inc = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    radii, radii_inc = critical_radii_ex(F, cfg, assume_squarefree=True)
    validate_radius(r, m, radii)
    pack = systems.build_pack(F)
    points, points_inc = _critical_points_core(F, r, cfg, pack=pack)
    circles = fit_degenerate_circles(points, r, cfg)
    clusters = oracle_core(pack, r, cfg) if oracle else []

    warnings = []
    if m_inc:
        warnings.append(WARN_DIVISOR_DISTANCE)
    if radii_inc:
        warnings.append(WARN_CRITICAL_RADII)
    if points_inc:
        warnings.append(WARN_CRITICAL_POINTS)

    index1 = sum(1 for p in points if p.index == 1)
    index2 = sum(1 for p in points if p.index == 2)
    balance_ok = index1 == index2
    match_tol = 10.0 * cell_diameter(r, cfg)
    all_matched = all(
        _matched(c, points, circles, match_tol) for c in clusters
    )

    if any(p.degenerate for p in points) or circles:
        verdict = "degenerate"
    elif not points:
        verdict = "incomplete" if (oracle and clusters) else "fibration"
    else:
        indices_ok = all(p.index in (1, 2) for p in points)
        oracle_ok = (not oracle) or (
            len(clusters) == len(points) and all_matched
        )
        verdict = (
            "morse" if (balance_ok and indices_ok and oracle_ok)
            else "incomplete"
        )

    return MilnorReport(
        radius=float(r),
        m_of_F=float(m),
        critical_radii=tuple(radii),
        critical_points=tuple(points),
        degenerate_loci=tuple(circles),
        verdict=verdict,
        balance_ok=balance_ok,
        oracle_checked=bool(oracle),
        oracle_clusters=tuple(clusters),
        warnings=tuple(warnings),
    )
