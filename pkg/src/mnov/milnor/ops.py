"""Divisor distance, critical radii, and the critical-point search."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..errors import InvalidRadiusError, SquarefreeError
from ..poly import FINITE, squarefree_heuristic
from .classify import classify_with_pack, fit_degenerate_circles
from .config import DIVISOR_GUARD, SolverConfig
from .types import CriticalPoint
from . import systems

RADIUS_PROXIMITY = 1e-6


def require_squarefree(F, cfg, assume_squarefree=False):
    """Raise unless the squarefree heuristic passed or the caller overrode it."""
    if assume_squarefree or F.squarefree_checked:
        return
    if not squarefree_heuristic(F, cfg.rng_seed):
        raise SquarefreeError(
            "a polynomial factor appears to repeat (squarefree heuristic"
            " failed); set assume_squarefree to proceed anyway"
        )


def _origin_on_divisor(F):
    return (
        F.num.terms.get((0, 0), 0) == 0 or F.den.terms.get((0, 0), 0) == 0
    )


POLISH_TOL = 1e-300


def _polish(run, x):
    """Newton-polish converged endpoints with a negligible freeze tolerance.

    True solutions hold their position to machine precision. Pseudo-roots
    that met the convergence tolerance only because the system vanishes to
    high order near a singular divisor point keep sliding toward that
    point, so norm filters downstream see the limit instead of the
    stopping artifact. Rows that blow up keep their original endpoint.
    """
    if not len(x):
        return x
    out, _, _ = run(x)
    bad = ~np.isfinite(out).all(axis=1)
    if bad.any():
        out[bad] = x[bad]
    return out


def divisor_min_norm_ex(F, cfg=None, assume_squarefree=False):
    """Divisor distance with an incompleteness flag.

    Returns (value, incomplete): the minimum norm over tangency solutions on
    {P=0} and {Q=0}, 0 when either polynomial vanishes at the origin, and
    (inf, True) when no tangency seed converged.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    if _origin_on_divisor(F):
        return 0.0, False
    pack = systems.build_pack(F)
    rng = np.random.default_rng(cfg.rng_seed)
    fine = replace(cfg, newton_tol=POLISH_TOL)
    best = np.inf
    converged_any = False
    for base, poly in ((0, F.num), (6, F.den)):
        if poly.is_constant():
            continue
        seeds = systems.ball_seeds(rng, cfg.seed_count)
        x, _, conv = systems.run_tangency(pack, base, seeds, cfg)
        if conv.any():
            converged_any = True
            roots = _polish(
                lambda c: systems.run_tangency(pack, base, c, fine), x[conv]
            )
            best = min(best, float(np.linalg.norm(roots, axis=1).min()))
    if not converged_any:
        return float("inf"), True
    return best, False


def divisor_min_norm(F, cfg=None, assume_squarefree=False):
    """Largest radius below which spheres miss the divisor {P=0} u {Q=0}."""
    return divisor_min_norm_ex(F, cfg, assume_squarefree)[0]


def critical_radii_ex(F, cfg=None, assume_squarefree=False):
    """Critical radii with an incompleteness flag.

    Collects norms of sphere-tangency points of each polynomial's zero set
    and of common zeros of both, keeps those exceeding the divisor distance,
    and deduplicates within dedup_dist. The flag is set when fewer than a
    quarter of the Newton seeds converged.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, m_incomplete = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    pack = systems.build_pack(F)
    rng = np.random.default_rng(cfg.rng_seed)
    fine = replace(cfg, newton_tol=POLISH_TOL)
    norm_groups = []
    total = 0
    converged = 0
    for base, poly in ((0, F.num), (6, F.den)):
        if poly.is_constant():
            continue
        seeds = systems.ball_seeds(rng, cfg.seed_count)
        x, _, conv = systems.run_tangency(pack, base, seeds, cfg)
        total += len(seeds)
        converged += int(conv.sum())
        if conv.any():
            roots = _polish(
                lambda c: systems.run_tangency(pack, base, c, fine), x[conv]
            )
            norm_groups.append(np.linalg.norm(roots, axis=1))
    if not F.num.is_constant() and not F.den.is_constant():
        seeds = systems.ball_seeds(rng, cfg.seed_count)
        x, _, conv = systems.run_common_zero(pack, seeds, cfg)
        total += len(seeds)
        converged += int(conv.sum())
        if conv.any():
            roots = _polish(
                lambda c: systems.run_common_zero(pack, c, fine), x[conv]
            )
            norm_groups.append(np.linalg.norm(roots, axis=1))
    incomplete = m_incomplete or (total > 0 and converged < 0.25 * total)
    if not norm_groups:
        return [], incomplete
    values = np.sort(np.concatenate(norm_groups))
    values = values[values > m + cfg.dedup_dist]
    radii = []
    for value in values:
        if not radii or value - radii[-1] > cfg.dedup_dist:
            radii.append(float(value))
    return radii, incomplete


def critical_radii(F, cfg=None, assume_squarefree=False):
    """Sorted radii at which spheres are tangent to the divisor."""
    return critical_radii_ex(F, cfg, assume_squarefree)[0]


def validate_radius(r, m, radii):
    """Raise InvalidRadiusError unless r > m(F) and r avoids every critical
    radius by at least 1e-6."""
    if not (r > m):
        raise InvalidRadiusError(
            f"radius {r:.12g} violates r > m(F) = {m:.12g}:"
            " the sphere does not clear the divisor"
        )
    for x in radii:
        if abs(r - x) < RADIUS_PROXIMITY:
            raise InvalidRadiusError(
                f"radius {r:.12g} is within 1e-06 of the critical radius"
                f" {x:.12g}"
            )


def _dedup_solutions(sols, res, dist):
    """Lexicographically sort solutions and merge groups within dist in R^4.

    Each group keeps the member with the smallest residual; groups are
    returned sorted by that representative.
    """
    if not len(sols):
        return []
    order = np.lexsort(
        (sols[:, 4], sols[:, 3], sols[:, 2], sols[:, 1], sols[:, 0])
    )
    sols = sols[order]
    res = res[order]
    anchors = []
    groups = []
    for row, rr in zip(sols, res):
        placed = False
        for gi, anchor in enumerate(anchors):
            if np.linalg.norm(row[:4] - anchor) <= dist:
                if rr < groups[gi][1]:
                    groups[gi] = (row, rr)
                placed = True
                break
        if not placed:
            anchors.append(row[:4].copy())
            groups.append((row, rr))
    groups.sort(key=lambda g: tuple(g[0]))
    return groups


def _critical_points_core(F, r, cfg, pack=None):
    """Newton search plus classification; no radius validation.

    Returns (points, incomplete): incomplete is set when nothing survived
    the divisor guard and fewer than a quarter of the seeds converged.
    """
    if pack is None:
        pack = systems.build_pack(F)
    rng = np.random.default_rng(cfg.rng_seed)
    seeds = systems.dependence_seeds(rng, cfg.seed_count, r)
    x, res, conv = systems.run_dependence(pack, r, seeds, cfg)
    fraction = float(conv.mean()) if len(conv) else 0.0
    sols = x[conv]
    sols_res = res[conv]
    if len(sols):
        z = sols[:, 0] + 1j * sols[:, 1]
        w = sols[:, 2] + 1j * sols[:, 3]
        num, den = systems.eval_pair(pack, z, w)
        keep = (np.abs(num) > DIVISOR_GUARD) & (np.abs(den) > DIVISOR_GUARD)
        sols = sols[keep]
        sols_res = sols_res[keep]
    points = []
    for row, row_res in _dedup_solutions(sols, sols_res, cfg.dedup_dist):
        z = complex(row[0], row[1])
        w = complex(row[2], row[3])
        index, degenerate, eigs = classify_with_pack(F, pack, z, w, r, cfg)
        tag, value = F.eval_tagged(z, w)
        theta = (
            float(np.angle(value) % (2.0 * np.pi)) if tag == FINITE else 0.0
        )
        points.append(
            CriticalPoint(
                z=z,
                w=w,
                multiplier_t=float(row[4]),
                theta=theta,
                index=index,
                degenerate=degenerate,
                residual=float(row_res),
                hessian_eigenvalues=eigs,
            )
        )
    incomplete = (not points) and fraction < 0.25
    return points, incomplete


def milnor_critical_points_ex(F, r, cfg=None, assume_squarefree=False):
    """Critical points of the Milnor map with an incompleteness flag."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, _ = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    radii, _ = critical_radii_ex(F, cfg, assume_squarefree=True)
    validate_radius(r, m, radii)
    return _critical_points_core(F, r, cfg)


def milnor_critical_points(F, r, cfg=None, assume_squarefree=False):
    """Deduplicated, classified critical points of the Milnor map at radius r."""
    return milnor_critical_points_ex(F, r, cfg, assume_squarefree)[0]


def detect_degenerate_locus(F, r, cfg=None, assume_squarefree=False):
    """Circles fitted through clusters of degenerate critical points."""
    cfg = cfg if cfg is not None else SolverConfig()
    require_squarefree(F, cfg, assume_squarefree)
    m, _ = divisor_min_norm_ex(F, cfg, assume_squarefree=True)
    if not (r > m):
        raise InvalidRadiusError(
            f"radius {r:.12g} violates r > m(F) = {m:.12g}:"
            " the sphere does not clear the divisor"
        )
    points, _ = _critical_points_core(F, r, cfg)
    return fit_degenerate_circles(points, r, cfg)
