"""Solver configuration shared by all numerical operations."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the randomized Newton searches and the grid oracle.

    threads=None means one worker per available CPU; results are identical
    for any thread count because partial results are merged by coordinate
    sort before deduplication.
    """

    seed_count: int = 400
    rng_seed: int = 0
    newton_tol: float = 1e-12
    max_newton_iters: int = 80
    dedup_dist: float = 1e-6
    degeneracy_rel_tol: float = 1e-6
    grid_resolution: int = 48
    threads: int | None = None

    def __post_init__(self):
        if self.seed_count < 1:
            raise ValueError("seed_count must be at least 1")
        if self.newton_tol <= 0 or self.dedup_dist <= 0:
            raise ValueError("tolerances must be positive")
        if self.degeneracy_rel_tol <= 0:
            raise ValueError("degeneracy_rel_tol must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be at least 1")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be at least 2")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be at least 1 when given")

    def to_dict(self):
        return {
            "seed_count": self.seed_count,
            "rng_seed": self.rng_seed,
            "newton_tol": self.newton_tol,
            "max_newton_iters": self.max_newton_iters,
            "dedup_dist": self.dedup_dist,
            "degeneracy_rel_tol": self.degeneracy_rel_tol,
            "grid_resolution": self.grid_resolution,
            "threads": self.threads,
        }


DIVISOR_GUARD = 1e-10
