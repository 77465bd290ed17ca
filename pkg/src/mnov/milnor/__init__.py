"""Numerical analysis of Milnor maps of plane curves on 3-spheres."""

from .classify import classify_critical_point
from .config import SolverConfig
from .oracle import brute_force_oracle, grid_residual_table
from .ops import (
    critical_radii,
    critical_radii_ex,
    detect_degenerate_locus,
    divisor_min_norm,
    divisor_min_norm_ex,
    milnor_critical_points,
    milnor_critical_points_ex,
)
from .report import morse_report
from .trace import trace_link
from .types import (
    CriticalPoint,
    DegenerateCircle,
    LinkTrace,
    MilnorReport,
    OracleCluster,
)

__all__ = [
    "SolverConfig",
    "CriticalPoint",
    "DegenerateCircle",
    "LinkTrace",
    "MilnorReport",
    "OracleCluster",
    "divisor_min_norm",
    "divisor_min_norm_ex",
    "critical_radii",
    "critical_radii_ex",
    "milnor_critical_points",
    "milnor_critical_points_ex",
    "classify_critical_point",
    "detect_degenerate_locus",
    "brute_force_oracle",
    "grid_residual_table",
    "trace_link",
    "morse_report",
]
