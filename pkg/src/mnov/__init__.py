"""Numerical analysis of Milnor maps of plane curves on 3-spheres, plus
symbolic Morse-map constructions giving certified Morse-Novikov bounds."""

from .bounds import (
    BoundCertificate,
    BoundTable,
    KnotInput,
    best_double_bound,
    braid_index_double_bound,
    crossing_double_bound,
    free_rank_bound,
    wrapping_double_bound,
)
from .braid import (
    BraidWord,
    DiagramInvariants,
    bennequin_invariants,
    closure_components,
    greedy_destabilize,
    parse_braid,
)
from .calculus import (
    MorseModel,
    basket,
    cut,
    mn_upper,
    msum,
    page_chis,
    parse_construction,
    primitive,
    self_index,
    splice,
    twist0,
    twist_arbitrary,
)
from .errors import (
    DegreeCapError,
    DisconnectedSurfaceError,
    InputSyntaxError,
    InvalidRadiusError,
    MnovError,
    MultiComponentError,
    PoleError,
    PreconditionError,
    SquarefreeError,
)
from .milnor import (
    CriticalPoint,
    DegenerateCircle,
    LinkTrace,
    MilnorReport,
    OracleCluster,
    SolverConfig,
    brute_force_oracle,
    classify_critical_point,
    critical_radii,
    detect_degenerate_locus,
    divisor_min_norm,
    grid_residual_table,
    milnor_critical_points,
    morse_report,
    trace_link,
)
from .poly import Poly2, RationalMap, parse_poly, parse_rational

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Poly2",
    "RationalMap",
    "parse_poly",
    "parse_rational",
    "SolverConfig",
    "CriticalPoint",
    "DegenerateCircle",
    "LinkTrace",
    "MilnorReport",
    "OracleCluster",
    "divisor_min_norm",
    "critical_radii",
    "milnor_critical_points",
    "classify_critical_point",
    "detect_degenerate_locus",
    "brute_force_oracle",
    "grid_residual_table",
    "trace_link",
    "morse_report",
    "BraidWord",
    "DiagramInvariants",
    "parse_braid",
    "closure_components",
    "bennequin_invariants",
    "greedy_destabilize",
    "MorseModel",
    "primitive",
    "msum",
    "self_index",
    "twist0",
    "twist_arbitrary",
    "cut",
    "splice",
    "basket",
    "mn_upper",
    "page_chis",
    "parse_construction",
    "KnotInput",
    "BoundCertificate",
    "BoundTable",
    "free_rank_bound",
    "braid_index_double_bound",
    "wrapping_double_bound",
    "crossing_double_bound",
    "best_double_bound",
    "MnovError",
    "InputSyntaxError",
    "DegreeCapError",
    "PoleError",
    "PreconditionError",
    "SquarefreeError",
    "InvalidRadiusError",
    "MultiComponentError",
    "DisconnectedSurfaceError",
]
