"""Result types for the numerical operations."""

from __future__ import annotations

from dataclasses import dataclass, field


def _cpair(value):
    return [value.real, value.imag]


@dataclass(frozen=True)
class CriticalPoint:
    """A critical point of the Milnor map on the radius-r sphere.

    multiplier_t is the real factor of the cleared dependence system, theta
    the argument of F at the point (the critical value on the circle), index
    the Morse index (None when the point is degenerate).
    """

    z: complex
    w: complex
    multiplier_t: float
    theta: float
    index: int | None
    degenerate: bool
    residual: float
    hessian_eigenvalues: tuple[float, float, float]

    @property
    def point(self):
        return (self.z, self.w)

    def to_dict(self):
        return {
            "point": [_cpair(self.z), _cpair(self.w)],
            "multiplier_t": self.multiplier_t,
            "theta": self.theta,
            "index": self.index,
            "degenerate": self.degenerate,
            "residual": self.residual,
            "hessian_eigenvalues": list(self.hessian_eigenvalues),
        }


@dataclass(frozen=True)
class DegenerateCircle:
    """A circle in R^4 fitted through clustered degenerate critical points."""

    center_z: complex
    center_w: complex
    radius: float
    residual: float
    point_count: int
    basis: tuple = field(default=(), repr=False, compare=False)

    @property
    def center(self):
        return (self.center_z, self.center_w)

    def to_dict(self):
        return {
            "center": [_cpair(self.center_z), _cpair(self.center_w)],
            "radius": self.radius,
            "residual": self.residual,
            "point_count": self.point_count,
        }


@dataclass(frozen=True)
class OracleCluster:
    """A cluster of refined local minima of the grid oracle's residual."""

    z: complex
    w: complex
    residual: float
    cell_count: int

    def to_dict(self):
        return {
            "point": [_cpair(self.z), _cpair(self.w)],
            "residual": self.residual,
            "cell_count": self.cell_count,
        }


@dataclass(frozen=True)
class LinkTrace:
    """Traced divisor link on the sphere: loop count and polyline samples."""

    components: int
    loops: tuple
    incomplete: bool

    def to_dict(self):
        return {
            "components": self.components,
            "loops": [
                [[row[0], row[1], row[2], row[3]] for row in loop.tolist()]
                for loop in self.loops
            ],
            "incomplete": self.incomplete,
        }


@dataclass(frozen=True)
class MilnorReport:
    """Aggregated analysis of the Milnor map at one radius."""

    radius: float
    m_of_F: float
    critical_radii: tuple
    critical_points: tuple
    degenerate_loci: tuple
    verdict: str
    balance_ok: bool
    oracle_checked: bool
    oracle_clusters: tuple = ()
    warnings: tuple = ()

    def to_dict(self):
        return {
            "radius": self.radius,
            "m_of_F": self.m_of_F,
            "critical_radii": list(self.critical_radii),
            "critical_points": [p.to_dict() for p in self.critical_points],
            "degenerate_loci": [c.to_dict() for c in self.degenerate_loci],
            "verdict": self.verdict,
            "balance_ok": self.balance_ok,
            "oracle_checked": self.oracle_checked,
            "oracle_clusters": [c.to_dict() for c in self.oracle_clusters],
        }
