"""Upper bounds for Morse-Novikov numbers of braid closures.

Four estimators turn a braid word (and, for satellite doubles, a twist count
and clasp sign) into an even upper bound together with a construction
expression for the calculus module.  Evaluating that expression yields a
model whose critical-point count equals the bound, so every reported number
is backed by an explicit certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .braid import BraidWord, bennequin_invariants, closure_components, greedy_destabilize
from .calculus import mn_upper, parse_construction
from .errors import DisconnectedSurfaceError, MultiComponentError

__all__ = [
    "KnotInput",
    "BoundCertificate",
    "BoundTable",
    "free_rank_bound",
    "braid_index_double_bound",
    "wrapping_double_bound",
    "crossing_double_bound",
    "best_double_bound",
]

FREE_SURFACE_ASSUMPTION = "the Seifert surface of the braid diagram is free"


@dataclass(frozen=True)
class KnotInput:
    """A braid closure plus the data of the double to be estimated.

    ``double_twist`` and ``clasp_sign`` describe the satellite double (number
    of twists and sign of the clasp).  The override fields, when set, replace
    the braid-derived upper bounds for the braid index, crossing number,
    wrapping genus, layered wrapping genus and free rank.
    """

    braid: BraidWord
    double_twist: int = 0
    clasp_sign: int = 1
    braid_index_override: int | None = None
    crossing_override: int | None = None
    wrap_override: int | None = None
    wlap_override: int | None = None
    free_rank_override: int | None = None

    def __post_init__(self) -> None:
        if self.clasp_sign not in (1, -1):
            raise ValueError(f"clasp_sign must be +1 or -1, got {self.clasp_sign}")
        if self.braid_index_override is not None and self.braid_index_override < 1:
            raise ValueError("braid index override must be at least 1")
        for label in ("crossing", "wrap", "wlap", "free_rank"):
            value = getattr(self, f"{label}_override")
            if value is not None and value < 0:
                raise ValueError(f"{label} override must be nonnegative")


@dataclass(frozen=True)
class BoundCertificate:
    """One estimator's result: the bound, its construction, its context."""

    name: str
    value: int
    tree: str
    assumptions: tuple[str, ...]
    inputs_used: dict = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tree": self.tree,
            "inputs_used": dict(self.inputs_used),
        }


@dataclass(frozen=True)
class BoundTable:
    """All double estimates for one input, with the smallest singled out."""

    best: BoundCertificate
    table: tuple[BoundCertificate, ...]

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "table": [cert.to_dict() for cert in self.table],
        }


def _hopf_text(sign: int) -> str:
    return "hopf(+)" if sign > 0 else "hopf(-)"


def _o_chain(genus: int) -> str:
    """Connected-sum chain of ``genus`` copies of the o1 primitive."""
    if genus == 0:
        return "o"
    tree = "o1"
    for _ in range(genus - 1):
        tree = f"msum({tree},o1,1)"
    return tree


def _base_inputs(knot: KnotInput, reduced: BraidWord) -> dict:
    inv = bennequin_invariants(reduced)
    return {
        "n": reduced.strands,
        "c": len(reduced.letters),
        "components": inv.closure_components,
        "free_rank_upper": inv.free_rank_upper,
        "wrap_upper": knot.wrap_override,
        "wlap_upper": knot.wlap_override,
    }


def _certify(name: str, tree: str, extra_assumptions: tuple[str, ...],
             inputs_used: dict) -> BoundCertificate:
    """Evaluate the tree and read the bound off the model, so the stated
    value and the certificate can never disagree."""
    model = parse_construction(tree).model
    assumptions = tuple(dict.fromkeys(extra_assumptions + model.assumptions))
    return BoundCertificate(
        name=name,
        value=mn_upper(model),
        tree=tree,
        assumptions=assumptions,
        inputs_used=inputs_used,
    )


def _require_knot(braid: BraidWord) -> None:
    components = closure_components(braid)
    if components != 1:
        raise MultiComponentError(
            f"the braid closure has {components} components;"
            " the double construction needs a knot"
        )


def free_rank_bound(knot: KnotInput) -> BoundCertificate:
    """Bound by twice the free rank of the closure.

    The rank comes from the free-rank override or from the Bennequin-type
    surface of the greedily reduced braid diagram.  The certificate plumbs r
    Hopf bands onto a disk fibration, cuts r times, and plumbs r Hopf bands
    again, giving exactly 2r critical points.
    """
    reduced = greedy_destabilize(knot.braid)
    inv = bennequin_invariants(reduced)
    if knot.free_rank_override is not None:
        rank = knot.free_rank_override
    elif inv.connected_surface:
        rank = inv.free_rank_upper
    else:
        raise DisconnectedSurfaceError(
            "the braid-diagram Seifert surface is disconnected; bound each"
            " split piece separately or supply a free-rank override"
        )
    tree = "o"
    for _ in range(rank):
        tree = f"msum({tree},hopf(-),2)"
    for _ in range(rank):
        tree = f"cut({tree})"
    for _ in range(rank):
        tree = f"msum({tree},hopf(-),2)"
    inputs = _base_inputs(knot, reduced)
    inputs["free_rank_used"] = rank
    return _certify("free_rank", tree, (FREE_SURFACE_ASSUMPTION,), inputs)


def braid_index_double_bound(knot: KnotInput) -> BoundCertificate:
    """Bound the double of a knot by four times a braid index bound minus 2.

    The certificate splices the braid into the disk fibration of the unknot,
    cuts along 2n - 1 arcs, and plumbs the clasp-resolving Hopf band.
    """
    _require_knot(knot.braid)
    reduced = greedy_destabilize(knot.braid)
    n = knot.braid_index_override
    if n is None:
        n = reduced.strands
    tree = f"splice(o,{n},{knot.double_twist})"
    for _ in range(2 * n - 1):
        tree = f"cut({tree})"
    tree = f"msum({tree},{_hopf_text(-knot.clasp_sign)},2)"
    inputs = _base_inputs(knot, reduced)
    inputs["braid_index_used"] = n
    return _certify("braid_index_double", tree, (), inputs)


def _wrapping_tree(knot: KnotInput, genus: int) -> str:
    tree = _o_chain(genus)
    tree = f"splice({tree},1,{knot.double_twist - 1})"
    tree = f"cut({tree})"
    return f"msum({tree},{_hopf_text(-knot.clasp_sign)},2)"


def wrapping_double_bound(knot: KnotInput) -> BoundCertificate:
    """Bound the double of a knot by twice (wrapping genus + 1).

    The genus comes from the layered-wrapping override, else the wrapping
    override, else the reduced crossing count plus 1.  The certificate lays
    the companion as a closed 1-string braid through the genus-g unknot
    model, cuts once, and plumbs the clasp-resolving Hopf band.
    """
    _require_knot(knot.braid)
    reduced = greedy_destabilize(knot.braid)
    if knot.wlap_override is not None:
        genus, source = knot.wlap_override, "layered wrapping override"
    elif knot.wrap_override is not None:
        genus, source = knot.wrap_override, "wrapping override"
    else:
        genus, source = len(reduced.letters) + 1, "crossing count fallback"
    inputs = _base_inputs(knot, reduced)
    inputs["genus_used"] = genus
    inputs["genus_source"] = source
    return _certify("wrapping_double", _wrapping_tree(knot, genus), (), inputs)


def crossing_double_bound(knot: KnotInput) -> BoundCertificate:
    """Bound the double of a knot by twice (crossing count + 2).

    The crossing count comes from the override or the reduced letter count;
    the certificate is the wrapping certificate with genus c + 1.
    """
    _require_knot(knot.braid)
    reduced = greedy_destabilize(knot.braid)
    crossings = knot.crossing_override
    if crossings is None:
        crossings = len(reduced.letters)
    inputs = _base_inputs(knot, reduced)
    inputs["crossings_used"] = crossings
    return _certify(
        "crossing_double", _wrapping_tree(knot, crossings + 1), (), inputs
    )


def best_double_bound(knot: KnotInput) -> BoundTable:
    """All double estimates, with the smallest first among equals by name."""
    table = (
        braid_index_double_bound(knot),
        crossing_double_bound(knot),
        wrapping_double_bound(knot),
    )
    best = min(table, key=lambda cert: (cert.value, cert.name))
    return BoundTable(best=best, table=table)
