"""Symbolic bookkeeping for circle-valued Morse maps of links.

A model records the cyclic sequence of critical values of a boundary-regular
Morse map from a link complement to the circle, together with the Euler
characteristic of the page over a marked reference arc of regular values.
Constructions (plumbing, twisting, cutting, splicing, baskets) act on models
and keep the critical-point count and every page Euler characteristic exact,
so the word length of a model is a certified upper bound for the
Morse-Novikov number of its boundary link.

Storage convention: the word is linearized starting at the marked arc.
Letter -1 is an index-1 critical value (page chi drops by 2 when crossed
forward) and letter +1 is an index-2 critical value (page chi rises by 2).
The walk must close up, which forces equally many letters of each sign.
Geometric facts that cannot be checked symbolically (declared arcs, unknots
or braids) are carried along as assumption strings; every result is a sound
upper bound conditional on its assumptions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import InputSyntaxError

__all__ = [
    "MorseModel",
    "ConstructionResult",
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
    "small_large_chi",
    "parse_construction",
]

SELF_INDEX_ASSUMPTION = (
    "the maximum-chi page is realized as the small page of a"
    " self-indexed rearrangement"
)
TWIST0_ASSUMPTION = "a framing-0 unknot interior to a smooth page exists as declared"


def _splice_assumption(n: int) -> str:
    return (
        f"a closed {n}-string braid meeting every page transversely"
        " exists as declared"
    )


@dataclass(frozen=True)
class MorseModel:
    """Critical-value data of a circle-valued Morse map of a link.

    ``word`` lists the critical values in cyclic order starting at the marked
    arc, ``chi_ref`` is the Euler characteristic of the page over that arc,
    ``binding`` is an uninterpreted expression naming the link, and
    ``boundary_components`` is the component count of the link when it is
    still determined (None once a construction loses track of it).
    """

    word: tuple[int, ...]
    chi_ref: int
    binding: str
    boundary_components: int | None
    assumptions: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for letter in self.word:
            if letter not in (-1, 1):
                raise ValueError(f"word letters must be -1 or +1, got {letter}")
        if sum(self.word) != 0:
            raise ValueError("word needs equally many -1 and +1 letters to close up")
        if self.boundary_components is not None and self.boundary_components < 1:
            raise ValueError("boundary_components must be positive when known")

    def to_dict(self) -> dict:
        small, large = small_large_chi(self)
        return {
            "word": "".join("+" if letter > 0 else "-" for letter in self.word),
            "chi_ref": self.chi_ref,
            "binding": self.binding,
            "boundary_components": self.boundary_components,
            "mn_upper": mn_upper(self),
            "page_chis": sorted(page_chis(self)),
            "chi_small": small,
            "chi_large": large,
        }


def mn_upper(model: MorseModel) -> int:
    """Critical-point count of the model, bounding MN of its boundary link."""
    return len(model.word)


def page_chis(model: MorseModel) -> tuple[int, ...]:
    """Euler characteristic of each page, in walk order from the marked arc."""
    if not model.word:
        return (model.chi_ref,)
    out = []
    chi = model.chi_ref
    for letter in model.word:
        out.append(chi)
        chi += 2 * letter
    return tuple(out)


def small_large_chi(model: MorseModel) -> tuple[int, int]:
    """Page chi of the small and large pages after self-indexing."""
    small = max(page_chis(model))
    return small, small - len(model.word)


def _merge(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(a + b))


def _expect_params(name: str, params: tuple, count: int) -> None:
    if len(params) != count:
        raise ValueError(f"primitive {name!r} takes {count} parameter(s)")


def _as_sign(value) -> int:
    if value in ("+", "+1") or value == 1:
        return 1
    if value in ("-", "-1") or value == -1:
        return -1
    raise ValueError(f"hopf sign must be '+' or '-', got {value!r}")


def primitive(name: str, *params) -> MorseModel:
    """Build a named primitive model.

    Known names: "o" (unknot fibration by disks), "o1" (unknot map with one
    critical value of each index, disk and once-punctured-torus pages), "u"
    (two-component unlink map, two-disk and annulus pages), "hopf" (Hopf band
    fibration, parameter '+' or '-'), "torus" (torus link fibration,
    parameters p, q >= 1), "annulus" (boundary of the k-twisted unknot
    annulus; k = +1 or -1 degenerates to the opposite-sign Hopf band).
    The marked arc is the large page where the pages differ.
    """
    if name == "o":
        _expect_params(name, params, 0)
        return MorseModel((), 1, "o", 1)
    if name == "o1":
        _expect_params(name, params, 0)
        return MorseModel((1, -1), -1, "o1", 1)
    if name == "u":
        _expect_params(name, params, 0)
        return MorseModel((1, -1), 0, "u", 2)
    if name == "hopf":
        _expect_params(name, params, 1)
        sign = _as_sign(params[0])
        return MorseModel((), 0, f"hopf({'+' if sign > 0 else '-'})", 2)
    if name == "torus":
        _expect_params(name, params, 2)
        p, q = int(params[0]), int(params[1])
        if p < 1 or q < 1:
            raise ValueError(f"torus parameters must be at least 1, got ({p},{q})")
        return MorseModel((), p + q - p * q, f"torus({p},{q})", math.gcd(p, q))
    if name == "annulus":
        _expect_params(name, params, 1)
        k = int(params[0])
        if k in (1, -1):
            hopf = primitive("hopf", -k)
            return MorseModel(hopf.word, hopf.chi_ref, f"annulus({k})", 2)
        return MorseModel((1, -1), -2, f"annulus({k})", 2)
    raise ValueError(f"unknown primitive {name!r}")


def msum(f0: MorseModel, f1: MorseModel, n: int) -> MorseModel:
    """Murasugi sum: glue the marked pages along a 2n-gon.

    The second model's critical values are inserted into the first model's
    marked arc, so the words concatenate and critical-point counts add.  The
    reference chi adds with a correction of -1 for the shared polygon.  The
    component count of the new boundary link depends on how the polygon meets
    the two boundaries, which the word does not record, so it becomes None.
    """
    if n < 1:
        raise ValueError(f"polygon parameter must be at least 1, got {n}")
    return MorseModel(
        word=f1.word + f0.word,
        chi_ref=f0.chi_ref + f1.chi_ref - 1,
        binding=f"msum({f0.binding},{f1.binding},{n})",
        boundary_components=None,
        assumptions=_merge(f0.assumptions, f1.assumptions),
    )


def _cyclically_canonical(word: tuple[int, ...]) -> bool:
    nu = len(word) // 2
    canonical = (-1,) * nu + (1,) * nu
    return any(word[i:] + word[:i] == canonical for i in range(max(1, len(word))))


def self_index(model: MorseModel) -> MorseModel:
    """Rearrange the critical values into one falling and one rising run.

    The marked arc moves to the small page, whose chi is the maximum page chi
    of the input walk; the large page then sits exactly word-length below it.
    When letters actually move past each other (the cyclic word was not
    already a single falling-then-rising run) this is an isotopy assumption
    and is recorded.
    """
    if not model.word:
        return model
    nu = len(model.word) // 2
    small = max(page_chis(model))
    assumptions = model.assumptions
    if not _cyclically_canonical(model.word):
        assumptions = _merge(assumptions, (SELF_INDEX_ASSUMPTION,))
    return MorseModel(
        word=(-1,) * nu + (1,) * nu,
        chi_ref=small,
        binding=model.binding,
        boundary_components=model.boundary_components,
        assumptions=assumptions,
    )


def twist0(model: MorseModel, n: int) -> MorseModel:
    """Twist n times along a declared framing-0 unknot interior to a page.

    Critical data is unchanged; only the binding and the assumptions grow.
    """
    return MorseModel(
        word=model.word,
        chi_ref=model.chi_ref,
        binding=f"twist0({model.binding},{n})",
        boundary_components=model.boundary_components,
        assumptions=_merge(model.assumptions, (TWIST0_ASSUMPTION,)),
    )


def twist_arbitrary(model: MorseModel, n: int) -> MorseModel:
    """Twist n times along an arbitrary unknot meeting the marked page.

    Realized as a connected sum with the o1 primitive followed by a framing-0
    twist, so the critical-point count grows by exactly 2.
    """
    return twist0(msum(model, primitive("o1"), 1), n)


def cut(model: MorseModel) -> MorseModel:
    """Cut the marked page along a declared arc, adding 2 critical points.

    Realized as plumbing the u primitive at its annulus arc.  The arc crossed
    right after the new index-2 value carries the cut-open page, whose chi is
    one more than the marked page's.
    """
    return msum(model, primitive("u"), 2)


def splice(model: MorseModel, n: int, k: int) -> MorseModel:
    """Splice a declared closed n-string braid with framing k into the map.

    The critical values are untouched; every page loses n from its chi, one
    plumbing square per string crossing it, and the spliced closure adds two
    boundary components.
    """
    if n < 1:
        raise ValueError(f"string count must be at least 1, got {n}")
    bc = model.boundary_components
    return MorseModel(
        word=model.word,
        chi_ref=model.chi_ref - n,
        binding=f"splice({model.binding},{n},{k})",
        boundary_components=None if bc is None else bc + 2,
        assumptions=_merge(model.assumptions, (_splice_assumption(n),)),
    )


def basket(framings) -> MorseModel:
    """Plumb a sequence of twisted unknot annuli onto a disk.

    Framing +1 or -1 plumbs the opposite-sign Hopf band and adds no critical
    points; any other framing plumbs a twisted annulus model and adds two.
    The resulting bound is twice the number of framings outside {+1, -1}.
    """
    model = primitive("o")
    for raw in framings:
        k = int(raw)
        if k in (1, -1):
            piece = primitive("hopf", -k)
        else:
            piece = primitive("annulus", k)
        model = msum(model, piece, 2)
    return model


@dataclass(frozen=True)
class ConstructionResult:
    """A parsed construction: the model, plus the exact Morse-Novikov value
    when the top-level form is one whose value is known exactly."""

    model: MorseModel
    exact_mn: int | None


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_INT_RE = re.compile(r"[+-]?\d+")


class _DslParser:
    """Recursive-descent parser for construction expressions.

    Grammar: o | o1 | u | hopf(+) | hopf(-) | torus(p,q) | annulus(k) |
    msum(expr,expr,n) | selfindex(expr) | twist0(expr,n) | twist(expr,n) |
    cut(expr) | splice(expr,n,k) | basket(k1,...,km).
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, at: int | None = None):
        raise InputSyntaxError(message, self.pos if at is None else at)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        self.skip_ws()
        if self.peek() != char:
            self.fail(f"expected {char!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        match = _INT_RE.match(self.text, self.pos)
        if not match:
            self.fail("expected an integer")
        self.pos = match.end()
        return int(match.group())

    def parse_sign(self) -> int:
        self.skip_ws()
        match = _INT_RE.match(self.text, self.pos)
        if match:
            value = int(match.group())
            if value in (1, -1):
                self.pos = match.end()
                return value
            self.fail("hopf sign must be '+' or '-'")
        char = self.peek()
        if char in "+-":
            self.pos += 1
            return 1 if char == "+" else -1
        self.fail("hopf sign must be '+' or '-'")

    def parse_expr(self) -> tuple[MorseModel, int | None]:
        self.skip_ws()
        start = self.pos
        match = _NAME_RE.match(self.text, self.pos)
        if not match:
            self.fail("expected a construction name")
        name = match.group()
        self.pos = match.end()
        if name in ("o", "o1", "u"):
            return primitive(name), None
        if name == "hopf":
            self.expect("(")
            sign = self.parse_sign()
            self.expect(")")
            return primitive("hopf", sign), None
        if name == "torus":
            self.expect("(")
            self.skip_ws()
            argpos = self.pos
            p = self.parse_int()
            self.expect(",")
            q = self.parse_int()
            self.expect(")")
            if p < 1 or q < 1:
                self.fail("torus parameters must be at least 1", argpos)
            return primitive("torus", p, q), 0
        if name == "annulus":
            self.expect("(")
            k = self.parse_int()
            self.expect(")")
            return primitive("annulus", k), 0 if k in (1, -1) else 2
        if name == "msum":
            self.expect("(")
            f0, _ = self.parse_expr()
            self.expect(",")
            f1, _ = self.parse_expr()
            self.expect(",")
            self.skip_ws()
            argpos = self.pos
            n = self.parse_int()
            self.expect(")")
            if n < 1:
                self.fail("polygon parameter must be at least 1", argpos)
            return msum(f0, f1, n), None
        if name == "selfindex":
            self.expect("(")
            f, _ = self.parse_expr()
            self.expect(")")
            return self_index(f), None
        if name == "twist0":
            self.expect("(")
            f, _ = self.parse_expr()
            self.expect(",")
            n = self.parse_int()
            self.expect(")")
            return twist0(f, n), None
        if name == "twist":
            self.expect("(")
            f, _ = self.parse_expr()
            self.expect(",")
            n = self.parse_int()
            self.expect(")")
            return twist_arbitrary(f, n), None
        if name == "cut":
            self.expect("(")
            f, _ = self.parse_expr()
            self.expect(")")
            return cut(f), None
        if name == "splice":
            self.expect("(")
            f, _ = self.parse_expr()
            self.expect(",")
            self.skip_ws()
            argpos = self.pos
            n = self.parse_int()
            self.expect(",")
            k = self.parse_int()
            self.expect(")")
            if n < 1:
                self.fail("splice string count must be at least 1", argpos)
            return splice(f, n, k), None
        if name == "basket":
            self.expect("(")
            framings = []
            self.skip_ws()
            if self.peek() != ")":
                framings.append(self.parse_int())
                while True:
                    self.skip_ws()
                    if self.peek() != ",":
                        break
                    self.pos += 1
                    framings.append(self.parse_int())
            self.expect(")")
            return basket(framings), None
        self.fail(f"unknown construction {name!r}", start)

    def parse_toplevel(self) -> ConstructionResult:
        model, exact = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("unexpected trailing input")
        return ConstructionResult(model, exact)


def parse_construction(text: str) -> ConstructionResult:
    """Parse a construction expression and evaluate it to a model."""
    return _DslParser(text).parse_toplevel()
