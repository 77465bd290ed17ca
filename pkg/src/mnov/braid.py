"""Braid words and the diagram-level quantities used by the bound estimators.

A braid word is given as text "n: l1 l2 ... lc" with n strands and signed
decimal letters, letter +i (resp. -i) standing for the i-th elementary
generator (resp. its inverse).  From the word this module computes the number
of closure components, the Euler characteristic of the braid-diagram Seifert
surface, an upper bound for the free rank of the closure, and a greedily
reduced word whose strand and letter counts bound the braid index and the
crossing number from above.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InputSyntaxError

__all__ = [
    "BraidWord",
    "DiagramInvariants",
    "parse_braid",
    "closure_components",
    "bennequin_invariants",
    "greedy_destabilize",
]


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on ``strands`` strands.

    ``letters`` holds nonzero integers with absolute value below ``strands``.
    """

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise ValueError(f"strands must be at least 1, got {self.strands}")
        for letter in self.letters:
            if letter == 0 or abs(letter) >= self.strands:
                raise ValueError(
                    f"letter {letter} is out of range for {self.strands} strands"
                )

    def unparse(self) -> str:
        """Render the word back into the ``"n: l1 l2 ..."`` text format."""
        head = f"{self.strands}:"
        if not self.letters:
            return head
        return head + " " + " ".join(str(letter) for letter in self.letters)


@dataclass(frozen=True)
class DiagramInvariants:
    """Diagram-level quantities of a braid word and its Seifert surface."""

    crossing_count: int
    strand_count: int
    closure_components: int
    bennequin_chi: int
    free_rank_upper: int
    connected_surface: bool

    def to_dict(self) -> dict:
        return {
            "crossing_count": self.crossing_count,
            "strand_count": self.strand_count,
            "closure_components": self.closure_components,
            "bennequin_chi": self.bennequin_chi,
            "free_rank_upper": self.free_rank_upper,
            "connected_surface": self.connected_surface,
        }


def parse_braid(text: str) -> BraidWord:
    """Parse ``"n: l1 l2 ..."`` into a :class:`BraidWord`.

    Raises :class:`InputSyntaxError` on a malformed header or a letter whose
    absolute value is zero or at least the strand count.
    """
    head, sep, body = text.partition(":")
    if not sep:
        raise InputSyntaxError("expected a strand count followed by ':'", 0)
    try:
        strands = int(head.strip())
    except ValueError:
        raise InputSyntaxError(
            f"strand count {head.strip()!r} is not an integer", 0
        ) from None
    if strands < 1:
        raise InputSyntaxError(f"strand count must be at least 1, got {strands}", 0)
    offset = len(head) + 1
    letters = []
    for match in re.finditer(r"\S+", body):
        token = match.group()
        at = offset + match.start()
        try:
            letter = int(token)
        except ValueError:
            raise InputSyntaxError(f"letter {token!r} is not an integer", at) from None
        if letter == 0 or abs(letter) >= strands:
            raise InputSyntaxError(
                f"letter {letter} is out of range for {strands} strands", at
            )
        letters.append(letter)
    return BraidWord(strands, tuple(letters))


def closure_components(braid: BraidWord) -> int:
    """Number of components of the braid closure.

    Each letter acts on strand positions as the transposition swapping the
    two strands it crosses; the component count is the number of cycles of
    the composed permutation.
    """
    perm = list(range(braid.strands))
    for letter in braid.letters:
        i = abs(letter) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen = [False] * braid.strands
    cycles = 0
    for start in range(braid.strands):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


def _strand_pieces(braid: BraidWord) -> list[int]:
    """Union-find labels grouping strands joined by at least one letter."""
    parent = list(range(braid.strands))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for letter in braid.letters:
        a = find(abs(letter) - 1)
        b = find(abs(letter))
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(braid.strands)]


def bennequin_invariants(braid: BraidWord) -> DiagramInvariants:
    """Invariants of the Seifert surface built from the braid diagram.

    The surface has one disk per strand and one band per letter, so its Euler
    characteristic is strands minus letters.  The free-rank upper bound is the
    first Betti number, summed over connected pieces of the surface.
    """
    n = braid.strands
    c = len(braid.letters)
    labels = _strand_pieces(braid)
    strand_sizes: dict[int, int] = {}
    for label in labels:
        strand_sizes[label] = strand_sizes.get(label, 0) + 1
    letter_sizes: dict[int, int] = dict.fromkeys(strand_sizes, 0)
    for letter in braid.letters:
        letter_sizes[labels[abs(letter) - 1]] += 1
    free_rank = sum(
        1 - (strand_sizes[label] - letter_sizes[label]) for label in strand_sizes
    )
    return DiagramInvariants(
        crossing_count=c,
        strand_count=n,
        closure_components=closure_components(braid),
        bennequin_chi=n - c,
        free_rank_upper=free_rank,
        connected_surface=len(strand_sizes) == 1,
    )


def greedy_destabilize(braid: BraidWord) -> BraidWord:
    """Greedily shrink a braid word without changing its closure.

    Two moves run to a fixpoint: free reduction (delete an adjacent pair of a
    generator and its inverse) and destabilization (when the top generator
    occurs exactly once in the word, delete that occurrence and drop the top
    strand).  Both preserve the closure, so the resulting strand and letter
    counts are upper bounds for the braid index and crossing number.  Strands
    that carry no letter are kept: deleting one would discard a split unknot
    component of the closure.
    """
    strands = braid.strands
    letters = list(braid.letters)
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(letters):
            if letters[i] == -letters[i + 1]:
                del letters[i : i + 2]
                changed = True
                i = max(i - 1, 0)
            else:
                i += 1
        while strands > 1:
            top = [k for k, letter in enumerate(letters) if abs(letter) == strands - 1]
            if len(top) != 1:
                break
            del letters[top[0]]
            strands -= 1
            changed = True
    return BraidWord(strands, tuple(letters))
