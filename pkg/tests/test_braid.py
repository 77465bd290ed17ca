"""Braid words: parsing, closure components, surface invariants, reduction."""

import random

import pytest

from mnov import (
    BraidWord,
    InputSyntaxError,
    bennequin_invariants,
    closure_components,
    greedy_destabilize,
    parse_braid,
)


class TestParsing:
    def test_trefoil(self):
        braid = parse_braid("2: 1 1 1")
        assert braid.strands == 2
        assert braid.letters == (1, 1, 1)

    def test_empty_word(self):
        braid = parse_braid("3:")
        assert braid.strands == 3
        assert braid.letters == ()

    def test_negative_letters(self):
        assert parse_braid("3: -1 2 -2").letters == (-1, 2, -2)

    def test_unparse_round_trip(self):
        for text in ("2: 1 1 1", "3:", "4: 1 -2 3 -3"):
            braid = parse_braid(text)
            assert parse_braid(braid.unparse()) == braid

    def test_missing_header(self):
        with pytest.raises(InputSyntaxError):
            parse_braid("1 2 3")

    def test_zero_letter_rejected(self):
        with pytest.raises(InputSyntaxError):
            parse_braid("3: 1 0 2")

    def test_letter_out_of_range(self):
        with pytest.raises(InputSyntaxError):
            parse_braid("3: 1 3")
        with pytest.raises(InputSyntaxError):
            parse_braid("1: 1")

    def test_bad_strand_count(self):
        with pytest.raises(InputSyntaxError):
            parse_braid("0: ")
        with pytest.raises(InputSyntaxError):
            parse_braid("x: 1")


class TestClosureComponents:
    def test_knots_and_links(self):
        assert closure_components(parse_braid("2: 1 1 1")) == 1
        assert closure_components(parse_braid("2:")) == 2
        assert closure_components(parse_braid("3: 1 2")) == 1
        assert closure_components(parse_braid("2: 1 1")) == 2
        assert closure_components(parse_braid("1:")) == 1

    def test_two_component_word(self):
        assert closure_components(parse_braid("3: 1 1 2 2 1")) == 2

    def test_sign_blind(self):
        assert closure_components(parse_braid("3: -1 -2")) == 1

    def test_rotation_invariance(self):
        rng = random.Random(9)
        for _ in range(120):
            n = rng.randint(1, 5)
            letters = [
                rng.choice([-1, 1]) * rng.randint(1, max(1, n - 1))
                for _ in range(rng.randint(0, 8))
            ] if n > 1 else []
            braid = BraidWord(n, tuple(letters))
            base = closure_components(braid)
            assert 1 <= base <= n
            for shift in range(1, len(letters) + 1):
                rotated = BraidWord(
                    n, tuple(letters[shift:] + letters[:shift])
                )
                assert closure_components(rotated) == base


class TestBennequinInvariants:
    def test_trefoil_surface(self):
        inv = bennequin_invariants(parse_braid("2: 1 1 1"))
        assert inv.crossing_count == 3
        assert inv.strand_count == 2
        assert inv.closure_components == 1
        assert inv.bennequin_chi == -1
        assert inv.free_rank_upper == 2
        assert inv.connected_surface

    def test_disjoint_disks(self):
        inv = bennequin_invariants(parse_braid("2:"))
        assert inv.bennequin_chi == 2
        assert inv.free_rank_upper == 0
        assert not inv.connected_surface

    def test_split_pieces_add_ranks(self):
        inv = bennequin_invariants(parse_braid("4: 1 1 3 3"))
        assert inv.closure_components == 4
        assert not inv.connected_surface
        assert inv.free_rank_upper == 2

    def test_to_dict_fields(self):
        d = bennequin_invariants(parse_braid("2: 1 1 1")).to_dict()
        assert d["crossing_count"] == 3
        assert d["bennequin_chi"] == -1
        assert d["free_rank_upper"] == 2


class TestGreedyDestabilize:
    def test_trefoil_is_irreducible(self):
        assert greedy_destabilize(parse_braid("2: 1 1 1")).unparse() == "2: 1 1 1"

    def test_free_reduction_then_markov(self):
        assert greedy_destabilize(parse_braid("4: 1 2 -2 3")).unparse() == "3: 1"

    def test_destabilization_chain(self):
        assert greedy_destabilize(parse_braid("3: 1 2")).unparse() == "1:"

    def test_negative_markov_move(self):
        assert greedy_destabilize(parse_braid("2: -1")).unparse() == "1:"

    def test_split_unknot_strand_is_kept(self):
        assert greedy_destabilize(parse_braid("2: 1 -1")).unparse() == "2:"

    def test_top_generator_twice_blocks_markov(self):
        assert greedy_destabilize(parse_braid("3: 1 1")).unparse() == "3: 1 1"
        assert greedy_destabilize(parse_braid("2: 1 1 1 -1")).unparse() == "2: 1 1"

    def test_reduction_preserves_closure(self):
        rng = random.Random(10)
        for _ in range(200):
            n = rng.randint(1, 5)
            letters = [
                rng.choice([-1, 1]) * rng.randint(1, max(1, n - 1))
                for _ in range(rng.randint(0, 10))
            ] if n > 1 else []
            braid = BraidWord(n, tuple(letters))
            reduced = greedy_destabilize(braid)
            assert closure_components(reduced) == closure_components(braid)
            assert len(reduced.letters) <= len(braid.letters)
            assert reduced.strands <= braid.strands
            assert greedy_destabilize(reduced) == reduced
