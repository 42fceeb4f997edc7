"""Sequence form: constraint matrices, payoff matrices, and plan conversions."""

import random
from fractions import Fraction

import pytest

from efpe import (
    Terminal,
    behavioral_to_realization,
    build_sequence_form,
    expected_utilities,
    plans_from_profile,
    profile_from_plans,
    realization_to_behavioral,
    uniform_profile,
    validate_realization_plan,
)
from gengames import random_game, random_profile

F = Fraction


def tree_walk_utilities(game, profile):
    """Independent expected-utility oracle: a direct recursion on the tree."""

    def rec(node):
        if isinstance(node, Terminal):
            return node.payoffs
        total = (F(0), F(0))
        for name, child in zip(node.actions, node.children):
            p = profile[node.infoset][name]
            sub = rec(child)
            total = (total[0] + p * sub[0], total[1] + p * sub[1])
        return total

    return rec(game.root)


class TestLadderStructure:
    def test_sequence_order_and_labels(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        labels1 = [sf.sequence_label(1, i) for i in range(sf.n_sequences(1))]
        assert labels1 == [
            "",
            "1.1:L1",
            "1.1:R1",
            "1.1:R1;1.2:L2",
            "1.1:R1;1.2:R2",
        ]
        labels2 = [sf.sequence_label(2, i) for i in range(sf.n_sequences(2))]
        assert labels2 == ["", "2.1:l1", "2.1:r1"]

    def test_constraint_matrices(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        assert sf.F[0] == [
            [1, 0, 0, 0, 0],
            [1, -1, -1, 0, 0],
            [0, 0, 1, -1, -1],
        ]
        assert sf.F[1] == [[1, 0, 0], [1, -1, -1]]
        assert sf.f_vector(1) == [1, 0, 0]
        assert sf.f_vector(2) == [1, 0]

    def test_terminal_pairs_and_payoffs(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        assert sf.terminal_pairs == {
            (1, 0): (F(1), F(1)),
            (3, 0): (F(1), F(1)),
            (4, 1): (F(1), F(1)),
            (4, 2): (F(0), F(0)),
        }
        assert sf.U[0][1][0] == 1
        assert sf.U[0][4][2] == 0
        assert sf.U[1][4][1] == 1

    def test_offset_shifts_terminal_entries(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        shifted = sf.with_offset(F(-3))
        assert shifted.offset == -3
        assert shifted.U[0][1][0] == sf.U[0][1][0] - 3
        assert shifted.U[1][4][2] == sf.U[1][4][2] - 3
        assert shifted.F == sf.F
        assert shifted.terminal_pairs == sf.terminal_pairs

    def test_trivial_game(self, trivial_game):
        sf = build_sequence_form(trivial_game)
        assert sf.n_sequences(1) == 1
        assert sf.n_sequences(2) == 1
        assert sf.terminal_pairs == {(0, 0): (F(3), F(-2))}


class TestPlanConversions:
    def test_behavioral_to_realization_ladder(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        profile = uniform_profile(ladder_game)
        r1 = behavioral_to_realization(sf, 1, profile)
        assert r1 == [F(1), F(1, 2), F(1, 2), F(1, 4), F(1, 4)]
        r2 = behavioral_to_realization(sf, 2, profile)
        assert r2 == [F(1), F(1, 2), F(1, 2)]

    def test_validate_realization_plan(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        validate_realization_plan(sf, 1, [F(1), F(1), F(0), F(0), F(0)])
        with pytest.raises(ValueError):
            validate_realization_plan(sf, 1, [F(1), F(1), F(1), F(0), F(0)])
        with pytest.raises(ValueError):
            validate_realization_plan(sf, 2, [F(1), F(2), F(-1)])
        with pytest.raises(ValueError):
            validate_realization_plan(sf, 2, [F(1), F(1, 2)])

    def test_unreached_sets_become_uniform(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        profile = realization_to_behavioral(sf, 1, [F(1), F(1), F(0), F(0), F(0)])
        assert profile["1.1"] == {"L1": F(1), "R1": F(0)}
        assert profile["1.2"] == {"L2": F(1, 2), "R2": F(1, 2)}

    def test_roundtrip_on_random_games(self):
        rng = random.Random(42)
        for seed in range(30):
            game = random_game(seed)
            sf = build_sequence_form(game)
            profile = random_profile(rng, game, interior=True)
            r1, r2 = plans_from_profile(sf, profile)
            validate_realization_plan(sf, 1, r1)
            validate_realization_plan(sf, 2, r2)
            back = profile_from_plans(sf, r1, r2)
            assert back == profile

    def test_flow_conservation_on_random_games(self):
        rng = random.Random(7)
        for seed in range(30):
            game = random_game(seed)
            sf = build_sequence_form(game)
            profile = random_profile(rng, game)
            for player in (1, 2):
                r = behavioral_to_realization(sf, player, profile)
                rows = sf.F[player - 1]
                f = sf.f_vector(player)
                for row, rhs in zip(rows, f):
                    assert sum(c * x for c, x in zip(row, r)) == rhs
                assert all(x >= 0 for x in r)


class TestExpectedUtilities:
    def test_matches_tree_walk_on_fixtures(self, ladder_game, trap_game,
                                           pennies_game, dominant_game):
        for game in (ladder_game, trap_game, pennies_game, dominant_game):
            sf = build_sequence_form(game)
            profile = uniform_profile(game)
            r1, r2 = plans_from_profile(sf, profile)
            assert expected_utilities(sf, r1, r2) == tree_walk_utilities(game, profile)

    def test_matches_tree_walk_on_random_games(self):
        rng = random.Random(3)
        for seed in range(40):
            game = random_game(seed)
            sf = build_sequence_form(game)
            profile = random_profile(rng, game)
            r1, r2 = plans_from_profile(sf, profile)
            assert expected_utilities(sf, r1, r2) == tree_walk_utilities(game, profile)

    def test_offset_shifts_utilities_by_constant(self, ladder_game):
        sf = build_sequence_form(ladder_game)
        shifted = sf.with_offset(F(-5))
        profile = uniform_profile(ladder_game)
        r1, r2 = plans_from_profile(sf, profile)
        u = expected_utilities(sf, r1, r2)
        v = expected_utilities(shifted, r1, r2)
        assert v == (u[0] - 5, u[1] - 5)
