"""Shared fixtures: small hand-built games with known equilibria."""

import sys
from pathlib import Path

import pytest

from efpe import Game, parse_game

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"

if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))


def load_game(name: str) -> Game:
    return parse_game((DATA_DIR / name).read_text())


@pytest.fixture
def ladder_game() -> Game:
    """Three-level game whose unique perfect limit differs from a Nash point.

    Player 1 chooses twice in a row between taking 1 now and passing; after
    two passes player 2 chooses between 1 for both and 0 for both. Every
    path of take-actions is a Nash equilibrium, but trembles force each
    player to keep preferring the payoff-1 action at every level.
    """
    return load_game("ladder.json")


@pytest.fixture
def trap_game() -> Game:
    """One-player game with a risky branch and a uniformly safe branch.

    The left branch reaches a second choice where one mistake pays 0; the
    right branch pays 1 no matter what happens later. Both branches give 1
    under optimal play, so going left is a Nash equilibrium, yet any
    trembling-hand solution must go right.
    """
    return load_game("trap.json")


@pytest.fixture
def pennies_game() -> Game:
    """Matching pennies in tree form; player 2 moves inside one infoset."""
    return load_game("matching_pennies.json")


@pytest.fixture
def dominant_game() -> Game:
    """Each player has a strictly dominant action, so the solution is pure."""
    return load_game("dominant.json")


@pytest.fixture
def trivial_game() -> Game:
    """A single terminal node; nobody moves."""
    return load_game("trivial.json")
