"""
Equilibria under execution uncertainty: solving at a fixed floor
================================================================

Besides taking the vanishing-floor limit, the solver can stop at any
fixed floor eps and return an exact equilibrium of that floored game: a
model of players whose hands tremble, executing every action with
probability at least eps. This script sweeps the floor, watches the
equilibrium move, and cross-checks one solution against an exhaustive
grid search.
"""

from fractions import Fraction

from efpe import (
    EpsilonRangeError,
    brute_force_perturbed_ne,
    check_perturbed_equilibrium,
    parse_game,
    solve_perturbed,
)

F = Fraction

GAME = """
{
  "version": 1,
  "players": [1, 2],
  "root": {
    "kind": "decision", "player": 1, "infoset": "1.1",
    "actions": [
      {"name": "L1", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
      {"name": "R1", "child": {
        "kind": "decision", "player": 1, "infoset": "1.2",
        "actions": [
          {"name": "L2", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
          {"name": "R2", "child": {
            "kind": "decision", "player": 2, "infoset": "2.1",
            "actions": [
              {"name": "l1", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
              {"name": "r1", "child": {"kind": "terminal", "payoffs": ["0", "0"]}}
            ]
          }}
        ]
      }}
    ]
  }
}
"""

game = parse_game(GAME)

####################################################################
# Sweep the floor. At every eps each action keeps probability >= eps, so
# the dominated actions sit exactly on the floor and the best replies
# absorb the rest. The realization plans are exact rationals in eps.

for eps in (F(1, 4), F(1, 10), F(1, 100)):
    res = solve_perturbed(game, eps)
    ok, messages = check_perturbed_equilibrium(game, res.profile, eps)
    print("eps = %s" % eps)
    print("  behavior at 1.1:", {a: str(p) for a, p in res.pi1["1.1"].items()})
    print("  behavior at 2.1:", {a: str(p) for a, p in res.pi2["2.1"].items()})
    print("  plan of player 1:", [str(x) for x in res.r1])
    print("  expected utilities:", tuple(map(str, res.utilities)))
    print("  passes the floored equilibrium check:", ok)
    assert ok, messages
print()

####################################################################
# Floors above 1 / (largest branching factor) cannot sum to one and are
# rejected up front.

try:
    solve_perturbed(game, F(2, 3))
except EpsilonRangeError as exc:
    print("eps = 2/3 rejected:", exc)
print()

####################################################################
# Independent oracle: enumerate every behavioral profile on the 1/10
# grid and keep those that satisfy the floored equilibrium conditions.
# The solver's answer at eps = 1/10 is exactly the grid's only survivor.

eps = F(1, 10)
res = solve_perturbed(game, eps)
grid = brute_force_perturbed_ne(game, eps, 10)
print("grid equilibria at eps = 1/10:", len(grid))
print("solver's profile is on the list:", res.profile in grid)
for h, acts in sorted(grid[0].items()):
    print("  %s: %s" % (h, {a: str(p) for a, p in acts.items()}))
