"""
Why Nash is not enough: perfection off the equilibrium path
===========================================================

A Nash equilibrium only constrains play where the profile actually goes;
behind a zero-probability branch, anything passes. An extensive-form
perfect equilibrium is the limit of equilibria of floored games, so every
information set is reached with positive probability along the way and
sloppy off-path play is filtered out. Two small games make the difference
concrete.
"""

from fractions import Fraction

from efpe import (
    check_nash,
    check_perturbed_equilibrium,
    parse_game,
    solve_efpe,
    solve_nash,
)

F = Fraction

LADDER = """
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


def describe(profile):
    return {
        h: {a: str(p) for a, p in acts.items()} for h, acts in profile.items()
    }


####################################################################
# Game one: every path that avoids r1 pays (1, 1). Playing L1 ends the
# game immediately, so player 2's choice between l1 and r1 is off the
# path, and a Nash equilibrium may let them "plan" the bad action r1.

ladder = parse_game(LADDER)
nash = solve_nash(ladder)
efpe = solve_efpe(ladder)

print("unperturbed solver:   value %s, behavior %s"
      % (tuple(map(str, nash.utilities)), describe(nash.profile)))
print("perfect equilibrium:  value %s, behavior %s"
      % (tuple(map(str, efpe.utilities)), describe(efpe.profile)))
print()

ok, _ = check_nash(ladder, nash.profile)
print("unperturbed solution passes the Nash check:", ok)
ok, _ = check_nash(ladder, efpe.profile)
print("perfect equilibrium also passes the Nash check:", ok)
print("supports at 2.1 differ:", nash.pi2["2.1"] != efpe.pi2["2.1"])
print()

####################################################################
# Under a floor eps, information set 2.1 is reached with probability
# eps^2 at least, so r1 costs real payoff and only l1 survives. The
# floored Nash requirement rejects the profile that leans on r1.

eps = F(1, 10)
bad = {
    "1.1": {"L1": F(9, 10), "R1": F(1, 10)},
    "1.2": {"L2": F(9, 10), "R2": F(1, 10)},
    "2.1": {"l1": F(1, 10), "r1": F(9, 10)},
}
ok, messages = check_perturbed_equilibrium(ladder, bad, eps)
print("floored profile leaning on r1 passes at eps = 1/10:", ok)
for m in messages:
    print("  reason:", m)
print()

####################################################################
# Game two: a solo decision tree where L1 locks in (1, 1) but the whole
# right subtree also pays (1, 1) no matter what. Committing to L1 is a
# Nash equilibrium. With floors, the branch after L1 leaks probability
# eps onto the payoff-0 action R2, so L1 earns strictly less than R1 and
# the perfect equilibrium sends the player right.

TRAP = """
{
  "version": 1,
  "players": [1, 2],
  "root": {
    "kind": "decision", "player": 1, "infoset": "1.1",
    "actions": [
      {"name": "L1", "child": {
        "kind": "decision", "player": 1, "infoset": "1.2",
        "actions": [
          {"name": "L2", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
          {"name": "R2", "child": {"kind": "terminal", "payoffs": ["0", "0"]}}
        ]
      }},
      {"name": "R1", "child": {
        "kind": "decision", "player": 1, "infoset": "1.3",
        "actions": [
          {"name": "L3", "child": {
            "kind": "decision", "player": 1, "infoset": "1.4",
            "actions": [
              {"name": "L4", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
              {"name": "R4", "child": {"kind": "terminal", "payoffs": ["1", "1"]}}
            ]
          }},
          {"name": "R3", "child": {
            "kind": "decision", "player": 1, "infoset": "1.5",
            "actions": [
              {"name": "L5", "child": {"kind": "terminal", "payoffs": ["1", "1"]}},
              {"name": "R5", "child": {"kind": "terminal", "payoffs": ["1", "1"]}}
            ]
          }}
        ]
      }}
    ]
  }
}
"""

trap = parse_game(TRAP)
pure_left = {
    "1.1": {"L1": F(1), "R1": F(0)},
    "1.2": {"L2": F(1), "R2": F(0)},
    "1.3": {"L3": F(1, 2), "R3": F(1, 2)},
    "1.4": {"L4": F(1, 2), "R4": F(1, 2)},
    "1.5": {"L5": F(1, 2), "R5": F(1, 2)},
}
ok, _ = check_nash(trap, pure_left)
print("committing to L1 is a Nash equilibrium:", ok)

res = solve_efpe(trap)
print("perfect equilibrium instead plays:", describe(res.pi1)["1.1"])

floored_left = dict(pure_left)
floored_left["1.1"] = {"L1": F(9, 10), "R1": F(1, 10)}
floored_left["1.2"] = {"L2": F(9, 10), "R2": F(1, 10)}
ok, messages = check_perturbed_equilibrium(trap, floored_left, F(1, 10))
print("L1 at its maximal floored weight passes at eps = 1/10:", ok)
for m in messages:
    print("  reason:", m)
