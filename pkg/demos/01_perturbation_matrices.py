"""
Probability floors as symbolic perturbation matrices
====================================================

A behavioral floor says: every action at every information set must keep
probability at least eps. In the sequence form this becomes one linear
constraint per sequence, r(qa) >= eps * r(q), and the whole family of
constraints is a unit lower triangular matrix R(eps) with polynomial
entries. This script builds R(eps) and its exact inverse for a small game
and shows what the entries mean.
"""

from fractions import Fraction

from efpe import (
    build_R,
    build_sequence_form,
    format_poly,
    invert_R,
    max_branching,
    parse_game,
)

####################################################################
# The game: player 1 chooses L1 or R1; after R1 they choose again; after
# R1-R2 player 2 moves. Payoffs are (1, 1) everywhere except after r1.

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
sf = build_sequence_form(game)


def show(title, matrix, labels):
    print(title)
    cells = [[format_poly(p) for p in row] for row in matrix.rows]
    width = max(len(c) for row in cells for c in row)
    width = max(width, max(len(l) for l in labels))
    print("  %s" % "  ".join(l.rjust(width) for l in labels))
    for label, row in zip(labels, cells):
        print("  %s | %s" % (label.rjust(width), "  ".join(c.rjust(width) for c in row)))
    print()


####################################################################
# Each player's sequences, in tree order: the empty sequence first, then
# every sequence before its extensions.

labels1 = [sf.sequence_label(1, q) or "(empty)" for q in range(sf.n_sequences(1))]
labels2 = [sf.sequence_label(2, q) or "(empty)" for q in range(sf.n_sequences(2))]
print("player 1 sequences:", labels1)
print("player 2 sequences:", labels2)
print()

####################################################################
# R(eps) row by row. Row 0 is plain non-negativity of the empty sequence;
# the row of a sequence qa has +1 on its own column and -eps on its
# parent's column, so R(eps) r >= 0 is exactly r(qa) >= eps * r(q).

R1 = build_R(sf, 1)
R2 = build_R(sf, 2)
show("R1(eps), player 1:", R1.matrix, labels1)
show("R2(eps), player 2:", R2.matrix, labels2)

####################################################################
# The inverse is integral with non-negative entries: position (q, p)
# holds eps^k when p is the k-th prefix of q on its ancestor chain, and 0
# otherwise. Substituting r = R(eps)^-1 x turns the floored game into a
# plain complementarity system in the residual variables x >= 0.

Rinv1 = invert_R(R1)
show("R1(eps)^-1:", Rinv1, labels1)

####################################################################
# Floors are only satisfiable while each information set can give eps to
# every action: eps <= 1 / (largest number of actions anywhere).

nu = max_branching(game)
print("largest branching factor:", nu)
print("feasible floor range: 0 < eps <= 1/%d" % nu)

eps = Fraction(1, 10)
r = [Fraction(1), Fraction(9, 10), Fraction(1, 10), Fraction(9, 100), Fraction(1, 100)]
slack = [
    sum(p(eps) * x for p, x in zip(row, r))
    for row in R1.matrix.rows
]
print()
print("example plan for player 1 at eps = 1/10:", [str(x) for x in r])
print("floor slack R1(1/10) r per sequence:", [str(s) for s in slack])
print("all floors hold:", all(s >= 0 for s in slack))
