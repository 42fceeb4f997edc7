"""Tremble floors as matrix constraints on realization plans.

Requiring every action to get probability at least eps is the same as
requiring r(qa) >= eps * r(q) for every sequence q extended by an action a.
Collecting those constraints gives a square lower-triangular matrix R(eps)
with unit diagonal and a single -eps per non-root row, placed in the parent
sequence's column; the constraint set is then R(eps) r >= 0. This module
builds R(eps), its exact inverse, and the uniformly-split plan that shows
the constraints are feasible whenever eps <= 1/nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .games import Game
from .poly import EPS, ONE, ZERO, Poly
from .polymatrix import PolyMatrix
from .seqform import RealizationPlan, SequenceForm


@dataclass(frozen=True)
class PerturbationMatrix:
    """R(eps) for one player, over that player's sequence order."""

    player: int
    matrix: PolyMatrix


def build_R(sf: SequenceForm, player: int, schedule: str = "uniform") -> PerturbationMatrix:
    """Constraint matrix for the uniform floor l(a) = eps.

    Row 0 is the empty sequence (plain non-negativity); the row of sequence
    qa has 1 on the diagonal and -eps in the column of q. Only the uniform
    schedule is supported.
    """
    if schedule != "uniform":
        raise ValueError("unsupported perturbation schedule: %r" % (schedule,))
    ps = sf.players[player - 1]
    n = len(ps)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = ONE
    for idx in range(1, n):
        parent, _, _ = ps.parent[idx]
        rows[idx][parent] = -EPS
    return PerturbationMatrix(player, PolyMatrix(rows))


def invert_R(R: PerturbationMatrix) -> PolyMatrix:
    """Exact inverse of a perturbation matrix.

    Built row by row from the block form: if the last row of R is
    (b', 1) on top of a smaller perturbation matrix R', the last row of the
    inverse is (-b' R'^-1, 1). Since b' is zero except for -eps in the
    parent column, row k of the inverse is eps times the parent's row plus
    the unit diagonal. The result is I + eps*E with E lower triangular and
    all coefficients non-negative integers.
    """
    m = R.matrix
    n = m.nrows
    inv: List[List[Poly]] = [[ZERO] * n for _ in range(n)]
    for k in range(n):
        parent = None
        for j in range(k):
            if m.rows[k][j]:
                parent = j
                break
        if parent is not None:
            prow = inv[parent]
            for j in range(parent + 1):
                if prow[j]:
                    inv[k][j] = prow[j] * EPS
        inv[k][k] = ONE
    return PolyMatrix(inv)


def uniform_feasible_plan(sf: SequenceForm, player: int) -> RealizationPlan:
    """The plan that splits every information set uniformly.

    Satisfies R(eps) y >= 0 for every 0 <= eps <= 1/nu because each child
    gets a 1/|actions| share of its parent.
    """
    ps = sf.players[player - 1]
    y = [Fraction(0)] * len(ps)
    y[0] = Fraction(1)
    for h in ps.infoset_ids:
        parent = ps.infoset_parent[h]
        children = ps.infoset_children[h]
        share = Fraction(1, len(children))
        for _, child in children:
            y[child] = y[parent] * share
    return y


def max_branching(game: Game) -> int:
    """nu: the largest number of actions at any information set (at least 1)."""
    return max((len(h.actions) for h in game.infosets), default=1)
