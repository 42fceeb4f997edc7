"""Sequence-form representation of a two-player extensive-form game.

A sequence of player i is the ordered list of (information set, action)
pairs the player takes along a path; the empty sequence has index 0.
Sequences are indexed in depth-first discovery order, so every sequence
appears after the sequence it extends. Realization plans are vectors over
sequences constrained by F r = f with f = (1, 0, ..., 0); payoffs live in
two |Q1| x |Q2| matrices with nonzero entries only at pairs of sequences
that reach a leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import GameFormatError
from .games import BehavioralProfile, Decision, Game, Terminal

SeqKey = Tuple[Tuple[str, str], ...]  # ((infoset, action), ...)


@dataclass
class PlayerSequences:
    """Per-player sequence bookkeeping."""

    sequences: List[SeqKey] = field(default_factory=lambda: [()])
    index: Dict[SeqKey, int] = field(default_factory=lambda: {(): 0})
    # sequence idx (>=1) -> (parent sequence idx, infoset id, action)
    parent: Dict[int, Tuple[int, str, str]] = field(default_factory=dict)
    infoset_ids: List[str] = field(default_factory=list)
    infoset_parent: Dict[str, int] = field(default_factory=dict)
    infoset_children: Dict[str, List[Tuple[str, int]]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.sequences)


class SequenceForm:
    """Immutable sequence-form data for both players."""

    def __init__(
        self,
        game: Game,
        players: Tuple[PlayerSequences, PlayerSequences],
        terminal_pairs: Dict[Tuple[int, int], Tuple[Fraction, Fraction]],
        offset: Fraction = Fraction(0),
    ):
        self.game = game
        self.players = players
        self.terminal_pairs = terminal_pairs
        self.offset = offset
        self.F = (self._constraints(1), self._constraints(2))
        n1, n2 = len(players[0]), len(players[1])
        u1 = [[Fraction(0)] * n2 for _ in range(n1)]
        u2 = [[Fraction(0)] * n2 for _ in range(n1)]
        for (i1, i2), (p1, p2) in terminal_pairs.items():
            u1[i1][i2] += p1 + offset
            u2[i1][i2] += p2 + offset
        self.U = (u1, u2)

    def _constraints(self, player: int) -> List[List[int]]:
        ps = self.players[player - 1]
        n = len(ps)
        rows = [[0] * n]
        rows[0][0] = 1
        for h in ps.infoset_ids:
            row = [0] * n
            row[ps.infoset_parent[h]] = 1
            for _, child in ps.infoset_children[h]:
                row[child] = -1
            rows.append(row)
        return rows

    def n_sequences(self, player: int) -> int:
        return len(self.players[player - 1])

    def n_infosets(self, player: int) -> int:
        return len(self.players[player - 1].infoset_ids)

    def f_vector(self, player: int) -> List[int]:
        return [1] + [0] * self.n_infosets(player)

    def sequence_label(self, player: int, idx: int) -> str:
        key = self.players[player - 1].sequences[idx]
        return ";".join("%s:%s" % (h, a) for h, a in key)

    def with_offset(self, delta: Fraction) -> "SequenceForm":
        return SequenceForm(
            self.game, self.players, self.terminal_pairs, self.offset + delta
        )


def build_sequence_form(game: Game) -> SequenceForm:
    """Build sequences, constraints, and payoff matrices from the tree.

    Raises GameFormatError when an information set is reached under two
    different own sequences (a perfect-recall violation).
    """
    players = (PlayerSequences(), PlayerSequences())
    terminal_pairs: Dict[Tuple[int, int], Tuple[Fraction, Fraction]] = {}

    def walk(node, s1: int, s2: int) -> None:
        if isinstance(node, Terminal):
            key = (s1, s2)
            if key in terminal_pairs:
                old = terminal_pairs[key]
                terminal_pairs[key] = (
                    old[0] + node.payoffs[0],
                    old[1] + node.payoffs[1],
                )
            else:
                terminal_pairs[key] = node.payoffs
            return
        assert isinstance(node, Decision)
        ps = players[node.player - 1]
        own = s1 if node.player == 1 else s2
        h = node.infoset
        if h in ps.infoset_parent:
            if ps.infoset_parent[h] != own:
                raise GameFormatError(
                    "information set %r is reached under two different own "
                    "sequences; the game lacks perfect recall" % h
                )
        else:
            ps.infoset_ids.append(h)
            ps.infoset_parent[h] = own
            children: List[Tuple[str, int]] = []
            base = ps.sequences[own]
            for a in node.actions:
                key = base + ((h, a),)
                idx = len(ps.sequences)
                ps.sequences.append(key)
                ps.index[key] = idx
                ps.parent[idx] = (own, h, a)
                children.append((a, idx))
            ps.infoset_children[h] = children
        child_idx = dict(ps.infoset_children[h])
        for a, child in zip(node.actions, node.children):
            nxt = child_idx[a]
            if node.player == 1:
                walk(child, nxt, s2)
            else:
                walk(child, s1, nxt)

    walk(game.root, 0, 0)
    return SequenceForm(game, players, terminal_pairs)


# ---------------------------------------------------------------------------
# Realization plans and behavioral strategies.

RealizationPlan = List[Fraction]


def validate_realization_plan(
    sf: SequenceForm, player: int, r: Sequence[Fraction]
) -> None:
    ps = sf.players[player - 1]
    if len(r) != len(ps):
        raise ValueError("plan length mismatch")
    if any(x < 0 for x in r):
        raise ValueError("negative plan entry")
    f = sf.f_vector(player)
    for row, rhs in zip(sf.F[player - 1], f):
        if sum(c * x for c, x in zip(row, r) if c) != rhs:
            raise ValueError("plan violates the flow constraints")


def behavioral_to_realization(
    sf: SequenceForm, player: int, profile: BehavioralProfile
) -> RealizationPlan:
    """r(qa) = r(q) * pi(a), top down; the result satisfies F r = f exactly."""
    ps = sf.players[player - 1]
    r = [Fraction(0)] * len(ps)
    r[0] = Fraction(1)
    for idx in range(1, len(ps)):
        parent, h, a = ps.parent[idx]
        r[idx] = r[parent] * profile[h][a]
    return r


def realization_to_behavioral(
    sf: SequenceForm, player: int, r: Sequence[Fraction]
) -> Dict[str, Dict[str, Fraction]]:
    """pi(a) = r(qa)/r(q) where defined; uniform at unreached infosets."""
    ps = sf.players[player - 1]
    out: Dict[str, Dict[str, Fraction]] = {}
    for h in ps.infoset_ids:
        mass = r[ps.infoset_parent[h]]
        children = ps.infoset_children[h]
        if mass > 0:
            out[h] = {a: r[child] / mass for a, child in children}
        else:
            out[h] = {a: Fraction(1, len(children)) for a, _ in children}
    return out


def profile_from_plans(
    sf: SequenceForm, r1: Sequence[Fraction], r2: Sequence[Fraction]
) -> BehavioralProfile:
    profile = realization_to_behavioral(sf, 1, r1)
    profile.update(realization_to_behavioral(sf, 2, r2))
    return profile


def plans_from_profile(
    sf: SequenceForm, profile: BehavioralProfile
) -> Tuple[RealizationPlan, RealizationPlan]:
    return (
        behavioral_to_realization(sf, 1, profile),
        behavioral_to_realization(sf, 2, profile),
    )


def expected_utilities(
    sf: SequenceForm, r1: Sequence[Fraction], r2: Sequence[Fraction]
) -> Tuple[Fraction, Fraction]:
    """(r1' U1 r2, r1' U2 r2), summed over terminal pairs only."""
    eu1 = Fraction(0)
    eu2 = Fraction(0)
    u1, u2 = sf.U
    for (i1, i2) in sf.terminal_pairs:
        weight = r1[i1] * r2[i2]
        if weight:
            eu1 += weight * u1[i1][i2]
            eu2 += weight * u2[i1][i2]
    return eu1, eu2
