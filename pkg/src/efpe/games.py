"""Two-player extensive-form games: tree model, validation, and file format.

Games are finite trees of decision and terminal nodes. Decision nodes are
grouped into information sets owned by player 1 or 2; terminal nodes carry a
pair of exact rational payoffs. Chance nodes are not supported. The file
format is JSON with node objects
``{"kind": "decision", "player": 1, "infoset": "1.1",
   "actions": [{"name": "L", "child": ...}, ...]}``
and ``{"kind": "terminal", "payoffs": ["1", "-3/7"]}``; payoffs may be
integers, decimal strings, or rational strings and are converted exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .errors import GameFormatError

GAME_FORMAT_VERSION = 1

PLAYERS = (1, 2)


@dataclass(frozen=True)
class Terminal:
    payoffs: Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Decision:
    player: int
    infoset: str
    actions: Tuple[str, ...]
    children: Tuple["Node", ...]

    def child(self, action: str) -> "Node":
        return self.children[self.actions.index(action)]


Node = Union[Decision, Terminal]


@dataclass(frozen=True)
class Infoset:
    """All decision nodes a player cannot tell apart, with their shared actions."""

    player: int
    id: str
    actions: Tuple[str, ...]
    node_paths: Tuple[Tuple[str, ...], ...]


class Game:
    """A validated two-player extensive-form game.

    Immutable after construction. Structural invariants (single owner and
    identical actions per information set, globally unique information set
    identifiers, payoffs on every leaf) are enforced here; perfect recall is
    checked separately by validate_perfect_recall and enforced by parse_game.
    """

    def __init__(self, root: Node):
        self.root = root
        self.infosets: List[Infoset] = []
        self._by_id: Dict[str, Infoset] = {}
        self._validate()

    def _validate(self) -> None:
        # id -> (player, actions, [paths]); insertion order = DFS discovery
        found: Dict[str, Tuple[int, Tuple[str, ...], List[Tuple[str, ...]]]] = {}

        def walk(node: Node, path: Tuple[str, ...]) -> None:
            where = "/".join(path) or "root"
            if isinstance(node, Terminal):
                if len(node.payoffs) != 2:
                    raise GameFormatError("terminal at %s needs two payoffs" % where)
                return
            if node.player not in PLAYERS:
                raise GameFormatError(
                    "decision node at %s has player %r; only players 1 and 2 "
                    "are supported (no chance nodes)" % (where, node.player)
                )
            if not node.actions:
                raise GameFormatError("decision node at %s has no actions" % where)
            if len(set(node.actions)) != len(node.actions):
                raise GameFormatError(
                    "duplicate action name at %s in information set %r"
                    % (where, node.infoset)
                )
            if len(node.children) != len(node.actions):
                raise GameFormatError("action/child count mismatch at %s" % where)
            entry = found.get(node.infoset)
            if entry is None:
                found[node.infoset] = (node.player, node.actions, [path])
            else:
                player, actions, paths = entry
                if player != node.player:
                    raise GameFormatError(
                        "information set %r is owned by both players" % node.infoset
                    )
                if actions != node.actions:
                    raise GameFormatError(
                        "information set %r has inconsistent action lists"
                        % node.infoset
                    )
                paths.append(path)
            for a, child in zip(node.actions, node.children):
                walk(child, path + (a,))

        walk(self.root, ())
        for iset_id, (player, actions, paths) in found.items():
            iset = Infoset(player, iset_id, actions, tuple(paths))
            self.infosets.append(iset)
            self._by_id[iset_id] = iset

    def infosets_of(self, player: int) -> List[Infoset]:
        return [h for h in self.infosets if h.player == player]

    def infoset(self, iset_id: str) -> Infoset:
        return self._by_id[iset_id]

    def node_at(self, path: Tuple[str, ...]) -> Node:
        node = self.root
        for action in path:
            assert isinstance(node, Decision)
            node = node.child(action)
        return node

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Game) and self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)


# A behavioral strategy profile maps each information set id to a mapping
# from action name to an exact probability.
BehavioralProfile = Dict[str, Dict[str, Fraction]]


def validate_behavioral_profile(game: Game, profile: BehavioralProfile) -> None:
    """Check coverage, non-negativity, and exact per-infoset sums of 1."""
    for iset in game.infosets:
        dist = profile.get(iset.id)
        if dist is None:
            raise ValueError("profile is missing information set %r" % iset.id)
        if set(dist) != set(iset.actions):
            raise ValueError(
                "profile actions for %r do not match the game" % iset.id
            )
        total = Fraction(0)
        for a in iset.actions:
            p = dist[a]
            if p < 0:
                raise ValueError("negative probability at (%s, %s)" % (iset.id, a))
            total += p
        if total != 1:
            raise ValueError(
                "probabilities at %r sum to %s, not 1" % (iset.id, total)
            )


def uniform_profile(game: Game) -> BehavioralProfile:
    return {
        h.id: {a: Fraction(1, len(h.actions)) for a in h.actions}
        for h in game.infosets
    }


def validate_perfect_recall(game: Game) -> Tuple[bool, List[str]]:
    """True iff all nodes of each information set share the owner's history.

    The owner's history of a node is the sequence of (information set,
    action) pairs of the owning player along the path from the root.
    Diagnostics name each offending information set.
    """
    histories: Dict[str, Tuple[Tuple[str, str], ...]] = {}
    bad: Dict[str, bool] = {}

    def walk(node: Node, own: Dict[int, Tuple[Tuple[str, str], ...]]) -> None:
        if isinstance(node, Terminal):
            return
        hist = own[node.player]
        prev = histories.get(node.infoset)
        if prev is None:
            histories[node.infoset] = hist
        elif prev != hist:
            bad[node.infoset] = True
        for a, child in zip(node.actions, node.children):
            nxt = dict(own)
            nxt[node.player] = hist + ((node.infoset, a),)
            walk(child, nxt)

    walk(game.root, {1: (), 2: ()})
    diagnostics = [
        "information set %r is reached with different own histories" % iset_id
        for iset_id in bad
    ]
    return (not bad), diagnostics


# ---------------------------------------------------------------------------
# Parsing and serialization.

def parse_rational(value: object, where: str) -> Fraction:
    if isinstance(value, bool):
        raise GameFormatError("payoff at %s is a boolean" % where)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise GameFormatError(
                "payoff %r at %s is not a rational or decimal string"
                % (value, where)
            ) from None
    raise GameFormatError("payoff at %s has unsupported type" % where)


def _parse_node(obj: object, where: str) -> Node:
    if not isinstance(obj, dict):
        raise GameFormatError("node at %s must be an object" % where)
    kind = obj.get("kind")
    if kind == "terminal":
        payoffs = obj.get("payoffs")
        if not isinstance(payoffs, list) or len(payoffs) != 2:
            raise GameFormatError(
                "terminal at %s needs 'payoffs': [p1, p2]" % where
            )
        return Terminal(
            (
                parse_rational(payoffs[0], where),
                parse_rational(payoffs[1], where),
            )
        )
    if kind == "chance":
        raise GameFormatError(
            "chance node at %s: chance moves are not supported" % where
        )
    if kind != "decision":
        raise GameFormatError(
            "node at %s has kind %r; expected 'decision' or 'terminal'"
            % (where, kind)
        )
    player = obj.get("player")
    if player not in PLAYERS:
        raise GameFormatError(
            "decision node at %s has player %r; expected 1 or 2" % (where, player)
        )
    infoset = obj.get("infoset")
    if not isinstance(infoset, str) or not infoset:
        raise GameFormatError(
            "decision node at %s needs a nonempty 'infoset' string" % where
        )
    actions = obj.get("actions")
    if not isinstance(actions, list) or not actions:
        raise GameFormatError(
            "decision node at %s needs a nonempty 'actions' list" % where
        )
    names: List[str] = []
    children: List[Node] = []
    for k, act in enumerate(actions):
        if not isinstance(act, dict) or "name" not in act or "child" not in act:
            raise GameFormatError(
                "action %d at %s must be {'name', 'child'}" % (k, where)
            )
        name = act["name"]
        if not isinstance(name, str) or not name:
            raise GameFormatError(
                "action %d at %s needs a nonempty string name" % (k, where)
            )
        names.append(name)
        children.append(_parse_node(act["child"], where + "/" + name))
    return Decision(player, infoset, tuple(names), tuple(children))


def parse_game(text: str) -> Game:
    """Parse and fully validate a game document.

    Raises GameFormatError with a position for syntax errors and with a node
    path for semantic errors; perfect-recall violations are rejected.
    """
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise GameFormatError(
            "syntax error at line %d column %d: %s"
            % (exc.lineno, exc.colno, exc.msg)
        ) from None
    if not isinstance(doc, dict):
        raise GameFormatError("top level must be an object")
    version = doc.get("version", GAME_FORMAT_VERSION)
    if version != GAME_FORMAT_VERSION:
        raise GameFormatError("unsupported format version %r" % (version,))
    if doc.get("players", [1, 2]) not in ([1, 2], (1, 2)):
        raise GameFormatError("'players' must be [1, 2]")
    if "root" not in doc:
        raise GameFormatError("missing 'root' node")
    game = Game(_parse_node(doc["root"], "root"))
    ok, diagnostics = validate_perfect_recall(game)
    if not ok:
        raise GameFormatError("; ".join(diagnostics))
    return game


def _node_to_obj(node: Node) -> dict:
    if isinstance(node, Terminal):
        return {
            "kind": "terminal",
            "payoffs": [str(node.payoffs[0]), str(node.payoffs[1])],
        }
    return {
        "kind": "decision",
        "player": node.player,
        "infoset": node.infoset,
        "actions": [
            {"name": a, "child": _node_to_obj(c)}
            for a, c in zip(node.actions, node.children)
        ],
    }


def serialize_game(game: Game, indent: Optional[int] = 2) -> str:
    doc = {
        "version": GAME_FORMAT_VERSION,
        "players": [1, 2],
        "root": _node_to_obj(game.root),
    }
    return json.dumps(doc, indent=indent)


def load_game(path: str) -> Game:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())
