"""Independent equilibrium checks and a brute-force oracle.

Everything here works on the agent form: each information set is treated as
its own player who controls only the local behavior, everything else held
fixed. A behavioral profile is an equilibrium of the eps-floored game
exactly when every action respects the floor and every action played above
the floor maximizes its agent's expected utility; with eps = 0 the same
condition is an ordinary Nash check. Utilities are accumulated leaf by leaf
with products that skip the local edge, so profiles containing zeros never
require division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil
from typing import Dict, List, Sequence, Tuple

from .errors import EpsilonRangeError, GameFormatError
from .games import (
    BehavioralProfile,
    Decision,
    Game,
    Terminal,
    validate_behavioral_profile,
)
from .limits import (
    EquilibriumResult,
    Pipeline,
    basis_from_strings,
    decode_at,
    extract_limit,
    lp_basis_from_strings,
    prepare,
    sequence_labels,
    _plan_limits,
)
from .lp import ZeroSumLp, build_zero_sum_lp, certify_zero_sum, is_zero_sum
from .polymatrix import solve_linear_system
from .seqform import (
    behavioral_to_realization,
    build_sequence_form,
    expected_utilities,
    realization_to_behavioral,
    validate_realization_plan,
)

__all__ = [
    "AgentFormStats",
    "agent_form_utilities",
    "check_perturbed_equilibrium",
    "check_nash",
    "check_affine_relation",
    "brute_force_perturbed_ne",
    "verify_result",
]


@dataclass
class AgentFormStats:
    """Expected utilities of the profile and of every local deviation.

    action_value[h][a] is the owner's expected utility when the agent at h
    switches to pure action a and every other edge probability in the whole
    tree (including the same player's other information sets) stays put.
    through[h] is the owner's utility mass flowing through h under the
    profile itself.
    """

    eu: Tuple[Fraction, Fraction]
    action_value: Dict[str, Dict[str, Fraction]]
    through: Dict[str, Fraction]


def agent_form_utilities(game: Game, profile: BehavioralProfile) -> AgentFormStats:
    """One tree walk computing all local deviation values without division.

    At each leaf the path's prefix and suffix probability products give, for
    every edge on the path, the probability of the leaf with that single
    edge removed; those weighted payoffs accumulate per (infoset, action).
    """
    validate_behavioral_profile(game, profile)
    eu = [Fraction(0), Fraction(0)]
    local: Dict[str, Dict[str, Fraction]] = {
        iset.id: {a: Fraction(0) for a in iset.actions} for iset in game.infosets
    }
    through: Dict[str, Fraction] = {iset.id: Fraction(0) for iset in game.infosets}
    owner = {iset.id: iset.player for iset in game.infosets}

    edges: List[Tuple[str, str, Fraction]] = []

    def walk(node) -> None:
        if isinstance(node, Terminal):
            depth = len(edges)
            prefix = [Fraction(1)] * (depth + 1)
            for j, (_, _, p) in enumerate(edges):
                prefix[j + 1] = prefix[j] * p
            suffix = [Fraction(1)] * (depth + 1)
            for j in range(depth - 1, -1, -1):
                suffix[j] = edges[j][2] * suffix[j + 1]
            reach = prefix[depth]
            eu[0] += node.payoffs[0] * reach
            eu[1] += node.payoffs[1] * reach
            for j, (h, a, _) in enumerate(edges):
                pay = node.payoffs[owner[h] - 1]
                skip = prefix[j] * suffix[j + 1]
                if skip:
                    local[h][a] += pay * skip
                if reach:
                    through[h] += pay * reach
            return
        assert isinstance(node, Decision)
        acts = profile[node.infoset]
        for a, child in zip(node.actions, node.children):
            edges.append((node.infoset, a, acts[a]))
            walk(child)
            edges.pop()

    walk(game.root)
    action_value = {
        h: {
            a: value + eu[owner[h] - 1] - through[h]
            for a, value in acts.items()
        }
        for h, acts in local.items()
    }
    return AgentFormStats(
        eu=(eu[0], eu[1]), action_value=action_value, through=through
    )


def check_perturbed_equilibrium(
    game: Game, profile: BehavioralProfile, eps: Fraction
) -> Tuple[bool, List[str]]:
    """Is the profile an equilibrium of the game with floors at eps?

    Two conditions per information set: every action has probability at
    least eps, and every action strictly above eps achieves the maximal
    local deviation value. Raises EpsilonRangeError when the floors at some
    information set cannot sum to one.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise EpsilonRangeError("negative perturbation %s" % eps)
    validate_behavioral_profile(game, profile)
    for iset in game.infosets:
        if len(iset.actions) * eps > 1:
            raise EpsilonRangeError(
                "floors of %s at %s sum above one" % (eps, iset.id)
            )
    stats = agent_form_utilities(game, profile)
    messages: List[str] = []
    for iset in game.infosets:
        acts = profile[iset.id]
        values = stats.action_value[iset.id]
        best = max(values.values())
        for a in iset.actions:
            if acts[a] < eps:
                messages.append(
                    "probability %s of action %s at %s is below the floor %s"
                    % (acts[a], a, iset.id, eps)
                )
            elif acts[a] > eps and values[a] != best:
                messages.append(
                    "action %s at %s is above the floor but yields %s < %s"
                    % (a, iset.id, values[a], best)
                )
    return not messages, messages


def check_nash(game: Game, profile: BehavioralProfile) -> Tuple[bool, List[str]]:
    """Agent-form Nash check: every action played with positive probability
    must maximize its agent's utility. Unreached information sets pass
    vacuously, which is exactly the looseness the perturbed solvers fix."""
    validate_behavioral_profile(game, profile)
    stats = agent_form_utilities(game, profile)
    messages: List[str] = []
    for iset in game.infosets:
        acts = profile[iset.id]
        values = stats.action_value[iset.id]
        best = max(values.values())
        for a in iset.actions:
            if acts[a] > 0 and values[a] != best:
                messages.append(
                    "action %s at %s is played but yields %s < %s"
                    % (a, iset.id, values[a], best)
                )
    return not messages, messages


def check_affine_relation(
    game: Game, profile: BehavioralProfile
) -> Tuple[bool, Dict[str, Tuple[Fraction, Fraction]], List[str]]:
    """Local deviation values are an affine image of sequence-form values.

    For a strictly positive profile, at every information set h of player i
    with parent sequence q_h there are constants alpha = r_i(q_h) and
    beta = EU_i - through[h] with

        agent_value(h, a) = alpha * seq_value(h, a) + beta

    where seq_value(h, a) averages the player's own-future payoff mass below
    the sequence q_h a, normalized by r_i(q_h a). Returns the constants per
    information set and any exact mismatches (there should be none).
    """
    validate_behavioral_profile(game, profile)
    for iset in game.infosets:
        for a in iset.actions:
            if profile[iset.id][a] <= 0:
                raise ValueError(
                    "the affine relation needs a strictly positive profile; "
                    "action %s at %s has probability %s"
                    % (a, iset.id, profile[iset.id][a])
                )
    sf = build_sequence_form(game)
    r1 = behavioral_to_realization(sf, 1, profile)
    r2 = behavioral_to_realization(sf, 2, profile)
    plans = (r1, r2)
    stats = agent_form_utilities(game, profile)

    constants: Dict[str, Tuple[Fraction, Fraction]] = {}
    messages: List[str] = []
    for player in (1, 2):
        ps = sf.players[player - 1]
        opp = plans[2 - player]
        n = len(ps)
        gain = [Fraction(0)] * n
        for (i1, i2), _ in sf.terminal_pairs.items():
            own, other = (i1, i2) if player == 1 else (i2, i1)
            gain[own] += sf.U[player - 1][i1][i2] * opp[other]
        # Own-future payoff mass below each sequence, children into parents.
        future = [plans[player - 1][q] * gain[q] for q in range(n)]
        for q in range(n - 1, 0, -1):
            future[ps.parent[q][0]] += future[q]
        for h in ps.infoset_ids:
            alpha = plans[player - 1][ps.infoset_parent[h]]
            beta = stats.eu[player - 1] - stats.through[h]
            constants[h] = (alpha, beta)
            for a, child in ps.infoset_children[h]:
                seq_value = future[child] / plans[player - 1][child]
                expected = alpha * seq_value + beta
                got = stats.action_value[h][a]
                if got != expected:
                    messages.append(
                        "at %s/%s: agent value %s, affine prediction %s"
                        % (h, a, got, expected)
                    )
    return not messages, constants, messages


def _distributions(total: int, parts: int, minimum: int):
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for k in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _distributions(total - k, parts - 1, minimum):
            yield (k,) + rest


def brute_force_perturbed_ne(
    game: Game,
    eps: Fraction,
    denominator: int,
    budget: int = 200_000,
) -> List[BehavioralProfile]:
    """All grid profiles that are equilibria of the eps-floored game.

    The grid puts every action probability at a multiple of 1/denominator,
    at least eps, summing to one per information set. The full cartesian
    product is enumerated, so the candidate count is checked against the
    budget first; raise it explicitly for bigger searches.
    """
    eps = Fraction(eps)
    d = int(denominator)
    if d <= 0:
        raise ValueError("denominator must be positive")
    minimum = ceil(eps * d)
    options: List[List[Dict[str, Fraction]]] = []
    for iset in game.infosets:
        dists = [
            {a: Fraction(k, d) for a, k in zip(iset.actions, combo)}
            for combo in _distributions(d, len(iset.actions), minimum)
        ]
        if not dists:
            raise EpsilonRangeError(
                "no grid point at %s respects the floor %s" % (iset.id, eps)
            )
        options.append(dists)
    count = 1
    for dists in options:
        count *= len(dists)
    if count > budget:
        raise ValueError(
            "grid has %d candidate profiles, above the budget %d" % (count, budget)
        )
    found: List[BehavioralProfile] = []
    ids = [iset.id for iset in game.infosets]
    for combo in product(*options):
        profile = dict(zip(ids, combo))
        ok, _ = check_perturbed_equilibrium(game, profile, eps)
        if ok:
            found.append(profile)
    return found


# ---------------------------------------------------------------------------
# Full verification of result documents.


def _decode_lp(
    zslp: ZeroSumLp, cols: Sequence[int], eps: Fraction
) -> Tuple[List[Fraction], List[Fraction]]:
    """Numeric residual plans encoded by an LP basis at a given eps."""
    a_num = zslp.a_sym.eval(eps)
    nrows = len(a_num)
    if len(cols) != nrows:
        raise GameFormatError("LP basis size does not match the game")
    b_mat = [[a_num[i][j] for j in cols] for i in range(nrows)]
    xb, _ = solve_linear_system(b_mat, [Fraction(x) for x in zslp.b_int])
    x = [Fraction(0)] * zslp.ncols
    for t, j in enumerate(cols):
        if not 0 <= j < zslp.ncols:
            raise GameFormatError("LP basis column %d out of range" % j)
        x[j] = xb[t]
    bt = [[a_num[i][j] for i in range(nrows)] for j in cols]
    y, _ = solve_linear_system(bt, [Fraction(zslp.c_int[j]) for j in cols])
    r1_tilde = x[: zslp.n1]
    r2_tilde = [-zslp.scale * y[j] for j in range(zslp.n2)]
    return r1_tilde, r2_tilde


def _tilde_plan(pipe: Pipeline, player: int, tilde: List[Fraction], eps: Fraction):
    rinv = pipe.lcp.Rinv[player - 1].eval(eps)
    return [
        sum((row[j] * tilde[j] for j in range(len(tilde)) if tilde[j]), Fraction(0))
        for row in rinv
    ]


def verify_result(game: Game, result: EquilibriumResult) -> Tuple[bool, List[str]]:
    """Re-derive everything checkable about a result document.

    Always checked: plans satisfy the flow constraints, behavior reproduces
    the plans, utilities match, and the profile passes the equilibrium
    check appropriate to its kind. When the document names a basis and an
    eps, the basis is decoded independently: its limit (or perturbed
    solution) must reproduce the document's plans exactly, and the decoded
    perturbed profile must be an equilibrium of the floored game.
    """
    messages: List[str] = []
    sf = build_sequence_form(game)
    if result.labels != sequence_labels(sf):
        messages.append("result sequence labels do not match the game")
        return False, messages

    for player, plan in ((1, result.r1), (2, result.r2)):
        try:
            validate_realization_plan(sf, player, plan)
        except ValueError as exc:
            messages.append("player %d plan: %s" % (player, exc))
    profile = result.profile
    try:
        validate_behavioral_profile(game, profile)
    except ValueError as exc:
        messages.append(str(exc))
    if messages:
        return False, messages

    for player, plan, pi in ((1, result.r1, result.pi1), (2, result.r2, result.pi2)):
        rebuilt = behavioral_to_realization(sf, player, pi)
        if rebuilt != plan:
            messages.append(
                "player %d behavior does not reproduce the realization plan" % player
            )
    eu = expected_utilities(sf, result.r1, result.r2)
    if eu != result.utilities:
        messages.append(
            "stored utilities %s differ from recomputed %s"
            % (tuple(map(str, result.utilities)), tuple(map(str, eu)))
        )

    if result.kind == "nash":
        ok, more = check_nash(game, profile)
        messages.extend(more)
        return not messages, messages

    if result.kind == "perturbed":
        if result.epsilon is None:
            messages.append("perturbed result without an epsilon")
            return False, messages
        try:
            ok, more = check_perturbed_equilibrium(game, profile, result.epsilon)
            messages.extend(more)
        except EpsilonRangeError as exc:
            messages.append(str(exc))
        if result.basis:
            messages.extend(_check_basis_perturbed(game, result))
        return not messages, messages

    # efpe-limit: the limit profile must at least be a Nash equilibrium,
    # and the recorded basis must independently reproduce it.
    ok, more = check_nash(game, profile)
    messages.extend(more)
    if result.epsilon is not None and result.basis:
        messages.extend(_check_basis_limit(game, result))
    elif result.basis or result.epsilon is not None:
        messages.append("limit result needs both a basis and an epsilon to replay")
    return not messages, messages


def _check_basis_perturbed(game: Game, result: EquilibriumResult) -> List[str]:
    messages: List[str] = []
    pipe = prepare(game)
    eps = result.epsilon
    try:
        if result.method == "lp":
            zs, witness = is_zero_sum(game)
            if not zs:
                return ["lp result for a game that is not zero-sum: %s" % witness]
            zslp = build_zero_sum_lp(pipe.sf, pipe.lcp.Rinv[0], pipe.lcp.Rinv[1])
            t1, t2 = _decode_lp(zslp, lp_basis_from_strings(result.basis), eps)
            r1 = _tilde_plan(pipe, 1, t1, eps)
            r2 = _tilde_plan(pipe, 2, t2, eps)
        else:
            decoded = decode_at(pipe.lcp, basis_from_strings(result.basis), eps)
            r1, r2 = decoded.r1, decoded.r2
    except Exception as exc:
        return ["basis replay failed: %s" % exc]
    if r1 != result.r1 or r2 != result.r2:
        messages.append("basis decodes to different plans at eps = %s" % eps)
    return messages


def _check_basis_limit(game: Game, result: EquilibriumResult) -> List[str]:
    messages: List[str] = []
    pipe = prepare(game)
    eps = result.epsilon
    if eps != pipe.npp.epsilon_star:
        messages.append(
            "stored epsilon %s is not the recomputed threshold %s"
            % (eps, pipe.npp.epsilon_star)
        )
        return messages
    try:
        if result.method == "lp":
            zs, witness = is_zero_sum(game)
            if not zs:
                return ["lp result for a game that is not zero-sum: %s" % witness]
            zslp = build_zero_sum_lp(pipe.sf, pipe.lcp.Rinv[0], pipe.lcp.Rinv[1])
            cols = lp_basis_from_strings(result.basis)
            cert = certify_zero_sum(zslp, cols, eps)
            if not cert.ok:
                return ["LP basis not certified on (0, eps]: %s" % "; ".join(cert.messages)]
            r1, pi1, _ = _plan_limits(pipe.sf, 1, pipe.lcp.Rinv[0], cert.r1_nums, cert.den)
            r2, pi2, _ = _plan_limits(pipe.sf, 2, pipe.lcp.Rinv[1], cert.r2_nums, cert.den)
            t1, t2 = _decode_lp(zslp, cols, eps)
            pr1 = _tilde_plan(pipe, 1, t1, eps)
            pr2 = _tilde_plan(pipe, 2, t2, eps)
            perturbed_profile = realization_to_behavioral(pipe.sf, 1, pr1)
            perturbed_profile.update(realization_to_behavioral(pipe.sf, 2, pr2))
        else:
            vars_ = basis_from_strings(result.basis)
            ext = extract_limit(pipe.lcp, vars_)
            r1, r2, pi1, pi2 = ext.r1, ext.r2, ext.pi1, ext.pi2
            decoded = decode_at(pipe.lcp, vars_, eps)
            perturbed_profile = dict(decoded.pi1)
            perturbed_profile.update(decoded.pi2)
    except Exception as exc:
        return ["basis replay failed: %s" % exc]
    if r1 != result.r1 or r2 != result.r2:
        messages.append("basis limit decodes to different realization plans")
    if pi1 != result.pi1 or pi2 != result.pi2:
        messages.append("basis limit decodes to different behavior")
    try:
        ok, more = check_perturbed_equilibrium(game, perturbed_profile, eps)
        if not ok:
            messages.append(
                "decoded perturbed profile fails the floored equilibrium check: %s"
                % "; ".join(more)
            )
    except EpsilonRangeError as exc:
        messages.append(str(exc))
    return messages
