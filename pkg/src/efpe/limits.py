"""High-level solvers: perturbed equilibria and their exact limits.

The pipeline assembled here is: build the sequence form, shift payoffs
negative, build the floor-perturbed complementarity system, compute the
negligibility threshold eps*, solve at eps* (pivoting, or an LP for
zero-sum games), and take the limit of the resulting basis symbolically as
the floors vanish. The limit strategies form an extensive-form perfect
equilibrium; the intermediate solutions are equilibria of the perturbed
game and are exposed as well. Results serialize to a deterministic JSON
document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    EpsilonBitsCapError,
    EpsilonRangeError,
    GameFormatError,
    SolverError,
    UnboundedLimitError,
)
from .games import BehavioralProfile, Game, parse_rational
from .lcp import (
    LcpInstance,
    NppCertificate,
    apply_negative_offset,
    build_lcp,
    certificate_raw,
    compute_npp,
)
from .lemke import Var, check_lemke_preconditions, lemke_solve, var_name
from .lp import build_zero_sum_lp, certify_zero_sum, is_zero_sum, solve_zero_sum_at
from .perturbation import build_R
from .poly import Poly, limit_at_zero
from .polymatrix import pm_mat_vec, solve_linear_system
from .seqform import (
    SequenceForm,
    build_sequence_form,
    expected_utilities,
    realization_to_behavioral,
)

RESULT_FORMAT_VERSION = 1

RESULT_KINDS = ("efpe-limit", "perturbed", "nash")


@dataclass
class Pipeline:
    """Everything derived from one game, shared by the solver entry points."""

    game: Game
    sf_raw: SequenceForm
    sf: SequenceForm
    offset: Fraction
    lcp: LcpInstance
    npp: NppCertificate


def prepare(game: Game) -> Pipeline:
    sf_raw = build_sequence_form(game)
    sf, offset = apply_negative_offset(sf_raw)
    r1 = build_R(sf, 1)
    r2 = build_R(sf, 2)
    lcp = build_lcp(sf, r1, r2)
    npp = compute_npp(lcp)
    return Pipeline(
        game=game, sf_raw=sf_raw, sf=sf, offset=offset, lcp=lcp, npp=npp
    )


# ---------------------------------------------------------------------------
# Limits of symbolic plans.


def _limit_or_raise(num: Poly, den: Poly, what: str) -> Fraction:
    try:
        return limit_at_zero(num, den)
    except ValueError:
        raise UnboundedLimitError(
            "%s diverges as the perturbation vanishes; the basis is not "
            "valid on a neighbourhood of zero" % what
        ) from None


def _plan_limits(
    sf: SequenceForm,
    player: int,
    rinv,
    tilde_nums: Sequence[Poly],
    den: Poly,
) -> Tuple[List[Fraction], Dict[str, Dict[str, Fraction]], List[str]]:
    """Limits of a residual plan given by numerators over a common den.

    Converts back to realization space through R^-1 symbolically, takes
    componentwise limits, and forms behavioral probabilities as limits of
    ratios, where the common denominator cancels. Unreachable information
    sets (identically zero parent realization) fall back to uniform play and
    are reported; they cannot occur for a basis valid on (0, eps*], where
    every sequence keeps probability at least eps^depth.
    """
    real_nums = pm_mat_vec(rinv, list(tilde_nums))
    plan = [
        _limit_or_raise(
            num, den, "realization of player %d sequence %d" % (player, q)
        )
        for q, num in enumerate(real_nums)
    ]
    ps = sf.players[player - 1]
    pi: Dict[str, Dict[str, Fraction]] = {}
    warnings: List[str] = []
    for h in ps.infoset_ids:
        parent_num = real_nums[ps.infoset_parent[h]]
        children = ps.infoset_children[h]
        if parent_num.is_zero:
            warnings.append(
                "information set %s unreachable in every perturbed solution; "
                "uniform behavior reported" % h
            )
            pi[h] = {a: Fraction(1, len(children)) for a, _ in children}
        else:
            pi[h] = {
                a: _limit_or_raise(
                    real_nums[c], parent_num, "behavior at %s/%s" % (h, a)
                )
                for a, c in children
            }
    return plan, pi, warnings


@dataclass
class LimitExtraction:
    """Exact eps -> 0 limit of the basic solution of a pivoting basis."""

    basis: Tuple[Var, ...]
    den: Poly
    z_nums: List[Poly]
    w_scaled_nums: List[Poly]
    r1: List[Fraction]
    r2: List[Fraction]
    pi1: BehavioralProfile
    pi2: BehavioralProfile
    z_limit: List[Fraction]
    w_scaled_limit: List[Fraction]
    warnings: List[str]


def extract_limit(lcp: LcpInstance, basis: Sequence[Var]) -> LimitExtraction:
    """Take the symbolic limit of a complementary basis at eps -> 0.

    Never inverts the unperturbed matrix numerically (it may be singular);
    all components come from Cramer numerators over the integer-scaled
    system. z components are exact; w components carry the positive integer
    scale L of that system.
    """
    nums, den = certificate_raw(lcp, basis)
    size = lcp.layout.size
    zero = Poly()
    z_nums = [zero] * size
    w_nums = [zero] * size
    for var, num in zip(basis, nums):
        if var[0] == "z":
            z_nums[var[1]] = num
        else:
            w_nums[var[1]] = num
    z_limit = [
        _limit_or_raise(z_nums[i], den, "z[%d]" % i) for i in range(size)
    ]
    w_scaled_limit = [
        _limit_or_raise(w_nums[i], den, "w[%d]" % i) for i in range(size)
    ]
    lay = lcp.layout
    r1, pi1, warn1 = _plan_limits(
        lcp.sf, 1, lcp.Rinv[0], [z_nums[i] for i in lay.r1], den
    )
    r2, pi2, warn2 = _plan_limits(
        lcp.sf, 2, lcp.Rinv[1], [z_nums[i] for i in lay.r2], den
    )
    return LimitExtraction(
        basis=tuple(basis),
        den=den,
        z_nums=z_nums,
        w_scaled_nums=w_nums,
        r1=r1,
        r2=r2,
        pi1=pi1,
        pi2=pi2,
        z_limit=z_limit,
        w_scaled_limit=w_scaled_limit,
        warnings=warn1 + warn2,
    )


@dataclass
class DecodedSolution:
    """Numeric basic solution of the perturbed system at one eps."""

    eps: Fraction
    r1: List[Fraction]
    r2: List[Fraction]
    pi1: BehavioralProfile
    pi2: BehavioralProfile
    z: List[Fraction]
    w_scaled: List[Fraction]


def _tilde_to_plan(
    lcp: LcpInstance, player: int, tilde: Sequence[Fraction], eps: Fraction
) -> List[Fraction]:
    rinv = lcp.Rinv[player - 1].eval(eps)
    return [
        sum((row[j] * tilde[j] for j in range(len(tilde)) if tilde[j]), Fraction(0))
        for row in rinv
    ]


def decode_at(lcp: LcpInstance, basis: Sequence[Var], eps: Fraction) -> DecodedSolution:
    """Evaluate a basis at a numeric eps and decode plans and behavior.

    Rebuilds the basis matrix of the integer-scaled system at eps, solves
    it exactly, and converts the residual plans back through R^-1(eps).
    """
    m_int, b_int, _ = lcp.scaled()
    size = lcp.layout.size
    cols: List[List[Fraction]] = []
    for var in basis:
        if var[0] == "w":
            cols.append([Fraction(1 if i == var[1] else 0) for i in range(size)])
        elif var[0] == "z":
            cols.append([-p(eps) for p in m_int.column(var[1])])
        else:
            raise ValueError("covering variable in a final basis")
    b_num = [[cols[j][i] for j in range(size)] for i in range(size)]
    xb, _ = solve_linear_system(b_num, [Fraction(x) for x in b_int])
    z = [Fraction(0)] * size
    w_scaled = [Fraction(0)] * size
    for var, value in zip(basis, xb):
        if var[0] == "z":
            z[var[1]] = value
        else:
            w_scaled[var[1]] = value
    lay = lcp.layout
    r1 = _tilde_to_plan(lcp, 1, [z[i] for i in lay.r1], eps)
    r2 = _tilde_to_plan(lcp, 2, [z[i] for i in lay.r2], eps)
    return DecodedSolution(
        eps=eps,
        r1=r1,
        r2=r2,
        pi1=realization_to_behavioral(lcp.sf, 1, r1),
        pi2=realization_to_behavioral(lcp.sf, 2, r2),
        z=z,
        w_scaled=w_scaled,
    )


# ---------------------------------------------------------------------------
# Results.


@dataclass
class EquilibriumResult:
    """A solved strategy profile plus provenance needed to re-verify it."""

    kind: str
    method: str
    labels: Tuple[List[str], List[str]]
    r1: List[Fraction]
    r2: List[Fraction]
    pi1: BehavioralProfile
    pi2: BehavioralProfile
    utilities: Tuple[Fraction, Fraction]
    epsilon: Optional[Fraction] = None
    basis: Optional[List[str]] = None
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def profile(self) -> BehavioralProfile:
        merged: BehavioralProfile = {}
        merged.update(self.pi1)
        merged.update(self.pi2)
        return merged


def sequence_labels(sf: SequenceForm) -> Tuple[List[str], List[str]]:
    return (
        [sf.sequence_label(1, i) for i in range(sf.n_sequences(1))],
        [sf.sequence_label(2, i) for i in range(sf.n_sequences(2))],
    )


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _jsonable(value):
    if isinstance(value, Fraction):
        return _frac(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def result_to_json(result: EquilibriumResult) -> str:
    """Serialize a result deterministically (sorted keys, exact rationals)."""
    doc = {
        "format": "efpe-result",
        "version": RESULT_FORMAT_VERSION,
        "kind": result.kind,
        "method": result.method,
        "epsilon": None if result.epsilon is None else _frac(result.epsilon),
        "utilities": [_frac(result.utilities[0]), _frac(result.utilities[1])],
        "realization_plans": {
            "1": {
                label: _frac(v) for label, v in zip(result.labels[0], result.r1)
            },
            "2": {
                label: _frac(v) for label, v in zip(result.labels[1], result.r2)
            },
        },
        "behavior": {
            "1": {h: {a: _frac(p) for a, p in acts.items()} for h, acts in result.pi1.items()},
            "2": {h: {a: _frac(p) for a, p in acts.items()} for h, acts in result.pi2.items()},
        },
        "basis": result.basis,
        "diagnostics": _jsonable(result.diagnostics),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def result_from_json(game: Game, text: str) -> EquilibriumResult:
    """Parse a result document and bind it to a game.

    The plan keys must exactly match the game's sequence labels; mismatches
    raise GameFormatError since the document describes a different game.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(
            "result syntax error at line %d column %d: %s"
            % (exc.lineno, exc.colno, exc.msg)
        ) from None
    if not isinstance(doc, dict) or doc.get("format") != "efpe-result":
        raise GameFormatError("not a result document")
    if doc.get("version") != RESULT_FORMAT_VERSION:
        raise GameFormatError("unsupported result version %r" % doc.get("version"))
    kind = doc.get("kind")
    if kind not in RESULT_KINDS:
        raise GameFormatError("unknown result kind %r" % (kind,))
    sf = build_sequence_form(game)
    labels = sequence_labels(sf)
    plans_doc = doc.get("realization_plans")
    if not isinstance(plans_doc, dict):
        raise GameFormatError("missing realization plans")
    plans: List[List[Fraction]] = []
    for player in (1, 2):
        got = plans_doc.get(str(player))
        if not isinstance(got, dict):
            raise GameFormatError("missing plan for player %d" % player)
        want = labels[player - 1]
        if set(got) != set(want):
            raise GameFormatError(
                "plan of player %d does not match the game's sequences" % player
            )
        plans.append(
            [parse_rational(got[label], "plan of player %d" % player) for label in want]
        )
    behavior_doc = doc.get("behavior", {})
    pis: List[BehavioralProfile] = []
    for player in (1, 2):
        got = behavior_doc.get(str(player), {})
        parsed: BehavioralProfile = {}
        for h, acts in got.items():
            parsed[h] = {
                a: parse_rational(p, "behavior at %s" % h) for a, p in acts.items()
            }
        pis.append(parsed)
    utilities_doc = doc.get("utilities", ["0", "0"])
    utilities = (
        parse_rational(utilities_doc[0], "utilities"),
        parse_rational(utilities_doc[1], "utilities"),
    )
    epsilon = doc.get("epsilon")
    basis = doc.get("basis")
    if basis is not None and not (
        isinstance(basis, list) and all(isinstance(s, str) for s in basis)
    ):
        raise GameFormatError("basis must be a list of variable names")
    return EquilibriumResult(
        kind=kind,
        method=doc.get("method", "pivoting"),
        labels=labels,
        r1=plans[0],
        r2=plans[1],
        pi1=pis[0],
        pi2=pis[1],
        utilities=utilities,
        epsilon=None if epsilon is None else parse_rational(epsilon, "epsilon"),
        basis=basis,
        diagnostics=doc.get("diagnostics", {}),
    )


def basis_from_strings(strings: Sequence[str]) -> List[Var]:
    """Parse pivoting basis entries of the form "z[3]" or "w[0]"."""
    out: List[Var] = []
    for s in strings:
        kind, _, rest = s.partition("[")
        if kind not in ("z", "w") or not rest.endswith("]"):
            raise GameFormatError("bad basis entry %r" % s)
        try:
            idx = int(rest[:-1])
        except ValueError:
            raise GameFormatError("bad basis entry %r" % s) from None
        out.append((kind, idx))
    return out


def lp_basis_from_strings(strings: Sequence[str]) -> List[int]:
    """Parse LP basis entries of the form "col[7]"."""
    out: List[int] = []
    for s in strings:
        if not (s.startswith("col[") and s.endswith("]")):
            raise GameFormatError("bad basis entry %r" % s)
        try:
            out.append(int(s[4:-1]))
        except ValueError:
            raise GameFormatError("bad basis entry %r" % s) from None
    return out


# ---------------------------------------------------------------------------
# Solver entry points.


def _npp_diagnostics(pipe: Pipeline) -> Dict[str, object]:
    npp = pipe.npp
    return {
        "offset": pipe.offset,
        "nu": npp.nu,
        "scale": npp.scale,
        "V_B": npp.V_B,
        "m": npp.m,
        "n": npp.n,
        "V_D": npp.V_D,
        "V_N": npp.V_N,
        "V_star": npp.V_star,
        "epsilon_star": npp.epsilon_star,
        "epsilon_bits": npp.bits,
    }


def solve_efpe(
    game: Game,
    method: str = "auto",
    max_pivots: int = 2**20,
    want_trace: bool = False,
    max_eps_bits: Optional[int] = None,
) -> EquilibriumResult:
    """Compute an extensive-form perfect equilibrium exactly.

    Solves the floor-perturbed game at the negligibility threshold eps* and
    extracts the exact limit of the solution as the floors vanish. method
    is "auto" (LP for zero-sum games, otherwise pivoting), "lp", or
    "pivoting"; the LP path falls back to pivoting when its symbolic
    certificate does not cover (0, eps*].
    """
    if method not in ("auto", "lp", "pivoting"):
        raise ValueError("unknown method %r" % (method,))
    pipe = prepare(game)
    npp = pipe.npp
    if max_eps_bits is not None and npp.bits > max_eps_bits:
        raise EpsilonBitsCapError(
            "threshold needs %d bits, above the configured cap %d"
            % (npp.bits, max_eps_bits)
        )
    eps = npp.epsilon_star
    zero_sum, witness = is_zero_sum(game)
    if method == "lp" and not zero_sum:
        raise SolverError("the lp method needs a zero-sum game: %s" % witness)
    chosen = method
    if chosen == "auto":
        chosen = "lp" if zero_sum else "pivoting"
    diagnostics = _npp_diagnostics(pipe)
    labels = sequence_labels(pipe.sf)

    if chosen == "lp":
        zslp = build_zero_sum_lp(pipe.sf, pipe.lcp.Rinv[0], pipe.lcp.Rinv[1])
        sol = solve_zero_sum_at(zslp, eps)
        cert = certify_zero_sum(zslp, sol.basis, eps)
        if cert.ok:
            r1, pi1, warn1 = _plan_limits(
                pipe.sf, 1, pipe.lcp.Rinv[0], cert.r1_nums, cert.den
            )
            r2, pi2, warn2 = _plan_limits(
                pipe.sf, 2, pipe.lcp.Rinv[1], cert.r2_nums, cert.den
            )
            utilities = expected_utilities(pipe.sf_raw, r1, r2)
            diagnostics["lp_threshold"] = cert.threshold
            if warn1 or warn2:
                diagnostics["warnings"] = warn1 + warn2
            return EquilibriumResult(
                kind="efpe-limit",
                method="lp",
                labels=labels,
                r1=r1,
                r2=r2,
                pi1=pi1,
                pi2=pi2,
                utilities=utilities,
                epsilon=eps,
                basis=["col[%d]" % j for j in cert.basis],
                diagnostics=diagnostics,
            )
        diagnostics["lp_fallback"] = cert.messages
        chosen = "pivoting"

    ok, problems = check_lemke_preconditions(pipe.lcp)
    if not ok:
        raise SolverError("; ".join(problems))
    res = lemke_solve(
        pipe.lcp.M.eval(eps), pipe.lcp.b, max_pivots=max_pivots, want_trace=want_trace
    )
    ext = extract_limit(pipe.lcp, res.basis)
    utilities = expected_utilities(pipe.sf_raw, ext.r1, ext.r2)
    diagnostics["pivots"] = res.pivots
    if res.trace is not None:
        diagnostics["trace"] = res.trace
    if ext.warnings:
        diagnostics["warnings"] = ext.warnings
    return EquilibriumResult(
        kind="efpe-limit",
        method="pivoting",
        labels=labels,
        r1=ext.r1,
        r2=ext.r2,
        pi1=ext.pi1,
        pi2=ext.pi2,
        utilities=utilities,
        epsilon=eps,
        basis=[var_name(v) for v in res.basis],
        diagnostics=diagnostics,
    )


def check_epsilon_range(pipe: Pipeline, eps: Fraction) -> None:
    nu = pipe.npp.nu
    if not (0 < eps <= Fraction(1, nu)):
        raise EpsilonRangeError(
            "perturbation %s outside the feasible range (0, 1/%d]" % (eps, nu)
        )


def solve_perturbed(
    game: Game,
    eps: Fraction,
    method: str = "auto",
    max_pivots: int = 2**20,
    want_trace: bool = False,
) -> EquilibriumResult:
    """Solve the game with every action's probability floored at eps."""
    if method not in ("auto", "lp", "pivoting"):
        raise ValueError("unknown method %r" % (method,))
    eps = Fraction(eps)
    pipe = prepare(game)
    check_epsilon_range(pipe, eps)
    zero_sum, witness = is_zero_sum(game)
    if method == "lp" and not zero_sum:
        raise SolverError("the lp method needs a zero-sum game: %s" % witness)
    chosen = method
    if chosen == "auto":
        chosen = "lp" if zero_sum else "pivoting"
    diagnostics = _npp_diagnostics(pipe)
    labels = sequence_labels(pipe.sf)

    if chosen == "lp":
        zslp = build_zero_sum_lp(pipe.sf, pipe.lcp.Rinv[0], pipe.lcp.Rinv[1])
        sol = solve_zero_sum_at(zslp, eps)
        r1 = _tilde_to_plan(pipe.lcp, 1, sol.r1_tilde, eps)
        r2 = _tilde_to_plan(pipe.lcp, 2, sol.r2_tilde, eps)
        basis = ["col[%d]" % j for j in sol.basis]
    else:
        ok, problems = check_lemke_preconditions(pipe.lcp)
        if not ok:
            raise SolverError("; ".join(problems))
        res = lemke_solve(
            pipe.lcp.M.eval(eps),
            pipe.lcp.b,
            max_pivots=max_pivots,
            want_trace=want_trace,
        )
        lay = pipe.lcp.layout
        r1 = _tilde_to_plan(pipe.lcp, 1, [res.z[i] for i in lay.r1], eps)
        r2 = _tilde_to_plan(pipe.lcp, 2, [res.z[i] for i in lay.r2], eps)
        basis = [var_name(v) for v in res.basis]
        diagnostics["pivots"] = res.pivots
        if res.trace is not None:
            diagnostics["trace"] = res.trace
    utilities = expected_utilities(pipe.sf_raw, r1, r2)
    return EquilibriumResult(
        kind="perturbed",
        method=chosen,
        labels=labels,
        r1=r1,
        r2=r2,
        pi1=realization_to_behavioral(pipe.sf, 1, r1),
        pi2=realization_to_behavioral(pipe.sf, 2, r2),
        utilities=utilities,
        epsilon=eps,
        basis=basis,
        diagnostics=diagnostics,
    )


def solve_nash(
    game: Game,
    max_pivots: int = 2**20,
    want_trace: bool = False,
) -> EquilibriumResult:
    """Solve the unperturbed sequence-form system by pivoting.

    The result is a Nash equilibrium with no refinement: behavior off the
    played path is unconstrained (reported uniform at unreached sets), which
    is exactly what the perturbed pipeline is designed to improve on.
    """
    pipe = prepare(game)
    ok, problems = check_lemke_preconditions(pipe.lcp)
    if not ok:
        raise SolverError("; ".join(problems))
    res = lemke_solve(
        pipe.lcp.M.eval(Fraction(0)),
        pipe.lcp.b,
        max_pivots=max_pivots,
        want_trace=want_trace,
    )
    lay = pipe.lcp.layout
    r1 = [res.z[i] for i in lay.r1]
    r2 = [res.z[i] for i in lay.r2]
    utilities = expected_utilities(pipe.sf_raw, r1, r2)
    diagnostics = {"offset": pipe.offset, "pivots": res.pivots}
    if res.trace is not None:
        diagnostics["trace"] = res.trace
    return EquilibriumResult(
        kind="nash",
        method="pivoting",
        labels=sequence_labels(pipe.sf),
        r1=r1,
        r2=r2,
        pi1=realization_to_behavioral(pipe.sf, 1, r1),
        pi2=realization_to_behavioral(pipe.sf, 2, r2),
        utilities=utilities,
        epsilon=None,
        basis=[var_name(v) for v in res.basis],
        diagnostics=diagnostics,
    )
