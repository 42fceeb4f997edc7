"""Command-line interface.

Subcommands: solve (exact perfect-equilibrium limit), solve-perturbed
(equilibrium of the game with probability floors at a given eps),
solve-nash (unperturbed pivoting, no refinement), inspect (print the
derived structures), and verify (replay and check a result document).

Exit codes: 0 on success, 2 for unreadable or invalid input documents,
3 for solver failures, 4 when verification rejects a result.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import (
    EfpeError,
    GameFormatError,
    SolverError,
    VerificationError,
)
from .games import load_game, parse_rational
from .limits import (
    prepare,
    result_from_json,
    result_to_json,
    solve_efpe,
    solve_nash,
    solve_perturbed,
)
from .lp import is_zero_sum
from .poly import format_poly
from .verify import verify_result


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--game", required=True, help="game document (JSON)")
    sub.add_argument("--output", help="write the result here instead of stdout")
    sub.add_argument(
        "--max-pivots",
        type=int,
        default=2**20,
        help="abort pivoting after this many steps",
    )
    sub.add_argument(
        "--trace",
        action="store_true",
        help="record the pivot sequence in the result diagnostics",
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    result = solve_efpe(
        game,
        method=args.method,
        max_pivots=args.max_pivots,
        want_trace=args.trace,
        max_eps_bits=args.max_eps_bits,
    )
    _write_output(result_to_json(result), args.output)
    return 0


def _cmd_solve_perturbed(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    eps = parse_rational(args.eps, "--eps")
    result = solve_perturbed(
        game,
        eps,
        method=args.method,
        max_pivots=args.max_pivots,
        want_trace=args.trace,
    )
    _write_output(result_to_json(result), args.output)
    return 0


def _cmd_solve_nash(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    result = solve_nash(game, max_pivots=args.max_pivots, want_trace=args.trace)
    _write_output(result_to_json(result), args.output)
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    pipe = prepare(game)
    sf = pipe.sf_raw
    out = sys.stdout
    zero_sum, witness = is_zero_sum(game)
    print("players: 2", file=out)
    for player in (1, 2):
        print(
            "player %d: %d sequences, %d information sets"
            % (player, sf.n_sequences(player), sf.n_infosets(player)),
            file=out,
        )
    print("terminal sequence pairs: %d" % len(sf.terminal_pairs), file=out)
    print("zero-sum: %s" % ("yes" if zero_sum else "no (%s)" % witness), file=out)
    print("max branching nu: %d" % pipe.npp.nu, file=out)
    print("payoff offset applied internally: %s" % pipe.offset, file=out)

    if args.sequences:
        for player in (1, 2):
            print("", file=out)
            print("sequences of player %d:" % player, file=out)
            for i in range(sf.n_sequences(player)):
                label = sf.sequence_label(player, i) or "(empty)"
                print("  q%d[%d] = %s" % (player, i, label), file=out)

    if args.constraints:
        for player in (1, 2):
            print("", file=out)
            print(
                "flow constraints of player %d (rows of F, F r = (1, 0, ...)):"
                % player,
                file=out,
            )
            for row in sf.F[player - 1]:
                print("  [%s]" % " ".join("%3d" % v for v in row), file=out)

    if args.payoffs:
        print("", file=out)
        print("payoff entries (player 1 seq, player 2 seq) -> (u1, u2):", file=out)
        for (i1, i2) in sorted(sf.terminal_pairs):
            print(
                "  (%d, %d) -> (%s, %s)"
                % (i1, i2, sf.U[0][i1][i2], sf.U[1][i1][i2]),
                file=out,
            )

    if args.perturbation:
        for player, pm in ((1, pipe.lcp.R[0]), (2, pipe.lcp.R[1])):
            print("", file=out)
            print("floor constraint matrix R of player %d:" % player, file=out)
            for row in pm.matrix.rows:
                print("  [%s]" % ", ".join(format_poly(p) for p in row), file=out)
            print("inverse of R (player %d):" % player, file=out)
            for row in pipe.lcp.Rinv[player - 1].rows:
                print("  [%s]" % ", ".join(format_poly(p) for p in row), file=out)

    if args.lcp:
        lcp = pipe.lcp
        print("", file=out)
        print(
            "complementarity system: %d variables "
            "(r1~ %d, r2~ %d, split values %d and %d)"
            % (
                lcp.layout.size,
                lcp.layout.n1,
                lcp.layout.n2,
                2 * lcp.layout.k1,
                2 * lcp.layout.k2,
            ),
            file=out,
        )
        print("nonzero entries of M(eps):", file=out)
        for i, row in enumerate(lcp.M.rows):
            for j, p in enumerate(row):
                if p:
                    print("  M[%d][%d] = %s" % (i, j, format_poly(p)), file=out)
        print("b = [%s]" % ", ".join(str(x) for x in lcp.b), file=out)

    if args.npp:
        npp = pipe.npp
        print("", file=out)
        print("negligibility threshold data:", file=out)
        print("  integer scale L = %d" % npp.scale, file=out)
        print("  V_B (largest scaled coefficient) = %d" % npp.V_B, file=out)
        print("  m (largest degree) = %d" % npp.m, file=out)
        print("  n (dimension with covering column) = %d" % npp.n, file=out)
        print("  V_D (determinant bound) = %d" % npp.V_D, file=out)
        print("  V_N (numerator bound) = %d" % npp.V_N, file=out)
        print("  V* = 2 V_B V_D = %d" % npp.V_star, file=out)
        print("  eps* = min(1/V*, 1/nu) = %s" % npp.epsilon_star, file=out)
        print("  eps* denominator bits: %d" % npp.bits, file=out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    with open(args.result, "r", encoding="utf-8") as fh:
        result = result_from_json(game, fh.read())
    ok, messages = verify_result(game, result)
    for msg in messages:
        print("check failed: %s" % msg)
    if ok:
        print("result verified: %s equilibrium checks passed" % result.kind)
        return 0
    print("verification FAILED (%d problems)" % len(messages))
    return 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efpe",
        description="Exact perfect-equilibrium solver for two-player "
        "extensive-form games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser(
        "solve",
        help="compute the exact limit of floor-perturbed equilibria",
    )
    _add_common(s)
    s.add_argument(
        "--method",
        choices=("auto", "lp", "pivoting"),
        default="auto",
        help="lp needs a zero-sum game; auto picks it there",
    )
    s.add_argument(
        "--max-eps-bits",
        type=int,
        default=None,
        help="abort if the threshold denominator needs more bits than this",
    )
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser(
        "solve-perturbed",
        help="solve the game with all action probabilities floored at eps",
    )
    _add_common(s)
    s.add_argument("--eps", required=True, help="floor, e.g. 1/10")
    s.add_argument(
        "--method",
        choices=("auto", "lp", "pivoting"),
        default="auto",
    )
    s.set_defaults(func=_cmd_solve_perturbed)

    s = sub.add_parser(
        "solve-nash",
        help="solve the unperturbed game (no refinement)",
    )
    _add_common(s)
    s.set_defaults(func=_cmd_solve_nash)

    s = sub.add_parser("inspect", help="print derived structures of a game")
    s.add_argument("--game", required=True, help="game document (JSON)")
    s.add_argument("--sequences", action="store_true", help="list sequences")
    s.add_argument(
        "--constraints", action="store_true", help="print flow constraint rows"
    )
    s.add_argument("--payoffs", action="store_true", help="print payoff entries")
    s.add_argument(
        "--perturbation",
        action="store_true",
        help="print the floor matrices and their inverses",
    )
    s.add_argument(
        "--lcp", action="store_true", help="print the assembled system"
    )
    s.add_argument(
        "--npp", action="store_true", help="print the negligibility threshold data"
    )
    s.set_defaults(func=_cmd_inspect)

    s = sub.add_parser("verify", help="replay and check a result document")
    s.add_argument("--game", required=True, help="game document (JSON)")
    s.add_argument("--result", required=True, help="result document (JSON)")
    s.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GameFormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except VerificationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4
    except SolverError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except EfpeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
