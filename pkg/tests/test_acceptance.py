"""End-to-end acceptance checks, one per solver guarantee.

Each test prints a single ``ACCEPTANCE <n> PASS/FAIL`` line; run with
``pytest tests/test_acceptance.py -v -rA`` (or ``-s``) to see the lines.
The random suites are frozen by seed, so every run checks the same games.
"""

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

from efpe.games import validate_perfect_recall
from efpe.lcp import basis_matrix, build_lcp, optimality_certificate
from efpe.lemke import check_lemke_preconditions, lemke_solve
from efpe.limits import (
    basis_from_strings,
    decode_at,
    prepare,
    solve_efpe,
    solve_nash,
    solve_perturbed,
)
from efpe.perturbation import build_R, invert_R
from efpe.poly import EPS, ONE, integer_rational_sign
from efpe.polymatrix import PolyMatrix, polymatrix_det
from efpe.seqform import build_sequence_form
from efpe.verify import (
    brute_force_perturbed_ne,
    check_nash,
    check_perturbed_equilibrium,
    verify_result,
)
from gengames import random_game

F = Fraction

# Frozen suites. The main suite drives the certificate replay and the
# symbolic identities; the determinant suite uses shallower games so that
# 100+ symbolic determinants stay cheap; the zero-sum suite compares the
# two solution paths. Seeds 301 and 315 are kept apart: their games have a
# payoff tie at one information set, so the two paths return different but
# equally valid equilibria there (checked separately below).
SUITE_SEEDS = tuple(range(50))
DET_SEEDS = tuple(range(110, 122))
ZS_TIED_SEEDS = (301, 315)
ZS_EQUAL_SEEDS = tuple(
    s for s in range(300, 324) if s not in ZS_TIED_SEEDS
)


@contextmanager
def criterion(num, label):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        sys.stdout.write("ACCEPTANCE %d FAIL: %s\n" % (num, label))
        raise
    sys.stdout.write(
        "ACCEPTANCE %d PASS: %s (%.2fs)\n"
        % (num, label, time.monotonic() - start)
    )


@lru_cache(maxsize=None)
def _suite_game(seed):
    return random_game(seed, require_both=True, max_depth=4)


@lru_cache(maxsize=None)
def _suite_pipeline(seed):
    return prepare(_suite_game(seed))


@lru_cache(maxsize=None)
def _suite_solution(seed):
    pipe = _suite_pipeline(seed)
    ok, problems = check_lemke_preconditions(pipe.lcp)
    assert ok, problems
    eps = pipe.npp.epsilon_star
    return lemke_solve(pipe.lcp.M.eval(eps), pipe.lcp.b)


def _zero_sum_game(seed):
    return random_game(seed, zero_sum=True, require_both=True, max_depth=4)


def _assert_lcp_point(pipe, z, w, eps):
    """z, w >= 0, w = M(eps) z + b, and z'w = 0, all exact."""
    m_num = pipe.lcp.M.eval(eps)
    b = pipe.lcp.b
    size = pipe.lcp.layout.size
    assert all(x >= 0 for x in z) and all(x >= 0 for x in w)
    for i in range(size):
        assert w[i] == sum(m_num[i][j] * z[j] for j in range(size)) + b[i]
    assert sum(zi * wi for zi, wi in zip(z, w)) == 0


def _assert_plans_feasible(pipe, r1, r2, eps):
    """F_i r_i = f_i and, for eps > 0, the floors r(qa) >= eps r(q)."""
    for player, r in ((1, r1), (2, r2)):
        ps = pipe.sf.players[player - 1]
        for row, rhs in zip(pipe.sf.F[player - 1], pipe.sf.f_vector(player)):
            assert sum(c * x for c, x in zip(row, r)) == rhs
        for idx in range(1, len(ps)):
            parent, _, _ = ps.parent[idx]
            assert r[idx] >= eps * r[parent]


def test_criterion_1_perturbation_matrix_fixtures(ladder_game):
    with criterion(1, "ladder perturbation matrices and inverse, exact"):
        start = time.monotonic()
        sf = build_sequence_form(ladder_game)
        e = EPS
        e2 = ONE.shift(2)
        R1 = build_R(sf, 1)
        R2 = build_R(sf, 2)
        assert R1.matrix == PolyMatrix(
            [
                [1, 0, 0, 0, 0],
                [-e, 1, 0, 0, 0],
                [-e, 0, 1, 0, 0],
                [0, 0, -e, 1, 0],
                [0, 0, -e, 0, 1],
            ]
        )
        assert R2.matrix == PolyMatrix([[1, 0, 0], [-e, 1, 0], [-e, 0, 1]])
        assert invert_R(R1) == PolyMatrix(
            [
                [1, 0, 0, 0, 0],
                [e, 1, 0, 0, 0],
                [e, 0, 1, 0, 0],
                [e2, 0, e, 1, 0],
                [e2, 0, e, 0, 1],
            ]
        )
        assert time.monotonic() - start < 1.0


def test_criterion_2_trap_regression(trap_game):
    with criterion(2, "trap game: solver plays R1, floored L1 play rejected"):
        start = time.monotonic()
        res = solve_efpe(trap_game)
        assert res.pi1["1.1"] == {"L1": F(0), "R1": F(1)}
        assert res.r1[1] == 0  # the L1 sequence has limit probability 0

        # A profile committed to L1 is a Nash equilibrium (the subtree after
        # R1 is never reached), yet once every action must keep probability
        # eps, playing L1 above its floor is strictly worse than R1.
        pure_left = {
            "1.1": {"L1": F(1), "R1": F(0)},
            "1.2": {"L2": F(1), "R2": F(0)},
            "1.3": {"L3": F(1, 2), "R3": F(1, 2)},
            "1.4": {"L4": F(1, 2), "R4": F(1, 2)},
            "1.5": {"L5": F(1, 2), "R5": F(1, 2)},
        }
        ok, _ = check_nash(trap_game, pure_left)
        assert ok
        eps = F(1, 10)
        floored_left = {
            "1.1": {"L1": F(9, 10), "R1": F(1, 10)},
            "1.2": {"L2": F(9, 10), "R2": F(1, 10)},
            "1.3": {"L3": F(1, 2), "R3": F(1, 2)},
            "1.4": {"L4": F(1, 2), "R4": F(1, 2)},
            "1.5": {"L5": F(1, 2), "R5": F(1, 2)},
        }
        ok, messages = check_perturbed_equilibrium(trap_game, floored_left, eps)
        assert not ok
        assert (
            "action L1 at 1.1 is above the floor but yields 9/10 < 1"
            in messages
        )
        assert time.monotonic() - start < 5.0


def test_criterion_3_refinement_separates_from_nash(ladder_game):
    with criterion(3, "ladder: Nash supports vary, the refinement pins one"):
        start = time.monotonic()
        nash = solve_nash(ladder_game)
        efpe = solve_efpe(ladder_game)
        assert nash.utilities == (F(1), F(1))
        assert efpe.utilities == (F(1), F(1))

        # Both are Nash equilibria of the unperturbed game with value 1,
        # but with different supports at the bottom information set: the
        # refinement forces the action that stays optimal under trembles.
        ok_nash, _ = check_nash(ladder_game, nash.profile)
        ok_efpe, _ = check_nash(ladder_game, efpe.profile)
        assert ok_nash and ok_efpe
        assert nash.pi2["2.1"] != efpe.pi2["2.1"]

        assert efpe.pi1 == {
            "1.1": {"L1": F(1), "R1": F(0)},
            "1.2": {"L2": F(1), "R2": F(0)},
        }
        assert efpe.pi2 == {"2.1": {"l1": F(1), "r1": F(0)}}

        # The returned basis encodes perturbed equilibria on all of
        # (0, eps*]; spot-check the floored game at eps* and eps*/2.
        pipe = prepare(ladder_game)
        basis = basis_from_strings(efpe.basis)
        for eps in (pipe.npp.epsilon_star, pipe.npp.epsilon_star / 2):
            dec = decode_at(pipe.lcp, basis, eps)
            ok, messages = check_perturbed_equilibrium(
                ladder_game, {**dec.pi1, **dec.pi2}, eps
            )
            assert ok, messages
        assert time.monotonic() - start < 5.0


def test_criterion_4_certificate_replay_on_random_suite():
    with criterion(
        4, "%d random games: certificates cover (0, eps*], replay feasible"
        % len(SUITE_SEEDS),
    ):
        for seed in SUITE_SEEDS:
            game = _suite_game(seed)
            ok, _ = validate_perfect_recall(game)
            assert ok
            pipe = _suite_pipeline(seed)
            assert pipe.sf.n_sequences(1) <= 30
            assert pipe.sf.n_sequences(2) <= 30

            eps_star = pipe.npp.epsilon_star
            sol = _suite_solution(seed)
            cert = optimality_certificate(pipe.lcp, sol.basis)
            for num, den in cert:
                sign, threshold = integer_rational_sign(num, den)
                assert sign >= 0
                assert sign == 0 or threshold >= eps_star

            for eps in (eps_star / 2, eps_star / 4):
                dec = decode_at(pipe.lcp, sol.basis, eps)
                assert all(x >= 0 for x in dec.z)
                assert all(x >= 0 for x in dec.w_scaled)
                assert all(
                    zi == 0 or wi == 0
                    for zi, wi in zip(dec.z, dec.w_scaled)
                )
                _assert_plans_feasible(pipe, dec.r1, dec.r2, eps)


def test_criterion_5_oracle_equivalence(
    ladder_game, trap_game, pennies_game, dominant_game, trivial_game
):
    with criterion(
        5, "grid search confirms perturbed solutions; LP equals pivoting"
    ):
        eps = F(1, 10)
        for game in (
            ladder_game,
            trap_game,
            pennies_game,
            dominant_game,
            trivial_game,
        ):
            res = solve_perturbed(game, eps)
            grid = brute_force_perturbed_ne(game, eps, 10)
            assert res.profile in grid

        for seed in ZS_EQUAL_SEEDS:
            game = _zero_sum_game(seed)
            lp = solve_efpe(game, method="lp")
            piv = solve_efpe(game, method="pivoting")
            assert lp.method == "lp"
            assert "lp_fallback" not in lp.diagnostics
            assert lp.r1 == piv.r1 and lp.r2 == piv.r2
            assert lp.pi1 == piv.pi1 and lp.pi2 == piv.pi2
            assert lp.utilities == piv.utilities
        assert len(ZS_EQUAL_SEEDS) >= 20

        # The held-out games have a payoff tie at one information set; the
        # paths may break it differently, but the value is unique and both
        # answers must verify as equilibria.
        for seed in ZS_TIED_SEEDS:
            game = _zero_sum_game(seed)
            lp = solve_efpe(game, method="lp")
            piv = solve_efpe(game, method="pivoting")
            assert lp.utilities == piv.utilities
            for res in (lp, piv):
                ok, messages = verify_result(game, res)
                assert ok, messages


def test_criterion_6_symbolic_identities():
    with criterion(
        6, "R inverses, zero-sum skew symmetry, determinant coefficient bound"
    ):
        for seed in SUITE_SEEDS:
            lcp = _suite_pipeline(seed).lcp
            for R, Rinv in zip(lcp.R, lcp.Rinv):
                n = R.matrix.nrows
                assert R.matrix @ Rinv == PolyMatrix.identity(n)
                assert Rinv @ R.matrix == PolyMatrix.identity(n)

        for seed in ZS_EQUAL_SEEDS[:10]:
            game = _zero_sum_game(seed)
            sf = build_sequence_form(game)
            lcp = build_lcp(sf, build_R(sf, 1), build_R(sf, 2))
            size = lcp.layout.size
            assert lcp.M + lcp.M.transpose() == PolyMatrix.zeros(size, size)

        rng = random.Random(2026)
        checked = 0
        for seed in DET_SEEDS:
            pipe = prepare(random_game(seed, require_both=True, max_depth=3))
            size = pipe.lcp.layout.size
            for _ in range(9):
                basis = tuple(
                    (rng.choice("wz"), i) for i in range(size)
                )
                det = polymatrix_det(basis_matrix(pipe.lcp, basis)[0])
                assert all(abs(c) <= pipe.npp.V_D for c in det.coeffs)
                checked += 1
        assert checked >= 100


def test_criterion_7_solution_exactness(
    ladder_game, trap_game, pennies_game, dominant_game, trivial_game
):
    with criterion(7, "zero-tolerance identities for every returned solution"):
        for seed in SUITE_SEEDS:
            pipe = _suite_pipeline(seed)
            eps_star = pipe.npp.epsilon_star
            sol = _suite_solution(seed)
            _assert_lcp_point(pipe, sol.z, sol.w, eps_star)
            dec = decode_at(pipe.lcp, sol.basis, eps_star)
            assert dec.z == sol.z
            _assert_plans_feasible(pipe, dec.r1, dec.r2, eps_star)

        fixtures = (
            ladder_game,
            trap_game,
            pennies_game,
            dominant_game,
            trivial_game,
        )
        for game in fixtures:
            pipe = prepare(game)
            limit = solve_efpe(game)
            _assert_plans_feasible(pipe, limit.r1, limit.r2, F(0))
            perturbed = solve_perturbed(game, F(1, 10))
            _assert_plans_feasible(pipe, perturbed.r1, perturbed.r2, F(1, 10))


def test_criterion_8_threshold_bit_size():
    with criterion(
        8, "eps* bit-length within 1 + 2 n log2(n m V_B) across the suite"
    ):
        for seed in SUITE_SEEDS:
            npp = _suite_pipeline(seed).npp
            bound = 1 + 2 * npp.n * (npp.n * npp.m * npp.V_B).bit_length()
            assert npp.bits <= bound
            assert npp.epsilon_star.denominator.bit_length() <= bound
    _suite_solution.cache_clear()
    _suite_pipeline.cache_clear()
    _suite_game.cache_clear()
