"""
Taking the limit exactly: one solve covers every small floor
============================================================

The refinement is a limit over vanishing floors, yet the solver never
iterates: it computes a threshold eps* from coefficient bounds such that
one complementary basis found at eps* stays optimal on all of (0, eps*],
then reads the limit off that basis symbolically. This script opens the
hood on a small game: the threshold, the pivoting run, the certificate
polynomials, and the exact limit.
"""

from fractions import Fraction

from efpe import (
    decode_at,
    extract_limit,
    format_poly,
    integer_rational_sign,
    lemke_solve,
    optimality_certificate,
    parse_game,
    prepare,
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
pipe = prepare(game)

####################################################################
# The floored equilibria of the game are the solutions of a linear
# complementarity problem whose matrix has polynomial entries in eps.
# Worst-case determinant bounds over all of its bases give an eps* below
# which no certificate polynomial can change sign.

npp = pipe.npp
print("complementarity system size:", pipe.lcp.layout.size)
print("largest integer coefficient V_B:", npp.V_B)
print("largest entry degree m:", npp.m)
print("dimension with covering column n:", npp.n)
print("determinant bound V_D has", npp.V_D.bit_length(), "bits")
print("eps* = 1/%d  (%d bits)" % (npp.epsilon_star.denominator, npp.bits))
print()

####################################################################
# One pivoting run at eps* finds a complementary basis. The numbers are
# exact rationals built from the huge threshold, but the path is short.

eps_star = npp.epsilon_star
sol = lemke_solve(pipe.lcp.M.eval(eps_star), pipe.lcp.b)
print("pivots used:", sol.pivots)
print("final basis:", [("%s[%d]" % v) for v in sol.basis])
print()

####################################################################
# The certificate: each basic variable's value as a reduced ratio of
# polynomials in eps. The exact sign procedure localizes each numerator's
# sign on an interval (0, threshold] with threshold >= eps*; all signs
# non-negative means this one basis is optimal on the whole interval.

cert = optimality_certificate(pipe.lcp, sol.basis)
for var, (num, den) in list(zip(sol.basis, cert))[:6]:
    sign, threshold = integer_rational_sign(num, den)
    print("%s[%d]: (%s) / (%s)  sign %+d below 1/%d"
          % (var[0], var[1], format_poly(num), format_poly(den), sign,
             threshold.denominator))
print("... (%d components in total)" % len(cert))
print()

####################################################################
# The limit at eps -> 0 comes from the same polynomials, no re-solve.
# Compare the limit plan with the decoded plan at two tiny floors: the
# floor terms fade at the advertised rate.

ext = extract_limit(pipe.lcp, sol.basis)
print("limit plan of player 1: ", [str(x) for x in ext.r1])
for eps in (eps_star, eps_star / 2):
    dec = decode_at(pipe.lcp, sol.basis, eps)
    drift = max(abs(a - b) for a, b in zip(dec.r1, ext.r1))
    print("at eps = eps*%s: plan within %s of the limit"
          % ("" if eps == eps_star else "/2", "1/%d" % drift.denominator if drift else "0"))
print()
print("limit behavior:", {
    h: {a: str(p) for a, p in acts.items()}
    for h, acts in {**ext.pi1, **ext.pi2}.items()
})
