"""Assembly of the perturbed complementarity problem and its certificates.

The best-response conditions of both players in the floor-perturbed game
combine into one standard-form LCP: find z, w >= 0 with w = M(eps) z + b and
z'w = 0, where z stacks the residual plans (R(eps) r_i) and the split dual
values of both players. This module assembles M(eps) and b, shifts payoffs
negative (a requirement of the pivoting termination argument), computes an
exact threshold eps* below which the perturbation is negligible, and turns a
basis into a symbolic optimality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import List, Sequence, Tuple

from .perturbation import PerturbationMatrix, invert_R
from .poly import Poly, reduce_fraction
from .polymatrix import PolyMatrix, polymatrix_solve_raw
from .seqform import SequenceForm

# LCP variables are tagged tuples: ("z", i), ("w", i), or ("z0",).
Var = Tuple


@dataclass(frozen=True)
class LcpLayout:
    """Index ranges of the z blocks (r1~, r2~, v1+, v1-, v2+, v2-)."""

    n1: int
    n2: int
    k1: int
    k2: int

    @property
    def size(self) -> int:
        return self.n1 + self.n2 + 2 * self.k1 + 2 * self.k2

    @property
    def r1(self) -> range:
        return range(0, self.n1)

    @property
    def r2(self) -> range:
        return range(self.n1, self.n1 + self.n2)

    @property
    def v1_plus(self) -> range:
        base = self.n1 + self.n2
        return range(base, base + self.k1)

    @property
    def v1_minus(self) -> range:
        base = self.n1 + self.n2 + self.k1
        return range(base, base + self.k1)

    @property
    def v2_plus(self) -> range:
        base = self.n1 + self.n2 + 2 * self.k1
        return range(base, base + self.k2)

    @property
    def v2_minus(self) -> range:
        base = self.n1 + self.n2 + 2 * self.k1 + self.k2
        return range(base, base + self.k2)


class LcpInstance:
    """M(eps), b, and the surrounding context needed to decode solutions."""

    def __init__(
        self,
        M: PolyMatrix,
        b: List[Fraction],
        layout: LcpLayout,
        sf: SequenceForm,
        R: Tuple[PerturbationMatrix, PerturbationMatrix],
        Rinv: Tuple[PolyMatrix, PolyMatrix],
    ):
        self.M = M
        self.b = b
        self.layout = layout
        self.sf = sf
        self.R = R
        self.Rinv = Rinv
        self._scaled = None

    def eval_numeric(self, eps: Fraction) -> Tuple[List[List[Fraction]], List[Fraction]]:
        return self.M.eval(eps), list(self.b)

    def scaled(self) -> Tuple[PolyMatrix, List[int], int]:
        """(L*M, L*b, L) with a single positive integer L clearing all
        denominators; scaling M and b together preserves the z part of every
        solution and the sign of every certificate entry."""
        if self._scaled is None:
            dens = [1]
            for row in self.M.rows:
                for p in row:
                    dens.extend(c.denominator for c in p.coeffs)
            dens.extend(x.denominator for x in self.b)
            scale = lcm(*dens)
            m_int = self.M.scale(scale)
            assert m_int.is_integral()
            b_int = []
            for x in self.b:
                v = x * scale
                assert v.denominator == 1
                b_int.append(int(v))
            self._scaled = (m_int, b_int, scale)
        return self._scaled


def apply_negative_offset(sf: SequenceForm) -> Tuple[SequenceForm, Fraction]:
    """Shift both players' payoffs so every terminal entry is negative.

    Adding the same constant to all of a player's terminal payoffs never
    changes best responses because the leaf probabilities sum to one; the
    shift is recorded on the sequence form so reported utilities can be
    corrected.
    """
    u1, u2 = sf.U
    mx = max(
        max(u1[i1][i2], u2[i1][i2]) for (i1, i2) in sf.terminal_pairs
    )
    delta = -(mx + 1) if mx >= 0 else Fraction(0)
    return sf.with_offset(delta), delta


def game_nu(sf: SequenceForm) -> int:
    """Largest action count at any information set (at least 1)."""
    nu = 1
    for ps in sf.players:
        for children in ps.infoset_children.values():
            nu = max(nu, len(children))
    return nu


def build_lcp(
    sf: SequenceForm,
    R1: PerturbationMatrix,
    R2: PerturbationMatrix,
) -> LcpInstance:
    """Assemble the standard-form LCP for the perturbed game.

    With A = R1^-T U1 R2^-1, C = R2^-T U2' R1^-1 and Gi = Fi Ri^-1, the
    matrix has block rows

        [    0   -A    G1'  -G1'   0     0  ]
        [   -C    0     0    0    G2'  -G2' ]
        [  -G1    0     0    0     0     0  ]
        [   G1    0     0    0     0     0  ]
        [    0  -G2     0    0     0     0  ]
        [    0   G2     0    0     0     0  ]

    and b = (0, 0, f1, -f1, f2, -f2). At eps = 0 every R block collapses to
    the identity and the instance is the classic sequence-form LCP.
    """
    rinv1 = invert_R(R1)
    rinv2 = invert_R(R2)
    layout = LcpLayout(
        n1=sf.n_sequences(1),
        n2=sf.n_sequences(2),
        k1=sf.n_infosets(1) + 1,
        k2=sf.n_infosets(2) + 1,
    )
    u1 = PolyMatrix.from_scalars(sf.U[0])
    u2 = PolyMatrix.from_scalars(sf.U[1])
    f1 = PolyMatrix.from_scalars(sf.F[0])
    f2 = PolyMatrix.from_scalars(sf.F[1])

    a_blk = rinv1.transpose() @ u1 @ rinv2
    c_blk = rinv2.transpose() @ u2.transpose() @ rinv1
    g1 = f1 @ rinv1
    g2 = f2 @ rinv2
    g1t = g1.transpose()
    g2t = g2.transpose()

    n1, n2, k1, k2 = layout.n1, layout.n2, layout.k1, layout.k2
    z = PolyMatrix.zeros
    grid = [
        [z(n1, n1), -a_blk, g1t, -g1t, z(n1, k2), z(n1, k2)],
        [-c_blk, z(n2, n2), z(n2, k1), z(n2, k1), g2t, -g2t],
        [-g1, z(k1, n2), z(k1, k1), z(k1, k1), z(k1, k2), z(k1, k2)],
        [g1, z(k1, n2), z(k1, k1), z(k1, k1), z(k1, k2), z(k1, k2)],
        [z(k2, n1), -g2, z(k2, k1), z(k2, k1), z(k2, k2), z(k2, k2)],
        [z(k2, n1), g2, z(k2, k1), z(k2, k1), z(k2, k2), z(k2, k2)],
    ]
    rows: List[List[Poly]] = []
    for block_row in grid:
        height = block_row[0].nrows
        for i in range(height):
            merged: List[Poly] = []
            for block in block_row:
                merged.extend(block.rows[i])
            rows.append(merged)
    m_mat = PolyMatrix(rows)
    assert m_mat.nrows == m_mat.ncols == layout.size

    fvec1 = [Fraction(x) for x in sf.f_vector(1)]
    fvec2 = [Fraction(x) for x in sf.f_vector(2)]
    b = (
        [Fraction(0)] * (n1 + n2)
        + fvec1
        + [-x for x in fvec1]
        + fvec2
        + [-x for x in fvec2]
    )
    return LcpInstance(m_mat, b, layout, sf, (R1, R2), (rinv1, rinv2))


@dataclass(frozen=True)
class NppCertificate:
    """Exact threshold below which the perturbation is negligible.

    Any basis feasible at eps* = 1/V_star remains feasible on all of
    (0, eps*]; V_D dominates every coefficient of det B(eps) over all
    possible bases (Hadamard bound), V_N every certificate numerator
    coefficient.
    """

    V_B: int
    m: int
    n: int
    V_D: int
    V_N: int
    V_star: int
    nu: int
    scale: int
    epsilon_star: Fraction

    @property
    def bits(self) -> int:
        return self.V_star.bit_length()


def npp_bounds(v_b: int, m: int, n: int) -> Tuple[int, int, int]:
    """(V_D, V_N, V_star) from coefficient bound, degree bound, dimension.

    V_D = ceil(n^(n/2) (m V_B)^n) is a Hadamard bound on every coefficient
    of every possible basis determinant; V_N = V_B V_D bounds the solution
    numerators; V_star = 2 V_B V_D. The ceiling is computed exactly with an
    integer square root when n is odd.
    """
    base = (m * v_b) ** n
    if n % 2 == 0:
        v_d = n ** (n // 2) * base
    else:
        sq = n**n * base * base
        root = isqrt(sq)
        v_d = root if root * root == sq else root + 1
    return v_d, v_b * v_d, 2 * v_b * v_d


def compute_npp(lcp: LcpInstance) -> NppCertificate:
    """Size the negligible perturbation from the integer-scaled system.

    V_B is the largest absolute integer coefficient in L*M and L*b (and at
    least 1, covering the unit slack columns); m the largest degree in M;
    n counts the covering column on top of the LCP dimension since it can
    sit in intermediate bases. The eps* is additionally capped at 1/nu, the
    feasibility range of the floors.
    """
    m_int, b_int, scale = lcp.scaled()
    v_b = 1
    for row in m_int.rows:
        for p in row:
            for c in p.coeffs:
                v_b = max(v_b, abs(c.numerator))
    for x in b_int:
        v_b = max(v_b, abs(x))
    m_deg = max(1, m_int.max_degree())
    n = lcp.layout.size + 1
    v_d, v_n, v_star = npp_bounds(v_b, m_deg, n)
    nu = game_nu(lcp.sf)
    eps_star = min(Fraction(1, v_star), Fraction(1, nu))
    return NppCertificate(
        V_B=v_b,
        m=m_deg,
        n=n,
        V_D=v_d,
        V_N=v_n,
        V_star=v_star,
        nu=nu,
        scale=scale,
        epsilon_star=eps_star,
    )


def basis_matrix(lcp: LcpInstance, basis: Sequence[Var]) -> Tuple[PolyMatrix, List[int]]:
    """Symbolic basis matrix over the integer-scaled system, plus its rhs.

    Columns are unit vectors for basic w variables and negated L*M columns
    for basic z variables; the covering variable never belongs to a
    complementary basis.
    """
    m_int, b_int, _ = lcp.scaled()
    size = lcp.layout.size
    if len(basis) != size:
        raise ValueError("basis size must equal the LCP dimension")
    seen_pairs = set()
    cols: List[Tuple[Poly, ...]] = []
    for var in basis:
        kind = var[0]
        if kind == "z0":
            raise ValueError("covering variable in a final basis")
        idx = var[1]
        if idx in seen_pairs:
            raise ValueError("basis contains both members of pair %d" % idx)
        seen_pairs.add(idx)
        if kind == "w":
            cols.append(
                tuple(Poly.const(1 if i == idx else 0) for i in range(size))
            )
        elif kind == "z":
            cols.append(tuple(-p for p in m_int.column(idx)))
        else:
            raise ValueError("unknown variable tag %r" % (var,))
    b_mat = PolyMatrix(list(zip(*cols)))
    return b_mat, b_int


def certificate_raw(
    lcp: LcpInstance, basis: Sequence[Var]
) -> Tuple[List[Poly], Poly]:
    """Cramer numerators and common denominator of the basic solution.

    Component i is the symbolic value of basis[i]; for basic z variables it
    is exactly the unscaled solution component, for basic w variables it
    carries the positive factor L, which never affects a sign.
    """
    b_mat, b_int = basis_matrix(lcp, basis)
    return polymatrix_solve_raw(b_mat, b_int)


def optimality_certificate(
    lcp: LcpInstance, basis: Sequence[Var]
) -> List[Tuple[Poly, Poly]]:
    """Symbolic basic solution, one reduced (num, den) pair per basis entry.

    The basis is optimal for the LCP at a given eps exactly when every
    component evaluates non-negative there.
    """
    nums, den = certificate_raw(lcp, basis)
    return [reduce_fraction(nm, den) for nm in nums]
