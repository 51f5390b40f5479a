"""Closed-form numerics for Ulrich bundles on a complete intersection of two
quadrics in P^5: Chern data of the bundles coming from a genus-2 curve,
Brill-Noether tests for vector bundles on curves, and moduli dimension counts.

Everything is exact integer arithmetic.
"""

from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "ChernData", "BNQuery", "fm_rank_degree", "fm_chern", "bgn_nonempty", "bn_rho",
    "rho_classical", "UlrichDims", "ulrich_moduli_dims", "riemann_roch_curve",
    "OrthogonalityBounds", "r3_orthogonality_dims", "jumping_locus_bounds",
    "ulrich_section_count",
    "X_DEGREE", "CURVE_GENUS",
]

X_DEGREE = 4
CURVE_GENUS = 2

NO_ULRICH_LINE_BUNDLE = "no Ulrich line bundle exists on X"


def _solve2(a, b, c, d, e, f):
    """Solve a*x + b*y = e, c*x + d*y = f exactly (Cramer)."""
    det = a * d - b * c
    if det == 0:
        raise ValueError("singular system")
    return Fraction(e * d - b * f, det), Fraction(a * f - e * c, det)


def fm_rank_degree(r):
    """(s, d): rank and degree on the curve side for a rank-r Ulrich bundle.

    Solves 2d - 3s = r and d - 2s = 0.
    """
    if r < 1:
        raise ValueError("rank must be >= 1")
    s, d = _solve2(-3, 2, -2, 1, r, 0)
    assert s.denominator == 1 and d.denominator == 1
    return int(s), int(d)


@dataclass(frozen=True)
class ChernData:
    """Chern character data of a rank-r Ulrich bundle on X.

    `chern` holds (c0, c1, c2, c3) with respect to (1, H, L, P), where H is
    the hyperplane class, L the class of a line and P the class of a point,
    subject to H^2 = 4L and H.L = P.
    """

    r: int
    s: int
    d: int
    chern: tuple
    notes: tuple = field(default=())

    # multiplication table in the basis (1, H, L, P); H^2 = 4L, H.L = P
    MULT = {("H", "H"): (4, "L"), ("H", "L"): (1, "P")}

    def __str__(self):
        return f"{self.chern}; (s,d) = ({self.s},{self.d})"


def fm_chern(r):
    """ChernData with chern = (1, r, 2r^2 - r, r(r-2)(2r+1)/3)."""
    s, d = fm_rank_degree(r)
    num = r * (r - 2) * (2 * r + 1)
    if num % 3:
        raise ArithmeticError(f"c3 not integral for r={r}")
    notes = (NO_ULRICH_LINE_BUNDLE,) if r == 1 else ()
    return ChernData(r, s, d, (1, r, 2 * r * r - r, num // 3), notes)


@dataclass(frozen=True)
class BNQuery:
    """Brill-Noether locus W^{k-1}_{r,d}: rank r, degree d, at least k sections
    on a curve of genus g."""

    g: int
    r: int
    d: int
    k: int

    def __post_init__(self):
        if self.g < 0 or self.r < 1 or self.k < 1:
            raise ValueError(f"invalid BN query {self}")


def bgn_nonempty(q):
    """Nonemptiness of stable rank-r, degree-d bundles with k sections, in the
    range 0 < d <= 2r: d > 0, r <= d + (r - k) g and (r, d, k) != (r, r, r).

    For line bundles the last exclusion does not apply: O(p) has a section.
    """
    if q.d <= 0:
        return False
    if q.r > q.d + (q.r - q.k) * q.g:
        return False
    if q.r >= 2 and q.d == q.r and q.k == q.r:
        return False
    return True


def bn_rho(q):
    """Expected dimension r^2(g-1) + 1 - k(k - d + r(g-1))."""
    g, r, d, k = q.g, q.r, q.d, q.k
    return r * r * (g - 1) + 1 - k * (k - d + r * (g - 1))


def rho_classical(g, r, d):
    """Brill-Noether number g - (r+1)(g - d + r) for linear series g^r_d."""
    return g - (r + 1) * (g - d + r)


@dataclass(frozen=True)
class UlrichDims:
    r: int
    moduli_dim: int
    strict_ss_dim: object
    ext1_dim: object
    chi_EE: int

    def as_tuple(self):
        return (self.moduli_dim, self.strict_ss_dim, self.ext1_dim, self.chi_EE)


def ulrich_moduli_dims(r):
    """Dimension counts for stable rank-r Ulrich bundles on X.

    moduli_dim = r^2 + 1 = 1 - chi(E x E*), with chi(E x E*) = -r^2.  For
    r >= 4 the strictly semistable extensions of lower-rank Ulrich bundles
    form a family of dimension r^2 - 2r + 5 and the relevant Ext^1 has
    dimension 2r - 4; these are None below rank 4.
    """
    if r < 2:
        raise ValueError("Ulrich bundles on X have rank >= 2")
    moduli = r * r + 1
    chi = -r * r
    assert moduli == 1 - chi
    strict = ext1 = None
    if r >= 4:
        strict = r * r - 2 * r + 5
        ext1 = 2 * r - 4
        assert strict < moduli and ext1 > 0
    return UlrichDims(r, moduli, strict, ext1, chi)


def riemann_roch_curve(g, r, d):
    """Euler characteristic d + r(1 - g) of a rank-r degree-d bundle."""
    if g < 0 or r < 0:
        raise ValueError("g and r must be nonnegative")
    return d + r * (1 - g)


def ulrich_section_count(r):
    """h^0 of a rank-r Ulrich bundle on X: deg(X) * r."""
    return X_DEGREE * r


@dataclass(frozen=True)
class OrthogonalityBounds:
    case1: int
    case2: int
    case3: int
    case4: int
    ambient: int
    terms: dict
    jumping: dict

    def as_dict(self):
        return {"case1": self.case1, "case2": self.case2, "case3": self.case3,
                "case4": self.case4, "ambient": self.ambient}


def _proj_dim(n):
    return n - 1


def r3_orthogonality_dims():
    """Upper bounds for the bad loci inside the 10-dimensional moduli of stable
    rank-3 degree-6 bundles on a genus-2 curve, one per shape of the image of
    the Raynaud-type bundle R (rank 4, degree 4).

    Each bound is assembled from its summands:
      case1: quotient of rank 2, degree 3.  Quot dim 3 + Pic^3 + P(Ext^1(L, G')).
      case2: image of rank 3, degree 4.  Length-2 torsion + G' + P(Ext^1(T, G')).
      case3: image of rank 3, degree 5.  Length-1 torsion + G' + P(Ext^1(T, G')).
      case4: image equal to G.  Pic^{-2} + P(Hom(L, R)).
    """
    g = CURVE_GENUS
    pic = g
    # case1: L of degree 3, G' of rank 2 and degree 3; G' x L^-1 has no sections
    ext_l_g = -riemann_roch_curve(g, 2, 3 - 2 * 3)
    case1_terms = (3, pic, _proj_dim(ext_l_g))
    # case2: G' is an extension of a degree-0 L with one-dimensional Hom(L, R)
    g2 = pic + _proj_dim(1)
    case2_terms = (2, g2, _proj_dim(3 * 2))
    # case3: L of degree -1, Hom(L, R) = chi(R x L^-1)
    g3 = pic + _proj_dim(riemann_roch_curve(g, 4, 4 + 4 * 1))
    case3_terms = (1, g3, _proj_dim(3 * 1))
    # case4: L of degree -2, Hom(L, R) = chi(R x L^-1)
    case4_terms = (pic, _proj_dim(riemann_roch_curve(g, 4, 4 + 4 * 2)))
    case1, case2, case3, case4 = (sum(t) for t in
                                  (case1_terms, case2_terms, case3_terms, case4_terms))
    ambient = 3 * 3 * (g - 1) + 1
    terms = {"case1": case1_terms, "case2": case2_terms, "case3": case3_terms,
             "case4": case4_terms}
    return OrthogonalityBounds(case1, case2, case3, case4, ambient, terms,
                               jumping_locus_bounds(3))


def jumping_locus_bounds(r):
    """Bounds for bundles F in U(r, 2r) admitting a surjection to a twisted
    spinor fiber: (ext^1 dim, family dim, swept dim, moduli dim).

    The swept locus is a proper subset only from rank 3 on (at r = 2 both sides are 5).
    """
    if r < 3:
        raise ValueError("rank must be >= 3")
    ext1 = 3 * r - 4
    family = (r - 2) ** 2 + 1 + (ext1 - 1)
    swept = family + 3
    moduli = r * r + 1
    assert family == r * r - r and swept < moduli
    return {"ext1": ext1, "family": family, "swept": swept, "moduli": moduli}
