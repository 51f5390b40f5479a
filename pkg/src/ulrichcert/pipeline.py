"""Randomized construction of an ACM curve of degree 15 and genus 12 on a
complete intersection of two quadrics in P^5, and its certification.

The construction runs in stages.  A random curve D' of bidegree data
coming from a determinantal construction lives in P^1 x P^2; projecting to
P^2 gives a plane model of degree 10 with 24 nodes; the canonical series
(adjoint forms of degree 7 through the nodes) minus one pencil fiber maps
the curve to P^5, giving D of degree 15 and genus 12.  Two random quadrics
through D cut out a threefold X, and the numerical conditions making the
twisted ideal sheaf of D in X the quotient of a rank 3 Ulrich bundle are
checked.  Every number in the report is recomputed from the ideals.
"""

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg
from .cohomology import canonical_module, hom_module, sheaf_cohomology_dim
from .gb import dense_kernel, ideal_module
from .gf import is_prime
from .idealops import (RingMap, codim, eliminate, preimage, saturate,
                       singular_locus_check)
from .mpoly import Poly, Ring
from .presentation import Ideal, ModulePresentation
from .resolve import (BettiTable, HilbertSeries, betti_table, degree_genus, free_resolution,
                      hilbert_series_numerator, minimal_generators)
from .rng import stream

COX_NAMES = ["x_0", "x_1", "y_0", "y_1", "y_2"]
COX_DEGREES = [(1, 0), (1, 0), (0, 1), (0, 1), (0, 1)]
PLANE_NAMES = ["y_0", "y_1", "y_2"]
P5_NAMES = ["z_0", "z_1", "z_2", "z_3", "z_4", "z_5"]

# targets
PLANE_DEGREE = 10
GENUS = 12
NODES = 24
DELTA_BETTI = {0: {(0,): 1}, 1: {(6,): 4}, 2: {(8,): 3}}
CURVE_DEGREE = 15
CURVE_BETTI_ROWS = {0: [1, 0, 0, 0, 0], 1: [0, 2, 0, 0, 0], 2: [0, 10, 25, 16, 0],
                    3: [0, 0, 0, 0, 2]}
CURVE_BETTI_TOTALS = [1, 12, 25, 16, 2]
TRUNCATED_NUMERATOR = {(4, 5): 5, (4, 4): -11, (3, 5): -6, (4, 3): 3, (3, 4): 10}
NORMAL_DX = {0: (30, 0), -1: (0, 0)}
NORMAL_DP5 = (68, 0)


@dataclass
class PipelineConfig:
    prime: int = 997
    seed: int = 0
    max_attempts: int = 3
    check_X_smoothness: bool = False
    run_hilbert_series_check: bool = True

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")


class StageFailure(Exception):
    pass


class _Retry(Exception):
    """A random draw was degenerate; redraw from the next substream."""


@dataclass
class StageRecord:
    name: str
    checks: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    attempts: int = 1
    status: str = "pass"

    def check(self, name, expected, got, anchor="", passed=None):
        expected, got = _jsonable(expected), _jsonable(got)
        ok = (expected == got) if passed is None else bool(passed)
        if not anchor:
            anchor = f"{name}: {json.dumps(expected)}"
        self.checks.append({"name": name, "expected": expected,
                            "got": got, "pass": ok, "anchor": anchor})
        if not ok:
            self.status = "fail"
        return ok

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        return {"status": self.status, "attempts": self.attempts, "checks": self.checks,
                "witnesses": _jsonable(self.witnesses), "notes": list(self.notes)}


def _jsonable(x):
    if isinstance(x, (BettiTable,)):
        return x.to_json()
    if isinstance(x, HilbertSeries):
        return str(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): _jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


class CertificationReport:
    """Stage records plus the overall verdict; serializes to canonical JSON."""

    def __init__(self, prime, seed, mode="construct"):
        self.prime = prime
        self.seed = seed
        self.mode = mode
        self.stages = {}

    def add(self, rec):
        self.stages[rec.name] = rec

    @property
    def verdict(self):
        ok = bool(self.stages) and all(r.passed for r in self.stages.values())
        return "pass" if ok else "fail"

    def to_json(self):
        return {"prime": self.prime, "seed": self.seed, "mode": self.mode,
                "verdict": self.verdict,
                "stages": {k: r.to_json() for k, r in self.stages.items()}}

    def dumps(self):
        return json.dumps(self.to_json(), indent=2) + "\n"

    def get(self, stage, check):
        for c in self.stages[stage].checks:
            if c["name"] == check:
                return c
        raise KeyError(check)


# ---------------------------------------------------------------------------
# rings and small helpers

def cox_ring(p):
    return Ring(COX_NAMES, COX_DEGREES, "grevlex", p)


def plane_ring(p):
    return Ring(PLANE_NAMES, None, "grevlex", p)


def p5_ring(p):
    return Ring(P5_NAMES, None, "grevlex", p)


def _random_linear(ring, variables, rng):
    p = ring.p
    out = ring.zero()
    for v in variables:
        out = out + ring.var(v).scale(rng.below(p))
    return out


def _combine(vectors, coeffs, ring):
    n = len(vectors[0])
    out = []
    for i in range(n):
        f = ring.zero()
        for v, c in zip(vectors, coeffs):
            if c:
                f = f + v[i].scale(c)
        out.append(f)
    return out


def ideal_piece_dim(I, d):
    """dim I_d for a homogeneous ideal."""
    return I.ring.monomial_count(d) - I.hilbert_function(d)


def _coefficient_matrix(polys, ring, deg):
    mons = [ring.pack(e) for e in ring.monomials(deg)]
    return np.array([[f.d.get(m, 0) for m in mons] for f in polys], dtype=np.int64).reshape(
        len(polys), len(mons))


def _run_with_retries(rec, cfg, body):
    """Call body(rng) on fresh substreams until it stops asking for a retry."""
    last = None
    for attempt in range(cfg.max_attempts):
        rng = stream(cfg.seed, rec.name, attempt)
        rec.attempts = attempt + 1
        try:
            return body(rng)
        except _Retry as exc:
            last = str(exc)
            rec.notes.append(f"attempt {attempt + 1}: {last}")
    rec.status = "fail"
    raise StageFailure(f"{rec.name}: degenerate draws in all {cfg.max_attempts} attempts ({last})")


# ---------------------------------------------------------------------------
# stage 1: the random curve in P^1 x P^2

def random_curve_bidegree(cfg, rec=None):
    """Saturated ideal of the random curve D' in the Cox ring of P^1 x P^2.

    M: S(-4,-5)^5 -> S(-3,-5)^6 ⊕ S(-4,-4)^11 is random with entries linear
    in x (first 6 rows) or y (last 11 rows).  Columns of N are random
    elements of ker(M^T) of degrees (-4,-3) (three) and (-3,-4) (ten); the
    kernel of N^T is free of rank one and its generator's entries generate
    the curve ideal, which is then saturated by the irrelevant ideal.
    """
    rec = rec or StageRecord("random_curve")
    S = cox_ring(cfg.prime)
    row_deg = [(-4, -5)] * 5
    col_deg = [(-3, -5)] * 6 + [(-4, -4)] * 11
    n_deg = [(-4, -3)] * 3 + [(-3, -4)] * 10

    def body(rng):
        M = [[_random_linear(S, [0, 1], rng) for _ in range(5)] for _ in range(6)]
        M += [[_random_linear(S, [2, 3, 4], rng) for _ in range(5)] for _ in range(11)]
        cols = [list(M[i]) for i in range(17)]  # column i of M^T
        K1 = dense_kernel(cols, row_deg, col_deg, (-4, -3))
        K2 = dense_kernel(cols, row_deg, col_deg, (-3, -4))
        if (len(K1), len(K2)) != (3, 10):
            raise _Retry(f"ker(M^T) pieces have dims {(len(K1), len(K2))}")
        vs = [_combine(K1, rng.elements(S.p, 3), S) for _ in range(3)]
        vs += [_combine(K2, rng.elements(S.p, 10), S) for _ in range(10)]
        W = dense_kernel(vs, col_deg, n_deg, (0, 0))
        if len(W) != 1:
            raise _Retry(f"degree-(0,0) kernel of N^T has dim {len(W)}")
        return (len(K1), len(K2)), W[0]

    dims, w = _run_with_retries(rec, cfg, body)
    raw = Ideal([f for f in w if f], S)
    I = saturate(raw)
    rec.check("kernel piece dims of M^T", [3, 10], list(dims))
    rec.check("kernel of N^T in degree (0,0)", 1, 1)
    hf = {d: ideal_piece_dim(I, d) for d in [(3, 4), (4, 3), (3, 3)]}
    rec.check("dim I_(3,4)", 10, hf[(3, 4)], "h0(I(3,4)) = 10")
    rec.check("dim I_(4,3)", 3, hf[(4, 3)], "h0(I(4,3)) = 3")
    rec.check("dim I_(3,3)", 0, hf[(3, 3)], "h0(I(3,3)) = 0")
    rec.witnesses["raw generator degrees"] = sorted(f.multidegree() for f in raw.gens)
    return I


def truncated_hilbert_series(I):
    """(route A, route B) numerators of the ideal truncated at degrees
    >= (3,3), as HilbertSeries of the ideal (not of the quotient)."""
    S = I.ring
    gens = []
    for g in I.gb_polys():
        a, b = g.multidegree()
        shift = (max(a, 3) - a, max(b, 3) - b)
        for e in S.monomials(shift):
            gens.append(g * S.monomial(e))
    T = Ideal(gens, S)
    # route A: lead-term ideal of the truncation
    numA = {k: -v for k, v in T.hilbert_numerator().items()}
    zero = (0,) * S.grading_rank
    numA[zero] = numA.get(zero, 0) + 1
    # route B: minimal resolution of S/I_trunc
    C = free_resolution(T.gens)
    numB = {k: -v for k, v in hilbert_series_numerator(C).numerator.items()}
    numB[zero] = numB.get(zero, 0) + 1
    return HilbertSeries(numA, S.degrees), HilbertSeries(numB, S.degrees)


def hilbert_series_stage(I, rec=None):
    rec = rec or StageRecord("hilbert_series")
    A, B = truncated_hilbert_series(I)
    target = HilbertSeries(TRUNCATED_NUMERATOR, I.ring.degrees)
    rec.check("numerator of the (>=3,>=3) truncation (lead terms)", target.format(["s", "t"]),
              A.format(["s", "t"]), "numerator over (1-s)^2 (1-t)^3")
    rec.check("numerator of the (>=3,>=3) truncation (resolution)", target.format(["s", "t"]),
              B.format(["s", "t"]), "numerator over (1-s)^2 (1-t)^3")
    return A


# ---------------------------------------------------------------------------
# stage 2: plane model and its nodes

def plane_model(I, rec=None):
    """Eliminate x_0, x_1: the principal ideal of the plane model."""
    rec = rec or StageRecord("plane_model")
    P2 = plane_ring(I.ring.p)
    G = eliminate(I, ["x_0", "x_1"], target=P2)
    gens = G.gb_polys()
    rec.check("number of generators of the eliminated ideal", 1, len(gens))
    if len(gens) != 1:
        rec.status = "fail"
        raise StageFailure("plane model is not principal")
    F = gens[0]
    rec.check("plane model degree d", PLANE_DEGREE, F.degree(), "d = degree of the plane model = 10")
    return Ideal([F], P2)


def verify_nodal_model(IG, rec=None):
    """Singular scheme Δ of the plane model, its degree, genus and Betti table."""
    rec = rec or StageRecord("nodal_model")
    F = IG.gens[0]
    R = IG.ring
    raw = Ideal([F.derivative(v) for v in range(R.nvars)] + [F], R)
    d = F.degree()
    delta = degree_genus(raw.gens)[1]
    ID = saturate(raw)
    delta_sat = degree_genus(ID.gens)[1]
    _, cd, _ = singular_locus_check(ID, 3, c=2)
    g = comb(d - 1, 2) - delta
    rec.check("distinct points: codim(2x2 minors of jac(I_Delta) + I_Delta)", 3, cd,
              "distinctPoints(IDelta) = true")
    rec.check("delta = degree of Delta", NODES, delta, "delta = degree IDelta = 24")
    rec.check("degree of saturated Delta", NODES, delta_sat)
    rec.check("genus g = C(d-1,2) - delta", GENUS, g, "(d,g,delta) = (10,12,24)")
    B = betti_table(free_resolution(ID.gens))
    rec.check("Betti totals of S/I_Delta", [1, 4, 3], list(B.totals()), "betti res IDelta: 1 4 3")
    rec.check("Betti table of S/I_Delta", BettiTable(DELTA_BETTI).to_json(), B.to_json())
    rec.witnesses["betti I_Delta"] = str(B)
    rec.notes.append("nodality (ordinary double points only) is not checked; "
                     "the check above certifies a reduced zero-dimensional singular scheme")
    return ID, g


# ---------------------------------------------------------------------------
# stage 3: canonical embedding minus a pencil fiber

def embed_canonical_p5(I_curve, IG, ID, cfg, rec=None):
    """Map the curve to P^5 by the adjoint forms of degree 7 vanishing on one
    fiber of the projection to P^1; return (RingMap, I_D)."""
    rec = rec or StageRecord("canonical_embedding")
    P2 = IG.ring
    p = P2.p
    F = IG.gens[0]
    dim7 = ideal_piece_dim(ID, (7,))
    rec.check("dim (I_Delta)_7 = h0(omega_D)", GENUS, dim7)
    mg = [g for g, _ in minimal_generators(ID.gens)]
    sextics = [g for g in mg if g.degree() == 6]
    petri = _coefficient_matrix([g * P2.var(v) for g in sextics for v in range(3)], P2, (7,))
    rec.check("Petri map (I_Delta)_6 x R_1 -> (I_Delta)_7 rank", GENUS, linalg.rank(petri, p),
              "the Petri map is an isomorphism")

    def body(rng):
        LK = []
        for _ in range(GENUS):
            f = P2.zero()
            for g in mg:
                f = f + g * _random_linear(P2, range(3), rng)
            LK.append(f)
        rk = linalg.rank(_coefficient_matrix(LK, P2, (7,)), p)
        if rk != GENUS:
            raise _Retry(f"random adjoint forms span {rk} dimensions")
        a, b = rng.below(p), rng.below(p)
        if a == 0 and b == 0:
            raise _Retry("the zero vector is not a point of P^1")
        imgs = [P2.const(a), P2.const(b)] + list(P2.gens())
        L1 = [f.substitute(imgs, P2) for f in I_curve.gb_polys()]
        J = Ideal([f for f in L1 if f] + [F], P2)
        nf = [J.gb().normal_form(f) for f in LK]
        K = linalg.left_nullspace(_coefficient_matrix(nf, P2, (7,)), p)
        if len(K) != 6:
            raise _Retry(f"forms through the fiber span {len(K)} dimensions")
        fiber_degree = degree_genus(J.gens)[1]
        KD = [_combine([[f] for f in LK], [int(c) for c in row], P2)[0] for row in K]
        return KD, fiber_degree, (a, b)

    KD, fiber_degree, pt = _run_with_retries(rec, cfg, body)
    rec.check("degree of the pencil fiber", 7, fiber_degree, "g^1_7 fiber")
    rec.check("h0(omega_D - fiber)", 6, len(KD))
    T = p5_ring(p)
    phi = RingMap(T, P2, KD)
    I_D = preimage(phi, IG)
    D, deg, genus = degree_genus(I_D.gens)
    rec.check("(degree, genus) of I_D", [CURVE_DEGREE, GENUS], [deg, genus],
              "(degree ID, genus ID) = (15, 12)")
    rec.check("genus: plane model nodes vs Hilbert polynomial", GENUS, genus)
    # cross-check of the preimage by dense linear algebra: quadrics and
    # cubics in z whose image lies in (F)
    for k in (2, 3):
        dense = _dense_preimage_dim(KD, F, T, k)
        rec.check(f"dim (I_D)_{k}: elimination vs dense kernel", ideal_piece_dim(I_D, (k,)), dense)
    return phi, I_D


def _dense_preimage_dim(KD, F, T, k):
    """dim of {q in T_k : q(KD) in (F)} by linear algebra in degree 7k."""
    P2 = F.ring
    p = P2.p
    mons = T.monomials(k)
    imgs = [Poly.substitute(T.monomial(e), KD, P2) for e in mons]
    deg = 7 * k
    Fm = [F * P2.monomial(e) for e in P2.monomials(deg - F.degree())]
    A = _coefficient_matrix(imgs, P2, (deg,))
    B = _coefficient_matrix(Fm, P2, (deg,))
    # q ranges over vectors c with c A in rowspace(B)
    rB = linalg.rank(B, p) if len(Fm) else 0
    rAB = linalg.rank(np.concatenate([A, B]) if len(Fm) else A, p)
    return len(mons) - (rAB - rB)


# ---------------------------------------------------------------------------
# stage 4: ACM curve in P^5

def verify_acm_curve(I_D, rec=None):
    rec = rec or StageRecord("acm_curve")
    C = free_resolution(I_D.gens)
    B = betti_table(C)
    c = codim(I_D)
    rec.check("codimension of D", 4, c)
    rec.check("projective dimension = codimension (ACM)", c, C.length,
              "pdim = codim, so D is ACM")
    rec.check("Betti totals of S/I_D", CURVE_BETTI_TOTALS, list(B.totals()),
              "betti res ID: 1 12 25 16 2")
    rec.check("Betti rows of S/I_D", {str(k): v for k, v in CURVE_BETTI_ROWS.items()},
              {str(k): v for k, v in B.rows().items()})
    rec.witnesses["betti I_D"] = str(B)
    try:
        W, degs = canonical_module(I_D, c)
    except ValueError as exc:
        rec.check("canonical module", "Cohen-Macaulay", str(exc))
        return rec
    gen_degs = [d[0] for d in degs]
    rec.check("canonical module generator degrees", [-1, -1], gen_degs,
              "omega_D generated by its 2 sections in degree -1")
    rec.check("h0(omega_D(-1))", 2, W.hilbert_function((-1,)))
    rec.check("h0(omega_D) = g", GENUS, W.hilbert_function((0,)))
    rec.check("no relation of the canonical module in degree 0",
              2 * 6, W.hilbert_function((0,)))
    return rec


# ---------------------------------------------------------------------------
# stage 5: the quadric pencil and the normal sheaves

def choose_quadric_pencil(I_D, cfg, rec=None):
    """I_X = two random combinations of the two quadrics of I_D."""
    rec = rec or StageRecord("pencil_choice")
    T = I_D.ring
    quads = [g for g, _ in minimal_generators(I_D.gens) if g.degree() == 2]
    rec.check("number of quadric generators of I_D", 2, len(quads))
    if len(quads) != 2:
        raise StageFailure("I_D does not have exactly two quadric generators")

    def body(rng):
        X = [quads[0].scale(rng.below(T.p)) + quads[1].scale(rng.below(T.p)) for _ in range(2)]
        if linalg.rank(_coefficient_matrix(X, T, (2,)), T.p) != 2:
            raise _Retry("the two quadrics are dependent")
        return X

    return Ideal(_run_with_retries(rec, cfg, body), T)


def check_quadric_pencil(I_D, I_X, cfg, rec):
    T = I_D.ring
    rec.check("I_X has two independent quadrics",
              2, linalg.rank(_coefficient_matrix(I_X.gens, T, (2,)), T.p))
    rec.check("I_X contained in I_D", True, I_X.is_subset(I_D))
    D, deg, _ = degree_genus(I_X.gens)
    rec.check("X is a threefold of degree 4", [4, 4], [D, deg])
    rec.check("h0(O_X(2))", 19, I_X.hilbert_function((2,)),
              "h0(O_D(2)) = 19 = h0(O_X(2))")
    rec.check("h0(O_D(2))", 19, I_D.hilbert_function((2,)))
    if cfg.check_X_smoothness:
        _, _, smooth = singular_locus_check(I_X, T.nvars, c=2)
        rec.check("X smooth (Jacobian criterion)", True, smooth)


def conormal_module(I_D, J):
    """I_D / J as a module (J ⊇ I_D^2)."""
    T = I_D.ring
    gens = [g for g, _ in minimal_generators(I_D.gens)]
    return ModulePresentation(ideal_module(T), [g.d for g in J.gb_polys()],
                              [g.d for g in gens])


def normal_sheaf_report(I_D, I_X, rec=None):
    rec = rec or StageRecord("normal_sheaf")
    T = I_D.ring
    gens = [g for g, _ in minimal_generators(I_D.gens)]
    sq = Ideal([f * g for i, f in enumerate(gens) for g in gens[i:]], T)
    O_D = ModulePresentation(ideal_module(T), [g.d for g in I_D.gb_polys()])
    J_X = saturate(sq + I_X)
    N_DX = hom_module(conormal_module(I_D, J_X), O_D)
    for j, target in NORMAL_DX.items():
        h = (sheaf_cohomology_dim(N_DX, 0, j), sheaf_cohomology_dim(N_DX, 1, j))
        anchor = ("HH^0 NDX = Fp^30, HH^1 NDX = 0" if j == 0
                  else "HH^0 NDX(-1) = 0, HH^1 NDX(-1) = 0")
        rec.check(f"(h0, h1)(N_D/X({j}))", list(target), list(h), anchor)
    J_P = saturate(sq)
    N_DP = hom_module(conormal_module(I_D, J_P), O_D)
    h = (sheaf_cohomology_dim(N_DP, 0, 0), sheaf_cohomology_dim(N_DP, 1, 0))
    rec.check("(h0, h1)(N_D/P5)", list(NORMAL_DP5), list(h), "HH^0 NDP = Fp^68, HH^1 NDP = 0")
    rec.witnesses["N_D/X generators"] = len(N_DX.ambient.twists)
    rec.witnesses["N_D/P5 generators"] = len(N_DP.ambient.twists)
    return rec


# ---------------------------------------------------------------------------
# stage 6: the rank 3 Ulrich numerics

def certify_ulrich_rank3(I_D, I_X, rec=None):
    """Numbers behind 0 -> O_X^2 -> E -> I_{D/X}(3) -> 0 with X of degree 4.

    h0(I_{D/X}(k)) = dim (I_D)_k - dim (I_X)_k; with h1(O_X) = 0 and
    h0(O_X(-1)) = 0 one gets h0(E) = 2 + h0(I_{D/X}(3)) and
    h0(E(-1)) = h0(I_{D/X}(2)).
    """
    rec = rec or StageRecord("ulrich")
    h2 = ideal_piece_dim(I_D, (2,)) - ideal_piece_dim(I_X, (2,))
    h3 = ideal_piece_dim(I_D, (3,)) - ideal_piece_dim(I_X, (3,))
    h3b = I_X.hilbert_function((3,)) - I_D.hilbert_function((3,))
    rec.check("h0(I_D/X(2))", 0, h2, "h0(E(-1)) = h0(I_D(2)) = 0")
    rec.check("h0(I_D/X(3))", 10, h3, "h0(I_D(3)) = h0(O_X(3)) - h0(O_D(3)) = 10")
    rec.check("h0(I_D/X(3)) via h0(O_X(3)) - h0(O_D(3))", h3, h3b)
    hE = 2 + h3
    rec.check("h0(E) = deg(X) * rank(E)", 4 * 3, hE, "h0(E) = 12")
    rec.check("h0(E(-1))", 0, h2)
    return rec


# ---------------------------------------------------------------------------
# drivers

CERTIFY_STAGES = ["acm_curve", "quadric_pencil", "normal_sheaf", "ulrich"]


def _run_stage(report, name, fn):
    rec = StageRecord(name)
    report.add(rec)
    try:
        out = fn(rec)
    except StageFailure as exc:
        rec.status = "fail"
        rec.notes.append(str(exc))
        raise
    if not rec.passed:
        failed = [c["name"] for c in rec.checks if not c["pass"]]
        rec.notes.append(f"{name} failed: " + "; ".join(failed))
        raise StageFailure(f"{name} failed")
    return out


def certify_pair(I_D, I_X, cfg, report):
    """Stages that depend only on (I_D, I_X); shared by construct and certify.
    Raises StageFailure at the first failing stage."""
    _run_stage(report, "acm_curve", lambda r: verify_acm_curve(I_D, r))
    _run_stage(report, "quadric_pencil", lambda r: check_quadric_pencil(I_D, I_X, cfg, r))
    _run_stage(report, "normal_sheaf", lambda r: normal_sheaf_report(I_D, I_X, r))
    _run_stage(report, "ulrich", lambda r: certify_ulrich_rank3(I_D, I_X, r))


@dataclass
class ConstructionResult:
    report: CertificationReport
    ideals: dict


def construct(cfg):
    """Run every stage in order, stopping at the first failing one."""
    report = CertificationReport(cfg.prime, cfg.seed, "construct")
    ideals = {}
    run = lambda name, fn: _run_stage(report, name, fn)
    try:
        I1 = run("random_curve", lambda r: random_curve_bidegree(cfg, r))
        ideals["I_Dprime"] = I1
        if cfg.run_hilbert_series_check:
            run("hilbert_series", lambda r: hilbert_series_stage(I1, r))
        IG = run("plane_model", lambda r: plane_model(I1, r))
        ideals["I_Gamma"] = IG
        ID, _ = run("nodal_model", lambda r: verify_nodal_model(IG, r))
        ideals["I_Delta"] = ID
        _, I_D = run("canonical_embedding", lambda r: embed_canonical_p5(I1, IG, ID, cfg, r))
        ideals["I_D"] = I_D
        I_X = run("pencil_choice", lambda r: choose_quadric_pencil(I_D, cfg, r))
        ideals["I_X"] = I_X
        certify_pair(I_D, I_X, cfg, report)
    except StageFailure:
        pass
    return ConstructionResult(report, ideals)


def certify(I_D, I_X, cfg):
    """Re-check a given (I_D, I_X) pair; the stage records coincide with
    those of `construct` for the same pair."""
    report = CertificationReport(cfg.prime, cfg.seed, "certify")
    try:
        certify_pair(I_D, I_X, cfg, report)
    except StageFailure:
        pass
    return report
