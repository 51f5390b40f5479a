"""Ideal quotients, saturation, elimination, preimages and singular loci."""

import random
from itertools import combinations, product

from .gb import FreeModule, f4
from .mpoly import Poly, Ring
from .presentation import Ideal, series_coefficient


def as_ideal(I, ring=None):
    if isinstance(I, Ideal):
        return I
    return Ideal(list(I), ring)


# ---------------------------------------------------------------------------
# quotients and intersections

def _lift_poly(f, big, comp):
    return {big.enc(comp, m): c for m, c in f.d.items()}


def quotient_by_element(I, g):
    """I : g, from a GB of the graph module generated by (g, 1) and (f_i, 0)
    in S ⊕ S(-deg g) with position-over-term order.  Elements whose first
    component vanishes carry the quotient in their second component."""
    I = as_ideal(I)
    R = I.ring
    if not g:
        return Ideal([R.one()], R)
    if not I.gens:
        return Ideal([], R)
    big = FreeModule(R, [(0,) * R.grading_rank, g.multidegree()])
    gens = [_lift_poly(f, big, 0) for f in I.gb_polys()]
    e = _lift_poly(g, big, 0)
    e[big.enc(1, 0)] = 1
    gens.append(e)
    G = f4(big, gens)
    out = []
    for el, L in zip(G.elements, G.leads):
        if big.comp(L) == 1:
            out.append(Poly(R, {big.mono(P): c for P, c in el.items()}))
    return Ideal(out, R)


def intersect(I, J):
    """I ∩ J via a GB of (f_i, 0), (g_j, g_j) in S ⊕ S (position over term)."""
    I, J = as_ideal(I), as_ideal(J)
    R = I.ring
    if not I.gens or not J.gens:
        return Ideal([], R)
    big = FreeModule(R, [(0,) * R.grading_rank] * 2)
    gens = [_lift_poly(f, big, 0) for f in I.gens]
    for g in J.gens:
        e = _lift_poly(g, big, 0)
        e.update(_lift_poly(g, big, 1))
        gens.append(e)
    G = f4(big, gens)
    out = [Poly(R, {big.mono(P): c for P, c in el.items()})
           for el, L in zip(G.elements, G.leads) if big.comp(L) == 1]
    return Ideal(out, R)


def ideal_quotient(I, J):
    """I : J = {f : f J ⊆ I}."""
    I, J = as_ideal(I), as_ideal(J, I.ring)
    gens = [g for g in J.gens if g]
    if not gens:
        raise ValueError("quotient by the zero ideal")
    degs = {g.multidegree() for g in gens}
    if len(degs) == 1 and len(gens) > 1:
        return _quotient_equal_degree(I, gens)
    out = None
    for g in gens:
        Q = quotient_by_element(I, g)
        out = Q if out is None else intersect(out, Q)
    return out


def _quotient_equal_degree(I, gens):
    """I : ⟨g_1..g_k⟩ with all g_j of one degree, in one GB computation:
    in S^k ⊕ S(-deg g) take (Σ g_j e_j, 1) and f_i e_j; elements with zero
    S^k part carry the quotient."""
    R = I.ring
    if not I.gens:
        return Ideal([], R)
    k = len(gens)
    zero = (0,) * R.grading_rank
    big = FreeModule(R, [zero] * k + [gens[0].multidegree()])
    rows = []
    e = {}
    for j, g in enumerate(gens):
        e.update(_lift_poly(g, big, j))
    e[big.enc(k, 0)] = 1
    rows.append(e)
    for f in I.gb_polys():
        for j in range(k):
            rows.append(_lift_poly(f, big, j))
    G = f4(big, rows)
    out = [Poly(R, {big.mono(P): c for P, c in el.items()})
           for el, L in zip(G.elements, G.leads) if big.comp(L) == k]
    return Ideal(out, R)


# ---------------------------------------------------------------------------
# saturation

def irrelevant_ideal(ring):
    """Product of the ideals generated by each block of variables sharing a
    degree vector; for a standard grading this is the maximal ideal."""
    blocks = _variable_blocks(ring)
    polys = [ring.one()]
    for blk in blocks:
        polys = [f * ring.var(v) for f in polys for v in blk]
    return Ideal(polys, ring)


def _variable_blocks(ring):
    blocks = {}
    for i, d in enumerate(ring.degrees):
        blocks.setdefault(d, []).append(i)
    return list(blocks.values())


def _is_irrelevant(J):
    """True if J is generated by all monomials of one multidegree that is
    the sum of the distinct variable degrees (i.e. J = irrelevant ideal)."""
    R = J.ring
    blocks = _variable_blocks(R)
    target = tuple(sum(d[k] for d in {R.degrees[b[0]] for b in blocks})
                   for k in range(R.grading_rank))
    mons = set()
    for g in J.gens:
        if len(g.d) != 1 or g.multidegree() != target:
            return False
        mons.add(next(iter(g.d)))
    expected = irrelevant_ideal(R)
    return mons == {next(iter(f.d)) for f in expected.gens}


def saturate(I, J=None, method="auto", max_iter=100):
    """I : J^∞ (J defaults to the irrelevant ideal).

    method "quotient" iterates ideal_quotient until the GB stabilises.
    method "auto" first tries a fast route for the irrelevant ideal:
    K = I : (ℓ_1 ⋯ ℓ_r)^∞ for one linear form ℓ_k per block of variables,
    each colon by a linear form done by one grevlex GB with ℓ_k as the last
    variable.  K contains the saturation; the two coincide exactly when
    S/K and S/I have the same Hilbert function in all large multidegrees,
    which is checked on the Hilbert series.  If the check fails (or J is
    not the irrelevant ideal) the quotient iteration is used.
    """
    I = as_ideal(I)
    R = I.ring
    if not I.gens:
        return I
    J = irrelevant_ideal(R) if J is None else as_ideal(J, R)
    if method == "auto" and _is_irrelevant(J):
        rng = random.Random(0x5A7)
        for attempt in range(3):
            K = _saturate_linear_forms(I, rng, generic=attempt > 0)
            if _agree_eventually(I, K):
                return K
    elif method not in ("auto", "quotient"):
        raise ValueError(f"unknown saturation method {method!r}")
    return _saturate_by_quotients(I, J, max_iter)


def _saturate_by_quotients(I, J, max_iter):
    cur = I
    for _ in range(max_iter):
        nxt = ideal_quotient(cur, J)
        if nxt.gb() == cur.gb():
            return cur
        cur = nxt
    raise RuntimeError("saturation did not stabilise")


def saturate_by_element(I, g):
    """I : g^∞ by iterated element quotients."""
    cur = as_ideal(I)
    while True:
        nxt = quotient_by_element(cur, g)
        if nxt.gb() == cur.gb():
            return cur
        cur = nxt


def colon_variable_power(I, v):
    """I : x_v^∞ via a grevlex GB in which x_v is the smallest variable:
    dividing each basis element by its largest power of x_v gives a GB of
    the saturation."""
    I = as_ideal(I)
    R = I.ring
    n = R.nvars
    perm = [i for i in range(n) if i != v] + [v]
    R2 = Ring([R.names[i] for i in perm], [R.degrees[i] for i in perm], "grevlex", R.p)
    fwd = [perm.index(i) for i in range(n)]
    G = Ideal([_permute(f, R2, fwd) for f in I.gens], R2).gb_polys()
    out = []
    for g in G:
        ex = [R2.unpack(P)[n - 1] for P in g.d]
        k = min(ex)
        d = {}
        for P, c in g.d.items():
            e = list(R2.unpack(P))
            e[n - 1] -= k
            d[R.pack([e[fwd[i]] for i in range(n)])] = c
        out.append(Poly(R, d))
    return Ideal(out, R)


def _permute(f, R2, fwd):
    """Poly of f.ring re-expressed in R2 where variable i sits at fwd[i]."""
    n = R2.nvars
    d = {}
    for P, c in f.d.items():
        e = f.ring.unpack(P)
        e2 = [0] * n
        for i, a in enumerate(e):
            e2[fwd[i]] = a
        d[R2.pack(e2)] = c
    return Poly(R2, d)


def _saturate_linear_forms(I, rng, generic):
    R = I.ring
    p = R.p
    K = I
    for blk in _variable_blocks(R):
        v = blk[-1]
        if generic and len(blk) > 1:
            # x_v -> x_v - Σ c_i x_i turns ℓ = x_v + Σ c_i x_i into x_v
            cs = {i: rng.randrange(1, p) for i in blk[:-1]}
            fwd_imgs = list(R.gens())
            fwd_imgs[v] = R.var(v) - sum((R.var(i).scale(c) for i, c in cs.items()), R.zero())
            back_imgs = list(R.gens())
            back_imgs[v] = R.var(v) + sum((R.var(i).scale(c) for i, c in cs.items()), R.zero())
            K2 = Ideal([f.substitute(fwd_imgs, R) for f in K.gens], R)
            K2 = colon_variable_power(K2, v)
            K = Ideal([f.substitute(back_imgs, R) for f in K2.gens], R)
        else:
            K = colon_variable_power(K, v)
    return K


def _agree_eventually(I, K):
    """Whether dim (S/I)_a = dim (S/K)_a for all multidegrees a with every
    coordinate large.  The difference of the Hilbert series is
    Δ(t)/Π_k (1 - t_k)^{n_k}; its coefficient function is a polynomial in
    each coordinate beyond the exponents of Δ, so testing n_k + 1 values per
    coordinate there decides the question."""
    R = I.ring
    num_I = I.hilbert_numerator()
    num_K = K.hilbert_numerator()
    delta = dict(num_I)
    for k, v in num_K.items():
        delta[k] = delta.get(k, 0) - v
    delta = {k: v for k, v in delta.items() if v}
    if not delta:
        return True
    r = R.grading_rank
    blocks = _variable_blocks(R)
    if any(sum(1 for x in d if x) != 1 for d in R.degrees) or len(blocks) != r:
        return False
    counts = [0] * r
    for d in R.degrees:
        counts[max(range(r), key=lambda k: d[k])] += 1
    start = [max(k[j] for k in delta) + 1 for j in range(r)]
    grid = [[start[j] + t for t in range(counts[j] + 1)] for j in range(r)]
    for a in product(*grid):
        if series_coefficient(delta, R.degrees, a) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# elimination and ring maps

def eliminate(I, variables, target=None):
    """I ∩ F_p[remaining variables].

    `variables` are indices or names.  The GB is taken in an elimination
    order with the eliminated variables first.  With `target` (a ring whose
    variable names are the remaining ones) the result is moved there;
    otherwise it stays in I's ring.
    """
    I = as_ideal(I)
    R = I.ring
    idx = [R.index(v) if isinstance(v, str) else int(v) for v in variables]
    rest = [i for i in range(R.nvars) if i not in idx]
    perm = idx + rest
    R2 = Ring([R.names[i] for i in perm], [R.degrees[i] for i in perm],
              f"elimination({len(idx)})", R.p)
    fwd = [perm.index(i) for i in range(R.nvars)]
    G = Ideal([_permute(f, R2, fwd) for f in I.gens], R2).gb_polys()
    k = len(idx)
    kept = [g for g in G if all(not any(R2.unpack(P)[:k]) for P in g.d)]
    if target is None:
        back = [perm[j] for j in range(R.nvars)]
        out = []
        for g in kept:
            d = {}
            for P, c in g.d.items():
                e2 = R2.unpack(P)
                e = [0] * R.nvars
                for j, a in enumerate(e2):
                    e[back[j]] = a
                d[R.pack(e)] = c
            out.append(Poly(R, d))
        return Ideal(out, R)
    pos = [target.index(R2.names[j]) for j in range(k, R.nvars)]
    out = []
    for g in kept:
        d = {}
        for P, c in g.d.items():
            e2 = R2.unpack(P)
            e = [0] * target.nvars
            for j, a in zip(pos, e2[k:]):
                e[j] = a
            d[target.pack(e)] = c
        out.append(Poly(target, d))
    return Ideal(out, target)


class RingMap:
    """Graded F_p-algebra map source -> target given by images of variables."""

    def __init__(self, source, target, images):
        images = list(images)
        if len(images) != source.nvars:
            raise ValueError("one image per source variable required")
        for f in images:
            if f.ring != target:
                raise ValueError("images must live in the target ring")
        self.source = source
        self.target = target
        self.images = images

    def __call__(self, f):
        return f.substitute(self.images, self.target)


def preimage(phi, J=None):
    """φ^{-1}(J) for a ring map φ: A -> B and a homogeneous ideal J of B.

    Every image must be homogeneous of one degree δ with each source
    variable of degree 1 (so φ multiplies degrees by δ).  Works in the joined
    ring B[z] with z_i of degree δ: eliminating B's variables from
    J + ⟨z_i - φ(z_i)⟩ leaves φ^{-1}(J).
    """
    A, B = phi.source, phi.target
    J = Ideal([], B) if J is None else as_ideal(J, B)
    degs = {f.multidegree() for f in phi.images if f}
    if len(degs) != 1:
        raise ValueError("images must be nonzero and homogeneous of one degree")
    delta = degs.pop()
    if any(d != (1,) for d in A.degrees):
        raise ValueError("source must be standard graded")
    names_b = list(B.names)
    names_a = [n if n not in names_b else n + "_src" for n in A.names]
    C = Ring(names_b + names_a, list(B.degrees) + [delta] * A.nvars, "grevlex", B.p)
    nb = B.nvars

    def up(f):
        d = {}
        for P, c in f.d.items():
            e = list(B.unpack(P)) + [0] * A.nvars
            d[C.pack(e)] = c
        return Poly(C, d)

    gens = [up(f) for f in J.gens]
    for i, f in enumerate(phi.images):
        gens.append(C.var(nb + i) - up(f))
    E = eliminate(Ideal(gens, C), list(range(nb)))
    out = []
    for g in E.gens:
        d = {}
        for P, c in g.d.items():
            e = C.unpack(P)
            d[A.pack(list(e[nb:]))] = c
        out.append(Poly(A, d))
    return Ideal(out, A)


# ---------------------------------------------------------------------------
# Jacobians, minors, codimension

def jacobian(polys):
    """Matrix (list of rows) of partial derivatives: row per polynomial."""
    return [[f.derivative(v) for v in range(f.ring.nvars)] for f in polys]


def determinant(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * determinant(sub)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total if total is not None else M[0][0].ring.zero()


def minors(k, M):
    """All nonzero k×k minors of a matrix of Polys."""
    rows, cols = len(M), len(M[0]) if M else 0
    out = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            d = determinant([[M[r][c] for c in cs] for r in rs])
            if d:
                out.append(d)
    return out


def codim(I):
    """Codimension of a homogeneous ideal: number of variables minus the
    largest size of a set of variables containing no lead monomial's
    support (computed on a GB)."""
    I = as_ideal(I)
    R = I.ring
    n = R.nvars
    if not I.gens:
        return 0
    supports = []
    for ex in (R.unpack(L) for L in I.gb().leads):
        s = frozenset(i for i, a in enumerate(ex) if a)
        if not s:
            return n + 1  # unit ideal: codimension taken as infinite-like
        supports.append(s)
    best = 0

    def rec(i, chosen):
        nonlocal best
        if len(chosen) + (n - i) <= best:
            return
        if i == n:
            best = max(best, len(chosen))
            return
        cand = chosen | {i}
        if not any(s <= cand for s in supports):
            rec(i + 1, cand)
        rec(i + 1, chosen)

    rec(0, frozenset())
    return n - best


def singular_locus_check(I, expected_codim, c=None):
    """(J, codim J, codim J >= expected) for J = ⟨c×c minors of the
    Jacobian⟩ + I.

    c defaults to the codimension of I, which detects singular points of a
    reduced equidimensional ideal.
    """
    I = as_ideal(I)
    gens = I.gb_polys()
    if c is None:
        c = codim(I)
    J = Ideal(minors(c, jacobian(gens)) + list(I.gens), I.ring)
    k = codim(J)
    return J, k, k >= expected_codim


def ideal_degree(I):
    """Degree of V(I) for a standard graded ring (leading coefficient data of
    the Hilbert polynomial)."""
    from .resolve import degree_genus
    return degree_genus(as_ideal(I).gens)[1]
