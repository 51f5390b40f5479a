"""Hom and Ext of graded modules, and sheaf cohomology by local duality.

Degrees follow one convention throughout: a free module is described by
the degrees of its basis elements, so S(-a) has its generator in degree a.
Hom(S(-a), S(-b)) = S(a - b) is generated in degree b - a.
"""

from . import linalg
from .gb import FreeModule, f4, graded_pieces_matrix, syzygy_module_twisted
from .mpoly import Poly
from .presentation import Ideal, ModulePresentation, minimal_presentation
from .resolve import GradedFreeComplex, minimize, schreyer_resolution

__all__ = [
    "ModulePresentation", "NotCohenMacaulay", "minimal_presentation", "resolution",
    "hom_module", "ext_module", "ext_dim", "sheaf_cohomology_dim", "canonical_module",
]


class NotCohenMacaulay(ValueError):
    """The resolution is longer than the codimension."""


def _neg(a):
    return tuple(-x for x in a)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def resolution(M, minimal=True):
    """Free resolution of M, cached on the presentation.  Graded pieces of
    Ext do not depend on the resolution chosen, so `minimal=False` (the
    Schreyer resolution before pruning) is enough for dimension counts."""
    attr = "_resolution_min" if minimal else "_resolution_schreyer"
    C = getattr(M, attr, None)
    if C is None:
        C = getattr(M, "_resolution_schreyer", None)
        if C is None:
            C = schreyer_resolution(M.to_cokernel())
            M._resolution_schreyer = C
        if minimal:
            C = minimize(C)
            M._resolution_min = C
    return C


def _complex_map_dicts(C, i, module):
    """d_i of C as dicts in `module` (a POT module with F_{i-1}'s twists)."""
    out = []
    for col in C.maps[i - 1]:
        d = {}
        for r, poly in col.items():
            for m, c in poly.items():
                d[module.enc(r, m)] = c
        out.append(d)
    return out


def _presentation_matrix(M):
    """(generator degrees, relation degrees, relation columns as row-index dicts)."""
    P = minimal_presentation(M)
    F0 = P.ambient
    cols = []
    rel_deg = []
    for r in P.relations:
        col = {}
        for key, c in r.items():
            i, m = F0.split(key)
            col.setdefault(i, {})[m] = c
        cols.append(col)
        rel_deg.append(F0.degree_of(r))
    return list(F0.twists), rel_deg, cols


def hom_module(M, N):
    """Hom(M, N) for finitely presented graded modules over one ring.

    With presentations F1 -φ-> F0 -> M and G1 -ψ-> G0 -> N, a map is a
    u ∈ Hom(F0, G0) with u∘φ ∈ im(ψ∘-), taken modulo im(ψ∘-) on Hom(F0, G1).
    The admissible u come from a GB of the graph module generated by
    (u∘φ, u) and (ψ∘w, 0) in Hom(F1,G0) ⊕ Hom(F0,G0), position over term:
    the elements with vanishing first block.  Returns a minimal cokernel
    presentation.
    """
    R = M.ring
    a, c, phi = _presentation_matrix(M)
    b, q, psi = _presentation_matrix(N)
    r0, r1, s0 = len(a), len(c), len(b)
    if r0 == 0 or s0 == 0:
        return ModulePresentation(FreeModule(R, []), [])
    # Hom(F0,G0) basis (k,l) -> index k*s0+l, degree b_l - a_k
    hom00 = [_sub(b[l], a[k]) for k in range(r0) for l in range(s0)]
    hom10 = [_sub(b[l], c[m]) for m in range(r1) for l in range(s0)]
    big = FreeModule(R, hom10 + hom00)
    off = len(hom10)
    gens = []
    for k in range(r0):
        for l in range(s0):
            d = {}
            # (u∘φ)_(m,l) = Σ_k u_(k,l) φ_(k,m)
            for m, col in enumerate(phi):
                f = col.get(k)
                if f:
                    for mono, v in f.items():
                        d[big.enc(m * s0 + l, mono)] = v
            d[big.enc(off + k * s0 + l, 0)] = 1
            gens.append(d)
    for m in range(r1):
        for j, col in enumerate(psi):
            # ψ∘w for w = e_(m,j): entries ψ_(l,j) in position (m,l)
            d = {}
            for l, f in col.items():
                for mono, v in f.items():
                    d[big.enc(m * s0 + l, mono)] = v
            if d:
                gens.append(d)
    G = f4(big, gens)
    ambient = FreeModule(R, hom00)
    maps = []
    for e, L in zip(G.elements, G.leads):
        if big.comp(L) >= off:
            d = {}
            for P, v in e.items():
                ci, mono = big.split(P)
                d[ambient.enc(ci - off, mono)] = v
            maps.append(d)
    rels = []
    for k in range(r0):
        for j, col in enumerate(psi):
            d = {}
            for l, f in col.items():
                for mono, v in f.items():
                    d[ambient.enc(k * s0 + l, mono)] = v
            if d:
                rels.append(d)
    H = ModulePresentation(ambient, rels, maps)
    return minimal_presentation(H)


# ---------------------------------------------------------------------------
# Ext

def _dual_columns(C, i):
    """Columns of d_{i+1}^T: one per basis element j of F_i, listing the
    entries d_{i+1}[j][c] over the basis of F_{i+1}."""
    R = C.ring
    if i >= len(C.maps):
        return None
    cols = C.maps[i]
    nrows = len(C.twists[i])
    out = [[R.zero() for _ in cols] for _ in range(nrows)]
    for cidx, col in enumerate(cols):
        for r, poly in col.items():
            out[r][cidx] = Poly(R, dict(poly))
    return out


def _piece_dim(R, gen_degrees, e):
    return sum(R.monomial_count(_sub(e, g)) for g in gen_degrees)


def _dual_rank(C, i, twist, e):
    """Rank of d_{i+1}^T: Hom(F_i, S(t)) -> Hom(F_{i+1}, S(t)) in degree e."""
    if i < 0 or i >= len(C.maps) or not C.twists[i] or not C.twists[i + 1]:
        return 0
    cache = C.__dict__.setdefault("_dual_ranks", {})
    key = (i, tuple(twist), tuple(e))
    if key not in cache:
        cache[key] = _dual_rank_uncached(C, i, twist, e)
    return cache[key]


def _dual_rank_uncached(C, i, twist, e):
    R = C.ring
    src = [_neg(_add(a, twist)) for a in C.twists[i]]
    dst = [_neg(_add(a, twist)) for a in C.twists[i + 1]]
    if _piece_dim(R, src, e) == 0 or _piece_dim(R, dst, e) == 0:
        return 0
    cols = _dual_columns(C, i)
    A, _, _ = graded_pieces_matrix(cols, dst, src, e)
    return linalg.rank(A, R.p) if A.size else 0


def ext_dim(i, M, twist, e):
    """dim Ext^i(M, S(twist))_e as the homology of the dual of a free
    resolution; M may be a module (its Schreyer resolution is used, no
    minimalization needed) or an explicit resolution."""
    C = resolution(M, minimal=False) if not isinstance(M, GradedFreeComplex) else M
    R = C.ring
    twist = (twist,) if isinstance(twist, int) else tuple(twist)
    e = (e,) if isinstance(e, int) else tuple(e)
    if i < 0 or i >= len(C.twists) or not C.twists[i]:
        return 0
    gens = [_neg(_add(a, twist)) for a in C.twists[i]]
    dim = _piece_dim(R, gens, e)
    if dim == 0:
        return 0
    return dim - _dual_rank(C, i, twist, e) - _dual_rank(C, i - 1, twist, e)


def ext_module(i, M, twist):
    """Ext^i(M, S(twist)) as a module: homology of Hom(F_•, S(twist)) at i."""
    R = M.ring
    nv = R.nvars
    if not 0 <= i <= nv:
        raise ValueError(f"Ext index {i} outside [0, {nv}]")
    twist = (twist,) if isinstance(twist, int) else tuple(twist)
    C = resolution(M)
    if i >= len(C.twists) or not C.twists[i]:
        return ModulePresentation(FreeModule(R, []), [])
    amb = FreeModule(R, [_neg(_add(a, twist)) for a in C.twists[i]])
    # kernel of d_{i+1}^T
    if i < len(C.maps) and C.twists[i + 1]:
        tgt = FreeModule(R, [_neg(_add(a, twist)) for a in C.twists[i + 1]])
        cols = []
        for r in range(amb.rank):
            d = {}
            for cidx, col in enumerate(C.maps[i]):
                f = col.get(r)
                if f:
                    for m, v in f.items():
                        d[tgt.enc(cidx, m)] = v
            cols.append(d)
        _, kernel = syzygy_module_twisted(cols, tgt, list(amb.twists))
        src_gens = kernel
    else:
        src_gens = [amb.basis_vector(r) for r in range(amb.rank)]
    # image of d_i^T
    rels = []
    if i >= 1:
        for r in range(len(C.twists[i - 1])):
            d = {}
            for cidx, col in enumerate(C.maps[i - 1]):
                f = col.get(r)
                if f:
                    for m, v in f.items():
                        d[amb.enc(cidx, m)] = v
            if d:
                rels.append(d)
    H = ModulePresentation(amb, rels, src_gens)
    return minimal_presentation(H)


# ---------------------------------------------------------------------------
# sheaf cohomology

def sheaf_cohomology_dim(M, i, d):
    """h^i of the sheaf of M on P^n, twisted by d, via graded local duality:
    h^i(F(d)) = dim Ext^{n-i}(M, S(-n-1))_{-d} for i >= 1 and
    h^0(F(d)) = dim M_d - dim Ext^{n+1}(M, S(-n-1))_{-d} + dim Ext^n(M, S(-n-1))_{-d}.
    """
    R = M.ring
    if R.grading_rank != 1 or any(x != (1,) for x in R.degrees):
        raise ValueError("sheaf cohomology needs a standard graded ring")
    n = R.nvars - 1
    if not 0 <= i <= n:
        raise ValueError(f"cohomological degree {i} outside [0, {n}]")
    t = (-n - 1,)
    e = (-d,)
    if i >= 1:
        return ext_dim(n - i, M, t, e)
    return M.hilbert_function((d,)) - ext_dim(n + 1, M, t, e) + ext_dim(n, M, t, e)


def canonical_module(I, c=None):
    """Ext^c(S/I, S(-n-1)) for Cohen-Macaulay S/I of codimension c.

    Returns (presentation, sorted generator degrees).  Raises
    NotCohenMacaulay when the minimal resolution is longer than c.
    """
    if not isinstance(I, Ideal):
        I = Ideal(list(I))
    from .idealops import codim
    R = I.ring
    if c is None:
        c = codim(I)
    M = I.quotient_module()
    C = resolution(M)
    if C.length != c:
        raise NotCohenMacaulay(f"projective dimension {C.length} differs from codimension {c}")
    n = R.nvars - 1
    W = ext_module(c, M, (-n - 1,))
    degs = sorted(W.ambient.twists)
    return W, degs
