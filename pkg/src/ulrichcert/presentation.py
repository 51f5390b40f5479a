"""Finitely presented graded modules and Hilbert series of monomial modules."""

from fractions import Fraction
from math import comb

from .gb import FreeModule, F4, GroebnerBasis, _as_dict, ideal_module


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals / modules

def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _nadd(a, b, shift=None, sign=1):
    for k, v in b.items():
        if shift is not None:
            k = tuple(x + y for x, y in zip(k, shift))
        a[k] = a.get(k, 0) + sign * v
        if a[k] == 0:
            del a[k]
    return a


def _nmul(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def monomial_numerator(gens, var_degrees):
    """Numerator N of HS(S/I) = N / prod_v (1 - t^deg(v)) for a monomial ideal I.

    gens: exponent tuples; var_degrees: degree vector per variable.
    Returns {multidegree: coefficient}.
    """
    r = len(var_degrees[0]) if var_degrees else 1
    zero = (0,) * r
    memo = {}

    def deg(e):
        out = [0] * r
        for x, d in zip(e, var_degrees):
            if x:
                for k in range(r):
                    out[k] += x * d[k]
        return tuple(out)

    def rec(gs):
        key = tuple(sorted(gs))
        if key in memo:
            return memo[key]
        if not gs:
            res = {zero: 1}
        elif any(sum(g) == 0 for g in gs):
            res = {}
        else:
            n = len(gs[0])
            counts = [sum(1 for g in gs if g[v]) for v in range(n)]
            if max(counts) <= 1:
                res = {zero: 1}
                for g in gs:
                    res = _nmul(res, {zero: 1, deg(g): -1})
            else:
                v = max(range(n), key=lambda i: counts[i])
                # pivot x_v^e taken from a mixed generator, so it is not in I
                exps = sorted(g[v] for g in gs if g[v] and sum(1 for x in g if x) > 1)
                e = exps[len(exps) // 2]
                pe = tuple(e if i == v else 0 for i in range(n))
                plus = _minimalize([g for g in gs if g[v] < e] + [pe])
                colon = _minimalize([tuple(max(0, x - y) for x, y in zip(g, pe)) for g in gs])
                res = dict(rec(plus))
                _nadd(res, rec(colon), shift=deg(pe))
        memo[key] = res
        return res

    return rec(_minimalize([tuple(g) for g in gens]))


def series_coefficient(num, var_degrees, a):
    """Coefficient of t^a in num / prod_v (1 - t^deg(v)).

    Requires every variable degree to be a unit vector (standard grading or
    products of projective spaces); otherwise raises ValueError.
    """
    r = len(a)
    counts = [0] * r
    for d in var_degrees:
        nz = [k for k in range(r) if d[k]]
        if len(nz) != 1 or d[nz[0]] != 1:
            raise ValueError("series expansion needs unit-vector variable degrees")
        counts[nz[0]] += 1
    total = 0
    for k, c in num.items():
        term = c
        for j in range(r):
            x = a[j] - k[j]
            if x < 0:
                term = 0
                break
            term *= comb(x + counts[j] - 1, counts[j] - 1) if counts[j] else (1 if x == 0 else 0)
        total += term
    return total


# -- univariate helpers for Hilbert polynomials (standard grading) ----------

def _poly_div_one_minus_t(c):
    """Divide sum c[k] t^k by (1 - t); returns quotient or None if not divisible."""
    if sum(c) != 0:
        return None
    q = []
    acc = 0
    for k in range(len(c) - 1):
        acc += c[k]
        q.append(acc)
    return q


def reduce_numerator(num):
    """(coefficient list of N'(t), number of (1-t) factors cancelled) for a
    single-graded numerator dict."""
    if not num:
        return [], None
    top = max(k[0] for k in num)
    low = min(k[0] for k in num)
    if low < 0:
        raise ValueError("negative degrees: shift the numerator first")
    c = [0] * (top + 1)
    for k, v in num.items():
        c[k[0]] += v
    cancelled = 0
    while True:
        q = _poly_div_one_minus_t(c)
        if q is None:
            break
        c = q
        cancelled += 1
    return c, cancelled


def hilbert_polynomial(num, nvars, shift=0):
    """Hilbert polynomial (list of Fraction coefficients, constant first) and
    Krull dimension, from a single-graded numerator over (1-t)^nvars.

    `shift` moves all degrees up by that amount before the computation and
    is undone in the result (to allow negative twists).
    """
    if not num:
        return [], 0
    sh = {(k[0] + shift,): v for k, v in num.items()}
    c, cancelled = reduce_numerator(sh)
    D = nvars - cancelled
    if D <= 0:
        return [], 0
    # P(d) = sum_k c_k binom(d - k + D - 1, D - 1)
    P = [Fraction(0)] * D
    fact = 1
    for j in range(1, D):
        fact *= j
    for k, ck in enumerate(c):
        if not ck:
            continue
        poly = [Fraction(1)]
        for j in range(1, D):
            # multiply by (d - k + j)
            a0 = Fraction(j - k)
            new = [Fraction(0)] * (len(poly) + 1)
            for i, x in enumerate(poly):
                new[i] += x * a0
                new[i + 1] += x
            poly = new
        for i, x in enumerate(poly):
            P[i] += ck * x / fact
    # undo shift: P_true(d) = P(d + shift)
    if shift:
        P = _poly_shift(P, shift)
    return P, D


def _poly_shift(P, s):
    """Coefficients of P(d + s)."""
    out = [Fraction(0)] * len(P)
    for i, x in enumerate(P):
        for j in range(i + 1):
            out[j] += x * comb(i, j) * Fraction(s) ** (i - j)
    return out


def poly_eval(P, d):
    return sum(x * Fraction(d) ** i for i, x in enumerate(P))


# ---------------------------------------------------------------------------

class ModulePresentation:
    """Graded module M = (im generators + im relations) / im relations inside
    a free module F.  With `generators=None`, M = F / im(relations)."""

    def __init__(self, ambient, relations, generators=None):
        self.ambient = ambient
        self.ring = ambient.ring
        self.relations = [_as_dict(r, ambient) for r in relations]
        self.relations = [r for r in self.relations if r]
        self.generators = None if generators is None else [_as_dict(g, ambient) for g in generators]
        self._gb = None

    def __repr__(self):
        kind = "cokernel" if self.generators is None else "subquotient"
        return f"ModulePresentation({kind}, rank {self.ambient.rank}, {len(self.relations)} relations)"

    @classmethod
    def quotient_ring(cls, ideal_gens, ring=None):
        """S/I for a list of polynomials."""
        ideal_gens = list(ideal_gens)
        if ring is None:
            ring = ideal_gens[0].ring
        return cls(ideal_module(ring), [g.d for g in ideal_gens if g])

    @classmethod
    def free(cls, ring, twists):
        return cls(FreeModule(ring, twists), [])

    @classmethod
    def ideal(cls, ideal_gens, ring=None):
        """The ideal I as a module (subquotient of S)."""
        ideal_gens = [g for g in ideal_gens if g]
        if ring is None:
            ring = ideal_gens[0].ring
        return cls(ideal_module(ring), [], [g.d for g in ideal_gens])

    def is_cokernel(self):
        return self.generators is None

    def gb(self):
        if self._gb is None:
            eng = F4(self.ambient)
            eng.add(self.relations)
            eng.run()
            self._gb = eng.result()
        return self._gb

    def to_cokernel(self):
        """Equivalent cokernel presentation (source = one basis vector per generator)."""
        if self.generators is None:
            return self
        F = self.ambient
        gens = [g for g in self.generators if g]
        tw = [F.degree_of(g) for g in gens]
        G = FreeModule(self.ring, tw)
        if all(len(g) == 1 and g.get(F.enc(i, 0)) == 1 for i, g in enumerate(gens)) \
                and len(gens) == F.rank:
            return ModulePresentation(G, self.relations)
        # graph module F ⊕ G: (g_i, e_i) and (r_j, 0); the part with zero
        # F-block is the module of relations among the generators
        r = F.rank
        big = FreeModule(self.ring, list(F.twists) + tw)
        rows = []
        for i, g in enumerate(gens):
            d = {big.enc(c, m): v for c, m, v in ((*F.split(P), v) for P, v in g.items())}
            d[big.enc(r + i, 0)] = 1
            rows.append(d)
        for rel in self.relations:
            rows.append({big.enc(c, m): v for c, m, v in ((*F.split(P), v) for P, v in rel.items())})
        eng = F4(big)
        eng.add(rows)
        eng.run()
        H = eng.result()
        rels = []
        for e, L in zip(H.elements, H.leads):
            if big.comp(L) >= r:
                d = {}
                for P, v in e.items():
                    c, m = big.split(P)
                    d[G.enc(c - r, m)] = v
                rels.append(d)
        return ModulePresentation(G, rels)

    def twist(self, a):
        """M(a): generators move to degree twist - a."""
        a = (a,) if isinstance(a, int) else tuple(a)
        F = self.ambient
        G = FreeModule(self.ring, [tuple(x - y for x, y in zip(t, a)) for t in F.twists])
        conv = lambda d: {G.enc(*F.split(P)): v for P, v in d.items()}
        gens = None if self.generators is None else [conv(g) for g in self.generators]
        return ModulePresentation(G, [conv(r) for r in self.relations], gens)

    def hilbert_function(self, deg):
        """dim_F_p M_deg by counting standard monomials."""
        M = self.to_cokernel()
        deg = (deg,) if isinstance(deg, int) else tuple(deg)
        G = M.gb()
        F = M.ambient
        R = self.ring
        by_comp = {}
        for c, e in G.lead_exponents():
            by_comp.setdefault(c, []).append(e)
        total = 0
        for c, t in enumerate(F.twists):
            need = tuple(x - y for x, y in zip(deg, t))
            if min(need) < 0:
                continue
            leads = by_comp.get(c, [])
            for e in R.monomials(need):
                if not any(all(a <= b for a, b in zip(L, e)) for L in leads):
                    total += 1
        return total

    def hilbert_numerator(self):
        """Numerator over prod_v (1 - t^deg v) of the Hilbert series of M."""
        M = self.to_cokernel()
        G = M.gb()
        R = self.ring
        by_comp = {}
        for c, e in G.lead_exponents():
            by_comp.setdefault(c, []).append(e)
        num = {}
        for c, t in enumerate(M.ambient.twists):
            _nadd(num, monomial_numerator(by_comp.get(c, []), R.degrees), shift=t)
        return num

    def hilbert_polynomial(self):
        """(coefficients of P_M, Krull dimension) for a standard-graded ring."""
        num = self.hilbert_numerator()
        if not num:
            return [], 0
        low = min(k[0] for k in num)
        sh = -low if low < 0 else 0
        return hilbert_polynomial(num, self.ring.nvars, shift=sh)


class Ideal:
    """A homogeneous ideal given by generators, with Groebner bases cached per order."""

    def __init__(self, gens, ring=None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise ValueError("ring required for an empty generator list")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring
        self.gens = [g for g in gens if g]
        self._gbs = {}

    def __repr__(self):
        return f"Ideal({len(self.gens)} generators in {self.ring!r})"

    def gb(self, order=None):
        """Reduced GB (GroebnerBasis) in `order` (default: the ring's order)."""
        from .gb import change_order, groebner_basis
        key = self.ring.order if order is None else order
        if key not in self._gbs:
            if not self.gens:
                self._gbs[key] = GroebnerBasis(ideal_module(self.ring.with_order(key)), [])
            elif key == self.ring.order:
                self._gbs[key] = groebner_basis(self.gens)
            else:
                R2 = self.ring.with_order(key)
                self._gbs[key] = groebner_basis(change_order(self.gens, R2))
        return self._gbs[key]

    def gb_polys(self):
        return self.gb().polys()

    def contains(self, f):
        if not f:
            return True
        return self.gb().contains(f)

    def is_subset(self, other):
        return other.gb().contains_all(self.gens) if self.gens else True

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb() == other.gb()

    def __add__(self, other):
        return Ideal(self.gens + other.gens, self.ring)

    def __mul__(self, other):
        return Ideal([f * g for f in self.gens for g in other.gens], self.ring)

    def power(self, k):
        out = Ideal([self.ring.one()], self.ring)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self):
        return not self.gens

    def quotient_module(self):
        M = ModulePresentation(ideal_module(self.ring), [g.d for g in self.gens])
        if self.gens:
            M._gb = self.gb()
        return M

    def hilbert_function(self, d):
        """dim (S/I)_d."""
        return self.quotient_module().hilbert_function(d) if self.gens else \
            len(self.ring.monomials(d))

    def hilbert_numerator(self):
        lead = [self.ring.unpack(L) for L in self.gb().leads]
        return monomial_numerator(lead, self.ring.degrees)


def minimal_presentation(M):
    """Cokernel presentation of M with minimal generators and relations.

    Generators are reordered by descending degree so that, in the
    position-over-term order, a homogeneous relation with a unit entry has
    a unit lead term.  In the reduced GB of the relations the unit leads
    mark exactly the redundant generators (their count in degree j is the
    rank of the constant part of the degree-j relations); the remaining GB
    elements avoid those generators altogether and present M on the
    surviving ones.  A minimal subset of them is then selected.
    """
    from .resolve import minimal_generators
    C = M.to_cokernel()
    F = C.ambient
    R = C.ring
    if F.rank == 0:
        return C
    order = sorted(range(F.rank), key=lambda k: (-F.hefts[k], k))
    Fs = FreeModule(R, [F.twists[k] for k in order])
    pos = {k: i for i, k in enumerate(order)}

    def move(d, src, dst, where):
        out = {}
        for P, v in d.items():
            c, m = src.split(P)
            out[dst.enc(where[c], m)] = v
        return out

    rels = [move(r, F, Fs, pos) for r in C.relations]
    if not rels:
        return ModulePresentation(Fs, [])
    eng = F4(Fs)
    eng.add(rels)
    eng.run()
    G = eng.result()
    dead = set()
    kept = []
    for e, L in zip(G.elements, G.leads):
        c, m = Fs.split(L)
        if m == 0:
            dead.add(c)
        else:
            kept.append(e)
    alive = [c for c in range(Fs.rank) if c not in dead]
    F2 = FreeModule(R, [Fs.twists[c] for c in alive])
    where = {c: i for i, c in enumerate(alive)}
    kept = [move(e, Fs, F2, where) for e in kept]
    mins = [g for g, _ in minimal_generators(kept, F2)] if kept else []
    return ModulePresentation(F2, mins)
