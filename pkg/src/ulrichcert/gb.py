"""Groebner bases of homogeneous ideals and graded submodules.

The default engine is F4-style: S-pairs are processed one heft degree at a
time, every monomial multiple needed to reduce them is collected
("symbolic preprocessing") and the whole batch is row reduced by the
compiled kernels in `linalg`.  Processing degree by degree with full
reduction of each batch yields the reduced basis directly.

A classic one-pair-at-a-time Buchberger algorithm (sugar or
degree-then-FIFO pair selection) is kept as an independent second route.

Module elements are dicts {packed module monomial: coefficient}.  A free
module either uses position-over-term order (smaller basis index wins) or
a Schreyer order induced by the lead terms of a list of elements of
another free module; in both cases multiplying by a ring monomial is an
integer addition on the packed keys.
"""

import numpy as np

from .mpoly import Poly
from . import linalg

TB = 20  # bits of the basis-index field in Schreyer-ordered modules
TBMASK = (1 << TB) - 1


class FreeModule:
    """Graded free module ⊕ S(-twist_i) with a module monomial order."""

    def __init__(self, ring, twists, schreyer=None):
        self.ring = ring
        tw = []
        for t in twists:
            t = (t,) if isinstance(t, int) else tuple(t)
            if len(t) != ring.grading_rank:
                raise ValueError("twist of wrong grading rank")
            tw.append(t)
        self.twists = tuple(tw)
        self.rank = len(tw)
        self.hefts = tuple(sum(t) for t in tw)
        self.ringmask = (1 << ring.total_bits) - 1
        if schreyer is None:
            self.prev = None
            self.leads = None
            self.shift = 0
            self.cshift = ring.total_bits
        else:
            prev, leads = schreyer
            if len(leads) != self.rank:
                raise ValueError("one lead monomial per basis element required")
            self.prev = prev
            self.leads = tuple(leads)
            self.shift = prev.shift + TB
        self.emask = ring.emask << self.shift
        self.guard = ring.guard

    @classmethod
    def schreyer(cls, prev, elements):
        """Free module with basis = `elements` (dicts in `prev`), Schreyer order."""
        leads = [max(e) for e in elements]
        twists = [prev.multidegree(L) for L in leads]
        return cls(prev.ring, twists, (prev, leads))

    def __repr__(self):
        kind = "pot" if self.prev is None else "schreyer"
        return f"FreeModule(rank={self.rank}, {kind})"

    def enc(self, comp, m):
        if self.prev is None:
            return ((self.rank - 1 - comp) << self.cshift) | m
        return ((self.leads[comp] + (m << self.prev.shift)) << TB) | (self.rank - 1 - comp)

    def comp(self, P):
        if self.prev is None:
            return self.rank - 1 - (P >> self.cshift)
        return self.rank - 1 - (P & TBMASK)

    def mono(self, P):
        if self.prev is None:
            return P & self.ringmask
        c = self.rank - 1 - (P & TBMASK)
        return ((P >> TB) - self.leads[c]) >> self.prev.shift

    def split(self, P):
        if self.prev is None:
            return self.rank - 1 - (P >> self.cshift), P & self.ringmask
        c = self.rank - 1 - (P & TBMASK)
        return c, ((P >> TB) - self.leads[c]) >> self.prev.shift

    def heft(self, P):
        c, m = self.split(P)
        return (m >> self.ring.heft_shift) + self.hefts[c]

    def multidegree(self, P):
        c, m = self.split(P)
        md = self.ring.pmultidegree(m)
        return tuple(a + b for a, b in zip(md, self.twists[c]))

    def divides(self, a, b):
        if self.comp(a) != self.comp(b):
            return False
        s = self.shift
        g = self.guard
        em = self.ring.emask
        return ((((b >> s) & em) | g) - ((a >> s) & em)) & g == g

    def quotient(self, a, b):
        """Ring monomial m with m * a = b (assumes a divides b)."""
        return (b - a) >> self.shift

    def lcm(self, a, b):
        c, ma = self.split(a)
        _, mb = self.split(b)
        return self.enc(c, self.ring.lcm(ma, mb))

    def basis_vector(self, i):
        return {self.enc(i, 0): 1}

    def element(self, comps):
        """Dict from a list of Polys, one per basis element."""
        d = {}
        for i, f in enumerate(comps):
            if isinstance(f, int):
                f = self.ring.const(f)
            for m, c in f.d.items():
                d[self.enc(i, m)] = c
        return d

    def components(self, d):
        out = [dict() for _ in range(self.rank)]
        for P, c in d.items():
            i, m = self.split(P)
            out[i][m] = c
        return [Poly(self.ring, x) for x in out]

    def is_homogeneous(self, d):
        return len({self.multidegree(P) for P in d}) <= 1

    def degree_of(self, d):
        """Multidegree of a nonzero homogeneous element."""
        return self.multidegree(max(d))

    def pot(self):
        """Same twists, plain position-over-term order."""
        return FreeModule(self.ring, self.twists)


def ideal_module(ring):
    return FreeModule(ring, [(0,) * ring.grading_rank])


class Vector:
    """A module element: `module` plus dict `d` {packed module monomial: coeff}."""

    __slots__ = ("module", "d")

    def __init__(self, module, d):
        self.module = module
        self.d = d

    @classmethod
    def from_components(cls, module, comps):
        return cls(module, module.element(comps))

    def components(self):
        return self.module.components(self.d)

    def __bool__(self):
        return bool(self.d)

    def is_homogeneous(self):
        return self.module.is_homogeneous(self.d)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.d == other.d

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    def __repr__(self):
        return "Vector(" + ", ".join(str(f) for f in self.components()) + ")"


# ---------------------------------------------------------------------------
# dict helpers

def d_mul(d, m, c, p):
    """c * m * d for a packed (already shifted) monomial m."""
    if c == 1:
        return {k + m: v for k, v in d.items()}
    return {k + m: v * c % p for k, v in d.items()}


def d_axpy(acc, d, c, p):
    """acc += c * d in place."""
    get = acc.get
    for k, v in d.items():
        x = (get(k, 0) + c * v) % p
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def d_monic(d, p):
    if not d:
        return d
    c = d[max(d)]
    if c == 1:
        return d
    inv = pow(c, p - 2, p)
    return {k: v * inv % p for k, v in d.items()}


# ---------------------------------------------------------------------------
# batched reduction

class LeadIndex:
    """Lookup of a basis element whose lead monomial divides a given monomial."""

    def __init__(self, module):
        self.module = module
        self.by_comp = {}
        self.entries = []

    def add(self, k, lead):
        M = self.module
        c, m = M.split(lead)
        E = m & M.ring.emask
        self.by_comp.setdefault(c, []).append((E, k))

    def find(self, P):
        M = self.module
        c, m = M.split(P)
        lst = self.by_comp.get(c)
        if not lst:
            return -1
        g = M.guard
        E = (m & M.ring.emask) | g
        for Ek, k in lst:
            if (E - Ek) & g == g:
                return k
        return -1


def reduce_batch(module, basis, leads, index, rows, want_quot=False):
    """Fully reduce every dict in `rows` modulo the monic elements `basis`.

    Returns (remainders, quotients, colinfo) where quotients[r] is a list of
    (basis index, shifted multiplier monomial, coefficient) when requested.
    """
    p = module.ring.p
    seen = set()
    for r in rows:
        seen.update(r)
    todo = list(seen)
    red_rows = {}
    red_src = {}
    while todo:
        P = todo.pop()
        k = index.find(P)
        if k < 0:
            continue
        m = P - leads[k]
        row = {key + m: v for key, v in basis[k].items()}
        red_rows[P] = row
        red_src[P] = (k, m)
        for key in row:
            if key not in seen:
                seen.add(key)
                todo.append(key)
    cols = sorted(seen, reverse=True)
    colidx = {P: i for i, P in enumerate(cols)}
    ncols = len(cols)
    piv = np.full(ncols, -1, dtype=np.int64)
    red_keys = list(red_rows)
    rptr = [0]
    rcol = []
    rval = []
    for t, P in enumerate(red_keys):
        row = red_rows[P]
        items = sorted((colidx[k], v) for k, v in row.items())
        piv[items[0][0]] = t
        for c, v in items:
            rcol.append(c)
            rval.append(v)
        rptr.append(len(rcol))
    tptr = [0]
    tcol = []
    tval = []
    for r in rows:
        for k, v in r.items():
            tcol.append(colidx[k])
            tval.append(v)
        tptr.append(len(tcol))
    res = linalg.sparse_reduce(
        ncols,
        np.array(rptr, dtype=np.int64), np.array(rcol, dtype=np.int64), np.array(rval, dtype=np.int64),
        piv,
        np.array(tptr, dtype=np.int64), np.array(tcol, dtype=np.int64), np.array(tval, dtype=np.int64),
        p, want_quot,
    )
    optr, ocol, oval, qrow, qred, qval = res
    optr = optr.tolist()
    ocol = ocol.tolist()
    oval = oval.tolist()
    rems = []
    for r in range(len(rows)):
        a, b = optr[r], optr[r + 1]
        rems.append({cols[ocol[t]]: oval[t] for t in range(a, b)})
    quots = None
    if want_quot:
        quots = [[] for _ in rows]
        for r, t, c in zip(qrow.tolist(), qred.tolist(), qval.tolist()):
            k, m = red_src[red_keys[t]]
            quots[r].append((k, m, c))
    return rems, quots


def echelonize(module, rows):
    """Reduced row echelon form of a list of dicts (monic rows, distinct leads)."""
    p = module.ring.p
    rows = [r for r in rows if r]
    if not rows:
        return []
    keys = set()
    for r in rows:
        keys.update(r)
    cols = sorted(keys, reverse=True)
    colidx = {P: i for i, P in enumerate(cols)}
    A = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, r in enumerate(rows):
        for k, v in r.items():
            A[i, colidx[k]] = v
    rk, pivs = linalg.dense_rref(A, p)
    out = []
    for i in range(rk):
        nz = np.nonzero(A[i])[0].tolist()
        vals = A[i, nz].tolist()
        out.append({cols[c]: v for c, v in zip(nz, vals)})
    return out


# ---------------------------------------------------------------------------
# the GB object

class GroebnerBasis:
    """Reduced Groebner basis of a submodule (ideals: rank-1 modules).

    `elements` are monic dicts sorted by descending lead monomial.
    `complete` is False for degree-truncated computations.
    """

    def __init__(self, module, elements, complete=True, max_degree=None):
        self.module = module
        self.ring = module.ring
        elements = sorted(elements, key=max, reverse=True)
        self.elements = elements
        self.leads = [max(e) for e in elements]
        self.complete = complete
        self.max_degree = max_degree
        self.certified = None
        self._index = None

    def __len__(self):
        return len(self.elements)

    @property
    def index(self):
        if self._index is None:
            idx = LeadIndex(self.module)
            for k, L in enumerate(self.leads):
                idx.add(k, L)
            self._index = idx
        return self._index

    def polys(self):
        if self.module.rank != 1:
            raise ValueError("not an ideal")
        return [Poly(self.ring, dict(e)) for e in self.elements]

    def vectors(self):
        return [Vector(self.module, dict(e)) for e in self.elements]

    def lead_exponents(self):
        M = self.module
        return [(M.comp(L), self.ring.unpack(M.mono(L))) for L in self.leads]

    def reduce(self, rows, want_quot=False):
        if not self.elements:
            return [dict(r) for r in rows], [[] for _ in rows] if want_quot else None
        return reduce_batch(self.module, self.elements, self.leads, self.index, rows, want_quot)

    def normal_form(self, f):
        d = _as_dict(f, self.module)
        r = self.reduce([d])[0][0]
        if isinstance(f, Poly):
            return Poly(self.ring, r)
        if isinstance(f, Vector):
            return Vector(self.module, r)
        return r

    def contains(self, f):
        return not self.reduce([_as_dict(f, self.module)])[0][0]

    def contains_all(self, fs):
        rows = [_as_dict(f, self.module) for f in fs]
        if not rows:
            return True
        return not any(self.reduce(rows)[0])

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.module.rank == other.module.rank
                and self.elements == other.elements)

    def s_pairs(self):
        """All S-pairs (same lead component), as dicts."""
        M = self.module
        p = self.ring.p
        out = []
        n = len(self.elements)
        for i in range(n):
            for j in range(i + 1, n):
                Li, Lj = self.leads[i], self.leads[j]
                if M.comp(Li) != M.comp(Lj):
                    continue
                L = M.lcm(Li, Lj)
                s = d_mul(self.elements[i], (L - Li), 1, p)
                d_axpy(s, d_mul(self.elements[j], (L - Lj), 1, p), p - 1, p)
                if s:
                    out.append(s)
        return out

    def certify(self):
        """Check the Buchberger criterion (all S-pair normal forms vanish) and
        reducedness; stores and returns the flag."""
        ok = True
        for k, e in enumerate(self.elements):
            if e[self.leads[k]] != 1:
                ok = False
            for P in e:
                j = self.index.find(P)
                if j >= 0 and (j != k or P != self.leads[k]):
                    # a term divisible by some lead other than its own lead
                    if not (P == self.leads[k] and j == k):
                        ok = False
        sp = self.s_pairs()
        for start in range(0, len(sp), 2000):
            rems = self.reduce(sp[start:start + 2000])[0]
            if any(rems):
                ok = False
                break
        self.certified = ok and self.complete
        return self.certified


def _as_dict(f, module):
    if isinstance(f, Poly):
        if module.rank != 1:
            raise ValueError("polynomial given for a module of rank > 1")
        if module.prev is None:
            return dict(f.d)
        return {module.enc(0, m): c for m, c in f.d.items()}
    if isinstance(f, Vector):
        return dict(f.d)
    if isinstance(f, dict):
        return dict(f)
    if isinstance(f, (list, tuple)):
        return module.element(f)
    raise TypeError(f"cannot interpret {type(f)} as a module element")


# ---------------------------------------------------------------------------
# F4

class _PairSet:
    """Pairs keyed by heft degree with Gebauer-Moeller updates."""

    def __init__(self, module, product_criterion):
        self.module = module
        self.product = product_criterion
        self.pairs = {}  # heft -> list of (i, j, lcm)

    def _coprime(self, a, b):
        M = self.module
        ma, mb = M.mono(a), M.mono(b)
        return M.ring.lcm(ma, mb) == ma + mb

    def update(self, leads, h):
        """Gebauer-Moeller update after adding basis element h."""
        M = self.module
        Lh = leads[h]
        ch = M.comp(Lh)
        C = []
        for i in range(h):
            if M.comp(leads[i]) != ch:
                continue
            C.append((i, M.lcm(leads[i], Lh), self.product and self._coprime(leads[i], Lh)))
        D = []
        while C:
            i, L, cop = C.pop(0)
            if cop or not any(M.divides(L2, L) for _, L2, _ in C) and not any(M.divides(L2, L) for _, L2, _ in D):
                D.append((i, L, cop))
        for deg, lst in list(self.pairs.items()):
            keep = [(i, j, L) for (i, j, L) in lst
                    if not M.divides(Lh, L) or M.lcm(leads[i], Lh) == L or M.lcm(leads[j], Lh) == L]
            if keep:
                self.pairs[deg] = keep
            else:
                del self.pairs[deg]
        for i, L, cop in D:
            if not cop:
                self.pairs.setdefault(M.heft(L), []).append((i, h, L))

    def pop_degree(self, d):
        return self.pairs.pop(d, [])

    def min_degree(self):
        return min(self.pairs) if self.pairs else None


class F4:
    """Resumable degree-by-degree engine.

    `add` queues generators, `run(max_degree)` processes every pair and
    generator up to that heft degree, `result()` returns the reduced basis
    (complete only if nothing is left in the queues).
    """

    def __init__(self, module):
        self.module = module
        self.p = module.ring.p
        self.pending = {}
        self.basis = []
        self.leads = []
        self.index = LeadIndex(module)
        self.pairs = _PairSet(module, module.rank == 1)
        self.done = None  # highest degree fully processed
        self.late = False

    def add(self, gens):
        M, p = self.module, self.p
        for g in gens:
            g = {k: v % p for k, v in g.items() if v % p}
            if not g:
                continue
            if not M.is_homogeneous(g):
                raise ValueError("inhomogeneous generator: the engine works degree by degree")
            d = M.heft(max(g))
            if self.done is not None and d <= self.done:
                self.late = True
            self.pending.setdefault(d, []).append(g)

    def next_degree(self):
        cands = list(self.pending)
        md = self.pairs.min_degree()
        if md is not None:
            cands.append(md)
        return min(cands) if cands else None

    def run(self, max_degree=None):
        p = self.p
        basis, leads = self.basis, self.leads
        while True:
            d = self.next_degree()
            if d is None or (max_degree is not None and d > max_degree):
                break
            rows = []
            for (i, j, L) in self.pairs.pop_degree(d):
                s = d_mul(basis[i], L - leads[i], 1, p)
                d_axpy(s, d_mul(basis[j], L - leads[j], 1, p), p - 1, p)
                if s:
                    rows.append(s)
            rows.extend(self.pending.pop(d, []))
            if rows:
                if basis:
                    rems, _ = reduce_batch(self.module, basis, leads, self.index, rows)
                else:
                    rems = rows
                for e in echelonize(self.module, rems):
                    k = len(basis)
                    basis.append(e)
                    leads.append(max(e))
                    self.index.add(k, leads[k])
                    self.pairs.update(leads, k)
            self.done = d if self.done is None else max(self.done, d)
        if max_degree is not None:
            self.done = max_degree if self.done is None else max(self.done, max_degree)
        return self

    def complete(self):
        return not self.pending and not self.pairs.pairs

    def result(self, max_degree=None):
        els = self.basis
        if self.late:
            els = interreduce(self.module, els)
        return GroebnerBasis(self.module, list(els), complete=self.complete(), max_degree=max_degree)


def interreduce(module, elements):
    """Minimal, fully reduced version of a Groebner basis (homogeneous elements)."""
    p = module.ring.p
    els = [d_monic(e, p) for e in elements if e]
    leads = [max(e) for e in els]
    keep = []
    for k in range(len(els)):
        if any(j != k and module.divides(leads[j], leads[k]) and (leads[j] != leads[k] or j < k)
               for j in range(len(els))):
            continue
        keep.append(k)
    els = [els[k] for k in keep]
    leads = [leads[k] for k in keep]
    idx = LeadIndex(module)
    for k, L in enumerate(leads):
        idx.add(k, L)
    tails = []
    for e, L in zip(els, leads):
        t = dict(e)
        del t[L]
        tails.append(t)
    rems, _ = reduce_batch(module, els, leads, idx, tails)
    out = []
    for r, L in zip(rems, leads):
        r[L] = 1
        out.append(r)
    return out


def f4(module, gens, max_degree=None):
    """Reduced GB of the submodule generated by the dicts `gens` (homogeneous).

    With `max_degree`, stops after heft degree max_degree (truncated basis).
    """
    eng = F4(module)
    eng.add(gens)
    eng.run(max_degree)
    return eng.result(max_degree)


# ---------------------------------------------------------------------------
# classic Buchberger (independent second route)

def _divide_classic(module, f, basis, leads, p):
    """Full reduction of dict f by monic dicts, plain division algorithm."""
    f = dict(f)
    rem = {}
    while f:
        P = max(f)
        c = f[P]
        for k, L in enumerate(leads):
            if module.divides(L, P):
                m = P - L
                for key, v in basis[k].items():
                    key += m
                    x = (f.get(key, 0) - c * v) % p
                    if x:
                        f[key] = x
                    else:
                        f.pop(key, None)
                break
        else:
            rem[P] = c
            del f[P]
    return rem


def buchberger(module, gens, strategy="sugar"):
    """Reduced GB by Buchberger's algorithm, one S-pair at a time.

    strategy "sugar": pick the pair of smallest sugar degree (ties: oldest);
    strategy "fifo": smallest degree, then first-in-first-out.
    Both criteria are applied (product criterion for ideals only).
    """
    p = module.ring.p
    basis = []
    leads = []
    sugar = []
    queue = []  # (key, counter, i, j)
    counter = 0

    def add(e, s):
        nonlocal counter
        e = d_monic(e, p)
        L = max(e)
        k = len(basis)
        basis.append(e)
        leads.append(L)
        sugar.append(s)
        for i in range(k):
            if leads[i] is None or module.comp(leads[i]) != module.comp(L):
                continue
            Lij = module.lcm(leads[i], L)
            if module.rank == 1 and module.ring.lcm(module.mono(leads[i]), module.mono(L)) == module.mono(leads[i]) + module.mono(L):
                continue
            deg = module.heft(Lij)
            s_ij = max(sugar[i] + module.heft(Lij) - module.heft(leads[i]), s + deg - module.heft(L))
            key = s_ij if strategy == "sugar" else deg
            queue.append((key, counter, i, k, Lij))
            counter += 1

    gens = [{k: v % p for k, v in g.items() if v % p} for g in gens]
    gens = [g for g in gens if g]
    for g in gens:
        if not module.is_homogeneous(g):
            raise ValueError("inhomogeneous generator")
    gens.sort(key=lambda g: module.heft(max(g)))
    for g in gens:
        live = [k for k in range(len(basis)) if leads[k] is not None]
        r = _divide_classic(module, g, [basis[k] for k in live], [leads[k] for k in live], p)
        if r:
            add(r, module.heft(max(r)))
    while queue:
        queue.sort(key=lambda t: (t[0], t[1]))
        key, _, i, j, Lij = queue.pop(0)
        if leads[i] is None or leads[j] is None:
            continue
        # chain criterion: skip if some k has lead dividing lcm with both sub-pairs already treated
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or leads[k] is None:
                continue
            if module.divides(leads[k], Lij):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                pending = {(min(t[2], t[3]), max(t[2], t[3])) for t in queue}
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = d_mul(basis[i], Lij - leads[i], 1, p)
        d_axpy(s, d_mul(basis[j], Lij - leads[j], 1, p), p - 1, p)
        live = [k for k in range(len(basis)) if leads[k] is not None]
        r = _divide_classic(module, s, [basis[k] for k in live], [leads[k] for k in live], p)
        if r:
            add(r, key if strategy == "sugar" else module.heft(max(r)))
    # minimalize and interreduce
    live = [k for k in range(len(basis)) if leads[k] is not None]
    minimal = []
    for k in live:
        if any(k2 != k and module.divides(leads[k2], leads[k]) and (leads[k2] != leads[k] or k2 < k) for k2 in live):
            continue
        minimal.append(k)
    els = [basis[k] for k in minimal]
    lds = [leads[k] for k in minimal]
    out = []
    for t in range(len(els)):
        others = [els[u] for u in range(len(els)) if u != t]
        olds = [lds[u] for u in range(len(els)) if u != t]
        tail = dict(els[t])
        lc = tail.pop(lds[t])
        r = _divide_classic(module, tail, others, olds, p)
        r[lds[t]] = lc
        out.append(d_monic(r, p))
    return GroebnerBasis(module, out)


# ---------------------------------------------------------------------------
# public entry points

def _prepare(gens, module=None):
    gens = list(gens)
    if module is None:
        if not gens:
            raise ValueError("need a module or at least one generator")
        g0 = gens[0]
        if isinstance(g0, Poly):
            module = ideal_module(g0.ring)
        elif isinstance(g0, Vector):
            module = g0.module
        else:
            raise TypeError("cannot infer the module")
    return module, [_as_dict(g, module) for g in gens]


def groebner_basis(gens, module=None, strategy="f4", max_degree=None, certify=False):
    """Reduced Groebner basis of homogeneous polynomials or module elements.

    strategy: "f4" (default, degree-batched linear algebra), "sugar" or
    "fifo" (classic Buchberger with that pair selection).
    """
    module, dicts = _prepare(gens, module)
    if strategy == "f4":
        G = f4(module, dicts, max_degree=max_degree)
    elif strategy in ("sugar", "fifo"):
        if max_degree is not None:
            raise ValueError("degree truncation is only available for the f4 strategy")
        G = buchberger(module, dicts, strategy)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if certify:
        G.certify()
    return G


def normal_form(f, G):
    return G.normal_form(f)


def change_order(polys, ring):
    """Re-express polynomials in a ring with the same variables but another order."""
    out = []
    for f in polys:
        src = f.ring
        out.append(Poly(ring, {ring.pack(src.unpack(P)): c for P, c in f.d.items()}))
    return out


def syzygy_module(columns, module=None, max_degree=None):
    """Generators of the kernel of the map S^k -> F sending e_i to columns[i].

    Computed from a Groebner basis of the graph module {(M v, v)} in F ⊕ S^k
    with position-over-term order (F first): the basis elements with zero
    F-part form a Groebner basis of the syzygy module.  Returns
    (source module, list of dicts in the source module).
    """
    if module is None:
        module, _ = _prepare(columns[:1])
    cols = [_as_dict(c, module) for c in columns]
    degs = []
    for c in cols:
        if not c:
            raise ValueError("zero column has no degree; give its twist explicitly")
        if not module.is_homogeneous(c):
            raise ValueError("inhomogeneous column")
        degs.append(module.degree_of(c))
    return syzygy_module_twisted(cols, module, degs, max_degree)


def syzygy_module_twisted(cols, module, source_twists, max_degree=None):
    R = module.ring
    src = FreeModule(R, source_twists)
    big = FreeModule(R, list(module.twists) + list(src.twists))
    r = module.rank
    gens = []
    for i, c in enumerate(cols):
        d = {}
        for P, v in c.items():
            comp, m = module.split(P)
            d[big.enc(comp, m)] = v
        d[big.enc(r + i, 0)] = 1
        gens.append(d)
    G = f4(big, gens, max_degree=max_degree)
    syz = []
    for e, L in zip(G.elements, G.leads):
        if big.comp(L) >= r:
            s = {}
            for P, v in e.items():
                comp, m = big.split(P)
                s[src.enc(comp - r, m)] = v
            syz.append(s)
    return src, syz


def apply_matrix(columns, module, vec, src):
    """Image of vec (dict in src) under the map e_i -> columns[i] (dicts in module)."""
    p = module.ring.p
    out = {}
    for P, v in vec.items():
        i, m = src.split(P)
        d_axpy(out, {k + (m << module.shift): c for k, c in columns[i].items()}, v, p)
    return out


def graded_pieces_matrix(columns, row_degrees, col_degrees, degree):
    """Dense matrix of the degree-`degree` piece of a map of free modules.

    columns[k] is a list of Polys (one per row); row i is generated in
    multidegree row_degrees[i], column k in col_degrees[k].  Returns
    (A, unknowns, equations): A has one column per (k, monomial of degree
    degree - col_degrees[k]) and one row per (i, monomial of degree
    degree - row_degrees[i]).
    """
    R = None
    for col in columns:
        for f in col:
            R = f.ring
            break
        if R is not None:
            break
    if R is None:
        raise ValueError("empty matrix")
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))
    unknowns = []
    for k, cd in enumerate(col_degrees):
        for e in R.monomials(sub(degree, cd)):
            unknowns.append((k, R.pack(e)))
    eq_index = {}
    equations = []
    for i, rd in enumerate(row_degrees):
        for e in R.monomials(sub(degree, rd)):
            m = R.pack(e)
            eq_index[(i, m)] = len(equations)
            equations.append((i, m))
    A = np.zeros((len(equations), len(unknowns)), dtype=np.int64)
    for u, (k, m) in enumerate(unknowns):
        for i, f in enumerate(columns[k]):
            for t, c in f.d.items():
                A[eq_index[(i, t + m)], u] += c
    A %= R.p
    return A, unknowns, equations


def dense_kernel(columns, row_degrees, col_degrees, degree):
    """Basis of the degree piece of the kernel of a map of free modules,
    as lists of Polys (one per column), by dense linear algebra."""
    A, unknowns, _ = graded_pieces_matrix(columns, row_degrees, col_degrees, degree)
    R = next(f.ring for col in columns for f in col)
    K = linalg.nullspace(A, R.p)
    out = []
    for row in K:
        comps = [dict() for _ in col_degrees]
        for u in np.nonzero(row)[0]:
            k, m = unknowns[u]
            comps[k][m] = int(row[u])
        out.append([Poly(R, d) for d in comps])
    return out
