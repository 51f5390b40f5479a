"""Graded free resolutions, Betti tables, Hilbert functions and series.

Resolutions are built with Schreyer's algorithm: a Groebner basis of the
relations is the first map, and every further map comes from lifting the
S-pairs of the previous level in the induced Schreyer order.  The resulting
(usually non-minimal) complex is then pruned: each unit entry splits off a
trivial summand S(-a) -> S(-a).
"""

import json

import numpy as np
from math import factorial

from .gb import (F4, FreeModule, LeadIndex, d_axpy, d_mul, ideal_module,
                 reduce_batch, _as_dict)
from .mpoly import Poly
from . import linalg
from .presentation import Ideal, ModulePresentation, series_coefficient, _nadd


# ---------------------------------------------------------------------------
# complexes

class GradedFreeComplex:
    """F_0 <- F_1 <- ... <- F_l over one ring.

    twists[i] is the list of generator degrees of F_i; maps[i] is d_{i+1}
    as a list of columns, each column a dict {row index: {packed monomial: coeff}}.
    """

    def __init__(self, ring, twists, maps, minimal=False):
        self.ring = ring
        self.twists = [list(t) for t in twists]
        self.maps = maps
        self.minimal = minimal

    def __len__(self):
        return len(self.twists)

    @property
    def length(self):
        n = len(self.twists) - 1
        while n > 0 and not self.twists[n]:
            n -= 1
        return n

    def ranks(self):
        return [len(t) for t in self.twists]

    def module(self, i):
        return FreeModule(self.ring, self.twists[i])

    def map_columns(self, i):
        """d_i (i >= 1) as module-element dicts in the POT free module F_{i-1}."""
        F = self.module(i - 1)
        out = []
        for col in self.maps[i - 1]:
            d = {}
            for r, poly in col.items():
                for m, c in poly.items():
                    d[F.enc(r, m)] = c
            out.append(d)
        return out

    def entry(self, i, r, c):
        return Poly(self.ring, dict(self.maps[i - 1][c].get(r, {})))

    def is_complex(self):
        """d_{i} o d_{i+1} = 0 for all i, checked exactly."""
        p = self.ring.p
        for i in range(1, len(self.maps)):
            A = self.maps[i - 1]
            for col in self.maps[i]:
                acc = {}
                for k, f in col.items():
                    for r, g in A[k].items():
                        prod = _pmul(f, g, p)
                        cur = acc.setdefault(r, {})
                        d_axpy(cur, prod, 1, p)
                if any(v for v in acc.values()):
                    return False
        return True

    def has_unit_entries(self):
        for cols in self.maps:
            for col in cols:
                for poly in col.values():
                    if 0 in poly:
                        return True
        return False

    def betti(self):
        if not self.minimal and self.has_unit_entries():
            raise ValueError("Betti numbers need a minimal complex")
        entries = {}
        for i, tw in enumerate(self.twists):
            row = {}
            for t in tw:
                row[tuple(t)] = row.get(tuple(t), 0) + 1
            if row:
                entries[i] = row
        return BettiTable(entries)


def _pmul(f, g, p):
    out = {}
    get = out.get
    gi = list(g.items())
    for a, x in f.items():
        for b, y in gi:
            k = a + b
            out[k] = get(k, 0) + x * y
    return {k: v % p for k, v in out.items() if v % p}


# ---------------------------------------------------------------------------
# Betti tables

class BettiTable:
    """beta_{i,j}: entries {i: {multidegree tuple: count}}."""

    def __init__(self, entries):
        self.entries = {int(i): dict(row) for i, row in entries.items() if row}

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def totals(self):
        n = max(self.entries) + 1 if self.entries else 0
        return tuple(sum(self.entries.get(i, {}).values()) for i in range(n))

    def total_degree_table(self):
        """{i: {total degree: count}}."""
        out = {}
        for i, row in self.entries.items():
            r = out.setdefault(i, {})
            for j, c in row.items():
                t = sum(j)
                r[t] = r.get(t, 0) + c
        return out

    def rows(self):
        """{row r: [count for column i]} with r = total degree - i."""
        tab = self.total_degree_table()
        ncol = max(tab) + 1 if tab else 0
        out = {}
        for i, row in tab.items():
            for t, c in row.items():
                out.setdefault(t - i, [0] * ncol)[i] += c
        return dict(sorted(out.items()))

    def to_json(self):
        return {str(i): {",".join(str(x) for x in j): c for j, c in sorted(row.items())}
                for i, row in sorted(self.entries.items())}

    def to_json_str(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def __str__(self):
        rows = self.rows()
        tot = self.totals()
        ncol = len(tot)
        cells = [[""] + [str(i) for i in range(ncol)], ["total:"] + [str(t) for t in tot]]
        for r, counts in rows.items():
            cells.append([f"{r}:"] + [str(c) if c else "." for c in counts])
        widths = [max(len(row[k]) for row in cells) for k in range(ncol + 1)]
        lines = []
        for row in cells:
            lines.append(" ".join(x.rjust(w) for x, w in zip(row, widths)))
        return "\n".join(lines)


def betti_table(C):
    return C.betti()


# ---------------------------------------------------------------------------
# Schreyer resolution

def _lex_key(module, L):
    return (module.comp(L), tuple(-e for e in module.ring.unpack(module.mono(L))))


def _schreyer_level(F, elems):
    """Given a GB `elems` (monic dicts in F, F's order), build the Schreyer
    module over them and the lifted syzygies (a GB of the syzygy module in
    the Schreyer order).  Returns (G, syzygies, elems in basis order)."""
    p = F.ring.p
    elems = sorted(elems, key=lambda e: _lex_key(F, max(e)))
    leads = [max(e) for e in elems]
    G = FreeModule.schreyer(F, elems)
    idx = LeadIndex(F)
    for k, L in enumerate(leads):
        idx.add(k, L)
    by_comp = {}
    for k, L in enumerate(leads):
        by_comp.setdefault(F.comp(L), []).append(k)
    frame = []  # (j, k, u_j) with j < k
    R = F.ring
    for c, ks in by_comp.items():
        for a, j in enumerate(ks):
            cand = {}
            mj = F.mono(leads[j])
            for k in ks[a + 1:]:
                L = R.lcm(mj, F.mono(leads[k]))
                u = L - mj
                if u not in cand:
                    cand[u] = k
            # minimal generators of the monomial ideal {u}
            us = sorted(cand, key=lambda u: u >> R.heft_shift)
            mins = []
            for u in us:
                if not any(R.divides(v, u) for v in mins):
                    mins.append(u)
            for u in mins:
                frame.append((j, cand[u], u))
    # lift: S(j,k) = u_j g_j - v_k g_k, reduce with quotients
    rows = []
    for (j, k, u) in frame:
        mj = F.mono(leads[j])
        mk = F.mono(leads[k])
        v = (u + mj) - mk
        s = d_mul(elems[j], u << F.shift, 1, p)
        d_axpy(s, d_mul(elems[k], v << F.shift, 1, p), p - 1, p)
        rows.append(s)
    syz = []
    B = 4000
    for start in range(0, len(rows), B):
        chunk = rows[start:start + B]
        rems, quots = reduce_batch(F, elems, leads, idx, chunk, want_quot=True)
        for t, (rem, q) in enumerate(zip(rems, quots)):
            if rem:
                raise RuntimeError("S-pair did not reduce to zero: input is not a Groebner basis")
            j, k, u = frame[start + t]
            mj = F.mono(leads[j])
            mk = F.mono(leads[k])
            v = (u + mj) - mk
            d = {G.enc(j, u): 1}
            key = G.enc(k, v)
            d[key] = (d.get(key, 0) - 1) % p
            for (b, m, c) in q:
                key = G.enc(b, m >> F.shift)
                x = (d.get(key, 0) - c) % p
                if x:
                    d[key] = x
                else:
                    d.pop(key, None)
            syz.append(d)
    return G, syz, elems


def _to_columns(F, elems):
    cols = []
    for e in elems:
        col = {}
        for P, c in e.items():
            r, m = F.split(P)
            col.setdefault(r, {})[m] = c
        cols.append(col)
    return cols


def schreyer_resolution(M, max_length=None):
    """Non-minimal free resolution of a cokernel presentation M."""
    M = M.to_cokernel()
    R = M.ring
    F0 = M.ambient
    G = M.gb()
    twists = [list(F0.twists)]
    maps = []
    F = F0
    elems = [dict(e) for e in G.elements]
    level = 0
    while elems:
        if max_length is not None and level >= max_length:
            break
        Gm, syz, elems_sorted = _schreyer_level(F, elems)
        twists.append(list(Gm.twists))
        maps.append(_to_columns(F, elems_sorted))
        F = Gm
        elems = syz
        level += 1
    return GradedFreeComplex(R, twists, maps)


# ---------------------------------------------------------------------------
# minimalization

def _prune_inplace(twists, maps, p):
    """Split off all trivial summands, one (level, degree) constant block at a time.

    For d = d_{i+1}: F_{i+1} -> F_i and a degree j, the entries between
    basis elements of degree j are constants.  If A = d[R, K] is a maximal
    invertible constant block, the complex is homotopic to the one with
    F_i minus R, F_{i+1} minus K and d replaced by the Schur complement
    d[R', K'] - d[R', K] A^{-1} d[R, K'] (rows R of d_i's source and columns
    K of d_{i+2}'s target are simply dropped).
    """
    n = len(maps)
    for i in range(n):
        cols = maps[i]
        row_tw = twists[i]
        col_tw = twists[i + 1]
        degs = sorted(set(tuple(t) for t in col_tw) & set(tuple(t) for t in row_tw))
        dead_rows = set()
        dead_cols = set()
        for j in degs:
            rj = [r for r, t in enumerate(row_tw) if tuple(t) == j and r not in dead_rows]
            cj = [c for c, t in enumerate(col_tw) if tuple(t) == j and c not in dead_cols]
            if not rj or not cj:
                continue
            rpos = {r: a for a, r in enumerate(rj)}
            B = np.zeros((len(rj), len(cj)), dtype=np.int64)
            nz = False
            for b, c in enumerate(cj):
                for r, f in cols[c].items():
                    if r in rpos and 0 in f:
                        B[rpos[r], b] = f[0]
                        nz = True
            if not nz:
                continue
            _, kp = linalg.rref(B, p)
            K = [cj[b] for b in kp]
            _, rp = linalg.rref(B[:, kp].T, p)
            R = [rj[a] for a in rp]
            A = B[np.ix_(rp, kp)]
            Ainv = _inverse(A, p)
            Rset = set(R)
            Kset = set(K)
            # rows -> columns having an entry there, restricted to R
            touched = {}
            for c in range(len(cols)):
                if c in Kset or c in dead_cols:
                    continue
                for r in cols[c]:
                    if r in Rset:
                        touched.setdefault(c, []).append(r)
            Rpos = {r: a for a, r in enumerate(R)}
            for c, rs in touched.items():
                col = cols[c]
                # w = Ainv * d[R, c]  (a polynomial per pivot column)
                w = [dict() for _ in K]
                for r in rs:
                    f = col[r]
                    a = Rpos[r]
                    for k in range(len(K)):
                        x = int(Ainv[k, a])
                        if x:
                            d_axpy(w[k], f, x, p)
                raw = {}
                for k, kc in enumerate(K):
                    wk = w[k]
                    if not wk:
                        continue
                    witems = list(wk.items())
                    for r2, g in cols[kc].items():
                        if r2 in Rset:
                            continue
                        acc = raw.get(r2)
                        if acc is None:
                            acc = raw[r2] = {}
                        get = acc.get
                        for a, x in g.items():
                            for b, y in witems:
                                key = a + b
                                acc[key] = get(key, 0) + x * y
                for r2, acc in raw.items():
                    cur = col.get(r2) or {}
                    for key, v in acc.items():
                        v = (cur.get(key, 0) - v) % p
                        if v:
                            cur[key] = v
                        else:
                            cur.pop(key, None)
                    if cur:
                        col[r2] = cur
                    else:
                        col.pop(r2, None)
                for r in rs:
                    col.pop(r, None)
            dead_rows |= Rset
            dead_cols |= Kset
        # renumber
        row_map = {}
        for r in range(len(row_tw)):
            if r not in dead_rows:
                row_map[r] = len(row_map)
        col_map = {}
        for c in range(len(col_tw)):
            if c not in dead_cols:
                col_map[c] = len(col_map)
        maps[i] = [{row_map[r]: f for r, f in cols[c].items() if r in row_map}
                   for c in range(len(cols)) if c not in dead_cols]
        twists[i] = [t for r, t in enumerate(row_tw) if r not in dead_rows]
        if i > 0:
            maps[i - 1] = [col for r, col in enumerate(maps[i - 1]) if r not in dead_rows]
        twists[i + 1] = [t for c, t in enumerate(col_tw) if c not in dead_cols]
        if i + 1 < n:
            maps[i + 1] = [{col_map[r]: f for r, f in col.items() if r in col_map} for col in maps[i + 1]]
    while len(twists) > 1 and not twists[-1]:
        twists.pop()
        if maps:
            maps.pop()


def _inverse(A, p):
    k = A.shape[0]
    M = np.concatenate([A % p, np.eye(k, dtype=np.int64)], axis=1)
    R, piv = linalg.rref(M, p)
    assert piv == list(range(k)), "constant block is not invertible"
    return R[:, k:]


def minimize(C):
    twists = [list(t) for t in C.twists]
    maps = [[{r: dict(f) for r, f in col.items()} for col in cols] for cols in C.maps]
    _prune_inplace(twists, maps, C.ring.p)
    return GradedFreeComplex(C.ring, twists, maps, minimal=True)


def free_resolution(M, minimal=True):
    """Free resolution of a module presentation, or of S/I for a list of
    polynomials (the convention: resolving an ideal resolves its quotient ring)."""
    if not isinstance(M, ModulePresentation):
        M = ModulePresentation.quotient_ring(list(M))
    C = schreyer_resolution(M)
    return minimize(C) if minimal else C


# ---------------------------------------------------------------------------
# Hilbert functions and series

def _as_presentation(M):
    if isinstance(M, ModulePresentation):
        return M
    if isinstance(M, Ideal):
        return M.quotient_module()
    return ModulePresentation.quotient_ring(list(M))


def hilbert_function(M, d):
    """dim M_d (for a list of polynomials: dim (S/I)_d)."""
    return _as_presentation(M).hilbert_function(d)


class HilbertSeries:
    """numerator / prod_v (1 - t^deg v); numerator {multidegree: int}."""

    def __init__(self, numerator, var_degrees):
        self.numerator = {k: v for k, v in numerator.items() if v}
        self.var_degrees = tuple(tuple(d) for d in var_degrees)

    def __eq__(self, other):
        return (isinstance(other, HilbertSeries) and self.numerator == other.numerator
                and self.var_degrees == other.var_degrees)

    def coefficient(self, a):
        a = (a,) if isinstance(a, int) else tuple(a)
        return series_coefficient(self.numerator, self.var_degrees, a)

    def denominator_exponents(self):
        out = {}
        for d in self.var_degrees:
            out[d] = out.get(d, 0) + 1
        return out

    def format(self, names=None):
        r = len(self.var_degrees[0])
        if names is None:
            names = ["t"] if r == 1 else ["s", "t", "u", "v"][:r]
        terms = sorted(self.numerator.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))
        out = []
        for k, c in terms:
            mono = "".join(f"{n}^{e}" if e > 1 else n for n, e in zip(names, k) if e)
            if not mono:
                s = str(abs(c))
            else:
                s = (str(abs(c)) if abs(c) != 1 else "") + mono
            out.append(("-" if c < 0 else "+") + s)
        txt = "".join(out).lstrip("+") or "0"
        return txt

    def __str__(self):
        return self.format()


def hilbert_series_numerator(C):
    """Alternating sum of twist monomials of a resolution (or of a presentation
    via its lead-term module)."""
    if isinstance(C, GradedFreeComplex):
        num = {}
        for i, tw in enumerate(C.twists):
            for t in tw:
                _nadd(num, {tuple(t): 1}, sign=(-1) ** i)
        return HilbertSeries(num, C.ring.degrees)
    M = _as_presentation(C)
    return HilbertSeries(M.hilbert_numerator(), M.ring.degrees)


def degree_genus(I):
    """(Krull dim of S/I, degree, arithmetic genus or None) for a
    standard-graded ring; genus only for projective curves."""
    M = _as_presentation(I)
    if M.ring.grading_rank != 1:
        raise ValueError("degree/genus need a standard grading")
    P, D = M.hilbert_polynomial()
    if D == 0:
        return 0, 0, None
    deg = P[-1] * factorial(D - 1)
    assert deg.denominator == 1
    genus = None
    if D == 2:
        g = 1 - P[0]
        genus = int(g)
    return D, int(deg), genus


def hilbert_polynomial_of(I):
    return _as_presentation(I).hilbert_polynomial()


# ---------------------------------------------------------------------------
# minimal generators

def minimal_generators(gens, module=None):
    """A minimal homogeneous generating set, chosen from `gens`.

    Returns [(element, multidegree)] (Polys for ideals, dicts otherwise).
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    if module is None:
        g0 = gens[0]
        module = ideal_module(g0.ring) if isinstance(g0, Poly) else None
        if module is None:
            raise ValueError("module required for non-polynomial input")
    dicts = [_as_dict(g, module) for g in gens]
    order = sorted(range(len(gens)), key=lambda i: module.heft(max(dicts[i])))
    eng = F4(module)
    out = []
    p = module.ring.p
    pos = 0
    while pos < len(order):
        d = module.heft(max(dicts[order[pos]]))
        batch = []
        while pos < len(order) and module.heft(max(dicts[order[pos]])) == d:
            batch.append(order[pos])
            pos += 1
        eng.run(d)
        if eng.basis:
            rems, _ = reduce_batch(module, eng.basis, eng.leads, eng.index, [dicts[i] for i in batch])
        else:
            rems = [dict(dicts[i]) for i in batch]
        # incremental echelon form on the remainders
        piv = {}
        chosen = []
        for i, r in zip(batch, rems):
            r = dict(r)
            while r:
                L = max(r)
                if L not in piv:
                    break
                c = r[L]
                d_axpy(r, piv[L], (-c) % p, p)
            if r:
                L = max(r)
                inv = pow(r[L], p - 2, p)
                r = {k: v * inv % p for k, v in r.items()}
                piv[L] = r
                chosen.append(i)
        for i in chosen:
            out.append((gens[i], module.degree_of(dicts[i])))
        eng.add([dicts[i] for i in chosen])
    return out


def betti_from_ranks(C):
    """Graded Betti numbers of the module resolved by any free resolution C:
    β_{i,j} = dim Tor_i(M, k)_j is the homology of C ⊗ k, whose differential
    in degree j is the block of constant entries between basis elements of
    degree j.  Independent of the pruning route."""
    p = C.ring.p
    n = len(C.twists)

    def block_rank(i, j):
        # constant block of d_i: F_i -> F_{i-1} in degree j
        if i < 1 or i >= n:
            return 0
        rows = [r for r, t in enumerate(C.twists[i - 1]) if tuple(t) == j]
        cols = [c for c, t in enumerate(C.twists[i]) if tuple(t) == j]
        if not rows or not cols:
            return 0
        rpos = {r: a for a, r in enumerate(rows)}
        B = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for b, c in enumerate(cols):
            for r, f in C.maps[i - 1][c].items():
                if r in rpos and 0 in f:
                    B[rpos[r], b] = f[0]
        return linalg.rank(B, p)

    entries = {}
    for i in range(n):
        counts = {}
        for t in C.twists[i]:
            counts[tuple(t)] = counts.get(tuple(t), 0) + 1
        row = {}
        for j, nij in counts.items():
            b = nij - block_rank(i, j) - block_rank(i + 1, j)
            if b:
                row[j] = b
        if row:
            entries[i] = row
    return BettiTable(entries)
