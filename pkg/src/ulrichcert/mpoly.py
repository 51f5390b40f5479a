"""Sparse multivariate polynomials over F_p with multigradings.

A monomial is stored as one Python integer ("packed monomial") that holds,
from the most significant end: the heft degree, the rows of the order
matrix evaluated on the exponent vector, and the raw exponents (one
12-bit field per variable, whose top bit is kept free as a guard for
divisibility tests).  Every field is a linear function of the exponent
vector, so multiplying monomials is integer addition and comparing
monomials in the monomial order is integer comparison.
"""

import re

from .gf import PrimeField, DEFAULT_PRIME

EB = 12  # bits per exponent field
KB = 24  # bits per order-key field
MAX_EXP = (1 << (EB - 1)) - 1


def _order_rows(order, n):
    grevlex = [[1] * (n - j) + [0] * j for j in range(n)]
    if order == "grevlex":
        return grevlex
    if order == "lex":
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    m = re.fullmatch(r"elimination\((\d+)\)", order)
    if m:
        k = int(m.group(1))
        if not 0 <= k <= n:
            raise ValueError(f"cannot eliminate {k} of {n} variables")
        return [[1] * k + [0] * (n - k)] + grevlex
    m = re.fullmatch(r"weighted\(([\d,\s]+)\)", order)
    if m:
        w = [int(t) for t in m.group(1).split(",")]
        if len(w) != n or min(w) < 0:
            raise ValueError(f"bad weight vector {w}")
        return [w] + grevlex
    raise ValueError(f"unknown monomial order {order!r}")


def normalize_order(order):
    if isinstance(order, tuple):
        kind, arg = order
        if kind in ("elim", "elimination"):
            return f"elimination({int(arg)})"
        if kind == "weighted":
            return "weighted(" + ",".join(str(int(a)) for a in arg) + ")"
        raise ValueError(f"unknown monomial order {order!r}")
    return re.sub(r"\s+", "", str(order))


class Ring:
    """Polynomial ring F_p[x_1..x_n] with a multigrading and a monomial order.

    `degrees` gives one degree vector per variable (default: all (1,)).
    `order` is one of "grevlex", "lex", "elimination(k)", "weighted(w,...)";
    the last two are refined by grevlex.
    """

    def __init__(self, names, degrees=None, order="grevlex", p=DEFAULT_PRIME):
        if isinstance(names, str):
            names = [t for t in re.split(r"[\s,]+", names) if t]
        self.names = tuple(names)
        n = self.nvars = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("variable names must be unique")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")
        if degrees is None:
            degrees = [(1,)] * n
        degrees = tuple((d,) if isinstance(d, int) else tuple(int(a) for a in d) for d in degrees)
        if len(degrees) != n:
            raise ValueError("one degree vector per variable required")
        ranks = {len(d) for d in degrees}
        if len(ranks) > 1:
            raise ValueError("degree vectors must share one grading rank")
        self.degrees = degrees
        self.grading_rank = ranks.pop() if ranks else 1
        self.field = PrimeField(p)
        self.p = self.field.p
        self.order = normalize_order(order)
        rows = _order_rows(self.order, n)
        heft = [sum(d) for d in degrees]
        if any(h <= 0 for h in heft):
            raise ValueError("every variable needs positive total degree")
        self.heft = tuple(heft)
        self._heft_is_degree = self.grading_rank == 1

        self.ebits = EB * n
        self.nrows = len(rows)
        self.order_bits = self.ebits + KB * self.nrows
        self.heft_shift = self.order_bits
        self.total_bits = self.order_bits + KB
        self.order_mask = (1 << self.order_bits) - 1
        self.emask = (1 << self.ebits) - 1
        self.guard = sum(1 << (EB * i + EB - 1) for i in range(n))
        self._eoff = [EB * (n - 1 - i) for i in range(n)]
        units = []
        for i in range(n):
            u = heft[i] << self.heft_shift
            for j, row in enumerate(rows):
                u += row[i] << (self.ebits + KB * (self.nrows - 1 - j))
            u += 1 << self._eoff[i]
            units.append(u)
        self.units = tuple(units)
        self._index = {name: i for i, name in enumerate(self.names)}

    # -- identity -------------------------------------------------------
    def _key(self):
        return (self.names, self.degrees, self.order, self.p)

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Ring({','.join(self.names)}; order={self.order}; p={self.p})"

    def with_order(self, order):
        return Ring(self.names, self.degrees, order, self.p)

    def header(self):
        degs = ";".join("[" + ",".join(str(a) for a in d) + "]" for d in self.degrees)
        return f"ring p={self.p} vars={','.join(self.names)} degrees={degs} order={self.order}"

    # -- monomials ------------------------------------------------------
    def pack(self, exps):
        u = self.units
        P = 0
        for i, e in enumerate(exps):
            if e:
                if e < 0 or e > MAX_EXP:
                    raise ValueError(f"exponent {e} out of range")
                P += e * u[i]
        return P

    def unpack(self, P):
        m = (1 << EB) - 1
        return tuple((P >> off) & m for off in self._eoff)

    def heft_of(self, P):
        return P >> self.heft_shift

    def multidegree(self, exps):
        r = self.grading_rank
        out = [0] * r
        for e, d in zip(exps, self.degrees):
            if e:
                for k in range(r):
                    out[k] += e * d[k]
        return tuple(out)

    def pmultidegree(self, P):
        if self._heft_is_degree:
            return (P >> self.heft_shift,)
        return self.multidegree(self.unpack(P))

    def divides(self, a, b):
        g = self.guard
        return (((b & self.emask) | g) - (a & self.emask)) & g == g

    def lcm(self, a, b):
        return self.pack(tuple(max(x, y) for x, y in zip(self.unpack(a), self.unpack(b))))

    def compare(self, a, b):
        """Compare exponent vectors a, b in the ring order: -1, 0 or 1."""
        ka = self.pack(a) & self.order_mask
        kb = self.pack(b) & self.order_mask
        return (ka > kb) - (ka < kb)

    def monomials(self, deg):
        """All exponent vectors of multidegree `deg` (descending ring order)."""
        deg = (deg,) if isinstance(deg, int) else tuple(deg)
        if len(deg) != self.grading_rank:
            raise ValueError("multidegree of wrong rank")
        n = self.nvars
        out = []
        exps = [0] * n
        degs = self.degrees

        def rec(i, rem):
            if i == n:
                if not any(rem):
                    out.append(tuple(exps))
                return
            d = degs[i]
            e = 0
            cur = list(rem)
            while all(c >= 0 for c in cur):
                exps[i] = e
                rec(i + 1, cur)
                if not any(d):
                    break
                e += 1
                cur = [c - dk for c, dk in zip(cur, d)]
            exps[i] = 0

        if all(c >= 0 for c in deg):
            rec(0, list(deg))
        out.sort(key=lambda ex: self.pack(ex) & self.order_mask, reverse=True)
        return out

    def monomial_count(self, deg):
        return len(self.monomials(deg))

    # -- elements -------------------------------------------------------
    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {0: 1})

    def const(self, c):
        c %= self.p
        return Poly(self, {0: c} if c else {})

    def var(self, v):
        i = self._index[v] if isinstance(v, str) else v
        return Poly(self, {self.units[i]: 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = coeff % self.p
        return Poly(self, {self.pack(exps): c} if c else {})

    def index(self, name):
        return self._index[name]

    def parse(self, text):
        return parse_poly(text, self)


class Poly:
    """Immutable sparse polynomial: `d` maps packed monomials to coefficients."""

    __slots__ = ("ring", "d")

    def __init__(self, ring, d):
        self.ring = ring
        self.d = d

    @classmethod
    def from_terms(cls, ring, terms):
        d = {}
        p = ring.p
        for exps, c in terms:
            P = ring.pack(exps)
            d[P] = (d.get(P, 0) + int(c)) % p
        return cls(ring, {k: v for k, v in d.items() if v})

    # -- structure ------------------------------------------------------
    @property
    def terms(self):
        """(exponents, coefficient) pairs, strictly descending in the ring order."""
        R = self.ring
        om = R.order_mask
        items = sorted(self.d.items(), key=lambda kv: kv[0] & om, reverse=True)
        return [(R.unpack(P), c) for P, c in items]

    def __len__(self):
        return len(self.d)

    def __bool__(self):
        return bool(self.d)

    def is_zero(self):
        return not self.d

    def _lead_packed(self):
        om = self.ring.order_mask
        return max(self.d, key=lambda P: P & om)

    def lead_monomial(self):
        return self.ring.unpack(self._lead_packed())

    def lead_coeff(self):
        return self.d[self._lead_packed()]

    def lead_term(self):
        P = self._lead_packed()
        return Poly(self.ring, {P: self.d[P]})

    def monic(self):
        if not self.d:
            return self
        inv = self.ring.field.inv(self.lead_coeff())
        p = self.ring.p
        return Poly(self.ring, {k: v * inv % p for k, v in self.d.items()})

    def coefficient(self, exps):
        return self.d.get(self.ring.pack(exps), 0)

    def is_homogeneous(self):
        if not self.d:
            return True
        R = self.ring
        degs = {R.pmultidegree(P) for P in self.d}
        return len(degs) == 1

    def multidegree(self):
        """Multidegree of a nonzero homogeneous polynomial."""
        if not self.d:
            raise ValueError("zero polynomial has no degree")
        R = self.ring
        degs = {R.pmultidegree(P) for P in self.d}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def degree(self):
        """Largest heft degree of a term (total degree in the standard grading)."""
        if not self.d:
            return -1
        return max(self.d) >> self.ring.heft_shift

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        d = dict(self.d)
        for k, v in other.d.items():
            c = (d.get(k, 0) + v) % p
            if c:
                d[k] = c
            else:
                d.pop(k, None)
        return Poly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {k: p - v for k, v in self.d.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {k: v * c % p for k, v in self.d.items()})

    def mul_term(self, P, c):
        """Multiply by the term c * (packed monomial P)."""
        p = self.ring.p
        return Poly(self.ring, {k + P: v * c % p for k, v in self.d.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.d, other.d
        if len(a) < len(b):
            a, b = b, a
        acc = {}
        get = acc.get
        for kb, vb in b.items():
            for ka, va in a.items():
                k = ka + kb
                acc[k] = get(k, 0) + va * vb
        p = self.ring.p
        return Poly(self.ring, {k: v % p for k, v in acc.items() if v % p})

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.d == other.d

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    def derivative(self, v):
        R = self.ring
        i = R.index(v) if isinstance(v, str) else v
        u = R.units[i]
        off = R._eoff[i]
        m = (1 << EB) - 1
        p = R.p
        d = {}
        for P, c in self.d.items():
            e = (P >> off) & m
            if e and e % p:
                d[P - u] = c * e % p
        return Poly(R, {k: v for k, v in d.items() if v})

    def substitute(self, images, target=None):
        """Apply the ring map x_i -> images[i] (Polys of the target ring)."""
        if target is None:
            target = images[0].ring if images else self.ring
        cache = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        total = {}
        p = target.p
        for exps, c in self.terms:
            t = target.const(c)
            for i, e in enumerate(exps):
                if e:
                    t = t * power(i, e)
            for k, v in t.d.items():
                total[k] = (total.get(k, 0) + v) % p
        return Poly(target, {k: v for k, v in total.items() if v})

    def evaluate(self, values):
        p = self.ring.p
        s = 0
        for exps, c in self.terms:
            t = c
            for x, e in zip(values, exps):
                if e:
                    t = t * pow(x, e, p) % p
            s += t
        return s % p

    # -- printing -------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def format_poly(f):
    """Canonical text: terms in descending order, `coeff*var^e*...` joined by +/-."""
    if not f.d:
        return "0"
    R = f.ring
    p = R.p
    out = []
    for exps, c in f.terms:
        neg = c > p // 2
        a = p - c if neg else c
        factors = []
        for name, e in zip(R.names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if a != 1 or not factors:
            factors.insert(0, str(a))
        body = "*".join(factors)
        if out:
            out.append(("-" if neg else "+") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out)


class ParseError(ValueError):
    def __init__(self, msg, pos, text=""):
        super().__init__(f"{msg} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


def parse_poly(text, ring):
    """Parse +, -, *, ^, integers, variable names and parentheses."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        if peek()[:2] in (("op", "-"), ("op", "+")):
            sign = take()[1]
            f = term()
            if sign == "-":
                f = -f
        else:
            f = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            g = term()
            f = f + g if op == "+" else f - g
        return f

    def term():
        f = factor()
        while peek()[:2] == ("op", "*"):
            take()
            f = f * factor()
        return f

    def factor():
        f = atom()
        if peek()[:2] == ("op", "^"):
            take()
            t = peek()
            if t[:2] == ("op", "-"):
                raise ParseError("negative exponent", t[2], text)
            if t[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", t[2], text)
            take()
            f = f ** t[1]
        return f

    def atom():
        t = take()
        kind, val, pos = t
        if kind == "num":
            return ring.const(val)
        if kind == "name":
            if val not in ring._index:
                raise ParseError(f"unknown identifier {val!r}", pos, text)
            return ring.var(val)
        if kind == "op" and val == "(":
            f = expr()
            t2 = take()
            if t2[:2] != ("op", ")"):
                raise ParseError("expected ')'", t2[2], text)
            return f
        if kind == "op" and val == "-":
            return -factor()
        if kind == "end":
            raise ParseError("unexpected end of input", pos, text)
        raise ParseError(f"unexpected token {val!r}", pos, text)

    f = expr()
    t = peek()
    if t[0] != "end":
        raise ParseError(f"unexpected token {t[1]!r}", t[2], text)
    return f


def poly_mul(f, g):
    return f * g


def compare_monomials(ring, a, b):
    """Return "LT", "EQ" or "GT" comparing exponent vectors in the ring order."""
    c = ring.compare(a, b)
    return {-1: "LT", 0: "EQ", 1: "GT"}[c]


def random_poly(ring, deg, rng, density=None):
    """Random homogeneous form of multidegree `deg` (all monomials, uniform
    coefficients including 0); `rng.randrange` must be available."""
    mons = ring.monomials(deg)
    d = {}
    for e in mons:
        if density is not None and rng.random() > density:
            continue
        c = rng.randrange(ring.p)
        if c:
            d[ring.pack(e)] = c
    return Poly(ring, d)


def _parse_degrees(text):
    parts = [s.strip() for s in text.split(";") if s.strip()]
    out = []
    for part in parts:
        m = re.fullmatch(r"\[([-\d,\s]*)\]", part)
        if not m:
            raise ValueError(f"bad degree vector {part!r}")
        out.append(tuple(int(t) for t in m.group(1).split(",") if t.strip()))
    return out


def parse_ring_header(line):
    """Parse `ring p=<prime> vars=<v1,...> degrees=<[..];[..]> order=<name>`."""
    m = re.fullmatch(r"\s*ring\s+p=(\d+)\s+vars=(\S+)\s+degrees=(\S+)\s+order=(\S+)\s*", line)
    if not m:
        raise ValueError(f"bad ring header {line!r}")
    p = int(m.group(1))
    names = m.group(2).split(",")
    degrees = _parse_degrees(m.group(3))
    return Ring(names, degrees, m.group(4), p)


def read_ideal_file(path):
    """Read a ring header plus one polynomial per line; returns (ring, polys)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = [(k + 1, ln) for k, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    if not body:
        raise ValueError(f"{path}: empty ideal file")
    lineno, head = body[0]
    try:
        ring = parse_ring_header(head)
    except ValueError as exc:
        raise ValueError(f"{path}:{lineno}: {exc}") from None
    polys = []
    for lineno, ln in body[1:]:
        try:
            polys.append(parse_poly(ln, ring))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    return ring, polys


def write_ideal_file(path, ring, polys):
    with open(path, "w") as fh:
        fh.write(ring.header() + "\n")
        for f in polys:
            fh.write(format_poly(f) + "\n")


def all_exponents(n, deg):
    """Exponent vectors of total degree `deg` in n variables (standard grading)."""
    if n == 0:
        return [()] if deg == 0 else []
    out = []
    for first in range(deg, -1, -1):
        for rest in all_exponents(n - 1, deg - first):
            out.append((first,) + rest)
    return out


__all__ = [
    "Ring", "Poly", "parse_poly", "format_poly", "poly_mul", "compare_monomials",
    "random_poly", "read_ideal_file", "write_ideal_file", "parse_ring_header",
    "ParseError", "all_exponents",
]
