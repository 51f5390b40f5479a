"""Arithmetic in the prime field F_p.

Polynomials and matrices store coefficients as plain Python (or numpy)
integers reduced into [0, p); the field object carries p and the helpers.
"""

DEFAULT_PRIME = 997


def is_prime(n):
    """Trial division primality test (fine for n < 2^31)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def ext_gcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class PrimeField:
    """The field F_p for an odd prime p < 2^31."""

    def __init__(self, p=DEFAULT_PRIME):
        p = int(p)
        if p <= 2 or p >= 2**31 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime below 2^31, got {p}")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, value):
        return FieldElement(value, self)

    def reduce(self, a):
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        g, x, _ = ext_gcd(a, self.p)
        return x % self.p

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def dot(self, xs, ys):
        # accumulate in a wide integer, reduce once
        return sum(x * y for x, y in zip(xs, ys)) % self.p


class FieldElement:
    """A value of F_p; immutable."""

    __slots__ = ("value", "field")

    def __init__(self, value, field):
        self.field = field
        self.value = int(value) % field.p

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.field)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.field)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def __truediv__(self, other):
        return FieldElement(self.value * self.field.inv(self._coerce(other)), self.field)

    def inverse(self):
        return FieldElement(self.field.inv(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.field.p}"


def ff_inv(a):
    """Inverse of a FieldElement."""
    return a.inverse()
