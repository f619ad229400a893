"""Coefficient fields: the rationals and prime fields F_p with p odd.

Elements of QQ are plain ``Fraction`` objects.  Elements of F_p are ``Mod``
instances, so generic code can use ordinary arithmetic operators for both.
"""

from fractions import Fraction
import random


class RationalField:
    characteristic = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, Mod):
            raise TypeError("cannot coerce an F_p element into Q")
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def contains(self, x):
        return isinstance(x, Fraction)

    def to_json(self, x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def sample(self, rng, bound=5):
        return Fraction(rng.randint(-bound, bound))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    def __init__(self, p):
        p = int(p)
        if p == 2 or not _is_prime(p):
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"F_{p}"

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise TypeError("elements of different prime fields")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator vanishes mod {self.p}")
            return Mod(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return Mod(int(x), self.p)

    @property
    def zero(self):
        return Mod(0, self.p)

    @property
    def one(self):
        return Mod(1, self.p)

    def contains(self, x):
        return isinstance(x, Mod) and x.p == self.p

    def to_json(self, x):
        return str(self(x).v)

    def sample(self, rng, bound=None):
        return Mod(rng.randrange(self.p), self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


class Mod:
    """Residue class modulo an odd prime."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise TypeError("elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Mod(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e):
        if e < 0:
            return Mod(pow(self.v, -1, self.p), self.p) ** (-e)
        return Mod(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


def parse_field(spec):
    """Parse ``"Q"`` or ``"fp:101"`` into a field object."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.startswith("fp:") or s.startswith("gf:"):
        return PrimeField(int(s[3:]))
    raise ValueError(f"unknown field specification {spec!r}")


def random_element(field, rng=None, bound=5):
    rng = rng or random.Random()
    return field.sample(rng, bound)
