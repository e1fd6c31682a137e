"""Exact coefficient arithmetic: GF(p), GF(p^k) with explicit modulus, and Q.

Scalars are small immutable wrappers around a canonical raw value (int mod p,
coefficient tuple, or Fraction).  All arithmetic is exact; there are no floats
anywhere in this package.  Finite fields are capped at 2^16 elements and
extension degree 8, which keeps every exhaustive search (root finding,
discrete logs, unit scans) cheap and predictable.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InstanceFormatError,
    NonPrimeCharacteristic,
    ReducibleModulus,
    UnsupportedRationalDegree,
)

MAX_FIELD_SIZE = 1 << 16
MAX_EXTENSION_DEGREE = 8


def is_prime(n):
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


# --- dense polynomial helpers over GF(p) ------------------------------------
# Polynomials are tuples of ints in [0, p), constant coefficient first,
# trailing zeros stripped.  The zero polynomial is the empty tuple.

def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    """Quotient and remainder of a by b over GF(p); b must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(_ptrim(a)) >= len(b):
        a = list(_ptrim(a))
        shift = len(a) - len(b)
        coef = (a[-1] * inv_lead) % p
        q[shift] = coef
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * x) % p
    return _ptrim(q), _ptrim(a)


def _pxgcd(a, b, p):
    """Extended Euclid over GF(p)[x]: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pmul(tuple((-c) % p for c in q), s1, p), p)
        t0, t1 = t1, _padd(t0, _pmul(tuple((-c) % p for c in q), t1, p), p)
    return r0, s0, t0


def _is_irreducible(m, p):
    """Trial factorization: no monic divisor of degree 1..deg/2."""
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = tuple(tail) + (1,)
            _, rem = _pdivmod(m, div, p)
            if not rem:
                return False
    return True


# --- scalar wrapper -----------------------------------------------------------

class Scalar:
    """One field element.  Immutable, hashable, with exact operators."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(
                    f"cannot mix scalars of {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._add(self.value, other.value))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.value))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
            return Scalar(self.field, self.field._mul(self.value, other.value))
        return NotImplemented

    __rmul__ = __mul__

    def inv(self):
        return Scalar(self.field, self.field._inv(self.value))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self
        if n < 0:
            base = self.inv()
            n = -n
        result = self.field.one
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != self.field.zero.value

    def is_zero(self):
        return not self

    def sort_key(self):
        return self.field.value_sort_key(self.value)

    def to_json(self):
        return self.field.value_to_json(self.value)

    def __repr__(self):
        return f"{self.field.shortname()}({self.field.value_repr(self.value)})"


# --- field classes -------------------------------------------------------------

class Field:
    """Common interface: subclasses fix the raw value representation."""

    kind = None

    def __init__(self):
        self._key = self._spec_key()
        self._hash = hash(self._key)
        self.zero = Scalar(self, self._zero_value())
        self.one = Scalar(self, self._one_value())

    def __eq__(self, other):
        return isinstance(other, Field) and self._key == other._key

    def __hash__(self):
        return self._hash

    def scalar(self, raw):
        return Scalar(self, self._canonical(raw))

    def size(self):
        return None

    def is_finite(self):
        return self.size() is not None

    def elements(self):
        raise TypeError(f"{self.shortname()} is not finite")

    def nonzero_elements(self):
        for x in self.elements():
            if x:
                yield x

    def __repr__(self):
        return self.shortname()


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        if p > MAX_FIELD_SIZE:
            raise InstanceFormatError(
                f"field size {p} exceeds the cap {MAX_FIELD_SIZE}")
        self.p = p
        self.characteristic = p
        self.degree = 1
        super().__init__()

    def _spec_key(self):
        return ("prime", self.p)

    def shortname(self):
        return f"GF({self.p})"

    def size(self):
        return self.p

    def _zero_value(self):
        return 0

    def _one_value(self):
        return 1

    def _canonical(self, raw):
        if not isinstance(raw, int):
            raise InstanceFormatError(
                f"GF({self.p}) scalar must be an integer, got {raw!r}")
        return raw % self.p

    def from_int(self, n):
        return Scalar(self, n % self.p)

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self.shortname()}")
        return pow(a, self.p - 2, self.p)

    def elements(self):
        for v in range(self.p):
            yield Scalar(self, v)

    def value_sort_key(self, v):
        return (v,)

    def value_to_json(self, v):
        return v

    def value_from_json(self, obj):
        return self._canonical(obj)

    def value_repr(self, v):
        return str(v)


class ExtensionField(Field):
    kind = "extension"

    def __init__(self, p, k, modulus):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        if k < 2:
            raise InstanceFormatError("extension degree must be at least 2")
        if k > MAX_EXTENSION_DEGREE:
            raise InstanceFormatError(
                f"extension degree {k} exceeds the cap {MAX_EXTENSION_DEGREE}")
        if p ** k > MAX_FIELD_SIZE:
            raise InstanceFormatError(
                f"field size {p}^{k} exceeds the cap {MAX_FIELD_SIZE}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1:
            raise InstanceFormatError(
                f"modulus for GF({p}^{k}) needs {k + 1} coefficients "
                f"(constant first), got {len(modulus)}")
        if modulus[-1] == 0:
            raise InstanceFormatError("modulus leading coefficient vanishes")
        if modulus[-1] != 1:
            lead_inv = pow(modulus[-1], p - 2, p)
            modulus = tuple((c * lead_inv) % p for c in modulus)
        if not _is_irreducible(modulus, p):
            raise ReducibleModulus(
                f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.degree = k
        self.modulus = modulus
        self.characteristic = p
        super().__init__()

    def _spec_key(self):
        return ("extension", self.p, self.k, self.modulus)

    def shortname(self):
        return f"GF({self.p}^{self.k})"

    def size(self):
        return self.p ** self.k

    def _zero_value(self):
        return (0,) * self.k

    def _one_value(self):
        return (1,) + (0,) * (self.k - 1)

    def _canonical(self, raw):
        if isinstance(raw, int):
            return (raw % self.p,) + (0,) * (self.k - 1)
        raw = tuple(int(c) for c in raw)
        if len(raw) > self.k:
            _, raw = _pdivmod(tuple(c % self.p for c in raw),
                              self.modulus, self.p)
        raw = tuple(c % self.p for c in raw)
        return raw + (0,) * (self.k - len(raw))

    def from_int(self, n):
        return Scalar(self, self._canonical(n))

    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple((-x) % self.p for x in a)

    def _mul(self, a, b):
        prod = _pmul(_ptrim(a), _ptrim(b), self.p)
        _, rem = _pdivmod(prod, self.modulus, self.p)
        return rem + (0,) * (self.k - len(rem))

    def _inv(self, a):
        at = _ptrim(a)
        if not at:
            raise DivisionByZero(f"0 has no inverse in {self.shortname()}")
        g, s, _ = _pxgcd(at, self.modulus, self.p)
        # gcd with an irreducible modulus is a nonzero constant
        c_inv = pow(g[0], self.p - 2, self.p)
        res = tuple((c * c_inv) % self.p for c in s)
        _, rem = _pdivmod(res, self.modulus, self.p)
        return rem + (0,) * (self.k - len(rem))

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield Scalar(self, coeffs)

    def value_sort_key(self, v):
        return v

    def value_to_json(self, v):
        return list(v)

    def value_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != self.k:
            raise InstanceFormatError(
                f"{self.shortname()} scalar must be a list of {self.k} ints, "
                f"got {obj!r}")
        return self._canonical(obj)

    def value_repr(self, v):
        return str(list(v))


class RationalField(Field):
    kind = "rationals"

    def __init__(self):
        self.characteristic = 0
        super().__init__()

    def _spec_key(self):
        return ("rationals",)

    def shortname(self):
        return "Q"

    def _zero_value(self):
        return Fraction(0)

    def _one_value(self):
        return Fraction(1)

    def _canonical(self, raw):
        if isinstance(raw, (int, Fraction)):
            return Fraction(raw)
        if isinstance(raw, str):
            return self.value_from_json(raw)
        raise InstanceFormatError(
            f"rational scalar must be int, Fraction, or 'a/b', got {raw!r}")

    def from_int(self, n):
        return Scalar(self, Fraction(n))

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero("0 has no inverse in Q")
        return 1 / a

    def value_sort_key(self, v):
        return (v.numerator, v.denominator)

    def value_to_json(self, v):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"

    def value_from_json(self, obj):
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                return Fraction(obj)
            except (ValueError, ZeroDivisionError) as exc:
                raise InstanceFormatError(
                    f"bad rational literal {obj!r}") from exc
        raise InstanceFormatError(
            f"rational scalar must be an int or 'a/b' string, got {obj!r}")

    def value_repr(self, v):
        return str(v)


_RATIONALS = None


def rationals():
    global _RATIONALS
    if _RATIONALS is None:
        _RATIONALS = RationalField()
    return _RATIONALS


def gf(p, k=1, modulus=None):
    if k == 1:
        return PrimeField(p)
    if modulus is None:
        raise InstanceFormatError(
            f"GF({p}^{k}) needs an explicit irreducible modulus")
    return ExtensionField(p, k, modulus)


def make_field(spec):
    """Build a field from its JSON description.

    {"kind": "rationals"}                       -> Q
    {"kind": "prime-power", "p": 3}             -> GF(3)
    {"kind": "prime-power", "p": 3, "k": 2,
     "modulus": [1, 0, 1]}                      -> GF(9) = GF(3)[x]/(x^2+1)
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InstanceFormatError(f"field spec must have a 'kind': {spec!r}")
    kind = spec["kind"]
    if kind == "rationals":
        return rationals()
    if kind == "prime-power":
        if "p" not in spec or not isinstance(spec["p"], int):
            raise InstanceFormatError("prime-power field spec needs int 'p'")
        k = spec.get("k", 1)
        if not isinstance(k, int) or k < 1:
            raise InstanceFormatError("field spec 'k' must be a positive int")
        return gf(spec["p"], k, spec.get("modulus"))
    raise InstanceFormatError(f"unknown field kind {kind!r}")


def field_to_json(field):
    if field.kind == "rationals":
        return {"kind": "rationals"}
    if field.kind == "prime":
        return {"kind": "prime-power", "p": field.p}
    return {"kind": "prime-power", "p": field.p, "k": field.k,
            "modulus": list(field.modulus)}


# --- root extraction and multiplicative structure -----------------------------

def _rational_sqrt(fr):
    """Exact nonnegative square root of a Fraction, or None."""
    if fr < 0:
        return None
    num, den = fr.numerator, fr.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


def solve_power_equation(field, n, target):
    """All x in the field with x^n = target, as a set of Scalars.

    Finite fields are solved by exhaustion (the construction cap keeps them
    at 2^16 elements or fewer).  Over the rationals only n = 1 and n = 2 are
    supported; larger n raises UnsupportedRationalDegree.
    """
    if not isinstance(n, int) or n < 1:
        raise InstanceFormatError(f"exponent must be a positive int, got {n!r}")
    if not isinstance(target, Scalar) or target.field != field:
        raise FieldMismatch("target scalar does not belong to the field")
    if field.is_finite():
        return {x for x in field.elements() if x ** n == target}
    if n == 1:
        return {target}
    if n == 2:
        root = _rational_sqrt(target.value)
        if root is None:
            return set()
        return {field.scalar(root), field.scalar(-root)}
    raise UnsupportedRationalDegree(
        f"rational root extraction supports n <= 2, got n = {n}")


def multiplicative_order(s):
    """Order of a nonzero scalar in the multiplicative group (finite fields)."""
    if not s:
        raise DivisionByZero("0 has no multiplicative order")
    field = s.field
    if not field.is_finite():
        if s == field.one:
            return 1
        if s == -field.one:
            return 2
        return None
    n = field.size() - 1
    order = n
    f = 2
    rest = n
    primes = []
    while f * f <= rest:
        if rest % f == 0:
            primes.append(f)
            while rest % f == 0:
                rest //= f
        f += 1
    if rest > 1:
        primes.append(rest)
    for q in primes:
        while order % q == 0 and s ** (order // q) == field.one:
            order //= q
    return order


def multiplicative_generator(field):
    """A fixed generator of F* for a finite field (smallest by sort key)."""
    n = field.size() - 1
    for x in field.elements():
        if x and multiplicative_order(x) == n:
            return x
    raise AssertionError("finite field without a multiplicative generator")


def discrete_log_table(base):
    """Map value -> exponent for powers of a scalar; exhaustive and exact."""
    table = {}
    field = base.field
    acc = field.one
    order = multiplicative_order(base)
    for e in range(order):
        table[acc] = e
        acc = acc * base
    return table
