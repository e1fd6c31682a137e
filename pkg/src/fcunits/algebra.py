"""The twisted group algebra and its sparse elements.

Elements are finite K-linear combinations of basis units u_g, one per group
element, multiplied through the cocycle: u_g u_h = lambda(g, h) u_{gh}.
Everything stays sparse; only operations that genuinely need a dense view
(inversion through the regular representation) build matrices, and those
work inside a finite subgroup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .cocycles import (
    commutator_scalar,
    power_scalar,
    trivial_cocycle,
    validate_cocycle,
)
from .errors import (
    AlgebraMismatch,
    CharacteristicDividesOrder,
    CharacteristicEqualsQ,
    ConditionsNotMet,
    DivisionByZero,
    FieldMismatch,
    InfiniteOrder,
    InvalidCocycle,
    NotNormalized,
    NotUnitError,
    SubgroupTooLarge,
    SupportNotInSubgroup,
)
from .fields import Scalar
from .groups import finite_subgroup


class AlgebraElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {g: c for g, c in terms.items() if c}

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements of different algebras")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, self.algebra.field.zero) + c
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        if isinstance(s, int):
            s = self.algebra.field.from_int(s)
        if s.field != self.algebra.field:
            raise FieldMismatch("scaling by a scalar from another field")
        return AlgebraElement(self.algebra,
                              {g: c * s for g, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        lam = alg.cocycle
        group = alg.group
        out = {}
        zero = alg.field.zero
        for g, cg in self.terms.items():
            for h, ch in other.terms.items():
                gh = group.mul(g, h)
                out[gh] = out.get(gh, zero) + cg * ch * lam(g, h)
        return AlgebraElement(alg, out)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("algebra elements support nonnegative powers only")
        result = self.algebra.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def coeff(self, g):
        return self.terms.get(g, self.algebra.field.zero)

    def support(self):
        return sorted(self.terms, key=lambda g: g.sort_key())

    def is_idempotent(self):
        return self * self == self

    def commutes_with(self, other):
        return self * other == other * self

    def to_json(self):
        group = self.algebra.group
        field = self.algebra.field
        return [{"g": group.element_to_json(g),
                 "c": field.value_to_json(c.value)}
                for g in self.support()
                for c in (self.terms[g],)]

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for g in self.support():
            bits.append(f"{self.terms[g].value!r}*u[{g!r}]")
        return " + ".join(bits)


class TwistedGroupAlgebra:
    def __init__(self, group, field, cocycle=None, validate=True, box_radius=2):
        if cocycle is None:
            cocycle = trivial_cocycle(group, field)
        if cocycle.group is not group:
            raise AlgebraMismatch("cocycle was built over a different group")
        if cocycle.field != field:
            raise FieldMismatch("cocycle scalars come from a different field")
        if not cocycle.is_normalized:
            raise NotNormalized(
                "the algebra needs lambda(1,g) = lambda(g,1) = 1")
        if validate:
            res = validate_cocycle(group, cocycle, box_radius=box_radius)
            if not res.valid:
                raise InvalidCocycle(res.counterexample.describe(),
                                     res.counterexample)
        self.group = group
        self.field = field
        self.cocycle = cocycle
        self.zero = AlgebraElement(self, {})
        self.one = AlgebraElement(self, {group.identity: field.one})

    def basis_unit(self, g):
        self.group._check(g)
        return AlgebraElement(self, {g: self.field.one})

    def scalar(self, s):
        if isinstance(s, int):
            s = self.field.from_int(s)
        return AlgebraElement(self, {self.group.identity: s})

    def element(self, pairs):
        terms = {}
        zero = self.field.zero
        for g, c in pairs:
            self.group._check(g)
            if isinstance(c, int):
                c = self.field.from_int(c)
            terms[g] = terms.get(g, zero) + c
        return AlgebraElement(self, terms)

    def element_from_json(self, obj):
        pairs = []
        for item in obj:
            g = self.group.element_from_json(item["g"])
            c = self.field.scalar(self.field.value_from_json(item["c"]))
            pairs.append((g, c))
        return self.element(pairs)

    def basis_unit_inverse(self, g):
        """u_g^(-1) = lambda(g^-1, g)^(-1) u_{g^-1}."""
        gi = self.group.inv(g)
        return AlgebraElement(self, {gi: self.cocycle(gi, g).inv()})

    def basis_unit_power(self, g, n):
        """u_g^n as a single scaled basis unit, without repeated products."""
        if n < 0:
            raise ValueError("use basis_unit_inverse for negative powers")
        acc = self.field.one
        p = self.group.identity
        for _ in range(n):  # acc: u_g^k = acc * u_{g^k}
            acc = acc * self.cocycle(g, p)
            p = self.group.mul(g, p)
        return AlgebraElement(self, {p: acc})

    def basis_commutator(self, a, b):
        """[u_a, u_b] = u_a^-1 u_b^-1 u_a u_b, as a single scaled unit."""
        c = commutator_scalar(self.cocycle, a, b)
        return AlgebraElement(self, {self.group.commutator(a, b): c})

    def is_central(self, x, box_radius=1):
        """Exact centrality: commuting with every u_g over the radius-1 box
        already covers a generating set (Pruefer coordinates commute with
        everything because the cocycle never sees them)."""
        from .cocycles import generator_box
        for g in generator_box(self.group, box_radius):
            if not x.commutes_with(self.basis_unit(g)):
                return False, g
        return True, None


# --- inversion -----------------------------------------------------------------


@dataclass
class InversionResult:
    status: str                 # "unit" | "not-unit" | "unknown"
    inverse: AlgebraElement | None
    strategy: str
    certificate: str

    @property
    def is_unit(self):
        return self.status == "unit"


def _verified_unit(algebra, x, y, strategy, certificate):
    assert x * y == algebra.one and y * x == algebra.one
    return InversionResult("unit", y, strategy, certificate)


def try_invert(algebra, x, decomposition=None, support_cap=64):
    """Decide invertibility of x where the supported strategies apply.

    Unit results always carry an inverse that has been verified two-sided.
    Not-unit results carry a sound certificate (a zero annihilating product,
    or a singular regular representation over the finite subgroup generated
    by the support, which rules out an inverse in the whole algebra since
    the algebra is free as a module over that subalgebra).  Anything else
    comes back unknown rather than guessed.
    """
    if not x:
        return InversionResult("not-unit", None, "zero", "the zero element")
    if len(x.terms) == 1:
        (g, c), = x.terms.items()
        y = algebra.basis_unit_inverse(g).scale(c.inv())
        return _verified_unit(algebra, x, y, "monomial",
                              "scaled basis units invert term by term")
    try:
        W = finite_subgroup(algebra.group, list(x.terms), cap=support_cap)
    except (InfiniteOrder, SubgroupTooLarge):
        W = None
    if W is not None:
        M = left_regular_matrix(algebra, W, x)
        rhs = [algebra.field.zero] * len(W)
        rhs[W.index_of[algebra.group.identity]] = algebra.field.one
        sol = linalg.solve(algebra.field, M, rhs)
        if sol is None:
            return InversionResult(
                "not-unit", None, "regular-representation",
                f"left multiplication by x is singular on the group algebra "
                f"of the {len(W)}-element subgroup generated by the support; "
                f"the full algebra is a free module over it, so x has no "
                f"right inverse anywhere")
        y = AlgebraElement(algebra,
                           {w: s for w, s in zip(W.elements, sol) if s})
        return _verified_unit(algebra, x, y, "regular-representation",
                              "solved x * y = 1 in the support subalgebra")
    if decomposition is not None:
        return _invert_by_decomposition(algebra, x, decomposition)
    return InversionResult(
        "unknown", None, "none",
        "support generates an infinite subgroup and no decomposition given")


def _corner_inverse(algebra, e, y):
    """z with y z = z y = e, for y of the shape (scalar) * u_c * e.

    The coset representative c is not handed to us, so every quotient of a
    support element of y by a support element of e is tried; the winning
    candidate is verified, everything else rejected.
    """
    g0 = y.support()[0]
    tried = set()
    for w in e.support():
        c = algebra.group.mul(g0, algebra.group.inv(w))
        if c in tried:
            continue
        tried.add(c)
        u_c_inv = algebra.basis_unit_inverse(c)
        w_test = y * u_c_inv
        ref = w_test.support()
        if not ref:
            continue
        gamma = w_test.terms[ref[0]]
        base = e.coeff(ref[0])
        if not base:
            continue
        gamma = gamma / base
        if w_test != e.scale(gamma):
            continue
        z = (u_c_inv * e).scale(gamma.inv())
        if y * z == e and z * y == e:
            return z
    return None


def _invert_by_decomposition(algebra, x, idempotents):
    total = algebra.zero
    for e in idempotents:
        if not e:
            raise ConditionsNotMet("zero idempotent in the decomposition")
        if not e.is_idempotent():
            raise ConditionsNotMet("decomposition entries must be idempotent")
        total = total + e
    if total != algebra.one:
        raise ConditionsNotMet("decomposition idempotents must sum to 1")
    pieces = []
    for e in idempotents:
        y = e * x
        if not y:
            return InversionResult(
                "not-unit", None, "decomposition",
                "e * x = 0 for a nonzero idempotent e, so a two-sided "
                "inverse z would force e = e * x * z = 0")
        if x * e != y:
            return InversionResult(
                "unknown", None, "decomposition",
                "x does not commute with the decomposition")
        z = _corner_inverse(algebra, e, y)
        if z is None:
            return InversionResult(
                "unknown", None, "decomposition",
                "a component of x is not a scaled unit in its corner")
        pieces.append(z)
    z = algebra.zero
    for p in pieces:
        z = z + p
    if x * z == algebra.one and z * x == algebra.one:
        return InversionResult("unit", z, "decomposition",
                               "componentwise corner inverses, verified")
    return InversionResult("unknown", None, "decomposition",
                           "corner inverses did not assemble to an inverse")


def invert_shifted_basis_unit(algebra, g, alpha):
    """Invert u_g - alpha for torsion g via the geometric sum.

    With n the order of g and c the power scalar (u_g^n = c), the element
    u_g - alpha is a unit exactly when alpha^n != c, and then

        (u_g - alpha)^(-1) = (c - alpha^n)^(-1) * sum_i alpha^(n-1-i) u_g^i.

    When alpha^n = c the same sum is a nonzero annihilator, which certifies
    the non-unit verdict.
    """
    if isinstance(alpha, int):
        alpha = algebra.field.from_int(alpha)
    n = algebra.group.element_order(g)
    if n == math.inf:
        raise InfiniteOrder("the geometric-sum inverse needs a torsion element")
    c = power_scalar(algebra.cocycle, g)
    x = algebra.basis_unit(g) - algebra.scalar(alpha)
    geo = algebra.zero
    for i in range(n):
        geo = geo + algebra.basis_unit_power(g, i).scale(alpha ** (n - 1 - i))
    if alpha ** n == c:
        assert geo and x * geo == algebra.zero
        return InversionResult(
            "not-unit", None, "geometric-sum",
            f"alpha^{n} equals the power scalar, and the geometric sum is "
            f"a nonzero annihilator of u_g - alpha")
    y = geo.scale((c - alpha ** n).inv())
    return _verified_unit(algebra, x, y, "geometric-sum",
                          "geometric sum against the power scalar")


def unit_conjugate(algebra, x, u, u_inv=None):
    if u_inv is None:
        res = try_invert(algebra, u)
        if not res.is_unit:
            raise NotUnitError(f"cannot conjugate by a non-unit: {res.certificate}")
        u_inv = res.inverse
    return u_inv * x * u


def unit_commutator(algebra, x, y, x_inv=None, y_inv=None):
    if x_inv is None:
        res = try_invert(algebra, x)
        if not res.is_unit:
            raise NotUnitError(f"x is not a unit: {res.certificate}")
        x_inv = res.inverse
    if y_inv is None:
        res = try_invert(algebra, y)
        if not res.is_unit:
            raise NotUnitError(f"y is not a unit: {res.certificate}")
        y_inv = res.inverse
    return x_inv * y_inv * x * y


# --- subgroup-local helpers -----------------------------------------------------


def left_regular_matrix(algebra, subgroup, x):
    """Matrix of y -> x * y on the basis units of a finite subgroup."""
    for g in x.terms:
        if g not in subgroup:
            raise SupportNotInSubgroup(f"{g!r} lies outside the subgroup")
    n = len(subgroup)
    field = algebra.field
    M = [[field.zero] * n for _ in range(n)]
    lam = algebra.cocycle
    for g, cg in x.terms.items():
        for j, w in enumerate(subgroup.elements):
            gw = algebra.group.mul(g, w)
            i = subgroup.index_of[gw]
            M[i][j] = M[i][j] + cg * lam(g, w)
    return M


def is_nilpotent_in(algebra, subgroup, x):
    """Nilpotency of x inside the span of a finite subgroup's units.

    The subalgebra has dimension |W|, so x is nilpotent exactly when
    x^(2^k) = 0 for the first 2^k >= |W|.
    """
    for g in x.terms:
        if g not in subgroup:
            raise SupportNotInSubgroup(f"{g!r} lies outside the subgroup")
    d = len(subgroup)
    y = x
    e = 1
    while e < d:
        if not y:
            return True
        y = y * y
        e *= 2
    return not y


def averaging_idempotent(algebra, elements, weights=None):
    """(1/|H|) sum of weighted units over a finite subgroup H.

    Raises CharacteristicDividesOrder when |H| is not invertible in K and
    ConditionsNotMet when the weighted average fails to be idempotent
    (weights must make the twisted units multiplicative on H).
    """
    n = len(elements)
    try:
        inv_n = algebra.field.from_int(n).inv()
    except DivisionByZero:
        raise CharacteristicDividesOrder(
            f"|H| = {n} vanishes in characteristic "
            f"{algebra.field.characteristic}")
    if weights is None:
        weights = {h: algebra.field.one for h in elements}
    x = algebra.element([(h, weights[h] * inv_n) for h in elements])
    if not x.is_idempotent():
        raise ConditionsNotMet(
            "the weighted average over H is not idempotent")
    return x


def prufer_idempotent_chain(algebra, levels):
    """Averaging idempotents e_j over the level-j cyclic subgroups of the
    Pruefer part; e_j e_{j+1} = e_{j+1} = e_{j+1} e_j."""
    group = algebra.group
    if group.prufer is None:
        raise ConditionsNotMet("the group has no Pruefer component")
    q, max_levels = group.prufer
    if algebra.field.characteristic == q:
        raise CharacteristicEqualsQ(
            f"char K = {q} kills the averaging denominators")
    chain = []
    for j in range(1, min(levels, max_levels) + 1):
        den = q ** j
        els = [group.element((0,) * group.rank, None, Fraction(k, den))
               for k in range(den)]
        chain.append(averaging_idempotent(algebra, els))
    return chain
