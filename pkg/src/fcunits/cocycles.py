"""Two-cocycles on the supported groups, with trivial action.

A cocycle in the representable family is a product of two parts:

* a dense table tau on the finite torsion coordinate (Pruefer coordinates
  contribute trivially; twisting along them is out of scope), and
* a bilinear part zeta^(u^T N v) on the free coordinates, N strictly upper
  triangular over the integers, zeta a nonzero scalar.

Cross terms between free and torsion coordinates are identically 1.  The
cocycle identity lambda(g,h) lambda(gh,k) = lambda(h,k) lambda(g,hk) is
checked by `validate_cocycle` over a box of free coordinates and the whole
torsion part.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConditionsNotMet,
    FieldMismatch,
    InfiniteOrder,
    InstanceFormatError,
    ZeroValue,
)


class Cocycle:
    def __init__(self, group, field, torsion_table=None, zeta=None, matrix=None):
        self.group = group
        self.field = field
        r = group.rank
        size = group.torsion.size
        table = {}
        if torsion_table:
            for (i, j), val in torsion_table.items():
                if not (0 <= i < size and 0 <= j < size):
                    raise InstanceFormatError(
                        f"torsion table index ({i}, {j}) out of range")
                if val.field != field:
                    raise FieldMismatch("torsion table scalar field mismatch")
                if not val:
                    raise ZeroValue(f"cocycle value at ({i}, {j}) is zero")
                if val != field.one:
                    table[(i, j)] = val
        self.torsion_table = table
        if zeta is None:
            zeta = field.one
        if zeta.field != field:
            raise FieldMismatch("zeta field mismatch")
        if not zeta:
            raise ZeroValue("zeta must be nonzero")
        self.zeta = zeta
        if matrix is None:
            matrix = tuple(tuple(0 for _ in range(r)) for _ in range(r))
        else:
            matrix = tuple(tuple(int(x) for x in row) for row in matrix)
            if len(matrix) != r or any(len(row) != r for row in matrix):
                raise InstanceFormatError("bilinear matrix must be rank x rank")
            for i in range(r):
                for j in range(r):
                    if j <= i and matrix[i][j] != 0:
                        raise InstanceFormatError(
                            "bilinear matrix must be strictly upper triangular")
        self.matrix = matrix
        self._zeta_powers = {0: field.one, 1: zeta}

    def _tau_idx(self, i, j):
        return self.torsion_table.get((i, j), self.field.one)

    def tau(self, akey, bkey):
        tor = self.group.torsion
        return self._tau_idx(tor.index(akey), tor.index(bkey))

    def _bilinear_exponent(self, u, v):
        total = 0
        for i, row in enumerate(self.matrix):
            if u[i]:
                for j in range(i + 1, len(row)):
                    if row[j] and v[j]:
                        total += row[j] * u[i] * v[j]
        return total

    def _zeta_pow(self, e):
        cached = self._zeta_powers.get(e)
        if cached is None:
            cached = self.zeta ** e
            self._zeta_powers[e] = cached
        return cached

    def __call__(self, g, h):
        self.group._check(g, h)
        val = self.tau(g.t, h.t)
        if self.group.rank:
            e = self._bilinear_exponent(g.u, h.u)
            if e:
                val = val * self._zeta_pow(e)
        return val

    @property
    def is_normalized(self):
        """lambda(1, g) = lambda(g, 1) = 1, i.e. identity row/column trivial."""
        one = self.field.one
        for i in range(self.group.torsion.size):
            if self._tau_idx(0, i) != one or self._tau_idx(i, 0) != one:
                return False
        return True

    def to_json(self):
        obj = {}
        table = {}
        one = self.field.one
        for (i, j), val in sorted(self.torsion_table.items()):
            if val != one:
                table[f"({i},{j})"] = val.to_json()
        if table:
            obj["torsion_table"] = table
        if self.zeta != one or any(any(row) for row in self.matrix):
            obj["bilinear"] = {"zeta": self.zeta.to_json(),
                               "matrix": [list(r) for r in self.matrix]}
        return obj


def trivial_cocycle(group, field):
    return Cocycle(group, field)


def cocycle_from_json(group, field, obj):
    if obj is None:
        obj = {}
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"cocycle spec must be an object: {obj!r}")
    table = {}
    for key, raw in obj.get("torsion_table", {}).items():
        parts = key.strip().lstrip("(").rstrip(")").split(",")
        if len(parts) != 2:
            raise InstanceFormatError(f"bad torsion table key {key!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InstanceFormatError(f"bad torsion table key {key!r}") from exc
        table[(i, j)] = field.scalar(field.value_from_json(raw))
    zeta = None
    matrix = None
    if "bilinear" in obj and obj["bilinear"] is not None:
        bil = obj["bilinear"]
        if not isinstance(bil, dict) or "matrix" not in bil:
            raise InstanceFormatError("bilinear part needs a 'matrix'")
        matrix = bil["matrix"]
        if "zeta" in bil:
            zeta = field.scalar(field.value_from_json(bil["zeta"]))
    return Cocycle(group, field, table, zeta, matrix)


# --- validation ---------------------------------------------------------------


@dataclass
class CounterexampleTriple:
    g: object
    h: object
    k: object
    lhs: object
    rhs: object

    def describe(self):
        return (f"lambda(g,h) lambda(gh,k) = {self.lhs!r} but "
                f"lambda(h,k) lambda(g,hk) = {self.rhs!r} at "
                f"g={self.g!r}, h={self.h!r}, k={self.k!r}")


@dataclass
class ValidationResult:
    valid: bool
    counterexample: CounterexampleTriple | None = None
    checked_pairs: int = 0


def free_box(group, radius):
    if group.rank == 0:
        return [()]
    return list(itertools.product(range(-radius, radius + 1),
                                  repeat=group.rank))


def generator_box(group, radius):
    """Elements with free coordinates in [-radius, radius]^r, any finite
    torsion coordinate, Pruefer coordinate zero."""
    return [group.element(u, t)
            for u in free_box(group, radius)
            for t in group.torsion.keys()]


def validate_cocycle(group, cocycle, box_radius=3):
    """Check the cocycle identity over the generator box.

    Completeness of the reduction used here: over the box, the identity ratio
    for the triple (g, h, k) depends only on the torsion coordinates and the
    two pairing offsets beta(u_g, u_h) and beta(u_h, u_k), because the
    bilinear part cancels identically, a degree-2 polynomial identity
    B(u,v) + B(u+v,w) - B(v,w) - B(u,v+w) = 0 that holds for every bilinear
    form B (the code asserts it for every witness triple it uses rather than
    assuming it).  The validator therefore enumerates the achievable offset
    pairs with free-coordinate witnesses, sharing the middle coordinate so
    joint achievability is exact, and then checks every torsion triple
    against every achievable pair.  This checks exactly the same set of
    identities as brute-force enumeration of the box, at a fraction of the
    cost; counterexamples are reconstructed from the stored witnesses and
    re-verified by direct evaluation before being returned.
    """
    tor = group.torsion
    zero_u = (0,) * group.rank
    if group.rank == 0 or group.pairing_matrix is None:
        pairs = {(0, 0): (zero_u, zero_u, zero_u)}
    else:
        L = tor.order_key(tor.normalize(group.pairing_target))
        box = free_box(group, box_radius)
        pairs = {}
        for v in box:
            c1_wit = {}
            c2_wit = {}
            for u in box:
                c1_wit.setdefault(group._beta(u, v) % L, u)
                c2_wit.setdefault(group._beta(v, u) % L, u)
            for c1, uw in c1_wit.items():
                for c2, ww in c2_wit.items():
                    pairs.setdefault((c1, c2), (uw, v, ww))

    def bilin(u, v):
        return cocycle._bilinear_exponent(u, v)

    def vec_add(u, v):
        return tuple(x + y for x, y in zip(u, v))

    checked = 0
    keys = list(tor.keys())
    for (c1, c2), (uw, vw, ww) in pairs.items():
        # the degree-2 cancellation the reduction relies on, asserted
        assert (bilin(uw, vw) + bilin(vec_add(uw, vw), ww)
                - bilin(vw, ww) - bilin(uw, vec_add(vw, ww))) == 0
        shift1 = group._target_multiple(c1)
        shift2 = group._target_multiple(c2)
        for x in keys:
            for y in keys:
                txy = cocycle._tau_idx(tor.index(x), tor.index(y))
                xy = tor.mul_key(tor.mul_key(x, y), shift1)
                for z in keys:
                    checked += 1
                    lhs = txy * cocycle._tau_idx(tor.index(xy), tor.index(z))
                    yz = tor.mul_key(tor.mul_key(y, z), shift2)
                    rhs = (cocycle._tau_idx(tor.index(y), tor.index(z))
                           * cocycle._tau_idx(tor.index(x), tor.index(yz)))
                    if lhs != rhs:
                        g = group.element(uw, x)
                        h = group.element(vw, y)
                        k = group.element(ww, z)
                        direct_lhs = cocycle(g, h) * cocycle(group.mul(g, h), k)
                        direct_rhs = cocycle(h, k) * cocycle(g, group.mul(h, k))
                        assert direct_lhs != direct_rhs
                        return ValidationResult(
                            False,
                            CounterexampleTriple(g, h, k, direct_lhs,
                                                 direct_rhs),
                            checked)
    return ValidationResult(True, None, checked)


# --- coboundaries ----------------------------------------------------------------


def coboundary(group, field, mu_torsion, mu_free=None):
    """The coboundary cocycle (g, h) -> mu_g mu_h mu_{gh}^(-1).

    mu_torsion lists one nonzero scalar per finite torsion element, indexed
    like the torsion table.  mu_free gives one nonzero scalar per free
    generator; those values cancel identically in the coboundary (the free
    part of mu is multiplicative on the u-coordinates) and are only
    validated.  The result is normalized by dividing mu through by its value
    at the identity, which replaces the coboundary by the cohomologous
    normalized representative.

    For groups with a nonzero pairing, the coboundary stays inside the
    representable family (torsion table x bilinear, trivial cross terms)
    only when mu is constant along shifts by the pairing image; otherwise
    the true coboundary has nontrivial cross terms and this raises
    ConditionsNotMet.
    """
    size = group.torsion.size
    if len(mu_torsion) != size:
        raise InstanceFormatError(
            f"mu needs {size} torsion values, got {len(mu_torsion)}")
    for val in mu_torsion:
        if val.field != field:
            raise FieldMismatch("mu scalar field mismatch")
        if not val:
            raise ZeroValue("coboundary data must be nonzero scalars")
    if mu_free is not None:
        for val in mu_free:
            if not val:
                raise ZeroValue("coboundary data must be nonzero scalars")
    base = mu_torsion[0]
    mu = [val / base for val in mu_torsion]
    tor = group.torsion
    if group.pairing_matrix is not None:
        entries = [group.pairing_matrix[i][j]
                   for i in range(group.rank) for j in range(i + 1, group.rank)
                   if group.pairing_matrix[i][j]]
        content = math.gcd(*entries) if entries else 0
        if content:
            shift = group._target_multiple(content)
            for key in tor.keys():
                shifted = tor.mul_key(key, shift)
                if mu[tor.index(key)] != mu[tor.index(shifted)]:
                    raise ConditionsNotMet(
                        "mu is not constant along the pairing image, so its "
                        "coboundary leaves the representable cocycle family")
    table = {}
    for a in tor.keys():
        ia = tor.index(a)
        for b in tor.keys():
            ib = tor.index(b)
            iab = tor.index(tor.mul_key(a, b))
            table[(ia, ib)] = mu[ia] * mu[ib] * mu[iab].inv()
    result = Cocycle(group, field, table)
    check = validate_cocycle(group, result, box_radius=1)
    assert check.valid, "a coboundary must satisfy the cocycle identity"
    return result


# --- derived scalar data -----------------------------------------------------------


def power_scalar(cocycle, g):
    """The scalar lambda_g with u_g^n = lambda_g * u_{g^n} for n = order(g)."""
    group = cocycle.group
    n = group.element_order(g)
    if n == math.inf:
        raise InfiniteOrder("power scalar needs a torsion element")
    acc = cocycle.field.one
    p = g
    for _ in range(n - 1):
        acc = acc * cocycle(g, p)
        p = group.mul(g, p)
    return acc


def commutator_scalar(cocycle, a, b):
    """Scalar c with [u_a, u_b] = c * u_{[a,b]} (basis unit commutator).

    Five cocycle factors: the two inverse normalizations and the three
    products in a^-1 b^-1 a b.
    """
    group = cocycle.group
    ai = group.inv(a)
    bi = group.inv(b)
    val = cocycle(ai, a).inv() * cocycle(bi, b).inv()
    val = val * cocycle(ai, bi)
    ab = group.mul(ai, bi)
    val = val * cocycle(ab, a)
    val = val * cocycle(group.mul(ab, a), b)
    return val


@dataclass
class ScalarOrbit:
    """The condition-4 value set {lambda(h,h^-1)^-1 lambda(h^-1,g)
    lambda(h^-1 g, h)} with h over the (truncated) torsion part."""
    g: object
    values: frozenset
    cardinality: int
    truncated: bool

    def sorted_values(self):
        return sorted(self.values, key=lambda s: s.sort_key())


def condition4_set(cocycle, g, prufer_level=None):
    group = cocycle.group
    values = set()
    for h in group.torsion_elements(prufer_level):
        hi = group.inv(h)
        val = cocycle(h, hi).inv() * cocycle(hi, g)
        val = val * cocycle(group.mul(hi, g), h)
        values.add(val)
    return ScalarOrbit(g, frozenset(values), len(values),
                       truncated=group.prufer is not None)


def is_symmetric_on_torsion(cocycle, box_radius=3):
    """Check lambda(g, h) = lambda(h, g) for torsion h and g in the box.

    Pruefer coordinates never enter the cocycle's value, so ranging h over
    the finite torsion coordinate is exhaustive for the whole torsion part.
    """
    group = cocycle.group
    torsion = group.torsion_elements(prufer_level=0)
    for g in generator_box(group, box_radius):
        for h in torsion:
            if cocycle(g, h) != cocycle(h, g):
                return False, (g, h, cocycle(g, h), cocycle(h, g))
    return True, None
