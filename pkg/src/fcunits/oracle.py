"""Exhaustive cross-checking oracle for finite twisted group algebras.

This module deliberately reimplements everything above the scalar layer:
its own group law straight from the instance JSON, its own cocycle table,
dense vector arithmetic, a Gaussian-elimination unit test, and radical
and idempotent counts by enumeration.  It shares only ``fields`` with the
rest of the package, so agreement between an oracle report and the
structural modules is meaningful cross-validation rather than the same
code agreeing with itself.

Everything here is exponential in the algebra dimension and guarded by
ORACLE_SIZE_CAP.  The target is small finite instances used as anchors,
not production analysis.
"""

import itertools
from dataclasses import dataclass

from .errors import CapExceeded, InstanceFormatError, InvalidCocycle
from .fields import make_field

ORACLE_SIZE_CAP = 10 ** 7


# --- an independent finite group law ---------------------------------------------


class _EnumeratedGroup:
    """Finite group as an indexed multiplication table built from JSON."""

    def __init__(self, size, mul_index, identity_index, labels):
        self.size = size
        self.mul_index = mul_index
        self.identity = identity_index
        self.labels = labels

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InstanceFormatError("group spec must be an object with "
                                      "a 'kind'")
        kind = obj["kind"]
        if kind == "cayley":
            table = obj.get("table")
            if not isinstance(table, list) or not table:
                raise InstanceFormatError("cayley group needs a 'table'")
            n = len(table)
            for row in table:
                if len(row) != n or any(not 0 <= v < n for v in row):
                    raise InstanceFormatError("cayley table is not square "
                                              "over 0..n-1")
            identity = next(e for e in range(n)
                            if all(table[e][x] == x and table[x][e] == x
                                   for x in range(n)))
            return cls(n, [list(r) for r in table], identity,
                       [str(i) for i in range(n)])
        if kind != "central-extension":
            raise InstanceFormatError(f"unknown group kind {kind!r}")
        if obj.get("rank", 0) != 0:
            raise CapExceeded("the exhaustive oracle needs a finite group "
                              "(rank 0)")
        if obj.get("prufer") is not None:
            raise CapExceeded("the exhaustive oracle needs a finite group "
                              "(no Pruefer component)")
        torsion = obj.get("torsion", {})
        if "table" in torsion:
            return cls.from_json({"kind": "cayley",
                                  "table": torsion["table"]})
        invariants = torsion.get("invariants")
        if invariants is None:
            raise InstanceFormatError("torsion needs 'invariants' or "
                                      "'table'")
        invariants = [int(d) for d in invariants]
        if any(d < 2 for d in invariants):
            raise InstanceFormatError("torsion invariants must be >= 2")
        keys = list(itertools.product(*[range(d) for d in invariants]))
        index = {k: i for i, k in enumerate(keys)}
        n = len(keys)
        mul = [[index[tuple((a + b) % d for a, b, d
                            in zip(keys[i], keys[j], invariants))]
                for j in range(n)] for i in range(n)]
        return cls(n, mul, index[tuple(0 for _ in invariants)],
                   ["*".join(f"t{p + 1}^{e}" for p, e in enumerate(k) if e)
                    or "1" for k in keys])

    def inverse(self, i):
        return next(j for j in range(self.size)
                    if self.mul_index[i][j] == self.identity)


def _cocycle_matrix(obj, group, field):
    """Dense n x n scalar table from the cocycle JSON, identity-checked."""
    if obj is None:
        obj = {}
    if not isinstance(obj, dict):
        raise InstanceFormatError("cocycle spec must be an object")
    n = group.size
    one = field.one
    lam = [[one] * n for _ in range(n)]
    for key, raw in obj.get("torsion_table", {}).items():
        parts = key.strip().lstrip("(").rstrip(")").split(",")
        if len(parts) != 2:
            raise InstanceFormatError(f"bad torsion table key {key!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < n and 0 <= j < n):
            raise InstanceFormatError(f"torsion table index ({i}, {j}) "
                                      f"out of range")
        val = field.scalar(field.value_from_json(raw))
        if not val:
            raise InvalidCocycle(f"cocycle value at ({i}, {j}) is zero")
        lam[i][j] = val
    # a rank-0 instance never evaluates the bilinear part, so an explicit
    # one must be trivial to be meaningful here
    bil = obj.get("bilinear")
    if bil and any(any(row) for row in bil.get("matrix", [])):
        raise InstanceFormatError("the oracle handles finite groups only, "
                                  "where a bilinear part has no effect")
    e = group.identity
    for i in range(n):
        if lam[e][i] != one or lam[i][e] != one:
            raise InvalidCocycle("cocycle is not normalized on the identity")
    mul = group.mul_index
    for g in range(n):
        for h in range(n):
            gh = mul[g][h]
            for k in range(n):
                if lam[g][h] * lam[gh][k] != lam[h][k] * lam[g][mul[h][k]]:
                    raise InvalidCocycle(
                        f"cocycle identity fails at indices ({g}, {h}, {k})")
    return lam


# --- dense arithmetic --------------------------------------------------------------


class _DenseAlgebra:
    """Vectors of scalars indexed by group position, multiplied densely."""

    def __init__(self, group, field, lam):
        self.group = group
        self.field = field
        self.lam = lam
        self.dim = group.size

    def zero(self):
        return [self.field.zero] * self.dim

    def one(self):
        vec = self.zero()
        vec[self.group.identity] = self.field.one
        return vec

    def mul(self, a, b):
        out = self.zero()
        mul = self.group.mul_index
        for i, ai in enumerate(a):
            if not ai:
                continue
            row_idx, row_lam = mul[i], self.lam[i]
            for j, bj in enumerate(b):
                if bj:
                    k = row_idx[j]
                    out[k] = out[k] + ai * bj * row_lam[j]
        return out

    def is_zero(self, a):
        return not any(a)

    def is_nilpotent(self, a):
        """a^(2^steps) by repeated squaring, with 2^steps >= dim; the
        nilpotency index never exceeds the dimension."""
        power = list(a)
        steps = max(1, (self.dim - 1).bit_length())
        for _ in range(steps):
            if self.is_zero(power):
                return True
            power = self.mul(power, power)
        return self.is_zero(power)

    def is_commutative(self):
        units = []
        for i in range(self.dim):
            vec = self.zero()
            vec[i] = self.field.one
            units.append(vec)
        return all(self.mul(units[i], units[j]) == self.mul(units[j],
                                                            units[i])
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def left_multiplication_matrix(self, a):
        cols = []
        for j in range(self.dim):
            basis = self.zero()
            basis[j] = self.field.one
            cols.append(self.mul(a, basis))
        return [[cols[j][i] for j in range(self.dim)]
                for i in range(self.dim)]

    def is_unit(self, a):
        return _gaussian_invertible(self.left_multiplication_matrix(a),
                                    self.field)


def _gaussian_invertible(matrix, field):
    """Row reduction over the exact field; True iff full rank."""
    n = len(matrix)
    rows = [list(r) for r in matrix]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return False
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inv()
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y
                           for x, y in zip(rows[r], rows[col])]
    return True


# --- the exhaustive sweep ----------------------------------------------------------


@dataclass
class OracleReport:
    dimension: int
    field_size: int
    algebra_size: int
    commutative: bool
    unit_count: int
    idempotent_count: int
    nilpotent_count: int
    radical_dimension: int

    def to_json(self):
        return {"dimension": self.dimension,
                "field_size": self.field_size,
                "algebra_size": self.algebra_size,
                "commutative": self.commutative,
                "unit_count": self.unit_count,
                "idempotent_count": self.idempotent_count,
                "nilpotent_count": self.nilpotent_count,
                "radical_dimension": self.radical_dimension}


def _exact_log(value, base):
    d = 0
    while base ** d < value:
        d += 1
    if base ** d != value:
        raise AssertionError(
            f"{value} is not a power of {base}: the nilpotent set is not "
            f"a subspace, which contradicts the radical computation")
    return d


def oracle_report(instance_json):
    """Sweep every element of a finite K_lambda G and count everything.

    Counts units (Gaussian rank test on the left multiplication matrix),
    idempotents, and nilpotents, and derives the radical from the
    nilpotent set: directly for commutative algebras, and through the
    largest-nil-ideal filter {x : x * y nilpotent for all y} otherwise.
    """
    if not isinstance(instance_json, dict):
        raise InstanceFormatError("instance must be a JSON object")
    for key in ("field", "group", "cocycle"):
        if key not in instance_json:
            raise InstanceFormatError(f"instance is missing {key!r}")
    field = make_field(instance_json["field"])
    if not field.is_finite():
        raise CapExceeded("the exhaustive oracle needs a finite field")
    group = _EnumeratedGroup.from_json(instance_json["group"])
    q = field.size()
    total = q ** group.size
    if total > ORACLE_SIZE_CAP:
        raise CapExceeded(
            f"algebra has {total} elements, above the oracle cap "
            f"{ORACLE_SIZE_CAP}")
    lam = _cocycle_matrix(instance_json["cocycle"], group, field)
    algebra = _DenseAlgebra(group, field, lam)

    commutative = algebra.is_commutative()
    units = 0
    idempotents = 0
    nilpotents = []
    for combo in itertools.product(field.elements(), repeat=algebra.dim):
        vec = list(combo)
        if algebra.mul(vec, vec) == vec:
            idempotents += 1
        if algebra.is_nilpotent(vec):
            nilpotents.append(vec)
        elif algebra.is_unit(vec):
            units += 1

    if commutative:
        radical = nilpotents
    else:
        # the largest nil ideal: x with the whole right translate x*A nil
        radical = [x for x in nilpotents
                   if all(algebra.is_nilpotent(algebra.mul(x, list(y)))
                          for y in itertools.product(
                              field.elements(), repeat=algebra.dim))]
    radical_dim = _exact_log(len(radical), q)

    return OracleReport(
        dimension=algebra.dim, field_size=q, algebra_size=total,
        commutative=commutative, unit_count=units,
        idempotent_count=idempotents, nilpotent_count=len(nilpotents),
        radical_dimension=radical_dim)


def predicted_unit_count(field_size, radical_dimension, component_dims):
    """|U| from structure data: |K|^dim J * prod(|K|^dim F_i - 1)."""
    total = field_size ** radical_dimension
    for d in component_dims:
        total *= field_size ** d - 1
    return total
