"""Structure theory for finite-dimensional slices of the twisted algebra.

The twisted group algebra itself is usually infinite-dimensional; every
structural question this module answers (radical, semisimplicity, primitive
idempotents, sum-of-fields certificates) is asked of a finite-dimensional
algebra: the span of the basis units of a finite subgroup, or a quotient or
corner of one.  Those are carried around as `FDAlgebra` objects, plain
structure-constant algebras over one of the scalar fields.

Radical computation picks its method by field and shape:

* characteristic 0: the kernel of the trace bilinear form (exact there);
* characteristic p, commutative: the kernel of the iterated Frobenius map
  x -> x^(p^m) with p^m >= dim, a semilinear map whose kernel is found by
  linear algebra in Frobenius-twisted coordinates;
* characteristic p, noncommutative: the descending chain that refines the
  trace-form kernel by the characteristic-polynomial coefficient forms
  c_{p^i}(L_{xy}).  Plain traces of p-th matrix powers carry no new
  information in characteristic p (Tr(M^p) = Tr(M)^p), which is why the
  coefficient forms are needed.

Whatever the method, the result is certified before being returned: the
span is checked to be a two-sided ideal, nilpotent by explicit powering,
missing the identity, and the quotient algebra is checked to have zero
radical by a rerun on the quotient.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from . import linalg
from .errors import (
    ConditionsNotMet,
    DimensionTooLarge,
    IdealNotNilpotent,
    NotCommutative,
    TooLargeToCount,
)
from .fields import is_prime

RADICAL_NONCOMMUTATIVE_DIM_CAP = 32
IDEMPOTENT_COUNT_CAP = 100_000
SPLITTER_ATTEMPTS = 500


class FDAlgebra:
    """Associative unital algebra by sparse structure constants.

    `table[(i, j)]` maps basis index pairs to {k: scalar} dictionaries with
    e_i e_j = sum_k scalar * e_k; absent pairs multiply to zero.  `labels`
    name the basis vectors in diagnostics.
    """

    def __init__(self, field, dim, table, one, labels=None):
        self.field = field
        self.dim = dim
        self.table = table
        self.one = list(one)
        self.labels = labels or [f"b{i}" for i in range(dim)]
        self._trace_vector = None

    def zero_vec(self):
        return [self.field.zero] * self.dim

    def basis_vec(self, i):
        v = self.zero_vec()
        v[i] = self.field.one
        return v

    def add(self, x, y):
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y):
        return [a - b for a, b in zip(x, y)]

    def scale(self, x, c):
        return [a * c for a in x]

    def mul(self, x, y):
        out = self.zero_vec()
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                cell = self.table.get((i, j))
                if not cell:
                    continue
                c = xi * yj
                for k, s in cell.items():
                    out[k] = out[k] + c * s
        return out

    def power(self, x, n):
        result = list(self.one)
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def is_zero(self, x):
        return not any(x)

    def is_idempotent(self, x):
        return self.mul(x, x) == x

    def left_mult_matrix(self, x):
        cols = [self.mul(x, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def trace_vector(self):
        """tr[i] = trace of left multiplication by basis vector i."""
        if self._trace_vector is None:
            tr = []
            for i in range(self.dim):
                acc = self.field.zero
                for j in range(self.dim):
                    cell = self.table.get((i, j))
                    if cell and j in cell:
                        acc = acc + cell[j]
                tr.append(acc)
            self._trace_vector = tr
        return self._trace_vector

    def trace_of_left_mult(self, x):
        acc = self.field.zero
        for xi, t in zip(x, self.trace_vector()):
            if xi and t:
                acc = acc + xi * t
        return acc

    def is_commutative(self):
        for i in range(self.dim):
            bi = self.basis_vec(i)
            for j in range(i + 1, self.dim):
                bj = self.basis_vec(j)
                if self.mul(bi, bj) != self.mul(bj, bi):
                    return False, (self.labels[i], self.labels[j])
        return True, None

    def element_repr(self, vec):
        bits = [f"{c.value!r}*{lbl}" for c, lbl in zip(vec, self.labels) if c]
        return " + ".join(bits) if bits else "0"


def subalgebra_from_units(algebra, subgroup):
    """The span of the basis units of a finite subgroup, as an FDAlgebra
    plus maps to and from the ambient twisted algebra."""
    return FiniteSubalgebra(algebra, subgroup)


class FiniteSubalgebra:
    def __init__(self, algebra, subgroup):
        self.algebra = algebra
        self.subgroup = subgroup
        n = len(subgroup)
        field = algebra.field
        table = {}
        for i, g in enumerate(subgroup.elements):
            for j, h in enumerate(subgroup.elements):
                gh = algebra.group.mul(g, h)
                table[(i, j)] = {subgroup.index_of[gh]: algebra.cocycle(g, h)}
        one = [field.zero] * n
        one[subgroup.index_of[algebra.group.identity]] = field.one
        labels = [f"u[{g!r}]" for g in subgroup.elements]
        self.fd = FDAlgebra(field, n, table, one, labels)

    def to_ambient(self, vec):
        return self.algebra.element(
            [(g, c) for g, c in zip(self.subgroup.elements, vec) if c])

    def from_ambient(self, el):
        vec = self.fd.zero_vec()
        for g, c in el.terms.items():
            vec[self.subgroup.index_of[g]] = c
        return vec


# --- spans and ideals --------------------------------------------------------


def span_of(fd, vectors):
    S = linalg.SpanBasis(fd.field, fd.dim)
    for v in vectors:
        S.add(v)
    return S


def ideal_closure(fd, generators):
    """Basis of the two-sided ideal generated by the vectors."""
    S = linalg.SpanBasis(fd.field, fd.dim)
    frontier = [v for v in generators if S.add(v)]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(fd.dim):
                b = fd.basis_vec(i)
                for w in (fd.mul(b, v), fd.mul(v, b)):
                    if S.add(w):
                        nxt.append(w)
        frontier = nxt
    return [list(r) for r in S.inserted]


def _is_ideal(fd, span):
    S = span_of(fd, span)
    for v in span:
        for i in range(fd.dim):
            b = fd.basis_vec(i)
            if not S.contains(fd.mul(b, v)) or not S.contains(fd.mul(v, b)):
                return False
    return True


def ideal_nilpotency_index(fd, span):
    """Least k with span^k = 0; raises IdealNotNilpotent if the powers of
    the span stop shrinking before they vanish."""
    current = [v for v in span if not fd.is_zero(v)]
    k = 1
    prev_dim = span_of(fd, current).dim
    while current:
        products = [fd.mul(a, b) for a in current for b in span]
        S = span_of(fd, products)
        if 0 < S.dim and S.dim >= prev_dim:
            raise IdealNotNilpotent(
                f"span powers stopped shrinking at dimension {S.dim}")
        prev_dim = S.dim
        current = [list(r) for r in S.inserted]
        k += 1
    return k


# --- quotients and corners ---------------------------------------------------


@dataclass
class QuotientAlgebra:
    fd: FDAlgebra
    ideal_basis: list
    reps: list                     # lifts of the quotient basis, parent vecs
    _span: object = dc_field(default=None, repr=False)

    def project(self, vec):
        coords = self._span.coordinates(vec)
        assert coords is not None, "ideal plus representatives must span"
        return coords[len(self.ideal_basis):]

    def lift(self, qvec):
        out = None
        for c, rep in zip(qvec, self.reps):
            term = [c * x for x in rep]
            out = term if out is None else [a + t for a, t in zip(out, term)]
        if out is None:
            out = [self.fd.field.zero] * len(self.ideal_basis[0])
        return out


def quotient_algebra(fd, ideal_span):
    """A / I for a two-sided ideal given by a spanning list."""
    S = linalg.SpanBasis(fd.field, fd.dim)
    ideal_basis = [list(v) for v in ideal_span if S.add(v)]
    reps = [fd.basis_vec(i) for i in range(fd.dim) if S.add(fd.basis_vec(i))]
    holder = QuotientAlgebra(None, ideal_basis, reps, S)
    table = {}
    for i, ri in enumerate(reps):
        for j, rj in enumerate(reps):
            prod = holder.project(fd.mul(ri, rj))
            cell = {k: c for k, c in enumerate(prod) if c}
            if cell:
                table[(i, j)] = cell
    holder.fd = FDAlgebra(fd.field, len(reps), table, holder.project(fd.one))
    return holder


@dataclass
class CornerAlgebra:
    fd: FDAlgebra
    basis: list                    # corner basis as parent vectors
    idempotent: list
    _span: object = dc_field(default=None, repr=False)

    def embed(self, cvec):
        out = None
        for c, b in zip(cvec, self.basis):
            term = [c * x for x in b]
            out = term if out is None else [a + t for a, t in zip(out, term)]
        assert out is not None
        return out

    def restrict(self, vec):
        return self._span.coordinates(vec)


def corner_algebra(fd, e):
    """The corner e A e with identity e."""
    S = linalg.SpanBasis(fd.field, fd.dim)
    basis = []
    for i in range(fd.dim):
        v = fd.mul(e, fd.mul(fd.basis_vec(i), e))
        if S.add(v):
            basis.append(v)
    corner = CornerAlgebra(None, basis, e, S)
    table = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            coords = S.coordinates(fd.mul(bi, bj))
            assert coords is not None, "corner must be closed under products"
            cell = {k: c for k, c in enumerate(coords) if c}
            if cell:
                table[(i, j)] = cell
    one = S.coordinates(e)
    assert one is not None
    corner.fd = FDAlgebra(fd.field, len(basis), table, one)
    return corner


# --- minimal and characteristic polynomials ----------------------------------


def minimal_polynomial(fd, x):
    """Monic minimal polynomial of x, constant-first coefficient list."""
    S = linalg.SpanBasis(fd.field, fd.dim)
    p = list(fd.one)
    while S.add(p):
        p = fd.mul(p, x)
    coords = S.coordinates(p)
    return [-c for c in coords] + [fd.field.one]


def poly_eval_fd(fd, coeffs, x):
    """Evaluate a scalar-coefficient polynomial at an algebra element."""
    result = fd.zero_vec()
    for c in reversed(coeffs):
        result = fd.mul(result, x)
        if c:
            result = fd.add(result, fd.scale(fd.one, c))
    return result


def characteristic_polynomial(fld, M):
    """char poly of a square matrix, constant-first, via Hessenberg form."""
    n = len(M)
    zero, one = fld.zero, fld.one
    H = [list(row) for row in M]
    for col in range(n - 2):
        piv = next((i for i in range(col + 1, n) if H[i][col]), None)
        if piv is None:
            continue
        if piv != col + 1:
            H[piv], H[col + 1] = H[col + 1], H[piv]
            for row in H:
                row[piv], row[col + 1] = row[col + 1], row[piv]
        for i in range(col + 2, n):
            if not H[i][col]:
                continue
            f = H[i][col] / H[col + 1][col]
            H[i] = [a - f * b for a, b in zip(H[i], H[col + 1])]
            for row in H:
                row[col + 1] = row[col + 1] + f * row[i]
    # char polys of leading principal minors of the Hessenberg form:
    # p_m = (t - H[m-1][m-1]) p_{m-1}
    #       - sum_k H[k-1][m-1] * (prod_{j=k}^{m-1} H[j][j-1]) * p_{k-1}
    polys = [[one]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [zero] + list(prev)
        h = H[m - 1][m - 1]
        if h:
            for k in range(len(prev)):
                cur[k] = cur[k] - h * prev[k]
        run = one
        for i in range(m - 1, 0, -1):
            run = run * H[i][i - 1]
            if not run:
                break
            coeff = run * H[i - 1][m - 1]
            if coeff:
                pi = polys[i - 1]
                for k in range(len(pi)):
                    cur[k] = cur[k] - coeff * pi[k]
        polys.append(cur)
    return polys[n]


# --- radical ------------------------------------------------------------------


@dataclass
class RadicalResult:
    basis: list
    method: str
    nilpotency_index: int
    certificate: dict


def _frobenius_pullback(field, vectors, twist_power):
    """Undo an eta = xi^(p^twist) substitution componentwise."""
    s = getattr(field, "degree", 1)
    e = (-twist_power) % s
    if e == 0:
        return vectors
    back = field.characteristic ** e
    return [[c ** back if c else c for c in vec] for vec in vectors]


def _semilinear_kernel(field, images, twist_power):
    """Solve sum_i xi_i^(p^t) * images[i] = 0.

    The underlying map is additive with a p^t Frobenius twist, so in
    eta = xi^(p^t) coordinates the system is plain linear; the kernel is
    pulled back through the inverse Frobenius, a field automorphism, so the
    solution set is an honest subspace.
    """
    if not images:
        return []
    rows = [[img[r] for img in images] for r in range(len(images[0]))]
    etas = linalg.kernel_basis(field, rows, len(images))
    return _frobenius_pullback(field, etas, twist_power)


def _radical_char0(fd):
    rows = []
    for i in range(fd.dim):
        bi = fd.basis_vec(i)
        rows.append([fd.trace_of_left_mult(fd.mul(bi, fd.basis_vec(j)))
                     for j in range(fd.dim)])
    return linalg.kernel_basis(fd.field, rows, fd.dim), "trace-form"


def _radical_commutative_char_p(fd):
    p = fd.field.characteristic
    m, pm = 0, 1
    while pm < fd.dim:
        pm *= p
        m += 1
    images = [fd.power(fd.basis_vec(i), pm) for i in range(fd.dim)]
    # the standard basis makes coefficient vectors and algebra vectors agree
    basis = _semilinear_kernel(fd.field, images, m)
    return basis, "frobenius-kernel"


def _radical_noncommutative_char_p(fd):
    if fd.dim > RADICAL_NONCOMMUTATIVE_DIM_CAP:
        raise DimensionTooLarge(
            f"noncommutative radical capped at dimension "
            f"{RADICAL_NONCOMMUTATIVE_DIM_CAP}, got {fd.dim}")
    p = fd.field.characteristic
    rows = []
    for i in range(fd.dim):
        bi = fd.basis_vec(i)
        rows.append([fd.trace_of_left_mult(fd.mul(bi, fd.basis_vec(j)))
                     for j in range(fd.dim)])
    chain = linalg.kernel_basis(fd.field, rows, fd.dim)
    i = 1
    while p ** i <= fd.dim and chain:
        col = fd.dim - p ** i
        images = []
        for x in chain:
            vals = []
            for y in chain:
                M = fd.left_mult_matrix(fd.mul(x, y))
                vals.append(characteristic_polynomial(fd.field, M)[col])
            images.append(vals)
        combos = _semilinear_kernel(fd.field, images, i)
        new_chain = []
        for xi in combos:
            vec = fd.zero_vec()
            for c, base in zip(xi, chain):
                if c:
                    vec = [a + c * b for a, b in zip(vec, base)]
            new_chain.append(vec)
        chain = new_chain
        i += 1
    return chain, "coefficient-chain"


def _radical_raw(fd):
    comm, _ = fd.is_commutative()
    if fd.field.characteristic == 0:
        basis, method = _radical_char0(fd)
    elif comm:
        basis, method = _radical_commutative_char_p(fd)
    else:
        basis, method = _radical_noncommutative_char_p(fd)
    return [v for v in basis if any(v)], method


def jacobson_radical(fd):
    """The Jacobson radical with a verified certificate.

    Whatever method produced the candidate span, the certificate check is
    the same: two-sided ideal, nilpotent by explicit powering, identity not
    inside, and a rerun on the quotient algebra comes back zero.
    """
    raw, method = _radical_raw(fd)
    S = span_of(fd, raw)
    basis = [list(r) for r in S.inserted]
    assert _is_ideal(fd, basis), "radical candidate is not an ideal"
    index = ideal_nilpotency_index(fd, basis)
    assert not S.contains(fd.one), "radical candidate contains the identity"
    if basis:
        Q = quotient_algebra(fd, basis)
        qraw, _ = _radical_raw(Q.fd)
        assert not qraw, "quotient still has a radical; candidate too small"
    certificate = {
        "two_sided_ideal": True,
        "nilpotency_index": index,
        "contains_identity": False,
        "quotient_radical_zero": True,
    }
    return RadicalResult(basis, method, index, certificate)


def is_semisimple(fd):
    return not jacobson_radical(fd).basis


# --- idempotents ---------------------------------------------------------------


def _nonscalar_vector(fd, vectors):
    one_span = linalg.SpanBasis(fd.field, fd.dim)
    one_span.add(list(fd.one))
    for v in vectors:
        if not one_span.contains(v):
            return v
    return None


def _roots_in_field(field, coeffs):
    roots = []
    for cand in field.elements():
        acc = field.zero
        for c in reversed(coeffs):
            acc = acc * cand + c
        if not acc:
            roots.append(cand)
    return roots


def _lagrange_idempotents(fd, b, roots):
    out = []
    for ci in roots:
        e = list(fd.one)
        for cj in roots:
            if cj == ci:
                continue
            factor = fd.sub(b, fd.scale(fd.one, cj))
            e = fd.mul(e, fd.scale(factor, (ci - cj).inv()))
        out.append(e)
    return out


def _primitive_idempotents_finite(fd):
    q = fd.field.size()
    images = [fd.sub(fd.power(fd.basis_vec(i), q), fd.basis_vec(i))
              for i in range(fd.dim)]
    fixed = _semilinear_kernel(fd.field, images, 0)
    b = _nonscalar_vector(fd, fixed)
    if b is None:
        return [list(fd.one)]
    m = minimal_polynomial(fd, b)
    roots = _roots_in_field(fd.field, m)
    assert len(roots) == len(m) - 1, "a q-fixed element splits over GF(q)"
    prims = []
    for e in _lagrange_idempotents(fd, b, roots):
        corner = corner_algebra(fd, e)
        for sub in _primitive_idempotents_finite(corner.fd):
            prims.append(corner.embed(sub))
    return prims


def _sympy_factors(coeffs):
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.value) * t ** i for i, c in enumerate(coeffs))
    return sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))[1]


def _poly_from_sympy(field, poly):
    from fractions import Fraction

    coeffs = list(reversed(poly.all_coeffs()))
    return [field.scalar(Fraction(str(c))) for c in coeffs]


def _splitter_candidates(fd, rng):
    for i in range(fd.dim):
        yield fd.basis_vec(i)
    for i in range(fd.dim):
        for j in range(i + 1, fd.dim):
            yield fd.add(fd.basis_vec(i), fd.basis_vec(j))
    for _ in range(SPLITTER_ATTEMPTS):
        yield [fd.field.from_int(rng.randint(-3, 3)) for _ in range(fd.dim)]


def _primitive_idempotents_rational(fd, rng):
    import sympy

    if fd.dim == 1:
        return [list(fd.one)]
    rad, _ = _radical_raw(fd)
    if rad:
        # idempotents lift uniquely along a nil ideal in a commutative
        # algebra, so the quotient's primitive set pulls back wholesale
        span = span_of(fd, rad)
        basis = [list(r) for r in span.inserted]
        Q = quotient_algebra(fd, basis)
        return [lift_idempotent(fd, basis, Q.lift(qe))
                for qe in _primitive_idempotents_rational(Q.fd, rng)]
    for cand in _splitter_candidates(fd, rng):
        m = minimal_polynomial(fd, cand)
        factors = _sympy_factors(m)
        if len(factors) < 2:
            if factors[0][1] == 1 and len(m) - 1 == fd.dim:
                # irreducible minimal polynomial of full degree: a field
                return [list(fd.one)]
            continue
        # split off the first factor power through a Bezout identity
        t = sympy.Symbol("t")
        g = sympy.Poly(factors[0][0] ** factors[0][1], t, domain="QQ")
        h = sympy.Poly(sympy.prod(f ** e for f, e in factors[1:]),
                       t, domain="QQ")
        a, b, gcd = sympy.gcdex(g.as_expr(), h.as_expr(), t)
        assert sympy.simplify(gcd - 1) == 0, "factor powers must be coprime"
        bh = sympy.Poly(sympy.expand(b * h.as_expr()), t, domain="QQ")
        e1 = poly_eval_fd(fd, _poly_from_sympy(fd.field, bh), cand)
        assert fd.is_idempotent(e1), "Bezout idempotent failed"
        prims = []
        for e in (e1, fd.sub(fd.one, e1)):
            if fd.is_zero(e):
                continue
            corner = corner_algebra(fd, e)
            for sub in _primitive_idempotents_rational(corner.fd, rng):
                prims.append(corner.embed(sub))
        return prims
    raise ConditionsNotMet(
        "no splitting element found; the algebra resisted decomposition")


def primitive_idempotents(fd, seed=0):
    """The complete set of primitive idempotents of a commutative algebra.

    Finite fields split along the fixed space of x -> x^q, which works with
    or without a radical present; the rationals factor minimal polynomials
    of candidate elements and split off Bezout idempotents, which also
    tolerates nilpotents because coprime factor powers still satisfy a
    Bezout identity.  The returned family is verified orthogonal,
    idempotent, and complete before being handed back.
    """
    comm, witness = fd.is_commutative()
    if not comm:
        raise NotCommutative(
            f"primitive idempotents need a commutative algebra; "
            f"{witness[0]} and {witness[1]} do not commute", witness)
    if fd.field.is_finite():
        prims = _primitive_idempotents_finite(fd)
    else:
        prims = _primitive_idempotents_rational(fd, random.Random(seed))
    total = fd.zero_vec()
    for i, e in enumerate(prims):
        assert fd.is_idempotent(e)
        total = fd.add(total, e)
        for j, f in enumerate(prims):
            if i != j:
                assert fd.is_zero(fd.mul(e, f))
    assert total == list(fd.one)
    return prims


def count_idempotents(fd, cap=IDEMPOTENT_COUNT_CAP, seed=0):
    """Number of idempotents: 2^(number of primitives) when commutative,
    exhaustive enumeration when small enough, TooLargeToCount otherwise."""
    comm, _ = fd.is_commutative()
    if comm:
        return 2 ** len(primitive_idempotents(fd, seed))
    if not fd.field.is_finite() or fd.field.size() ** fd.dim > cap:
        raise TooLargeToCount(
            "exhaustive idempotent count works only for small finite "
            "noncommutative algebras")
    count = 0
    for combo in itertools.product(fd.field.elements(), repeat=fd.dim):
        vec = list(combo)
        if fd.is_idempotent(vec):
            count += 1
    return count


# --- sum-of-fields certificates ------------------------------------------------


@dataclass
class FieldComponent:
    dim: int
    description: str
    generator: list
    min_poly: list
    idempotent: list


@dataclass
class DecompositionReport:
    is_sum_of_fields: bool
    reason: str
    witness: object
    components: list

    def component_count(self):
        return len(self.components)


def _poly_trim(a):
    while a and not a[-1]:
        a = a[:-1]
    return a


def _poly_sub(field, a, b):
    n = max(len(a), len(b))
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(field, a, b):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def _poly_mod(field, a, m):
    a = list(a)
    dm = len(m) - 1
    lead_inv = m[-1].inv()
    while True:
        a = _poly_trim(a)
        if len(a) <= dm:
            return a
        factor = a[-1] * lead_inv
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = a[shift + i] - factor * c


def _poly_powmod(field, a, n, m):
    result = [field.one]
    base = _poly_mod(field, a, m)
    while n:
        if n & 1:
            result = _poly_mod(field, _poly_mul(field, result, base), m)
        n >>= 1
        if n:
            base = _poly_mod(field, _poly_mul(field, base, base), m)
    return result


def _poly_gcd(field, a, b):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    while b:
        a = _poly_trim(_poly_mod(field, a, b))
        a, b = b, a
    if a:
        inv = a[-1].inv()
        a = [c * inv for c in a]
    return a


def _poly_irreducible_finite(field, coeffs):
    """Irreducibility of a monic polynomial over GF(q): X^(q^n) = X mod m
    and gcd(X^(q^(n/p)) - X, m) = 1 for each prime p dividing n."""
    q = field.size()
    n = len(coeffs) - 1
    if n == 1:
        return True

    def x_power_q_pow(k):
        cur = [field.zero, field.one]
        for _ in range(k):
            cur = _poly_powmod(field, cur, q, coeffs)
        return cur

    x = [field.zero, field.one]
    if _poly_trim(_poly_sub(field, x_power_q_pow(n), x)):
        return False
    for p in range(2, n + 1):
        if n % p == 0 and is_prime(p):
            g = _poly_gcd(field, _poly_sub(field, x_power_q_pow(n // p), x),
                          coeffs)
            if len(g) > 1:
                return False
    return True


def _field_certificate(corner, rng):
    """A generator of the corner whose minimal polynomial is irreducible of
    full degree, certifying the corner is a field."""
    fd = corner.fd
    target = fd.dim
    for cand in _splitter_candidates(fd, rng):
        m = minimal_polynomial(fd, cand)
        if len(m) - 1 != target:
            continue
        if fd.field.is_finite():
            if _poly_irreducible_finite(fd.field, m):
                return cand, m
        else:
            factors = _sympy_factors(m)
            if len(factors) == 1 and factors[0][1] == 1:
                return cand, m
    raise ConditionsNotMet("no primitive element found for a field corner")


def fields_decomposition(fd, seed=0):
    """Decide whether the algebra is a finite direct sum of fields, with a
    certificate either way."""
    comm, witness = fd.is_commutative()
    if not comm:
        return DecompositionReport(False, "noncommutative", witness, [])
    rad = jacobson_radical(fd)
    if rad.basis:
        return DecompositionReport(False, "nonzero radical",
                                   rad.basis[0], [])
    rng = random.Random(seed)
    components = []
    for e in primitive_idempotents(fd, seed):
        corner = corner_algebra(fd, e)
        gen, m = _field_certificate(corner, rng)
        if fd.field.is_finite():
            desc = f"GF({fd.field.size()}^{corner.fd.dim})"
        else:
            desc = f"degree-{corner.fd.dim} extension of Q"
        components.append(FieldComponent(
            corner.fd.dim, desc, corner.embed(gen), m, e))
    return DecompositionReport(True, "", None, components)


# --- idempotent lifting ----------------------------------------------------------


def lift_idempotent(fd, ideal_span, x):
    """Lift x with x^2 - x in the ideal to an honest idempotent congruent
    to x modulo the ideal.  The ideal must be nilpotent."""
    S = span_of(fd, ideal_span)
    if not S.contains(fd.sub(fd.mul(x, x), x)):
        raise ConditionsNotMet("x is not idempotent modulo the ideal")
    ideal_nilpotency_index(fd, ideal_span)  # raises if not nilpotent
    p = fd.field.characteristic
    three = fd.field.from_int(3)
    two = fd.field.from_int(2)
    e = list(x)
    steps = 0
    bound = fd.dim.bit_length() + 3
    while not fd.is_idempotent(e):
        if p:
            e = fd.power(e, p)
        else:
            e2 = fd.mul(e, e)
            e = fd.sub(fd.scale(e2, three), fd.scale(fd.mul(e2, e), two))
        steps += 1
        assert steps <= bound, "idempotent lifting failed to converge"
    assert S.contains(fd.sub(e, x)), "lift drifted from x modulo the ideal"
    return e
