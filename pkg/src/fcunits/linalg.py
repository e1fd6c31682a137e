"""Exact dense linear algebra over the scalar fields.

Matrices are lists of rows of Scalars from a single field.  Dimensions are
capped upstream (subalgebras stay at 64 basis elements or fewer), so plain
Gaussian elimination with first-nonzero pivoting is all we need.
"""

from __future__ import annotations


def identity_matrix(field, n):
    return [[field.one if i == j else field.zero for j in range(n)]
            for i in range(n)]


def mat_vec(field, rows, vec):
    out = []
    for row in rows:
        acc = field.zero
        for a, x in zip(row, vec):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def mat_mul(field, a, b):
    n, m = len(a), len(b[0]) if b else 0
    out = [[field.zero] * m for _ in range(n)]
    for i, row in enumerate(a):
        for k, aik in enumerate(row):
            if not aik:
                continue
            brow = b[k]
            orow = out[i]
            for j in range(m):
                if brow[j]:
                    orow[j] = orow[j] + aik * brow[j]
    return out


def rref(field, rows):
    """Reduced row echelon form; returns (new rows, pivot column list)."""
    R = [list(r) for r in rows]
    pivots = []
    lead = 0
    ncols = len(R[0]) if R else 0
    for col in range(ncols):
        pivot_row = None
        for i in range(lead, len(R)):
            if R[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        R[lead], R[pivot_row] = R[pivot_row], R[lead]
        inv = R[lead][col].inv()
        R[lead] = [x * inv for x in R[lead]]
        for i in range(len(R)):
            if i != lead and R[i][col]:
                c = R[i][col]
                R[i] = [x - c * y for x, y in zip(R[i], R[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(R):
            break
    return R, pivots


def rank(field, rows):
    return len(rref(field, rows)[1])


def solve(field, rows, rhs):
    """One solution x of (rows) x = rhs, or None when inconsistent.

    Free variables are set to zero.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(field, aug)
    if n in pivots:
        return None
    x = [field.zero] * n
    for i, col in enumerate(pivots):
        x[col] = R[i][n]
    return x


def kernel_basis(field, rows, ncols):
    """A basis of the right kernel of the matrix."""
    R, pivots = rref(field, rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for i, col in enumerate(pivots):
            vec[col] = -R[i][free]
        basis.append(vec)
    return basis


def invert(field, rows):
    """Matrix inverse, or None when singular."""
    n = len(rows)
    aug = [list(r) + list(e)
           for r, e in zip(rows, identity_matrix(field, n))]
    R, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R[:n]]


class SpanBasis:
    """Incremental echelon basis of a subspace, with coordinate tracking.

    `add` inserts a vector and reports whether the span grew; `coordinates`
    expresses a vector as a combination of the *inserted* vectors (the ones
    for which add returned True), or returns None when it lies outside.
    """

    def __init__(self, field, ambient_dim):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows = []          # echelon rows, leading entry 1
        self._leads = []         # leading column per row
        self._combos = []        # each row as a combination of inserted vecs
        self.inserted = []       # the raw vectors whose insertion grew the span

    @property
    def dim(self):
        return len(self._rows)

    def _reduce(self, vec):
        v = list(vec)
        coeffs = [self.field.zero] * len(self._rows)
        for i, (row, lead) in enumerate(zip(self._rows, self._leads)):
            c = v[lead]
            if c:
                coeffs[i] = c
                v = [x - c * y for x, y in zip(v, row)]
        return v, coeffs

    def coordinates(self, vec):
        v, coeffs = self._reduce(vec)
        if any(v):
            return None
        out = [self.field.zero] * len(self.inserted)
        for c, combo in zip(coeffs, self._combos):
            if c:
                for j, w in enumerate(combo):
                    out[j] = out[j] + c * w
        return out

    def contains(self, vec):
        v, _ = self._reduce(vec)
        return not any(v)

    def add(self, vec):
        v, coeffs = self._reduce(vec)
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        combo = [-c for c in coeffs] + [self.field.one]
        inv = v[lead].inv()
        v = [x * inv for x in v]
        combo_full = [self.field.zero] * (len(self.inserted) + 1)
        for c, prev in zip(combo[:-1], self._combos):
            if c:
                for j, w in enumerate(prev):
                    combo_full[j] = combo_full[j] + c * w
        combo_full[len(self.inserted)] = self.field.one
        combo_full = [c * inv for c in combo_full]
        self.inserted.append(list(vec))
        for existing in self._combos:
            existing.append(self.field.zero)
        # keep all rows fully reduced so _reduce stays a single pass
        for i, row in enumerate(self._rows):
            c = row[lead]
            if c:
                self._rows[i] = [x - c * y for x, y in zip(row, v)]
                self._combos[i] = [x - c * y
                                   for x, y in zip(self._combos[i], combo_full)]
        self._rows.append(v)
        self._leads.append(lead)
        self._combos.append(combo_full)
        return True
