import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fcunits import linalg
from fcunits.fields import gf, rationals


def mat(field, rows):
    return [[field.from_int(x) for x in row] for row in rows]


def vec(field, xs):
    return [field.from_int(x) for x in xs]


def test_rref_known():
    F = gf(5)
    R, pivots = linalg.rref(F, mat(F, [[1, 2, 3], [2, 4, 1], [0, 0, 1]]))
    assert pivots == [0, 2]
    assert R == mat(F, [[1, 2, 0], [0, 0, 1], [0, 0, 0]])


def test_rank():
    F = gf(3)
    assert linalg.rank(F, mat(F, [[1, 1], [2, 2]])) == 1
    assert linalg.rank(F, mat(F, [[1, 0], [0, 1]])) == 2


def test_solve_round_trip():
    F = gf(7)
    rng = random.Random(11)
    for _ in range(20):
        A = mat(F, [[rng.randrange(7) for _ in range(4)] for _ in range(4)])
        b = vec(F, [rng.randrange(7) for _ in range(4)])
        x = linalg.solve(F, A, b)
        if x is not None:
            assert linalg.mat_vec(F, A, x) == b


def test_solve_inconsistent():
    F = gf(5)
    assert linalg.solve(F, mat(F, [[1, 0], [1, 0]]), vec(F, [1, 2])) is None


def test_solve_underdetermined_sets_free_vars_to_zero():
    F = gf(5)
    assert linalg.solve(F, mat(F, [[1, 1]]), vec(F, [3])) == vec(F, [3, 0])


def test_kernel_basis_annihilates():
    F = gf(3)
    A = mat(F, [[1, 1, 1], [0, 1, 2]])
    basis = linalg.kernel_basis(F, A, 3)
    assert len(basis) == 3 - linalg.rank(F, A)
    for v in basis:
        assert linalg.mat_vec(F, A, v) == vec(F, [0, 0])


def test_invert_round_trip_and_singular():
    F = gf(7)
    rng = random.Random(3)
    seen_invertible = False
    for _ in range(20):
        A = mat(F, [[rng.randrange(7) for _ in range(5)] for _ in range(5)])
        Ainv = linalg.invert(F, A)
        if Ainv is None:
            assert linalg.rank(F, A) < 5
            continue
        seen_invertible = True
        I = linalg.identity_matrix(F, 5)
        assert linalg.mat_mul(F, A, Ainv) == I
        assert linalg.mat_mul(F, Ainv, A) == I
    assert seen_invertible
    assert linalg.invert(F, mat(F, [[1, 1], [2, 2]])) is None


def test_invert_rationals_exact():
    Q = rationals()
    A = [[Q.scalar(f"1/{i + j + 1}") for j in range(3)] for i in range(3)]
    Ainv = linalg.invert(Q, A)
    assert linalg.mat_mul(Q, A, Ainv) == linalg.identity_matrix(Q, 3)


small_vec = st.lists(st.integers(min_value=0, max_value=2),
                     min_size=4, max_size=4)


@settings(max_examples=150, deadline=None)
@given(st.lists(small_vec, min_size=1, max_size=6))
def test_span_basis_matches_rank_and_reconstructs(int_vecs):
    F = gf(3)
    vectors = [vec(F, xs) for xs in int_vecs]
    S = linalg.SpanBasis(F, 4)
    for v in vectors:
        grew = S.add(v)
        coords = S.coordinates(v)
        assert coords is not None
        # inserted vectors reconstruct what we fed in
        acc = [F.zero] * 4
        for c, w in zip(coords, S.inserted):
            acc = [a + c * x for a, x in zip(acc, w)]
        assert acc == v
        if grew:
            assert S.inserted[-1] == v
    assert S.dim == linalg.rank(F, vectors)


@settings(max_examples=100, deadline=None)
@given(st.lists(small_vec, min_size=1, max_size=4), small_vec)
def test_span_basis_contains_agrees_with_rank(int_vecs, probe_ints):
    F = gf(3)
    vectors = [vec(F, xs) for xs in int_vecs]
    probe = vec(F, probe_ints)
    S = linalg.SpanBasis(F, 4)
    for v in vectors:
        S.add(v)
    in_span = linalg.rank(F, vectors + [probe]) == linalg.rank(F, vectors)
    assert S.contains(probe) == in_span
    assert (S.coordinates(probe) is not None) == in_span
