"""Group layer: laws, orders, subgroup structure, coset systems."""

import itertools
import math
from fractions import Fraction

import pytest

from fcunits.errors import (
    GroupMismatch,
    GroupValidationError,
    InfiniteIndexUnsupported,
    InstanceFormatError,
    SubgroupTooLarge,
)
from fcunits.groups import (
    Group,
    InvariantsTorsion,
    TableTorsion,
    cyclic_table,
    finite_subgroup,
    group_to_json,
    make_group,
    symmetric_group_3_table,
)


def heisenberg_mod2():
    """Rank-2 extension of Z^2 by C2 with [f1, f2] = z."""
    return Group(2, InvariantsTorsion((2,)),
                 pairing_matrix=[[0, 1], [0, 0]],
                 pairing_target=(1,))


def s3_group():
    return make_group({"kind": "cayley", "table": symmetric_group_3_table()})


def test_cayley_validation_rejects_bad_tables():
    with pytest.raises(GroupValidationError):
        TableTorsion([[0, 1], [1, 1]])  # not a Latin square
    with pytest.raises(GroupValidationError):
        TableTorsion([[1, 0], [0, 1]])  # identity is not index 0
    # a Latin square with identity that is not associative
    # (built from the subtraction "law" i - j mod 3)
    with pytest.raises(GroupValidationError):
        TableTorsion([[(i - j) % 3 for j in range(3)] for i in range(3)])


def test_s3_table_is_a_valid_group():
    g = s3_group()
    assert g.torsion.size == 6
    assert not g.is_abelian
    orders = sorted(e.order() for e in g.elements())
    assert orders == [1, 2, 2, 2, 3, 3]


def test_element_orders_central_extension():
    g = heisenberg_mod2()
    z = g.element((0, 0), (1,))
    assert z.order() == 2
    assert g.element((1, 0), (1,)).order() == math.inf
    assert g.identity.order() == 1


def test_prufer_orders_and_validation():
    g = Group(0, InvariantsTorsion((3,)), prufer=(2, 4))
    el = g.element((), (1,), Fraction(1, 8))
    assert el.order() == 24
    assert g.element((), (0,), Fraction(3, 4)).order() == 4
    with pytest.raises(InstanceFormatError):
        g.element((), (0,), Fraction(1, 32))  # beyond the level cap
    with pytest.raises(InstanceFormatError):
        g.element((), (0,), Fraction(1, 6))  # denominator not a 2-power


def test_group_law_inverses():
    g = heisenberg_mod2()
    for u in itertools.product(range(-2, 3), repeat=2):
        for t in ((0,), (1,)):
            el = g.element(u, t)
            assert g.mul(el, el.inv()) == g.identity
            assert g.mul(el.inv(), el) == g.identity


def test_commutator_closed_form_matches_product_chain():
    # spec invariant: closed form vs the four-fold product on a 3^3 box
    g = heisenberg_mod2()
    box = [g.element(u, t)
           for u in itertools.product((-1, 0, 1), repeat=2)
           for t in ((0,), (1,))]
    for a in box:
        for b in box:
            assert g.commutator(a, b) == g.commutator_closed_form(a, b)


def test_heisenberg_commutator_subgroup():
    g = heisenberg_mod2()
    rec = g.commutator_subgroup()
    assert rec.order == 2
    assert g.element((0, 0), (1,)) in rec.elements


def test_s3_commutator_subgroup_is_a3():
    g = s3_group()
    rec = g.commutator_subgroup()
    assert rec.order == 3
    orders = sorted(e.order() for e in rec.elements)
    assert orders == [1, 3, 3]


def test_heisenberg_center():
    # spec example: center = {(u, a): u == 0 mod 2}
    g = heisenberg_mod2()
    assert g.center_contains(g.element((2, 0), (0,)))
    assert g.center_contains(g.element((0, -2), (1,)))
    assert not g.center_contains(g.element((1, 0), (0,)))
    for gen in g.center_generators():
        assert g.center_contains(gen)
        assert all(c % 2 == 0 for c in gen.u)


def test_commutators_inside_torsion_inside_center():
    # spec invariant chain: G' <= t(G) <= center for paired extensions
    g = heisenberg_mod2()
    for el in g.commutator_subgroup().elements:
        assert el.is_torsion()
        assert g.center_contains(el)
    assert g.torsion_is_central()


def test_is_fc_certificates():
    assert heisenberg_mod2().is_fc() == (
        True, {"fc": True, "max_class_size_bound": 2,
               "reason": "conjugates differ by multiples of the pairing "
                         "target, a finite central subgroup"})
    ok, cert = s3_group().is_fc()
    assert ok and cert["max_class_size_bound"] == 6


def test_torsion_subgroup_embedding():
    g = Group(1, InvariantsTorsion((3,)))
    sub, embed = g.torsion_subgroup()
    assert sub.is_finite() and len(sub.elements()) == 3
    for el in sub.elements():
        img = embed(el)
        assert img.group is g and img.u == (0,)
    # embedding respects the law
    a, b = sub.elements()[1], sub.elements()[2]
    assert embed(sub.mul(a, b)) == g.mul(embed(a), embed(b))


def test_torsion_coset_system():
    # spec example: Z x C3 mod t(G), reps (u, 0)
    g = Group(1, InvariantsTorsion((3,)))
    cosets = g.coset_system("torsion")
    el = g.element((5,), (2,))
    h, t = cosets.factor(el)
    assert cosets.rep(h) == g.element((5,), (0,))
    assert t == g.element((0,), (2,))
    assert g.mul(cosets.rep(h), t) == el
    # induced multiplication on the quotient is plain Z^r addition
    H = cosets.quotient
    h2 = cosets.project(g.element((-2,), (1,)))
    assert H.mul(h, h2) == H.element((3,), ())


def test_cyclic_coset_system_collapses_heisenberg():
    g = heisenberg_mod2()
    z = g.element((0, 0), (1,))
    cosets = g.coset_system(("cyclic", z))
    H = cosets.quotient
    assert H.rank == 2 and H.torsion.size == 1 and H.pairing_matrix is None
    assert H.is_abelian
    # projection is a homomorphism on a sample box
    box = [g.element(u, t)
           for u in itertools.product((-1, 0, 1), repeat=2)
           for t in ((0,), (1,))]
    for a in box:
        for b in box:
            assert cosets.project(g.mul(a, b)) == H.mul(cosets.project(a),
                                                        cosets.project(b))
    h, k = cosets.factor(g.element((1, 1), (1,)))
    assert g.mul(cosets.rep(h), g.power(z, k)) == g.element((1, 1), (1,))


def test_cyclic_coset_system_in_finite_abelian():
    g = make_group({"kind": "central-extension", "rank": 0,
                    "torsion": {"invariants": [2, 4]}})
    a = g.element((), (1, 1))  # order 4, quotient of order 2
    cosets = g.coset_system(("cyclic", a))
    assert cosets.quotient.torsion.size == 2
    reps = cosets.list_reps()
    assert len(reps) == 2
    covered = {g.mul(r, p) for r in reps for p in cosets.a_powers}
    assert len(covered) == 8


def test_cyclic_cosets_table_mode():
    g = s3_group()
    rot = g.element((), 4)  # a 3-cycle; <rot> = A3 is normal
    cosets = g.coset_system(("cyclic", rot))
    assert cosets.quotient.torsion.size == 2
    refl = g.element((), 1)
    with pytest.raises(InfiniteIndexUnsupported):
        g.coset_system(("cyclic", refl))  # <(12)> is not normal in S3


def test_coset_system_rejects_free_generators():
    g = Group(1, InvariantsTorsion((3,)))
    with pytest.raises(InfiniteIndexUnsupported):
        g.coset_system(("cyclic", g.element((1,), (0,))))


def test_finite_subgroup_closure():
    g = s3_group()
    w = finite_subgroup(g, [g.element((), 1)])
    assert len(w) == 2
    w = finite_subgroup(g, [g.element((), 1), g.element((), 4)])
    assert len(w) == 6
    with pytest.raises(SubgroupTooLarge):
        finite_subgroup(g, [g.element((), 4)], cap=2)


def test_group_mismatch_detected():
    g1 = heisenberg_mod2()
    g2 = heisenberg_mod2()
    with pytest.raises(GroupMismatch):
        g1.mul(g1.identity, g2.identity)


def test_json_round_trip():
    specs = [
        {"kind": "cayley", "table": cyclic_table(4)},
        {"kind": "central-extension", "rank": 2,
         "torsion": {"invariants": [2]},
         "pairing": {"target_index": 0, "matrix": [[0, 1], [0, 0]]}},
        {"kind": "central-extension", "rank": 1,
         "torsion": {"table": symmetric_group_3_table()}},
        {"kind": "central-extension", "rank": 0,
         "torsion": {"invariants": [3]}, "prufer": {"q": 2, "levels": 4}},
    ]
    for spec in specs:
        g = make_group(spec)
        g2 = make_group(group_to_json(g))
        assert group_to_json(g2) == group_to_json(g)
        for _, gen in g.generators(prufer_level=2):
            round_tripped = g.element_from_json(g.element_to_json(gen))
            assert round_tripped == gen


def test_pairing_with_table_torsion_rejected():
    with pytest.raises(GroupValidationError):
        make_group({"kind": "central-extension", "rank": 2,
                    "torsion": {"table": cyclic_table(2)},
                    "pairing": {"target_index": 0,
                                "matrix": [[0, 1], [0, 0]]}})


def test_direct_product_with_table_torsion():
    g = make_group({"kind": "central-extension", "rank": 1,
                    "torsion": {"table": symmetric_group_3_table()}})
    assert not g.is_abelian
    assert not g.torsion_is_central()
    a = g.element((1,), 1)
    b = g.element((0,), 4)
    # free and torsion parts multiply independently
    assert g.mul(a, b) == g.element((1,), g.torsion.mul_key(1, 4))
    rec = g.commutator_subgroup()
    assert rec.order == 3
