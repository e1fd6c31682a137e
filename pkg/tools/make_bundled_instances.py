"""Regenerate the bundled instance corpus under src/fcunits/instances/.

Run from the repository root with the package installed:

    python3 tools/make_bundled_instances.py

Every generated file is validated before it is written (except the one
deliberately broken cocycle, which must fail validation).  Outputs are
committed; rerunning must be a no-op unless the corpus definition here
changed.
"""

import itertools
import json
import pathlib

from fcunits.errors import FcunitsError
from fcunits.fc import instance_from_json
from fcunits.fields import field_to_json, gf
from fcunits.groups import symmetric_group_3_table

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "fcunits" \
    / "instances"


def gf_spec(p, k=1):
    if k == 1:
        return field_to_json(gf(p))
    # first monic irreducible in lexicographic coefficient order, so the
    # committed files stay byte-stable across regenerations
    for low in itertools.product(range(p), repeat=k):
        try:
            return field_to_json(gf(p, k, list(low) + [1]))
        except FcunitsError:
            continue
    raise AssertionError(f"no irreducible modulus found for GF({p}^{k})")


def carry_table(n, value):
    """Cyclic carry cocycle on C_n: lambda(g^i, g^j) = value iff i+j >= n,
    so u_g^n = value."""
    return {f"({i},{j})": value
            for i in range(1, n) for j in range(1, n) if i + j >= n}


MAIN = {
    "heisenberg_gf2": {
        "name": "Heisenberg mod 2 over GF(2)",
        "field": gf_spec(2),
        "group": {"kind": "central-extension", "rank": 2,
                  "torsion": {"invariants": [2]},
                  "pairing": {"target_index": 0, "matrix": [[0, 1], [0, 0]]}},
        "cocycle": {},
    },
    "heisenberg_gf4": {
        "name": "Heisenberg mod 2 over GF(4)",
        "field": gf_spec(2, 2),
        "group": {"kind": "central-extension", "rank": 2,
                  "torsion": {"invariants": [2]},
                  "pairing": {"target_index": 0, "matrix": [[0, 1], [0, 0]]}},
        "cocycle": {},
    },
    "z3_commutator_gf3": {
        "name": "order-3 commutators in characteristic 3",
        "field": gf_spec(3),
        "group": {"kind": "central-extension", "rank": 2,
                  "torsion": {"invariants": [3]},
                  "pairing": {"target_index": 0, "matrix": [[0, 1], [0, 0]]}},
        "cocycle": {},
    },
    "c3_z_rationals": {
        "name": "C3 x Z over the rationals",
        "field": {"kind": "rationals"},
        "group": {"kind": "central-extension", "rank": 1,
                  "torsion": {"invariants": [3]}},
        "cocycle": {},
    },
    "c2_z_gf3_twisted": {
        "name": "C2 x Z over GF(3), twisted square",
        "field": gf_spec(3),
        "group": {"kind": "central-extension", "rank": 1,
                  "torsion": {"invariants": [2]}},
        "cocycle": {"torsion_table": {"(1,1)": 2}},
    },
    "s3_z_gf5": {
        "name": "S3 x Z over GF(5)",
        "field": gf_spec(5),
        "group": {"kind": "central-extension", "rank": 1,
                  "torsion": {"table": symmetric_group_3_table()}},
        "cocycle": {},
    },
    "c2_z2_gf4_twisted": {
        "name": "C2 x Z^2 over GF(4) with a nonsquare twist",
        "field": gf_spec(2, 2),
        "group": {"kind": "central-extension", "rank": 2,
                  "torsion": {"invariants": [2]}},
        "cocycle": {"torsion_table": {"(1,1)": [0, 1]}},
    },
    "z2_to_c3_gf7": {
        "name": "Z^2 pairing onto C3 over GF(7)",
        "field": gf_spec(7),
        "group": {"kind": "central-extension", "rank": 2,
                  "torsion": {"invariants": [3]},
                  "pairing": {"target_index": 0, "matrix": [[0, 1], [0, 0]]}},
        "cocycle": {},
        "caps": {"box_radius": 1},
    },
    "gf3_c2_twisted": {
        "name": "GF(3)C2 with twisted square",
        "field": gf_spec(3),
        "group": {"kind": "central-extension", "rank": 0,
                  "torsion": {"invariants": [2]}},
        "cocycle": {"torsion_table": {"(1,1)": 2}},
    },
    "gf3_c2_trivial": {
        "name": "GF(3)C2, untwisted",
        "field": gf_spec(3),
        "group": {"kind": "central-extension", "rank": 0,
                  "torsion": {"invariants": [2]}},
        "cocycle": {},
    },
    "prufer2_gf257": {
        "name": "2-Pruefer component over GF(257), truncated",
        "field": gf_spec(257),
        "group": {"kind": "central-extension", "rank": 1,
                  "torsion": {"invariants": []},
                  "prufer": {"q": 2, "levels": 8}},
        "cocycle": {},
        "caps": {"truncation_level": 4},
    },
    "broken_cocycle": {
        "name": "fails the cocycle identity",
        "field": gf_spec(5),
        "group": {"kind": "central-extension", "rank": 0,
                  "torsion": {"invariants": [3]}},
        "cocycle": {"torsion_table": {"(1,2)": 2}},
    },
}

# (order n, p, k, carry value as JSON) for the torsion-unit inversion suite.
LEMMA3 = [
    (2, 3, 1, 2),
    (2, 5, 1, 3),
    (2, 7, 1, 3),
    (2, 3, 2, [0, 1]),
    (2, 3, 4, [0, 1, 0, 0]),
    (3, 2, 2, [0, 1]),
    (3, 2, 3, [0, 1, 0]),
    (3, 7, 1, 3),
    (3, 13, 1, 2),
    (3, 3, 3, [0, 1, 0]),
    (4, 3, 1, 2),
    (4, 5, 1, 2),
    (4, 3, 2, [2, 1]),
    (4, 5, 2, [0, 1]),
    (6, 5, 1, 3),
    (6, 7, 1, 3),
    (6, 13, 1, 6),
    (8, 3, 1, 2),
    (8, 17, 1, 5),
    (12, 7, 1, 4),
]


def lemma3_instances():
    out = {}
    for n, p, k, value in LEMMA3:
        q = p ** k
        out[f"lemma3/c{n}_gf{q}"] = {
            "name": f"C{n} over GF({q}), carry cocycle",
            "field": gf_spec(p, k),
            "group": {"kind": "central-extension", "rank": 0,
                      "torsion": {"invariants": [n]}},
            "cocycle": {"torsion_table": carry_table(n, value)},
        }
    return out


def write_instance(rel, obj):
    inst = instance_from_json(obj)
    valid = inst.validate().valid
    if rel == "broken_cocycle":
        assert not valid, "the broken instance validated"
    else:
        assert valid, f"{rel} failed validation"
    path = OUT / f"{rel}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return inst.digest()


def main():
    corpus = dict(MAIN)
    corpus.update(lemma3_instances())
    for rel in sorted(corpus):
        digest = write_instance(rel, corpus[rel])
        print(f"{rel}  {digest[:16]}")
    print(f"{len(corpus)} instances written to {OUT}")


if __name__ == "__main__":
    main()
