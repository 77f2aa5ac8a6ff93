"""Regenerate the packaged corpus group files.

Run from the repository root:  python tools/gen_groups.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hh1lab.permgroup import Perm, format_group_file, group_from_generators

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "hh1lab", "data", "groups")


def cyclic(n):
    return n, [Perm([(i + 1) % n for i in range(n)])]


def klein_four():
    return 4, [Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])]


def sym3():
    return 3, [Perm([1, 0, 2]), Perm([1, 2, 0])]


def sym4():
    return 4, [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])]


def alt4():
    return 4, [Perm([1, 2, 0, 3]), Perm([1, 0, 3, 2])]


def dihedral8():
    # symmetries of a square: rotation and a reflection
    return 4, [Perm([1, 2, 3, 0]), Perm([0, 3, 2, 1])]


def quaternion8():
    # regular action on {1,-1,i,-i,j,-j,k,-k} indexed 0..7
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    idx = {n: k for k, n in enumerate(names)}

    def qmul(a, b):
        sign = 1
        for x in (a, b):
            if x.startswith("-"):
                sign = -sign
        ua, ub = a.lstrip("-"), b.lstrip("-")
        table = {
            ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
            ("i", "1"): "i", ("j", "1"): "j", ("k", "1"): "k",
            ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
            ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
            ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
        }
        r = table[(ua, ub)]
        if r.startswith("-"):
            sign = -sign
            r = r[1:]
        return r if sign == 1 else "-" + r

    def left_mult_perm(g):
        return Perm([idx[qmul(g, names[x])] for x in range(8)])

    return 8, [left_mult_perm("i"), left_mult_perm("j")]


def product(spec_a, spec_b):
    da, gens_a = spec_a
    db, gens_b = spec_b
    gens = [Perm(list(g.images) + [da + x for x in range(db)]) for g in gens_a]
    gens += [Perm(list(range(da)) + [da + x for x in g.images]) for g in gens_b]
    return da + db, gens


GROUPS = {
    "C2": (cyclic(2), 2, "cyclic group of order 2"),
    "C3": (cyclic(3), 3, "cyclic group of order 3"),
    "C4": (cyclic(4), 4, "cyclic group of order 4"),
    "V4": (klein_four(), 4, "Klein four group"),
    "S3": (sym3(), 6, "symmetric group on 3 points"),
    "D8": (dihedral8(), 8, "dihedral group of order 8"),
    "Q8": (quaternion8(), 8, "quaternion group, regular action"),
    "A4": (alt4(), 12, "alternating group on 4 points"),
    "S4": (sym4(), 24, "symmetric group on 4 points"),
    "C2xS3": (product(cyclic(2), sym3()), 12, "direct product C2 x S3"),
    "S3xS3": (product(sym3(), sym3()), 36, "direct product S3 x S3"),
}


def main():
    os.makedirs(OUT, exist_ok=True)
    manifest = {"entries": []}
    for name, ((degree, gens), expected_order, notes) in GROUPS.items():
        G = group_from_generators(degree, gens)
        assert G.order == expected_order, (name, G.order, expected_order)
        fname = f"{name}.grp"
        with open(os.path.join(OUT, fname), "w", encoding="utf-8") as fh:
            fh.write(format_group_file(degree, gens, comment=notes))
        manifest["entries"].append(
            {"name": name, "file": fname, "order": expected_order,
             "notes": notes, "stretch": False})
        print(f"{name}: order {G.order} -> {fname}")
    # stretch entries; J1.grp is generated by gen_j1.py, J2.grp is
    # user-supplied (100-point generators; see README)
    manifest["entries"].append(
        {"name": "J1", "file": "J1.grp", "order": 175560,
         "notes": "first Janko group on 266 points", "stretch": True})
    manifest["entries"].append(
        {"name": "J2", "file": "J2.grp", "order": 604800,
         "notes": "Hall-Janko group on 100 points (user-supplied file)",
         "stretch": True})
    with open(os.path.join(OUT, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("manifest written")


if __name__ == "__main__":
    main()
