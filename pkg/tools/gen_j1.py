"""Generate J1.grp: the 175560-element group on 266 points.

The group is built from its classical pair of 7x7 generator matrices over
GF(11): Y is the cyclic-shift permutation matrix of order 7 and Z is a
fixed matrix of order 5.  The full matrix group (175560 elements) is
enumerated, an order-660 subgroup H is located (any such subgroup gives the
minimal faithful degree: [G:H] = 266), and the left coset action writes the
two generator permutations to src/hh1lab/data/groups/J1.grp.

The script asserts |<Y,Z>| = 175560, 266 cosets, and that the resulting
permutation group has order 175560 with 15 conjugacy classes.

Run from the repository root:  python tools/gen_j1.py
"""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hh1lab.permgroup import Perm, format_group_file, group_from_generators

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "hh1lab", "data",
                   "groups", "J1.grp")

P = 11

Y = np.zeros((7, 7), dtype=np.int64)
for i in range(7):
    Y[i, (i + 1) % 7] = 1

Z = np.array([
    [-3, +2, -1, -1, -3, -1, -3],
    [-2, +1, +1, +3, +1, +3, +3],
    [-1, -1, -3, -1, -3, -3, +2],
    [-1, -3, -1, -3, -3, +2, -1],
    [-3, -1, -3, -3, +2, -1, -1],
    [+1, +3, +3, -2, +1, +1, +3],
    [+3, +3, -2, +1, +1, +3, +1],
], dtype=np.int64) % P

IDENT = np.eye(7, dtype=np.int64)


def mat_order(M, cap=100):
    A = M.copy()
    for k in range(1, cap + 1):
        if np.array_equal(A, IDENT):
            return k
        A = A @ M % P
    return None


def matrix_closure(gens, cap=None):
    index = {IDENT.tobytes(): 0}
    rows = [IDENT]
    frontier = np.array([IDENT])
    while len(frontier):
        batch = np.concatenate(
            [np.einsum("nij,jk->nik", frontier, g) % P for g in gens])
        fresh = []
        for m in batch:
            key = m.tobytes()
            if key not in index:
                index[key] = len(rows) + len(fresh)
                fresh.append(m)
        if not fresh:
            break
        rows.extend(fresh)
        if cap is not None and len(rows) > cap:
            return None, None
        frontier = np.array(fresh)
    return rows, index


def find_order_660_subgroup(elements):
    """Pair of matrices generating a subgroup of order 660.

    Any order-660 subgroup of this group is a point stabilizer of the
    266-point action (660 does not divide the order of any other maximal
    subgroup).  Scans (involution, order-3) pairs in enumeration order.
    """
    twos, threes = [], []
    for m in elements:
        o = mat_order(m, cap=20)
        if o == 2 and len(twos) < 60:
            twos.append(m)
        elif o == 3 and len(threes) < 60:
            threes.append(m)
        if len(twos) >= 60 and len(threes) >= 60:
            break
    for a in twos:
        for b in threes:
            rows, _ = matrix_closure([a, b], cap=660)
            if rows is not None and len(rows) == 660:
                return a, b
    raise RuntimeError("no order-660 subgroup found in the scan range")


def main():
    oy, oz = mat_order(Y), mat_order(Z)
    print(f"order(Y) = {oy}, order(Z) = {oz}")
    assert oy == 7 and oz == 5, "generator matrices are wrong"

    print("enumerating matrix group ...")
    elements, index = matrix_closure([Y, Z])
    n = len(elements)
    print(f"|<Y,Z>| = {n}")
    assert n == 175560, "matrix group has the wrong order"

    print("searching for an order-660 subgroup ...")
    a, b = find_order_660_subgroup(elements)
    print("found; building the coset partition ...")

    E = np.array(elements)
    parent = np.arange(n, dtype=np.int64)

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    for h in (a, b):
        prod = np.einsum("nij,jk->nik", E, h) % P
        for i in range(n):
            j = index[prod[i].tobytes()]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    roots = sorted({find(i) for i in range(n)})
    print(f"cosets: {len(roots)}")
    assert len(roots) == 266, "subgroup does not have index 266"
    coset_id = {r: k for k, r in enumerate(roots)}

    def perm_of(g):
        images = []
        for r in roots:
            gx = g @ E[r] % P
            images.append(coset_id[find(index[gx.tobytes()])])
        return Perm(images)

    py, pz = perm_of(Y), perm_of(Z)
    G = group_from_generators(266, [py, pz], memory_cap=1 << 31)
    print(f"permutation group order = {G.order}")
    assert G.order == 175560
    classes = G.conjugacy_classes()
    print(f"conjugacy classes: {len(classes)}")
    assert len(classes) == 15
    orders = sorted({c.representative.order() for c in classes})
    print(f"element orders: {orders}")
    assert orders == [1, 2, 3, 5, 6, 7, 10, 11, 15, 19]

    with open(OUT, "w", encoding="utf-8") as fh:
        fh.write(format_group_file(
            266, [py, pz],
            comment="first Janko group, minimal 266-point action\n"
                    "generators derived from the classical 7x7 matrix pair "
                    "over GF(11), acting on the cosets of an order-660 subgroup"))
    print(f"written {OUT}")


if __name__ == "__main__":
    main()
