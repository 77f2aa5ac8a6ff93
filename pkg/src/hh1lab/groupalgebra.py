"""Group algebras over finite splitting fields.

Builds kG with a field large enough to split the center, decomposes it
into blocks by refining central idempotents, and derives per-block data:
dimension, defect number, central character, principal flag.  Also supplies
the tensor construction used to check the block decomposition of k(G x H)
against pairwise products.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import DimCapExceeded, FieldMismatch, SplitFieldTooSmall
from .ffield import (FieldSpec, field_make, p_adic_valuation, poly_divmod,
                     poly_ext_gcd, poly_factor, poly_mod, poly_mul,
                     poly_roots_of_split, poly_trim)

# caps for materialising dense data; stretch-scale groups stay lazy
MATERIALIZE_DIM_CAP = 512
TENSOR_DIM_CAP = 4096


class GroupTableSC:
    """Lazy structure constants of a group algebra: e_i * e_j = e_{ij}."""

    def __init__(self, group, spec):
        self._group = group
        self._one = spec.one

    def __getitem__(self, key):
        i, j = key
        return ((self._group.product_index(i, j), self._one),)


class StructAlgebra:
    """Finite-dimensional associative algebra with a distinguished basis.

    ``sc`` maps a pair (i, j) of basis indices to a tuple of (k, raw
    coefficient) terms of e_i e_j.  It may be a plain dict or a lazy view
    (group algebras at large order).  ``unit`` is the coordinate vector of
    the identity as a tuple of raw field values.
    """

    def __init__(self, spec, dim, labels, sc, unit, group=None):
        self.field = spec
        self.dim = dim
        self.labels = list(labels)
        self.sc = sc
        self.unit = tuple(unit)
        self.group = group  # the source PermGroup for group algebras

    def basis_product(self, i, j):
        return self.sc[i, j]

    def multiply(self, u, v):
        """Product of two coordinate vectors (raw values)."""
        spec = self.field
        out = [spec.zero] * self.dim
        for i, ui in enumerate(u):
            if spec.is_zero(ui):
                continue
            for j, vj in enumerate(v):
                if spec.is_zero(vj):
                    continue
                c = spec.mul(ui, vj)
                for k, ck in self.sc[i, j]:
                    out[k] = spec.add(out[k], spec.mul(c, ck))
        return tuple(out)

    def basis_vector(self, i):
        spec = self.field
        v = [spec.zero] * self.dim
        v[i] = spec.one
        return tuple(v)

    def right_mult_matrix(self, v):
        """Rows r, cols j: coefficient of e_r in e_j * v."""
        spec = self.field
        cols = []
        for j in range(self.dim):
            col = [spec.zero] * self.dim
            for g, vg in enumerate(v):
                if spec.is_zero(vg):
                    continue
                for k, ck in self.sc[j, g]:
                    col[k] = spec.add(col[k], spec.mul(vg, ck))
            cols.append(col)
        return [[cols[j][r] for j in range(self.dim)] for r in range(self.dim)]

    def is_group_like(self):
        """True when every basis product is a single basis element with
        coefficient one and the unit is a single basis element."""
        spec = self.field
        unit_support = [i for i, c in enumerate(self.unit) if not spec.is_zero(c)]
        if len(unit_support) != 1 or self.unit[unit_support[0]] != spec.one:
            return False
        for i in range(self.dim):
            for j in range(self.dim):
                terms = self.sc[i, j]
                if len(terms) != 1 or terms[0][1] != spec.one:
                    return False
        return True

    def group_table(self):
        """dim x dim table of product indices (group-like algebras only)."""
        return np.array([[self.sc[i, j][0][0] for j in range(self.dim)]
                         for i in range(self.dim)], dtype=np.int64)

    def check_unit(self):
        spec = self.field
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.multiply(self.unit, b) != b or self.multiply(b, self.unit) != b:
                return False
        return True

    def check_associativity(self, exhaustive_dim=24, samples=200, seed=0):
        """Exhaustive on basis triples up to ``exhaustive_dim``; sampled above."""
        import random
        n = self.dim
        if n <= exhaustive_dim:
            triples = ((i, j, k) for i in range(n) for j in range(n)
                       for k in range(n))
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(samples))
        for i, j, k in triples:
            left = self.multiply(self.multiply(self.basis_vector(i),
                                               self.basis_vector(j)),
                                 self.basis_vector(k))
            right = self.multiply(self.basis_vector(i),
                                  self.multiply(self.basis_vector(j),
                                                self.basis_vector(k)))
            if left != right:
                return False
        return True


@dataclass
class CenterBasis:
    """The center of a group algebra in the class-sum basis.

    ``sc_int`` holds integer structure constants: class_sum_i * class_sum_j
    = sum_k sc_int[i,j,k] * class_sum_k.  They are field-independent counts;
    reduce mod p on use.
    """

    group: object
    spec: FieldSpec
    class_count: int
    sc_int: np.ndarray = dc_field(repr=False)

    def class_sum_matrix(self):
        """Rows = class-sum coordinate vectors in kG (materialised)."""
        G = self.group
        if G.order > MATERIALIZE_DIM_CAP:
            raise DimCapExceeded(
                f"class-sum matrix of order {G.order} exceeds cap")
        spec = self.spec
        rows = []
        for cl in G.conjugacy_classes():
            row = [spec.zero] * G.order
            for i in cl.indices:
                row[int(i)] = spec.one
            rows.append(row)
        return rows

    def product(self, u, v):
        """Product of two center elements in class-sum coordinates."""
        spec = self.spec
        c = self.class_count
        out = [spec.zero] * c
        for i in range(c):
            if spec.is_zero(u[i]):
                continue
            for j in range(c):
                if spec.is_zero(v[j]):
                    continue
                coef = spec.mul(u[i], v[j])
                row = self.sc_int[i, j]
                for k in range(c):
                    a = int(row[k]) % spec.p
                    if a:
                        out[k] = spec.add(out[k],
                                          spec.mul(coef, spec.from_int(a)))
        return tuple(out)

    def unit_vector(self):
        """Coordinates of 1 (the class of the identity is a singleton)."""
        spec = self.spec
        G = self.group
        out = [spec.zero] * self.class_count
        for ci, cl in enumerate(G.conjugacy_classes()):
            if cl.size == 1 and cl.representative.order() == 1:
                out[ci] = spec.one
                return tuple(out)
        raise AssertionError("identity class not found")  # pragma: no cover


@dataclass
class BlockData:
    """One block of a group algebra.

    ``idempotent_class_coords`` is the primitive central idempotent in the
    class-sum basis (raw field values).  ``dim`` is None when the ambient
    algebra is too large to materialise the rank computation.
    """

    index: int
    idempotent_class_coords: tuple
    dim: Optional[int]
    defect: int
    is_principal: bool
    central_character: tuple
    spec: FieldSpec
    group: object = dc_field(repr=False, default=None)
    hh1_dim: Optional[int] = None

    def idempotent_vector(self):
        """Coordinates of the idempotent in kG (desk scale only)."""
        G = self.group
        if G.order > MATERIALIZE_DIM_CAP:
            raise DimCapExceeded("idempotent expansion exceeds cap")
        spec = self.spec
        out = [spec.zero] * G.order
        for ci, cl in enumerate(G.conjugacy_classes()):
            coef = self.idempotent_class_coords[ci]
            if not spec.is_zero(coef):
                for i in cl.indices:
                    out[int(i)] = coef
        return tuple(out)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def splitting_degree(G, p):
    """Degree m with GF(p^m) splitting the center of kG.

    m is the multiplicative order of p modulo the p'-part of the exponent
    of G, which makes every central character take values in GF(p^m).
    """
    e = G.exponent()
    while e % p == 0:
        e //= p
    if e == 1:
        return 1
    m = 1
    r = p % e
    while r != 1:
        r = r * p % e
        m += 1
    return m


def group_algebra(G, p, *, allow_large=False):
    """kG over GF(p^m) with m = splitting_degree(G, p).

    Structure constants are served lazily from the group's multiplication,
    so large groups do not materialise |G|^2 products.
    """
    m = splitting_degree(G, p)
    spec = field_make(p, m, _allow_large_degree=allow_large)
    unit = [spec.zero] * G.order
    unit[0] = spec.one  # element 0 is the identity (BFS enumeration)
    labels = [f"g{i}" for i in range(G.order)]
    return StructAlgebra(spec, G.order, labels, GroupTableSC(G, spec),
                         unit, group=G)


def center(A, G):
    """Center of a group algebra in the class-sum basis.

    Structure constants are integer counts: for classes C_i, C_j and a
    fixed representative g_k of C_k, the count of pairs (x, y) with
    x in C_i, y in C_j and xy = g_k; binned by iterating one class.
    """
    classes = G.conjugacy_classes()
    c = len(classes)
    class_of = G.class_of_array()
    E = G.element_rows()
    inv_rows = G.inverse_rows()
    sc_int = np.zeros((c, c, c), dtype=np.int64)
    for k, cl in enumerate(classes):
        gk = np.asarray(cl.representative.images, dtype=E.dtype)
        # rows of x^{-1} g_k for every x at once
        T = inv_rows[:, gk]
        j_arr = np.empty(G.order, dtype=np.int64)
        for i in range(G.order):
            j_arr[i] = class_of[G._index[T[i].tobytes()]]
        np.add.at(sc_int, (class_of, j_arr, np.full(G.order, k)), 1)
    return CenterBasis(G, A.field, c, sc_int)


def _min_poly_in_subalgebra(cb, w, unit):
    """Minimal polynomial of w inside the unital subalgebra unit*Z.

    Krylov iteration with an augmented echelon; coefficients tracked so the
    first linear dependence yields the monic minimal polynomial.
    """
    spec = cb.spec
    c = cb.class_count
    rows = []  # echelon rows: (leading col, coeffs vector, combo)

    def reduce(vec, combo):
        vec = list(vec)
        combo = list(combo)
        for lead, rvec, rcombo in rows:
            coef = vec[lead]
            if spec.is_zero(coef):
                continue
            for idx in range(c):
                vec[idx] = spec.sub(vec[idx], spec.mul(coef, rvec[idx]))
            for idx in range(len(combo)):
                if idx < len(rcombo):
                    combo[idx] = spec.sub(combo[idx],
                                          spec.mul(coef, rcombo[idx]))
        return vec, combo

    deg = 0
    current = tuple(unit)
    while True:
        combo = [spec.zero] * (deg + 1)
        combo[deg] = spec.one
        vec, combo = reduce(current, combo)
        nz = next((i for i, v in enumerate(vec) if not spec.is_zero(v)), None)
        if nz is None:
            # dependence found: combo gives sum c_j w^j = 0, monic in degree deg
            return poly_trim(spec, combo)
        inv = spec.inv(vec[nz])
        vec = [spec.mul(v, inv) for v in vec]
        combo = [spec.mul(v, inv) for v in combo]
        rows.append((nz, vec, combo))
        rows.sort(key=lambda t: t[0])
        deg += 1
        current = cb.product(current, w)


def _eval_poly_at(cb, poly, w, unit):
    """Evaluate a polynomial at a center element, with w^0 = unit."""
    spec = cb.spec
    acc = tuple([spec.zero] * cb.class_count)
    for coef in reversed(poly):
        acc = cb.product(acc, w)
        if not spec.is_zero(coef):
            acc = tuple(spec.add(a, spec.mul(coef, u))
                        for a, u in zip(acc, unit))
    return acc


def block_decompose(A, G, p, seed=0):
    """All primitive central idempotents of kG with their block data.

    Refines orthogonal central idempotents by factoring minimal polynomials
    of class sums (distinct-degree plus equal-degree splitting, PRNG seeded
    deterministically).  Blocks are ordered: principal first, then by
    dimension, then by idempotent coordinates.
    """
    spec = A.field
    if spec.p != p:
        raise FieldMismatch("algebra characteristic differs from p")
    cb = center(A, G)
    c = cb.class_count
    unit = cb.unit_vector()
    idems = [unit]
    changed = True
    while changed:
        changed = False
        for i in range(c):
            zi = tuple(spec.one if j == i else spec.zero for j in range(c))
            new_idems = []
            for e in idems:
                w = cb.product(zi, e)
                mu = _min_poly_in_subalgebra(cb, w, e)
                factors = poly_factor(spec, mu, seed=seed)
                if len(factors) <= 1:
                    new_idems.append(e)
                    continue
                changed = True
                for irr, mult in factors:
                    irr_pow = [spec.one]
                    for _ in range(mult):
                        irr_pow = poly_mul(spec, irr_pow, list(irr))
                    q, rem = poly_divmod(spec, mu, irr_pow)
                    assert not rem
                    g, u, _ = poly_ext_gcd(spec, q, irr_pow)
                    assert len(g) == 1  # coprime
                    h = poly_mod(spec, poly_mul(spec, u, q), mu)
                    f = _eval_poly_at(cb, h, w, e)
                    assert cb.product(f, f) == f, "refinement not idempotent"
                    new_idems.append(f)
            idems = new_idems
    # sanity: orthogonal, complete
    total = tuple([spec.zero] * c)
    for e in idems:
        total = tuple(spec.add(a, b) for a, b in zip(total, e))
    assert total == unit, "idempotents do not sum to 1"
    for a in range(len(idems)):
        for b in range(a + 1, len(idems)):
            prod = cb.product(idems[a], idems[b])
            assert all(spec.is_zero(v) for v in prod), "idempotents not orthogonal"

    classes = G.conjugacy_classes()
    class_sizes = [cl.size for cl in classes]
    blocks = []
    for e in idems:
        lam = _central_character(cb, e, seed)
        principal = all(
            lam[i] == spec.from_int(class_sizes[i]) for i in range(c))
        defect = max(
            p_adic_valuation(classes[i].centralizer_order, p)
            for i in range(c) if not spec.is_zero(e[i]))
        blocks.append((e, lam, principal, defect))

    dims = [None] * len(blocks)
    if G.order <= MATERIALIZE_DIM_CAP:
        for bi, (e, lam, principal, defect) in enumerate(blocks):
            dims[bi] = _block_dimension(A, G, e)
        if sum(dims) != G.order:
            raise SplitFieldTooSmall(
                "block dimensions do not sum to |G|")

    def sort_key(item):
        (e, lam, principal, defect), dim = item
        return (0 if principal else 1,
                dim if dim is not None else 1 << 60,
                tuple(e))

    ordered = sorted(zip(blocks, dims), key=sort_key)
    out = []
    for idx, ((e, lam, principal, defect), dim) in enumerate(ordered):
        out.append(BlockData(index=idx, idempotent_class_coords=e, dim=dim,
                             defect=defect, is_principal=principal,
                             central_character=lam, spec=spec, group=G))
    return out


def _central_character(cb, e, seed):
    """lambda(class sum i) for the block with idempotent e.

    The minimal polynomial of z_i e on eZ is a power of a single linear
    factor; its root is the character value.  A nonlinear factor means the
    field fails to split the center.
    """
    spec = cb.spec
    c = cb.class_count
    lam = []
    for i in range(c):
        zi = tuple(spec.one if j == i else spec.zero for j in range(c))
        w = cb.product(zi, e)
        mu = _min_poly_in_subalgebra(cb, w, e)
        roots, all_linear = poly_roots_of_split(spec, mu, seed=seed)
        if not all_linear:
            raise SplitFieldTooSmall(
                "central character value outside the field; "
                "splitting degree computation is wrong")
        assert len(roots) == 1, "character minimal polynomial not primary"
        lam.append(roots[0][0])
    return tuple(lam)


def _block_dimension(A, G, e_class_coords):
    """dim kGb as the rank of right multiplication by the idempotent."""
    from .ffield import rank_nullspace_raw
    spec = A.field
    n = G.order
    classes = G.conjugacy_classes()
    bvec = [spec.zero] * n
    for ci, cl in enumerate(classes):
        coef = e_class_coords[ci]
        if not spec.is_zero(coef):
            for i in cl.indices:
                bvec[int(i)] = coef
    rows = []
    for j in range(n):
        row = {}
        for g, vg in enumerate(bvec):
            if spec.is_zero(vg):
                continue
            k = G.product_index(j, g)
            row[k] = spec.add(row.get(k, spec.zero), vg)
        rows.append({c: v for c, v in row.items() if not spec.is_zero(v)})
    rank, _ = rank_nullspace_raw(rows, n, spec, want_basis=False)
    return rank


def block_algebra(A, b):
    """The block algebra kGb on a reduced basis of the ideal A*b.

    Basis rows are the reduced echelon form of {e_i b}; structure constants
    are recomputed on that basis and the unit is b itself.
    """
    from .ffield import echelonize
    spec = A.field
    G = b.group
    n = A.dim
    if n > MATERIALIZE_DIM_CAP:
        raise DimCapExceeded("block algebra of a stretch-scale group")
    bvec = b.idempotent_vector()
    raw_rows = []
    for i in range(n):
        prod = A.multiply(A.basis_vector(i), bvec)
        raw_rows.append({c: v for c, v in enumerate(prod)
                         if not spec.is_zero(v)})
    pivots, rowlist = echelonize(raw_rows, n, spec)
    order = sorted(pivots)
    basis = []
    for col in order:
        row = rowlist[pivots[col]]
        basis.append(tuple(row.get(cc, spec.zero) for cc in range(n)))
    d = len(basis)
    if b.dim is not None:
        assert d == b.dim, "ideal basis does not match block dimension"
    pivot_cols = order

    def express(vec):
        # RREF basis: coefficients are the pivot coordinates
        coeffs = tuple(vec[pc] for pc in pivot_cols)
        # verify exact reconstruction (catches vectors outside the ideal)
        recon = [spec.zero] * n
        for coef, brow in zip(coeffs, basis):
            if spec.is_zero(coef):
                continue
            for idx in range(n):
                recon[idx] = spec.add(recon[idx], spec.mul(coef, brow[idx]))
        assert tuple(recon) == tuple(vec), "vector outside the block ideal"
        return coeffs

    sc = {}
    for i in range(d):
        for j in range(d):
            prod = A.multiply(basis[i], basis[j])
            coeffs = express(prod)
            sc[i, j] = tuple((k, v) for k, v in enumerate(coeffs)
                             if not spec.is_zero(v))
    unit = express(bvec)
    labels = [f"b{b.index}_{i}" for i in range(d)]
    return StructAlgebra(spec, d, labels, sc, unit)


def defect_number(b, G, p):
    """Defect d of a block: the largest nu_p(|C_G(x)|) over the classes
    carrying a nonzero coefficient of the block idempotent."""
    spec = b.spec
    classes = G.conjugacy_classes()
    return max(p_adic_valuation(classes[i].centralizer_order, p)
               for i in range(len(classes))
               if not spec.is_zero(b.idempotent_class_coords[i]))


def tensor_algebra(A, B):
    """Tensor product algebra on the pair basis."""
    if A.field != B.field:
        raise FieldMismatch("tensor factors over different fields")
    spec = A.field
    n, m = A.dim, B.dim
    if n * m > TENSOR_DIM_CAP:
        raise DimCapExceeded(f"tensor dimension {n * m} exceeds cap")

    def pair(i, ip):
        return i * m + ip

    sc = {}
    for i in range(n):
        for j in range(n):
            terms_a = A.sc[i, j]
            for ip in range(m):
                for jp in range(m):
                    terms_b = B.sc[ip, jp]
                    entries = []
                    for k, ck in terms_a:
                        for kp, ckp in terms_b:
                            entries.append((pair(k, kp), spec.mul(ck, ckp)))
                    sc[pair(i, ip), pair(j, jp)] = tuple(entries)
    unit = [spec.zero] * (n * m)
    for i, ci in enumerate(A.unit):
        if spec.is_zero(ci):
            continue
        for ip, cip in enumerate(B.unit):
            if not spec.is_zero(cip):
                unit[pair(i, ip)] = spec.mul(ci, cip)
    labels = [f"{la}*{lb}" for la in A.labels for lb in B.labels]
    return StructAlgebra(spec, n * m, labels, sc, tuple(unit))
