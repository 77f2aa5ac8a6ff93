"""Permutation groups by explicit element enumeration.

Groups are given by generators acting on {0..degree-1}; the element set is
enumerated breadth-first (capped), kept as a numpy array of image rows, and
all invariants (conjugacy classes, centralizers, Sylow subgroups, derived
data) are computed by direct scans over that array.  This is deliberate:
every target group fits in memory as image lists, and scans vectorise well.

The on-disk group format is text: a ``degree n`` line, then one generator
per line as n whitespace-separated 1-based images.  Lines starting with
``#`` and blank lines are ignored.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import (InvalidPermutation, NotAMember, NotASubgroup,
                     OrderCapExceeded)
from .ffield import p_adic_valuation

DEFAULT_ORDER_CAP = 1 << 21
DEFAULT_MEMORY_CAP = 32 << 20  # bytes for the enumerated element table


class Perm:
    """A permutation of {0..degree-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise InvalidPermutation(f"not a bijection: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other):
        # (a*b)(x) = a(b(x))
        if other.degree != self.degree:
            raise InvalidPermutation("degree mismatch")
        b = other.images
        a = self.images
        return Perm(a[b[x]] for x in range(len(a)))

    def inv(self):
        out = [0] * self.degree
        for x, y in enumerate(self.images):
            out[y] = x
        return Perm(out)

    def order(self):
        seen = [False] * self.degree
        result = 1
        for start in range(self.degree):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
                length += 1
            result = math.lcm(result, length)
        return result

    def cycles(self):
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Perm) and other.images == self.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"


@dataclass(frozen=True)
class ConjClass:
    """One conjugacy class: representative, size, |C_G(rep)|, member indices."""

    representative: Perm
    size: int
    centralizer_order: int
    indices: np.ndarray = field(repr=False, compare=False)


def _np_dtype(degree):
    return np.uint8 if degree <= 255 else np.uint16


def _closure_rows(degree, gen_rows, order_cap, memory_cap):
    """Breadth-first closure of generator image rows.

    Returns (elements array, index dict bytes->row number).  Enumeration
    order is deterministic: BFS level by level, lexicographic inside each
    level, identity first.
    """
    dtype = _np_dtype(degree)
    itemsize = np.dtype(dtype).itemsize
    ident = np.arange(degree, dtype=dtype)
    gens = [np.asarray(g, dtype=dtype) for g in gen_rows]
    index = {ident.tobytes(): 0}
    rows = [ident]
    frontier = np.array([ident])
    while len(frontier):
        if not gens:
            break
        batch = np.concatenate([frontier[:, g] for g in gens])
        batch = np.unique(batch, axis=0)
        fresh = []
        for row in batch:
            key = row.tobytes()
            if key not in index:
                index[key] = len(rows) + len(fresh)
                fresh.append(row)
        if not fresh:
            break
        total = len(rows) + len(fresh)
        if total > order_cap:
            raise OrderCapExceeded(
                f"enumeration exceeded the order cap {order_cap}")
        if total * degree * itemsize > memory_cap:
            raise OrderCapExceeded(
                f"enumeration needs more than {memory_cap} bytes "
                f"({total} elements of degree {degree}); "
                "raise the memory cap (--allow-large) for stretch groups")
        rows.extend(fresh)
        frontier = np.array(fresh)
    return np.array(rows), index


class PermGroup:
    """A finite permutation group with fully enumerated elements.

    Immutable after construction.  Lazy invariants (conjugacy classes,
    inverse table) are computed once under a lock, so concurrent readers
    observe a single consistent result.
    """

    def __init__(self, degree, generators, elements, index,
                 order_cap=DEFAULT_ORDER_CAP, memory_cap=DEFAULT_MEMORY_CAP):
        self.degree = degree
        self.generators = list(generators)
        self._elements = elements
        self._index = index
        self.order = len(elements)
        self.order_cap = order_cap
        self.memory_cap = memory_cap
        self._lock = threading.Lock()
        self._classes = None
        self._inv_index = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_generators(cls, degree, generators,
                        order_cap=DEFAULT_ORDER_CAP,
                        memory_cap=DEFAULT_MEMORY_CAP):
        gens = []
        for g in generators:
            perm = g if isinstance(g, Perm) else Perm(g)
            if perm.degree != degree:
                raise InvalidPermutation(
                    f"generator degree {perm.degree} != {degree}")
            gens.append(perm)
        rows, index = _closure_rows(degree, [g.images for g in gens],
                                    order_cap, memory_cap)
        return cls(degree, gens, rows, index, order_cap, memory_cap)

    @classmethod
    def from_element_rows(cls, degree, rows, order_cap=DEFAULT_ORDER_CAP,
                          memory_cap=DEFAULT_MEMORY_CAP):
        """Subgroup from an explicit element array; generators extracted
        greedily in row order (deterministic)."""
        gens = []
        known = {np.arange(degree, dtype=_np_dtype(degree)).tobytes()}
        for row in rows:
            if row.tobytes() in known:
                continue
            gens.append(Perm(row))
            closed, _ = _closure_rows(degree, [g.images for g in gens],
                                      order_cap, memory_cap)
            known = {r.tobytes() for r in closed}
        return cls.from_generators(degree, gens, order_cap, memory_cap)

    # -- basic queries -------------------------------------------------------

    def element(self, i):
        return Perm(self._elements[i])

    def elements(self):
        return [Perm(r) for r in self._elements]

    def element_rows(self):
        return self._elements

    def index_of(self, perm):
        key = np.asarray(perm.images, dtype=self._elements.dtype).tobytes()
        idx = self._index.get(key)
        if idx is None:
            raise NotAMember(f"{perm!r} is not in the group")
        return idx

    def contains(self, perm):
        if perm.degree != self.degree:
            return False
        key = np.asarray(perm.images, dtype=self._elements.dtype).tobytes()
        return key in self._index

    def product_index(self, i, j):
        """Index of element i composed with element j (apply j first)."""
        row = self._elements[i][self._elements[j]]
        return self._index[row.tobytes()]

    def inverse_index(self, i):
        self._ensure_inverses()
        return int(self._inv_index[i])

    def _ensure_inverses(self):
        with self._lock:
            if self._inv_index is None:
                inv_rows = self.inverse_rows()
                self._inv_index = np.array(
                    [self._index[r.tobytes()] for r in inv_rows])

    def inverse_rows(self):
        return np.argsort(self._elements, axis=1).astype(self._elements.dtype)

    def is_subgroup_of(self, other):
        if self.degree != other.degree:
            return False
        sub = np.asarray(self._elements, dtype=other._elements.dtype)
        return all(r.tobytes() in other._index for r in sub)

    # -- conjugacy classes ---------------------------------------------------

    def conjugacy_classes(self):
        with self._lock:
            if self._classes is None:
                self._classes = self._compute_classes()
        return self._classes

    def _compute_classes(self):
        E = self._elements
        n = self.order
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

        for g in self.generators:
            garr = np.asarray(g.images, dtype=E.dtype)
            ginv = np.asarray(g.inv().images, dtype=E.dtype)
            conj = garr[E[:, ginv]]
            for i in range(n):
                union(i, self._index[conj[i].tobytes()])
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        classes = []
        for rep in sorted(groups):
            idxs = np.array(groups[rep])
            size = len(idxs)
            classes.append(ConjClass(self.element(rep), size,
                                     self.order // size, idxs))
        return classes

    def class_of_array(self):
        """Array mapping element index -> conjugacy class index."""
        out = np.zeros(self.order, dtype=np.int64)
        for ci, cl in enumerate(self.conjugacy_classes()):
            out[cl.indices] = ci
        return out

    def exponent(self):
        e = 1
        for cl in self.conjugacy_classes():
            e = math.lcm(e, cl.representative.order())
        return e

    def p_regular_class_count(self, p):
        return sum(1 for cl in self.conjugacy_classes()
                   if cl.representative.order() % p != 0)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def group_from_generators(degree, generators, order_cap=DEFAULT_ORDER_CAP,
                          memory_cap=DEFAULT_MEMORY_CAP):
    """Enumerate the group generated by the given permutations."""
    return PermGroup.from_generators(degree, generators, order_cap, memory_cap)


def conjugacy_classes(G):
    return G.conjugacy_classes()


def centralizer(G, g):
    """Subgroup of all elements commuting with g (g must lie in G)."""
    gidx = G.index_of(g)  # raises NotAMember
    if gidx == 0:
        return G
    E = G._elements
    garr = np.asarray(g.images, dtype=E.dtype)
    commutes = np.all(E[:, garr] == garr[E], axis=1)
    return PermGroup.from_element_rows(G.degree, E[commutes],
                                       G.order_cap, G.memory_cap)


def subgroup_centralizer(G, H):
    """Elements of G commuting with every element of H."""
    E = G._elements
    mask = np.ones(len(E), dtype=bool)
    for h in H.generators:
        harr = np.asarray(h.images, dtype=E.dtype)
        mask &= np.all(E[:, harr] == harr[E], axis=1)
    return PermGroup.from_element_rows(G.degree, E[mask],
                                       G.order_cap, G.memory_cap)


def normalizer(G, H):
    """Normalizer of a subgroup H in G."""
    if not H.is_subgroup_of(G):
        raise NotASubgroup("H is not a subgroup of G")
    E = G._elements
    einv = G.inverse_rows()
    hkeys = {r.tobytes() for r in np.asarray(H._elements, dtype=E.dtype)}
    mask = np.ones(len(E), dtype=bool)
    for h in H.generators:
        harr = np.asarray(h.images, dtype=E.dtype)
        conj = np.take_along_axis(E, harr[einv], axis=1)  # rows n h n^-1
        ok = np.fromiter((conj[i].tobytes() in hkeys for i in range(len(E))),
                         count=len(E), dtype=bool)
        mask &= ok
    return PermGroup.from_element_rows(G.degree, E[mask],
                                       G.order_cap, G.memory_cap)


def sylow_subgroup(G, p, order_cap=None, memory_cap=None):
    """A Sylow p-subgroup, grown through normalizers.

    Returns the trivial group when p does not divide |G|.  A p-subgroup
    that is not yet Sylow is properly contained in a larger p-subgroup of
    its normalizer, so repeatedly adjoining a p-element of the normalizer
    reaches the full p-part.
    """
    order_cap = order_cap if order_cap is not None else G.order_cap
    memory_cap = memory_cap if memory_cap is not None else G.memory_cap
    target = p ** p_adic_valuation(G.order, p)
    ident_rows = G._elements[:1]
    Q = PermGroup.from_element_rows(G.degree, ident_rows,
                                    order_cap, memory_cap)
    if target == 1:
        return Q
    # seed with a p-element derived from the first element of order
    # divisible by p in enumeration order
    seed = None
    for i in range(G.order):
        e = G.element(i)
        o = e.order()
        if o % p == 0:
            power = o // (p ** p_adic_valuation(o, p))
            acc = Perm.identity(G.degree)
            for _ in range(power):
                acc = acc * e
            seed = acc
            break
    Q = PermGroup.from_generators(G.degree, [seed], order_cap, memory_cap)
    while Q.order < target:
        N = normalizer(G, Q)
        qkeys = {r.tobytes() for r in Q._elements}
        grown = False
        for i in range(N.order):
            row = N._elements[i]
            if row.tobytes() in qkeys:
                continue
            cand = Perm(row)
            o = cand.order()
            if o != 1 and o == p ** p_adic_valuation(o, p):
                Q = PermGroup.from_generators(
                    G.degree, Q.generators + [cand], order_cap, memory_cap)
                grown = True
                break
        if not grown:  # pragma: no cover - cannot happen for valid input
            raise OrderCapExceeded("sylow growth stalled")
    return Q


def p_rank_abelianization(H, p, order_cap=None, memory_cap=None):
    """Rank d with H/[H,H]H^p elementary abelian of order p^d.

    Computed as the index of the normal closure of generator commutators
    and generator p-th powers.
    """
    order_cap = order_cap if order_cap is not None else H.order_cap
    memory_cap = memory_cap if memory_cap is not None else H.memory_cap
    if H.order == 1:
        return 0
    gens = H.generators
    seed = []
    for a in gens:
        for b in gens:
            seed.append(a.inv() * b.inv() * a * b)
        ap = Perm.identity(H.degree)
        for _ in range(p):
            ap = ap * a
        seed.append(ap)
    kgens = []
    known = {Perm.identity(H.degree).images}
    for s in seed:
        if s.images not in known:
            kgens.append(s)
            rows, _ = _closure_rows(H.degree, [g.images for g in kgens],
                                    order_cap, memory_cap)
            known = {tuple(r) for r in rows}
    # normal closure under conjugation by the generators of H
    changed = True
    while changed:
        changed = False
        for h in gens:
            hinv = h.inv()
            for s in list(kgens):
                c = h * s * hinv
                if c.images not in known:
                    kgens.append(c)
                    rows, _ = _closure_rows(H.degree,
                                            [g.images for g in kgens],
                                            order_cap, memory_cap)
                    known = {tuple(r) for r in rows}
                    changed = True
    sub_order = len(known)
    index, rem = divmod(H.order, sub_order)
    assert rem == 0, "commutator closure is not a subgroup?"
    d = 0
    while index % p == 0:
        index //= p
        d += 1
    assert index == 1, "abelianized quotient is not elementary abelian"
    return d


def direct_product(G, H, order_cap=None, memory_cap=None):
    """G x H acting on the disjoint union of the two point sets."""
    order_cap = order_cap if order_cap is not None else max(G.order_cap,
                                                            H.order_cap)
    memory_cap = memory_cap if memory_cap is not None else max(G.memory_cap,
                                                               H.memory_cap)
    d1, d2 = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(Perm(list(g.images) + [d1 + x for x in range(d2)]))
    for h in H.generators:
        gens.append(Perm(list(range(d1)) + [d1 + x for x in h.images]))
    P = PermGroup.from_generators(d1 + d2, gens, order_cap, memory_cap)
    if P.order != G.order * H.order:
        raise OrderCapExceeded(
            "direct product enumeration produced a wrong order")
    return P


# ---------------------------------------------------------------------------
# Group files
# ---------------------------------------------------------------------------


def parse_group_file(text):
    """Parse the text group format; returns (degree, [Perm])."""
    degree = None
    gens = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "degree":
                raise InvalidPermutation(
                    f"line {lineno}: expected 'degree n', got {line!r}")
            degree = int(parts[1])
            continue
        images = [int(tok) - 1 for tok in line.split()]
        if len(images) != degree:
            raise InvalidPermutation(
                f"line {lineno}: expected {degree} images, got {len(images)}")
        gens.append(Perm(images))
    if degree is None:
        raise InvalidPermutation("missing 'degree n' header")
    return degree, gens


def load_group_file(path, order_cap=DEFAULT_ORDER_CAP,
                    memory_cap=DEFAULT_MEMORY_CAP):
    with open(path, "r", encoding="utf-8") as fh:
        degree, gens = parse_group_file(fh.read())
    return PermGroup.from_generators(degree, gens, order_cap, memory_cap)


def format_group_file(degree, gens, comment=None):
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"degree {degree}")
    for g in gens:
        lines.append(" ".join(str(x + 1) for x in g.images))
    return "\n".join(lines) + "\n"
