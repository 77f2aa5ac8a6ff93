"""Exact arithmetic in GF(p^m) and rank/nullspace kernels.

Field elements are stored in one of three raw shapes chosen by the field:

* ``m == 1``      -- a plain int in ``[0, p)``;
* ``p == 2, m>1`` -- an int whose bit ``i`` is the coefficient of ``t^i``;
* ``p > 2, m>1``  -- a tuple of ``m`` ints mod ``p`` (ascending powers).

The raw shapes are an internal detail; the public surface is `FieldSpec`,
`FieldElement`, `SparseMatrix`, `field_make` and `mat_rank_nullspace`.
Everything here is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from random import Random

import numpy as np

from .errors import DegreeOutOfRange, DivisionByZero, FieldMismatch, NotPrime

MAX_EXTENSION_DEGREE = 16
DENSE_KERNEL_LIMIT = 256  # dense elimination below this many rows and cols


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    """Ascending list of the distinct prime divisors of n."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def p_adic_valuation(n, p):
    v = 0
    while n % p == 0 and n > 0:
        v += 1
        n //= p
    return v


# ---------------------------------------------------------------------------
# GF(2)[t] on packed ints: bit i of the int is the coefficient of t^i.
# ---------------------------------------------------------------------------

_SPREAD = [0] * 256
for _b in range(256):
    _s = 0
    for _i in range(8):
        if _b >> _i & 1:
            _s |= 1 << (2 * _i)
    _SPREAD[_b] = _s


def _gf2p_mul(a, b):
    if a == 0 or b == 0:
        return 0
    res = 0
    while b:
        low = b & -b
        res ^= a << (low.bit_length() - 1)
        b ^= low
    return res


def _gf2p_sq(a):
    res = 0
    shift = 0
    while a:
        res |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return res


def _gf2p_mod(a, f):
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df and a:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _gf2p_divmod(a, f):
    df = f.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= df and a:
        shift = a.bit_length() - 1 - df
        q |= 1 << shift
        a ^= f << shift
    return q, a


def _gf2p_gcd(a, b):
    while b:
        a, b = b, _gf2p_mod(a, b)
    return a


def _gf2p_irreducible(f):
    """Rabin irreducibility test for a monic packed poly over GF(2)."""
    m = f.bit_length() - 1
    if m < 1:
        return False
    checkpoints = {m // q for q in prime_factors(m)}
    r = 2  # the polynomial t
    for j in range(1, m + 1):
        r = _gf2p_mod(_gf2p_sq(r), f)
        if j in checkpoints and _gf2p_gcd(r ^ 2, f) != 1:
            return False
    return r == 2


# ---------------------------------------------------------------------------
# F_p[t] on coefficient tuples (ascending powers), p odd prime.
# ---------------------------------------------------------------------------


def _fpp_trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _fpp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fpp_trim(out)


def _fpp_mod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * fi) % p
        a.pop()
    return _fpp_trim(a)

def _fpp_gcd(a, b, p):
    while b:
        binv = pow(b[-1], p - 2, p)
        bm = tuple(x * binv % p for x in b)
        a, b = b, _fpp_mod(a, bm, p)
    return a


def _fpp_powmod(base, e, f, p):
    result = (1,)
    base = _fpp_mod(base, f, p)
    while e:
        if e & 1:
            result = _fpp_mod(_fpp_mul(result, base, p), f, p)
        base = _fpp_mod(_fpp_mul(base, base, p), f, p)
        e >>= 1
    return result


def _fpp_irreducible(f, p):
    """Rabin test for a monic coefficient-tuple poly over F_p, p odd."""
    m = len(f) - 1
    if m < 1:
        return False
    checkpoints = {m // q for q in prime_factors(m)}
    x = (0, 1)
    r = x
    for j in range(1, m + 1):
        r = _fpp_powmod(r, p, f, p)
        if j in checkpoints:
            diff = _fpp_trim([(r[i] if i < len(r) else 0) - (x[i] if i < len(x) else 0) for i in range(max(len(r), 2))])
            diff = tuple(v % p for v in diff)
            if len(_fpp_gcd(f, diff, p)) - 1 != 0:
                return False
    return r == x


# ---------------------------------------------------------------------------
# Field construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A finite field GF(p^m) with a fixed irreducible modulus.

    ``modulus`` is the monic degree-m polynomial as a coefficient tuple,
    constant term first.  Construction goes through `field_make`, which
    always picks the same modulus for the same (p, m).
    """

    p: int
    m: int
    modulus: tuple

    @property
    def order(self):
        return self.p ** self.m

    @property
    def _kind(self):
        if self.m == 1:
            return "prime"
        return "gf2" if self.p == 2 else "tuple"

    @property
    def _modint(self):
        # packed modulus for the gf2 representation
        v = 0
        for i, c in enumerate(self.modulus):
            if c:
                v |= 1 << i
        return v

    # -- raw constants ------------------------------------------------------

    @property
    def zero(self):
        return 0 if self._kind != "tuple" else ()

    @property
    def one(self):
        return 1 if self._kind != "tuple" else (1,)

    def from_int(self, n):
        """Embed an integer via the prime subfield."""
        n %= self.p
        if self._kind == "tuple":
            return (n,) if n else ()
        return n

    def is_zero(self, a):
        return a == self.zero

    # -- raw arithmetic -----------------------------------------------------

    def add(self, a, b):
        k = self._kind
        if k == "prime":
            return (a + b) % self.p
        if k == "gf2":
            return a ^ b
        la, lb = len(a), len(b)
        if la < lb:
            a, b, la, lb = b, a, lb, la
        out = list(a)
        for i in range(lb):
            out[i] = (out[i] + b[i]) % self.p
        return _fpp_trim(out)

    def neg(self, a):
        k = self._kind
        if k == "prime":
            return (-a) % self.p
        if k == "gf2":
            return a
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        k = self._kind
        if k == "prime":
            return a * b % self.p
        if k == "gf2":
            return _gf2p_mod(_gf2p_mul(a, b), self._modint)
        return _fpp_mod(_fpp_mul(a, b, self.p), self.modulus, self.p)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("inverse of zero")
        k = self._kind
        if k == "prime":
            return pow(a, self.p - 2, self.p)
        if k == "gf2":
            # extended Euclid in GF(2)[t]
            r0, r1 = self._modint, a
            s0, s1 = 0, 1
            while r1:
                q, r = _gf2p_divmod(r0, r1)
                r0, r1 = r1, r
                s0, s1 = s1, s0 ^ _gf2p_mul(q, s1)
            return _gf2p_mod(s0, self._modint)
        # generic extended Euclid over F_p[t]
        p = self.p
        r0, r1 = self.modulus, a
        s0, s1 = (), (1,)
        while r1:
            linv = pow(r1[-1], p - 2, p)
            r1m = tuple(x * linv % p for x in r1)
            # long division r0 = q*r1m + rem
            rem = list(r0)
            q = [0] * max(1, len(rem) - len(r1m) + 1)
            while len(rem) >= len(r1m) and _fpp_trim(rem):
                rem = list(_fpp_trim(rem))
                if len(rem) < len(r1m):
                    break
                shift = len(rem) - len(r1m)
                lead = rem[-1]
                q[shift] = (q[shift] + lead) % p
                for i, fi in enumerate(r1m):
                    rem[shift + i] = (rem[shift + i] - lead * fi) % p
                rem.pop()
            qs = _fpp_mul(_fpp_trim(q), (linv,), p)
            r0, r1 = r1, _fpp_trim(rem)
            s0, s1 = s1, self.sub(s0, _fpp_mod(_fpp_mul(qs, s1, p), self.modulus, p))
        # r0 is the gcd (a unit); normalise
        c = pow(r0[0] if len(r0) == 1 else r0[-1], p - 2, p)
        return _fpp_mod(_fpp_mul(s0, (c,), p), self.modulus, p)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def frobenius(self, a):
        return self.pow(a, self.p)

    def frobenius_inv(self, a):
        # p-th root: Frobenius applied m-1 times
        for _ in range(self.m - 1):
            a = self.frobenius(a)
        return a

    def elements(self):
        """Iterate all raw elements (small fields only)."""
        if self.order > 1 << 20:
            raise DegreeOutOfRange("field too large to enumerate")
        k = self._kind
        if k == "prime":
            yield from range(self.p)
        elif k == "gf2":
            yield from range(self.order)
        else:
            def rec(prefix, left):
                if left == 0:
                    yield _fpp_trim(prefix)
                    return
                for c in range(self.p):
                    yield from rec(prefix + [c], left - 1)
            yield from rec([], self.m)

    def coeffs(self, a):
        """Coefficient tuple (length m, constant first) of a raw element."""
        k = self._kind
        if k == "prime":
            return (a,)
        if k == "gf2":
            return tuple(a >> i & 1 for i in range(self.m))
        return tuple(a) + (0,) * (self.m - len(a))


@lru_cache(maxsize=None)
def _lex_least_irreducible(p, m):
    """Monic irreducible of degree m over F_p whose tail coefficient vector
    (constant term first) is smallest when read as a little-endian base-p
    integer.  The scan order is what makes field construction reproducible.
    """
    if m == 1:
        return (0, 1)  # the polynomial t
    if p == 2:
        for tail in range(1 << m):
            f = tail | 1 << m
            if _gf2p_irreducible(f):
                return tuple(f >> i & 1 for i in range(m + 1))
    else:
        for value in range(p ** m):
            tail = []
            v = value
            for _ in range(m):
                tail.append(v % p)
                v //= p
            f = tuple(tail) + (1,)
            if _fpp_irreducible(f, p):
                return f
    raise DegreeOutOfRange(f"no irreducible of degree {m} over F_{p}")  # pragma: no cover


def field_make(p, m, *, _allow_large_degree=False):
    """Construct the canonical GF(p^m).

    Raises NotPrime / DegreeOutOfRange.  Degrees above
    ``MAX_EXTENSION_DEGREE`` are refused unless the caller explicitly opts
    in (the large-run path does, for splitting fields of big groups).
    """
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if not isinstance(m, int) or m < 1:
        raise DegreeOutOfRange(f"extension degree {m} out of range")
    if m > MAX_EXTENSION_DEGREE and not _allow_large_degree:
        raise DegreeOutOfRange(
            f"extension degree {m} exceeds {MAX_EXTENSION_DEGREE}; "
            "pass allow_large=True on the calling operation to override")
    return FieldSpec(p, m, _lex_least_irreducible(p, m))


class FieldElement:
    """An element of a `FieldSpec`, wrapping the raw representation."""

    __slots__ = ("spec", "raw")

    def __init__(self, spec, raw):
        self.spec = spec
        self.raw = raw

    @classmethod
    def from_int(cls, spec, n):
        return cls(spec, spec.from_int(n))

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatch("operands from different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.add(self.raw, other.raw))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.sub(self.raw, other.raw))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.raw))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.raw, other.raw))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.raw, self.spec.inv(other.raw)))

    def __pow__(self, e):
        return FieldElement(self.spec, self.spec.pow(self.raw, e))

    def inv(self):
        return FieldElement(self.spec, self.spec.inv(self.raw))

    def frobenius(self):
        return FieldElement(self.spec, self.spec.frobenius(self.raw))

    def is_zero(self):
        return self.spec.is_zero(self.raw)

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and other.spec == self.spec and other.raw == self.raw)

    def __hash__(self):
        return hash((self.spec.p, self.spec.m, self.raw))

    def __repr__(self):
        return f"FieldElement(GF({self.spec.p}^{self.spec.m}), {self.spec.coeffs(self.raw)})"


# ---------------------------------------------------------------------------
# Polynomials over an arbitrary FieldSpec (coefficient lists of raw values,
# ascending powers).  Used for minimal polynomials and their factorisation.
# ---------------------------------------------------------------------------


def poly_trim(spec, c):
    n = len(c)
    while n and spec.is_zero(c[n - 1]):
        n -= 1
    return list(c[:n])


def poly_add(spec, a, b):
    out = list(a) + [spec.zero] * (len(b) - len(a)) if len(a) < len(b) else list(a)
    for i, bi in enumerate(b):
        out[i] = spec.add(out[i], bi)
    return poly_trim(spec, out)


def poly_sub(spec, a, b):
    return poly_add(spec, a, [spec.neg(x) for x in b])


def poly_scale(spec, a, c):
    return poly_trim(spec, [spec.mul(x, c) for x in a])


def poly_mul(spec, a, b):
    if not a or not b:
        return []
    out = [spec.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not spec.is_zero(ai):
            for j, bj in enumerate(b):
                out[i + j] = spec.add(out[i + j], spec.mul(ai, bj))
    return poly_trim(spec, out)


def poly_divmod(spec, a, b):
    b = poly_trim(spec, b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    binv = spec.inv(b[-1])
    q = [spec.zero] * max(0, len(a) - db)
    while len(poly_trim(spec, a)) - 1 >= db:
        a = poly_trim(spec, a)
        shift = len(a) - 1 - db
        coef = spec.mul(a[-1], binv)
        q[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] = spec.sub(a[shift + i], spec.mul(coef, bi))
    return poly_trim(spec, q), poly_trim(spec, a)


def poly_mod(spec, a, b):
    return poly_divmod(spec, a, b)[1]


def poly_monic(spec, a):
    a = poly_trim(spec, a)
    if not a:
        return a
    return poly_scale(spec, a, spec.inv(a[-1]))


def poly_gcd(spec, a, b):
    a, b = poly_trim(spec, a), poly_trim(spec, b)
    while b:
        a, b = b, poly_mod(spec, a, b)
    return poly_monic(spec, a)


def poly_ext_gcd(spec, a, b):
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = poly_trim(spec, a), poly_trim(spec, b)
    u0, u1 = [spec.one], []
    v0, v1 = [], [spec.one]
    while r1:
        q, r = poly_divmod(spec, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_sub(spec, u0, poly_mul(spec, q, u1))
        v0, v1 = v1, poly_sub(spec, v0, poly_mul(spec, q, v1))
    if r0:
        c = spec.inv(r0[-1])
        r0 = poly_scale(spec, r0, c)
        u0 = poly_scale(spec, u0, c)
        v0 = poly_scale(spec, v0, c)
    return r0, u0, v0


def poly_pow_mod(spec, base, e, mod):
    result = [spec.one]
    base = poly_mod(spec, base, mod)
    while e:
        if e & 1:
            result = poly_mod(spec, poly_mul(spec, result, base), mod)
        base = poly_mod(spec, poly_mul(spec, base, base), mod)
        e >>= 1
    return result


def poly_deriv(spec, a):
    out = []
    for i in range(1, len(a)):
        c = spec.from_int(i)
        out.append(spec.mul(a[i], c))
    return poly_trim(spec, out)


def poly_eval(spec, a, x):
    acc = spec.zero
    for c in reversed(a):
        acc = spec.add(spec.mul(acc, x), c)
    return acc


def _squarefree_decomposition(spec, f):
    """Yield (squarefree factor, multiplicity) pairs, char-p aware."""
    p = spec.p
    f = poly_monic(spec, f)
    out = []

    def rec(g, mult):
        g = poly_monic(spec, g)
        if len(g) <= 1:
            return
        dg = poly_deriv(spec, g)
        if not dg:
            # g = h(t^p); take p-th roots of coefficients
            h = [spec.frobenius_inv(g[i]) for i in range(0, len(g), p)]
            rec(h, mult * p)
            return
        c = poly_gcd(spec, g, dg)
        w = poly_divmod(spec, g, c)[0]  # product of squarefree part
        i = 1
        while len(w) > 1:
            y = poly_gcd(spec, w, c)
            z = poly_divmod(spec, w, y)[0]
            if len(z) > 1:
                out.append((z, mult * i))
            w = y
            c = poly_divmod(spec, c, y)[0]
            i += 1
        # what is left of c carries the factors of p-divisible multiplicity;
        # the derivative-zero branch of the recursion supplies the factor p
        if len(c) > 1:
            rec(c, mult)

    rec(f, 1)
    return out


def _distinct_degree(spec, f):
    """Split a monic squarefree poly into (product, degree) components."""
    q = spec.order
    out = []
    x = [spec.zero, spec.one]
    r = x
    d = 0
    rest = f
    while len(rest) - 1 > 2 * d:
        d += 1
        r = poly_pow_mod(spec, r, q, rest)
        g = poly_gcd(spec, rest, poly_sub(spec, r, x))
        if len(g) > 1:
            out.append((g, d))
            rest = poly_divmod(spec, rest, g)[0]
            r = poly_mod(spec, r, rest)
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def _random_poly(spec, degree, rng):
    if spec._kind == "prime":
        coeffs = [rng.randrange(spec.p) for _ in range(degree)]
    elif spec._kind == "gf2":
        coeffs = [rng.randrange(spec.order) for _ in range(degree)]
    else:
        coeffs = [_fpp_trim([rng.randrange(spec.p) for _ in range(spec.m)])
                  for _ in range(degree)]
    return poly_trim(spec, coeffs)


def _equal_degree(spec, f, d, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = spec.order
    while True:
        r = _random_poly(spec, n, rng)
        if len(r) <= 1 and (not r or d > 1):
            continue
        if spec.p == 2:
            # trace map over GF(2): sum of conjugate squarings
            t = poly_mod(spec, r, f)
            acc = t
            e_bits = spec.m * d
            for _ in range(e_bits - 1):
                t = poly_mod(spec, poly_mul(spec, t, t), f)
                acc = poly_add(spec, acc, t)
            g = poly_gcd(spec, f, acc)
        else:
            e = (q ** d - 1) // 2
            w = poly_pow_mod(spec, r, e, f)
            g = poly_gcd(spec, f, poly_sub(spec, w, [spec.one]))
        if 1 < len(g) < len(f):
            left = _equal_degree(spec, g, d, rng)
            right = _equal_degree(spec, poly_divmod(spec, f, g)[0], d, rng)
            return left + right


def poly_factor(spec, f, seed=0):
    """Factor a nonzero polynomial into monic irreducibles.

    Returns a list of (irreducible, multiplicity) pairs, sorted so repeated
    runs produce identical output for identical seeds.
    """
    rng = Random(seed)
    factors = []
    for g, mult in _squarefree_decomposition(spec, f):
        for h, d in _distinct_degree(spec, g):
            for irr in _equal_degree(spec, h, d, rng):
                factors.append((tuple(poly_monic(spec, irr)), mult))
    factors.sort(key=lambda fm: (len(fm[0]), fm[0], fm[1]))
    return factors


def poly_roots_of_split(spec, f, seed=0):
    """Roots of a polynomial all of whose irreducible factors are linear.

    Returns (roots, all_linear) where roots is a list of (root, mult).
    """
    roots = []
    all_linear = True
    for irr, mult in poly_factor(spec, f, seed=seed):
        if len(irr) == 2:
            roots.append((spec.neg(irr[0]), mult))
        else:
            all_linear = False
    return roots, all_linear


# ---------------------------------------------------------------------------
# Sparse matrices and rank / nullspace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseMatrix:
    """Sparse matrix over a fixed field: entries are (row, col, FieldElement),
    sorted, in-bounds, without zeros or duplicate positions."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        seen = set()
        last = None
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) out of bounds")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if v.is_zero():
                raise ValueError(f"explicit zero stored at ({r},{c})")
            if last is not None and (r, c) < last:
                raise ValueError("entries not in sorted order")
            seen.add((r, c))
            last = (r, c)

    @property
    def spec(self):
        return self.entries[0][2].spec if self.entries else None

    @classmethod
    def build(cls, rows, cols, items):
        """items: iterable of (row, col, FieldElement); zeros dropped,
        duplicates summed."""
        acc = {}
        spec = None
        for r, c, v in items:
            spec = v.spec
            key = (r, c)
            acc[key] = acc[key] + v if key in acc else v
        ents = tuple((r, c, v) for (r, c), v in sorted(acc.items()) if not v.is_zero())
        return cls(rows, cols, ents)

    @classmethod
    def from_dense(cls, spec, array2d):
        rows = len(array2d)
        cols = len(array2d[0]) if rows else 0
        items = []
        for r, row in enumerate(array2d):
            for c, v in enumerate(row):
                fe = v if isinstance(v, FieldElement) else FieldElement.from_int(spec, v)
                if not fe.is_zero():
                    items.append((r, c, fe))
        return cls.build(rows, cols, items)

    def raw_rows(self):
        out = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v.raw
        return out


def _echelon_generic(rows_iter, ncols, spec):
    """Insertion echelon over any FieldSpec.

    Returns (pivots dict col->index, rowlist) where each row is a dict
    col->raw with leading coefficient one, fully back-reduced.
    """
    pivots = {}
    rowlist = []
    for row in rows_iter:
        row = {c: v for c, v in row.items() if not spec.is_zero(v)}
        while row:
            lead = min(row)
            if lead in pivots:
                coef = row[lead]
                prow = rowlist[pivots[lead]]
                for c, v in prow.items():
                    nv = spec.sub(row.get(c, spec.zero), spec.mul(coef, v))
                    if spec.is_zero(nv):
                        row.pop(c, None)
                    else:
                        row[c] = nv
            else:
                inv = spec.inv(row[lead])
                row = {c: spec.mul(v, inv) for c, v in row.items()}
                pivots[lead] = len(rowlist)
                rowlist.append(row)
                break
    # full back-reduction so the result is the unique RREF
    for lead in sorted(pivots, reverse=True):
        idx = pivots[lead]
        prow = rowlist[idx]
        for lead2 in sorted(pivots):
            if lead2 <= lead:
                continue
            idx2 = pivots[lead2]
            coef = prow.get(lead2)
            if coef is None or spec.is_zero(coef):
                continue
            for c, v in rowlist[idx2].items():
                nv = spec.sub(prow.get(c, spec.zero), spec.mul(coef, v))
                if spec.is_zero(nv):
                    prow.pop(c, None)
                else:
                    prow[c] = nv
    return pivots, rowlist


def _echelon_gf2_bits(rows_iter, ncols):
    """Insertion echelon over GF(2) with rows packed into ints.

    Bit i of a packed row is column i.  Returns (pivots, rowlist(ints)).
    """
    pivots = {}
    rowlist = []
    for row in rows_iter:
        packed = 0
        for c, v in row.items():
            if v & 1:
                packed |= 1 << c
        while packed:
            lead = (packed & -packed).bit_length() - 1
            if lead in pivots:
                packed ^= rowlist[pivots[lead]]
            else:
                pivots[lead] = len(rowlist)
                rowlist.append(packed)
                break
    for lead in sorted(pivots, reverse=True):
        idx = pivots[lead]
        for lead2 in sorted(pivots):
            if lead2 <= lead:
                continue
            if rowlist[idx] >> lead2 & 1:
                rowlist[idx] ^= rowlist[pivots[lead2]]
    return pivots, rowlist


def echelonize(rows, ncols, spec):
    """Reduced echelon form of a list of sparse raw rows (dicts col->raw).

    Returns (pivots dict col->rowindex, rows list-of-dicts).  The result is
    the canonical RREF of the row space, independent of input order.
    """
    if spec.p == 2 and spec.m == 1:
        pivots, bits = _echelon_gf2_bits(rows, ncols)
        rowlist = []
        for packed in bits:
            d = {}
            while packed:
                low = packed & -packed
                d[low.bit_length() - 1] = 1
                packed ^= low
            rowlist.append(d)
        return pivots, rowlist
    return _echelon_generic(rows, ncols, spec)


def kernel_from_echelon(pivots, rowlist, ncols, spec):
    """Canonical nullspace basis (list of raw coordinate lists) from an RREF.

    The free-column kernel vectors are re-echelonised, so the result is the
    unique reduced echelon basis of the nullspace itself.
    """
    free_cols = [c for c in range(ncols) if c not in pivots]
    raw_rows = []
    for fc in free_cols:
        vec = {fc: spec.one}
        for pc, idx in pivots.items():
            coef = rowlist[idx].get(fc)
            if coef is not None and not spec.is_zero(coef):
                vec[pc] = spec.neg(coef)
        raw_rows.append(vec)
    kpiv, krows = echelonize(raw_rows, ncols, spec)
    basis = []
    for lead in sorted(kpiv):
        row = krows[kpiv[lead]]
        basis.append([row.get(c, spec.zero) for c in range(ncols)])
    return basis


def rank_nullspace_raw(rows, ncols, spec, *, want_basis=True):
    """Rank and canonical nullspace of a sparse raw system."""
    pivots, rowlist = echelonize(rows, ncols, spec)
    rank = len(pivots)
    if not want_basis:
        return rank, None
    return rank, kernel_from_echelon(pivots, rowlist, ncols, spec)


def _dense_rank_nullspace(mat, spec, want_basis=True):
    """Gauss-Jordan over lists of raw values; used below the dense cutoff."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    mat = [list(r) for r in mat]
    pivots = []
    prow = 0
    for c in range(ncols):
        sel = None
        for r in range(prow, nrows):
            if not spec.is_zero(mat[r][c]):
                sel = r
                break
        if sel is None:
            continue
        mat[prow], mat[sel] = mat[sel], mat[prow]
        inv = spec.inv(mat[prow][c])
        mat[prow] = [spec.mul(v, inv) for v in mat[prow]]
        for r in range(nrows):
            if r != prow and not spec.is_zero(mat[r][c]):
                coef = mat[r][c]
                mat[r] = [spec.sub(mat[r][j], spec.mul(coef, mat[prow][j]))
                          for j in range(ncols)]
        pivots.append(c)
        prow += 1
        if prow == nrows:
            break
    rank = len(pivots)
    if not want_basis:
        return rank, None
    pivmap = {pc: r for r, pc in enumerate(pivots)}
    rowdicts = [{c: v for c, v in enumerate(mat[r]) if not spec.is_zero(v)}
                for r in range(rank)]
    basis = kernel_from_echelon(pivmap, rowdicts, ncols, spec)
    return rank, basis


def mat_rank_nullspace(M):
    """Rank and nullspace basis of a `SparseMatrix`.

    The basis vectors are returned as lists of FieldElement, in reduced
    echelon form (canonical: independent of entry order and of the kernel
    used).  rank + len(basis) == M.cols always holds.
    """
    spec = M.spec
    if spec is None:
        # zero matrix: nullspace is everything; a field is unknown, so the
        # caller must treat the basis as standard unit vectors over GF(2).
        spec = field_make(2, 1)
    if M.rows < DENSE_KERNEL_LIMIT and M.cols < DENSE_KERNEL_LIMIT:
        dense = [[spec.zero] * M.cols for _ in range(M.rows)]
        for r, c, v in M.entries:
            dense[r][c] = v.raw
        rank, basis = _dense_rank_nullspace(dense, spec)
    else:
        rank, basis = rank_nullspace_raw(M.raw_rows(), M.cols, spec)
    wrapped = [[FieldElement(spec, v) for v in vec] for vec in basis]
    return rank, wrapped


# ---------------------------------------------------------------------------
# numpy helpers over the prime field (raw int matrices mod p)
# ---------------------------------------------------------------------------


def np_rref_mod_p(mat, p):
    """Reduced row echelon form of an int numpy array mod p.

    Returns (rref, pivot_cols).  Input is not modified.
    """
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    prow = 0
    for c in range(ncols):
        col = a[prow:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        sel = prow + nz[0]
        if sel != prow:
            a[[prow, sel]] = a[[sel, prow]]
        inv = pow(int(a[prow, c]), p - 2, p)
        a[prow] = a[prow] * inv % p
        other = np.nonzero(a[:, c])[0]
        for r in other:
            if r != prow:
                a[r] = (a[r] - a[r, c] * a[prow]) % p
        pivots.append(c)
        prow += 1
        if prow == nrows:
            break
    return a, pivots


def np_kernel_mod_p(mat, p):
    """Canonical kernel basis (rows of the returned array) of mat over F_p."""
    rref, pivots = np_rref_mod_p(mat, p)
    ncols = rref.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            v = rref[r, fc]
            if v:
                basis[i, pc] = (-v) % p
    return basis
