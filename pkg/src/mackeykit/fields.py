"""Finite fields GF(p^k) as explicit polynomial quotients.

A field is described by (p, k, modulus) with a monic irreducible modulus
of degree k over F_p; elements are coefficient vectors against the power
basis 1, x, ..., x^(k-1).  Arithmetic is exact; Frobenius and relative
traces are first-class.
"""

from __future__ import annotations

import itertools


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# polynomial helpers over F_p; polys are int tuples, low degree first, no
# trailing-zero normalization assumed on input

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    assert b, "division by zero polynomial"
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and _trim(r):
        r = _trim(r)
        if len(r) < len(b):
            break
        c = (r[-1] * inv_lead) % p
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[i + d] = (r[i + d] - c * y) % p
        r = _trim(r)
    return _trim(q), _trim(r)


def poly_mod(a, m, p):
    return poly_divmod(a, m, p)[1]


def _monic_polys(deg, p):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def irreducible_witness(modulus, p):
    """None if the monic modulus is irreducible over F_p, else a proper monic factor."""
    m = _trim(modulus)
    k = len(m) - 1
    if k <= 1:
        return None
    for d in range(1, k // 2 + 1):
        for f in _monic_polys(d, p):
            _, r = poly_divmod(m, f, p)
            if not r:
                return tuple(f)
    return None


# Conway-style default moduli for small p^k.  Degree-1 entries use x itself.
DEFAULT_MODULI = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 8): (1, 1, 1, 0, 0, 0, 0, 1, 1),
    (3, 1): (0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 9): (1, 0, 0, 0, 2, 0, 0, 0, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 4, 1),
    (5, 5): (1, 4, 0, 0, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (3, 6, 1),
}
for _p in (11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
    DEFAULT_MODULI[(_p, 1)] = (0, 1)


class FFElement:
    """Element of a GaloisField; immutable coefficient tuple against the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _co(self, other):
        if isinstance(other, FFElement):
            assert other.field is self.field, "mixed fields"
            return other
        if isinstance(other, int):
            return self.field.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.field.p
        return self.field.elem(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return self.field.elem(tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field.mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        f = self.field
        out = f.one
        b = self
        if e < 0:
            b = b.inv()
            e = -e
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def inv(self):
        return self.field.inv(self)

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.field.embed(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __int__(self):
        # residue encoding, little-endian base p; inverse of field.element_by_residue
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.field.p + c
        return v

    def __repr__(self):
        return self.field.format_elem(self)


class GaloisField:
    is_field = True

    def __init__(self, p: int, k: int, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError("k must be >= 1")
        if modulus is None:
            try:
                modulus = DEFAULT_MODULI[(p, k)]
            except KeyError:
                raise ValueError(f"no default modulus for GF({p}^{k}); pass one explicitly")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        wit = irreducible_witness(modulus, p)
        if wit is not None:
            raise ValueError(f"modulus {modulus} is reducible over F_{p}: factor {wit}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = modulus
        self._cache: dict[tuple, FFElement] = {}
        self.zero = self.elem((0,) * k)
        self.one = self.embed(1)
        self.gen = self.elem(tuple(1 if i == 1 else 0 for i in range(k))) if k > 1 else self.one
        # residue i (little-endian base-p digits) -> interned element
        self.element_by_residue = [self._from_residue(i) for i in range(self.q)] if self.q <= 4096 else None
        self._frob_mat = None

    def _from_residue(self, i):
        digits = []
        for _ in range(self.k):
            digits.append(i % self.p)
            i //= self.p
        return self.elem(tuple(digits))

    def elem(self, coeffs) -> FFElement:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        assert len(coeffs) == self.k
        e = self._cache.get(coeffs)
        if e is None:
            e = FFElement(self, coeffs)
            self._cache[coeffs] = e
        return e

    def embed(self, n: int) -> FFElement:
        return self.elem((n % self.p,) + (0,) * (self.k - 1))

    def coerce(self, v) -> FFElement:
        if isinstance(v, FFElement):
            assert v.field is self
            return v
        return self.embed(int(v))

    def from_poly(self, coeffs) -> FFElement:
        r = poly_mod([c % self.p for c in coeffs], list(self.modulus), self.p)
        return self.elem(tuple(r) + (0,) * (self.k - len(r)))

    def mul(self, a: FFElement, b: FFElement) -> FFElement:
        return self.from_poly(poly_mul(list(a.coeffs), list(b.coeffs), self.p))

    def inv(self, a: FFElement) -> FFElement:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in F_p[x]
        r0, r1 = list(self.modulus), _trim(a.coeffs)
        s0, s1 = [], [1]
        while r1:
            q, r = poly_divmod(r0, r1, self.p)
            r0, r1 = r1, r
            s0, s1 = s1, _trim([(x - y) % self.p for x, y in
                                itertools.zip_longest(s0, poly_mul(q, s1, self.p), fillvalue=0)])
        lead_inv = pow(r0[-1], self.p - 2, self.p)
        s0 = [(c * lead_inv) % self.p for c in s0]
        return self.from_poly(s0)

    def frobenius(self, a: FFElement, times: int = 1) -> FFElement:
        out = a
        for _ in range(times % self.k if self.k > 1 else 0):
            out = out ** self.p
        return out

    def frobenius_matrix(self, times: int = 1):
        """Matrix of x -> x^(p^times) on the power basis, entries in F_p (ints)."""
        import numpy as np
        if self._frob_mat is None:
            cols = []
            for i in range(self.k):
                img = self.frobenius(self.elem(tuple(1 if j == i else 0 for j in range(self.k))))
                cols.append(img.coeffs)
            M = np.empty((self.k, self.k), dtype=object)
            for j, col in enumerate(cols):
                for i in range(self.k):
                    M[i, j] = col[i]
            self._frob_mat = M
        from .linalg import eye, mmul
        out = eye(self.k)
        for _ in range(times % self.k if self.k > 1 else 0):
            out = mmul(self._frob_mat, out)
        if out.size:
            out = out % self.p
        return out

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield self.elem(coeffs)

    def format_elem(self, a: FFElement) -> str:
        return ":".join(str(c) for c in a.coeffs)

    def __eq__(self, other):
        return (isinstance(other, GaloisField)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


_FIELD_CACHE: dict[tuple, GaloisField] = {}


def gf_make(p: int, k: int, modulus=None) -> GaloisField:
    """Interned GaloisField constructor; rejects non-prime p and reducible moduli."""
    key = (p, k, tuple(modulus) if modulus is not None else None)
    f = _FIELD_CACHE.get(key)
    if f is None:
        f = GaloisField(p, k, modulus)
        _FIELD_CACHE[key] = f
    return f


def galois_trace(a: FFElement, subdegree: int = 1) -> FFElement:
    """Trace of a from GF(p^k) to the subfield GF(p^subdegree); subdegree must divide k."""
    f = a.field
    if f.k % subdegree != 0:
        raise ValueError(f"subdegree {subdegree} does not divide {f.k}")
    out = f.zero
    x = a
    for _ in range(f.k // subdegree):
        out = out + x
        x = f.frobenius(x, subdegree)
    # the result is fixed by Frobenius^subdegree, i.e. lies in the subfield
    assert f.frobenius(out, subdegree) == out
    return out
