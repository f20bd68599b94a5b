"""Cyclic p-groups, their finite G-sets, and Burnside rings.

Orbits of C_{p^n} are classified by the stabilizer exponent s (orbit
C_{p^n}/C_{p^s}); a finite G-set is the multiplicity vector over
s = 0..n.  Products, restriction, induction and marks are all closed
formulas on these vectors.  Basis order everywhere: s ascending, so the
free orbit comes first and the unit [G/G] last.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .linalg import ZZ
from .rings import BasedRing


@dataclass(frozen=True)
class CyclicGroup:
    """C_{p^n} with a fixed generator g."""

    p: int
    n: int

    def __post_init__(self):
        from .fields import is_prime
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n < 0:
            raise ValueError("n must be >= 0")

    @property
    def order(self) -> int:
        return self.p ** self.n

    def subgroup_order(self, s: int) -> int:
        return self.p ** s

    def subquotient(self, m: int) -> "CyclicGroup":
        assert 0 <= m <= self.n
        return CyclicGroup(self.p, m)

    def orbit_label(self, s: int) -> str:
        top = f"C{self.order}"
        bot = "e" if s == 0 else f"C{self.p ** s}"
        return f"[{top}/{bot}]"

    def __repr__(self):
        return f"C{self.order}" + (f"(p={self.p})" if self.n == 0 else "")


@dataclass(frozen=True)
class FiniteGSet:
    """Multiplicity vector: mult[s] copies of the orbit C_{p^n}/C_{p^s}."""

    group: CyclicGroup
    mult: tuple

    def __post_init__(self):
        assert len(self.mult) == self.group.n + 1
        assert all(isinstance(m, int) and m >= 0 for m in self.mult)

    @staticmethod
    def orbit(group: CyclicGroup, s: int) -> "FiniteGSet":
        mult = tuple(1 if t == s else 0 for t in range(group.n + 1))
        return FiniteGSet(group, mult)

    def size(self) -> int:
        p, n = self.group.p, self.group.n
        return sum(m * p ** (n - s) for s, m in enumerate(self.mult))

    def disjoint_union(self, other: "FiniteGSet") -> "FiniteGSet":
        assert other.group == self.group
        return FiniteGSet(self.group, tuple(a + b for a, b in zip(self.mult, other.mult)))

    def __repr__(self):
        parts = [f"{m}*{self.group.orbit_label(s)}" for s, m in enumerate(self.mult) if m]
        return " + ".join(parts) if parts else "(empty G-set)"


@dataclass(frozen=True)
class BurnsideElement:
    """Virtual G-set: integer coefficients on the orbit basis, s ascending."""

    group: CyclicGroup
    coeffs: tuple

    def __post_init__(self):
        assert len(self.coeffs) == self.group.n + 1

    @staticmethod
    def of_gset(X: FiniteGSet) -> "BurnsideElement":
        return BurnsideElement(X.group, tuple(int(m) for m in X.mult))

    def __add__(self, other):
        assert other.group == self.group
        return BurnsideElement(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return BurnsideElement(self.group, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BurnsideElement(self.group, tuple(other * a for a in self.coeffs))
        assert other.group == self.group
        n = self.group.n
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                prod = orbit_product(self.group, i, j)
                for s, m in enumerate(prod.mult):
                    out[s] += a * b * m
        return BurnsideElement(self.group, tuple(out))

    __rmul__ = __mul__

    def __repr__(self):
        parts = []
        for s, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*{self.group.orbit_label(s)}")
        return " + ".join(parts) if parts else "0"


def orbit_product(G: CyclicGroup, i: int, j: int) -> FiniteGSet:
    """Product of the orbits with stabilizer exponents i and j.

    (C_{p^n}/C_{p^i}) x (C_{p^n}/C_{p^j}) splits into p^(n - max(i,j))
    orbits, each of type C_{p^n}/C_{p^min(i,j)}.
    """
    assert 0 <= i <= G.n and 0 <= j <= G.n
    count = G.p ** (G.n - max(i, j))
    mult = tuple(count if s == min(i, j) else 0 for s in range(G.n + 1))
    return FiniteGSet(G, mult)


def gset_product(X: FiniteGSet, Y: FiniteGSet) -> FiniteGSet:
    assert X.group == Y.group
    n = X.group.n
    out = [0] * (n + 1)
    for i, a in enumerate(X.mult):
        if not a:
            continue
        for j, b in enumerate(Y.mult):
            if not b:
                continue
            prod = orbit_product(X.group, i, j)
            for s, m in enumerate(prod.mult):
                out[s] += a * b * m
    return FiniteGSet(X.group, tuple(out))


def restrict_gset(X: FiniteGSet, m: int) -> FiniteGSet:
    """Restriction along C_{p^m} <= C_{p^n}: orbit s gives p^(n - max(m,s))
    orbits of type C_{p^m}/C_{p^min(m,s)}."""
    G = X.group
    assert 0 <= m <= G.n
    H = G.subquotient(m)
    out = [0] * (m + 1)
    for s, a in enumerate(X.mult):
        if not a:
            continue
        out[min(m, s)] += a * G.p ** (G.n - max(m, s))
    return FiniteGSet(H, tuple(out))


def induce_gset(X: FiniteGSet, n: int) -> FiniteGSet:
    """Induction along C_{p^m} <= C_{p^n}: each orbit keeps its stabilizer."""
    G = X.group
    assert n >= G.n
    big = CyclicGroup(G.p, n)
    out = [0] * (n + 1)
    for s, a in enumerate(X.mult):
        out[s] += a
    return FiniteGSet(big, tuple(out))


def marks(X: FiniteGSet):
    """Fixed-point counts |X^{C_{p^s}}| for s = 0..n, as a column vector."""
    G = X.group
    col = la.zeros(G.n + 1, 1)
    for s in range(G.n + 1):
        total = 0
        for t, a in enumerate(X.mult):
            if a and s <= t:
                total += a * G.p ** (G.n - t)
        col[s, 0] = total
    return col


def marks_matrix(G: CyclicGroup):
    """Columns = marks of the orbit basis; lower triangular, injective over Q."""
    M = la.zeros(G.n + 1, G.n + 1)
    for t in range(G.n + 1):
        col = marks(FiniteGSet.orbit(G, t))
        M[:, t:t + 1] = col
    return M


def burnside_ring(G: CyclicGroup) -> BasedRing:
    """The Burnside ring A(C_{p^n}) on the orbit basis (unit = [G/G], last)."""
    r = G.n + 1
    mult = la.zeros(r * r, r)
    for i in range(r):
        for j in range(r):
            prod = orbit_product(G, i, j)
            for s, m in enumerate(prod.mult):
                mult[i * r + j, s] = m
    unit = la.zeros(r, 1)
    unit[G.n, 0] = 1
    labels = [G.orbit_label(s) for s in range(r)]
    return BasedRing(ZZ, r, mult, unit, labels)


class QuotientRingResult:
    """Quotient of a based ring by an ideal: ring, rendered presentation, projection."""

    def __init__(self, ring: BasedRing, presentation: str, projection, lift, invariants):
        self.ring = ring
        self.presentation = presentation
        self.projection = projection
        self.lift = lift
        self.additive_invariants = invariants

    def __repr__(self):
        return f"QuotientRingResult({self.presentation})"


def ideal_lattice(R: BasedRing, gens) -> "la.np.ndarray":
    """Additive lattice of the ideal generated by the given coefficient columns."""
    cols = []
    for g in gens:
        L = R.left_mult_matrix(g)
        for b in range(R.rank):
            cols.append(L[:, b:b + 1])
    stacked = la.hstack(cols) if cols else la.zeros(R.rank, 0)
    return la.column_lattice_basis(stacked)


def burnside_quotient(R: BasedRing, gens) -> QuotientRingResult:
    """R / (ideal generated by gens) for a commutative based ring over Z.

    Errors out when the additive quotient has torsion (no based
    presentation in that case).
    """
    assert R.base is ZZ and R.commutative
    from .modules import reduced_quotient
    lattice = ideal_lattice(R, gens)
    Q, proj, lift = reduced_quotient(ZZ, R.rank, lattice)
    invs = Q.invariant_factors()
    if any(d != 0 for d in invs):
        raise ValueError(f"quotient has torsion {invs}; no based presentation")
    q = Q.gens
    mult = la.zeros(q * q, q)
    for i in range(q):
        for j in range(q):
            prod = R.multiply(lift[:, i:i + 1], lift[:, j:j + 1])
            img = la.mmul(proj, prod)
            mult[i * q + j, :] = img[:, 0]
    unit = la.mmul(proj, R.unit)
    ring = BasedRing(ZZ, q, mult, unit, labels=[f"q{i}" for i in range(q)])
    from .rings import render_presentation
    pres = render_presentation(R, lattice)
    return QuotientRingResult(ring, pres, proj, lift, invs)
