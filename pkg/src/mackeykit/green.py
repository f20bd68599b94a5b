"""Green functors: Mackey functors whose levels are commutative rings.

Restrictions and the Weyl action are ring maps, transfers satisfy the
projection formula tr(x . res y) = tr(x) . y.  Modules over a green
functor carry a levelwise action subject to the same compatibilities.
This module also provides twisted group algebras of the level rings,
box products, and base change of modules along a ring map at height one.
"""

from __future__ import annotations

import math

from . import linalg as la
from .fields import gf_make
from .gsets import CyclicGroup
from .linalg import ZZ
from .mackey import (MackeyFunctor, MackeyMorphism, _coerce_mat, _eq,
                     burnside_mackey, check_axioms, constant_mackey,
                     direct_sum, fixed_point_mackey, hom_basis)
from .modules import FPModule, reduced_quotient
from .report import CheckReport
from .rings import BasedRing, based_ring_check, ring_is_field


def _cz(A, base):
    return A if base is ZZ else _coerce_mat(A, base)


def tensor_modules(A: FPModule, B: FPModule) -> FPModule:
    """Tensor product of presented modules; generator (i, j) is i*B.gens + j."""
    assert A.base == B.base or A.base is B.base
    gens = A.gens * B.gens
    if A.base is not ZZ:
        return FPModule(A.base, gens)
    parts = []
    if A.relations.shape[1]:
        parts.append(la.kron(A.relations, la.eye(B.gens)))
    if B.relations.shape[1]:
        parts.append(la.kron(la.eye(A.gens), B.relations))
    rel = la.hstack(parts) if parts else la.zeros(gens, 0)
    return FPModule(ZZ, gens, rel)


class GreenFunctor:
    """A Mackey functor together with a based ring on each level."""

    def __init__(self, underlying: MackeyFunctor, level_rings, name: str = ""):
        assert len(level_rings) == underlying.n + 1
        for s, ring in enumerate(level_rings):
            assert ring.rank == underlying.levels[s].gens, f"ring rank at level {s}"
            assert underlying.levels[s].is_free, "levels of a green functor must be free"
            assert ring.base == underlying.base or ring.base is underlying.base
        self.underlying = underlying
        self.level_rings = list(level_rings)
        self.name = name or underlying.name

    @property
    def group(self):
        return self.underlying.group

    @property
    def base(self):
        return self.underlying.base

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def p(self) -> int:
        return self.underlying.p

    def ring(self, s: int) -> BasedRing:
        return self.level_rings[s]

    def level_dims(self) -> tuple:
        return self.underlying.level_dims()

    def is_meadow(self, limit: int = 4096) -> bool:
        """Whether every level ring is a field (finite base only)."""
        if self.base is ZZ:
            return False
        return all(ring_is_field(r, limit) for r in self.level_rings)

    def describe(self) -> str:
        label = self.name or "green functor"
        return f"{label} {self.level_dims()}"

    def __repr__(self):
        return f"GreenFunctor({self.describe()})"


def _ring_map_into(rep, kind, where, A, src: BasedRing, dst: BasedRing, target_level, base):
    if not _eq(target_level, la.mmul(A, src.unit, base), dst.unit, base):
        rep.add(kind, where, "does not preserve the unit")
    for i in range(src.rank):
        ai = A[:, i:i + 1].copy()
        for j in range(src.rank):
            lhs = la.mmul(A, src.product_of_basis(i, j), base)
            rhs = dst.multiply(ai, A[:, j:j + 1].copy())
            if not _eq(target_level, lhs, rhs, base):
                rep.add(kind, f"{where}: e{i}*e{j}", "not multiplicative")


def check_green(R: GreenFunctor) -> CheckReport:
    """Mackey axioms, ring laws per level, res/weyl ring maps, projection formula."""
    M = R.underlying
    base, n = M.base, M.n
    rep = CheckReport(R.name or "green functor").merged(check_axioms(M))
    for s in range(n + 1):
        ring = R.ring(s)
        if not ring.commutative:
            rep.add("commutativity", f"level {s}", "green levels must be commutative")
        sub = based_ring_check(ring)
        for v in sub.violations:
            rep.add(v.kind, f"level {s}: {v.where}", v.detail)
    for s in range(n):
        _ring_map_into(rep, "res-ring", f"res_{s}", M.res[s],
                       R.ring(s + 1), R.ring(s), M.levels[s], base)
    for s in range(n + 1):
        _ring_map_into(rep, "weyl-ring", f"weyl_{s}", M.weyl[s],
                       R.ring(s), R.ring(s), M.levels[s], base)
    # projection formula tr(x . res y) = tr(x) . y for every pair of levels
    for s in range(n + 1):
        trc = la.eye(M.levels[s].gens)
        resc = la.eye(M.levels[s].gens)
        for t in range(s + 1, n + 1):
            trc = la.mmul(M.tr[t - 1], trc, base)
            resc = la.mmul(resc, M.res[t - 1], base)
            Rs, Rt = R.ring(s), R.ring(t)
            for x in range(Rs.rank):
                tx = trc[:, x:x + 1].copy()
                for y in range(Rt.rank):
                    lhs = Rt.multiply(tx, Rt.basis_vector(y))
                    rhs = la.mmul(trc, Rs.multiply(Rs.basis_vector(x),
                                                   resc[:, y:y + 1].copy()), base)
                    if not _eq(M.levels[t], lhs, rhs, base):
                        rep.add("frobenius", f"levels {s}->{t}",
                                f"tr(e{x} . res(e{y})) != tr(e{x}) . e{y}")
    return rep


class GreenMorphism:
    """Levelwise ring maps forming a map of the underlying Mackey functors."""

    def __init__(self, source: GreenFunctor, target: GreenFunctor, components):
        self.source = source
        self.target = target
        self.components = list(components)
        # shape checks via the underlying morphism
        self._mackey = MackeyMorphism(source.underlying, target.underlying, self.components)

    def mackey_morphism(self) -> MackeyMorphism:
        return self._mackey

    def check(self) -> CheckReport:
        rep = CheckReport("green morphism").merged(self._mackey.check())
        base = self.source.base
        for s in range(self.source.n + 1):
            _ring_map_into(rep, "ring-map", f"level {s}", self.components[s],
                           self.source.ring(s), self.target.ring(s),
                           self.target.underlying.levels[s], base)
        return rep

    def __repr__(self):
        return f"GreenMorphism({self.source.describe()} -> {self.target.describe()})"


# --- modules over a green functor ---------------------------------------------


class GreenModule:
    """A Mackey functor with an action of a green functor R.

    action[s][u] is the matrix of the u-th basis element of R(level s)
    acting on level s of the underlying functor.
    """

    def __init__(self, ring: GreenFunctor, underlying: MackeyFunctor, action, name: str = ""):
        assert underlying.group == ring.group
        assert underlying.base == ring.base or underlying.base is ring.base
        assert len(action) == underlying.n + 1
        self.ring = ring
        self.underlying = underlying
        self.action = [list(mats) for mats in action]
        self.name = name
        for s in range(underlying.n + 1):
            assert len(self.action[s]) == ring.ring(s).rank, f"action rank at level {s}"
            g = underlying.levels[s].gens
            for A in self.action[s]:
                assert A.shape == (g, g)

    @property
    def group(self):
        return self.underlying.group

    @property
    def base(self):
        return self.underlying.base

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def p(self) -> int:
        return self.underlying.p

    def action_matrix(self, s: int, rvec):
        """Matrix of the ring element with coefficient column rvec on level s."""
        g = self.underlying.levels[s].gens
        out = la.zeros(g, g)
        for u in range(self.ring.ring(s).rank):
            c = rvec[u, 0]
            if c == 0:
                continue
            out = out + la.scalar_mul(c, self.action[s][u])
        return _cz(out, self.base)

    def level_dims(self) -> tuple:
        return self.underlying.level_dims()

    def describe(self) -> str:
        label = self.name or "green module"
        return f"{label} {self.level_dims()} over {self.ring.name or 'R'}"

    def __repr__(self):
        return f"GreenModule({self.describe()})"


def check_green_module(M: GreenModule) -> CheckReport:
    """Mackey axioms plus unitality, multiplicativity, res/weyl semilinearity
    and both projection formulas for the action."""
    R, und = M.ring, M.underlying
    base, n = und.base, und.n
    rep = CheckReport(M.name or "green module").merged(check_axioms(und))
    for s in range(n + 1):
        ring, lev = R.ring(s), und.levels[s]
        if base is ZZ and lev.relations.shape[1]:
            for u in range(ring.rank):
                if not lev.annihilates(la.mmul(M.action[s][u], lev.relations)):
                    rep.add("action", f"level {s}: e{u}",
                            "action does not preserve the relations")
        ident = _cz(la.eye(lev.gens), base)
        if not _eq(lev, M.action_matrix(s, ring.unit), ident, base):
            rep.add("unit", f"level {s}", "unit does not act as the identity")
        for u in range(ring.rank):
            for v in range(ring.rank):
                lhs = la.mmul(M.action[s][u], M.action[s][v], base)
                rhs = M.action_matrix(s, ring.product_of_basis(u, v))
                if not _eq(lev, lhs, rhs, base):
                    rep.add("action", f"level {s}: e{u}*e{v}", "action not multiplicative")
    for s in range(n):
        res, tr = und.res[s], und.tr[s]
        Rres, Rtr = R.underlying.res[s], R.underlying.tr[s]
        rs, rt = R.ring(s), R.ring(s + 1)
        for u in range(rt.rank):
            lhs = la.mmul(res, M.action[s + 1][u], base)
            rhs = la.mmul(M.action_matrix(s, Rres[:, u:u + 1].copy()), res, base)
            if not _eq(und.levels[s], lhs, rhs, base):
                rep.add("res-linearity", f"level {s + 1}: e{u}",
                        "res(r.m) != res(r).res(m)")
            lhs = la.mmul(M.action[s + 1][u], tr, base)
            rhs = la.mmul(tr, M.action_matrix(s, Rres[:, u:u + 1].copy()), base)
            if not _eq(und.levels[s + 1], lhs, rhs, base):
                rep.add("frobenius", f"levels {s}->{s + 1}: e{u}.tr",
                        "r.tr(m) != tr(res(r).m)")
        for x in range(rs.rank):
            lhs = M.action_matrix(s + 1, Rtr[:, x:x + 1].copy())
            rhs = la.mmul_chain(tr, M.action[s][x], res, base=base)
            if not _eq(und.levels[s + 1], lhs, rhs, base):
                rep.add("frobenius", f"levels {s}->{s + 1}: tr(e{x})",
                        "tr(x).m != tr(x.res(m))")
    for s in range(n + 1):
        w, Rw = und.weyl[s], R.underlying.weyl[s]
        for u in range(R.ring(s).rank):
            lhs = la.mmul(w, M.action[s][u], base)
            rhs = la.mmul(M.action_matrix(s, Rw[:, u:u + 1].copy()), w, base)
            if not _eq(und.levels[s], lhs, rhs, base):
                rep.add("weyl", f"level {s}: e{u}", "weyl action not semilinear")
    return rep


def module_from_green(R: GreenFunctor, name: str = "") -> GreenModule:
    """R as a module over itself by left multiplication."""
    action = []
    for s in range(R.n + 1):
        ring = R.ring(s)
        action.append([_cz(ring.left_mult_matrix(ring.basis_vector(u)), R.base)
                       for u in range(ring.rank)])
    return GreenModule(R, R.underlying, action, name=name or R.name)


def direct_sum_green_modules(mods) -> GreenModule:
    assert mods, "empty direct sum"
    R = mods[0].ring
    assert all(m.ring is R for m in mods[1:]), "summands over different rings"
    und = direct_sum([m.underlying for m in mods])
    action = []
    for s in range(R.n + 1):
        action.append([la.block_diag([m.action[s][u] for m in mods])
                       for u in range(R.ring(s).rank)])
    name = " + ".join(m.name for m in mods if m.name)
    return GreenModule(R, und, action, name=name)


class GreenModuleMorphism:
    """Levelwise maps commuting with res/tr/weyl and with the ring action."""

    def __init__(self, source: GreenModule, target: GreenModule, components):
        assert source.ring is target.ring or source.ring.describe() == target.ring.describe()
        self.source = source
        self.target = target
        self.components = list(components)
        self._mackey = MackeyMorphism(source.underlying, target.underlying, self.components)

    def mackey_morphism(self) -> MackeyMorphism:
        return self._mackey

    def check(self) -> CheckReport:
        rep = CheckReport("green module morphism").merged(self._mackey.check())
        base = self.source.base
        for s in range(self.source.n + 1):
            f = self.components[s]
            for u in range(self.source.ring.ring(s).rank):
                lhs = la.mmul(f, self.source.action[s][u], base)
                rhs = la.mmul(self.target.action[s][u], f, base)
                if not _eq(self.target.underlying.levels[s], lhs, rhs, base):
                    rep.add("linearity", f"level {s}: e{u}", "not module-linear")
        return rep

    def is_level_iso(self) -> bool:
        return self._mackey.is_level_iso()

    def compose(self, other: "GreenModuleMorphism") -> "GreenModuleMorphism":
        comps = [la.mmul(f, g, self.source.base)
                 for f, g in zip(self.components, other.components)]
        return GreenModuleMorphism(other.source, self.target, comps)

    def __repr__(self):
        dims = " ".join(f"{f.shape[1]}->{f.shape[0]}" for f in self.components)
        return f"GreenModuleMorphism({dims})"


def green_module_from_invariant_span(M: GreenModule, spans):
    """Submodule spanned levelwise by the given columns (field base).

    The spans must be closed under res, tr, weyl and the ring action;
    returns (submodule, inclusion) and raises ValueError on a span that
    is not closed.
    """
    base = M.base
    assert base is not ZZ, "invariant spans are only supported over a field"
    n = M.n
    incl = [la.column_space_basis(spans[s], base) for s in range(n + 1)]

    def inside(s, cols, what):
        if cols.shape[1] == 0:
            return la.zeros(incl[s].shape[1], 0)
        x = la.solve(incl[s], cols, base)
        if x is None:
            raise ValueError(f"span not closed under {what} at level {s}")
        return x

    und = M.underlying
    levels = [FPModule(base, B.shape[1]) for B in incl]
    res = [inside(s, la.mmul(und.res[s], incl[s + 1], base), "res") for s in range(n)]
    tr = [inside(s + 1, la.mmul(und.tr[s], incl[s], base), "tr") for s in range(n)]
    weyl = [inside(s, la.mmul(und.weyl[s], incl[s], base), "weyl") for s in range(n + 1)]
    action = [[inside(s, la.mmul(M.action[s][u], incl[s], base), "the ring action")
               for u in range(M.ring.ring(s).rank)] for s in range(n + 1)]
    sub_und = MackeyFunctor(und.group, base, levels, res, tr, weyl,
                            name=(M.name + " sub") if M.name else "submodule")
    sub = GreenModule(M.ring, sub_und, action, name=sub_und.name)
    return sub, GreenModuleMorphism(sub, M, incl)


# --- constructors ---------------------------------------------------------------


def burnside_green(group, name: str = "") -> GreenFunctor:
    """The Burnside green functor: level s is the Burnside ring of C_{p^s}."""
    from .gsets import burnside_ring
    und = burnside_mackey(group)
    rings = [burnside_ring(CyclicGroup(group.p, s)) for s in range(group.n + 1)]
    return GreenFunctor(und, rings, name=name or und.name)


def constant_green(group, base, name: str = "") -> GreenFunctor:
    """Constant green functor: every level is the base ring itself."""
    und = constant_mackey(group, base, 1, name=name)
    one = _cz(la.mat([[1]]), base)
    rings = [BasedRing(base, 1, one.copy(), one.copy(), ["1"])
             for _ in range(group.n + 1)]
    return GreenFunctor(und, rings, name=name or und.name)


def fixed_point_green(group, field, frob_power: int = 1, name: str = "") -> GreenFunctor:
    """Galois fixed points of a finite field, written over its prime field.

    C_{p^n} acts through frobenius^frob_power; level s is the subfield
    fixed by the corresponding subgroup, with its own multiplication.
    """
    base = gf_make(field.p, 1)
    j = frob_power % field.k if field.k > 1 else 0
    order = field.k // math.gcd(j, field.k) if j else 1
    o = order
    while o > 1 and o % group.p == 0:
        o //= group.p
    assert o == 1 and order <= group.p ** group.n, \
        "frobenius power must generate a subquotient of the acting group"
    rho = _coerce_mat(field.frobenius_matrix(j), base)
    M = fixed_point_mackey(group, base, rho,
                           name=name or f"fixed points of GF({field.p}^{field.k})")
    k = field.k
    rings = []
    for B in M.fixed_bases:
        d = B.shape[1]
        elems = [field.from_poly([int(B[i, u]) for i in range(k)]) for u in range(d)]
        mult = la.zeros(d * d, d)
        for u in range(d):
            for v in range(d):
                prod = elems[u] * elems[v]
                col = la.zeros(k, 1)
                for i, c in enumerate(prod.coeffs):
                    col[i, 0] = c
                coords = la.solve(B, _coerce_mat(col, base), base)
                assert coords is not None  # subfields are multiplicatively closed
                for t in range(d):
                    mult[u * d + v, t] = coords[t, 0]
        one = la.zeros(k, 1)
        one[0, 0] = 1
        unit = la.solve(B, _coerce_mat(one, base), base)
        assert unit is not None
        labels = [field.format_elem(e) for e in elems]
        rings.append(BasedRing(base, d, _coerce_mat(mult, base), unit, labels))
    G = GreenFunctor(M, rings, name=M.name)
    G.field = field
    G.frob_power = j
    return G


def char_example_green(p: int, name: str = "") -> GreenFunctor:
    """C_p green functor: bottom F_p, top F_p[t]/(t^2), tr(1) = t, res(t) = 0."""
    F = gf_make(p, 1)
    group = CyclicGroup(p, 1)
    levels = [FPModule(F, 1), FPModule(F, 2)]
    res = [_coerce_mat(la.mat([[1, 0]]), F)]
    tr = [_coerce_mat(la.mat([[0], [1]]), F)]
    weyl = [_coerce_mat(la.eye(1), F), _coerce_mat(la.eye(2), F)]
    und = MackeyFunctor(group, F, levels, res, tr, weyl,
                        name=name or f"square-zero transfer over GF({p})")
    one = _coerce_mat(la.mat([[1]]), F)
    r0 = BasedRing(F, 1, one.copy(), one.copy(), ["1"])
    m1 = la.mat([[1, 0], [0, 1], [0, 1], [0, 0]])  # rows: 1*1, 1*t, t*1, t*t
    r1 = BasedRing(F, 2, _coerce_mat(m1, F), _coerce_mat(la.mat([[1], [0]]), F), ["1", "t"])
    return GreenFunctor(und, [r0, r1], name=und.name)


# --- twisted group algebras -----------------------------------------------------


class TwistedGroupRing:
    """R_theta[C_m]: free R-module on w^0..w^(m-1) with w.x = theta(x).w.

    Basis index a * R.rank + i is e_i w^a; .ring is the resulting BasedRing
    (non-commutative unless theta is trivial).
    """

    def __init__(self, coefficient: BasedRing, order: int, theta, ring: BasedRing):
        self.coefficient = coefficient
        self.order = order
        self.theta = theta
        self.ring = ring

    def basis_index(self, i: int, a: int) -> int:
        return a * self.coefficient.rank + i

    def theta_power_order(self) -> int:
        """Smallest c >= 1 with theta^c = id (divides the group order)."""
        base = self.coefficient.base
        idm = _cz(la.eye(self.coefficient.rank), base)
        acc = self.theta
        c = 1
        while not la.mat_eq(acc, idm):
            acc = la.mmul(self.theta, acc, base)
            c += 1
            assert c <= self.order
        return c

    def __repr__(self):
        return (f"TwistedGroupRing(rank {self.coefficient.rank} coefficients, "
                f"order {self.order})")


def twisted_group_ring(R: BasedRing, order: int, theta) -> TwistedGroupRing:
    """Twisted group algebra of a cyclic group over R.

    theta must be a ring automorphism with theta^order = id; the result is
    commutative only when theta is trivial and R is commutative.
    """
    base, r, m = R.base, R.rank, order
    assert m >= 1 and theta.shape == (r, r)
    idm = _cz(la.eye(r), base)
    if not la.mat_eq(la.mmul(theta, R.unit, base), R.unit):
        raise ValueError("theta must fix the unit")
    for i in range(r):
        ti = theta[:, i:i + 1].copy()
        for j in range(r):
            lhs = la.mmul(theta, R.product_of_basis(i, j), base)
            rhs = R.multiply(ti, theta[:, j:j + 1].copy())
            if not la.mat_eq(lhs, rhs):
                raise ValueError("theta is not multiplicative")
    if not la.mat_eq(la.mpow(theta, m, base), idm):
        raise ValueError("theta^order != id")
    rank = r * m
    th_pows = [idm]
    for _ in range(m - 1):
        th_pows.append(la.mmul(theta, th_pows[-1], base))
    mult = la.zeros(rank * rank, rank)
    for a in range(m):
        Ta = th_pows[a]
        for i in range(r):
            Li = R.left_mult_matrix(R.basis_vector(i))
            for b in range(m):
                c = (a + b) % m
                for j in range(r):
                    coeff = la.mmul(Li, Ta[:, j:j + 1].copy(), base)
                    row = (a * r + i) * rank + (b * r + j)
                    for t in range(r):
                        mult[row, c * r + t] = coeff[t, 0]
    unit = la.zeros(rank, 1)
    for t in range(r):
        unit[t, 0] = R.unit[t, 0]
    labels = []
    for a in range(m):
        for i in range(r):
            labels.append(R.labels[i] if a == 0 else f"{R.labels[i]}.w{a}")
    trivial = la.mat_eq(theta, idm)
    ring = BasedRing(base, rank, _cz(mult, base), _cz(unit, base), labels,
                     commutative=R.commutative and (trivial or m == 1))
    return TwistedGroupRing(R, m, theta, ring)


def level_twisted_ring(R: GreenFunctor, s: int) -> TwistedGroupRing:
    """Level-s ring of R twisted by its Weyl action over C_{p^(n-s)}."""
    m = R.p ** (R.n - s)
    return twisted_group_ring(R.ring(s), m, R.underlying.weyl[s])


class MoritaWitness:
    """Matrix units E[a,b] inside a twisted group algebra.

    corner_dim is the dimension of E[0,0] T E[0,0] over the base field,
    i.e. the degree of the fixed subfield the algebra is a matrix ring over.
    """

    def __init__(self, units, corner_dim, report: CheckReport):
        self.units = units
        self.corner_dim = corner_dim
        self.report = report

    @property
    def ok(self) -> bool:
        return self.report.ok

    def __repr__(self):
        side = int(math.isqrt(len(self.units))) if self.units else 0
        return f"MoritaWitness({side} x {side} over a degree-{self.corner_dim} field)"


def morita_matrix_units(T: TwistedGroupRing) -> MoritaWitness:
    """Matrix units exhibiting a faithfully twisted field algebra as Mat_m.

    The algebra acts on its coefficient field by x -> b.theta^a(x); that
    action is an isomorphism onto the endomorphisms over the fixed
    subfield, and pulling back the usual matrix units gives the witness.
    """
    L, m, base = T.coefficient, T.order, T.coefficient.base
    assert base is not ZZ, "needs a finite base field"
    if not ring_is_field(L):
        raise ValueError("coefficient ring is not a field")
    if T.theta_power_order() != m:
        raise ValueError("twisting is not faithful; no full matrix-algebra witness")
    k = L.rank
    assert k % m == 0
    d = k // m
    idm = _cz(la.eye(k), base)
    fixed = la.nullspace(T.theta - idm, base)
    assert fixed.shape[1] == d
    # greedy basis of L over the fixed subfield
    V, S = [], la.zeros(k, 0)
    for v in [L.unit] + [L.basis_vector(i) for i in range(k)]:
        block = la.mmul(L.left_mult_matrix(v), fixed, base)
        trial = la.hstack([S, block]) if S.shape[1] else block
        if la.rank(trial, base) == S.shape[1] + d:
            V.append(v)
            S = trial
        if len(V) == m:
            break
    if len(V) < m:
        raise ValueError("could not complete a basis over the fixed subfield")
    B, Binv = S, la.inv_field(S, base)
    th_pows = [idm]
    for _ in range(m - 1):
        th_pows.append(la.mmul(T.theta, th_pows[-1], base))
    cols = []
    for a in range(m):
        for i in range(k):
            mat = la.mmul(L.left_mult_matrix(L.basis_vector(i)), th_pows[a], base)
            cols.append(mat.transpose().reshape(k * k, 1))
    phi = la.hstack(cols)
    rep = CheckReport("matrix units")
    idd = _cz(la.eye(d), base)
    units = {}
    for a in range(m):
        for b in range(m):
            P = la.zeros(m, m)
            P[a, b] = 1
            E = la.mmul_chain(B, la.kron(_cz(P, base), idd), Binv, base=base)
            x = la.solve(phi, E.transpose().reshape(k * k, 1), base)
            if x is None:
                rep.add("matrix-units", f"E[{a},{b}]", "target map not in the image")
                continue
            units[(a, b)] = x
    zero = _cz(la.zeros(k * m, 1), base)
    for (a, b), u in units.items():
        for (c, e), v in units.items():
            prod = T.ring.multiply(u, v)
            expect = units[(a, e)] if b == c else zero
            if not la.mat_eq(prod, expect):
                rep.add("matrix-units", f"E[{a},{b}] E[{c},{e}]", "product law fails")
    total = zero
    for a in range(m):
        if (a, a) in units:
            total = total + units[(a, a)]
    if not la.mat_eq(_cz(total, base), T.ring.unit):
        rep.add("matrix-units", "sum of diagonals", "idempotents do not sum to 1")
    return MoritaWitness(units, d, rep)


# --- box products ---------------------------------------------------------------


def _place_rows(total_rows: int, offset: int, block):
    out = la.zeros(total_rows, block.shape[1])
    out[offset:offset + block.shape[0], :] = block
    return out


def box_product_general(M: MackeyFunctor, N: MackeyFunctor) -> MackeyFunctor:
    """Box product of Mackey functors over the same C_{p^n}.

    Level s is assembled from blocks M_t (x) N_t for t <= s (transfers of
    tensors from lower levels), modulo relative-Weyl coinvariance on each
    lower block and the identifications tr(m) (x) y = tr(m (x) res y),
    m (x) tr(y) = tr(res m (x) y) between adjacent blocks.
    """
    assert M.group == N.group
    assert M.base == N.base or M.base is N.base
    base, p, n = M.base, M.p, M.n
    gM = [lev.gens for lev in M.levels]
    gN = [lev.gens for lev in N.levels]
    g = [gM[t] * gN[t] for t in range(n + 1)]
    D = [_cz(la.kron(M.weyl[t], N.weyl[t]), base) for t in range(n + 1)]
    offs = [sum(g[:t]) for t in range(n + 2)]

    levels, projs, lifts = [], [], []
    for s in range(n + 1):
        total = offs[s + 1]
        rels = [la.zeros(total, 0)]
        if base is ZZ:
            for t in range(s + 1):
                if M.levels[t].relations.shape[1]:
                    rels.append(_place_rows(total, offs[t],
                                            la.kron(M.levels[t].relations, la.eye(gN[t]))))
                if N.levels[t].relations.shape[1]:
                    rels.append(_place_rows(total, offs[t],
                                            la.kron(la.eye(gM[t]), N.levels[t].relations)))
        for t in range(s):
            C = la.mpow(D[t], p ** (n - s), base) - la.eye(g[t])
            rels.append(_place_rows(total, offs[t], C))
        for t in range(1, s + 1):
            a1 = _place_rows(total, offs[t], la.kron(M.tr[t - 1], la.eye(gN[t])))
            b1 = _place_rows(total, offs[t - 1], la.kron(la.eye(gM[t - 1]), N.res[t - 1]))
            rels.append(a1 - b1)
            a2 = _place_rows(total, offs[t], la.kron(la.eye(gM[t]), N.tr[t - 1]))
            b2 = _place_rows(total, offs[t - 1], la.kron(M.res[t - 1], la.eye(gN[t - 1])))
            rels.append(a2 - b2)
        Q, proj, lift = reduced_quotient(base, total, _cz(la.hstack(rels), base))
        levels.append(Q)
        projs.append(proj)
        lifts.append(lift)

    res, tr = [], []
    for s in range(n):
        raw = la.zeros(offs[s + 1], offs[s + 2])
        for t in range(s + 1):
            acc = la.eye(g[t])
            step = la.mpow(D[t], p ** (n - s - 1), base)
            sm = la.zeros(g[t], g[t])
            for _ in range(p):
                sm = sm + acc
                acc = la.mmul(acc, step, base)
            raw[offs[t]:offs[t] + g[t], offs[t]:offs[t] + g[t]] = sm
        top = la.kron(M.res[s], N.res[s])
        raw[offs[s]:offs[s] + g[s], offs[s + 1]:offs[s + 1] + g[s + 1]] = top
        res.append(la.mmul_chain(projs[s], _cz(raw, base), lifts[s + 1], base=base))
        rawt = la.zeros(offs[s + 2], offs[s + 1])
        for t in range(s + 1):
            for i in range(g[t]):
                rawt[offs[t] + i, offs[t] + i] = 1
        tr.append(la.mmul_chain(projs[s + 1], _cz(rawt, base), lifts[s], base=base))
    weyl = []
    for s in range(n + 1):
        rawd = la.block_diag([D[t] for t in range(s + 1)])
        weyl.append(la.mmul_chain(projs[s], rawd, lifts[s], base=base))

    out = MackeyFunctor(M.group, base, levels, res, tr, weyl,
                        name=f"box({M.name or 'M'}, {N.name or 'N'})")
    out.projections = projs
    out.lifts = lifts
    return out


def box_product_cp(M: MackeyFunctor, N: MackeyFunctor) -> MackeyFunctor:
    """Box product at the prime: two blocks, coinvariance and the Frobenius
    identifications at the single adjacent pair.  Delegates to the general
    block construction, which reduces to exactly that at height one."""
    return box_product_general(M, N)


# --- base change of modules at height one ---------------------------------------


def base_change_cp(f: GreenMorphism, M: GreenModule) -> GreenModule:
    """Base change of a module along a ring map at height one.

    For f: R -> L and an R-module M this is the levelwise relative tensor
    with the same block presentation as the box product: level 1 is built
    from M_1 (x)_{R_1} L_1 and the coinvariants of M_0 (x)_{R_0} L_0, glued
    by the Frobenius identifications.  Returns an L-module.
    """
    R, L = f.source, f.target
    assert M.ring is R, "module must live over the source of the ring map"
    assert R.n == 1, "base change is implemented at height one"
    base, p = R.base, R.p
    f0, f1 = f.components
    l0, l1 = L.ring(0), L.ring(1)
    m0 = M.underlying.levels[0].gens
    m1 = M.underlying.levels[1].gens
    r0g, r1g = l0.rank, l1.rank

    def relative_rels(total, offset, act_mats, fcomp, lring, mg):
        out = []
        for lam in range(len(act_mats)):
            lmul = lring.left_mult_matrix(fcomp[:, lam:lam + 1].copy())
            block = (la.kron(act_mats[lam], la.eye(lring.rank))
                     - la.kron(la.eye(mg), lmul))
            out.append(_place_rows(total, offset, block))
        return out

    # level 0
    t0 = m0 * r0g
    rels0 = [la.zeros(t0, 0)]
    rels0 += relative_rels(t0, 0, M.action[0], f0, l0, m0)
    if base is ZZ and M.underlying.levels[0].relations.shape[1]:
        rels0.append(la.kron(M.underlying.levels[0].relations, la.eye(r0g)))
    Q0, proj0, lift0 = reduced_quotient(base, t0, _cz(la.hstack(rels0), base))

    # level 1: block 1 = M_1 (x) L_1, block 0 = M_0 (x) L_0
    b1, b0 = m1 * r1g, m0 * r0g
    total = b1 + b0
    W0 = _cz(la.kron(M.underlying.weyl[0], L.underlying.weyl[0]), base)
    rels1 = [la.zeros(total, 0)]
    rels1 += relative_rels(total, 0, M.action[1], f1, l1, m1)
    rels1 += relative_rels(total, b1, M.action[0], f0, l0, m0)
    rels1.append(_place_rows(total, b1, W0 - la.eye(b0)))
    trM, resM = M.underlying.tr[0], M.underlying.res[0]
    trL, resL = L.underlying.tr[0], L.underlying.res[0]
    rels1.append(_place_rows(total, 0, la.kron(trM, la.eye(r1g)))
                 - _place_rows(total, b1, la.kron(la.eye(m0), resL)))
    rels1.append(_place_rows(total, 0, la.kron(la.eye(m1), trL))
                 - _place_rows(total, b1, la.kron(resM, la.eye(r0g))))
    if base is ZZ:
        if M.underlying.levels[1].relations.shape[1]:
            rels1.append(_place_rows(total, 0,
                                     la.kron(M.underlying.levels[1].relations, la.eye(r1g))))
        if M.underlying.levels[0].relations.shape[1]:
            rels1.append(_place_rows(total, b1,
                                     la.kron(M.underlying.levels[0].relations, la.eye(r0g))))
    Q1, proj1, lift1 = reduced_quotient(base, total, _cz(la.hstack(rels1), base))

    acc, sm = la.eye(b0), la.zeros(b0, b0)
    for _ in range(p):
        sm = sm + acc
        acc = la.mmul(acc, W0, base)
    res_raw = la.hstack([la.kron(resM, resL), sm])
    res = la.mmul_chain(proj0, _cz(res_raw, base), lift1, base=base)
    tr_raw = la.vstack([la.zeros(b1, b0), la.eye(b0)])
    tr = la.mmul_chain(proj1, _cz(tr_raw, base), lift0, base=base)
    weyl0 = la.mmul_chain(proj0, W0, lift0, base=base)
    W1 = _cz(la.kron(M.underlying.weyl[1], L.underlying.weyl[1]), base)
    weyl1 = la.mmul_chain(proj1, la.block_diag([W1, W0]), lift1, base=base)
    und = MackeyFunctor(R.group, base, [Q0, Q1], [res], [tr], [weyl0, weyl1],
                        name=f"{M.name or 'M'} along {L.name or 'L'}")

    act0 = [la.mmul_chain(proj0, _cz(la.kron(la.eye(m0), l0.left_mult_matrix(l0.basis_vector(c))), base),
                          lift0, base=base) for c in range(r0g)]
    act1 = []
    for c in range(r1g):
        top = la.kron(la.eye(m1), l1.left_mult_matrix(l1.basis_vector(c)))
        down = la.kron(la.eye(m0), l0.left_mult_matrix(resL[:, c:c + 1].copy()))
        act1.append(la.mmul_chain(proj1, _cz(la.block_diag([top, down]), base), lift1, base=base))
    out = GreenModule(L, und, [act0, act1], name=und.name)
    out.projections = [proj0, proj1]
    out.lifts = [lift0, lift1]
    return out


def base_change_map_cp(f: GreenMorphism, g: GreenModuleMorphism,
                       source_changed: GreenModule, target_changed: GreenModule) -> GreenModuleMorphism:
    """The induced map between base-changed modules (height one).

    source_changed and target_changed must be base_change_cp(f, g.source)
    and base_change_cp(f, g.target).
    """
    base = f.source.base
    l0, l1 = f.target.ring(0), f.target.ring(1)
    g0, g1 = g.components
    c0 = la.mmul_chain(target_changed.projections[0],
                       _cz(la.kron(g0, la.eye(l0.rank)), base),
                       source_changed.lifts[0], base=base)
    raw1 = la.block_diag([la.kron(g1, la.eye(l1.rank)), la.kron(g0, la.eye(l0.rank))])
    c1 = la.mmul_chain(target_changed.projections[1], _cz(raw1, base),
                       source_changed.lifts[1], base=base)
    return GreenModuleMorphism(source_changed, target_changed, [c0, c1])


def green_module_hom_basis(M: GreenModule, N: GreenModule):
    """Basis of the module-linear homomorphisms M -> N over the same ring."""
    assert M.ring is N.ring, "hom space needs modules over one ring"
    R = M.ring
    inter = []
    for s in range(R.n + 1):
        inter.append([(M.action[s][u], N.action[s][u])
                      for u in range(R.ring(s).rank)])
    raw = hom_basis(M.underlying, N.underlying, level_intertwiners=inter)
    return [GreenModuleMorphism(M, N, f.components) for f in raw]
