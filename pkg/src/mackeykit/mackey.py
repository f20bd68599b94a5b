"""Mackey functors for cyclic p-groups.

A Mackey functor M for C_{p^n} is stored levelwise: modules M_0..M_n
(level s = value at the orbit C_{p^n}/C_{p^s}), restrictions
res_s: M_{s+1} -> M_s, transfers tr_s: M_s -> M_{s+1}, and the Weyl
action weyl_s on M_s (a generator of C_{p^n}/C_{p^s}, so its order
divides p^(n-s) and weyl_n = id).

Axioms, beyond equivariance of res and tr:

    res_s . tr_s = sum_{i<p} (weyl_s ^ (i * p^(n-s-1)))        (double coset)

All maps are matrices on generators; equalities are checked modulo the
target's relations.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from .fields import is_prime
from .linalg import ZZ
from .modules import FPModule, direct_sum_modules, free_module_over, reduced_quotient
from .report import CheckReport


class MackeyFunctor:
    def __init__(self, group, base, levels, res, tr, weyl, name=""):
        n = group.n
        assert len(levels) == n + 1
        assert len(res) == n and len(tr) == n and len(weyl) == n + 1
        self.group = group
        self.base = base
        self.levels = list(levels)
        self.res = list(res)
        self.tr = list(tr)
        self.weyl = list(weyl)
        self.name = name
        for s in range(n):
            assert res[s].shape == (levels[s].gens, levels[s + 1].gens)
            assert tr[s].shape == (levels[s + 1].gens, levels[s].gens)
        for s in range(n + 1):
            assert weyl[s].shape == (levels[s].gens, levels[s].gens)

    @property
    def n(self) -> int:
        return self.group.n

    @property
    def p(self) -> int:
        return self.group.p

    def level(self, s: int) -> FPModule:
        return self.levels[s]

    def level_dims(self) -> tuple:
        return tuple(m.gens for m in self.levels)

    def describe(self) -> str:
        inner = ", ".join(m.describe() for m in self.levels)
        label = self.name or "mackey functor"
        return f"{label} [{inner}]"

    def __repr__(self):
        return f"MackeyFunctor({self.describe()})"


def _eq(target: FPModule, A, B, base) -> bool:
    if A.shape != B.shape:
        return False
    if target.base is ZZ:
        return target.maps_equal(A, B)
    return la.mat_eq(A, B)


def check_axioms(M: MackeyFunctor) -> CheckReport:
    """Well-definedness, Weyl order, equivariance, and the double coset rule."""
    rep = CheckReport(M.name or "mackey functor")
    p, n, base = M.p, M.n, M.base

    def welldef(A, src: FPModule, dst: FPModule, where):
        if src.base is ZZ and src.relations.shape[1]:
            img = la.mmul(A, src.relations)
            if not dst.annihilates(img):
                rep.add("well-defined", where, "map does not preserve relations")

    for s in range(n):
        welldef(M.res[s], M.levels[s + 1], M.levels[s], f"res_{s}")
        welldef(M.tr[s], M.levels[s], M.levels[s + 1], f"tr_{s}")
    for s in range(n + 1):
        welldef(M.weyl[s], M.levels[s], M.levels[s], f"weyl_{s}")

    # weyl_n = id and weyl_s^(p^(n-s)) = id
    if not _eq(M.levels[n], M.weyl[n], la.eye(M.levels[n].gens), base):
        rep.add("weyl", "level n", "top Weyl action is not the identity")
    for s in range(n + 1):
        pw = la.mpow(M.weyl[s], p ** (n - s), base)
        if not _eq(M.levels[s], pw, la.eye(M.levels[s].gens), base):
            rep.add("weyl", f"level {s}", f"weyl^{p ** (n - s)} != id")

    for s in range(n):
        lhs = la.mmul(M.weyl[s], M.res[s], base)
        rhs = la.mmul(M.res[s], M.weyl[s + 1], base)
        if not _eq(M.levels[s], lhs, rhs, base):
            rep.add("equivariance", f"res_{s}", "weyl . res != res . weyl")
        lhs = la.mmul(M.tr[s], M.weyl[s], base)
        rhs = la.mmul(M.weyl[s + 1], M.tr[s], base)
        if not _eq(M.levels[s + 1], lhs, rhs, base):
            rep.add("equivariance", f"tr_{s}", "tr . weyl != weyl . tr")

    for s in range(n):
        lhs = la.mmul(M.res[s], M.tr[s], base)
        step = la.mpow(M.weyl[s], p ** (n - s - 1), base)
        acc = la.eye(M.levels[s].gens)
        rhs = la.zeros(M.levels[s].gens, M.levels[s].gens)
        for _ in range(p):
            rhs = rhs + acc
            acc = la.mmul(acc, step, base)
        if base is not ZZ:
            rhs = _coerce_mat(rhs, base)
        if not _eq(M.levels[s], lhs, rhs, base):
            rep.add("double-coset", f"level {s}",
                    "res . tr != sum of relative Weyl translates")

    # non-adjacent instances: Res^{t+1}_s Tr^{t+1}_t = sum_i weyl_s^{i p^(n-t-1)} Res^t_s
    for t in range(n):
        down_t = la.eye(M.levels[t].gens)  # res chain level t -> level s
        for s in range(t - 1, -1, -1):
            down_t = la.mmul(M.res[s], down_t, base)
            down_t1 = la.mmul(down_t, M.res[t], base)
            lhs = la.mmul(down_t1, M.tr[t], base)
            step = la.mpow(M.weyl[s], p ** (n - t - 1), base)
            acc = la.eye(M.levels[s].gens)
            rhs = la.zeros(M.levels[s].gens, M.levels[t].gens)
            for _ in range(p):
                rhs = rhs + la.mmul(acc, down_t, base)
                acc = la.mmul(acc, step, base)
            if base is not ZZ:
                rhs = _coerce_mat(rhs, base)
            if not _eq(M.levels[s], lhs, rhs, base):
                rep.add("double-coset", f"levels {s}<{t}",
                        "non-adjacent res . tr != sum of Weyl-translated res")
    return rep


def _coerce_mat(A, base):
    out = la.zeros(*A.shape)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = base.coerce(A[i, j])
    return out


def check_cohomological(M: MackeyFunctor) -> CheckReport:
    """tr_s . res_s = p * id on every upper level."""
    rep = CheckReport((M.name or "mackey functor") + " cohomological")
    for s in range(M.n):
        comp = la.mmul(M.tr[s], M.res[s], M.base)
        g = M.levels[s + 1].gens
        pid = la.scalar_mul(M.p, la.eye(g))
        if M.base is not ZZ:
            pid = _coerce_mat(pid, M.base)
        if not _eq(M.levels[s + 1], comp, pid, M.base):
            rep.add("cohomological", f"level {s + 1}", "tr . res != p * id")
    return rep


# --- constructors -------------------------------------------------------------


def constant_mackey(group, base, rank: int = 1, name: str = "") -> MackeyFunctor:
    """Constant Mackey functor: res = id, tr = multiplication by p."""
    n = group.n
    levels = [FPModule(base, rank) for _ in range(n + 1)]
    ident = la.eye(rank)
    if base is not ZZ:
        ident = _coerce_mat(ident, base)
    ptimes = la.scalar_mul(group.p, la.eye(rank))
    if base is not ZZ:
        ptimes = _coerce_mat(ptimes, base)
    res = [ident.copy() for _ in range(n)]
    tr = [ptimes.copy() for _ in range(n)]
    weyl = [ident.copy() for _ in range(n + 1)]
    return MackeyFunctor(group, base, levels, res, tr, weyl,
                         name=name or f"constant({base!r}^{rank})")


def fixed_point_mackey(group, field, rho, name: str = "") -> MackeyFunctor:
    """Fixed points of a linear C_{p^n}-representation over a field.

    rho is the matrix of a generator; level s is ker(rho^(p^(n-s)) - id),
    restriction is inclusion of fixed subspaces, transfer the relative
    trace, Weyl action the residual action of rho.
    """
    p, n = group.p, group.n
    d = rho.shape[0]
    assert rho.shape == (d, d)
    idm = _coerce_mat(la.eye(d), field)
    assert la.mat_eq(la.mpow(rho, p ** n, field), idm), "generator order must divide p^n"

    bases = []
    for s in range(n + 1):
        pw = la.mpow(rho, p ** (n - s), field)
        bases.append(la.nullspace(pw - idm, field))
    levels = [FPModule(field, B.shape[1]) for B in bases]

    res, tr, weyl = [], [], []
    for s in range(n):
        r = la.solve(bases[s], bases[s + 1], field)
        assert r is not None
        res.append(r)
        trace = la.zeros(d, d)
        acc = idm
        step = la.mpow(rho, p ** (n - s - 1), field)
        for _ in range(p):
            trace = trace + acc
            acc = la.mmul(acc, step, field)
        t = la.solve(bases[s + 1], la.mmul(trace, bases[s], field), field)
        assert t is not None, "relative trace left the fixed subspace"
        tr.append(t)
    for s in range(n + 1):
        w = la.solve(bases[s], la.mmul(rho, bases[s], field), field)
        assert w is not None
        weyl.append(w)
    M = MackeyFunctor(group, field, levels, res, tr, weyl,
                      name=name or "fixed-point functor")
    M.fixed_bases = bases
    return M


def burnside_mackey(group, name: str = "") -> MackeyFunctor:
    """The Burnside Mackey functor: level s = A(C_{p^s})."""
    from .gsets import CyclicGroup, FiniteGSet, induce_gset, restrict_gset
    p, n = group.p, group.n
    levels = [free_module_over(ZZ, s + 1) for s in range(n + 1)]
    res, tr = [], []
    for s in range(n):
        sub = CyclicGroup(p, s + 1)
        R = la.zeros(s + 1, s + 2)
        for t in range(s + 2):
            down = restrict_gset(FiniteGSet.orbit(sub, t), s)
            for u, m in enumerate(down.mult):
                R[u, t] = m
        res.append(R)
        T = la.zeros(s + 2, s + 1)
        for t in range(s + 1):
            up = induce_gset(FiniteGSet.orbit(CyclicGroup(p, s), t), s + 1)
            for u, m in enumerate(up.mult):
                T[u, t] = m
        tr.append(T)
    weyl = [la.eye(s + 1) for s in range(n + 1)]
    return MackeyFunctor(group, ZZ, levels, res, tr, weyl,
                         name=name or "burnside functor")


def twisted_burnside_c5(name: str = "twisted burnside") -> MackeyFunctor:
    """The rank-(1,2) C_5-functor with res = (2,5) and tr = (0,1)^T.

    Its box square is the Burnside functor, but it is not isomorphic to it:
    compatibility with res forces a top matrix with a = 2 - 5c, b = 0, and
    then det = +-a is never +-1.
    """
    from .gsets import CyclicGroup
    group = CyclicGroup(5, 1)
    levels = [free_module_over(ZZ, 1), free_module_over(ZZ, 2)]
    res = [la.mat([[2, 5]])]
    tr = [la.mat([[0], [1]])]
    weyl = [la.eye(1), la.eye(2)]
    return MackeyFunctor(group, ZZ, levels, res, tr, weyl, name=name)


def evaluate_at_gset(M: MackeyFunctor, X) -> FPModule:
    """M(X) = direct sum of M_s over the orbits of X."""
    assert X.group == M.group
    parts = []
    for s, m in enumerate(X.mult):
        parts.extend([M.levels[s]] * m)
    if not parts:
        from .modules import zero_module
        return zero_module(M.base)
    return direct_sum_modules(parts)


# --- morphisms ----------------------------------------------------------------


class MackeyMorphism:
    """Levelwise matrices commuting with res, tr and weyl."""

    def __init__(self, source: MackeyFunctor, target: MackeyFunctor, components):
        assert source.group == target.group and source.base == target.base
        assert len(components) == source.n + 1
        for s, f in enumerate(components):
            assert f.shape == (target.levels[s].gens, source.levels[s].gens)
        self.source = source
        self.target = target
        self.components = list(components)

    def check(self) -> CheckReport:
        rep = CheckReport("mackey morphism")
        M, N, f = self.source, self.target, self.components
        base = M.base
        for s in range(M.n + 1):
            if base is ZZ and M.levels[s].relations.shape[1]:
                if not N.levels[s].annihilates(la.mmul(f[s], M.levels[s].relations)):
                    rep.add("well-defined", f"level {s}", "relations not preserved")
            lhs = la.mmul(f[s], M.weyl[s], base)
            rhs = la.mmul(N.weyl[s], f[s], base)
            if not _eq(N.levels[s], lhs, rhs, base):
                rep.add("weyl", f"level {s}", "does not commute with the Weyl action")
        for s in range(M.n):
            lhs = la.mmul(f[s], M.res[s], base)
            rhs = la.mmul(N.res[s], f[s + 1], base)
            if not _eq(N.levels[s], lhs, rhs, base):
                rep.add("res", f"res_{s}", "does not commute with restriction")
            lhs = la.mmul(f[s + 1], M.tr[s], base)
            rhs = la.mmul(N.tr[s], f[s], base)
            if not _eq(N.levels[s + 1], lhs, rhs, base):
                rep.add("tr", f"tr_{s}", "does not commute with transfer")
        return rep

    def compose(self, other: "MackeyMorphism") -> "MackeyMorphism":
        """self . other (apply other first)."""
        assert other.target is self.source or other.target.level_dims() == self.source.level_dims()
        comps = [la.mmul(f, g, self.source.base)
                 for f, g in zip(self.components, other.components)]
        return MackeyMorphism(other.source, self.target, comps)

    @staticmethod
    def identity(M: MackeyFunctor) -> "MackeyMorphism":
        comps = [la.eye(m.gens) if M.base is ZZ else _coerce_mat(la.eye(m.gens), M.base)
                 for m in M.levels]
        return MackeyMorphism(M, M, comps)

    def is_level_iso(self) -> bool:
        base = self.source.base
        for s, f in enumerate(self.components):
            if f.shape[0] != f.shape[1]:
                return False
            if base is ZZ:
                if self.source.levels[s].relations.shape[1] or \
                        self.target.levels[s].relations.shape[1]:
                    raise NotImplementedError("level-iso test needs free levels over Z")
                if f.shape[0] and abs(la.bareiss_det(f)) != 1:
                    return False
            else:
                if la.rank(f, base) != f.shape[0]:
                    return False
        return True

    def __repr__(self):
        dims = " ".join(f"{f.shape[1]}->{f.shape[0]}" for f in self.components)
        return f"MackeyMorphism({dims})"


def _require_free_levels(*Ms):
    for M in Ms:
        if M.base is ZZ:
            for lv in M.levels:
                if lv.relations.shape[1]:
                    d = la.smith_normal_form(lv.relations).nonunit_invariants()
                    if any(x != 0 for x in d):
                        raise NotImplementedError(
                            "hom computations over Z require levelwise-free functors")


def hom_basis(M: MackeyFunctor, N: MackeyFunctor, level_intertwiners=None):
    """Basis of Hom(M, N): a list of MackeyMorphisms.

    Over a field this is a vector-space basis; over Z (levelwise free) a
    lattice basis of the hom group.

    level_intertwiners, when given, is a per-level list of (P, Q) matrix
    pairs adding the constraint f_s P = Q f_s; this cuts the hom space down
    to maps that also commute with extra operators (e.g. ring actions).
    """
    assert M.group == N.group and M.base == N.base
    base = M.base
    _require_free_levels(M, N)
    n = M.n
    sizes = [N.levels[s].gens * M.levels[s].gens for s in range(n + 1)]
    offsets = [0]
    for sz in sizes:
        offsets.append(offsets[-1] + sz)
    total = offsets[-1]
    if total == 0:
        return []

    blocks = []

    def block_row(pairs, nrows):
        """pairs: list of (level, coefficient matrix applied to vec(f_level))."""
        row = la.zeros(nrows, total)
        if base is not ZZ:
            row = _coerce_mat(row, base)
        for s, C in pairs:
            row[:, offsets[s]:offsets[s + 1]] = C
        blocks.append(row)

    def veccol_left(A, rows):      # vec(F A) = (A^T kron I) vec(F)
        I = la.eye(rows) if base is ZZ else _coerce_mat(la.eye(rows), base)
        return la.kron(A.T.copy(), I)

    def veccol_right(B, cols):     # vec(B F) = (I kron B) vec(F)
        I = la.eye(cols) if base is ZZ else _coerce_mat(la.eye(cols), base)
        return la.kron(I, B)

    for s in range(n):
        # f_s res^M_s = res^N_s f_{s+1}
        rows = N.levels[s].gens * M.levels[s + 1].gens
        if rows:
            L = veccol_left(M.res[s], N.levels[s].gens)
            R = veccol_right(N.res[s], M.levels[s + 1].gens)
            block_row([(s, L), (s + 1, la.scalar_mul(-1, R) if base is ZZ else _negate(R, base))], rows)
        # f_{s+1} tr^M_s = tr^N_s f_s
        rows = N.levels[s + 1].gens * M.levels[s].gens
        if rows:
            L = veccol_left(M.tr[s], N.levels[s + 1].gens)
            R = veccol_right(N.tr[s], M.levels[s].gens)
            block_row([(s + 1, L), (s, la.scalar_mul(-1, R) if base is ZZ else _negate(R, base))], rows)
    for s in range(n + 1):
        rows = N.levels[s].gens * M.levels[s].gens
        if not rows:
            continue
        pairs = [(M.weyl[s], N.weyl[s])]
        if level_intertwiners is not None:
            pairs.extend(level_intertwiners[s])
        for P, Q in pairs:
            L = veccol_left(P, N.levels[s].gens)
            R = veccol_right(Q, M.levels[s].gens)
            block_row([(s, L - R if base is ZZ else _sub(L, R, base))], rows)

    if blocks:
        big = la.vstack(blocks)
        ker = la.nullspace_int(big) if base is ZZ else la.nullspace(big, base)
    else:
        ker = la.eye(total) if base is ZZ else _coerce_mat(la.eye(total), base)

    out = []
    for c in range(ker.shape[1]):
        comps = []
        for s in range(n + 1):
            r, k = N.levels[s].gens, M.levels[s].gens
            seg = ker[offsets[s]:offsets[s + 1], c]
            F = la.zeros(r, k)
            if base is not ZZ:
                F = _coerce_mat(F, base)
            for j in range(k):
                for i in range(r):
                    F[i, j] = seg[j * r + i]
            comps.append(F)
        out.append(MackeyMorphism(M, N, comps))
    return out


def _negate(A, base):
    out = la.zeros(*A.shape)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = base.coerce(0) - A[i, j]
    return out


def _sub(A, B, base):
    out = la.zeros(*A.shape)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] - B[i, j]
    return out


# --- constructions on functors --------------------------------------------------


def direct_sum(Ms) -> MackeyFunctor:
    assert Ms
    g, base = Ms[0].group, Ms[0].base
    assert all(M.group == g and M.base == base for M in Ms)
    n = g.n
    levels = [direct_sum_modules([M.levels[s] for M in Ms]) for s in range(n + 1)]
    res = [la.block_diag([M.res[s] for M in Ms]) for s in range(n)]
    tr = [la.block_diag([M.tr[s] for M in Ms]) for s in range(n)]
    weyl = [la.block_diag([M.weyl[s] for M in Ms]) for s in range(n + 1)]
    return MackeyFunctor(g, base, levels, res, tr, weyl,
                         name=" + ".join(M.name for M in Ms if M.name))


def _induced_map(A, src_basis, dst_basis, base):
    """Matrix of A between chosen bases of source/target subspaces."""
    img = la.mmul(A, src_basis, base)
    sol = la.solve(dst_basis, img, base) if base is not ZZ else la.solve_int(dst_basis, img)
    assert sol is not None, "map does not preserve the subspace"
    return sol


def kernel(f: MackeyMorphism):
    """(K, incl) with K_s = ker f_s.  Levels must be free (always true over a field)."""
    M, N = f.source, f.target
    base = M.base
    _require_free_levels(M, N)
    n = M.n
    bases = []
    for s in range(n + 1):
        A = f.components[s]
        ker = la.nullspace_int(A) if base is ZZ else la.nullspace(A, base)
        bases.append(ker)
    levels = [free_module_over(base, B.shape[1]) for B in bases]
    res = [_induced_map(M.res[s], bases[s + 1], bases[s], base) for s in range(n)]
    tr = [_induced_map(M.tr[s], bases[s], bases[s + 1], base) for s in range(n)]
    weyl = [_induced_map(M.weyl[s], bases[s], bases[s], base) for s in range(n + 1)]
    K = MackeyFunctor(M.group, base, levels, res, tr, weyl,
                      name=f"ker({M.name or '?'} -> {N.name or '?'})")
    incl = MackeyMorphism(K, M, bases)
    return K, incl


def image(f: MackeyMorphism):
    """(I, incl) with I_s spanned by the columns of f_s inside N_s."""
    M, N = f.source, f.target
    base = M.base
    _require_free_levels(M, N)
    n = M.n
    bases = []
    for s in range(n + 1):
        A = f.components[s]
        B = la.column_space_basis(A, base) if base is not ZZ else la.column_lattice_basis(A)
        bases.append(B)
    levels = [free_module_over(base, B.shape[1]) for B in bases]
    res = [_induced_map(N.res[s], bases[s + 1], bases[s], base) for s in range(n)]
    tr = [_induced_map(N.tr[s], bases[s], bases[s + 1], base) for s in range(n)]
    weyl = [_induced_map(N.weyl[s], bases[s], bases[s], base) for s in range(n + 1)]
    I = MackeyFunctor(N.group, base, levels, res, tr, weyl, name="image")
    incl = MackeyMorphism(I, N, bases)
    return I, incl


def cokernel(f: MackeyMorphism):
    """(C, proj) with C_s = N_s / im f_s (torsion allowed over Z)."""
    M, N = f.source, f.target
    base = M.base
    n = M.n
    levels, projs, lifts = [], [], []
    for s in range(n + 1):
        span = f.components[s]
        if base is ZZ:
            span = la.hstack([span, N.levels[s].relations])
        Q, proj, lift = reduced_quotient(base, N.levels[s].gens, span)
        levels.append(Q)
        projs.append(proj)
        lifts.append(lift)
    res = [la.mmul_chain(projs[s], N.res[s], lifts[s + 1], base=base) for s in range(n)]
    tr = [la.mmul_chain(projs[s + 1], N.tr[s], lifts[s], base=base) for s in range(n)]
    weyl = [la.mmul_chain(projs[s], N.weyl[s], lifts[s], base=base) for s in range(n + 1)]
    C = MackeyFunctor(N.group, base, levels, res, tr, weyl, name="cokernel")
    proj = MackeyMorphism(N, C, projs)
    return C, proj


# --- isomorphism testing --------------------------------------------------------


class IsoResult:
    """Outcome of an isomorphism test.

    verdict is one of "isomorphic", "not_isomorphic", "inconclusive";
    witness (when isomorphic) is a MackeyMorphism that is a levelwise
    isomorphism; certificate (when not) names the obstruction.
    """

    def __init__(self, verdict, witness=None, certificate=None, detail=""):
        assert verdict in ("isomorphic", "not_isomorphic", "inconclusive")
        self.verdict = verdict
        self.witness = witness
        self.certificate = certificate
        self.detail = detail

    @property
    def is_definitive(self) -> bool:
        return self.verdict != "inconclusive"

    def __repr__(self):
        return f"IsoResult({self.verdict}{': ' + self.detail if self.detail else ''})"


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


def _combine(homs, coeffs, base):
    n1 = len(homs[0].components)
    comps = []
    for s in range(n1):
        r, k = homs[0].components[s].shape
        F = la.zeros(r, k)
        if base is not ZZ:
            F = _coerce_mat(F, base)
        for h, c in zip(homs, coeffs):
            if base is ZZ and c == 0:
                continue
            F = F + h.components[s] * c if base is ZZ else _add_scaled(F, h.components[s], c)
        comps.append(F)
    return MackeyMorphism(homs[0].source, homs[0].target, comps)


def _add_scaled(F, A, c):
    out = F.copy()
    for i in range(F.shape[0]):
        for j in range(F.shape[1]):
            out[i, j] = F[i, j] + A[i, j] * c
    return out


def is_isomorphic(M: MackeyFunctor, N: MackeyFunctor, seed=None,
                         exhaustive_cap=200_000, random_tries=10_000,
                         coeff_bound=5, modulus_cap=200_000) -> IsoResult:
    """Decide whether M and N are isomorphic Mackey functors.

    Field coefficients: exhaustive search over the hom space when small
    enough, else seeded random search (inconclusive on failure).  Integer
    coefficients (levelwise free): bounded lattice search for a
    unimodular witness, then a mod-m certificate ruling every hom out.
    """
    assert M.group == N.group and M.base == N.base
    base = M.base
    if M.level_dims() != N.level_dims():
        return IsoResult("not_isomorphic",
                         certificate={"reason": "level ranks differ",
                                      "left": M.level_dims(), "right": N.level_dims()},
                         detail="level ranks differ")
    if all(g == 0 for g in M.level_dims()):
        return IsoResult("isomorphic", witness=MackeyMorphism.identity(M),
                         detail="both zero")

    homs = hom_basis(M, N)
    h = len(homs)
    if h == 0:
        return IsoResult("not_isomorphic", certificate={"reason": "no nonzero homs"},
                         detail="hom group is zero")

    if base is not ZZ:
        q = base.p ** base.k
        elems = list(base.elements())
        # exhaustive only for small hom spaces; beyond that the full
        # enumeration would be astronomically large over bigger fields
        if h <= 6 and q ** h <= exhaustive_cap:
            for coeffs in itertools.product(elems, repeat=h):
                f = _combine(homs, coeffs, base)
                if f.is_level_iso():
                    return IsoResult("isomorphic", witness=f, detail="exhaustive search")
            return IsoResult("not_isomorphic",
                             certificate={"reason": "no iso in the full hom space",
                                          "hom_dim": h},
                             detail="exhausted the hom space")
        rng = np.random.default_rng(_resolve_seed(seed))
        for _ in range(random_tries):
            coeffs = [elems[int(rng.integers(0, q))] for _ in range(h)]
            f = _combine(homs, coeffs, base)
            if f.is_level_iso():
                return IsoResult("isomorphic", witness=f, detail="random search")
        return IsoResult("inconclusive", detail=f"no witness in {random_tries} samples")

    # integer case: bounded search for a unimodular witness
    B = coeff_bound
    while B >= 1 and (2 * B + 1) ** h > exhaustive_cap:
        B -= 1
    if B >= 1:
        for coeffs in itertools.product(range(-B, B + 1), repeat=h):
            if all(c == 0 for c in coeffs):
                continue
            f = _combine(homs, coeffs, base)
            if f.is_level_iso():
                return IsoResult("isomorphic", witness=f,
                                 detail=f"lattice search, coefficients within {B}")
    if B < coeff_bound:
        # the box was too large to enumerate; sample it instead, trying
        # sparse small-coefficient points first
        rng = np.random.default_rng(_resolve_seed(seed))
        for t in range(random_tries):
            width = 1 if t < random_tries // 2 else coeff_bound
            coeffs = rng.integers(-width, width + 1, size=h)
            if not coeffs.any():
                continue
            f = _combine(homs, [int(c) for c in coeffs], base)
            if f.is_level_iso():
                return IsoResult("isomorphic", witness=f,
                                 detail="random lattice search")

    # certificate: some prime modulus where no hom is levelwise invertible
    n_levels = M.n + 1
    for m in _SMALL_PRIMES:
        if m ** h > modulus_cap:
            break
        found_admissible = False
        level_ok = [False] * n_levels  # did any hom have det = +-1 mod m at level s
        for coeffs in itertools.product(range(m), repeat=h):
            f = _combine(homs, coeffs, base)
            good = True
            for s, F in enumerate(f.components):
                if F.shape[0] == 0:
                    level_ok[s] = True
                    continue
                d = la.bareiss_det(F) % m
                if d in (1 % m, (m - 1) % m):
                    level_ok[s] = True
                else:
                    good = False
            if good:
                found_admissible = True
                break
        if not found_admissible:
            blocking = [s for s in range(n_levels) if not level_ok[s]]
            return IsoResult("not_isomorphic",
                             certificate={"modulus": m, "hom_rank": h,
                                          "level": blocking[0] if blocking else None},
                             detail=f"no hom is unimodular mod {m}"
                                    + (f"; level {blocking[0]} alone rules it out"
                                       if blocking else ""))
    return IsoResult("inconclusive", detail="bounded searches found neither witness nor certificate")


def _resolve_seed(seed):
    if seed is not None:
        return int(seed)
    import os
    return int(os.environ.get("MACKEYKIT_SEED", "0"))
