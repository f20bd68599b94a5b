"""Class-group level invariants.

Dimension matrices and canonical forms for free modules over a meadow (a
Green functor whose level rings are fields), constructive freeness
decompositions of idempotent images, simple-module counts for twisted cyclic
group rings, G-theory splitting totals, and the explicit four-step resolution
of the constant functor by induced modules.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg as la
from .fields import gf_make
from .functors import E1Page, e1_page, free_module
from .green import (GreenFunctor, GreenModule, GreenModuleMorphism,
                    direct_sum_green_modules, green_module_from_invariant_span,
                    green_module_hom_basis)
from .gsets import CyclicGroup, burnside_quotient, burnside_ring
from .linalg import ZZ
from .mackey import MackeyFunctor, MackeyMorphism, _coerce_mat, _resolve_seed
from .modules import FPModule
from .report import CheckReport


def _cz(A, base):
    return A if base is ZZ else _coerce_mat(A, base)


# ---------------------------------------------------------------------------
# dimension bookkeeping for free modules over a meadow


def meadow_stabilizer(k: GreenFunctor) -> int:
    """Smallest level r with trivial Weyl action on the bottom coefficients.

    The bottom Weyl map of a meadow has p-power order p^(n-r); from level r on
    the level fields stop shrinking.
    """
    p, n = k.p, k.n
    base = k.base
    W = k.underlying.weyl[0]
    I = _cz(la.eye(W.shape[0]), base)
    cur = W
    order = 1
    while not la.mat_eq(cur, I):
        cur = la.mmul(cur, W, base)
        order += 1
        assert order <= p ** n, "bottom Weyl map has order beyond the group"
    r = n
    while order > 1:
        order //= p
        r -= 1
    return r


@dataclass
class DimMatrix:
    """Level dimensions of the free modules F_0..F_n over one meadow.

    alpha[s][i] = dim F_i at level s; gamma is the scaled (r+1)-square whose
    nonzero determinant pins down the multiplicities of F_0..F_{r-1} and F_n.
    """
    p: int
    n: int
    r: int
    dims: tuple
    alpha: object
    gamma: object

    def gamma_determinant(self) -> int:
        return la.bareiss_det(self.gamma)

    def solve(self, level_dims):
        """Multiplicities {i: m_i} over the canonical generators, or None.

        Canonical generators are F_0..F_{r-1} and F_n; every other free
        module is a sum of copies of F_n.
        """
        cols = list(range(self.r)) + [self.n]
        A = la.zeros(self.n + 1, len(cols))
        for s in range(self.n + 1):
            for c, i in enumerate(cols):
                A[s, c] = self.alpha[s, i]
        b = la.zeros(self.n + 1, 1)
        for s in range(self.n + 1):
            b[s, 0] = level_dims[s]
        x = la.solve_int(A, b)
        if x is None:
            return None
        out = {}
        for c, i in enumerate(cols):
            m = int(x[c, 0])
            if m < 0:
                return None
            if m:
                out[i] = m
        return out


def dim_matrix(k: GreenFunctor) -> DimMatrix:
    """Dimension matrix of the free modules over a meadow."""
    p, n = k.p, k.n
    d = k.level_dims()
    r = meadow_stabilizer(k)
    alpha = la.zeros(n + 1, n + 1)
    for s in range(n + 1):
        for i in range(n + 1):
            alpha[s, i] = p ** (n - max(i, s)) * d[min(i, s)]
    gamma = la.zeros(r + 1, r + 1)
    for s in range(r + 1):
        for i in range(r + 1):
            gamma[s, i] = p ** (r - max(s, i))
    return DimMatrix(p, n, r, tuple(d), alpha, gamma)


def k0_free_fixed_point(p: int, n: int, r: int):
    """Class ring of free modules for a meadow with stabilizer r.

    The ring of the ambient orbit category modulo the ideal identifying the
    orbit at each level s >= r with p^(n-s) copies of the top one; r = n gives
    the full ambient ring back, r = 0 collapses everything to rank one.
    """
    assert 0 <= r <= n
    G = CyclicGroup(p, n)
    R = burnside_ring(G)
    gens = []
    for s in range(r, n):
        col = la.zeros(R.rank, 1)
        col[s, 0] = 1
        col[n, 0] = -(p ** (n - s))
        gens.append(col)
    return burnside_quotient(R, gens)


@dataclass
class CanonicalFreeClass:
    """A free module written on the canonical generators F_0..F_{r-1}, F_n."""
    p: int
    n: int
    r: int
    mults: dict

    def describe(self) -> str:
        if not self.mults:
            return "0"
        parts = []
        for i in sorted(self.mults):
            m = self.mults[i]
            parts.append(f"F{i}" + (f"^{m}" if m > 1 else ""))
        return " + ".join(parts)

    def total_generators(self) -> int:
        return sum(self.mults.values())


def classify_free(p: int, n: int, r: int, mults, char_is_p: bool = True) -> CanonicalFreeClass:
    """Fold a multiset of free summands {i: m_i} into canonical form.

    In characteristic p each F_i with i >= r splits as p^(n-i) copies of F_n;
    away from characteristic p no folding is available, so only the trivial
    stabilizer r = n is accepted.
    """
    if not char_is_p:
        if r != n:
            raise ValueError("canonical forms away from characteristic p "
                             "need a trivial twist (r = n)")
        return CanonicalFreeClass(p, n, r, {i: m for i, m in dict(mults).items() if m})
    out = {}
    top = 0
    for i, m in dict(mults).items():
        if not m:
            continue
        assert 0 <= i <= n and m > 0
        if i < r:
            out[i] = out.get(i, 0) + m
        else:
            top += m * p ** (n - i)
    if top:
        out[n] = out.get(n, 0) + top
    return CanonicalFreeClass(p, n, r, out)


# ---------------------------------------------------------------------------
# constructive freeness of idempotent images


def _res_chain(M: MackeyFunctor, src: int, dst: int):
    """Composite restriction from level src down to dst."""
    base = M.base
    out = _cz(la.eye(M.levels[src].gens), base)
    for t in range(src - 1, dst - 1, -1):
        out = la.mmul(M.res[t], out, base)
    return out


def _tr_chain(M: MackeyFunctor, src: int, dst: int):
    """Composite transfer from level src up to dst."""
    base = M.base
    out = _cz(la.eye(M.levels[src].gens), base)
    for t in range(src, dst):
        out = la.mmul(M.tr[t], out, base)
    return out


def map_from_generator(P: GreenModule, i: int, x):
    """Components of the module map F_i -> P sending the generator to x.

    x is a column at level i.  Level s receives, for copy j and ring basis u,
    the column W^j tr(A_u x) (s >= i) or W^j A_u res(x) (s < i), matching the
    copy-block layout of free_module.
    """
    R = P.ring
    p, n, base = R.p, R.n, R.base
    und = P.underlying
    comps = []
    for s in range(n + 1):
        u_rank = R.ring(min(i, s)).rank
        c = p ** (n - max(i, s))
        if s >= i:
            seeds = [la.mmul(_tr_chain(und, i, s),
                             la.mmul(P.action[i][u], x, base), base)
                     for u in range(u_rank)]
        else:
            rx = la.mmul(_res_chain(und, i, s), x, base)
            seeds = [la.mmul(P.action[s][u], rx, base) for u in range(u_rank)]
        cols = []
        cur = seeds
        for _ in range(c):
            cols.extend(cur)
            cur = [la.mmul(und.weyl[s], v, base) for v in cur]
        comps.append(la.hstack(cols) if cols else
                     _cz(la.zeros(und.levels[s].gens, 0), base))
    return comps


def _zero_green_module(k: GreenFunctor) -> GreenModule:
    base, n = k.base, k.n
    group = k.group
    levels = [FPModule(base, 0) for _ in range(n + 1)]
    z = _cz(la.zeros(0, 0), base)
    und = MackeyFunctor(group, base, levels, [z] * n, [z] * n, [z] * (n + 1))
    action = [[z for _ in range(k.ring(s).rank)] for s in range(n + 1)]
    return GreenModule(k, und, action, name="0")


@dataclass
class FreenessWitness:
    """A verified decomposition of an idempotent image into free summands."""
    classification: CanonicalFreeClass
    image: GreenModule
    inclusion: GreenModuleMorphism
    model: GreenModule
    witness: GreenModuleMorphism
    report: CheckReport

    @property
    def ok(self) -> bool:
        return self.report.ok


def freeness_decompose(k: GreenFunctor, F: GreenModule, idem,
                       seed=None, attempts: int = 60) -> FreenessWitness:
    """Split the image of an idempotent endomorphism of F into free modules.

    Works over meadows with field coefficients.  The multiplicities come from
    the dimension matrix; the isomorphism is built greedily by sampling
    generators whose structure maps stay levelwise injective, and the returned
    witness has been checked as a module isomorphism.
    """
    base = k.base
    assert base is not ZZ, "freeness decompositions run over field coefficients"
    if isinstance(idem, GreenModuleMorphism):
        comps = idem.components
    else:
        comps = [_cz(c, base) for c in idem]
    e = GreenModuleMorphism(F, F, comps)
    rep = e.check()
    if not rep.ok:
        raise ValueError("endomorphism does not respect the module structure")
    for s, c in enumerate(comps):
        sq = la.mmul(c, c, base)
        if not la.mat_eq(sq, c):
            raise ValueError(f"endomorphism is not idempotent at level {s}")

    spans = [la.column_space_basis(c, base) for c in comps]
    P, incl = green_module_from_invariant_span(F, spans)
    return decompose_module(k, P, seed=seed, attempts=attempts, inclusion=incl)


def decompose_module(k: GreenFunctor, P: GreenModule, seed=None,
                     attempts: int = 60, inclusion=None) -> FreenessWitness:
    """Write P as a verified direct sum of free modules over the meadow k.

    The multiplicities come from the dimension matrix; generators for each
    summand are sampled (seeded) until the assembled map is levelwise
    injective, then the square map is checked as a module isomorphism.
    """
    base = k.base
    assert base is not ZZ, "freeness decompositions run over field coefficients"
    dm = dim_matrix(k)
    mults = dm.solve(tuple(P.level_dims()))
    if mults is None:
        raise ValueError("module dimensions do not match any sum of free modules")
    canon = CanonicalFreeClass(k.p, k.n, dm.r, mults)

    summands = [i for i in sorted(mults) for _ in range(mults[i])]
    if not summands:
        zero = _zero_green_module(k)
        wit = GreenModuleMorphism(zero, P,
                                  [_cz(la.zeros(d, 0), base) for d in P.level_dims()])
        return FreenessWitness(canon, P, inclusion, zero, wit, wit.check())

    rng = random.Random(_resolve_seed(seed))
    elements = list(base.elements())
    n = k.n
    stacked = [_cz(la.zeros(d, 0), base) for d in P.level_dims()]
    for i in summands:
        gdim = P.underlying.levels[i].gens
        found = False
        for trial in range(attempts):
            if trial < gdim:
                x = _cz(la.zeros(gdim, 1), base)
                x[trial, 0] = 1
                x = _cz(x, base)
            else:
                x = _cz(la.zeros(gdim, 1), base)
                for a in range(gdim):
                    x[a, 0] = rng.choice(elements)
            block = map_from_generator(P, i, x)
            good = True
            for s in range(n + 1):
                cand = la.hstack([stacked[s], block[s]])
                if la.rank(cand, base) != cand.shape[1]:
                    good = False
                    break
            if good:
                stacked = [la.hstack([stacked[s], block[s]]) for s in range(n + 1)]
                found = True
                break
        if not found:
            raise ValueError(f"could not place a free summand at level {i}; "
                             "the module may not be free")

    model = direct_sum_green_modules([free_module(k, i) for i in summands])
    witness = GreenModuleMorphism(model, P, stacked)
    rep = witness.check()
    if rep.ok and not witness.is_level_iso():
        rep = rep.merged(_level_iso_failure(witness))
    return FreenessWitness(canon, P, inclusion, model, witness, rep)


def _level_iso_failure(f: GreenModuleMorphism) -> CheckReport:
    rep = CheckReport("witness")
    rep.add("iso", "levels", "constructed map is not a levelwise isomorphism")
    return rep


def random_green_automorphism(M: GreenModule, seed=None, attempts: int = 80):
    """Seeded random module automorphism of M (field coefficients)."""
    base = M.ring.base
    assert base is not ZZ
    basis = green_module_hom_basis(M, M)
    elements = list(base.elements())
    rng = random.Random(_resolve_seed(seed))
    for _ in range(attempts):
        comps = None
        for h in basis:
            coeff = rng.choice(elements)
            scaled = [la.scalar_mul(coeff, c) for c in h.components]
            comps = scaled if comps is None else \
                [a + b for a, b in zip(comps, scaled)]
        comps = [_cz(c, base) for c in comps]
        g = GreenModuleMorphism(M, M, comps)
        if g.is_level_iso():
            return g
    raise ValueError("no automorphism found; the endomorphism ring may be too thin")


def invert_module_iso(g: GreenModuleMorphism) -> GreenModuleMorphism:
    """Inverse of a levelwise isomorphism over a field."""
    base = g.source.ring.base
    comps = [la.inv_field(c, base) for c in g.components]
    return GreenModuleMorphism(g.target, g.source, comps)


# ---------------------------------------------------------------------------
# simple modules of twisted cyclic group rings


def simples_count(q: int, order: int, char_equals_p: bool, matrix_part: int = 1) -> int:
    """Number of simple modules of F_q[C_order] (after any matrix part).

    In the group's own characteristic the augmentation is the only simple.
    Otherwise simples biject with q-power cyclotomic cosets modulo the order.
    matrix_part is Morita-irrelevant and accepted only so callers can carry
    the full shape along.
    """
    assert order >= 1 and q >= 2 and matrix_part >= 1
    if char_equals_p:
        return 1
    seen = set()
    count = 0
    for a in range(order):
        if a in seen:
            continue
        count += 1
        b = a
        while b not in seen:
            seen.add(b)
            b = (b * q) % order
    return count


@dataclass
class G0Splitting:
    """Simple-module counts attached to each page-one column."""
    page: E1Page
    term_ranks: list
    total: object               # int when every column is counted, else None
    certified: bool             # splitting established and all columns counted

    def describe(self) -> str:
        lines = [self.page.describe()]
        shown = []
        for term, rank in zip(self.page.terms, self.term_ranks):
            shown.append(f"{term.label}:{rank if rank is not None else '?'}")
        lines.append("  G0 ranks " + " + ".join(shown) +
                     f" -> total {self.total if self.total is not None else 'unknown'}"
                     f" ({'certified' if self.certified else 'not certified'})")
        return "\n".join(lines)


def g0_splitting(R: GreenFunctor) -> G0Splitting:
    """Count simples along the page-one columns and total them when the
    splitting is established."""
    page = e1_page(R)
    ranks = []
    for term in page.terms:
        if term.fixed_order is not None:
            ranks.append(simples_count(term.fixed_order, term.inner_order,
                                       term.char_equals_p, term.matrix_side))
        else:
            ranks.append(None)
    known = all(r is not None for r in ranks)
    total = sum(ranks) if known else None
    certified = known and page.splitting in ("total", "single-term")
    return G0Splitting(page, ranks, total, certified)


# ---------------------------------------------------------------------------
# the resolution of the constant functor


@dataclass
class ResolutionReport:
    """Outcome of checking the explicit induced resolution of the constant
    functor over C_p."""
    p: int
    maps_ok: bool
    exact: list                 # one flag per internal spot, ends first
    alternating_rank_zero: bool
    report: CheckReport

    @property
    def ok(self) -> bool:
        return self.maps_ok and all(self.exact) and self.alternating_rank_zero


def _kernel_lattice(comp, target: FPModule):
    """Columns spanning {x : comp @ x lies in the relation lattice of target}."""
    rel = target.relations
    if rel.shape[1] == 0:
        return la.nullspace_int(comp)
    big = la.hstack([comp, rel])
    ns = la.nullspace_int(big)
    return la.column_lattice_basis(ns[: comp.shape[1], :])


def _image_lattice(comp, target: FPModule):
    return la.column_lattice_basis(la.hstack([comp, target.relations]))


def _exact_at(f: MackeyMorphism, g: MackeyMorphism) -> bool:
    """Levelwise image(f) = kernel(g) inside the middle functor."""
    mid = f.target
    for s in range(mid.n + 1):
        im = _image_lattice(f.components[s], mid.levels[s])
        ker = la.column_lattice_basis(
            la.hstack([_kernel_lattice(g.components[s], g.target.levels[s]),
                       mid.levels[s].relations]))
        if not la.lattice_equal(im, ker):
            return False
    return True


def constant_Z_resolution_check(p: int) -> ResolutionReport:
    """Verify the four-step resolution of the constant functor by induced ones.

    0 -> Z -> Ind(Z) -> Ind(Z) -> Z -> (Z/p at the top, 0 below) -> 0 over
    C_p, with the alternating sum of levelwise free ranks vanishing.
    """
    from .functors import induce_mackey
    from .mackey import constant_mackey

    G = CyclicGroup(p, 1)
    Zbar = constant_mackey(G, ZZ)
    Ind = induce_mackey(constant_mackey(CyclicGroup(p, 0), ZZ), 1)
    top = FPModule(ZZ, 1, la.mat([[p]]))
    M = MackeyFunctor(G, ZZ, [FPModule(ZZ, 0), top],
                      [la.zeros(0, 1)], [la.zeros(1, 0)],
                      [la.eye(0), la.eye(1)], name="Z/p at top")

    ones_col = la.zeros(p, 1)
    for j in range(p):
        ones_col[j, 0] = 1
    shift = la.zeros(p, p)
    for j in range(p):
        shift[(j + 1) % p, j] = 1
    alpha = MackeyMorphism(Zbar, Ind, [ones_col, la.eye(1)])
    beta = MackeyMorphism(Ind, Ind, [shift - la.eye(p), la.zeros(1, 1)])
    gamma = MackeyMorphism(Ind, Zbar, [ones_col.T.copy(),
                                       la.scalar_mul(p, la.eye(1))])
    delta = MackeyMorphism(Zbar, M, [la.zeros(0, 1), la.eye(1)])

    rep = CheckReport(f"resolution of constant Z over C{p}")
    for nm, f in [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)]:
        sub = f.check()
        if not sub.ok:
            for v in sub.violations:
                rep.add(v.kind, f"{nm}:{v.where}", v.detail)
    maps_ok = rep.ok

    # left end: alpha injective on every level
    inj = all(la.nullspace_int(alpha.components[s]).shape[1] == 0 for s in range(2))
    if not inj:
        rep.add("exactness", "left end", "first map fails to be injective")
    spots = [inj and _exact_at(alpha, beta),
             _exact_at(beta, gamma),
             _exact_at(gamma, delta)]
    # right end: delta surjective mod relations
    surj = True
    for s in range(2):
        full = la.column_lattice_basis(
            la.hstack([delta.components[s], M.levels[s].relations]))
        want = la.eye(M.levels[s].gens)
        if not la.lattice_equal(full, la.column_lattice_basis(want)):
            surj = False
    if not surj:
        rep.add("exactness", "right end", "last map fails to be surjective")
    spots = [inj] + spots + [surj]

    ranks = [Zbar, Ind, Ind, Zbar, M]
    alt = [0, 0]
    sign = 1
    for X in ranks:
        for s in range(2):
            alt[s] += sign * X.levels[s].free_rank
        sign = -sign
    alternating_zero = alt == [0, 0]
    if not alternating_zero:
        rep.add("class", "alternating sum", f"free ranks add to {alt}")

    for i, flag in enumerate(spots):
        if not flag:
            rep.add("exactness", f"spot {i}", "homology does not vanish")
    return ResolutionReport(p, maps_ok, spots, alternating_zero, rep)
