"""Change-of-group operations and derived constructions.

Restriction and induction along subgroups of a cyclic p-group, free modules
on one orbit generator, truncation, geometric fixed points, and the page-one
bookkeeping used to split G-theory into twisted group-ring pieces.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg as la
from .fields import gf_make
from .green import GreenFunctor, GreenModule, TwistedGroupRing, twisted_group_ring
from .gsets import CyclicGroup
from .linalg import ZZ
from .mackey import MackeyFunctor, _coerce_mat
from .modules import FPModule, direct_sum_modules, reduced_quotient
from .rings import BasedRing, ring_is_field, unit_basis_index


def _cz(A, base):
    return A if base is ZZ else _coerce_mat(A, base)


# ---------------------------------------------------------------------------
# restriction / induction


def restrict_mackey(M, m: int):
    """Restrict along C_{p^m} <= C_{p^n}: keep levels 0..m, power up the Weyl maps.

    Accepts a plain Mackey functor or a Green functor (level rings come along).
    """
    if isinstance(M, GreenFunctor):
        und = restrict_mackey(M.underlying, m)
        return GreenFunctor(und, M.level_rings[: m + 1],
                            name=f"res_{m}({M.name})" if M.name else "")
    assert 0 <= m <= M.n
    group = CyclicGroup(M.p, m)
    step = M.p ** (M.n - m)
    weyl = [la.mpow(M.weyl[s], step, base=M.base) for s in range(m + 1)]
    return MackeyFunctor(group, M.base, M.levels[: m + 1],
                         M.res[:m], M.tr[:m], weyl,
                         name=f"res_{m}({M.name})" if M.name else "")


def induce_mackey(M: MackeyFunctor, n: int) -> MackeyFunctor:
    """Induce from C_{p^m} up to C_{p^n} (n >= m).

    Level s carries p^(n - max(s, m)) copies of M at level min(s, m), one per
    coset; the Weyl map permutes copies cyclically, with the inner Weyl map of
    the smaller group appearing on the wrap-around at levels below m.
    Restriction into the range s >= m duplicates components; transfer sums the
    duplication fibers.
    """
    if isinstance(M, GreenFunctor):
        raise TypeError("induction of a Green functor is only a module, "
                        "not a ring; induce the underlying Mackey functor")
    p, m, base = M.p, M.n, M.base
    assert n >= m
    group = CyclicGroup(p, n)

    def copies(s):
        return p ** (n - max(s, m))

    def comp(s):
        return M.levels[min(s, m)]

    levels = [direct_sum_modules([comp(s)] * copies(s)) for s in range(n + 1)]

    res, tr = [], []
    for s in range(n):
        cs, cs1 = copies(s), copies(s + 1)
        ds, ds1 = comp(s).gens, comp(s + 1).gens
        R = la.zeros(cs * ds, cs1 * ds1)
        T = la.zeros(cs1 * ds1, cs * ds)
        if s + 1 <= m:
            for j in range(cs):
                R[j * ds:(j + 1) * ds, j * ds1:(j + 1) * ds1] = M.res[s]
                T[j * ds1:(j + 1) * ds1, j * ds:(j + 1) * ds] = M.tr[s]
        else:
            I = la.eye(ds)
            for j in range(cs):
                jt = j % cs1
                R[j * ds:(j + 1) * ds, jt * ds:(jt + 1) * ds] = I
                T[jt * ds:(jt + 1) * ds, j * ds:(j + 1) * ds] = I
        res.append(_cz(R, base))
        tr.append(_cz(T, base))

    weyl = []
    for s in range(n + 1):
        c, d = copies(s), comp(s).gens
        W = la.zeros(c * d, c * d)
        wrap = M.weyl[s] if s <= m else la.eye(d)
        for j in range(c - 1):
            W[(j + 1) * d:(j + 2) * d, j * d:(j + 1) * d] = la.eye(d)
        W[0:d, (c - 1) * d:c * d] = wrap
        weyl.append(_cz(W, base))

    return MackeyFunctor(group, base, levels, res, tr, weyl,
                         name=f"ind^{n}({M.name})" if M.name else "")


# ---------------------------------------------------------------------------
# free modules on one generator


def free_module(R: GreenFunctor, i: int) -> GreenModule:
    """Free module on one generator at level i: the restricted ring induced back up.

    A ring element at level s acts on the copy over coset j through the chain
    restriction to level u = min(i, s) followed by the j-fold inverse Weyl
    twist.  The canonical generator is the unit of R(i) in copy 0; it is kept
    on the module as `.generator_level` / `.generator`.
    """
    p, n, base = R.p, R.n, R.base
    assert 0 <= i <= n
    und = induce_mackey(restrict_mackey(R.underlying, i), n)
    M = R.underlying

    action = []
    for s in range(n + 1):
        u = min(i, s)
        ru = R.ring(u)
        d = ru.rank
        c = p ** (n - max(i, s))
        resc = _cz(la.eye(R.ring(s).rank), base)
        for t in range(s - 1, u - 1, -1):
            resc = la.mmul(M.res[t], resc, base)
        order = p ** (n - u)
        winv = la.mpow(M.weyl[u], order - 1, base=base)
        mats = []
        for e in range(R.ring(s).rank):
            col = resc[:, e:e + 1]
            blocks = []
            cur = col
            for _ in range(c):
                blocks.append(ru.left_mult_matrix(cur))
                cur = la.mmul(winv, cur, base)
            mats.append(la.block_diag(blocks))
        action.append(mats)

    F = GreenModule(R, und, action, name=f"F{i}({R.name})" if R.name else f"F{i}")
    gen = la.zeros(und.levels[i].gens, 1)
    gen[unit_basis_index(R.ring(i)), 0] = 1
    F.generator_level = i
    F.generator = _cz(gen, base)
    return F


# ---------------------------------------------------------------------------
# truncation


def tau_geq_1(X):
    """Drop the bottom level; the result lives one group stage down.

    Dispatches on Mackey functors, Green functors, and modules over them (a
    module comes back over a freshly truncated ring).
    """
    if isinstance(X, GreenModule):
        ring = tau_geq_1(X.ring)
        und = tau_geq_1(X.underlying)
        return GreenModule(ring, und, X.action[1:],
                           name=f"tau>=1 {X.name}" if X.name else "")
    if isinstance(X, GreenFunctor):
        return GreenFunctor(tau_geq_1(X.underlying), X.level_rings[1:],
                            name=f"tau>=1 {X.name}" if X.name else "")
    assert X.n >= 1, "nothing below the bottom level"
    group = CyclicGroup(X.p, X.n - 1)
    return MackeyFunctor(group, X.base, X.levels[1:], X.res[1:], X.tr[1:],
                         X.weyl[1:], name=f"tau>=1 {X.name}" if X.name else "")


def brutal_truncation(M: MackeyFunctor) -> MackeyFunctor:
    """Replace the bottom level by zero, keeping the group."""
    assert M.n >= 1
    base = M.base
    g1 = M.levels[1].gens
    levels = [FPModule(base, 0)] + list(M.levels[1:])
    res = [_cz(la.zeros(0, g1), base)] + list(M.res[1:])
    tr = [_cz(la.zeros(g1, 0), base)] + list(M.tr[1:])
    weyl = [_cz(la.eye(0), base)] + list(M.weyl[1:])
    return MackeyFunctor(M.group, base, levels, res, tr, weyl,
                         name=f"trunc({M.name})" if M.name else "")


# ---------------------------------------------------------------------------
# geometric fixed points


def _span_basis(base, cols):
    if cols.shape[1] == 0:
        return cols
    if base is ZZ:
        return la.column_lattice_basis(cols)
    return la.column_space_basis(cols, base)


def _span_grew(base, old, new):
    if base is ZZ:
        return not la.lattice_equal(old, new)
    return old.shape[1] != new.shape[1]


def geometric_fixed_points(X):
    """Quotient of tau>=1 by the subfunctor the bottom level transfers up.

    For a Green functor the transferred span is an ideal at each level, so the
    level rings descend to the quotient; torsion quotients over Z are refused.
    """
    if isinstance(X, GreenFunctor):
        return _gfp_green(X)
    N, _, _ = _gfp_mackey(X)
    return N


def _gfp_mackey(M: MackeyFunctor):
    assert M.n >= 1
    base, n = M.base, M.n
    spans = [None] * (n + 1)
    spans[1] = _span_basis(base, M.tr[0])
    for s in range(1, n):
        spans[s + 1] = _span_basis(base, la.mmul(M.tr[s], spans[s], base))
    # close under all structure maps (usually already stable)
    changed = True
    while changed:
        changed = False
        for s in range(1, n + 1):
            cand = [spans[s], la.mmul(M.weyl[s], spans[s], base)]
            if s < n:
                cand.append(la.mmul(M.res[s], spans[s + 1], base))
            if s >= 2:
                cand.append(la.mmul(M.tr[s - 1], spans[s - 1], base))
            new = _span_basis(base, la.hstack(cand))
            if _span_grew(base, spans[s], new):
                spans[s] = new
                changed = True

    quots, projs, lifts = [], [], []
    for s in range(1, n + 1):
        rel = la.hstack([spans[s], M.levels[s].relations])
        Q, proj, lift = reduced_quotient(base, M.levels[s].gens, rel)
        quots.append(Q)
        projs.append(proj)
        lifts.append(lift)

    res = [la.mmul_chain(projs[s], M.res[s + 1], lifts[s + 1], base=base)
           for s in range(n - 1)]
    tr = [la.mmul_chain(projs[s + 1], M.tr[s + 1], lifts[s], base=base)
          for s in range(n - 1)]
    weyl = [la.mmul_chain(projs[s], M.weyl[s + 1], lifts[s], base=base)
            for s in range(n)]
    group = CyclicGroup(M.p, n - 1)
    N = MackeyFunctor(group, base, quots, res, tr, weyl,
                      name=f"phi({M.name})" if M.name else "")
    return N, projs, lifts


def _gfp_green(R: GreenFunctor) -> GreenFunctor:
    N, projs, lifts = _gfp_mackey(R.underlying)
    base = R.base
    rings = []
    for s in range(1, R.n + 1):
        if not N.levels[s - 1].is_free:
            raise NotImplementedError(
                "geometric fixed points of this ring have torsion coefficients")
        old = R.ring(s)
        proj, lift = projs[s - 1], lifts[s - 1]
        rank = N.levels[s - 1].gens
        mult = la.zeros(rank * rank, rank)
        mult = _cz(mult, base)
        for i in range(rank):
            for j in range(rank):
                prod = old.multiply(lift[:, i:i + 1], lift[:, j:j + 1])
                mult[(i * rank + j):(i * rank + j + 1), :] = \
                    la.mmul(proj, prod, base).T
        unit = la.mmul(proj, old.unit, base)
        rings.append(BasedRing(base, rank, mult, unit,
                               commutative=old.commutative))
    return GreenFunctor(N, rings, name=f"phi({R.name})" if R.name else "")


# ---------------------------------------------------------------------------
# level rings of iterated fixed points


@dataclass
class PhiLevel:
    """Level-m coefficient ring after collapsing all transfers from below."""
    ring: BasedRing | None
    proj: object
    lift: object
    invariants: list
    description: str

    @property
    def rank(self) -> int:
        return 0 if self.ring is None else self.ring.rank

    @property
    def is_zero(self) -> bool:
        return self.ring is None and not self.invariants


def phi_ring(R: GreenFunctor, m: int) -> PhiLevel:
    """Coefficient ring R(m) / (image of the transfer from level m-1).

    The image is an ideal by the projection formula, so the quotient is a
    ring.  Over Z a purely p-torsion quotient is repackaged over GF(p); other
    torsion is reported descriptively with ring=None.
    """
    base = R.base
    ring = R.ring(m)
    if m == 0:
        I = _cz(la.eye(ring.rank), base)
        return PhiLevel(ring, I, I, [0] * ring.rank, "full level 0")
    assert 1 <= m <= R.n
    span = R.underlying.tr[m - 1]
    Q, proj, lift = reduced_quotient(base, ring.rank, span)
    if Q.gens == 0:
        z = la.zeros(0, ring.rank) if base is ZZ else _cz(la.zeros(0, ring.rank), base)
        return PhiLevel(None, z, z.T.copy(), [], "zero ring")

    def quotient_ring(out_base, reduce=None):
        rank = Q.gens
        mult = _cz(la.zeros(rank * rank, rank), out_base)
        for i in range(rank):
            for j in range(rank):
                prod = ring.multiply(lift[:, i:i + 1], lift[:, j:j + 1])
                row = la.mmul(proj, prod, ZZ if base is ZZ else base)
                if reduce is not None:
                    row = reduce(row)
                mult[(i * rank + j):(i * rank + j + 1), :] = row.T
        unit = la.mmul(proj, ring.unit, ZZ if base is ZZ else base)
        if reduce is not None:
            unit = reduce(unit)
        return BasedRing(out_base, rank, mult, unit, commutative=ring.commutative)

    if base is not ZZ:
        return PhiLevel(quotient_ring(base), proj, lift,
                        [0] * Q.gens, "field quotient")

    invf = Q.invariant_factors()
    if Q.is_free:
        return PhiLevel(quotient_ring(ZZ), proj, lift, invf,
                        "free quotient over Z")
    torsion = [d for d in invf if d != 0]
    frees = [d for d in invf if d == 0]
    prm = torsion[0]
    if not frees and all(d == prm for d in torsion) and _is_prime(prm):
        F = gf_make(prm, 1)

        def red(row):
            out = _cz(la.zeros(*row.shape), F)
            for a in range(row.shape[0]):
                for b in range(row.shape[1]):
                    out[a, b] = F.embed(int(row[a, b]))
            return out

        return PhiLevel(quotient_ring(F, reduce=red), proj, lift,
                        invf, f"Z-quotient reduced mod {prm}")
    return PhiLevel(None, proj, lift, invf,
                    f"Z-module with invariant factors {invf}")


def _is_prime(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % f == 0:
            return False
        f += 1
    return True


# ---------------------------------------------------------------------------
# the page-one description of G-theory


@dataclass
class E1Term:
    """One column: the level ring of iterated fixed points, twisted back up."""
    t: int
    order: int                       # cyclic factor acting on the level ring
    phi: PhiLevel
    twisted: TwistedGroupRing | None
    label: str
    char_equals_p: bool | None = None
    matrix_side: int = 1             # full-matrix part split off by the twist
    inner_order: int = 1             # residual cyclic factor after that split
    fixed_order: int | None = None   # size of the twist-fixed subfield


@dataclass
class E1Page:
    group: CyclicGroup
    terms: list
    transfers_zero: bool
    transfers_surjective: bool
    splitting: str                   # "total" | "single-term" | "unknown"
    section: object = None
    notes: list = field(default_factory=list)

    def describe(self) -> str:
        lines = [f"E1 page over C{self.group.order}:"]
        for term in self.terms:
            lines.append(f"  t={term.t}: {term.label}")
        lines.append(f"  transfers zero: {'yes' if self.transfers_zero else 'no'};"
                     f" surjective: {'yes' if self.transfers_surjective else 'no'};"
                     f" splitting: {self.splitting}")
        lines.extend("  " + note for note in self.notes)
        return "\n".join(lines)


def _transfers_all_zero(M: MackeyFunctor) -> bool:
    return all(la.is_zero_mat(M.tr[s]) for s in range(M.n))


def _transfers_all_surjective(M: MackeyFunctor) -> bool:
    for s in range(M.n):
        g = M.levels[s + 1].gens
        if M.base is ZZ:
            sm = la.smith_normal_form(M.tr[s])
            diag = [d for d in sm.diagonal if d != 0]
            if len(diag) != g or any(abs(d) != 1 for d in diag):
                return False
        else:
            if la.rank(M.tr[s], M.base) != g:
                return False
    return True


def _theta_on_phi(R: GreenFunctor, t: int, ph: PhiLevel):
    W = R.underlying.weyl[t]
    if R.base is ZZ and ph.ring is not None and ph.ring.base is not ZZ:
        raw = la.mmul_chain(ph.proj, W, ph.lift, base=ZZ)
        F = ph.ring.base
        out = _cz(la.zeros(*raw.shape), F)
        for a in range(raw.shape[0]):
            for b in range(raw.shape[1]):
                out[a, b] = F.embed(int(raw[a, b]))
        return out
    return la.mmul_chain(ph.proj, W, ph.lift, base=R.base)


def _field_order(ring: BasedRing) -> int:
    return (ring.base.p ** ring.base.k) ** ring.rank


def _term_for(R: GreenFunctor, t: int, ph: PhiLevel) -> E1Term:
    p, n = R.p, R.n
    order = p ** (n - t)
    if ph.ring is None:
        return E1Term(t, order, ph, None, f"[{ph.description}] with C_{order}-twist")
    theta = _theta_on_phi(R, t, ph)
    tw = twisted_group_ring(ph.ring, order, theta)
    if ph.ring.base is not ZZ and ring_is_field(ph.ring):
        q0 = ph.ring.base.p ** ph.ring.base.k
        side = tw.theta_power_order()
        inner = order // side
        delta = la.mmul(theta, _cz(la.eye(ph.ring.rank), ph.ring.base), ph.ring.base)
        for a in range(ph.ring.rank):
            delta[a, a] = delta[a, a] - ph.ring.base.embed(1)
        fixed_dim = ph.ring.rank - la.rank(delta, ph.ring.base)
        fixed = q0 ** fixed_dim
        core = f"F{fixed}" if inner == 1 else f"F{fixed}[C{inner}]"
        label = core if side == 1 else f"Mat{side}({core})"
        return E1Term(t, order, ph, tw, label,
                      char_equals_p=(ph.ring.base.p == p),
                      matrix_side=side, inner_order=inner, fixed_order=fixed)
    if ph.ring.base is ZZ:
        coeff = "Z" if ph.ring.rank == 1 else f"Z-rank-{ph.ring.rank}"
    else:
        coeff = f"GF({ph.ring.base.p}^{ph.ring.base.k})-algebra-rank-{ph.ring.rank}"
    label = coeff if order == 1 else f"{coeff}[C{order}]"
    return E1Term(t, order, ph, tw, label)


def ring_section_search(R: GreenFunctor, bound: int = 2, cap: int = 200000):
    """Multiplicative unital section of R(1) ->> R(1)/im(tr), or None.

    Bounded search: over a field every candidate is tried (within cap); over Z
    kernel coefficients range over [-bound, bound].  Only the one-stage case is
    attempted.
    """
    assert R.n == 1, "section search only runs one stage at a time"
    base = R.base
    ph = phi_ring(R, 1)
    if ph.ring is None or (base is ZZ and ph.ring.base is not ZZ):
        return None
    r1 = R.ring(1)
    qr = ph.ring.rank
    if base is ZZ:
        K = la.nullspace_int(ph.proj)
    else:
        K = la.nullspace(ph.proj, base)
    k = K.shape[1]

    def same(A, B):
        return la.mat_eq(A, B) if base is ZZ else _feq(A, B)

    def is_section(sigma):
        if not same(la.mmul(sigma, ph.ring.unit, base), r1.unit):
            return False
        for i in range(qr):
            for j in range(qr):
                lhs = r1.multiply(sigma[:, i:i + 1], sigma[:, j:j + 1])
                rhs = la.mmul(sigma, ph.ring.product_of_basis(i, j), base)
                if not same(lhs, rhs):
                    return False
        return True

    if k == 0:
        sigma = ph.lift
        return sigma if is_section(sigma) else None

    if base is ZZ:
        coeffs = list(range(-bound, bound + 1))
    else:
        coeffs = list(base.elements())
    if len(coeffs) ** (k * qr) > cap:
        return None
    for picks in itertools.product(coeffs, repeat=k * qr):
        X = la.zeros(k, qr)
        if base is not ZZ:
            X = _cz(X, base)
        for a in range(k):
            for b in range(qr):
                X[a, b] = picks[a * qr + b]
        sigma = ph.lift + la.mmul(K, X, base)
        if is_section(sigma):
            return sigma
    return None


def _feq(A, B):
    if A.shape != B.shape:
        return False
    return all(A[i, j] == B[i, j]
               for i in range(A.shape[0]) for j in range(A.shape[1]))


def e1_page(R: GreenFunctor) -> E1Page:
    """Columns of the page: each level ring of iterated fixed points, twisted
    by the residual cyclic action, together with whether the underlying
    filtration is known to split."""
    M = R.underlying
    p, n = R.p, R.n
    tz = _transfers_all_zero(M)
    tsur = _transfers_all_surjective(M)

    terms = []
    for t in range(n + 1):
        ph = phi_ring(R, t)
        if ph.is_zero:
            continue
        terms.append(_term_for(R, t, ph))

    notes = []
    section = None
    if tz:
        splitting = "total"
        notes.append("all transfers vanish: each truncation maps isomorphically "
                     "to its fixed points, so the identity is a section")
    elif tsur:
        splitting = "single-term"
        notes.append("transfers are surjective: every higher column collapses "
                     "to zero and only t=0 survives")
    elif n == 1:
        section = ring_section_search(R)
        if section is not None:
            splitting = "total"
            notes.append("found a multiplicative section of the level-1 "
                         "projection by bounded search")
        else:
            splitting = "unknown"
            notes.append("no section found within the search bounds")
    else:
        splitting = "unknown"
        notes.append("splitting beyond one stage is not searched")
    return E1Page(M.group, terms, tz, tsur, splitting, section, notes)
