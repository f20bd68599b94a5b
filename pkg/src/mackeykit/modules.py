"""Finitely presented modules over Z or a finite field.

A module is generators + integer relation columns (over a field the
relations are empty and the module is just a vector space).  Quotients
come with projection and lift matrices so maps can be pushed through
presentations exactly.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .linalg import ZZ


class FPModule:
    """Z^gens / col-span(relations), or F^gens when base is a field."""

    def __init__(self, base, gens: int, relations=None):
        self.base = base
        self.gens = int(gens)
        if base is not ZZ:
            assert relations is None or relations.shape[1] == 0, \
                "field modules carry no relations"
            relations = None
        if relations is None:
            relations = la.zeros(self.gens, 0)
        assert relations.shape[0] == self.gens
        self.relations = relations

    # -- structure ---------------------------------------------------------

    def smith(self):
        return la.smith_normal_form(self.relations)

    def invariant_factors(self) -> list[int]:
        """Torsion coefficients d with 1 < d, plus 0 once per free rank."""
        if self.base is not ZZ:
            return [0] * self.gens
        diag = self.smith().diagonal
        tors = [d for d in diag if d not in (0, 1)]
        rank = self.gens - sum(1 for d in diag if d != 0)
        return tors + [0] * rank

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors() if d == 0)

    @property
    def dim(self) -> int:
        assert self.base is not ZZ
        return self.gens

    @property
    def is_zero(self) -> bool:
        if self.base is not ZZ:
            return self.gens == 0
        return not self.invariant_factors()

    @property
    def is_free(self) -> bool:
        return all(d == 0 for d in self.invariant_factors())

    # -- element/matrix tests modulo relations ------------------------------

    def annihilates(self, cols) -> bool:
        """Whether every column lies in the relation span (i.e. is 0 in the module)."""
        if cols.shape[1] == 0:
            return True
        if self.base is not ZZ:
            return la.is_zero_mat(cols)
        return la.solve_int(self.relations, cols) is not None

    def maps_equal(self, A, B) -> bool:
        """A == B as maps into this module (columns compared mod relations)."""
        if A.shape != B.shape:
            return False
        return self.annihilates(A - B if A.size else A)

    def describe(self) -> str:
        if self.base is not ZZ:
            return f"{self.base!r}^{self.gens}"
        parts = [f"Z/{d}" for d in self.invariant_factors() if d] + \
                ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FPModule({self.describe()})"


def free_module_over(base, n: int) -> FPModule:
    return FPModule(base, n)


def zero_module(base) -> FPModule:
    return FPModule(base, 0)


def reduced_quotient(base, gens: int, rel_cols):
    """Quotient of base^gens by a relation span, with projection and lift.

    Returns (Q, proj, lift): proj is (Q.gens x gens), lift (gens x Q.gens),
    proj @ lift = identity on Q's generators, and proj kills the span.
    Over Z, generators with invariant factor 1 are eliminated; surviving
    torsion stays in Q.relations.
    """
    if base is not ZZ:
        # field case: complement of the column space
        cols = la.column_space_basis(rel_cols, base)
        r = cols.shape[1]
        if r == 0:
            Q = FPModule(base, gens)
            return Q, la.eye(gens), la.eye(gens)
        # complete cols to a basis with standard vectors
        C = cols
        chosen = []
        for j in range(gens):
            e = la.zeros(gens, 1)
            e[j, 0] = 1
            trial = la.hstack([C, e])
            if la.rank(trial, base) > C.shape[1]:
                C = trial
                chosen.append(j)
            if C.shape[1] == gens:
                break
        Cinv = la.inv_field(C, base)
        proj = Cinv[r:, :].copy()
        lift = C[:, r:].copy()
        Q = FPModule(base, gens - r)
        return Q, proj, lift

    s = la.smith_normal_form(rel_cols)
    diag = s.diagonal
    keep = [i for i in range(gens) if i >= len(diag) or diag[i] != 1]
    proj = s.U[keep, :].copy() if keep else la.zeros(0, gens)
    lift = s.Uinv[:, keep].copy() if keep else la.zeros(gens, 0)
    rel = la.zeros(len(keep), 0)
    tors = [(pos, diag[i]) for pos, i in enumerate(keep)
            if i < len(diag) and diag[i] != 0]
    if tors:
        rel = la.zeros(len(keep), len(tors))
        for c, (pos, d) in enumerate(tors):
            rel[pos, c] = d
    Q = FPModule(ZZ, len(keep), rel)
    return Q, proj, lift


def quotient_by_submodule(M: FPModule, span):
    """(Q, proj, lift) for M / <span>, span given in M's generator coordinates."""
    rel = la.hstack([M.relations, span]) if M.base is ZZ else span
    return reduced_quotient(M.base, M.gens, rel)


def submodule(M: FPModule, span):
    """Submodule of M generated by the given columns.

    Returns (S, incl) with incl mapping S's generators to the spanning
    columns.  Over a field the inclusion columns are a basis; over Z the
    generators are the given columns and S carries the induced relations.
    """
    if M.base is not ZZ:
        incl = la.column_space_basis(span, M.base)
        return FPModule(M.base, incl.shape[1]), incl
    k = span.shape[1]
    if k == 0:
        return FPModule(ZZ, 0), span
    # relations among the chosen generators: span @ x in relation span of M
    big = la.hstack([span, M.relations])
    ker = la.nullspace_int(big)
    rel = ker[:k, :] if ker.shape[1] else la.zeros(k, 0)
    return FPModule(ZZ, k, rel), span


def module_subquotient(M: FPModule, span, inner=None):
    """(sub, incl, quot, proj) for <span> inside M, optionally modulo <inner>.

    With inner=None, quot is M/<span> and proj lives on M's generators.
    With inner given (columns inside <span>), quot is <span>/<inner> and
    proj maps sub's generators onto the subquotient.
    """
    S, incl = submodule(M, span)
    if inner is None:
        Q, proj, _ = quotient_by_submodule(M, span)
        return S, incl, Q, proj
    # express inner in sub's generators: incl @ x = inner (mod M.relations)
    if M.base is not ZZ:
        x = la.solve(incl, inner, M.base)
        assert x is not None, "inner columns not inside the span"
    else:
        big = la.hstack([incl, M.relations])
        sol = la.solve_int(big, inner)
        assert sol is not None, "inner columns not inside the span"
        x = sol[: S.gens, :]
    Q, proj, _ = quotient_by_submodule(S, x)
    return S, incl, Q, proj


def direct_sum_modules(mods: list[FPModule]) -> FPModule:
    assert mods, "empty direct sum needs an explicit base"
    base = mods[0].base
    assert all(m.base == base or m.base is base for m in mods)
    gens = sum(m.gens for m in mods)
    if base is not ZZ:
        return FPModule(base, gens)
    rel = la.block_diag([m.relations for m in mods]) if mods else la.zeros(0, 0)
    return FPModule(ZZ, gens, rel)
