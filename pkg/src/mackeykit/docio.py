"""Line-oriented text documents for functors, rings and modules.

One document describes one object: a Mackey functor, a Green functor, or a
module over a Green functor.  The format is plain text, one directive per
line, with matrix blocks written row-major after a ``rows R cols C`` header.
Integer coefficients print as decimals; finite-field coefficients print as
colon-joined polynomial coordinates (the field's own element format), so
``parse_document(print_document(x))`` rebuilds ``x`` exactly and printing the
result again reproduces the same text.

Blank lines and lines starting with ``#`` are ignored.  Parse failures raise
:class:`ParseError` carrying the offending line number.
"""

from __future__ import annotations

from . import linalg as la
from .fields import FFElement, gf_make
from .green import GreenFunctor, GreenModule
from .linalg import ZZ
from .mackey import MackeyFunctor
from .modules import FPModule
from .gsets import CyclicGroup
from .rings import BasedRing

MAGIC = "mackeykit-doc 1"


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


# -- entry formatting --------------------------------------------------------

def _fmt_entry(x, base) -> str:
    if base is ZZ:
        return str(int(x))
    if not isinstance(x, FFElement):
        x = base.embed(int(x))
    return base.format_elem(x)


def _parse_entry(tok: str, base, lineno: int):
    try:
        if base is ZZ:
            return int(tok)
        return base.from_poly([int(c) for c in tok.split(":")])
    except ValueError:
        raise ParseError(f"bad coefficient {tok!r}", lineno) from None


# -- cursor over meaningful lines -------------------------------------------

class _Cursor:
    def __init__(self, text: str):
        self.rows = []
        for i, raw in enumerate(text.splitlines(), start=1):
            s = raw.strip()
            if s and not s.startswith("#"):
                self.rows.append((i, s))
        self.pos = 0

    @property
    def lineno(self) -> int:
        if self.pos < len(self.rows):
            return self.rows[self.pos][0]
        return self.rows[-1][0] + 1 if self.rows else 1

    def peek(self):
        if self.pos < len(self.rows):
            return self.rows[self.pos][1]
        return None

    def take(self) -> tuple[int, str]:
        if self.pos >= len(self.rows):
            raise ParseError("unexpected end of document", self.lineno)
        out = self.rows[self.pos]
        self.pos += 1
        return out

    def directive(self, expected: str) -> tuple[int, list[str]]:
        lineno, line = self.take()
        toks = line.split()
        if toks[0] != expected:
            raise ParseError(f"expected {expected!r}, found {toks[0]!r}", lineno)
        return lineno, toks[1:]

    def intline(self, expected: str) -> int:
        lineno, rest = self.directive(expected)
        if len(rest) != 1:
            raise ParseError(f"{expected} takes one value", lineno)
        try:
            return int(rest[0])
        except ValueError:
            raise ParseError(f"{expected} must be an integer", lineno) from None


def _take_int(toks: list[str], idx: int, what: str, lineno: int) -> int:
    try:
        return int(toks[idx])
    except (IndexError, ValueError):
        raise ParseError(f"expected integer {what}", lineno) from None


# -- matrix blocks -----------------------------------------------------------

def _emit_block(out: list[str], head: str, A, base):
    r, c = A.shape
    out.append(f"{head} rows {r} cols {c}")
    if r == 0 or c == 0:
        return
    for a in range(r):
        out.append(" ".join(_fmt_entry(A[a, b], base) for b in range(c)))


def _read_block(cur: _Cursor, head: str, rows: int, cols: int, base):
    lineno, toks = cur.directive(head.split()[0])
    want = head.split()[1:] + ["rows", str(rows), "cols", str(cols)]
    if toks != want:
        raise ParseError(
            f"expected '{head} rows {rows} cols {cols}', found "
            f"'{head.split()[0]} {' '.join(toks)}'", lineno)
    A = la.zeros(rows, cols)
    if rows == 0 or cols == 0:
        return A
    for a in range(rows):
        lineno, line = cur.take()
        entries = line.split()
        if len(entries) != cols:
            raise ParseError(f"expected {cols} entries, found {len(entries)}", lineno)
        for b, tok in enumerate(entries):
            A[a, b] = _parse_entry(tok, base, lineno)
    return A


# -- base field header -------------------------------------------------------

def _emit_base(out: list[str], base):
    if base is ZZ:
        out.append("base Z")
    else:
        mod = ":".join(str(c) for c in base.modulus)
        out.append(f"base GF {base.p} {base.k} {mod}")


def _parse_base(cur: _Cursor):
    lineno, toks = cur.directive("base")
    if toks == ["Z"]:
        return ZZ
    if len(toks) == 4 and toks[0] == "GF":
        p = _take_int(toks, 1, "characteristic", lineno)
        k = _take_int(toks, 2, "degree", lineno)
        try:
            mod = tuple(int(c) for c in toks[3].split(":"))
        except ValueError:
            raise ParseError("bad modulus coefficients", lineno) from None
        default = gf_make(p, k)
        if tuple(default.modulus) == mod:
            return default  # keep the interned instance so elements compare
        return gf_make(p, k, list(mod))
    raise ParseError("base must be 'Z' or 'GF p k m0:m1:...'", lineno)


# -- mackey functor body -----------------------------------------------------

def _emit_mackey_body(out: list[str], M: MackeyFunctor, prefix: str = "",
                      name_override: str | None = None):
    name = M.name if name_override is None else name_override
    if name:
        assert "\n" not in name
        out.append(f"{prefix}name {name}")
    n = M.group.n
    for s in range(n + 1):
        L = M.levels[s]
        out.append(f"{prefix}level {s} gens {L.gens} relations {L.relations.shape[1]}")
        if L.gens and L.relations.shape[1]:
            for a in range(L.gens):
                out.append(" ".join(_fmt_entry(L.relations[a, b], ZZ)
                                    for b in range(L.relations.shape[1])))
    for s in range(n):
        _emit_block(out, f"{prefix}res {s}", M.res[s], M.base)
    for s in range(n):
        _emit_block(out, f"{prefix}tr {s}", M.tr[s], M.base)
    for s in range(n + 1):
        _emit_block(out, f"{prefix}weyl {s}", M.weyl[s], M.base)


def _parse_mackey_body(cur: _Cursor, group: CyclicGroup, base, prefix: str = ""):
    name = ""
    head = cur.peek()
    if head is not None and head.split()[0] == f"{prefix}name":
        _, line = cur.take()
        name = line[len(f"{prefix}name "):]
    n = group.n
    levels = []
    for s in range(n + 1):
        lineno, toks = cur.directive(f"{prefix}level")
        if len(toks) != 5 or toks[1] != "gens" or toks[3] != "relations":
            raise ParseError("level line must read 'level s gens G relations C'", lineno)
        if _take_int(toks, 0, "level index", lineno) != s:
            raise ParseError(f"levels must appear in order; expected level {s}", lineno)
        gens = _take_int(toks, 2, "generator count", lineno)
        relc = _take_int(toks, 4, "relation count", lineno)
        if base is not ZZ and relc:
            raise ParseError("levels over a field cannot carry relations", lineno)
        rel = la.zeros(gens, relc)
        if gens and relc:
            for a in range(gens):
                lineno, line = cur.take()
                entries = line.split()
                if len(entries) != relc:
                    raise ParseError(f"expected {relc} entries, found {len(entries)}",
                                     lineno)
                for b, tok in enumerate(entries):
                    rel[a, b] = _parse_entry(tok, ZZ, lineno)
        levels.append(FPModule(base, gens, rel if relc else None))
    res = [_read_block(cur, f"{prefix}res {s}",
                       levels[s].gens, levels[s + 1].gens, base)
           for s in range(n)]
    tr = [_read_block(cur, f"{prefix}tr {s}",
                      levels[s + 1].gens, levels[s].gens, base)
          for s in range(n)]
    weyl = [_read_block(cur, f"{prefix}weyl {s}",
                        levels[s].gens, levels[s].gens, base)
            for s in range(n + 1)]
    return MackeyFunctor(group, base, levels, res, tr, weyl, name=name)


# -- green functor rings -----------------------------------------------------

def _emit_rings(out: list[str], R: GreenFunctor, prefix: str = ""):
    for s in range(R.n + 1):
        ring = R.ring(s)
        labels = ",".join(ring.labels) if ring.labels else "-"
        comm = 1 if ring.commutative else 0
        out.append(f"{prefix}ring {s} rank {ring.rank} commutative {comm} "
                   f"labels {labels}")
        _emit_block(out, f"{prefix}mult {s}", ring.mult, R.base)
        _emit_block(out, f"{prefix}unit {s}", ring.unit, R.base)


def _parse_rings(cur: _Cursor, und: MackeyFunctor, prefix: str = ""):
    rings = []
    for s in range(und.n + 1):
        lineno, toks = cur.directive(f"{prefix}ring")
        if (len(toks) != 7 or toks[1] != "rank" or toks[3] != "commutative"
                or toks[5] != "labels"):
            raise ParseError(
                "ring line must read 'ring s rank R commutative B labels L'", lineno)
        if _take_int(toks, 0, "ring level", lineno) != s:
            raise ParseError(f"rings must appear in order; expected ring {s}", lineno)
        rank = _take_int(toks, 2, "rank", lineno)
        if rank != und.levels[s].gens:
            raise ParseError(f"ring rank {rank} does not match level size "
                             f"{und.levels[s].gens}", lineno)
        comm = bool(_take_int(toks, 4, "commutativity flag", lineno))
        labels = None if toks[6] == "-" else toks[6].split(",")
        if labels is not None and len(labels) != rank:
            raise ParseError(f"expected {rank} labels", lineno)
        mult = _read_block(cur, f"{prefix}mult {s}", rank * rank, rank, und.base)
        unit = _read_block(cur, f"{prefix}unit {s}", rank, 1, und.base)
        rings.append(BasedRing(und.base, rank, mult, unit,
                               labels=labels, commutative=comm))
    return rings


# -- documents ---------------------------------------------------------------

def print_document(obj) -> str:
    """Render a Mackey functor, Green functor or Green module as text."""
    out = [MAGIC]
    if isinstance(obj, GreenModule):
        out.append("kind module")
        grp, base = obj.ring.group, obj.ring.base
        out += [f"prime {grp.p}", f"stages {grp.n}"]
        _emit_base(out, base)
        _emit_mackey_body(out, obj.ring.underlying, prefix="ring.")
        _emit_rings(out, obj.ring, prefix="ring.")
        _emit_mackey_body(out, obj.underlying, name_override=obj.name)
        for s in range(grp.n + 1):
            for u, A in enumerate(obj.action[s]):
                _emit_block(out, f"action {s} {u}", A, base)
    elif isinstance(obj, GreenFunctor):
        out.append("kind green")
        grp = obj.group
        out += [f"prime {grp.p}", f"stages {grp.n}"]
        _emit_base(out, obj.base)
        _emit_mackey_body(out, obj.underlying)
        _emit_rings(out, obj)
    elif isinstance(obj, MackeyFunctor):
        out.append("kind mackey")
        grp = obj.group
        out += [f"prime {grp.p}", f"stages {grp.n}"]
        _emit_base(out, obj.base)
        _emit_mackey_body(out, obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(out) + "\n"


def parse_document(text: str):
    """Inverse of :func:`print_document`; raises :class:`ParseError`."""
    cur = _Cursor(text)
    lineno, line = cur.take()
    if line != MAGIC:
        raise ParseError(f"first line must be {MAGIC!r}", lineno)
    lineno, toks = cur.directive("kind")
    if toks not in (["mackey"], ["green"], ["module"]):
        raise ParseError("kind must be mackey, green or module", lineno)
    kind = toks[0]
    p = cur.intline("prime")
    n = cur.intline("stages")
    try:
        group = CyclicGroup(p, n)
    except (AssertionError, ValueError):
        raise ParseError(f"no cyclic group with prime {p}, stages {n}",
                         cur.lineno) from None
    base = _parse_base(cur)

    if kind == "mackey":
        obj = _parse_mackey_body(cur, group, base)
    elif kind == "green":
        und = _parse_mackey_body(cur, group, base)
        rings = _parse_rings(cur, und)
        try:
            obj = GreenFunctor(und, rings, name=und.name)
        except AssertionError as exc:
            raise ParseError(str(exc) or "invalid ring data", cur.lineno) from None
    else:
        rund = _parse_mackey_body(cur, group, base, prefix="ring.")
        rings = _parse_rings(cur, rund, prefix="ring.")
        try:
            ring = GreenFunctor(rund, rings, name=rund.name)
        except AssertionError as exc:
            raise ParseError(str(exc) or "invalid ring data", cur.lineno) from None
        und = _parse_mackey_body(cur, group, base)
        action = []
        for s in range(n + 1):
            g = und.levels[s].gens
            action.append([_read_block(cur, f"action {s} {u}", g, g, base)
                           for u in range(ring.ring(s).rank)])
        obj = GreenModule(ring, und, action, name=und.name)

    if cur.peek() is not None:
        raise ParseError(f"unexpected trailing content {cur.peek()!r}", cur.lineno)
    return obj


def load_document(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def save_document(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_document(obj))
