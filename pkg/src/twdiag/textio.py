"""Line-oriented instance files (``.tw``).

An instance lists, in this order, an index category, an adjunction bundle
over it, named twisted diagrams and named twisted maps.  Blank lines and
text after ``#`` are ignored.  Matrices are written ``[a b; c d]`` with
entries as integers or ``p/q``; ``[]`` stands for any matrix with no rows
or no columns.

::

    category P1
    object + 0
    object 0 1
    arrow alpha : + -> 0
    compose g . f = h

    bundle demo
    monoid Z2 mul [0 1; 1 0] unit 0
    fiber + mset Z2          # also: chain R, module R, ptd
    adjoint alpha induct 0 1 # also: identity, shift k, power k, basechange p

    diagram Y
    at + mset [0 0; 1 2; 2 1]
    at 0 complex
    deg 0 orders 0 0
    deg 1 orders 0 d [1; -1]
    flat alpha images 0 1 1  # mset maps; [..] for module maps; chain + deg lines

    map f : Y -> Z
    comp + images 0 1 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import fincat as fc
from . import linalg as la
from .bundle import AdjunctionBundle
from .concrete import chains as ch
from .concrete import modules as md
from .concrete import msets as ms
from .concrete.adjunctions import Adjunction, adjunction_from_params
from .concrete.chains import ChainCategory
from .concrete.modules import ModuleCategory
from .concrete.msets import MSetCategory
from .fincat import FinCategory
from .twisted import TwistedDiagram, TwistedMap

SECTIONS = ("category", "bundle", "diagram", "map")
_TOKEN = re.compile(r"\[[^\]]*\]|\S+")


class TwParseError(ValueError):
    def __init__(self, path: str, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path, self.line, self.msg = path, line, msg


@dataclass
class Instance:
    category: FinCategory
    bundle: Optional[AdjunctionBundle] = None
    monoids: Dict[str, ms.FiniteMonoid] = field(default_factory=dict)
    diagrams: Dict[str, TwistedDiagram] = field(default_factory=dict)
    maps: Dict[str, TwistedMap] = field(default_factory=dict)
    path: str = "<string>"

    def diagram(self, name: Optional[str] = None) -> TwistedDiagram:
        if name is None:
            if not self.diagrams:
                raise KeyError("instance has no diagram")
            return next(iter(self.diagrams.values()))
        return self.diagrams[name]

    def map(self, name: Optional[str] = None) -> TwistedMap:
        if name is None:
            if not self.maps:
                raise KeyError("instance has no map")
            return next(iter(self.maps.values()))
        return self.maps[name]


@dataclass
class _Rec:
    line: int
    words: List[str]
    sub: List[Tuple[int, List[str]]] = field(default_factory=list)


# ------------------------------------------------------------------ parsing

def _words(text: str) -> List[str]:
    return _TOKEN.findall(text.split("#", 1)[0])


def parse_matrix(tok: str, R: la.Ring, shape: Tuple[int, int]) -> List[list]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ValueError(f"expected a matrix, got {tok!r}")
    body = tok[1:-1].strip()
    rows, cols = shape
    if not body:
        if rows and cols:
            raise ValueError(f"empty matrix where {rows}x{cols} was expected")
        return [[] for _ in range(rows)]
    out = [[R(Fraction(x)) if "/" in x else R(int(x)) for x in r.split()] for r in body.split(";")]
    if len(out) != rows or any(len(r) != cols for r in out):
        got = f"{len(out)}x{len(out[0]) if out else 0}"
        raise ValueError(f"matrix is {got}, expected {rows}x{cols}")
    return out


def _int_matrix(tok: str) -> List[List[int]]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ValueError(f"expected a matrix, got {tok!r}")
    body = tok[1:-1].strip()
    return [[int(x) for x in r.split()] for r in body.split(";")] if body else []


class _Parser:
    def __init__(self, text: str, path: str):
        self.path = path
        self.text = text
        self.fiber_cache: Dict[tuple, object] = {}

    def err(self, line: int, msg: str):
        return TwParseError(self.path, line, msg)

    def wrap(self, line: int, e: Exception):
        # an inner parse error already carries the more precise line
        return e if isinstance(e, TwParseError) else self.err(line, str(e))

    def records(self):
        sections: List[Tuple[str, _Rec, List[_Rec]]] = []
        order = -1
        for n, raw in enumerate(self.text.splitlines(), 1):
            w = _words(raw)
            if not w:
                continue
            if w[0] in SECTIONS:
                k = SECTIONS.index(w[0])
                if k < order:
                    raise self.err(n, f"section '{w[0]}' out of order "
                                      f"(expected {' -> '.join(SECTIONS)})")
                if w[0] == "category" and order == 0:
                    raise self.err(n, "only one category section is allowed")
                if w[0] == "bundle" and order == 1:
                    raise self.err(n, "only one bundle section is allowed")
                order = k
                sections.append((w[0], _Rec(n, w), []))
            elif not sections:
                raise self.err(n, f"'{w[0]}' before any section header")
            elif w[0] == "deg":
                body = sections[-1][2]
                if not body:
                    raise self.err(n, "'deg' line without an entry to attach to")
                body[-1].sub.append((n, w))
            else:
                sections[-1][2].append(_Rec(n, w))
        return sections

    def parse(self) -> Instance:
        secs = self.records()
        if not secs or secs[0][0] != "category":
            raise self.err(1, "instance must start with a category section")
        inst = Instance(self.category(secs[0][1], secs[0][2]), path=self.path)
        for kind, head, body in secs[1:]:
            if kind == "bundle":
                inst.bundle = self.bundle(inst, head, body)
                continue
            if inst.bundle is None:
                raise self.err(head.line, f"'{kind}' needs a bundle section first")
            if kind == "diagram":
                if len(head.words) != 2:
                    raise self.err(head.line, "usage: diagram <name>")
                name = head.words[1]
                if name in inst.diagrams:
                    raise self.err(head.line, f"duplicate diagram {name!r}")
                inst.diagrams[name] = self.diagram(inst, head, body)
            else:
                w = head.words
                if len(w) != 6 or w[2] != ":" or w[4] != "->":
                    raise self.err(head.line, "usage: map <name> : <diagram> -> <diagram>")
                if w[1] in inst.maps:
                    raise self.err(head.line, f"duplicate map {w[1]!r}")
                for d in (w[3], w[5]):
                    if d not in inst.diagrams:
                        raise self.err(head.line, f"unknown diagram {d!r}")
                inst.maps[w[1]] = self.twmap(inst.diagrams[w[3]], inst.diagrams[w[5]], head, body)
        return inst

    # category ----------------------------------------------------------
    def category(self, head: _Rec, body: List[_Rec]) -> FinCategory:
        name = head.words[1] if len(head.words) > 1 else ""
        objects, degree, ids, arrows, comp = [], {}, {}, {}, {}
        where: Dict[str, int] = {}
        for r in body:
            w = r.words
            if w[0] == "object":
                if len(w) not in (2, 3):
                    raise self.err(r.line, "usage: object <id> [degree]")
                if w[1] in objects:
                    raise self.err(r.line, f"duplicate object {w[1]!r}")
                objects.append(w[1])
                if len(w) == 3:
                    try:
                        degree[w[1]] = int(w[2])
                    except ValueError:
                        raise self.err(r.line, f"degree must be an integer, got {w[2]!r}")
            elif w[0] == "identity":
                if len(w) != 3 or w[1] not in objects:
                    raise self.err(r.line, "usage: identity <object> <arrow id>")
                ids[w[1]] = w[2]
            elif w[0] == "arrow":
                if len(w) != 6 or w[2] != ":" or w[4] != "->":
                    raise self.err(r.line, "usage: arrow <id> : <src> -> <dst>")
                for o in (w[3], w[5]):
                    if o not in objects:
                        raise self.err(r.line, f"unknown object {o!r}")
                if w[1] in arrows:
                    raise self.err(r.line, f"duplicate arrow {w[1]!r}")
                arrows[w[1]] = (w[3], w[5])
                where[w[1]] = r.line
            elif w[0] == "compose":
                if len(w) != 6 or w[2] != "." or w[4] != "=":
                    raise self.err(r.line, "usage: compose <g> . <f> = <h>")
                comp[(w[1], w[3])] = (w[5], r.line)
            else:
                raise self.err(r.line, f"unknown category line '{w[0]}'")
        if degree and len(degree) != len(objects):
            raise self.err(head.line, "either every object has a degree or none does")
        for a in objects:
            ids.setdefault(a, f"id_{a}")
        morphisms = {e: (a, a) for a, e in ids.items()}
        for f, st in arrows.items():
            if f in morphisms:
                raise self.err(where[f], f"arrow {f!r} clashes with an identity id")
            morphisms[f] = st
        table = {}
        for (g, f), (h, line) in comp.items():
            for x in (g, f, h):
                if x not in morphisms:
                    raise self.err(line, f"unknown arrow {x!r}")
            if morphisms[f][1] != morphisms[g][0]:
                raise self.err(line, f"{g} . {f} is not composable")
            table[(g, f)] = h
        for f, (a, b) in morphisms.items():
            table.setdefault((f, ids[a]), f)
            table.setdefault((ids[b], f), f)
        for f, (a, b) in arrows.items():
            for g in arrows:
                if morphisms[g][0] == b and (g, f) not in table:
                    raise self.err(where[g], f"missing composite '{g} . {f}'")
        c = FinCategory(objects, morphisms, table, ids, degree or None, name)
        problems = fc.validate_category(c)
        if problems:
            raise self.err(head.line, "invalid category: " + "; ".join(problems[:3]))
        return c

    # bundle ------------------------------------------------------------
    def fiber_category(self, key: tuple):
        if key not in self.fiber_cache:
            kind, arg = key
            if kind == "chain":
                self.fiber_cache[key] = ChainCategory(la.ring_from_name(arg))
            elif kind == "module":
                self.fiber_cache[key] = ModuleCategory(la.ring_from_name(arg))
            else:
                self.fiber_cache[key] = MSetCategory(arg)
        return self.fiber_cache[key]

    def bundle(self, inst: Instance, head: _Rec, body: List[_Rec]) -> AdjunctionBundle:
        I = inst.category
        fibers, adj, params = {}, {}, {}
        for r in body:
            w = r.words
            if w[0] == "monoid":
                if len(w) != 6 or w[2] != "mul" or w[4] != "unit":
                    raise self.err(r.line, "usage: monoid <name> mul [table] unit <e>")
                try:
                    M = ms.FiniteMonoid(tuple(tuple(row) for row in _int_matrix(w[3])), int(w[5]), w[1])
                except ValueError as e:
                    raise self.wrap(r.line, e)
                problems = ms.monoid_check(M)
                if problems:
                    raise self.err(r.line, f"monoid {w[1]}: " + "; ".join(problems[:3]))
                inst.monoids[w[1]] = M
            elif w[0] == "fiber":
                if len(w) < 3:
                    raise self.err(r.line, "usage: fiber <object|*> <chain R|module R|mset M|ptd>")
                targets = list(I.objects) if w[1] == "*" else [w[1]]
                if w[1] != "*" and w[1] not in I.objects:
                    raise self.err(r.line, f"unknown object {w[1]!r}")
                try:
                    if w[2] in ("chain", "module") and len(w) == 4:
                        C = self.fiber_category((w[2], la.ring_from_name(w[3]).name))
                    elif w[2] == "mset" and len(w) == 4:
                        if w[3] not in inst.monoids:
                            raise ValueError(f"unknown monoid {w[3]!r}")
                        C = self.fiber_category(("mset", inst.monoids[w[3]]))
                    elif w[2] == "ptd" and len(w) == 3:
                        C = self.fiber_category(("mset", ms.trivial_monoid()))
                    else:
                        raise ValueError(f"bad fiber declaration {' '.join(w[2:])!r}")
                except ValueError as e:
                    raise self.wrap(r.line, e)
                for i in targets:
                    fibers[i] = C
            elif w[0] == "adjoint":
                if len(w) < 3 or w[1] not in I.morphisms:
                    raise self.err(r.line, "usage: adjoint <arrow> <kind> [params]")
                params[w[1]] = (r.line, w[2], w[3:])
            else:
                raise self.err(r.line, f"unknown bundle line '{w[0]}'")
        for i in I.objects:
            if i not in fibers:
                raise self.err(head.line, f"no fiber at object {i!r}")
        for f, (a, b) in I.morphisms.items():
            if I.is_identity(f):
                continue
            if f not in params:
                raise self.err(head.line, f"no adjunction for arrow {f!r}")
            line, kind, args = params[f]
            try:
                adj[f] = self.adjunction(kind, args, fibers[a], fibers[b])
            except TwParseError:
                raise
            except (ValueError, KeyError, TypeError) as e:
                raise self.err(line, f"adjunction {f}: {e}")
        name = head.words[1] if len(head.words) > 1 else "bundle"
        return AdjunctionBundle(I, fibers, adj, name=name)

    def adjunction(self, kind: str, args: List[str], C, D) -> Adjunction:
        ints = [int(x) for x in args]
        if kind == "identity":
            if ints or C != D:
                raise ValueError("identity needs equal fibers and no parameters")
            return adjunction_from_params(kind, {}, C)
        if kind in ("shift", "power", "basechange") and len(ints) != 1:
            raise ValueError(f"{kind} takes one integer parameter")
        if kind in ("shift", "power"):
            if C != D:
                raise ValueError(f"{kind} needs equal fibers at both ends")
            if kind == "shift" and not isinstance(C, ChainCategory):
                raise ValueError("shift needs chain fibers")
            return adjunction_from_params(kind, {"k": ints[0]}, C)
        if kind == "basechange":
            if not (isinstance(C, ChainCategory) and C.ring == la.ZZ and isinstance(D, ChainCategory)
                    and D.ring == la.GF(ints[0])):
                raise ValueError("basechange needs chain ZZ -> chain F_p fibers")
            return adjunction_from_params(kind, {"p": ints[0]}, C, D)
        if kind == "induct":
            if not (isinstance(C, MSetCategory) and isinstance(D, MSetCategory)):
                raise ValueError("induct needs monoid-set fibers")
            return adjunction_from_params(kind, {"images": ints}, C, D)
        raise ValueError(f"unknown adjunction kind {kind!r}")

    # objects and maps ----------------------------------------------------
    def obj(self, C, rec: _Rec, words: List[str]):
        """Object literal: words after 'at <i>'."""
        line = rec.line
        try:
            if isinstance(C, ChainCategory):
                if words != ["complex"]:
                    raise ValueError("chain fiber expects 'complex' with deg lines")
                return self.complex(C.ring, rec)
            if rec.sub:
                raise ValueError("deg lines only follow chain entries")
            if isinstance(C, ModuleCategory):
                if not words or words[0] != "module":
                    raise ValueError("module fiber expects 'module <orders>'")
                return md.Module(C.ring, tuple(int(x) for x in words[1:]))
            if isinstance(C, MSetCategory):
                if words[:1] == ["ptd"] and len(words) == 2 and C.monoid.is_trivial():
                    X = ms.pointed_set(int(words[1]))
                    return ms.MSet(C.monoid, X.act)
                if words[:1] != ["mset"] or len(words) != 2:
                    raise ValueError("monoid-set fiber expects 'mset [action table]' or 'ptd n'")
                act = tuple(tuple(r) for r in _int_matrix(words[1]))
                X = ms.MSet(C.monoid, act)
                if any(len(r) != C.monoid.order for r in act):
                    raise ValueError(f"action table needs {C.monoid.order} columns")
                problems = ms.mset_check(X)
                if problems:
                    raise ValueError("; ".join(problems[:3]))
                return X
        except ValueError as e:
            raise self.wrap(line, e)
        raise self.err(line, f"unsupported fiber {C!r}")

    def complex(self, R: la.Ring, rec: _Rec) -> ch.ChainComplex:
        orders, diffs = {}, {}
        for line, w in rec.sub:
            try:
                n = int(w[1])
                if len(w) < 3 or w[2] != "orders" or n < 0:
                    raise ValueError
            except (ValueError, IndexError):
                raise self.err(line, "usage: deg <n> orders <o...> [d [matrix]]")
            rest = w[3:]
            if "d" in rest:
                k = rest.index("d")
                if k != len(rest) - 2:
                    raise self.err(line, "'d' must be followed by exactly one matrix")
                diffs[n] = (line, rest[k + 1])
                rest = rest[:k]
            if n in orders:
                raise self.err(line, f"degree {n} given twice")
            try:
                orders[n] = tuple(int(x) for x in rest)
            except ValueError:
                raise self.err(line, "orders must be integers")
        top = max(orders) if orders else -1
        mods = [md.Module(R, orders.get(n, ())) for n in range(top + 1)]
        rows = []
        for n in range(1, top + 1):
            if n in diffs:
                line, tok = diffs[n]
                try:
                    rows.append(parse_matrix(tok, R, (mods[n - 1].rank, mods[n].rank)))
                except ValueError as e:
                    raise self.err(line, f"d_{n}: {e}")
            else:
                rows.append(la.zeros(R, mods[n - 1].rank, mods[n].rank))
        if 0 in diffs:
            raise self.err(diffs[0][0], "there is no d_0")
        X = ch.complex_from(R, mods, rows)
        problems = ch.complex_check(X)
        if problems:
            raise self.err(rec.line, "; ".join(problems[:3]))
        return X

    def mor(self, C, rec: _Rec, words: List[str], X, Y):
        """Morphism literal X -> Y in C."""
        line = rec.line
        try:
            if isinstance(C, ChainCategory):
                if words != ["chain"]:
                    raise ValueError("chain fiber expects 'chain' with deg lines")
                comps = {}
                for ln, w in rec.sub:
                    if len(w) != 3:
                        raise self.err(ln, "usage: deg <n> [matrix]")
                    n = int(w[1])
                    try:
                        comps[n] = parse_matrix(w[2], C.ring, (Y.module(n).rank, X.module(n).rank))
                    except ValueError as e:
                        raise self.err(ln, f"degree {n}: {e}")
                L = max(X.length, Y.length)
                if any(n >= L or n < 0 for n in comps):
                    raise ValueError("component outside the degree range of the complexes")
                f = ch.chain_map(X, Y, [comps.get(n) for n in range(L)])
                problems = ch.map_check(f)
                if problems:
                    raise ValueError("; ".join(problems[:3]))
                return f
            if rec.sub:
                raise ValueError("deg lines only follow chain entries")
            if isinstance(C, ModuleCategory):
                if len(words) != 1:
                    raise ValueError("module map expects one matrix")
                f = md.module_map(X, Y, parse_matrix(words[0], C.ring, (Y.rank, X.rank)))
                if not md.well_defined(f):
                    raise ValueError("module map is not well defined")
                return f
            if isinstance(C, MSetCategory):
                if not words or words[0] != "images":
                    raise ValueError("monoid-set map expects 'images <values>'")
                f = ms.MSetMap(X, Y, tuple(int(x) for x in words[1:]))
                problems = ms.mset_map_check(f)
                if problems:
                    raise ValueError("; ".join(problems[:3]))
                return f
        except ValueError as e:
            raise self.wrap(line, e)
        raise self.err(line, f"unsupported fiber {C!r}")

    def diagram(self, inst: Instance, head: _Rec, body: List[_Rec]) -> TwistedDiagram:
        b = inst.bundle
        I = b.index
        comps, flats = {}, {}
        pending = []
        for r in body:
            w = r.words
            if w[0] == "at" and len(w) >= 3:
                if w[1] not in I.objects:
                    raise self.err(r.line, f"unknown object {w[1]!r}")
                if w[1] in comps:
                    raise self.err(r.line, f"object {w[1]!r} given twice")
                comps[w[1]] = self.obj(b.fibers[w[1]], r, w[2:])
            elif w[0] == "flat" and len(w) >= 3:
                if w[1] not in I.morphisms:
                    raise self.err(r.line, f"unknown arrow {w[1]!r}")
                pending.append(r)
            else:
                raise self.err(r.line, f"unknown diagram line '{w[0]}'")
        for i in I.objects:
            if i not in comps:
                raise self.err(head.line, f"diagram has no entry at {i!r}")
        for r in pending:
            s = r.words[1]
            i, j = I.src(s), I.dst(s)
            if s in flats:
                raise self.err(r.line, f"arrow {s!r} given twice")
            flats[s] = self.mor(b.fibers[i], r, r.words[2:], comps[i], b.U(s, comps[j]))
        for s in I.morphisms:
            if not I.is_identity(s) and s not in flats:
                raise self.err(head.line, f"diagram has no structure map for {s!r}")
        return TwistedDiagram(b, comps, flats)

    def twmap(self, y: TwistedDiagram, z: TwistedDiagram, head: _Rec, body: List[_Rec]) -> TwistedMap:
        b = y.bundle
        comps = {}
        for r in body:
            w = r.words
            if w[0] != "comp" or len(w) < 3:
                raise self.err(r.line, f"unknown map line '{w[0]}'")
            if w[1] not in b.index.objects:
                raise self.err(r.line, f"unknown object {w[1]!r}")
            comps[w[1]] = self.mor(b.fibers[w[1]], r, w[2:], y[w[1]], z[w[1]])
        for i in b.index.objects:
            if i not in comps:
                raise self.err(head.line, f"map has no component at {i!r}")
        return TwistedMap(y, z, comps)


def parse(text: str, path: str = "<string>") -> Instance:
    return _Parser(text, path).parse()


def load(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path)


# ------------------------------------------------------------ serializing

def format_matrix(R: la.Ring, rows) -> str:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return "[]"
    return "[" + "; ".join(" ".join(R.fmt(x) for x in r) for r in rows) + "]"


def _fiber_words(C, monoid_names: Dict[ms.FiniteMonoid, str]) -> str:
    if isinstance(C, ChainCategory):
        return f"chain {C.ring.name}"
    if isinstance(C, ModuleCategory):
        return f"module {C.ring.name}"
    if C.monoid.is_trivial():
        return "ptd"
    return f"mset {monoid_names[C.monoid]}"


def object_lines(C, X) -> List[str]:
    """Object literal, first line to be prefixed by 'at <i> '."""
    if isinstance(C, ChainCategory):
        out = ["complex"]
        for n, M in enumerate(X.modules):
            line = f"deg {n} orders " + " ".join(map(str, M.orders))
            if n >= 1:
                line += " d " + format_matrix(C.ring, X.d(n).matrix)
            out.append(line.replace("orders  d", "orders d").rstrip())
        return out
    if isinstance(C, ModuleCategory):
        return [("module " + " ".join(map(str, X.orders))).rstrip()]
    if C.monoid.is_trivial():
        return [f"ptd {X.size}"]
    return ["mset " + format_matrix(la.ZZ, X.act)]


def morphism_lines(C, f) -> List[str]:
    if isinstance(C, ChainCategory):
        return ["chain"] + [f"deg {n} " + format_matrix(C.ring, c.matrix) for n, c in enumerate(f.comps)]
    if isinstance(C, ModuleCategory):
        return [format_matrix(C.ring, f.matrix)]
    return [("images " + " ".join(map(str, f.images))).rstrip()]


def _prefixed(prefix: str, lines: List[str]) -> List[str]:
    return [f"{prefix} {lines[0]}"] + lines[1:]


def category_lines(c: FinCategory) -> List[str]:
    out = [f"category {c.name}".rstrip()]
    for a in c.objects:
        out.append(f"object {a}" + (f" {c.degree[a]}" if c.degree is not None else ""))
    for a in c.objects:
        if c.identity(a) != f"id_{a}":
            out.append(f"identity {a} {c.identity(a)}")
    for f in c.non_identities():
        a, b = c.morphisms[f]
        out.append(f"arrow {f} : {a} -> {b}")
    for (g, f), h in c.comp.items():
        if not (c.is_identity(g) or c.is_identity(f)):
            out.append(f"compose {g} . {f} = {h}")
    return out


def bundle_lines(b: AdjunctionBundle) -> List[str]:
    I = b.index
    out = [f"bundle {b.name}"]
    names: Dict[ms.FiniteMonoid, str] = {}
    for i in I.objects:
        C = b.fibers[i]
        if isinstance(C, MSetCategory) and not C.monoid.is_trivial() and C.monoid not in names:
            nm = C.monoid.name if C.monoid.name not in names.values() else f"M{len(names)}"
            names[C.monoid] = re.sub(r"\s", "", nm)
            out.append(f"monoid {names[C.monoid]} mul {format_matrix(la.ZZ, C.monoid.mul)} "
                       f"unit {C.monoid.unit}")
    for i in I.objects:
        out.append(f"fiber {i} {_fiber_words(b.fibers[i], names)}")
    for f in I.non_identities():
        a = b.adj[f]
        args = [str(v) for v in (a.params().get("images") or list(a.params().values()))]
        out.append(" ".join([f"adjoint {f} {a.kind}"] + args))
    return out


def diagram_lines(name: str, y: TwistedDiagram) -> List[str]:
    b, I = y.bundle, y.index
    out = [f"diagram {name}"]
    for i in I.objects:
        out += _prefixed(f"at {i}", object_lines(b.fibers[i], y[i]))
    for s in I.non_identities():
        out += _prefixed(f"flat {s}", morphism_lines(b.fibers[I.src(s)], y.flats[s]))
    return out


def map_lines(name: str, f: TwistedMap, src: str, dst: str) -> List[str]:
    b = f.src.bundle
    out = [f"map {name} : {src} -> {dst}"]
    for i in b.index.objects:
        out += _prefixed(f"comp {i}", morphism_lines(b.fibers[i], f[i]))
    return out


def _name_of(inst: Instance, y: TwistedDiagram) -> str:
    for k, v in inst.diagrams.items():
        if v is y:
            return k
    for k, v in inst.diagrams.items():
        if v == y:
            return k
    raise KeyError("map endpoint is not a named diagram")


def serialize(inst: Instance) -> str:
    blocks = [category_lines(inst.category)]
    if inst.bundle is not None:
        blocks.append(bundle_lines(inst.bundle))
    for name, y in inst.diagrams.items():
        blocks.append(diagram_lines(name, y))
    for name, f in inst.maps.items():
        blocks.append(map_lines(name, f, _name_of(inst, f.src), _name_of(inst, f.dst)))
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"


def same_instance(a: Instance, b: Instance) -> bool:
    """Structural equality of parsed models."""
    if a.category.signature() != b.category.signature() or a.category.degree != b.category.degree:
        return False
    if (a.bundle is None) != (b.bundle is None):
        return False
    if a.bundle is not None:
        A, B = a.bundle, b.bundle
        if A.fibers != B.fibers:
            return False
        for f in A.index.morphisms:
            if (A.adj[f].kind, A.adj[f].params()) != (B.adj[f].kind, B.adj[f].params()):
                return False
    if list(a.diagrams) != list(b.diagrams) or list(a.maps) != list(b.maps):
        return False
    if any(a.diagrams[k] != b.diagrams[k] for k in a.diagrams):
        return False
    return all(a.maps[k] == b.maps[k] for k in a.maps)


def instance_of(y: TwistedDiagram, maps: Optional[Dict[str, TwistedMap]] = None,
                diagrams: Optional[Dict[str, TwistedDiagram]] = None) -> Instance:
    """Wrap generated objects into a serializable instance."""
    ds = dict(diagrams) if diagrams is not None else {"Y": y}
    inst = Instance(y.index, y.bundle, diagrams=ds, maps=dict(maps or {}))
    return inst
