"""Twisted diagrams and their maps, stored in flat form.

A diagram assigns Y_i in C_i and y_flat[s]: Y_i -> U_s(Y_j) to each arrow
s: i -> j.  Sharp forms F_s(Y_i) -> Y_j are derived by transposition.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import fincat as fc
from . import linalg as la
from .bundle import (AdjunctionBundle, IMorphism, inverse_image_bundle, uniqueness_iso)
from .concrete import chains as ch
from .concrete.base import Diagram
from .concrete.chains import ChainCategory
from .fincat import FinCategory, FinFunctor


class TwistedDiagram:
    def __init__(self, bundle: AdjunctionBundle, components: Mapping[str, object],
                 flats: Mapping[str, object]):
        self.bundle = bundle
        self.components = dict(components)
        flats = dict(flats)
        I = bundle.index
        for i in I.objects:
            flats.setdefault(I.identity(i), bundle.fibers[i].identity(self.components[i]))
        self.flats = flats

    @property
    def index(self) -> FinCategory:
        return self.bundle.index

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, TwistedDiagram) and self.components == other.components \
            and self.flats == other.flats

    def __hash__(self):
        return hash(tuple(sorted(self.components)))

    def __repr__(self):
        return f"TwistedDiagram({self.components})"


class TwistedMap:
    def __init__(self, src: TwistedDiagram, dst: TwistedDiagram, components: Mapping[str, object]):
        self.src, self.dst = src, dst
        self.components = dict(components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, TwistedMap) and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components)))

    def __repr__(self):
        return f"TwistedMap({self.components})"


def evaluate(y: TwistedDiagram, i: str):
    if i not in y.components:
        raise KeyError(f"unknown object {i!r}")
    return y.components[i]


def evaluate_map(f: TwistedMap, i: str):
    return f.components[i]


# ------------------------------------------------------------- transposes

def sharp(y: TwistedDiagram, s: str):
    """y_sharp[s]: F_s(Y_i) -> Y_j."""
    I = y.index
    return y.bundle.sharp(s, y.flats[s], y.components[I.dst(s)])


def flat_of(b: AdjunctionBundle, s: str, h, X):
    """The flat transpose X -> U_s Y of h: F_s X -> Y."""
    return b.flat(s, h, X)


def from_sharps(b: AdjunctionBundle, components: Mapping[str, object],
                sharps: Mapping[str, object]) -> TwistedDiagram:
    I = b.index
    flats = {s: b.flat(s, h, components[I.src(s)]) for s, h in sharps.items()}
    return TwistedDiagram(b, components, flats)


def sharps(y: TwistedDiagram) -> Dict[str, object]:
    return {s: sharp(y, s) for s in y.index.morphisms}


# ------------------------------------------------------------- validation

def validate_twisted(y: TwistedDiagram, form: str = "flat") -> List[Tuple[str, ...]]:
    """Violations as tuples: ('identity', s), ('typing', s) or ('cocycle', t, s)."""
    b = y.bundle
    I = b.index
    out = []
    for i in I.objects:
        if b.fibers[i].check_object(y.components[i]):
            out.append(("object", i))
    for s, (i, j) in I.morphisms.items():
        m = y.flats.get(s)
        if m is None or m.src != y.components[i] or m.dst != b.U(s, y.components[j]):
            out.append(("typing", s))
    if out:
        return out
    if form == "flat":
        for i in I.objects:
            s = I.identity(i)
            if y.flats[s] != b.fibers[i].identity(y.components[i]):
                out.append(("identity", s))
        for (t, s), ts in sorted(I.comp.items()):
            if I.is_identity(t) or I.is_identity(s):
                continue
            i = I.src(s)
            rhs = b.fibers[i].compose(b.U_map(s, y.flats[t]), y.flats[s])
            if y.flats[ts] != rhs:
                out.append(("cocycle", t, s))
    elif form == "sharp":
        sh = sharps(y)
        for i in I.objects:
            s = I.identity(i)
            if sh[s] != b.fibers[i].identity(y.components[i]):
                out.append(("identity", s))
        for (t, s), ts in sorted(I.comp.items()):
            if I.is_identity(t) or I.is_identity(s):
                continue
            i, k = I.src(s), I.dst(t)
            C = b.fibers[k]
            lhs = C.compose(sh[t], b.F_map(t, sh[s]))
            rhs = C.compose(sh[ts], uniqueness_iso(b, s, t, y.components[i]))
            if lhs != rhs:
                out.append(("cocycle", t, s))
    else:
        raise ValueError(f"unknown form {form!r}")
    return out


def is_valid(y: TwistedDiagram) -> bool:
    return not validate_twisted(y)


def validate_map(f: TwistedMap, form: str = "flat") -> List[str]:
    """Arrows s where the naturality square fails."""
    y, z = f.src, f.dst
    b = y.bundle
    I = b.index
    out = []
    for i in I.objects:
        g = f.components.get(i)
        if g is None or g.src != y.components[i] or g.dst != z.components[i]:
            return [f"typing:{i}"]
    for s, (i, j) in sorted(I.morphisms.items()):
        if I.is_identity(s):
            continue
        if form == "flat":
            C = b.fibers[i]
            lhs = C.compose(b.U_map(s, f.components[j]), y.flats[s])
            rhs = C.compose(z.flats[s], f.components[i])
        elif form == "sharp":
            C = b.fibers[j]
            lhs = C.compose(f.components[j], sharp(y, s))
            rhs = C.compose(sharp(z, s), b.F_map(s, f.components[i]))
        else:
            raise ValueError(f"unknown form {form!r}")
        if lhs != rhs:
            out.append(s)
    return out


def identity_map(y: TwistedDiagram) -> TwistedMap:
    b = y.bundle
    return TwistedMap(y, y, {i: b.fibers[i].identity(y.components[i]) for i in y.index.objects})


def compose_maps(g: TwistedMap, f: TwistedMap) -> TwistedMap:
    b = f.src.bundle
    return TwistedMap(f.src, g.dst, {i: b.fibers[i].compose(g.components[i], f.components[i])
                                     for i in b.index.objects})


def zero_map(y: TwistedDiagram, z: TwistedDiagram) -> TwistedMap:
    b = y.bundle
    return TwistedMap(y, z, {i: b.fibers[i].zero_map(y.components[i], z.components[i])
                             for i in b.index.objects})


def initial_diagram(b: AdjunctionBundle) -> TwistedDiagram:
    I = b.index
    comps = {i: b.fibers[i].zero_object() for i in I.objects}
    flats = {s: b.fibers[i].zero_map(comps[i], b.U(s, comps[j])) for s, (i, j) in I.morphisms.items()}
    return TwistedDiagram(b, comps, flats)


# ------------------------------------------------------------- corruption

def corrupt(y: TwistedDiagram, rng: random.Random,
            only_composites: bool = True) -> Tuple[TwistedDiagram, Optional[str]]:
    """Replace one structure map by a different map of the same type.

    Returns the new diagram and the arrow changed (None if no alternative
    map exists).
    """
    b = y.bundle
    I = b.index
    cands = [s for s in I.non_identities()
             if not only_composites or any(I.comp.get((t, u)) == s
                                           for (t, u) in I.comp if not I.is_identity(t)
                                           and not I.is_identity(u))]
    if not cands:
        cands = list(I.non_identities())
    rng.shuffle(cands)
    for s in cands:
        i, j = I.src(s), I.dst(s)
        C = b.fibers[i]
        old = y.flats[s]
        new = _different_map(C, old, rng)
        if new is None:
            continue
        flats = dict(y.flats)
        flats[s] = new
        return TwistedDiagram(b, y.components, flats), s
    return y, None


def _different_map(C, old, rng):
    if getattr(C, "enumerable", False):
        others = [h for h in itertools.islice(C.homs(old.src, old.dst), 200) if h != old]
        return rng.choice(others) if others else None
    for _ in range(6):
        h = C.add(old, C.random_map(rng, old.src, old.dst))
        if h != old:
            return h
    return None


# ---------------------------------------------------------- (co)limits in Tw

@dataclass
class DiagramOfDiagrams:
    """A functor from ``shape`` into Tw(I, B)."""
    shape: FinCategory
    objs: Dict[str, TwistedDiagram]
    mors: Dict[str, TwistedMap]

    def mor(self, m: str) -> TwistedMap:
        f = self.mors.get(m)
        if f is None and self.shape.is_identity(m):
            return identity_map(self.objs[self.shape.src(m)])
        return f


@dataclass
class TwColimit:
    apex: TwistedDiagram
    legs: Dict[str, TwistedMap]
    certs: Dict[str, object]

    def mediate(self, cocone: Mapping[str, TwistedMap], target: TwistedDiagram) -> TwistedMap:
        comps = {i: c.mediate({k: f.components[i] for k, f in cocone.items()},
                              target.components[i]) for i, c in self.certs.items()}
        return TwistedMap(self.apex, target, comps)


@dataclass
class TwLimit:
    apex: TwistedDiagram
    legs: Dict[str, TwistedMap]
    certs: Dict[str, object]

    def mediate(self, cone: Mapping[str, TwistedMap], source: TwistedDiagram) -> TwistedMap:
        comps = {i: c.mediate({k: f.components[i] for k, f in cone.items()},
                              source.components[i]) for i, c in self.certs.items()}
        return TwistedMap(source, self.apex, comps)


def _evaluated(G: DiagramOfDiagrams, i: str) -> Diagram:
    return Diagram(G.shape, {k: y.components[i] for k, y in G.objs.items()},
                   {m: G.mor(m).components[i] for m in G.shape.morphisms})


def diagram_colimit(G: DiagramOfDiagrams, b: AdjunctionBundle) -> TwColimit:
    """Pointwise colimit; flat structure maps come from the universal property."""
    I = b.index
    certs = {i: b.fibers[i].colimit(_evaluated(G, i)) for i in I.objects}
    comps = {i: certs[i].apex for i in I.objects}
    flats = {}
    for s, (i, j) in I.morphisms.items():
        if I.is_identity(s):
            continue
        target = b.U(s, comps[j])
        cocone = {k: b.fibers[i].compose(b.U_map(s, certs[j].legs[k]), y.flats[s])
                  for k, y in G.objs.items()}
        flats[s] = certs[i].mediate(cocone, target)
    apex = TwistedDiagram(b, comps, flats)
    legs = {k: TwistedMap(G.objs[k], apex, {i: certs[i].legs[k] for i in I.objects})
            for k in G.objs}
    return TwColimit(apex, legs, certs)


def diagram_limit(G: DiagramOfDiagrams, b: AdjunctionBundle) -> TwLimit:
    """Pointwise limit; sharp structure maps come from the universal property."""
    I = b.index
    certs = {i: b.fibers[i].limit(_evaluated(G, i)) for i in I.objects}
    comps = {i: certs[i].apex for i in I.objects}
    flats = {}
    for s, (i, j) in I.morphisms.items():
        if I.is_identity(s):
            continue
        source = b.F(s, comps[i])
        cone = {k: b.fibers[j].compose(sharp(y, s), b.F_map(s, certs[i].legs[k]))
                for k, y in G.objs.items()}
        flats[s] = b.flat(s, certs[j].mediate(cone, source), comps[i])
    apex = TwistedDiagram(b, comps, flats)
    legs = {k: TwistedMap(apex, G.objs[k], {i: certs[i].legs[k] for i in I.objects})
            for k in G.objs}
    return TwLimit(apex, legs, certs)


def _parallel_pair() -> FinCategory:
    return FinCategory(["S", "T"], {"id_S": ("S", "S"), "id_T": ("T", "T"),
                                    "u": ("S", "T"), "v": ("S", "T")},
                       {("id_S", "id_S"): "id_S", ("id_T", "id_T"): "id_T",
                        ("u", "id_S"): "u", ("id_T", "u"): "u",
                        ("v", "id_S"): "v", ("id_T", "v"): "v"},
                       {"S": "id_S", "T": "id_T"}, name="pair")


def colimit_by_coequalizer(G: DiagramOfDiagrams, b: AdjunctionBundle) -> TwColimit:
    """The same colimit built as a coequalizer of two coproducts in Tw."""
    shape = G.shape
    arrows = shape.non_identities()
    objs = list(shape.objects)
    target = fc.discrete(objs, name="objs")
    coprod_T = diagram_colimit(DiagramOfDiagrams(target, dict(G.objs), {}), b)
    src = fc.discrete([f"a{n}" for n in range(len(arrows))], name="arrows")
    coprod_S = diagram_colimit(
        DiagramOfDiagrams(src, {f"a{n}": G.objs[shape.src(m)] for n, m in enumerate(arrows)}, {}), b)
    u_legs = {f"a{n}": compose_maps(coprod_T.legs[shape.src(m)], identity_map(G.objs[shape.src(m)]))
              for n, m in enumerate(arrows)}
    v_legs = {f"a{n}": compose_maps(coprod_T.legs[shape.dst(m)], G.mor(m))
              for n, m in enumerate(arrows)}
    u = coprod_S.mediate(u_legs, coprod_T.apex)
    v = coprod_S.mediate(v_legs, coprod_T.apex)
    P = _parallel_pair()
    coeq = diagram_colimit(DiagramOfDiagrams(P, {"S": coprod_S.apex, "T": coprod_T.apex},
                                             {"u": u, "v": v}), b)
    legs = {k: compose_maps(coeq.legs["T"], coprod_T.legs[k]) for k in objs}

    class _Cert:
        def __init__(self, i):
            self.i = i

        def mediate(self, cocone, tgt):
            inner = coprod_T.certs[self.i].mediate(cocone, tgt)
            return coeq.certs[self.i].mediate({"T": inner, "S": b.fibers[self.i].compose(
                inner, u.components[self.i])}, tgt)

    return TwColimit(coeq.apex, legs, {i: _Cert(i) for i in b.index.objects})


def comparison_isos(G: DiagramOfDiagrams, b: AdjunctionBundle) -> Dict[str, bool]:
    """Ev_i(colim G) -> colim(Ev_i G) is an iso for each i.

    The Tw-colimit is taken by the coequalizer route; the fiber colimit is
    computed directly from Ev_i G.
    """
    col = colimit_by_coequalizer(G, b)
    out = {}
    for i in b.index.objects:
        C = b.fibers[i]
        direct = C.colimit(_evaluated(G, i))
        cmp = col.certs[i].mediate(direct.legs, direct.apex)
        back = direct.mediate({k: f.components[i] for k, f in col.legs.items()}, col.apex.components[i])
        out[i] = C.is_iso(cmp) and C.compose(back, cmp) == C.identity(col.apex.components[i])
    return out


def limit_comparison_isos(G: DiagramOfDiagrams, b: AdjunctionBundle) -> Dict[str, bool]:
    """colim's dual: Ev_i(lim G) -> lim(Ev_i G), the latter via products and an equalizer."""
    lim = diagram_limit(G, b)
    out = {}
    for i in b.index.objects:
        C = b.fibers[i]
        d = _evaluated(G, i)
        other = _limit_by_equalizer(C, d)
        cmp = other.mediate({k: f.components[i] for k, f in lim.legs.items()}, lim.apex.components[i])
        back = lim.certs[i].mediate(other.legs, other.apex)
        out[i] = C.is_iso(cmp) and C.compose(back, cmp) == C.identity(lim.apex.components[i])
    return out


def _limit_by_equalizer(C, d: Diagram):
    from .concrete.base import LimitCert
    shape = d.shape
    objs = list(shape.objects)
    arrows = shape.non_identities()
    P = C.limit(Diagram(fc.discrete(objs), dict(d.objs), {}))
    Q = C.limit(Diagram(fc.discrete([f"a{n}" for n in range(len(arrows))]),
                        {f"a{n}": d.objs[shape.dst(m)] for n, m in enumerate(arrows)}, {}))
    u = Q.mediate({f"a{n}": P.legs[shape.dst(m)] for n, m in enumerate(arrows)}, P.apex)
    v = Q.mediate({f"a{n}": C.compose(d.mors[m], P.legs[shape.src(m)])
                   for n, m in enumerate(arrows)}, P.apex)
    pair = _parallel_pair()
    E = C.limit(Diagram(pair, {"S": P.apex, "T": Q.apex}, {"u": u, "v": v}))
    legs = {k: C.compose(P.legs[k], E.legs["S"]) for k in objs}

    def mediate(cone, source=None):
        inner = P.mediate(cone, source)
        return E.mediate({"S": inner, "T": C.compose(u, inner)}, source)

    return LimitCert(E.apex, legs, mediate)


# ----------------------------------------------------------- images

def inverse_image_diagram(phi: FinFunctor, y: TwistedDiagram,
                          bundle: Optional[AdjunctionBundle] = None) -> TwistedDiagram:
    b = bundle or inverse_image_bundle(phi, y.bundle)
    if b is y.bundle:
        return y
    I = phi.source
    return TwistedDiagram(b, {i: y.components[phi.obj(i)] for i in I.objects},
                          {s: y.flats[phi.mor(s)] for s in I.morphisms})


def restrict(y: TwistedDiagram, sub: FinCategory) -> TwistedDiagram:
    """Restriction to a subcategory whose ids are ids of the index."""
    return inverse_image_diagram(fc.inclusion(sub, y.index), y)


def inverse_image_map(phi: FinFunctor, f: TwistedMap, bundle=None) -> TwistedMap:
    y = inverse_image_diagram(phi, f.src, bundle)
    z = inverse_image_diagram(phi, f.dst, y.bundle)
    if y is f.src and z is f.dst:
        return f
    return TwistedMap(y, z, {i: f.components[phi.obj(i)] for i in phi.source.objects})


def psi_inverse(psi: IMorphism, y: TwistedDiagram) -> TwistedDiagram:
    """lambda_i(Y_i) with flats transposed from V_s(eta) . y_flat along lambda -| rho."""
    A, B = psi.A, psi.B
    I = A.index
    comps = {i: psi.lam(i, y.components[i]) for i in I.objects}
    flats = {}
    for s, (i, j) in I.morphisms.items():
        if I.is_identity(s):
            continue
        P = psi.pairs[i]
        eta_j = psi.pairs[j].unit(y.components[j])       # Y_j -> rho_j lambda_j Y_j
        g = B.fibers[i].compose(B.U_map(s, eta_j), y.flats[s])   # Y_i -> V_s rho_j lambda_j Y_j
        target = A.U(s, comps[j])                        # rho_i of this is V_s rho_j lambda_j Y_j
        flats[s] = P.sharp_to(g, target)
    return TwistedDiagram(A, comps, flats)


def psi_inverse_map(psi: IMorphism, f: TwistedMap) -> TwistedMap:
    y, z = psi_inverse(psi, f.src), psi_inverse(psi, f.dst)
    return TwistedMap(y, z, {i: psi.pairs[i].F_map(g) for i, g in f.components.items()})


def psi_direct(psi: IMorphism, z: TwistedDiagram) -> TwistedDiagram:
    A = psi.A
    I = A.index
    comps = {i: psi.rho(i, z.components[i]) for i in I.objects}
    flats = {s: psi.pairs[i].U_map(z.flats[s]) for s, (i, j) in I.morphisms.items()}
    return TwistedDiagram(psi.B, comps, flats)


def psi_direct_map(psi: IMorphism, f: TwistedMap) -> TwistedMap:
    y, z = psi_direct(psi, f.src), psi_direct(psi, f.dst)
    return TwistedMap(y, z, {i: psi.pairs[i].U_map(g) for i, g in f.components.items()})


# ----------------------------------------------------------- hom sets

def twisted_homs(y: TwistedDiagram, z: TwistedDiagram, rng: Optional[random.Random] = None,
                 budget: Optional[int] = None) -> Iterator[TwistedMap]:
    """All twisted maps y -> z (enumerable fibers), by backtracking.

    With ``rng`` candidates are tried in random order; ``budget`` caps the
    number of candidate components examined.
    """
    b = y.bundle
    I = b.index
    order = list(I.objects)
    pos = {o: n for n, o in enumerate(order)}
    checks: Dict[str, List[str]] = {o: [] for o in order}
    for s, (i, j) in I.morphisms.items():
        if not I.is_identity(s):
            checks[order[max(pos[i], pos[j])]].append(s)
    chosen: Dict[str, object] = {}
    spent = [0]

    def ok(o):
        for s in checks[o]:
            i, j = I.src(s), I.dst(s)
            C = b.fibers[i]
            if C.compose(b.U_map(s, chosen[j]), y.flats[s]) != C.compose(z.flats[s], chosen[i]):
                return False
        return True

    def rec(n):
        if n == len(order):
            yield TwistedMap(y, z, dict(chosen))
            return
        o = order[n]
        cands = b.fibers[o].homs(y.components[o], z.components[o])
        if rng is not None:
            cands = list(cands)
            rng.shuffle(cands)
        for g in cands:
            if budget is not None:
                spent[0] += 1
                if spent[0] > budget:
                    return
            chosen[o] = g
            if ok(o):
                yield from rec(n + 1)
        chosen.pop(o, None)

    yield from rec(0)


def enumerate_diagrams(b: AdjunctionBundle, universe: Mapping[str, list]) -> Iterator[TwistedDiagram]:
    """All valid twisted diagrams with components drawn from the universes."""
    I = b.index
    order = list(I.objects)
    arrows = I.non_identities()
    for choice in itertools.product(*[range(len(universe[i])) for i in order]):
        comps = {i: universe[i][c] for i, c in zip(order, choice)}
        options = [list(b.fibers[I.src(s)].homs(comps[I.src(s)], b.U(s, comps[I.dst(s)])))
                   for s in arrows]
        for pick in itertools.product(*options):
            y = TwistedDiagram(b, comps, dict(zip(arrows, pick)))
            if not validate_twisted(y):
                yield y


# ------------------------------------------- linear hom systems (chain fibers)

def system_ring(b: AdjunctionBundle) -> la.Ring:
    rings = {C.ring for C in b.fibers.values()}
    if len(rings) == 1:
        return next(iter(rings))
    if la.ZZ in rings and all(R == la.ZZ or isinstance(R, la.PrimeField) for R in rings):
        return la.ZZ
    raise ValueError(f"cannot combine fibers over {sorted(r.name for r in rings)}")


def _moduli(R_sys, R_fib, orders):
    if R_sys == R_fib:
        return list(orders)
    return [R_fib.p] * len(orders)


def _lift_entry(R_sys, x):
    return R_sys(x) if R_sys != la.QQ else x


def linearize_F(adj, X, Y, L_in: int):
    """F on graded matrices X -> Y as a linear map on the entries.

    Returns (shape, table) where table[n][(a, c)] lists ((m, r, k), coeff)
    with (F g)_n[a][c] = sum coeff * g_m[r][k].
    """
    R = X.ring
    dims = [(Y.module(m).rank, X.module(m).rank) for m in range(L_in)]
    base = adj.F_graded(X, Y, [la.zeros(R, r, c) for r, c in dims])
    table = [dict() for _ in base]
    for m, (rr, cc) in enumerate(dims):
        for r in range(rr):
            for k in range(cc):
                mats = [la.zeros(R, a, c) for a, c in dims]
                mats[m][r][k] = R.one
                out = adj.F_graded(X, Y, mats)
                for n, M in enumerate(out):
                    for a, row in enumerate(M):
                        for c, v in enumerate(row):
                            if v != 0:
                                table[n].setdefault((a, c), []).append(((m, r, k), v))
    return [(len(M), len(M[0]) if M else 0) for M in base], table


class TwistedHomSystem:
    """Unknown twisted maps y -> z between chain-valued diagrams."""

    def __init__(self, y: TwistedDiagram, z: TwistedDiagram, system: Optional[la.LinearSystem] = None):
        b = y.bundle
        if not b.is_chain():
            raise TypeError("linear hom systems need chain fibers")
        self.b, self.y, self.z = b, y, z
        R = system_ring(b)
        self.R = R
        self.sys = system or la.LinearSystem(R)
        I = b.index
        self.V: Dict[str, list] = {}
        for i in I.objects:
            X, Y = y.components[i], z.components[i]
            L = max(X.length, Y.length)
            self.V[i] = [la.VarMatrix(self.sys, Y.module(n).rank, X.module(n).rank) for n in range(L)]
            self._chain_equations(i, X, Y)
        for s, (i, j) in I.morphisms.items():
            if not I.is_identity(s):
                self._square(s, i, j)

    def _chain_equations(self, i, X, Y):
        R = self.R
        Rf = X.ring
        V = self.V[i]
        for n in range(1, len(V)):
            m = Y.module(n - 1).rank
            neg = [[_lift_entry(R, Rf.neg(Rf.one)) if a == c else 0 for c in range(m)] for a in range(m)]
            la.add_matrix_equation(self.sys, [(_conv(R, Y.d(n).matrix), V[n], None),
                                              (neg, V[n - 1], _conv(R, X.d(n).matrix))],
                                   None, m, X.module(n).rank,
                                   _moduli(R, Rf, Y.module(n - 1).orders))
        for n in range(len(V)):
            mods = _moduli(R, Rf, Y.module(n).orders)
            for c, o in enumerate(X.module(n).orders):
                if o:
                    for r, e in enumerate(mods):
                        self.sys.add({V[n].index(r, c): o}, 0, e)

    def _square(self, s, i, j):
        """f_j . y_sharp = z_sharp . F_s(f_i), degree by degree."""
        b, R = self.b, self.R
        adj = b.adj[s]
        Yi, Zi = self.y.components[i], self.z.components[i]
        Yj, Zj = self.y.components[j], self.z.components[j]
        ys, zs = sharp(self.y, s), sharp(self.z, s)
        Rf = Zj.ring
        dims, table = linearize_F(adj, Yi, Zi, len(self.V[i]))
        FYi, FZi = ys.src, zs.src
        Vj, Vi = self.V[j], self.V[i]
        L = max(len(Vj), FYi.length, FZi.length, len(dims))
        for n in range(L):
            rows, cols = Zj.module(n).rank, FYi.module(n).rank
            if rows == 0 or cols == 0:
                continue
            mods = _moduli(R, Rf, Zj.module(n).orders)
            Y_sh = ys.comp(n).matrix
            Z_sh = zs.comp(n).matrix
            inner_j = Yj.module(n).rank
            inner_F = FZi.module(n).rank
            tab = table[n] if n < len(table) else {}
            for a in range(rows):
                for c in range(cols):
                    coeffs: Dict[int, object] = {}
                    if n < len(Vj):
                        for k in range(inner_j):
                            v = Y_sh[k][c]
                            if v != 0:
                                idx = Vj[n].index(a, k)
                                coeffs[idx] = coeffs.get(idx, 0) + _lift_entry(R, v)
                    for k in range(inner_F):
                        w = Z_sh[a][k]
                        if w == 0:
                            continue
                        for (m, r, q), v in tab.get((k, c), []):
                            idx = Vi[m].index(r, q)
                            coeffs[idx] = coeffs.get(idx, 0) - _lift_entry(R, w) * _lift_entry(R, v)
                    self.sys.add({k: R(v) for k, v in coeffs.items()}, 0, mods[a])

    def value(self, x) -> TwistedMap:
        b = self.b
        comps = {}
        for i, V in self.V.items():
            X, Y = self.y.components[i], self.z.components[i]
            Rf = X.ring
            comps[i] = ch.chain_map(X, Y, [[[Rf(e) for e in row] for row in Vn.value(x)] for Vn in V])
        return TwistedMap(self.y, self.z, comps)

    def solve(self):
        x = self.sys.solve()
        return None if x is None else self.value(x)

    def random(self, rng: random.Random):
        x = self.sys.solve_random(rng)
        return None if x is None else self.value(x)


def _conv(R, M):
    return [[_lift_entry(R, v) for v in row] for row in M]


def random_twisted_map(y: TwistedDiagram, z: TwistedDiagram, rng: random.Random) -> TwistedMap:
    b = y.bundle
    if b.is_chain():
        return TwistedHomSystem(y, z).random(rng)
    homs = list(itertools.islice(twisted_homs(y, z), 500))
    return rng.choice(homs)


def psi_bijection(psi: IMorphism, y: TwistedDiagram, z: TwistedDiagram) -> Dict[str, object]:
    """hom(Psi^* y, z) against hom(y, Psi_* z) by enumeration, with transposes."""
    py, pz = psi_inverse(psi, y), psi_direct(psi, z)
    left = list(twisted_homs(py, z))
    right = list(twisted_homs(y, pz))
    # f: lambda Y -> Z goes to rho(f) . eta
    image = set()
    for f in left:
        g = TwistedMap(y, pz, {i: psi.pairs[i].flat_from(c, y.components[i])
                               for i, c in f.components.items()})
        image.add(_key(g))
    return {"left": len(left), "right": len(right),
            "bijective": len(image) == len(left) == len(right) and image == {_key(g) for g in right}}


def _key(f: TwistedMap):
    return tuple(sorted((i, repr(c)) for i, c in f.components.items()))
