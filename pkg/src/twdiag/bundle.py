"""Adjunction bundles over finite index categories."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from . import fincat as fc
from .concrete import msets as ms
from .concrete.adjunctions import (Adjunction, BaseChangeAdjunction, IdentityAdjunction,
                                   InductionAdjunction, PowerAdjunction, ShiftAdjunction)
from .concrete.chains import ChainCategory
from .concrete.msets import MonoidHom, MSetCategory
from .fincat import FinCategory, FinFunctor


class AdjunctionBundle:
    """Fibers C_i and adjunctions F_sigma -| U_sigma for each arrow sigma: i -> j.

    F_sigma: C_i -> C_j, U_sigma: C_j -> C_i.
    """

    def __init__(self, index: FinCategory, fibers: Mapping[str, object],
                 adjunctions: Mapping[str, Adjunction], name: str = "bundle"):
        self.index = index
        self.fibers = dict(fibers)
        self.adj: Dict[str, Adjunction] = {}
        for f in index.morphisms:
            if f in adjunctions:
                self.adj[f] = adjunctions[f]
            elif index.is_identity(f):
                self.adj[f] = IdentityAdjunction(self.fibers[index.src(f)])
            else:
                raise ValueError(f"no adjunction for {f}")
        self.name = name

    def __repr__(self):
        return f"AdjunctionBundle({self.name} over {self.index.name})"

    def fiber(self, i: str):
        return self.fibers[i]

    def F(self, s, X):
        return self.adj[s].F(X)

    def F_map(self, s, f):
        return self.adj[s].F_map(f)

    def U(self, s, Y):
        return self.adj[s].U(Y)

    def U_map(self, s, g):
        return self.adj[s].U_map(g)

    def unit(self, s, X):
        return self.adj[s].unit(X)

    def counit(self, s, Y):
        return self.adj[s].counit(Y)

    def sharp(self, s, g, Y):
        """g: X -> U_s Y  to  F_s X -> Y."""
        return self.adj[s].sharp_to(g, Y)

    def flat(self, s, h, X):
        """h: F_s X -> Y  to  X -> U_s Y."""
        return self.adj[s].flat_from(h, X)

    def is_chain(self) -> bool:
        return all(isinstance(C, ChainCategory) for C in self.fibers.values())

    def is_enumerable(self) -> bool:
        return all(getattr(C, "enumerable", False) for C in self.fibers.values())

    def kinds(self) -> List[str]:
        return sorted({C.kind for C in self.fibers.values()})

    def test_objects(self, i: str, rng: random.Random, count: int = 3) -> list:
        C = self.fibers[i]
        objs = [C.zero_object()]
        for _ in range(count):
            objs.append(C.random_object(rng))
        return objs


# ---------------------------------------------------------- validation

@dataclass
class BundleReport:
    violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_bundle(b: AdjunctionBundle, rng: Optional[random.Random] = None,
                    per_fiber: int = 3, basis: Optional[Mapping[str, list]] = None) -> BundleReport:
    """Strict U-functoriality, F_id = id and the triangular identities on a test basis."""
    rng = rng or random.Random(0)
    rep = BundleReport()
    I = b.index
    problems = fc.validate_category(I)
    if problems:
        rep.violations += [f"index: {p}" for p in problems]
        return rep
    if basis is None:
        basis = {i: b.test_objects(i, rng, per_fiber) for i in I.objects}
    for i in I.objects:
        for X in basis[i]:
            for p in b.fibers[i].check_object(X):
                rep.violations.append(f"test object in C_{i}: {p}")
    for s, (i, j) in I.morphisms.items():
        A = b.adj[s]
        if A.C != b.fibers[i] or A.D != b.fibers[j]:
            rep.violations.append(f"{s}: adjunction between wrong fibers")
            continue
        if I.is_identity(s):
            for X in basis[i]:
                if A.F(X) != X:
                    rep.violations.append(f"F_{s} is not the identity")
                    break
                if A.U(X) != X:
                    rep.violations.append(f"U_{s} is not the identity")
                    break
        C, D = b.fibers[i], b.fibers[j]
        for X in basis[i]:
            if D.compose(A.counit(A.F(X)), A.F_map(A.unit(X))) != D.identity(A.F(X)):
                rep.violations.append(f"{s}: triangular identity eps F . F eta fails")
                break
        for Y in basis[j]:
            if C.compose(A.U_map(A.counit(Y)), A.unit(A.U(Y))) != C.identity(A.U(Y)):
                rep.violations.append(f"{s}: triangular identity U eps . eta U fails")
                break
    F_strict = True
    for (t, s), ts in I.comp.items():
        k = I.dst(t)
        Zs = basis[k]
        for Z in Zs:
            if b.U(ts, Z) != b.U(s, b.U(t, Z)):
                rep.violations.append(f"U_({t}.{s}) != U_{s} U_{t}")
                break
        else:
            C = b.fibers[k]
            maps = _test_maps(C, Zs, rng)
            for g in maps:
                if b.U_map(ts, g) != b.U_map(s, b.U_map(t, g)):
                    rep.violations.append(f"U_({t}.{s}) != U_{s} U_{t} on morphisms")
                    break
        for X in basis[I.src(s)]:
            if b.F(ts, X) != b.F(t, b.F(s, X)):
                F_strict = False
                break
    composites = any(not I.is_identity(t) and not I.is_identity(s) for (t, s) in I.comp)
    if F_strict and composites:
        rep.notes.append("F is strictly functorial on the test basis; uniqueness isomorphisms are identities there")
    return rep


def _test_maps(C, objs, rng, count=3):
    out = []
    for _ in range(count):
        X, Y = rng.choice(objs), rng.choice(objs)
        try:
            out.append(C.random_map(rng, X, Y))
        except (IndexError, ValueError):
            pass
    return out


# ------------------------------------------------------ uniqueness iso

def uniqueness_iso(b: AdjunctionBundle, s: str, t: str, X):
    """theta_X: F_t F_s X -> F_{t.s} X, the canonical mate built from eta and eps."""
    I = b.index
    ts = I.compose(t, s)
    D = b.fibers[I.dst(t)]
    Fts_X = b.F(ts, X)
    eta = b.unit(ts, X)                        # X -> U_s U_t F_ts X
    W = b.U(t, Fts_X)
    inner = b.fibers[I.dst(s)].compose(b.counit(s, W), b.F_map(s, eta))   # F_s X -> W
    return D.compose(b.counit(t, Fts_X), b.F_map(t, inner))


def uniqueness_iso_inverse(b: AdjunctionBundle, s: str, t: str, X):
    """F_{t.s} X -> F_t F_s X."""
    I = b.index
    ts = I.compose(t, s)
    C = b.fibers[I.src(s)]
    FsX = b.F(s, X)
    FtFsX = b.F(t, FsX)
    g = C.compose(b.U_map(s, b.unit(t, FsX)), b.unit(s, X))   # X -> U_s U_t F_t F_s X
    return b.sharp(ts, g, FtFsX)


# ------------------------------------------------------ constructions

def trivial_bundle(index: FinCategory, fiber) -> AdjunctionBundle:
    adj = {f: IdentityAdjunction(fiber) for f in index.morphisms}
    return AdjunctionBundle(index, {i: fiber for i in index.objects}, adj, name="trivial")


def _weights(index: FinCategory, weight) -> Dict[str, int]:
    if callable(weight):
        return {f: weight(f) for f in index.morphisms}
    return dict(weight)


def shift_bundle(index: FinCategory, R, weight=None) -> AdjunctionBundle:
    """Sigma^w -| Omega^w with w additive along composition (default: degree difference)."""
    C = ChainCategory(R)
    if weight is None:
        if index.degree is None:
            raise ValueError("shift bundle needs a degree function or explicit weights")
        d = index.degree
        weight = lambda f: d[index.dst(f)] - d[index.src(f)]  # noqa: E731
    w = _weights(index, weight)
    for (g, f), h in index.comp.items():
        if w[h] != w[g] + w[f]:
            raise ValueError("shift weights are not additive")
    if any(v < 0 for v in w.values()):
        raise ValueError("shift weights must be non-negative")
    adj = {f: ShiftAdjunction(C, w[f]) if not index.is_identity(f) else IdentityAdjunction(C)
           for f in index.morphisms}
    return AdjunctionBundle(index, {i: C for i in index.objects}, adj, name="shift")


def power_bundle(index: FinCategory, fiber, weight) -> AdjunctionBundle:
    """k-fold coproduct -| k-fold product with k multiplicative along composition."""
    w = _weights(index, weight)
    for (g, f), h in index.comp.items():
        if w[h] != w[g] * w[f]:
            raise ValueError("power weights are not multiplicative")
    adj = {f: PowerAdjunction(fiber, w[f]) if not index.is_identity(f) else IdentityAdjunction(fiber)
           for f in index.morphisms}
    return AdjunctionBundle(index, {i: fiber for i in index.objects}, adj, name="power")


def basechange_bundle(index: FinCategory, primes: Mapping[str, int]) -> AdjunctionBundle:
    """primes[i] = 0 puts complexes over ZZ at i, p puts complexes over F_p there.

    Arrows ZZ -> F_p carry base change, arrows within one ring the identity.
    """
    from .linalg import GF, ZZ
    fibers = {i: ChainCategory(GF(p) if p else ZZ) for i, p in primes.items()}
    adj = {}
    for f, (a, b) in index.morphisms.items():
        pa, pb = primes[a], primes[b]
        if pa == pb:
            adj[f] = IdentityAdjunction(fibers[a])
        elif pa == 0:
            adj[f] = BaseChangeAdjunction(pb)
        else:
            raise ValueError(f"arrow {f} goes from F_{pa} to {'ZZ' if not pb else f'F_{pb}'}")
    return AdjunctionBundle(index, fibers, adj, name="basechange")


def check_monoid_diagram(index: FinCategory, G_obj: Mapping[str, ms.FiniteMonoid],
                         G_mor: Mapping[str, MonoidHom]) -> List[str]:
    out = []
    for i, M in G_obj.items():
        out += [f"G({i}): {p}" for p in ms.monoid_check(M)]
    for f, (a, b) in index.morphisms.items():
        h = G_mor[f]
        if h.src != G_obj[a] or h.dst != G_obj[b]:
            out.append(f"G({f}) has wrong endpoints")
            continue
        out += [f"G({f}): {p}" for p in ms.hom_check(h)]
        if index.is_identity(f) and not h.is_identity():
            out.append(f"G({f}) is not the identity")
    for (g, f), h in index.comp.items():
        if ms.monoid_compose(G_mor[g], G_mor[f]) != G_mor[h]:
            out.append(f"G({g}.{f}) != G({g}) G({f})")
    return out


def monoid_bundle(index: FinCategory, G_obj: Mapping[str, ms.FiniteMonoid],
                  G_mor: Mapping[str, MonoidHom]) -> AdjunctionBundle:
    """Fibers G(i)-sets, F_sigma = induction and U_sigma = restriction along G(sigma)."""
    G_mor = dict(G_mor)
    for i in index.objects:
        G_mor.setdefault(index.identity(i), ms.monoid_identity(G_obj[i]))
    problems = check_monoid_diagram(index, G_obj, G_mor)
    if problems:
        raise ValueError("non-functorial monoid diagram: " + "; ".join(problems))
    fibers = {i: MSetCategory(M) for i, M in G_obj.items()}
    adj = {f: InductionAdjunction(G_mor[f]) if not index.is_identity(f)
           else IdentityAdjunction(fibers[index.src(f)]) for f in index.morphisms}
    b = AdjunctionBundle(index, fibers, adj, name="monoid")
    b.monoids = (dict(G_obj), G_mor)
    return b


def projective_line_bundle(k: int = 1, m: int = 2) -> AdjunctionBundle:
    """Finite analog of the projective line: T(k,m) -> Z/m <- T(k,m), x -> 1 and x -> -1.

    The truncated monoids stand in for the two copies of the natural
    numbers and Z/m for the integers.
    """
    I = fc.projective_line_index()
    Np = ms.truncated(k, m)
    Nm = ms.truncated(k, m)
    Z = ms.cyclic_group(m)
    Np = ms.FiniteMonoid(Np.mul, 0, f"N+({k},{m})")
    Nm = ms.FiniteMonoid(Nm.mul, 0, f"N-({k},{m})")

    def hom(M, sign):
        return MonoidHom(M, Z, tuple((sign * e) % m for e in M.elements))

    G_mor = {"alpha": hom(Np, 1), "beta": hom(Nm, -1)}
    b = monoid_bundle(I, {"+": Np, "-": Nm, "0": Z}, G_mor)
    b.name = "P1-analog"
    return b


def inverse_image_bundle(phi: FinFunctor, b: AdjunctionBundle) -> AdjunctionBundle:
    if phi.target is not b.index and phi.target.signature() != b.index.signature():
        raise ValueError("functor target is not the bundle index")
    if phi.source is b.index and all(phi.on_obj[a] == a for a in phi.source.objects) \
            and all(phi.on_mor[f] == f for f in phi.source.morphisms):
        return b
    I = phi.source
    out = AdjunctionBundle(I, {i: b.fibers[phi.obj(i)] for i in I.objects},
                           {f: b.adj[phi.mor(f)] for f in I.morphisms}, name=f"{b.name}*")
    out.pullback_of = (phi, b)
    return out


def product_bundle(bundles: Sequence[AdjunctionBundle]) -> AdjunctionBundle:
    if len(bundles) == 1:
        return bundles[0]
    index = fc.disjoint_union([b.index for b in bundles])
    fibers, adj = {}, {}
    for b in bundles:
        fibers.update(b.fibers)
        adj.update(b.adj)
    return AdjunctionBundle(index, fibers, adj, name="product")


# ------------------------------------------------------ bundle morphisms

class IMorphism:
    """Psi: A -> B over one index: pairs lambda_i -| rho_i with rho_i: A_i -> B_i.

    ``pairs[i]`` is an Adjunction whose F is lambda_i: B_i -> A_i and whose
    U is rho_i: A_i -> B_i.
    """

    def __init__(self, A: AdjunctionBundle, B: AdjunctionBundle, pairs: Mapping[str, Adjunction]):
        self.A, self.B = A, B
        self.pairs = dict(pairs)

    def lam(self, i, Y):
        return self.pairs[i].F(Y)

    def rho(self, i, Z):
        return self.pairs[i].U(Z)


def validate_imorphism(psi: IMorphism, rng: Optional[random.Random] = None) -> List[str]:
    rng = rng or random.Random(0)
    out = []
    A, B = psi.A, psi.B
    I = A.index
    for i in I.objects:
        P = psi.pairs[i]
        if P.C != B.fibers[i] or P.D != A.fibers[i]:
            out.append(f"pair at {i} between wrong fibers")
    for s, (i, j) in I.morphisms.items():
        for Z in A.test_objects(j, rng, 2):
            if B.U(s, psi.rho(j, Z)) != psi.rho(i, A.U(s, Z)):
                out.append(f"V_{s} rho_{j} != rho_{i} U_{s}")
                break
    return out


def monoid_naturality_morphism(A: AdjunctionBundle, B: AdjunctionBundle,
                               t: Mapping[str, MonoidHom]) -> IMorphism:
    """A transformation t: G -> G' gives Ad G' -> Ad G (A = Ad G', B = Ad G)."""
    G, Gm = B.monoids
    H, Hm = A.monoids
    I = A.index
    for f, (a, b) in I.morphisms.items():
        if ms.monoid_compose(t[b], Gm[f]) != ms.monoid_compose(Hm[f], t[a]):
            raise ValueError(f"t is not natural at {f}")
    return IMorphism(A, B, {i: InductionAdjunction(t[i]) for i in I.objects})


# ------------------------------------------------------ Grothendieck construction

class Grothendieck:
    """Total category of the bundle on finite object universes.

    Objects are (i, k) for the k-th object of ``universe[i]``; morphisms
    (sigma, A: Y -> U_sigma Z).  Requires enumerable fibers.
    """

    def __init__(self, b: AdjunctionBundle, universe: Mapping[str, list]):
        if not b.is_enumerable():
            raise TypeError("Grothendieck materialization needs enumerable fibers")
        self.b = b
        self.universe = {i: list(v) for i, v in universe.items()}
        I = b.index
        objects, morphisms, data = [], {}, {}
        obj_data = {}
        for i in I.objects:
            for k, Y in enumerate(self.universe[i]):
                oid = f"{i}#{k}"
                objects.append(oid)
                obj_data[oid] = (i, Y)
        for s, (i, j) in I.morphisms.items():
            for a, Y in enumerate(self.universe[i]):
                for c, Z in enumerate(self.universe[j]):
                    UZ = b.U(s, Z)
                    for n, A in enumerate(b.fibers[i].homs(Y, UZ)):
                        mid = f"{s}|{i}#{a}->{j}#{c}|{n}"
                        morphisms[mid] = (f"{i}#{a}", f"{j}#{c}")
                        data[mid] = (s, A)
        lookup = {(morphisms[m], data[m][0], data[m][1].images): m for m in morphisms}
        comp = {}
        for f, (x, y) in morphisms.items():
            s, A = data[f]
            for g in self._out_of(morphisms, y):
                t, B = data[g]
                ts = I.compose(t, s)
                C = b.fibers[I.src(s)].compose(b.U_map(s, B), A)
                comp[(g, f)] = lookup[((x, morphisms[g][1]), ts, C.images)]
        ids = {o: lookup[((o, o), I.identity(obj_data[o][0]),
                          b.fibers[obj_data[o][0]].identity(obj_data[o][1]).images)]
               for o in objects}
        self.category = FinCategory(objects, morphisms, comp, ids, name="Gr")
        self.obj_data = obj_data
        self.mor_data = data
        self._lookup = lookup
        self.projection = FinFunctor(self.category, I, {o: obj_data[o][0] for o in objects},
                                     {m: data[m][0] for m in morphisms})

    @staticmethod
    def _out_of(morphisms, y):
        return [g for g, (s, _) in morphisms.items() if s == y]

    def object_id(self, i, Y) -> str:
        for k, Z in enumerate(self.universe[i]):
            if Z == Y:
                return f"{i}#{k}"
        raise KeyError(f"object not in the universe at {i}")

    def diagram_to_section(self, y) -> FinFunctor:
        I = self.b.index
        on_obj = {i: self.object_id(i, y.components[i]) for i in I.objects}
        on_mor = {}
        for s, (i, j) in I.morphisms.items():
            key = ((on_obj[i], on_obj[j]), s, y.flats[s].images)
            on_mor[s] = self._lookup[key]
        return FinFunctor(I, self.category, on_obj, on_mor)

    def section_to_diagram(self, sec: FinFunctor):
        from .twisted import TwistedDiagram
        I = self.b.index
        comps = {i: self.obj_data[sec.obj(i)][1] for i in I.objects}
        flats = {s: self.mor_data[sec.mor(s)][1] for s in I.morphisms}
        return TwistedDiagram(self.b, comps, flats)

    def is_section(self, sec: FinFunctor) -> bool:
        if fc.validate_functor(sec):
            return False
        return all(self.projection.obj(sec.obj(i)) == i for i in self.b.index.objects) and \
            all(self.projection.mor(sec.mor(s)) == s for s in self.b.index.morphisms)

    def sections(self):
        """All sections of the projection (brute force over object choices)."""
        from .twisted import enumerate_diagrams
        for y in enumerate_diagrams(self.b, self.universe):
            yield self.diagram_to_section(y)


def grothendieck(b: AdjunctionBundle, universe: Mapping[str, list]) -> Grothendieck:
    return Grothendieck(b, universe)
