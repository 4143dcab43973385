"""Seeded generators for indices, bundles, diagrams and maps, plus named fixtures."""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, List, Optional

from . import bundle as bd
from . import fincat as fc
from . import linalg as la
from .bundle import AdjunctionBundle
from .concrete import chains as ch
from .concrete import modules as md
from .concrete import msets as ms
from .concrete.chains import ChainCategory
from .concrete.modules import ModuleCategory
from .concrete.msets import MSetCategory
from .fincat import FinCategory
from .twisted import TwistedDiagram, TwistedHomSystem, TwistedMap, twisted_homs, zero_map

FIBER_KINDS = ("FinPtdSet", "FinMSet", "FDVect", "Chain")


# ------------------------------------------------------------ index categories

def parallel_pair_index() -> FinCategory:
    """a => b with two arrows; direct, not a poset."""
    c = fc.free_category(["a", "b"], {"u": ("a", "b"), "v": ("a", "b")}, name="pair")
    return c.with_degree({"a": 0, "b": 1})


def span_index() -> FinCategory:
    c = fc.poset(["m", "l", "r"], [("m", "l"), ("m", "r")], name="span")
    return c.with_degree({"m": 0, "l": 1, "r": 1})


def random_direct_index(rng: random.Random, max_objects: int = 4) -> FinCategory:
    choices = [fc.terminal, lambda: fc.chain(1), lambda: fc.chain(2), fc.projective_line_index,
               span_index, parallel_pair_index, lambda: fc.angle(1)]
    if max_objects >= 4:
        choices.append(lambda: fc.chain(3))
    while True:
        I = rng.choice(choices)()
        if len(I.objects) <= max_objects:
            return I


def degree_gap(I: FinCategory, s: str) -> int:
    d = I.degree
    return d[I.dst(s)] - d[I.src(s)]


# ------------------------------------------------------------ bundles

def truncation_bundle(I: FinCategory, k0: int = 2, m0: int = 2) -> AdjunctionBundle:
    """G(i) = T(k_i, m_i) shrinking with degree; arrows send x to x."""
    d = I.degree
    top = max(d.values())
    G, Gm = {}, {}
    for i in I.objects:
        k = max(0, k0 - (d[i] - min(d.values())))
        m = m0 if d[i] < top or top == min(d.values()) else max(1, m0 // 2)
        G[i] = ms.truncated(k, m)
    for f, (a, b) in I.morphisms.items():
        if not I.is_identity(f):
            Gm[f] = ms.power_hom(G[a], G[b], 1)
    return bd.monoid_bundle(I, G, Gm)


def _cut_weight(I: FinCategory, rng: random.Random) -> Callable[[str], int]:
    """Weight 2 on arrows crossing a random degree cut, 1 elsewhere (multiplicative)."""
    d = I.degree
    cut = rng.randint(min(d.values()) + 1, max(d.values()) + 1) if len(set(d.values())) > 1 \
        else max(d.values()) + 1
    hi = {i: int(d[i] >= cut) for i in I.objects}
    return lambda f: 2 ** (hi[I.dst(f)] - hi[I.src(f)])


def random_bundle(kind: str, rng: random.Random, I: Optional[FinCategory] = None) -> AdjunctionBundle:
    """A constructor-produced bundle with fibers of the given kind."""
    I = I or random_direct_index(rng, 3)
    gap = _cut_weight(I, rng)
    if kind == "FinPtdSet":
        C = ms.FinPtdSet()
        if rng.random() < 0.5:
            return bd.trivial_bundle(I, C)
        return bd.power_bundle(I, C, gap)
    if kind == "FinMSet":
        r = rng.random()
        if r < 0.4 and I.signature() == fc.projective_line_index().signature():
            return bd.projective_line_bundle(rng.randint(0, 2), rng.randint(1, 3))
        if r < 0.7:
            return truncation_bundle(I, rng.randint(0, 2), rng.choice([1, 2, 4]))
        M = ms.random_monoid(rng, 4)
        return bd.power_bundle(I, MSetCategory(M), gap)
    if kind == "FDVect":
        R = rng.choice([la.QQ, la.GF(2), la.GF(3)])
        C = ModuleCategory(R)
        if rng.random() < 0.5:
            return bd.trivial_bundle(I, C)
        return bd.power_bundle(I, C, gap)
    if kind == "Chain":
        return random_chain_bundle(rng, I)
    raise ValueError(f"unknown fiber kind {kind!r}")


def random_chain_bundle(rng: random.Random, I: Optional[FinCategory] = None,
                        kinds=("shift", "power", "basechange", "trivial")) -> AdjunctionBundle:
    I = I or random_direct_index(rng, 3)
    kind = rng.choice(kinds)
    d = I.degree
    if kind == "shift":
        return bd.shift_bundle(I, rng.choice([la.ZZ, la.QQ, la.GF(2)]))
    cut = rng.randint(min(d.values()) + 1, max(d.values()) + 1) if len(set(d.values())) > 1 \
        else max(d.values()) + 1
    if kind == "power":
        # weight 2 across the cut keeps ranks from growing geometrically
        hi = {i: int(d[i] >= cut) for i in I.objects}
        return bd.power_bundle(I, ChainCategory(rng.choice([la.ZZ, la.QQ])),
                               lambda f: 2 ** (hi[I.dst(f)] - hi[I.src(f)]))
    if kind == "basechange":
        p = rng.choice([2, 3])
        return bd.basechange_bundle(I, {i: (p if d[i] >= cut else 0) for i in I.objects})
    return bd.trivial_bundle(I, ChainCategory(rng.choice([la.ZZ, la.QQ, la.GF(3)])))


# ------------------------------------------------------------ diagrams

def _random_hom(C, X, Y, rng):
    if getattr(C, "enumerable", False):
        homs = list(itertools.islice(C.homs(X, Y), 400))
        return rng.choice(homs)
    return C.random_map(rng, X, Y)


def _extend_sum(C, L, rng, size):
    """(Y, l: L -> Y) with Y = L + R and l the first inclusion plus a random part."""
    R = C.random_object(rng, size)
    if isinstance(C, MSetCategory):
        W, inj = ms.wedge([L, R], C.monoid)
        return W, inj[0]
    S, inj, _ = C.direct_sum([L, R])
    twist = C.compose(inj[1], C.random_map(rng, L, R))
    return S, C.add(inj[0], twist)


def random_diagram(b: AdjunctionBundle, rng: random.Random, size: int = 2,
                   object_fn: Optional[Callable] = None) -> TwistedDiagram:
    """Build Y degree by degree: Y_i comes with a map from its latching object."""
    from .modelstruct import _Partial, latching_object, objects_by_degree
    I = b.index
    if I.degree is None or not fc.classify_degree(I).direct:
        return constant_diagram(b, rng, size)
    Y = _Partial(b)
    for i in objects_by_degree(I):
        C = b.fibers[i]
        cert, comma = latching_object(b, Y, i)
        L = cert.apex
        if object_fn is not None:
            Yi, l = object_fn(C, L, rng)
        elif rng.random() < 0.5:
            Yi, l = _extend_sum(C, L, rng, size)
        else:
            Yi = C.random_object(rng, size)
            l = _random_hom(C, L, Yi, rng)
        Y.components[i] = Yi
        for p, (j, s) in comma.pairs.items():
            Y.flats[s] = b.flat(s, C.compose(l, cert.legs[p]), Y.components[j])
    return TwistedDiagram(b, Y.components, Y.flats)


def constant_diagram(b: AdjunctionBundle, rng: random.Random, size: int = 2) -> TwistedDiagram:
    """Zero structure maps; valid over any index."""
    I = b.index
    comps = {i: b.fibers[i].random_object(rng, size) for i in I.objects}
    flats = {s: b.fibers[i].zero_map(comps[i], b.U(s, comps[j])) for s, (i, j) in I.morphisms.items()
             if not I.is_identity(s)}
    return TwistedDiagram(b, comps, flats)


def random_chain_diagram(b: AdjunctionBundle, rng: random.Random, size: int = 2) -> TwistedDiagram:
    return random_diagram(b, rng, size)


def _linear_fibers(b: AdjunctionBundle) -> bool:
    return all(isinstance(C, ModuleCategory) for C in b.fibers.values())


def random_twisted_map(y: TwistedDiagram, z: TwistedDiagram, rng: random.Random) -> TwistedMap:
    b = y.bundle
    if b.is_chain():
        return TwistedHomSystem(y, z).random(rng)
    if _linear_fibers(b):
        # F is additive, so scalar multiples of the identity are twisted maps
        if y == z:
            c = rng.randint(0, 3)
            return TwistedMap(y, z, {i: md.scale(b.fibers[i].ring(c), b.fibers[i].identity(X))
                                     for i, X in y.components.items()})
        return TwistedMap(y, z, {i: b.fibers[i].zero_map(X, z.components[i])
                                 for i, X in y.components.items()})
    for f in twisted_homs(y, z, rng, budget=2000):
        return f
    return zero_map(y, z)


def random_map_between(b: AdjunctionBundle, rng: random.Random, generate=None) -> TwistedMap:
    generate = generate or random_diagram
    y, z = generate(b, rng), generate(b, rng)
    return random_twisted_map(y, z, rng)


def total_rank(y: TwistedDiagram) -> int:
    return sum(X.total_rank() for X in y.components.values())


def total_size(y: TwistedDiagram) -> int:
    return sum(X.size for X in y.components.values())


# ------------------------------------------------------------ fixtures

def p1_analog(k: int = 1, m: int = 2) -> AdjunctionBundle:
    return bd.projective_line_bundle(k, m)


def spectra_bundle(n: int = 2, R: la.Ring = la.ZZ) -> AdjunctionBundle:
    """Shift bundle over 0 -> 1 -> ... -> n: structure maps Sigma X_k -> X_(k+1)."""
    return bd.shift_bundle(fc.chain(n), R)


def spectrum(b: AdjunctionBundle, pieces: Dict[str, ch.ChainComplex], rng: Optional[random.Random] = None
             ) -> TwistedDiagram:
    """X_k = Sigma X_(k-1) + pieces[k] with the first inclusion as structure map."""
    from .modelstruct import _Partial, latching_object, objects_by_degree
    I = b.index
    Y = _Partial(b)
    for i in objects_by_degree(I):
        C = b.fibers[i]
        cert, comma = latching_object(b, Y, i)
        S, inj, _ = C.direct_sum([cert.apex, pieces.get(i, C.zero_object())])
        Y.components[i] = S
        for p, (j, s) in comma.pairs.items():
            Y.flats[s] = b.flat(s, C.compose(inj[0], cert.legs[p]), Y.components[j])
    return TwistedDiagram(b, Y.components, Y.flats)


# ------------------------------------------------------------ homotopy-flavoured instances

def _acyclic_extension(C, L, rng, size):
    """L + (a sum of discs), with the inclusion; the identity on L up to weq."""
    R = C.ring
    if L.is_zero():
        return C.random_object(rng, size), None
    discs = [ch.disc(R, rng.randint(1, max(1, L.length))) for _ in range(rng.randint(0, 2))]
    if not discs:
        return L, C.identity(L)
    S, inj, _ = C.direct_sum([L] + discs)
    return S, inj[0]


def sheafy_diagram(b: AdjunctionBundle, rng: random.Random, size: int = 2) -> TwistedDiagram:
    """Y_i = L_i + acyclic at non-minimal i, so sharp maps out of a single latching summand are weqs."""
    def fn(C, L, rng_):
        Y, l = _acyclic_extension(C, L, rng_, size)
        if l is None:
            l = C.zero_map(L, Y)
        return Y, l
    return random_diagram(b, rng, size, object_fn=fn)


def weq_partners(y: TwistedDiagram) -> List[TwistedMap]:
    """Weak equivalences into and out of y from the two factorizations."""
    from .modelstruct import factorize_c
    from .twisted import identity_map, initial_diagram, zero_map
    out = []
    _, q = factorize_c(zero_map(initial_diagram(y.bundle), y), "cof-then-acyclicfib")
    out.append(q)
    j, _ = factorize_c(identity_map(y), "goodacyclic-then-fib")
    out.append(j)
    return out


def basechange_regression() -> TwistedDiagram:
    """Z/2 over ZZ at 0, F_2 at 1, sharp map the identity of F_2.

    The naive check sees an isomorphism; after replacing Z/2 by [Z --2--> Z]
    base change gives F_2 in degrees 0 and 1, which is not quasi-isomorphic
    to F_2.
    """
    from .twisted import from_sharps
    b = bd.basechange_bundle(fc.chain(1), {"0": 0, "1": 2})
    Z2 = ch.complex_from(la.ZZ, [md.Module(la.ZZ, (2,))], [])
    F2 = ch.sphere(la.GF(2), 0)
    return from_sharps(b, {"0": Z2, "1": F2}, {"0<1": ch.identity(F2)})


def shift_qiso() -> TwistedDiagram:
    """Sigma S^0 -> S^1 + D^2 over ZZ: a quasi-isomorphism that is not an isomorphism."""
    from .twisted import from_sharps
    b = bd.shift_bundle(fc.chain(1), la.ZZ)
    S0 = ch.sphere(la.ZZ, 0)
    C = b.fibers["1"]
    Y1, inj, _ = C.direct_sum([ch.shift(S0), ch.disc(la.ZZ, 2)])
    return from_sharps(b, {"0": S0, "1": Y1}, {"0<1": inj[0]})


def times_two() -> TwistedDiagram:
    """Sigma S^0 --2--> S^1 over ZZ."""
    from .twisted import from_sharps
    b = bd.shift_bundle(fc.chain(1), la.ZZ)
    S0, S1 = ch.sphere(la.ZZ, 0), ch.sphere(la.ZZ, 1)
    return from_sharps(b, {"0": S0, "1": S1}, {"0<1": ch.chain_map(S1, S1, [None, [[2]]])})


# ------------------------------------------------------------ diagrams of diagrams

def _shape(kind: str) -> FinCategory:
    if kind == "span":
        c = fc.poset(["A", "B", "C"], [("A", "B"), ("A", "C")], name="span")
    elif kind == "cospan":
        c = fc.poset(["A", "B", "C"], [("B", "A"), ("C", "A")], name="cospan")
    elif kind == "pair":
        c = fc.free_category(["A", "B"], {"u": ("A", "B"), "v": ("A", "B")}, name="pair")
    elif kind == "chain":
        c = fc.chain(2)
    else:
        c = fc.discrete(["A", "B"], name="discrete")
    return c


DOD_SHAPES = ("span", "cospan", "pair", "chain", "discrete")


def random_diagram_of_diagrams(b: AdjunctionBundle, rng: random.Random, shape: Optional[str] = None,
                               generate=None):
    """A functor from a small shape into twisted diagrams over b."""
    from .twisted import DiagramOfDiagrams, compose_maps
    generate = generate or random_diagram
    S = _shape(shape or rng.choice(DOD_SHAPES))
    if _linear_fibers(b):
        y = generate(b, rng)
        objs = {a: y for a in S.objects}
    else:
        objs = {a: generate(b, rng) for a in S.objects}
    mors = {}
    factor = {}
    for (g, f), h in S.comp.items():
        if not S.is_identity(g) and not S.is_identity(f):
            factor.setdefault(h, (g, f))
    pending = sorted(S.non_identities())
    while pending:
        m = pending.pop(0)
        if m not in factor:
            a, c = S.morphisms[m]
            mors[m] = random_twisted_map(objs[a], objs[c], rng)
        elif all(x in mors for x in factor[m]):
            g, f = factor[m]
            mors[m] = compose_maps(mors[g], mors[f])
        else:
            pending.append(m)
    return DiagramOfDiagrams(S, objs, mors)


# ------------------------------------------------------------ morphisms of bundles

def psi_instance(rng: random.Random, I: Optional[FinCategory] = None):
    """Ad G' -> Ad G along x -> x from larger truncations G to smaller G'."""
    I = I or random_direct_index(rng, 3)
    k, m = rng.randint(1, 2), rng.choice([2, 4])
    B = truncation_bundle(I, k, m)
    A = truncation_bundle(I, rng.randint(0, k), rng.choice([d for d in (1, 2, m) if m % d == 0]))
    G, _ = B.monoids
    H, _ = A.monoids
    t = {i: ms.power_hom(G[i], H[i], 1) for i in I.objects}
    if any(ms.hom_check(t[i]) for i in I.objects):
        return psi_instance(rng, I)
    return bd.monoid_naturality_morphism(A, B, t)
