"""Twisted left and right Kan extensions, computed pointwise over comma categories."""

from __future__ import annotations

import random

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import fincat as fc
from .bundle import AdjunctionBundle, inverse_image_bundle, uniqueness_iso_inverse
from .concrete.base import Diagram
from .fincat import Comma, FinFunctor
from .twisted import (TwistedDiagram, TwistedMap, compose_maps, identity_map, inverse_image_diagram,
                      inverse_image_map, sharp, twisted_homs)


def _reverse(comma: Comma) -> Dict[tuple, str]:
    return {v: k for k, v in comma.pairs.items()}


def comma_diagram(phi: FinFunctor, y: TwistedDiagram, B: AdjunctionBundle, j: str,
                  comma: Optional[Comma] = None, route: str = "flat") -> Diagram:
    """D^Y_j: (i, s: phi(i) -> j) |-> F_s(Y_i) in the fiber at j.

    ``route='flat'`` transposes U(eta) . y_flat; ``route='sharp'`` uses
    F(y_sharp) composed with an inverse uniqueness isomorphism.
    """
    comma = comma or fc.comma_over(phi, j)
    cat = comma.category
    C = B.fibers[j]
    objs = {p: B.F(s, y.components[i]) for p, (i, s) in comma.pairs.items()}
    mors = {}
    for m, (p, q) in cat.morphisms.items():
        if cat.is_identity(m):
            mors[m] = C.identity(objs[p])
            continue
        a = comma.proj.mor(m)
        (i, s), (i2, t) = comma.pairs[p], comma.pairs[q]
        pa = phi.mor(a)
        if route == "flat":
            Yi2 = y.components[i2]
            g = B.fibers[phi.obj(i)].compose(B.U_map(pa, B.unit(t, Yi2)), y.flats[a])
            mors[m] = B.sharp(s, g, B.F(t, Yi2))
        elif route == "sharp":
            theta_inv = uniqueness_iso_inverse(B, pa, t, y.components[i])
            mors[m] = C.compose(B.F_map(t, sharp(y, a)), theta_inv)
        else:
            raise ValueError(f"unknown route {route!r}")
    return Diagram(cat, objs, mors)


def comma_diagram_under(phi: FinFunctor, y: TwistedDiagram, B: AdjunctionBundle, j: str,
                        comma: Optional[Comma] = None) -> Diagram:
    """(i, s: j -> phi(i)) |-> U_s(Y_i), with U_s(y_flat) on arrows."""
    comma = comma or fc.comma_under(phi, j)
    cat = comma.category
    C = B.fibers[j]
    objs = {p: B.U(s, y.components[i]) for p, (i, s) in comma.pairs.items()}
    mors = {}
    for m, (p, q) in cat.morphisms.items():
        if cat.is_identity(m):
            mors[m] = C.identity(objs[p])
            continue
        a = comma.proj.mor(m)
        i, s = comma.pairs[p]
        mors[m] = B.U_map(s, y.flats[a])
    return Diagram(cat, objs, mors)


@dataclass
class KanResult:
    extension: TwistedDiagram
    unit: Optional[TwistedMap]
    counit: Optional[TwistedMap]
    certs: Dict[str, object]
    commas: Dict[str, Comma] = field(default_factory=dict)
    phi: Optional[FinFunctor] = None
    source: Optional[TwistedDiagram] = None


def lan(phi: FinFunctor, y: TwistedDiagram, B: AdjunctionBundle) -> KanResult:
    """Left Kan extension of y (over phi^* B) along phi."""
    J = B.index
    commas, certs = {}, {}
    for j in J.objects:
        commas[j] = fc.comma_over(phi, j)
        certs[j] = B.fibers[j].colimit(comma_diagram(phi, y, B, j, commas[j]))
    comps = {j: certs[j].apex for j in J.objects}
    flats = {}
    for t, (j, k) in J.morphisms.items():
        if J.is_identity(t):
            continue
        rev = _reverse(commas[k])
        target = B.U(t, comps[k])
        cocone = {}
        for p, (i, s) in commas[j].pairs.items():
            ts = J.compose(t, s)
            leg = certs[k].legs[rev[(i, ts)]]                       # F_ts Y_i -> L_k
            g = B.flat(ts, leg, y.components[i])                    # Y_i -> U_s U_t L_k
            cocone[p] = B.sharp(s, g, target)
        flats[t] = certs[j].mediate(cocone, target)
    L = TwistedDiagram(B, comps, flats)
    res = KanResult(L, None, None, certs, commas, phi, y)
    res.unit = _lan_unit(res)
    return res


def _lan_unit(res: KanResult) -> TwistedMap:
    phi, y = res.phi, res.source
    pL = inverse_image_diagram(phi, res.extension, y.bundle)
    comps = {}
    for i in phi.source.objects:
        j = phi.obj(i)
        p = _reverse(res.commas[j])[(i, phi.target.identity(j))]
        comps[i] = res.certs[j].legs[p]
    return TwistedMap(y, pL, comps)


def lan_counit(phi: FinFunctor, z: TwistedDiagram) -> tuple:
    """(L(phi^* z), eps_z: L(phi^* z) -> z)."""
    B = z.bundle
    pz = inverse_image_diagram(phi, z)
    res = lan(phi, pz, B)
    comps = {}
    for j in B.index.objects:
        cocone = {p: sharp(z, s) if not B.index.is_identity(s) else B.fibers[j].identity(z.components[j])
                  for p, (i, s) in res.commas[j].pairs.items()}
        comps[j] = res.certs[j].mediate(cocone, z.components[j])
    return res, TwistedMap(res.extension, z, comps)


def lan_map(r1: KanResult, r2: KanResult, g: TwistedMap) -> TwistedMap:
    """L(g): L(Y) -> L(Y') for g: Y -> Y'."""
    B = r1.extension.bundle
    comps = {}
    for j in B.index.objects:
        C = B.fibers[j]
        cocone = {p: C.compose(r2.certs[j].legs[p], B.F_map(s, g.components[i]))
                  for p, (i, s) in r1.commas[j].pairs.items()}
        comps[j] = r1.certs[j].mediate(cocone, r2.extension.components[j])
    return TwistedMap(r1.extension, r2.extension, comps)


def ran(phi: FinFunctor, y: TwistedDiagram, B: AdjunctionBundle) -> KanResult:
    """Right Kan extension: limits of U_s(Y_i) over j/phi."""
    J = B.index
    commas, certs = {}, {}
    for j in J.objects:
        commas[j] = fc.comma_under(phi, j)
        certs[j] = B.fibers[j].limit(comma_diagram_under(phi, y, B, j, commas[j]))
    comps = {j: certs[j].apex for j in J.objects}
    flats = {}
    for t, (j, k) in J.morphisms.items():
        if J.is_identity(t):
            continue
        rev = _reverse(commas[j])
        source = B.F(t, comps[j])
        cone = {}
        for q, (i, s) in commas[k].pairs.items():
            st = J.compose(s, t)
            proj = certs[j].legs[rev[(i, st)]]                     # R_j -> U_t U_s Y_i
            cone[q] = B.sharp(t, proj, B.U(s, y.components[i]))
        flats[t] = B.flat(t, certs[k].mediate(cone, source), comps[j])
    R = TwistedDiagram(B, comps, flats)
    res = KanResult(R, None, None, certs, commas, phi, y)
    pR = inverse_image_diagram(phi, R, y.bundle)
    cu = {}
    for i in phi.source.objects:
        j = phi.obj(i)
        cu[i] = certs[j].legs[_reverse(commas[j])[(i, J.identity(j))]]
    res.counit = TwistedMap(pR, y, cu)
    return res


def ran_unit(phi: FinFunctor, z: TwistedDiagram):
    """(R(phi^* z), eta_z: z -> R(phi^* z))."""
    B = z.bundle
    pz = inverse_image_diagram(phi, z)
    res = ran(phi, pz, B)
    comps = {}
    for j in B.index.objects:
        cone = {q: z.flats[s] for q, (i, s) in res.commas[j].pairs.items()}
        comps[j] = res.certs[j].mediate(cone, z.components[j])
    return res, TwistedMap(z, res.extension, comps)


def ran_map(r1: KanResult, r2: KanResult, g: TwistedMap) -> TwistedMap:
    B = r1.extension.bundle
    comps = {}
    for j in B.index.objects:
        C = B.fibers[j]
        cone = {q: C.compose(B.U_map(s, g.components[i]), r1.certs[j].legs[q])
                for q, (i, s) in r2.commas[j].pairs.items()}
        comps[j] = r2.certs[j].mediate(cone, r1.extension.components[j])
    return TwistedMap(r1.extension, r2.extension, comps)


# ---------------------------------------------------------------- checks

def lan_triangles(phi: FinFunctor, y: TwistedDiagram, B: AdjunctionBundle) -> List[str]:
    """eps_L . L(eta) = id_L and phi^*(eps) . eta_{phi^* -} = id, componentwise."""
    out = []
    r = lan(phi, y, B)
    L = r.extension
    rL, epsL = lan_counit(phi, L)
    r_eta_tgt = lan(phi, r.unit.dst, B)
    L_eta = lan_map(r, r_eta_tgt, r.unit)
    if r_eta_tgt.extension.components != rL.extension.components:
        out.append("L(phi^* L) computed inconsistently")
        return out
    lhs = compose_maps(TwistedMap(r_eta_tgt.extension, L, epsL.components), L_eta)
    if lhs != identity_map(L):
        out.append("eps_L . L(eta) != id")
    # second identity on z = L
    pz = inverse_image_diagram(phi, L, y.bundle)
    rz = lan(phi, pz, B)
    rz2, eps_z = lan_counit(phi, L)
    lhs2 = compose_maps(inverse_image_map(phi, eps_z, y.bundle), rz.unit)
    if lhs2 != identity_map(pz):
        out.append("phi^*(eps) . eta != id")
    return out


def ran_triangles(phi: FinFunctor, z: TwistedDiagram) -> List[str]:
    out = []
    B = z.bundle
    r, eta = ran_unit(phi, z)
    pR = r.counit.dst
    # phi^* R -| : eps_{phi^*} . phi^*(eta) = id_{phi^* z}
    lhs = compose_maps(r.counit, inverse_image_map(phi, eta, pR.bundle))
    if lhs != identity_map(inverse_image_diagram(phi, z)):
        out.append("eps . phi^*(eta) != id")
    # R(eps_Y) . eta_{R Y} = id_{R Y} with Y = phi^* z
    y = inverse_image_diagram(phi, z)
    rY = ran(phi, y, B)
    rR, etaR = ran_unit(phi, rY.extension)
    src_res = ran(phi, inverse_image_diagram(phi, rY.extension, y.bundle), B)
    R_eps = ran_map(src_res, rY, rY.counit)
    lhs2 = compose_maps(R_eps, TwistedMap(rY.extension, src_res.extension, etaR.components))
    if lhs2 != identity_map(rY.extension):
        out.append("R(eps) . eta_R != id")
    return out


def lan_bijection(phi: FinFunctor, y: TwistedDiagram, z: TwistedDiagram) -> Dict[str, object]:
    """Exhaustively compare hom(L y, z) with hom(y, phi^* z) (enumerable fibers)."""
    B = z.bundle
    r = lan(phi, y, B)
    left = list(twisted_homs(r.extension, z))
    pz = inverse_image_diagram(phi, z, y.bundle)
    right = list(twisted_homs(y, pz))
    image = set()
    for f in left:
        g = compose_maps(inverse_image_map(phi, f, y.bundle), r.unit)
        image.add(_key(g))
    right_keys = {_key(g) for g in right}
    return {"left": len(left), "right": len(right),
            "bijective": len(image) == len(left) and image == right_keys}


def ran_bijection(phi: FinFunctor, y: TwistedDiagram, z: TwistedDiagram) -> Dict[str, object]:
    """hom(phi^* z, y) against hom(z, R y)."""
    B = z.bundle
    r = ran(phi, y, B)
    left = list(twisted_homs(z, r.extension))
    pz = inverse_image_diagram(phi, z, y.bundle)
    right = list(twisted_homs(pz, y))
    image = {_key(compose_maps(r.counit, inverse_image_map(phi, f, y.bundle))) for f in left}
    return {"left": len(left), "right": len(right),
            "bijective": len(image) == len(left) and image == {_key(g) for g in right}}


def lan_solver_check(phi: FinFunctor, y: TwistedDiagram, z: TwistedDiagram,
                     rng: random.Random, samples: int = 3) -> List[str]:
    """Chain fibers: transposes of random maps in both hom systems round-trip."""
    from .twisted import TwistedHomSystem, validate_map
    B = z.bundle
    r = lan(phi, y, B)
    rz, eps = lan_counit(phi, z)
    pz = inverse_image_diagram(phi, z, y.bundle)
    out = []

    def back(f):
        return compose_maps(inverse_image_map(phi, f, y.bundle), r.unit)

    def forth(g):
        Lg = lan_map(r, rz, TwistedMap(y, rz.source, g.components))
        return compose_maps(eps, Lg)

    for _ in range(samples):
        g = TwistedHomSystem(y, pz).random(rng)
        f = forth(g)
        if validate_map(f):
            out.append("transpose of y -> phi^* z is not a twisted map")
        elif back(f) != g:
            out.append("y -> phi^* z does not round-trip")
        f = TwistedHomSystem(r.extension, z).random(rng)
        if forth(back(f)) != f:
            out.append("L y -> z does not round-trip")
    return out


def _key(f: TwistedMap):
    return tuple(sorted((i, repr(g)) for i, g in f.components.items()))


# ---------------------------------------------------------------- free diagrams

def free_diagram(B: AdjunctionBundle, i: str, A) -> TwistedDiagram:
    """j |-> coproduct over a in hom(i, j) of F_a(A)."""
    I = B.index
    certs = {}
    for j in I.objects:
        arrows = I.hom(i, j)
        shape = fc.discrete(arrows)
        certs[j] = B.fibers[j].colimit(Diagram(shape, {a: B.F(a, A) for a in arrows}, {}))
    comps = {j: certs[j].apex for j in I.objects}
    flats = {}
    for b_, (j, k) in I.morphisms.items():
        if I.is_identity(b_):
            continue
        target = B.U(b_, comps[k])
        cocone = {}
        for a in I.hom(i, j):
            ba = I.compose(b_, a)
            g = B.flat(ba, certs[k].legs[ba], A)
            cocone[a] = B.sharp(a, g, target)
        flats[b_] = certs[j].mediate(cocone, target)
    y = TwistedDiagram(B, comps, flats)
    y.free_certs = certs
    y.generator = (i, A)
    return y


def free_map(B: AdjunctionBundle, i: str, f) -> TwistedMap:
    """Fr_i(f) for f: A -> A'."""
    y, z = free_diagram(B, i, f.src), free_diagram(B, i, f.dst)
    comps = {}
    for j in B.index.objects:
        C = B.fibers[j]
        cocone = {a: C.compose(z.free_certs[j].legs[a], B.F_map(a, f)) for a in B.index.hom(i, j)}
        comps[j] = y.free_certs[j].mediate(cocone, z.components[j])
    return TwistedMap(y, z, comps)


def free_unit(y: TwistedDiagram):
    """A -> Fr_i(A)_i, the summand of the identity."""
    i, A = y.generator
    return y.free_certs[i].legs[y.index.identity(i)]


def free_from(y: TwistedDiagram, z: TwistedDiagram, g) -> TwistedMap:
    """Fr_i(A) -> z extending g: A -> z_i."""
    B = y.bundle
    i, A = y.generator
    comps = {}
    for j in B.index.objects:
        cocone = {}
        for a in B.index.hom(i, j):
            ga = B.fibers[i].compose(z.flats[a], g)            # A -> U_a Z_j
            cocone[a] = B.sharp(a, ga, z.components[j])
        comps[j] = y.free_certs[j].mediate(cocone, z.components[j])
    return TwistedMap(y, z, comps)


def free_bijection(y: TwistedDiagram, z: TwistedDiagram) -> Dict[str, object]:
    """hom(Fr_i A, Z) against hom(A, Z_i), exhaustively."""
    B = y.bundle
    i, A = y.generator
    left = list(twisted_homs(y, z))
    right = list(B.fibers[i].homs(A, z.components[i]))
    C = B.fibers[i]
    image = {repr(C.compose(f.components[i], free_unit(y))) for f in left}
    back_ok = all(free_from(y, z, g) in left for g in right)
    return {"left": len(left), "right": len(right),
            "bijective": len(image) == len(left) == len(right) and back_ok}


def free_vs_lan(B: AdjunctionBundle, i: str, A) -> bool:
    """Fr_i(A) agrees with the left Kan extension along {i} -> I up to a twisted iso."""
    y = free_diagram(B, i, A)
    phi = fc.object_inclusion(B.index, i)
    pb = inverse_image_bundle(phi, B)
    single = TwistedDiagram(pb, {i: A}, {})
    r = lan(phi, single, B)
    comps = {}
    for j in B.index.objects:
        cocone = {a: r.certs[j].legs[_reverse(r.commas[j])[(i, a)]] for a in B.index.hom(i, j)}
        comps[j] = y.free_certs[j].mediate(cocone, r.extension.components[j])
    m = TwistedMap(y, r.extension, comps)
    from .twisted import validate_map
    if validate_map(m):
        return False
    return all(B.fibers[j].is_iso(comps[j]) for j in B.index.objects)
