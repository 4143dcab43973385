"""Homotopy categories of chain fibers, the homotopy bundle, h, and sheaf deciders.

Morphisms X -> Y of Ho C are represented by chain maps X^c -> Y out of the
cofibrant replacement, two representatives being equal when their difference
is null-homotopic.  Every bounded complex is fibrant here, so only sources
are ever replaced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import linalg as la
from .bundle import AdjunctionBundle
from .concrete import chains as ch
from .concrete import modules as md
from .concrete.chains import ChainCategory, ChainComplex, ChainMap
from .twisted import TwistedDiagram, TwistedMap, sharp, validate_twisted


class NotChainFiber(TypeError):
    pass


# ------------------------------------------------------------ homotopies

def _homotopy_vars(sys_: la.LinearSystem, X: ChainComplex, Y: ChainComplex):
    """H_n: X_n -> Y_(n+1) for every degree where both sides can be non-zero."""
    L = max(X.length, Y.length)
    return [la.VarMatrix(sys_, Y.module(n + 1).rank, X.module(n).rank) for n in range(L)]


def _homotopy_terms(X: ChainComplex, Y: ChainComplex, H, n: int):
    """Terms of (dH + Hd)_n as (P, X, Q) triples."""
    terms = []
    if n < len(H):
        terms.append((Y.d(n + 1).matrix, H[n], None))
    if n >= 1:
        terms.append((None, H[n - 1], X.d(n).matrix))
    return terms


def _require_free(X: ChainComplex):
    if not X.is_free():
        raise ValueError("homotopies are only computed out of free complexes")


def null_homotopy(f: ChainMap) -> Optional[List[list]]:
    """Matrices H_n with f = dH + Hd, or None; the source must be free."""
    X, Y = f.src, f.dst
    _require_free(X)
    R = X.ring
    sys_ = la.LinearSystem(R)
    H = _homotopy_vars(sys_, X, Y)
    for n in range(max(X.length, Y.length)):
        rows, cols = Y.module(n).rank, X.module(n).rank
        if not rows or not cols:
            continue
        la.add_matrix_equation(sys_, _homotopy_terms(X, Y, H, n), f.comp(n).matrix, rows, cols,
                               Y.module(n).orders)
    x = sys_.solve()
    if x is None:
        return None
    return [V.value(x) for V in H]


def is_null_homotopic(f: ChainMap) -> bool:
    return null_homotopy(f) is not None


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    return is_null_homotopic(ch.add(f, ch.neg(g)))


def has_homotopy_inverse(f: ChainMap) -> bool:
    """Is f: X -> Y (both free) a chain homotopy equivalence?

    Unknowns g: Y -> X and homotopies H on X, K on Y with
    g f - 1 = dH + Hd and f g - 1 = dK + Kd; a single linear system.
    """
    X, Y = f.src, f.dst
    _require_free(X)
    _require_free(Y)
    R = X.ring
    sys_ = la.LinearSystem(R)
    L = max(X.length, Y.length)
    G = [la.VarMatrix(sys_, X.module(n).rank, Y.module(n).rank) for n in range(L)]
    ch.add_chain_map_equations(sys_, Y, X, G)
    H = _homotopy_vars(sys_, X, X)
    K = _homotopy_vars(sys_, Y, Y)
    for n in range(L):
        x, y = X.module(n).rank, Y.module(n).rank
        Fn = f.comp(n).matrix
        if x:
            # g f - dH - Hd = 1
            terms = [(None, G[n], Fn)] + [(_negated(R, P, x), V, Q)
                                          for P, V, Q in _homotopy_terms(X, X, H, n)]
            la.add_matrix_equation(sys_, terms, la.identity(R, x), x, x)
        if y:
            # f g - dK - Kd = 1
            terms = [(Fn, G[n], None)] + [(_negated(R, P, y), V, Q)
                                          for P, V, Q in _homotopy_terms(Y, Y, K, n)]
            la.add_matrix_equation(sys_, terms, la.identity(R, y), y, y)
    return sys_.solve() is not None


def _negated(R, P, k):
    """-P, with None standing for the identity of size k."""
    if P is None:
        return [[R.neg(R.one) if a == b else R.zero for b in range(k)] for a in range(k)]
    return [[R.neg(v) for v in row] for row in P]


# ------------------------------------------------------------ Ho C

@dataclass
class HoHom:
    """[X^c, Y]: chain maps modulo homotopy, as an abelian group with invariants."""
    src: ChainComplex
    dst: ChainComplex
    replacement: ChainComplex
    orders: Tuple[int, ...]
    quotient: la.Quotient = field(repr=False)
    variables: list = field(repr=False)

    def is_singleton(self) -> bool:
        return not self.orders

    def coords(self, f: ChainMap) -> list:
        return self.quotient.coords(_flatten(f, self.variables))


def _flatten(f: ChainMap, V) -> list:
    out = [0] * (V[-1].base + V[-1].m * V[-1].n if V else 0)
    for n, M in enumerate(V):
        mat = f.comp(n).matrix
        for r in range(M.m):
            for c in range(M.n):
                out[M.index(r, c)] = mat[r][c]
    return out


class HoMorphism:
    """A class [rep] with rep: src^c -> dst."""

    def __init__(self, cat: "HoCategory", src: ChainComplex, dst: ChainComplex, rep: ChainMap):
        self.cat, self.src, self.dst, self.rep = cat, src, dst, rep

    def __eq__(self, other):
        if not isinstance(other, HoMorphism):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and homotopic(self.rep, other.rep)

    def __hash__(self):
        return hash((self.src, self.dst))

    def __repr__(self):
        return f"HoMorphism({self.src} -> {self.dst})"


class HoCategory:
    """Ho C for a chain fiber C, morphisms computed on cofibrant replacements."""

    def __init__(self, base: ChainCategory):
        self.base = base
        self.ring = base.ring
        self._repl: Dict[ChainComplex, Tuple[ChainComplex, ChainMap]] = {}

    def __eq__(self, other):
        return isinstance(other, HoCategory) and self.base == other.base

    def __hash__(self):
        return hash(("Ho", self.base))

    def __repr__(self):
        return f"Ho({self.base})"

    def replace(self, X: ChainComplex) -> Tuple[ChainComplex, ChainMap]:
        """(X^c, p_X) with p_X an acyclic fibration from a free complex."""
        if X not in self._repl:
            self._repl[X] = ch.cofibrant_replace(X)
        return self._repl[X]

    def check_object(self, X) -> List[str]:
        return self.base.check_object(X)

    def gamma(self, f: ChainMap) -> HoMorphism:
        Xc, p = self.replace(f.src)
        return HoMorphism(self, f.src, f.dst, ch.compose(f, p))

    def identity(self, X: ChainComplex) -> HoMorphism:
        return self.gamma(ch.identity(X))

    def lift_to_replacement(self, f: ChainMap) -> ChainMap:
        """f~: A -> Y^c with p_Y f~ = f, for A free."""
        Yc, p = self.replace(f.dst)
        if Yc is f.dst or p == ch.identity(f.dst):
            return f
        zero = ch.zero_complex(self.ring)
        l = ch.solve_lift(ch.zero_map(zero, f.src), p, ch.zero_map(zero, Yc), f)
        if l is None:
            raise RuntimeError("lifting against an acyclic fibration failed")
        return l

    def compose(self, g: HoMorphism, f: HoMorphism) -> HoMorphism:
        if f.dst != g.src:
            raise ValueError("morphisms are not composable")
        return HoMorphism(self, f.src, g.dst, ch.compose(g.rep, self.lift_to_replacement(f.rep)))

    def hom(self, X: ChainComplex, Y: ChainComplex) -> HoHom:
        return ho_hom(X, Y, self)

    def is_iso(self, m: HoMorphism, method: str = "homology") -> bool:
        return is_ho_iso(m, method)


def ho_hom(X: ChainComplex, Y: ChainComplex, cat: Optional[HoCategory] = None) -> HoHom:
    """Chain maps X^c -> Y modulo null-homotopic ones, by exact linear algebra."""
    R = X.ring
    Xc = cat.replace(X)[0] if cat is not None else ch.cofibrant_replace(X)[0]
    sys_, V = ch.hom_system(Xc, Y)
    N = sys_.nvars
    cycles = la.image_basis(R, sys_.kernel(), N) if N else []
    sub: List[list] = []
    # zero maps: multiples of the torsion orders of Y
    for n, M in enumerate(V):
        for r, o in enumerate(Y.module(n).orders):
            if o:
                for c in range(M.n):
                    v = [R.zero] * N
                    v[M.index(r, c)] = R(o)
                    sub.append(v)
    # boundaries: D(E) = dE + Ed for every elementary homotopy E
    for n in range(len(V)):
        rows, cols = Y.module(n + 1).rank, Xc.module(n).rank
        for r in range(rows):
            for c in range(cols):
                v = [R.zero] * N
                # (d E)_n = d^Y_(n+1) E in degree n
                if n < len(V):
                    dY = Y.d(n + 1).matrix
                    for a in range(V[n].m):
                        if dY[a][r] != 0:
                            v[V[n].index(a, c)] = R.add(v[V[n].index(a, c)], dY[a][r])
                # (E d)_(n+1) = E d^X_(n+1) in degree n+1
                if n + 1 < len(V):
                    dX = Xc.d(n + 1).matrix
                    for b in range(V[n + 1].n):
                        if dX[c][b] != 0:
                            k = V[n + 1].index(r, b)
                            v[k] = R.add(v[k], dX[c][b])
                if any(e != 0 for e in v):
                    sub.append(v)
    sub = [s for s in sub if any(e != 0 for e in s)]
    Q = la.Quotient(R, cycles, sub, N)
    return HoHom(X, Y, Xc, Q.orders, Q, V)


def is_ho_iso(m: HoMorphism, method: str = "homology") -> bool:
    """Invertibility in Ho C.

    ``homology``: the representative is a quasi-isomorphism.
    ``inverse``: a two-sided homotopy inverse of the lifted representative
    X^c -> Y^c exists.
    """
    if method == "homology":
        return ch.is_quasi_iso(m.rep)
    if method == "inverse":
        return has_homotopy_inverse(m.cat.lift_to_replacement(m.rep))
    raise ValueError(f"unknown method {method!r}")


# ------------------------------------------------------------ the homotopy bundle

def _require_chain(b: AdjunctionBundle):
    bad = [i for i, C in b.fibers.items() if not isinstance(C, ChainCategory)]
    if bad:
        raise NotChainFiber(f"fibers {bad} are not bounded chain categories; "
                            "the homotopy bundle needs every object fibrant")


class HomotopyBundle:
    """Ho_f B: fibers Ho C_i with the total derived pair (L_f F_s, R_f U_s)."""

    def __init__(self, b: AdjunctionBundle):
        _require_chain(b)
        self.base = b
        self.index = b.index
        self.fibers = {i: HoCategory(C) for i, C in b.fibers.items()}
        self.name = f"Ho({b.name})"

    # right adjoints: U_s on objects
    def U(self, s: str, Y: ChainComplex) -> ChainComplex:
        return self.base.U(s, Y)

    def U_map(self, s: str, a: HoMorphism) -> HoMorphism:
        """R_f U(a) = U(f) . U(p_X)^(-1), realised by lifting p_(UX) through U(p_X)."""
        b = self.base
        i = self.index.src(s)
        Hi = self.fibers[i]
        X, Y = a.src, a.dst
        Xc, pX = self.fibers[self.index.dst(s)].replace(X)
        UXc, UpX = b.U(s, Xc), b.U_map(s, pX)
        UX = b.U(s, X)
        UXr, pUX = Hi.replace(UX)
        zero = ch.zero_complex(Hi.ring)
        q = ch.solve_lift(ch.zero_map(zero, UXr), UpX, ch.zero_map(zero, UXc), pUX)
        if q is None:
            raise RuntimeError("U does not preserve the acyclic fibration p_X")
        return HoMorphism(Hi, UX, b.U(s, Y), ch.compose(b.U_map(s, a.rep), q))

    # left adjoints: F_s(X^c)
    def F(self, s: str, X: ChainComplex) -> ChainComplex:
        Xc, _ = self.fibers[self.index.src(s)].replace(X)
        return self.base.F(s, Xc)

    def sharp(self, s: str, a: HoMorphism, Y: ChainComplex) -> HoMorphism:
        """[a: X -> U Y] to its adjoint class L F X -> Y: counit . F(rep)."""
        b = self.base
        j = self.index.dst(s)
        rep = b.sharp(s, a.rep, Y)   # F(X^c) -> Y
        return HoMorphism(self.fibers[j], rep.src, Y, ch.compose(rep, self.fibers[j].replace(rep.src)[1]))

    def flat(self, s: str, c: HoMorphism, X: ChainComplex) -> HoMorphism:
        """[c: L F X -> Y] back to X -> U Y: U(rep) . unit on X^c."""
        b = self.base
        i = self.index.src(s)
        Xc, _ = self.fibers[i].replace(X)
        if c.src != b.F(s, Xc) or not c.src.is_free():
            raise ValueError("expected a class out of F(X^c)")
        return HoMorphism(self.fibers[i], X, b.U(s, c.dst), b.flat(s, c.rep, Xc))


def homotopy_bundle(b: AdjunctionBundle) -> HomotopyBundle:
    return HomotopyBundle(b)


def homotopy_bundle_checks(hb: HomotopyBundle, rng: random.Random, per_fiber: int = 2) -> List[str]:
    """Runtime checks that the homotopy bundle is well behaved: identities, composites, adjunction."""
    b = hb.base
    I = hb.index
    out = []
    objs = {i: [C.random_object(rng, 2) for _ in range(per_fiber)] for i, C in b.fibers.items()}
    for s, (i, j) in sorted(I.morphisms.items()):
        Hj = hb.fibers[j]
        for Y in objs[j]:
            idY = Hj.identity(Y)
            if hb.U_map(s, idY) != hb.fibers[i].identity(b.U(s, Y)):
                out.append(f"R U_{s} does not preserve identities")
            Z = rng.choice(objs[j])
            Yc, _ = Hj.replace(Y)
            a = HoMorphism(Hj, Y, Z, b.fibers[j].random_map(rng, Yc, Z))
            for X in objs[i]:
                Xc, _ = hb.fibers[i].replace(X)
                g = b.fibers[i].random_map(rng, Xc, b.U(s, Z))
                m = HoMorphism(hb.fibers[i], X, b.U(s, Z), g)
                if hb.flat(s, hb.sharp(s, m, Z), X) != m:
                    out.append(f"adjunction transposes for {s} are not inverse")
        for (t, s2), ts in I.comp.items():
            if s2 != s or I.is_identity(t) or I.is_identity(s):
                continue
            k = I.dst(t)
            Hk = hb.fibers[k]
            for Y in objs[k]:
                Z = rng.choice(objs[k])
                Yc, _ = Hk.replace(Y)
                a = HoMorphism(Hk, Y, Z, b.fibers[k].random_map(rng, Yc, Z))
                if hb.U_map(ts, a) != hb.U_map(s, hb.U_map(t, a)):
                    out.append(f"R U is not strictly functorial on {t} . {s}")
    return out


def h_functor(y: TwistedDiagram) -> TwistedDiagram:
    """Components unchanged, structure maps replaced by their homotopy classes."""
    hb = homotopy_bundle(y.bundle)
    I = y.index
    flats = {s: hb.fibers[I.src(s)].gamma(m) for s, m in y.flats.items()}
    return TwistedDiagram(hb, y.components, flats)


def h_map(f: TwistedMap, hy: Optional[TwistedDiagram] = None, hz: Optional[TwistedDiagram] = None
          ) -> TwistedMap:
    hy = hy or h_functor(f.src)
    hz = hz or h_functor(f.dst)
    hb = hy.bundle
    return TwistedMap(hy, hz, {i: hb.fibers[i].gamma(c) for i, c in f.components.items()})


def validate_h(y: TwistedDiagram) -> List[Tuple[str, ...]]:
    """Cocycle check of a diagram over the homotopy bundle, up to homotopy."""
    return validate_twisted(y)


# ------------------------------------------------------------ sheaf deciders

@dataclass
class SheafReport:
    verdict: bool
    per_arrow: Dict[str, bool]

    def __bool__(self):
        return self.verdict


def _arrows(y: TwistedDiagram):
    I = y.index
    return [s for s in sorted(I.morphisms) if not I.is_identity(s)]


def is_strict_sheaf(y: TwistedDiagram, right: bool = False) -> SheafReport:
    """Every sharp structure map an isomorphism; with ``right`` the flat ones."""
    b = y.bundle
    I = y.index
    per = {}
    for s in _arrows(y):
        if right:
            per[s] = b.fibers[I.src(s)].is_iso(y.flats[s])
        else:
            per[s] = b.fibers[I.dst(s)].is_iso(sharp(y, s))
    return SheafReport(all(per.values()), per)


def replaced_sharp(y: TwistedDiagram, s: str) -> ChainMap:
    """The adjoint F_s(Y_i^c) -> Y_j of Y_i^c -> Y_i -> U_s Y_j."""
    b = y.bundle
    I = y.index
    i, j = I.src(s), I.dst(s)
    _, p = ch.cofibrant_replace(y.components[i])
    return b.sharp(s, ch.compose(y.flats[s], p), y.components[j])


def is_homotopy_sheaf(y: TwistedDiagram, naive: bool = False) -> SheafReport:
    """Each replaced sharp map a quasi-isomorphism; ``naive`` skips the replacement."""
    _require_chain(y.bundle)
    per = {}
    for s in _arrows(y):
        m = sharp(y, s) if naive else replaced_sharp(y, s)
        per[s] = ch.is_quasi_iso(m)
    return SheafReport(all(per.values()), per)


def strict_in_ho(hy: TwistedDiagram, method: str = "inverse") -> SheafReport:
    """Each sharp class of a diagram over the homotopy bundle invertible in Ho."""
    hb = hy.bundle
    I = hy.index
    per = {}
    for s in _arrows(hy):
        c = hb.sharp(s, hy.flats[s], hy.components[I.dst(s)])
        per[s] = is_ho_iso(c, method)
    return SheafReport(all(per.values()), per)


@dataclass
class HomInvReport:
    homotopy_sheaf: bool
    strict_in_ho: bool
    per_arrow: Dict[str, Tuple[bool, bool]]

    @property
    def agree(self) -> bool:
        return self.homotopy_sheaf == self.strict_in_ho


def verify_hominv(y: TwistedDiagram) -> HomInvReport:
    """Homotopy-sheaf verdict (homology) against strictness of h(y) (homotopy inverses)."""
    hs = is_homotopy_sheaf(y)
    st = strict_in_ho(h_functor(y))
    per = {s: (hs.per_arrow[s], st.per_arrow[s]) for s in hs.per_arrow}
    return HomInvReport(hs.verdict, st.verdict, per)


def replacement_is_trivial(y: TwistedDiagram) -> bool:
    return all(X.is_free() for X in y.components.values())
