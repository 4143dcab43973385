"""Adjoint pairs F -| U between coefficient categories, with unit and counit.

F goes from the source fiber C to the target fiber D; U goes back.  Each
class is deterministic so composites of right adjoints agree as values.
"""

from __future__ import annotations

from typing import List, Sequence

from .. import linalg as la
from . import chains as ch
from . import modules as md
from . import msets as ms
from .chains import ChainCategory
from .modules import ModuleCategory
from .msets import MSetCategory, MonoidHom


class Adjunction:
    kind = "abstract"
    is_identity = False

    def __init__(self, C, D):
        self.C = C
        self.D = D

    def F(self, X):
        raise NotImplementedError

    def F_map(self, f):
        raise NotImplementedError

    def U(self, Y):
        raise NotImplementedError

    def U_map(self, g):
        raise NotImplementedError

    def unit(self, X):
        """eta_X: X -> U F X"""
        raise NotImplementedError

    def counit(self, Y):
        """eps_Y: F U Y -> Y"""
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def __repr__(self):
        p = ",".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}({p})"

    # transposes

    def sharp(self, g):
        """g: X -> U Y  to  eps_Y . F g: F X -> Y"""
        Y = self._find_target(g)
        return self.D.compose(self.counit(Y), self.F_map(g))

    def sharp_to(self, g, Y):
        return self.D.compose(self.counit(Y), self.F_map(g))

    def flat(self, h):
        """h: F X -> Y  to  U h . eta_X: X -> U Y"""
        X = self._find_source(h)
        return self.C.compose(self.U_map(h), self.unit(X))

    def flat_from(self, h, X):
        return self.C.compose(self.U_map(h), self.unit(X))

    def _find_target(self, g):
        raise TypeError("use sharp_to(g, Y): the target is not recoverable from U Y")

    def _find_source(self, h):
        raise TypeError("use flat_from(h, X)")

    def F_graded(self, X, Y, mats: Sequence) -> List:
        """F on an arbitrary graded family of matrices X_n -> Y_n (chain fibers)."""
        raise NotImplementedError


class IdentityAdjunction(Adjunction):
    kind = "identity"
    is_identity = True

    def __init__(self, C):
        super().__init__(C, C)

    def F(self, X):
        return X

    def F_map(self, f):
        return f

    def U(self, Y):
        return Y

    def U_map(self, g):
        return g

    def unit(self, X):
        return self.C.identity(X)

    def counit(self, Y):
        return self.C.identity(Y)

    def sharp_to(self, g, Y):
        return g

    def flat_from(self, h, X):
        return h

    def F_graded(self, X, Y, mats):
        return list(mats)


class InductionAdjunction(Adjunction):
    """f_* -| f^* along a monoid homomorphism f: M -> M'."""
    kind = "induct"

    def __init__(self, f: MonoidHom):
        super().__init__(MSetCategory(f.src), MSetCategory(f.dst))
        self.f = f
        self.is_identity = f.is_identity()

    def params(self):
        return {"images": list(self.f.images)}

    def F(self, X):
        return ms.induct(self.f, X)[0]

    def F_map(self, g):
        return ms.induct_map(self.f, g)

    def U(self, Y):
        return ms.restrict(self.f, Y)

    def U_map(self, g):
        return ms.restrict_map(self.f, g)

    def unit(self, X):
        return ms.induct(self.f, X)[1]

    def counit(self, Y):
        return ms.induct_counit(self.f, Y)


class PowerAdjunction(Adjunction):
    """k-fold coproduct -| k-fold product on one fiber."""
    kind = "power"

    def __init__(self, C, k: int):
        super().__init__(C, C)
        if k < 1:
            raise ValueError("power must be positive")
        self.k = k
        self.is_identity = k == 1

    def params(self):
        return {"k": self.k}

    def _mset(self):
        return isinstance(self.C, MSetCategory)

    def F(self, X):
        if self.k == 1:
            return X
        if self._mset():
            return ms.wedge([X] * self.k, self.C.monoid)[0]
        return self.C.direct_sum([X] * self.k)[0]

    def F_map(self, f):
        if self.k == 1:
            return f
        if self._mset():
            W, inj = ms.wedge([f.src] * self.k, self.C.monoid)
            V, inj2 = ms.wedge([f.dst] * self.k, self.C.monoid)
            images = [0] * W.size
            for s in range(self.k):
                for x in range(f.src.size):
                    images[inj[s].images[x]] = inj2[s].images[f.images[x]]
            return ms.MSetMap(W, V, tuple(images))
        S, _, proj = self.C.direct_sum([f.src] * self.k)
        T, inj, _ = self.C.direct_sum([f.dst] * self.k)
        return self.C.sum_maps([self.C.compose_all(inj[s], f, proj[s]) for s in range(self.k)], S, T)

    def U(self, Y):
        if self.k == 1:
            return Y
        if self._mset():
            return ms.mset_power(Y, self.k)
        return self.C.direct_sum([Y] * self.k)[0]

    def U_map(self, g):
        if self.k == 1:
            return g
        if self._mset():
            return ms.mset_power_map(g, self.k)
        return self.F_map(g)

    def unit(self, X):
        if self.k == 1:
            return self.C.identity(X)
        k = self.k
        if self._mset():
            W, inj = ms.wedge([X] * k, self.C.monoid)
            P = ms.mset_power(W, k)
            return ms.MSetMap(X, P, tuple(ms._encode([inj[s].images[x] for s in range(k)], W.size)
                                          for x in range(X.size)))
        W, winj, _ = self.C.direct_sum([X] * k)
        P, pinj, _ = self.C.direct_sum([W] * k)
        return self.C.sum_maps([self.C.compose(pinj[s], winj[s]) for s in range(k)], X, P)

    def counit(self, Y):
        if self.k == 1:
            return self.C.identity(Y)
        k = self.k
        if self._mset():
            P = ms.mset_power(Y, k)
            W, inj = ms.wedge([P] * k, self.C.monoid)
            images = [0] * W.size
            for s in range(k):
                for c in range(P.size):
                    images[inj[s].images[c]] = ms._digits(c, Y.size, k)[s]
            return ms.MSetMap(W, Y, tuple(images))
        P, _, pproj = self.C.direct_sum([Y] * k)
        W, _, wproj = self.C.direct_sum([P] * k)
        return self.C.sum_maps([self.C.compose(pproj[s], wproj[s]) for s in range(k)], W, Y)

    def F_graded(self, X, Y, mats):
        R = self.C.ring
        out = []
        for n, m in enumerate(mats):
            r, c = Y.module(n).rank, X.module(n).rank
            M = la.zeros(R, r * self.k, c * self.k)
            for s in range(self.k):
                for i in range(r):
                    for j in range(c):
                        M[s * r + i][s * c + j] = m[i][j]
            out.append(M)
        return out


class ShiftAdjunction(Adjunction):
    """Sigma^k -| Omega^k on chain complexes; Omega^k is Omega iterated."""
    kind = "shift"

    def __init__(self, C: ChainCategory, k: int):
        super().__init__(C, C)
        self.k = k
        self.is_identity = k == 0

    def params(self):
        return {"k": self.k}

    def F(self, X):
        return ch.shift(X, self.k)

    def F_map(self, f):
        return ch.shift_map(f, self.k)

    def U(self, Y):
        for _ in range(self.k):
            Y = ch.loop(Y)
        return Y

    def U_map(self, g):
        for _ in range(self.k):
            g = ch.loop_map(g)
        return g

    def unit(self, X):
        # Omega^k Sigma^k X equals X on the nose
        UFX = self.U(self.F(X))
        assert UFX == X, "loop of a shift should return the complex itself"
        return ch.identity(X)

    def counit(self, Y):
        k = self.k
        if k == 0:
            return ch.identity(Y)
        FUY = self.F(self.U(Y))
        inner = Y
        for _ in range(k - 1):
            inner = ch.loop(inner)
        inc = ch.loop_inclusion(inner)  # Z_1(Omega^{k-1} Y) -> Y_k
        comps = []
        for n in range(max(FUY.length, Y.length)):
            if n < k:
                comps.append(None)
            elif n == k:
                comps.append(inc.matrix)
            else:
                comps.append(la.identity(Y.ring, Y.module(n).rank))
        return ch.chain_map(FUY, Y, comps)

    def F_graded(self, X, Y, mats):
        R = self.C.ring
        return [la.zeros(R, 0, 0) for _ in range(self.k)] + list(mats)


class BaseChangeAdjunction(Adjunction):
    """(-) (x) F_p -| restriction, from complexes over ZZ to complexes over F_p."""
    kind = "basechange"

    def __init__(self, p: int):
        super().__init__(ChainCategory(la.ZZ), ChainCategory(la.GF(p)))
        self.p = p

    def params(self):
        return {"p": self.p}

    def F(self, X):
        return ch.tensor_prime(X, self.p)

    def F_map(self, f):
        return ch.tensor_prime_map(f, self.p)

    def U(self, Y):
        return ch.restrict_prime(Y)

    def U_map(self, g):
        return ch.restrict_prime_map(g)

    def unit(self, X):
        UFX = self.U(self.F(X))
        comps = []
        for n in range(X.length):
            kept = ch._kept(X.module(n), self.p)
            M = la.zeros(la.ZZ, len(kept), X.module(n).rank)
            for r, c in enumerate(kept):
                M[r][c] = 1
            comps.append(M)
        return ch.chain_map(X, UFX, comps)

    def counit(self, Y):
        FUY = self.F(self.U(Y))
        assert FUY == Y
        return ch.identity(Y)

    def F_graded(self, X, Y, mats):
        Fp = la.GF(self.p)
        out = []
        for n, m in enumerate(mats):
            kx, ky = ch._kept(X.module(n), self.p), ch._kept(Y.module(n), self.p)
            out.append([[Fp(m[r][c]) for c in kx] for r in ky])
        return out


def adjunction_from_params(kind: str, params: dict, C, D=None) -> Adjunction:
    """Rebuild an adjunction from its kind and parameter table."""
    if kind == "identity":
        return IdentityAdjunction(C)
    if kind == "power":
        return PowerAdjunction(C, int(params["k"]))
    if kind == "shift":
        return ShiftAdjunction(C, int(params["k"]))
    if kind == "basechange":
        return BaseChangeAdjunction(int(params["p"]))
    if kind == "induct":
        f = MonoidHom(C.monoid, D.monoid, tuple(int(x) for x in params["images"]))
        return InductionAdjunction(f)
    raise ValueError(f"unknown adjunction kind {kind!r}")
