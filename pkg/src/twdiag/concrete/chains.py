"""Bounded non-negatively graded chain complexes of f.g. modules.

Model structure (projective type): weak equivalences are quasi-isomorphisms,
fibrations are surjective in degrees >= 1, cofibrations are injective with
degreewise free cokernel.  Every object is fibrant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .. import linalg as la
from ..linalg import Ring
from . import modules as md
from .base import AdditiveCategory
from .modules import Module, ModuleMap


@dataclass(frozen=True)
class ChainComplex:
    ring: Ring
    modules: Tuple[Module, ...]     # degrees 0..top, top module non-zero
    diffs: Tuple[ModuleMap, ...]    # diffs[n-1]: X_n -> X_{n-1}

    @property
    def length(self) -> int:
        return len(self.modules)

    @property
    def top(self) -> int:
        return len(self.modules) - 1

    def module(self, n: int) -> Module:
        if 0 <= n < len(self.modules):
            return self.modules[n]
        return md.zero_module(self.ring)

    def d(self, n: int) -> ModuleMap:
        """d_n: X_n -> X_{n-1}."""
        if 1 <= n < len(self.modules):
            return self.diffs[n - 1]
        return md.zero_map(self.module(n), self.module(n - 1))

    def ranks(self) -> List[int]:
        return [M.rank for M in self.modules]

    def total_rank(self) -> int:
        return sum(self.ranks())

    def is_zero(self) -> bool:
        return not self.modules

    def is_free(self) -> bool:
        return all(M.is_free() for M in self.modules)

    def __repr__(self):
        if not self.modules:
            return "0"
        return "[" + " <- ".join(repr(M) for M in self.modules) + "]"


def complex_from(R: Ring, mods: Sequence[Module], diff_rows: Sequence) -> ChainComplex:
    """Build a complex, trimming zero modules at the top.

    ``diff_rows[n-1]`` is the matrix of d_n (rows X_{n-1}, columns X_n);
    ModuleMap values are accepted too.
    """
    mods = list(mods)
    diffs = []
    for n in range(1, len(mods)):
        d = diff_rows[n - 1]
        if isinstance(d, ModuleMap):
            d = d.matrix
        diffs.append(md.module_map(mods[n], mods[n - 1], d))
    while mods and mods[-1].is_zero():
        mods.pop()
        if diffs:
            diffs.pop()
    diffs = diffs[: max(len(mods) - 1, 0)]
    return ChainComplex(R, tuple(mods), tuple(diffs))


def complex_check(X: ChainComplex) -> List[str]:
    out = []
    if X.modules and X.modules[-1].is_zero():
        out.append("top module is zero (not trimmed)")
    if len(X.diffs) != max(len(X.modules) - 1, 0):
        out.append("wrong number of differentials")
    for n in range(1, X.length):
        d = X.d(n)
        if d.src != X.module(n) or d.dst != X.module(n - 1):
            out.append(f"d_{n} has wrong endpoints")
        if not md.well_defined(d):
            out.append(f"d_{n} is not well defined")
    for n in range(2, X.length):
        if not md.is_zero_map(md.compose(X.d(n - 1), X.d(n))):
            out.append(f"d_{n-1} d_{n} != 0")
    return out


def free_complex(R: Ring, ranks: Sequence[int], diff_rows: Sequence) -> ChainComplex:
    return complex_from(R, [md.free_module(R, r) for r in ranks], diff_rows)


def zero_complex(R: Ring) -> ChainComplex:
    return ChainComplex(R, (), ())


def sphere(R: Ring, n: int, rank: int = 1) -> ChainComplex:
    """R^rank concentrated in degree n."""
    mods = [md.zero_module(R)] * n + [md.free_module(R, rank)]
    return complex_from(R, mods, [la.zeros(R, mods[k].rank, mods[k + 1].rank) for k in range(n)])


def disc(R: Ring, n: int, rank: int = 1) -> ChainComplex:
    """R^rank in degrees n and n-1 joined by the identity (n >= 1)."""
    mods = [md.zero_module(R)] * (n - 1) + [md.free_module(R, rank)] * 2
    diffs = [la.zeros(R, mods[k].rank, mods[k + 1].rank) for k in range(n - 1)]
    diffs.append(la.identity(R, rank))
    return complex_from(R, mods, diffs)


@dataclass(frozen=True)
class ChainMap:
    src: ChainComplex
    dst: ChainComplex
    comps: Tuple[ModuleMap, ...]   # degrees 0 .. max(src.top, dst.top)

    def comp(self, n: int) -> ModuleMap:
        if 0 <= n < len(self.comps):
            return self.comps[n]
        return md.zero_map(self.src.module(n), self.dst.module(n))

    def __repr__(self):
        return f"ChainMap({self.src} -> {self.dst}, {[ [list(r) for r in c.matrix] for c in self.comps]})"


def chain_map(X: ChainComplex, Y: ChainComplex, comps: Sequence) -> ChainMap:
    """Components may be ModuleMaps or raw matrices; missing degrees are zero."""
    L = max(X.length, Y.length)
    out = []
    for n in range(L):
        c = comps[n] if n < len(comps) else None
        if c is None:
            out.append(md.zero_map(X.module(n), Y.module(n)))
        elif isinstance(c, ModuleMap):
            out.append(md.module_map(X.module(n), Y.module(n), c.matrix))
        else:
            out.append(md.module_map(X.module(n), Y.module(n), c))
    return ChainMap(X, Y, tuple(out))


def map_check(f: ChainMap) -> List[str]:
    out = []
    for n in range(len(f.comps)):
        if not md.well_defined(f.comp(n)):
            out.append(f"component {n} not well defined")
    for n in range(1, len(f.comps) + 1):
        lhs = md.compose(f.dst.d(n), f.comp(n))
        rhs = md.compose(f.comp(n - 1), f.src.d(n))
        if lhs != rhs:
            out.append(f"not a chain map in degree {n}")
    return out


def identity(X: ChainComplex) -> ChainMap:
    return chain_map(X, X, [md.identity_map(M) for M in X.modules])


def zero_map(X: ChainComplex, Y: ChainComplex) -> ChainMap:
    return chain_map(X, Y, [])


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    if f.dst != g.src:
        raise ValueError("chain maps are not composable")
    L = max(f.src.length, g.dst.length)
    return chain_map(f.src, g.dst, [md.compose(g.comp(n), f.comp(n)) for n in range(L)])


def add(f: ChainMap, g: ChainMap) -> ChainMap:
    return chain_map(f.src, f.dst, [md.add(a, b) for a, b in zip(f.comps, g.comps)])


def neg(f: ChainMap) -> ChainMap:
    return chain_map(f.src, f.dst, [md.neg(a) for a in f.comps])


def scale(c, f: ChainMap) -> ChainMap:
    return chain_map(f.src, f.dst, [md.scale(c, a) for a in f.comps])


def is_zero_map(f: ChainMap) -> bool:
    return all(md.is_zero_map(c) for c in f.comps)


# ----------------------------------------------------------- biproducts etc.

def direct_sum(R: Ring, Xs: Sequence[ChainComplex]):
    L = max([X.length for X in Xs], default=0)
    sums = [md.direct_sum([X.module(n) for X in Xs], R) for n in range(L)]
    mods = [s[0] for s in sums]
    diffs = []
    for n in range(1, L):
        S_hi, _, proj_hi = sums[n]
        S_lo, inj_lo, _ = sums[n - 1]
        d = md.zero_map(S_hi, S_lo)
        for k, X in enumerate(Xs):
            d = md.add(d, md.compose(inj_lo[k], md.compose(X.d(n), proj_hi[k])))
        diffs.append(d)
    S = complex_from(R, mods, diffs)
    inj = [chain_map(X, S, [sums[n][1][k] for n in range(L)]) for k, X in enumerate(Xs)]
    proj = [chain_map(S, X, [sums[n][2][k] for n in range(L)]) for k, X in enumerate(Xs)]
    return S, inj, proj


def kernel(f: ChainMap) -> Tuple[ChainComplex, ChainMap]:
    X = f.src
    R = X.ring
    L = X.length
    ks = [md.kernel(f.comp(n)) for n in range(L)]
    diffs = []
    for n in range(1, L):
        h = md.lift_mono(ks[n - 1][1], md.compose(X.d(n), ks[n][1]))
        assert h is not None
        diffs.append(h)
    K = complex_from(R, [k[0] for k in ks], diffs)
    return K, chain_map(K, X, [k[1] for k in ks[: K.length]])


def cokernel(f: ChainMap) -> Tuple[ChainComplex, ChainMap]:
    Y = f.dst
    R = Y.ring
    L = Y.length
    cs = [md.cokernel(f.comp(n)) for n in range(L)]
    diffs = []
    for n in range(1, L):
        h = md.factor_epi(cs[n][1], md.compose(cs[n - 1][1], Y.d(n)))
        assert h is not None
        diffs.append(h)
    Q = complex_from(R, [c[0] for c in cs], diffs)
    return Q, chain_map(Y, Q, [c[1] for c in cs])


def lift_mono(i: ChainMap, g: ChainMap) -> Optional[ChainMap]:
    L = max(g.src.length, i.src.length)
    out = []
    for n in range(L):
        h = md.lift_mono(i.comp(n), g.comp(n))
        if h is None:
            return None
        out.append(h)
    return chain_map(g.src, i.src, out)


def factor_epi(p: ChainMap, g: ChainMap) -> Optional[ChainMap]:
    L = max(p.dst.length, g.dst.length)
    out = []
    for n in range(L):
        h = md.factor_epi(p.comp(n), g.comp(n))
        if h is None:
            return None
        out.append(h)
    return chain_map(p.dst, g.dst, out)


def is_iso(f: ChainMap) -> bool:
    return all(md.is_iso(f.comp(n)) for n in range(max(f.src.length, f.dst.length)))


def inverse(f: ChainMap) -> ChainMap:
    L = max(f.src.length, f.dst.length)
    return chain_map(f.dst, f.src, [md.inverse(f.comp(n)) for n in range(L)])


# ---------------------------------------------------------------- homology

def homology(X: ChainComplex, n: int) -> Module:
    if n < 0:
        raise ValueError("degree out of range")
    K, inc = md.kernel(X.d(n))
    b = md.lift_mono(inc, X.d(n + 1))
    H, _ = md.cokernel(b)
    return H


def homology_invariants(X: ChainComplex, n: int) -> Tuple[int, Tuple[int, ...]]:
    """(Betti number, torsion coefficients)."""
    return md.invariants(homology(X, n))


def homology_map(f: ChainMap, n: int) -> ModuleMap:
    """H_n(f) between the presentations returned by ``homology``."""
    X, Y = f.src, f.dst
    KX, iX = md.kernel(X.d(n))
    HX, pX = md.cokernel(md.lift_mono(iX, X.d(n + 1)))
    KY, iY = md.kernel(Y.d(n))
    HY, pY = md.cokernel(md.lift_mono(iY, Y.d(n + 1)))
    z = md.lift_mono(iY, md.compose(f.comp(n), iX))
    h = md.factor_epi(pX, md.compose(pY, z))
    assert h is not None
    return h


def is_acyclic(X: ChainComplex) -> bool:
    return all(homology(X, n).is_zero() for n in range(X.length))


def cone(f: ChainMap) -> ChainComplex:
    """Cone_n = X_{n-1} + Y_n with d(x, y) = (-dx, f x + dy)."""
    X, Y = f.src, f.dst
    R = X.ring
    L = max(X.length + 1, Y.length)
    mods, diffs = [], []
    sums = [md.direct_sum([X.module(n - 1), Y.module(n)], R) for n in range(L)]
    for n in range(L):
        mods.append(sums[n][0])
    for n in range(1, L):
        S_hi, _, (px, py) = sums[n]
        S_lo, (ix, iy), _ = sums[n - 1]
        d = md.compose(ix, md.compose(md.neg(X.d(n - 1)), px))
        d = md.add(d, md.compose(iy, md.compose(f.comp(n - 1), px)))
        d = md.add(d, md.compose(iy, md.compose(Y.d(n), py)))
        diffs.append(d)
    return complex_from(R, mods, diffs)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f))


def is_quasi_iso_by_homology(f: ChainMap) -> bool:
    """Second route: compare induced maps on homology degree by degree."""
    L = max(f.src.length, f.dst.length)
    return all(md.is_iso(homology_map(f, n)) for n in range(L))


def is_fibration(f: ChainMap) -> bool:
    L = max(f.src.length, f.dst.length)
    return all(md.is_surjective(f.comp(n)) for n in range(1, L))


def is_cofibration(f: ChainMap) -> bool:
    L = max(f.src.length, f.dst.length)
    for n in range(L):
        c = f.comp(n)
        if not md.is_injective(c):
            return False
        Q, _ = md.cokernel(c)
        if md.invariants(Q)[1]:
            return False
    return True


# ---------------------------------------------------------- factorizations

def _cover_reps(f: ModuleMap) -> List[list]:
    """Elements of f.dst whose classes generate coker f."""
    A, B = f.src, f.dst
    R = B.ring
    rel_b = md.relation_columns(B)
    big = la.hstack(R, [f.matrix, la.columns_to_matrix(R, rel_b, B.rank)], B.rank)
    S = la.smith(R, big, A.rank + len(rel_b))
    reps = []
    for k in range(B.rank):
        if k < S.rank and R.is_unit(S.diag[k]):
            continue
        reps.append([S.Uinv[i][k] for i in range(B.rank)])
    return reps


class _Builder:
    """Mutable complex X + F with F free, and a map to a fixed target."""

    def __init__(self, f: ChainMap):
        self.R = f.src.ring
        self.X = f.src
        self.Y = f.dst
        L = max(f.src.length, f.dst.length)
        # extra generators per degree: (d-image column in Z_{n-1}, image in Y_n)
        self.extra: List[List[Tuple[list, list]]] = [[] for _ in range(L)]
        self.f = f

    def degrees(self):
        return len(self.extra)

    def ensure(self, n):
        while len(self.extra) <= n:
            self.extra.append([])

    def zrank(self, n):
        return self.X.module(n).rank + len(self.extra[n]) if n < len(self.extra) else self.X.module(n).rank

    def add_generator(self, n: int, boundary: list, image: list):
        """New free generator e in degree n with d e = boundary (in Z_{n-1})."""
        self.ensure(n)
        self.extra[n].append((list(boundary), list(image)))

    def build(self):
        R, X, Y = self.R, self.X, self.Y
        L = len(self.extra)
        mods = [Module(R, X.module(n).orders + (0,) * len(self.extra[n])) for n in range(L)]
        diffs = []
        for n in range(1, L):
            lo = mods[n - 1].rank
            D = la.zeros(R, lo, mods[n].rank)
            dx = X.d(n).matrix
            for i in range(X.module(n - 1).rank):
                for j in range(X.module(n).rank):
                    D[i][j] = dx[i][j]
            off = X.module(n).rank
            for k, (bd, _) in enumerate(self.extra[n]):
                for i in range(lo):
                    D[i][off + k] = bd[i] if i < len(bd) else R.zero
            diffs.append(D)
        Z = complex_from(R, mods, diffs)
        inc = chain_map(X, Z, [la.columns_to_matrix(R, [[R.one if i == j else R.zero
                                                         for i in range(mods[n].rank)]
                                                        for j in range(X.module(n).rank)],
                                                    mods[n].rank) for n in range(Z.length)])
        qcomps = []
        for n in range(max(Z.length, Y.length)):
            cols = [self.f.comp(n).column(j) for j in range(X.module(n).rank)]
            if n < L:
                cols += [im for _, im in self.extra[n]]
            qcomps.append(la.columns_to_matrix(R, cols, Y.module(n).rank))
        q = chain_map(Z, Y, qcomps)
        return Z, inc, q


def factor_trivcof_fib(f: ChainMap) -> Tuple[ChainMap, ChainMap]:
    """f = p . j with j an acyclic cofibration and p a fibration.

    Adds a disc D^n(R) mapping onto each missing generator of Y_n, n >= 1.
    """
    R = f.src.ring
    B = _Builder(f)
    Y = f.dst
    for n in range(1, Y.length):
        for rep in _cover_reps(f.comp(n)):
            # disc: generator a in degree n, b = d a in degree n-1
            B.ensure(n)
            b_idx = B.zrank(n - 1)
            B.add_generator(n - 1, [R.zero] * B.zrank(n - 2) if n >= 2 else [],
                            md.compose(Y.d(n), md.module_map(md.free_module(R, 1), Y.module(n),
                                                               [[x] for x in rep])).column(0))
            bd = [R.zero] * B.zrank(n - 1)
            bd[b_idx] = R.one
            B.add_generator(n, bd, rep)
    Z, j, p = B.build()
    return j, p


def factor_cof_trivfib(f: ChainMap, max_rounds: int = 64) -> Tuple[ChainMap, ChainMap]:
    """f = q . i with i a cofibration and q an acyclic fibration.

    Covers Y by free cells, then kills the homology of ker q degree by
    degree by attaching cells.
    """
    R = f.src.ring
    B = _Builder(f)
    Y = f.dst
    for n in range(0, Y.length):
        for rep in _cover_reps(f.comp(n)):
            if n == 0:
                B.add_generator(0, [], rep)
            else:
                b_idx = B.zrank(n - 1)
                B.add_generator(n - 1, [R.zero] * B.zrank(n - 2) if n >= 2 else [],
                                md.compose(Y.d(n), md.module_map(md.free_module(R, 1), Y.module(n),
                                                                   [[x] for x in rep])).column(0))
                bd = [R.zero] * B.zrank(n - 1)
                bd[b_idx] = R.one
                B.add_generator(n, bd, rep)
    n = 0
    rounds = 0
    while True:
        Z, i, q = B.build()
        if n >= Z.length:
            break
        K, k = kernel(q)
        KZ, kin = md.kernel(K.d(n))
        bnd = md.lift_mono(kin, K.d(n + 1))
        reps = _cover_reps(bnd)
        if not reps:
            n += 1
            continue
        rounds += 1
        if rounds > max_rounds:
            raise RuntimeError("cell attachment did not terminate")
        zero_img = [R.zero] * Y.module(n + 1).rank
        for rep in reps:
            cyc_in_k = md.compose(kin, md.module_map(md.free_module(R, 1), KZ, [[x] for x in rep]))
            z = md.compose(k.comp(n), cyc_in_k).column(0)
            B.add_generator(n + 1, z, zero_img)
        n += 1
    return i, q


def cofibrant_replace(X: ChainComplex) -> Tuple[ChainComplex, ChainMap]:
    if X.is_free():
        return X, identity(X)
    i, p = factor_cof_trivfib(zero_map(zero_complex(X.ring), X))
    return p.src, p


def solve_lift(i: ChainMap, p: ChainMap, u: ChainMap, v: ChainMap, rng=None) -> Optional[ChainMap]:
    """l: B -> X with l . i = u and p . l = v for the square (u, v) from i to p.

    Solved as one linear system; free coordinates set to zero unless an
    rng is given.
    """
    A, B = i.src, i.dst
    X, Y = p.src, p.dst
    R = A.ring
    sys_ = la.LinearSystem(R)
    L = max(B.length, X.length)
    V = [la.VarMatrix(sys_, X.module(n).rank, B.module(n).rank) for n in range(L)]
    for n in range(L):
        # chain map: d l_n = l_{n-1} d
        if n >= 1:
            la.add_matrix_equation(sys_, [(X.d(n).matrix, V[n], None),
                                          (_negI(R, X.module(n - 1).rank), V[n - 1], B.d(n).matrix)],
                                   None, X.module(n - 1).rank, B.module(n).rank,
                                   X.module(n - 1).orders)
        la.add_matrix_equation(sys_, [(None, V[n], i.comp(n).matrix)], u.comp(n).matrix,
                               X.module(n).rank, A.module(n).rank, X.module(n).orders)
        la.add_matrix_equation(sys_, [(p.comp(n).matrix, V[n], None)], v.comp(n).matrix,
                               Y.module(n).rank, B.module(n).rank, Y.module(n).orders)
    for n in range(L):
        # torsion in B: the order of a source generator must kill its image
        for c, o in enumerate(B.module(n).orders):
            if o and not R.is_field:
                for r, e in enumerate(X.module(n).orders):
                    sys_.add({V[n].index(r, c): o}, 0, e)
    x = sys_.solve() if rng is None else sys_.solve_random(rng)
    if x is None:
        return None
    return chain_map(B, X, [V[n].value(x) for n in range(L)])


def _negI(R, n):
    M = la.zeros(R, n, n)
    for k in range(n):
        M[k][k] = R.neg(R.one)
    return M


def hom_system(X: ChainComplex, Y: ChainComplex):
    """Linear system whose solutions are the chain maps X -> Y."""
    R = X.ring
    sys_ = la.LinearSystem(R)
    L = max(X.length, Y.length)
    V = [la.VarMatrix(sys_, Y.module(n).rank, X.module(n).rank) for n in range(L)]
    add_chain_map_equations(sys_, X, Y, V)
    return sys_, V


def add_chain_map_equations(sys_, X: ChainComplex, Y: ChainComplex, V):
    R = X.ring
    L = len(V)
    for n in range(1, L):
        la.add_matrix_equation(sys_, [(Y.d(n).matrix, V[n], None),
                                      (_negI(R, Y.module(n - 1).rank), V[n - 1], X.d(n).matrix)],
                               None, Y.module(n - 1).rank, X.module(n).rank, Y.module(n - 1).orders)
    if not R.is_field:
        for n in range(L):
            for c, o in enumerate(X.module(n).orders):
                if o:
                    for r, e in enumerate(Y.module(n).orders):
                        sys_.add({V[n].index(r, c): o}, 0, e)


def random_chain_map(X: ChainComplex, Y: ChainComplex, rng: random.Random) -> ChainMap:
    sys_, V = hom_system(X, Y)
    x = sys_.solve_random(rng)
    return chain_map(X, Y, [V[n].value(x) for n in range(len(V))])


# ------------------------------------------------- shift, loops, base change

def shift(X: ChainComplex, k: int = 1) -> ChainComplex:
    """(Sigma^k X)_n = X_{n-k}."""
    if k == 0 or X.is_zero():
        return X
    R = X.ring
    mods = [md.zero_module(R)] * k + list(X.modules)
    diffs = [md.zero_map(mods[n], mods[n - 1]) for n in range(1, k + 1)] + list(X.diffs)
    return complex_from(R, mods, diffs)


def shift_map(f: ChainMap, k: int = 1) -> ChainMap:
    if k == 0:
        return f
    return chain_map(shift(f.src, k), shift(f.dst, k), [None] * k + list(f.comps))


def loop(Y: ChainComplex) -> ChainComplex:
    """(Omega Y)_n = Y_{n+1} for n >= 1 and (Omega Y)_0 = Z_1(Y)."""
    R = Y.ring
    if Y.length <= 1:
        return zero_complex(R)
    Z1, inc = md.kernel(Y.d(1))
    mods = [Z1] + list(Y.modules[2:])
    diffs = []
    if Y.length > 2:
        diffs.append(md.lift_mono(inc, Y.d(2)))
        diffs += list(Y.diffs[2:])
    return complex_from(R, mods, diffs)


def loop_inclusion(Y: ChainComplex):
    return md.kernel(Y.d(1))[1]


def loop_map(f: ChainMap) -> ChainMap:
    X, Y = f.src, f.dst
    OX, OY = loop(X), loop(Y)
    comps = [md.lift_mono(loop_inclusion(Y), md.compose(f.comp(1), loop_inclusion(X)))]
    comps += [f.comp(n + 1) for n in range(1, max(OX.length, OY.length))]
    return chain_map(OX, OY, comps)


def tensor_prime(X: ChainComplex, p: int) -> ChainComplex:
    """X (x) F_p for a complex over ZZ."""
    Fp = la.GF(p)
    keep = [_kept(M, p) for M in X.modules]
    mods = [md.free_module(Fp, len(k)) for k in keep]
    diffs = []
    for n in range(1, X.length):
        D = X.d(n).matrix
        diffs.append([[Fp(D[r][c]) for c in keep[n]] for r in keep[n - 1]])
    return complex_from(Fp, mods, diffs)


def _kept(M: Module, p: int) -> List[int]:
    return [k for k, o in enumerate(M.orders) if o == 0 or o % p == 0]


def tensor_prime_map(f: ChainMap, p: int) -> ChainMap:
    Fp = la.GF(p)
    X, Y = f.src, f.dst
    L = max(X.length, Y.length)
    comps = []
    for n in range(L):
        kx, ky = _kept(X.module(n), p), _kept(Y.module(n), p)
        D = f.comp(n).matrix
        comps.append([[Fp(D[r][c]) for c in kx] for r in ky])
    return chain_map(tensor_prime(X, p), tensor_prime(Y, p), comps)


def restrict_prime(V: ChainComplex) -> ChainComplex:
    """An F_p-complex viewed over ZZ."""
    p = V.ring.p
    mods = [Module(la.ZZ, (p,) * M.rank) for M in V.modules]
    return complex_from(la.ZZ, mods, [[list(r) for r in d.matrix] for d in V.diffs])


def restrict_prime_map(f: ChainMap) -> ChainMap:
    return chain_map(restrict_prime(f.src), restrict_prime(f.dst),
                     [[list(r) for r in c.matrix] for c in f.comps])


# ------------------------------------------------------------ random data

def random_complex(R: Ring, rng: random.Random, max_len: int = 3, max_rank: int = 2,
                   torsion: bool = True, free: bool = False) -> ChainComplex:
    """A random complex with d d = 0, built as a sum of small pieces."""
    L = rng.randint(1, max_len)
    pieces = []
    for _ in range(rng.randint(0, max_rank + 1)):
        n = rng.randrange(L)
        kind = rng.random()
        if kind < 0.4 or n == 0:
            pieces.append(sphere(R, n))
        elif kind < 0.7:
            pieces.append(disc(R, n))
        else:
            # R --c--> R from degree n to n-1
            c = R.random_element(rng, 3) if not R.is_field else R(rng.randint(0, 2))
            mods = [md.zero_module(R)] * (n - 1) + [md.free_module(R, 1)] * 2
            diffs = [la.zeros(R, 0, 0)] * (n - 1) + [[[c]]]
            pieces.append(complex_from(R, mods, diffs))
    if not R.is_field and torsion and not free and rng.random() < 0.5:
        n = rng.randrange(L)
        o = rng.choice([2, 3, 4])
        mods = [md.zero_module(R)] * n + [Module(R, (o,))]
        pieces.append(complex_from(R, mods, [la.zeros(R, 0, 0)] * n))
    if not pieces:
        return zero_complex(R)
    S, _, _ = direct_sum(R, pieces)
    # scramble with a random automorphism-ish change of basis in each degree
    return S


# ---------------------------------------------------------------- category

class ChainModel:
    """The model-category data of a chain-complex fiber."""

    def __init__(self, cat: "ChainCategory"):
        self.cat = cat

    def is_weq(self, f):
        return is_quasi_iso(f)

    def is_fib(self, f):
        return is_fibration(f)

    def is_cof(self, f):
        return is_cofibration(f)

    def factor_cof_trivfib(self, f):
        return factor_cof_trivfib(f)

    def factor_trivcof_fib(self, f):
        return factor_trivcof_fib(f)

    def cofibrant_replace(self, X):
        return cofibrant_replace(X)

    def lift(self, i, p, u, v, rng=None):
        return solve_lift(i, p, u, v, rng)

    def generating_cofibrations(self, top: int):
        """S^{n-1} -> D^n for 1 <= n <= top, and 0 -> S^0."""
        R = self.cat.ring
        out = [zero_map(zero_complex(R), sphere(R, 0))]
        for n in range(1, top + 1):
            S, D = sphere(R, n - 1), disc(R, n)
            comps = [None] * (n - 1) + [[[R.one]]]
            out.append(chain_map(S, D, comps))
        return out

    def generating_acyclic_cofibrations(self, top: int):
        R = self.cat.ring
        return [zero_map(zero_complex(R), disc(R, n)) for n in range(1, top + 1)]


class ChainCategory(AdditiveCategory):

    def __init__(self, R: Ring):
        self.ring = R
        self.kind = f"Chain({R.name})"
        self.model = ChainModel(self)

    def __repr__(self):
        return self.kind

    def __eq__(self, other):
        return isinstance(other, ChainCategory) and other.ring == self.ring

    def __hash__(self):
        return hash(self.kind)

    def identity(self, X):
        return identity(X)

    def compose(self, g, f):
        return compose(g, f)

    def zero_object(self):
        return zero_complex(self.ring)

    def zero_map(self, X, Y):
        return zero_map(X, Y)

    def direct_sum(self, objs):
        return direct_sum(self.ring, objs)

    def kernel(self, f):
        return kernel(f)

    def cokernel(self, f):
        return cokernel(f)

    def lift_mono(self, i, g):
        return lift_mono(i, g)

    def factor_epi(self, p, g):
        return factor_epi(p, g)

    def add(self, f, g):
        return add(f, g)

    def neg(self, f):
        return neg(f)

    def is_iso(self, f):
        return is_iso(f)

    def inverse(self, f):
        return inverse(f)

    def check_object(self, X):
        if X.ring != self.ring:
            return [f"ring {X.ring} is not {self.ring}"]
        return complex_check(X)

    def check_morphism(self, f):
        return map_check(f)

    def random_object(self, rng, size=3):
        return random_complex(self.ring, rng, max_len=size, max_rank=size)

    def random_map(self, rng, X, Y):
        return random_chain_map(X, Y, rng)
