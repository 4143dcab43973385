"""Finitely generated modules over ZZ, QQ and GF(p), presented diagonally.

A module is sum_k R/(orders[k]) with order 0 meaning a free summand.
Over a field every order is 0, so this is FDVect.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .. import linalg as la
from ..linalg import Ring
from .base import AdditiveCategory


@dataclass(frozen=True)
class Module:
    ring: Ring
    orders: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.orders)

    def is_zero(self) -> bool:
        return not self.orders

    def is_free(self) -> bool:
        return all(o == 0 for o in self.orders)

    def reduce(self, v: Sequence) -> list:
        R = self.ring
        return [R.reduce(R(x), o) for x, o in zip(v, self.orders)]

    def __repr__(self):
        R = self.ring
        if R.is_field:
            return f"{R.name}^{self.rank}"
        parts = [R.name if o == 0 else f"Z/{o}" for o in self.orders]
        return "+".join(parts) if parts else "0"


def free_module(R: Ring, n: int) -> Module:
    return Module(R, (0,) * n)


def zero_module(R: Ring) -> Module:
    return Module(R, ())


def _freeze(rows) -> Tuple[Tuple, ...]:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class ModuleMap:
    src: Module
    dst: Module
    matrix: Tuple[Tuple, ...]  # dst.rank rows, src.rank columns

    def __repr__(self):
        return f"ModuleMap({self.src} -> {self.dst}, {[list(r) for r in self.matrix]})"

    def column(self, k: int) -> list:
        return [row[k] for row in self.matrix]


def module_map(src: Module, dst: Module, rows) -> ModuleMap:
    """Build a map, coercing entries and reducing each row modulo its order."""
    R = dst.ring
    rows = [list(r) for r in rows] if rows else [[] for _ in range(dst.rank)]
    if len(rows) != dst.rank or any(len(r) != src.rank for r in rows):
        raise ValueError(f"matrix shape does not match {src} -> {dst}")
    out = []
    for r, o in zip(rows, dst.orders):
        out.append(tuple(R.reduce(R(x), o) for x in r))
    return ModuleMap(src, dst, tuple(out))


def well_defined(f: ModuleMap) -> bool:
    R = f.dst.ring
    for k, o in enumerate(f.src.orders):
        if o:
            col = [R.reduce(R.mul(o, x), e) for x, e in zip(f.column(k), f.dst.orders)]
            if any(x != 0 for x in col):
                return False
    return True


def identity_map(M: Module) -> ModuleMap:
    return module_map(M, M, la.identity(M.ring, M.rank))


def zero_map(M: Module, N: Module) -> ModuleMap:
    return ModuleMap(M, N, _freeze(la.zeros(N.ring, N.rank, M.rank)))


def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    if f.dst != g.src:
        raise ValueError(f"cannot compose {g.src} <- {f.dst}")
    R = g.dst.ring
    return module_map(f.src, g.dst, la.matmul(R, g.matrix, f.matrix, f.dst.rank, f.src.rank)
                      if g.dst.rank else [])


def add(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    R = f.dst.ring
    return module_map(f.src, f.dst, [[R.add(a, b) for a, b in zip(r, s)]
                                     for r, s in zip(f.matrix, g.matrix)])


def neg(f: ModuleMap) -> ModuleMap:
    R = f.dst.ring
    return module_map(f.src, f.dst, [[R.neg(a) for a in r] for r in f.matrix])


def scale(c, f: ModuleMap) -> ModuleMap:
    R = f.dst.ring
    return module_map(f.src, f.dst, [[R.mul(R(c), a) for a in r] for r in f.matrix])


def is_zero_map(f: ModuleMap) -> bool:
    return all(x == 0 for r in f.matrix for x in r)


def relation_columns(M: Module) -> List[list]:
    R = M.ring
    cols = []
    for k, o in enumerate(M.orders):
        if o:
            c = [R.zero] * M.rank
            c[k] = R(o)
            cols.append(c)
    return cols


def direct_sum(mods: Sequence[Module], R: Optional[Ring] = None):
    R = R if R is not None else mods[0].ring
    orders: Tuple[int, ...] = ()
    for M in mods:
        orders += M.orders
    S = Module(R, orders)
    inj, proj = [], []
    off = 0
    for M in mods:
        I = la.zeros(R, S.rank, M.rank)
        P = la.zeros(R, M.rank, S.rank)
        for k in range(M.rank):
            I[off + k][k] = R.one
            P[k][off + k] = R.one
        inj.append(module_map(M, S, I))
        proj.append(module_map(S, M, P))
        off += M.rank
    return S, inj, proj


def kernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    A, B = f.src, f.dst
    R = A.ring
    if is_zero_map(f):
        return A, identity_map(A)
    a = A.rank
    # x in R^a with f(x) in the relations of B
    rel_b = relation_columns(B)
    big = la.hstack(R, [f.matrix, la.columns_to_matrix(R, rel_b, B.rank)], B.rank)
    gens = [v[:a] for v in la.kernel(R, big, a + len(rel_b))]
    basis = la.image_basis(R, gens, a)
    Q = la.Quotient(R, basis, relation_columns(A), a)
    K = Module(R, Q.orders)
    inc = module_map(K, A, la.columns_to_matrix(R, Q.gens, a))
    return K, inc


def cokernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    A, B = f.src, f.dst
    R = B.ring
    if is_zero_map(f):
        return B, identity_map(B)
    rel_b = relation_columns(B)
    big = la.hstack(R, [f.matrix, la.columns_to_matrix(R, rel_b, B.rank)], B.rank)
    S = la.smith(R, big, A.rank + len(rel_b))
    keep, orders = [], []
    for k in range(B.rank):
        if k < S.rank:
            if R.is_unit(S.diag[k]):
                continue
            orders.append(S.diag[k])
        else:
            orders.append(0)
        keep.append(k)
    Q = Module(R, tuple(orders))
    p = module_map(B, Q, [S.U[k] for k in keep])
    return Q, p


def solve_columns(A_mat, target_orders, rhs_cols, width, R) -> Optional[List[list]]:
    """Solve A x = b modulo the target orders for each right-hand side column."""
    rel = [[R(o) if i == k else R.zero for i in range(len(target_orders))]
           for k, o in enumerate(target_orders) if o]
    m = len(target_orders)
    big = la.hstack(R, [A_mat, la.columns_to_matrix(R, rel, m)], m)
    S = la.smith(R, big, width + len(rel))
    out = []
    for b in rhs_cols:
        x = la._solve_with(S, b)
        if x is None:
            return None
        out.append(x[:width])
    return out


def lift_mono(i: ModuleMap, g: ModuleMap) -> Optional[ModuleMap]:
    """h with i . h = g (i injective), or None if g does not factor."""
    K, A = i.src, i.dst
    W = g.src
    R = A.ring
    cols = solve_columns([list(r) for r in i.matrix], A.orders,
                         [g.column(k) for k in range(W.rank)], K.rank, R)
    if cols is None:
        return None
    return module_map(W, K, la.columns_to_matrix(R, cols, K.rank))


def factor_epi(p: ModuleMap, g: ModuleMap) -> Optional[ModuleMap]:
    """h with h . p = g (p surjective), or None."""
    B, Q = p.src, p.dst
    V = g.dst
    R = V.ring
    PT = la.transpose(p.matrix, B.rank)  # B.rank x Q.rank
    rows = []
    for r in range(V.rank):
        o = V.orders[r]
        cols = solve_columns(PT, (o,) * B.rank, [list(g.matrix[r])], Q.rank, R)
        if cols is None:
            return None
        rows.append(cols[0])
    h = module_map(Q, V, rows)
    if not well_defined(h):
        return None
    return h


def is_injective(f: ModuleMap) -> bool:
    return kernel(f)[0].is_zero()


def is_surjective(f: ModuleMap) -> bool:
    return cokernel(f)[0].is_zero()


def is_iso(f: ModuleMap) -> bool:
    return is_injective(f) and is_surjective(f)


def inverse(f: ModuleMap) -> ModuleMap:
    h = factor_epi(f, identity_map(f.src))
    if h is None or not is_iso(f):
        raise ValueError("map is not invertible")
    return h


def free_cover(M: Module) -> Tuple[Module, ModuleMap]:
    F = free_module(M.ring, M.rank)
    return F, module_map(F, M, la.identity(M.ring, M.rank))


def invariants(M: Module) -> Tuple[int, Tuple[int, ...]]:
    """(free rank, sorted torsion orders) -- a complete iso invariant."""
    R = M.ring
    if R.is_field:
        return M.rank, ()
    Q = la.Quotient(R, [[R.one if i == k else 0 for i in range(M.rank)] for k in range(M.rank)],
                    relation_columns(M), M.rank)
    return sum(1 for o in Q.orders if o == 0), tuple(sorted(o for o in Q.orders if o))


def random_module(R: Ring, rng: random.Random, max_rank: int = 3, torsion: bool = True) -> Module:
    n = rng.randint(0, max_rank)
    if R.is_field or not torsion:
        return free_module(R, n)
    return Module(R, tuple(rng.choice([0, 0, 2, 3, 4]) for _ in range(n)))


def random_map(M: Module, N: Module, rng: random.Random, bound: int = 2) -> ModuleMap:
    """A random well-defined map M -> N."""
    R = N.ring
    rows = la.zeros(R, N.rank, M.rank)
    for k, o in enumerate(M.orders):
        for r, e in enumerate(N.orders):
            x = R.random_element(rng, bound)
            if o and not R.is_field:
                # the image of an order-o generator must be killed by o
                g = e // _gcd(e, o) if e else 0
                x = x * g if g else 0
            rows[r][k] = x
    return module_map(M, N, rows)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class ModuleCategory(AdditiveCategory):
    """FDVect over a field, f.g. abelian groups over ZZ."""

    def __init__(self, R: Ring):
        self.ring = R
        self.kind = f"FDVect({R.name})" if R.is_field else f"FGMod({R.name})"

    def __repr__(self):
        return self.kind

    def __eq__(self, other):
        return isinstance(other, ModuleCategory) and other.ring == self.ring

    def __hash__(self):
        return hash(self.kind)

    def identity(self, X):
        return identity_map(X)

    def compose(self, g, f):
        return compose(g, f)

    def zero_object(self):
        return zero_module(self.ring)

    def zero_map(self, X, Y):
        return zero_map(X, Y)

    def direct_sum(self, objs):
        return direct_sum(objs, self.ring)

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
        return []

    def check_morphism(self, f):
        out = []
        if not well_defined(f):
            out.append("matrix is not well defined on torsion")
        return out

    def random_object(self, rng, size=3):
        return random_module(self.ring, rng, size)

    def random_map(self, rng, X, Y):
        return random_map(X, Y, rng)
