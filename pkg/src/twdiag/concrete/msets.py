"""Finite monoids and finite pointed right M-sets.

Elements of an M-set are 0..n-1 with 0 the base point; ``act[x][m]`` is
x.m.  Finite pointed sets are M-sets over the trivial monoid.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from scipy.cluster.hierarchy import DisjointSet

from .base import ColimitCert, ConcreteCategory, Diagram, LimitCert


@dataclass(frozen=True)
class FiniteMonoid:
    mul: Tuple[Tuple[int, ...], ...]
    unit: int
    name: str = field(default="M", compare=False)

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(len(self.mul))

    def __call__(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def is_trivial(self) -> bool:
        return len(self.mul) == 1

    def __repr__(self):
        return self.name


def monoid_check(M: FiniteMonoid) -> List[str]:
    out = []
    n = M.order
    if not 0 <= M.unit < n:
        return ["unit out of range"]
    for a in range(n):
        if M.mul[a][M.unit] != a or M.mul[M.unit][a] != a:
            out.append(f"unit law fails at {a}")
        for b in range(n):
            if not 0 <= M.mul[a][b] < n:
                out.append(f"product {a}*{b} out of range")
                return out
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if M.mul[M.mul[a][b]][c] != M.mul[a][M.mul[b][c]]:
                    out.append(f"associativity fails at ({a},{b},{c})")
    return out


def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid(((0,),), 0, "1")


def cyclic_group(m: int) -> FiniteMonoid:
    return FiniteMonoid(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)), 0, f"Z/{m}")


def truncated(k: int, m: int) -> FiniteMonoid:
    """<x | x^(k+m) = x^k>: elements x^0..x^(k+m-1), x^e stored as e."""
    n = k + m

    def red(e):
        return e if e < n else k + (e - k) % m

    return FiniteMonoid(tuple(tuple(red(a + b) for b in range(n)) for a in range(n)), 0,
                        f"T({k},{m})")


def transformation_monoid(gens: Sequence[Tuple[int, ...]], name: str = "Tr") -> FiniteMonoid:
    """Closure of the given self-maps of {0..s-1}; a.b means 'a then b'."""
    s = len(gens[0]) if gens else 1
    ident = tuple(range(s))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(g[a[i]] for i in range(s))
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
                    nxt.append(c)
        frontier = nxt
    mul = tuple(tuple(index[tuple(b[a[i]] for i in range(s))] for b in elems) for a in elems)
    return FiniteMonoid(mul, 0, name)


@dataclass(frozen=True)
class MonoidHom:
    src: FiniteMonoid
    dst: FiniteMonoid
    images: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.images[a]

    def is_identity(self) -> bool:
        return self.src == self.dst and self.images == tuple(self.src.elements)


def hom_check(f: MonoidHom) -> List[str]:
    out = []
    M, N = f.src, f.dst
    if f.images[M.unit] != N.unit:
        out.append("unit not preserved")
    for a in M.elements:
        for b in M.elements:
            if f.images[M.mul[a][b]] != N.mul[f.images[a]][f.images[b]]:
                out.append(f"product {a}*{b} not preserved")
                return out
    return out


def monoid_identity(M: FiniteMonoid) -> MonoidHom:
    return MonoidHom(M, M, tuple(M.elements))


def monoid_compose(g: MonoidHom, f: MonoidHom) -> MonoidHom:
    return MonoidHom(f.src, g.dst, tuple(g.images[x] for x in f.images))


def power_hom(M: FiniteMonoid, N: FiniteMonoid, s: int) -> MonoidHom:
    """x^e -> x^(s e) between truncated or cyclic monoids (validate!)."""
    images = []
    for e in M.elements:
        a = N.unit
        for _ in range(s * e):
            a = N.mul[a][1 % N.order] if N.order > 1 else a
        images.append(a)
    return MonoidHom(M, N, tuple(images))


def to_trivial(M: FiniteMonoid) -> MonoidHom:
    return MonoidHom(M, trivial_monoid(), (0,) * M.order)


# ---------------------------------------------------------------- M-sets

@dataclass(frozen=True)
class MSet:
    monoid: FiniteMonoid
    act: Tuple[Tuple[int, ...], ...]   # act[x][m] = x . m

    @property
    def size(self) -> int:
        return len(self.act)

    def __repr__(self):
        return f"MSet({self.monoid}, {self.size})"


def mset_check(X: MSet) -> List[str]:
    M = X.monoid
    out = []
    if X.size < 1:
        return ["no base point"]
    for m in M.elements:
        if X.act[0][m] != 0:
            out.append(f"base point moved by {m}")
    for x in range(X.size):
        if X.act[x][M.unit] != x:
            out.append(f"unit acts nontrivially on {x}")
        for m in M.elements:
            y = X.act[x][m]
            if not 0 <= y < X.size:
                return out + [f"{x}.{m} out of range"]
            for m2 in M.elements:
                if X.act[y][m2] != X.act[x][M.mul[m][m2]]:
                    out.append(f"action not associative at ({x},{m},{m2})")
                    return out
    return out


def point(M: FiniteMonoid) -> MSet:
    return MSet(M, ((0,) * M.order,))


def pointed_set(n: int) -> MSet:
    """A finite pointed set with n elements (base point included)."""
    return MSet(trivial_monoid(), tuple((x,) for x in range(n)))


def free_mset(M: FiniteMonoid, gens: int = 1) -> MSet:
    """Wedge of copies of M_+ ; element 1 + g*|M| + m is (generator g) . m."""
    n = M.order
    act = [tuple([0] * n)]
    for g in range(gens):
        for a in M.elements:
            act.append(tuple(1 + g * n + M.mul[a][b] for b in M.elements))
    return MSet(M, tuple(act))


def quotient_mset(X: MSet, pairs: Sequence[Tuple[int, int]]) -> Tuple[MSet, Tuple[int, ...]]:
    """Smallest invariant equivalence containing the pairs; returns (X/~, class map)."""
    M = X.monoid
    ds = DisjointSet(range(X.size))
    todo = list(pairs)
    while todo:
        a, b = todo.pop()
        if ds.connected(a, b):
            continue
        ds.merge(a, b)
        for m in M.elements:
            todo.append((X.act[a][m], X.act[b][m]))
    return _relabel(X.monoid, X.size, ds, lambda x, m: X.act[x][m])


def _relabel(M: FiniteMonoid, n: int, ds: DisjointSet, act_fn):
    """Number the classes (base point class first) and induce the action."""
    label: Dict[int, int] = {}
    root0 = ds[0]
    label[root0] = 0
    cls = []
    for x in range(n):
        r = ds[x]
        if r not in label:
            label[r] = len(label)
        cls.append(label[r])
    reps = [0] * len(label)
    seen = set()
    for x in range(n):
        if cls[x] not in seen:
            seen.add(cls[x])
            reps[cls[x]] = x
    act = tuple(tuple(cls[act_fn(reps[c], m)] for m in M.elements) for c in range(len(label)))
    return MSet(M, act), tuple(cls)


@dataclass(frozen=True)
class MSetMap:
    src: MSet
    dst: MSet
    images: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]


def mset_map_check(f: MSetMap) -> List[str]:
    out = []
    if len(f.images) != f.src.size:
        return ["wrong number of images"]
    if f.images[0] != 0:
        out.append("base point not preserved")
    for x in range(f.src.size):
        for m in f.src.monoid.elements:
            if f.images[f.src.act[x][m]] != f.dst.act[f.images[x]][m]:
                out.append(f"not equivariant at ({x},{m})")
                return out
    return out


def mset_identity(X: MSet) -> MSetMap:
    return MSetMap(X, X, tuple(range(X.size)))


def mset_compose(g: MSetMap, f: MSetMap) -> MSetMap:
    if f.dst != g.src:
        raise ValueError("M-set maps are not composable")
    return MSetMap(f.src, g.dst, tuple(g.images[x] for x in f.images))


def mset_homs(X: MSet, Y: MSet):
    """All equivariant pointed maps X -> Y, by backtracking with propagation."""
    M = X.monoid
    n = X.size
    assign: List[Optional[int]] = [None] * n

    def propagate(x, y, trail):
        stack = [(x, y)]
        while stack:
            a, b = stack.pop()
            if assign[a] is not None:
                if assign[a] != b:
                    return False
                continue
            assign[a] = b
            trail.append(a)
            for m in M.elements:
                stack.append((X.act[a][m], Y.act[b][m]))
        return True

    def undo(trail):
        for a in trail:
            assign[a] = None

    def rec(start):
        x = start
        while x < n and assign[x] is not None:
            x += 1
        if x == n:
            yield MSetMap(X, Y, tuple(assign))
            return
        for y in range(Y.size):
            trail: List[int] = []
            if propagate(x, y, trail):
                yield from rec(x + 1)
            undo(trail)

    trail0: List[int] = []
    if propagate(0, 0, trail0):
        yield from rec(1)


def is_bijective(f: MSetMap) -> bool:
    return f.src.size == f.dst.size and len(set(f.images)) == f.src.size


def mset_inverse(f: MSetMap) -> MSetMap:
    inv = [0] * f.dst.size
    for x, y in enumerate(f.images):
        inv[y] = x
    return MSetMap(f.dst, f.src, tuple(inv))


# ------------------------------------------------------- (co)limits

def mset_colimit(M: FiniteMonoid, d: Diagram) -> ColimitCert:
    shape = d.shape
    objs = list(shape.objects)
    offs = {}
    total = 1  # global base point 0
    for c in objs:
        offs[c] = total
        total += d.objs[c].size
    ds = DisjointSet(range(total))
    for c in objs:
        ds.merge(0, offs[c])
    for m in shape.non_identities():
        a, b = shape.morphisms[m]
        f = d.mors[m]
        for x in range(d.objs[a].size):
            ds.merge(offs[a] + x, offs[b] + f.images[x])
    owner = [None] * total
    for c in objs:
        for x in range(d.objs[c].size):
            owner[offs[c] + x] = (c, x)

    def act_fn(g, m):
        if g == 0:
            return 0
        c, x = owner[g]
        return offs[c] + d.objs[c].act[x][m]

    Q, cls = _relabel(M, total, ds, act_fn)
    legs = {c: MSetMap(d.objs[c], Q, tuple(cls[offs[c] + x] for x in range(d.objs[c].size)))
            for c in objs}

    def mediate(cocone, target=None):
        T = target if target is not None else (cocone[objs[0]].dst if objs else None)
        if T is None:
            raise ValueError("target needed for an empty cocone")
        images = [0] * Q.size
        for c in objs:
            for x in range(d.objs[c].size):
                images[cls[offs[c] + x]] = cocone[c].images[x]
        h = MSetMap(Q, T, tuple(images))
        for c in objs:
            if mset_compose(h, legs[c]) != cocone[c]:
                raise ValueError("not a cocone")
        return h

    return ColimitCert(Q, legs, mediate)


def mset_limit(M: FiniteMonoid, d: Diagram) -> LimitCert:
    shape = d.shape
    objs = list(shape.objects)
    pos = {c: k for k, c in enumerate(objs)}
    arrows = shape.non_identities()
    checks: Dict[int, List[Tuple[str, int, int]]] = {k: [] for k in range(len(objs))}
    for m in arrows:
        a, b = shape.morphisms[m]
        checks[max(pos[a], pos[b])].append((m, pos[a], pos[b]))
    tuples: List[Tuple[int, ...]] = []

    def rec(k, cur):
        if k == len(objs):
            tuples.append(tuple(cur))
            return
        for x in range(d.objs[objs[k]].size):
            cur.append(x)
            if all(d.mors[m].images[cur[ia]] == cur[ib] for m, ia, ib in checks[k]):
                rec(k + 1, cur)
            cur.pop()

    rec(0, [])
    base = tuple(0 for _ in objs)
    tuples.sort(key=lambda t: (t != base, t))
    index = {t: i for i, t in enumerate(tuples)}
    act = tuple(tuple(index[tuple(d.objs[c].act[t[k]][m] for k, c in enumerate(objs))]
                      for m in M.elements) for t in tuples)
    P = MSet(M, act)
    legs = {c: MSetMap(P, d.objs[c], tuple(t[pos[c]] for t in tuples)) for c in objs}

    def mediate(cone, source=None):
        S = source if source is not None else (cone[objs[0]].src if objs else None)
        if S is None:
            raise ValueError("source needed for an empty cone")
        images = []
        for s in range(S.size):
            t = tuple(cone[c].images[s] for c in objs)
            if t not in index:
                raise ValueError("not a cone")
            images.append(index[t])
        return MSetMap(S, P, tuple(images))

    return LimitCert(P, legs, mediate)


@lru_cache(maxsize=512)
def mset_power(Y: MSet, k: int) -> MSet:
    """Y^{x k} with the flat mixed-radix encoding sum_t y_t |Y|^t."""
    M = Y.monoid
    n = Y.size
    size = n ** k
    act = []
    for code in range(size):
        digits = _digits(code, n, k)
        act.append(tuple(_encode([Y.act[y][m] for y in digits], n) for m in M.elements))
    return MSet(M, tuple(act))


def _digits(code: int, n: int, k: int) -> List[int]:
    out = []
    for _ in range(k):
        out.append(code % n)
        code //= n
    return out


def _encode(digits: Sequence[int], n: int) -> int:
    code = 0
    for y in reversed(digits):
        code = code * n + y
    return code


def mset_power_map(f: MSetMap, k: int) -> MSetMap:
    X, Y = f.src, f.dst
    return MSetMap(mset_power(X, k), mset_power(Y, k),
                   tuple(_encode([f.images[x] for x in _digits(c, X.size, k)], Y.size)
                         for c in range(X.size ** k)))


def wedge(Xs: Sequence[MSet], M: FiniteMonoid) -> Tuple[MSet, List[MSetMap]]:
    """Coproduct: base points glued, other elements listed summand by summand."""
    act = [tuple([0] * M.order)]
    offs = []
    for X in Xs:
        off = len(act) - 1
        offs.append(off)
        for x in range(1, X.size):
            act.append(tuple(0 if X.act[x][m] == 0 else off + X.act[x][m] for m in M.elements))
    W = MSet(M, tuple(act))
    inj = [MSetMap(X, W, tuple(0 if x == 0 else offs[k] + x for x in range(X.size)))
           for k, X in enumerate(Xs)]
    return W, inj


# ------------------------------------------------------- induction

def restrict(f: MonoidHom, Y: MSet) -> MSet:
    if f.is_identity():
        return Y
    return MSet(f.src, tuple(tuple(Y.act[y][f.images[m]] for m in f.src.elements)
                             for y in range(Y.size)))


def restrict_map(f: MonoidHom, g: MSetMap) -> MSetMap:
    if f.is_identity():
        return g
    return MSetMap(restrict(f, g.src), restrict(f, g.dst), g.images)


def induct(f: MonoidHom, X: MSet) -> Tuple[MSet, MSetMap]:
    """X smash_M M' with its unit X -> f^* f_* X; identity when f is."""
    if f.is_identity():
        return X, mset_identity(X)
    M, N = f.src, f.dst
    nN = N.order
    total = X.size * nN

    def code(x, n):
        return x * nN + n

    ds = DisjointSet(range(total))
    for n in N.elements:
        ds.merge(code(0, 0), code(0, n))
    for x in range(X.size):
        for m in M.elements:
            xm = X.act[x][m]
            fm = f.images[m]
            for n in N.elements:
                ds.merge(code(xm, n), code(x, N.mul[fm][n]))
    Q, cls = _relabel(N, total, ds, lambda c, n: code(c // nN, N.mul[c % nN][n]))
    unit = MSetMap(X, restrict(f, Q), tuple(cls[code(x, N.unit)] for x in range(X.size)))
    return Q, unit


def induct_map(f: MonoidHom, g: MSetMap) -> MSetMap:
    if f.is_identity():
        return g
    A, ua = induct(f, g.src)
    B, ub = induct(f, g.dst)
    # [x, n] -> [g x, n]; each class is [x, 1] . n
    return _extend_from_unit(f, A, ua, lambda x: ub.images[g.images[x]], B)


def _extend_from_unit(f: MonoidHom, A: MSet, ua: MSetMap, on_gen, B: MSet) -> MSetMap:
    """The N-map A -> B determined on the images of the unit."""
    images: List[Optional[int]] = [None] * A.size
    images[0] = 0
    N = f.dst
    for x in range(ua.src.size):
        a = ua.images[x]
        b = on_gen(x)
        for n in N.elements:
            images[A.act[a][n]] = B.act[b][n]
    assert all(v is not None for v in images)
    return MSetMap(A, B, tuple(images))


def induct_counit(f: MonoidHom, Y: MSet) -> MSetMap:
    """f_* f^* Y -> Y, [y, n] -> y . n."""
    if f.is_identity():
        return mset_identity(Y)
    RY = restrict(f, Y)
    A, ua = induct(f, RY)
    return _extend_from_unit(f, A, ua, lambda y: y, Y)


# ------------------------------------------------------- random data

def random_mset(M: FiniteMonoid, rng: random.Random, gens: int = 2, relations: int = 2) -> MSet:
    F = free_mset(M, rng.randint(0, gens))
    pairs = [(rng.randrange(F.size), rng.randrange(F.size)) for _ in range(rng.randint(0, relations))]
    Q, _ = quotient_mset(F, pairs)
    return Q


def random_mset_map(X: MSet, Y: MSet, rng: random.Random) -> MSetMap:
    """A uniformly chosen element of hom(X, Y) (enumerates it)."""
    homs = list(mset_homs(X, Y))
    return rng.choice(homs)


def random_monoid(rng: random.Random, max_order: int = 6) -> FiniteMonoid:
    while True:
        kind = rng.random()
        if kind < 0.3:
            M = truncated(rng.randint(0, 2), rng.randint(1, 3))
        elif kind < 0.5:
            M = cyclic_group(rng.randint(1, 4))
        else:
            s = rng.randint(2, 3)
            gens = [tuple(rng.randrange(s) for _ in range(s)) for _ in range(rng.randint(1, 2))]
            M = transformation_monoid(gens)
        if M.order <= max_order:
            return M


class MSetCategory(ConcreteCategory):
    enumerable = True

    def __init__(self, M: FiniteMonoid):
        self.monoid = M
        self.kind = "FinPtdSet" if M.is_trivial() else f"FinMSet({M.name})"

    def __repr__(self):
        return self.kind

    def __eq__(self, other):
        return isinstance(other, MSetCategory) and other.monoid == self.monoid

    def __hash__(self):
        return hash((self.kind, self.monoid.mul))

    def identity(self, X):
        return mset_identity(X)

    def compose(self, g, f):
        return mset_compose(g, f)

    def zero_object(self):
        return point(self.monoid)

    def zero_map(self, X, Y):
        return MSetMap(X, Y, (0,) * X.size)

    def colimit(self, d):
        return self.colimit_at_terminal(d) or mset_colimit(self.monoid, d)

    def limit(self, d):
        return self.limit_at_initial(d) or mset_limit(self.monoid, d)

    def is_iso(self, f):
        return is_bijective(f)

    def inverse(self, f):
        if not is_bijective(f):
            raise ValueError("map is not invertible")
        return mset_inverse(f)

    def homs(self, X, Y):
        return mset_homs(X, Y)

    def check_object(self, X):
        if X.monoid != self.monoid:
            return [f"monoid {X.monoid} is not {self.monoid}"]
        return mset_check(X)

    def check_morphism(self, f):
        return mset_map_check(f)

    def random_object(self, rng, size=2):
        return random_mset(self.monoid, rng, gens=size)

    def random_map(self, rng, X, Y):
        return random_mset_map(X, Y, rng)


def FinPtdSet() -> MSetCategory:
    return MSetCategory(trivial_monoid())
