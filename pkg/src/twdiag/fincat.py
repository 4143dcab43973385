"""Finite categories given by full hom and composition tables."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from scipy.cluster.hierarchy import DisjointSet


class FinCategory:
    """A finite category.

    ``morphisms`` maps id -> (src, dst); ``comp`` maps (g, f) -> g . f for
    every composable pair; ``identities`` maps object -> identity id.
    ``degree`` optionally assigns an integer to each object.
    """

    def __init__(self, objects: Sequence[str], morphisms: Mapping[str, Tuple[str, str]],
                 comp: Mapping[Tuple[str, str], str], identities: Mapping[str, str],
                 degree: Optional[Mapping[str, int]] = None, name: str = ""):
        self.objects: Tuple[str, ...] = tuple(objects)
        self.morphisms: Dict[str, Tuple[str, str]] = dict(morphisms)
        self.comp: Dict[Tuple[str, str], str] = dict(comp)
        self.identities: Dict[str, str] = dict(identities)
        self.degree: Optional[Dict[str, int]] = dict(degree) if degree is not None else None
        self.name = name
        self._hom: Dict[Tuple[str, str], List[str]] = {}
        for f, (a, b) in self.morphisms.items():
            self._hom.setdefault((a, b), []).append(f)
        self._id_set = set(self.identities.values())

    def __repr__(self):
        return f"FinCategory({self.name or '?'}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def hom(self, a: str, b: str) -> List[str]:
        return self._hom.get((a, b), [])

    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def dst(self, f: str) -> str:
        return self.morphisms[f][1]

    def compose(self, g: str, f: str) -> str:
        """g . f (first f, then g)."""
        return self.comp[(g, f)]

    def compose_path(self, *fs: str) -> str:
        """compose_path(h, g, f) = h . g . f."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def identity(self, a: str) -> str:
        return self.identities[a]

    def is_identity(self, f: str) -> bool:
        return f in self._id_set

    def out_of(self, a: str) -> List[str]:
        return [f for f, (s, _) in self.morphisms.items() if s == a]

    def into(self, b: str) -> List[str]:
        return [f for f, (_, t) in self.morphisms.items() if t == b]

    def non_identities(self) -> List[str]:
        return [f for f in self.morphisms if f not in self._id_set]

    def with_degree(self, degree: Mapping[str, int]) -> "FinCategory":
        return FinCategory(self.objects, self.morphisms, self.comp, self.identities, degree, self.name)

    def signature(self):
        """Hashable description used for equality of tables."""
        return (self.objects, tuple(sorted(self.morphisms.items())),
                tuple(sorted(self.comp.items())), tuple(sorted(self.identities.items())))


def validate_category(c: FinCategory) -> List[str]:
    """All violated typing, identity and associativity instances."""
    report: List[str] = []
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        report.append("duplicate object ids")
    for f, st in c.morphisms.items():
        if not (isinstance(st, tuple) and len(st) == 2):
            report.append(f"morphism {f}: malformed endpoints")
            continue
        for x in st:
            if x not in objs:
                report.append(f"morphism {f}: dangling object {x}")
    for a in c.objects:
        if a not in c.identities:
            report.append(f"object {a}: no identity")
            continue
        e = c.identities[a]
        if c.morphisms.get(e) != (a, a):
            report.append(f"identity {e} of {a} is not an endomorphism of {a}")
    for a in c.identities:
        if a not in objs:
            report.append(f"identity declared for dangling object {a}")
    good = {f for f, st in c.morphisms.items() if isinstance(st, tuple) and len(st) == 2
            and st[0] in objs and st[1] in objs}
    for (g, f), h in c.comp.items():
        if g not in c.morphisms or f not in c.morphisms:
            report.append(f"comp {g} . {f}: dangling morphism id")
            continue
        if h not in c.morphisms:
            report.append(f"comp {g} . {f} = {h}: dangling result id")
            continue
        if c.morphisms[f][1] != c.morphisms[g][0]:
            report.append(f"comp {g} . {f}: typing violation (dst {f} != src {g})")
            continue
        if c.morphisms[h] != (c.morphisms[f][0], c.morphisms[g][1]):
            report.append(f"comp {g} . {f} = {h}: wrong endpoints")
    for f in good:
        for g in good:
            if c.morphisms[f][1] == c.morphisms[g][0] and (g, f) not in c.comp:
                report.append(f"comp {g} . {f}: missing")
    if report:
        return report
    for f in c.morphisms:
        a, b = c.morphisms[f]
        if c.comp[(c.identities[b], f)] != f or c.comp[(f, c.identities[a])] != f:
            report.append(f"identity law fails at {f}")
    for f in c.morphisms:
        for g in c.out_of(c.dst(f)):
            gf = c.comp[(g, f)]
            for h in c.out_of(c.dst(g)):
                if c.comp[(h, gf)] != c.comp[(c.comp[(h, g)], f)]:
                    report.append(f"associativity fails at ({h}, {g}, {f})")
    return report


@dataclass
class FinFunctor:
    source: FinCategory
    target: FinCategory
    on_obj: Dict[str, str]
    on_mor: Dict[str, str]

    def __call__(self, x: str) -> str:
        return self.on_mor[x] if x in self.on_mor else self.on_obj[x]

    def obj(self, a: str) -> str:
        return self.on_obj[a]

    def mor(self, f: str) -> str:
        return self.on_mor[f]


def validate_functor(phi: FinFunctor) -> List[str]:
    report = []
    I, J = phi.source, phi.target
    for a in I.objects:
        if phi.on_obj.get(a) not in J.objects:
            report.append(f"object {a} not mapped into target")
    for f in I.morphisms:
        if phi.on_mor.get(f) not in J.morphisms:
            report.append(f"morphism {f} not mapped into target")
    if report:
        return report
    for a in I.objects:
        if phi.on_mor[I.identity(a)] != J.identity(phi.on_obj[a]):
            report.append(f"identity of {a} not preserved")
    for f, (a, b) in I.morphisms.items():
        if J.morphisms[phi.on_mor[f]] != (phi.on_obj[a], phi.on_obj[b]):
            report.append(f"endpoints of {f} not preserved")
    for (g, f), h in I.comp.items():
        if J.compose(phi.on_mor[g], phi.on_mor[f]) != phi.on_mor[h]:
            report.append(f"composition {g} . {f} not preserved")
    return report


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {a: a for a in c.objects}, {f: f for f in c.morphisms})


def compose_functors(psi: FinFunctor, phi: FinFunctor) -> FinFunctor:
    """psi . phi"""
    return FinFunctor(phi.source, psi.target,
                      {a: psi.on_obj[b] for a, b in phi.on_obj.items()},
                      {f: psi.on_mor[g] for f, g in phi.on_mor.items()})


def inclusion(sub: FinCategory, c: FinCategory) -> FinFunctor:
    return FinFunctor(sub, c, {a: a for a in sub.objects}, {f: f for f in sub.morphisms})


def object_inclusion(c: FinCategory, i: str) -> FinFunctor:
    """The functor {i} -> c from the one-morphism category."""
    t = FinCategory([i], {c.identity(i): (i, i)}, {(c.identity(i),) * 2: c.identity(i)},
                    {i: c.identity(i)}, name=f"{{{i}}}")
    return inclusion(t, c)


# ------------------------------------------------------------- builders

def terminal() -> FinCategory:
    return FinCategory(["*"], {"id_*": ("*", "*")}, {("id_*", "id_*"): "id_*"}, {"*": "id_*"},
                       degree={"*": 0}, name="terminal")


def empty() -> FinCategory:
    return FinCategory([], {}, {}, {}, degree={}, name="empty")


def discrete(objects: Sequence[str], name: str = "discrete") -> FinCategory:
    ids = {a: f"id_{a}" for a in objects}
    return FinCategory(objects, {e: (a, a) for a, e in ids.items()},
                       {(e, e): e for e in ids.values()}, ids,
                       degree={a: 0 for a in objects}, name=name)


def poset(objects: Sequence[str], leq: Iterable[Tuple[str, str]], name: str = "poset",
          arrow_names: Optional[Mapping[Tuple[str, str], str]] = None) -> FinCategory:
    """Poset category from generating relations a <= b (transitively closed)."""
    objects = list(objects)
    rel = {(a, a) for a in objects} | set(leq)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    for (a, b) in rel:
        if a != b and (b, a) in rel:
            raise ValueError(f"relation is not antisymmetric at {a}, {b}")
    arrow_names = dict(arrow_names or {})

    def nm(a, b):
        if a == b:
            return f"id_{a}"
        return arrow_names.get((a, b), f"{a}<{b}")

    order = {a: k for k, a in enumerate(objects)}
    pairs = sorted(rel, key=lambda p: (order[p[0]], order[p[1]]))
    morphisms = {nm(a, b): (a, b) for a, b in pairs}
    comp = {}
    for (a, b) in pairs:
        for (c, d) in pairs:
            if b == c:
                comp[(nm(c, d), nm(a, b))] = nm(a, d)
    return FinCategory(objects, morphisms, comp, {a: nm(a, a) for a in objects}, name=name)


def chain(n: int) -> FinCategory:
    """0 -> 1 -> ... -> n with degree d(k) = k."""
    objs = [str(k) for k in range(n + 1)]
    c = poset(objs, [(objs[k], objs[k + 1]) for k in range(n)], name=f"chain{n}")
    return c.with_degree({a: int(a) for a in objs})


def angle(n: int) -> FinCategory:
    """Non-empty subsets of {0..n} under inclusion, degree = cardinality."""
    subsets = []
    for r in range(1, n + 2):
        subsets.extend(combinations(range(n + 1), r))
    name = {s: "".join(map(str, s)) for s in subsets}
    leq = [(name[s], name[t]) for s in subsets for t in subsets
           if s != t and set(s) <= set(t) and len(t) == len(s) + 1]
    c = poset([name[s] for s in subsets], leq, name=f"angle{n}")
    return c.with_degree({name[s]: len(s) for s in subsets})


def projective_line_index() -> FinCategory:
    """+ --alpha--> 0 <--beta-- -, degree 0 on the ends and 1 in the middle."""
    c = poset(["+", "-", "0"], [("+", "0"), ("-", "0")], name="P1",
              arrow_names={("+", "0"): "alpha", ("-", "0"): "beta"})
    return c.with_degree({"+": 0, "-": 0, "0": 1})


def free_category(objects: Sequence[str], edges: Mapping[str, Tuple[str, str]],
                  name: str = "free") -> FinCategory:
    """Path category of an acyclic quiver; paths are named 'e3.e2.e1'."""
    objects = list(objects)
    paths: Dict[str, Tuple[str, str]] = {f"id_{a}": (a, a) for a in objects}
    seq: Dict[str, Tuple[str, ...]] = {f"id_{a}": () for a in objects}
    frontier = [((e,), s, t) for e, (s, t) in edges.items()]
    guard = 0
    while frontier:
        guard += 1
        if guard > 10000:
            raise ValueError("quiver has a cycle or too many paths")
        nxt = []
        for p, s, t in frontier:
            key = ".".join(reversed(p))
            paths[key] = (s, t)
            seq[key] = p
            for e, (s2, t2) in edges.items():
                if s2 == t:
                    nxt.append((p + (e,), s, t2))
        frontier = nxt
    by_seq = {v: k for k, v in seq.items()}
    comp = {}
    for f, (a, b) in paths.items():
        for g, (c, d) in paths.items():
            if b == c:
                h = seq[f] + seq[g]
                comp[(g, f)] = f"id_{a}" if not h else by_seq[h]
    return FinCategory(objects, paths, comp, {a: f"id_{a}" for a in objects}, name=name)


def disjoint_union(cats: Sequence[FinCategory], name: str = "union") -> FinCategory:
    objects: List[str] = []
    morphisms: Dict[str, Tuple[str, str]] = {}
    comp: Dict[Tuple[str, str], str] = {}
    ids: Dict[str, str] = {}
    degree: Optional[Dict[str, int]] = {}
    for c in cats:
        clash = set(objects) & set(c.objects) or set(morphisms) & set(c.morphisms)
        if clash:
            raise ValueError(f"id collision: {sorted(clash)}")
        objects += c.objects
        morphisms.update(c.morphisms)
        comp.update(c.comp)
        ids.update(c.identities)
        if degree is not None and c.degree is not None:
            degree.update(c.degree)
        else:
            degree = None
    return FinCategory(objects, morphisms, comp, ids, degree, name)


def opposite(c: FinCategory) -> FinCategory:
    return FinCategory(c.objects, {f: (b, a) for f, (a, b) in c.morphisms.items()},
                       {(f, g): h for (g, f), h in c.comp.items()}, c.identities,
                       c.degree, name=f"{c.name}^op")


def full_subcategory(c: FinCategory, objects: Iterable[str], name: str = "") -> FinCategory:
    keep = [a for a in c.objects if a in set(objects)]
    ks = set(keep)
    mors = {f: st for f, st in c.morphisms.items() if st[0] in ks and st[1] in ks}
    comp = {k: h for k, h in c.comp.items() if k[0] in mors and k[1] in mors}
    deg = {a: c.degree[a] for a in keep} if c.degree is not None else None
    return FinCategory(keep, mors, comp, {a: c.identities[a] for a in keep}, deg, name or c.name)


# ----------------------------------------------------- degree functions

@dataclass
class DegreeReport:
    direct: bool
    inverse: bool
    components: List[Tuple[List[str], int, int]]  # objects, min degree, max degree
    violations: List[str]


def classify_degree(c: FinCategory, d: Optional[Mapping[str, int]] = None) -> DegreeReport:
    d = c.degree if d is None else d
    if d is None:
        raise ValueError("no degree function")
    missing = [a for a in c.objects if a not in d]
    if missing:
        raise ValueError(f"degree undefined on {missing}")
    direct = inverse = True
    violations = []
    for f in c.non_identities():
        a, b = c.morphisms[f]
        if not d[a] < d[b]:
            direct = False
        if not d[a] > d[b]:
            inverse = False
        if d[a] == d[b]:
            violations.append(f"{f}: {a} -> {b} keeps degree {d[a]}")
    comps = [(comp, min(d[a] for a in comp), max(d[a] for a in comp))
             for comp in connected_components(c)]
    return DegreeReport(direct, inverse, comps, violations)


def is_direct(c: FinCategory) -> bool:
    return c.degree is not None and classify_degree(c).direct


def is_inverse(c: FinCategory) -> bool:
    return c.degree is not None and classify_degree(c).inverse


def connected_components(c: FinCategory) -> List[List[str]]:
    ds = DisjointSet(c.objects)
    for a, b in c.morphisms.values():
        ds.merge(a, b)
    order = {a: k for k, a in enumerate(c.objects)}
    comps = [sorted(s, key=order.get) for s in ds.subsets()]
    return sorted(comps, key=lambda s: order[s[0]])


# ----------------------------------------------------- comma categories

@dataclass
class Comma:
    """A comma category together with its projection to the source.

    ``objects`` holds (i, sigma) pairs keyed by string ids; ``proj`` is
    the projection functor to I.
    """
    category: FinCategory
    pairs: Dict[str, Tuple[str, str]]
    proj: FinFunctor


def _pair_id(i: str, sigma: str) -> str:
    return f"({i},{sigma})"


def _mor_id(alpha: str, src: str, dst: str) -> str:
    return f"[{alpha}:{src}->{dst}]"


def comma_over(phi: FinFunctor, j: str, strict: bool = False) -> Comma:
    """Objects (i, sigma: phi(i) -> j); morphisms alpha with tau . phi(alpha) = sigma.

    With ``strict`` the identity of j is excluded (needs phi(i) = j only
    through sigma = id_j).
    """
    I, J = phi.source, phi.target
    pairs: Dict[str, Tuple[str, str]] = {}
    for i in I.objects:
        for s in J.hom(phi.obj(i), j):
            if strict and s == J.identity(j):
                continue
            pairs[_pair_id(i, s)] = (i, s)
    morphisms: Dict[str, Tuple[str, str]] = {}
    under: Dict[str, str] = {}
    for p, (i, s) in pairs.items():
        for q, (i2, t) in pairs.items():
            for a in I.hom(i, i2):
                if J.compose(t, phi.mor(a)) == s:
                    m = _mor_id(a, p, q)
                    morphisms[m] = (p, q)
                    under[m] = a
    ids = {p: _mor_id(I.identity(pairs[p][0]), p, p) for p in pairs}
    comp = {}
    for f, (p, q) in morphisms.items():
        for g, (q2, r) in morphisms.items():
            if q == q2:
                comp[(g, f)] = _mor_id(I.compose(under[g], under[f]), p, r)
    deg = None
    if I.degree is not None:
        deg = {p: I.degree[i] for p, (i, _) in pairs.items()}
    cat = FinCategory(list(pairs), morphisms, comp, ids, deg,
                      name=f"{phi.source.name}{'//' if strict else '/'}{j}")
    proj = FinFunctor(cat, I, {p: i for p, (i, _) in pairs.items()}, under)
    return Comma(cat, pairs, proj)


def strict_over(c: FinCategory, i: str) -> Comma:
    """I//i: arrows sigma: j -> i with sigma != id_i."""
    return comma_over(identity_functor(c), i, strict=True)


def comma_under(phi: FinFunctor, j: str, strict: bool = False) -> Comma:
    """Objects (i, sigma: j -> phi(i)); morphisms alpha with phi(alpha) . sigma = tau."""
    I, J = phi.source, phi.target
    pairs: Dict[str, Tuple[str, str]] = {}
    for i in I.objects:
        for s in J.hom(j, phi.obj(i)):
            if strict and s == J.identity(j):
                continue
            pairs[_pair_id(i, s)] = (i, s)
    morphisms: Dict[str, Tuple[str, str]] = {}
    under: Dict[str, str] = {}
    for p, (i, s) in pairs.items():
        for q, (i2, t) in pairs.items():
            for a in I.hom(i, i2):
                if J.compose(phi.mor(a), s) == t:
                    m = _mor_id(a, p, q)
                    morphisms[m] = (p, q)
                    under[m] = a
    ids = {p: _mor_id(I.identity(pairs[p][0]), p, p) for p in pairs}
    comp = {}
    for f, (p, q) in morphisms.items():
        for g, (q2, r) in morphisms.items():
            if q == q2:
                comp[(g, f)] = _mor_id(I.compose(under[g], under[f]), p, r)
    deg = None
    if I.degree is not None:
        deg = {p: I.degree[i] for p, (i, _) in pairs.items()}
    sep = "\\\\" if strict else "\\"
    cat = FinCategory(list(pairs), morphisms, comp, ids, deg, name=f"{j}{sep}{phi.source.name}")
    proj = FinFunctor(cat, I, {p: i for p, (i, _) in pairs.items()}, under)
    return Comma(cat, pairs, proj)


def strict_under(c: FinCategory, i: str) -> Comma:
    """i//I: arrows sigma: i -> j with sigma != id_i."""
    return comma_under(identity_functor(c), i, strict=True)


# --------------------------------------------------------------- finality

def _under_components(f: FinFunctor, a: str) -> List[List[str]]:
    """Connected components of the category A|f (objects (x, A -> f(x)))."""
    return connected_components(comma_under(f, a).category)


def terminal_object(c: FinCategory) -> Optional[str]:
    for t in c.objects:
        if all(len(c.hom(a, t)) == 1 for a in c.objects):
            return t
    return None


def initial_object(c: FinCategory) -> Optional[str]:
    for t in c.objects:
        if all(len(c.hom(t, a)) == 1 for a in c.objects):
            return t
    return None


def is_final(f: FinFunctor) -> Tuple[bool, Optional[str]]:
    """(True, None) if every A|f is non-empty and connected, else (False, A)."""
    for a in f.target.objects:
        if len(_under_components(f, a)) != 1:
            return False, a
    return True, None


def is_final_bruteforce(f: FinFunctor) -> bool:
    """Independent check: BFS over zig-zags in the raw under-category data."""
    I, J = f.source, f.target
    for a in J.objects:
        objs = [(x, s) for x in I.objects for s in J.hom(a, f.obj(x))]
        if not objs:
            return False
        adj: Dict[Tuple[str, str], List[Tuple[str, str]]] = {o: [] for o in objs}
        for (x, s) in objs:
            for (y, t) in objs:
                if any(J.compose(f.mor(m), s) == t for m in I.hom(x, y)):
                    adj[(x, s)].append((y, t))
                    adj[(y, t)].append((x, s))
        seen = {objs[0]}
        queue = deque([objs[0]])
        while queue:
            o = queue.popleft()
            for n in adj[o]:
                if n not in seen:
                    seen.add(n)
                    queue.append(n)
        if len(seen) != len(objs):
            return False
    return True


def strict_comma_functor(phi: FinFunctor, i: str) -> FinFunctor:
    """phi//i: I//i -> J//phi(i), (j, s) |-> (phi(j), phi(s))."""
    src = strict_over(phi.source, i)
    dst = strict_over(phi.target, phi.obj(i))
    rev = {v: k for k, v in dst.pairs.items()}
    dcat = dst.category
    on_obj = {}
    for p, (j, s) in src.pairs.items():
        key = (phi.obj(j), phi.mor(s))
        if key not in rev:
            raise ValueError(f"phi sends {s} to an identity")
        on_obj[p] = rev[key]
    on_mor = {}
    for m, (p, q) in src.category.morphisms.items():
        a = phi.mor(src.proj.mor(m))
        on_mor[m] = _mor_id(a, on_obj[p], on_obj[q])
        if on_mor[m] not in dcat.morphisms:
            raise ValueError(f"{m} has no image in {dcat.name}")
    return FinFunctor(src.category, dcat, on_obj, on_mor)


def finality_condition(phi: FinFunctor) -> Tuple[bool, Optional[str]]:
    """phi is injective at identities and every phi//i is final; else a witness."""
    I = phi.source
    for f in I.non_identities():
        if phi.target.is_identity(phi.mor(f)):
            return False, f
    for i in I.objects:
        ok, _ = is_final(strict_comma_functor(phi, i))
        if not ok:
            return False, i
    return True, None
