"""Shared protocol for coefficient categories: diagrams and (co)limit certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..fincat import FinCategory, discrete, initial_object, terminal_object


@dataclass
class Diagram:
    """A functor shape -> category, given by object and morphism tables."""
    shape: FinCategory
    objs: Dict[str, Any]
    mors: Dict[str, Any]


def discrete_diagram(objs: List[Any], names: Optional[List[str]] = None) -> Diagram:
    names = names or [str(k) for k in range(len(objs))]
    shape = discrete(names)
    return Diagram(shape, dict(zip(names, objs)),
                   {shape.identity(n): None for n in names})


@dataclass
class ColimitCert:
    """Colimit object with its cocone and a solver for the universal arrow."""
    apex: Any
    legs: Dict[str, Any]
    mediator: Callable[..., Any] = field(repr=False)

    def mediate(self, cocone: Dict[str, Any], target=None):
        """The unique map out of the apex; ``target`` is needed for empty shapes."""
        return self.mediator(cocone, target)


@dataclass
class LimitCert:
    apex: Any
    legs: Dict[str, Any]
    mediator: Callable[..., Any] = field(repr=False)

    def mediate(self, cone: Dict[str, Any], source=None):
        return self.mediator(cone, source)


class ConcreteCategory:
    """Interface every coefficient category implements.

    Morphisms carry ``src`` and ``dst`` and compare by value.
    """
    kind = "abstract"
    enumerable = False
    additive = False
    model = None

    def identity(self, X):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def compose_all(self, *fs):
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def zero_object(self):
        raise NotImplementedError

    def zero_map(self, X, Y):
        raise NotImplementedError

    def colimit(self, d: Diagram) -> ColimitCert:
        raise NotImplementedError

    def limit(self, d: Diagram) -> LimitCert:
        raise NotImplementedError

    def coproduct(self, objs: List[Any]) -> ColimitCert:
        return self.colimit(discrete_diagram(objs))

    def product(self, objs: List[Any]) -> LimitCert:
        return self.limit(discrete_diagram(objs))

    def is_iso(self, f) -> bool:
        raise NotImplementedError

    def inverse(self, f):
        raise NotImplementedError

    def homs(self, X, Y):
        raise TypeError(f"{self.kind}: hom-sets are not enumerable")

    def check_object(self, X) -> List[str]:
        return []

    def check_morphism(self, f) -> List[str]:
        return []

    def pushout(self, f, g) -> ColimitCert:
        """Pushout of B <-f- A -g-> C; legs keyed 'A', 'B', 'C'."""
        shape = FinCategory(["A", "B", "C"],
                            {"id_A": ("A", "A"), "id_B": ("B", "B"), "id_C": ("C", "C"),
                             "f": ("A", "B"), "g": ("A", "C")},
                            {("id_A", "id_A"): "id_A", ("id_B", "id_B"): "id_B",
                             ("id_C", "id_C"): "id_C", ("f", "id_A"): "f", ("id_B", "f"): "f",
                             ("g", "id_A"): "g", ("id_C", "g"): "g"},
                            {"A": "id_A", "B": "id_B", "C": "id_C"}, name="span")
        d = Diagram(shape, {"A": f.src, "B": f.dst, "C": g.dst},
                    {"id_A": self.identity(f.src), "id_B": self.identity(f.dst),
                     "id_C": self.identity(g.dst), "f": f, "g": g})
        return self.colimit(d)

    def pullback(self, f, g) -> LimitCert:
        """Pullback of B -f-> A <-g- C; legs keyed 'A', 'B', 'C'."""
        shape = FinCategory(["A", "B", "C"],
                            {"id_A": ("A", "A"), "id_B": ("B", "B"), "id_C": ("C", "C"),
                             "f": ("B", "A"), "g": ("C", "A")},
                            {("id_A", "id_A"): "id_A", ("id_B", "id_B"): "id_B",
                             ("id_C", "id_C"): "id_C", ("f", "id_B"): "f", ("id_A", "f"): "f",
                             ("g", "id_C"): "g", ("id_A", "g"): "g"},
                            {"A": "id_A", "B": "id_B", "C": "id_C"}, name="cospan")
        d = Diagram(shape, {"A": f.dst, "B": f.src, "C": g.src},
                    {"id_A": self.identity(f.dst), "id_B": self.identity(f.src),
                     "id_C": self.identity(g.src), "f": f, "g": g})
        return self.limit(d)

    def colimit_at_terminal(self, d: Diagram) -> Optional[ColimitCert]:
        """A shape with a terminal object t has colimit d(t), legs d(a -> t)."""
        t = terminal_object(d.shape)
        if t is None:
            return None
        legs = {a: self.diagram_morphism(d, d.shape.hom(a, t)[0]) for a in d.shape.objects}
        return ColimitCert(d.objs[t], legs, lambda cocone, target=None: cocone[t])

    def limit_at_initial(self, d: Diagram) -> Optional[LimitCert]:
        t = initial_object(d.shape)
        if t is None:
            return None
        legs = {a: self.diagram_morphism(d, d.shape.hom(t, a)[0]) for a in d.shape.objects}
        return LimitCert(d.objs[t], legs, lambda cone, source=None: cone[t])

    def diagram_morphism(self, d: Diagram, m: str):
        """d(m), filling identities that were left implicit."""
        f = d.mors.get(m)
        if f is None and d.shape.is_identity(m):
            return self.identity(d.objs[d.shape.src(m)])
        return f


class AdditiveCategory(ConcreteCategory):
    """(Co)limits from biproducts, kernels and cokernels."""
    additive = True

    def direct_sum(self, objs):
        """(S, injections, projections)."""
        raise NotImplementedError

    def kernel(self, f):
        raise NotImplementedError

    def cokernel(self, f):
        raise NotImplementedError

    def lift_mono(self, i, g):
        raise NotImplementedError

    def factor_epi(self, p, g):
        raise NotImplementedError

    def add(self, f, g):
        raise NotImplementedError

    def neg(self, f):
        raise NotImplementedError

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def sum_maps(self, maps, X, Y):
        out = self.zero_map(X, Y)
        for m in maps:
            out = self.add(out, m)
        return out

    def colimit(self, d: Diagram) -> ColimitCert:
        quick = self.colimit_at_terminal(d)
        if quick is not None:
            return quick
        shape = d.shape
        objs = list(shape.objects)
        S, inj, proj = self.direct_sum([d.objs[c] for c in objs])
        arrows = [m for m in shape.non_identities()]
        T, tinj, tproj = self.direct_sum([d.objs[shape.src(m)] for m in arrows])
        phi = self.zero_map(T, S)
        pos = {c: k for k, c in enumerate(objs)}
        for k, m in enumerate(arrows):
            a, b = shape.morphisms[m]
            term = self.sub(self.compose(inj[pos[b]], d.mors[m]), inj[pos[a]])
            phi = self.add(phi, self.compose(term, tproj[k]))
        Q, p = self.cokernel(phi)
        legs = {c: self.compose(p, inj[pos[c]]) for c in objs}

        def mediate(cocone, target=None):
            tgt = target if target is not None else cocone[objs[0]].dst
            if not objs:
                return self.zero_map(Q, tgt)
            psi = self.sum_maps([self.compose(cocone[c], proj[pos[c]]) for c in objs], S, tgt)
            h = self.factor_epi(p, psi)
            if h is None:
                raise ValueError("not a cocone")
            return h

        return ColimitCert(Q, legs, mediate)

    def limit(self, d: Diagram) -> LimitCert:
        quick = self.limit_at_initial(d)
        if quick is not None:
            return quick
        shape = d.shape
        objs = list(shape.objects)
        P, inj, proj = self.direct_sum([d.objs[c] for c in objs])
        arrows = [m for m in shape.non_identities()]
        T, tinj, tproj = self.direct_sum([d.objs[shape.dst(m)] for m in arrows])
        psi = self.zero_map(P, T)
        pos = {c: k for k, c in enumerate(objs)}
        for k, m in enumerate(arrows):
            a, b = shape.morphisms[m]
            term = self.sub(self.compose(d.mors[m], proj[pos[a]]), proj[pos[b]])
            psi = self.add(psi, self.compose(tinj[k], term))
        K, inc = self.kernel(psi)
        legs = {c: self.compose(proj[pos[c]], inc) for c in objs}

        def mediate(cone, source=None):
            src = source if source is not None else cone[objs[0]].src
            if not objs:
                return self.zero_map(src, K)
            phi = self.sum_maps([self.compose(inj[pos[c]], cone[c]) for c in objs], src, P)
            h = self.lift_mono(inc, phi)
            if h is None:
                raise ValueError("not a cone")
            return h

        return LimitCert(K, legs, mediate)
