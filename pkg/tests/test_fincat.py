import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from twdiag import fincat as fc


def random_quiver_category(rng, max_objects=5):
    n = rng.randint(1, max_objects)
    objs = [f"x{k}" for k in range(n)]
    edges = {}
    for a in range(n):
        for b in range(a + 1, n):
            for _ in range(rng.choice([0, 0, 1, 1, 2])):
                edges[f"e{len(edges)}"] = (objs[a], objs[b])
    return fc.free_category(objs, edges, name="Q")


def random_poset(rng, max_objects=5):
    n = rng.randint(1, max_objects)
    objs = [f"p{k}" for k in range(n)]
    leq = [(objs[a], objs[b]) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4]
    return fc.poset(objs, leq)


def monotone_functor(rng, I):
    """Functor from a free category on a forward quiver into a chain."""
    n = len(I.objects)
    J = fc.chain(rng.randint(0, 3))
    levels = sorted(rng.randint(0, len(J.objects) - 1) for _ in range(n))
    on_obj = {a: J.objects[levels[k]] for k, a in enumerate(I.objects)}
    on_mor = {f: J.hom(on_obj[a], on_obj[b])[0] for f, (a, b) in I.morphisms.items()}
    return fc.FinFunctor(I, J, on_obj, on_mor)


def bfs_components(c):
    adj = {a: set() for a in c.objects}
    for a, b in c.morphisms.values():
        adj[a].add(b)
        adj[b].add(a)
    seen, out = set(), []
    for a in c.objects:
        if a in seen:
            continue
        comp, queue = [], deque([a])
        seen.add(a)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x] - seen:
                seen.add(y)
                queue.append(y)
        out.append(frozenset(comp))
    return set(out)


seeds = st.integers(0, 10**6)


# validate_category

def test_terminal_valid():
    assert fc.validate_category(fc.terminal()) == []


def test_typing_violation_listed():
    c = fc.poset(["a", "b"], [("a", "b")])
    bad = fc.FinCategory(c.objects, c.morphisms, {**c.comp, ("a<b", "a<b"): "a<b"}, c.identities)
    assert any("typing violation" in v for v in fc.validate_category(bad))


def test_dangling_ids_reported():
    c = fc.FinCategory(["a"], {"id_a": ("a", "a"), "f": ("a", "zz")},
                       {("id_a", "id_a"): "id_a"}, {"a": "id_a"})
    assert any("dangling" in v for v in fc.validate_category(c))


def test_projective_line_index():
    c = fc.projective_line_index()
    assert len(c.objects) == 3 and len(c.morphisms) == 5
    assert fc.validate_category(c) == []


def test_identity_law_violation():
    # 1 . e = 1 breaks the unit law for e
    c = fc.FinCategory(["*"], {"1": ("*", "*"), "e": ("*", "*")},
                       {("1", "1"): "1", ("1", "e"): "1", ("e", "1"): "e", ("e", "e"): "e"},
                       {"*": "1"})
    assert any("identity law" in v for v in fc.validate_category(c))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_builders_are_categories(seed):
    rng = random.Random(seed)
    for c in (random_quiver_category(rng), random_poset(rng), fc.angle(rng.randint(0, 2)),
              fc.opposite(random_quiver_category(rng))):
        assert fc.validate_category(c) == []


# degree functions

def test_angle_direct():
    r = fc.classify_degree(fc.angle(2))
    assert r.direct and not r.inverse


def test_discrete_both():
    r = fc.classify_degree(fc.discrete(["a", "b"]), {"a": 3, "b": -1})
    assert r.direct and r.inverse and len(r.components) == 2


def test_chain_and_opposite():
    c = fc.chain(2)
    assert fc.classify_degree(c).direct
    r = fc.classify_degree(fc.opposite(c))
    assert r.inverse and not r.direct


def test_degree_violation():
    r = fc.classify_degree(fc.chain(1), {"0": 0, "1": 0})
    assert not r.direct and not r.inverse and r.violations


def test_missing_degree_raises():
    with pytest.raises(ValueError):
        fc.classify_degree(fc.chain(1), {"0": 0})


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_direct_iff_opposite_inverse(seed):
    rng = random.Random(seed)
    c = random_quiver_category(rng)
    d = {a: rng.randint(0, 3) for a in c.objects}
    assert fc.classify_degree(c, d).direct == fc.classify_degree(fc.opposite(c), d).inverse


# comma categories

def test_comma_terminal():
    c = fc.terminal()
    cm = fc.comma_over(fc.identity_functor(c), "*")
    assert len(cm.category.objects) == 1 and len(cm.category.morphisms) == 1


def test_comma_arrow():
    c = fc.poset(["a", "b"], [("a", "b")])
    cm = fc.comma_over(fc.identity_functor(c), "b")
    assert len(cm.category.objects) == 2
    assert len(cm.category.non_identities()) == 1
    assert len(fc.strict_over(c, "b").category.objects) == 1


def test_strict_under_examples():
    assert fc.strict_under(fc.terminal(), "*").category.objects == ()
    c = fc.poset(["a", "b"], [("a", "b")])
    assert list(fc.strict_under(c, "a").pairs.values()) == [("b", "a<b")]
    assert fc.strict_under(fc.discrete(["a", "b", "c"]), "b").category.objects == ()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_comma_counts_bruteforce(seed):
    rng = random.Random(seed)
    I = random_quiver_category(rng)
    phi = monotone_functor(rng, I)
    J = phi.target
    for j in J.objects:
        cm = fc.comma_over(phi, j)
        assert fc.validate_category(cm.category) == []
        assert fc.validate_functor(cm.proj) == []
        want = sum(len(J.hom(phi.obj(i), j)) for i in I.objects)
        assert len(cm.category.objects) == want
        # morphisms: alpha with tau . phi(alpha) = sigma, counted directly
        nm = sum(1 for (i, s) in cm.pairs.values() for (i2, t) in cm.pairs.values()
                 for a in I.hom(i, i2) if J.compose(t, phi.mor(a)) == s)
        assert len(cm.category.morphisms) == nm
        under = fc.comma_under(phi, j)
        assert fc.validate_category(under.category) == []
        assert len(under.category.objects) == sum(len(J.hom(j, phi.obj(i))) for i in I.objects)
    for i in I.objects:
        s = fc.strict_over(I, i)
        assert len(s.category.objects) == sum(len(I.hom(k, i)) for k in I.objects) - 1


# finality

def test_identity_final():
    assert fc.is_final(fc.identity_functor(fc.angle(1))) == (True, None)


def test_empty_inclusion_not_final():
    c = fc.terminal()
    ok, w = fc.is_final(fc.FinFunctor(fc.empty(), c, {}, {}))
    assert not ok and w == "*"


def test_projection_finality_condition():
    I = fc.projective_line_index()
    proj = fc.strict_over(I, "0").proj
    assert fc.finality_condition(proj) == (True, None)


def test_finality_condition_fails_on_collapse():
    I = fc.chain(1)
    t = fc.terminal()
    phi = fc.FinFunctor(I, t, {"0": "*", "1": "*"}, {f: "id_*" for f in I.morphisms})
    ok, w = fc.finality_condition(phi)
    assert not ok and w == "0<1"


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_is_final_matches_bruteforce(seed):
    rng = random.Random(seed)
    I = random_quiver_category(rng)
    phi = monotone_functor(rng, I)
    ok, w = fc.is_final(phi)
    assert ok == fc.is_final_bruteforce(phi)
    assert (w is None) == ok


# connected components

@pytest.mark.parametrize("c,n", [
    (fc.discrete(["a", "b", "c"]), 3),
    (fc.projective_line_index(), 1),
    (fc.disjoint_union([fc.projective_line_index(), fc.terminal()]), 2),
])
def test_component_counts(c, n):
    assert len(fc.connected_components(c)) == n


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_components_match_bfs(seed):
    c = random_poset(random.Random(seed))
    assert {frozenset(x) for x in fc.connected_components(c)} == bfs_components(c)
