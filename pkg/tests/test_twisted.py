import random

import pytest
from hypothesis import given, settings, strategies as st

from twdiag import bundle as bd
from twdiag import fincat as fc
from twdiag import instances as inst
from twdiag import kan
from twdiag import linalg as la
from twdiag import twisted as tw
from twdiag.concrete import chains as ch
from twdiag.concrete import msets as ms
from twdiag.concrete.base import Diagram

seeds = st.integers(0, 10**6)
kinds = st.sampled_from(inst.FIBER_KINDS)


@settings(max_examples=40, deadline=None)
@given(seeds, kinds)
def test_sharp_flat_inverse(seed, kind):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng)
    y = inst.random_diagram(b, rng)
    I = b.index
    for s, (i, j) in I.morphisms.items():
        h = tw.sharp(y, s)
        assert tw.flat_of(b, s, h, y.components[i]) == y.flats[s]
        assert b.sharp(s, b.flat(s, h, y.components[i]), y.components[j]) == h
    assert tw.from_sharps(b, y.components, tw.sharps(y)) == y


def test_trivial_bundle_sharp_is_flat():
    b = bd.trivial_bundle(fc.chain(2), ms.FinPtdSet())
    y = inst.random_diagram(b, random.Random(5))
    assert tw.sharps(y) == y.flats


def test_identity_transpose():
    b = inst.p1_analog()
    y = inst.random_diagram(b, random.Random(2))
    for i in b.index.objects:
        s = b.index.identity(i)
        assert tw.sharp(y, s) == y.flats[s]


def test_transpose_is_hom_bijection():
    b = inst.p1_analog()
    C0 = b.fibers["0"]
    Cp = b.fibers["+"]
    M = Cp.monoid
    for X in (ms.free_mset(M), ms.random_mset(M, random.Random(1))):
        for Y in (ms.free_mset(C0.monoid), ms.point(C0.monoid)):
            flats = list(Cp.homs(X, b.U("alpha", Y)))
            sharps = list(C0.homs(b.F("alpha", X), Y))
            images = {b.sharp("alpha", g, Y).images for g in flats}
            assert len(flats) == len(sharps)
            assert images == {h.images for h in sharps}


@settings(max_examples=20, deadline=None)
@given(seeds, kinds)
def test_single_object_always_valid(seed, kind):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng, fc.terminal())
    y = inst.random_diagram(b, rng)
    assert tw.validate_twisted(y, "flat") == [] == tw.validate_twisted(y, "sharp")


def test_spectrum_valid_both_forms():
    b = inst.spectra_bundle(3)
    R = la.ZZ
    y = inst.spectrum(b, {"0": ch.sphere(R, 0), "2": ch.disc(R, 1)})
    assert tw.validate_twisted(y, "flat") == []
    assert tw.validate_twisted(y, "sharp") == []
    # X_3 = Sigma^3 S^0 + Sigma D^1
    assert y.components["3"].ranks() == [0, 1, 1, 1]


@settings(max_examples=40, deadline=None)
@given(seeds, kinds)
def test_corruption_flagged_identically(seed, kind):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng)
    y = inst.random_diagram(b, rng)
    bad, s = tw.corrupt(y, rng, only_composites=False)
    v_flat, v_sharp = tw.validate_twisted(bad, "flat"), tw.validate_twisted(bad, "sharp")
    assert v_flat == v_sharp
    if s is not None and v_flat:
        assert all(v[0] == "cocycle" for v in v_flat)
        assert any(s in v[1:] or b.index.comp.get((v[1], v[2])) == s for v in v_flat)


@settings(max_examples=30, deadline=None)
@given(seeds, kinds)
def test_map_forms_agree(seed, kind):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng)
    y, z = inst.random_diagram(b, rng), inst.random_diagram(b, rng)
    assert tw.validate_map(tw.identity_map(y)) == []
    assert tw.validate_map(tw.zero_map(y, z)) == [] == tw.validate_map(tw.zero_map(y, z), "sharp")
    f = inst.random_twisted_map(y, z, rng)
    assert tw.validate_map(f, "flat") == tw.validate_map(f, "sharp") == []
    i = rng.choice(b.index.objects)
    C = b.fibers[i]
    others = [C.random_map(rng, y.components[i], z.components[i]) for _ in range(3)]
    for g in others:
        comps = dict(f.components)
        comps[i] = g
        h = tw.TwistedMap(y, z, comps)
        assert tw.validate_map(h, "flat") == tw.validate_map(h, "sharp")


def test_zero_map_between_chain_diagrams():
    rng = random.Random(8)
    b = inst.random_chain_bundle(rng)
    y, z = inst.random_chain_diagram(b, rng), inst.random_chain_diagram(b, rng)
    assert tw.validate_map(tw.zero_map(y, z)) == []


def test_empty_colimit_is_initial():
    b = inst.p1_analog()
    G = tw.DiagramOfDiagrams(fc.empty(), {}, {})
    col = tw.diagram_colimit(G, b)
    assert col.apex == tw.initial_diagram(b)


def test_coproduct_of_free_diagrams():
    b = inst.p1_analog()
    y1 = kan.free_diagram(b, "+", ms.free_mset(b.fibers["+"].monoid))
    y2 = kan.free_diagram(b, "-", ms.free_mset(b.fibers["-"].monoid))
    S = fc.discrete(["a", "c"])
    G = tw.DiagramOfDiagrams(S, {"a": y1, "c": y2}, {})
    col = tw.diagram_colimit(G, b)
    assert tw.validate_twisted(col.apex) == []
    for i in b.index.objects:
        assert col.apex.components[i].size == y1.components[i].size + y2.components[i].size - 1
    assert all(tw.validate_map(leg) == [] for leg in col.legs.values())


@settings(max_examples=25, deadline=None)
@given(seeds, kinds, st.sampled_from(inst.DOD_SHAPES))
def test_evaluation_commutes_with_colimits(seed, kind, shape):
    rng = random.Random(seed)
    b = inst.random_bundle(kind, rng)
    G = inst.random_diagram_of_diagrams(b, rng, shape)
    assert all(tw.comparison_isos(G, b).values())
    assert all(tw.limit_comparison_isos(G, b).values())
    col = tw.diagram_colimit(G, b)
    assert tw.validate_twisted(col.apex) == []


def test_pushout_of_chain_diagrams():
    rng = random.Random(12)
    b = inst.random_chain_bundle(rng)
    G = inst.random_diagram_of_diagrams(b, rng, "span")
    col = tw.diagram_colimit(G, b)
    assert tw.validate_twisted(col.apex) == []
    assert all(tw.comparison_isos(G, b).values())


def test_inverse_image_identity_same():
    b = inst.p1_analog()
    y = inst.random_diagram(b, random.Random(0))
    assert tw.inverse_image_diagram(fc.identity_functor(b.index), y) is y


def test_restriction_and_evaluation():
    b = inst.spectra_bundle(2)
    y = inst.spectrum(b, {"0": ch.sphere(la.ZZ, 0), "1": ch.sphere(la.ZZ, 0)})
    sub = fc.full_subcategory(b.index, ["0", "1"])
    r = tw.restrict(y, sub)
    assert tw.validate_twisted(r) == []
    assert set(r.components) == {"0", "1"}
    for i in sub.objects:
        assert tw.evaluate(r, i) == tw.evaluate(y, i)


def test_constant_evaluation():
    C = ms.FinPtdSet()
    b = bd.trivial_bundle(fc.chain(2), C)
    X = ms.pointed_set(3)
    y = tw.TwistedDiagram(b, {i: X for i in b.index.objects},
                          {s: C.identity(X) for s in b.index.morphisms})
    assert tw.validate_twisted(y) == []
    assert all(tw.evaluate(y, i) == X for i in b.index.objects)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_psi_adjunction_bijection(seed):
    rng = random.Random(seed)
    psi = inst.psi_instance(rng)
    assert bd.validate_imorphism(psi, rng) == []
    y = inst.random_diagram(psi.B, rng, size=1)
    z = inst.random_diagram(psi.A, rng, size=1)
    assert tw.validate_twisted(tw.psi_inverse(psi, y)) == []
    assert tw.validate_twisted(tw.psi_direct(psi, z)) == []
    assert tw.psi_bijection(psi, y, z)["bijective"]


def test_twisted_homs_budget():
    b = inst.p1_analog()
    y = kan.free_diagram(b, "+", ms.free_mset(b.fibers["+"].monoid))
    z = inst.random_diagram(b, random.Random(3), size=2)
    full = list(tw.twisted_homs(y, z))
    capped = list(tw.twisted_homs(y, z, random.Random(1), budget=1))
    assert len(capped) <= 1 and len(full) >= len(capped)
    assert all(tw.validate_map(f) == [] for f in full)


def test_unknown_form_rejected():
    b = inst.p1_analog()
    y = inst.random_diagram(b, random.Random(0))
    with pytest.raises(ValueError):
        tw.validate_twisted(y, "diagonal")
