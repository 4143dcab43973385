"""Acceptance criteria, one test each; every test logs a PASS/FAIL line.

Pinned tolerances: all rates are 100%; instance counts and wall-clock
limits are the constants below.
"""

import itertools
import json
import random
import subprocess
import sys
import time
from pathlib import Path

from twdiag import bundle as bd
from twdiag import fincat as fc
from twdiag import homotopy as ho
from twdiag import instances as inst
from twdiag import kan
from twdiag import linalg as la
from twdiag import modelstruct as mst
from twdiag import twisted as tw
from twdiag.concrete import chains as ch
from twdiag.concrete import msets as ms

ROOT = Path(__file__).resolve().parents[1]

N_BUNDLES, BUNDLE_SECONDS = 200, 60.0
N_SHARP_FLAT = 500
N_DOD = 100
MAX_KAN_ELEMENTS = 64
N_KAN_ENUM, N_KAN_CHAIN = 40, 20
N_MC_BUNDLES, MC_MAX_OBJECTS, MC_MAX_RANK, MC_SECONDS = 20, 5, 12, 300.0
N_RLP = 100
N_HOMINV, N_WEQ_PAIRS = 200, 50


def record(log, tag, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    log.append(line)
    print(line)
    return ok


# 1 -------------------------------------------------------------------------
def test_c1_bundle_validity(acceptance_log):
    rng = random.Random(101)
    t0 = time.perf_counter()
    n = good = 0
    kinds = {}
    for k in range(N_BUNDLES):
        kind = inst.FIBER_KINDS[k % 4]
        b = inst.random_bundle(kind, rng)
        rep = bd.validate_bundle(b, rng, per_fiber=2)
        n += 1
        good += rep.ok
        kinds[kind] = kinds.get(kind, 0) + 1
    dt = time.perf_counter() - t0
    ok = good == n and n >= N_BUNDLES and len(kinds) == 4 and dt < BUNDLE_SECONDS
    assert record(acceptance_log, "C1 bundle validity",
                  ok, f"{good}/{n} valid over {len(kinds)} fiber kinds in {dt:.1f}s (limit {BUNDLE_SECONDS:.0f}s)")


# 2 -------------------------------------------------------------------------
def test_c2_flat_sharp_agreement(acceptance_log):
    rng = random.Random(202)
    n = agree = corrupted = 0
    while n < N_SHARP_FLAT:
        kind = inst.FIBER_KINDS[n % 4]
        b = inst.random_bundle(kind, rng)
        y = inst.random_diagram(b, rng)
        if n % 2:
            y, s = tw.corrupt(y, rng, only_composites=rng.random() < 0.5)
            corrupted += s is not None
        v_flat = tw.validate_twisted(y, "flat")
        v_sharp = tw.validate_twisted(y, "sharp")
        n += 1
        agree += (v_flat == v_sharp)
    ok = agree == n
    assert record(acceptance_log, "C2 flat/sharp validators agree", ok,
                  f"{agree}/{n} diagrams ({corrupted} corrupted)")


# 3 -------------------------------------------------------------------------
def test_c3_pointwise_colimits(acceptance_log):
    rng = random.Random(303)
    n = good = 0
    shapes = set()
    for k in range(N_DOD):
        b = inst.random_bundle(inst.FIBER_KINDS[k % 4], rng)
        G = inst.random_diagram_of_diagrams(b, rng, shape=inst.DOD_SHAPES[k % len(inst.DOD_SHAPES)])
        shapes.add(G.shape.name)
        col = tw.diagram_colimit(G, b)
        lim = tw.diagram_limit(G, b)
        ok = (all(tw.comparison_isos(G, b).values()) and all(tw.limit_comparison_isos(G, b).values())
              and not tw.validate_twisted(col.apex) and not tw.validate_twisted(lim.apex))
        n += 1
        good += ok
    assert record(acceptance_log, "C3 evaluation preserves (co)limits", good == n,
                  f"{good}/{n} diagram-of-diagram instances over {len(shapes)} shapes")


# 4 -------------------------------------------------------------------------
def _kan_setup(b, rng):
    I = b.index
    objs = [o for o in I.objects if rng.random() < 0.6] or [I.objects[0]]
    phi = fc.inclusion(fc.full_subcategory(I, objs), I)
    return phi, bd.inverse_image_bundle(phi, b)


def test_c4_kan_adjunction(acceptance_log):
    rng = random.Random(404)
    enum_n = enum_ok = maps = nontrivial = 0
    while enum_n < N_KAN_ENUM:
        b = inst.random_bundle(["FinPtdSet", "FinMSet"][enum_n % 2], rng)
        phi, pb = _kan_setup(b, rng)
        y = inst.random_diagram(pb, rng, rng.randint(1, 2))
        z = inst.random_diagram(b, rng, rng.randint(1, 2))
        r_l, r_r = kan.lan(phi, y, b), kan.ran(phi, y, b)
        total = inst.total_size(y) + inst.total_size(z) + inst.total_size(r_l.extension) \
            + inst.total_size(r_r.extension)
        if total > MAX_KAN_ELEMENTS:
            continue
        enum_n += 1
        lb, rb = kan.lan_bijection(phi, y, z), kan.ran_bijection(phi, y, z)
        maps += lb["left"] + rb["left"]
        nontrivial += lb["left"] > 1 or rb["left"] > 1
        enum_ok += (lb["bijective"] and rb["bijective"]
                    and not kan.lan_triangles(phi, y, b) and not kan.ran_triangles(phi, z))
    chain_n = chain_ok = 0
    for _ in range(N_KAN_CHAIN):
        b = inst.random_chain_bundle(rng)
        phi, pb = _kan_setup(b, rng)
        y = inst.random_chain_diagram(pb, rng, 1)
        z = inst.random_chain_diagram(b, rng, 1)
        chain_n += 1
        chain_ok += (not kan.lan_triangles(phi, y, b) and not kan.ran_triangles(phi, z)
                     and not kan.lan_solver_check(phi, y, z, rng))
    ok = enum_ok == enum_n and chain_ok == chain_n and nontrivial > 0
    assert record(acceptance_log, "C4 Kan hom bijection and triangles", ok,
                  f"exhaustive {enum_ok}/{enum_n} (<= {MAX_KAN_ELEMENTS} elements, {maps} maps, "
                  f"{nontrivial} with a non-singleton hom set), "
                  f"chain solver {chain_ok}/{chain_n}")


# 5 -------------------------------------------------------------------------
def test_c5_latching_formulas(acceptance_log):
    rng = random.Random(505)
    checks = fails = 0
    for _ in range(10):
        b = inst.random_chain_bundle(rng)
        y = inst.random_chain_diagram(b, rng)
        for i in b.index.objects:
            if b.index.degree[i] == min(b.index.degree.values()):
                checks += 1
                C = b.fibers[i]
                fails += mst.latching(y, i).obj != C.zero_object()
    sb = inst.spectra_bundle(3, la.ZZ)
    C = sb.fibers["0"]
    for _ in range(5):
        X = inst.spectrum(sb, {k: C.random_object(rng, 2) for k in sb.index.objects})
        for n in ("1", "2", "3"):
            checks += 1
            fails += mst.latching(X, n).obj != ch.shift(X[str(int(n) - 1)])
    pb = inst.p1_analog(1, 2)
    for _ in range(5):
        y = inst.random_diagram(pb, rng, 2)
        W, _ = ms.wedge([pb.F("alpha", y["+"]), pb.F("beta", y["-"])], pb.fibers["0"].monoid)
        checks += 1
        fails += mst.latching(y, "0").obj != W
    assert record(acceptance_log, "C5 latching formulas", fails == 0,
                  f"{checks - fails}/{checks} (initial at minimal degree, shift, wedge of inductions)")


# 6 -------------------------------------------------------------------------
def _bounded(rank):
    def gen(b, rng):
        for _ in range(200):
            y = inst.random_chain_diagram(b, rng, 1)
            if inst.total_rank(y) <= rank:
                return y
        return tw.initial_diagram(b)
    return gen


def test_c6_model_axioms(acceptance_log):
    rng = random.Random(606)
    gen = _bounded(MC_MAX_RANK)
    t0 = time.perf_counter()
    n = good = 0
    fact_n = fact_ok = lift_n = lift_ok = 0
    for _ in range(N_MC_BUNDLES):
        I = inst.random_direct_index(rng, 4)
        assert len(I.objects) <= MC_MAX_OBJECTS
        b = inst.random_chain_bundle(rng, I)
        rep = mst.verify_mc(b, rng, maps=2, generate=gen)
        n += 1
        good += rep.ok
        f = inst.random_map_between(b, rng, gen)
        for mode in mst.FACTOR_MODES:
            g, h = mst.factorize_c(f, mode)
            vg, vh = mst.classify_c(g).verdicts(), mst.classify_c(h).verdicts()
            fact_n += 1
            good_mode = (vg["good_acyclic_c_cof"] and vh["c_fib"]) if mode == FACTOR_GOOD \
                else (vg["c_cof"] and vh["acyclic_c_fib"])
            fact_ok += good_mode and tw.compose_maps(h, g) == f
        i, _ = mst.factorize_c(f, "cof-then-acyclicfib")
        _, p = mst.factorize_c(inst.random_map_between(b, rng, gen), "cof-then-acyclicfib")
        i2, p2 = _good_pair(b, rng, gen)
        for (ii, pp, kind) in ((i, p, "cof-vs-acyclicfib"), (i2, p2, "goodacyclic-vs-fib")):
            u, v = mst.random_square(ii, pp, rng)
            l = mst.solve_lift(ii, pp, u, v, kind)
            lift_n += 1
            lift_ok += l is not None and mst.lift_is_valid(l, ii, pp, u, v)
    dt = time.perf_counter() - t0
    ok = good == n and fact_ok == fact_n and lift_ok == lift_n and dt < MC_SECONDS
    assert record(acceptance_log, "C6 model axioms (c-structure)", ok,
                  f"MC1-5 on {good}/{n} bundles, factorizations {fact_ok}/{fact_n}, "
                  f"lifts {lift_ok}/{lift_n} in {dt:.0f}s (limit {MC_SECONDS:.0f}s)")


FACTOR_GOOD = "goodacyclic-then-fib"


def _good_pair(b, rng, gen):
    i, _ = mst.factorize_c(inst.random_map_between(b, rng, gen), FACTOR_GOOD)
    _, p = mst.factorize_c(inst.random_map_between(b, rng, gen), FACTOR_GOOD)
    return i, p


# 7 -------------------------------------------------------------------------
def test_c7_rlp_generators(acceptance_log):
    rng = random.Random(707)
    n = good = fib = afib = 0
    k = 0
    while n < N_RLP:
        b = inst.random_chain_bundle(rng)
        y = inst.random_chain_diagram(b, rng, 1)
        z = inst.random_chain_diagram(b, rng, 1)
        f = inst.random_twisted_map(y, z, rng)
        cands = [f, tw.zero_map(y, inst.random_chain_diagram(b, rng, 2))]
        cands.append(mst.factorize_c(f, ["cof-then-acyclicfib", FACTOR_GOOD][k % 2])[1])
        k += 1
        for p in cands:
            M, N = mst.generators_g(b, mst.generator_top(p.src, p.dst))
            a, c = mst.has_rlp(p, N)[0], mst.has_rlp(p, M)[0]
            pf, paf = mst.pointwise_fibration(p), mst.pointwise_acyclic_fibration(p)
            n += 1
            good += (a == pf) and (c == paf)
            fib += pf
            afib += paf
    ok = good == n and 0 < fib < n and 0 < afib < n
    assert record(acceptance_log, "C7 RLP against generators", ok,
                  f"{good}/{n} maps ({fib} pointwise fibrations, {afib} acyclic)")


# 8 -------------------------------------------------------------------------
def test_c8_homotopy_sheaves(acceptance_log):
    rng = random.Random(808)
    n = agree = nontrivial = true = 0
    pairs = pair_ok = 0
    while n < N_HOMINV or pairs < N_WEQ_PAIRS:
        b = inst.random_chain_bundle(rng)
        y = (inst.sheafy_diagram if n % 2 else inst.random_chain_diagram)(b, rng)
        rep = ho.verify_hominv(y)
        n += 1
        agree += rep.agree
        true += rep.homotopy_sheaf
        nontrivial += not ho.replacement_is_trivial(y) and any(
            R == la.ZZ for R in (C.ring for C in b.fibers.values()))
        if n % 3 == 1:
            for f in inst.weq_partners(y):
                other = f.src if f.dst is y else f.dst
                pairs += 1
                pair_ok += mst.classify_c(f).is_weq and \
                    ho.is_homotopy_sheaf(other).verdict == rep.homotopy_sheaf
    reg = inst.basechange_regression()
    fixture_ok = (ho.is_homotopy_sheaf(reg, naive=True).verdict
                  and not ho.is_homotopy_sheaf(reg).verdict and ho.verify_hominv(reg).agree)
    ok = agree == n and pair_ok == pairs and nontrivial > 0 and fixture_ok
    assert record(acceptance_log, "C8 homotopy sheaf vs strict in Ho", ok,
                  f"{agree}/{n} agree ({true} sheaves, {nontrivial} ZZ with non-identity replacement), "
                  f"weq-invariance {pair_ok}/{pairs}, ZZ->F_2 fixture {'ok' if fixture_ok else 'broken'}")


# 9 -------------------------------------------------------------------------
def test_c9_grothendieck_round_trip(acceptance_log):
    rng = random.Random(909)
    n = good = 0
    for k in range(16):
        b = inst.random_bundle(["FinPtdSet", "FinMSet"][k % 2], rng)
        uni = {}
        for i in b.index.objects:
            objs = [b.fibers[i].zero_object()] + [b.fibers[i].random_object(rng, 1) for _ in range(3)]
            uni[i] = list({repr(X): X for X in objs}.values())
        G = bd.grothendieck(b, uni)
        for y in tw.enumerate_diagrams(b, uni):
            s = G.diagram_to_section(y)
            back = G.section_to_diagram(s)
            n += 1
            good += (G.is_section(s) and back == y
                     and G.diagram_to_section(back).on_mor == s.on_mor)
    assert record(acceptance_log, "C9 Grothendieck round trip", good == n and n > 0,
                  f"{good}/{n} enumerated diagrams")


# 10 ------------------------------------------------------------------------
def test_c10_cli_determinism(acceptance_log):
    runs = []
    for _ in range(2):
        out = subprocess.run([sys.executable, "-m", "twdiag", "axioms", "fixtures/shift_qiso.tw",
                              "--json", "--seed", "17"], cwd=ROOT, capture_output=True, check=False)
        runs.append(out.stdout)
    val = subprocess.run([sys.executable, "-m", "twdiag", "validate", "fixtures/p1_analog.tw",
                          "--json", "--seed", "5"], cwd=ROOT, capture_output=True, check=False)
    val2 = subprocess.run([sys.executable, "-m", "twdiag", "validate", "fixtures/p1_analog.tw",
                           "--json", "--seed", "5"], cwd=ROOT, capture_output=True, check=False)
    ok = runs[0] == runs[1] and val.stdout == val2.stdout and json.loads(runs[0])["seed"] == 17
    assert record(acceptance_log, "C10 --seed determinism", ok,
                  f"axioms {len(runs[0])} bytes identical={runs[0] == runs[1]}, "
                  f"validate identical={val.stdout == val2.stdout}")
