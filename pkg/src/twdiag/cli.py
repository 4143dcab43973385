"""Command-line front end: ``python -m twdiag <verb> [options] FILE``.

Exit status 0 means the verb succeeded with a true verdict, 1 a false
verdict, 2 an input error.  ``--json`` prints a report with sorted keys
(see docs/json_schema.md); ``--seed`` fixes every random choice.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Dict, List, Optional

from . import fincat as fc
from . import homotopy as ho
from . import kan
from . import modelstruct as mst
from . import textio as tio
from . import twisted as tw
from .bundle import validate_bundle
from .twisted import TwistedDiagram, TwistedMap

FIXTURE_ENV = "TWDIAG_FIXTURE_PATH"
VERBS = ("validate", "kan", "free", "latch", "match", "classify", "factor", "lift",
         "axioms", "sheaf", "hsheaf", "hominv", "groth")


class InputError(Exception):
    pass


def resolve(path: str) -> str:
    """The path itself, else the first hit along $TWDIAG_FIXTURE_PATH."""
    if os.path.isfile(path):
        return path
    for d in filter(None, os.environ.get(FIXTURE_ENV, "").split(os.pathsep)):
        for cand in (os.path.join(d, path), os.path.join(d, os.path.basename(path))):
            if os.path.isfile(cand):
                return cand
    raise InputError(f"{path}: no such file (searched ${FIXTURE_ENV} too)")


# ------------------------------------------------------------ helpers

def _issues(items) -> List[str]:
    return [i if isinstance(i, str) else " ".join(map(str, i)) for i in items]


def _diagram_text(name: str, y: TwistedDiagram) -> List[str]:
    return tio.diagram_lines(name, y)


def _map_text(name: str, f: TwistedMap, src: str, dst: str) -> List[str]:
    return tio.map_lines(name, f, src, dst)


def _object_text(C, X) -> List[str]:
    return tio.object_lines(C, X)


def _pick_diagram(inst: tio.Instance, name: Optional[str]) -> TwistedDiagram:
    try:
        return inst.diagram(name)
    except KeyError:
        raise InputError(f"{inst.path}: no diagram {name!r}" if name else f"{inst.path}: no diagram")


def _pick_map(inst: tio.Instance, name: Optional[str]) -> TwistedMap:
    try:
        return inst.map(name)
    except KeyError:
        raise InputError(f"{inst.path}: no map {name!r}" if name else f"{inst.path}: no map")


def _object(inst: tio.Instance, i: Optional[str]) -> str:
    if i is None:
        raise InputError("--at <object> is required")
    if i not in inst.category.objects:
        raise InputError(f"{inst.path}: unknown object {i!r}")
    return i


def _names(inst: tio.Instance, f: TwistedMap):
    return tio._name_of(inst, f.src), tio._name_of(inst, f.dst)


# --------------------------------------------------------------- verbs

def do_validate(inst, args, rng) -> Dict:
    cat = fc.validate_category(inst.category)
    rep = {"category": cat}
    ok = not cat
    if inst.bundle is not None:
        br = validate_bundle(inst.bundle, rng, per_fiber=args.per_fiber)
        rep["bundle"] = {"violations": br.violations, "notes": br.notes}
        ok = ok and br.ok
    rep["diagrams"] = {}
    for name, y in inst.diagrams.items():
        flat = _issues(tw.validate_twisted(y, "flat"))
        sharp = _issues(tw.validate_twisted(y, "sharp"))
        rep["diagrams"][name] = {"flat": flat, "sharp": sharp}
        ok = ok and not flat and not sharp
    rep["maps"] = {}
    for name, f in inst.maps.items():
        flat = tw.validate_map(f, "flat")
        sharp = tw.validate_map(f, "sharp")
        rep["maps"][name] = {"flat": flat, "sharp": sharp}
        ok = ok and not flat and not sharp
    rep["verdict"] = ok
    return rep


def do_kan(inst, args, rng) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    b = inst.bundle
    if not args.along:
        raise InputError("--along <obj,obj,...> is required")
    objs = args.along.split(",")
    for o in objs:
        _object(inst, o)
    sub = fc.full_subcategory(b.index, objs, name="sub")
    phi = fc.inclusion(sub, b.index)
    y0 = tw.restrict(y, sub)
    side = "right" if args.right else "left"
    if side == "left":
        r = kan.lan(phi, y0, b)
        tri = kan.lan_triangles(phi, y0, b)
    else:
        r = kan.ran(phi, y0, b)
        tri = kan.ran_triangles(phi, y)
    ext = r.extension
    valid = _issues(tw.validate_twisted(ext))
    restr = tw.restrict(ext, sub)
    fixes = restr == y0 or all(b.fibers[i].is_iso((r.unit or r.counit)[i]) for i in objs)
    return {"side": side, "along": objs, "extension": _diagram_text("E", ext),
            "violations": valid, "triangles": tri, "restriction_iso": fixes,
            "verdict": not valid and not tri and fixes}


def do_free(inst, args, rng) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    b = inst.bundle
    i = _object(inst, args.at)
    fr = kan.free_diagram(b, i, y[i])
    valid = _issues(tw.validate_twisted(fr))
    same = kan.free_vs_lan(b, i, y[i])
    rep = {"at": i, "free": _diagram_text("Fr", fr), "violations": valid, "agrees_with_lan": same}
    ok = not valid and same
    if b.is_enumerable():
        bij = kan.free_bijection(fr, y)
        rep["bijection"] = bij
        ok = ok and bij["bijective"]
    rep["verdict"] = ok
    return rep


def do_latch(inst, args, rng, matching=False) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    i = _object(inst, args.at)
    cert = mst.matching(y, i) if matching else mst.latching(y, i)
    C = inst.bundle.fibers[i]
    return {"at": i, "object": _object_text(C, cert.obj),
            "map": tio.morphism_lines(C, cert.map),
            "comma_objects": len(cert.comma.category.objects), "verdict": True}


def do_classify(inst, args, rng) -> Dict:
    f = _pick_map(inst, args.map)
    if args.structure == "c":
        mst.require_direct(inst.category)
        cl = mst.classify_c(f)
    else:
        mst.require_inverse(inst.category)
        cl = mst.classify_f(f)
    v = cl.verdicts()
    rep = {"structure": args.structure, "verdicts": v}
    if args.expect:
        if args.expect not in v:
            raise InputError(f"--expect must be one of {', '.join(sorted(v))}")
        rep["expect"] = args.expect
        rep["verdict"] = v[args.expect]
    else:
        rep["verdict"] = True
    return rep


def do_factor(inst, args, rng) -> Dict:
    f = _pick_map(inst, args.map)
    mst.require_direct(inst.category)
    g, h = mst.factorize_c(f, args.mode)
    composite = tw.compose_maps(h, g) == f
    vg, vh = mst.classify_c(g).verdicts(), mst.classify_c(h).verdicts()
    if args.mode == "goodacyclic-then-fib":
        ok = vg["good_acyclic_c_cof"] and vh["c_fib"]
    else:
        ok = vg["c_cof"] and vh["acyclic_c_fib"]
    src, dst = _names(inst, f)
    lines = (_diagram_text("Mid", g.dst) + _map_text("g", g, src, "Mid")
             + _map_text("h", h, "Mid", dst))
    return {"mode": args.mode, "composite_ok": composite, "g": vg, "h": vh,
            "factorization": lines, "verdict": composite and ok}


def do_lift(inst, args, rng) -> Dict:
    names = args.square.split(",") if args.square else list(inst.maps)[:4]
    if len(names) != 4:
        raise InputError("lift needs four maps i,p,u,v (give --square i,p,u,v)")
    i, p, u, v = (_pick_map(inst, n) for n in names)
    if not mst.square_commutes(i, p, u, v):
        raise InputError(f"{inst.path}: square {','.join(names)} does not commute")
    mst.require_direct(inst.category)
    try:
        l = mst.solve_lift(i, p, u, v, args.kind)
    except mst.VerdictError as e:
        return {"kind": args.kind, "square": names, "error": str(e), "verdict": False}
    if l is None:
        return {"kind": args.kind, "square": names, "lift": None, "verdict": False}
    ok = mst.lift_is_valid(l, i, p, u, v)
    src, dst = tio._name_of(inst, l.src), tio._name_of(inst, l.dst)
    return {"kind": args.kind, "square": names, "lift": _map_text("l", l, src, dst), "verdict": ok}


def do_axioms(inst, args, rng) -> Dict:
    rep = mst.verify_mc(inst.bundle, rng, maps=args.maps, structure=args.structure)
    return {"structure": args.structure, "results": rep.results, "details": rep.details,
            "verdict": rep.ok}


def do_sheaf(inst, args, rng) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    right = bool(args.right_strict)
    rep = ho.is_strict_sheaf(y, right=right)
    return {"form": "right" if right else "left", "per_arrow": rep.per_arrow, "verdict": rep.verdict}


def do_hsheaf(inst, args, rng) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    rep = ho.is_homotopy_sheaf(y, naive=args.naive)
    return {"naive": bool(args.naive), "per_arrow": rep.per_arrow,
            "replacement_trivial": ho.replacement_is_trivial(y), "verdict": rep.verdict}


def do_hominv(inst, args, rng) -> Dict:
    y = _pick_diagram(inst, args.diagram)
    rep = ho.verify_hominv(y)
    return {"homotopy_sheaf": rep.homotopy_sheaf, "strict_in_ho": rep.strict_in_ho,
            "per_arrow": {s: {"homotopy_sheaf": a, "strict_in_ho": c}
                          for s, (a, c) in rep.per_arrow.items()},
            "agree": rep.agree, "verdict": rep.agree}


def do_groth(inst, args, rng) -> Dict:
    from .bundle import grothendieck
    b = inst.bundle
    if not b.is_enumerable():
        raise InputError(f"{inst.path}: groth needs enumerable (monoid-set) fibers")
    uni: Dict[str, list] = {i: [] for i in b.index.objects}
    for y in inst.diagrams.values():
        for i in b.index.objects:
            if y[i] not in uni[i]:
                uni[i].append(y[i])
    for i in b.index.objects:
        for _ in range(args.extra):
            X = b.fibers[i].random_object(rng, 1)
            if X not in uni[i]:
                uni[i].append(X)
        if not uni[i]:
            uni[i].append(b.fibers[i].zero_object())
    G = grothendieck(b, uni)
    n = ok = 0
    for y in tw.enumerate_diagrams(b, uni):
        if n >= args.limit:
            break
        n += 1
        s = G.diagram_to_section(y)
        back = G.section_to_diagram(s)
        ok += G.is_section(s) and back == y and G.diagram_to_section(back).on_mor == s.on_mor
    return {"total_objects": len(G.category.objects), "total_morphisms": len(G.category.morphisms),
            "sections": n, "round_trips": ok, "verdict": ok == n}


HANDLERS = {
    "validate": do_validate, "kan": do_kan, "free": do_free, "latch": do_latch,
    "match": lambda inst, args, rng: do_latch(inst, args, rng, matching=True),
    "classify": do_classify, "factor": do_factor, "lift": do_lift, "axioms": do_axioms,
    "sheaf": do_sheaf, "hsheaf": do_hsheaf, "hominv": do_hominv, "groth": do_groth,
}


# ------------------------------------------------------------- front end

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twdiag", description="Twisted diagrams over finite categories.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--diagram", help="diagram name (default: first)")
    p.add_argument("--map", help="map name (default: first)")
    p.add_argument("--at", help="object of the index")
    side = p.add_mutually_exclusive_group()
    side.add_argument("--left", action="store_true", help="kan: left extension (default)")
    side.add_argument("--right", action="store_true", help="kan: right extension")
    p.add_argument("--along", help="kan: comma-separated objects of a full subcategory")
    p.add_argument("--structure", choices=("c", "f"), default="c")
    p.add_argument("--expect", help="classify: verdict that decides the exit status")
    p.add_argument("--mode", choices=mst.FACTOR_MODES, default="cof-then-acyclicfib")
    p.add_argument("--kind", choices=mst.LIFT_KINDS, default="cof-vs-acyclicfib")
    p.add_argument("--square", help="lift: map names i,p,u,v")
    p.add_argument("--maps", type=int, default=3, help="axioms: maps per check")
    form = p.add_mutually_exclusive_group()
    form.add_argument("--strict", action="store_true", help="sheaf: sharp maps iso (default)")
    form.add_argument("--right-strict", action="store_true", help="sheaf: flat maps iso")
    p.add_argument("--naive", action="store_true", help="hsheaf: skip cofibrant replacement")
    p.add_argument("--per-fiber", type=int, default=3, help="validate: random test objects per fiber")
    p.add_argument("--extra", type=int, default=0, help="groth: random objects added per fiber")
    p.add_argument("--limit", type=int, default=500, help="groth: sections examined")
    return p


def _emit_text(rep: Dict, out) -> None:
    def walk(prefix: str, v):
        if isinstance(v, dict):
            if not v:
                print(f"{prefix}: {{}}", file=out)
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and all(isinstance(x, str) for x in v):
            print(f"{prefix}:", file=out)
            for x in v:
                print(f"  {x}", file=out)
        else:
            print(f"{prefix}: {json.dumps(v)}", file=out)
    walk("", rep)


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    head = {"verb": args.verb, "file": args.file, "seed": args.seed}
    try:
        inst = tio.load(resolve(args.file))
        if inst.bundle is None and args.verb != "validate":
            raise InputError(f"{args.file}: instance has no bundle section")
        rep = HANDLERS[args.verb](inst, args, random.Random(args.seed))
    except (InputError, tio.TwParseError, mst.IndexNotDirect, ho.NotChainFiber, OSError) as e:
        msg = str(e)
        if isinstance(e, mst.IndexNotDirect):
            msg = f"{args.file}: {e}"
        print(f"error: {msg}", file=err)
        if args.json:
            print(json.dumps({**head, "error": msg}, sort_keys=True, indent=2), file=out)
        return 2
    rep = {**head, **rep}
    if args.json:
        print(json.dumps(rep, sort_keys=True, indent=2), file=out)
    else:
        _emit_text(rep, out)
    return 0 if rep["verdict"] else 1


def main() -> None:
    sys.exit(run())
