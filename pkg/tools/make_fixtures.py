"""Regenerate the .tw files under fixtures/ from seeded constructions."""

import os
import random
import sys

from twdiag import fincat as fc
from twdiag import instances as inst
from twdiag import kan
from twdiag import modelstruct as mst
from twdiag import textio as tio
from twdiag import twisted as tw
from twdiag.concrete import chains as ch
from twdiag import linalg as la

NONDIRECT = """\
# an idempotent endomorphism e: no degree function makes the index direct
category idem
object a 0
arrow e : a -> a
compose e . e = e

bundle trivial
fiber a chain ZZ
adjoint e identity

diagram Y
at a complex
deg 0 orders 0
flat e chain
deg 0 [1]

map f : Y -> Y
comp a chain
deg 0 [1]
"""


def write(out_dir, name, inst_, header):
    text = "".join(f"# {h}\n" for h in header) + tio.serialize(inst_)
    assert tio.same_instance(tio.parse(text), inst_)
    with open(os.path.join(out_dir, name), "w") as fh:
        fh.write(text)


def main(out_dir):
    rng = random.Random(2024)

    b = inst.p1_analog(1, 2)
    y = inst.random_diagram(b, rng, 2)
    z = kan.free_diagram(b, "+", y["+"])
    f = kan.free_from(z, y, b.fibers["+"].identity(y["+"]))
    write(out_dir, "p1_analog.tw",
          tio.Instance(b.index, b, diagrams={"Y": y, "Fr": z}, maps={"counit": f}),
          ["finite-monoid analog of the projective line: T(1,2) -> Z/2 <- T(1,2)",
           "Fr is the free diagram on Y(+) at +, counit its map to Y"])

    for name, y, note in [("shift_qiso.tw", inst.shift_qiso(),
                           "Sigma S^0 -> S^1 + D^2: quasi-isomorphic, not isomorphic"),
                          ("times_two.tw", inst.times_two(), "Sigma S^0 --2--> S^1"),
                          ("basechange_z2.tw", inst.basechange_regression(),
                           "Z/2 over ZZ, F_2 over F_2: naive and replaced checks disagree")]:
        write(out_dir, name, tio.instance_of(y), [note])

    sb = inst.spectra_bundle(2)
    sp = inst.spectrum(sb, {k: ch.sphere(la.ZZ, 0) for k in sb.index.objects})
    write(out_dir, "spectrum.tw", tio.instance_of(sp), ["spectrum X_k = Sigma X_(k-1) + S^0"])

    b = inst.random_chain_bundle(random.Random(7), fc.chain(1))
    r2 = random.Random(11)
    y, z = inst.random_chain_diagram(b, r2), inst.random_chain_diagram(b, r2)
    f = inst.random_twisted_map(y, z, r2)
    i, _ = mst.factorize_c(tw.zero_map(tw.initial_diagram(b), y), "cof-then-acyclicfib")
    _, p = mst.factorize_c(f, "cof-then-acyclicfib")
    u, v = mst.random_square(i, p, r2)
    ds = {"Y": y, "Z": z, "A": i.src, "B": i.dst, "X": p.src}
    write(out_dir, "chain_square.tw",
          tio.Instance(b.index, b, diagrams=ds, maps={"i": i, "p": p, "u": u, "v": v, "f": f}),
          ["i a c-cofibration, p an acyclic c-fibration, (u, v) a square between them",
           "f: Y -> Z a random twisted map"])

    b = inst.random_bundle("FinPtdSet", random.Random(5), inst.span_index())
    r3 = random.Random(5)
    y, z = inst.random_diagram(b, r3, 2), inst.random_diagram(b, r3, 2)
    write(out_dir, "ptd_span.tw", tio.Instance(b.index, b, diagrams={"Y": y, "Z": z}),
          ["pointed finite sets over a span"])

    with open(os.path.join(out_dir, "nondirect.tw"), "w") as fh:
        fh.write(NONDIRECT)
    tio.parse(NONDIRECT)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "fixtures"))
