#!/usr/bin/env python3
"""Regenerate the bundled knot data files from the KnotInfo database.

Writes crates/core/data/{knots.pd,braids.txt,knots.csv} and the test fixture
crates/core/tests/data/knotinfo_{homfly,kauffman}.txt.  The homfly column of knots.csv is
left empty; the table computes it from the PD codes when loaded.

Naming: the unstarred knot has negative signature.  KnotInfo diagrams with
positive signature are mirrored.  Signature-zero chiral knots keep the
KnotInfo diagram as the unstarred form.

Requires: pip install database_knotinfo sympy
"""
import json
import os
import sys

import sympy
from database_knotinfo import link_list

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
DATA = os.path.join(ROOT, "crates", "core", "data")
FIXT = os.path.join(ROOT, "crates", "core", "tests", "data")

NAMES = (
    ["3_1", "4_1", "5_1", "5_2"]
    + ["6_%d" % i for i in range(1, 4)]
    + ["7_%d" % i for i in range(1, 8)]
    + ["8_%d" % i for i in range(1, 22)]
)
ALIASES = ["10_129", "10_132"]
# HOMFLY cannot separate 8_17 from its mirror; it is treated as achiral.
FORCE_ACHIRAL = {"8_17"}

a, v, z = sympy.symbols("a v z")


def mirror_pd(pd):
    # reflecting the projection plane reverses the cyclic order at each crossing
    return [[x[0], x[3], x[2], x[1]] for x in pd]


def pd_str(pd):
    return "".join("(%s)" % ",".join(str(e) for e in x) for x in pd)


def homfly_in_a(expr_v, mirrored):
    # KnotInfo: v^-1 P(L+) - v P(L-) = z P(L0).  Ours: a P(L+) - a^-1 P(L-) = z P(L0).
    e = sympy.sympify(expr_v.replace("^", "**"), locals={"v": v, "z": z})
    e = sympy.expand(e.subs(v, 1 / a))
    if mirrored:
        e = sympy.expand(e.subs(a, -1 / a))
    poly = sympy.Poly(sympy.expand(e * a**40), a, z)
    terms = []
    for (ea, ez), c in poly.terms():
        terms.append((ea - 40, ez, int(c)))
    terms.sort()
    return " ".join("%d:%d:%d" % t for t in terms)


def kauffman_terms(expr_a, mirrored):
    # mirror image: a -> a^-1
    e = sympy.sympify(expr_a.replace("^", "**"), locals={"a": a, "z": z})
    if mirrored:
        e = e.subs(a, 1 / a)
    poly = sympy.Poly(sympy.expand(e * a**40), a, z)
    terms = sorted((ea - 40, ez, int(c)) for (ea, ez), c in poly.terms())
    return " ".join("%d:%d:%d" % t for t in terms)


def main():
    db = {k["name"]: k for k in link_list()}
    os.makedirs(DATA, exist_ok=True)
    os.makedirs(FIXT, exist_ok=True)
    pd_lines, braid_lines, csv_lines, fix_lines, kauf_lines = [], [], [], [], []
    csv_lines.append("name,crossing_number,chiral,det,signature,qa,homfly")
    csv_lines.append("0_1,0,false,1,0,true,")
    for name in NAMES + ALIASES:
        k = db[name]
        pd = json.loads(k["pd_notation"])
        braid = json.loads(k["braid_notation"])
        sig = int(k["signature"])
        det = int(k["determinant"])
        qa = k["quasi_alternating"].strip().upper().startswith("Y")
        sym = k["symmetry_type"]
        chiral = "amphicheiral" not in sym and name not in FORCE_ACHIRAL
        flip = sig > 0
        if flip:
            pd = mirror_pd(pd)
            braid = [-g for g in braid]
            sig = -sig
        hom = homfly_in_a(k["homfly_polynomial"], flip)
        hom_m = homfly_in_a(k["homfly_polynomial"], not flip)
        n_strands = max(abs(g) for g in braid) + 1
        cn = int(k["crossing_number"])
        kf = kauffman_terms(k["kauffman_polynomial"], flip)
        kf_m = kauffman_terms(k["kauffman_polynomial"], not flip)
        entries = [(name, pd, braid, sig, hom, kf)]
        if chiral:
            entries.append((name + "*", mirror_pd(pd), [-g for g in braid], -sig, hom_m, kf_m))
        for nm, p, b, s, h, kp in entries:
            kauf_lines.append("%s: %s" % (nm, kp))
            pd_lines.append("%s: %s" % (nm, pd_str(p)))
            braid_lines.append("%s: %d: %s" % (nm, n_strands, " ".join(str(g) for g in b)))
            csv_lines.append(
                "%s,%d,%s,%d,%d,%s," % (nm, cn, "true" if chiral else "false", det, s, "true" if qa else "false")
            )
            fix_lines.append("%s: %s" % (nm, h))
    with open(os.path.join(DATA, "knots.pd"), "w") as f:
        f.write("\n".join(pd_lines) + "\n")
    with open(os.path.join(DATA, "braids.txt"), "w") as f:
        f.write("\n".join(braid_lines) + "\n")
    with open(os.path.join(DATA, "knots.csv"), "w") as f:
        f.write("\n".join(csv_lines) + "\n")
    with open(os.path.join(FIXT, "knotinfo_homfly.txt"), "w") as f:
        f.write("\n".join(fix_lines) + "\n")
    with open(os.path.join(FIXT, "knotinfo_kauffman.txt"), "w") as f:
        f.write("\n".join(kauf_lines) + "\n")
    print("wrote %d knot entries" % len(pd_lines), file=sys.stderr)


if __name__ == "__main__":
    main()
