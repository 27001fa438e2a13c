#!/usr/bin/env python3
"""Derive small quantum multiplication tables for low-degree blowups of the
projective plane and write them as .qht files plus a sample three-region
registry.

Basis: 1, H, E1..Ek, pt with degrees 0, 2, ..., 2, 4; the deformation
variable q tracks the pairing of a curve class with the anticanonical class
(deg_T = 2). Structure constants come from three-point genus-zero counts,
which in this range are all 1 and are supported on the classes enumerated
below (rational classes A with arithmetic genus zero and anticanonical
degree 1..4). The script verifies commutativity, the grading, and full
associativity in exact integer arithmetic before writing anything; it also
freezes one hand-computed product as a spot check.
"""

import itertools
import json
import os
import sys
from fractions import Fraction

OUT_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


class CurveClass:
    """A = d*H - sum(m_i * E_i); exceptional classes are d=0, m_i = -1."""

    def __init__(self, d, m):
        self.d = d
        self.m = tuple(m)

    def canonical_degree(self):
        # (3H - sum E_i) . (dH - sum m_i E_i) = 3d - sum m_i
        return 3 * self.d - sum(self.m)

    def self_intersection(self):
        return self.d * self.d - sum(mi * mi for mi in self.m)

    def arithmetic_genus_zero(self):
        return self.self_intersection() - self.canonical_degree() == -2

    def dot_divisor(self, div):
        """Intersection with a divisor given as (h, e_1..e_k) coefficients."""
        h, es = div
        return self.d * h + sum(self.m[i] * es[i] for i in range(len(es)))

    def as_divisor(self, k):
        return (self.d, tuple(-mi for mi in self.m))

    def __repr__(self):
        return f"{self.d}H-{self.m}"


def contributing_classes(k):
    """Rational classes with anticanonical degree 1..4, bucketed by degree."""
    buckets = {1: [], 2: [], 3: [], 4: []}
    # Exceptional classes.
    for i in range(k):
        m = [0] * k
        m[i] = -1
        a = CurveClass(0, m)
        assert a.arithmetic_genus_zero() and a.canonical_degree() == 1
        buckets[1].append(a)
    # Plane curves of degree 1..3 with base-point multiplicities.
    for d in range(1, 4):
        top = 1 if d == 1 else d - 1
        for m in itertools.product(range(0, top + 1), repeat=k):
            a = CurveClass(d, m)
            cd = a.canonical_degree()
            if 1 <= cd <= 4 and a.arithmetic_genus_zero():
                buckets[cd].append(a)
    return buckets


def basis_labels(k):
    return ["1", "H"] + [f"E{i + 1}" for i in range(k)] + ["pt"]


def divisor_coords(k, label):
    """(h, (e_i)) coordinates of a degree-2 basis class."""
    if label == "H":
        return (1, tuple(0 for _ in range(k)))
    idx = int(label[1:]) - 1
    return (0, tuple(1 if i == idx else 0 for i in range(k)))


def divisor_pairing(k, a, b):
    """Intersection form on degree-2 classes: H.H = 1, Ei.Ej = -delta."""
    ha, ea = a
    hb, eb = b
    return ha * hb - sum(ea[i] * eb[i] for i in range(k))


def zero_poly():
    return {}


def poly_add(p, q_exp, coeff):
    if coeff == 0:
        return
    p[q_exp] = p.get(q_exp, Fraction(0)) + coeff
    if p[q_exp] == 0:
        del p[q_exp]


def element_add(el, label, q_exp, coeff):
    poly_add(el.setdefault(label, zero_poly()), q_exp, coeff)
    if not el[label]:
        del el[label]


def divisor_to_element(k, div, q_exp, scale, el):
    h, es = div
    element_add(el, "H", q_exp, Fraction(h) * scale)
    for i, e in enumerate(es):
        element_add(el, f"E{i + 1}", q_exp, Fraction(e) * scale)


def build_products(k):
    """sc[(la, lb)] = element dict for the product of two basis classes."""
    labels = basis_labels(k)
    divisors = [l for l in labels if l not in ("1", "pt")]
    buckets = contributing_classes(k)
    sc = {}

    def put(la, lb, el):
        sc[(la, lb)] = el
        sc[(lb, la)] = el

    # Unit row.
    for l in labels:
        el = {l: {0: Fraction(1)}}
        put("1", l, el)

    # Divisor x divisor.
    for la, lb in itertools.combinations_with_replacement(divisors, 2):
        da, db = divisor_coords(k, la), divisor_coords(k, lb)
        el = {}
        element_add(el, "pt", 0, Fraction(divisor_pairing(k, da, db)))
        for a in buckets[1]:
            w = Fraction(a.dot_divisor(da) * a.dot_divisor(db))
            if w:
                divisor_to_element(k, a.as_divisor(k), 1, w, el)
        s = Fraction(sum(a.dot_divisor(da) * a.dot_divisor(db) for a in buckets[2]))
        element_add(el, "1", 2, s)
        put(la, lb, el)

    # Divisor x point class.
    for la in divisors:
        da = divisor_coords(k, la)
        el = {}
        for a in buckets[2]:
            w = Fraction(a.dot_divisor(da))
            if w:
                divisor_to_element(k, a.as_divisor(k), 2, w, el)
        element_add(el, "1", 3, Fraction(sum(a.dot_divisor(da) for a in buckets[3])))
        put(la, "pt", el)

    # Point x point.
    el = {}
    for a in buckets[3]:
        divisor_to_element(k, a.as_divisor(k), 3, Fraction(1), el)
    element_add(el, "1", 4, Fraction(len(buckets[4])))
    put("pt", "pt", el)
    return sc


def multiply(sc, x, y):
    """Product of two elements (label -> {exp: coeff})."""
    out = {}
    for la, pa in x.items():
        for lb, pb in y.items():
            prod = sc[(la, lb)]
            for ea, ca in pa.items():
                for eb, cb in pb.items():
                    for lc, pc in prod.items():
                        for ec, cc in pc.items():
                            element_add(out, lc, ea + eb + ec, ca * cb * cc)
    return out


def degrees(k):
    return {l: (0 if l == "1" else 4 if l == "pt" else 2) for l in basis_labels(k)}


def check_table(k, sc):
    labels = basis_labels(k)
    deg = degrees(k)
    # Grading: every coefficient of la*lb on lc sits at exponent
    # (deg a + deg b - deg c) / 2, and exponents are nonnegative.
    for (la, lb), el in sc.items():
        for lc, poly in el.items():
            want = Fraction(deg[la] + deg[lb] - deg[lc], 2)
            for e in poly:
                assert e == want, (la, lb, lc, e, want)
                assert e >= 0
    # Associativity over all triples, exact.
    basis_elements = {l: {l: {0: Fraction(1)}} for l in labels}
    for la, lb, lc in itertools.product(labels, repeat=3):
        lhs = multiply(sc, multiply(sc, basis_elements[la], basis_elements[lb]),
                       basis_elements[lc])
        rhs = multiply(sc, basis_elements[la],
                       multiply(sc, basis_elements[lb], basis_elements[lc]))
        assert lhs == rhs, (la, lb, lc, lhs, rhs)


def spot_check_k3(sc):
    """Frozen hand computation: E1*E1 = -pt + q(2H - E1 - E2 - E3) + q^2."""
    el = sc[("E1", "E1")]
    expect = {
        "pt": {0: Fraction(-1)},
        "H": {1: Fraction(2)},
        "E1": {1: Fraction(-1)},
        "E2": {1: Fraction(-1)},
        "E3": {1: Fraction(-1)},
        "1": {2: Fraction(1)},
    }
    assert el == expect, el


def fmt_scalar(poly):
    """NovikovScalar text: 're,im @ num/den' terms joined by ' + '."""
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly):
        c = poly[e]
        assert c.denominator == 1
        parts.append(f"{c.numerator},0 @ {e}/1")
    return " + ".join(parts)


def write_qht(k, sc, path):
    labels = basis_labels(k)
    deg = degrees(k)
    index = {l: i for i, l in enumerate(labels)}
    lines = ["# quantum multiplication table"]
    lines.append(f"name dp{k}")
    lines.append("n 2")
    lines.append("lambda0 1")
    lines.append("deg_T 2")
    lines.append(f"basis {len(labels)}")
    for l in labels:
        lines.append(f"{l} {deg[l]}")
    lines.append("unit 0")
    # c1 = 3H - E1 - ... - Ek at exponent zero.
    c1 = {"H": {0: Fraction(3)}}
    for i in range(k):
        c1[f"E{i + 1}"] = {0: Fraction(-1)}
    lines.append("c1 : " + " ; ".join(fmt_scalar(c1.get(l, {})) for l in labels))
    rows = []
    for i, la in enumerate(labels):
        for j in range(i, len(labels)):
            lb = labels[j]
            el = sc[(la, lb)]
            for lc in labels:
                if lc in el and el[lc]:
                    rows.append(f"{i} {j} -> {index[lc]} : {fmt_scalar(el[lc])}")
    lines.append(f"constants {len(rows)}")
    lines.extend(rows)
    lines.append("end")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(rows)} structure constants)")


def write_registry(path):
    """Three disjoint sampled regions with ingested-citation evidence."""
    import math

    def circle(cx, cy, r, count):
        return [[cx + r * math.cos(2 * math.pi * i / count),
                 cy + r * math.sin(2 * math.pi * i / count)]
                for i in range(count)]

    entries = []
    centers = [(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)]
    for i, (cx, cy) in enumerate(centers, start=1):
        entries.append({
            "label": f"e{i}",
            "region": {"name": f"L{i}", "points": circle(cx, cy, 0.25, 12)},
            "evidence": [{
                "kind": "citation",
                "citation": ("ingested: the three field factors of the "
                             "degree-six surface carry pairwise-disjoint "
                             f"superheavy Lagrangians; region L{i} samples "
                             "factor {}'s Lagrangian".format(i)),
            }],
        })
    registry = {"kind": "superheavy_registry", "space": "dp3",
                "entries": entries}
    with open(path, "w") as f:
        json.dump(registry, f, indent=2)
        f.write("\n")
    print(f"wrote {path}")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    for k in (2, 3, 4):
        sc = build_products(k)
        check_table(k, sc)
        if k == 3:
            spot_check_k3(sc)
        write_qht(k, sc, os.path.join(OUT_DIR, f"dp{k}.qht"))
    write_registry(os.path.join(OUT_DIR, "dp3_registry.json"))
    print("all tables associative; spot check passed")


if __name__ == "__main__":
    sys.exit(main())
