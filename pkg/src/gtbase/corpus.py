"""Built-in example algebras with closed-form structure constants.

Each constructor assembles a TriangularAlgebra directly from index
arithmetic; the test suite regenerates the same tables through independent
models (2x2 matrices over a polynomial ring, the polynomial representation
of the rank-2 nilHecke algebra) so that the two code paths check each other.

The two-vertex algebra ``e1`` is the canonical nontrivial regression case:
two weights 0 < 1, infinite-dimensional Hom pieces, a nontrivial reciprocity
pair, and small enough to verify by hand.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .algcore import (BasisElement, Element, TriangularAlgebra, WeightPoset,
                      H_KIND, X_KIND, Y_KIND, triple_id)
from .qseries import QQ


def make_ground(field=QQ) -> TriangularAlgebra:
    """The ground field as an algebra: one object, basis {1}."""
    poset = WeightPoset(["0"])
    one = triple_id("pt", "one", "pt")
    return TriangularAlgebra(
        field, ["pt"], ["pt"], poset, {"pt": "0"},
        [BasisElement("one", H_KIND, "pt", "pt", 0)],
        cutoff=0,
        table={(one, one): {one: field.one}},
        units={"pt": {one: field.one}})


def make_matrix(n: int, field=QQ, cutoff: int = 0) -> TriangularAlgebra:
    """The n x n matrix algebra in degree zero, basis the matrix units."""
    if n < 1:
        raise ValueError("n >= 1 required")
    poset = WeightPoset(["0"])
    elems = []
    for i in range(n):
        for j in range(n):
            elems.append(BasisElement(f"E{i}_{j}", H_KIND, "u", "u", 0))

    def tid(i, j):
        return triple_id("u", f"E{i}_{j}", "u")

    table: Dict[Tuple[str, str], Element] = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        table[(tid(i, j), tid(k, l))] = {tid(i, l): field.one}
    unit = {tid(i, i): field.one for i in range(n)}
    return TriangularAlgebra(field, ["u"], ["u"], poset, {"u": "0"},
                             elems, cutoff, table, {"u": unit})


def make_poly(D: int, field=QQ) -> TriangularAlgebra:
    """The polynomial algebra k[x] with deg x = 2, up to the cutoff."""
    if D < 0:
        raise ValueError("D >= 0 required")
    poset = WeightPoset(["0"])
    amax = D // 2
    elems = [BasisElement(f"x{a}", H_KIND, "s", "s", 2 * a)
             for a in range(amax + 1)]

    def tid(a):
        return triple_id("s", f"x{a}", "s")

    table: Dict[Tuple[str, str], Element] = {}
    for a in range(amax + 1):
        for b in range(amax + 1):
            if 2 * (a + b) <= D:
                table[(tid(a), tid(b))] = {tid(a + b): field.one}
    return TriangularAlgebra(field, ["s"], ["s"], poset, {"s": "0"},
                             elems, D, table, {"s": {tid(0): field.one}})


def make_E1(D: int, field=QQ) -> TriangularAlgebra:
    """The two-vertex example: weights 0 < 1, one arrow each way.

    Generators: x of degree 2 on the vertex s0, an X element xi (degree 1,
    from s0 to s1) and a Y element eta (degree 1, from s1 to s0), subject to
    eta * xi = x.  The full basis is x^a, xi x^a, x^a eta, xi x^a eta, 1_{s1}.
    """
    if D < 2:
        raise ValueError("D >= 2 required")
    poset = WeightPoset(["0", "1"], [("0", "1")])
    amax = D // 2
    elems = [BasisElement(f"x{a}", H_KIND, "s0", "s0", 2 * a)
             for a in range(amax + 1)]
    elems.append(BasisElement("i1", H_KIND, "s1", "s1", 0))
    elems.append(BasisElement("xi", X_KIND, "s1", "s0", 1))
    elems.append(BasisElement("eta", Y_KIND, "s0", "s1", 1))

    def P(a):  # x^a
        return triple_id("s0", f"x{a}", "s0")

    def XI(a):  # xi x^a
        return triple_id("xi", f"x{a}", "s0")

    def ET(a):  # x^a eta
        return triple_id("s0", f"x{a}", "eta")

    def B(a):  # xi x^a eta
        return triple_id("xi", f"x{a}", "eta")

    ONE1 = triple_id("s1", "i1", "s1")
    one = field.one
    table: Dict[Tuple[str, str], Element] = {}

    def put(a_id, a_deg, b_id, b_deg, target):
        if a_deg + b_deg <= D:
            table[(a_id, b_id)] = {target: one}

    for a in range(amax + 1):
        da = 2 * a
        for b in range(amax + 1):
            db = 2 * b
            put(P(a), da, P(b), db, P(a + b))
            put(P(a), da, ET(b), db + 1, ET(a + b))
            put(XI(a), da + 1, P(b), db, XI(a + b))
            put(XI(a), da + 1, ET(b), db + 1, B(a + b))
            put(ET(a), da + 1, XI(b), db + 1, P(a + b + 1))
            put(ET(a), da + 1, B(b), db + 2, ET(a + b + 1))
            put(B(a), da + 2, XI(b), db + 1, XI(a + b + 1))
            put(B(a), da + 2, B(b), db + 2, B(a + b + 1))
        put(ET(a), da + 1, ONE1, 0, ET(a))
        put(B(a), da + 2, ONE1, 0, B(a))
        put(ONE1, 0, XI(a), da + 1, XI(a))
        put(ONE1, 0, B(a), da + 2, B(a))
    table[(ONE1, ONE1)] = {ONE1: one}
    units = {"s0": {P(0): one}, "s1": {ONE1: one}}
    return TriangularAlgebra(field, ["s0", "s1"], ["s0", "s1"], poset,
                             {"s0": "0", "s1": "1"}, elems, D, table, units)


# -- rank-2 nilHecke ---------------------------------------------------------

def _divided_difference_monomial(p: int, q: int) -> Dict[Tuple[int, int], int]:
    """Coefficients of (x1^p x2^q - x1^q x2^p) / (x1 - x2)."""
    out: Dict[Tuple[int, int], int] = {}
    if p > q:
        for k in range(p - q):
            out[(q + k, p - 1 - k)] = 1
    elif p < q:
        for k in range(q - p):
            out[(p + k, q - 1 - k)] = -1
    return out


def nh2_product(a: int, b: int, e: int, a2: int, b2: int,
                e2: int) -> Dict[Tuple[int, int, int], int]:
    """Product of x1^a x2^b d^e and x1^a2 x2^b2 d^e2 in normal form.

    Uses d*f = d(f) + s(f)*d (twisted Leibniz for the divided difference d)
    and d^2 = 0; integer coefficients.
    """
    out: Dict[Tuple[int, int, int], int] = {}
    if e == 0:
        out[(a + a2, b + b2, e2)] = 1
        return out
    if e2 == 0:
        out[(a + b2, b + a2, 1)] = 1
    for (i, j), c in _divided_difference_monomial(a2, b2).items():
        key = (a + i, b + j, e2)
        out[key] = out.get(key, 0) + c
        if out[key] == 0:
            del out[key]
    return out


def make_nilhecke2(D: int, field=QQ) -> TriangularAlgebra:
    """The rank-2 nilHecke algebra: basis x1^a x2^b d^e, deg x = 2, deg d = -2.

    Presented with a single object and special idempotent and a singleton
    weight poset; the whole basis sits in H(u,u).
    """
    if D < 0:
        raise ValueError("D >= 0 required")
    poset = WeightPoset(["0"])
    monos = []
    for e in (0, 1):
        s = 0
        while 2 * s - 2 * e <= D:
            for a in range(s + 1):
                monos.append((a, s - a, e))
            s += 1
    monos = sorted(m for m in monos if 2 * (m[0] + m[1]) - 2 * m[2] <= D)
    elems = [BasisElement(f"m{a}_{b}_{e}", H_KIND, "u", "u",
                          2 * (a + b) - 2 * e) for a, b, e in monos]

    def tid(m):
        return triple_id("u", f"m{m[0]}_{m[1]}_{m[2]}", "u")

    deg = {m: 2 * (m[0] + m[1]) - 2 * m[2] for m in monos}
    monoset = set(monos)
    table: Dict[Tuple[str, str], Element] = {}
    for m1 in monos:
        for m2 in monos:
            if deg[m1] + deg[m2] > D:
                continue
            prod = nh2_product(*m1, *m2)
            entry: Element = {}
            for m, c in prod.items():
                if m not in monoset:
                    raise AssertionError(
                        f"nilHecke product left the window: {m}")
                entry[tid(m)] = field(c)
            if entry:
                table[(tid(m1), tid(m2))] = entry
    return TriangularAlgebra(field, ["u"], ["u"], poset, {"u": "0"},
                             elems, D, table,
                             {"u": {tid((0, 0, 0)): field.one}})


CORPUS_NAMES = ("ground", "matrix2", "matrix3", "poly", "e1", "nilhecke2")


def corpus_algebra(name: str, D: int = 8, field=QQ) -> TriangularAlgebra:
    """Dispatch a corpus algebra by name ('ground', 'matrix2', 'matrix3',
    'poly', 'e1', 'nilhecke2')."""
    if name == "ground":
        return make_ground(field)
    if name == "matrix2":
        return make_matrix(2, field)
    if name == "matrix3":
        return make_matrix(3, field)
    if name == "poly":
        return make_poly(D, field)
    if name == "e1":
        return make_E1(D, field)
    if name == "nilhecke2":
        return make_nilhecke2(D, field)
    raise ValueError(f"unknown corpus algebra {name!r}")


# -- fixed mutants of e1 for the axiom gate ----------------------------------

MUTANT_NAMES = ("deleted-y", "wrong-degree", "flipped-poset",
                "broken-product", "extra-special-x", "dead-unit")

MUTANT_EXPECTED_AXIOM = {
    "deleted-y": "basis-span",
    "wrong-degree": "degree-additivity",
    "flipped-poset": "direction",
    "broken-product": "associativity",
    "extra-special-x": "special-idempotents",
    "dead-unit": "local-units",
}


def mutant_gta(name: str, D: int = 8) -> str:
    """The .gta text of a fixed broken variant of the e1 algebra."""
    from .gtafile import export_gta
    base = export_gta(make_E1(D))
    lines = base.splitlines()
    if name == "deleted-y":
        lines = [l for l in lines if not l.startswith("eta Y ")]
    elif name == "wrong-degree":
        lines = [l.replace("eta Y s0 s1 1", "eta Y s0 s1 2") for l in lines]
    elif name == "flipped-poset":
        lines = [l.replace("0 < 1", "1 < 0") for l in lines]
    elif name == "broken-product":
        lines = [l if not l.startswith("s0:x0:eta * xi:x0:s0 =")
                 else "s0:x0:eta * xi:x0:s0 = 0" for l in lines]
    elif name == "extra-special-x":
        out = []
        for l in lines:
            out.append(l)
            if l.startswith("xi X "):
                out.append("bogus X s0 s0 2")
        lines = out
    elif name == "dead-unit":
        lines = [l if not l.startswith("s1:i1:s1 * xi:x0:s0 =")
                 else "s1:i1:s1 * xi:x0:s0 = 0" for l in lines]
    else:
        raise ValueError(f"unknown mutant {name!r}")
    return "\n".join(lines) + "\n"
