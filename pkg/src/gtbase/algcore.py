"""Locally unital graded algebras presented by a graded triangular basis.

The data of a presentation: a set of objects with orthogonal idempotents 1_i,
a subset of special objects s with weights dot(s) in a lower finite poset,
homogeneous families X(i,s), H(s,t), Y(t,j), and structure constants for the
products of the basis elements x*h*y, all materialized up to a degree cutoff.
The basis element for a composable triple (x, h, y) is the honest product
x h y in the algebra; the idempotent 1_s serves as the unique member of
X(s,s) and Y(s,s) and is referenced by the object id itself.

Because 1_s need not belong to H(s,s), each object carries an explicit
expansion of its idempotent in the triple basis (the unit table); all
locally-unital bookkeeping reduces to these combinations.

Everything is exact and immutable after construction; verification checks are
certified only up to the cutoff, and the report says so.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

X_KIND = "X"
H_KIND = "H"
Y_KIND = "Y"

_KINDS = (X_KIND, H_KIND, Y_KIND)


class AlgebraError(Exception):
    pass


class CutoffExceeded(AlgebraError):
    pass


class UnknownProduct(AlgebraError):
    pass


class NotUpperSet(AlgebraError):
    pass


class NotLowerSet(AlgebraError):
    pass


class EmptyFiber(AlgebraError):
    pass


class BadPresentation(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# weight posets
# ---------------------------------------------------------------------------

class WeightPoset:
    """A finite poset of weight labels given by cover pairs.

    Weight labels are opaque strings; the order is the transitive closure of
    the covers.  Lower finiteness is automatic since the materialized label
    set is finite.
    """

    def __init__(self, labels: Iterable[str],
                 covers: Iterable[Tuple[str, str]] = ()):
        self.labels = sorted(set(labels))
        self._index = {l: k for k, l in enumerate(self.labels)}
        below: Dict[str, Set[str]] = {l: set() for l in self.labels}
        for lo, hi in covers:
            if lo not in below or hi not in below:
                raise BadPresentation(f"cover {lo} < {hi} uses unknown labels")
            below[hi].add(lo)
        # transitive closure
        changed = True
        while changed:
            changed = False
            for hi in self.labels:
                extra = set()
                for mid in below[hi]:
                    extra |= below[mid]
                if not extra <= below[hi]:
                    below[hi] |= extra
                    changed = True
        for l in self.labels:
            if l in below[l]:
                raise BadPresentation(f"poset has a cycle through {l}")
        self._below = below

    def leq(self, a: str, b: str) -> bool:
        return a == b or a in self._below[b]

    def lt(self, a: str, b: str) -> bool:
        return a in self._below[b]

    def lower_set(self, lam: str) -> List[str]:
        return sorted(self._below[lam] | {lam})

    def upper_set(self, lam: str) -> List[str]:
        return sorted(m for m in self.labels if self.leq(lam, m))

    def is_lower_set(self, subset: Iterable[str]) -> bool:
        sub = set(subset)
        return all(set(self._below[l]) <= sub for l in sub)

    def is_upper_set(self, subset: Iterable[str]) -> bool:
        sub = set(subset)
        return all(m in sub for l in sub for m in self.labels
                   if self.lt(l, m))

    def restricted(self, subset: Iterable[str]) -> "WeightPoset":
        sub = set(subset)
        pairs = [(a, b) for b in sub for a in self._below[b] if a in sub]
        return WeightPoset(sub, pairs)

    def minimal_in(self, subset: Iterable[str]) -> List[str]:
        sub = set(subset)
        return sorted(l for l in sub
                      if not any(self.lt(m, l) for m in sub))

    def linear_extension_desc(self, subset: Iterable[str]) -> List[str]:
        """Order so that smaller weights come later (ties broken lexically)."""
        rest = set(subset)
        out = []
        while rest:
            maximal = sorted(l for l in rest
                             if not any(self.lt(l, m) for m in rest))
            out.append(maximal[0])
            rest.remove(maximal[0])
        return out


# ---------------------------------------------------------------------------
# basis data
# ---------------------------------------------------------------------------

class BasisElement:
    """A declared member of one of the families X(i,s), H(s,t), Y(t,j)."""

    __slots__ = ("id", "kind", "row", "col", "degree")

    def __init__(self, eid: str, kind: str, row: str, col: str, degree: int):
        if kind not in _KINDS:
            raise BadPresentation(f"bad kind {kind!r} for {eid}")
        if ":" in eid:
            raise BadPresentation(f"basis id {eid!r} must not contain ':'")
        self.id = eid
        self.kind = kind
        self.row = row
        self.col = col
        self.degree = degree

    def __repr__(self):
        return (f"{self.id}[{self.kind} {self.row}<-{self.col} "
                f"deg {self.degree}]")


class Triple:
    """A full basis element x h y, identified by 'x:h:y'.

    x and y components may be object ids, standing for the implicit
    idempotents in X(s,s) and Y(s,s).
    """

    __slots__ = ("id", "x", "h", "y", "row", "col", "degree", "weight")

    def __init__(self, x: str, h: str, y: str, row: str, col: str,
                 degree: int, weight: str):
        self.id = f"{x}:{h}:{y}"
        self.x = x
        self.h = h
        self.y = y
        self.row = row
        self.col = col
        self.degree = degree
        self.weight = weight

    def __repr__(self):
        return self.id


def triple_id(x: str, h: str, y: str) -> str:
    return f"{x}:{h}:{y}"


# Elements of the algebra are finitely supported maps triple id -> scalar.
Element = Dict[str, object]


class TriangularAlgebra:
    """A locally unital graded algebra with a graded triangular basis,
    materialized up to a degree cutoff."""

    def __init__(self, field, objects: Sequence[str], specials: Iterable[str],
                 poset: WeightPoset, dot: Dict[str, str],
                 elements: Sequence[BasisElement], cutoff: int,
                 table: Dict[Tuple[str, str], Element],
                 units: Dict[str, Element], complete: bool = True,
                 nbounds: Optional[Dict[Tuple[str, str], int]] = None,
                 dangling: Sequence[Tuple[str, str, str]] = ()):
        self.field = field
        self.objects = sorted(objects)
        self.specials = sorted(set(specials))
        self.poset = poset
        self.dot = dict(dot)
        self.cutoff = cutoff
        self.table = table
        self.units = {i: dict(units.get(i, {})) for i in self.objects}
        self.table_complete = complete
        self.dangling = list(dangling)  # (mul context, profile, missing id)

        objset = set(self.objects)
        if not set(self.specials) <= objset:
            raise BadPresentation("special ids must be objects")
        for s in self.specials:
            if s not in self.dot:
                raise BadPresentation(f"special {s} has no weight")
            if self.dot[s] not in poset._index:
                raise BadPresentation(f"weight {self.dot[s]} not in poset")

        self.xelems: Dict[str, BasisElement] = {}
        self.helems: Dict[str, BasisElement] = {}
        self.yelems: Dict[str, BasisElement] = {}
        for el in elements:
            if el.row not in objset or el.col not in objset:
                raise BadPresentation(f"{el.id}: unknown endpoint object")
            if el.id in self.xelems or el.id in self.helems \
                    or el.id in self.yelems or el.id in objset:
                raise BadPresentation(f"duplicate basis id {el.id}")
            if el.kind == X_KIND:
                if el.col not in self.dot:
                    raise BadPresentation(f"{el.id}: X column must be special")
                self.xelems[el.id] = el
            elif el.kind == Y_KIND:
                if el.row not in self.dot:
                    raise BadPresentation(f"{el.id}: Y row must be special")
                self.yelems[el.id] = el
            else:
                if el.row not in self.dot or el.col not in self.dot:
                    raise BadPresentation(f"{el.id}: H endpoints must be special")
                self.helems[el.id] = el

        self.triples: Dict[str, Triple] = {}
        self._materialize_triples()
        self._by_row: Dict[str, List[str]] = {i: [] for i in self.objects}
        self._by_col: Dict[str, List[str]] = {i: [] for i in self.objects}
        for tid in sorted(self.triples):
            t = self.triples[tid]
            self._by_row[t.row].append(tid)
            self._by_col[t.col].append(tid)
        self.min_degrees: Dict[Tuple[str, str], int] = {}
        for t in self.triples.values():
            key = (t.row, t.col)
            if key not in self.min_degrees or t.degree < self.min_degrees[key]:
                self.min_degrees[key] = t.degree
        # declared lower bounds take precedence; derived minima fill the rest
        self.nbounds = dict(self.min_degrees)
        self.declared_bounds = dict(nbounds) if nbounds else {}
        self.nbounds.update(self.declared_bounds)

    # -- construction helpers ------------------------------------------------

    def _x_candidates(self, s: str) -> List[Tuple[str, str, int]]:
        """(id, row, degree) of X(., s) members, including the implicit 1_s."""
        out = [(s, s, 0)]
        for el in self.xelems.values():
            if el.col == s:
                out.append((el.id, el.row, el.degree))
        return sorted(out)

    def _y_candidates(self, t: str) -> List[Tuple[str, str, int]]:
        """(id, col, degree) of Y(t, .) members, including the implicit 1_t."""
        out = [(t, t, 0)]
        for el in self.yelems.values():
            if el.row == t:
                out.append((el.id, el.col, el.degree))
        return sorted(out)

    def _materialize_triples(self):
        for h in self.helems.values():
            s, t = h.row, h.col
            lam = self.dot[s]
            for xid, row, xdeg in self._x_candidates(s):
                for yid, col, ydeg in self._y_candidates(t):
                    deg = xdeg + h.degree + ydeg
                    if deg > self.cutoff:
                        continue
                    tr = Triple(xid, h.id, yid, row, col, deg, lam)
                    self.triples[tr.id] = tr

    # -- basic queries ---------------------------------------------------------

    def basis_ids(self) -> List[str]:
        return sorted(self.triples)

    def row(self, tid: str) -> str:
        return self.triples[tid].row

    def col(self, tid: str) -> str:
        return self.triples[tid].col

    def deg(self, tid: str) -> int:
        return self.triples[tid].degree

    def weight(self, tid: str) -> str:
        return self.triples[tid].weight

    def by_row(self, obj: str) -> List[str]:
        return self._by_row.get(obj, [])

    def by_col(self, obj: str) -> List[str]:
        return self._by_col.get(obj, [])

    def unit_comb(self, obj: str) -> Element:
        return self.units[obj]

    def dim_table(self) -> Dict[Tuple[str, str, int], int]:
        """Dimensions of 1_i A_d 1_j from the materialized basis."""
        out: Dict[Tuple[str, str, int], int] = {}
        for t in self.triples.values():
            key = (t.row, t.col, t.degree)
            out[key] = out.get(key, 0) + 1
        return out

    # -- multiplication --------------------------------------------------------

    def mult_basis(self, a: str, b: str) -> Element:
        ta, tb = self.triples[a], self.triples[b]
        if ta.col != tb.row:
            return {}
        if ta.degree + tb.degree > self.cutoff:
            raise CutoffExceeded(
                f"deg({a}) + deg({b}) = {ta.degree + tb.degree} exceeds "
                f"cutoff {self.cutoff}")
        entry = self.table.get((a, b))
        if entry is None:
            if self.table_complete:
                return {}
            raise UnknownProduct(f"product {a} * {b} not declared")
        return entry

    def mult(self, a: Element, b: Element) -> Element:
        field = self.field
        out: Element = {}
        for ai, ac in a.items():
            for bi, bc in b.items():
                prod = self.mult_basis(ai, bi)
                if not prod:
                    continue
                c = field.mul(ac, bc)
                for ti, tc in prod.items():
                    s = field.add(out.get(ti, field.zero), field.mul(c, tc))
                    if field.is_zero(s):
                        out.pop(ti, None)
                    else:
                        out[ti] = s
        return out

    def element_degree(self, a: Element) -> Optional[int]:
        degs = {self.deg(t) for t in a}
        if len(degs) == 1:
            return degs.pop()
        return None


def multiply(algebra: TriangularAlgebra, a: Element, b: Element) -> Element:
    """Bilinear extension of the structure-constant table."""
    return algebra.mult(a, b)


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"

AXIOM_SPAN = "basis-span"
AXIOM_COMPLETE = "basis-completeness"
AXIOM_ASSOC = "associativity"
AXIOM_SPECIAL = "special-idempotents"
AXIOM_DIRECTION = "direction"
AXIOM_FINITE = "finiteness"
AXIOM_DEGREE = "degree-additivity"
AXIOM_BOUNDS = "lower-bounds"
AXIOM_UNITS = "local-units"

AXIOM_ORDER = [AXIOM_SPAN, AXIOM_COMPLETE, AXIOM_ASSOC, AXIOM_SPECIAL,
               AXIOM_DIRECTION, AXIOM_FINITE, AXIOM_DEGREE, AXIOM_BOUNDS,
               AXIOM_UNITS]


class VerificationReport:
    """Per-axiom pass/fail/unknown results, certified up to the cutoff."""

    def __init__(self, window: int):
        self.window = window
        self.results: Dict[str, Tuple[str, List[str]]] = {}

    def record(self, axiom: str, status: str, details: List[str]):
        self.results[axiom] = (status, details)

    def status(self, axiom: str) -> str:
        return self.results[axiom][0]

    def passed(self) -> bool:
        return all(s == PASS for s, _ in self.results.values())

    def failed_axioms(self) -> List[str]:
        return [a for a in AXIOM_ORDER
                if a in self.results and self.results[a][0] == FAIL]

    def to_json(self):
        return {
            "certified_window": self.window,
            "checks": [
                {"axiom": a, "status": self.results[a][0],
                 "details": self.results[a][1]}
                for a in AXIOM_ORDER if a in self.results
            ],
            "verdict": "pass" if self.passed() else (
                "fail" if self.failed_axioms() else "inconclusive-window"),
        }


def verify_axioms(algebra: TriangularAlgebra,
                  max_details: int = 8) -> VerificationReport:
    """Check the triangular-basis axioms on the materialized window."""
    rep = VerificationReport(algebra.cutoff)
    _check_span(algebra, rep, max_details)
    _check_completeness(algebra, rep, max_details)
    _check_degree_profile(algebra, rep, max_details)
    _check_associativity(algebra, rep, max_details)
    _check_specials(algebra, rep, max_details)
    _check_directions(algebra, rep, max_details)
    _check_finiteness(algebra, rep)
    _check_bounds(algebra, rep, max_details)
    _check_units(algebra, rep, max_details)
    return rep


def _clip(details: List[str], max_details: int) -> List[str]:
    if len(details) > max_details:
        return details[:max_details] + [f"... ({len(details)} total)"]
    return details


def _check_span(algebra, rep, max_details):
    details = []
    for context, profile, missing in algebra.dangling:
        details.append(f"product {context} references undeclared element "
                       f"{missing!r} at profile {profile} (span deficiency)")
    for (a, b), entry in sorted(algebra.table.items()):
        for tid in entry:
            if tid not in algebra.triples:
                details.append(
                    f"product {a} * {b} expands outside the declared basis "
                    f"({tid})")
    rep.record(AXIOM_SPAN, FAIL if details else PASS,
               _clip(sorted(details), max_details))


def _check_completeness(algebra, rep, max_details):
    if algebra.table_complete:
        rep.record(AXIOM_COMPLETE, PASS,
                   ["omitted products default to zero (complete=true)"])
        return
    missing = 0
    sample = []
    for a in algebra.basis_ids():
        ta = algebra.triples[a]
        for b in algebra.by_row(ta.col):
            if ta.degree + algebra.deg(b) > algebra.cutoff:
                continue
            if (a, b) not in algebra.table:
                missing += 1
                if len(sample) < max_details:
                    sample.append(f"unknown product {a} * {b}")
    if missing:
        rep.record(AXIOM_COMPLETE, UNKNOWN,
                   sample + [f"{missing} unknown products on the window"])
    else:
        rep.record(AXIOM_COMPLETE, PASS, [])


def _check_degree_profile(algebra, rep, max_details):
    details = []
    for (a, b), entry in sorted(algebra.table.items()):
        if a not in algebra.triples or b not in algebra.triples:
            continue  # reported under span via dangling
        ta, tb = algebra.triples[a], algebra.triples[b]
        want = ta.degree + tb.degree
        for tid, c in sorted(entry.items()):
            if tid not in algebra.triples:
                continue
            tt = algebra.triples[tid]
            if tt.degree != want:
                details.append(f"{a} * {b}: term {tid} has degree "
                               f"{tt.degree}, expected {want}")
            if tt.row != ta.row or tt.col != tb.col:
                details.append(f"{a} * {b}: term {tid} violates the "
                               f"idempotent profile")
    rep.record(AXIOM_DEGREE, FAIL if details else PASS,
               _clip(details, max_details))


def _check_associativity(algebra, rep, max_details):
    field = algebra.field
    details = []
    ids_by_row: Dict[str, List[Tuple[int, str]]] = {}
    for tid in algebra.basis_ids():
        t = algebra.triples[tid]
        ids_by_row.setdefault(t.row, []).append((t.degree, tid))
    for rows in ids_by_row.values():
        rows.sort()
    cutoff = algebra.cutoff
    try:
        for a in algebra.basis_ids():
            ta = algebra.triples[a]
            for db, b in ids_by_row.get(ta.col, ()):
                if ta.degree + db > cutoff:
                    break
                ab = algebra.mult_basis(a, b)
                tb = algebra.triples[b]
                for dc, c in ids_by_row.get(tb.col, ()):
                    if ta.degree + db + dc > cutoff:
                        break
                    left = algebra.mult(ab, {c: field.one})
                    right = algebra.mult({a: field.one},
                                         algebra.mult_basis(b, c))
                    if left != right:
                        details.append(f"({a} * {b}) * {c} != "
                                       f"{a} * ({b} * {c})")
                        if len(details) > max_details:
                            raise _EarlyStop
    except _EarlyStop:
        pass
    except UnknownProduct as exc:
        rep.record(AXIOM_ASSOC, UNKNOWN, [str(exc)])
        return
    rep.record(AXIOM_ASSOC, FAIL if details else PASS,
               _clip(details, max_details))


class _EarlyStop(Exception):
    pass


def _check_specials(algebra, rep, max_details):
    details = []
    for el in list(algebra.xelems.values()) + list(algebra.yelems.values()):
        if el.row == el.col and el.row in algebra.dot:
            details.append(
                f"{el.kind}({el.row},{el.row}) must be exactly {{1_{el.row}}}; "
                f"found extra element {el.id}")
    rep.record(AXIOM_SPECIAL, FAIL if details else PASS,
               _clip(details, max_details))


def _check_directions(algebra, rep, max_details):
    poset = algebra.poset
    dot = algebra.dot
    details = []
    for el in algebra.xelems.values():
        if el.row in dot and el.row != el.col:
            if not poset.lt(dot[el.col], dot[el.row]):
                details.append(
                    f"X element {el.id}: need dot({el.row}) > dot({el.col}), "
                    f"got {dot[el.row]} vs {dot[el.col]}")
    for el in algebra.helems.values():
        if dot[el.row] != dot[el.col]:
            details.append(
                f"H element {el.id}: endpoints have different weights "
                f"{dot[el.row]} vs {dot[el.col]}")
    for el in algebra.yelems.values():
        if el.col in dot and el.row != el.col:
            if not poset.lt(dot[el.row], dot[el.col]):
                details.append(
                    f"Y element {el.id}: need dot({el.row}) < dot({el.col}), "
                    f"got {dot[el.row]} vs {dot[el.col]}")
    rep.record(AXIOM_DIRECTION, FAIL if details else PASS,
               _clip(details, max_details))


def _check_finiteness(algebra, rep):
    fibers: Dict[str, int] = {}
    for s in algebra.specials:
        fibers[algebra.dot[s]] = fibers.get(algebra.dot[s], 0) + 1
    touched: Dict[str, Set[str]] = {}
    for el in algebra.xelems.values():
        if el.row not in algebra.dot:
            touched.setdefault(el.row, set()).add(el.col)
    for el in algebra.yelems.values():
        if el.col not in algebra.dot:
            touched.setdefault(el.col, set()).add(el.row)
    details = [f"fibers: " + ", ".join(f"{l}:{n}"
                                       for l, n in sorted(fibers.items()))]
    details.append("final axiom: finite by materialization "
                   + (f"(max {max(len(v) for v in touched.values())} specials "
                      f"per outer object)" if touched else "(no outer objects)"))
    rep.record(AXIOM_FINITE, PASS, details)


def _check_bounds(algebra, rep, max_details):
    details = []
    for key, bound in sorted(algebra.declared_bounds.items()):
        have = algebra.min_degrees.get(key)
        if have is not None and have < bound:
            details.append(f"profile {key}: element of degree {have} "
                           f"below declared bound {bound}")
    rep.record(AXIOM_BOUNDS, FAIL if details else PASS,
               _clip(details, max_details))


def _check_units(algebra, rep, max_details):
    field = algebra.field
    details = []
    try:
        for i in algebra.objects:
            u = algebra.unit_comb(i)
            for tid in u:
                t = algebra.triples.get(tid)
                if t is None or t.row != i or t.col != i or t.degree != 0:
                    details.append(f"unit of {i} contains bad term {tid}")
        for tid in algebra.basis_ids():
            t = algebra.triples[tid]
            one = {tid: field.one}
            left = algebra.mult(algebra.unit_comb(t.row), one)
            if left != one:
                details.append(f"1_{t.row} * {tid} != {tid}")
            right = algebra.mult(one, algebra.unit_comb(t.col))
            if right != one:
                details.append(f"{tid} * 1_{t.col} != {tid}")
            if len(details) > max_details:
                break
    except UnknownProduct as exc:
        rep.record(AXIOM_UNITS, UNKNOWN, [str(exc)])
        return
    rep.record(AXIOM_UNITS, FAIL if details else PASS,
               _clip(details, max_details))


# ---------------------------------------------------------------------------
# quotients, Cartan algebras, opposite, reductions
# ---------------------------------------------------------------------------

def quotient_upper_set(algebra: TriangularAlgebra,
                       upper: Iterable[str]) -> TriangularAlgebra:
    """Quotient by the ideal generated by e_mu for mu outside the upper set."""
    up = set(upper)
    if not up <= set(algebra.poset.labels):
        raise NotUpperSet("unknown weight labels")
    if not algebra.poset.is_upper_set(up):
        raise NotUpperSet(f"{sorted(up)} is not an upper set")
    keep_special = {s for s in algebra.specials if algebra.dot[s] in up}

    def keeps(tid: str) -> bool:
        return algebra.triples[tid].weight in up

    elements = []
    for el in algebra.xelems.values():
        if el.col in keep_special:
            elements.append(el)
    for el in algebra.helems.values():
        if el.row in keep_special and el.col in keep_special:
            elements.append(el)
    for el in algebra.yelems.values():
        if el.row in keep_special:
            elements.append(el)
    table = {}
    for (a, b), entry in algebra.table.items():
        if a in algebra.triples and b in algebra.triples \
                and keeps(a) and keeps(b):
            new_entry = {tid: c for tid, c in entry.items()
                         if tid in algebra.triples and keeps(tid)}
            if new_entry:
                table[(a, b)] = new_entry
    units = {}
    for i in algebra.objects:
        units[i] = {tid: c for tid, c in algebra.units[i].items()
                    if tid in algebra.triples and keeps(tid)}
    dot = {s: algebra.dot[s] for s in keep_special}
    return TriangularAlgebra(
        algebra.field, algebra.objects, keep_special,
        algebra.poset.restricted(up) if up else WeightPoset([]),
        dot, elements, algebra.cutoff, table, units,
        complete=algebra.table_complete)


class CartanRaw:
    """The unital graded algebra e_lambda A_{>=lambda} e_lambda.

    Its basis is the set of H elements with endpoints of weight lambda;
    products are computed in the quotient and land back on H elements.  The
    algebra is locally unital over the special objects of weight lambda, with
    global unit the sum of the per-object units.
    """

    def __init__(self, parent: TriangularAlgebra, lam: str):
        self.parent = parent
        self.weight = lam
        self.field = parent.field
        self.cutoff = parent.cutoff
        self.objects = sorted(s for s in parent.specials
                              if parent.dot[s] == lam)
        if not self.objects:
            raise EmptyFiber(f"no special idempotents of weight {lam}")
        objset = set(self.objects)
        self.elems: Dict[str, BasisElement] = {
            el.id: el for el in parent.helems.values()
            if el.row in objset and el.col in objset}
        self._upper = set(parent.poset.upper_set(lam))
        self._units: Dict[str, Element] = {}
        for s in self.objects:
            comb: Element = {}
            for tid, c in parent.units[s].items():
                t = parent.triples[tid]
                if t.weight in self._upper:
                    if t.weight != lam or t.h not in self.elems:
                        raise BadPresentation(
                            f"unit of {s} survives the quotient outside "
                            f"H({lam}): {tid}")
                    comb[t.h] = c
            self._units[s] = comb
        self._table: Dict[Tuple[str, str], Element] = {}

    # -- BasedAlgebra interface ------------------------------------------------

    def basis_ids(self) -> List[str]:
        return sorted(self.elems)

    def row(self, hid: str) -> str:
        return self.elems[hid].row

    def col(self, hid: str) -> str:
        return self.elems[hid].col

    def deg(self, hid: str) -> int:
        return self.elems[hid].degree

    def unit_comb(self, obj: str) -> Element:
        return self._units[obj]

    def by_row(self, obj: str) -> List[str]:
        return sorted(h for h, el in self.elems.items() if el.row == obj)

    def by_col(self, obj: str) -> List[str]:
        return sorted(h for h, el in self.elems.items() if el.col == obj)

    def _embed(self, hid: str) -> str:
        el = self.elems[hid]
        return triple_id(el.row, hid, el.col)

    def mult_basis(self, a: str, b: str) -> Element:
        key = (a, b)
        if key in self._table:
            return self._table[key]
        ea, eb = self.elems[a], self.elems[b]
        if ea.col != eb.row:
            self._table[key] = {}
            return {}
        prod = self.parent.mult_basis(self._embed(a), self._embed(b))
        out: Element = {}
        for tid, c in prod.items():
            t = self.parent.triples[tid]
            if t.weight not in self._upper:
                continue
            if t.weight != self.weight or t.h not in self.elems:
                raise BadPresentation(
                    f"H * H product escapes the Cartan basis: {tid}")
            out[t.h] = c
        self._table[key] = out
        return out

    def mult(self, a: Element, b: Element) -> Element:
        field = self.field
        out: Element = {}
        for ai, ac in a.items():
            for bi, bc in b.items():
                prod = self.mult_basis(ai, bi)
                if not prod:
                    continue
                c = field.mul(ac, bc)
                for ti, tc in prod.items():
                    s = field.add(out.get(ti, field.zero), field.mul(c, tc))
                    if field.is_zero(s):
                        out.pop(ti, None)
                    else:
                        out[ti] = s
        return out

    def global_unit(self) -> Element:
        out: Element = {}
        for s in self.objects:
            out.update(self._units[s])
        return out

    def min_degree(self) -> int:
        return min((el.degree for el in self.elems.values()), default=0)


def cartan_algebra(algebra: TriangularAlgebra, lam: str) -> CartanRaw:
    """The Cartan algebra at a weight, with basis the weight's H elements."""
    return CartanRaw(algebra, lam)


def opposite(algebra: TriangularAlgebra) -> TriangularAlgebra:
    """The opposite algebra: X and Y swap, structure constants reverse."""
    objset = set(algebra.objects)

    def flip_triple(tid: str) -> str:
        t = algebra.triples[tid]
        return triple_id(t.y, t.h, t.x)

    elements = []
    for el in algebra.xelems.values():
        elements.append(BasisElement(el.id, Y_KIND, el.col, el.row, el.degree))
    for el in algebra.yelems.values():
        elements.append(BasisElement(el.id, X_KIND, el.col, el.row, el.degree))
    for el in algebra.helems.values():
        elements.append(BasisElement(el.id, H_KIND, el.col, el.row, el.degree))
    table = {}
    for (a, b), entry in algebra.table.items():
        if a not in algebra.triples or b not in algebra.triples:
            continue
        table[(flip_triple(b), flip_triple(a))] = {
            flip_triple(t): c for t, c in entry.items()
            if t in algebra.triples}
    units = {i: {flip_triple(t): c for t, c in algebra.units[i].items()
                 if t in algebra.triples}
             for i in algebra.objects}
    return TriangularAlgebra(
        algebra.field, algebra.objects, algebra.specials, algebra.poset,
        algebra.dot, elements, algebra.cutoff, table, units,
        complete=algebra.table_complete)


TO_SPECIAL = "TO_SPECIAL"
CONTRACT_WEIGHTS = "CONTRACT_WEIGHTS"


def reduce_presentation(algebra: TriangularAlgebra,
                        mode: str) -> TriangularAlgebra:
    if mode == TO_SPECIAL:
        return _reduce_to_special(algebra)
    if mode == CONTRACT_WEIGHTS:
        return _contract_weights(algebra)
    raise AlgebraError(f"unknown reduction mode {mode!r}")


def _reduce_to_special(algebra: TriangularAlgebra) -> TriangularAlgebra:
    keep = set(algebra.specials)

    def kept(tid: str) -> bool:
        t = algebra.triples[tid]
        return t.row in keep and t.col in keep

    elements = [el for el in list(algebra.xelems.values())
                + list(algebra.helems.values())
                + list(algebra.yelems.values())
                if el.row in keep and el.col in keep]
    table = {}
    for (a, b), entry in algebra.table.items():
        if a in algebra.triples and b in algebra.triples \
                and kept(a) and kept(b):
            table[(a, b)] = {t: c for t, c in entry.items()
                             if t in algebra.triples and kept(t)}
    units = {s: dict(algebra.units[s]) for s in keep}
    return TriangularAlgebra(
        algebra.field, sorted(keep), algebra.specials, algebra.poset,
        algebra.dot, elements, algebra.cutoff, table, units,
        complete=algebra.table_complete)


def _contract_weights(algebra: TriangularAlgebra) -> TriangularAlgebra:
    used = sorted({algebra.dot[s] for s in algebra.specials})
    new_obj = {lam: f"~{lam}" for lam in used}
    for lam in used:
        if new_obj[lam] in set(algebra.objects):
            raise BadPresentation(f"object name {new_obj[lam]} collides")

    def map_obj(i: str) -> str:
        return new_obj[algebra.dot[i]] if i in algebra.dot else i

    def map_comp(cid: str) -> str:
        # objects standing for implicit idempotents get relabeled
        return map_obj(cid) if cid in algebra.dot else cid

    def map_triple(tid: str) -> str:
        t = algebra.triples[tid]
        return triple_id(map_comp(t.x), t.h, map_comp(t.y))

    objects = sorted(i for i in algebra.objects if i not in algebra.dot)
    objects += sorted(new_obj.values())
    specials = sorted(new_obj.values())
    dot = {new_obj[lam]: lam for lam in used}
    elements = []
    for el in algebra.xelems.values():
        elements.append(BasisElement(el.id, X_KIND, map_obj(el.row),
                                     map_obj(el.col), el.degree))
    for el in algebra.helems.values():
        elements.append(BasisElement(el.id, H_KIND, map_obj(el.row),
                                     map_obj(el.col), el.degree))
    for el in algebra.yelems.values():
        elements.append(BasisElement(el.id, Y_KIND, map_obj(el.row),
                                     map_obj(el.col), el.degree))
    table = {}
    for (a, b), entry in algebra.table.items():
        if a not in algebra.triples or b not in algebra.triples:
            continue
        table[(map_triple(a), map_triple(b))] = {
            map_triple(t): c for t, c in entry.items()
            if t in algebra.triples}
    units: Dict[str, Element] = {i: {} for i in objects}
    for i in algebra.objects:
        target = map_obj(i)
        for tid, c in algebra.units[i].items():
            if tid in algebra.triples:
                units[target][map_triple(tid)] = c
    return TriangularAlgebra(
        algebra.field, objects, specials, algebra.poset, dot, elements,
        algebra.cutoff, table, units, complete=algebra.table_complete)
