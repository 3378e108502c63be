"""The .gta text format: parsing with line/column diagnostics, and export.

A file is a sequence of sections:

    [field]      rational | fp <p>
    [objects]    <id> [special]
    [poset]      <mu> < <lambda>          (cover pairs)
    [special]    <s> -> <lambda>
    [cutoff]     <D>
    [bounds]     <i> <j> <N>              (optional declared lower bounds)
    [basis]      <id> <X|H|Y> <row> <col> <degree>
    [units]      <obj> = <sum>            (expansion of 1_obj in the basis)
    [mul] complete=true|false
                 <x:h:y> * <x:h:y> = <sum>
    [tau]        <id> <-> <id>            (optional anti-automorphism data)
    [queries]    free-form lines kept verbatim

where <sum> is 0 or c1*x:h:y + c2*x:h:y + ... with exact coefficients
(integers or a/b).  Basis elements are referenced as triples x:h:y whose x/y
components may be object ids (the implicit idempotents of special objects).
'#' starts a comment.  Unknown sections and malformed lines are rejected with
a line/column position; references to undeclared ids raise IntegrityError,
except inside [mul] where they are collected as span deficiencies for
verify_axioms to report.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algcore import (BasisElement, Element, TriangularAlgebra, WeightPoset,
                      triple_id)
from .qseries import QQ, PrimeField, field_from_name


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class IntegrityError(Exception):
    def __init__(self, ident: str, message: str = ""):
        super().__init__(message or f"reference to undeclared id {ident!r}")
        self.ident = ident


_SECTIONS = ("field", "objects", "poset", "special", "cutoff", "bounds",
             "basis", "units", "mul", "tau", "queries")


@dataclass
class GtaFile:
    """Parsed form of a .gta file."""

    field_name: str = "rational"
    objects: List[str] = dc_field(default_factory=list)
    specials: List[str] = dc_field(default_factory=list)
    covers: List[Tuple[str, str]] = dc_field(default_factory=list)
    dot: Dict[str, str] = dc_field(default_factory=dict)
    cutoff: int = 0
    bounds: Dict[Tuple[str, str], int] = dc_field(default_factory=dict)
    elements: List[BasisElement] = dc_field(default_factory=list)
    unit_lines: List[Tuple[str, List[Tuple[str, Tuple[str, str, str]]]]] = \
        dc_field(default_factory=list)
    mul_complete: bool = True
    mul_lines: List = dc_field(default_factory=list)
    tau: Dict[str, str] = dc_field(default_factory=dict)
    queries: List[str] = dc_field(default_factory=list)

    def to_algebra(self, field=None) -> TriangularAlgebra:
        """Build the TriangularAlgebra; field overrides the [field] section."""
        fld = field if field is not None else field_from_name(self.field_name)
        objset = set(self.objects)
        elem_ids = {el.id for el in self.elements}
        weights = {lam for pair in self.covers for lam in pair}
        weights |= set(self.dot.values())
        poset = WeightPoset(weights if weights else ["0"], self.covers)

        def component_known(cid: str) -> bool:
            return cid in elem_ids or cid in objset

        def resolve(parts: Tuple[str, str, str],
                    dangling: List, context: str,
                    profile: Tuple[str, str]) -> Optional[str]:
            for cid in parts:
                if not component_known(cid):
                    dangling.append((context, profile, cid))
                    return None
            return triple_id(*parts)

        dangling: List[Tuple[str, Tuple[str, str], str]] = []
        by_id = {el.id: el for el in self.elements}

        def endpoint(parts, side) -> str:
            # row of a triple comes from its x component, col from y
            cid = parts[0] if side == "row" else parts[2]
            if cid in by_id:
                return by_id[cid].row if side == "row" else by_id[cid].col
            if cid in objset:
                return cid
            return "?"

        table: Dict[Tuple[str, str], Element] = {}
        for (aparts, bparts, terms) in self.mul_lines:
            profile = (endpoint(aparts, "row"), endpoint(bparts, "col"))
            context = f"{':'.join(aparts)} * {':'.join(bparts)}"
            aid = resolve(aparts, dangling, context, profile)
            bid = resolve(bparts, dangling, context, profile)
            entry: Element = {}
            ok = aid is not None and bid is not None
            for coeff, tparts in terms:
                tid = resolve(tparts, dangling, context, profile)
                if tid is None:
                    ok = False
                    continue
                entry[tid] = fld.parse(coeff)
            if ok:
                table[(aid, bid)] = entry
        units: Dict[str, Element] = {i: {} for i in self.objects}
        for obj, terms in self.unit_lines:
            if obj not in objset:
                raise IntegrityError(obj)
            comb: Element = {}
            for coeff, tparts in terms:
                for cid in tparts:
                    if not component_known(cid):
                        raise IntegrityError(cid)
                comb[triple_id(*tparts)] = fld.parse(coeff)
            units[obj] = comb
        for a, b in self.tau.items():
            for cid in (a, b):
                if not component_known(cid):
                    raise IntegrityError(cid)
        return TriangularAlgebra(
            fld, self.objects, self.specials, poset, self.dot,
            self.elements, self.cutoff, table, units,
            complete=self.mul_complete, nbounds=self.bounds,
            dangling=dangling)


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _parse_sum(text: str, lineno: int, col0: int):
    """Parse '0' or 'c*x:h:y + ...' into [(coeff str, (x,h,y)), ...]."""
    text = text.strip()
    if text == "0":
        return []
    out = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError(lineno, col0, "empty summand")
        if "*" in chunk:
            coeff, _, trip = chunk.partition("*")
            coeff = coeff.strip()
            trip = trip.strip()
        else:
            coeff, trip = "1", chunk
        parts = trip.split(":")
        if len(parts) != 3 or not all(parts):
            raise ParseError(lineno, col0,
                             f"bad basis reference {trip!r} (want x:h:y)")
        try:
            Fraction(coeff)
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, col0, f"bad coefficient {coeff!r}")
        out.append((coeff, (parts[0], parts[1], parts[2])))
    return out


def parse_gta(text: str) -> GtaFile:
    """Parse .gta text; raises ParseError / IntegrityError with positions."""
    gf = GtaFile()
    section = None
    seen_field = False
    declared_objects = set()
    declared_ids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]") and " " not in stripped:
                raise ParseError(lineno, col, f"malformed section {stripped!r}")
            head, _, rest = stripped.partition("]")
            name = head[1:].strip()
            if name not in _SECTIONS:
                raise ParseError(lineno, col, f"unknown section [{name}]")
            section = name
            rest = rest.strip()
            if rest:
                if name != "mul":
                    raise ParseError(lineno, col,
                                     f"section [{name}] takes no options")
                if rest == "complete=true":
                    gf.mul_complete = True
                elif rest == "complete=false":
                    gf.mul_complete = False
                else:
                    raise ParseError(lineno, col, f"bad option {rest!r}")
            continue
        if section is None:
            raise ParseError(lineno, col, "content before any section")
        if section == "field":
            if seen_field:
                raise ParseError(lineno, col, "duplicate field spec")
            toks = stripped.split()
            if toks[0] == "rational" and len(toks) == 1:
                gf.field_name = "rational"
            elif toks[0] == "fp" and len(toks) == 2 and toks[1].isdigit():
                gf.field_name = f"fp:{toks[1]}"
            else:
                raise ParseError(lineno, col, f"bad field spec {stripped!r}")
            seen_field = True
        elif section == "objects":
            toks = stripped.split()
            if len(toks) not in (1, 2) or (len(toks) == 2
                                           and toks[1] != "special"):
                raise ParseError(lineno, col, f"bad object line {stripped!r}")
            if toks[0] in declared_objects:
                raise ParseError(lineno, col, f"duplicate object {toks[0]!r}")
            if ":" in toks[0]:
                raise ParseError(lineno, col, "object ids must not contain ':'")
            declared_objects.add(toks[0])
            gf.objects.append(toks[0])
            if len(toks) == 2:
                gf.specials.append(toks[0])
        elif section == "poset":
            toks = stripped.split()
            if len(toks) != 3 or toks[1] != "<":
                raise ParseError(lineno, col, f"bad cover line {stripped!r}")
            gf.covers.append((toks[0], toks[2]))
        elif section == "special":
            toks = stripped.split()
            if len(toks) != 3 or toks[1] != "->":
                raise ParseError(lineno, col, f"bad special line {stripped!r}")
            if toks[0] not in declared_objects:
                raise IntegrityError(toks[0])
            gf.dot[toks[0]] = toks[2]
        elif section == "cutoff":
            try:
                gf.cutoff = int(stripped)
            except ValueError:
                raise ParseError(lineno, col, f"bad cutoff {stripped!r}")
        elif section == "bounds":
            toks = stripped.split()
            if len(toks) != 3:
                raise ParseError(lineno, col, f"bad bounds line {stripped!r}")
            for t in toks[:2]:
                if t not in declared_objects:
                    raise IntegrityError(t)
            try:
                gf.bounds[(toks[0], toks[1])] = int(toks[2])
            except ValueError:
                raise ParseError(lineno, col, f"bad bound {toks[2]!r}")
        elif section == "basis":
            toks = stripped.split()
            if len(toks) != 5:
                raise ParseError(lineno, col,
                                 "want: id kind row col degree")
            eid, kind, row, colo, degs = toks
            if kind not in ("X", "H", "Y"):
                raise ParseError(lineno, col, f"bad kind {kind!r}")
            for t in (row, colo):
                if t not in declared_objects:
                    raise IntegrityError(t)
            try:
                degree = int(degs)
            except ValueError:
                raise ParseError(lineno, col, f"bad degree {degs!r}")
            if eid in declared_ids or eid in declared_objects:
                raise ParseError(lineno, col, f"duplicate id {eid!r}")
            declared_ids.add(eid)
            gf.elements.append(BasisElement(eid, kind, row, colo, degree))
        elif section == "units":
            lhs, eq, rhs = stripped.partition("=")
            if not eq:
                raise ParseError(lineno, col, "want: obj = sum")
            obj = lhs.strip()
            gf.unit_lines.append((obj, _parse_sum(rhs, lineno, col)))
        elif section == "mul":
            lhs, eq, rhs = stripped.partition("=")
            if not eq:
                raise ParseError(lineno, col, "want: a * b = sum")
            a, star, b = lhs.partition("*")
            if not star:
                raise ParseError(lineno, col, "want: a * b = sum")
            aparts = tuple(a.strip().split(":"))
            bparts = tuple(b.strip().split(":"))
            if len(aparts) != 3 or len(bparts) != 3:
                raise ParseError(lineno, col, "factors must be x:h:y triples")
            gf.mul_lines.append((aparts, bparts,
                                 _parse_sum(rhs, lineno, col)))
        elif section == "tau":
            toks = stripped.split()
            if len(toks) != 3 or toks[1] != "<->":
                raise ParseError(lineno, col, f"bad tau line {stripped!r}")
            gf.tau[toks[0]] = toks[2]
            gf.tau[toks[2]] = toks[0]
        elif section == "queries":
            gf.queries.append(stripped)
    for s in gf.specials:
        if s not in gf.dot:
            raise IntegrityError(s, f"special {s!r} has no weight assignment")
    return gf


def load_algebra(text: str, field=None) -> TriangularAlgebra:
    return parse_gta(text).to_algebra(field)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _render_coeff(field, c) -> str:
    return field.render(c)


def _render_sum(field, entry: Element) -> str:
    if not entry:
        return "0"
    parts = []
    for tid in sorted(entry):
        parts.append(f"{_render_coeff(field, entry[tid])}*{tid}")
    return " + ".join(parts)


def export_gta(algebra: TriangularAlgebra,
               tau: Optional[Dict[str, str]] = None) -> str:
    """Canonical .gta text for an algebra; byte-stable for equal inputs."""
    field = algebra.field
    out = []
    out.append("[field]")
    if isinstance(field, PrimeField):
        out.append(f"fp {field.p}")
    else:
        out.append("rational")
    out.append("[objects]")
    specset = set(algebra.specials)
    for i in algebra.objects:
        out.append(f"{i} special" if i in specset else i)
    out.append("[poset]")
    seen = set()
    for hi in algebra.poset.labels:
        for lo in algebra.poset._below[hi]:
            # write covers only: lo < hi with nothing strictly between
            if any(algebra.poset.lt(lo, mid) and algebra.poset.lt(mid, hi)
                   for mid in algebra.poset.labels):
                continue
            seen.add((lo, hi))
    for lo, hi in sorted(seen):
        out.append(f"{lo} < {hi}")
    out.append("[special]")
    for s in algebra.specials:
        out.append(f"{s} -> {algebra.dot[s]}")
    out.append("[cutoff]")
    out.append(str(algebra.cutoff))
    if algebra.declared_bounds:
        out.append("[bounds]")
        for (i, j), n in sorted(algebra.declared_bounds.items()):
            out.append(f"{i} {j} {n}")
    out.append("[basis]")
    elems = (list(algebra.xelems.values()) + list(algebra.helems.values())
             + list(algebra.yelems.values()))
    for el in sorted(elems, key=lambda e: (e.kind, e.id)):
        out.append(f"{el.id} {el.kind} {el.row} {el.col} {el.degree}")
    out.append("[units]")
    for i in algebra.objects:
        out.append(f"{i} = {_render_sum(field, algebra.units[i])}")
    out.append("[mul] complete=" +
               ("true" if algebra.table_complete else "false"))
    for (a, b) in sorted(algebra.table):
        entry = algebra.table[(a, b)]
        out.append(f"{a} * {b} = {_render_sum(field, entry)}")
    if tau:
        out.append("[tau]")
        done = set()
        for a in sorted(tau):
            b = tau[a]
            if a in done or b in done:
                continue
            out.append(f"{a} <-> {b}")
            done.add(a)
            done.add(b)
    return "\n".join(out) + "\n"


def algebras_equal(a: TriangularAlgebra, b: TriangularAlgebra) -> bool:
    """Structural equality of presentations (used by round-trip tests)."""
    def elemsig(d):
        return {k: (e.kind, e.row, e.col, e.degree) for k, e in d.items()}
    return (a.objects == b.objects and a.specials == b.specials
            and a.dot == b.dot and a.cutoff == b.cutoff
            and elemsig(a.xelems) == elemsig(b.xelems)
            and elemsig(a.helems) == elemsig(b.helems)
            and elemsig(a.yelems) == elemsig(b.yelems)
            and set(a.triples) == set(b.triples)
            and {k: v for k, v in a.table.items() if v}
            == {k: v for k, v in b.table.items() if v}
            and a.units == b.units
            and a.poset.labels == b.poset.labels
            and all(a.poset.leq(x, y) == b.poset.leq(x, y)
                    for x in a.poset.labels for y in a.poset.labels))
