"""Graded exact sparse linear algebra over Q or F_p.

Vectors are dicts {column index: scalar} with zero entries omitted; matrices
are lists of such rows.  Everything is exact: Gaussian elimination over the
ground field, kernels, particular solutions.  On top of that sit
finite-dimensional algebras given by structure constants, with the Jacobson
radical computed from the trace form (Dickson's criterion) and complete sets
of orthogonal primitive idempotents for split semisimple quotients, lifted
through the radical by the Newton iteration e -> 3e^2 - 2e^3.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple


class LinAlgError(Exception):
    pass


class CharacteristicTooSmall(LinAlgError):
    pass


class NotSplit(LinAlgError):
    pass


Vec = Dict[int, object]


def vec_add(field, a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for j, c in b.items():
        s = field.add(out.get(j, field.zero), c)
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s
    return out


def vec_scale(field, a: Vec, c) -> Vec:
    if field.is_zero(c):
        return {}
    return {j: field.mul(v, c) for j, v in a.items()}


def vec_sub(field, a: Vec, b: Vec) -> Vec:
    return vec_add(field, a, vec_scale(field, b, field.neg(field.one)))


class RowSpace:
    """A row space kept in reduced echelon form, supporting incremental adds.

    Used for span construction, membership tests and quotient bookkeeping.
    """

    def __init__(self, field):
        self.field = field
        self.rows: Dict[int, Vec] = {}  # pivot column -> reduced row

    def reduce(self, v: Vec) -> Vec:
        field = self.field
        v = dict(v)
        while v:
            p = min(v)
            if p not in self.rows:
                return v
            v = vec_sub(field, v, vec_scale(field, self.rows[p], v[p]))
        return v

    def add(self, v: Vec) -> bool:
        """Insert v; returns True if it enlarged the space."""
        field = self.field
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        v = vec_scale(field, v, field.inv(v[p]))
        for q, row in self.rows.items():
            if p in row:
                self.rows[q] = vec_sub(field, row, vec_scale(field, v, row[p]))
        self.rows[p] = v
        return True

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def coords(self, v: Vec) -> Optional[Dict[int, object]]:
        """Write v in terms of the stored reduced rows (pivot -> coefficient)."""
        field = self.field
        v = dict(v)
        out: Dict[int, object] = {}
        while v:
            p = min(v)
            if p not in self.rows:
                return None
            c = v[p]
            out[p] = c
            v = vec_sub(field, v, vec_scale(field, self.rows[p], c))
        return out

    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis(self) -> List[Vec]:
        return [self.rows[p] for p in sorted(self.rows)]


def kernel_basis(field, rows: Sequence[Vec], ncols: int) -> List[Vec]:
    """Basis of {x : M x = 0} where M has the given rows over ncols columns."""
    # column echelon with combination tracking
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, c in row.items():
            cols[j][i] = c
    kernel = []
    tracker: List[Tuple[Vec, Vec]] = []  # (reduced column, combo over inputs)
    for j in range(ncols):
        v = dict(cols[j])
        combo = {j: field.one}
        for red, red_combo in tracker:
            if not v:
                break
            p = min(red)
            if p in v:
                c = field.mul(v[p], field.inv(red[p]))
                v = vec_sub(field, v, vec_scale(field, red, c))
                combo = vec_sub(field, combo, vec_scale(field, red_combo, c))
        if v:
            tracker.append((v, combo))
            tracker.sort(key=lambda t: min(t[0]))
        else:
            kernel.append(combo)
    return kernel


def solve(field, rows: Sequence[Vec], ncols: int, target: Vec) -> Optional[Vec]:
    """One solution x of M x = target (columns as unknowns), or None."""
    # augment: solve via RowSpace on the transpose system
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, c in row.items():
            cols[j][i] = c
    tracker: List[Tuple[Vec, Vec]] = []
    for j in range(ncols):
        v = dict(cols[j])
        combo = {j: field.one}
        for red, red_combo in tracker:
            if not v:
                break
            p = min(red)
            if p in v:
                c = field.mul(v[p], field.inv(red[p]))
                v = vec_sub(field, v, vec_scale(field, red, c))
                combo = vec_sub(field, combo, vec_scale(field, red_combo, c))
        if v:
            tracker.append((v, combo))
            tracker.sort(key=lambda t: min(t[0]))
    t = dict(target)
    sol: Vec = {}
    for red, red_combo in tracker:
        if not t:
            break
        p = min(red)
        if p in t:
            c = field.mul(t[p], field.inv(red[p]))
            t = vec_sub(field, t, vec_scale(field, red, c))
            sol = vec_add(field, sol, vec_scale(field, red_combo, c))
    if t:
        return None
    return sol


def solve_degreewise(field, rows: Sequence[Vec], ncols: int,
                     target: Vec) -> Tuple[Optional[Vec], List[Vec]]:
    """Particular solution plus kernel basis for one degree block."""
    return solve(field, rows, ncols, target), kernel_basis(field, rows, ncols)


# ---------------------------------------------------------------------------
# finite-dimensional unital algebras by structure constants
# ---------------------------------------------------------------------------

class FinDimAlgebra:
    """A unital associative algebra on a finite ordered basis.

    ``table[i][j]`` is the product e_i e_j as a coordinate dict, ``unit`` the
    coordinates of 1.  ``labels`` are opaque strings used for deterministic
    ordering in block enumeration.
    """

    def __init__(self, field, labels: Sequence[str],
                 table: Dict[Tuple[int, int], Vec], unit: Vec):
        self.field = field
        self.labels = list(labels)
        self.dim = len(labels)
        self.table = table
        self.unit = dict(unit)

    def mul(self, a: Vec, b: Vec) -> Vec:
        field = self.field
        out: Vec = {}
        for i, ca in a.items():
            for j, cb in b.items():
                prod = self.table.get((i, j))
                if not prod:
                    continue
                c = field.mul(ca, cb)
                for k, ck in prod.items():
                    s = field.add(out.get(k, field.zero), field.mul(c, ck))
                    if field.is_zero(s):
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def left_mult_rows(self, a: Vec) -> List[Vec]:
        """Rows of the matrix of x -> a*x in the basis (row i = coords of a*e_i)."""
        return [self.mul(a, {i: self.field.one}) for i in range(self.dim)]

    def trace_left_mult(self, a: Vec):
        field = self.field
        tr = field.zero
        for i in range(self.dim):
            prod = self.mul(a, {i: field.one})
            tr = field.add(tr, prod.get(i, field.zero))
        return tr

    def check_associative(self) -> bool:
        f = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.table.get((i, j), {})
                for k in range(self.dim):
                    left = self.mul(ij, {k: f.one})
                    right = self.mul({i: f.one}, self.table.get((j, k), {}))
                    if left != right:
                        return False
        return True

    def check_unit(self) -> bool:
        f = self.field
        for i in range(self.dim):
            e = {i: f.one}
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                return False
        return True


def radical_findim(alg: FinDimAlgebra) -> List[Vec]:
    """Basis of the Jacobson radical via the trace form.

    Valid in characteristic 0 and in characteristic p > dim (Dickson);
    otherwise raises CharacteristicTooSmall.
    """
    field = alg.field
    p = field.characteristic
    if p != 0 and alg.dim >= p:
        raise CharacteristicTooSmall(
            f"dim {alg.dim} >= char {p}; trace-form criterion invalid")
    # Gram rows: G[i] = (tr L_{e_i e_j})_j
    gram = []
    for i in range(alg.dim):
        row = {}
        for j in range(alg.dim):
            t = alg.trace_left_mult(alg.table.get((i, j), {}))
            if not field.is_zero(t):
                row[j] = t
        gram.append(row)
    return kernel_basis(field, gram, alg.dim)


def quotient_algebra(alg: FinDimAlgebra, ideal: Sequence[Vec]):
    """Quotient by a two-sided ideal; returns (quotient, project, section).

    ``project`` maps coordinates of alg to quotient coordinates, ``section``
    lifts quotient basis indices back to representatives in alg.
    """
    field = alg.field
    space = RowSpace(field)
    for v in ideal:
        space.add(v)
    pivots = set(space.pivots())
    keep = [i for i in range(alg.dim) if i not in pivots]
    index = {i: k for k, i in enumerate(keep)}

    def project(v: Vec) -> Vec:
        r = space.reduce(v)
        return {index[i]: c for i, c in r.items()}

    table = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            prod = project(alg.table.get((i, j), {}))
            if prod:
                table[(a, b)] = prod
    quo = FinDimAlgebra(field, [alg.labels[i] for i in keep], table,
                        project(alg.unit))
    section = [{i: field.one} for i in keep]
    return quo, project, section


def min_poly(alg: FinDimAlgebra, a: Vec, unit: Vec) -> List:
    """Monic minimal polynomial of a relative to the given unit.

    Coefficients are listed low degree first; powers are unit, a, a^2, ...
    so for a in a corner eAe with unit e this is the minimal polynomial of
    a acting on the corner.
    """
    field = alg.field
    tracked: List[Tuple[Vec, Vec]] = []  # (reduced power, combo over powers)
    cur = dict(unit)
    k = 0
    while True:
        v = dict(cur)
        combo = {k: field.one}
        for red, red_combo in tracked:
            if not v:
                break
            piv = min(red)
            if piv in v:
                c = field.mul(v[piv], field.inv(red[piv]))
                v = vec_sub(field, v, vec_scale(field, red, c))
                combo = vec_sub(field, combo, vec_scale(field, red_combo, c))
        if not v:
            # combo gives the dependence: sum combo[d] * a^d = 0, top term k
            coeffs = [field.zero] * (k + 1)
            top = field.inv(combo[k])
            for d, c in combo.items():
                coeffs[d] = field.mul(c, top)
            return coeffs
        tracked.append((v, combo))
        tracked.sort(key=lambda t: min(t[0]))
        cur = alg.mul(cur, a)
        k += 1
        if k > alg.dim + 1:
            raise LinAlgError("minimal polynomial did not terminate")


def poly_roots(field, coeffs: List) -> List:
    """All roots in the field of a monic polynomial (with multiplicity 1 each).

    Over Q: rational root theorem.  Over F_p: exhaustive scan (p < 2^16).
    """
    n = len(coeffs) - 1
    if n <= 0:
        return []
    roots = []
    if field.characteristic == 0:
        # clear denominators -> integer polynomial
        denom = 1
        for c in coeffs:
            denom = denom * Fraction(c).denominator // _gcd(
                denom, Fraction(c).denominator)
        ints = [int(Fraction(c) * denom) for c in coeffs]
        while len(ints) > 1 and ints[0] == 0:
            if Fraction(0) not in roots:
                roots.append(Fraction(0))
            ints = ints[1:]
        if len(ints) > 1:
            a0, an = abs(ints[0]), abs(ints[-1])
            for p in _divisors(a0):
                for q in _divisors(an):
                    for cand in (Fraction(p, q), Fraction(-p, q)):
                        if cand in roots:
                            continue
                        if _poly_eval(field, coeffs, cand) == 0:
                            roots.append(cand)
        return sorted(roots)
    if field.characteristic >= 1 << 16:
        raise NotSplit(
            f"root finding over F_{field.characteristic} not supported "
            "(characteristic too large); use a smaller prime or Q")
    for x in field.elements():
        if field.is_zero(_poly_eval(field, coeffs, x)):
            roots.append(x)
    return sorted(roots)


def _poly_eval(field, coeffs, x):
    acc = field.zero
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


# ---------------------------------------------------------------------------
# primitive idempotents of split semisimple algebras, and lifting
# ---------------------------------------------------------------------------

def _corner(alg: FinDimAlgebra, e: Vec):
    """The corner algebra eAe with a map back into alg coordinates."""
    field = alg.field
    space = RowSpace(field)
    for i in range(alg.dim):
        space.add(alg.mul(alg.mul(e, {i: field.one}), e))
    basis = space.basis()
    remap = {p: k for k, p in enumerate(space.pivots())}

    def coords(v: Vec) -> Vec:
        c = space.coords(v)
        if c is None:
            raise LinAlgError("corner not closed under multiplication")
        return {remap[p]: x for p, x in c.items()}

    table = {}
    labels = []
    for a, u in enumerate(basis):
        labels.append(min((alg.labels[i] for i in u), default=""))
        for b, v in enumerate(basis):
            entry = coords(alg.mul(u, v))
            if entry:
                table[(a, b)] = entry
    corner = FinDimAlgebra(field, labels, table, coords(e))

    def lift(v: Vec) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            out = vec_add(field, out, vec_scale(field, basis[a], c))
        return out

    return corner, lift


def _split_candidates(alg: FinDimAlgebra):
    field = alg.field
    for i in range(alg.dim):
        yield {i: field.one}
    for i in range(alg.dim):
        for j in range(alg.dim):
            if i != j:
                prod = alg.table.get((i, j))
                if prod:
                    yield dict(prod)
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            yield {i: field.one, j: field.one}


def _primitive_in_semisimple(alg: FinDimAlgebra, e: Vec) -> List[Vec]:
    """Decompose idempotent e of a split semisimple algebra into a complete
    orthogonal family of primitive idempotents."""
    field = alg.field
    corner, lift = _corner(alg, e)
    if corner.dim == 1:
        return [dict(e)]
    for cand in _split_candidates(corner):
        mp = min_poly(corner, cand, corner.unit)
        roots = poly_roots(field, mp)
        if len(mp) - 1 >= 2 and not roots:
            continue
        for r in roots:
            # v = cand - r*1 is a zero divisor; C*v is a proper left ideal
            v = vec_sub(field, cand, vec_scale(field, corner.unit, r))
            if not v:
                continue
            ideal = RowSpace(field)
            for i in range(corner.dim):
                ideal.add(corner.mul({i: field.one}, v))
            d = ideal.dim()
            if d == 0 or d == corner.dim:
                continue
            f = _idempotent_generator(corner, ideal)
            if f is None:
                continue
            comp = vec_sub(field, corner.unit, f)
            fam = (_primitive_in_semisimple(corner, f)
                   + _primitive_in_semisimple(corner, comp))
            return [lift(x) for x in fam]
    raise NotSplit(
        "no splitting element found; a simple block is not split over the "
        "ground field (enlarge the field or change the example)")


def _idempotent_generator(alg: FinDimAlgebra, ideal: RowSpace) -> Optional[Vec]:
    """Find idempotent f in the left ideal with x f = x for all x in the ideal."""
    field = alg.field
    basis = ideal.basis()
    cols = {}
    for t, gen in enumerate(basis):
        cols[t] = gen
    # unknowns: coefficients c_t of f = sum c_t gen_t
    # equations: for each x in basis: sum_t c_t (x * gen_t) = x
    rows = []
    rhs = {}
    eqindex = {}

    def key(i, j):
        if (i, j) not in eqindex:
            eqindex[(i, j)] = len(eqindex)
        return eqindex[(i, j)]

    cols_rows: List[Vec] = [dict() for _ in basis]
    for xi, x in enumerate(basis):
        for t, gen in enumerate(basis):
            prod = alg.mul(x, gen)
            for j, c in prod.items():
                cols_rows[t][key(xi, j)] = c
        for j, c in x.items():
            rhs[key(xi, j)] = c
    # solve: matrix columns = unknowns t
    nrows = len(eqindex)
    mat_rows: List[Vec] = [dict() for _ in range(nrows)]
    for t, col in enumerate(cols_rows):
        for r, c in col.items():
            mat_rows[r][t] = c
    sol = solve(field, mat_rows, len(basis), rhs)
    if sol is None:
        return None
    f: Vec = {}
    for t, c in sol.items():
        f = vec_add(field, f, vec_scale(field, basis[t], c))
    if alg.mul(f, f) != f:
        return None
    return f


def split_idempotents(alg: FinDimAlgebra) -> List[Tuple[Vec, int, int]]:
    """Complete orthogonal primitive idempotents of alg with block data.

    Returns (idempotent, block index, block dimension n with block = M_n),
    idempotents grouped by the simple block of alg/J they lift, blocks ordered
    by (minimal basis label, dimension).  Raises NotSplit on a non-split block.
    """
    field = alg.field
    rad = radical_findim(alg)
    quo, project, section = quotient_algebra(alg, rad)
    # center of the semisimple quotient
    rows: List[Vec] = []
    eqs: Dict[Tuple[int, int], int] = {}

    def key(i, j):
        if (i, j) not in eqs:
            eqs[(i, j)] = len(eqs)
        return eqs[(i, j)]

    cols: List[Vec] = [dict() for _ in range(quo.dim)]
    for t in range(quo.dim):
        z = {t: field.one}
        for i in range(quo.dim):
            comm = vec_sub(field, quo.mul(z, {i: field.one}),
                           quo.mul({i: field.one}, z))
            for j, c in comm.items():
                cols[t][key(i, j)] = c
    mat: List[Vec] = [dict() for _ in range(len(eqs))]
    for t, col in enumerate(cols):
        for r, c in col.items():
            mat[r][t] = c
    center = kernel_basis(field, mat, quo.dim)
    centrals = _central_primitives(quo, center)
    # order blocks deterministically
    def block_key(z):
        labels = sorted(quo.labels[i] for i in z)
        return (labels[0] if labels else "", len(z))
    centrals.sort(key=block_key)

    result = []
    for bidx, z in enumerate(centrals):
        prims = _primitive_in_semisimple(quo, z)
        block_dim2 = _block_dimension(quo, z)
        n = _isqrt(block_dim2)
        if n * n != block_dim2:
            raise NotSplit(f"block {bidx} has dimension {block_dim2}, "
                           "not a square: not split")
        if len(prims) != n:
            raise NotSplit(f"block {bidx}: found {len(prims)} primitive "
                           f"idempotents in an M_{n} block")
        prims = _sorted_vecs(prims)
        for f in prims:
            result.append((f, bidx, n))
    # lift through the radical, preserving orthogonality
    lifted = _lift_family(alg, section, [f for f, _, _ in result])
    return [(lifted[k], result[k][1], result[k][2]) for k in range(len(result))]


def _sorted_vecs(vecs: List[Vec]) -> List[Vec]:
    def k(v):
        return tuple(sorted((i, str(c)) for i, c in v.items()))
    return sorted(vecs, key=k)


def _block_dimension(quo: FinDimAlgebra, z: Vec) -> int:
    field = quo.field
    space = RowSpace(field)
    for i in range(quo.dim):
        space.add(quo.mul(z, quo.mul({i: field.one}, z)))
    return space.dim()


def _central_primitives(quo: FinDimAlgebra, center: List[Vec]) -> List[Vec]:
    """Primitive idempotents of the (commutative, semisimple) center."""
    field = quo.field
    # center as its own FinDimAlgebra
    space = RowSpace(field)
    for v in center:
        space.add(v)
    basis = space.basis()
    remap = {p: k for k, p in enumerate(space.pivots())}
    table = {}
    for a, u in enumerate(basis):
        for b, v in enumerate(basis):
            coords = space.coords(quo.mul(u, v))
            if coords is None:
                raise LinAlgError("center not closed")
            entry = {remap[p]: c for p, c in coords.items()}
            if entry:
                table[(a, b)] = entry
    unit_coords = space.coords(quo.unit)
    if unit_coords is None:
        raise LinAlgError("unit not central")
    unit = {remap[p]: c for p, c in unit_coords.items()}
    zalg = FinDimAlgebra(field, [f"z{k}" for k in range(len(basis))],
                         table, unit)

    def lift(v: Vec) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            out = vec_add(field, out, vec_scale(field, basis[a], c))
        return out

    idems = [zalg.unit]
    for t in range(zalg.dim):
        nxt = []
        for e in idems:
            corner_unit = e
            w = zalg.mul(zalg.mul(e, {t: field.one}), e)
            mp = min_poly(zalg, w, corner_unit)
            roots = poly_roots(field, mp)
            if len(mp) - 1 > len(roots):
                # not fully split: either more roots exist outside the field
                # (honest NotSplit for the commutative case) or w is scalar
                if len(mp) - 1 >= 2:
                    raise NotSplit(
                        "central minimal polynomial has an irreducible factor "
                        "of degree >= 2: block not split over the ground field")
            if len(roots) <= 1:
                nxt.append(e)
                continue
            for r in roots:
                # projection onto the r-eigenspace inside eZ:
                # prod_{s != r} (w - s e)/(r - s)
                proj = dict(corner_unit)
                for s in roots:
                    if s == r:
                        continue
                    factor = vec_sub(field, w, vec_scale(field, corner_unit, s))
                    proj = zalg.mul(proj, vec_scale(
                        field, factor, field.inv(field.sub(r, s))))
                if proj:
                    nxt.append(proj)
        idems = nxt
    return [lift(e) for e in idems]


def _lift_family(alg: FinDimAlgebra, section: List[Vec],
                 family_in_quotient: List[Vec]):
    """Lift a complete orthogonal idempotent family through the radical.

    Lifts sequentially, conjugating each candidate into the corner cut out by
    the previously lifted idempotents so that orthogonality and the sum-to-one
    property hold on the nose.
    """
    field = alg.field

    def preimage(vq: Vec) -> Vec:
        out: Vec = {}
        for j, c in vq.items():
            out = vec_add(field, out, vec_scale(field, section[j], c))
        return out

    lifted: List[Vec] = []
    running = dict(alg.unit)  # unit of the current corner (1 - sum lifted)
    for eq in family_in_quotient:
        cand = preimage(eq)
        cand = alg.mul(alg.mul(running, cand), running)
        e = _newton_idempotent(alg, cand)
        lifted.append(e)
        running = vec_sub(field, running, e)
    if running:
        raise LinAlgError("lifted idempotents do not sum to the unit")
    return lifted


def _newton_idempotent(alg: FinDimAlgebra, a: Vec) -> Vec:
    """Iterate e <- 3e^2 - 2e^3; exact convergence since J is nilpotent."""
    field = alg.field
    e = dict(a)
    for _ in range(alg.dim + 2):
        e2 = alg.mul(e, e)
        if e2 == e:
            return e
        e3 = alg.mul(e2, e)
        three = field(3)
        two = field(2)
        e = vec_sub(field, vec_scale(field, e2, three),
                    vec_scale(field, e3, two))
    raise LinAlgError("idempotent lifting did not converge")


def _isqrt(n: int) -> int:
    x = int(n ** 0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x
