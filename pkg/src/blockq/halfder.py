"""Half-derivation constraint systems, exact null spaces and window-stabilized classification.

A homogeneous map of degree (parity shift, r, s) sends basis (p, m, i) to
d(p, m, i) times basis (p + shift, m + r, i + s).  Requiring the map to be a
half-(super)derivation,

    2 phi([x, y]) = [phi(x), y] + (-1)^{|phi||x|} [x, phi(y)],

and projecting onto the single graded output index turns every unordered
basis pair into one linear equation in the d-coefficients.  Rows are only
generated when all three source indices (m,i), (n,j), (m+n,i+j) lie in the
window, so boundary unknowns may be under-constrained; `stabilize` removes
those truncation artifacts by intersecting restrictions of null spaces from
nested windows.

Row coefficients are stored denominator-cleared (see CompiledAlgebra); the
null space is unaffected by row scaling and is computed exactly over the
active field, in canonical reduced echelon form with unknowns ordered
(parity, m, i) lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (EVEN, ODD, AlgebraSpec, BasisIndex, Parity, SparseVector,
                      VerificationReport, Window, _ViolationLog, bracket_basis,
                      bracket_vec, parity_name)
from .errors import (IntegralityViolation, OddMapOnNonSuper, UnknownMapName,
                     WrongQ)
from .scalars import RatFunc, Poly, Scalar, format_scalar, from_fraction, inv, scalar_one


@dataclass(frozen=True)
class MapDegree:
    """Homogeneous degree of a graded linear map."""

    parity_shift: Parity
    r: int
    s: int

    def __str__(self) -> str:
        return f"({parity_name(self.parity_shift)},{self.r},{self.s})"


@dataclass
class GradedMap:
    """A homogeneous map given by its coefficient table d(parity, m, i).

    The image of basis (p, m, i) is table[(p, m, i)] times basis
    (p + parity_shift, m + r, i + s); indices missing from the table map to
    zero.  `rule` names the closed form the table was derived from, when any.
    """

    degree: MapDegree
    table: dict[BasisIndex, Scalar]
    rule: str | None = None

    def __post_init__(self):
        self.table = {k: v for k, v in self.table.items() if v}

    def image_index(self, src: BasisIndex) -> BasisIndex:
        d = self.degree
        return BasisIndex((src.parity + d.parity_shift) & 1, src.m + d.r, src.i + d.s)

    def apply_basis(self, x: BasisIndex) -> SparseVector:
        c = self.table.get(x)
        if not c:
            return SparseVector()
        return SparseVector.basis(self.image_index(x), c)

    def apply_vec(self, v: SparseVector) -> SparseVector:
        out = SparseVector()
        for idx, c in v.entries.items():
            d = self.table.get(idx)
            if d:
                out.add_term(self.image_index(idx), d * c)
        return out

    def restricted(self, w: Window) -> "GradedMap":
        return GradedMap(self.degree,
                         {k: v for k, v in self.table.items() if w.contains_index(k)},
                         rule=self.rule)

    @property
    def is_zero(self) -> bool:
        return not self.table

    def table_json(self) -> list[dict]:
        return [{"parity": parity_name(k.parity), "m": k.m, "i": k.i,
                 "value": format_scalar(v)}
                for k, v in sorted(self.table.items())]


MapCombo = list[tuple[Scalar, GradedMap]]


def combo_apply(terms: MapCombo, x: BasisIndex) -> SparseVector:
    out = SparseVector()
    for weight, gm in terms:
        c = gm.table.get(x)
        if c:
            out.add_term(gm.image_index(x), weight * c)
    return out


# --- constraint assembly -------------------------------------------------------

Row = tuple[tuple[tuple[int, object], ...], BasisIndex, BasisIndex]


@dataclass
class ConstraintSystem:
    """Linear system in the d-coefficients over one window.

    Row values are denominator-cleared (integers in fixed mode, integer
    q-coefficient tuples in generic mode); `scalar_rows` recovers the true
    field values.  Each row carries the generating pair as provenance.
    """

    algebra: AlgebraSpec
    degree: MapDegree
    window: Window
    unknowns: list[BasisIndex]
    rows: list[Row]

    def scalar_rows(self) -> list[dict[BasisIndex, Scalar]]:
        comp = self.algebra.compiled()
        return [{self.unknowns[u]: comp.to_scalar(v) for u, v in entries}
                for entries, _x, _y in self.rows]

    def provenances(self) -> list[tuple[BasisIndex, BasisIndex]]:
        return [(x, y) for _e, x, y in self.rows]


def build_constraints(alg: AlgebraSpec, deg: MapDegree, w: Window) -> ConstraintSystem:
    """One row per unordered in-window basis pair, zero rows dropped."""
    if deg.parity_shift == ODD and not alg.is_super:
        raise OddMapOnNonSuper(
            f"odd-shift maps need a superalgebra, {alg.name!r} has no odd part")
    comp = alg.compiled()
    shift, r, s = deg.parity_shift, deg.r, deg.s
    mm, ii = w.m_max, w.i_max
    width = 2 * ii + 1
    npts = (2 * mm + 1) * width
    unknowns = w.basis(alg.parities)

    if comp.generic:
        def dbl(v):
            return tuple(c + c for c in v)
    else:
        def dbl(v):
            return v + v
    vneg, vadd, vsub, is0 = comp.vneg, comp.vadd, comp.vsub, comp.vis_zero

    combos = [(EVEN, EVEN)]
    if alg.is_super:
        combos += [(EVEN, ODD), (ODD, ODD)]

    rows: list[Row] = []
    for p1, p2 in combos:
        f_out = comp.pair[(p1, p2)]
        f_x = comp.pair[(p1 ^ shift, p2)]
        f_y = comp.pair[(p1, p2 ^ shift)]
        flip_y = bool(shift and p1)
        base1 = p1 * npts
        base2 = p2 * npts
        base_out = (p1 ^ p2) * npts
        same = p1 == p2
        for m1 in range(-mm, mm + 1):
            m2lo = max(-mm, -mm - m1)
            m2hi = min(mm, mm - m1)
            for i1 in range(-ii, ii + 1):
                u_x = base1 + (m1 + mm) * width + (i1 + ii)
                i2lo = max(-ii, -ii - i1)
                i2hi = min(ii, ii - i1)
                start_m2 = max(m2lo, m1) if same else m2lo
                for m2 in range(start_m2, m2hi + 1):
                    start_i2 = max(i2lo, i1) if same and m2 == m1 else i2lo
                    for i2 in range(start_i2, i2hi + 1):
                        c_out = f_out(m1, i1, m2, i2)
                        c_x = f_x(m1 + r, i1 + s, m2, i2)
                        c_y = f_y(m1, i1, m2 + r, i2 + s)
                        d: dict[int, object] = {}
                        if not is0(c_out):
                            d[base_out + (m1 + m2 + mm) * width + (i1 + i2 + ii)] = dbl(c_out)
                        if not is0(c_x):
                            d[u_x] = vsub(d[u_x], c_x) if u_x in d else vneg(c_x)
                        if not is0(c_y):
                            u_y = base2 + (m2 + mm) * width + (i2 + ii)
                            t = c_y if flip_y else vneg(c_y)
                            d[u_y] = vadd(d[u_y], t) if u_y in d else t
                        entries = tuple((u, v) for u, v in sorted(d.items()) if not is0(v))
                        if entries:
                            rows.append((entries,
                                         BasisIndex(p1, m1, i1),
                                         BasisIndex(p2, m2, i2)))
    return ConstraintSystem(algebra=alg, degree=deg, window=w,
                            unknowns=unknowns, rows=rows)


# --- exact linear algebra --------------------------------------------------------

def _scalar_degree(v: Scalar) -> int:
    if isinstance(v, RatFunc):
        return v.num.degree + v.den.degree
    return 0


def _insert_row(pivots: dict, row: dict, canonical: bool) -> None:
    """Reduce `row` against the maintained reduced echelon set; insert if nonzero.

    With canonical=True the pivot is the leftmost column, which together with
    the mutual reduction yields the unique reduced echelon form of the span.
    Otherwise the pivot minimizes coefficient degree (then column), an
    expression-swell heuristic for generic-q elimination.
    """
    for c in sorted(row):
        if c in row and c in pivots:
            f = row[c]
            for cc, vv in pivots[c].items():
                cur = row.get(cc)
                t = -(f * vv) if cur is None else cur - f * vv
                if t:
                    row[cc] = t
                else:
                    row.pop(cc, None)
    if not row:
        return
    if canonical:
        p = min(row)
    else:
        p = min(row, key=lambda c: (_scalar_degree(row[c]), c))
    f = inv(row[p])
    prow = {c: v * f for c, v in row.items()}
    for per in pivots.values():
        g = per.get(p)
        if g:
            for cc, vv in prow.items():
                cur = per.get(cc)
                t = -(g * vv) if cur is None else cur - g * vv
                if t:
                    per[cc] = t
                else:
                    per.pop(cc, None)
    pivots[p] = prow


def _rref_vectors(vectors: Iterable[dict]) -> list[dict]:
    """Canonical reduced echelon basis of the span, rows ordered by pivot."""
    pivots: dict = {}
    for vec in vectors:
        _insert_row(pivots, dict(vec), canonical=True)
    return [pivots[p] for p in sorted(pivots)]


def _kernel(rows: Iterable[dict], cols: Sequence, one: Scalar) -> list[dict]:
    """Canonical null-space basis of the row system over the given columns."""
    pivots: dict = {}
    ncols = len(cols)
    for row in rows:
        _insert_row(pivots, dict(row), canonical=False)
        if len(pivots) == ncols:
            return []
    vecs = []
    for f in cols:
        if f in pivots:
            continue
        v = {f: one}
        for p, prow in pivots.items():
            c = prow.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    return _rref_vectors(vecs)


def _propagate_zeros(n: int, rows: list[Row]) -> bytearray:
    """Worklist propagation of singleton rows c*d(u) = 0  =>  d(u) = 0."""
    forced = bytearray(n)
    counts = [len(entries) for entries, _x, _y in rows]
    occ: list[list[int]] = [[] for _ in range(n)]
    for rid, (entries, _x, _y) in enumerate(rows):
        for u, _v in entries:
            occ[u].append(rid)
    stack = []

    def force(u: int) -> None:
        if not forced[u]:
            forced[u] = 1
            stack.append(u)

    for rid, (entries, _x, _y) in enumerate(rows):
        if counts[rid] == 1:
            force(entries[0][0])
    while stack:
        u = stack.pop()
        for rid in occ[u]:
            counts[rid] -= 1
            if counts[rid] == 1:
                for uu, _v in rows[rid][0]:
                    if not forced[uu]:
                        force(uu)
                        break
    return forced


@dataclass
class NullSpaceBasis:
    """Exact solution space in canonical reduced echelon form.

    Vectors are tables over BasisIndex unknowns; the pivot of each vector is
    its first nonzero unknown in (parity, m, i) order, with coefficient one
    and zeros at the pivots of the other vectors.
    """

    dimension: int
    degree: MapDegree
    window: Window
    vectors: list[dict[BasisIndex, Scalar]]

    def maps(self) -> list[GradedMap]:
        return [GradedMap(self.degree, dict(v)) for v in self.vectors]

    def contains(self, table: dict[BasisIndex, Scalar]) -> bool:
        rem = {k: v for k, v in table.items() if v}
        for vec in self.vectors:
            p = min(vec)
            c = rem.get(p)
            if c:
                for k, v in vec.items():
                    cur = rem.get(k)
                    t = -(c * v) if cur is None else cur - c * v
                    if t:
                        rem[k] = t
                    else:
                        rem.pop(k, None)
        return not rem

    def tables_json(self) -> list[list[dict]]:
        return [GradedMap(self.degree, dict(v)).table_json() for v in self.vectors]


def null_space(cs: ConstraintSystem) -> NullSpaceBasis:
    """Exact reduced null-space basis; deterministic given the unknown order."""
    comp = cs.algebra.compiled()
    n = len(cs.unknowns)
    forced = _propagate_zeros(n, cs.rows)

    if comp.generic:
        def lift(v):
            return RatFunc(Poly(v))
    else:
        def lift(v):
            return Fraction(v)

    residual = []
    for entries, _x, _y in cs.rows:
        live = [(u, v) for u, v in entries if not forced[u]]
        if len(live) >= 2:
            residual.append({u: lift(v) for u, v in live})
    survivors = [u for u in range(n) if not forced[u]]
    vecs = _kernel(residual, survivors, scalar_one(cs.algebra.q))
    tables = [{cs.unknowns[u]: v for u, v in vec.items()} for vec in vecs]
    tables = _rref_vectors(tables)
    return NullSpaceBasis(dimension=len(tables), degree=cs.degree,
                          window=cs.window, vectors=tables)


# --- window stabilization ---------------------------------------------------------

@dataclass
class StabilizeResult:
    stable_dim: int
    basis: NullSpaceBasis
    window_dims: list[int]
    intersection_dims: list[int]
    warning: bool


def _intersect(U: list[dict], V: list[dict], one: Scalar) -> list[dict]:
    if not U or not V:
        return []
    coords: set = set()
    for vec in U + V:
        coords.update(vec)
    ku = len(U)
    rows = []
    for c in sorted(coords):
        row = {}
        for k, vec in enumerate(U):
            a = vec.get(c)
            if a:
                row[k] = a
        for l, vec in enumerate(V):
            b = vec.get(c)
            if b:
                row[ku + l] = -b
        if row:
            rows.append(row)
    combos = _kernel(rows, range(ku + len(V)), one)
    out = []
    for combo in combos:
        vec: dict = {}
        for k, a in combo.items():
            if k >= ku:
                continue
            for c, v in U[k].items():
                cur = vec.get(c)
                t = a * v if cur is None else cur + a * v
                if t:
                    vec[c] = t
                else:
                    vec.pop(c, None)
        if vec:
            out.append(vec)
    return _rref_vectors(out)


def stabilize(alg: AlgebraSpec, deg: MapDegree,
              windows: Sequence[Window]) -> StabilizeResult:
    """Intersect restrictions of null spaces from nested windows onto the smallest.

    Kills truncation-boundary solutions without guessing extension behavior;
    the warning flag is set when the last window still changed the answer.
    """
    if len(windows) < 2:
        raise ValueError("stabilize needs at least two nested windows")
    for a, b in zip(windows, windows[1:]):
        if not (a <= b):
            raise ValueError("windows must be ascending")
    w0 = windows[0]
    one = scalar_one(alg.q)
    ns0 = null_space(build_constraints(alg, deg, w0))
    window_dims = [ns0.dimension]
    current = ns0.vectors
    inter_dims = [len(current)]
    for w in windows[1:]:
        if not current:
            # intersections only shrink; an empty one is final
            inter_dims.append(0)
            continue
        ns = null_space(build_constraints(alg, deg, w))
        window_dims.append(ns.dimension)
        restricted = _rref_vectors(
            [{k: v for k, v in vec.items() if w0.contains_index(k)}
             for vec in ns.vectors])
        current = _intersect(current, restricted, one)
        inter_dims.append(len(current))
    warning = inter_dims[-1] != inter_dims[-2]
    basis = NullSpaceBasis(dimension=len(current), degree=deg, window=w0,
                           vectors=current)
    return StabilizeResult(stable_dim=len(current), basis=basis,
                           window_dims=window_dims, intersection_dims=inter_dims,
                           warning=warning)


# --- named maps -------------------------------------------------------------------

NAMED_MAPS = ("id", "alpha", "beta", "gamma", "delta", "epsilon")


def _require_super(alg: AlgebraSpec, name: str) -> None:
    if not alg.is_super:
        raise UnknownMapName(f"{name} is only defined on the superalgebra")


def builtin_map(name: str, alg: AlgebraSpec, w: Window) -> GradedMap:
    """Closed-form maps restricted to a window, at the algebra's q.

    id is multiplication by one; alpha hits L[0,-2q] (q in Z); beta hits
    G[0,0] (q = 0); gamma sends G[0,-3q/2] to L[0,-q] (q in 2Z); delta sends
    L[0,0] to G[0,0] and epsilon sends every L[m,i] to G[m,i] (both q = 0).
    """
    q = alg.q
    one = scalar_one(q)
    if name in ("id", "identity"):
        table = {idx: one for idx in w.basis(alg.parities)}
        return GradedMap(MapDegree(EVEN, 0, 0), table, rule="id")
    if name == "alpha":
        if q is None or q.denominator != 1:
            raise IntegralityViolation(
                f"alpha needs q in Z, got {'generic' if q is None else q}")
        qi = q.numerator
        table = {}
        if w.contains(0, -2 * qi):
            table[BasisIndex(EVEN, 0, -2 * qi)] = one
        return GradedMap(MapDegree(EVEN, 0, qi), table, rule="alpha")
    if name == "beta":
        _require_super(alg, "beta")
        if q is None or q != 0:
            raise WrongQ(f"beta needs q = 0, got {'generic' if q is None else q}")
        table = {BasisIndex(ODD, 0, 0): one} if w.contains(0, 0) else {}
        return GradedMap(MapDegree(EVEN, 0, 0), table, rule="beta")
    if name == "gamma":
        _require_super(alg, "gamma")
        if q is None or q.denominator != 1 or q.numerator % 2:
            raise IntegralityViolation(
                f"gamma needs q in 2Z, got {'generic' if q is None else q}")
        qi = q.numerator
        table = {}
        if w.contains(0, -3 * qi // 2):
            table[BasisIndex(ODD, 0, -3 * qi // 2)] = one
        return GradedMap(MapDegree(ODD, 0, qi // 2), table, rule="gamma")
    if name == "delta":
        _require_super(alg, "delta")
        if q is None or q != 0:
            raise WrongQ(f"delta needs q = 0, got {'generic' if q is None else q}")
        table = {BasisIndex(EVEN, 0, 0): one} if w.contains(0, 0) else {}
        return GradedMap(MapDegree(ODD, 0, 0), table, rule="delta")
    if name == "epsilon":
        _require_super(alg, "epsilon")
        if q is None or q != 0:
            raise WrongQ(f"epsilon needs q = 0, got {'generic' if q is None else q}")
        table = {BasisIndex(EVEN, m, i): one for m, i in w.points()}
        return GradedMap(MapDegree(ODD, 0, 0), table, rule="epsilon")
    raise UnknownMapName(f"no built-in map named {name!r}")


def shift_map(alg: AlgebraSpec, w: Window) -> GradedMap:
    """Index shift L[m,i] -> L[m+1,i] (and G likewise); deliberately not a
    half-derivation, useful as a failing specimen."""
    one = scalar_one(alg.q)
    table = {idx: one for idx in w.basis(alg.parities)}
    return GradedMap(MapDegree(EVEN, 1, 0), table, rule="shift")


# --- membership and verification ---------------------------------------------------

def half_derivation_sides(alg: AlgebraSpec, gm: GradedMap, x: BasisIndex,
                          y: BasisIndex) -> tuple[SparseVector, SparseVector]:
    """Scalar-layer 2*phi([x,y]) and [phi(x),y] + (-1)^{|phi||x|}[x,phi(y)]."""
    two = from_fraction(2, alg.q)
    lhs = gm.apply_vec(bracket_basis(alg, x, y)).scale(two)
    tx = bracket_vec(alg, gm.apply_basis(x), SparseVector.basis(y, scalar_one(alg.q)))
    ty = bracket_vec(alg, SparseVector.basis(x, scalar_one(alg.q)), gm.apply_basis(y))
    if gm.degree.parity_shift and x.parity:
        rhs = tx - ty
    else:
        rhs = tx + ty
    return lhs, rhs


def check_map(alg: AlgebraSpec, gm: GradedMap, w: Window) -> VerificationReport:
    """Evaluate every generated constraint row at the map's table."""
    cs = build_constraints(alg, gm.degree, w)
    comp = alg.compiled()
    table = gm.table
    unknowns = cs.unknowns
    generic = comp.generic
    log = _ViolationLog()
    for entries, x, y in cs.rows:
        acc = None
        for u, raw in entries:
            tv = table.get(unknowns[u])
            if not tv:
                continue
            term = tv * RatFunc(Poly(raw)) if generic else tv * raw
            acc = term if acc is None else acc + term
        if acc:
            lhs, rhs = half_derivation_sides(alg, gm, x, y)
            log.record((x, y), lhs, rhs)
    return log.report(len(cs.rows))


# --- classification ------------------------------------------------------------------

@dataclass
class DegreeResult:
    r: int
    s: int
    stable_dim: int
    matched_names: list[str]
    basis: NullSpaceBasis
    warning: bool


@dataclass
class ClassificationReport:
    algebra: str
    q: Fraction | None
    parity_shift: Parity
    degrees: list[DegreeResult]
    total_dim: int
    warnings: list[str]
    bounds: tuple[int, int]
    windows: tuple[Window, ...]

    def to_json_dict(self) -> dict:
        from .scalars import format_q
        return {
            "algebra": self.algebra,
            "q": format_q(self.q),
            "parity_shift": parity_name(self.parity_shift),
            "bounds": [self.bounds[0], self.bounds[1]],
            "windows": [str(w) for w in self.windows],
            "degrees": [{
                "r": d.r, "s": d.s, "stable_dim": d.stable_dim,
                "matched_names": d.matched_names,
                "basis_tables": d.basis.tables_json(),
            } for d in self.degrees],
            "total_dim": self.total_dim,
            "warnings": self.warnings,
        }


def named_candidates(alg: AlgebraSpec, w: Window) -> dict[MapDegree, list[tuple[str, GradedMap]]]:
    """Built-in maps constructible at this q, grouped by degree."""
    out: dict[MapDegree, list[tuple[str, GradedMap]]] = {}
    for name in NAMED_MAPS:
        try:
            gm = builtin_map(name, alg, w)
        except (IntegralityViolation, WrongQ, UnknownMapName):
            continue
        if gm.is_zero:
            continue
        out.setdefault(gm.degree, []).append((name, gm))
    return out


def classify(alg: AlgebraSpec, parity_shift: Parity, bounds: tuple[int, int],
             windows: Sequence[Window]) -> ClassificationReport:
    """Stabilized null-space dimensions for every degree |r| <= R, |s| <= S."""
    R, S = bounds
    w0 = windows[0]
    candidates = named_candidates(alg, w0)
    degrees: list[DegreeResult] = []
    warnings: list[str] = []
    total = 0
    for r in range(-R, R + 1):
        for s in range(-S, S + 1):
            deg = MapDegree(parity_shift, r, s)
            st = stabilize(alg, deg, windows)
            if st.warning:
                warnings.append(f"degree ({r},{s}) did not stabilize: "
                                f"intersection dims {st.intersection_dims}")
            if st.stable_dim:
                matched = [name for name, gm in candidates.get(deg, ())
                           if st.basis.contains(gm.table)]
                degrees.append(DegreeResult(r=r, s=s, stable_dim=st.stable_dim,
                                            matched_names=matched, basis=st.basis,
                                            warning=st.warning))
                total += st.stable_dim
    return ClassificationReport(algebra=alg.name, q=alg.q, parity_shift=parity_shift,
                                degrees=degrees, total_dim=total, warnings=warnings,
                                bounds=(R, S), windows=tuple(windows))
