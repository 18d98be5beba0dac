"""Graded basis indices, sparse vectors, structure-constant brackets and identity checks.

An algebra is a family of bracket rules, one per parity pair, whose
coefficients are polynomials in the source indices (m, i, n, j) and the
parameter q.  Brackets are total on Z x Z indices; a `Window` only limits
which identities get enumerated, never the evaluation itself.

Two evaluation layers coexist:

* a scalar layer (`bracket_basis`, `bracket_vec`) producing exact `Fraction`
  or `RatFunc` coefficients, used for reports and as the reference oracle;
* a compiled layer (`CompiledAlgebra`) that clears denominators once per
  algebra and evaluates every structure constant with plain integer
  arithmetic (integers in fixed-q mode, integer coefficient tuples in
  generic mode).  All verification and solver loops run on this layer; a
  uniform per-value scale factor den * b**D makes the results exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, NamedTuple

from .errors import UnknownParityPair
from .scalars import Poly, RatFunc, Scalar, from_fraction, scalar_one

EVEN = 0
ODD = 1
Parity = int

_PARITY_NAMES = {EVEN: "even", ODD: "odd"}
_PARITY_VALUES = {"even": EVEN, "odd": ODD}
_BASIS_LETTER = {EVEN: "L", ODD: "G"}


def parity_name(p: Parity) -> str:
    return _PARITY_NAMES[p]


def parity_from_name(name: str) -> Parity:
    try:
        return _PARITY_VALUES[name]
    except KeyError:
        raise ValueError(f"parity must be 'even' or 'odd', got {name!r}") from None


class BasisIndex(NamedTuple):
    """One basis element: L[m,i] when even, G[m,i] when odd."""

    parity: Parity
    m: int
    i: int

    def __str__(self) -> str:
        return f"{_BASIS_LETTER[self.parity]}[{self.m},{self.i}]"

    def json(self) -> list:
        return [parity_name(self.parity), self.m, self.i]


def index_from_json(item: Iterable) -> BasisIndex:
    p, m, i = item
    return BasisIndex(parity_from_name(p), int(m), int(i))


class SparseVector:
    """Finitely supported vector over the basis; no zero coefficients stored."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict[BasisIndex, Scalar] | None = None):
        if entries is None:
            self.entries = {}
        else:
            self.entries = {k: v for k, v in entries.items() if v}

    @classmethod
    def basis(cls, idx: BasisIndex, coeff: Scalar) -> "SparseVector":
        out = cls()
        if coeff:
            out.entries[idx] = coeff
        return out

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def items(self) -> list[tuple[BasisIndex, Scalar]]:
        """Entries in deterministic (parity, m, i) order."""
        return sorted(self.entries.items())

    def add_term(self, idx: BasisIndex, coeff: Scalar) -> None:
        cur = self.entries.get(idx)
        if cur is None:
            if coeff:
                self.entries[idx] = coeff
        else:
            new = cur + coeff
            if new:
                self.entries[idx] = new
            else:
                del self.entries[idx]

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = SparseVector(dict(self.entries))
        for k, v in other.entries.items():
            out.add_term(k, v)
        return out

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        out = SparseVector(dict(self.entries))
        for k, v in other.entries.items():
            out.add_term(k, -v)
        return out

    def scale(self, c: Scalar) -> "SparseVector":
        if not c:
            return SparseVector()
        return SparseVector({k: v * c for k, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.items()))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"({v})*{k}" for k, v in self.items())

    def __repr__(self) -> str:
        return f"SparseVector({self})"


@dataclass(frozen=True)
class Window:
    """Symmetric index box |m| <= m_max, |i| <= i_max used to truncate enumerations."""

    m_max: int
    i_max: int

    def __post_init__(self):
        if self.m_max < 1 or self.i_max < 1:
            raise ValueError("window bounds must be positive")

    def contains(self, m: int, i: int) -> bool:
        return -self.m_max <= m <= self.m_max and -self.i_max <= i <= self.i_max

    def contains_index(self, idx: BasisIndex) -> bool:
        return self.contains(idx.m, idx.i)

    def points(self) -> list[tuple[int, int]]:
        return [(m, i)
                for m in range(-self.m_max, self.m_max + 1)
                for i in range(-self.i_max, self.i_max + 1)]

    def basis(self, parities: tuple[Parity, ...]) -> list[BasisIndex]:
        return [BasisIndex(p, m, i) for p in parities for m, i in self.points()]

    def __le__(self, other: "Window") -> bool:
        return self.m_max <= other.m_max and self.i_max <= other.i_max

    @classmethod
    def parse(cls, text: str) -> "Window":
        m, _, i = text.strip().lower().partition("x")
        return cls(int(m), int(i))

    def __str__(self) -> str:
        return f"{self.m_max}x{self.i_max}"


# monomial key: exponents of (m, i, n, j, q)
Monomials = dict[tuple[int, int, int, int, int], Fraction]


@dataclass
class BracketRule:
    """Coefficient of [x, y] for one ordered parity pair, as an expanded polynomial."""

    left: Parity
    right: Parity
    symmetric: bool
    monomials: Monomials

    def q_degree(self) -> int:
        return max((k[4] for k in self.monomials), default=0)

    def swapped(self) -> "BracketRule":
        """Rule for the reversed parity order via [y,x] = -(-1)^{|x||y|} [x,y]."""
        sign = 1 if (self.left & self.right) else -1
        monos = {(en, ej, em, ei, eq): sign * c
                 for (em, ei, en, ej, eq), c in self.monomials.items()}
        return BracketRule(self.right, self.left, self.symmetric, monos)


@dataclass
class AlgebraSpec:
    """Bracket rules plus the bound coefficient mode (q = None means generic).

    Treated as immutable after construction; safe to share between threads.
    """

    name: str
    is_super: bool
    q: Fraction | None
    rules: dict[tuple[Parity, Parity], BracketRule]
    _compiled: "CompiledAlgebra | None" = field(default=None, repr=False, compare=False)

    @property
    def parities(self) -> tuple[Parity, ...]:
        return (EVEN, ODD) if self.is_super else (EVEN,)

    def rule_for(self, pa: Parity, pb: Parity) -> tuple[BracketRule, bool]:
        """(rule, swapped) covering the ordered pair, or UnknownParityPair."""
        rule = self.rules.get((pa, pb))
        if rule is not None:
            return rule, False
        rule = self.rules.get((pb, pa))
        if rule is not None:
            return rule, True
        raise UnknownParityPair(
            f"algebra {self.name!r} has no rule for parities "
            f"({parity_name(pa)}, {parity_name(pb)})")

    def compiled(self) -> "CompiledAlgebra":
        if self._compiled is None:
            self._compiled = CompiledAlgebra(self)
        return self._compiled


# --- compiled integer layer --------------------------------------------------

def _poly_src(monoms: dict[tuple[int, int, int, int], int]) -> str:
    terms = []
    for (em, ei, en, ej), c in sorted(monoms.items()):
        if c == 0:
            continue
        factors = []
        for var, e in (("m", em), ("i", ei), ("n", en), ("j", ej)):
            factors.extend([var] * e)
        terms.append("*".join([str(c)] + factors) if factors else str(c))
    return " + ".join(terms) if terms else "0"


def _tup_mul(a: tuple, b: tuple) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for k, c in enumerate(a):
        if c:
            for l, d in enumerate(b):
                if d:
                    out[k + l] += c * d
    return tuple(out)


def _tup_sub(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a = a + (0,) * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + (0,) * (len(a) - len(b))
    return tuple(x - y for x, y in zip(a, b))


def _tup_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a = a + (0,) * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + (0,) * (len(a) - len(b))
    return tuple(x + y for x, y in zip(a, b))


def _tup_neg(a: tuple) -> tuple:
    return tuple(-x for x in a)


def _tup_is_zero(a: tuple) -> bool:
    return not any(a)


def _int_mul(a: int, b: int) -> int:
    return a * b


def _int_sub(a: int, b: int) -> int:
    return a - b


def _int_add(a: int, b: int) -> int:
    return a + b


def _int_neg(a: int) -> int:
    return -a


def _int_is_zero(a: int) -> bool:
    return not a


class CompiledAlgebra:
    """Denominator-cleared structure constants for one algebra and one q mode.

    Every evaluated coefficient equals ``scale`` times the true value, where
    ``scale = den * b**D`` in fixed mode (q = a/b in lowest terms, D the
    maximal q-degree over all rules) and ``den`` alone in generic mode.  In
    fixed mode values are ints; in generic mode, (D+1)-tuples of ints holding
    the q-power coefficients.
    """

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.generic = spec.q is None
        rules = dict(spec.rules)
        for (pa, pb), rule in list(rules.items()):
            if pa != pb and (pb, pa) not in rules:
                rules[(pb, pa)] = rule.swapped()

        self.D = max((r.q_degree() for r in rules.values()), default=0)
        den = 1
        for r in rules.values():
            for c in r.monomials.values():
                den = lcm(den, c.denominator)
        self.den = den
        if self.generic:
            self.qnum = self.qden = None
            self.scale = Fraction(den)
        else:
            self.qnum = spec.q.numerator
            self.qden = spec.q.denominator
            self.scale = Fraction(den * self.qden ** self.D)

        self.pair: dict[tuple[Parity, Parity], Callable[[int, int, int, int], object]] = {}
        for key, rule in rules.items():
            self.pair[key] = self._compile(rule)

        if self.generic:
            self.vzero = (0,) * (self.D + 1)
            self.vmul, self.vadd, self.vsub = _tup_mul, _tup_add, _tup_sub
            self.vneg, self.vis_zero = _tup_neg, _tup_is_zero
        else:
            self.vzero = 0
            self.vmul, self.vadd, self.vsub = _int_mul, _int_add, _int_sub
            self.vneg, self.vis_zero = _int_neg, _int_is_zero

    def _compile(self, rule: BracketRule) -> Callable:
        by_pow: list[dict[tuple[int, int, int, int], int]] = [dict() for _ in range(self.D + 1)]
        for (em, ei, en, ej, eq), c in rule.monomials.items():
            ic = c * self.den
            assert ic.denominator == 1
            by_pow[eq][(em, ei, en, ej)] = by_pow[eq].get((em, ei, en, ej), 0) + ic.numerator
        srcs = [_poly_src(p) for p in by_pow]
        if self.generic:
            body = "(" + ", ".join(f"({s})" for s in srcs) + ("," if self.D == 0 else "") + ")"
        else:
            a, b = self.qnum, self.qden
            parts = []
            for k, s in enumerate(srcs):
                if s == "0":
                    continue
                w = a ** k * b ** (self.D - k)
                if w == 0:
                    continue
                parts.append(f"({s})" if w == 1 else f"({s})*{w}")
            body = " + ".join(parts) if parts else "0"
        fn = eval("lambda m,i,n,j: " + body, {"__builtins__": {}}, {})  # noqa: S307 - self-generated source
        return fn

    def coeff(self, pa: Parity, pb: Parity, ma: int, ia: int, nb: int, jb: int):
        fn = self.pair.get((pa, pb))
        if fn is None:
            raise UnknownParityPair(
                f"algebra {self.spec.name!r} has no rule for parities "
                f"({parity_name(pa)}, {parity_name(pb)})")
        return fn(ma, ia, nb, jb)

    def to_scalar(self, v) -> Scalar:
        """Divide the uniform scale back out, returning the true coefficient."""
        if self.generic:
            return RatFunc(Poly(Fraction(c, self.den) for c in v))
        return Fraction(v) / self.scale


# --- scalar layer ------------------------------------------------------------

def _monomials_scalar(monos: Monomials, m: int, i: int, n: int, j: int,
                      q: Fraction | None) -> Scalar:
    if q is not None:
        acc = Fraction(0)
        for (em, ei, en, ej, eq), c in monos.items():
            acc += c * m ** em * i ** ei * n ** en * j ** ej * q ** eq
        return acc
    deg = max((k[4] for k in monos), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for (em, ei, en, ej, eq), c in monos.items():
        coeffs[eq] += c * m ** em * i ** ei * n ** en * j ** ej
    return RatFunc(Poly(coeffs))


def bracket_coeff(alg: AlgebraSpec, x: BasisIndex, y: BasisIndex) -> Scalar:
    """Structure constant of [x, y] (the output index is (m+n, i+j))."""
    rule, swapped = alg.rule_for(x.parity, y.parity)
    if not swapped:
        return _monomials_scalar(rule.monomials, x.m, x.i, y.m, y.i, alg.q)
    val = _monomials_scalar(rule.monomials, y.m, y.i, x.m, x.i, alg.q)
    sign = 1 if (x.parity & y.parity) else -1
    return val if sign == 1 else -val


def bracket_basis(alg: AlgebraSpec, x: BasisIndex, y: BasisIndex) -> SparseVector:
    """[x, y] as a sparse vector (a single term, or empty when the coefficient vanishes)."""
    val = bracket_coeff(alg, x, y)
    out = BasisIndex((x.parity + y.parity) & 1, x.m + y.m, x.i + y.i)
    return SparseVector.basis(out, val)


def bracket_vec(alg: AlgebraSpec, u: SparseVector, v: SparseVector) -> SparseVector:
    """Bilinear extension of bracket_basis."""
    out = SparseVector()
    for kx, cx in u.entries.items():
        for ky, cy in v.entries.items():
            val = bracket_coeff(alg, kx, ky) * cx * cy
            if val:
                out.add_term(BasisIndex((kx.parity + ky.parity) & 1,
                                        kx.m + ky.m, kx.i + ky.i), val)
    return out


# --- verification reports ----------------------------------------------------

MAX_REPORT_VIOLATIONS = 100


@dataclass
class VerificationReport:
    """Outcome of an exhaustive identity check over a window.

    Violations are data, not errors; at most MAX_REPORT_VIOLATIONS carry
    details, the rest are counted in total_violations.
    """

    checked: int
    passed: bool
    violations: list[dict]
    total_violations: int
    notes: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {"checked": self.checked,
               "violations": self.violations,
               "pass": self.passed}
        if self.total_violations > len(self.violations):
            out["total_violations"] = self.total_violations
        out.update(self.notes)
        return out


class _ViolationLog:
    def __init__(self):
        self.items: list[dict] = []
        self.total = 0

    @property
    def full(self) -> bool:
        return len(self.items) >= MAX_REPORT_VIOLATIONS

    def record(self, indices: Iterable[BasisIndex], lhs, rhs) -> None:
        self.total += 1
        if len(self.items) < MAX_REPORT_VIOLATIONS:
            self.items.append({"indices": [idx.json() for idx in indices],
                               "lhs": str(lhs), "rhs": str(rhs)})

    def record_lazy(self, indices: Iterable[BasisIndex], detail) -> None:
        """detail() -> (lhs, rhs), evaluated only while the log stores details."""
        self.total += 1
        if len(self.items) < MAX_REPORT_VIOLATIONS:
            lhs, rhs = detail()
            self.items.append({"indices": [idx.json() for idx in indices],
                               "lhs": str(lhs), "rhs": str(rhs)})

    def report(self, checked: int, notes: dict | None = None) -> VerificationReport:
        return VerificationReport(checked=checked, passed=self.total == 0,
                                  violations=self.items, total_violations=self.total,
                                  notes=notes or {})


def verify_antisymmetry(alg: AlgebraSpec, w: Window) -> VerificationReport:
    """Check [x,y] + (-1)^{|x||y|} [y,x] = 0 on all unordered basis pairs in w."""
    comp = alg.compiled()
    basis = w.basis(alg.parities)
    pair = comp.pair
    vadd, vsub, vis_zero = comp.vadd, comp.vsub, comp.vis_zero
    log = _ViolationLog()
    checked = 0
    for a, x in enumerate(basis):
        px, mx, ix = x
        for y in basis[a:]:
            py, my, iy = y
            checked += 1
            cxy = pair[(px, py)](mx, ix, my, iy)
            cyx = pair[(py, px)](my, iy, mx, ix)
            resid = vsub(cxy, cyx) if (px & py) else vadd(cxy, cyx)
            if not vis_zero(resid):
                lhs = bracket_basis(alg, x, y)
                sign = 1 if (px & py) else -1
                rhs = bracket_basis(alg, y, x).scale(from_fraction(sign, alg.q))
                log.record((x, y), lhs, rhs)
    return log.report(checked)


def bracket_one(alg: AlgebraSpec) -> Scalar:
    return scalar_one(alg.q)


def jacobi_sides(alg: AlgebraSpec, x: BasisIndex, y: BasisIndex,
                 z: BasisIndex) -> tuple[SparseVector, SparseVector]:
    """Scalar-layer evaluation of [x,[y,z]] and [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]."""
    bx = SparseVector.basis(x, bracket_one(alg))
    by = SparseVector.basis(y, bracket_one(alg))
    bz = SparseVector.basis(z, bracket_one(alg))
    lhs = bracket_vec(alg, bx, bracket_vec(alg, by, bz))
    rhs = bracket_vec(alg, bracket_vec(alg, bx, by), bz)
    t2 = bracket_vec(alg, by, bracket_vec(alg, bx, bz))
    if x.parity and y.parity:
        rhs = rhs - t2
    else:
        rhs = rhs + t2
    return lhs, rhs


def verify_jacobi(alg: AlgebraSpec, w: Window) -> VerificationReport:
    """Check the graded Jacobi identity [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
    on all basis triples in w; symbolic in q when the algebra is generic."""
    comp = alg.compiled()
    basis = [tuple(idx) for idx in w.basis(alg.parities)]
    pair = comp.pair
    vmul, vadd, vsub, vis_zero = comp.vmul, comp.vadd, comp.vsub, comp.vis_zero
    log = _ViolationLog()
    checked = 0
    for px, mx, ix in basis:
        for py, my, iy in basis:
            pxy = px ^ py
            sign_odd = px & py
            for pz, mz, iz in basis:
                checked += 1
                c1 = pair[(py, pz)](my, iy, mz, iz)
                c2 = pair[(px, py ^ pz)](mx, ix, my + mz, iy + iz)
                c3 = pair[(px, py)](mx, ix, my, iy)
                c4 = pair[(pxy, pz)](mx + my, ix + iy, mz, iz)
                c5 = pair[(px, pz)](mx, ix, mz, iz)
                c6 = pair[(py, px ^ pz)](my, iy, mx + mz, ix + iz)
                resid = vsub(vmul(c1, c2), vmul(c3, c4))
                t2 = vmul(c5, c6)
                resid = vadd(resid, t2) if sign_odd else vsub(resid, t2)
                if not vis_zero(resid):
                    x = BasisIndex(px, mx, ix)
                    y = BasisIndex(py, my, iy)
                    z = BasisIndex(pz, mz, iz)
                    lhs, rhs = jacobi_sides(alg, x, y, z)
                    log.record((x, y, z), lhs, rhs)
    return log.report(checked)
