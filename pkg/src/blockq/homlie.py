"""Hom-Lie twisted Jacobi verification.

For a twisting map phi (a graded map, or a linear combination of them) the
standard cyclic identity

    [phi(x),[y,z]] + [phi(y),[z,x]] + [phi(z),[x,y]] = 0

is evaluated on every basis triple of the window; in the super case the
cyclic terms carry the weights (-1)^{|x||z|}, (-1)^{|y||x|}, (-1)^{|z||y|}.
A second convention with middle term [phi(y),[z,y]] circulates in places;
the report records which of the two each input satisfies, while pass/fail
follows the standard form.
"""

from __future__ import annotations

from math import gcd

from .algebra import (AlgebraSpec, BasisIndex, SparseVector, VerificationReport,
                      Window, _ViolationLog, bracket_vec)
from .halfder import GradedMap, MapCombo, combo_apply
from .scalars import Poly, RatFunc, scalar_one


def _as_combo(maps: GradedMap | MapCombo, alg: AlgebraSpec) -> MapCombo:
    if isinstance(maps, GradedMap):
        return [(scalar_one(alg.q), maps)]
    return list(maps)


def hom_cyclic_sum(alg: AlgebraSpec, terms: MapCombo, x: BasisIndex,
                   y: BasisIndex, z: BasisIndex, literal: bool = False) -> SparseVector:
    """Scalar-layer cyclic sum; `literal` swaps the middle inner bracket to [z,y]."""
    one = scalar_one(alg.q)

    def wrap(a, b, c):
        phi_a = combo_apply(terms, a)
        inner = bracket_vec(alg, SparseVector.basis(b, one), SparseVector.basis(c, one))
        return bracket_vec(alg, phi_a, inner)

    def weight(a, b):
        return -1 if (a.parity and b.parity) else 1

    total = SparseVector()
    parts = [(wrap(x, y, z), weight(x, z)),
             (wrap(y, z, y if literal else x), weight(y, x)),
             (wrap(z, x, y), weight(z, y))]
    for vec, sgn in parts:
        for idx, c in vec.entries.items():
            total.add_term(idx, c if sgn > 0 else -c)
    return total


def hom_jacobi_check(alg: AlgebraSpec, maps: GradedMap | MapCombo,
                     w: Window) -> VerificationReport:
    """Evaluate the twisted cyclic Jacobi identity on all basis triples in w."""
    terms = _as_combo(maps, alg)
    comp = alg.compiled()
    pair = comp.pair
    vis_zero = comp.vis_zero
    generic = comp.generic

    basis = w.basis(alg.parities)
    # phi images per source: list of (target index, weight).  In fixed mode the
    # rational weights are cleared to integers: the identity is linear in phi,
    # so a uniform positive rescaling never changes which triples vanish.
    phi_frac: dict[BasisIndex, list[tuple[BasisIndex, object]]] = {}
    for b in basis:
        img = combo_apply(terms, b)
        if not img.is_zero:
            phi_frac[b] = list(img.entries.items())
    if generic:
        phi = phi_frac
        vmul = comp.vmul

        def scaled(wcoef, raw):
            return wcoef * RatFunc(Poly(raw))
    else:
        den = 1
        for imgs in phi_frac.values():
            for _tgt, c in imgs:
                den = den * c.denominator // gcd(den, c.denominator)
        phi = {b: [(tgt, int(c * den)) for tgt, c in imgs]
               for b, imgs in phi_frac.items()}

        def scaled(wcoef, raw):
            return wcoef * raw

        vmul = comp.vmul

    def term_value(a: BasisIndex, b: BasisIndex, c: BasisIndex):
        """[phi(a), [b,c]] accumulated per output index, None when zero."""
        imgs = phi.get(a)
        if not imgs:
            return None
        c_in = pair[(b.parity, c.parity)](b.m, b.i, c.m, c.i)
        if vis_zero(c_in):
            return None
        pin = (b.parity + c.parity) & 1
        min_, iin = b.m + c.m, b.i + c.i
        out = {}
        for tgt, wcoef in imgs:
            c_out = pair[(tgt.parity, pin)](tgt.m, tgt.i, min_, iin)
            if vis_zero(c_out):
                continue
            key = ((tgt.parity + pin) & 1, tgt.m + min_, tgt.i + iin)
            val = scaled(wcoef, vmul(c_in, c_out))
            cur = out.get(key)
            tot = val if cur is None else cur + val
            if tot:
                out[key] = tot
            else:
                out.pop(key, None)
        return out or None

    def accumulate(acc: dict, vals: dict | None, sgn: int) -> None:
        if not vals:
            return
        for key, v in vals.items():
            v2 = v if sgn > 0 else -v
            cur = acc.get(key)
            tot = v2 if cur is None else cur + v2
            if tot:
                acc[key] = tot
            else:
                acc.pop(key, None)

    log_std = _ViolationLog()
    lit_violations = 0
    checked = 0
    for x in basis:
        for y in basis:
            for z in basis:
                checked += 1
                w1 = -1 if (x.parity and z.parity) else 1
                w2 = -1 if (y.parity and x.parity) else 1
                w3 = -1 if (z.parity and y.parity) else 1
                t1 = term_value(x, y, z)
                t3 = term_value(z, x, y)
                acc_std: dict = {}
                accumulate(acc_std, t1, w1)
                accumulate(acc_std, term_value(y, z, x), w2)
                accumulate(acc_std, t3, w3)
                acc_lit: dict = {}
                accumulate(acc_lit, t1, w1)
                accumulate(acc_lit, term_value(y, z, y), w2)
                accumulate(acc_lit, t3, w3)
                if acc_std:
                    log_std.record_lazy(
                        (x, y, z),
                        lambda x=x, y=y, z=z:
                            (hom_cyclic_sum(alg, terms, x, y, z), "0"))
                if acc_lit:
                    lit_violations += 1
    report = log_std.report(checked)
    report.notes["conventions"] = {"standard": log_std.total == 0,
                                   "literal": lit_violations == 0}
    return report
