"""The skein module of one and two solid tori in the W basis.

Elements are finite Scalar-linear combinations of basis labels W_{lam,mub}
(one brane) or W_{lam1,mub1} (x) W_{lam2,mub2} (two branes).  The torus
operators P_{i,j} act through explicit basis formulas: meridian operators
are diagonal with content-polynomial eigenvalues, longitude operators add
or remove border strips with a height sign, and mixed operators weight the
strips by their content polynomial.

One-brane operations take an aL symbol name ('a', 'a1' or 'a2') naming
which area variable plays the role of a_L; tensor variants bind brane 1 to
'a1' and brane 2 to 'a2'.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from functools import cache
from typing import Optional

from .ring import QRational, Scalar, S_ZERO, S_ONE, Q_ONE, qmono, qint
from .partition import (border_strips, content_poly, contents, hooks, kappa,
                        koike_coefficient, lr_coefficient, partitions)

BasisLabel = namedtuple("BasisLabel", ["lam", "mub"])

VACUUM = BasisLabel((), ())


def label_boxes(label: BasisLabel) -> int:
    return sum(label.lam) + sum(label.mub)


def label_key(label: BasisLabel):
    return (label_boxes(label), label.lam, label.mub)


@dataclass(frozen=True)
class Truncation:
    """Finite window into the completed module."""
    max_boxes_per_brane: int
    a_exponent_bounds: Optional[tuple] = None

    def admits(self, label: BasisLabel) -> bool:
        return label_boxes(label) <= self.max_boxes_per_brane


class _Element:
    """Shared mechanics for linear combinations keyed by label tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {k: v for k, v in terms.items() if not v.is_zero()}
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return type(self)(out, _clean=True)

    def __neg__(self):
        return type(self)({k: -v for k, v in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar):
        if c.is_zero():
            return type(self)({}, _clean=True)
        out = {}
        for k, v in self.terms.items():
            s = v * c
            if not s.is_zero():
                out[k] = s
        return type(self)(out, _clean=True)

    def coeff(self, key) -> Scalar:
        return self.terms.get(key, S_ZERO)

    def __eq__(self, other):
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class SkeinElement(_Element):
    """One-brane element: map BasisLabel -> Scalar."""

    @staticmethod
    def basis(label: BasisLabel) -> "SkeinElement":
        return SkeinElement({label: S_ONE}, _clean=True)

    @staticmethod
    def unit() -> "SkeinElement":
        return SkeinElement.basis(VACUUM)

    def truncate(self, trunc: Truncation) -> "SkeinElement":
        return SkeinElement({k: v for k, v in self.terms.items()
                             if trunc.admits(k)}, _clean=True)

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: label_key(kv[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{v}] W[{list(k.lam)},{list(k.mub)}]"
                          for k, v in self.sorted_items())

    __repr__ = __str__


class TensorElement(_Element):
    """Two-brane element: map (BasisLabel, BasisLabel) -> Scalar."""

    @staticmethod
    def basis(l1: BasisLabel, l2: BasisLabel) -> "TensorElement":
        return TensorElement({(l1, l2): S_ONE}, _clean=True)

    @staticmethod
    def unit() -> "TensorElement":
        return TensorElement.basis(VACUUM, VACUUM)

    def truncate(self, trunc: Truncation) -> "TensorElement":
        return TensorElement(
            {k: v for k, v in self.terms.items()
             if trunc.admits(k[0]) and trunc.admits(k[1])}, _clean=True)

    def sorted_items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (label_key(kv[0][0]), label_key(kv[0][1])))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"[{v}] W[{list(a.lam)},{list(a.mub)}]xW[{list(b.lam)},{list(b.mub)}]"
            for (a, b), v in self.sorted_items())

    __repr__ = __str__


class TripleElement(_Element):
    """Three-brane element, used only by the three-holed-sphere series."""

    @staticmethod
    def unit():
        return TripleElement({(VACUUM, VACUUM, VACUUM): S_ONE}, _clean=True)


# ---------------------------------------------------------------------------
# P-action on basis labels
# ---------------------------------------------------------------------------

def _z_inv(m: int) -> QRational:
    return qint(m).inverse()


@cache
def _p_action(i: int, j: int, lam: tuple, mub: tuple, sym: str) -> tuple:
    """Image of P_{i,j} on W_{lam,mub} as ((label, Scalar), ...)."""
    aL = Scalar.symbol(sym)
    aLi = Scalar.symbol(sym, -1)
    if i == 0 and j == 0:
        c = (aL - aLi) * Scalar.from_q(_z_inv(1))
        return ((BasisLabel(lam, mub), c),)
    if j == 0:
        m = i
        ev = (Scalar.symbol(sym, m) - Scalar.symbol(sym, -m)) \
            * Scalar.from_q(_z_inv(m))
        corr = Scalar.symbol(sym, m) * content_poly(lam, 2 * m) \
            - Scalar.symbol(sym, -m) * content_poly(mub, -2 * m)
        ev = ev + Scalar.from_q(qint(m)) * corr
        return ((BasisLabel(lam, mub), ev),)

    n = j
    out = []
    if n > 0:
        add_to_lam = border_strips(lam, n, "add")
        rem_from_mub = border_strips(mub, n, "remove")
    else:
        add_to_lam = border_strips(lam, -n, "remove")
        rem_from_mub = border_strips(mub, -n, "add")

    if i == 0:
        for res in add_to_lam:
            sgn = QRational.from_fraction(-1 if res.height_parity else 1)
            out.append((BasisLabel(res.result, mub), Scalar.from_q(sgn)))
        for res in rem_from_mub:
            sgn = QRational.from_fraction(-1 if res.height_parity else 1)
            out.append((BasisLabel(lam, res.result), Scalar.from_q(sgn)))
        return tuple(out)

    m = i
    pref = Scalar.from_q(qint(m) * qint(m * n).inverse())
    c_lam = content_poly(lam, 2 * m)
    c_mub = content_poly(mub, -2 * m)
    # the content weights are the literal differences C_alpha - C_lam and
    # C_mub - C_beta, which come out negative for n < 0 strip moves
    for res in add_to_lam:
        sgn = QRational.from_fraction(-1 if res.height_parity else 1)
        strip = content_poly(res.result, 2 * m) - c_lam
        c = pref * Scalar.symbol(sym, m) * strip * Scalar.from_q(sgn)
        if not c.is_zero():
            out.append((BasisLabel(res.result, mub), c))
    for res in rem_from_mub:
        sgn = QRational.from_fraction(-1 if res.height_parity else 1)
        strip = c_mub - content_poly(res.result, -2 * m)
        c = pref * Scalar.symbol(sym, -m) * strip * Scalar.from_q(sgn)
        if not c.is_zero():
            out.append((BasisLabel(lam, res.result), c))
    return tuple(out)


def apply_P(i: int, j: int, x: SkeinElement, aL: str = "a") -> SkeinElement:
    out = {}
    for label, coeff in x.terms.items():
        for tgt, c in _p_action(i, j, label.lam, label.mub, aL):
            p = coeff * c
            s = out.get(tgt)
            out[tgt] = p if s is None else s + p
    return SkeinElement(out)


def apply_word(word, x: SkeinElement, aL: str = "a") -> SkeinElement:
    """Apply the P factors in list order: word [p, r] computes r(p(x))."""
    for (i, j) in word:
        x = apply_P(i, j, x, aL)
    return x


def apply_P_t(i: int, j: int, x: TensorElement, brane: int) -> TensorElement:
    sym = "a1" if brane == 1 else "a2"
    out = {}
    for (l1, l2), coeff in x.terms.items():
        src = l1 if brane == 1 else l2
        for tgt, c in _p_action(i, j, src.lam, src.mub, sym):
            key = (tgt, l2) if brane == 1 else (l1, tgt)
            p = coeff * c
            s = out.get(key)
            out[key] = p if s is None else s + p
    return TensorElement(out)


def apply_word_t(word, x: TensorElement, brane: int) -> TensorElement:
    for (i, j) in word:
        x = apply_P_t(i, j, x, brane)
    return x


# ---------------------------------------------------------------------------
# framing
# ---------------------------------------------------------------------------

def framing_factor(lam: tuple, f: int) -> QRational:
    """((-1)^{|lam|} q^{kappa(lam)})^f."""
    sign = -1 if (sum(lam) * f) % 2 else 1
    return qmono(sign, kappa(lam) * f)


def frame(x: SkeinElement, f: int) -> SkeinElement:
    if f == 0:
        return x
    out = {}
    for label, coeff in x.terms.items():
        if label.mub:
            raise ValueError("framing undefined on mixed labels")
        out[label] = coeff * Scalar.from_q(framing_factor(label.lam, f))
    return SkeinElement(out, _clean=True)


def frame_t(x: TensorElement, f1: int, f2: int) -> TensorElement:
    out = {}
    for (l1, l2), coeff in x.terms.items():
        if l1.mub or l2.mub:
            raise ValueError("framing undefined on mixed labels")
        c = coeff * Scalar.from_q(framing_factor(l1.lam, f1)
                                  * framing_factor(l2.lam, f2))
        out[(l1, l2)] = c
    return TensorElement(out, _clean=True)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

@cache
def _label_product(l1: BasisLabel, l2: BasisLabel) -> tuple:
    """Koike expansion of W_{l1} W_{l2} as ((label, int), ...)."""
    lam, mub = l1
    nu, rhob = l2
    pos_total = sum(lam) + sum(nu)
    neg_total = sum(mub) + sum(rhob)
    out = []
    for k in range(min(pos_total, neg_total) + 1):
        for sigma in partitions(pos_total - k):
            for taub in partitions(neg_total - k):
                m = koike_coefficient(lam, mub, nu, rhob, sigma, taub)
                if m:
                    out.append((BasisLabel(sigma, taub), m))
    return tuple(out)


@cache
def _pair_product(l1: BasisLabel, l2: BasisLabel, twist: int,
                  aL: str = "a1") -> tuple:
    """W_{l1} W_{l2} with a per-product framing twist, as ((label, Scalar), ...)."""
    if twist == 0:
        return tuple((t, Scalar.from_q(QRational.from_fraction(m)))
                     for t, m in _label_product(l1, l2))
    # conjugating the plain product by the framing operator weights each
    # target by q^{twist*(kt(nu) - kt(l1) - kt(l2))} with the signed
    # framing exponent kt = kappa(lam) - kappa(mub); the sign part of the
    # framing factor cancels because contractions drop boxes in pairs.
    # Each contracted box pair additionally crosses the twisted boundary
    # and picks up the holonomy aL^{-2*twist}.
    kk = kappa(l1.lam) - kappa(l1.mub) + kappa(l2.lam) - kappa(l2.mub)
    base = label_boxes(l1) + label_boxes(l2)
    out = []
    for tgt, m in _label_product(l1, l2):
        e = kappa(tgt.lam) - kappa(tgt.mub) - kk
        w = Scalar.from_q(qmono(m, twist * e))
        contracted = (base - label_boxes(tgt)) // 2
        if contracted:
            w = w * Scalar.symbol(aL, -2 * twist * contracted)
        out.append((tgt, w))
    return tuple(out)


def _min_product_boxes(l1: BasisLabel, l2: BasisLabel, twist: int) -> int:
    """Lower bound on the box count of any label in W_{l1} W_{l2}."""
    pos = sum(l1.lam) + sum(l2.lam)
    neg = sum(l1.mub) + sum(l2.mub)
    return abs(pos - neg)


def product(x: SkeinElement, y: SkeinElement, twist: int = 0,
            trunc: Optional[Truncation] = None) -> SkeinElement:
    """Koike product (twist 0) or its framing-twisted variant (twist f).

    The twisted product weights each structure constant by
    q^{twist*(kt(nu)-kt(lam)-kt(mu))}, where kt is the signed framing
    exponent kappa(lam) - kappa(mub) of a label.
    """
    out = {}
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            v12 = v1 * v2
            for tgt, c in _pair_product(k1, k2, twist):
                if trunc is not None and not trunc.admits(tgt):
                    continue
                w = v12 * c
                s = out.get(tgt)
                out[tgt] = w if s is None else s + w
    return SkeinElement(out)


def product_t(x: TensorElement, y: TensorElement, twists=(0, 0),
              trunc: Optional[Truncation] = None,
              total_boxes: Optional[int] = None) -> TensorElement:
    """Branewise product of two-brane elements with a twist per brane.

    total_boxes keeps only output labels with that many boxes across both
    branes, and skips source pairs that provably cannot reach the window.
    """
    out = {}
    for (a1, a2), v1 in x.terms.items():
        for (b1, b2), v2 in y.terms.items():
            if total_boxes is not None and \
                    _min_product_boxes(a1, b1, twists[0]) \
                    + _min_product_boxes(a2, b2, twists[1]) > total_boxes:
                continue
            p1 = _pair_product(a1, b1, twists[0], "a1")
            p2 = _pair_product(a2, b2, twists[1], "a2")
            v12 = v1 * v2
            for t1, c1 in p1:
                if trunc is not None and not trunc.admits(t1):
                    continue
                n1 = label_boxes(t1)
                for t2, c2 in p2:
                    if trunc is not None and not trunc.admits(t2):
                        continue
                    if total_boxes is not None and \
                            n1 + label_boxes(t2) > total_boxes:
                        continue
                    key = (t1, t2)
                    w = v12 * c1 * c2
                    s = out.get(key)
                    out[key] = w if s is None else s + w
    return TensorElement(out)


def swap_branes(x: TensorElement) -> TensorElement:
    out = {}
    for (l1, l2), v in x.terms.items():
        sw = v.substitute({"a1": Scalar.symbol("a2"),
                           "a2": Scalar.symbol("a1")})
        out[(l2, l1)] = sw
    return TensorElement(out, _clean=True)


# ---------------------------------------------------------------------------
# unknot closure
# ---------------------------------------------------------------------------

@cache
def _closure_weight(lam: tuple) -> Scalar:
    """Product over boxes of (a q^c - a^{-1} q^{-c})/(q^h - q^{-h})."""
    w = S_ONE
    a = Scalar.symbol("a")
    ai = Scalar.symbol("a", -1)
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * (a * Scalar.from_q(qmono(1, c))
                 - ai * Scalar.from_q(qmono(1, -c)))
        w = w.div_q(qint(h))
    return w


def unknot_closure(x: SkeinElement) -> Scalar:
    """Map the solid torus onto an unframed unknot; Scalar in a, q only."""
    out = S_ZERO
    for label, coeff in x.terms.items():
        if label.mub:
            raise ValueError("unknot closure undefined on mixed labels")
        out = out + coeff * _closure_weight(label.lam)
    return out


def unknot_closure_t(x: TensorElement, brane: int) -> SkeinElement:
    """Close one brane of a two-brane element onto an unframed unknot."""
    out = {}
    for (l1, l2), coeff in x.terms.items():
        closed, kept = (l1, l2) if brane == 1 else (l2, l1)
        if closed.mub:
            raise ValueError("unknot closure undefined on mixed labels")
        w = coeff * _closure_weight(closed.lam)
        s = out.get(kept)
        out[kept] = w if s is None else s + w
    return SkeinElement(out)


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def element_to_json(x) -> dict:
    """Canonical JSON dict for SkeinElement or TensorElement."""
    terms = []
    if isinstance(x, SkeinElement):
        for k, v in x.sorted_items():
            terms.append({"l1": list(k.lam), "m1": list(k.mub),
                          "coeff": str(v)})
    elif isinstance(x, TensorElement):
        for (k1, k2), v in x.sorted_items():
            terms.append({"l1": list(k1.lam), "m1": list(k1.mub),
                          "l2": list(k2.lam), "m2": list(k2.mub),
                          "coeff": str(v)})
    else:
        raise TypeError("unsupported element type")
    return {"terms": terms}
