"""Closed-form partition-function generators.

Basic curve series (disk, annulus, twisted and anti annulus, three-holed
sphere), the unknot partition functions for its three fillings, and the
assembled Hopf-link closed forms (quiver sum, three-holed-sphere product,
and the product formulas for the mixed fillings).

Series are truncated by box count; the mixed-sign products (dl, dd,
middle-leg) additionally need an a-exponent cap because cancelling pairs
contribute arbitrarily high powers of a^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache

from .ring import QRational, Scalar, S_ONE, Q_ONE, qmono, qint
from .partition import (conjugate, contents, hooks, kappa, lr_coefficient,
                        partitions, partitions_upto)
from .skein import (BasisLabel, SkeinElement, TensorElement, TripleElement,
                    Truncation, VACUUM, framing_factor, product, product_t,
                    unknot_closure)


# ---------------------------------------------------------------------------
# per-partition coefficient building blocks
# ---------------------------------------------------------------------------

@cache
def disk_coeff(lam: tuple) -> QRational:
    """Product over boxes of (-q^{-c})/(q^h - q^{-h})."""
    w = Q_ONE
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * qmono(-1, -c) * qint(h).inverse()
    return w


@cache
def bar_disk_coeff(lam: tuple) -> QRational:
    """Product over boxes of q^{-c}/(q^h - q^{-h})."""
    w = Q_ONE
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * qmono(1, -c) * qint(h).inverse()
    return w


@cache
def unknot_H(lam: tuple) -> Scalar:
    """H_{U;lam}: product of (a q^c - a^{-1} q^{-c})/(q^h - q^{-h})."""
    w = S_ONE
    a = Scalar.symbol("a")
    ai = Scalar.symbol("a", -1)
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * (a * Scalar.from_q(qmono(1, c)) - ai * Scalar.from_q(qmono(1, -c)))
        w = w.div_q(qint(h))
    return w


@cache
def unknot_HO(lam: tuple) -> Scalar:
    """H^O_lam = a^{|lam|} H_{U;lam}: product of (a^2 q^c - q^{-c})/(q^h - q^{-h})."""
    return unknot_H(lam) * Scalar.symbol("a", sum(lam))


@cache
def unknot_Hc(lam: tuple) -> Scalar:
    """Complement filling: product of (q^c - a^2 q^{-c})/(q^h - q^{-h})."""
    w = S_ONE
    a2 = Scalar.symbol("a", 2)
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * (Scalar.from_q(qmono(1, c)) - a2 * Scalar.from_q(qmono(1, -c)))
        w = w.div_q(qint(h))
    return w


@cache
def pants_coeff(lam: tuple) -> QRational:
    """(-1)^{|lam|} times product of q^c (q^h - q^{-h})."""
    w = qmono(1 if sum(lam) % 2 == 0 else -1, 0)
    for c, h in zip(contents(lam), hooks(lam)):
        w = w * qmono(1, c) * qint(h)
    return w


# ---------------------------------------------------------------------------
# basic curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSpec:
    """A basic holomorphic curve: kind, framing per boundary, area shift."""
    kind: str
    framing: tuple = ()
    shift: Scalar = field(default_factory=lambda: S_ONE)

    _BOUNDARIES = {"disk": 1, "annulus": 2, "twisted_annulus": 2,
                   "anti_annulus": 2, "pants": 3, "pants_closed": 2}

    def __post_init__(self):
        if self.kind not in self._BOUNDARIES:
            raise ValueError(f"unknown curve kind {self.kind}")
        if len(self.framing) != self._BOUNDARIES[self.kind]:
            raise ValueError("framing list length must match boundary count")


def _shift_pow(shift: Scalar, n: int) -> Scalar:
    if shift == S_ONE:
        return S_ONE
    return shift ** n


def generate(spec: CurveSpec, trunc: Truncation):
    """The truncated series of a basic curve."""
    n = trunc.max_boxes_per_brane
    kind = spec.kind
    if kind == "disk":
        f = spec.framing[0]
        terms = {}
        for lam in partitions_upto(n):
            c = Scalar.from_q(disk_coeff(lam) * framing_factor(lam, f))
            terms[BasisLabel(lam, ())] = c * _shift_pow(spec.shift, sum(lam))
        return SkeinElement(terms)
    if kind in ("annulus", "twisted_annulus", "anti_annulus", "pants_closed"):
        f1, f2 = spec.framing
        terms = {}
        for lam in partitions_upto(n):
            s = sum(lam)
            if kind == "annulus":
                key = (BasisLabel(lam, ()), BasisLabel(lam, ()))
                c = Scalar.from_q(framing_factor(lam, f1 + f2))
            elif kind == "twisted_annulus":
                key = (BasisLabel(lam, ()), BasisLabel((), lam))
                c = Scalar.from_q(framing_factor(lam, f1 + f2))
            elif kind == "anti_annulus":
                key = (BasisLabel(lam, ()), BasisLabel(conjugate(lam), ()))
                c = Scalar.from_q(framing_factor(lam, f1 - f2))
            else:  # pants_closed: one leg of the three-holed sphere closed
                key = (BasisLabel(lam, ()), BasisLabel(lam, ()))
                a = Scalar.symbol("a")
                ai = Scalar.symbol("a", -1)
                w = Scalar.from_q(qmono(1 if s % 2 == 0 else -1, 0))
                for c_box in contents(lam):
                    w = w * (a * Scalar.from_q(qmono(1, 2 * c_box)) - ai)
                c = w * Scalar.from_q(framing_factor(lam, f1 + f2))
            terms[key] = c * _shift_pow(spec.shift, s)
        return TensorElement(terms)
    # pants: full three-boundary series
    f1, f2, f3 = spec.framing
    terms = {}
    for lam in partitions_upto(n):
        lab = BasisLabel(lam, ())
        c = Scalar.from_q(pants_coeff(lam)
                          * framing_factor(lam, f1 + f2 + f3))
        terms[(lab, lab, lab)] = c * _shift_pow(spec.shift, sum(lam))
    return TripleElement(terms)


def disk_series(f: int, max_boxes: int, shift: Scalar = None) -> SkeinElement:
    spec = CurveSpec("disk", (f,), shift if shift is not None else S_ONE)
    return generate(spec, Truncation(max_boxes))


def bar_disk_series(f: int, max_boxes: int, shift: Scalar = None) -> SkeinElement:
    """Disk on the anti-meridian side: labels W_{0,lam-bar}.

    The framing weight on negative labels follows the positive-label rule
    applied to lam.
    """
    shift = shift if shift is not None else S_ONE
    terms = {}
    for lam in partitions_upto(max_boxes):
        c = Scalar.from_q(bar_disk_coeff(lam) * framing_factor(lam, f))
        terms[BasisLabel((), lam)] = c * _shift_pow(shift, sum(lam))
    return SkeinElement(terms)


# ---------------------------------------------------------------------------
# unknot partition functions
# ---------------------------------------------------------------------------

def unknot_Z(filling: str, f: int, trunc: Truncation,
             a_cap: int = None) -> SkeinElement:
    n = trunc.max_boxes_per_brane
    if filling == "conormal":
        terms = {BasisLabel(lam, ()): unknot_H(lam)
                 * Scalar.from_q(framing_factor(lam, f))
                 for lam in partitions_upto(n)}
        return SkeinElement(terms)
    if filling == "complement":
        if f != 0:
            raise ValueError("complement filling defined in framing 0")
        terms = {BasisLabel(lam, ()): unknot_Hc(lam)
                 for lam in partitions_upto(n)}
        return SkeinElement(terms)
    if filling == "middle":
        if f != 0:
            raise ValueError("middle filling defined in framing 0")
        return middle_Z(n, a_cap if a_cap is not None else 2 * n)
    raise ValueError(f"unknown unknot filling {filling}")


def middle_Z(max_boxes: int, a_cap: int) -> SkeinElement:
    """Middle-leg filling: two oppositely wound disks multiplied out.

    Sum over lam, mu of the bar-disk weights, a^{2|mu|}, and the pairing
    sum over kappa of c^sigma_{kappa,lam} c^tau_{kappa,mu} W_{sigma,tau-bar},
    kept to a^exponent <= a_cap and boxes <= max_boxes.
    """
    kmax = a_cap // 2
    src = max_boxes + kmax
    terms = {}
    # every mu box carries a^2, so the a-cap bounds the mu side by kmax
    for lam in partitions_upto(src):
        wl = bar_disk_coeff(lam)
        for mu in partitions_upto(kmax):
            w = Scalar.from_q(wl * bar_disk_coeff(mu)) \
                * Scalar.symbol("a", 2 * sum(mu))
            for k in range(min(sum(lam), sum(mu)) + 1):
                ssz, tsz = sum(lam) - k, sum(mu) - k
                if ssz + tsz > max_boxes:
                    continue
                for kap in partitions(k):
                    for sig in partitions(ssz):
                        c1 = lr_coefficient(kap, sig, lam)
                        if not c1:
                            continue
                        for tau in partitions(tsz):
                            c2 = lr_coefficient(kap, tau, mu)
                            if not c2:
                                continue
                            key = BasisLabel(sig, tau)
                            add = w * Scalar.from_q(
                                QRational.from_fraction(c1 * c2))
                            s = terms.get(key)
                            terms[key] = add if s is None else s + add
    out = {}
    for key, v in terms.items():
        vv = Scalar({kk: c for kk, c in v.terms.items() if kk[0] <= a_cap})
        if not vv.is_zero():
            out[key] = vv
    return SkeinElement(out, _clean=True)


def zU(max_boxes: int) -> SkeinElement:
    """Z_U in the a-shifted normalization: coefficients H^O_lam."""
    return SkeinElement({BasisLabel(lam, ()): unknot_HO(lam)
                         for lam in partitions_upto(max_boxes)})


def zUc(max_boxes: int) -> SkeinElement:
    """Complement unknot: coefficients prod (q^c - a^2 q^{-c})/(q^h - q^{-h})."""
    return SkeinElement({BasisLabel(lam, ()): unknot_Hc(lam)
                         for lam in partitions_upto(max_boxes)})


# ---------------------------------------------------------------------------
# insertion along a knot
# ---------------------------------------------------------------------------

def insert_along(x, knot_slot, y, inner_word=None):
    """Multiply a basic element y into x along one brane.

    knot_slot is (brane, twist); brane 0 means a one-brane element.  If
    inner_word is given, the P factors are applied to x before multiplying.
    """
    from .skein import apply_word, apply_word_t
    brane, twist = knot_slot
    if brane == 0:
        if inner_word:
            x = apply_word(inner_word, x)
        return product(x, y, twist)
    if inner_word:
        x = apply_word_t(inner_word, x, brane)
    twists = (twist, 0) if brane == 1 else (0, twist)
    other = SkeinElement.basis(VACUUM)
    yt = TensorElement({(k, VACUUM): v for k, v in y.terms.items()}) \
        if brane == 1 else \
        TensorElement({(VACUUM, k): v for k, v in y.terms.items()})
    return product_t(x, yt, twists)


# ---------------------------------------------------------------------------
# assembled Hopf-link closed forms
# ---------------------------------------------------------------------------

def _tensor_of(x: SkeinElement, y: SkeinElement,
               total_boxes: int = None) -> TensorElement:
    from .skein import label_boxes
    out = {}
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            if total_boxes is not None and \
                    label_boxes(k1) + label_boxes(k2) > total_boxes:
                continue
            out[(k1, k2)] = v1 * v2
    return TensorElement(out)


def _mixed_tensor(x: SkeinElement, y: SkeinElement, total_boxes: int,
                  kmax: int) -> TensorElement:
    """Tensor of two mixed-label disk products, pruned for the dd assembly.

    A source pair can only reach the window if some annulus color connects
    it there; the best case gives |pos - neg| <= total_boxes.  Bar boxes
    each cost a^2, so their combined count is bounded by kmax.
    """
    out = {}
    for k1, v1 in x.terms.items():
        for k2, v2 in y.terms.items():
            neg = sum(k1.mub) + sum(k2.mub)
            if neg > kmax:
                continue
            pos = sum(k1.lam) + sum(k2.lam)
            if abs(pos - neg) > total_boxes:
                continue
            out[(k1, k2)] = v1 * v2
    return TensorElement(out)


def truncate_total(x: TensorElement, total_boxes: int) -> TensorElement:
    from .skein import label_boxes
    return TensorElement({k: v for k, v in x.terms.items()
                          if label_boxes(k[0]) + label_boxes(k[1])
                          <= total_boxes}, _clean=True)


@cache
def hopf_quiver_coefficient(sig1: tuple, sig2: tuple) -> Scalar:
    """Direct summation of the quiver formula for H_{sig1,sig2}.

    Sum over disks lam1, lam2, anti-annulus color mu, annulus color nu and
    intermediate shapes rho1, rho2 of
    q^{-kappa(sig_i)+kappa(rho_i)+kappa(nu)} H^O_{lam1} H^O_{lam2}
    (-a^2)^{|mu|} q^{-2 kappa(nu)} c_{lam1,mu}^{rho1} c_{lam2,mu^t}^{rho2}
    c_{rho1,nu}^{sig1} c_{rho2,nu}^{sig2}.
    """
    from .ring import S_ZERO
    total = S_ZERO
    n1, n2 = sum(sig1), sum(sig2)
    for extra in range(min(n1, n2) + 1):
        for nsize in range(extra + 1):
            msize = extra - nsize
            for nu in partitions(nsize):
                knu = kappa(nu)
                qnu = qmono(1, -2 * knu)
                for mu in partitions(msize):
                    mut = conjugate(mu)
                    sgn = -1 if msize % 2 else 1
                    amu = Scalar.symbol("a", 2 * msize) \
                        * Scalar.from_q(QRational.from_fraction(sgn))
                    for lam1 in partitions(n1 - extra):
                        for rho1 in partitions(n1 - nsize):
                            c = lr_coefficient(lam1, mu, rho1) \
                                * lr_coefficient(rho1, nu, sig1)
                            if not c:
                                continue
                            w1 = unknot_HO(lam1) * Scalar.from_q(
                                qmono(c, -(kappa(sig1) - kappa(rho1) - knu)))
                            for lam2 in partitions(n2 - extra):
                                for rho2 in partitions(n2 - nsize):
                                    c2 = lr_coefficient(lam2, mut, rho2) \
                                        * lr_coefficient(rho2, nu, sig2)
                                    if not c2:
                                        continue
                                    w2 = unknot_HO(lam2) * Scalar.from_q(
                                        qmono(c2, -(kappa(sig2) - kappa(rho2)
                                                    - knu)) * qnu)
                                    total = total + w1 * w2 * amu
    return total


def hopf_closed_form(filling: str, trunc: Truncation,
                     a_cap: int = None) -> TensorElement:
    n = trunc.max_boxes_per_brane
    if filling == "l0":
        return TensorElement.unit()
    if filling == "ll_quiver":
        terms = {}
        for t1 in range(n + 1):
            for s1 in partitions(t1):
                for s2 in partitions_upto(n - t1):
                    c = hopf_quiver_coefficient(s1, s2)
                    if not c.is_zero():
                        terms[(BasisLabel(s1, ()), BasisLabel(s2, ()))] = c
        return TensorElement(terms, _clean=True)
    if filling == "ll_pants":
        d0 = disk_series(0, n)
        t1 = _tensor_of(d0, d0, n)
        pants = generate(CurveSpec("pants_closed", (-1, -1),
                                   Scalar.symbol("a")), Truncation(n))
        t2 = truncate_total(product_t(t1, pants, twists=(-1, -1),
                                      total_boxes=n), n)
        d1 = disk_series(1, n, Scalar.symbol("a", 2))
        t3 = truncate_total(product_t(t2, _tensor_of(d1, d1, n),
                                      total_boxes=n), n)
        return t3
    if filling == "lm":
        zu = zU(n)
        zc = zUc(n)
        tw = generate(CurveSpec("twisted_annulus", (0, 0)), Truncation(n))
        out = product_t(_tensor_of(zu, zc, n), tw, total_boxes=n)
        return truncate_total(out, n)
    if filling == "dl":
        cap = a_cap if a_cap is not None else 2 * n
        # annulus colors eaten by the bar side of the disk product can pair
        # large sources down into the window at a^2 per box, so the inner
        # series must reach kmax boxes past it
        kmax = cap // 2
        d0 = _mixed_disk_product(0, n + kmax, cap)
        zu = zU(n)
        an = generate(CurveSpec("annulus", (0, 0)), Truncation(n))
        out = truncate_total(product_t(_tensor_of(d0, zu), an,
                                       total_boxes=n), n)
        return _cap_tensor_a(out, cap)
    if filling == "dd":
        cap = a_cap if a_cap is not None else 2 * n
        kmax = cap // 2
        d0 = _mixed_disk_product(0, n + kmax, cap)
        e1 = _mixed_disk_product(1, n + kmax, cap)
        tw = generate(CurveSpec("twisted_annulus", (0, 0)),
                      Truncation(n + kmax))
        out = truncate_total(product_t(_mixed_tensor(d0, e1, n, kmax), tw,
                                       total_boxes=n), n)
        return _cap_tensor_a(out, cap)
    raise ValueError(f"unknown closed form {filling}")


def _mixed_disk_product(f: int, max_boxes: int, a_cap: int) -> SkeinElement:
    """Psi_di^{(f)} * bar-Psi_di^{(f)}[a^2], boxes and a-exponent capped."""
    kmax = a_cap // 2
    src = max_boxes + kmax
    pos = disk_series(f, src)
    # every bar-disk box carries -a^2 (the bar disk has the same per-box
    # sign as the unbarred disk); the cap bounds that side by kmax
    shift = Scalar.from_int(-1) * Scalar.symbol("a", 2)
    neg = bar_disk_series(f, kmax, shift)
    out = product(pos, neg, 0, Truncation(max_boxes))
    return _cap_skein_a(out, a_cap)


def _cap_skein_a(x: SkeinElement, a_cap: int) -> SkeinElement:
    out = {}
    for k, v in x.terms.items():
        vv = Scalar({kk: c for kk, c in v.terms.items() if kk[0] <= a_cap})
        if not vv.is_zero():
            out[k] = vv
    return SkeinElement(out, _clean=True)


def _cap_tensor_a(x: TensorElement, a_cap: int) -> TensorElement:
    out = {}
    for k, v in x.terms.items():
        vv = Scalar({kk: c for kk, c in v.terms.items() if kk[0] <= a_cap})
        if not vv.is_zero():
            out[k] = vv
    return TensorElement(out, _clean=True)
