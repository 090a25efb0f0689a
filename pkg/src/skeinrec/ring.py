"""Exact arithmetic in the coefficient ring of the skein module.

Two layers:

- QRational: a rational function in the single variable q with arbitrary
  precision rational coefficients, kept in a canonical form (numerator and
  denominator coprime primitive integer polynomials, an overall rational
  factor, and a Laurent shift q^s).
- Scalar: a finite sum of Laurent monomials a^i * aL1^j * aL2^k with
  QRational coefficients.

Everything is immutable and exact; no floating point anywhere.
"""

from __future__ import annotations

import math
import re
from gmpy2 import mpq
from functools import lru_cache, reduce


# ---------------------------------------------------------------------------
# integer polynomial helpers (tuples, index = degree, high zeros trimmed)
# ---------------------------------------------------------------------------

def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, r):
    out = [0] * max(len(p), len(r))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(r):
        out[i] += c
    return _ptrim(out)


def _pneg(p):
    return tuple(-c for c in p)


def _pmul(p, r):
    if not p or not r:
        return ()
    out = [0] * (len(p) + len(r) - 1)
    for i, ci in enumerate(p):
        if ci:
            for j, cj in enumerate(r):
                if cj:
                    out[i + j] += ci * cj
    return _ptrim(out)


def _pcontent(p):
    """Positive gcd of the coefficients (0 for the zero polynomial)."""
    return reduce(math.gcd, p, 0)


def _pprim(p):
    """Primitive part with positive leading coefficient."""
    p = _ptrim(p)
    if not p:
        return ()
    c = _pcontent(p)
    if p[-1] < 0:
        c = -c
    return tuple(x // c for x in p)


def _prem(a, b):
    """Pseudo-remainder of a by b (proportional to the true remainder)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while r and r[-1] == 0:
        r.pop()
    while len(r) - 1 >= db:
        c = r[-1]
        dr = len(r) - 1
        r = [lb * x for x in r]
        for k in range(db + 1):
            r[dr - db + k] -= c * b[k]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _heval(p, xi):
    """Evaluate an integer polynomial at the integer xi (Horner)."""
    acc = 0
    for c in reversed(p):
        acc = acc * xi + c
    return acc


def _hinterp(value, xi):
    """Balanced base-xi digits of an integer, as polynomial coefficients."""
    digits = []
    half = xi // 2
    g = value
    while g:
        r = g % xi
        if r > half:
            r -= xi
        digits.append(r)
        g = (g - r) // xi
    return digits


def _heugcd(a, b):
    """Heuristic gcd by integer evaluation; None when unconfirmed.

    A candidate is accepted only when it exactly divides both inputs,
    retrying with larger evaluation points as usual for this method.
    """
    xi = 2 * min(max(abs(c) for c in a), max(abs(c) for c in b)) + 29
    for _ in range(6):
        h = _pprim(_hinterp(math.gcd(_heval(a, xi), _heval(b, xi)), xi))
        if h:
            if h == (1,):
                return h
            try:
                _pdiv_exact(a, h)
                _pdiv_exact(b, h)
                return h
            except ArithmeticError:
                pass
        xi = xi * 73794 // 27011 + 31337
    return None


def _pgcd(a, b):
    """Gcd of integer polynomials, leading coefficient > 0."""
    return _pgcd_cached(tuple(a), tuple(b))


@lru_cache(maxsize=1 << 18)
def _pgcd_cached(a, b):
    a, b = _pprim(a), _pprim(b)
    if not a:
        return b
    if not b:
        return a
    if a == b:
        return a
    if len(a) == 1 or len(b) == 1:
        return (1,)
    if len(a) + len(b) > 16:
        h = _heugcd(a, b)
        if h is not None:
            return h
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pprim(_prem(a, b))
        a, b = b, r
    return a


def _pdiv_exact(a, b):
    return _pdiv_exact_cached(tuple(a), tuple(b))


@lru_cache(maxsize=1 << 18)
def _pdiv_exact_cached(a, b):
    """Exact quotient of integer polynomials; b must divide a over Q.

    The divisors produced internally are always primitive, so by Gauss's
    lemma the quotient has integer coefficients and the division can run
    over the integers.
    """
    if not a:
        return ()
    if b == (1,):
        return _ptrim(a)
    lb = len(b)
    q = [0] * (len(a) - lb + 1)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - lb, -1, -1):
        c, m = divmod(r[i + lb - 1], lead)
        if m:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c
        if c:
            for k in range(lb - 1):
                r[i + k] -= c * b[k]
            r[i + lb - 1] = 0
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim(q)


# ---------------------------------------------------------------------------
# QRational
# ---------------------------------------------------------------------------

class QRational:
    """A rational function in q, canonical and hashable.

    Stored as fac * (num / den) * q^shift where fac is an exact rational (gmpy2.mpq), num and
    den are coprime primitive integer polynomial tuples with positive
    leading coefficients and nonzero constant terms, and shift is the
    Laurent valuation offset.  Zero is (0, (1,), (1,), 0).
    """

    __slots__ = ("fac", "num", "den", "shift", "_hash")

    def __init__(self, fac, num, den, shift, _raw=False):
        if not _raw:
            raise ValueError("use the constructor helpers")
        self.fac = fac
        self.num = num
        self.den = den
        self.shift = shift
        self._hash = hash((fac, num, den, shift))

    # -- construction -------------------------------------------------------

    @staticmethod
    def _make(fac, num, den, shift, skip_gcd=False):
        num = _ptrim(num)
        den = _ptrim(den)
        if not den:
            raise ZeroDivisionError("zero divisor")
        if fac == 0 or not num:
            return Q_ZERO
        k = 0
        while num[k] == 0:
            k += 1
        if k:
            shift += k
            num = num[k:]
        k = 0
        while den[k] == 0:
            k += 1
        if k:
            shift -= k
            den = den[k:]
        cn = _pcontent(num)
        if num[-1] < 0:
            cn = -cn
        cd = _pcontent(den)
        if den[-1] < 0:
            cd = -cd
        fac = fac * mpq(cn, cd)
        num = tuple(x // cn for x in num)
        den = tuple(x // cd for x in den)
        if not skip_gcd and den != (1,):
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
                if num[-1] < 0:
                    num, fac = _pneg(num), -fac
                if den[-1] < 0:
                    den, fac = _pneg(den), -fac
        return QRational(fac, num, den, shift, _raw=True)

    @staticmethod
    def from_fraction(c) -> "QRational":
        return QRational._make(mpq(c), (1,), (1,), 0, skip_gcd=True)

    @staticmethod
    def monomial(c, n: int) -> "QRational":
        """The monomial c * q^n."""
        return QRational._make(mpq(c), (1,), (1,), n, skip_gcd=True)

    @staticmethod
    def from_coeffs(coeffs: dict) -> "QRational":
        """Laurent polynomial from {exponent: rational coefficient}."""
        if not coeffs:
            return Q_ZERO
        lo = min(coeffs)
        hi = max(coeffs)
        row = [mpq(coeffs.get(i, 0)) for i in range(lo, hi + 1)]
        d = reduce(math.lcm, (c.denominator for c in row), 1)
        return QRational._make(mpq(1, d), [int(c * d) for c in row], (1,), lo)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.fac == 0

    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def is_integral(self) -> bool:
        """True iff this is a Laurent polynomial with integer coefficients."""
        return self.den == (1,) and self.fac.denominator == 1

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QRational):
            return NotImplemented
        if self.fac == 0:
            return other
        if other.fac == 0:
            return self
        if self.den == (1,) or other.den == (1,):
            l1, l2 = other.den, self.den
        else:
            g = _pgcd(self.den, other.den)
            l1 = _pdiv_exact(other.den, g)
            l2 = _pdiv_exact(self.den, g)
        f = mpq(math.gcd(self.fac.numerator, other.fac.numerator),
                     math.lcm(self.fac.denominator, other.fac.denominator))
        s = min(self.shift, other.shift)
        a = _pmul(self.num, l1)
        b = _pmul(other.num, l2)
        a = (0,) * (self.shift - s) + tuple(int(self.fac / f) * c for c in a)
        b = (0,) * (other.shift - s) + tuple(int(other.fac / f) * c for c in b)
        return QRational._make(f, _padd(a, b), _pmul(self.den, l1), s)

    def __neg__(self):
        if self.fac == 0:
            return self
        return QRational(-self.fac, self.num, self.den, self.shift, _raw=True)

    def __sub__(self, other):
        if not isinstance(other, QRational):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QRational):
            return NotImplemented
        if self.fac == 0 or other.fac == 0:
            return Q_ZERO
        n1, d2 = self.num, other.den
        if d2 != (1,):
            g1 = _pgcd(n1, d2)
            if len(g1) > 1:
                n1 = _pdiv_exact(n1, g1)
                d2 = _pdiv_exact(d2, g1)
        n2, d1 = other.num, self.den
        if d1 != (1,):
            g2 = _pgcd(n2, d1)
            if len(g2) > 1:
                n2 = _pdiv_exact(n2, g2)
                d1 = _pdiv_exact(d1, g2)
        return QRational._make(self.fac * other.fac, _pmul(n1, n2),
                               _pmul(d1, d2), self.shift + other.shift,
                               skip_gcd=True)

    def inverse(self) -> "QRational":
        if self.fac == 0:
            raise ZeroDivisionError("zero divisor")
        return QRational._make(1 / self.fac, self.den, self.num, -self.shift,
                               skip_gcd=True)

    def __truediv__(self, other):
        if not isinstance(other, QRational):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Q_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, QRational) and self.fac == other.fac
                and self.num == other.num and self.den == other.den
                and self.shift == other.shift)

    def __hash__(self):
        return self._hash

    # -- substitution -------------------------------------------------------

    def evaluate(self, q_value):
        """Exact value at q = q_value; raises on a pole."""
        q_value = mpq(q_value)
        if q_value == 0:
            raise ZeroDivisionError("q must be nonzero")
        n = sum(c * q_value ** i for i, c in enumerate(self.num))
        d = sum(c * q_value ** i for i, c in enumerate(self.den))
        if d == 0:
            raise PoleError("pole at substitution")
        return self.fac * (n / d) * q_value ** self.shift

    def invert_q(self) -> "QRational":
        """The image under q -> q^{-1}."""
        num = tuple(reversed(self.num))
        den = tuple(reversed(self.den))
        s = -self.shift - (len(self.num) - 1) + (len(self.den) - 1)
        return QRational._make(self.fac, num, den, s, skip_gcd=True)

    def coeffs(self) -> dict:
        """For Laurent polynomials only: {exponent: rational coefficient}."""
        if self.den != (1,):
            raise ValueError("not a Laurent polynomial")
        return {self.shift + i: self.fac * c
                for i, c in enumerate(self.num) if c}

    # -- display ------------------------------------------------------------

    def _display_pair(self):
        """(num terms, den terms) with den scaled to lowest coefficient 1."""
        d0 = mpq(self.den[0])
        nfac = self.fac * d0
        num = [(self.shift + i, nfac * c)
               for i, c in enumerate(self.num) if c]
        den = [(i, mpq(c) / d0) for i, c in enumerate(self.den) if c]
        num.sort(key=lambda t: -t[0])
        den.sort(key=lambda t: -t[0])
        return num, den

    def __str__(self):
        if self.fac == 0:
            return "0"
        num, den = self._display_pair()
        ns = " + ".join(_fmt_qmono(c, n) for n, c in num)
        if self.den == (1,):
            return ns
        ds = " + ".join(_fmt_qmono(c, n) for n, c in den)
        return f"{ns} | {ds}"

    def __repr__(self):
        return f"QRational({self})"


def _fmt_qmono(c, n: int) -> str:
    cs = str(c)
    if n == 0:
        return cs
    return f"{cs}*q^{n}"


class PoleError(ZeroDivisionError):
    pass


Q_ZERO = QRational(mpq(0), (1,), (1,), 0, _raw=True)
Q_ONE = QRational(mpq(1), (1,), (1,), 0, _raw=True)


def qmono(c, n: int) -> QRational:
    return QRational.monomial(c, n)


def qint(n: int) -> QRational:
    """The quantum bracket q^n - q^{-n}."""
    return qmono(1, n) - qmono(1, -n)


# ---------------------------------------------------------------------------
# Scalar: Laurent polynomials in a, aL1, aL2 over the QRational field
# ---------------------------------------------------------------------------

_SYMBOL_SLOT = {"a": 0, "a1": 1, "a2": 2}


class Scalar:
    """Finite map from exponent triples (e_a, e_a1, e_a2) to QRational."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, _clean=False):
        if terms is None:
            terms = {}
        if not _clean:
            terms = {k: v for k, v in terms.items() if not v.is_zero()}
        self.terms = terms
        self._hash = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_q(qr: QRational) -> "Scalar":
        if qr.is_zero():
            return S_ZERO
        return Scalar({(0, 0, 0): qr}, _clean=True)

    @staticmethod
    def from_int(n) -> "Scalar":
        return Scalar.from_q(QRational.from_fraction(n))

    @staticmethod
    def monomial(key, qr: QRational) -> "Scalar":
        if qr.is_zero():
            return S_ZERO
        return Scalar({tuple(key): qr}, _clean=True)

    @staticmethod
    def symbol(name: str, exp: int = 1) -> "Scalar":
        """a, a1 or a2 raised to exp."""
        key = [0, 0, 0]
        key[_SYMBOL_SLOT[name]] = exp
        return Scalar({tuple(key): Q_ONE}, _clean=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial_unit(self) -> bool:
        """A single term whose coefficient is c*q^n."""
        if len(self.terms) != 1:
            return False
        qr = next(iter(self.terms.values()))
        return qr.den == (1,) and qr.num == (1,)

    def is_integral_laurent(self) -> bool:
        return all(v.is_integral() for v in self.terms.values())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
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
        return Scalar(out, _clean=True)

    def __neg__(self):
        return Scalar({k: -v for k, v in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QRational):
            if other.is_zero():
                return S_ZERO
            return Scalar({k: v * other for k, v in self.terms.items()},
                          _clean=True)
        if not isinstance(other, Scalar):
            return NotImplemented
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                p = v1 * v2
                s = out.get(k)
                out[k] = p if s is None else s + p
        return Scalar(out)

    __rmul__ = __mul__

    def div_q(self, qr: QRational) -> "Scalar":
        if qr.is_zero():
            raise ZeroDivisionError("zero divisor")
        return self * qr.inverse()

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial_unit():
                raise ValueError("negative power of a non-unit")
            (k, v), = self.terms.items()
            return Scalar.monomial(tuple(-e for e in k), v.inverse()) ** (-n)
        out = S_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Scalar) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- structure ----------------------------------------------------------

    def a_strata(self) -> dict:
        """Split into homogeneous a-degree pieces, {e_a: Scalar}."""
        out = {}
        for k, v in self.terms.items():
            out.setdefault(k[0], {})[k] = v
        return {e: Scalar(t, _clean=True) for e, t in sorted(out.items())}

    def substitute(self, assignments: dict) -> "Scalar":
        """Substitute a partial map {q, a, a1, a2} -> value.

        Values for a-symbols must be monomial-unit Scalars (a Laurent
        monomial in the remaining variables times c*q^n); the value for q
        must be an exact rational number.
        """
        out = self
        for name in ("a", "a1", "a2"):
            if name in assignments:
                val = assignments[name]
                if not isinstance(val, Scalar) or not val.is_monomial_unit():
                    raise ValueError(f"substitution for {name} must be a "
                                     "monomial unit")
                slot = _SYMBOL_SLOT[name]
                acc = S_ZERO
                for k, v in out.terms.items():
                    e = k[slot]
                    rest = list(k)
                    rest[slot] = 0
                    acc = acc + Scalar.monomial(tuple(rest), v) * (val ** e)
                out = acc
        if "q" in assignments:
            qv = mpq(assignments["q"])
            acc = {}
            for k, v in out.terms.items():
                c = v.evaluate(qv)
                if c:
                    prev = acc.get(k, mpq(0))
                    acc[k] = prev + c
            out = Scalar({k: QRational.from_fraction(c)
                          for k, c in acc.items() if c})
        return out

    def divexact(self, other: "Scalar") -> "Scalar":
        """Exact quotient in the Laurent ring; raises if not divisible."""
        if other.is_zero():
            raise ZeroDivisionError("zero divisor")
        if self.is_zero():
            return S_ZERO
        dk = max(other.terms)
        dv = other.terms[dk]
        # any exact quotient key lies in this componentwise box
        lo = tuple(min(k[i] for k in self.terms)
                   - min(k[i] for k in other.terms) for i in range(3))
        hi = tuple(max(k[i] for k in self.terms)
                   - max(k[i] for k in other.terms) for i in range(3))
        rem = dict(self.terms)
        quo = {}
        while rem:
            rk = max(rem)
            qk = (rk[0] - dk[0], rk[1] - dk[1], rk[2] - dk[2])
            if any(qk[i] < lo[i] or qk[i] > hi[i] for i in range(3)):
                raise ArithmeticError("inexact scalar division")
            qv = rem[rk] / dv
            quo[qk] = qv
            for k, v in other.terms.items():
                t = (k[0] + qk[0], k[1] + qk[1], k[2] + qk[2])
                s = rem.get(t, Q_ZERO) - v * qv
                if s.is_zero():
                    rem.pop(t, None)
                else:
                    rem[t] = s
        return Scalar(quo)

    # -- display ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            num, den = self.terms[k]._display_pair()
            ns = " + ".join(_fmt_qmono(c, n) for n, c in num)
            if den == [(0, mpq(1))]:
                head = f"({ns})"
            else:
                ds = " + ".join(_fmt_qmono(c, n) for n, c in den)
                head = f"({ns})/({ds})"
            parts.append(f"{head} * a^{k[0]} * aL1^{k[1]} * aL2^{k[2]}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Scalar({self})"


S_ZERO = Scalar({}, _clean=True)
S_ONE = Scalar({(0, 0, 0): Q_ONE}, _clean=True)


def arith(x: Scalar, y, op: str) -> Scalar:
    """Dispatch {add, sub, mul, div-by-QRational} over Scalars."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x.div_q(y)
    raise ValueError(f"unknown op {op}")


def a_strata(x: Scalar) -> dict:
    return x.a_strata()


def substitute(x: Scalar, assignments: dict) -> Scalar:
    return x.substitute(assignments)


def is_integral_laurent(x: Scalar) -> bool:
    return x.is_integral_laurent()


# ---------------------------------------------------------------------------
# canonical text round trip
# ---------------------------------------------------------------------------

_MONO_RE = re.compile(r"\s*(-?\d+(?:/\d+)?)(?:\*q\^(-?\d+))?\s*$")
_TERM_RE = re.compile(
    r"\(([^()]*)\)(?:/\(([^()]*)\))?\s*\*\s*a\^(-?\d+)\s*\*\s*"
    r"aL1\^(-?\d+)\s*\*\s*aL2\^(-?\d+)")


def _parse_qpoly(text: str) -> dict:
    out = {}
    for piece in text.split(" + "):
        m = _MONO_RE.match(piece)
        if not m:
            raise ValueError(f"bad q-monomial: {piece!r}")
        c = mpq(m.group(1))
        n = int(m.group(2)) if m.group(2) else 0
        out[n] = out.get(n, mpq(0)) + c
    return out


def parse_scalar(text: str) -> Scalar:
    """Inverse of str(Scalar) on canonical output."""
    text = text.strip()
    if text == "0":
        return S_ZERO
    out = S_ZERO
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m:
            raise ValueError(f"bad scalar term at {text[pos:pos+40]!r}")
        num = QRational.from_coeffs(_parse_qpoly(m.group(1)))
        qr = num
        if m.group(2) is not None:
            den = QRational.from_coeffs(_parse_qpoly(m.group(2)))
            qr = num / den
        key = (int(m.group(3)), int(m.group(4)), int(m.group(5)))
        out = out + Scalar.monomial(key, qr)
        pos = m.end()
        if pos < len(text):
            if not text.startswith(" + ", pos):
                raise ValueError(f"bad separator at {text[pos:pos+10]!r}")
            pos += 3
    return out
