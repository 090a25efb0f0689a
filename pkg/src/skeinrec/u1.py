"""Reduction of recursion operators to the q-Weyl algebra and its q->1 limit.

Setting the framing variables a_{Lk} to q collapses the skein of the solid
torus to a rank-one theory where the torus operators act as Laurent
monomials in a pair of exponentiated Weyl generators per brane:

    P_{i,j}  ->  q^{i j} x_k^j y_k^i,        y_k x_k = q^2 x_k y_k,

with generators on different branes commuting.  This is the unique
monomial assignment extending P_{1,0} -> y, P_{0,1} -> x that respects
the commutation rule

    [P_{i,j}, P_{k,l}] = (q^{il-kj} - q^{kj-il}) P_{i+k,j+l}.

A reduced operator is stored as a dict mapping the exponent vector
(x1, y1, x2, y2) to a Scalar whose only symbols are a and q.  At q = 1
the generators commute and each operator becomes an ordinary Laurent
polynomial cutting out a piece of a classical character variety.
"""

from __future__ import annotations

from .ring import Scalar, S_ZERO, qmono
from .operators import OperatorExpr

_Q = Scalar.from_q(qmono(1, 1))


def weyl_mul(u: dict, v: dict) -> dict:
    """Product of reduced elements; y_k x_k = q^2 x_k y_k per brane."""
    out = {}
    for (x1, y1, x2, y2), c1 in u.items():
        for (b1, d1, b2, d2), c2 in v.items():
            key = (x1 + b1, y1 + d1, x2 + b2, y2 + d2)
            c = c1 * c2 * Scalar.from_q(qmono(1, 2 * (y1 * b1 + y2 * b2)))
            s = out.get(key, S_ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def letter_image(i: int, j: int, brane: int) -> dict:
    """Reduced image of a single torus operator on the given brane."""
    c = Scalar.from_q(qmono(1, i * j))
    if brane == 1:
        return {(j, i, 0, 0): c}
    return {(0, 0, j, i): c}


def specialize_u1(op: OperatorExpr) -> dict:
    """Reduce a two-brane operator, sending both framing variables to q."""
    out = {}
    for c, w1, w2 in op.terms:
        acc = {(0, 0, 0, 0): c.substitute({"a1": _Q, "a2": _Q})}
        for (i, j) in w1:
            acc = weyl_mul(acc, letter_image(i, j, 1))
        for (i, j) in w2:
            acc = weyl_mul(acc, letter_image(i, j, 2))
        for key, v in acc.items():
            s = out.get(key, S_ZERO) + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return out


def classical_limit(w: dict) -> dict:
    """Set q = 1, leaving Laurent monomials in x, y with a-polynomial
    coefficients."""
    out = {}
    for key, c in w.items():
        c1 = c.substitute({"q": 1})
        if not c1.is_zero():
            out[key] = c1
    return out


def proportional(u: dict, v: dict) -> bool:
    """Whether u equals v up to one overall unit c * q^n * a^m."""
    if not u or not v:
        return not u and not v
    if set(u) != set(v):
        return False
    key = next(iter(u))
    try:
        ratio = u[key].divexact(v[key])
    except (ArithmeticError, ValueError):
        return False
    if not ratio.is_monomial_unit():
        return False
    return all((u[k] - v[k] * ratio).is_zero() for k in u)


def hopf_u1_operators() -> list:
    """Reference reduced operators for the Hopf conormal pair.

    These are the three quantum-curve generators of the Hopf link
    D-module, written in the normal form used by weyl_mul; the reduction
    of the full skein catalog must agree with each up to one overall
    monomial unit.
    """
    def mk(terms):
        out = {}
        for c, k in terms:
            s = out.get(k, S_ZERO) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return out

    one = Scalar.from_int(1)
    m = Scalar.from_int(-1)
    a2 = Scalar.symbol("a", 2)
    q = lambda n: Scalar.from_q(qmono(1, n))
    # q[(1 - y1 - q x1 + a^2 q x1 y1) - (1 - y2 - q x2 + a^2 q x2 y2)]
    A1 = mk([(q(1), (0, 0, 0, 0)), (m * q(1), (0, 1, 0, 0)),
             (m * q(2), (1, 0, 0, 0)), (a2 * q(2), (1, 1, 0, 0)),
             (m * q(1), (0, 0, 0, 0)), (q(1), (0, 0, 0, 1)),
             (q(2), (0, 0, 1, 0)), (m * a2 * q(2), (0, 0, 1, 1))])
    # q(-y1^-1 + 1 + q x1 y1^-1 - q a^2 x1)
    #   + q(q^-1 x2^-1 - q^-1 x2^-1 y2 - 1 + a^2 y2)
    A2 = mk([(m * q(1), (0, -1, 0, 0)), (q(1), (0, 0, 0, 0)),
             (q(2), (1, -1, 0, 0)), (m * a2 * q(2), (1, 0, 0, 0)),
             (one, (0, 0, -1, 0)), (m, (0, 0, -1, 1)),
             (m * q(1), (0, 0, 0, 0)), (a2 * q(1), (0, 0, 0, 1))])
    # the same with the branes swapped
    A3 = mk([(m * q(1), (0, 0, 0, -1)), (q(1), (0, 0, 0, 0)),
             (q(2), (0, 0, 1, -1)), (m * a2 * q(2), (0, 0, 1, 0)),
             (one, (-1, 0, 0, 0)), (m, (-1, 1, 0, 0)),
             (m * q(1), (0, 0, 0, 0)), (a2 * q(1), (0, 1, 0, 0))])
    return [A1, A2, A3]


def vanishes_on_branch(classical: dict, branch: int):
    """Check that a q = 1 operator vanishes on a branch of the Hopf link
    character variety.

    Branch 1 is {x1 = y2, x2 = y1}; branch 2 is the product of unknot
    curves {1 - y_k - x_k + a^2 x_k y_k = 0}.  Returns the sympy residue
    after substitution (zero when the operator vanishes).
    """
    import sympy

    a, x1, y1, x2, y2 = sympy.symbols("a x1 y1 x2 y2")
    expr = sympy.Integer(0)
    for (e1, f1, e2, f2), c in classical.items():
        poly = sympy.sympify(str(c).replace("^", "**"))
        expr += poly * x1**e1 * y1**f1 * x2**e2 * y2**f2
    if branch == 1:
        expr = expr.subs({y2: x1, x2: y1})
    elif branch == 2:
        expr = expr.subs({y1: (1 - x1) / (1 - a**2 * x1),
                          y2: (1 - x2) / (1 - a**2 * x2)})
    else:
        raise ValueError("branch must be 1 or 2")
    return sympy.simplify(sympy.cancel(expr))
