import random

from skeinrec.operators import catalog
from skeinrec.ring import Scalar, qmono
from skeinrec.u1 import (classical_limit, hopf_u1_operators, letter_image,
                         proportional, specialize_u1, vanishes_on_branch,
                         weyl_mul)


def _q(n):
    return Scalar.from_q(qmono(1, n))


def _sub(u, v):
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, Scalar.from_int(0)) - c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def test_weyl_relation():
    x = letter_image(0, 1, 1)
    y = letter_image(1, 0, 1)
    assert weyl_mul(y, x) == {k: v * _q(2) for k, v in weyl_mul(x, y).items()}


def test_images_satisfy_torus_commutator():
    rng = random.Random(3)
    for _ in range(100):
        i, j, k, l = (rng.randint(-2, 2) for _ in range(4))
        lhs = _sub(weyl_mul(letter_image(i, j, 1), letter_image(k, l, 1)),
                   weyl_mul(letter_image(k, l, 1), letter_image(i, j, 1)))
        d = i * l - k * j
        rhs = {} if d == 0 else {key: (_q(d) - _q(-d)) * c
                                 for key, c in letter_image(i + k, j + l,
                                                            1).items()}
        assert lhs == rhs, (i, j, k, l)


def test_branes_commute():
    u = letter_image(1, 1, 1)
    v = letter_image(-1, 1, 2)
    assert weyl_mul(u, v) == weyl_mul(v, u)


def test_hopf_reduction_matches_reference():
    got = [specialize_u1(op) for op in catalog("ll").operators]
    for g, e in zip(got, hopf_u1_operators()):
        assert proportional(g, e)


def test_proportional_rejects_distinct():
    ref = hopf_u1_operators()
    assert not proportional(ref[0], ref[1])
    scaled = {k: v * Scalar.symbol("a", 2) * _q(-3)
              for k, v in ref[2].items()}
    assert proportional(scaled, ref[2])


def test_classical_limits_vanish_on_both_branches():
    for op in catalog("ll").operators:
        cl = classical_limit(specialize_u1(op))
        assert vanishes_on_branch(cl, 1) == 0
        assert vanishes_on_branch(cl, 2) == 0


def test_classical_limit_nontrivial():
    cl = classical_limit(specialize_u1(catalog("ll").operators[0]))
    assert cl  # the q->1 limit is a nonzero Laurent polynomial
