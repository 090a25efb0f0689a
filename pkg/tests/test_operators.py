import pytest

from skeinrec.curves import hopf_closed_form, unknot_Z, disk_series, zUc
from skeinrec.ring import Scalar, S_ONE, qint, qmono
from skeinrec.skein import (BasisLabel, SkeinElement, TensorElement,
                            Truncation, frame_t, swap_branes)
from skeinrec.operators import (CATALOG_NAMES, OperatorExpr, RecursionSystem,
                                catalog, conjugate_framing,
                                pants_identity_suite, solve,
                                verify_annihilation)


def test_catalog_names_complete():
    for name in CATALOG_NAMES:
        framing = {"ll-framed": (1, 0), "toric-framed": 1,
                   "unknot-l-framed": 1, "twisted-annulus-B": 1}.get(name)
        sys = catalog(name, framing)
        assert sys.operators
    with pytest.raises(ValueError):
        catalog("mystery")
    with pytest.raises(ValueError):
        catalog("twisted-annulus-B", 0)


def test_first_operator_on_vacuum():
    # P_{0,0} and P_{1,0} share the vacuum eigenvalue
    # (a_L - a_L^-1)/(q - q^-1), so the meridian differences cancel and
    # only the longitude-shift terms in bidegrees (1,0), (0,1) survive.
    op = catalog("ll").operators[0]
    res = op.apply(TensorElement.unit())
    vac = BasisLabel((), ())
    box = BasisLabel((1,), ())
    assert res.coeff((vac, vac)).is_zero()
    a2 = Scalar.symbol("a", 2)
    both = Scalar.symbol("a1") * Scalar.symbol("a2")
    assert res.coeff((vac, box)) == (S_ONE - a2) * both
    assert res.coeff((box, vac)) == (a2 - S_ONE) * both


def test_vacuum_alone_is_not_annihilated():
    r = verify_annihilation(catalog("ll"), TensorElement.unit(), 3)
    assert not r["ok"]
    # the longitude-shift image of the vacuum shows up in both one-box
    # bidegrees; the report picks the first in the solve order
    assert r["first_failure"]["bidegree"] in ((1, 0), (0, 1))


def test_solver_refuses_mixed_cones():
    for name in ("lm", "dl", "dd", "unknot-d", "annulus-id"):
        framing = 1 if name == "twisted-annulus-B" else None
        with pytest.raises(ValueError, match="solver does not support"):
            solve(catalog(name, framing), 3)


def test_commutator_system_solves_to_unit():
    assert solve(catalog("l0"), 4) == TensorElement.unit()
    r = verify_annihilation(catalog("l0"), TensorElement.unit(), 4)
    assert r["ok"]


def test_solver_matches_quiver_form_small():
    z = solve(catalog("ll"), 4)
    assert z == hopf_closed_form("ll_quiver", Truncation(4))
    r = verify_annihilation(catalog("ll"), z, 4)
    assert r["ok"] and r["first_failure"] is None


def test_solution_survives_resolve_with_larger_cap():
    sys = catalog("ll")
    z1 = solve(sys, 3, a_cap=8)
    z2 = solve(sys, 3, a_cap=10)
    assert z1 == z2 == solve(sys, 3)


def test_framed_solution_is_framed_base_solution():
    z = solve(catalog("ll"), 3)
    for f1, f2 in ((1, 0), (-1, 1)):
        zf = solve(catalog("ll-framed", (f1, f2)), 3)
        assert zf == frame_t(z, f1, f2)


def test_conjugate_framing_round_trip():
    op = catalog("ll").operators[1]
    there = conjugate_framing(op, (1, -1))
    back = conjugate_framing(there, (-1, 1))
    assert sorted((str(c), w1, w2) for c, w1, w2 in back.terms) \
        == sorted((str(c), w1, w2) for c, w1, w2 in op.terms)


def test_one_brane_solutions():
    assert solve(catalog("unknot-l"), 5) \
        == unknot_Z("conormal", 0, Truncation(5))
    assert solve(catalog("unknot-m"), 5) == zUc(5)
    assert solve(catalog("toric"), 5) == disk_series(0, 5)
    assert solve(catalog("toric-framed", 2), 4) == disk_series(2, 4)
    assert solve(catalog("unknot-l-recap"), 5) \
        == unknot_Z("conormal", 0, Truncation(5))


def _perturbed(sys, op_idx, term_idx, delta):
    ops = list(sys.operators)
    terms = list(ops[op_idx].terms)
    c, w1, w2 = terms[term_idx]
    terms[term_idx] = (c + delta, w1, w2)
    ops[op_idx] = OperatorExpr(terms)
    return RecursionSystem(sys.name, sys.branes, tuple(ops), sys.cone,
                           sys.framing)


def test_any_coefficient_perturbation_breaks_solvability():
    """Transcription guard: each catalog coefficient is load-bearing."""
    sys = catalog("ll")
    delta = Scalar.symbol("a", 4) * Scalar.from_q(qmono(1, 1))
    for k, op in enumerate(sys.operators):
        for t in range(len(op.terms)):
            with pytest.raises(ValueError,
                               match="inconsistent|underdetermined"):
                solve(_perturbed(sys, k, t, delta), 6)


def test_pants_identities():
    r = pants_identity_suite(4)
    assert r["ok"], r
