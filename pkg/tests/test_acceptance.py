"""Acceptance suite: one test per headline claim, all comparisons exact.

Each test prints its own pass/fail line under pytest -v and enforces the
runtime budget of the claim it covers.  The seven-box Hopf solution is
computed once and shared by the agreement, integrality and symmetry tests.
"""

import time

import pytest

from skeinrec.cli import (check_annihilation, check_classical,
                          check_commutator, check_u1)
from skeinrec.curves import disk_series, hopf_closed_form, unknot_Z
from skeinrec.partition import partitions_upto
from skeinrec.ring import Scalar
from skeinrec.skein import (BasisLabel, SkeinElement, Truncation, apply_P,
                            frame, frame_t, framing_factor, label_boxes,
                            product, swap_branes)
from skeinrec.operators import (catalog, pants_identity_suite, solve,
                                star_identity_suite)


def _mixed_labels(max_boxes):
    out = []
    for t in range(max_boxes + 1):
        for s in range(t + 1):
            for lam in partitions_upto(s):
                if sum(lam) != s:
                    continue
                for mub in partitions_upto(t - s):
                    if sum(mub) == t - s:
                        out.append(BasisLabel(lam, mub))
    return out


@pytest.fixture(scope="module")
def hopf_solution_7():
    t0 = time.monotonic()
    z = solve(catalog("ll"), 7)
    return z, time.monotonic() - t0


def test_criterion_1_quiver_solver_agreement_to_7_boxes(hopf_solution_7):
    z, solver_time = hopf_solution_7
    t0 = time.monotonic()
    q = hopf_closed_form("ll_quiver", Truncation(7))
    elapsed = solver_time + (time.monotonic() - t0)
    assert z == q
    assert elapsed < 600.0, f"{elapsed:.1f}s over the 10 minute budget"


def test_criterion_2_pants_form_and_identities():
    t0 = time.monotonic()
    assert hopf_closed_form("ll_pants", Truncation(6)) \
        == solve(catalog("ll"), 6)
    r = pants_identity_suite(5)
    assert r["ok"], r
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0, f"{elapsed:.1f}s over the 5 minute budget"


def test_criterion_3_annihilation_suite_to_5_boxes():
    entries = ("lm", "dl", "dd", "l0", "unknot-l", "unknot-m", "unknot-d",
               "toric", "unknot-l-recap", "annulus-id", "twisted-annulus-B")
    t0 = time.monotonic()
    for name in entries:
        framing = 1 if name == "twisted-annulus-B" else None
        r = check_annihilation(name, 5, 6, framing)
        assert r["ok"], (name, r)
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0, f"{elapsed:.1f}s over the 5 minute budget"


def test_criterion_4_unknot_closed_form_and_factorization():
    t0 = time.monotonic()
    z = unknot_Z("conormal", 0, Truncation(8))
    assert solve(catalog("unknot-l"), 8) == z
    d0 = disk_series(0, 8, Scalar.symbol("a", -1))
    d1 = disk_series(1, 8, Scalar.symbol("a", 1))
    assert product(d0, d1, 0, Truncation(8)) == z
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0, f"{elapsed:.1f}s over the 1 minute budget"


def test_criterion_5_algebra_laws():
    t0 = time.monotonic()
    # torus commutator, all |i|,|j|,|k|,|l| <= 2, labels to 4 boxes
    r = check_commutator(4, None)
    assert r["ok"], r
    # product commutativity/associativity to 4 boxes (mixed labels)
    labs4 = _mixed_labels(4)
    for l1 in labs4:
        for l2 in labs4:
            if label_boxes(l1) + label_boxes(l2) > 4:
                continue
            x, y = SkeinElement.basis(l1), SkeinElement.basis(l2)
            assert product(x, y) == product(y, x), (l1, l2)
    labs2 = _mixed_labels(2)
    for l1 in labs2:
        for l2 in labs2:
            for l3 in labs2:
                if label_boxes(l1) + label_boxes(l2) + label_boxes(l3) > 4:
                    continue
                x, y, z = (SkeinElement.basis(l) for l in (l1, l2, l3))
                assert product(product(x, y), z) == product(x, product(y, z))
    # framing group law to 6 boxes
    for lam in partitions_upto(6):
        x = SkeinElement.basis(BasisLabel(lam, ()))
        assert frame(frame(x, 2), -1) == frame(x, 1)
        assert framing_factor(lam, 3) == framing_factor(lam, 1) ** 3
    # meridian eigenvalues separate labels to 5 boxes
    labs5 = _mixed_labels(5)
    seen = set()
    for lab in labs5:
        ev = apply_P(1, 0, SkeinElement.basis(lab), "a1").coeff(lab)
        seen.add(str(ev))
    assert len(seen) == len(labs5)
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0, f"{elapsed:.1f}s over the 2 minute budget"


def test_criterion_6_u1_reduction_and_classical_branches():
    t0 = time.monotonic()
    assert check_u1(None, None)["ok"]
    assert check_classical(None, None)["ok"]
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0, f"{elapsed:.1f}s over the 10 second budget"


def test_criterion_7_integrality_and_brane_swap(hopf_solution_7):
    z, _ = hopf_solution_7
    assert swap_branes(z) == z
    bad = [key for key, v in z.sorted_items() if not v.is_integral_laurent()]
    # Known red: the raw coefficients are unreduced invariants and carry
    # hook-length denominators (e.g. the one-box entry is
    # (a^2 - 1)/(q - q^-1)); each entry times the hook products
    # prod(q^h - q^-h) of its two partitions is an integer Laurent
    # polynomial, but the raw entries themselves are not.
    assert not bad, (f"{len(bad)} coefficients are not integer Laurent "
                     f"polynomials, e.g. {bad[0]}")


def test_criterion_8_framing_covariance_to_4_boxes():
    t0 = time.monotonic()
    z = solve(catalog("ll"), 4)
    for f1 in (-1, 0, 1):
        for f2 in (-1, 0, 1):
            zf = solve(catalog("ll-framed", (f1, f2)), 4)
            assert zf == frame_t(z, f1, f2), (f1, f2)
    elapsed = time.monotonic() - t0
    assert elapsed < 180.0, f"{elapsed:.1f}s over the 3 minute budget"


def test_criterion_9_star_identity_suite():
    t0 = time.monotonic()
    for name in ("lm", "dl", "dd", "thm18"):
        r = star_identity_suite(name, 3, 5)
        assert r["ok"], (name, [x for x in r["identities"] if not x["ok"]])
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0, f"{elapsed:.1f}s over the 5 minute budget"
