from fractions import Fraction as Q

import pytest

import oracles
from toric_cke.fan import apply_unimodular
from toric_cke.fixtures import D5B_TRANSFORM, D6_TRANSFORM
from toric_cke.parametric import (
    Chamber,
    ChamberViolation,
    DegreeBoundViolation,
    ParametricFamily,
    certify_chamber,
    chamber_breakpoints,
    chamber_samples,
    evaluate,
    family_from_fan,
    family_polynomials,
    signature,
)
from toric_cke.poly import Poly


@pytest.fixture(scope="module")
def fam5(fan5):
    return family_from_fan(apply_unimodular(fan5, D5B_TRANSFORM, require_unimodular=False), (3, 6))


@pytest.fixture(scope="module")
def fam6(fan6):
    return family_from_fan(apply_unimodular(fan6, D6_TRANSFORM, require_unimodular=False), (3, 4, 7))


def test_family_offsets(fam5):
    assert fam5.parametrized == (3, 6)
    assert fam5.offsets(Q(1, 3))[3] == Q(1, 3) and fam5.offsets(Q(1, 3))[0] == Q(1, 2)


def test_family_errors(fan5):
    with pytest.raises(ValueError):
        family_from_fan(fan5, ())
    with pytest.raises(IndexError):
        family_from_fan(fan5, (8,))
    with pytest.raises(ValueError):
        family_from_fan(fan5, (1,), base_offset=0)
    with pytest.raises(ValueError):
        ParametricFamily(((1,), (-1,)), ((1, 0), (1, 0)))


def test_breakpoints_5d(fam5):
    assert chamber_breakpoints(fam5, (0, 1)) == [Q(1, 4)]
    assert chamber_breakpoints(fam5, (0, 1), symmetric=True) == [Q(1, 4), Q(3, 4)]


def test_breakpoints_6d(fam6):
    raw = chamber_breakpoints(fam6, (0, 1))
    assert Q(1, 6) in raw and Q(1, 4) not in raw
    assert chamber_breakpoints(fam6, (Q(1, 6), Q(5, 6)), symmetric=True) == []


def test_signature_changes_across_breakpoint(fam5):
    assert signature(fam5, Q(1, 5)) != signature(fam5, Q(1, 3))
    assert signature(fam5, Q(1, 3)) == signature(fam5, Q(2, 3))


def test_certify_rejects_crossing(fam5):
    with pytest.raises(ChamberViolation):
        certify_chamber(fam5, (Q(1, 8), Q(1, 2)))
    with pytest.raises(ValueError):
        certify_chamber(fam5, (Q(1, 2), Q(1, 4)))


def test_samples_inside():
    s = chamber_samples(Q(1, 4), Q(3, 4), 5)
    assert len(s) == 8 and len(set(s)) == 8
    assert all(Q(1, 4) < x < Q(3, 4) for x in s)


def test_family_polynomials_5d(fam5):
    polys = family_polynomials(fam5, certify_chamber(fam5, (Q(1, 4), Q(3, 4))))
    assert polys.volume_poly == Poly([Q(-81, 1920), Q(1360, 1920)])
    assert polys.moment_polys[4] == Poly([Q(89, 11520), Q(-27, 1280)])
    assert all(p.is_zero() for p in polys.moment_polys[:4])
    vol, mom = oracles.D5B
    assert list(polys.volume_poly.coeffs) == oracles.coeffs(vol)
    assert list(polys.moment_polys[4].coeffs) == oracles.coeffs(mom)


def test_family_polynomials_6d(fam6):
    polys = family_polynomials(fam6, certify_chamber(fam6, (Q(1, 4), Q(3, 4))))
    assert polys.volume_poly == Poly([89, -729, 9180]) * Q(1, 17280)
    assert polys.moment_polys[5] == Poly([341, -9968, 20412]) * Q(-1, 3870720)
    assert polys.moment_polys[5] == Poly([Q(-341, 3870720), Q(89, 34560), Q(-27, 5120)])
    vol, mom = oracles.D6
    assert list(polys.volume_poly.coeffs) == oracles.coeffs(vol)
    assert list(polys.moment_polys[5].coeffs) == oracles.coeffs(mom)


def test_polynomials_agree_with_direct_evaluation(fam5):
    polys = family_polynomials(fam5, certify_chamber(fam5, (Q(1, 4), Q(3, 4))))
    for c in (Q(2, 7), Q(1, 2), Q(5, 7)):
        m = evaluate(fam5, c)
        assert polys.volume_poly(c) == m.volume
        assert [p(c) for p in polys.moment_polys] == list(m.first_moments)


def test_dilation_consistency(fam5, fan5):
    # at c = 1/2 every offset is 1/2: the half-size transformed polytope
    polys = family_polynomials(fam5, certify_chamber(fam5, (Q(1, 4), Q(3, 4))))
    assert polys.volume_poly(Q(1, 2)) == Q(599, 1920)
    assert polys.volume_poly(Q(1, 2)) == Q(599, 15) / 32 / 4


def test_held_out_samples_catch_a_kink(fam5):
    # samples straddling the breakpoint at 1/4: the interpolant must miss one
    lo, hi = Q(1, 8), Q(1, 2)
    fake = Chamber(lo, hi, signature(fam5, Q(1, 3)), chamber_samples(lo, hi, fam5.dim))
    with pytest.raises(DegreeBoundViolation):
        family_polynomials(fam5, fake)
