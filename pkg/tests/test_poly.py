import random
from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from toric_cke.poly import (
    Poly,
    count_roots,
    interpolate,
    isolate_real_roots,
    refine_root,
    sign_variations,
    to_decimal,
)

X = Poly.x()


def sympy_poly(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], sympy.Symbol("x"))


def test_arithmetic():
    p = (X - 1) * (X + 2)
    assert p == Poly([-2, 1, 1])
    q, r = divmod(p, X - 1)
    assert q == X + 2 and r.is_zero()
    assert (X**3).degree == 3
    assert Poly([]).degree == -1
    assert p(Q(1, 2)) == Q(-5, 4)
    assert p(Poly([1, -1])) == Poly([0, -3, 1])  # composition with 1 - x
    assert str(Poly([1, -2, 3])) != ""


def test_primitive_and_gcd():
    p = Poly([Q(1, 2), Q(-1, 3)])
    assert p.primitive().coeffs == (Q(-3), Q(2))
    g = ((X - 1) * (X - 2)).gcd((X - 1) * (X + 5))
    assert g == X - 1
    assert ((X - 1) ** 2 * (X + 1)).squarefree() == (X - 1) * (X + 1)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=7))
def test_interpolation_is_exact(coeffs):
    p = Poly(coeffs)
    xs = [Q(k, 3) for k in range(len(coeffs))]
    assert interpolate([(x, p(x)) for x in xs]) == p


def test_interpolate_duplicate():
    with pytest.raises(ValueError):
        interpolate([(1, 2), (1, 3)])


def test_sign_variations():
    assert sign_variations([1, 0, -1, 2, 0, 0, 3]) == 2


def test_sturm_hundred_random_cubics_and_quartics():
    rng = random.Random(7)
    checked = 0
    while checked < 100:
        deg = rng.choice((3, 4))
        coeffs = [rng.randint(-12, 12) for _ in range(deg)] + [rng.choice([k for k in range(-5, 6) if k])]
        p = Poly(coeffs)
        lo, hi = Q(rng.randint(-8, 0), rng.randint(1, 3)), Q(rng.randint(1, 8), rng.randint(1, 3))
        if p(lo) == 0 or p(hi) == 0:
            continue
        expected = sympy_poly(p).count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                              sympy.Rational(hi.numerator, hi.denominator))
        assert count_roots(p, lo, hi) == expected, (coeffs, lo, hi)
        checked += 1


def test_open_interval_excludes_endpoints():
    p = (X - 1) * (X - 2) * (X - 3)
    assert count_roots(p, 1, 3) == 1
    assert count_roots(p, Q(1, 2), Q(7, 2)) == 3
    assert count_roots((X - 1) ** 3, 0, 2) == 1


def test_isolation_and_refinement():
    p = X**2 - 2
    (r,) = isolate_real_roots(p, 0, 2)
    assert r.contains(Q(141421, 100000)) or r.width > 0
    fine = refine_root(r, Q(1, 10**12))
    assert fine.width <= Q(1, 10**12)
    assert to_decimal(fine.midpoint) == "1.414214"
    assert fine.lo * fine.lo < 2 < fine.hi * fine.hi


def test_rational_roots_exact():
    p = (2 * X - 1) * (X**2 - 3)
    roots = isolate_real_roots(p, 0, 1)
    assert len(roots) == 1 and roots[0].is_exact and roots[0].lo == Q(1, 2)


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=7), min_size=1, max_size=4, unique=True))
def test_isolation_finds_all_planted_roots(roots):
    p = Poly([1])
    for r in roots:
        p = p * (X - r)
    found = isolate_real_roots(p, -4, 4)
    assert len(found) == len(roots)
    for iv, r in zip(found, sorted(roots)):
        assert iv.lo <= r <= iv.hi


def test_to_decimal_half_even():
    assert to_decimal(Q(1, 8), 2) == "0.12"
    assert to_decimal(Q(3, 8), 2) == "0.38"
    assert to_decimal(Q(-1, 3)) == "-0.333333"


def test_to_significant():
    from toric_cke.poly import to_significant

    assert to_significant(Q(344196, 10**6), 5) == "0.34420"
    assert to_significant(Q(48084, 10**6), 5) == "0.048084"
    assert to_significant(Q(999996, 10**6), 5) == "1.0000"
    assert to_significant(Q(1234567, 10), 3) == "123000"
    assert to_significant(0, 3) == "0"
