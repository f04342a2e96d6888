import random
from fractions import Fraction

import pytest
import sympy

from factlab.field_core import FieldCtx, mod_inverse
from factlab.poly_lab import (
    BivarPoly,
    ExactDivisionError,
    PolySpec,
    dickson_mismatch,
    dickson_poly,
    divide_linear,
    falling_product_poly,
    from_x_poly,
    from_y_poly,
    indecomposable_by_degree,
    linear_divisors,
    phi_pair,
    q_kj,
    schmidt_psi,
)
from factlab.residue_census import primes_in_range

X, Y = sympy.symbols("x y")


def sympy_coeffs(expr, p):
    """Ascending coefficient list of a sympy univariate in x, reduced mod p."""
    poly = sympy.Poly(sympy.expand(expr), X)
    return [int(c) % p for c in reversed(poly.all_coeffs())]


def test_falling_product_small_cases():
    ctx = FieldCtx(101)
    assert falling_product_poly(ctx, 1).coeffs == (1, 1)
    assert falling_product_poly(ctx, 2).coeffs == (2, 3, 1)
    assert falling_product_poly(ctx, 3).coeffs == (6, 11, 6, 1)


def test_falling_product_matches_sympy_expansion():
    ctx = FieldCtx(1009)
    for j in (4, 7, 12):
        expr = sympy.prod([X + i for i in range(1, j + 1)])
        expected = sympy_coeffs(expr, 1009)
        assert list(falling_product_poly(ctx, j).coeffs) == expected


def test_falling_product_range_errors():
    ctx = FieldCtx(7)
    with pytest.raises(ValueError):
        falling_product_poly(ctx, 7)
    with pytest.raises(ValueError):
        falling_product_poly(ctx, 0)


def test_falling_product_root_symmetry():
    # roots -1..-j are symmetric about -(j+1)/2, so reflection flips the
    # value by (-1)^j; for even j this is the identity behind the extra
    # linear factor of the difference quotient
    for p in (101, 499, 997):
        ctx = FieldCtx(p)
        for j in range(1, 11):
            P = falling_product_poly(ctx, j)
            sign = 1 if j % 2 == 0 else -1
            for x in range(p):
                reflected = P.evaluate((-x - j - 1) % p)
                assert P.evaluate(x) == sign * reflected % p


def test_dickson_small_cases():
    ctx = FieldCtx(101)
    a = 17
    assert dickson_poly(ctx, 1, a).coeffs == (0, 1)
    assert dickson_poly(ctx, 2, a).coeffs == ((-2 * a) % 101, 0, 1)
    assert dickson_poly(ctx, 3, a).coeffs == (0, (-3 * a) % 101, 0, 1)


def test_dickson_functional_equation():
    ctx = FieldCtx(1009)
    rng = random.Random(7)
    for d, a in ((5, 3), (8, 123), (13, 997)):
        D = dickson_poly(ctx, d, a)
        for _ in range(200):
            x = rng.randrange(1, ctx.p)
            lhs = D.evaluate((x + a * mod_inverse(ctx, x)) % ctx.p)
            rhs = (pow(x, d, ctx.p) + pow(a * mod_inverse(ctx, x), d, ctx.p)) % ctx.p
            assert lhs == rhs


def test_phi_pair_equal_quadratic():
    ctx = FieldCtx(101)
    P2 = falling_product_poly(ctx, 2)
    f = phi_pair(P2, P2)
    assert f.grid == ((3, 1), (1, 0))  # x + y + 3


def test_phi_pair_distinct_is_difference():
    ctx = FieldCtx(101)
    P1 = falling_product_poly(ctx, 1)
    P2 = falling_product_poly(ctx, 2)
    f = phi_pair(P1, P2)
    assert f == from_x_poly(P1) - from_y_poly(P2)


def test_phi_pair_equal_cubic():
    ctx = FieldCtx(101)
    P3 = falling_product_poly(ctx, 3)
    f = phi_pair(P3, P3)
    assert f.grid == ((11, 6, 1), (6, 1, 0), (1, 0, 0))


def test_phi_pair_diagonal_is_derivative():
    ctx = FieldCtx(1009)
    rng = random.Random(11)
    for j in (3, 5, 7):
        P = falling_product_poly(ctx, j)
        f = phi_pair(P, P)
        dP = P.derivative()
        for _ in range(50):
            x = rng.randrange(ctx.p)
            assert f.evaluate(x, x) == dP.evaluate(x)


def test_phi_pair_rejects_constants():
    ctx = FieldCtx(7)
    with pytest.raises(ValueError):
        phi_pair(PolySpec(7, [3]), falling_product_poly(ctx, 2))


def test_divide_linear_nonzero_remainder():
    ctx = FieldCtx(101)
    P3 = falling_product_poly(ctx, 3)
    f = phi_pair(P3, P3)
    quotient, remainder = divide_linear(f, 1, 1, 5)  # x + y + 5 is not a factor
    assert not remainder.is_zero()


def test_q_kj_examples():
    ctx = FieldCtx(101)
    assert q_kj(ctx, 3, 3).grid == ((11, 6, 1), (6, 1, 0), (1, 0, 0))
    assert q_kj(ctx, 2, 2).grid == ((1,),)
    P3 = falling_product_poly(ctx, 3)
    P5 = falling_product_poly(ctx, 5)
    assert q_kj(ctx, 3, 5) == from_x_poly(P3) - from_y_poly(P5)


def test_q_kj_exact_divisions_sweep():
    for p in (101, 1009):
        ctx = FieldCtx(p)
        for j in range(1, 21):
            f = q_kj(ctx, j, j)  # raises on any nonzero remainder
            expected_deg = j - 1 if j % 2 else j - 2
            assert f.total_degree == expected_deg


def test_q_kj_matches_sympy_division():
    p = 101
    ctx = FieldCtx(p)
    for j in (4, 6):
        Px = sympy.prod([X + i for i in range(1, j + 1)])
        Py = Px.subs(X, Y)
        quotient = sympy.div(
            sympy.div(Px - Py, X - Y, X, Y, domain=sympy.GF(p))[0],
            X + Y + j + 1,
            X,
            Y,
            domain=sympy.GF(p),
        )[0]
        mine = q_kj(ctx, j, j)
        spoly = sympy.Poly(quotient, X, Y, domain=sympy.GF(p))
        for (i, k), c in zip(spoly.monoms(), spoly.coeffs()):
            assert mine.coeff(i, k) == int(c) % p


def test_q_kj_range_errors():
    ctx = FieldCtx(11)
    with pytest.raises(ValueError):
        q_kj(ctx, 3, 9)  # j >= p - 2
    with pytest.raises(ValueError):
        q_kj(ctx, 0, 3)


def test_schmidt_psi_examples():
    ctx = FieldCtx(101)
    psi, coprime = schmidt_psi(q_kj(ctx, 3, 5))
    assert (psi, coprime) == (Fraction(3, 5), True)
    # x^2 - y^3
    f = BivarPoly(101, [[0, 0, 0, 100], [0, 0, 0, 0], [1, 0, 0, 0]])
    assert schmidt_psi(f) == (Fraction(2, 3), True)
    # x - y^2
    g = BivarPoly(101, [[0, 0, 100], [1, 0, 0]])
    assert schmidt_psi(g) == (Fraction(1, 2), True)


def test_schmidt_psi_prime_pairs():
    ctx = FieldCtx(1009)
    primes = [3, 5, 7, 11, 13]
    for i, k in enumerate(primes):
        for j in primes[i + 1 :]:
            psi, coprime = schmidt_psi(q_kj(ctx, k, j))
            assert psi == Fraction(k, j)
            assert coprime


def test_schmidt_psi_requires_constant_lead():
    # x*y^2 + 1 has leading y-coefficient x
    f = BivarPoly(101, [[1, 0, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        schmidt_psi(f)


def test_dickson_mismatch_examples():
    cert = dickson_mismatch(FieldCtx(101), 5)
    assert cert.found
    assert cert.mismatch_degree in (2, 1)  # within {j-3, j-4}
    cert7 = dickson_mismatch(FieldCtx(1009), 7)
    assert cert7.found
    with pytest.raises(ValueError):
        dickson_mismatch(FieldCtx(101), 4)


def test_dickson_mismatch_candidate_is_forced():
    # the solved (alpha, a, b, c) must reproduce degrees j, j-1, j-2 and 0
    ctx = FieldCtx(1009)
    for j in (5, 9, 14):
        cert = dickson_mismatch(ctx, j)
        Pj = falling_product_poly(ctx, j)
        cand = dickson_poly(ctx, j, cert.a).shift(cert.b) + PolySpec(ctx.p, [cert.c])
        for deg in (j, j - 1, j - 2, 0):
            assert cand.coeff(deg) == Pj.coeff(deg)
        assert cand.coeff(cert.mismatch_degree) != Pj.coeff(cert.mismatch_degree)


def test_indecomposable_by_degree():
    assert indecomposable_by_degree(7) is True
    assert indecomposable_by_degree(4) is False
    assert indecomposable_by_degree(2) is True
    with pytest.raises(ValueError):
        indecomposable_by_degree(1)


def test_linear_divisors_finds_plane_factors():
    p = 101
    # (x - y)(x + y + 3) expanded: x^2 + 3x - y^2 - 3y
    f = BivarPoly(p, [[0, p - 3, p - 1], [3, 0, 0], [1, 0, 0]])
    found = set(linear_divisors(f))
    assert (1, p - 1, 0) in found  # x - y
    assert (1, 1, 3) in found  # x + y + 3
    ctx = FieldCtx(p)
    assert linear_divisors(q_kj(ctx, 3, 5)) == ()
    assert linear_divisors(q_kj(ctx, 3, 3)) == ()


def test_polyspec_shift_and_derivative_match_sympy():
    p = 1009
    ctx = FieldCtx(p)
    P = falling_product_poly(ctx, 6)
    expr = sympy.prod([X + i for i in range(1, 7)])
    assert list(P.shift(5).coeffs) == sympy_coeffs(expr.subs(X, X + 5), p)
    assert list(P.derivative().coeffs) == sympy_coeffs(sympy.diff(expr, X), p)
