import math
import random
from fractions import Fraction

import pytest

from factlab.field_core import FieldCtx
from factlab.point_counts import ProgressionSpec
from factlab.poly_lab import falling_product_poly
from factlab.residue_census import ResidueSet, image_set
from factlab.union_estimator import (
    FamilyReport,
    UnionFamilyStats,
    binomial_link,
    theorem1_params,
    theorem2_bound,
    union_lower_bound,
    verify_family,
)


def test_union_lower_bound_examples():
    assert union_lower_bound(UnionFamilyStats(10, 10, 2)) == pytest.approx(5.0)
    assert union_lower_bound(UnionFamilyStats(10, 1, 100)) == pytest.approx(90.0)
    assert union_lower_bound(UnionFamilyStats(10, 1, 5)) == pytest.approx(-100.0)


def test_union_family_stats_validation():
    with pytest.raises(ValueError):
        UnionFamilyStats(a=3, b=5, n=4)
    with pytest.raises(ValueError):
        UnionFamilyStats(a=3, b=0, n=4)
    with pytest.raises(ValueError):
        UnionFamilyStats(a=3, b=2, n=1)


def random_family(rng, universe, n_sets, size_lo, size_hi):
    sets = []
    for _ in range(n_sets):
        size = rng.randrange(size_lo, size_hi + 1)
        sets.append(ResidueSet.from_indices(universe, rng.sample(range(universe), size)))
    return sets


def test_union_bound_never_exceeds_truth_randomized():
    rng = random.Random(42)
    checked = 0
    while checked < 300:
        sets = random_family(rng, 1000, rng.randrange(2, 9), 30, 100)
        report = verify_family(sets)
        if not report.applicable:
            continue
        assert report.union_size >= report.bound
        checked += 1


def test_verify_family_identical_sets():
    s = ResidueSet.from_indices(101, range(10))
    report = verify_family([s, s])
    assert report.applicable
    assert report.a == report.b == 10
    assert report.bound == pytest.approx(5.0)
    assert report.union_size == 10
    assert report.holds


def test_verify_family_disjoint_singletons_inapplicable():
    sets = [ResidueSet.from_indices(997, [i]) for i in range(100)]
    report = verify_family(sets)
    assert not report.applicable
    assert report.b == 0
    assert report.holds is None


def test_verify_family_window_construction():
    # the odd-window family at p=1009: Y_3, Y_5, Y_7 with N=50, M=7
    p, N, M = 1009, 50, 7
    ctx = FieldCtx(p)
    I = ProgressionSpec(1, 2, (2 * N - M + 1) // 2)
    family = [image_set(ctx, falling_product_poly(ctx, j), I) for j in (3, 5, 7)]
    report = verify_family(family)
    assert report.applicable
    assert report.union_size >= report.bound


def test_monotonicity_in_n_and_a():
    for n in range(2, 60):
        assert union_lower_bound(UnionFamilyStats(20, 5, n + 1)) >= union_lower_bound(
            UnionFamilyStats(20, 5, n)
        )
    # in a the bound grows only while a <= 2nb/3 (the derivative
    # 2a/b - 3a^2/(n b^2) changes sign there), here 2*10*5/3 = 33
    for a in range(5, 33):
        lo = union_lower_bound(UnionFamilyStats(a, 5, 10))
        hi = union_lower_bound(UnionFamilyStats(a + 1, 5, 10))
        assert hi >= lo
    # and genuinely decreases past the turning point
    assert union_lower_bound(UnionFamilyStats(40, 5, 10)) < union_lower_bound(
        UnionFamilyStats(34, 5, 10)
    )


def test_binomial_link_examples():
    assert binomial_link(1) == 1
    assert binomial_link(11) == 5
    assert binomial_link(10007) == 141
    with pytest.raises(ValueError):
        binomial_link(0)


def test_binomial_link_triangular_fixed_points():
    for m in range(1, 10001):
        assert binomial_link(m * (m + 1) // 2) == m


def test_theorem1_params_values():
    t = theorem1_params(10007)
    assert t.kappa == pytest.approx(math.log(math.log(10007)) / math.log(10007))
    assert t.kappa == pytest.approx(0.2411, abs=5e-4)
    assert not t.delta_positive  # desk-scale p sits below the threshold
    assert t.constraints_ok
    t2 = theorem1_params(10**6 + 3)
    assert t2.constraints_ok
    assert t2.delta <= t2.eps1 + 1e-12
    assert t2.delta <= 0.5 - 2 * t2.eps1 - 2 * t2.eps2 - 2 * t2.kappa + 1e-12
    assert t2.delta <= t2.eps2 - t2.eps1 - t2.kappa + 1e-12
    with pytest.raises(ValueError):
        theorem1_params(13)


def test_theorem1_limiting_values():
    # kappa -> 0 recovers eps1 = 1/14, eps2 = 1/7, delta = 1/14
    t = theorem1_params(10**18 + 9)
    assert t.eps1 == pytest.approx(1 / 14 - 4 * t.kappa / 7)
    assert t.eps2 == pytest.approx(1 / 7 - t.kappa / 7)
    assert t.delta == pytest.approx(t.eps1)


def test_theorem2_regimes():
    p = 10**6 + 3
    top = theorem2_bound(p, p)
    assert top.regime == 1
    assert top.main_term == p
    lg, sq = math.log(p), math.sqrt(p)
    floor_n = math.ceil(sq * lg**2)
    bottom = theorem2_bound(p, floor_n + 1)
    assert bottom.regime == 5
    assert bottom.recommended_name == "M"
    assert bottom.main_term == pytest.approx(
        (floor_n + 1) * (bottom.Q ** (1 / 3))
    )
    with pytest.raises(ValueError):
        theorem2_bound(p, 10**5)  # below the hypothesis floor with c5 = 1
    with pytest.raises(ValueError):
        theorem2_bound(p, p + 1)


def test_theorem2_constants_shift_classification():
    p = 10**6 + 3
    # shrinking c5 admits smaller N
    r = theorem2_bound(p, 10**5, constants=(1, 1, 1, 1, 1, 0.5))
    assert r.regime == 5
    assert float(r.K) == pytest.approx(p / 10**5)
