"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS line (visible under ``pytest -s``); a failure
shows up as an ordinary pytest failure. Criterion 12 is the one
empirical-conjecture check and downgrades to a warning, as specified.

The full-range strict-cardinality scan (criterion 1) dominates the
runtime; everything else takes seconds.
"""

import math
import os
import random
import warnings
from fractions import Fraction

import numpy as np
import pytest

from factlab.factorizer import (
    bounded_product_reach,
    find_representation,
    reach_bound,
    three_factorial,
    verify_certificate,
)
from factlab.field_core import FieldCtx
from factlab.fourier_probe import fourier_error_bound, spectrum
from factlab.point_counts import (
    ProgressionSpec,
    count_full,
    count_full_bruteforce,
    count_interval,
    exp_sum_check,
    image_count,
    intersection_count,
    langweil_report,
)
from factlab.poly_lab import (
    dickson_mismatch,
    falling_product_poly,
    q_kj,
    schmidt_psi,
)
from factlab.residue_census import (
    ResidueSet,
    density_stats,
    embedding_check,
    image_set,
    primes_in_range,
    scan_cardinalities,
)
from factlab.union_estimator import verify_family

THREADS = os.cpu_count() or 1


def _report(num: int, text: str) -> None:
    print(f"criterion {num:2d}: PASS — {text}")


def _pair_polys(ctx):
    return {j: falling_product_poly(ctx, j) for j in (3, 5, 7)}


def _pairs():
    return [(3, 3), (3, 5), (3, 7), (5, 5), (5, 7), (7, 7)]


def _chain_configurations():
    """The shared criterion-5/6/7 grid: 20 seeded progressions per prime."""
    rng = random.Random(20240814)
    out = []
    for p in (101, 1009, 10007):
        ctx = FieldCtx(p)
        polys = _pair_polys(ctx)
        progressions = [
            ProgressionSpec(
                start=rng.randrange(p),
                step=rng.randrange(1, p),
                length=rng.randrange(2, p),
            )
            for _ in range(20)
        ]
        out.append((ctx, polys, progressions))
    return out


def test_criterion_01_erdos_scan_to_one_million():
    results = scan_cardinalities(7, 10**6, threads=THREADS)
    exceptions = [(p, card) for p, card in results if card >= p - 2]
    assert exceptions == []
    assert len(results) == 78495  # pi(1e6) = 78498 minus the three primes below 7
    _report(1, f"|A(p)| < p-2 for all {len(results)} primes in [7, 1e6], "
               f"zero exceptions ({THREADS} threads)")


def test_criterion_02_wilson_suite_exact():
    checked = 0
    for p in primes_in_range(3, 10**4).tolist():
        table = FieldCtx(p).factorial_table().astype(np.int64)
        products = table * table[::-1] % p  # index y holds y! * (p-1-y)!
        expected = np.where(np.arange(p) % 2 == 1, 1, p - 1)
        assert np.array_equal(products, expected)
        checked += p
    _report(2, f"y!(p-1-y)! = (-1)^(y+1) exactly for all y, all primes <= 1e4 "
               f"({checked} pairs)")


def test_criterion_03_langweil_audit():
    rows = 0
    for p in primes_in_range(100, 2000).tolist():
        ctx = FieldCtx(p)
        polys = _pair_polys(ctx)
        for k, j in _pairs():
            rep = langweil_report(ctx, polys[k], polys[j])
            assert rep.satisfied, (p, k, j, rep)
            rows += 1
    _report(3, f"|J - p| within the Lang-Weil window on {rows} (p, pair) audits")


def test_criterion_04_chalk_smith_audit():
    rng = random.Random(4)
    rows = 0
    for p in (101, 1009):
        ctx = FieldCtx(p)
        polys = _pair_polys(ctx)
        for k, j in _pairs():
            for _ in range(100):
                b1, b2 = rng.randrange(p), rng.randrange(p)
                if (b1, b2) == (0, 0):
                    b1 = 1
                rep = exp_sum_check(ctx, polys[k], polys[j], b1, b2)
                assert rep.satisfied, (p, k, j, b1, b2, rep)
                rows += 1
    _report(4, f"exponential sums within 2 d^2 sqrt(p) (+1e-6 rel) on {rows} samples")


def test_criterion_05_lemma5_explicit_chain():
    rows = 0
    for ctx, polys, progressions in _chain_configurations():
        full_cache = {
            (k, j): count_full(ctx, polys[k], polys[j]) for k, j in _pairs()
        }
        for k, j in _pairs():
            full = full_cache[(k, j)]
            d = polys[j].degree if k != j else polys[j].degree - 1
            for I in progressions:
                rep = fourier_error_bound(ctx, polys[k], polys[j], I)
                assert rep.satisfied, (ctx.p, k, j, I, rep)
                # re-derive every quantity independently of the API path
                observed = count_interval(ctx, polys[k], polys[j], I)
                reference = I.length**2 / ctx.p**2 * full
                s1 = spectrum(ctx, I).l1
                bound = s1**2 / ctx.p**2 * 2 * d * d * math.sqrt(ctx.p)
                assert rep.observed == observed
                assert rep.reference == pytest.approx(reference)
                assert rep.bound == pytest.approx(bound)
                assert abs(observed - reference) <= bound, (ctx.p, k, j, I)
                rows += 1
    _report(5, f"|J_I - (|I|^2/p^2) J| <= (S1^2/p^2) 2 d^2 sqrt(p) on {rows} configs")


def test_criterion_06_cauchy_schwarz_image_chain():
    rows = 0
    for ctx, polys, progressions in _chain_configurations():
        for j in (3, 5, 7):
            for I in progressions:
                n = I.length
                ji = count_interval(ctx, polys[j], polys[j], I)
                assert image_count(ctx, polys[j], I) >= n * n / (n + ji), (ctx.p, j, I)
                rows += 1
    _report(6, f"|P(I)| >= |I|^2/(|I| + J_I(P,P)) exactly on {rows} configs")


def test_criterion_07_intersection_domination():
    rows = 0
    for ctx, polys, progressions in _chain_configurations():
        for k, j in _pairs():
            if k == j:
                continue
            for I in progressions:
                inter = intersection_count(ctx, polys[k], polys[j], I)
                ji = count_interval(ctx, polys[k], polys[j], I)
                assert inter <= ji, (ctx.p, k, j, I)
                rows += 1
    _report(7, f"|P(I) ∩ Q(I)| <= J_I(P,Q) exactly on {rows} configs")


def test_criterion_08_qkj_structure():
    divisions = 0
    for p in (101, 1009):
        ctx = FieldCtx(p)
        for j in range(1, 21):
            f = q_kj(ctx, j, j)  # exact-division errors would raise here
            assert f.total_degree == (j - 1 if j % 2 else j - 2)
            divisions += 1 if j % 2 else 2
    psi_pairs = 0
    ctx = FieldCtx(1009)
    odd_primes = [3, 5, 7, 11, 13]
    for i, k in enumerate(odd_primes):
        for j in odd_primes[i + 1 :]:
            psi, coprime = schmidt_psi(q_kj(ctx, k, j))
            assert psi == Fraction(k, j) and coprime, (k, j, psi)
            psi_pairs += 1
    mismatches = 0
    for p in (101, 1009):
        ctx = FieldCtx(p)
        for j in range(5, 21):
            cert = dickson_mismatch(ctx, j)
            assert cert.found, (p, j)
            mismatches += 1
    _report(8, f"{divisions} exact divisions, psi = k/j on {psi_pairs} prime pairs, "
               f"{mismatches} Dickson mismatch certificates")


def test_criterion_09_union_bound_suite():
    rng = random.Random(9)
    universe = 997
    checked = 0
    attempts = 0
    while checked < 1000:
        attempts += 1
        assert attempts < 20000, "family generation is not converging"
        n_sets = rng.randrange(2, 9)
        sets = [
            ResidueSet.from_indices(
                universe, rng.sample(range(universe), rng.randrange(30, 101))
            )
            for _ in range(n_sets)
        ]
        report = verify_family(sets)
        if not report.applicable:
            continue
        assert report.union_size >= report.bound, report
        checked += 1
    # the concrete window family Y_3, Y_5, Y_7 at p = 1009
    p, N, M = 1009, 50, 7
    ctx = FieldCtx(p)
    I = ProgressionSpec(1, 2, (2 * N - M + 1) // 2)
    family = [image_set(ctx, falling_product_poly(ctx, j), I) for j in (3, 5, 7)]
    rep = verify_family(family)
    assert rep.applicable and rep.holds, rep
    _report(9, f"union >= (a^2/b)(1 - a/(nb)) on {checked} random families and the "
               f"window family (a={rep.a}, b={rep.b}, union={rep.union_size})")


def test_criterion_10_representations():
    total = 0
    for p in primes_in_range(3, 500).tolist():
        ctx = FieldCtx(p)
        for a in range(1, p):
            assert verify_certificate(ctx, three_factorial(ctx, a))
            total += 1
    coverage = []
    rng = random.Random(10)
    for p in (1009, 2003, 5003, 10007):
        ctx = FieldCtx(p)
        B = reach_bound(p)
        levels = bounded_product_reach(ctx, B, 7)
        units = levels[6].cardinality - (1 if 0 in levels[6] else 0)
        assert units == p - 1, (p, units)
        for a in rng.sample(range(1, p), 100):
            cert = find_representation(ctx, a, 7, B)
            assert verify_certificate(ctx, cert)
            assert max(cert.factors) <= B
        coverage.append((p, B))
    _report(10, f"{total} exhaustive three-factorial certificates; S7 covers F_p* "
                f"with B = ceil(p^(6/7+0.05)) at {coverage}, 100 certificates each")


def test_criterion_11_embedding_checks():
    cases = [(101, 10, 3), (1009, 50, 5), (10007, 200, 7)]
    for p, N, M in cases:
        assert embedding_check(FieldCtx(p), N, M), (p, N, M)
    _report(11, f"witness-pair embedding holds at {cases}")


def test_criterion_12_density_report():
    rng = random.Random(12)
    primes = primes_in_range(10**5, 10**6)
    sample = sorted(int(primes[i]) for i in rng.sample(range(len(primes)), 20))
    violations = []
    for p in sample:
        ratio, deviation = density_stats(FieldCtx(p))
        if abs(deviation) > 0.02:
            violations.append((p, ratio))
    if violations:  # conjectural density: warn, never fail
        warnings.warn(f"density deviates beyond 0.02 at {violations}")
    _report(12, f"|A(p)|/p within 0.02 of 1 - 1/e on {len(sample) - len(violations)}"
                f"/20 sampled primes in [1e5, 1e6] (empirical conjecture, "
                f"{len(violations)} warnings)")


def test_criterion_13_bruteforce_oracle_equivalence():
    rows = 0
    for p in primes_in_range(3, 500).tolist():
        ctx = FieldCtx(p)
        top = min(7, p - 1)
        polys = {j: falling_product_poly(ctx, j) for j in range(1, top + 1)}
        for k in range(1, top + 1):
            for j in range(k, top + 1):
                fast = count_full(ctx, polys[k], polys[j])
                slow = count_full_bruteforce(ctx, polys[k], polys[j])
                assert fast == slow, (p, k, j, fast, slow)
                rows += 1
    _report(13, f"histogram J equals O(p^2) brute force on {rows} (p, k, j) triples")
