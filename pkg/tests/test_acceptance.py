"""Acceptance criteria 1-8.

Each test prints one PASS/FAIL line (collected again in the pytest summary).
Criteria whose stated claim disagrees with the computed geometry are
run in full and marked as strict expected failures, so an unexpected pass
breaks the build.

Run alone with ``pytest tests/test_acceptance.py -s`` or
``python tests/test_acceptance.py``.
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from acceptance_log import record
from lorgeo.algebra import is_unimodular, jacobi_residual
from lorgeo.connection import curvature
from lorgeo.enumeration import count_independent, enumerate_families, has_null_homogeneous, rank_of, stated_count
from lorgeo.families import FamilyParams, FamilyTag, build_family, invariant_D, symmetric_locus
from lorgeo.geodesics import (GeodesicVector, completion_residuals, is_geodesic_vector, nabla_parallel_check,
                              nabla_parallel_k, null_directions, numeric_search)
from lorgeo.isotropy import compute_l, first_stable_index, stated_stable_index
from lorgeo.reductive import is_go, sampling_check
from lorgeo.sampling import EmptyBranch, random_any, random_instance, random_unimodular, rational

NON_UNIMODULAR = ("g5", "g6", "g7")
ROW_GROUPS = (("g5", "any"), ("g6", "any"), ("g7", "A"), ("g7", "B"))


def _normalized(inst):
    c = inst.constants
    return type(c)(c.c / float(np.max(np.abs(c.c))))


def test_criterion_1_table_reproduction():
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst_member, worst_gap, n = 0.0, 0.0, 0
    search_time = 0.0
    for tag, group in ROW_GROUPS:
        for i in range(100):
            inst = random_instance(tag, rng, group)
            c = _normalized(inst)
            fams = [f for f in enumerate_families(inst) if not f.empty]
            for fam in fams:
                _, _, res = completion_residuals(c, (), fam.sample(1000, rng), 1e-9)
                worst_member = max(worst_member, float(res.max()))
            s0 = time.perf_counter()
            found = numeric_search(inst, compute_l(inst.constants), 10_000, 1e-9, seed=i)
            search_time += time.perf_counter() - s0
            U = np.array([g.xm for g in found]).reshape(-1, 3)
            if len(U):
                gap = np.min([f.distance(U) for f in fams], axis=0)
                worst_gap = max(worst_gap, float(gap.max()))
            n += 1
    total = time.perf_counter() - t0
    ok = worst_member <= 1e-9 and worst_gap <= 1e-6 and total <= 120.0
    record(1, ok, f"{n} tuples, worst member residual {worst_member:.2e}, worst off-family distance "
                  f"{worst_gap:.2e}, {total:.1f}s total ({search_time:.1f}s in search)")
    assert worst_member <= 1e-9
    assert worst_gap <= 1e-6
    assert total <= 120.0


COUNT_BRANCHES = (
    ("g5", "generic"), ("g5", "case_i"), ("g5", "case_ii"),
    ("g6", "generic"), ("g6", "case_i"), ("g6", "case_ii"),
    ("g7", "A_beta_zero"), ("g7", "A_D_le_1"), ("g7", "A_D_gt_1"),
    ("g7", "B_beta_zero"), ("g7", "B_beta_nonzero"),
)


@pytest.mark.xfail(strict=True, reason="stated counts are wrong on part of g6 generic and on all of g7 "
                                       "with alpha!=0=gamma, beta=0; see the decisions ledger")
def test_criterion_2_counts():
    rng = np.random.default_rng(202)
    mismatches, derived_mismatches, checked, empty = [], 0, 0, []
    for tag, branch in COUNT_BRANCHES:
        try:
            random_instance(tag, np.random.default_rng(0), branch)
        except EmptyBranch:
            empty.append(f"{tag}/{branch}")
            continue
        bad = 0
        for i in range(50):
            inst = random_instance(tag, rng, branch)
            found = numeric_search(inst, compute_l(inst.constants), 10_000, 1e-9, seed=i)
            rank = rank_of([g.xm for g in found], 1e-6)
            bad += rank != stated_count(inst)
            derived_mismatches += rank != count_independent(inst)
            checked += 1
        if bad:
            mismatches.append(f"{tag}/{branch} {bad}/50")
    record(2, not mismatches, f"{checked} tuples; stated-count mismatches: {', '.join(mismatches) or 'none'}; "
                              f"row-derived count mismatches: {derived_mismatches}; "
                              f"empty branches: {', '.join(empty) or 'none'}")
    assert derived_mismatches == 0
    assert not mismatches


def test_criterion_3_null_existence():
    rng = np.random.default_rng(303)
    disagree, g7_false, not_null, b_checked = 0, 0, 0, 0
    for tag in NON_UNIMODULAR:
        for i in range(500):
            branch = "any" if tag != "g7" else "AB"[i % 2]
            inst = random_instance(tag, rng, branch)
            l = compute_l(inst.constants)
            predicted = has_null_homogeneous(inst)
            disagree += predicted != bool(null_directions(inst, l))
            if tag == "g7":
                g7_false += not predicted
                a, b, g, _ = inst.params.as_tuple()
                if a != 0 and g == 0 and b != 0:
                    found = numeric_search(inst, l, 10_000, 1e-9, seed=i)
                    q = [abs(u[0] ** 2 + u[1] ** 2 - u[2] ** 2) for u in (np.array(v.xm) for v in found)]
                    not_null += sum(v > 1e-9 for v in q)
                    b_checked += 1
    ok = disagree == 0 and g7_false == 0 and not_null == 0
    record(3, ok, f"1500 tuples, {disagree} disagreements; g7 false: {g7_false}; "
                  f"non-null directions on {b_checked} g7 alpha!=0=gamma, beta!=0 instances: {not_null}")
    assert ok


def _draw(tag, branch, rng, keep, n):
    out = []
    while len(out) < n:
        inst = random_instance(tag, rng, branch)
        if keep(*inst.params.as_tuple()):
            out.append(inst)
    return out


FILTRATION_LOCI = (
    ("g5 alpha=beta=0", "g5", "alpha_beta_zero", lambda a, b, g, d: True),
    ("g5 gamma=delta=0", "g5", "gamma_delta_zero", lambda a, b, g, d: True),
    ("g5 beta*delta!=0", "g5", "any", lambda a, b, g, d: b * d != 0),
    ("g5 other", "g5", "any", lambda a, b, g, d: b * d == 0 and (a, b) != (0, 0) and (g, d) != (0, 0)),
    ("g6 beta(beta^2-alpha^2)!=0", "g6", "any", lambda a, b, g, d: b * (b * b - a * a) != 0),
    ("g6 other", "g6", "any", lambda a, b, g, d: b * (b * b - a * a) == 0),
    ("g7 alpha=beta=0", "g7", "A_beta_zero", lambda a, b, g, d: True),
    ("g7 gamma=0, alpha*delta(alpha^2-delta^2)!=0", "g7", "B", lambda a, b, g, d: a * d * (a * a - d * d) != 0),
    ("g7 other", "g7", "A", lambda a, b, g, d: b != 0),
)


@pytest.mark.xfail(strict=True, reason="h_k stays larger than l on several listed loci, so the stated "
                                       "filtration index is not reproducible; see the decisions ledger")
def test_criterion_4_isotropy_filtration():
    rng = np.random.default_rng(404)
    bad_loci, l_bad = [], 0
    for name, tag, branch, keep in FILTRATION_LOCI:
        bad = 0
        for inst in _draw(tag, branch, rng, keep, 200):
            bad += first_stable_index(inst) != stated_stable_index(inst)
            l_bad += compute_l(inst.constants).dim != 0
        if bad:
            bad_loci.append(f"{name} {bad}/200")
    on_locus = 0
    for _ in range(200):
        a, b = rational(rng, nonzero=True), rational(rng)
        inst = build_family("g5", alpha=a, beta=b, gamma=-b, delta=a)
        on_locus += compute_l(inst.constants).dim == 1
    ok = not bad_loci and l_bad == 0 and on_locus == 200
    record(4, ok, f"index mismatches: {', '.join(bad_loci) or 'none'}; dim l != 0 off the g5 locus: {l_bad}; "
                  f"dim l = 1 on the g5 locus: {on_locus}/200")
    assert l_bad == 0 and on_locus == 200
    assert not bad_loci


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(505)
    pairs, disagree, geodesic = 0, 0, 0
    tags = [t for t in FamilyTag]
    while pairs < 1000:
        inst = random_any(tags[pairs % len(tags)], rng)
        c = _normalized(inst)
        if pairs % 2 and not inst.unimodular and symmetric_locus(inst.tag, inst.params) is None:
            fams = [f for f in enumerate_families(inst) if not f.empty]
            x = fams[int(rng.integers(len(fams)))].sample(1, rng)[0]
        else:
            x = rng.standard_normal(3)
        u = x / np.linalg.norm(x)
        a = is_geodesic_vector(c, (), u, 1e-8) is not None
        b = nabla_parallel_check(c, GeodesicVector(tuple(u), nabla_parallel_k(c, u)), 1e-8)
        disagree += a != b
        geodesic += a
        pairs += 1
    record(5, disagree == 0, f"{pairs} pairs ({geodesic} geodesic), {disagree} disagreements")
    assert disagree == 0


def _go_loci(rng):
    a, g = rational(rng, -6, 6, 3, nonzero=True), rational(rng, -6, 6, 3, nonzero=True)
    if a == g:
        g += 1
    eps = int(rng.choice([-1, 1]))
    return [build_family("g3", alpha=a, beta=a, gamma=g), build_family("g3", alpha=a, beta=g, gamma=a),
            build_family("g3", alpha=g, beta=a, gamma=a), build_family("g4", alpha=a, beta=a + eps, epsilon=eps)]


def test_criterion_6_go_and_natural_reductivity():
    rng = np.random.default_rng(606)
    loci_fail, no_failure, disagree, reports = 0, 0, 0, 0
    for i in range(25):
        for inst in _go_loci(rng):
            ok, _, _ = sampling_check(inst, compute_l(inst.constants), 500, 1e-9, seed=i)
            loci_fail += not ok
            rep = is_go(inst, samples=500, seed=i)
            disagree += rep.is_go != rep.is_naturally_reductive or not rep.is_go
            reports += 1
    for tag in NON_UNIMODULAR:
        for i in range(100):
            inst = random_instance(tag, rng, "any" if tag != "g7" else "AB"[i % 2])
            rep = is_go(inst, samples=500, seed=i)
            no_failure += rep.is_go or not rep.failures
            disagree += rep.is_go != rep.is_naturally_reductive
            reports += 1
    for tag in ("g1", "g2", "g3", "g4"):
        for i in range(10):
            rep = is_go(random_unimodular(tag, rng), samples=500, seed=i)
            disagree += rep.is_go != rep.is_naturally_reductive
            reports += 1
    ok = loci_fail == 0 and no_failure == 0 and disagree == 0
    record(6, ok, f"100 g3/g4 locus instances, {loci_fail} sampling failures; 300 non-symmetric g5-g7, "
                  f"{no_failure} without a failure direction; {reports} reports, {disagree} with is_go != NR")
    assert ok


def test_criterion_7_symmetry_agreement():
    rng = np.random.default_rng(707)
    disagree, skipped, symmetric = 0, 0, 0
    for tag in NON_UNIMODULAR:
        for _ in range(1000):
            inst = random_any(tag, rng)
            val = float(np.max(np.abs(curvature(_normalized(inst), order=0).nabla_riemann)))
            if 1e-8 < val < 1e-6:
                skipped += 1
                continue
            exact = symmetric_locus(inst.tag, inst.params) is not None
            symmetric += exact
            disagree += exact != (val <= 1e-8)
    inst = build_family("g5", alpha=1, beta=0, gamma=0, delta=1)
    anchor = float(np.max(np.abs(curvature(inst.constants, order=0).nabla_riemann)))
    ok = disagree == 0 and anchor <= 1e-10
    record(7, ok, f"3000 tuples ({symmetric} symmetric, {skipped} in the boundary band), {disagree} "
                  f"disagreements; g5(1,0,0,1) max|nabla R| = {anchor:.1e}")
    assert ok


def test_criterion_8_structural_gates():
    rng = np.random.default_rng(808)
    jac_bad, flag_bad, d_bad, built = 0, 0, 0, 0
    scales = [Fraction(int(n), int(d)) for n, d in zip(rng.choice([-1, 1], 20) * rng.integers(1, 50, 20),
                                                       rng.integers(1, 20, 20))]
    for tag in FamilyTag:
        for _ in range(100):
            inst = random_any(tag, rng)
            c = inst.constants
            scale = max(1.0, float(np.max(np.abs(c.c))))
            jac_bad += jacobi_residual(c) > 1e-12 * scale ** 2
            flag_bad += not (is_unimodular(c) == inst.unimodular == tag.unimodular)
            built += 1
            if not tag.unimodular:
                D = invariant_D(inst.params)
                d_bad += any(invariant_D(inst.params.scaled(s)) != D for s in scales)
                p = inst.params.to_float()
                Df = invariant_D(p)
                d_bad += any(abs(invariant_D(FamilyParams(*(float(s) * v for v in p.as_tuple()))) - Df)
                             > 1e-12 * max(1.0, abs(Df)) for s in scales)
    ok = jac_bad == 0 and flag_bad == 0 and d_bad == 0
    record(8, ok, f"{built} instances: Jacobi failures {jac_bad}, unimodularity flag errors {flag_bad}, "
                  f"D scale-invariance failures {d_bad} (20 scales)")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
