import random

import mpmath as mp
import pytest

from tuttebound.engine import chromatic_poly, tree_ab
from tuttebound.graphs import GraphError
from tuttebound.leaftree import (cardioid_cusp, chromatic_leaf_tree,
                                 conjecture_scan, iterate_effective_y,
                                 iterate_step, is_partition_zero, leaf_tree_ab,
                                 multiplier_loci, ratio_at, t_eff_at,
                                 t_eff_exact, tree_chromatic_roots)
from tuttebound.poly import BigPoly
from tuttebound.rootfind import find_roots
from tuttebound.sp import gen_leaf_joined_tree, leaf_joined_vertex_count
from tuttebound.weights import INF, UNDEF, is_finite

Q = BigPoly.variable()


def test_depth_one_pair():
    st = leaf_tree_ab(2, 1)
    assert st.a == BigPoly((1,))
    assert st.b == BigPoly((-1,))
    assert st.partition_poly() == Q * Q - Q


def test_depth_two_matches_brute_force():
    g22, _ = gen_leaf_joined_tree(2, 2)
    assert chromatic_leaf_tree(2, 2) == chromatic_poly(g22.graph)


def test_recursion_matches_tree_engine():
    for r, n_max in ((2, 4), (3, 3)):
        for n in range(1, n_max + 1):
            _, tree = gen_leaf_joined_tree(r, n)
            assert chromatic_leaf_tree(r, n) == tree_ab(tree, Q, -1).z


def test_degree_equals_vertex_count():
    for r, n in ((2, 3), (2, 6), (3, 2), (3, 4), (4, 2)):
        assert chromatic_leaf_tree(r, n).degree == leaf_joined_vertex_count(r, n)


def test_bivariate_specializes_to_chromatic():
    st = leaf_tree_ab(2, 3, symbolic_weight=True)
    assert st.partition_poly().subs_w(-1) == chromatic_leaf_tree(2, 3)


def test_size_guard():
    with pytest.raises(GraphError):
        leaf_tree_ab(2, 17)


def test_iteration_orbit():
    q = 3.7 + 0.4j
    assert iterate_effective_y(q, 2, 1) == 0.0
    y2 = iterate_effective_y(q, 2, 2)
    assert abs(y2 - ((q - 1) / (q - 2)) ** 2) < 1e-14
    # critical orbit: 2-q maps to infinity, then to 0
    assert iterate_step(2 - q, q, 2) is INF
    assert iterate_step(INF, q, 2) == 0.0


def test_fixed_point_at_one():
    for q in (3.0 + 1j, -2.0, 0.5 + 0.5j):
        assert abs(iterate_step(1.0, q, 2) - 1.0) < 1e-14


def test_attraction_outside_radius_r_circle():
    q = 1 + 3.0                      # |q-1| = 3 > r = 2: multiplier 2/3
    y = iterate_effective_y(q, 2, 80)
    assert abs(y - 1.0) < 1e-10


def test_iteration_rejects_zero_and_one():
    for q in (0, 1):
        with pytest.raises(GraphError):
            iterate_effective_y(q, 2, 3)


def test_exact_and_iterated_values_agree():
    rng = random.Random(61)
    combos = [(r, n) for r in (2, 3) for n in range(1, 7)]
    checked = 0
    for r, n in combos:
        st = leaf_tree_ab(r, n)
        digits = max(60, 2 * st.a.degree)
        for _ in range(5):
            q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(q) < 0.2 or abs(q - 1) < 0.2:
                continue
            y_iter = iterate_effective_y(q, r, n)
            with mp.workdps(digits):
                zq = mp.mpc(q)
                av = st.a(zq)
                bv = st.b(zq)
                if av == 0:
                    assert y_iter is INF or abs(y_iter) > 1e12
                    continue
                y_exact = complex(1 + bv / av)
            assert is_finite(y_iter)
            assert abs(y_iter - y_exact) <= 1e-9 * (1 + abs(y_exact))
            checked += 1
    assert checked >= 45


def test_zero_test_matches_roots():
    for n in range(1, 7):
        rs = tree_chromatic_roots(2, n, tol=1e-10)
        for z in rs.roots:
            if z in (0, 1) or abs(z) < 1e-9 or abs(z - 1) < 1e-9:
                continue
            assert is_partition_zero(z, 2, n, tol=1e-6)
    # points that are not roots fail the test
    rng = random.Random(3)
    for _ in range(25):
        q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(q) < 0.3 or abs(q - 1) < 0.3:
            continue
        p = chromatic_leaf_tree(2, 4)
        if abs(p(q)) > 1e-3:
            assert not is_partition_zero(q, 2, 4, tol=1e-6)


def test_pair_gcd_is_trivial():
    for n in range(1, 6):
        st = leaf_tree_ab(2, n)
        assert BigPoly.gcd(st.a, st.b).degree == 0


def test_fixed_point_multiplier_derivative():
    # Central differences with one Richardson step: error ~ h^4.
    rng = random.Random(71)
    count = 0
    while count < 100:
        q = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        r = rng.choice((2, 3))
        if abs(q - 1) < 0.5 or abs(q - 2) < 0.5:
            continue

        def central(h: float) -> complex:
            return (iterate_step(1.0 + h, q, r) - iterate_step(1.0 - h, q, r)) / (2 * h)

        d = (4 * central(5e-4) - central(1e-3)) / 3
        want = -r / (q - 1)
        assert abs(d - want) < 1e-10 * (1 + abs(want))
        count += 1


def test_transmissivity_exact_depth_one():
    num, den = t_eff_exact(2, 1)
    assert num == BigPoly((-1,))
    assert den == Q - 1


def test_transmissivity_exact_matches_iteration():
    # The expanded polynomials need working precision near their zeros;
    # the iteration stays accurate in doubles.
    rng = random.Random(81)
    for r, n in ((2, 3), (2, 5), (3, 2)):
        num, den = t_eff_exact(r, n)
        with mp.workdps(40 + 2 * den.degree):
            for _ in range(8):
                q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                if abs(q) < 0.3 or abs(q - 1) < 0.3:
                    continue
                lhs = ratio_at(num, den, mp.mpc(q))
                rhs = t_eff_at(q, r, n)
                if is_finite(rhs) and is_finite(lhs):
                    assert abs(complex(lhs) - rhs) < 1e-7 * (1 + abs(complex(lhs)))


def test_ratio_at_reports_zero_over_zero():
    num = Q - 2
    den = (Q - 2) * (Q - 3)
    assert ratio_at(num, den, 2) is UNDEF
    assert ratio_at(num, den, 3) is INF
    assert ratio_at(num, den, 4) == 1.0


def test_locus_circle():
    curve = multiplier_loci(2, "fixed-point-circle", 8)
    assert curve.points[0] == (0.0, 3 + 0j)
    for phi, z in curve.points:
        assert abs(abs(z - 1) - 2) < 1e-12


def test_locus_cardioid_cusp():
    curve = multiplier_loci(2, "cardioid", 8)
    at0 = [z for phi, z in curve.points if phi == 0.0]
    assert any(abs(z - 1.25) < 1e-12 for z in at0)
    assert any(abs(z + 1.0) < 1e-12 for z in at0)
    assert cardioid_cusp() == 1.25


def test_locus_period2_degeneracy():
    # At multiplier 1 the period-2 locus meets the multiplier -1 fixed
    # point: q = (13 +- i sqrt(7))/8, plus the circle point q = 3.
    curve = multiplier_loci(2, "period2-egg", 8)
    at0 = [z for phi, z in curve.points if phi == 0.0]
    target = (13 + 1j * 7 ** 0.5) / 8
    assert min(abs(z - target) for z in at0) < 1e-9
    assert min(abs(z - target.conjugate()) for z in at0) < 1e-9
    assert min(abs(z - 3) for z in at0) < 1e-9


def test_locus_validation():
    with pytest.raises(GraphError):
        multiplier_loci(2, "nonsense", 8)
    with pytest.raises(GraphError):
        multiplier_loci(3, "cardioid", 8)


def test_scan_small():
    report = conjecture_scan(2, 3)
    assert [row.n for row in report.rows] == [1, 2, 3]
    assert [row.degree for row in report.rows] == [2, 4, 8]
    assert report.total_violations == 0
    assert all(row.max_residual < 1e-8 for row in report.rows)
    assert report.offsets_nondecreasing


def test_scan_validation():
    with pytest.raises(GraphError):
        conjecture_scan(3, 4)
    with pytest.raises(GraphError):
        conjecture_scan(2, 9)


def test_fast_roots_agree_with_generic_solver():
    for n in (2, 3, 4):
        fast = tree_chromatic_roots(2, n, tol=1e-10)
        ref = find_roots(chromatic_leaf_tree(2, n), tol=1e-10)
        a = sorted(fast.roots, key=lambda z: (z.real, z.imag))
        b = sorted(ref.roots, key=lambda z: (z.real, z.imag))
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-9
