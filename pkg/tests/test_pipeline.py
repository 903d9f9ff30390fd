import random

import pytest
from hypothesis import given, settings, strategies as st

from curvepart import (
    ClassUError,
    NonInteriorCurveError,
    PLCurve,
    PLFunction,
    PreconditionError,
    build_partitioning_functions,
    diagonal_curve,
    extract_points,
    partition_below_diagonal,
    partition_curve,
    partition_densities,
    pl_eval,
    random_curve,
    verify,
)
from curvepart.pipeline import (
    Rearrangement,
    pl_density_cumulative,
    step_cumulative,
)
from curvepart.scalar import rat

from util import functions_on_curve

R = rat

BENT = PLCurve([0, R(1, 2), 1], [(0, 0), (R(4, 5), R(1, 5)), (1, 1)])
SECTION5 = PLCurve([0, R(1, 2), 1], [(0, 0), (1, 0), (1, 1)])


def assert_shifted(res, k=1):
    for i in range(res.S):
        assert res.dy[i] == res.dx[(i - k) % res.S]
    assert all(d > 0 for d in res.dx + res.dy)


class TestBuildPartitioningFunctions:
    def test_base_case_takes_components(self):
        pf = build_partitioning_functions(BENT, 1)
        assert pf.xs == (BENT.x_function(),)
        assert pf.y == BENT.y_function()

    def test_diagonal_n2(self):
        pf = build_partitioning_functions(diagonal_curve(), 2)
        assert pl_eval(pf.xs[-1], 1) == 1
        assert pl_eval(pf.xs[0], 1) + pl_eval(pf.y, 1) == 1
        # on the diagonal the ordinate equals the abscissa pointwise
        for k in range(9):
            t = R(k, 8)
            assert pl_eval(pf.xs[0], t) + pl_eval(pf.y, t) == pl_eval(
                pf.xs[1], t)

    def test_membership_oracle_full_coverage(self):
        c = PLCurve([0, R(1, 3), R(2, 3), 1],
                    [(0, 0), (R(1, 2), R(1, 5)), (R(7, 10), R(2, 5)), (1, 1)])
        for n in (1, 2, 3):
            pf = build_partitioning_functions(c, n)
            assert functions_on_curve(c, list(pf.xs), pf.y)

    def test_boundary_conditions_of_functions(self):
        pf = build_partitioning_functions(BENT, 3)
        for x in pf.xs:
            assert pl_eval(x, 0) == 0
        assert pl_eval(pf.y, 0) == 0
        assert pl_eval(pf.xs[-1], 1) == 1

    def test_rejects_boundary_curve(self):
        with pytest.raises(NonInteriorCurveError):
            build_partitioning_functions(SECTION5, 1)


class TestExtractPoints:
    def test_worked_example(self):
        pf = build_partitioning_functions(BENT, 1)
        res = extract_points(BENT, pf)
        assert res.points == (
            (R(0), R(0)), (R(4, 9), R(1, 9)), (R(8, 9), R(5, 9)),
            (R(1), R(1)))
        assert res.dx == (R(4, 9), R(4, 9), R(1, 9))
        assert res.dy == (R(1, 9), R(4, 9), R(4, 9))
        assert res.rearrangement == Rearrangement(shift=1)
        assert res.exact and res.residual == 0

    def test_diagonal_gives_equal_increments(self):
        for n in (1, 2, 3):
            pf = build_partitioning_functions(diagonal_curve(), n)
            res = extract_points(diagonal_curve(), pf)
            assert res.dx == res.dy

    def test_interior_curves_satisfy_shift_exactly(self):
        for seed in range(8):
            c = random_curve(seed, vertices=5, curve_class="interior")
            pf = build_partitioning_functions(c, 1)
            res = extract_points(c, pf)
            rep = verify(c, res.points, tol=0)
            assert rep.on_curve_max_dist == 0
            assert rep.multiset_match and rep.detected_shift == 1


class TestPartitionBelowDiagonal:
    def test_worked_example_matches_extract(self):
        res = partition_below_diagonal(BENT, 1)
        assert res.points[1] == (R(4, 9), R(1, 9))
        assert res.points[2] == (R(8, 9), R(5, 9))
        assert_shifted(res)

    def test_closing_point_case(self):
        res = partition_below_diagonal(BENT, 0)
        x, y = res.points[1]
        assert x + y == 1 and 0 < y < x < 1
        assert_shifted(res)

    def test_exact_when_height_is_class_u(self):
        for seed in range(10):
            c = random_curve(seed, vertices=7, curve_class="deltaInterior")
            for n in (0, 1, 2):
                res = partition_below_diagonal(c, n)
                assert res.exact
                assert_shifted(res)
                assert verify(c, res.points, tol=0).ok

    def test_flat_height_exact_through_climb(self):
        c = PLCurve([0, R(1, 4), R(1, 2), R(3, 4), 1],
                    [(0, 0), (R(2, 5), R(1, 5)), (R(3, 5), R(1, 5)),
                     (R(4, 5), R(2, 5)), (1, 1)])
        res = partition_below_diagonal(c, 2)
        assert res.exact and res.residual == 0
        assert_shifted(res)
        assert verify(c, res.points, tol=0).ok

    def test_refinement_when_both_orientations_fail(self):
        knots = [R(k, 6) for k in range(7)]
        ys = [0, R(2, 5), R(1, 5), R(9, 20), R(2, 5), R(7, 10), 1]
        xs = [0, R(1, 2), R(2, 5), R(1, 2), R(1, 2), R(3, 4), 1]
        c = PLCurve(knots, list(zip(xs, ys)))
        with pytest.raises(ClassUError):
            build_partitioning_functions(c, 2)
        tol = R(1, 10**9)
        res = partition_below_diagonal(c, 2, tol=tol)
        assert not res.exact
        assert res.residual <= tol
        assert res.trace.perturbations
        assert list(res.trace.residual_history) == sorted(
            res.trace.residual_history, reverse=True)
        rep = verify(c, res.points, tol=tol)
        assert rep.ok and rep.detected_shift == 1
        assert rep.on_curve_max_dist == 0  # projected points stay on the curve

    def test_rejects_diagonal(self):
        with pytest.raises(NonInteriorCurveError):
            partition_below_diagonal(diagonal_curve(), 1)

    def test_exact_fold_level_collision_still_exact(self):
        # the height and the compressed closing sum share fold level 1/2,
        # so the walk meets a degenerate vertex; the tolerant engine must
        # still solve exactly while the strict traversal op rejects
        from curvepart import solve_level_traversal
        from curvepart.plfun import fold_values, pl_add, pl_compress_param
        from curvepart.plfun import level_set as ls

        knots = [0, R(1, 8), R(1, 4), R(3, 8), R(1, 2), 1]
        ys = [0, R(1, 5), R(1, 10), R(1, 2), R(1, 4), 1]
        xs = [0, R(3, 10), R(1, 5), R(11, 20), R(3, 5), 1]
        c = PLCurve(knots, list(zip(xs, ys)))
        y = c.y_function()
        w = pl_add(c.x_function(), y)
        f2 = pl_compress_param(w, ls(w, 1)[0][0])
        assert set(fold_values(y)) & set(fold_values(f2)) == {R(1, 2)}

        res = partition_below_diagonal(c, 2)
        assert res.exact
        assert_shifted(res)
        assert verify(c, res.points, tol=0).ok

        with pytest.raises(PreconditionError) as err:
            solve_level_traversal(y, f2)
        assert err.value.witness == R(1, 2)


class TestPartitionCurve:
    def test_requested_increment_count(self):
        for n in (1, 2, 3, 4):
            res = partition_curve(BENT, n)
            assert res.S == n + 1
            assert len(res.points) == n + 2

    def test_below_matches_direct_route(self):
        res = partition_curve(BENT, 2)
        direct = partition_below_diagonal(BENT, 1)
        assert res.points == direct.points
        assert res.trace.branch == "below"
        assert res.trace.last_touch == 0

    def test_diagonal_branch_uniform(self):
        res = partition_curve(diagonal_curve(), 2)
        assert res.points == (
            (R(0), R(0)), (R(1, 3), R(1, 3)), (R(2, 3), R(2, 3)),
            (R(1), R(1)))
        assert res.rearrangement == Rearrangement(shift=0)
        assert res.trace.branch == "diagonal"
        assert res.dx == res.dy

    def test_diagonal_tail_branch(self):
        c = PLCurve([0, R(1, 4), R(1, 2), 1],
                    [(0, 0), (R(3, 5), R(1, 5)), (R(1, 2), R(1, 2)), (1, 1)])
        res = partition_curve(c, 3)
        assert res.trace.branch == "diagonal"
        assert res.dx == res.dy
        assert res.points[1] == (R(5, 8), R(5, 8))

    def test_above_branch_mirrors(self):
        above = PLCurve([0, R(1, 2), 1], [(0, 0), (R(1, 5), R(4, 5)), (1, 1)])
        res = partition_curve(above, 2)
        assert res.trace.branch == "above"
        assert res.trace.swapped
        assert_shifted(res, k=res.S - 1)
        assert res.points[1] == (R(1, 9), R(4, 9))

    def test_tail_normalization_composite_permutation(self):
        c = PLCurve([0, R(1, 4), R(1, 2), R(3, 4), 1],
                    [(0, 0), (R(1, 5), R(2, 5)), (R(1, 2), R(1, 2)),
                     (R(4, 5), R(3, 5)), (1, 1)])
        res = partition_curve(c, 2)
        assert res.trace.last_touch == R(1, 2)
        assert res.points[1] == (R(1, 2), R(1, 2))
        perm = res.rearrangement.as_perm(res.S)
        assert perm[0] == 0
        for i in range(res.S):
            assert res.dy[i] == res.dx[perm[i]]
        assert res.exact

    def test_n1_dichotomy(self):
        for seed in range(20):
            c = random_curve(seed, vertices=6, curve_class="interior")
            res = partition_curve(c, 1)
            x, y = res.points[1]
            assert x == y or x + y == 1
            assert res.exact

    def test_counterexample_rejected(self):
        for n in range(1, 5):
            with pytest.raises(NonInteriorCurveError):
                partition_curve(SECTION5, n)

    def test_boundary_join_on_dipping_tail(self):
        c = PLCurve([0, R(1, 4), R(1, 2), R(3, 4), 1],
                    [(0, 0), (R(1, 2), R(1, 2)), (R(7, 10), R(3, 10)),
                     (R(9, 10), R(17, 20)), (1, 1)])
        tol = R(1, 10**9)
        res = partition_curve(c, 3, tol=tol)
        assert res.trace.boundary_joins
        rep = verify(c, res.points, tol=tol)
        assert rep.ok

    def test_boundary_join_after_swap(self):
        # the tail rides above the diagonal and dips left of the anchor
        c = PLCurve([0, R(1, 4), R(1, 2), R(3, 4), 1],
                    [(0, 0), (R(2, 5), R(1, 5)), (R(1, 2), R(1, 2)),
                     (R(3, 10), R(7, 10)), (1, 1)])
        tol = R(1, 10**9)
        res = partition_curve(c, 3, tol=tol)
        assert res.trace.swapped
        assert res.trace.boundary_joins
        assert verify(c, res.points, tol=tol).ok

    def test_densities_with_common_zero_mass_gap(self):
        f = ("step", [R(0), R(2, 5), R(1, 2), R(1)], [R(5, 4), R(0), R(1)])
        g = ("step", [R(0), R(2, 5), R(1, 2), R(1)], [R(2), R(0), R(2, 5)])
        out = partition_densities(f, g, 2)
        assert out.result.exact
        ts = out.parameters
        for a, b in zip(ts, ts[1:]):
            assert a < b

    def test_inverse_affine_consistency(self):
        c = PLCurve([0, R(1, 4), R(1, 2), R(3, 4), 1],
                    [(0, 0), (R(1, 5), R(2, 5)), (R(1, 2), R(1, 2)),
                     (R(4, 5), R(3, 5)), (1, 1)])
        res = partition_curve(c, 2)
        a = res.trace.anchor
        mapped = [((x - a) / (1 - a), (y - a) / (1 - a))
                  for x, y in res.points[1:]]
        if res.trace.swapped:
            mapped = [(y, x) for x, y in mapped]
        assert tuple(mapped) == res.trace.solver_frame_points


class TestPipelineProperties:
    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(st.integers(0, 10**9), st.integers(1, 6), st.integers(0, 2))
    def test_lower_triangle_partitions_exact(self, seed, verts, n):
        rng = random.Random(seed)
        c = _random_lower_triangle_curve(rng, verts)
        res = partition_below_diagonal(c, n)
        assert res.exact
        assert_shifted(res)
        rep = verify(c, res.points, tol=0)
        assert rep.ok and rep.on_curve_max_dist == 0
        # strictly increasing coordinates
        for (x0, y0), (x1, y1) in zip(res.points, res.points[1:]):
            assert x0 < x1 and y0 < y1

    @settings(max_examples=20, deadline=None, derandomize=True)
    @given(st.integers(0, 10**9), st.integers(1, 4))
    def test_unit_square_partitions_verify(self, seed, n):
        c = random_curve(seed, vertices=4 + seed % 4, curve_class="interior")
        res = partition_curve(c, n)
        rep = verify(c, res.points, tol=0 if res.exact else R(1, 10**9))
        assert rep.ok
        perm = res.rearrangement.as_perm(res.S)
        assert sorted(perm) == list(range(res.S))


def _random_lower_triangle_curve(rng, interior_vertices):
    pts = [(R(0), R(0))]
    for _ in range(interior_vertices):
        x = R(rng.randrange(1, 2**12), 2**12)
        y = x * R(rng.randrange(1, 2**12), 2**12)
        pts.append((x, y))
    pts.append((R(1), R(1)))
    knots = [R(i, len(pts) - 1) for i in range(len(pts))]
    return PLCurve(knots, pts)


class TestPartitionDensities:
    def test_uniform_densities_uniform_split(self):
        dens = ("step", [R(0), R(1)], [R(1)])
        for n in (1, 2, 3):
            out = partition_densities(dens, dens, n)
            assert out.parameters == tuple(R(i, n + 1) for i in range(n + 2))

    def test_step_densities_interval_masses_match(self):
        f = ("step", [R(0), R(1, 2), R(1)], [R(3, 2), R(1, 2)])
        g = ("step", [R(0), R(1, 4), R(1)], [R(2), R(2, 3)])
        out = partition_densities(f, g, 2)
        ts = out.parameters
        # independent quadrature of both densities over the split intervals
        mass_f = [_step_mass(f, a, b) for a, b in zip(ts, ts[1:])]
        mass_g = [_step_mass(g, a, b) for a, b in zip(ts, ts[1:])]
        perm = out.result.rearrangement.as_perm(out.result.S)
        for i in range(out.result.S):
            assert mass_g[i] == mass_f[perm[i]]
        assert mass_f == list(out.result.dx)
        assert mass_g == list(out.result.dy)

    def test_pl_density_pre_sampling(self):
        tent = PLFunction([(0, 0), (R(1, 2), 2), (1, 0)])
        cum = pl_density_cumulative(tent, subdiv=4)
        assert pl_eval(cum, 1) == 1
        assert pl_eval(cum, R(1, 2)) == R(1, 2)
        out = partition_densities(("pl", tent), ("pl", tent), 1)
        assert out.result.dx == out.result.dy

    def test_bad_total_mass_rejected(self):
        bad = ("step", [R(0), R(1)], [R(2)])
        with pytest.raises(PreconditionError) as err:
            partition_densities(bad, bad, 1)
        assert err.value.witness == 2

    def test_leading_zero_mass_rejected(self):
        bad = ("step", [R(0), R(1, 2), R(1)], [R(0), R(2)])
        good = ("step", [R(0), R(1)], [R(1)])
        with pytest.raises(PreconditionError):
            partition_densities(bad, good, 1)

    def test_step_cumulative_values(self):
        cum = step_cumulative([R(0), R(1, 2), R(1)], [R(3, 2), R(1, 2)])
        assert pl_eval(cum, R(1, 2)) == R(3, 4)
        assert pl_eval(cum, 1) == 1


def _step_mass(dens, a, b):
    _, knots, values = dens
    total = R(0)
    for (k0, k1), v in zip(zip(knots, knots[1:]), values):
        lo, hi = max(k0, a), min(k1, b)
        if lo < hi:
            total += v * (hi - lo)
    return total
