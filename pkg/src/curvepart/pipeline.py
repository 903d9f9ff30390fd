"""Equal-increment partitions of curves from (0,0) to (1,1).

The exact route builds partitioning functions by induction (each step
solves one climb), extracts the points from an auxiliary-curve
intersection, and verifies the cyclic-shift identities before returning.
Curves whose height component resists the exact route go through a
deterministic perturb-and-refine loop with verified residuals; curves
whose normalized tail leaves the lower triangle go through a
boundary-joining schedule, accepted only when the result verifies.
"""

from dataclasses import dataclass, field

from . import climb
from .errors import (
    ClassUError,
    ConvergenceError,
    InfeasiblePerturbationError,
    InternalInvariantError,
    NonInteriorCurveError,
    PreconditionError,
)
from .plcurve import (
    Intersection,
    PLCurve,
    curve_from_functions,
    curve_intersections,
    first_parameter_at,
    is_lower_triangle_interior,
    is_unit_interior,
    nearest_point_on_curve,
    point_curve_distance_sq,
    point_on_curve,
    require_endpoints,
    normalize_tail,
    swap_curve,
)
from .plfun import (
    PLFunction,
    compose,
    level_set,
    perturb_distinct_extrema,
    pl_add,
    pl_compress_param,
    pl_eval,
    pl_scale_values,
    pl_sub,
)
from .scalar import ONE, ZERO, rat

DEFAULT_TOL = rat(1, 10**9)
DEFAULT_DELTA0 = rat(1, 8)


@dataclass(frozen=True)
class PartitioningFunctions:
    """Functions y, x_1..x_n with (x_i(t), x_{i-1}(t) + y(t)) on the curve."""

    n: int
    y: PLFunction
    xs: tuple
    source_curve: PLCurve


@dataclass(frozen=True)
class Rearrangement:
    """Either a cyclic shift k (dy_i = dx_{(i-k) mod S}) or an explicit
    permutation p (dy_i = dx_{p[i]})."""

    shift: int = None
    perm: tuple = None

    def as_perm(self, s):
        if self.perm is not None:
            return self.perm
        return tuple((i - self.shift) % s for i in range(s))


@dataclass(frozen=True)
class PipelineTrace:
    last_touch: object = ZERO
    branch: str = "below"
    boundary_joins: tuple = ()
    perturbations: tuple = ()
    residual_history: tuple = ()
    anchor: object = ZERO
    swapped: bool = False
    solver_frame_points: tuple = ()


@dataclass(frozen=True)
class PartitionResult:
    S: int
    points: tuple
    dx: tuple
    dy: tuple
    rearrangement: Rearrangement
    exact: bool
    residual: object
    trace: PipelineTrace = field(default_factory=PipelineTrace)


def increments(points):
    dx = tuple(b[0] - a[0] for a, b in zip(points, points[1:]))
    dy = tuple(b[1] - a[1] for a, b in zip(points, points[1:]))
    return dx, dy


def _shift_residual(dx, dy, k):
    s = len(dx)
    return max(abs(dy[i] - dx[(i - k) % s]) for i in range(s))


def _reduce_to_shift(perm):
    s = len(perm)
    for k in range(s):
        if all(perm[i] == (i - k) % s for i in range(s)):
            return Rearrangement(shift=k)
    return Rearrangement(perm=tuple(perm))


def build_partitioning_functions(curve, n):
    """Induction on n; each step compresses the closing sum onto [0,1] and
    solves one climb against the curve's height component.

    The curve must run from (0,0) to (1,1) through the open unit square.
    The exact route needs a class-U profile on one side of every climb;
    otherwise ClassUError propagates and callers fall back to refinement.
    """
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    require_endpoints(curve)
    if not is_unit_interior(curve):
        raise NonInteriorCurveError("curve leaves the open unit square")

    height = curve.y_function()
    width = curve.x_function()
    y = height
    xs = [width]
    for _ in range(1, n):
        w = pl_add(xs[-1], y)
        hits = level_set(w, ONE)
        if not hits:
            raise InternalInvariantError("closing sum never reaches 1")
        t_stop = hits[0][0]
        f2 = pl_compress_param(w, t_stop)
        sol = climb.solve_either_orientation(height, f2)
        inner = pl_scale_values(sol.g2, t_stop)
        y = compose(y, inner)
        xs = [compose(x, inner) for x in xs]
        xs.append(compose(width, sol.g1))

    pf = PartitioningFunctions(n=n, y=y, xs=tuple(xs), source_curve=curve)
    _check_partitioning_functions(pf)
    return pf


def _check_partitioning_functions(pf):
    curve, y, xs = pf.source_curve, pf.y, pf.xs
    if pl_eval(y, ZERO) != 0 or any(pl_eval(x, ZERO) != 0 for x in xs):
        raise InternalInvariantError("partitioning functions must start at 0")
    last_x = pl_eval(xs[-1], ONE)
    below = pl_eval(xs[-2], ONE) if len(xs) >= 2 else ZERO
    if (last_x, below + pl_eval(y, ONE)) != (ONE, ONE):
        raise InternalInvariantError("partitioning functions must close at (1,1)")
    zero = PLFunction(((ZERO, ZERO), (ONE, ZERO)))
    prev = zero
    for x in xs:
        ts = sorted(set(x.knots) | set(prev.knots) | set(y.knots))
        samples = []
        for t0, t1 in zip(ts, ts[1:]):
            samples.extend((t0, (t0 + t1) / 2))
        samples.append(ONE)
        for t in samples:
            p = (pl_eval(x, t), pl_eval(prev, t) + pl_eval(y, t))
            if not point_on_curve(curve, p):
                raise InternalInvariantError(
                    f"partitioning point {p} at t={t} left the curve"
                )
        prev = x


def extract_points(curve, pf):
    """Points from the first meeting of the closing curve with the input.

    The closing curve (1 - y(t), x_n(t) + y(t)) starts at (1,0) and ends
    above the top edge, so it meets the input; the intersection with the
    smallest closing-curve parameter is taken.  The shift identities
    dy_i = dx_{(i-1) mod S} are verified exactly before returning.
    """
    y, xs = pf.y, pf.xs
    n = pf.n
    eta = curve_from_functions(
        pl_scale_values(y, rat(-1), ONE), pl_add(xs[-1], y)
    )
    hits = curve_intersections(eta, curve)
    if not hits:
        raise InternalInvariantError("closing curve missed the input curve")
    first = hits[0]
    t0 = first.t_a if isinstance(first, Intersection) else first.t_a[0]

    pts = [(ZERO, ZERO)]
    prev = ZERO
    for x in xs:
        xi = pl_eval(x, t0)
        pts.append((xi, prev + pl_eval(y, t0)))
        prev = xi
    pts.append((ONE - pl_eval(y, t0), pl_eval(xs[-1], t0) + pl_eval(y, t0)))
    pts.append((ONE, ONE))

    s = n + 2
    dx, dy = increments(pts)
    for i in range(s):
        if dy[i] != dx[(i - 1) % s]:
            raise InternalInvariantError(f"shift identity failed at increment {i}")
    for p in pts:
        if not point_on_curve(curve, p):
            raise InternalInvariantError(f"partition point {p} left the curve")
    if is_lower_triangle_interior(curve):
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise InternalInvariantError("points failed to increase strictly")

    return PartitionResult(
        S=s,
        points=tuple(pts),
        dx=dx,
        dy=dy,
        rearrangement=Rearrangement(shift=1),
        exact=True,
        residual=ZERO,
        trace=PipelineTrace(branch="below", solver_frame_points=tuple(pts)),
    )


def _antidiagonal_point(curve):
    """First curve point with x + y = 1; the two-increment base case."""
    w = pl_add(curve.x_function(), curve.y_function())
    hits = level_set(w, ONE)
    if not hits:
        raise InternalInvariantError("curve never meets x + y = 1")
    t0 = hits[0][0]
    return curve(t0)


def partition_below_diagonal(curve, n, tol=DEFAULT_TOL, max_iter=80,
                             delta0=DEFAULT_DELTA0):
    """Partition a curve that stays strictly inside 0 < y < x < 1.

    n is the partitioning-function count: the result has S = n + 2
    increments; n = 0 is the plain closing-point case.  Exact whenever
    every climb in the induction finds a class-U side; otherwise the
    height profile is perturbed by delta0/2^k and the exact solution of
    the perturbed curve is projected back and accepted once it verifies
    within tol.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    require_endpoints(curve)
    if not is_lower_triangle_interior(curve):
        raise NonInteriorCurveError(
            "curve must stay strictly below the diagonal inside the unit square"
        )

    if n == 0:
        x1, y1 = _antidiagonal_point(curve)
        pts = ((ZERO, ZERO), (x1, y1), (ONE, ONE))
        dx, dy = increments(pts)
        if y1 != 1 - x1:
            raise InternalInvariantError("closing point missed x + y = 1")
        if not (0 < x1 < 1 and 0 < y1 < 1):
            raise InternalInvariantError("closing point not interior")
        return PartitionResult(
            S=2, points=pts, dx=dx, dy=dy,
            rearrangement=Rearrangement(shift=1), exact=True, residual=ZERO,
            trace=PipelineTrace(branch="below", solver_frame_points=pts),
        )

    try:
        pf = build_partitioning_functions(curve, n)
        return extract_points(curve, pf)
    except ClassUError:
        pass
    return _refine_below_diagonal(curve, n, tol, max_iter, delta0)


def _refine_below_diagonal(curve, n, tol, max_iter, delta0):
    width = curve.x_function()
    y_fun = curve.y_function()
    deltas = []
    history = []
    best = None
    for k in range(1, max_iter + 1):
        delta = delta0 / 2**k
        deltas.append(delta)
        try:
            y_pert = perturb_distinct_extrema(y_fun, delta)
        except InfeasiblePerturbationError:
            continue
        pert_curve = curve_from_functions(width, y_pert)
        if not is_lower_triangle_interior(pert_curve):
            continue
        try:
            pf = build_partitioning_functions(pert_curve, n)
            res = extract_points(pert_curve, pf)
        except (ClassUError, InternalInvariantError):
            continue
        pts = _project_points(pert_curve, curve, res.points)
        if pts is None:
            continue
        dx, dy = increments(pts)
        if any(d <= 0 for d in dx + dy):
            continue
        resid = _shift_residual(dx, dy, 1)
        best = min(best, resid) if best is not None else resid
        history.append(best)
        if resid <= tol:
            return PartitionResult(
                S=n + 2, points=tuple(pts), dx=dx, dy=dy,
                rearrangement=Rearrangement(shift=1), exact=False,
                residual=resid,
                trace=PipelineTrace(
                    branch="below",
                    perturbations=tuple(deltas),
                    residual_history=tuple(history),
                    solver_frame_points=tuple(res.points),
                ),
            )
    raise ConvergenceError(
        f"no verified partition within {max_iter} refinement rounds",
        best_residual=best,
        history=history,
    )


def _project_points(from_curve, to_curve, points):
    """Carry points between curves sharing knots/x: match parameters."""
    out = []
    for p in points:
        t = first_parameter_at(from_curve, p)
        if t is None:
            return None
        out.append(to_curve(t))
    return out


def partition_curve(curve, n, tol=DEFAULT_TOL, max_iter=80, max_joins=48):
    """Equal-increment partition with S = n + 1 increments.

    Dispatch: a curve ending in a diagonal segment gets uniform points on
    that segment (identity rearrangement); otherwise the tail after the
    last diagonal touch is normalized to a fresh unit-square curve, swapped
    above the diagonal, solved below it, and mapped back.  The combined
    rearrangement fixes the initial diagonal increment and cyclically
    shifts the rest.
    """
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    require_endpoints(curve)
    if not is_unit_interior(curve):
        raise NonInteriorCurveError(
            "curve leaves the open unit square at an interior parameter"
        )
    s_total = n + 1

    x_fun, y_fun = curve.x_function(), curve.y_function()
    diff = pl_sub(x_fun, y_fun)
    items = level_set(diff, ZERO)

    for lo, hi in items:
        if hi == 1 and lo < 1:
            return _diagonal_tail_result(curve, x_fun, lo, s_total)

    touches = [hi for lo, hi in items if 0 < hi < 1]
    last_touch = max(touches) if touches else ZERO

    if last_touch == 0:
        eta, anchor, prepend = curve, ZERO, False
        s_eta = s_total
    else:
        eta, anchor = normalize_tail(curve, last_touch)
        prepend = True
        s_eta = s_total - 1

    if s_eta == 1:
        eta_res = _trivial_result()
        swapped = False
    else:
        mid = (eta.knots[0] + eta.knots[1]) / 2
        ex, ey = eta(mid)
        swapped = ey > ex
        eta_solve = swap_curve(eta) if swapped else eta
        if is_lower_triangle_interior(eta_solve):
            eta_res = partition_below_diagonal(eta_solve, s_eta - 2, tol, max_iter)
        else:
            eta_res = _boundary_join_solve(eta_solve, s_eta, tol, max_iter,
                                           max_joins)
        if swapped:
            eta_res = _swap_result(eta_res)

    return _assemble(curve, eta_res, last_touch, anchor, prepend, swapped,
                     s_total, tol)


def _trivial_result():
    pts = ((ZERO, ZERO), (ONE, ONE))
    return PartitionResult(
        S=1, points=pts, dx=(ONE,), dy=(ONE,),
        rearrangement=Rearrangement(shift=0), exact=True, residual=ZERO,
        trace=PipelineTrace(branch="below", solver_frame_points=pts),
    )


def _diagonal_tail_result(curve, x_fun, tail_start, s_total):
    c = pl_eval(x_fun, tail_start)
    step = (ONE - c) / s_total
    pts = [(ZERO, ZERO)]
    for i in range(1, s_total + 1):
        v = c + i * step
        pts.append((v, v))
    dx, dy = increments(pts)
    res = PartitionResult(
        S=s_total, points=tuple(pts), dx=dx, dy=dy,
        rearrangement=Rearrangement(shift=0), exact=True, residual=ZERO,
        trace=PipelineTrace(last_touch=ONE, branch="diagonal",
                            solver_frame_points=tuple(pts)),
    )
    _final_verify(curve, res, ZERO)
    return res


def _swap_result(res):
    pts = tuple((y, x) for x, y in res.points)
    dx, dy = increments(pts)
    s = res.S
    # dy_i = dx_{(i-1) mod S} swaps into dx_i = dy_{(i-1)}, i.e. shift S-1
    if res.rearrangement.shift is not None:
        rearr = Rearrangement(shift=(-res.rearrangement.shift) % s)
    else:
        perm = res.rearrangement.perm
        inv = [0] * s
        for i, p in enumerate(perm):
            inv[p] = i
        rearr = Rearrangement(perm=tuple(inv))
    return PartitionResult(
        S=s, points=pts, dx=dx, dy=dy, rearrangement=rearr,
        exact=res.exact, residual=res.residual, trace=res.trace,
    )


def _boundary_join_solve(eta, s_eta, tol, max_iter, max_joins):
    """Cut at the last zero of the height, join a segment from the origin,
    and accept the first join whose solution snaps onto the tail curve
    within tol."""
    y_fun = eta.y_function()
    zeros = [hi for lo, hi in level_set(y_fun, ZERO) if 0 < hi < 1]
    if not zeros:
        raise NonInteriorCurveError(
            "tail curve leaves the lower triangle but its height never "
            "returns to zero; unsupported accumulation pattern"
        )
    t_last = max(zeros)
    joins = []
    history = []
    best = None
    for k in range(1, max_joins + 1):
        t_k = t_last + (ONE - t_last) / 2**k
        joins.append(t_k)
        tail_knots = [t for t in eta.knots if t_k < t < 1]
        knots = [ZERO, t_k] + tail_knots + [ONE]
        verts = [(ZERO, ZERO), eta(t_k)] + [eta(t) for t in tail_knots] + [
            (ONE, ONE)
        ]
        joined = PLCurve(knots, verts)
        if not is_lower_triangle_interior(joined):
            continue
        try:
            res = partition_below_diagonal(joined, s_eta - 2, tol, max_iter)
        except (ConvergenceError, NonInteriorCurveError):
            continue
        snapped = []
        any_snapped = False
        for p in res.points:
            if point_on_curve(eta, p):
                snapped.append(p)
                continue
            any_snapped = True
            snapped.append(nearest_point_on_curve(eta, p))
        dx, dy = increments(snapped)
        if any(d <= 0 for d in dx + dy):
            continue
        resid = _shift_residual(dx, dy, 1)
        best = min(best, resid) if best is not None else resid
        history.append(best)
        if resid <= tol:
            exact = resid == 0 and not any_snapped and res.exact
            return PartitionResult(
                S=s_eta, points=tuple(snapped), dx=dx, dy=dy,
                rearrangement=Rearrangement(shift=1), exact=exact,
                residual=resid,
                trace=PipelineTrace(
                    branch="below", boundary_joins=tuple(joins),
                    residual_history=tuple(history),
                    solver_frame_points=res.points,
                ),
            )
    raise ConvergenceError(
        f"boundary joining failed to verify within {max_joins} cuts",
        best_residual=best, history=history,
    )


def _assemble(curve, eta_res, last_touch, anchor, prepend, swapped, s_total,
              tol):
    scale = ONE - anchor
    if prepend:
        pts = [(ZERO, ZERO)]
        for x, y in eta_res.points:
            pts.append((anchor + x * scale, anchor + y * scale))
        inner = eta_res.rearrangement.as_perm(eta_res.S)
        perm = [0] + [1 + p for p in inner]
        rearr = _reduce_to_shift(perm)
        branch = "above" if swapped else "below"
    else:
        pts = list(eta_res.points)
        rearr = eta_res.rearrangement
        branch = "above" if swapped else "below"
    dx, dy = increments(pts)
    res = PartitionResult(
        S=s_total, points=tuple(pts), dx=dx, dy=dy, rearrangement=rearr,
        exact=eta_res.exact, residual=eta_res.residual,
        trace=PipelineTrace(
            last_touch=last_touch,
            branch=branch,
            boundary_joins=eta_res.trace.boundary_joins,
            perturbations=eta_res.trace.perturbations,
            residual_history=eta_res.trace.residual_history,
            anchor=anchor,
            swapped=swapped,
            solver_frame_points=eta_res.points,
        ),
    )
    _final_verify(curve, res, tol)
    return res


@dataclass(frozen=True)
class DensitiesResult:
    """Split parameters t_0 = 0 < ... < t_{S} = 1 and the underlying
    cumulative-curve partition."""

    parameters: tuple
    result: PartitionResult
    cumulative_curve: PLCurve


def step_cumulative(knots, values):
    """Exact cumulative distribution of a step density."""
    if len(knots) != len(values) + 1:
        raise PreconditionError("step density needs one more knot than values")
    if any(v < 0 for v in values):
        raise PreconditionError("density values must be nonnegative")
    pts = [(knots[0], ZERO)]
    acc = ZERO
    for (t0, t1), v in zip(zip(knots, knots[1:]), values):
        acc = acc + v * (t1 - t0)
        pts.append((t1, acc))
    return PLFunction(pts)


def pl_density_cumulative(f, subdiv=8):
    """Cumulative distribution of a PL density, pre-sampled to a polyline.

    The true cumulative is piecewise quadratic; each density piece is split
    into subdiv parts and the exact quadratic values at the sample knots
    are joined by straight segments.
    """
    if any(v < 0 for v in f.values) or subdiv < 1:
        raise PreconditionError("density must be nonnegative, subdiv >= 1")
    pts = [(ZERO, ZERO)]
    acc = ZERO
    bps = f.breakpoints
    for (t0, v0), (t1, v1) in zip(bps, bps[1:]):
        w = t1 - t0
        slope = (v1 - v0) / w
        for j in range(1, subdiv + 1):
            dt = w * rat(j, subdiv)
            val = acc + v0 * dt + slope * dt * dt / 2
            pts.append((t0 + dt, val))
        acc = pts[-1][1]
    return PLFunction(pts)


def _cumulative_from_density(dens):
    if dens[0] == "step":
        _, knots, values = dens
        return step_cumulative(knots, values)
    return pl_density_cumulative(dens[1])


def _check_cumulative(cum, name):
    total = pl_eval(cum, ONE)
    if total != 1:
        raise PreconditionError(
            f"density {name} integrates to {total}, not 1", witness=total
        )
    zero_items = level_set(cum, ZERO)
    for lo, hi in zero_items:
        if lo == 0 and hi > 0:
            raise PreconditionError(
                f"density {name} has no mass on [0, {hi}]", witness=hi
            )
    one_items = level_set(cum, ONE)
    for lo, hi in one_items:
        if hi == 1 and lo < 1:
            raise PreconditionError(
                f"density {name} has no mass on [{lo}, 1]", witness=lo
            )


def _parameter_of_point(cum_f, cum_g, point):
    """Smallest t with (F(t), G(t)) == point, via level-item intersection."""
    fx, gy = point
    fi = level_set(cum_f, fx)
    gi = level_set(cum_g, gy)
    for lo_a, hi_a in fi:
        for lo_b, hi_b in gi:
            lo, hi = max(lo_a, lo_b), min(hi_a, hi_b)
            if lo <= hi:
                return lo
    return None


def partition_densities(dens_f, dens_g, n, tol=DEFAULT_TOL, max_iter=80):
    """Split [0,1] so the interval masses of the two densities agree up to
    the returned rearrangement.

    Densities are step specs ("step", knots, values) or PL functions
    ("pl", f); both must integrate to 1 exactly with strictly interior
    cumulatives.  The cumulative pair traces a curve through the unit
    square, and the curve partition's points pull back to parameters.
    """
    cum_f = _cumulative_from_density(dens_f)
    cum_g = _cumulative_from_density(dens_g)
    _check_cumulative(cum_f, "f")
    _check_cumulative(cum_g, "g")
    curve = curve_from_functions(cum_f, cum_g)
    res = partition_curve(curve, n, tol=tol, max_iter=max_iter)
    params = []
    for p in res.points:
        t = _parameter_of_point(cum_f, cum_g, p)
        if t is None:
            raise InternalInvariantError(f"partition point {p} has no parameter")
        params.append(t)
    for a, b in zip(params, params[1:]):
        if not a < b:
            raise InternalInvariantError("split parameters failed to increase")
    return DensitiesResult(parameters=tuple(params), result=res,
                           cumulative_curve=curve)


def _final_verify(curve, res, tol):
    perm = res.rearrangement.as_perm(res.S)
    for i in range(res.S):
        gap = abs(res.dy[i] - res.dx[perm[i]])
        if res.exact and gap != 0:
            raise InternalInvariantError("rearrangement identity failed")
        if not res.exact and gap > max(tol, res.residual):
            raise InternalInvariantError("rearrangement identity out of band")
    for d in res.dx + res.dy:
        if d <= 0:
            raise InternalInvariantError("non-positive increment")
    # every solve path lands its points exactly on the input curve; the
    # inexact band below is pure defence
    tol2 = tol * tol
    for p in res.points:
        d2 = point_curve_distance_sq(curve, p)
        if res.exact and d2 != 0:
            raise InternalInvariantError(f"point {p} off the curve")
        if not res.exact and d2 > tol2:
            raise InternalInvariantError(f"point {p} too far off the curve")
    return res
