"""Independent verification and a shooting-based brute-force solver.

verify() never throws: it measures and reports.  The shooting oracle
scalarizes the wrap condition: from one free point it chases the forced
ordinate targets along the curve and returns the mismatch at the final
wrap; zeros of that residual are partitions.  Solutions are always
compared through the verifier, never by point equality.
"""

from dataclasses import dataclass

from .pipeline import PartitionResult, PipelineTrace, Rearrangement, increments
from .plcurve import point_curve_distance_sq
from .scalar import ZERO, as_float, rat


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    on_curve_max_dist: object
    increments_positive: bool
    multiset_match: bool
    detected_shift: object
    detected_permutation: object
    tol: object


@dataclass(frozen=True)
class ShotOutcome:
    """Residual of the wrap condition, or an infeasibility marker.

    side is +1 when the chase overshot upward (an ordinate target above
    the reachable range), -1 for the downward direction.
    """

    residual: object
    feasible: bool
    side: int = 0
    points: tuple = ()


def verify(curve, points, tol=ZERO):
    """Check endpoints, curve membership, positivity, and the multiset /
    cyclic-shift structure of the two increment sequences, within tol."""
    tol = rat(tol)
    pts = [(rat(x), rat(y)) for x, y in points]
    s = len(pts) - 1
    tol2 = tol * tol

    worst2 = ZERO
    for p in pts:
        worst2 = max(worst2, point_curve_distance_sq(curve, p))
    ex0, ey0 = pts[0]
    ex1, ey1 = pts[-1][0] - 1, pts[-1][1] - 1
    worst2 = max(worst2, ex0 * ex0 + ey0 * ey0, ex1 * ex1 + ey1 * ey1)
    on_curve = worst2 <= tol2

    dx, dy = increments(pts)
    positive = all(d > 0 for d in dx) and all(d > 0 for d in dy)

    sorted_dx = sorted(dx)
    sorted_dy = sorted(dy)
    multiset = all(abs(a - b) <= tol for a, b in zip(sorted_dx, sorted_dy))

    shift = None
    if multiset and s > 0:
        for k in range(s):
            if all(abs(dy[i] - dx[(i - k) % s]) <= tol for i in range(s)):
                shift = k
                break

    perm = None
    if multiset and shift is None:
        used = [False] * s
        perm_list = []
        order = sorted(range(s), key=lambda i: dx[i])
        for i in range(s):
            match = None
            for j in order:
                if not used[j] and abs(dy[i] - dx[j]) <= tol:
                    match = j
                    break
            if match is None:
                perm_list = None
                break
            used[match] = True
            perm_list.append(match)
        perm = tuple(perm_list) if perm_list is not None else None
        if perm is None:
            multiset = False

    return VerifyReport(
        ok=bool(on_curve and positive and multiset),
        on_curve_max_dist=worst2,
        increments_positive=positive,
        multiset_match=multiset,
        detected_shift=shift,
        detected_permutation=perm,
        tol=tol,
    )


class _Chaser:
    """Ordinate-target chasing over one polyline; works for exact
    rationals and for plain floats alike."""

    def __init__(self, curve, float_mode=False):
        if float_mode:
            self.knots = [as_float(t) for t in curve.knots]
            self.verts = [(as_float(x), as_float(y)) for x, y in curve.vertices]
        else:
            self.knots = list(curve.knots)
            self.verts = list(curve.vertices)

    def at(self, t):
        ks = self.knots
        lo, hi = 0, len(ks) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ks[mid] <= t:
                lo = mid
            else:
                hi = mid
        t0, t1 = ks[lo], ks[lo + 1]
        (x0, y0), (x1, y1) = self.verts[lo], self.verts[lo + 1]
        if t1 == t0:
            return x0, y0
        w = (t - t0) / (t1 - t0)
        return x0 + w * (x1 - x0), y0 + w * (y1 - y0)

    def first_ordinate_hit(self, target, start, skip=0):
        """The (skip+1)-th parameter >= start where y equals target, None
        when fewer occurrences exist."""
        ks, vs = self.knots, self.verts
        for i in range(len(ks) - 1):
            t0, t1 = ks[i], ks[i + 1]
            if t1 < start:
                continue
            y0, y1 = vs[i][1], vs[i + 1][1]
            lo = max(t0, start)
            if t1 == t0:
                continue
            w = (lo - t0) / (t1 - t0)
            ylo = y0 + w * (y1 - y0)
            hit = None
            if ylo == target:
                hit = lo
            elif y1 != y0 and ((ylo < target <= y1) or (y1 <= target < ylo)):
                hit = t0 + (target - y0) / (y1 - y0) * (t1 - t0)
            if hit is not None:
                if skip == 0:
                    return hit
                skip -= 1
        return None


def closure_shot(curve, n, t1, float_mode=False, branches=()):
    """Build the chased point sequence from the free parameter t1.

    Points A_1..A_{n+1} follow the shifted ordinate targets
    y_{i+1} = y_i + (x_i - x_{i-1}); the returned residual is how far the
    forced final wrap lands from closing at (1,1).  Step i takes the
    earliest ordinate hit by default; branches[i] skips that many earlier
    occurrences, selecting a different solution branch.
    """
    ch = _Chaser(curve, float_mode)
    conv = as_float if float_mode else rat
    t = conv(t1)
    one = conv(1)
    pts = [(conv(0), conv(0))]
    x, y = ch.at(t)
    pts.append((x, y))
    cursor = t
    for i in range(1, n + 1):
        target = pts[-1][1] + (pts[-1][0] - pts[-2][0])
        skip = branches[i - 1] if i - 1 < len(branches) else 0
        nxt = ch.first_ordinate_hit(target, cursor, skip)
        if nxt is None:
            side = 1 if target > pts[-1][1] else -1
            return ShotOutcome(residual=None, feasible=False, side=side,
                               points=tuple(pts))
        cursor = nxt
        x, y = ch.at(nxt)
        pts.append((x, y))
    # the wrap forces one more ordinate step of size dx_n ending at (1,1)
    residual = one - pts[-1][1] - (pts[-1][0] - pts[-2][0])
    pts.append((one, one))
    return ShotOutcome(residual=residual, feasible=True, points=tuple(pts))


def closure_residual(curve, n, t1):
    """Exact signed wrap mismatch for the free parameter t1 (see
    closure_shot); None when the chase leaves the curve."""
    return closure_shot(curve, n, t1).residual


def _branch_vectors(curve, n, cap=128):
    """Deterministic enumeration of chase-branch choices, nearest first."""
    from itertools import product

    if n <= 0:
        return [()]
    width = max(2, len(curve.knots) - 1)
    vectors = sorted(product(range(width), repeat=n), key=lambda v: (sum(v), v))
    return vectors[:cap]


def brute_force(curve, n, grid=10_000, tol=rat(1, 10**6), refine_steps=80):
    """Sweep the free parameter over every chase branch, bisect sign
    changes, and return all verified partitions.  Runs in float mode; an
    empty list is a valid outcome, not an error."""
    tol_f = as_float(tol)
    results = []
    for branches in _branch_vectors(curve, n):
        prev = None
        any_feasible = False
        for g in range(1, grid):
            t = g / grid
            shot = closure_shot(curve, n, t, float_mode=True,
                                branches=branches)
            any_feasible = any_feasible or shot.feasible
            cur = (t, shot)
            if prev is not None:
                t0, s0 = prev
                if (
                    s0.feasible
                    and shot.feasible
                    and s0.residual is not None
                    and shot.residual is not None
                    and (s0.residual < 0) != (shot.residual < 0)
                ):
                    root = _bisect_shot(curve, n, t0, t, s0.residual,
                                        refine_steps, branches)
                    if root is not None:
                        results.append(root)
            prev = cur
        if not any_feasible and branches and max(branches) > 0:
            break

    out = []
    seen = []
    for t_root, shot in sorted(results, key=lambda r: r[0]):
        if shot.residual is None or abs(shot.residual) > tol_f:
            continue
        rep = verify(curve, shot.points, tol)
        if not rep.ok:
            continue
        if any(abs(t_root - t_old) < 1.0 / grid / 4 for t_old in seen):
            continue
        seen.append(t_root)
        dx, dy = increments(shot.points)
        out.append(
            PartitionResult(
                S=n + 2,
                points=shot.points,
                dx=dx,
                dy=dy,
                rearrangement=(
                    Rearrangement(shift=rep.detected_shift)
                    if rep.detected_shift is not None
                    else Rearrangement(perm=rep.detected_permutation)
                ),
                exact=False,
                residual=abs(shot.residual),
                trace=PipelineTrace(branch="shooting"),
            )
        )
    return out


def _bisect_shot(curve, n, lo, hi, f_lo, steps, branches=()):
    best = None
    for _ in range(steps):
        mid = (lo + hi) / 2
        shot = closure_shot(curve, n, mid, float_mode=True, branches=branches)
        if not shot.feasible or shot.residual is None:
            # shrink toward the known-feasible side
            hi = mid
            continue
        best = (mid, shot)
        if shot.residual == 0:
            return best
        if (shot.residual < 0) == (f_lo < 0):
            lo = mid
        else:
            hi = mid
    return best
