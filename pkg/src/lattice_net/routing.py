"""Minimal routing on lattice graphs.

A routing record for source vs and destination vd is any integer vector r
with vd - vs congruent to r; its Minkowski norm sum(|r_i|) is the length of
the corresponding dimension-ordered path.  The hierarchical router walks
the cycle generated by the last axis, lands on the destination copy of the
projection, and recurses; the closed-form routers below specialize that
scheme for the twisted rectangle and the two cubic crystal graphs.

All routers here are minimal: their record norms equal breadth-first
distances, which verify_minimality checks exhaustively.
"""

import weakref
from collections import namedtuple

from lattice_net import lattice
from lattice_net.errors import PreconditionError

Record = namedtuple("Record", ["r", "norm"])

MinimalityReport = namedtuple("MinimalityReport", ["pairs_checked", "violations"])


def norm(r):
    return sum(abs(x) for x in r)


def _record(r):
    r = tuple(r)
    return Record(r, norm(r))


def route_ring(a, delta):
    """Signed hop count around a ring of a vertices; ties go positive."""
    if a < 1:
        raise PreconditionError("ring length must be positive")
    d = delta % a
    if d <= a - d:
        return d
    return d - a


def route_torus(sides, delta):
    return _record(route_ring(m, d) for m, d in zip(sides, delta))


def route_rtt(a, delta):
    """Closed-form router for the twisted rectangle [[2a, a], [0, a]]."""
    x, y = delta
    p = (x + y + a) % (2 * a)
    q = (y - x + a) % (2 * a)
    # p - q = 2x and p + q = 2y + 2a modulo 2a, so both are even.
    assert (p - q) % 2 == 0, "parity invariant broken"
    return _record(((p - q) // 2, (p + q - 2 * a) // 2))


def _argmin_record(candidates):
    return min(candidates, key=lambda rec: (rec.norm, rec.r))


def route_fcc(a, delta, detail=False):
    """Router for FCC(a): normalize into the label box, then try both
    intersections of the e3 cycle with the destination copy (the second
    sits at in-copy offset (a, 0))."""
    x, y, z = delta
    yp = y + (a if y < 0 else 0)
    zp = z + (a if z < 0 else 0)
    xh = x + (a if (y < 0) != (z < 0) else 0)
    xp = xh + (2 * a if xh < 0 else 0) - (2 * a if xh >= 2 * a else 0)
    r1 = route_rtt(a, (xp, yp))
    r2 = route_rtt(a, (xp - a, yp))
    c1 = Record(r1.r + (zp,), r1.norm + abs(zp))
    c2 = Record(r2.r + (zp - a,), r2.norm + abs(zp - a))
    best = _argmin_record((c1, c2))
    if detail:
        return best, (c1, c2)
    return best


def route_bcc(a, delta, detail=False):
    """Router for BCC(a): like route_fcc but over a square torus copy with
    in-copy offset (a, a) for the second intersection."""
    x, y, z = delta
    zp = z + (a if z < 0 else 0)
    xh = x + (a if z < 0 else 0)
    yh = y + (a if z < 0 else 0)
    xp = xh + (2 * a if xh < 0 else 0) - (2 * a if xh >= 2 * a else 0)
    yp = yh + (2 * a if yh < 0 else 0) - (2 * a if yh >= 2 * a else 0)
    sides = (2 * a, 2 * a)
    r1 = route_torus(sides, (xp, yp))
    r2 = route_torus(sides, (xp - a, yp - a))
    c1 = Record(r1.r + (zp,), r1.norm + abs(zp))
    c2 = Record(r2.r + (zp - a,), r2.norm + abs(zp - a))
    best = _argmin_record((c1, c2))
    if detail:
        return best, (c1, c2)
    return best


_projections = weakref.WeakKeyDictionary()
_dist_cache = weakref.WeakKeyDictionary()
_choices_cache = weakref.WeakKeyDictionary()


def _projection_of(g):
    if g not in _projections:
        _projections[g] = lattice.projection(g)
    return _projections[g]


def _distances_of(g):
    if g not in _dist_cache:
        _dist_cache[g] = lattice.single_source_distances(g)
    return _dist_cache[g]


def _rtt_side(h):
    a = h[1][1]
    return a if h == ((2 * a, a), (0, a)) else None


def _fcc_side(h):
    a = h[2][2]
    return a if h == ((2 * a, a, a), (0, a, 0), (0, 0, a)) else None


def _bcc_side(h):
    a = h[2][2]
    return a if h == ((2 * a, 0, a), (0, 2 * a, a), (0, 0, a)) else None


def _is_diagonal(h):
    return all(h[i][j] == 0 for i in range(len(h)) for j in range(len(h)) if i != j)


def route_generic(g, vs, vd, tie="lex", rng=None, counter=None):
    """Hierarchical router: minimal over all cycle intersections.

    Walks the cycle vs + k*e_n, collects the ord(e_n)/side vertices lying
    in the destination copy of the projection, recursively routes inside
    that copy, and keeps the composite of minimal norm.  When the two wrap
    directions around the cycle tie, both are kept as candidates.

    Args:
        g: graph to route in.
        vs, vd: source and destination; arbitrary coordinates accepted and
            reduced to labels.
        tie: "lex" picks the lexicographically smallest minimal candidate;
            "random" picks uniformly among minimal candidates using rng.
        rng: random.Random, required when tie="random".
        counter: optional dict; "projection_calls" is incremented per
            nested routing call in the projection.

    Returns:
        Record with norm equal to the hop distance from vs to vd.
    """
    vs = g.reduce(vs)
    vd = g.reduce(vd)
    n = g.n
    if n == 1:
        return _record((route_ring(g.sides[0], vd[0] - vs[0]),))
    proj = _projection_of(g)
    side = proj.side
    order_n = g.element_order(g.unit(n - 1))
    assert order_n % side == 0, "cycle length must cover the copies evenly"
    candidates = []
    k = (vd[n - 1] - vs[n - 1]) % side
    while k < order_n:
        meet = g.apply_record(vs, (0,) * (n - 1) + (k,))
        if counter is not None:
            counter["projection_calls"] = counter.get("projection_calls", 0) + 1
        sub = route(proj.graph, meet[: n - 1], vd[: n - 1], tie=tie, rng=rng,
                    counter=counter)
        displacements = [k] if k <= order_n - k else [k - order_n]
        if k and k == order_n - k:
            displacements = [k, k - order_n]
        for s in displacements:
            candidates.append(Record(sub.r + (s,), sub.norm + abs(s)))
        k += side
    best_norm = min(c.norm for c in candidates)
    ties = [c for c in candidates if c.norm == best_norm]
    if tie == "random":
        if rng is None:
            raise PreconditionError("tie='random' needs an rng")
        return rng.choice(ties)
    return _argmin_record(ties)


def route(g, vs, vd, tie="lex", rng=None, counter=None):
    """Route between two labels, dispatching to the best known router.

    Diagonal matrices use per-ring routing, the RTT/FCC/BCC shapes their
    closed forms, everything else the hierarchical router.  With
    tie="random" a record is drawn uniformly from the full minimal set.
    """
    vs = g.reduce(vs)
    vd = g.reduce(vd)
    if tie == "random":
        if rng is None:
            raise PreconditionError("tie='random' needs an rng")
        return rng.choice(minimal_record_choices(g, g.delta(vs, vd)))
    h = g.hermite
    diff = tuple(d - s for s, d in zip(vs, vd))
    if _is_diagonal(h):
        return route_torus(g.sides, diff)
    if g.n == 2:
        a = _rtt_side(h)
        if a is not None:
            return route_rtt(a, diff)
    if g.n == 3:
        a = _fcc_side(h)
        if a is not None:
            return route_fcc(a, diff)
        a = _bcc_side(h)
        if a is not None:
            return route_bcc(a, diff)
    return route_generic(g, vs, vd, tie=tie, rng=rng, counter=counter)


def minimal_record_choices(g, delta):
    """All minimal routing records for a displacement, as a sorted tuple.

    Built over the distance-decreasing step graph: every minimal record
    extends through some step that lowers the remaining distance, and no
    minimal record cancels steps across a dimension, so the recursion is
    exhaustive.  Cached per graph and per reduced displacement.
    """
    if g not in _choices_cache:
        _choices_cache[g] = {}
    memo = _choices_cache[g]
    dist = _distances_of(g)
    n = g.n
    zero = (0,) * n
    steps = [g.unit(i, s) for i in range(n) for s in (1, -1)]

    def solve(label):
        idx = g.index(label)
        got = memo.get(idx)
        if got is not None:
            return got
        if label == zero:
            memo[idx] = (zero,)
            return memo[idx]
        d = dist[idx]
        found = set()
        for s in steps:
            rest = g.reduce(tuple(x - y for x, y in zip(label, s)))
            if dist[g.index(rest)] != d - 1:
                continue
            for r in solve(rest):
                found.add(tuple(x + y for x, y in zip(s, r)))
        memo[idx] = tuple(sorted(found))
        return memo[idx]

    return tuple(_record(r) for r in solve(g.reduce(delta)))


def verify_minimality(g, router=None, max_pairs=20000, rng=None):
    """Compare a router against breadth-first distances.

    All ordered label pairs are checked when the order is at most 4096;
    larger graphs get max_pairs sampled pairs (rng required).  A violation
    is any pair where the record norm differs from the BFS distance or the
    record does not reach the destination.
    """
    if router is None:
        router = lambda vs, vd: route(g, vs, vd)
    dist = _distances_of(g)
    labels = list(g.vertices())
    if g.order <= 4096:
        pairs = ((vs, vd) for vs in labels for vd in labels)
        total = g.order * g.order
    else:
        if rng is None:
            raise PreconditionError("sampled verification needs an rng")
        pairs = (
            (rng.choice(labels), rng.choice(labels)) for _ in range(max_pairs)
        )
        total = max_pairs
    violations = []
    for vs, vd in pairs:
        rec = router(vs, vd)
        want = int(dist[g.index(g.delta(vs, vd))])
        if rec.norm != want or g.apply_record(vs, rec.r) != vd:
            violations.append((vs, vd, rec, want))
    return MinimalityReport(total, violations)
