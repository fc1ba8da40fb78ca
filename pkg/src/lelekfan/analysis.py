"""Endpoint classification, climb sequences, density witnesses and Hausdorff enclosures.

This is the verification layer: a point of the product is an end-point
exactly when the supremum of its coordinates equals 1, so finite evidence
takes two forms. An exact certificate exhibits a coordinate equal to 1
(its extension by diagonal steps then stays at 1 forever); an approximate
certificate exhibits a coordinate within delta of 1 together with the
climb that produced it. Density witnesses combine a kept prefix with a
climb whose distance contribution is controlled by the metric tail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceError, ShapeError
from .mahavier import (
    FanApprox,
    PointPrefix,
    RelationSpec,
    Word,
    build_leg,
    cantor_relation,
    enumerate_legs,
    fan_relation,
    leg_point,
    truncated_metric,
    DEFAULT_ENUM_BUDGET,
)
from .nc import require_nc
from .scalars import format_scalar

DEFAULT_GREEDY_BUDGET = 10**4
DEFAULT_ORACLE_BUDGET = 20
DEFAULT_GRID = 8
DENSITY_EPSILONS = (Fraction(1, 16), Fraction(1, 64), Fraction(1, 256))

EXACT = "exact"
APPROXIMATE = "approximate"


@dataclass(frozen=True)
class GreedyTrace:
    """A climb from `start`: chosen symbols, partial products and their running maximum.

    The start counts as the depth-0 partial, so running_max >= start and every
    partial lies in [0, 1].
    """

    start: Fraction
    symbols: tuple[Fraction, ...]
    partials: tuple[Fraction, ...]
    running_max: Fraction


@dataclass(frozen=True)
class EndpointCertificate:
    """Evidence that a point's coordinate maximum reaches (exact) or nears (approximate) 1."""

    kind: str
    point: PointPrefix
    peak_index: int
    peak_value: Fraction
    delta: Fraction


@dataclass(frozen=True)
class NotEndpointVerdict:
    """No certificate within this prefix and tolerance; not a disproof."""

    point: PointPrefix
    peak_index: int
    peak_value: Fraction


def greedy_sequence(
    x,
    r,
    rho,
    steps: int,
    stop_when: Fraction | None = None,
) -> GreedyTrace:
    """Climb from x by the greedy rule: multiply by rho whenever that stays <= 1, else by r.

    Ties (rho * current == 1) choose rho, which lands exactly on 1. When
    `stop_when` is given the climb stops early once the running maximum
    reaches it, so traces stay short. Requires 0 < x < 1 and an NC pair.
    """
    x, r, rho = Fraction(x), Fraction(r), Fraction(rho)
    if not 0 < x < 1:
        raise DomainError(f"start must lie in (0, 1), got {format_scalar(x)}")
    require_nc(r, rho)
    symbols: list[Fraction] = []
    partials: list[Fraction] = []
    current = x
    running = x
    for _ in range(steps):
        if stop_when is not None and running >= stop_when:
            break
        up = current * rho
        if up <= 1:
            symbols.append(rho)
            current = up
        else:
            symbols.append(r)
            current = current * r
        partials.append(current)
        if current > running:
            running = current
    return GreedyTrace(x, tuple(symbols), tuple(partials), running)


def oracle_best_sequence(
    x, r, rho, steps: int, budget: int = DEFAULT_ORACLE_BUDGET
) -> GreedyTrace:
    """Exhaustive search over every {r, rho}-word of length <= steps whose partials stay in [0, 1].

    Returns a trace maximizing the running maximum (deterministically the
    first maximizer in rho-first preorder). Independent of the greedy rule;
    exponential in steps, hence the budget.
    """
    x, r, rho = Fraction(x), Fraction(r), Fraction(rho)
    if not 0 < x < 1:
        raise DomainError(f"start must lie in (0, 1), got {format_scalar(x)}")
    if steps > budget:
        raise ResourceError(f"steps = {steps} exceeds the oracle budget {budget}")
    best = {"symbols": (), "partials": (), "max": x}
    sym_path: list[Fraction] = []
    part_path: list[Fraction] = []

    def visit(current: Fraction, current_max: Fraction) -> None:
        if current_max > best["max"]:
            best["symbols"] = tuple(sym_path)
            best["partials"] = tuple(part_path)
            best["max"] = current_max
        if len(sym_path) == steps:
            return
        for s in (rho, r):
            nxt = current * s
            if nxt <= 1:
                sym_path.append(s)
                part_path.append(nxt)
                visit(nxt, current_max if current_max >= nxt else nxt)
                sym_path.pop()
                part_path.pop()

    visit(x, x)
    return GreedyTrace(x, best["symbols"], best["partials"], best["max"])


def classify_endpoint(point: PointPrefix, delta) -> EndpointCertificate | NotEndpointVerdict:
    """Certify the coordinate maximum: exact (== 1), approximate (>= 1 - delta), or neither.

    A NotEndpointVerdict only means "not certified within this prefix and
    tolerance"; a longer prefix might still certify.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise DomainError("delta must be non-negative")
    coords = point.coords
    peak = max(coords)
    peak_index = coords.index(peak)
    if peak == 1:
        return EndpointCertificate(EXACT, point, peak_index, peak, Fraction(0))
    if peak >= 1 - delta:
        return EndpointCertificate(APPROXIMATE, point, peak_index, peak, 1 - peak)
    return NotEndpointVerdict(point, peak_index, peak)


def canonical_endpoint_extension(cert: EndpointCertificate, extra: int) -> PointPrefix:
    """Extend an exact certificate past its peak by diagonal steps.

    Every added coordinate equals 1, so any further extension of the
    underlying infinite sequence keeps the coordinate supremum at 1.
    """
    if cert.kind != EXACT:
        raise DomainError("only exact certificates extend canonically")
    coords = cert.point.coords[: cert.peak_index + 1] + (Fraction(1),) * extra
    return PointPrefix(coords)


def _min_k0(epsilon: Fraction) -> int:
    """Smallest positive k0 with 2^-k0 <= epsilon (the metric tail from index k0)."""
    k0 = 1
    while Fraction(1, 1 << k0) > epsilon:
        k0 += 1
    return k0


def density_witness(
    x: PointPrefix,
    epsilon,
    r,
    rho,
    extension_budget: int = DEFAULT_GREEDY_BUDGET,
    delta: Fraction = Fraction(1, 100),
) -> tuple[PointPrefix, Fraction, EndpointCertificate]:
    """Produce an endpoint-certified point within epsilon of x.

    Keeps x's first k0 coordinates (k0 minimal with 2^-k0 <= epsilon) and
    climbs greedily from the coordinate there; the coordinates that differ
    all sit under the metric tail, so the distance is controlled a priori
    and then certified by exact computation. From the all-zero point the
    witness instead holds a small diagonal seed (epsilon * 2^-(k0+2)) for
    k0 steps before climbing, which keeps its early coordinates under
    epsilon. Both scaling slopes and the diagonal belong to the three-slope
    relation, so every witness passes membership against it.

    Returns (e, bound, certificate): `bound` is the exactly computed metric
    value over the common prefix plus its tail, always <= epsilon, and the
    certificate is exact, or approximate with the delta actually achieved
    within the budget (a short climb is reported, never silently dropped).
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    cls = classify_endpoint(x, delta)
    if isinstance(cls, EndpointCertificate) and cls.kind == EXACT:
        return x, Fraction(0), cls

    k0 = _min_k0(epsilon)
    if k0 > len(x.coords):
        raise DomainError(
            f"a prefix of length {len(x.coords)} cannot certify epsilon = "
            f"{format_scalar(epsilon)}: its tail bound alone is "
            f"2^-{len(x.coords)}"
        )
    start = x.coords[k0 - 1]
    target = 1 - delta
    if start == 0:
        # All-zero point (a zero coordinate forces zeros everywhere).
        seed = epsilon / (1 << (k0 + 2))
        if seed >= 1:
            seed = Fraction(1, 2)
        prefix = (seed,) * k0
        trace = greedy_sequence(seed, r, rho, extension_budget, stop_when=target)
    else:
        prefix = x.coords[:k0]
        trace = greedy_sequence(start, r, rho, extension_budget, stop_when=target)
    e = PointPrefix(prefix + trace.partials)

    common = min(len(e.coords), len(x.coords))
    value, tail = truncated_metric(
        PointPrefix(e.coords[:common]), PointPrefix(x.coords[:common])
    )
    bound = value + tail
    if bound > epsilon:
        raise DomainError(
            f"witness bound {format_scalar(bound)} exceeds epsilon = "
            f"{format_scalar(epsilon)}; the input prefix is too short"
        )

    cert = classify_endpoint(e, delta)
    if isinstance(cert, NotEndpointVerdict):
        cert = EndpointCertificate(
            APPROXIMATE, e, cert.peak_index, cert.peak_value, 1 - cert.peak_value
        )
    return e, bound, cert


def sample_points(fan: FanApprox, count: int, seed: int, t_denominator: int = 1024) -> list[PointPrefix]:
    """Deterministic point sample: a uniform leg and a uniform grid parameter per draw."""
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        leg = fan.legs[rng.randrange(len(fan.legs))]
        t = leg.t_max * rng.randint(0, t_denominator) / t_denominator
        points.append(leg_point(leg, t))
    return points


def sample_deep_points(
    relation: RelationSpec, depth: int, count: int, seed: int, t_denominator: int = 1024
) -> list[PointPrefix]:
    """Deterministic depth-n point sample for depths where enumeration is infeasible."""
    rng = random.Random(seed)
    n_slopes = len(relation.slopes)
    points = []
    for _ in range(count):
        word = Word(tuple(relation.slopes[rng.randrange(n_slopes)] for _ in range(depth)))
        leg = build_leg(word)
        t = leg.t_max * rng.randint(0, t_denominator) / t_denominator
        points.append(leg_point(leg, t))
    return points


def _leg_arrays(fan: FanApprox):
    # Direction vectors (1, P_1, ..., P_n) per leg, plus the parameter caps.
    dirs = np.array(
        [[1.0] + [float(p) for p in leg.prefix_products] for leg in fan.legs]
    )
    caps = np.array([float(leg.t_max) for leg in fan.legs])
    return dirs, caps


def _metric_weights(depth: int):
    return np.array([2.0 ** -(k + 1) for k in range(depth + 1)])


def sample_resolution(fan: FanApprox, grid: int) -> float:
    """Metric spacing of the leg sample grid: max over legs of (Lipschitz constant * step).

    A leg's point map t -> (t, P_1 t, ...) is Lipschitz with constant
    sum_k 2^-(k+1) P_k in the truncated metric, so every leg point is within
    half this spacing of a grid sample.
    """
    if grid < 1:
        raise DomainError("grid must be a positive integer")
    dirs, caps = _leg_arrays(fan)
    weights = _metric_weights(fan.depth)
    return float(np.max((dirs @ weights) * caps / grid))


def directed_hausdorff(a: FanApprox, b: FanApprox, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    """Enclosure of sup over a's points of the distance to b, in the truncated metric.

    Points are sampled on a's legs at grid+1 evenly spaced parameters
    (endpoints included). The distance from a fixed point to one leg of b is
    a convex piecewise-linear function of the leg parameter, minimized at a
    breakpoint x_k / P_k or at an endpoint, so the inner minimization is
    evaluated without grid error; only a's own sampling contributes, and the
    upper bound adds half of a's grid spacing as Lipschitz padding.
    """
    if a.depth != b.depth:
        raise ShapeError(f"depth mismatch: {a.depth} vs {b.depth}")
    if grid < 1:
        raise DomainError("grid must be a positive integer")
    weights = _metric_weights(a.depth)
    dirs_b, caps_b = _leg_arrays(b)
    dirs_a, caps_a = _leg_arrays(a)

    steps = np.arange(grid + 1) / grid
    # All sample points of a: (legs * (grid+1), depth+1).
    points = (caps_a[:, None] * steps[None, :])[:, :, None] * dirs_a[:, None, :]
    points = points.reshape(-1, a.depth + 1)

    # Weights fold into the data: sum_k w_k |a_k - s v_k| = sum_k |w_k a_k - s w_k v_k|.
    points_w = points * weights[None, :]
    dirs_bw = dirs_b * weights[None, :]

    worst = 0.0
    chunk = max(1, int(2**21 // (dirs_b.shape[0] * (a.depth + 3) + 1)))
    for lo in range(0, points.shape[0], chunk):
        pts = points[lo : lo + chunk]
        pts_w = points_w[lo : lo + chunk]
        # Candidate parameters: per-coordinate breakpoints clipped to the leg,
        # plus both endpoints.
        cand = pts[:, None, :] / dirs_b[None, :, :]
        np.minimum(cand, caps_b[None, :, None], out=cand)
        np.maximum(cand, 0.0, out=cand)
        ends = np.broadcast_to(caps_b[None, :, None], (pts.shape[0], caps_b.shape[0], 1))
        cand = np.concatenate(
            [cand, np.zeros((pts.shape[0], caps_b.shape[0], 1)), ends], axis=2
        )
        # Accumulate coordinate by coordinate to keep temporaries at
        # (points, legs, candidates) size.
        dist = np.zeros(cand.shape)
        for k in range(a.depth + 1):
            dist += np.abs(pts_w[:, None, None, k] - cand * dirs_bw[None, :, None, k])
        worst = max(worst, float(dist.min(axis=(1, 2)).max()))
    padding = 0.5 * sample_resolution(a, grid)
    return worst, worst + padding


def hausdorff(a: FanApprox, b: FanApprox, grid: int = DEFAULT_GRID) -> tuple[float, float]:
    """Enclosure (lower, upper) of the Hausdorff distance between two leg unions.

    lower <= true distance <= upper; the gap shrinks as the grid grows.
    """
    lo_ab, up_ab = directed_hausdorff(a, b, grid)
    if a is b:
        return lo_ab, up_ab
    lo_ba, up_ba = directed_hausdorff(b, a, grid)
    return max(lo_ab, lo_ba), max(up_ab, up_ba)


def _feasible_epsilons(epsilons, depth: int):
    # density_witness needs k0 <= depth + 1 coordinates to anchor the kept prefix.
    return tuple(e for e in epsilons if _min_k0(Fraction(e)) <= depth + 1)


def verify_embedding(
    r,
    rho,
    depth: int,
    samples: int,
    seed: int,
    epsilons=None,
    extension_budget: int = DEFAULT_GREEDY_BUDGET,
    delta: Fraction = Fraction(1, 100),
    budget: int = DEFAULT_ENUM_BUDGET,
) -> dict:
    """Check, at finite depth, that the two-slope product embeds in the three-slope one.

    Checks: (a) every leg of the diagonal+r relation equals a leg of the
    full three-slope relation exactly, (b) those legs all have t_max = 1,
    (c) distinct words yield distinct prefix-product sequences, (d) sampled
    points admit density witnesses for every feasible epsilon in the
    schedule. Returns a report dict with one pass/fail entry per check and
    a first counterexample where applicable.
    """
    r, rho = Fraction(r), Fraction(rho)
    require_nc(r, rho)
    full = fan_relation(r, rho)
    sub = cantor_relation(r)
    fan_full = enumerate_legs(full, depth, budget)
    fan_sub = enumerate_legs(sub, depth, budget)
    checks = []

    full_by_word = {leg.word.symbols: leg for leg in fan_full.legs}
    bad = next(
        (leg for leg in fan_sub.legs if full_by_word.get(leg.word.symbols) != leg),
        None,
    )
    checks.append(
        {
            "name": "g-legs-are-f-legs",
            "pass": bad is None,
            "counterexample": None
            if bad is None
            else {"word": [format_scalar(s) for s in bad.word.symbols]},
        }
    )

    short = next((leg for leg in fan_sub.legs if leg.t_max != 1), None)
    checks.append(
        {
            "name": "g-legs-full-length",
            "pass": short is None,
            "counterexample": None
            if short is None
            else {
                "word": [format_scalar(s) for s in short.word.symbols],
                "t_max": format_scalar(short.t_max),
            },
        }
    )

    seen: dict = {}
    clash = None
    for leg in fan_full.legs:
        other = seen.get(leg.prefix_products)
        if other is not None:
            clash = (other, leg)
            break
        seen[leg.prefix_products] = leg
    checks.append(
        {
            "name": "leg-injectivity",
            "pass": clash is None,
            "counterexample": None
            if clash is None
            else {
                "words": [
                    [format_scalar(s) for s in leg.word.symbols] for leg in clash
                ]
            },
        }
    )

    points = sample_points(fan_full, samples, seed)
    if epsilons is None:
        epsilons = DENSITY_EPSILONS
    schedule = _feasible_epsilons(epsilons, depth)
    for eps in schedule:
        eps = Fraction(eps)
        failure = None
        for point in points:
            _, bound, cert = density_witness(
                point, eps, r, rho, extension_budget, delta
            )
            if bound > eps or cert.delta > delta:
                failure = {
                    "point": [format_scalar(c) for c in point.coords],
                    "bound": format_scalar(bound),
                    "achieved_delta": format_scalar(cert.delta),
                }
                break
        checks.append(
            {
                "name": f"density-epsilon-{format_scalar(eps)}",
                "pass": failure is None,
                "counterexample": failure,
            }
        )

    return {
        "r": format_scalar(r),
        "rho": format_scalar(rho),
        "depth": depth,
        "samples": samples,
        "seed": seed,
        "epsilons": [format_scalar(Fraction(e)) for e in schedule],
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
    }
