"""Finite-depth legs of Mahavier products of slope-union relations.

A relation here is a finite union of lines y = s*x through the origin,
clipped to the unit square. The depth-n piece of its Mahavier product
decomposes into legs: the word (s_1, ..., s_n) over the slope alphabet
contributes the exact segment

    {(t, P_1*t, ..., P_n*t) : 0 <= t <= t_max},

with prefix products P_k = s_1*...*s_k and t_max = 1/max(1, max_k P_k),
the largest parameter keeping every coordinate inside [0, 1]. Clipping to
the unit cube therefore never needs a separate intersection computation.

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, FormatError, RangeError, ResourceError, ShapeError
from .scalars import format_scalar, parse_scalar

DEFAULT_ENUM_BUDGET = 3**12

# Below this cap a word family is flagged as degenerating: its prefix
# products have grown so large that the leg is collapsing toward the top.
DEGENERACY_THRESHOLD = Fraction(1, 2**20)


@dataclass(frozen=True)
class RelationSpec:
    """Ordered set of distinct positive slopes denoting a union of clipped lines."""

    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(Fraction(s) for s in self.slopes))
        if not self.slopes:
            raise DomainError("a relation needs at least one slope")
        for s in self.slopes:
            if s <= 0:
                raise DomainError(f"slopes must be positive, got {format_scalar(s)}")
        if len(set(self.slopes)) != len(self.slopes):
            raise DomainError("slopes must be pairwise distinct")


def fan_relation(r, rho) -> RelationSpec:
    """Three-slope relation {r, 1, rho}: both scaling lines plus the diagonal."""
    return RelationSpec((Fraction(r), Fraction(1), Fraction(rho)))


def cantor_relation(r) -> RelationSpec:
    """Two-slope relation {r, 1}: one scaling line plus the diagonal.

    For r < 1 every leg of its product has t_max = 1; the product is a
    Cantor fan at every finite depth.
    """
    return RelationSpec((Fraction(r), Fraction(1)))


def line_pair_relation(r, rho) -> RelationSpec:
    """Two-slope relation {r, rho} without the diagonal."""
    return RelationSpec((Fraction(r), Fraction(rho)))


@dataclass(frozen=True)
class Word:
    """Finite sequence of slopes indexing one leg."""

    symbols: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(Fraction(s) for s in self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Leg:
    """One leg: a word, its prefix products (P_1, ..., P_n) and the cap t_max.

    The empty product P_0 = 1 is implicit; the depth-n point at parameter t
    is (t, P_1*t, ..., P_n*t), inside [0,1]^(n+1) exactly when t <= t_max.
    """

    word: Word
    prefix_products: tuple[Fraction, ...]
    t_max: Fraction

    @property
    def depth(self) -> int:
        return len(self.word.symbols)


@dataclass(frozen=True)
class PointPrefix:
    """Finite coordinate tuple (x_0, ..., x_n) with every entry in [0, 1]."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        for c in self.coords:
            if not 0 <= c <= 1:
                raise DomainError(f"coordinate {format_scalar(c)} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class FanApprox:
    """A depth-n approximation: a relation and a collection of its legs."""

    relation: RelationSpec
    depth: int
    legs: tuple[Leg, ...]

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError("depth must be non-negative")
        for leg in self.legs:
            if leg.depth != self.depth:
                raise ShapeError(
                    f"leg of depth {leg.depth} in a depth-{self.depth} approximation"
                )


def membership(point: PointPrefix, relation: RelationSpec) -> bool:
    """True when every consecutive coordinate pair lies on one of the relation's lines.

    (0, 0) pairs lie on every line through the origin and are accepted
    without any division.
    """
    coords = point.coords
    for x, y in zip(coords, coords[1:]):
        if x == 0:
            if y != 0:
                return False
        elif y / x not in relation.slopes:
            return False
    return True


def build_leg(word: Word) -> Leg:
    """Compute a word's prefix products and parameter cap exactly."""
    products = []
    acc = Fraction(1)
    for s in word.symbols:
        if s <= 0:
            raise DomainError(f"word symbols must be positive, got {format_scalar(s)}")
        acc = acc * s
        products.append(acc)
    cap = max(products) if products else Fraction(1)
    t_max = 1 / cap if cap > 1 else Fraction(1)
    return Leg(word, tuple(products), t_max)


def leg_point(leg: Leg, t) -> PointPrefix:
    """The leg's point at parameter t: (t, P_1*t, ..., P_n*t)."""
    t = Fraction(t)
    if not 0 <= t <= leg.t_max:
        raise RangeError(
            f"parameter {format_scalar(t)} outside [0, {format_scalar(leg.t_max)}]; "
            "the point would leave the unit cube"
        )
    return PointPrefix((t,) + tuple(p * t for p in leg.prefix_products))


def enumerate_legs(
    relation: RelationSpec, depth: int, budget: int = DEFAULT_ENUM_BUDGET
) -> FanApprox:
    """All legs of the given depth, deduplicated by prefix-product sequence.

    Words are generated in lexicographic slope order, so the result is
    deterministic. Raises ResourceError when |slopes|^depth exceeds the
    budget; use sample_legs for such depths.
    """
    if depth < 0:
        raise DomainError("depth must be non-negative")
    total = len(relation.slopes) ** depth
    if total > budget:
        raise ResourceError(
            f"{len(relation.slopes)}^{depth} = {total} legs exceeds the budget "
            f"{budget}; use sampling instead (sample_legs / --sample)"
        )
    legs = []
    seen = set()
    for symbols in itertools.product(relation.slopes, repeat=depth):
        leg = build_leg(Word(symbols))
        if leg.prefix_products in seen:
            continue
        seen.add(leg.prefix_products)
        legs.append(leg)
    return FanApprox(relation, depth, tuple(legs))


def sample_legs(relation: RelationSpec, depth: int, count: int, seed: int) -> tuple[Leg, ...]:
    """`count` words drawn uniformly i.i.d. over slopes^depth, deterministic under seed."""
    if depth < 0:
        raise DomainError("depth must be non-negative")
    rng = random.Random(seed)
    n_slopes = len(relation.slopes)
    legs = []
    for _ in range(count):
        symbols = tuple(relation.slopes[rng.randrange(n_slopes)] for _ in range(depth))
        legs.append(build_leg(Word(symbols)))
    return tuple(legs)


def truncated_metric(p: PointPrefix, q: PointPrefix) -> tuple[Fraction, Fraction]:
    """Weighted-sum distance on equal-length prefixes plus its exact dyadic tail bound.

    Returns (value, tail) with

        value = sum_k 2^-(k+1) * |p_k - q_k|,   tail = 2^-len,

    so any infinite extensions of p and q (coordinates in [0,1]) are at a
    distance within [value, value + tail].
    """
    if len(p.coords) != len(q.coords):
        raise ShapeError(
            f"prefix lengths differ: {len(p.coords)} vs {len(q.coords)}"
        )
    value = Fraction(0)
    for k, (a, b) in enumerate(zip(p.coords, q.coords)):
        value += abs(a - b) / (1 << (k + 1))
    tail = Fraction(1, 1 << len(p.coords))
    return value, tail


def is_degenerating(leg: Leg, threshold: Fraction = DEGENERACY_THRESHOLD) -> bool:
    """Flag legs whose cap has dropped below the degeneracy threshold.

    True degeneracy (prefix products unbounded along the infinite word) is
    not decidable from a finite prefix; this is a reported approximation.
    """
    return leg.t_max < threshold


def fan_to_dict(fan: FanApprox) -> dict:
    """JSON-ready form of a fan: slopes, depth and per-leg word plus t_max."""
    return {
        "relation": {"slopes": [format_scalar(s) for s in fan.relation.slopes]},
        "depth": fan.depth,
        "legs": [
            {
                "word": [format_scalar(s) for s in leg.word.symbols],
                "t_max": format_scalar(leg.t_max),
            }
            for leg in fan.legs
        ],
    }


def fan_from_dict(data: dict) -> FanApprox:
    """Rebuild a fan from its JSON form, recomputing and verifying each leg.

    Prefix products are recomputed from the stored words; a stored t_max
    that disagrees with the recomputed value is a FormatError.
    """
    try:
        slopes = tuple(parse_scalar(s) for s in data["relation"]["slopes"])
        depth = int(data["depth"])
        raw_legs = data["legs"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed leg file: {exc}") from exc
    relation = RelationSpec(slopes)
    legs = []
    for raw in raw_legs:
        symbols = tuple(parse_scalar(s) for s in raw["word"])
        if len(symbols) != depth:
            raise FormatError(
                f"word {raw['word']} has length {len(symbols)}, expected depth {depth}"
            )
        for s in symbols:
            if s not in relation.slopes:
                raise FormatError(
                    f"symbol {format_scalar(s)} is not a slope of the relation"
                )
        leg = build_leg(Word(symbols))
        stored = parse_scalar(raw["t_max"])
        if stored != leg.t_max:
            raise FormatError(
                f"stored t_max {raw['t_max']} disagrees with recomputed "
                f"{format_scalar(leg.t_max)} for word {raw['word']}"
            )
        legs.append(leg)
    return FanApprox(relation, depth, tuple(legs))


def save_fan(fan: FanApprox, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(fan_to_dict(fan), handle, indent=2)
        handle.write("\n")


def load_fan(path) -> FanApprox:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {path}: {exc}") from exc
    return fan_from_dict(data)
