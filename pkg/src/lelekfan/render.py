"""Deterministic SVG pictures of finite fan approximations.

Legs are drawn as straight planar strokes from a common apex, fanning
downward; the ambient object lives in the Hilbert cube, so the picture is
a schematic in which the angle encodes the word and the radial length
encodes t_max. Angles are computed as exact rationals and converted to
floats only when coordinates are written, so identical input yields
byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .mahavier import FanApprox, Leg

ANGLE_CANTOR = "cantor"
ANGLE_UNIFORM = "uniform"


@dataclass(frozen=True)
class RenderConfig:
    width: int = 800
    height: int = 600
    angle_map: str = ANGLE_CANTOR
    apex: tuple[float, float] | None = None  # defaults to top-center
    sweep: float = 60.0  # degrees, inside (0, 180)
    stroke_width: float = 1.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise DomainError("width and height must be positive")
        if not 0 < self.sweep < 180:
            raise DomainError(f"sweep must lie in (0, 180) degrees, got {self.sweep}")
        if self.angle_map not in (ANGLE_CANTOR, ANGLE_UNIFORM):
            raise DomainError(f"unknown angle map: {self.angle_map!r}")
        if self.stroke_width <= 0:
            raise DomainError("stroke width must be positive")


def _digit_map(n_slopes: int) -> tuple[tuple[int, ...], int]:
    # Two symbols land on middle-thirds digits {0, 2}; three use 0/1/2.
    if n_slopes == 2:
        return (0, 2), 3
    return tuple(range(n_slopes)), max(3, n_slopes)


def angle_fractions(fan: FanApprox, angle_map: str) -> list[tuple[Leg, Fraction]]:
    """Exact angular position in [0, 1] per distinct word, before any float conversion.

    Cantor mapping reads the word as base-`base` digits of a middle-thirds
    coordinate; uniform mapping spreads the sorted words evenly. Distinct
    words receive distinct fractions under both maps.
    """
    index = {s: i for i, s in enumerate(fan.relation.slopes)}
    digits, base = _digit_map(len(fan.relation.slopes))

    unique: dict[tuple, Leg] = {}
    for leg in fan.legs:
        key = tuple(index[s] for s in leg.word.symbols)
        unique.setdefault(key, leg)
    ordered = sorted(unique.items())

    pairs = []
    if angle_map == ANGLE_CANTOR:
        for key, leg in ordered:
            if not key:
                pairs.append((leg, Fraction(1, 2)))
                continue
            x = Fraction(0)
            scale = Fraction(1)
            for idx in key:
                scale /= base
                x += digits[idx] * scale
            pairs.append((leg, x))
    elif angle_map == ANGLE_UNIFORM:
        count = len(ordered)
        for rank, (_, leg) in enumerate(ordered):
            x = Fraction(rank, count - 1) if count > 1 else Fraction(1, 2)
            pairs.append((leg, x))
    else:
        raise DomainError(f"unknown angle map: {angle_map!r}")
    return pairs


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def render_fan(fan: FanApprox, config: RenderConfig = RenderConfig()) -> str:
    """Render a fan as an SVG 1.1 document, byte-deterministic for fixed inputs."""
    if not fan.legs:
        raise DomainError("cannot render an empty fan")
    width, height = config.width, config.height
    margin = 10.0
    apex_x, apex_y = config.apex if config.apex is not None else (width / 2.0, margin + 10.0)
    half_sweep = math.radians(config.sweep) / 2.0
    vertical = height - apex_y - margin
    horizontal = (min(apex_x, width - apex_x) - margin) / math.sin(half_sweep)
    radius = max(min(vertical, horizontal), 1.0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<g stroke="black" stroke-width="{config.stroke_width:g}" stroke-linecap="round">',
    ]
    for leg, x_frac in angle_fractions(fan, config.angle_map):
        phi = (float(x_frac) - 0.5) * math.radians(config.sweep)
        length = radius * float(leg.t_max)
        end_x = apex_x + length * math.sin(phi)
        end_y = apex_y + length * math.cos(phi)
        parts.append(
            f'<line x1="{_fmt(apex_x)}" y1="{_fmt(apex_y)}" '
            f'x2="{_fmt(end_x)}" y2="{_fmt(end_y)}"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    parts.append("")
    return "\n".join(parts)
