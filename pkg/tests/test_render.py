"""SVG rendering: determinism, angle injectivity, document validity."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from lelekfan import (
    ANGLE_CANTOR,
    ANGLE_UNIFORM,
    DomainError,
    RenderConfig,
    angle_fractions,
    cantor_relation,
    enumerate_legs,
    fan_relation,
    render_fan,
)

F = fan_relation(Fraction(1, 2), Fraction(3))
G = cantor_relation(Fraction(1, 2))


def test_depth_zero_single_stroke():
    svg = render_fan(enumerate_legs(F, 0))
    assert svg.count("<line ") == 1


def test_g_fan_stroke_count_and_separation():
    fan = enumerate_legs(G, 5)
    svg = render_fan(fan, RenderConfig(angle_map=ANGLE_CANTOR))
    assert svg.count("<line ") == 32
    fractions = sorted(x for _, x in angle_fractions(fan, ANGLE_CANTOR))
    # two middle-thirds bundles: nothing falls in the removed middle interval
    assert all(x <= Fraction(1, 3) or x >= Fraction(2, 3) for x in fractions)
    assert sum(1 for x in fractions if x <= Fraction(1, 3)) == 16


def test_angle_injectivity_both_maps():
    fan = enumerate_legs(F, 5)
    for angle_map in (ANGLE_CANTOR, ANGLE_UNIFORM):
        values = [x for _, x in angle_fractions(fan, angle_map)]
        assert len(set(values)) == len(values) == 3**5


def test_render_is_deterministic():
    fan = enumerate_legs(F, 4)
    config = RenderConfig(angle_map=ANGLE_UNIFORM, sweep=72.0)
    assert render_fan(fan, config) == render_fan(fan, config)


def test_render_is_valid_svg():
    svg = render_fan(enumerate_legs(F, 3))
    root = ET.fromstring(svg)
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert root.get("version") == "1.1"
    lines = root.findall(".//{http://www.w3.org/2000/svg}line")
    assert len(lines) == 27


def test_render_length_encodes_t_max():
    fan = enumerate_legs(F, 1)  # caps 1, 1, 1/3
    svg = render_fan(fan)
    root = ET.fromstring(svg)
    lines = root.findall(".//{http://www.w3.org/2000/svg}line")
    apex_y = float(lines[0].get("y1"))

    def length(line):
        dx = float(line.get("x2")) - float(line.get("x1"))
        dy = float(line.get("y2")) - apex_y
        return (dx * dx + dy * dy) ** 0.5

    lengths = sorted(length(line) for line in lines)
    assert lengths[0] == pytest.approx(lengths[2] / 3, rel=1e-6)
    assert lengths[1] == pytest.approx(lengths[2], rel=1e-6)


def test_config_validation():
    with pytest.raises(DomainError):
        RenderConfig(sweep=0.0)
    with pytest.raises(DomainError):
        RenderConfig(sweep=180.0)
    with pytest.raises(DomainError):
        RenderConfig(angle_map="spiral")
    with pytest.raises(DomainError):
        RenderConfig(width=0)
    with pytest.raises(DomainError):
        render_fan(enumerate_legs(F, 2), RenderConfig(stroke_width=-1.0))


def test_duplicate_sampled_legs_render_once():
    from lelekfan import FanApprox, sample_legs

    legs = sample_legs(F, 2, 40, seed=2)
    fan = FanApprox(F, 2, legs)
    svg = render_fan(fan)
    distinct_words = len({leg.word.symbols for leg in legs})
    assert svg.count("<line ") == distinct_words
