"""Synthetic scatter-figure generator with known ground truth.

Produces self-contained SVG figures in the same idiom the extractor
expects (left/bottom axis lines, outward ticks, numeric label ladders,
circle markers) plus the true data values, so round-trip accuracy can be
scored mechanically.  Axis styles cover the documented failure modes:
reversed axes, a log-spaced ladder, and a bitmap plot body.
"""

from __future__ import annotations

import base64
import math
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class AxisStyle(Enum):
    STANDARD = "standard"
    REVERSED_X = "reversed_x"
    REVERSED_Y = "reversed_y"
    LOG_X = "log_x"
    RASTER_BODY = "raster_body"


@dataclass(frozen=True)
class SyntheticSpec:
    n_points: int = 10
    x_range: tuple[float, float] = (0.0, 10.0)
    y_range: tuple[float, float] = (0.0, 1.0)
    n_ticks_x: int = 5
    n_ticks_y: int = 5
    marker_radius: float = 3.0
    canvas: tuple[float, float] = (600.0, 450.0)
    axis_style: AxisStyle = AxisStyle.STANDARD
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.n_ticks_x < 2 or self.n_ticks_y < 2:
            raise ValueError("tick counts must be >= 2")
        if self.x_range[0] >= self.x_range[1] or self.y_range[0] >= self.y_range[1]:
            raise ValueError("ranges must satisfy min < max")
        if self.marker_radius <= 0:
            raise ValueError("marker_radius must be > 0")


MARGIN_LEFT = 60.0
MARGIN_RIGHT = 25.0
MARGIN_TOP = 25.0
MARGIN_BOTTOM = 50.0
TICK_LENGTH = 5.0
FONT_SIZE = 10.0

# 1x1 grey PNG for raster plot bodies
_PIXEL_PNG = base64.b64encode(bytes.fromhex(
    "89504e470d0a1a0a0000000d49484452000000010000000108020000009077"
    "53de0000000c4944415408d763a8a9a90700033d01b10ef057240000000049"
    "454e44ae426082")).decode("ascii")


def _fmt(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


def _label(v: float) -> str:
    return f"{float(f'{v:.4g}'):.10g}"


def generate_scatter_svg(spec: SyntheticSpec) -> tuple[bytes, list[tuple[float, float]]]:
    """Render a synthetic figure; returns (svg bytes, true data points).

    Deterministic in the seed.  Tick labels carry at most 4 significant
    digits; each tick mark sits at the device position of its rounded
    label value so the figure is exactly self-consistent.
    """
    rng = random.Random(spec.seed)
    width, height = spec.canvas
    ax = MARGIN_LEFT
    ay_bottom = height - MARGIN_BOTTOM
    ay_top = MARGIN_TOP
    ax_right = width - MARGIN_RIGHT
    plot_w = ax_right - ax
    plot_h = ay_bottom - ay_top

    xmin, xmax = spec.x_range
    ymin, ymax = spec.y_range
    style = spec.axis_style

    if style is AxisStyle.LOG_X:
        decades = max(2, spec.n_ticks_x - 1)

        def dev_x(v: float) -> float:
            return ax + math.log10(v) / decades * plot_w
    elif style is AxisStyle.REVERSED_X:
        def dev_x(v: float) -> float:
            return ax + (xmax - v) / (xmax - xmin) * plot_w
    else:
        def dev_x(v: float) -> float:
            return ax + (v - xmin) / (xmax - xmin) * plot_w

    if style is AxisStyle.REVERSED_Y:
        def dev_y(v: float) -> float:
            return ay_bottom - (ymax - v) / (ymax - ymin) * plot_h
    else:
        def dev_y(v: float) -> float:
            return ay_bottom - (v - ymin) / (ymax - ymin) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<text x="{_fmt(width / 2 - 60)}" y="15" font-size="12">'
        f'Synthetic scatter (seed {spec.seed})</text>',
        # axes
        f'<line x1="{_fmt(ax)}" y1="{_fmt(ay_bottom)}" '
        f'x2="{_fmt(ax)}" y2="{_fmt(ay_top)}" stroke="black"/>',
        f'<line x1="{_fmt(ax)}" y1="{_fmt(ay_bottom)}" '
        f'x2="{_fmt(ax_right)}" y2="{_fmt(ay_bottom)}" stroke="black"/>',
    ]

    # x ticks and labels
    if style is AxisStyle.LOG_X:
        x_tick_values = [10.0 ** i for i in range(max(3, spec.n_ticks_x))]
    else:
        x_tick_values = [xmin + i * (xmax - xmin) / (spec.n_ticks_x - 1)
                         for i in range(spec.n_ticks_x)]
    for v in x_tick_values:
        label = _label(v)
        tx = dev_x(float(label)) if style is not AxisStyle.LOG_X else dev_x(v)
        parts.append(
            f'<line x1="{_fmt(tx)}" y1="{_fmt(ay_bottom)}" '
            f'x2="{_fmt(tx)}" y2="{_fmt(ay_bottom + TICK_LENGTH)}" stroke="black"/>')
        parts.append(
            f'<text x="{_fmt(tx - 2)}" y="{_fmt(ay_bottom + 16)}" '
            f'font-size="{_fmt(FONT_SIZE)}">{label}</text>')

    # y ticks and labels
    y_tick_values = [ymin + i * (ymax - ymin) / (spec.n_ticks_y - 1)
                     for i in range(spec.n_ticks_y)]
    for v in y_tick_values:
        label = _label(v)
        ty = dev_y(float(label))
        parts.append(
            f'<line x1="{_fmt(ax - TICK_LENGTH)}" y1="{_fmt(ty)}" '
            f'x2="{_fmt(ax)}" y2="{_fmt(ty)}" stroke="black"/>')
        parts.append(
            f'<text x="{_fmt(ax - 30)}" y="{_fmt(ty + 3)}" '
            f'font-size="{_fmt(FONT_SIZE)}">{label}</text>')

    # data
    truth: list[tuple[float, float]] = []
    if style is AxisStyle.LOG_X:
        decades = max(2, spec.n_ticks_x - 1)
        for _ in range(spec.n_points):
            x = 10.0 ** rng.uniform(0.0, decades)
            y = rng.uniform(ymin, ymax)
            truth.append((x, y))
    else:
        for _ in range(spec.n_points):
            truth.append((rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)))

    if style is AxisStyle.RASTER_BODY:
        parts.append(
            f'<image x="{_fmt(ax + 1)}" y="{_fmt(ay_top + 1)}" '
            f'width="{_fmt(plot_w - 2)}" height="{_fmt(plot_h - 2)}" '
            f'xlink:href="data:image/png;base64,{_PIXEL_PNG}"/>')
    else:
        for i, (x, y) in enumerate(truth):
            parts.append(
                f'<circle id="pt{i}" cx="{dev_x(x):.6f}" cy="{dev_y(y):.6f}" '
                f'r="{_fmt(spec.marker_radius)}" fill-opacity="0" '
                f'stroke="#cf1d35" stroke-width="0.8"/>')

    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8"), truth


def write_truth_csv(truth: list[tuple[float, float]], destination: str | Path) -> None:
    lines = ["x,y"] + [f"{x!r},{y!r}" for x, y in truth]
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8",
                                 newline="\n")


def build_synthetic_project(root: str | Path, specs: list[SyntheticSpec]) -> Path:
    """Write a corpus-layout project of synthetic figures with truth files.

    Each spec becomes one tree ``fig-<seed>`` holding
    ``figures/figure1/figure.svg`` and ``truth.csv`` beside it.
    """
    root = Path(root)
    for spec in specs:
        fig_dir = root / f"fig-{spec.seed:04d}" / "figures" / "figure1"
        fig_dir.mkdir(parents=True, exist_ok=True)
        svg, truth = generate_scatter_svg(spec)
        (fig_dir / "figure.svg").write_bytes(svg)
        write_truth_csv(truth, fig_dir / "truth.csv")
    return root
